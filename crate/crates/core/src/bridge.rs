//! Translation between algebra structures `g: K f → X` and filling
//! operators on `f`.

use crate::error::{Error, Result};
use crate::free::{
    detour_filling, formal_filling, kmap_value, make_free_fibration, pi, pi_value, FreeFibration,
};
use crate::kan::{check_uniformity, sample_box, FibrationStructure, FillingOperator, OpenBox};
use crate::nominal::{extend_over_abstraction, NameSet};
use crate::report::{witness, LawReport};
use crate::sample::{self, derive_seed, GenConfig};
use crate::value::{KTerm, Value};
use crate::zsub::{check_morphism, ZMorphism};

/// A map `g: K f → X`. The unit and codomain laws make it a pointed
/// algebra; the multiplication law makes it an algebra for the monad.
#[derive(Clone, Debug)]
pub struct AlgebraStructure {
    pub free: FreeFibration,
    pub g: ZMorphism,
}

impl AlgebraStructure {
    pub fn new(free: FreeFibration, g: ZMorphism) -> Self {
        AlgebraStructure { free, g }
    }

    pub fn fibration(&self) -> &ZMorphism {
        &self.free.f
    }
}

/// The filling operator `fill(u, y) = g(formal filler of (λ∘u, y))`.
///
/// The unit and codomain laws are spot-checked on `check_iters` samples
/// first.
pub fn algebra_to_filling(
    alg: &AlgebraStructure,
    check_iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> Result<FibrationStructure> {
    let r = check_pointed_laws(alg, check_iters, seed, cfg);
    if !r.is_clean() {
        return Err(Error::ContractViolation(format!(
            "not a pointed algebra: {}",
            r.failed_laws().join(", ")
        )));
    }
    let g = alg.g.map_fn();
    Ok(FibrationStructure::new(
        alg.fibration().clone(),
        FillingOperator::new(
            format!("from-algebra({})", alg.g.label()),
            move |bx: &OpenBox| {
                g(&Value::filler(
                    bx.map(|u| Value::base(u.clone()), Value::clone),
                ))
            },
        ),
    ))
}

/// The algebra obtained by filling recursively: units go to their
/// argument, a formal filler to the filler of the box of images, and a
/// formal composite to the missing face of that filler.
pub fn filling_to_algebra(fs: &FibrationStructure) -> AlgebraStructure {
    let free = make_free_fibration(&fs.morphism);
    let filling = fs.filling.clone();
    let g = ZMorphism::new(
        format!("alg({})", filling.label()),
        free.object.clone(),
        fs.morphism.source().clone(),
        move |t| algebra_value(&filling, t),
    );
    AlgebraStructure { free, g }
}

fn algebra_value(fill: &FillingOperator, t: &Value) -> Value {
    match t.as_term() {
        Some(KTerm::Base(x)) => x.clone(),
        Some(KTerm::Filler(bx)) => fill.fill(&bx.map(|u| algebra_value(fill, u), Value::clone)),
        Some(KTerm::Composite(abs)) => extend_over_abstraction(abs, &NameSet::new(), |c, bx| {
            fill.fill(&bx.map(|u| algebra_value(fill, u), Value::clone))
                .subst(c, bx.missing_bit())
        })
        .expect("the bound name is substituted away"),
        None => panic!("not a term: {t}"),
    }
}

/// `π_f` as an algebra on `ρ_f`.
pub fn canonical_algebra(kf: &FreeFibration) -> AlgebraStructure {
    let kr = kf.over_projection();
    let g = pi(&kr, kf);
    AlgebraStructure { free: kr, g }
}

/// A pointed algebra on `ρ_f` that fills boxes of units formally and all
/// other boxes by detour. It satisfies the unit and codomain laws but not
/// the multiplication law.
pub fn mixed_algebra(kf: &FreeFibration) -> AlgebraStructure {
    let kr = kf.over_projection();
    let formal = formal_filling(kf).filling;
    let detour = detour_filling(kf).filling;
    let g = ZMorphism::new("mixed", kr.object.clone(), kf.object.clone(), move |t| {
        mixed_value(&formal, &detour, t)
    });
    AlgebraStructure { free: kr, g }
}

fn mixed_value(formal: &FillingOperator, detour: &FillingOperator, t: &Value) -> Value {
    let pick = |bx: &OpenBox| {
        let units = bx.faces().values().all(|u| u.as_base().is_some());
        let images = bx.map(|u| mixed_value(formal, detour, u), Value::clone);
        if units {
            formal.fill(&images)
        } else {
            detour.fill(&images)
        }
    };
    match t.as_term() {
        Some(KTerm::Base(x)) => x.clone(),
        Some(KTerm::Filler(bx)) => pick(bx),
        Some(KTerm::Composite(abs)) => extend_over_abstraction(abs, &NameSet::new(), |c, bx| {
            pick(bx).subst(c, bx.missing_bit())
        })
        .expect("the bound name is substituted away"),
        None => panic!("not a term: {t}"),
    }
}

fn check_pointed_laws(
    alg: &AlgebraStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let f = alg.fibration();
    let mut report = LawReport::new(format!("algebra:{}", alg.g.label()), seed, iters);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let x = f.source().sample(&mut rng, cfg, cfg.rank);
        let gx = alg.g.apply(&Value::base(x.clone()));
        report.check("algebra.unit", f.source().equal(&gx, &x), || {
            witness(&[("x", &x), ("g(λx)", &gx)])
        });
        let t = alg.free.sample(&mut rng, cfg);
        let lhs = f.apply(&alg.g.apply(&t));
        let rhs = alg.free.rho.apply(&t);
        report.check("algebra.codomain", f.target().equal(&lhs, &rhs), || {
            witness(&[("t", &t), ("f(g t)", &lhs), ("ρ t", &rhs)])
        });
    }
    report
}

/// Unit, codomain and multiplication laws, and the morphism checks for `g`.
pub fn check_algebra_laws(
    alg: &AlgebraStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let mut report = check_pointed_laws(alg, iters, seed, cfg);
    report.merge(check_morphism(&alg.g, iters, derive_seed(seed, "g"), cfg));
    report.merge(check_multiplication(
        alg,
        iters,
        derive_seed(seed, "mult"),
        cfg,
    ));
    report
}

fn check_multiplication(
    alg: &AlgebraStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let kr = alg.free.over_projection();
    let g = alg.g.map_fn();
    let id = |y: &Value| y.clone();
    let mut report = LawReport::new("multiplication", seed, iters);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let tt = kr.sample(&mut rng, cfg);
        let lhs = g(&kmap_value(&*g, &id, &tt));
        let rhs = g(&pi_value(&tt));
        report.check(
            "algebra.multiplication",
            alg.fibration().source().equal(&lhs, &rhs),
            || witness(&[("T", &tt), ("g(K(g,1)T)", &lhs), ("g(πT)", &rhs)]),
        );
    }
    report
}

/// Filling → algebra → filling: the rebuilt operator agrees with `fs` on
/// sampled boxes, and both pass the uniformity checks.
pub fn roundtrip_from_filling(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let mut report = LawReport::new(format!("roundtrip:{}", fs.filling.label()), seed, iters);
    let alg = filling_to_algebra(fs);
    report.merge(check_algebra_laws(
        &alg,
        iters,
        derive_seed(seed, "algebra"),
        cfg,
    ));
    let rebuilt = match algebra_to_filling(&alg, iters.min(50), derive_seed(seed, "pointed"), cfg) {
        Ok(r) => r,
        Err(e) => {
            report.fail("roundtrip.rebuild", e.to_string());
            return report;
        }
    };
    report.merge(check_uniformity(
        &rebuilt,
        iters,
        derive_seed(seed, "uniform"),
        cfg,
    ));
    let mut rng = sample::rng(seed);
    let src = fs.morphism.source();
    for _ in 0..iters {
        let bx = sample_box(&fs.morphism, &mut rng, cfg, cfg.rank);
        let a = fs.fill(&bx);
        let b = rebuilt.fill(&bx);
        report.check("roundtrip.filling", src.equal(&a, &b), || {
            witness(&[
                ("box", &Value::filler(bx.clone())),
                ("original", &a),
                ("rebuilt", &b),
            ])
        });
    }
    report
}

/// Algebra → filling → algebra. The comparison is only meaningful for
/// monad algebras; a failing multiplication law is reported under
/// `roundtrip.input-is-monad-algebra` and the comparison is skipped.
pub fn roundtrip_from_algebra(
    alg: &AlgebraStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let mut report = LawReport::new(format!("roundtrip:{}", alg.g.label()), seed, iters);
    let mult = check_multiplication(alg, iters, derive_seed(seed, "mult"), cfg);
    let monad = mult.is_clean();
    report.check("roundtrip.input-is-monad-algebra", monad, || {
        mult.failures
            .first()
            .map(|f| f.counterexample.clone())
            .unwrap_or_default()
    });
    if !monad {
        return report;
    }
    let fs = match algebra_to_filling(alg, iters.min(50), derive_seed(seed, "pointed"), cfg) {
        Ok(fs) => fs,
        Err(e) => {
            report.fail("roundtrip.rebuild", e.to_string());
            return report;
        }
    };
    report.merge(check_uniformity(
        &fs,
        iters,
        derive_seed(seed, "uniform"),
        cfg,
    ));
    let back = filling_to_algebra(&fs);
    let mut rng = sample::rng(seed);
    let src = alg.fibration().source();
    for _ in 0..iters {
        let t = alg.free.sample(&mut rng, cfg);
        let a = alg.g.apply(&t);
        let b = back.g.apply(&t);
        report.check("roundtrip.algebra", src.equal(&a, &b), || {
            witness(&[("t", &t), ("g t", &a), ("g' t", &b)])
        });
    }
    report
}

/// From a uniform filling: build the monad algebra, check all of its laws,
/// forget to the pointed algebra and rebuild a filling that agrees with the
/// original.
pub fn check_fibration_equivalences(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let mut report = check_uniformity(fs, iters, derive_seed(seed, "input"), cfg);
    report.merge(roundtrip_from_filling(fs, iters, seed, cfg));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kan::identity_fibration;
    use crate::zsub::{cube_object, terminal_object};

    fn kf() -> FreeFibration {
        make_free_fibration(&ZMorphism::identity(&terminal_object()))
    }

    fn cfg() -> GenConfig {
        GenConfig::default()
    }

    #[test]
    fn canonical_algebra_is_a_monad_algebra() {
        let alg = canonical_algebra(&kf());
        let r = check_algebra_laws(&alg, 100, 1, &cfg());
        assert!(r.is_clean(), "{}", r.to_text());
        let r = roundtrip_from_algebra(&alg, 100, 1, &cfg());
        assert!(r.is_clean(), "{}", r.to_text());
    }

    #[test]
    fn canonical_algebra_fills_formally() {
        let k = kf();
        let alg = canonical_algebra(&k);
        let fs = algebra_to_filling(&alg, 20, 1, &cfg()).unwrap();
        let mut rng = sample::rng(4);
        for _ in 0..50 {
            let bx = sample_box(&k.rho, &mut rng, &cfg(), 2);
            assert_eq!(fs.fill(&bx), Value::filler(bx));
        }
    }

    #[test]
    fn filling_round_trips() {
        let k = kf();
        for fs in [
            formal_filling(&k),
            detour_filling(&k),
            identity_fibration(&cube_object(&NameSet::first(2))),
        ] {
            let r = roundtrip_from_filling(&fs, 60, 2, &cfg());
            assert!(r.is_clean(), "{}", r.to_text());
        }
    }

    #[test]
    fn mixed_algebra_is_flagged() {
        let alg = mixed_algebra(&kf());
        assert!(algebra_to_filling(&alg, 50, 1, &cfg()).is_ok());
        let r = roundtrip_from_algebra(&alg, 200, 1, &cfg());
        assert!(
            r.failed("roundtrip.input-is-monad-algebra"),
            "{}",
            r.to_text()
        );
    }

    #[test]
    fn algebra_maps_units_to_their_argument() {
        let k = kf();
        let alg = filling_to_algebra(&detour_filling(&k));
        let t = Value::base(Value::unit());
        assert_eq!(alg.g.apply(&Value::base(t.clone())), t);
    }
}
