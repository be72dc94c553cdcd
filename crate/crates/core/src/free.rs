//! The free fibration `K f` on a morphism `f: X → Y`.
//!
//! Elements are the units `λ(x)` for `x ∈ X`, formal fillers of open boxes
//! of elements, and formal composites (the missing face of such a box, with
//! the box direction bound). Substitution into a formal filler in its open
//! direction yields the composite; substitution into any other face
//! direction yields that face.

use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::kan::{
    box_of_faces, validate_box, BoxKind, FibrationStructure, FillingOperator, OpenBox,
};
use crate::mutation::{self, Mutation};
use crate::nominal::{extend_over_abstraction, fresh_name, Name, NameSet, Nominal, Perm};
use crate::report::{witness, LawReport};
use crate::sample::{self, derive_seed, GenConfig, Rng};
use crate::value::{KTerm, Value};
use crate::zsub::{
    check_morphism, check_zsub_axioms, structural_object, with_sampler, Bit, Carrier, Sampler,
    ZMorphism, ZObject,
};

/// Substitution `t(a := i)` on a term whose node is `t`.
pub(crate) fn subst_term(whole: &Value, t: &KTerm, a: Name, i: Bit) -> Value {
    match t {
        KTerm::Base(x) => {
            let y = x.subst(a, i);
            if y.ptr_eq(x) {
                whole.clone()
            } else {
                Value::base(y)
            }
        }
        KTerm::Filler(bx) => {
            if let Some(face) = bx.face(a, i) {
                return face.clone();
            }
            if a == bx.dir() {
                return Value::composite(bx.clone());
            }
            let (moved, changed) = bx.map_sharing(|u| u.subst(a, i), |y| y.subst(a, i));
            if changed {
                Value::filler(moved)
            } else {
                whole.clone()
            }
        }
        KTerm::Composite(abs) => {
            let bound = abs.bound();
            if a == bound && !mutation::is_active(Mutation::CompositeGuard) {
                return whole.clone();
            }
            let bx = abs.body();
            if bx.names().contains(a) {
                return match bx.face(a, i) {
                    Some(face) => face.subst(bound, bx.missing_bit()),
                    None => whole.clone(),
                };
            }
            let (moved, changed) = bx.map_sharing(|u| u.subst(a, i), |y| y.subst(a, i));
            if changed {
                Value::composite(moved)
            } else {
                whole.clone()
            }
        }
    }
}

/// `ρ_f(t)`.
pub fn rho_value(f: &dyn Fn(&Value) -> Value, t: &Value) -> Value {
    match t.as_term() {
        Some(KTerm::Base(x)) => f(x),
        Some(KTerm::Filler(bx)) => bx.base().clone(),
        Some(KTerm::Composite(abs)) => extend_over_abstraction(abs, &NameSet::new(), |c, bx| {
            bx.base().subst(c, bx.missing_bit())
        })
        .expect("substitution removes the bound name"),
        None => panic!("not a term: {t}"),
    }
}

/// Whether `t` is a well-formed element of `K f`.
pub fn well_formed(f: &ZMorphism, t: &Value) -> bool {
    match t.as_term() {
        None => false,
        Some(KTerm::Base(x)) => f.source().contains(x),
        Some(KTerm::Filler(bx)) => box_well_formed(f, bx),
        Some(KTerm::Composite(abs)) => box_well_formed(f, abs.body()),
    }
}

fn box_well_formed(f: &ZMorphism, bx: &OpenBox) -> bool {
    f.target().contains(bx.base())
        && bx.faces().values().all(|u| well_formed(f, u))
        && validate_box(
            bx,
            structural_object(),
            &|u| rho_value(&|x| f.apply(x), u),
            f.target(),
        )
        .is_ok()
}

/// Checks a term against `K f`, reporting the first defect found.
pub fn validate_term(f: &ZMorphism, t: &Value) -> Result<()> {
    match t.as_term() {
        None => Err(Error::NotMember(format!("K({}): not a term", f.label()))),
        Some(KTerm::Base(x)) => {
            if f.source().contains(x) {
                Ok(())
            } else {
                Err(Error::NotMember(f.source().describe()))
            }
        }
        Some(KTerm::Filler(bx)) => validate_term_box(f, bx),
        Some(KTerm::Composite(abs)) => validate_term_box(f, abs.body()),
    }
}

/// Checks the box conditions throughout `t`, whatever its base values.
pub fn validate_structural_term(t: &Value) -> Result<()> {
    validate_term(&ZMorphism::identity(crate::zsub::structural_object()), t)
}

fn validate_term_box(f: &ZMorphism, bx: &OpenBox) -> Result<()> {
    if !f.target().contains(bx.base()) {
        return Err(Error::NotMember(f.target().describe()));
    }
    for u in bx.faces().values() {
        validate_term(f, u)?;
    }
    validate_box(
        bx,
        structural_object(),
        &|u| rho_value(&|x| f.apply(x), u),
        f.target(),
    )
}

/// A random element of `K f` of rank at most `size`.
pub fn sample_term(f: &ZMorphism, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
    if size == 0 || rng.gen_bool(0.2) {
        return Value::base(f.source().sample(rng, cfg, size));
    }
    let t0 = sample_term(f, rng, cfg, size - 1);
    let kind = if rng.gen_bool(0.5) {
        BoxKind::Up
    } else {
        BoxKind::Down
    };
    let base = rho_value(&|x| f.apply(x), &t0);
    let bx = box_of_faces(structural_object(), &t0, base, kind, rng, cfg);
    let mut t = if rng.gen_bool(0.5) {
        Value::filler(bx)
    } else {
        Value::composite(bx)
    };
    if rng.gen_bool(0.25) && !t.support().is_empty() {
        let a = sample::name_from(rng, cfg, t.support());
        t = t.subst(a, sample::bit(rng));
    }
    if rng.gen_bool(0.25) {
        t = t.act(&sample::perm(rng, cfg, t.support()));
    }
    t
}

struct KCarrier {
    f: ZMorphism,
}

impl Carrier for KCarrier {
    fn describe(&self) -> String {
        format!("K({})", self.f.label())
    }

    fn contains(&self, x: &Value) -> bool {
        well_formed(&self.f, x)
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        sample_term(&self.f, rng, cfg, size.min(cfg.rank))
    }
}

/// `K f` with its unit `λ_f: X → K f` and projection `ρ_f: K f → Y`, so
/// that `f = ρ_f ∘ λ_f`.
#[derive(Clone, Debug)]
pub struct FreeFibration {
    pub f: ZMorphism,
    pub object: ZObject,
    pub lambda: ZMorphism,
    pub rho: ZMorphism,
}

pub fn make_free_fibration(f: &ZMorphism) -> FreeFibration {
    build_free_fibration(f, None)
}

/// As [`make_free_fibration`], with an additional sampler used for a
/// fraction `weight` of random elements.
pub fn make_free_fibration_with(f: &ZMorphism, extra: Sampler, weight: f64) -> FreeFibration {
    build_free_fibration(f, Some((extra, weight)))
}

fn build_free_fibration(f: &ZMorphism, extra: Option<(Sampler, f64)>) -> FreeFibration {
    let mut object = ZObject::new(KCarrier { f: f.clone() });
    if let Some((s, w)) = extra {
        object = with_sampler(&object, s, w);
    }
    let lambda = ZMorphism::new(
        format!("λ({})", f.label()),
        f.source().clone(),
        object.clone(),
        |x: &Value| Value::base(x.clone()),
    );
    let fm = f.map_fn();
    let rho = ZMorphism::new(
        format!("ρ({})", f.label()),
        object.clone(),
        f.target().clone(),
        move |t| rho_value(&*fm, t),
    );
    FreeFibration {
        f: f.clone(),
        object,
        lambda,
        rho,
    }
}

impl FreeFibration {
    /// `K λ_f`.
    pub fn over_unit(&self) -> FreeFibration {
        make_free_fibration(&self.lambda)
    }

    /// `K ρ_f`.
    pub fn over_projection(&self) -> FreeFibration {
        make_free_fibration(&self.rho)
    }

    pub fn sample(&self, rng: &mut Rng, cfg: &GenConfig) -> Value {
        self.object.sample(rng, cfg, cfg.rank)
    }
}

/// `K(h, k)` on a single element.
pub fn kmap_value(h: &dyn Fn(&Value) -> Value, k: &dyn Fn(&Value) -> Value, t: &Value) -> Value {
    match t.as_term() {
        Some(KTerm::Base(x)) => Value::base(h(x)),
        Some(KTerm::Filler(bx)) => Value::filler(bx.map(|u| kmap_value(h, k, u), k)),
        Some(KTerm::Composite(abs)) => {
            let map_box =
                |_: Name, bx: &OpenBox| Value::composite(bx.map(|u| kmap_value(h, k, u), k));
            extend_over_abstraction(abs, &NameSet::new(), map_box)
                .unwrap_or_else(|_| map_box(abs.bound(), abs.body()))
        }
        None => panic!("not a term: {t}"),
    }
}

/// `K(h, k): K f → K g` for a square `g ∘ h = k ∘ f`. The square is
/// checked on `check_iters` random elements of the source of `f`.
pub fn kmap(
    h: &ZMorphism,
    k: &ZMorphism,
    kf: &FreeFibration,
    kg: &FreeFibration,
    check_iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> Result<ZMorphism> {
    let mut rng = sample::rng(seed);
    for _ in 0..check_iters {
        let x = kf.f.source().sample(&mut rng, cfg, cfg.rank);
        let lhs = kg.f.apply(&h.apply(&x));
        let rhs = k.apply(&kf.f.apply(&x));
        if !kg.f.target().equal(&lhs, &rhs) {
            return Err(Error::CommutationViolation(format!(
                "g(h({x})) = {lhs} but k(f({x})) = {rhs}"
            )));
        }
    }
    let (hm, km) = (h.map_fn(), k.map_fn());
    Ok(ZMorphism::new(
        format!("K({}, {})", h.label(), k.label()),
        kf.object.clone(),
        kg.object.clone(),
        move |t| kmap_value(&*hm, &*km, t),
    ))
}

/// The comultiplication `σ_f: K f → K λ_f` on a single element.
pub fn sigma_value(t: &Value) -> Value {
    match t.as_term() {
        Some(KTerm::Base(_)) => t.clone(),
        Some(KTerm::Filler(bx)) => Value::filler(bx.map(sigma_value, |_| t.clone())),
        Some(KTerm::Composite(abs)) => {
            let bx = abs.body();
            let whole = Value::filler(bx.clone());
            Value::composite(bx.map(sigma_value, |_| whole))
        }
        None => panic!("not a term: {t}"),
    }
}

/// The multiplication `π_f: K ρ_f → K f` on a single element.
pub fn pi_value(t: &Value) -> Value {
    match t.as_term() {
        Some(KTerm::Base(z)) => z.clone(),
        Some(KTerm::Filler(bx)) => Value::filler(bx.map(pi_value, Value::clone)),
        Some(KTerm::Composite(abs)) => Value::composite(abs.body().map(pi_value, Value::clone)),
        None => panic!("not a term: {t}"),
    }
}

pub fn sigma(kf: &FreeFibration, kl: &FreeFibration) -> ZMorphism {
    ZMorphism::new(
        format!("σ({})", kf.f.label()),
        kf.object.clone(),
        kl.object.clone(),
        sigma_value,
    )
}

pub fn pi(kr: &FreeFibration, kf: &FreeFibration) -> ZMorphism {
    ZMorphism::new(
        format!("π({})", kf.f.label()),
        kr.object.clone(),
        kf.object.clone(),
        pi_value,
    )
}

/// The formal filler on `ρ_f`.
pub fn formal_filling(kf: &FreeFibration) -> FibrationStructure {
    FibrationStructure::new(
        kf.rho.clone(),
        FillingOperator::new("formal", |bx: &OpenBox| Value::filler(bx.clone())),
    )
}

/// A second filler on `ρ_f`: the formal filler is extended by one fresh
/// direction `c` and the result is the composite of that bigger box.
pub fn detour_filling(kf: &FreeFibration) -> FibrationStructure {
    FibrationStructure::new(kf.rho.clone(), FillingOperator::new("detour", detour_fill))
}

fn detour_fill(bx: &OpenBox) -> Value {
    if bx.kind() == BoxKind::Down && mutation::is_active(Mutation::FillerUniformity) {
        let frame = Perm::swap(bx.dir(), Name(0));
        return detour_core(&bx.act(&frame));
    }
    detour_core(bx)
}

fn detour_core(bx: &OpenBox) -> Value {
    let t0 = Value::filler(bx.clone());
    let c = fresh_name(&bx.support());
    let names = bx.names().with(c);
    let faces = crate::kan::box_indices(bx.kind(), &names, c)
        .into_iter()
        .map(|(b, i)| ((b, i), t0.subst(b, i)))
        .collect();
    Value::composite(OpenBox::from_parts_unchecked(
        bx.kind(),
        c,
        faces,
        bx.base().clone(),
    ))
}

/// Objects, morphisms and rank invariants of `K f`.
pub fn check_free_fibration(f: &ZMorphism, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let kf = make_free_fibration(f);
    let mut report = LawReport::new(format!("free:{}", f.label()), seed, iters);
    report.merge(check_zsub_axioms(
        &kf.object,
        iters,
        derive_seed(seed, "axioms"),
        cfg,
    ));
    report.merge(check_morphism(
        &kf.lambda,
        iters,
        derive_seed(seed, "lambda"),
        cfg,
    ));
    report.merge(check_morphism(
        &kf.rho,
        iters,
        derive_seed(seed, "rho"),
        cfg,
    ));
    let mut rng = sample::rng(derive_seed(seed, "rank"));
    for _ in 0..iters {
        let x = f.source().sample(&mut rng, cfg, cfg.rank);
        let lhs = kf.rho.apply(&kf.lambda.apply(&x));
        report.check(
            "free.factorises",
            f.target().equal(&lhs, &f.apply(&x)),
            || witness(&[("x", &x), ("ρλx", &lhs)]),
        );
        let t = kf.sample(&mut rng, cfg);
        let zero = matches!(t.as_term(), Some(KTerm::Base(_)));
        report.check("rank.zero-iff-unit", (t.rank() == 0) == zero, || {
            witness(&[("t", &t)])
        });
        report.check("rank.bounded", t.rank() <= cfg.rank, || {
            witness(&[("t", &t)])
        });
        let a = sample::name_from(&mut rng, cfg, t.support());
        let ta = t.subst(a, sample::bit(&mut rng));
        report.check("rank.subst-monotone", ta.rank() <= t.rank(), || {
            witness(&[("t", &t), ("t(a:=i)", &ta)])
        });
        let pt = t.act(&sample::perm(&mut rng, cfg, t.support()));
        report.check("rank.perm-invariant", pt.rank() == t.rank(), || {
            witness(&[("t", &t), ("p t", &pt)])
        });
    }
    report
}

/// The three comonad laws for `(K(1,−), ρ, σ)` at `f`, plus the morphism
/// checks for `σ_f`.
pub fn check_comonad_laws(f: &ZMorphism, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let kf = make_free_fibration(f);
    let kl = kf.over_unit();
    let kll = kl.over_unit();
    let mut report = LawReport::new(format!("comonad:{}", f.label()), seed, iters);
    let nested = GenConfig {
        rank: cfg.rank.min(2),
        ..*cfg
    };
    report.merge(check_morphism(
        &sigma(&kf, &kl),
        iters,
        derive_seed(seed, "sigma"),
        &nested,
    ));
    let id = |x: &Value| x.clone();
    let rho_f = kf.rho.map_fn();
    let rho_l = kl.rho.map_fn();
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let t = kf.sample(&mut rng, &nested);
        let s = sigma_value(&t);
        report.check("comonad.sigma-lands", kl.object.contains(&s), || {
            witness(&[("t", &t), ("σt", &s)])
        });
        let back = rho_l(&s);
        report.check("comonad.counit-left", back == t, || {
            witness(&[("t", &t), ("ρ(σt)", &back)])
        });
        let back = kmap_value(&id, &*rho_f, &s);
        report.check("comonad.counit-right", back == t, || {
            witness(&[("t", &t), ("K(1,ρ)(σt)", &back)])
        });
        let lhs = kmap_value(&id, &sigma_value, &s);
        let rhs = sigma_value(&s);
        report.check("comonad.coassociative", lhs == rhs, || {
            witness(&[("t", &t), ("K(1,σ)(σt)", &lhs), ("σ(σt)", &rhs)])
        });
        report.check(
            "comonad.coassociative-lands",
            kll.object.contains(&rhs),
            || witness(&[("t", &t), ("σσt", &rhs)]),
        );
        let x = f.source().sample(&mut rng, &nested, nested.rank);
        let lhs = sigma_value(&Value::base(x.clone()));
        report.check("comonad.sigma-unit", lhs == kl.lambda.apply(&x), || {
            witness(&[("x", &x), ("σλx", &lhs)])
        });
    }
    report
}

/// The monad laws for `(K(−,1), λ, π)` at `f`, plus the morphism checks
/// for `π_f`.
pub fn check_monad_laws(f: &ZMorphism, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let kf = make_free_fibration(f);
    let kr = kf.over_projection();
    let krr = kr.over_projection();
    let mut report = LawReport::new(format!("monad:{}", f.label()), seed, iters);
    let nested = GenConfig {
        rank: cfg.rank.min(2),
        ..*cfg
    };
    report.merge(check_morphism(
        &pi(&kr, &kf),
        iters,
        derive_seed(seed, "pi"),
        &nested,
    ));
    let id = |x: &Value| x.clone();
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let t = kf.sample(&mut rng, &nested);
        let back = pi_value(&kr.lambda.apply(&t));
        report.check("monad.unit-left", back == t, || {
            witness(&[("t", &t), ("π(λt)", &back)])
        });
        let back = pi_value(&kmap_value(&|x: &Value| Value::base(x.clone()), &id, &t));
        report.check("monad.unit-right", back == t, || {
            witness(&[("t", &t), ("π(K(λ,1)t)", &back)])
        });

        let tt = krr.sample(&mut rng, &nested);
        let lhs = pi_value(&kmap_value(&pi_value, &id, &tt));
        let rhs = pi_value(&pi_value(&tt));
        report.check("monad.associative", lhs == rhs, || {
            witness(&[("T", &tt), ("π(K(π,1)T)", &lhs), ("π(πT)", &rhs)])
        });
        let s = kr.sample(&mut rng, &nested);
        let ps = pi_value(&s);
        report.check("monad.pi-lands", kf.object.contains(&ps), || {
            witness(&[("s", &s), ("πs", &ps)])
        });
        let lhs = kf.rho.apply(&ps);
        let rhs = kr.rho.apply(&s);
        report.check("monad.pi-over-base", f.target().equal(&lhs, &rhs), || {
            witness(&[("s", &s), ("ρ(πs)", &lhs)])
        });
    }
    report
}

/// Naturality and functoriality of `K(h, k)` for the squares
/// `(λ_f, 1): f → ρ_f` and `(λ_{ρ_f}, 1): ρ_f → ρ_{ρ_f}`, and of `K(1, 1)`.
pub fn check_naturality(f: &ZMorphism, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let kf = make_free_fibration(f);
    let kr = kf.over_projection();
    let krr = kr.over_projection();
    let mut report = LawReport::new(format!("naturality:{}", f.label()), seed, iters);
    let nested = GenConfig {
        rank: cfg.rank.min(2),
        ..*cfg
    };
    let one_y = ZMorphism::identity(f.target());
    let squares = [
        ("K(λ,1)", kf.lambda.clone(), &kf, &kr),
        ("K(λρ,1)", kr.lambda.clone(), &kr, &krr),
    ];
    let mut maps = Vec::new();
    for (tag, h, from, to) in squares {
        match kmap(&h, &one_y, from, to, 50, derive_seed(seed, tag), &nested) {
            Ok(m) => {
                report.merge(check_morphism(&m, iters, derive_seed(seed, tag), &nested));
                maps.push(m);
            }
            Err(e) => report.fail("naturality.square-commutes", e.to_string()),
        }
    }
    let ident = kmap(
        &ZMorphism::identity(f.source()),
        &one_y,
        &kf,
        &kf,
        50,
        seed,
        &nested,
    );
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let x = f.source().sample(&mut rng, &nested, nested.rank);
        let t = kf.sample(&mut rng, &nested);
        if let Ok(idk) = &ident {
            let v = idk.apply(&t);
            report.check("functor.identity", v == t, || {
                witness(&[("t", &t), ("K(1,1)t", &v)])
            });
        }
        if maps.len() == 2 {
            let lhs = maps[0].apply(&kf.lambda.apply(&x));
            let rhs = kr.lambda.apply(&kf.lambda.apply(&x));
            report.check("naturality.unit", lhs == rhs, || {
                witness(&[("x", &x), ("K(h,k)λx", &lhs), ("λhx", &rhs)])
            });
            let lhs = kr.rho.apply(&maps[0].apply(&t));
            let rhs = kf.rho.apply(&t);
            report.check(
                "naturality.projection",
                f.target().equal(&lhs, &rhs),
                || witness(&[("t", &t), ("ρK(h,k)t", &lhs), ("kρt", &rhs)]),
            );
            let composite = maps[1].apply(&maps[0].apply(&t));
            let (h1, h2) = (kf.lambda.map_fn(), kr.lambda.map_fn());
            let direct = kmap_value(&|v: &Value| h2(&h1(v)), &|y: &Value| y.clone(), &t);
            report.check("functor.composition", composite == direct, || {
                witness(&[
                    ("t", &t),
                    ("K(h',k')K(h,k)t", &composite),
                    ("K(h'h,k'k)t", &direct),
                ])
            });
        }
    }
    report
}

/// A sampler for `K λ_f` that also produces the images of `σ_f`.
pub fn sigma_image_sampler(kf: &FreeFibration) -> Sampler {
    let kf = kf.clone();
    Arc::new(move |rng: &mut Rng, cfg: &GenConfig, _| Some(sigma_value(&kf.sample(rng, cfg))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nominal::NameSet;
    use crate::zsub::{cube_object, terminal_object};

    fn unit_fib() -> FreeFibration {
        make_free_fibration(&ZMorphism::identity(&terminal_object()))
    }

    fn up(dir: u32, faces: &[((u32, Bit), Value)]) -> OpenBox {
        OpenBox::from_parts_unchecked(
            BoxKind::Up,
            Name(dir),
            faces
                .iter()
                .map(|((b, i), v)| ((Name(*b), *i), v.clone()))
                .collect(),
            Value::unit(),
        )
    }

    #[test]
    fn filler_restricts_to_faces_and_composite() {
        let star = Value::base(Value::unit());
        let bx = up(0, &[((0, Bit::Zero), star.clone())]);
        let t = Value::filler(bx.clone());
        assert!(well_formed(&unit_fib().f, &t));
        assert_eq!(t.subst(Name(0), Bit::Zero), star);
        let c = t.subst(Name(0), Bit::One);
        assert_eq!(c, Value::composite(bx));
        assert_eq!(c.rank(), 1);
        assert!(c.support().is_empty());
        // a composite is fresh for its bound name
        assert_eq!(c.subst(Name(0), Bit::Zero), c);
    }

    #[test]
    fn composite_substitution_in_a_side_direction_takes_the_face() {
        let star = Value::base(Value::unit());
        let side = Value::filler(up(1, &[((1, Bit::Zero), star.clone())]));
        // a 2-dimensional up-box open at a0 whose side faces are rank-1 terms
        let mut faces = vec![((0, Bit::Zero), side.clone())];
        faces.push(((1, Bit::Zero), star.clone()));
        faces.push(((1, Bit::One), star.clone()));
        let bx = up(0, &faces);
        let f = unit_fib().f;
        let t = Value::composite(bx);
        let got = t.subst(Name(1), Bit::Zero);
        assert_eq!(got, star);
        assert!(
            !well_formed(&f, &t),
            "side faces restrict to different edges"
        );
    }

    #[test]
    fn generated_terms_are_well_formed() {
        let cfg = GenConfig {
            rank: 3,
            ..GenConfig::default()
        };
        let f = ZMorphism::to_terminal(&cube_object(&NameSet::first(2)));
        let kf = make_free_fibration(&f);
        let mut rng = sample::rng(9);
        let mut seen_composite = false;
        for _ in 0..300 {
            let t = kf.sample(&mut rng, &cfg);
            assert_eq!(validate_term(&f, &t), Ok(()), "{t}");
            seen_composite |= matches!(t.as_term(), Some(KTerm::Composite(_)));
        }
        assert!(seen_composite);
    }

    #[test]
    fn projections_of_the_formal_filler() {
        let kf = unit_fib();
        let cfg = GenConfig::default();
        let r = crate::kan::check_uniformity(&formal_filling(&kf), 200, 1, &cfg);
        assert!(r.is_clean(), "{}", r.to_text());
        let r = crate::kan::check_uniformity(&detour_filling(&kf), 200, 1, &cfg);
        assert!(r.is_clean(), "{}", r.to_text());
    }

    #[test]
    fn detour_differs_from_formal() {
        let star = Value::base(Value::unit());
        let bx = up(0, &[((0, Bit::Zero), star)]);
        let kf = unit_fib();
        assert_ne!(detour_filling(&kf).fill(&bx), formal_filling(&kf).fill(&bx));
    }

    #[test]
    fn laws_hold_on_the_unit_fibration() {
        let f = ZMorphism::identity(&terminal_object());
        let cfg = GenConfig::default();
        for r in [
            check_free_fibration(&f, 100, 1, &cfg),
            check_comonad_laws(&f, 100, 1, &cfg),
            check_monad_laws(&f, 100, 1, &cfg),
            check_naturality(&f, 50, 1, &cfg),
        ] {
            assert!(r.is_clean(), "{}", r.to_text());
        }
    }

    #[test]
    fn the_guard_mutation_breaks_substitution() {
        let f = ZMorphism::identity(&terminal_object());
        let cfg = GenConfig::default();
        let r = mutation::with_mutation(Mutation::CompositeGuard, || {
            check_free_fibration(&f, 300, 2, &cfg)
        });
        assert!(!r.is_clean());
    }
}
