//! Named law suites over a fixed set of test morphisms.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::bridge::{
    algebra_to_filling, canonical_algebra, check_algebra_laws, check_fibration_equivalences,
    roundtrip_from_algebra,
};
use crate::enumerate::{enumerate_k_terminal, Enumeration};
use crate::error::Error;
use crate::free::{
    check_comonad_laws, check_free_fibration, check_monad_laws, check_naturality, detour_filling,
    formal_filling, make_free_fibration,
};
use crate::generators::{check_eta_exhaustive, check_generators, check_lifting, JObject};
use crate::kan::{
    check_box_validation, check_uniformity, identity_fibration, BoxKind, FibrationStructure,
};
use crate::nominal::{fresh_name, Name, NameSet};
use crate::path::{
    abstraction_to_normal_form, check_path_object, check_pullback_stability, decidable_image,
    path_object, reflexivity_coalgebra, Preimage,
};
use crate::report::LawReport;
use crate::sample::{derive_seed, GenConfig};
use crate::value::Value;
use crate::zsub::{check_zsub_axioms, cube_object, terminal_object, ZMorphism};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Zsub,
    Comonad,
    Monad,
    Bridge,
    Generators,
    Path,
    All,
}

impl Suite {
    pub const EACH: [Suite; 6] = [
        Suite::Zsub,
        Suite::Comonad,
        Suite::Monad,
        Suite::Bridge,
        Suite::Generators,
        Suite::Path,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Zsub => "zsub",
            Suite::Comonad => "comonad",
            Suite::Monad => "monad",
            Suite::Bridge => "bridge",
            Suite::Generators => "generators",
            Suite::Path => "path",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::schema("suite", format!("unknown suite {s:?}")))
    }
}

/// Labels of the cube in the second test morphism.
pub fn cube_keys() -> NameSet {
    NameSet::from_iter([Name(40), Name(41)])
}

/// The generating object whose inclusion is the third test morphism.
pub fn test_generator() -> JObject {
    JObject::new(
        BoxKind::Up,
        NameSet::from_iter([Name(100), Name(101)]),
        Name(100),
        NameSet::singleton(Name(200)),
    )
    .expect("disjoint labels")
}

/// `1 → 1`, `□ → 1` and the inclusion of an open box into its cube.
pub fn test_morphisms() -> Vec<(&'static str, ZMorphism)> {
    vec![
        ("id1", ZMorphism::identity(&terminal_object())),
        ("cube", ZMorphism::to_terminal(&cube_object(&cube_keys()))),
        ("jmap", test_generator().j_map()),
    ]
}

/// The formal and detour fillings of `K f` for every test morphism.
pub fn test_fibrations() -> Vec<(String, FibrationStructure)> {
    let mut out = Vec::new();
    for (tag, f) in test_morphisms() {
        let kf = make_free_fibration(&f);
        out.push((format!("{tag}.formal"), formal_filling(&kf)));
        out.push((format!("{tag}.detour"), detour_filling(&kf)));
    }
    out
}

/// Runs one suite; `iters` is the number of samples per law and per
/// morphism. The report depends only on the arguments.
pub fn run_suite(suite: Suite, seed: u64, iters: usize, cfg: &GenConfig) -> LawReport {
    let mut report = LawReport::new(suite.as_str(), seed, iters);
    let seed_for = |tag: &str| derive_seed(seed, tag);
    match suite {
        Suite::All => {
            for s in Suite::EACH {
                report.merge_scoped(s.as_str(), run_suite(s, seed, iters, cfg));
            }
        }
        Suite::Zsub => {
            guarded(&mut report, "terminal", || {
                check_zsub_axioms(&terminal_object(), iters, seed_for("terminal"), cfg)
            });
            for k in 0..=3 {
                let keys: NameSet = (0..k).map(|j| Name(40 + j)).collect();
                let tag = format!("cube{k}");
                guarded(&mut report, &tag, || {
                    check_zsub_axioms(&cube_object(&keys), iters, seed_for(&tag), cfg)
                });
            }
            for (tag, f) in test_morphisms() {
                let kf = make_free_fibration(&f);
                let tag = format!("K.{tag}");
                guarded(&mut report, &tag, || {
                    check_zsub_axioms(&kf.object, iters, seed_for(&tag), cfg)
                });
            }
            let unit = make_free_fibration(&ZMorphism::identity(&terminal_object()));
            let po = path_object(&formal_filling(&unit));
            guarded(&mut report, "P.id1", || {
                check_zsub_axioms(&po.object, iters, seed_for("paths"), cfg)
            });
            for (tag, fs) in test_fibrations() {
                let tag = format!("boxes.{tag}");
                guarded(&mut report, &tag, || {
                    check_box_validation(&fs, iters, seed_for(&tag), cfg)
                });
            }
        }
        Suite::Comonad => {
            for (tag, f) in test_morphisms() {
                guarded(&mut report, tag, || {
                    check_free_fibration(&f, iters, seed_for(&format!("free.{tag}")), cfg)
                });
                guarded(&mut report, tag, || {
                    check_comonad_laws(&f, iters, seed_for(&format!("comonad.{tag}")), cfg)
                });
                guarded(&mut report, tag, || {
                    check_naturality(&f, iters, seed_for(&format!("natural.{tag}")), cfg)
                });
            }
        }
        Suite::Monad => {
            for (tag, f) in test_morphisms() {
                guarded(&mut report, tag, || {
                    check_monad_laws(&f, iters, seed_for(&format!("monad.{tag}")), cfg)
                });
            }
        }
        Suite::Bridge => {
            for (tag, fs) in test_fibrations() {
                guarded(&mut report, &tag, || {
                    check_fibration_equivalences(&fs, iters, seed_for(&tag), cfg)
                });
            }
            for (tag, f) in test_morphisms() {
                let alg = canonical_algebra(&make_free_fibration(&f));
                let tag = format!("{tag}.canonical");
                guarded(&mut report, &tag, || {
                    check_algebra_laws(&alg, iters, seed_for(&format!("laws.{tag}")), cfg)
                });
                guarded(&mut report, &tag, || {
                    roundtrip_from_algebra(&alg, iters, seed_for(&format!("back.{tag}")), cfg)
                });
                match algebra_to_filling(&alg, 50, seed_for(&format!("fill.{tag}")), cfg) {
                    Ok(fs) => guarded(&mut report, &tag, || {
                        check_uniformity(&fs, iters, seed_for(&format!("uniform.{tag}")), cfg)
                    }),
                    Err(e) => report.fail(&format!("{tag}/algebra.to-filling"), e.to_string()),
                }
            }
            let id = identity_fibration(&cube_object(&cube_keys()));
            guarded(&mut report, "identity", || {
                check_uniformity(&id, iters, seed_for("identity"), cfg)
            });
        }
        Suite::Generators => {
            guarded(&mut report, "generators", || {
                check_generators(iters, seed_for("generators"), cfg)
            });
            guarded(&mut report, "exhaustive", || {
                check_eta_exhaustive(2, 1, &NameSet::first(4))
            });
            for (tag, fs) in test_fibrations() {
                guarded(&mut report, &tag, || {
                    check_lifting(&fs, iters, seed_for(&format!("lifting.{tag}")), cfg)
                });
            }
        }
        Suite::Path => {
            let unit = make_free_fibration(&ZMorphism::identity(&terminal_object()));
            let labels = NameSet::singleton(Name(40));
            let c = cube_object(&labels);
            let kc = make_free_fibration(&ZMorphism::identity(&c));
            let fibrations = [
                ("id1.formal", formal_filling(&unit)),
                ("id1.detour", detour_filling(&unit)),
                ("cube.formal", formal_filling(&kc)),
                (
                    "cube.identity",
                    identity_fibration(&cube_object(&cube_keys())),
                ),
            ];
            for (tag, fs) in &fibrations {
                guarded(&mut report, tag, || {
                    check_path_object(fs, iters, seed_for(tag), cfg)
                });
            }
            let to_one = ZMorphism::to_terminal(&c);
            let sampler = c.clone();
            let preimage: Preimage = Arc::new(move |_: &Value, rng: &mut crate::sample::Rng| {
                Some(sampler.sample(rng, &GenConfig::default(), 0))
            });
            guarded(&mut report, "pullback.cube-to-point", || {
                check_pullback_stability(
                    &fibrations[0].1,
                    &to_one,
                    preimage,
                    iters,
                    seed_for("pullback.point"),
                    cfg,
                )
            });
            let id = ZMorphism::identity(&c);
            guarded(&mut report, "pullback.identity", || {
                check_pullback_stability(
                    &fibrations[2].1,
                    &id,
                    Arc::new(|y: &Value, _: &mut crate::sample::Rng| Some(y.clone())),
                    iters,
                    seed_for("pullback.id"),
                    cfg,
                )
            });
            match enumerate_k_terminal(2, 2, 10_000) {
                Ok(e) => guarded(&mut report, "enumerated", || {
                    check_image_against_enumeration(&e)
                }),
                Err(e) => report.fail("enumerated/image", e.to_string()),
            }
        }
    }
    report
}

/// Merges the report of `run` under `scope`, recording a panic as a failure.
fn guarded(report: &mut LawReport, scope: &str, run: impl FnOnce() -> LawReport) {
    match std::panic::catch_unwind(std::panic::AssertUnwindSafe(run)) {
        Ok(r) => report.merge_scoped(scope, r),
        Err(payload) => {
            let message = payload
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| payload.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            report.fail(&format!("{scope}/panicked"), message);
        }
    }
}

/// Compares the decidable-image test with a search through the enumerated
/// terms, for `λ` on `K 1_1` and for reflexivity on its path object.
pub fn check_image_against_enumeration(e: &Enumeration) -> LawReport {
    let mut report = LawReport::new("image", 0, e.terms().count());
    let unit = Value::unit();
    let base_unit = Value::base(unit.clone());
    // the coalgebra of `λ: 1 → K 1_1` is the identity
    for t in e.terms() {
        let searched = t == &base_unit;
        report.check(
            "image.lambda",
            decidable_image(&|v| v.clone(), t) == searched,
            || crate::report::witness(&[("t", t)]),
        );
    }
    let fs = formal_filling(&make_free_fibration(&ZMorphism::identity(
        &terminal_object(),
    )));
    let po = path_object(&fs);
    let (r, c, _) = reflexivity_coalgebra(&po);
    let reflexive: std::collections::HashSet<Value> = e.terms().map(|x| r.apply(x)).collect();
    let cm = c.map_fn();
    for x in e.terms() {
        let mut paths = vec![r.apply(x)];
        for a in x.support().iter().chain([fresh_name(x.support())]) {
            match abstraction_to_normal_form(&fs, &Value::abs(a, x.clone())) {
                Ok(w) => paths.push(w),
                Err(err) => report.fail("image.reflexivity", err.to_string()),
            }
        }
        for w in paths {
            let searched = reflexive.contains(&w);
            report.check(
                "image.reflexivity",
                decidable_image(&*cm, &w) == searched,
                || crate::report::witness(&[("x", x), ("path", &w)]),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn zero_iterations_give_a_clean_report() {
        let r = run_suite(Suite::Monad, 1, 0, &GenConfig::default());
        assert!(r.is_clean());
        assert_eq!(r.total_cases(), 0);
    }

    #[test]
    fn every_suite_passes_briefly() {
        for s in Suite::EACH {
            let r = run_suite(s, 3, 20, &GenConfig::default());
            assert!(r.is_clean(), "{}", r.to_text());
        }
    }
}
