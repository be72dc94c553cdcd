//! Each deliberate defect is noticed by the suite that should notice it.

use kanforge::mutation::{with_mutation, Mutation};
use kanforge::{run_suite, GenConfig, Suite};

fn fails_under(m: Mutation, suite: Suite) -> Vec<String> {
    let r = with_mutation(m, || run_suite(suite, 5, 60, &GenConfig::default()));
    r.failed_laws().into_iter().map(String::from).collect()
}

#[test]
fn the_suites_are_clean_without_mutations() {
    for suite in [Suite::Zsub, Suite::Comonad, Suite::Bridge] {
        let r = run_suite(suite, 5, 60, &GenConfig::default());
        assert!(r.is_clean(), "{}", r.to_text());
    }
}

#[test]
fn dropping_the_composite_guard_breaks_the_comonad() {
    let failed = fails_under(Mutation::CompositeGuard, Suite::Comonad);
    assert!(!failed.is_empty());
}

#[test]
fn accepting_stale_faces_is_noticed() {
    let failed = fails_under(Mutation::BoxFreshness, Suite::Zsub);
    assert!(failed.iter().any(|l| l.ends_with("box.rejects-stale-face")), "{failed:?}");
}

#[test]
fn a_non_uniform_filler_is_noticed() {
    let failed = fails_under(Mutation::FillerUniformity, Suite::Bridge);
    assert!(failed.iter().any(|l| l.contains("detour") && l.contains("filler.")), "{failed:?}");
}

#[test]
fn mutations_do_not_leak_between_runs() {
    let _ = fails_under(Mutation::CompositeGuard, Suite::Monad);
    assert!(run_suite(Suite::Monad, 5, 30, &GenConfig::default()).is_clean());
}
