use std::process::{Command, Output};

fn kanforge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kanforge"))
        .args(args)
        .env_remove("KANFORGE_SEED")
        .output()
        .expect("run kanforge")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const SINGLE_FACE: &str = r#"{"tag":"upbox","box":{"kind":"up","dir":"a0","faces":[{"name":"a0","bit":0,"term":{"tag":"base","value":{"tag":"unit"}}}],"base":{"tag":"unit"}}}"#;

#[test]
fn comonad_suite_is_clean() {
    let o = kanforge(&["laws", "--suite", "comonad", "--seed", "7", "--iters", "500"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite comonad (seed 7, 500 iterations): ok"));
}

#[test]
fn zero_iterations_give_an_empty_clean_report() {
    let o = kanforge(&["laws", "--suite", "path", "--iters", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["ok"], true);
    assert_eq!(j["failures"], serde_json::json!([]));
}

#[test]
fn a_mutation_fails_the_run() {
    let o = kanforge(&["laws", "--suite", "all", "--seed", "7", "--iters", "40", "--mutate", "composite-guard"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn the_seed_comes_from_the_environment() {
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_kanforge"));
        c.args(["laws", "--suite", "monad", "--iters", "5"]).args(args);
        match env {
            Some(v) => c.env("KANFORGE_SEED", v),
            None => c.env_remove("KANFORGE_SEED"),
        };
        c.output().unwrap().stdout
    };
    let from_env = run(Some("99"), &[]);
    assert_eq!(from_env, run(None, &["--seed", "99"]));
    assert!(String::from_utf8(from_env).unwrap().contains("seed 99"));
}

#[test]
fn bad_flags_exit_with_two() {
    assert_eq!(kanforge(&["laws", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(kanforge(&["laws", "--rank", "9"]).status.code(), Some(2));
    assert_eq!(kanforge(&["enumerate", "--rank", "4"]).status.code(), Some(2));
    assert_eq!(kanforge(&["term", "rank", "{"]).status.code(), Some(2));
}

#[test]
fn enumeration_of_one_name() {
    let o = kanforge(&["enumerate", "--rank", "1", "--alphabet", "1"]);
    assert_eq!(stdout(&o), "rank 0: 1\nrank 1: 4\ntotal: 5\n");
}

#[test]
fn term_rank_and_substitution() {
    let o = kanforge(&["term", "rank", r#"{"tag":"base","value":{"tag":"unit"}}"#]);
    assert_eq!(stdout(&o).trim(), r#"{"rank":0}"#);
    let o = kanforge(&["term", "rank", SINGLE_FACE]);
    assert_eq!(stdout(&o).trim(), r#"{"rank":1}"#);
    let o = kanforge(&["term", "subst", SINGLE_FACE, "--name", "a0", "--bit", "1"]);
    let j: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(j["tag"], "plus");
    let o = kanforge(&["term", "subst", SINGLE_FACE, "--name", "a0", "--bit", "0"]);
    assert_eq!(stdout(&o).trim(), r#"{"tag":"base","value":{"tag":"unit"}}"#);
}

#[test]
fn alpha_variants_are_equal() {
    let plus = |bound: &str| {
        format!(
            r#"{{"tag":"plus","bound":"{bound}","box":{{"kind":"up","dir":"{bound}","faces":[{{"name":"{bound}","bit":0,"term":{{"tag":"base","value":{{"tag":"unit"}}}}}}],"base":{{"tag":"unit"}}}}}}"#
        )
    };
    let o = kanforge(&["term", "eq", &plus("a0"), &plus("a7")]);
    assert_eq!(stdout(&o).trim(), r#"{"equal":true}"#);
    let o = kanforge(&["term", "act", SINGLE_FACE, "--swap", "a0,a3"]);
    let moved = stdout(&o);
    assert!(moved.contains(r#""dir":"a3""#));
    let o = kanforge(&["term", "act", moved.trim(), "--swap", "a3,a0"]);
    let back: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(back, serde_json::from_str::<serde_json::Value>(SINGLE_FACE).unwrap());
}

#[test]
fn schema_errors_name_their_location() {
    let o = kanforge(&["term", "rank", r#"{"tag":"base","value":{"tag":"cube"}}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("$.value"));
}

#[test]
fn invalid_boxes_are_rejected() {
    // the face mentions its own direction
    let stale = r#"{"tag":"upbox","box":{"kind":"up","dir":"a0","faces":[{"name":"a0","bit":0,"term":{"tag":"upbox","box":{"kind":"up","dir":"a0","faces":[{"name":"a0","bit":0,"term":{"tag":"base","value":{"tag":"unit"}}}],"base":{"tag":"unit"}}}}],"base":{"tag":"unit"}}}"#;
    let o = kanforge(&["term", "rank", stale]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn path_demo_is_deterministic_and_traces_the_counit() {
    let a = kanforge(&["path-demo", "--seed", "3"]);
    let b = kanforge(&["path-demo", "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("counit: rho(c(w)) = w"));
    assert!(text.contains("check counit: ok"));
    assert!(text.ends_with("all checks passed\n"));
}
