//! Law-check reports.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde_json::json;

use crate::json::value_to_json;
use crate::value::Value;

/// Counterexamples kept per law; further failures are only counted.
const KEPT_PER_LAW: usize = 3;

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LawTally {
    pub cases: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawFailure {
    pub law: String,
    pub counterexample: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LawReport {
    pub suite: String,
    pub seed: u64,
    pub iterations: usize,
    pub laws: BTreeMap<String, LawTally>,
    pub failures: Vec<LawFailure>,
}

/// Builds a counterexample record from labelled values.
pub fn witness(items: &[(&str, &Value)]) -> serde_json::Value {
    serde_json::Value::Object(
        items
            .iter()
            .map(|(k, v)| ((*k).to_string(), value_to_json(v)))
            .collect(),
    )
}

impl LawReport {
    pub fn new(suite: impl Into<String>, seed: u64, iterations: usize) -> Self {
        LawReport {
            suite: suite.into(),
            seed,
            iterations,
            laws: BTreeMap::new(),
            failures: Vec::new(),
        }
    }

    /// Records one case of `law`; `counterexample` is only built on failure.
    pub fn check(
        &mut self,
        law: &str,
        ok: bool,
        counterexample: impl FnOnce() -> serde_json::Value,
    ) -> bool {
        let tally = self.laws.entry(law.to_string()).or_default();
        tally.cases += 1;
        if !ok {
            tally.failures += 1;
            if tally.failures <= KEPT_PER_LAW {
                self.failures.push(LawFailure {
                    law: law.to_string(),
                    counterexample: counterexample(),
                });
            }
        }
        ok
    }

    /// Records a failure carrying an error message.
    pub fn fail(&mut self, law: &str, message: impl Into<String>) {
        let message = message.into();
        self.check(law, false, || json!({ "error": message }));
    }

    pub fn merge(&mut self, other: LawReport) {
        for (law, t) in other.laws {
            let mine = self.laws.entry(law).or_default();
            mine.cases += t.cases;
            mine.failures += t.failures;
        }
        self.failures.extend(other.failures);
    }

    /// Merges `other` with every law name prefixed by `scope/`.
    pub fn merge_scoped(&mut self, scope: &str, other: LawReport) {
        for (law, t) in other.laws {
            let mine = self.laws.entry(format!("{scope}/{law}")).or_default();
            mine.cases += t.cases;
            mine.failures += t.failures;
        }
        self.failures
            .extend(other.failures.into_iter().map(|f| LawFailure {
                law: format!("{scope}/{}", f.law),
                counterexample: f.counterexample,
            }));
    }

    pub fn is_clean(&self) -> bool {
        self.laws.values().all(|t| t.failures == 0)
    }

    pub fn total_cases(&self) -> usize {
        self.laws.values().map(|t| t.cases).sum()
    }

    pub fn total_failures(&self) -> usize {
        self.laws.values().map(|t| t.failures).sum()
    }

    pub fn failed(&self, law: &str) -> bool {
        self.laws.get(law).is_some_and(|t| t.failures > 0)
    }

    /// Laws with at least one failure.
    pub fn failed_laws(&self) -> Vec<&str> {
        self.laws
            .iter()
            .filter(|(_, t)| t.failures > 0)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "iterations": self.iterations,
            "ok": self.is_clean(),
            "laws": self.laws.iter().map(|(k, t)| {
                (k.clone(), json!({ "cases": t.cases, "failures": t.failures }))
            }).collect::<serde_json::Map<_, _>>(),
            "failures": self.failures.iter().map(|f| json!({
                "law": f.law,
                "counterexample": f.counterexample,
            })).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "suite {} (seed {}, {} iterations): {}",
            self.suite,
            self.seed,
            self.iterations,
            if self.is_clean() { "ok" } else { "FAILED" }
        );
        for (law, t) in &self.laws {
            let status = if t.failures == 0 { "ok" } else { "FAIL" };
            let _ = writeln!(
                out,
                "  {status:<4} {law}: {} cases, {} failures",
                t.cases, t.failures
            );
        }
        for f in &self.failures {
            let _ = writeln!(out, "  counterexample for {}: {}", f.law, f.counterexample);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tallies_and_merges() {
        let mut r = LawReport::new("t", 1, 2);
        r.check("a", true, || unreachable!());
        r.check("a", false, || json!("boom"));
        assert!(!r.is_clean());
        let mut s = LawReport::new("t", 1, 2);
        s.check("b", true, || json!(null));
        s.merge(r);
        assert_eq!(s.total_cases(), 3);
        assert_eq!(s.failed_laws(), vec!["a"]);
        assert!(s.to_text().contains("FAIL"));
    }

    #[test]
    fn keeps_a_bounded_number_of_counterexamples() {
        let mut r = LawReport::new("t", 0, 0);
        for _ in 0..10 {
            r.check("x", false, || json!(1));
        }
        assert_eq!(r.failures.len(), KEPT_PER_LAW);
        assert_eq!(r.laws["x"].failures, 10);
    }
}
