//! Exhaustive enumeration of `K 1_1`, graded by rank.
//!
//! Terms are built bottom-up: every box whose directions come from the
//! first `alphabet` names and whose faces are terms of lower rank, closed
//! as a filler or a composite. Faces are chosen by backtracking so that
//! adjacency is checked as soon as two faces are both fixed.

use std::collections::{BTreeMap, HashSet};

use crate::error::{Error, Result};
use crate::kan::{box_indices, BoxKind, OpenBox};
use crate::nominal::{Name, NameSet};
use crate::value::Value;
use crate::zsub::Bit;

pub const MAX_RANK: usize = 3;
pub const MAX_ALPHABET: usize = 4;
pub const DEFAULT_MAX_TERMS: usize = 200_000;

/// The terms of `K 1_1` of each rank, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub alphabet: usize,
    pub by_rank: Vec<Vec<Value>>,
}

impl Enumeration {
    pub fn counts(&self) -> Vec<usize> {
        self.by_rank.iter().map(Vec::len).collect()
    }

    pub fn terms(&self) -> impl Iterator<Item = &Value> {
        self.by_rank.iter().flatten()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let counts: BTreeMap<String, usize> = self
            .by_rank
            .iter()
            .enumerate()
            .map(|(r, ts)| (r.to_string(), ts.len()))
            .collect();
        serde_json::json!({
            "alphabet": self.alphabet,
            "counts": counts,
            "total": self.by_rank.iter().map(Vec::len).sum::<usize>(),
        })
    }
}

/// All subsets of `names` with at least one element, smallest first.
fn nonempty_subsets(names: &[Name]) -> Vec<NameSet> {
    let mut out: Vec<NameSet> = (1u32..(1 << names.len()))
        .map(|mask| {
            names
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, n)| *n)
                .collect()
        })
        .collect();
    out.sort_by_key(|s: &NameSet| (s.len(), s.to_vec()));
    out
}

pub fn enumerate_k_terminal(
    rank_max: usize,
    alphabet: usize,
    max_terms: usize,
) -> Result<Enumeration> {
    if rank_max > MAX_RANK || alphabet > MAX_ALPHABET {
        return Err(Error::ResourceLimit(format!(
            "rank {rank_max} over {alphabet} names exceeds the limits (rank ≤ {MAX_RANK}, names ≤ {MAX_ALPHABET})"
        )));
    }
    let names = NameSet::first(alphabet).to_vec();
    let subsets = nonempty_subsets(&names);
    let mut seen: HashSet<Value> = HashSet::new();
    let base = Value::base(Value::unit());
    seen.insert(base.clone());
    let mut by_rank = vec![vec![base]];
    for r in 1..=rank_max {
        let pool: Vec<&Value> = by_rank.iter().flatten().collect();
        let mut fresh: Vec<Value> = Vec::new();
        for a_set in &subsets {
            for dir in a_set.iter() {
                for kind in [BoxKind::Up, BoxKind::Down] {
                    let slots = box_indices(kind, a_set, dir);
                    let options: Vec<Vec<&Value>> = slots
                        .iter()
                        .map(|(b, _)| {
                            pool.iter()
                                .copied()
                                .filter(|t| !t.support().contains(*b))
                                .collect()
                        })
                        .collect();
                    let mut chosen: Vec<&Value> = Vec::with_capacity(slots.len());
                    let mut emit = |faces: &[&Value]| -> Result<()> {
                        if faces.iter().map(|t| t.rank()).max() != Some(r - 1) {
                            return Ok(());
                        }
                        let map = slots
                            .iter()
                            .copied()
                            .zip(faces.iter().map(|t| (*t).clone()))
                            .collect();
                        let bx = OpenBox::from_parts_unchecked(kind, dir, map, Value::unit());
                        for t in [Value::filler(bx.clone()), Value::composite(bx)] {
                            if seen.insert(t.clone()) {
                                fresh.push(t);
                                if seen.len() > max_terms {
                                    return Err(Error::ResourceLimit(format!(
                                        "more than {max_terms} terms"
                                    )));
                                }
                            }
                        }
                        Ok(())
                    };
                    backtrack(&slots, &options, &mut chosen, &mut emit)?;
                }
            }
        }
        by_rank.push(fresh);
    }
    Ok(Enumeration { alphabet, by_rank })
}

fn backtrack<'a>(
    slots: &[(Name, Bit)],
    options: &[Vec<&'a Value>],
    chosen: &mut Vec<&'a Value>,
    emit: &mut dyn FnMut(&[&'a Value]) -> Result<()>,
) -> Result<()> {
    let k = chosen.len();
    if k == slots.len() {
        return emit(chosen);
    }
    let (b, i) = slots[k];
    for &t in &options[k] {
        let fits = slots[..k]
            .iter()
            .zip(chosen.iter())
            .all(|(&(c, j), w)| c == b || t.subst(c, j) == w.subst(b, i));
        if fits {
            chosen.push(t);
            backtrack(slots, options, chosen, emit)?;
            chosen.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_zero_is_the_unit() {
        let e = enumerate_k_terminal(0, 2, 10).unwrap();
        assert_eq!(e.counts(), vec![1]);
    }

    #[test]
    fn one_name_rank_one() {
        let e = enumerate_k_terminal(1, 1, 100).unwrap();
        assert_eq!(e.counts(), vec![1, 4]);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            enumerate_k_terminal(4, 1, 100),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            enumerate_k_terminal(1, 5, 100),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            enumerate_k_terminal(2, 2, 10),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn every_term_is_well_formed_and_ranked() {
        let f = crate::zsub::ZMorphism::identity(&crate::zsub::terminal_object());
        let e = enumerate_k_terminal(2, 2, 10_000).unwrap();
        for (r, ts) in e.by_rank.iter().enumerate() {
            for t in ts {
                assert_eq!(t.rank(), r);
                crate::free::validate_term(&f, t).unwrap();
            }
        }
    }
}
