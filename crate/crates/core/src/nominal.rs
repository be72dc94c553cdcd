//! Names, finite permutations, supports and name abstraction.
//!
//! Names are interned naturals written `a<id>`. Every element type used by
//! the term algebra implements [`Nominal`], which gives it a permutation
//! action and a computable finite support. For the syntactic carriers in
//! this crate the support returned is the least one (the free names).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::error::Error;

/// An atom `a<id>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(pub u32);

impl Name {
    pub fn id(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.0)
    }
}

impl FromStr for Name {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.strip_prefix('a')
            .and_then(|digits| digits.parse::<u32>().ok())
            .map(Name)
            .ok_or_else(|| {
                Error::schema("", format!("expected a name of the form a<id>, got {s:?}"))
            })
    }
}

/// A finite set of names.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NameSet(BTreeSet<Name>);

impl NameSet {
    pub fn new() -> Self {
        NameSet(BTreeSet::new())
    }

    pub fn singleton(a: Name) -> Self {
        let mut s = NameSet::new();
        s.insert(a);
        s
    }

    /// The first `n` atoms `a0 .. a(n-1)`.
    pub fn first(n: usize) -> Self {
        (0..n as u32).map(Name).collect()
    }

    pub fn contains(&self, a: Name) -> bool {
        self.0.contains(&a)
    }

    pub fn insert(&mut self, a: Name) -> bool {
        self.0.insert(a)
    }

    pub fn remove(&mut self, a: Name) -> bool {
        self.0.remove(&a)
    }

    pub fn extend_from(&mut self, other: &NameSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn union(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &NameSet) -> NameSet {
        NameSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn without(&self, a: Name) -> NameSet {
        let mut s = self.clone();
        s.remove(a);
        s
    }

    pub fn with(&self, a: Name) -> NameSet {
        let mut s = self.clone();
        s.insert(a);
        s
    }

    pub fn is_disjoint(&self, other: &NameSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &NameSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = Name> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<Name> {
        self.0.iter().copied().collect()
    }

    /// Smallest name not in the set.
    pub fn fresh(&self) -> Name {
        fresh_name(self)
    }
}

impl FromIterator<Name> for NameSet {
    fn from_iter<I: IntoIterator<Item = Name>>(iter: I) -> Self {
        NameSet(iter.into_iter().collect())
    }
}

impl fmt::Display for NameSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// The smallest name outside `avoid`.
pub fn fresh_name(avoid: &NameSet) -> Name {
    let mut candidate = 0u32;
    for a in avoid.iter() {
        if a.0 == candidate {
            candidate += 1;
        } else if a.0 > candidate {
            break;
        }
    }
    Name(candidate)
}

/// A finitely supported permutation of names.
///
/// Only the moved points are stored, so two permutations are equal exactly
/// when they act identically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Perm(BTreeMap<Name, Name>);

impl Perm {
    pub fn identity() -> Self {
        Perm(BTreeMap::new())
    }

    /// The transposition `(a b)`.
    pub fn swap(a: Name, b: Name) -> Self {
        let mut m = BTreeMap::new();
        if a != b {
            m.insert(a, b);
            m.insert(b, a);
        }
        Perm(m)
    }

    /// Builds a permutation from `(from, to)` pairs, rejecting anything that
    /// is not a bijection on its carrier.
    pub fn from_pairs<I: IntoIterator<Item = (Name, Name)>>(pairs: I) -> Result<Self, Error> {
        let mut m = BTreeMap::new();
        for (from, to) in pairs {
            if let Some(prev) = m.insert(from, to) {
                if prev != to {
                    return Err(Error::InvalidPermutation(format!("{from} mapped twice")));
                }
            }
        }
        let domain: BTreeSet<Name> = m.keys().copied().collect();
        let image: BTreeSet<Name> = m.values().copied().collect();
        if domain != image || image.len() != m.len() {
            return Err(Error::InvalidPermutation(
                "pairs do not form a bijection on a finite carrier".into(),
            ));
        }
        m.retain(|k, v| k != v);
        Ok(Perm(m))
    }

    pub fn apply(&self, a: Name) -> Name {
        self.0.get(&a).copied().unwrap_or(a)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        let mut m = BTreeMap::new();
        for a in self.0.keys().chain(other.0.keys()) {
            let b = self.apply(other.apply(*a));
            if b != *a {
                m.insert(*a, b);
            }
        }
        Perm(m)
    }

    pub fn inverse(&self) -> Perm {
        Perm(self.0.iter().map(|(a, b)| (*b, *a)).collect())
    }

    /// The names moved by the permutation.
    pub fn carrier(&self) -> NameSet {
        self.0.keys().copied().collect()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Name, Name)> + '_ {
        self.0.iter().map(|(a, b)| (*a, *b))
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "id");
        }
        let mut seen = BTreeSet::new();
        for start in self.0.keys() {
            if seen.contains(start) {
                continue;
            }
            write!(f, "(")?;
            let mut a = *start;
            let mut first = true;
            loop {
                seen.insert(a);
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{a}")?;
                first = false;
                a = self.apply(a);
                if a == *start {
                    break;
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A permutation action together with a computable finite support.
pub trait Nominal: Sized {
    fn act(&self, p: &Perm) -> Self;

    fn support(&self) -> NameSet;

    fn is_fresh(&self, a: Name) -> bool {
        !self.support().contains(a)
    }
}

impl Nominal for Name {
    fn act(&self, p: &Perm) -> Self {
        p.apply(*self)
    }

    fn support(&self) -> NameSet {
        NameSet::singleton(*self)
    }
}

impl Nominal for NameSet {
    fn act(&self, p: &Perm) -> Self {
        self.iter().map(|a| p.apply(a)).collect()
    }

    fn support(&self) -> NameSet {
        self.clone()
    }
}

impl<A: Nominal, B: Nominal> Nominal for (A, B) {
    fn act(&self, p: &Perm) -> Self {
        (self.0.act(p), self.1.act(p))
    }

    fn support(&self) -> NameSet {
        self.0.support().union(&self.1.support())
    }
}

/// A representative `⟨bound⟩body` of a name abstraction.
///
/// Equality is alpha-equivalence; hashing goes through the canonical
/// representative, whose bound name is the smallest name not free in the
/// abstraction.
#[derive(Clone, Debug)]
pub struct Abstraction<E> {
    bound: Name,
    body: E,
}

impl<E> Abstraction<E> {
    pub fn new(bound: Name, body: E) -> Self {
        Abstraction { bound, body }
    }

    pub fn bound(&self) -> Name {
        self.bound
    }

    pub fn body(&self) -> &E {
        &self.body
    }
}

impl<E: Nominal + Clone> Abstraction<E> {
    /// The representative with bound name `c`; `c` must be fresh for the
    /// abstraction.
    pub fn instantiate(&self, c: Name) -> Result<E, Error> {
        if c == self.bound {
            return Ok(self.body.clone());
        }
        if self.body.support().contains(c) {
            return Err(Error::ContractViolation(format!(
                "{c} is not fresh for the abstraction over {}",
                self.bound
            )));
        }
        Ok(self.body.act(&Perm::swap(c, self.bound)))
    }

    /// Representative whose bound name is the smallest non-free name.
    pub fn canonical(&self) -> Self {
        let c = fresh_name(&self.support());
        if c == self.bound {
            return self.clone();
        }
        Abstraction {
            bound: c,
            body: self.body.act(&Perm::swap(c, self.bound)),
        }
    }
}

impl<E: Nominal> Nominal for Abstraction<E> {
    fn act(&self, p: &Perm) -> Self {
        Abstraction {
            bound: p.apply(self.bound),
            body: self.body.act(p),
        }
    }

    fn support(&self) -> NameSet {
        self.body.support().without(self.bound)
    }
}

/// Alpha-equivalence of two abstractions, given the body equality: rename
/// both bound names to one name fresh for everything involved and compare.
pub fn alpha_equal<E, F>(x: &Abstraction<E>, y: &Abstraction<E>, eq: F) -> bool
where
    E: Nominal,
    F: Fn(&E, &E) -> bool,
{
    if x.bound == y.bound {
        return eq(&x.body, &y.body);
    }
    let mut avoid = x.body.support().union(&y.body.support());
    avoid.insert(x.bound);
    avoid.insert(y.bound);
    let c = fresh_name(&avoid);
    eq(
        &x.body.act(&Perm::swap(c, x.bound)),
        &y.body.act(&Perm::swap(c, y.bound)),
    )
}

impl<E: Nominal + PartialEq> PartialEq for Abstraction<E> {
    fn eq(&self, other: &Self) -> bool {
        alpha_equal(self, other, |a, b| a == b)
    }
}

impl<E: Nominal + Eq> Eq for Abstraction<E> {}

impl<E: Nominal + Clone + Hash> Hash for Abstraction<E> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.bound.hash(state);
        c.body.hash(state);
    }
}

/// Extends `f`, defined on representatives `(a, x)` with `a` fresh for
/// `params`, to the abstraction. The bound name is renamed to the smallest
/// name fresh for both `params` and the abstraction before `f` runs, and
/// the result is spot-checked for freshness of that name.
pub fn extend_over_abstraction<E, R, F>(
    abs: &Abstraction<E>,
    params: &NameSet,
    f: F,
) -> Result<R, Error>
where
    E: Nominal + Clone,
    R: Nominal,
    F: FnOnce(Name, &E) -> R,
{
    let c = fresh_name(&params.union(&abs.support()));
    extend_at(abs, c, params, f)
}

/// As [`extend_over_abstraction`] but evaluates at the given fresh name.
pub fn extend_at<E, R, F>(abs: &Abstraction<E>, c: Name, params: &NameSet, f: F) -> Result<R, Error>
where
    E: Nominal + Clone,
    R: Nominal,
    F: FnOnce(Name, &E) -> R,
{
    if params.contains(c) {
        return Err(Error::ContractViolation(format!("{c} is a parameter name")));
    }
    let body = abs.instantiate(c)?;
    let out = f(c, &body);
    if !out.is_fresh(c) {
        return Err(Error::ContractViolation(format!(
            "bound name {c} escapes into the result"
        )));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(i: u32) -> Name {
        Name(i)
    }

    #[test]
    fn fresh_name_picks_smallest_unused() {
        assert_eq!(fresh_name(&NameSet::new()), n(0));
        assert_eq!(fresh_name(&[n(0), n(1)].into_iter().collect()), n(2));
        let avoid: NameSet = [n(0), n(2)].into_iter().collect();
        let a = fresh_name(&avoid);
        assert_eq!(a, n(1));
        assert!(avoid.iter().all(|b| b != a));
    }

    #[test]
    fn transposition_and_composition() {
        let p = Perm::swap(n(0), n(1));
        assert_eq!(p.apply(n(0)), n(1));
        assert_eq!(p.apply(n(2)), n(2));
        let q = Perm::swap(n(1), n(2));
        let pq = p.compose(&q);
        for a in 0..4 {
            assert_eq!(pq.apply(n(a)), p.apply(q.apply(n(a))));
        }
        assert_eq!(pq.compose(&pq.inverse()), Perm::identity());
    }

    #[test]
    fn from_pairs_rejects_non_bijections() {
        assert!(Perm::from_pairs([(n(0), n(1))]).is_err());
        assert!(Perm::from_pairs([(n(0), n(1)), (n(1), n(0))]).is_ok());
        assert!(Perm::from_pairs([(n(0), n(1)), (n(0), n(2))]).is_err());
    }

    #[test]
    fn name_round_trips_through_text() {
        assert_eq!("a17".parse::<Name>().unwrap(), n(17));
        assert!("b1".parse::<Name>().is_err());
        assert_eq!(n(3).to_string(), "a3");
    }

    #[test]
    fn alpha_equality_of_name_bodies() {
        let x = Abstraction::new(n(0), n(0));
        let y = Abstraction::new(n(1), n(1));
        assert_eq!(x, y);
        let x = Abstraction::new(n(0), n(1));
        let y = Abstraction::new(n(1), n(0));
        assert_ne!(x, y);
        assert_eq!(x, x.clone());
        assert_eq!(x.canonical().bound(), n(0));
    }

    #[test]
    fn extension_is_representative_independent() {
        let abs = Abstraction::new(n(0), (n(0), n(3)));
        let f = |a: Name, body: &(Name, Name)| Abstraction::new(a, *body);
        let r1 = extend_at(&abs, n(5), &NameSet::new(), f).unwrap();
        let r2 = extend_at(&abs, n(7), &NameSet::new(), f).unwrap();
        assert_eq!(r1, r2);
        // the body mentions the parameter-free name a3, so a3 is not fresh
        assert!(extend_at(&abs, n(3), &NameSet::new(), f).is_err());
        // returning the bound name itself violates the freshness hypothesis
        let leak = extend_over_abstraction(&abs, &NameSet::new(), |a, _| a);
        assert!(leak.is_err());
    }
}
