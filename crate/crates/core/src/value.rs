//! The universal element type shared by every carrier.
//!
//! A [`Value`] is an immutable, reference-counted tree. Its least support
//! and its term rank are computed once, at construction. Binders are kept in
//! canonical form (bound name = smallest name not free), so structural
//! equality coincides with alpha-equivalence.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::free;
use crate::kan::{BoxKind, OpenBox};
use crate::nominal::{Abstraction, Name, NameSet, Nominal, Perm};
use crate::zsub::Bit;

/// A coordinate of a cube point: either a name or a constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CubeVal {
    Name(Name),
    Bit(Bit),
}

impl fmt::Display for CubeVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CubeVal::Name(a) => write!(f, "{a}"),
            CubeVal::Bit(b) => write!(f, "{b}"),
        }
    }
}

/// A point of a representable cube `□_A`: a map `A → 𝔸 ⊎ {0,1}` that is
/// injective where it takes names. The keys are coordinate labels and are
/// not themselves part of the support.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubePoint(BTreeMap<Name, CubeVal>);

impl CubePoint {
    /// Builds a point, rejecting non-injective name coordinates.
    pub fn new(coords: BTreeMap<Name, CubeVal>) -> Option<Self> {
        let mut seen = NameSet::new();
        for v in coords.values() {
            if let CubeVal::Name(a) = v {
                if !seen.insert(*a) {
                    return None;
                }
            }
        }
        Some(CubePoint(coords))
    }

    /// The generic point `1_A`: every coordinate is its own label.
    pub fn identity(keys: &NameSet) -> Self {
        CubePoint(keys.iter().map(|a| (a, CubeVal::Name(a))).collect())
    }

    pub fn coords(&self) -> &BTreeMap<Name, CubeVal> {
        &self.0
    }

    pub fn get(&self, key: Name) -> Option<CubeVal> {
        self.0.get(&key).copied()
    }

    pub fn keys(&self) -> NameSet {
        self.0.keys().copied().collect()
    }

    pub fn with(&self, key: Name, v: CubeVal) -> Option<Self> {
        let mut m = self.0.clone();
        m.insert(key, v);
        CubePoint::new(m)
    }

    pub fn names(&self) -> NameSet {
        self.0
            .values()
            .filter_map(|v| match v {
                CubeVal::Name(a) => Some(*a),
                CubeVal::Bit(_) => None,
            })
            .collect()
    }

    pub fn subst(&self, a: Name, i: Bit) -> Self {
        CubePoint(
            self.0
                .iter()
                .map(|(k, v)| {
                    let v = if *v == CubeVal::Name(a) {
                        CubeVal::Bit(i)
                    } else {
                        *v
                    };
                    (*k, v)
                })
                .collect(),
        )
    }
}

impl Nominal for CubePoint {
    fn act(&self, p: &Perm) -> Self {
        CubePoint(
            self.0
                .iter()
                .map(|(k, v)| {
                    let v = match v {
                        CubeVal::Name(a) => CubeVal::Name(p.apply(*a)),
                        b => *b,
                    };
                    (*k, v)
                })
                .collect(),
        )
    }

    fn support(&self) -> NameSet {
        self.names()
    }
}

/// An element of a free fibration `K f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum KTerm {
    /// The unit `λ_f(x)`.
    Base(Value),
    /// The formal filler of an open box (up or down according to its kind).
    Filler(OpenBox),
    /// The formal composite: the missing face of the box, with the box
    /// direction bound.
    Composite(Abstraction<OpenBox>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Unit,
    Cube(CubePoint),
    Pair(Value, Value),
    Abs(Abstraction<Value>),
    Term(KTerm),
}

struct Inner {
    node: Node,
    support: NameSet,
    rank: usize,
}

#[derive(Clone)]
pub struct Value(Arc<Inner>);

impl Value {
    fn build(node: Node, support: NameSet, rank: usize) -> Value {
        Value(Arc::new(Inner {
            node,
            support,
            rank,
        }))
    }

    pub fn unit() -> Value {
        Value::build(Node::Unit, NameSet::new(), 0)
    }

    pub fn cube(p: CubePoint) -> Value {
        let s = p.names();
        Value::build(Node::Cube(p), s, 0)
    }

    pub fn pair(x: Value, y: Value) -> Value {
        let s = x.support().union(y.support());
        Value::build(Node::Pair(x, y), s, 0)
    }

    /// `⟨a⟩x`, stored canonically.
    pub fn abs(a: Name, body: Value) -> Value {
        let abs = Abstraction::new(a, body).canonical();
        let s = abs.support();
        Value::build(Node::Abs(abs), s, 0)
    }

    /// The unit `λ(x)` of a free fibration.
    pub fn base(x: Value) -> Value {
        let s = x.support().clone();
        Value::build(Node::Term(KTerm::Base(x)), s, 0)
    }

    /// The formal filler of `bx`.
    pub fn filler(bx: OpenBox) -> Value {
        let s = bx.support();
        let r = box_rank(&bx);
        Value::build(Node::Term(KTerm::Filler(bx)), s, r)
    }

    /// The formal composite of `bx`, binding its direction.
    pub fn composite(bx: OpenBox) -> Value {
        Value::composite_abs(Abstraction::new(bx.dir(), bx))
    }

    pub(crate) fn composite_abs(abs: Abstraction<OpenBox>) -> Value {
        debug_assert_eq!(abs.bound(), abs.body().dir());
        let abs = abs.canonical();
        let s = abs.support();
        let r = box_rank(abs.body());
        Value::build(Node::Term(KTerm::Composite(abs)), s, r)
    }

    pub fn node(&self) -> &Node {
        &self.0.node
    }

    /// The least support.
    pub fn support(&self) -> &NameSet {
        &self.0.support
    }

    /// Term rank: 0 for units and non-terms, one more than the largest face
    /// rank for fillers and composites.
    pub fn rank(&self) -> usize {
        self.0.rank
    }

    pub fn ptr_eq(&self, other: &Value) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn as_term(&self) -> Option<&KTerm> {
        match &self.0.node {
            Node::Term(t) => Some(t),
            _ => None,
        }
    }

    pub fn as_pair(&self) -> Option<(&Value, &Value)> {
        match &self.0.node {
            Node::Pair(x, y) => Some((x, y)),
            _ => None,
        }
    }

    pub fn as_cube(&self) -> Option<&CubePoint> {
        match &self.0.node {
            Node::Cube(p) => Some(p),
            _ => None,
        }
    }

    pub fn as_abs(&self) -> Option<&Abstraction<Value>> {
        match &self.0.node {
            Node::Abs(a) => Some(a),
            _ => None,
        }
    }

    /// The `x` of `λ(x)`.
    pub fn as_base(&self) -> Option<&Value> {
        match &self.0.node {
            Node::Term(KTerm::Base(x)) => Some(x),
            _ => None,
        }
    }

    /// Structural substitution `x(a := i)`.
    pub fn subst(&self, a: Name, i: Bit) -> Value {
        match &self.0.node {
            Node::Term(t) => free::subst_term(self, t, a, i),
            _ if !self.support().contains(a) => self.clone(),
            Node::Unit => self.clone(),
            Node::Cube(p) => Value::cube(p.subst(a, i)),
            Node::Pair(x, y) => Value::pair(x.subst(a, i), y.subst(a, i)),
            Node::Abs(abs) => {
                if abs.bound() == a {
                    self.clone()
                } else {
                    Value::abs(abs.bound(), abs.body().subst(a, i))
                }
            }
        }
    }

    fn moved_by(&self, p: &Perm) -> bool {
        p.pairs().any(|(a, _)| self.support().contains(a))
    }
}

fn box_rank(bx: &OpenBox) -> usize {
    1 + bx.faces().values().map(Value::rank).max().unwrap_or(0)
}

impl Nominal for Value {
    fn act(&self, p: &Perm) -> Self {
        if !self.moved_by(p) {
            return self.clone();
        }
        match &self.0.node {
            Node::Unit => self.clone(),
            Node::Cube(c) => Value::cube(c.act(p)),
            Node::Pair(x, y) => Value::pair(x.act(p), y.act(p)),
            Node::Abs(abs) => Value::abs(p.apply(abs.bound()), abs.body().act(p)),
            Node::Term(KTerm::Base(x)) => Value::base(x.act(p)),
            Node::Term(KTerm::Filler(bx)) => Value::filler(bx.act(p)),
            Node::Term(KTerm::Composite(abs)) => Value::composite_abs(abs.act(p)),
        }
    }

    fn support(&self) -> NameSet {
        self.0.support.clone()
    }

    fn is_fresh(&self, a: Name) -> bool {
        !self.0.support.contains(a)
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        self.ptr_eq(other)
            || (self.0.rank == other.0.rank
                && self.0.support == other.0.support
                && self.0.node == other.0.node)
    }
}

impl Eq for Value {}

impl Hash for Value {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.node.hash(state);
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.node {
            Node::Unit => write!(f, "*"),
            Node::Cube(p) => {
                write!(f, "[")?;
                for (k, (key, v)) in p.coords().iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{key}={v}")?;
                }
                write!(f, "]")
            }
            Node::Pair(x, y) => write!(f, "({x}, {y})"),
            Node::Abs(abs) => write!(f, "<{}>{}", abs.bound(), abs.body()),
            Node::Term(KTerm::Base(x)) => write!(f, "base({x})"),
            Node::Term(KTerm::Filler(bx)) => {
                let tag = match bx.kind() {
                    BoxKind::Up => "up",
                    BoxKind::Down => "down",
                };
                write!(f, "{tag}")?;
                fmt_box(f, bx)
            }
            Node::Term(KTerm::Composite(abs)) => {
                let tag = match abs.body().kind() {
                    BoxKind::Up => "plus",
                    BoxKind::Down => "minus",
                };
                write!(f, "{tag}<{}>", abs.bound())?;
                fmt_box(f, abs.body())
            }
        }
    }
}

fn fmt_box(f: &mut fmt::Formatter<'_>, bx: &OpenBox) -> fmt::Result {
    write!(f, "[{}]{{", bx.dir())?;
    for (k, ((b, i), face)) in bx.faces().iter().enumerate() {
        if k > 0 {
            write!(f, "; ")?;
        }
        write!(f, "{b}{i}: {face}")?;
    }
    write!(f, " | {}}}", bx.base())
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(coords: &[(u32, CubeVal)]) -> Value {
        Value::cube(CubePoint::new(coords.iter().map(|(k, v)| (Name(*k), *v)).collect()).unwrap())
    }

    #[test]
    fn cube_points_must_be_injective_on_names() {
        let a = CubeVal::Name(Name(5));
        let m: BTreeMap<_, _> = [(Name(0), a), (Name(1), a)].into_iter().collect();
        assert!(CubePoint::new(m).is_none());
    }

    #[test]
    fn substitution_removes_the_name() {
        let x = pt(&[(0, CubeVal::Name(Name(3))), (1, CubeVal::Name(Name(4)))]);
        let y = x.subst(Name(3), Bit::One);
        assert!(!y.support().contains(Name(3)));
        assert_eq!(y.subst(Name(3), Bit::Zero), y);
        assert_eq!(
            y,
            pt(&[(0, CubeVal::Bit(Bit::One)), (1, CubeVal::Name(Name(4)))])
        );
    }

    #[test]
    fn abstractions_are_canonical() {
        let body = pt(&[(0, CubeVal::Name(Name(7))), (1, CubeVal::Name(Name(2)))]);
        let x = Value::abs(Name(7), body.clone());
        let y = Value::abs(Name(9), body.act(&Perm::swap(Name(7), Name(9))));
        assert_eq!(x, y);
        assert_eq!(x.as_abs().unwrap().bound(), Name(0));
        assert_eq!(x.support().to_vec(), vec![Name(2)]);
    }

    #[test]
    fn untouched_values_are_shared() {
        let x = pt(&[(0, CubeVal::Name(Name(1)))]);
        assert!(x.act(&Perm::swap(Name(4), Name(5))).ptr_eq(&x));
        assert!(x.subst(Name(4), Bit::Zero).ptr_eq(&x));
    }
}
