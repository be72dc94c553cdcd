//! 01-substitution sets and their morphisms.
//!
//! A carrier is a nominal set of [`Value`]s closed under the substitutions
//! `(a := 0)` and `(a := 1)`. The default operations are the structural ones
//! on values; a carrier may override them (the axiom checker is meant to
//! catch carriers that get them wrong).

use std::fmt;
use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::kan::BoxKind;
use crate::nominal::{fresh_name, Name, NameSet, Nominal, Perm};
use crate::report::{witness, LawReport};
use crate::sample::{self, GenConfig, Rng};
use crate::value::{CubePoint, CubeVal, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn from_u8(b: u8) -> Option<Bit> {
        match b {
            0 => Some(Bit::Zero),
            1 => Some(Bit::One),
            _ => None,
        }
    }

    pub const BOTH: [Bit; 2] = [Bit::Zero, Bit::One];
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

/// The operations of a 01-substitution set, on its elements.
pub trait Carrier: Send + Sync {
    fn describe(&self) -> String;

    fn contains(&self, x: &Value) -> bool;

    /// A random element; `size` bounds the nesting of term constructors.
    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value;

    fn act(&self, p: &Perm, x: &Value) -> Value {
        x.act(p)
    }

    fn subst(&self, x: &Value, a: Name, i: Bit) -> Value {
        x.subst(a, i)
    }

    fn support(&self, x: &Value) -> NameSet {
        x.support().clone()
    }

    fn equal(&self, x: &Value, y: &Value) -> bool {
        x == y
    }

    /// Whether [`Carrier::support`] returns the least support.
    fn exact_support(&self) -> bool {
        true
    }
}

#[derive(Clone)]
pub struct ZObject(Arc<dyn Carrier>);

impl ZObject {
    pub fn new(c: impl Carrier + 'static) -> Self {
        ZObject(Arc::new(c))
    }

    pub fn describe(&self) -> String {
        self.0.describe()
    }

    pub fn contains(&self, x: &Value) -> bool {
        self.0.contains(x)
    }

    pub fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        self.0.sample(rng, cfg, size)
    }

    pub fn act(&self, p: &Perm, x: &Value) -> Value {
        self.0.act(p, x)
    }

    pub fn subst(&self, x: &Value, a: Name, i: Bit) -> Value {
        self.0.subst(x, a, i)
    }

    pub fn support(&self, x: &Value) -> NameSet {
        self.0.support(x)
    }

    pub fn equal(&self, x: &Value, y: &Value) -> bool {
        self.0.equal(x, y)
    }

    pub fn exact_support(&self) -> bool {
        self.0.exact_support()
    }

    pub fn same(&self, other: &ZObject) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl fmt::Debug for ZObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZObject({})", self.describe())
    }
}

pub type MapFn = Arc<dyn Fn(&Value) -> Value + Send + Sync>;

/// An equivariant map commuting with substitution.
#[derive(Clone)]
pub struct ZMorphism {
    label: String,
    source: ZObject,
    target: ZObject,
    map: MapFn,
}

impl ZMorphism {
    pub fn new(
        label: impl Into<String>,
        source: ZObject,
        target: ZObject,
        map: impl Fn(&Value) -> Value + Send + Sync + 'static,
    ) -> Self {
        ZMorphism {
            label: label.into(),
            source,
            target,
            map: Arc::new(map),
        }
    }

    pub fn from_fn(label: impl Into<String>, source: ZObject, target: ZObject, map: MapFn) -> Self {
        ZMorphism {
            label: label.into(),
            source,
            target,
            map,
        }
    }

    pub fn identity(x: &ZObject) -> Self {
        ZMorphism::new(format!("id({})", x.describe()), x.clone(), x.clone(), |v| {
            v.clone()
        })
    }

    /// The unique map to the terminal object.
    pub fn to_terminal(x: &ZObject) -> Self {
        ZMorphism::new(
            format!("!({})", x.describe()),
            x.clone(),
            terminal_object(),
            |_| Value::unit(),
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn source(&self) -> &ZObject {
        &self.source
    }

    pub fn target(&self) -> &ZObject {
        &self.target
    }

    pub fn apply(&self, x: &Value) -> Value {
        (self.map)(x)
    }

    pub fn map_fn(&self) -> MapFn {
        self.map.clone()
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &ZMorphism) -> ZMorphism {
        let (g, f) = (self.map.clone(), first.map.clone());
        ZMorphism::new(
            format!("{}∘{}", self.label, first.label),
            first.source.clone(),
            self.target.clone(),
            move |x| g(&f(x)),
        )
    }

    pub fn same(&self, other: &ZMorphism) -> bool {
        Arc::ptr_eq(&self.map, &other.map)
    }
}

impl fmt::Debug for ZMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZMorphism({})", self.label)
    }
}

struct Structural;

impl Carrier for Structural {
    fn describe(&self) -> String {
        "values".into()
    }

    fn contains(&self, _: &Value) -> bool {
        true
    }

    fn sample(&self, _: &mut Rng, _: &GenConfig, _: usize) -> Value {
        Value::unit()
    }
}

/// All values with their structural operations.
pub(crate) fn structural_object() -> &'static ZObject {
    static OBJ: std::sync::OnceLock<ZObject> = std::sync::OnceLock::new();
    OBJ.get_or_init(|| ZObject::new(Structural))
}

struct Terminal;

impl Carrier for Terminal {
    fn describe(&self) -> String {
        "1".into()
    }

    fn contains(&self, x: &Value) -> bool {
        matches!(x.node(), crate::value::Node::Unit)
    }

    fn sample(&self, _: &mut Rng, _: &GenConfig, _: usize) -> Value {
        Value::unit()
    }
}

pub fn terminal_object() -> ZObject {
    ZObject::new(Terminal)
}

/// Random point of `□_keys`: each coordinate is a bit with probability 1/3,
/// otherwise a name not yet used by the point.
fn sample_point(rng: &mut Rng, cfg: &GenConfig, keys: &NameSet) -> CubePoint {
    let mut coords = std::collections::BTreeMap::new();
    let mut used = NameSet::new();
    for k in keys.iter() {
        let v = if rng.gen_bool(1.0 / 3.0) {
            CubeVal::Bit(sample::bit(rng))
        } else {
            let a = sample::name(rng, cfg);
            if used.contains(a) {
                CubeVal::Name(fresh_name(&used.union(&cfg.alphabet())))
            } else {
                CubeVal::Name(a)
            }
        };
        if let CubeVal::Name(a) = v {
            used.insert(a);
        }
        coords.insert(k, v);
    }
    CubePoint::new(coords).expect("names kept distinct")
}

struct Cube {
    keys: NameSet,
}

impl Carrier for Cube {
    fn describe(&self) -> String {
        format!("□{}", self.keys)
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_cube().is_some_and(|p| p.keys() == self.keys)
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, _: usize) -> Value {
        Value::cube(sample_point(rng, cfg, &self.keys))
    }
}

/// The representable cube `□_A`.
pub fn cube_object(keys: &NameSet) -> ZObject {
    ZObject::new(Cube { keys: keys.clone() })
}

struct OpenBoxShape {
    kind: BoxKind,
    keys: NameSet,
    dir: Name,
}

impl OpenBoxShape {
    fn in_shape(&self, p: &CubePoint) -> bool {
        p.keys() == self.keys
            && crate::kan::box_indices(self.kind, &self.keys, self.dir)
                .into_iter()
                .any(|(b, i)| p.get(b) == Some(CubeVal::Bit(i)))
    }
}

impl Carrier for OpenBoxShape {
    fn describe(&self) -> String {
        let tag = match self.kind {
            BoxKind::Up => "⊔",
            BoxKind::Down => "⊓",
        };
        format!("{tag}{},{}", self.keys, self.dir)
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_cube().is_some_and(|p| self.in_shape(p))
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, _: usize) -> Value {
        let p = sample_point(rng, cfg, &self.keys);
        let idx = crate::kan::box_indices(self.kind, &self.keys, self.dir);
        let (b, i) = idx[rng.gen_range(0..idx.len())];
        Value::cube(p.with(b, CubeVal::Bit(i)).expect("bits keep injectivity"))
    }
}

/// The open-box subobject `⊔_{A,a}` (up) or `⊓_{A,a}` (down) of `□_A`:
/// points lying on some face of the box.
pub fn open_box_subobject(kind: BoxKind, keys: &NameSet, dir: Name) -> Result<ZObject> {
    if !keys.contains(dir) {
        return Err(Error::MalformedBox(format!(
            "direction {dir} not among {keys}"
        )));
    }
    Ok(ZObject::new(OpenBoxShape {
        kind,
        keys: keys.clone(),
        dir,
    }))
}

struct SeparatedProduct {
    left: ZObject,
    right: ZObject,
}

impl Carrier for SeparatedProduct {
    fn describe(&self) -> String {
        format!("{} ∗ {}", self.left.describe(), self.right.describe())
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_pair().is_some_and(|(l, r)| {
            self.left.contains(l)
                && self.right.contains(r)
                && self.left.support(l).is_disjoint(&self.right.support(r))
        })
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        let x = self.left.sample(rng, cfg, size);
        let y = self.right.sample(rng, cfg, size);
        Value::pair(x.clone(), separate(&x, &y, &self.right))
    }
}

/// Renames the names `y` shares with `x` to fresh ones.
fn separate(x: &Value, y: &Value, y_obj: &ZObject) -> Value {
    let sx = x.support();
    let sy = y.support();
    let clash = sx.intersection(sy);
    if clash.is_empty() {
        return y.clone();
    }
    let mut avoid = sx.union(sy);
    let mut p = Perm::identity();
    for a in clash.iter() {
        let c = fresh_name(&avoid);
        avoid.insert(c);
        p = Perm::swap(a, c).compose(&p);
    }
    y_obj.act(&p, y)
}

/// The separated product `X ∗ Y`: pairs with disjoint supports.
pub fn separated_product(left: &ZObject, right: &ZObject) -> ZObject {
    ZObject::new(SeparatedProduct {
        left: left.clone(),
        right: right.clone(),
    })
}

/// Pairs `(x, y)` with disjoint supports, or an error naming the overlap.
pub fn separated_pair(x: &Value, y: &Value) -> Result<Value> {
    let overlap = x.support().intersection(y.support());
    if !overlap.is_empty() {
        return Err(Error::NotMember(format!(
            "separated product: shared names {overlap}"
        )));
    }
    Ok(Value::pair(x.clone(), y.clone()))
}

pub type Sampler = Arc<dyn Fn(&mut Rng, &GenConfig, usize) -> Option<Value> + Send + Sync>;

struct Pullback {
    f: ZMorphism,
    g: ZMorphism,
    sampler: Option<Sampler>,
}

impl Carrier for Pullback {
    fn describe(&self) -> String {
        format!(
            "{} ×_{} {}",
            self.f.source().describe(),
            self.f.target().describe(),
            self.g.source().describe()
        )
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_pair().is_some_and(|(l, r)| {
            self.f.source().contains(l)
                && self.g.source().contains(r)
                && self.f.target().equal(&self.f.apply(l), &self.g.apply(r))
        })
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        if let Some(s) = &self.sampler {
            if let Some(v) = s(rng, cfg, size) {
                return v;
            }
        }
        let same_source = self.f.source().same(self.g.source());
        for _ in 0..32 {
            let x = self.f.source().sample(rng, cfg, size);
            let fx = self.f.apply(&x);
            if same_source && self.f.target().equal(&fx, &self.g.apply(&x)) && rng.gen_bool(0.3) {
                return Value::pair(x.clone(), x);
            }
            let z = self.g.source().sample(rng, cfg, size);
            if self.f.target().equal(&fx, &self.g.apply(&z)) {
                return Value::pair(x, z);
            }
        }
        panic!(
            "could not sample the pullback {}; supply a sampler",
            self.describe()
        );
    }
}

/// A pullback `X ×_Z Y` of `f: X → Z` and `g: Y → Z`.
#[derive(Clone)]
pub struct PullbackObject {
    pub object: ZObject,
    pub f: ZMorphism,
    pub g: ZMorphism,
}

impl PullbackObject {
    pub fn pair(&self, x: &Value, y: &Value) -> Result<Value> {
        let v = Value::pair(x.clone(), y.clone());
        if self.object.contains(&v) {
            Ok(v)
        } else {
            Err(Error::NotMember(self.object.describe()))
        }
    }

    pub fn first(&self) -> ZMorphism {
        ZMorphism::new("fst", self.object.clone(), self.f.source().clone(), |v| {
            v.as_pair().expect("pullback element").0.clone()
        })
    }

    pub fn second(&self) -> ZMorphism {
        ZMorphism::new("snd", self.object.clone(), self.g.source().clone(), |v| {
            v.as_pair().expect("pullback element").1.clone()
        })
    }
}

pub fn pullback_object(f: &ZMorphism, g: &ZMorphism) -> PullbackObject {
    pullback_object_with_sampler(f, g, None)
}

pub fn pullback_object_with_sampler(
    f: &ZMorphism,
    g: &ZMorphism,
    sampler: Option<Sampler>,
) -> PullbackObject {
    PullbackObject {
        object: ZObject::new(Pullback {
            f: f.clone(),
            g: g.clone(),
            sampler,
        }),
        f: f.clone(),
        g: g.clone(),
    }
}

struct Abstractions {
    inner: ZObject,
}

impl Carrier for Abstractions {
    fn describe(&self) -> String {
        format!("[𝔸]{}", self.inner.describe())
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_abs()
            .is_some_and(|abs| self.inner.contains(abs.body()))
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        let x = self.inner.sample(rng, cfg, size);
        let a = sample::name_from(rng, cfg, x.support());
        Value::abs(a, x)
    }
}

/// The name-abstraction object `[𝔸]X`.
pub fn abstraction_object(inner: &ZObject) -> ZObject {
    ZObject::new(Abstractions {
        inner: inner.clone(),
    })
}

struct FibredAbstractions {
    f: ZMorphism,
}

impl Carrier for FibredAbstractions {
    fn describe(&self) -> String {
        format!("[𝔸]_{}", self.f.label())
    }

    fn contains(&self, x: &Value) -> bool {
        x.as_abs().is_some_and(|abs| {
            self.f.source().contains(abs.body())
                && !self
                    .f
                    .target()
                    .support(&self.f.apply(abs.body()))
                    .contains(abs.bound())
        })
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        let x = self.f.source().sample(rng, cfg, size);
        let over = self.f.target().support(&self.f.apply(&x));
        let candidates = x.support().difference(&over);
        let a = if candidates.is_empty() {
            fresh_name(&x.support().union(&over))
        } else {
            sample::pick(rng, &candidates).expect("non-empty")
        };
        Value::abs(a, x)
    }
}

/// Abstractions `⟨a⟩x` over `f: X → Y` whose image `f(x)` does not mention
/// the bound name.
pub fn fibred_abstraction(f: &ZMorphism) -> ZObject {
    ZObject::new(FibredAbstractions { f: f.clone() })
}

struct WithSampler {
    inner: ZObject,
    extra: Sampler,
    weight: f64,
}

impl Carrier for WithSampler {
    fn describe(&self) -> String {
        self.inner.describe()
    }

    fn contains(&self, x: &Value) -> bool {
        self.inner.contains(x)
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        if rng.gen_bool(self.weight) {
            if let Some(v) = (self.extra)(rng, cfg, size) {
                return v;
            }
        }
        self.inner.sample(rng, cfg, size)
    }

    fn act(&self, p: &Perm, x: &Value) -> Value {
        self.inner.act(p, x)
    }

    fn subst(&self, x: &Value, a: Name, i: Bit) -> Value {
        self.inner.subst(x, a, i)
    }

    fn support(&self, x: &Value) -> NameSet {
        self.inner.support(x)
    }

    fn equal(&self, x: &Value, y: &Value) -> bool {
        self.inner.equal(x, y)
    }

    fn exact_support(&self) -> bool {
        self.inner.exact_support()
    }
}

/// The same carrier, with `extra` used for a fraction `weight` of samples.
pub fn with_sampler(inner: &ZObject, extra: Sampler, weight: f64) -> ZObject {
    ZObject::new(WithSampler {
        inner: inner.clone(),
        extra,
        weight,
    })
}

/// Names worth testing against `x`: its support, a few alphabet names and
/// one name fresh for all of those.
fn probe_names(x_support: &NameSet, cfg: &GenConfig) -> Vec<Name> {
    let mut names = x_support.union(&cfg.alphabet());
    names.insert(fresh_name(&names));
    names.to_vec()
}

/// Checks the 01-substitution-set axioms on random elements of `x`.
pub fn check_zsub_axioms(x: &ZObject, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let mut report = LawReport::new(format!("zsub:{}", x.describe()), seed, iters);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let v = x.sample(&mut rng, cfg, cfg.rank);
        report.check("zsub.sample-member", x.contains(&v), || {
            witness(&[("x", &v)])
        });
        let supp = x.support(&v);
        let names = probe_names(&supp, cfg);

        let id = x.act(&Perm::identity(), &v);
        report.check("zsub.perm-identity", x.equal(&id, &v), || {
            witness(&[("x", &v)])
        });

        let p = sample::perm(&mut rng, cfg, &supp);
        let q = sample::perm(&mut rng, cfg, &supp);
        let lhs = x.act(&p, &x.act(&q, &v));
        let rhs = x.act(&p.compose(&q), &v);
        report.check("zsub.perm-composition", x.equal(&lhs, &rhs), || {
            witness(&[("x", &v), ("p(q x)", &lhs), ("(pq) x", &rhs)])
        });
        report.check("zsub.perm-closure", x.contains(&lhs), || {
            witness(&[("x", &v), ("p x", &lhs)])
        });

        let pv = x.act(&p, &v);
        report.check(
            "zsub.support-equivariant",
            x.support(&pv) == supp.act(&p),
            || witness(&[("x", &v), ("p x", &pv)]),
        );

        // names outside the support can be swapped without effect
        let outside: Vec<Name> = names
            .iter()
            .copied()
            .filter(|a| !supp.contains(*a))
            .collect();
        if outside.len() >= 2 {
            let k = rng.gen_range(0..outside.len() - 1);
            let s = Perm::swap(outside[k], outside[k + 1]);
            let sv = x.act(&s, &v);
            report.check("zsub.support-supports", x.equal(&sv, &v), || {
                witness(&[("x", &v), ("swapped", &sv)])
            });
        }

        let a = names[rng.gen_range(0..names.len())];
        let i = sample::bit(&mut rng);
        let va = x.subst(&v, a, i);
        report.check("zsub.subst-closure", x.contains(&va), || {
            witness(&[("x", &v), ("x(a:=i)", &va)])
        });
        report.check(
            "zsub.subst-removes-name",
            !x.support(&va).contains(a),
            || witness(&[("x", &v), ("x(a:=i)", &va)]),
        );
        report.check(
            "zsub.subst-support-shrinks",
            x.support(&va).is_subset(&supp),
            || witness(&[("x", &v), ("x(a:=i)", &va)]),
        );
        if !supp.contains(a) {
            report.check("zsub.subst-fresh-trivial", x.equal(&va, &v), || {
                witness(&[("x", &v), ("x(a:=i)", &va)])
            });
        }
        let fresh = fresh_name(&supp.union(&cfg.alphabet()));
        let vf = x.subst(&v, fresh, i);
        report.check("zsub.subst-fresh-trivial", x.equal(&vf, &v), || {
            witness(&[("x", &v), ("x(c:=i)", &vf)])
        });

        let j = sample::bit(&mut rng);
        let vaa = x.subst(&va, a, j);
        report.check("zsub.subst-idempotent", x.equal(&vaa, &va), || {
            witness(&[("x", &v), ("x(a:=i)(a:=j)", &vaa)])
        });

        let b = names[rng.gen_range(0..names.len())];
        if a != b {
            let ab = x.subst(&x.subst(&v, a, i), b, j);
            let ba = x.subst(&x.subst(&v, b, j), a, i);
            report.check("zsub.subst-commute", x.equal(&ab, &ba), || {
                witness(&[("x", &v), ("x(a:=i)(b:=j)", &ab), ("x(b:=j)(a:=i)", &ba)])
            });
        }

        let lhs = x.act(&p, &va);
        let rhs = x.subst(&pv, p.apply(a), i);
        report.check("zsub.subst-equivariant", x.equal(&lhs, &rhs), || {
            witness(&[("x", &v), ("p(x(a:=i))", &lhs), ("(p x)(pa:=i)", &rhs)])
        });
    }
    report
}

/// Checks that `h` lands in its target, is equivariant, commutes with
/// substitution and does not grow supports.
pub fn check_morphism(h: &ZMorphism, iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let mut report = LawReport::new(format!("morphism:{}", h.label()), seed, iters);
    let mut rng = sample::rng(seed);
    let (src, tgt) = (h.source(), h.target());
    for _ in 0..iters {
        let x = src.sample(&mut rng, cfg, cfg.rank);
        let hx = h.apply(&x);
        report.check("morphism.lands-in-target", tgt.contains(&hx), || {
            witness(&[("x", &x), ("h x", &hx)])
        });
        let supp = src.support(&x);
        report.check(
            "morphism.support",
            tgt.support(&hx).is_subset(&supp),
            || witness(&[("x", &x), ("h x", &hx)]),
        );
        let p = sample::perm(&mut rng, cfg, &supp);
        let lhs = h.apply(&src.act(&p, &x));
        let rhs = tgt.act(&p, &hx);
        report.check("morphism.equivariant", tgt.equal(&lhs, &rhs), || {
            witness(&[("x", &x), ("h(p x)", &lhs), ("p(h x)", &rhs)])
        });
        let a = sample::name_from(&mut rng, cfg, &supp);
        let i = sample::bit(&mut rng);
        let lhs = h.apply(&src.subst(&x, a, i));
        let rhs = tgt.subst(&hx, a, i);
        report.check(
            "morphism.commutes-with-subst",
            tgt.equal(&lhs, &rhs),
            || witness(&[("x", &x), ("h(x(a:=i))", &lhs), ("h(x)(a:=i)", &rhs)]),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> GenConfig {
        GenConfig::default()
    }

    #[test]
    fn cubes_and_products_satisfy_the_axioms() {
        let keys = NameSet::first(2);
        for obj in [
            terminal_object(),
            cube_object(&keys),
            open_box_subobject(BoxKind::Up, &keys, Name(0)).unwrap(),
            separated_product(
                &cube_object(&keys),
                &cube_object(&NameSet::singleton(Name(5))),
            ),
            abstraction_object(&cube_object(&keys)),
        ] {
            let r = check_zsub_axioms(&obj, 200, 11, &cfg());
            assert!(r.is_clean(), "{}", r.to_text());
        }
    }

    #[test]
    fn open_box_points_lie_on_a_face() {
        let keys = NameSet::first(2);
        let up = open_box_subobject(BoxKind::Up, &keys, Name(0)).unwrap();
        let top = CubePoint::new(
            [
                (Name(0), CubeVal::Bit(Bit::One)),
                (Name(1), CubeVal::Name(Name(3))),
            ]
            .into_iter()
            .collect(),
        )
        .unwrap();
        assert!(!up.contains(&Value::cube(top.clone())));
        assert!(up.contains(&Value::cube(
            top.with(Name(1), CubeVal::Bit(Bit::Zero)).unwrap()
        )));
        let down = open_box_subobject(BoxKind::Down, &keys, Name(0)).unwrap();
        assert!(down.contains(&Value::cube(top)));
    }

    struct ForgetfulSubst;

    impl Carrier for ForgetfulSubst {
        fn describe(&self) -> String {
            "broken".into()
        }
        fn contains(&self, x: &Value) -> bool {
            x.as_cube().is_some()
        }
        fn sample(&self, rng: &mut Rng, cfg: &GenConfig, _: usize) -> Value {
            Value::cube(sample_point(rng, cfg, &NameSet::first(2)))
        }
        fn subst(&self, x: &Value, _: Name, _: Bit) -> Value {
            x.clone()
        }
    }

    #[test]
    fn checker_notices_a_substitution_that_does_nothing() {
        let r = check_zsub_axioms(&ZObject::new(ForgetfulSubst), 100, 3, &cfg());
        assert!(r.failed("zsub.subst-removes-name"));
    }

    #[test]
    fn separated_pairs_reject_shared_names() {
        let p = Value::cube(CubePoint::identity(&NameSet::first(1)));
        assert!(separated_pair(&p, &p).is_err());
        assert!(separated_pair(&p, &Value::unit()).is_ok());
    }

    #[test]
    fn morphisms_to_the_terminal_object_pass() {
        let h = ZMorphism::to_terminal(&cube_object(&NameSet::first(3)));
        let r = check_morphism(&h, 100, 5, &cfg());
        assert!(r.is_clean(), "{}", r.to_text());
    }
}
