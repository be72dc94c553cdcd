//! Cubes, open-box inclusions and the lifting problems they generate.
//!
//! A generating object `(kind, A, a, B)` names the inclusion
//! `⊔_{A,a} ∗ □_B → □_A ∗ □_B` (or `⊓` for down-boxes). Every such map
//! carries a coalgebra `η: □_A ∗ □_B → K ι`, and lifting data against all
//! of them is the same thing as a filling operator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::bridge::AlgebraStructure;
use crate::error::{Error, Result};
use crate::free::{kmap_value, make_free_fibration, sigma_value, FreeFibration};
use crate::kan::{
    box_indices, check_uniformity, sample_box, BoxKind, FibrationStructure, FillingOperator,
    OpenBox,
};
use crate::nominal::{fresh_name, Name, NameSet, Nominal, Perm};
use crate::report::{witness, LawReport};
use crate::sample::{self, derive_seed, GenConfig, Rng};
use crate::value::{CubePoint, CubeVal, Value};
use crate::zsub::{separated_product, Bit, MapFn, ZMorphism, ZObject};

pub use crate::zsub::{cube_object, open_box_subobject};

/// A generating object `(kind, A, a, B)`; `A` and `B` are disjoint sets of
/// coordinate labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JObject {
    kind: BoxKind,
    a_set: NameSet,
    dir: Name,
    b_set: NameSet,
}

impl JObject {
    pub fn new(kind: BoxKind, a_set: NameSet, dir: Name, b_set: NameSet) -> Result<Self> {
        if !a_set.contains(dir) {
            return Err(Error::MalformedBox(format!("{dir} not among {a_set}")));
        }
        if !a_set.is_disjoint(&b_set) {
            return Err(Error::ContractViolation(format!(
                "box coordinates {a_set} and side coordinates {b_set} overlap"
            )));
        }
        Ok(JObject {
            kind,
            a_set,
            dir,
            b_set,
        })
    }

    pub fn kind(&self) -> BoxKind {
        self.kind
    }

    pub fn a_set(&self) -> &NameSet {
        &self.a_set
    }

    pub fn dir(&self) -> Name {
        self.dir
    }

    pub fn b_set(&self) -> &NameSet {
        &self.b_set
    }

    /// `⊔_{A,a} ∗ □_B`.
    pub fn domain(&self) -> ZObject {
        let open = open_box_subobject(self.kind, &self.a_set, self.dir).expect("dir ∈ A");
        separated_product(&open, &cube_object(&self.b_set))
    }

    /// `□_A ∗ □_B`.
    pub fn codomain(&self) -> ZObject {
        separated_product(&cube_object(&self.a_set), &cube_object(&self.b_set))
    }

    /// The inclusion `ι = J(kind, A, a, B)`.
    pub fn j_map(&self) -> ZMorphism {
        ZMorphism::new(
            format!("J{self}"),
            self.domain(),
            self.codomain(),
            Value::clone,
        )
    }

    /// `(1_A, 1_B)`.
    pub fn generic_point(&self) -> Value {
        Value::pair(
            Value::cube(CubePoint::identity(&self.a_set)),
            Value::cube(CubePoint::identity(&self.b_set)),
        )
    }

    /// The point `\overline{(b, i)}`: coordinate `b` set to `i`, the rest
    /// generic.
    pub fn face_point(&self, b: Name, i: Bit) -> Value {
        let p = CubePoint::identity(&self.a_set)
            .with(b, CubeVal::Bit(i))
            .expect("bits are injective");
        Value::pair(
            Value::cube(p),
            Value::cube(CubePoint::identity(&self.b_set)),
        )
    }
}

impl fmt::Display for JObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {}, {})",
            self.kind, self.a_set, self.dir, self.b_set
        )
    }
}

/// Implementation of `J(ι)` from the inclusion map.
pub fn j_map(obj: &JObject) -> ZMorphism {
    obj.j_map()
}

/// A morphism `(f, g): O → O'` of generating objects, with `f: A' → A` a
/// bijection sending `a'` to `a` and `g: B' → B ⊎ 2` injective where it
/// takes names. It acts on points by precomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JMorphism {
    from: JObject,
    to: JObject,
    f: BTreeMap<Name, Name>,
    g: BTreeMap<Name, CubeVal>,
}

impl JMorphism {
    pub fn new(
        from: JObject,
        to: JObject,
        f: BTreeMap<Name, Name>,
        g: BTreeMap<Name, CubeVal>,
    ) -> Result<Self> {
        let bad = |m: &str| Err(Error::ContractViolation(m.to_string()));
        if from.kind != to.kind {
            return bad("box kinds differ");
        }
        let dom: NameSet = f.keys().copied().collect();
        let img: NameSet = f.values().copied().collect();
        if dom != to.a_set || img != from.a_set || img.len() != f.len() {
            return bad("f is not a bijection between the box coordinates");
        }
        if f.get(&to.dir) != Some(&from.dir) {
            return bad("f does not send the open direction to the open direction");
        }
        let gdom: NameSet = g.keys().copied().collect();
        if gdom != to.b_set {
            return bad("g is not defined on the side coordinates");
        }
        let mut seen = NameSet::new();
        for v in g.values() {
            if let CubeVal::Name(b) = v {
                if !from.b_set.contains(*b) || !seen.insert(*b) {
                    return bad("g is not injective where defined");
                }
            }
        }
        Ok(JMorphism { from, to, f, g })
    }

    pub fn identity(obj: &JObject) -> Self {
        JMorphism {
            from: obj.clone(),
            to: obj.clone(),
            f: obj.a_set.iter().map(|a| (a, a)).collect(),
            g: obj.b_set.iter().map(|b| (b, CubeVal::Name(b))).collect(),
        }
    }

    pub fn from(&self) -> &JObject {
        &self.from
    }

    pub fn to(&self) -> &JObject {
        &self.to
    }

    /// `J(f, g)(p, q) = (p ∘ f, q ∘ g)`.
    pub fn apply(&self, pt: &Value) -> Value {
        let (p, q) = split_point(pt);
        let pf: BTreeMap<Name, CubeVal> = self
            .f
            .iter()
            .map(|(k, v)| (*k, p.get(*v).expect("point defined on A")))
            .collect();
        let qg: BTreeMap<Name, CubeVal> = self
            .g
            .iter()
            .map(|(k, v)| {
                let w = match v {
                    CubeVal::Bit(i) => CubeVal::Bit(*i),
                    CubeVal::Name(b) => q.get(*b).expect("point defined on B"),
                };
                (*k, w)
            })
            .collect();
        Value::pair(
            Value::cube(CubePoint::new(pf).expect("bijection keeps injectivity")),
            Value::cube(CubePoint::new(qg).expect("g is injective where defined")),
        )
    }

    /// `next ∘ self`, for `self: O → O'` and `next: O' → O''`.
    pub fn then(&self, next: &JMorphism) -> Result<JMorphism> {
        if next.from != self.to {
            return Err(Error::ContractViolation(
                "morphisms are not composable".into(),
            ));
        }
        let f = next.f.iter().map(|(k, v)| (*k, self.f[v])).collect();
        let g = next
            .g
            .iter()
            .map(|(k, v)| {
                let w = match v {
                    CubeVal::Bit(i) => CubeVal::Bit(*i),
                    CubeVal::Name(b) => self.g[b],
                };
                (*k, w)
            })
            .collect();
        JMorphism::new(self.from.clone(), next.to.clone(), f, g)
    }

    pub fn as_morphism(&self) -> ZMorphism {
        let me = self.clone();
        ZMorphism::new(
            format!("J{}→{}", self.from, self.to),
            self.from.codomain(),
            self.to.codomain(),
            move |pt| me.apply(pt),
        )
    }
}

fn split_point(pt: &Value) -> (&CubePoint, &CubePoint) {
    let (p, q) = pt
        .as_pair()
        .expect("a point of a separated product of cubes");
    (
        p.as_cube().expect("cube point"),
        q.as_cube().expect("cube point"),
    )
}

/// A random morphism into `to`: the box coordinates are renamed by a
/// random bijection and the side coordinates come from a random map into
/// fresh labels and bits.
pub fn sample_jmorphism(to: &JObject, rng: &mut Rng) -> JMorphism {
    let mut avoid = to.a_set.union(&to.b_set);
    let mut labels: Vec<Name> = to.a_set.iter().collect();
    let mut pool = labels.clone();
    for _ in 0..2 {
        let c = fresh_name(&avoid);
        avoid.insert(c);
        pool.push(c);
    }
    pool.shuffle(rng);
    let image: Vec<Name> = pool.into_iter().take(labels.len()).collect();
    let f: BTreeMap<Name, Name> = labels.drain(..).zip(image.iter().copied()).collect();
    let a_set: NameSet = image.iter().copied().collect();
    let dir = f[&to.dir];
    let mut b_pool: Vec<Name> = Vec::new();
    let mut avoid_b = avoid.union(&a_set);
    let b_size = rng.gen_range(0..=2usize) + to.b_set.len().min(1);
    for _ in 0..b_size {
        let c = fresh_name(&avoid_b);
        avoid_b.insert(c);
        b_pool.push(c);
    }
    let b_set: NameSet = b_pool.iter().copied().collect();
    let mut unused = b_pool.clone();
    unused.shuffle(rng);
    let g = to
        .b_set
        .iter()
        .map(|b| {
            let v = if !unused.is_empty() && rng.gen_bool(0.7) {
                CubeVal::Name(unused.pop().expect("non-empty"))
            } else {
                CubeVal::Bit(sample::bit(rng))
            };
            (b, v)
        })
        .collect();
    let from = JObject::new(to.kind, a_set, dir, b_set).expect("fresh labels are disjoint");
    JMorphism::new(from, to.clone(), f, g).expect("constructed to satisfy the conditions")
}

/// Merges two cube points with disjoint label sets.
pub fn merge_points(p: &CubePoint, q: &CubePoint) -> Result<CubePoint> {
    let mut m = p.coords().clone();
    for (k, v) in q.coords() {
        if m.insert(*k, *v).is_some() {
            return Err(Error::ContractViolation(format!(
                "label {k} assigned twice"
            )));
        }
    }
    CubePoint::new(m).ok_or_else(|| Error::NotMember("separated product: shared names".into()))
}

/// The image of `x` under the unique morphism from the cube on the labels
/// of `point` that sends the generic point to `x`.
///
/// The simultaneous assignment is applied as: move every label to a fresh
/// name, substitute the constant coordinates, then rename the remaining
/// fresh names to their targets.
pub fn yoneda_evaluate(x: &Value, point: &CubePoint) -> Result<Value> {
    yoneda_evaluate_in(None, x, point)
}

/// As [`yoneda_evaluate`] with the operations of a given carrier.
pub fn yoneda_evaluate_in(obj: Option<&ZObject>, x: &Value, point: &CubePoint) -> Result<Value> {
    let act = |p: &Perm, v: &Value| match obj {
        Some(o) => o.act(p, v),
        None => v.act(p),
    };
    let subst = |v: &Value, a: Name, i: Bit| match obj {
        Some(o) => o.subst(v, a, i),
        None => v.subst(a, i),
    };
    let supp = match obj {
        Some(o) => o.support(x),
        None => x.support().clone(),
    };
    let labels = point.keys();
    if !supp.is_subset(&labels) {
        return Err(Error::SupportEscape(format!(
            "{} is not within the cube labels {labels}",
            supp.difference(&labels)
        )));
    }
    let mut avoid = labels.union(&point.names()).union(&supp);
    let mut fresh = BTreeMap::new();
    let mut to_fresh = Perm::identity();
    for d in supp.iter() {
        let c = fresh_name(&avoid);
        avoid.insert(c);
        fresh.insert(d, c);
        to_fresh = Perm::swap(d, c).compose(&to_fresh);
    }
    let mut v = act(&to_fresh, x);
    for (d, c) in &fresh {
        if let Some(CubeVal::Bit(i)) = point.get(*d) {
            v = subst(&v, *c, i);
        }
    }
    for (d, c) in &fresh {
        if let Some(CubeVal::Name(n)) = point.get(*d) {
            v = act(&Perm::swap(*c, n), &v);
        }
    }
    Ok(v)
}

/// Evaluates at a point `(p, q)` of `□_A ∗ □_B`.
pub fn evaluate_at(x: &Value, pt: &Value) -> Result<Value> {
    let (p, q) = split_point(pt);
    yoneda_evaluate(x, &merge_points(p, q)?)
}

/// The coalgebra `η = h: □_A ∗ □_B → K ι` on one point.
pub fn eta_value(obj: &JObject, pt: &Value) -> Value {
    let (p, q) = split_point(pt);
    let open = box_indices(obj.kind, &obj.a_set, obj.dir)
        .into_iter()
        .any(|(b, i)| p.get(b) == Some(CubeVal::Bit(i)));
    if open {
        return Value::base(pt.clone());
    }
    let all_named = p.coords().values().all(|v| matches!(v, CubeVal::Name(_)));
    if all_named {
        return Value::filler(eta_box(obj, p, q, pt.clone()));
    }
    // the open coordinate sits at the missing bit; every other one is a name
    let used = p.names().union(&q.names());
    let b = fresh_name(&used);
    let p2 = p.with(obj.dir, CubeVal::Name(b)).expect("b is fresh");
    let base = Value::pair(Value::cube(p2.clone()), Value::cube(q.clone()));
    Value::composite(eta_box(obj, &p2, q, base))
}

/// The box `u(f(a''), i) = λ((f(a'' := i)), g)` in the directions named by
/// the all-name point `f`, open at `f(a)`.
fn eta_box(obj: &JObject, p: &CubePoint, q: &CubePoint, base: Value) -> OpenBox {
    let names: NameSet = p.names();
    let dir = match p.get(obj.dir) {
        Some(CubeVal::Name(n)) => n,
        _ => unreachable!("all coordinates are names"),
    };
    let qv = Value::cube(q.clone());
    let faces = box_indices(obj.kind, &names, dir)
        .into_iter()
        .map(|(n, i)| {
            let face = Value::pair(Value::cube(p.subst(n, i)), qv.clone());
            ((n, i), Value::base(face))
        })
        .collect();
    OpenBox::from_parts_unchecked(obj.kind, dir, faces, base)
}

/// `η` as a morphism, together with `K ι`.
pub fn eta_coalgebra(obj: &JObject) -> (ZMorphism, FreeFibration) {
    let iota = obj.j_map();
    let k = make_free_fibration(&iota);
    let o = obj.clone();
    let h = ZMorphism::new(
        format!("η{obj}"),
        obj.codomain(),
        k.object.clone(),
        move |pt| eta_value(&o, pt),
    );
    (h, k)
}

/// A commutative square from `J(obj)` into some `g: X → Y`.
#[derive(Clone)]
pub struct LiftingSquare {
    pub obj: JObject,
    /// `⊔_{A,a} ∗ □_B → X`
    pub top: MapFn,
    /// `□_A ∗ □_B → Y`
    pub bottom: MapFn,
}

impl LiftingSquare {
    /// The square obtained by precomposing with `J(m)`, where `m` ends at
    /// this square's object.
    pub fn restrict(&self, m: &JMorphism) -> LiftingSquare {
        let (top, bottom) = (self.top.clone(), self.bottom.clone());
        let (m1, m2) = (m.clone(), m.clone());
        LiftingSquare {
            obj: m.from.clone(),
            top: Arc::new(move |pt| top(&m1.apply(pt))),
            bottom: Arc::new(move |pt| bottom(&m2.apply(pt))),
        }
    }
}

/// Chooses diagonal fillers for lifting squares against the generating
/// inclusions.
pub trait LiftingData: Send + Sync {
    fn label(&self) -> String;

    fn diagonal(&self, sq: &LiftingSquare) -> MapFn;
}

/// The square determined by a box: `ũ` sends a point of the open box to
/// the matching face evaluated at that point, `ỹ` evaluates the base.
pub fn square_from_box(bx: &OpenBox, extra: &NameSet) -> LiftingSquare {
    let a_set = bx.names();
    let c = bx.support().union(extra);
    let b_set = c.difference(&a_set);
    let obj = JObject::new(bx.kind(), a_set, bx.dir(), b_set).expect("B = C \\ A");
    let faces = bx.clone();
    let kind = bx.kind();
    let (names, dir) = (bx.names(), bx.dir());
    let top: MapFn = Arc::new(move |pt: &Value| {
        let (p, _) = split_point(pt);
        let (b, i) = box_indices(kind, &names, dir)
            .into_iter()
            .find(|&(b, i)| p.get(b) == Some(CubeVal::Bit(i)))
            .expect("point lies on the open box");
        evaluate_at(faces.face(b, i).expect("index of the box"), pt).expect("face supported by C")
    });
    let y = bx.base().clone();
    let bottom: MapFn =
        Arc::new(move |pt: &Value| evaluate_at(&y, pt).expect("base supported by C"));
    LiftingSquare { obj, top, bottom }
}

/// Lifting data from a filling operator: fill the generic box of the
/// square and transport the filler along the point.
pub struct FillingLifts {
    fs: FibrationStructure,
}

impl LiftingData for FillingLifts {
    fn label(&self) -> String {
        format!("lifts({})", self.fs.filling.label())
    }

    fn diagonal(&self, sq: &LiftingSquare) -> MapFn {
        let obj = &sq.obj;
        let faces = box_indices(obj.kind, &obj.a_set, obj.dir)
            .into_iter()
            .map(|(b, i)| ((b, i), (sq.top)(&obj.face_point(b, i))))
            .collect();
        let base = (sq.bottom)(&obj.generic_point());
        let bx = OpenBox::from_parts_unchecked(obj.kind, obj.dir, faces, base);
        let x = self.fs.fill(&bx);
        Arc::new(move |pt| evaluate_at(&x, pt).expect("filler supported by the box"))
    }
}

pub fn fibration_to_lifting(fs: &FibrationStructure) -> Arc<dyn LiftingData> {
    Arc::new(FillingLifts { fs: fs.clone() })
}

/// Lifting data from an algebra: `j = g ∘ K(ũ, ỹ) ∘ η`.
pub struct AlgebraLifts {
    alg: AlgebraStructure,
}

impl LiftingData for AlgebraLifts {
    fn label(&self) -> String {
        format!("lifts({})", self.alg.g.label())
    }

    fn diagonal(&self, sq: &LiftingSquare) -> MapFn {
        let g = self.alg.g.map_fn();
        let sq = sq.clone();
        Arc::new(move |pt| g(&kmap_value(&*sq.top, &*sq.bottom, &eta_value(&sq.obj, pt))))
    }
}

pub fn algebra_to_lifting(alg: &AlgebraStructure) -> Arc<dyn LiftingData> {
    Arc::new(AlgebraLifts { alg: alg.clone() })
}

/// Filling operator from lifting data: solve the square of the box and
/// evaluate the diagonal at the generic point. `extra` enlarges the support
/// used to choose the side coordinates.
pub fn lifting_to_fibration(g: &ZMorphism, phi: Arc<dyn LiftingData>) -> FibrationStructure {
    lifting_to_fibration_with(g, phi, NameSet::new())
}

pub fn lifting_to_fibration_with(
    g: &ZMorphism,
    phi: Arc<dyn LiftingData>,
    extra: NameSet,
) -> FibrationStructure {
    let label = format!("from-lifts({})", phi.label());
    FibrationStructure::new(
        g.clone(),
        FillingOperator::new(label, move |bx: &OpenBox| {
            let sq = square_from_box(bx, &extra);
            let j = phi.diagonal(&sq);
            j(&sq.obj.generic_point())
        }),
    )
}

/// The generating objects exercised by the checks: both kinds, up to three
/// box coordinates and two side coordinates.
pub fn small_objects(max_a: usize, max_b: usize) -> Vec<JObject> {
    let mut out = Vec::new();
    for kind in [BoxKind::Up, BoxKind::Down] {
        for na in 1..=max_a {
            let a_set: NameSet = (0..na as u32).map(|k| Name(100 + k)).collect();
            for nb in 0..=max_b {
                let b_set: NameSet = (0..nb as u32).map(|k| Name(200 + k)).collect();
                for dir in a_set.iter().take(2) {
                    out.push(
                        JObject::new(kind, a_set.clone(), dir, b_set.clone())
                            .expect("disjoint labels"),
                    );
                }
            }
        }
    }
    out
}

/// Cube substitution, functoriality of `J` and the coalgebra laws for `η`.
pub fn check_generators(iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let mut report = LawReport::new("generators", seed, iters);
    let mut rng = sample::rng(seed);
    let objects = small_objects(3, 2);
    let per_object = (iters / objects.len()).max(4);
    for obj in &objects {
        let (h, k) = eta_coalgebra(obj);
        let iota = obj.j_map();
        let id = |v: &Value| v.clone();
        let dom = obj.domain();
        let cod = obj.codomain();
        for _ in 0..per_object {
            let pt = cod.sample(&mut rng, cfg, 0);
            let t = h.apply(&pt);
            report.check("eta.member", k.object.contains(&t), || {
                witness(&[("point", &pt), ("η", &t)])
            });
            let back = k.rho.apply(&t);
            report.check("eta.counit", back == pt, || {
                witness(&[("point", &pt), ("ρη", &back)])
            });
            let lhs = kmap_value(&id, &|v| eta_value(obj, v), &t);
            let rhs = sigma_value(&t);
            report.check("eta.comultiplication", lhs == rhs, || {
                witness(&[("point", &pt), ("K(1,η)η", &lhs), ("ση", &rhs)])
            });
            let q = dom.sample(&mut rng, cfg, 0);
            let lhs = h.apply(&iota.apply(&q));
            report.check("eta.extends-unit", lhs == Value::base(q.clone()), || {
                witness(&[("point", &q), ("ηι", &lhs)])
            });

            let m = sample_jmorphism(obj, &mut rng);
            let pt_from = m.from.codomain().sample(&mut rng, cfg, 0);
            let id_m = JMorphism::identity(obj);
            let once = m.apply(&pt_from);
            report.check("jmap.identity", id_m.apply(&once) == once, || {
                witness(&[("point", &once)])
            });
            let m2 = sample_jmorphism(&m.from, &mut rng);
            let pt2 = m2.from.codomain().sample(&mut rng, cfg, 0);
            let comp = m2.then(&m).expect("composable");
            let lhs = comp.apply(&pt2);
            let rhs = m.apply(&m2.apply(&pt2));
            report.check("jmap.composition", lhs == rhs, || {
                witness(&[("point", &pt2), ("J(mm')", &lhs), ("J(m)J(m')", &rhs)])
            });
            report.check("jmap.lands", obj.codomain().contains(&lhs), || {
                witness(&[("image", &lhs)])
            });
        }
        report.merge(crate::zsub::check_morphism(
            &h,
            per_object,
            derive_seed(seed, &obj.to_string()),
            cfg,
        ));
    }
    report.merge(check_yoneda(iters, derive_seed(seed, "yoneda"), cfg));
    report
}

/// Every point of the cube on `keys` whose names come from `alphabet`.
pub fn all_cube_points(keys: &NameSet, alphabet: &NameSet) -> Vec<CubePoint> {
    let mut out = vec![CubePoint::default()];
    for k in keys.iter() {
        let mut next = Vec::new();
        for p in &out {
            let values = Bit::BOTH.into_iter().map(CubeVal::Bit).chain(
                alphabet
                    .iter()
                    .filter(|n| !p.names().contains(*n))
                    .map(CubeVal::Name),
            );
            for v in values {
                next.push(p.with(k, v).expect("names kept distinct"));
            }
        }
        out = next;
    }
    out
}

/// The three coalgebra laws of `η` on every point of `□_A ∗ □_B` with
/// names from `alphabet`, for every object with `|A| ≤ max_a` and
/// `|B| ≤ max_b`.
pub fn check_eta_exhaustive(max_a: usize, max_b: usize, alphabet: &NameSet) -> LawReport {
    let mut report = LawReport::new("eta-exhaustive", 0, 0);
    for obj in small_objects(max_a, max_b) {
        let (_, k) = eta_coalgebra(&obj);
        let id = |v: &Value| v.clone();
        let dom = obj.domain();
        for p in all_cube_points(&obj.a_set, alphabet) {
            for q in all_cube_points(&obj.b_set, alphabet) {
                if !p.names().is_disjoint(&q.names()) {
                    continue;
                }
                let pt = Value::pair(Value::cube(p.clone()), Value::cube(q));
                let t = eta_value(&obj, &pt);
                report.check("eta.member", k.object.contains(&t), || {
                    witness(&[("point", &pt), ("η", &t)])
                });
                let back = k.rho.apply(&t);
                report.check("eta.counit", back == pt, || {
                    witness(&[("point", &pt), ("ρη", &back)])
                });
                let lhs = kmap_value(&id, &|v| eta_value(&obj, v), &t);
                let rhs = sigma_value(&t);
                report.check("eta.comultiplication", lhs == rhs, || {
                    witness(&[("point", &pt), ("K(1,η)η", &lhs), ("ση", &rhs)])
                });
                if dom.contains(&pt) {
                    report.check("eta.extends-unit", t == Value::base(pt.clone()), || {
                        witness(&[("point", &pt), ("η", &t)])
                    });
                }
            }
        }
    }
    report
}

/// Evaluation against direct composition of assignments on cube points.
pub fn check_yoneda(iters: usize, seed: u64, cfg: &GenConfig) -> LawReport {
    let mut report = LawReport::new("yoneda", seed, iters);
    let mut rng = sample::rng(seed);
    let labels: NameSet = (0..4).map(Name).collect();
    let outer = cube_object(&NameSet::first(3).act(&Perm::swap(Name(0), Name(50))));
    for _ in 0..iters {
        // x: a point of some cube whose names lie among the labels
        let mut names: Vec<Name> = labels.to_vec();
        names.shuffle(&mut rng);
        let coords: BTreeMap<Name, CubeVal> = outer
            .sample(&mut rng, cfg, 0)
            .as_cube()
            .expect("cube")
            .coords()
            .iter()
            .enumerate()
            .map(|(k, (key, v))| {
                let v = match v {
                    CubeVal::Name(_) => CubeVal::Name(names[k]),
                    b => *b,
                };
                (*key, v)
            })
            .collect();
        let x = CubePoint::new(coords).expect("distinct names");
        let point = {
            let p = cube_object(&labels).sample(&mut rng, cfg, 0);
            p.as_cube().expect("cube").clone()
        };
        let direct = CubePoint::new(
            x.coords()
                .iter()
                .map(|(k, v)| {
                    let w = match v {
                        CubeVal::Name(n) => point.get(*n).expect("label"),
                        b => *b,
                    };
                    (*k, w)
                })
                .collect(),
        )
        .expect("injective composite");
        let xv = Value::cube(x);
        let got = yoneda_evaluate(&xv, &point);
        let want = Value::cube(direct);
        report.check("yoneda.composition", got.as_ref() == Ok(&want), || {
            witness(&[
                ("x", &xv),
                ("point", &Value::cube(point.clone())),
                ("expected", &want),
            ])
        });
        let generic = yoneda_evaluate(&xv, &CubePoint::identity(&labels));
        report.check("yoneda.generic-point", generic.as_ref() == Ok(&xv), || {
            witness(&[("x", &xv)])
        });
    }
    let escape = yoneda_evaluate(
        &Value::cube(CubePoint::identity(&NameSet::singleton(Name(9)))),
        &CubePoint::identity(&labels),
    );
    report.check(
        "yoneda.support-escape",
        matches!(escape, Err(Error::SupportEscape(_))),
        || serde_json::json!("evaluation outside the labels was accepted"),
    );
    report
}

/// Round trips between filling operators and lifting data on `fs`, plus
/// coherence and the two triangles of every produced diagonal.
pub fn check_lifting(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let g = &fs.morphism;
    let mut report = LawReport::new(format!("lifting:{}", fs.filling.label()), seed, iters);
    let from_filling = fibration_to_lifting(fs);
    let alg = crate::bridge::filling_to_algebra(fs);
    let from_algebra = algebra_to_lifting(&alg);
    let rebuilt = lifting_to_fibration(g, from_filling.clone());
    let rebuilt_alg = lifting_to_fibration(g, from_algebra.clone());
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let bx = sample_box(g, &mut rng, cfg, cfg.rank);
        let bxv = || Value::filler(bx.clone());
        let want = fs.fill(&bx);
        let got = rebuilt.fill(&bx);
        report.check("lifting.roundtrip-filling", got == want, || {
            witness(&[("box", &bxv()), ("fill", &want), ("rebuilt", &got)])
        });
        let got = rebuilt_alg.fill(&bx);
        report.check("lifting.roundtrip-algebra", got == want, || {
            witness(&[("box", &bxv()), ("fill", &want), ("rebuilt", &got)])
        });
        let extra = NameSet::singleton(fresh_name(&bx.support()));
        let wide = lifting_to_fibration_with(g, from_filling.clone(), extra.clone()).fill(&bx);
        report.check("lifting.support-independent", wide == want, || {
            witness(&[("box", &bxv()), ("fill", &want), ("wider", &wide)])
        });
        let wide = lifting_to_fibration_with(g, from_algebra.clone(), extra).fill(&bx);
        report.check("lifting.support-independent", wide == want, || {
            witness(&[("box", &bxv()), ("fill", &want), ("wider", &wide)])
        });

        let sq = square_from_box(&bx, &NameSet::new());
        let obj = sq.obj.clone();
        for phi in [&from_filling, &from_algebra] {
            let j = phi.diagonal(&sq);
            let q = obj.domain().sample(&mut rng, cfg, 0);
            let (jq, tq) = (j(&q), (sq.top)(&q));
            report.check("lifting.upper-triangle", jq == tq, || {
                witness(&[("point", &q), ("j", &jq), ("top", &tq)])
            });
            let pt = obj.codomain().sample(&mut rng, cfg, 0);
            let (gj, bp) = (g.apply(&j(&pt)), (sq.bottom)(&pt));
            report.check("lifting.lower-triangle", gj == bp, || {
                witness(&[("point", &pt), ("g j", &gj), ("bottom", &bp)])
            });
            let m = sample_jmorphism(&obj, &mut rng);
            let small = sq.restrict(&m);
            let pt = m.from.codomain().sample(&mut rng, cfg, 0);
            let lhs = phi.diagonal(&small)(&pt);
            let rhs = j(&m.apply(&pt));
            report.check("lifting.coherent", lhs == rhs, || {
                witness(&[("point", &pt), ("restricted", &lhs), ("moved", &rhs)])
            });
        }
        // both kinds of lifting data agree on every square
        let pt = obj.codomain().sample(&mut rng, cfg, 0);
        let a = from_filling.diagonal(&sq)(&pt);
        let b = from_algebra.diagonal(&sq)(&pt);
        report.check("lifting.data-agree", a == b, || {
            witness(&[("point", &pt), ("from filling", &a), ("from algebra", &b)])
        });
    }
    report.merge(check_uniformity(
        &rebuilt,
        iters,
        derive_seed(seed, "uniform"),
        cfg,
    ));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::free::{detour_filling, formal_filling};
    use crate::kan::identity_fibration;
    use crate::zsub::terminal_object;

    fn n(i: u32) -> Name {
        Name(i)
    }

    fn cube(coords: &[(u32, CubeVal)]) -> CubePoint {
        CubePoint::new(coords.iter().map(|(k, v)| (n(*k), *v)).collect()).unwrap()
    }

    #[test]
    fn cube_substitution_hits_the_matching_coordinate() {
        let p = cube(&[(0, CubeVal::Name(n(2))), (1, CubeVal::Bit(Bit::Zero))]);
        let q = Value::cube(p).subst(n(2), Bit::One);
        assert_eq!(
            q,
            Value::cube(cube(&[
                (0, CubeVal::Bit(Bit::One)),
                (1, CubeVal::Bit(Bit::Zero))
            ]))
        );
    }

    #[test]
    fn eta_cases() {
        let obj = JObject::new(BoxKind::Up, NameSet::first(2), n(0), NameSet::new()).unwrap();
        let empty = Value::cube(CubePoint::default());
        let boundary = Value::pair(
            Value::cube(cube(&[
                (0, CubeVal::Bit(Bit::Zero)),
                (1, CubeVal::Name(n(5))),
            ])),
            empty.clone(),
        );
        assert_eq!(eta_value(&obj, &boundary), Value::base(boundary.clone()));
        let interior = Value::pair(
            Value::cube(cube(&[(0, CubeVal::Name(n(4))), (1, CubeVal::Name(n(5)))])),
            empty.clone(),
        );
        let t = eta_value(&obj, &interior);
        let bx = match t.as_term() {
            Some(crate::value::KTerm::Filler(bx)) => bx.clone(),
            _ => panic!("{t}"),
        };
        assert_eq!(bx.dir(), n(4));
        assert_eq!(bx.names(), [n(4), n(5)].into_iter().collect());
        let missing = Value::pair(
            Value::cube(cube(&[
                (0, CubeVal::Bit(Bit::One)),
                (1, CubeVal::Name(n(5))),
            ])),
            empty,
        );
        assert!(matches!(
            eta_value(&obj, &missing).as_term(),
            Some(crate::value::KTerm::Composite(_))
        ));
        assert!(obj.j_map().target().contains(&interior));
        assert!(!obj.domain().contains(&obj.generic_point()));
    }

    #[test]
    fn yoneda_examples() {
        let labels = NameSet::first(2);
        let x = Value::cube(CubePoint::identity(&labels));
        assert_eq!(
            yoneda_evaluate(&x, &CubePoint::identity(&labels)).unwrap(),
            x
        );
        let only = cube(&[(0, CubeVal::Bit(Bit::Zero)), (1, CubeVal::Name(n(1)))]);
        assert_eq!(
            yoneda_evaluate(&x, &only).unwrap(),
            x.subst(n(0), Bit::Zero)
        );
        let r = check_yoneda(300, 3, &GenConfig::default());
        assert!(r.is_clean(), "{}", r.to_text());
    }

    #[test]
    fn eta_on_every_small_point() {
        let r = check_eta_exhaustive(2, 1, &NameSet::first(4));
        assert!(r.is_clean(), "{}", r.to_text());
        assert!(r.laws["eta.extends-unit"].cases > 0);
        assert!(r.total_cases() > 1000);
    }

    #[test]
    fn generator_laws() {
        let r = check_generators(200, 5, &GenConfig::default());
        assert!(r.is_clean(), "{}", r.to_text());
    }

    #[test]
    fn lifting_round_trips() {
        let kf = make_free_fibration(&ZMorphism::identity(&terminal_object()));
        let cfg = GenConfig::default();
        for fs in [
            formal_filling(&kf),
            detour_filling(&kf),
            identity_fibration(&cube_object(&NameSet::first(2))),
        ] {
            let r = check_lifting(&fs, 60, 7, &cfg);
            assert!(r.is_clean(), "{}", r.to_text());
        }
    }

    #[test]
    fn jmorphisms_validate() {
        let obj = JObject::new(BoxKind::Up, NameSet::first(1), n(0), NameSet::new()).unwrap();
        let f = [(n(0), n(1))].into_iter().collect();
        assert!(JMorphism::new(obj.clone(), obj.clone(), f, BTreeMap::new()).is_err());
        assert!(JObject::new(BoxKind::Up, NameSet::first(1), n(3), NameSet::new()).is_err());
    }
}
