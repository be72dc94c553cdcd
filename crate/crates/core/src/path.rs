//! Path objects built from labelled name abstraction.
//!
//! For a fibration `f: X → Y` the path object `P_Y X` is the set of normal
//! forms inside `K Δ`, where `Δ: X → X ×_Y X` is the diagonal. A
//! pre-normal form in direction `a` is either `λ(x)` with `a # x`, or an
//! up-filler in direction `a` over `(x₁, x₂)` whose `(a, 0)` face is
//! `λ(x₁)` and whose other faces are pre-normal in direction `a`. A normal
//! form is `z(a := 1)` for such a `z`.

use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::free::{kmap_value, make_free_fibration, FreeFibration};
use crate::kan::{
    box_of_faces, check_uniformity, BoxKind, FibrationStructure, FillingOperator, OpenBox,
};
use crate::nominal::{fresh_name, Name, NameSet, Nominal};
use crate::report::{witness, LawReport};
use crate::sample::{self, derive_seed, GenConfig, Rng};
use crate::value::{KTerm, Value};
use crate::zsub::{
    check_morphism, check_zsub_axioms, fibred_abstraction, pullback_object,
    pullback_object_with_sampler, structural_object, Bit, Carrier, MapFn, PullbackObject, Sampler,
    ZMorphism, ZObject,
};

/// The diagonal `x ↦ (x, x)` into the pullback of `f` along itself.
pub fn diagonal(fs: &FibrationStructure) -> (PullbackObject, ZMorphism) {
    let f = &fs.morphism;
    let pairs = pullback_object(f, f);
    let delta = ZMorphism::new("Δ", f.source().clone(), pairs.object.clone(), |x| {
        Value::pair(x.clone(), x.clone())
    });
    (pairs, delta)
}

fn endpoints(t: &Value) -> (&Value, &Value) {
    t.as_pair().expect("a pair (x₁, x₂)")
}

/// Decides whether `t ∈ K Δ` is a pre-normal form in direction `a`.
pub fn is_prenormal(t: &Value, a: Name) -> bool {
    match t.as_term() {
        Some(KTerm::Base(x)) => !x.support().contains(a),
        Some(KTerm::Filler(u)) => {
            let Some((x1, _)) = u.base().as_pair() else {
                return false;
            };
            u.kind() == BoxKind::Up
                && u.dir() == a
                && !x1.support().contains(a)
                && u.face(a, Bit::Zero) == Some(&Value::base(x1.clone()))
                && u.faces()
                    .iter()
                    .filter(|((b, _), _)| *b != a)
                    .all(|(_, v)| is_prenormal(v, a))
        }
        _ => false,
    }
}

/// Decides whether `w ∈ K Δ` is a normal form.
pub fn is_normal(w: &Value) -> bool {
    match w.as_term() {
        Some(KTerm::Base(_)) => true,
        Some(KTerm::Composite(abs)) => {
            abs.body().kind() == BoxKind::Up
                && is_prenormal(&Value::filler(abs.body().clone()), abs.bound())
        }
        _ => false,
    }
}

/// The unique pre-normal form `z` in direction `a` with `z(a := 1) = w`.
pub fn unbind(w: &Value, a: Name) -> Result<Value> {
    if w.support().contains(a) {
        return Err(Error::ContractViolation(format!(
            "{a} is not fresh for {w}"
        )));
    }
    let z = match w.as_term() {
        Some(KTerm::Base(_)) => w.clone(),
        Some(KTerm::Composite(abs)) => Value::filler(abs.instantiate(a)?),
        _ => return Err(Error::NotNormalForm(w.to_string())),
    };
    if is_prenormal(&z, a) {
        Ok(z)
    } else {
        Err(Error::NotNormalForm(w.to_string()))
    }
}

fn fresh_for(vals: &[&Value], also: &[Name]) -> Name {
    let mut avoid = NameSet::new();
    for v in vals {
        avoid.extend_from(v.support());
    }
    for a in also {
        avoid.insert(*a);
    }
    fresh_name(&avoid)
}

/// `P_Y X` together with its maps.
#[derive(Clone)]
pub struct PathObject {
    pub fibration: FibrationStructure,
    pub pairs: PullbackObject,
    pub delta: ZMorphism,
    pub free: FreeFibration,
    pub object: ZObject,
    /// `ρ_Δ` restricted to normal forms.
    pub projection: ZMorphism,
    /// `P_Y X → Y`.
    pub p: ZMorphism,
    /// Reflexivity `X → P_Y X`.
    pub r: ZMorphism,
}

struct NormalForms {
    fs: FibrationStructure,
    free: FreeFibration,
}

impl Carrier for NormalForms {
    fn describe(&self) -> String {
        format!("P({})", self.fs.morphism.label())
    }

    fn contains(&self, x: &Value) -> bool {
        is_normal(x) && self.free.object.contains(x)
    }

    fn sample(&self, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
        sample_normal(&self.fs, rng, cfg, size.min(cfg.rank))
    }
}

pub fn path_object(fs: &FibrationStructure) -> PathObject {
    let (pairs, delta) = diagonal(fs);
    let free = make_free_fibration(&delta);
    let object = ZObject::new(NormalForms {
        fs: fs.clone(),
        free: free.clone(),
    });
    let rho = free.rho.map_fn();
    let projection = ZMorphism::from_fn("ρΔ", object.clone(), pairs.object.clone(), rho.clone());
    let f = fs.morphism.map_fn();
    let p = ZMorphism::new(
        "p",
        object.clone(),
        fs.morphism.target().clone(),
        move |w| f(endpoints(&rho(w)).0),
    );
    let r = ZMorphism::new("r", fs.morphism.source().clone(), object.clone(), |x| {
        Value::base(x.clone())
    });
    PathObject {
        fibration: fs.clone(),
        pairs,
        delta,
        free,
        object,
        projection,
        p,
        r,
    }
}

/// The pre-normal form in direction `a` built from `x` by induction on its
/// support. Each name of `extra` labels a degenerate side; a non-empty
/// `extra` forces a box even when `a # x`.
fn labelled_path(src: &ZObject, a: Name, x: &Value, extra: &NameSet) -> Value {
    let supp = src.support(x);
    if !supp.contains(a) && extra.is_empty() {
        return Value::base(x.clone());
    }
    let x1 = src.subst(x, a, Bit::Zero);
    let names = supp.union(extra).with(a);
    let mut faces = std::collections::BTreeMap::new();
    faces.insert((a, Bit::Zero), Value::base(x1.clone()));
    for b in names.iter().filter(|&b| b != a) {
        for i in Bit::BOTH {
            let face = labelled_path(src, a, &src.subst(x, b, i), &extra.without(b));
            faces.insert((b, i), face);
        }
    }
    Value::filler(OpenBox::from_parts_unchecked(
        BoxKind::Up,
        a,
        faces,
        Value::pair(x1, x.clone()),
    ))
}

/// The normal form of `⟨a⟩x ∈ [𝔸]_f X`: the path that follows `x` in
/// direction `a`, with every other face converted recursively.
pub fn abstraction_to_normal_form(fs: &FibrationStructure, abs: &Value) -> Result<Value> {
    let f = &fs.morphism;
    let src = f.source();
    if !src.exact_support() {
        return Err(Error::SupportNotComputable(src.describe()));
    }
    let abs = abs
        .as_abs()
        .ok_or_else(|| Error::NotMember("[𝔸]X".into()))?;
    let (a, x) = (abs.bound(), abs.body());
    if f.target().support(&f.apply(x)).contains(a) {
        return Err(Error::NotMember(format!("[𝔸]_f X: {a} occurs in f({x})")));
    }
    Ok(labelled_path(src, a, x, &NameSet::new()).subst(a, Bit::One))
}

/// `h(z, b)`: a path in `X` in direction `b` from the constant path at `x₁`
/// to `x₂`, for `z` pre-normal over `(x₁, x₂)`.
pub fn homotopy_h(fs: &FibrationStructure, z: &Value, b: Name) -> Value {
    match z.as_term() {
        Some(KTerm::Base(x)) => x.clone(),
        Some(KTerm::Filler(u)) => {
            let (x1, x2) = endpoints(u.base());
            let mut faces: std::collections::BTreeMap<_, _> = u
                .faces()
                .iter()
                .map(|(k, v)| (*k, homotopy_h(fs, v, b)))
                .collect();
            faces.insert((b, Bit::Zero), x1.clone());
            faces.insert((b, Bit::One), x2.clone());
            let v =
                OpenBox::from_parts_unchecked(BoxKind::Up, u.dir(), faces, fs.morphism.apply(x1));
            fs.fill(&v)
        }
        _ => panic!("not a pre-normal form: {z}"),
    }
}

/// `k(z, b)`: a pre-normal form in the direction of `z` whose `b`-faces
/// are `λ(x₁)` and `z`.
pub fn homotopy_k(fs: &FibrationStructure, z: &Value, b: Name) -> Value {
    match z.as_term() {
        Some(KTerm::Base(_)) => z.clone(),
        Some(KTerm::Filler(u)) => {
            let (x1, _) = endpoints(u.base());
            let mut faces: std::collections::BTreeMap<_, _> = u
                .faces()
                .iter()
                .map(|(k, v)| (*k, homotopy_k(fs, v, b)))
                .collect();
            faces.insert((b, Bit::Zero), Value::base(x1.clone()));
            faces.insert((b, Bit::One), z.clone());
            let base = Value::pair(x1.clone(), homotopy_h(fs, z, b));
            Value::filler(OpenBox::from_parts_unchecked(
                BoxKind::Up,
                u.dir(),
                faces,
                base,
            ))
        }
        _ => panic!("not a pre-normal form: {z}"),
    }
}

/// `l(z, b) ∈ K r`, with `ρ_r(l(z, b)) = k(z, b)(a := 1)`.
pub fn homotopy_l(fs: &FibrationStructure, z: &Value, b: Name) -> Value {
    match z.as_term() {
        Some(KTerm::Base(_)) => z.clone(),
        Some(KTerm::Filler(u)) => {
            let a = u.dir();
            let (x1, _) = endpoints(u.base());
            let mut faces: std::collections::BTreeMap<_, _> = u
                .faces()
                .iter()
                .filter(|((c, _), _)| *c != a)
                .map(|(k, v)| (*k, homotopy_l(fs, v, b)))
                .collect();
            faces.insert((b, Bit::Zero), Value::base(x1.clone()));
            let base = homotopy_k(fs, z, b).subst(a, Bit::One);
            Value::filler(OpenBox::from_parts_unchecked(BoxKind::Up, b, faces, base))
        }
        _ => panic!("not a pre-normal form: {z}"),
    }
}

/// The reflexivity map `r: X → P_Y X`, the coalgebra `c: P_Y X → K r` and
/// `K r` itself.
pub fn reflexivity_coalgebra(po: &PathObject) -> (ZMorphism, ZMorphism, FreeFibration) {
    let kr = make_free_fibration(&po.r);
    let fs = po.fibration.clone();
    let c = ZMorphism::new("c", po.object.clone(), kr.object.clone(), move |w| {
        coalgebra_value(&fs, w)
    });
    (po.r.clone(), c, kr)
}

fn coalgebra_value(fs: &FibrationStructure, w: &Value) -> Value {
    if w.as_base().is_some() {
        return w.clone();
    }
    let a = fresh_for(&[w], &[]);
    let z = unbind(w, a).expect("a normal form");
    let b = fresh_for(&[&z], &[a]);
    homotopy_l(fs, &z, b).subst(b, Bit::One)
}

/// Given a diagonal `j: V → K i` of the square of `λ_i` against `ρ_i`,
/// decides whether `v` lies in the image of `i`.
pub fn decidable_image(j: &dyn Fn(&Value) -> Value, v: &Value) -> bool {
    j(v).rank() == 0
}

/// The Kan filler of an open box of paths.
pub fn path_fill(fs: &FibrationStructure, v: &OpenBox) -> Value {
    let (x1, x2) = endpoints(v.base());
    let (kind, a) = (v.kind(), v.dir());
    let e = kind.missing_bit();
    let names = v.names();
    let b = fresh_name(&v.support().union(&names));
    let unbound: std::collections::BTreeMap<_, _> = v
        .faces()
        .iter()
        .map(|(k, w)| {
            (
                *k,
                unbind(w, b).expect("faces of a path box are normal forms"),
            )
        })
        .collect();

    // the box in X traced by the second endpoints, closed off in direction b
    let mut ends: std::collections::BTreeMap<_, _> = unbound
        .iter()
        .map(|(k, z)| {
            let p = crate::free::rho_value(&|x: &Value| Value::pair(x.clone(), x.clone()), z);
            (*k, endpoints(&p).1.clone())
        })
        .collect();
    ends.insert((b, Bit::Zero), x1.clone());
    ends.insert((b, Bit::One), x2.clone());
    let v2 = OpenBox::from_parts_unchecked(kind, a, ends, fs.morphism.apply(x1));
    let filled = fs.fill(&v2);

    let x1e = x1.subst(a, e);
    let mut w_faces: std::collections::BTreeMap<_, _> = unbound
        .iter()
        .filter(|((c, _), _)| *c != a)
        .map(|(k, z)| (*k, z.subst(a, e)))
        .collect();
    w_faces.insert((b, Bit::Zero), Value::base(x1e.clone()));
    let w = OpenBox::from_parts_unchecked(
        BoxKind::Up,
        b,
        w_faces,
        Value::pair(x1e, filled.subst(a, e)),
    );

    let mut outer = unbound;
    outer.insert((b, Bit::Zero), Value::base(x1.clone()));
    outer.insert((a, e), Value::filler(w));
    Value::composite(OpenBox::from_parts_unchecked(
        BoxKind::Up,
        b,
        outer,
        Value::pair(x1.clone(), filled),
    ))
}

/// `ρ_Δ: P_Y X → X ×_Y X` with the filler for boxes of paths.
pub fn path_fibration(po: &PathObject) -> FibrationStructure {
    let fs = po.fibration.clone();
    FibrationStructure::new(
        po.projection.clone(),
        FillingOperator::new(
            format!("paths({})", fs.filling.label()),
            move |bx: &OpenBox| path_fill(&fs, bx),
        ),
    )
}

fn sample_normal(fs: &FibrationStructure, rng: &mut Rng, cfg: &GenConfig, size: usize) -> Value {
    let src = fs.morphism.source();
    let roll = rng.gen_range(0..10);
    let mut w = if roll < 2 {
        Value::base(src.sample(rng, cfg, size))
    } else if roll < 7 || size == 0 {
        let x = src.sample(rng, cfg, size);
        let over = fs.morphism.target().support(&fs.morphism.apply(&x));
        let candidates = src.support(&x).difference(&over);
        let avoid = src.support(&x).union(&over);
        let a = if !candidates.is_empty() && rng.gen_bool(0.8) {
            sample::pick(rng, &candidates).expect("non-empty")
        } else {
            fresh_name(&avoid)
        };
        let extra = if rng.gen_bool(0.3) {
            NameSet::singleton(fresh_name(&avoid.with(a)))
        } else {
            NameSet::new()
        };
        labelled_path(src, a, &x, &extra).subst(a, Bit::One)
    } else if roll < 9 {
        let w0 = sample_normal(fs, rng, cfg, size - 1);
        let a = fresh_for(&[&w0], &[]);
        let z = unbind(&w0, a).expect("sampled normal form");
        let b = fresh_for(&[&z], &[a]);
        homotopy_k(fs, &z, b).subst(a, Bit::One)
    } else {
        let w0 = sample_normal(fs, rng, cfg, size - 1);
        let kind = if rng.gen_bool(0.5) {
            BoxKind::Up
        } else {
            BoxKind::Down
        };
        let base = crate::free::rho_value(&|x: &Value| Value::pair(x.clone(), x.clone()), &w0);
        let bx = box_of_faces(structural_object(), &w0, base, kind, rng, cfg);
        path_fill(fs, &bx)
    };
    if rng.gen_bool(0.25) && !w.support().is_empty() {
        let c = sample::name_from(rng, cfg, w.support());
        w = w.subst(c, sample::bit(rng));
    }
    if rng.gen_bool(0.25) {
        w = w.act(&sample::perm(rng, cfg, w.support()));
    }
    w
}

/// A commutative square `f ∘ h = k ∘ g` with `h: U → X`, `g: U → V`,
/// `f: X → Y` and `k: V → Y`.
#[derive(Clone, Debug)]
pub struct PullbackSquare {
    pub h: ZMorphism,
    pub g: ZMorphism,
    pub f: ZMorphism,
    pub k: ZMorphism,
}

/// `P_V U → P_Y X`: apply `h` to every element of `U` in the path.
pub fn pullback_transport(
    sq: &PullbackSquare,
    check_iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> Result<MapFn> {
    let mut rng = sample::rng(seed);
    for _ in 0..check_iters {
        let u = sq.g.source().sample(&mut rng, cfg, cfg.rank);
        let lhs = sq.f.apply(&sq.h.apply(&u));
        let rhs = sq.k.apply(&sq.g.apply(&u));
        if !sq.f.target().equal(&lhs, &rhs) {
            return Err(Error::CommutationViolation(format!(
                "f(h({u})) = {lhs} but k(g({u})) = {rhs}"
            )));
        }
    }
    let h = sq.h.map_fn();
    let h2 = h.clone();
    let pair = move |p: &Value| {
        let (x, y) = endpoints(p);
        Value::pair(h2(x), h2(y))
    };
    Ok(Arc::new(move |w| kmap_value(&*h, &pair, w)))
}

/// Picks some `v` with `k(v) = y`, when there is one.
pub type Preimage = Arc<dyn Fn(&Value, &mut Rng) -> Option<Value> + Send + Sync>;

/// The fibration on `V ×_Y X → V` pulled back from `fs` along `k`.
pub fn pullback_fibration(
    fs: &FibrationStructure,
    k: &ZMorphism,
) -> (PullbackObject, FibrationStructure) {
    pullback_fibration_with(fs, k, None)
}

/// As [`pullback_fibration`], sampling the pullback by choosing `x` first
/// and then a preimage of `f(x)` under `k`.
pub fn pullback_fibration_with(
    fs: &FibrationStructure,
    k: &ZMorphism,
    preimage: Option<Preimage>,
) -> (PullbackObject, FibrationStructure) {
    let sampler = preimage.map(|pre| {
        let f = fs.morphism.clone();
        let s: Sampler = Arc::new(move |rng: &mut Rng, cfg: &GenConfig, size: usize| {
            let x = f.source().sample(rng, cfg, size);
            pre(&f.apply(&x), rng).map(|v| Value::pair(v, x))
        });
        s
    });
    let pb = pullback_object_with_sampler(k, &fs.morphism, sampler);
    let first = pb.first();
    let fs = fs.clone();
    let km = k.map_fn();
    let filling = FillingOperator::new(
        format!("pullback({})", fs.filling.label()),
        move |bx: &OpenBox| {
            let v = bx.base();
            let inner = bx.map(
                |u| u.as_pair().expect("pullback element").1.clone(),
                |v| km(v),
            );
            Value::pair(v.clone(), fs.fill(&inner))
        },
    );
    (pb, FibrationStructure::new(first, filling))
}

/// For `U = V ×_Y X`, the inverse of `P_V U → V ×_Y P_Y X`.
pub fn pullback_lift(v_obj: &ZObject, v: &Value, w: &Value) -> Result<Value> {
    if w.as_base().is_some() {
        return Ok(lift_prenormal(v_obj, v, w));
    }
    let a = fresh_for(&[v, w], &[]);
    let z = unbind(w, a)?;
    Ok(lift_prenormal(v_obj, v, &z).subst(a, Bit::One))
}

fn lift_prenormal(v_obj: &ZObject, v: &Value, z: &Value) -> Value {
    match z.as_term() {
        Some(KTerm::Base(x)) => Value::base(Value::pair(v.clone(), x.clone())),
        Some(KTerm::Filler(u)) => {
            let faces = u
                .faces()
                .iter()
                .map(|(&(b, i), f)| ((b, i), lift_prenormal(v_obj, &v_obj.subst(v, b, i), f)))
                .collect();
            let (x1, x2) = endpoints(u.base());
            let base = Value::pair(
                Value::pair(v.clone(), x1.clone()),
                Value::pair(v.clone(), x2.clone()),
            );
            Value::filler(OpenBox::from_parts_unchecked(
                BoxKind::Up,
                u.dir(),
                faces,
                base,
            ))
        }
        _ => panic!("not a pre-normal form: {z}"),
    }
}

/// Checks that pulling `fs` back along `k` gives paths that correspond
/// exactly to pairs `(v, w)` with `k(v) = p(w)`. `preimage` supplies some
/// `v` over a given point of `Y`, when one exists.
pub fn check_pullback_stability(
    fs: &FibrationStructure,
    k: &ZMorphism,
    preimage: Preimage,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let mut report = LawReport::new(format!("pullback:{}", k.label()), seed, iters);
    let (pb, pfs) = pullback_fibration_with(fs, k, Some(preimage.clone()));
    let target = path_object(fs);
    let source = path_object(&pfs);
    let sq = PullbackSquare {
        h: pb.second(),
        g: pb.first(),
        f: fs.morphism.clone(),
        k: k.clone(),
    };
    let transport = match pullback_transport(&sq, iters.min(50), derive_seed(seed, "square"), cfg) {
        Ok(t) => t,
        Err(e) => {
            report.fail("pullback.square-commutes", e.to_string());
            return report;
        }
    };
    let v_obj = k.source().clone();
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let w = source.object.sample(&mut rng, cfg, cfg.rank);
        let moved = transport(&w);
        let v = source.p.apply(&w);
        report.check(
            "pullback.transport-lands",
            target.object.contains(&moved),
            || witness(&[("path", &w), ("image", &moved)]),
        );
        let (kv, pm) = (k.apply(&v), target.p.apply(&moved));
        report.check("pullback.transport-commutes", kv == pm, || {
            witness(&[("path", &w), ("k(p(w))", &kv), ("p(image)", &pm)])
        });
        let back = pullback_lift(&v_obj, &v, &moved);
        report.check("pullback.injective", back.as_ref() == Ok(&w), || {
            witness(&[("path", &w), ("point", &v)])
        });

        let w2 = target.object.sample(&mut rng, cfg, cfg.rank);
        let y = target.p.apply(&w2);
        let Some(v2) = preimage(&y, &mut rng) else {
            continue;
        };
        match pullback_lift(&v_obj, &v2, &w2) {
            Ok(lifted) => {
                report.check(
                    "pullback.lift-member",
                    source.object.contains(&lifted),
                    || witness(&[("point", &v2), ("path", &w2), ("lift", &lifted)]),
                );
                let (pv, tw) = (source.p.apply(&lifted), transport(&lifted));
                report.check("pullback.surjective", pv == v2 && tw == w2, || {
                    witness(&[("point", &v2), ("path", &w2), ("lift", &lifted)])
                });
            }
            Err(e) => report.fail("pullback.surjective", e.to_string()),
        }
    }
    report
}

/// The laws of one path object: membership and closure, unbinding, the
/// path filler, the homotopies, the reflexivity coalgebra and the
/// comparison with name abstraction.
pub fn check_path_object(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let po = path_object(fs);
    let f = &fs.morphism;
    let src = f.source();
    let mut report = LawReport::new(format!("paths:{}", fs.filling.label()), seed, iters);
    let (r, c, kr) = reflexivity_coalgebra(&po);
    let rho_delta = po.free.rho.map_fn();
    let rho_r = kr.rho.map_fn();
    let abstractions = fibred_abstraction(f);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let x = src.sample(&mut rng, cfg, cfg.rank);
        let d = po.delta.apply(&x);
        report.check(
            "path.diagonal",
            d == Value::pair(x.clone(), x.clone()) && po.pairs.object.contains(&d),
            || witness(&[("x", &x), ("Δx", &d)]),
        );
        let rx = r.apply(&x);
        report.check(
            "path.reflexivity",
            po.object.contains(&rx) && po.projection.apply(&rx) == d,
            || witness(&[("x", &x), ("r(x)", &rx)]),
        );
        let inside = x.support().iter().next();
        if let Some(a) = inside {
            report.check("path.prenormal-base", !is_prenormal(&rx, a), || {
                witness(&[("x", &x)])
            });
        }
        report.check(
            "path.prenormal-base",
            is_prenormal(&rx, fresh_for(&[&x], &[])),
            || witness(&[("x", &x)]),
        );
        let cx = c.apply(&rx);
        report.check("path.coalgebra-unit", cx == Value::base(x.clone()), || {
            witness(&[("x", &x), ("c(r(x))", &cx)])
        });

        let w = po.object.sample(&mut rng, cfg, cfg.rank);
        report.check("path.member", po.object.contains(&w), || {
            witness(&[("path", &w)])
        });
        let (pw, ends) = (po.p.apply(&w), rho_delta(&w));
        report.check(
            "path.projection",
            po.pairs.object.contains(&ends) && pw == f.apply(endpoints(&ends).1),
            || witness(&[("path", &w), ("ends", &ends)]),
        );
        let perm = sample::perm(&mut rng, cfg, w.support());
        let moved = w.act(&perm);
        report.check("path.closed-act", po.object.contains(&moved), || {
            witness(&[("path", &w), ("moved", &moved)])
        });
        let name = sample::name_from(&mut rng, cfg, w.support());
        let bit = sample::bit(&mut rng);
        let sub = w.subst(name, bit);
        report.check("path.closed-subst", po.object.contains(&sub), || {
            witness(&[("path", &w), ("substituted", &sub)])
        });

        let a = fresh_for(&[&w, &sub], &[]);
        let z = unbind(&w, a);
        let ok = z
            .as_ref()
            .is_ok_and(|z| is_prenormal(z, a) && z.subst(a, Bit::One) == w);
        report.check("path.bind-unbind", ok, || witness(&[("path", &w)]));
        let Ok(z) = z else { continue };
        let z_sub = unbind(&sub, a);
        let injective = z_sub.as_ref().is_ok_and(|zs| (*zs == z) == (sub == w));
        report.check("path.bind-injective", injective, || {
            witness(&[("path", &w), ("other", &sub)])
        });

        let b = fresh_for(&[&z], &[a]);
        let hz = homotopy_h(fs, &z, b);
        let ends_z = rho_delta(&z);
        let (e0, e1) = (hz.subst(b, Bit::Zero), hz.subst(b, Bit::One));
        report.check(
            "homotopy.h-endpoints",
            Value::pair(e0, e1) == ends_z,
            || witness(&[("z", &z), ("h", &hz), ("ends", &ends_z)]),
        );
        report.check("homotopy.h-member", src.contains(&hz), || {
            witness(&[("z", &z), ("h", &hz)])
        });
        let kz = homotopy_k(fs, &z, b);
        let x1 = endpoints(&ends_z).0.clone();
        report.check(
            "homotopy.k-endpoints",
            kz.subst(b, Bit::Zero) == Value::base(x1.clone()) && kz.subst(b, Bit::One) == z,
            || witness(&[("z", &z), ("k", &kz)]),
        );
        report.check(
            "homotopy.k-prenormal",
            is_prenormal(&kz, a) && po.free.object.contains(&kz),
            || witness(&[("z", &z), ("k", &kz)]),
        );
        let outside = z.support().without(a);
        if !outside.is_empty() {
            let c2 = sample::pick(&mut rng, &outside).expect("non-empty");
            let zc = z.subst(c2, bit);
            let (lhs, rhs) = (homotopy_h(fs, &zc, b), hz.subst(c2, bit));
            report.check("homotopy.h-natural", lhs == rhs, || {
                witness(&[("z", &z), ("h(z(c:=i))", &lhs), ("h(z)(c:=i)", &rhs)])
            });
            let (lhs, rhs) = (homotopy_k(fs, &zc, b), kz.subst(c2, bit));
            report.check("homotopy.k-natural", lhs == rhs, || {
                witness(&[("z", &z), ("k(z(c:=i))", &lhs), ("k(z)(c:=i)", &rhs)])
            });
        }
        let lz = homotopy_l(fs, &z, b);
        let expected = kz.subst(a, Bit::One);
        let got = rho_r(&lz);
        report.check("homotopy.l-projection", got == expected, || {
            witness(&[("z", &z), ("ρ(l)", &got), ("k(a:=1)", &expected)])
        });
        report.check(
            "homotopy.l-fresh",
            !lz.support().contains(a) && kr.object.contains(&lz),
            || witness(&[("z", &z), ("l", &lz)]),
        );

        let cw = c.apply(&w);
        let back = rho_r(&cw);
        report.check("coalgebra.counit", back == w, || {
            witness(&[("path", &w), ("c", &cw), ("ρc", &back)])
        });
        report.check("coalgebra.member", kr.object.contains(&cw), || {
            witness(&[("path", &w), ("c", &cw)])
        });
        let brute = w == Value::base(endpoints(&ends).0.clone());
        report.check(
            "image.decidable",
            decidable_image(&*c.map_fn(), &w) == brute,
            || witness(&[("path", &w)]),
        );

        let abs = abstractions.sample(&mut rng, cfg, cfg.rank);
        match abstraction_to_normal_form(fs, &abs) {
            Ok(g) => {
                let body = abs.as_abs().expect("abstraction");
                let (a0, xb) = (body.bound(), body.body());
                let want = Value::pair(xb.subst(a0, Bit::Zero), xb.subst(a0, Bit::One));
                let got = rho_delta(&g);
                report.check("abstraction.member", po.object.contains(&g), || {
                    witness(&[("abstraction", &abs), ("path", &g)])
                });
                report.check("abstraction.endpoints", got == want, || {
                    witness(&[("abstraction", &abs), ("ends", &got), ("expected", &want)])
                });
                if !xb.support().contains(a0) {
                    report.check(
                        "abstraction.degenerate",
                        g == Value::base(xb.clone()),
                        || witness(&[("abstraction", &abs), ("path", &g)]),
                    );
                }
            }
            Err(e) => report.fail("abstraction.member", e.to_string()),
        }
    }
    let sub = |name: &str| derive_seed(seed, name);
    report.merge(check_zsub_axioms(&po.object, iters, sub("axioms"), cfg));
    report.merge(check_morphism(&c, iters / 2, sub("c"), cfg));
    report.merge(check_morphism(&r, iters / 2, sub("r"), cfg));
    report.merge(check_uniformity(
        &path_fibration(&po),
        iters,
        sub("fill"),
        cfg,
    ));
    report
}
