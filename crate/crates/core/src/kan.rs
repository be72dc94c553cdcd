//! Open boxes, filling operators and fibration structures.
//!
//! An up-box over `f: X → Y` in directions `A` with open direction `a` is a
//! family of faces `u(b,i) ∈ X` indexed by `(A × {0,1}) \ {(a,1)}`, together
//! with a base `y ∈ Y`, such that
//!
//! * `b # u(b,i)` (each face is fresh for its own direction),
//! * `u(b,i)(b' := i') = u(b',i')(b := i)` for `b ≠ b'`,
//! * `f(u(b,i)) = y(b := i)`.
//!
//! A down-box is the same with `(a,0)` missing instead.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::mutation::{self, Mutation};
use crate::nominal::{fresh_name, Name, NameSet, Nominal, Perm};
use crate::report::{witness, LawReport};
use crate::sample::{self, GenConfig, Rng};
use crate::value::Value;
use crate::zsub::{Bit, ZMorphism, ZObject};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoxKind {
    /// Missing the face `(a, 1)`.
    Up,
    /// Missing the face `(a, 0)`.
    Down,
}

impl BoxKind {
    /// The bit of the missing face.
    pub fn missing_bit(self) -> Bit {
        match self {
            BoxKind::Up => Bit::One,
            BoxKind::Down => Bit::Zero,
        }
    }

    pub fn from_missing_bit(i: Bit) -> BoxKind {
        match i {
            Bit::One => BoxKind::Up,
            Bit::Zero => BoxKind::Down,
        }
    }
}

impl fmt::Display for BoxKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoxKind::Up => "up",
            BoxKind::Down => "down",
        })
    }
}

/// The face index set of a box of the given shape, in sorted order.
pub fn box_indices(kind: BoxKind, names: &NameSet, dir: Name) -> Vec<(Name, Bit)> {
    names
        .iter()
        .flat_map(|b| Bit::BOTH.into_iter().map(move |i| (b, i)))
        .filter(|&(b, i)| !(b == dir && i == kind.missing_bit()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OpenBox {
    kind: BoxKind,
    dir: Name,
    faces: BTreeMap<(Name, Bit), Value>,
    base: Value,
}

impl OpenBox {
    /// Assembles a box without checking any of its conditions.
    pub fn from_parts_unchecked(
        kind: BoxKind,
        dir: Name,
        faces: BTreeMap<(Name, Bit), Value>,
        base: Value,
    ) -> Self {
        OpenBox {
            kind,
            dir,
            faces,
            base,
        }
    }

    pub fn kind(&self) -> BoxKind {
        self.kind
    }

    pub fn dir(&self) -> Name {
        self.dir
    }

    pub fn faces(&self) -> &BTreeMap<(Name, Bit), Value> {
        &self.faces
    }

    pub fn face(&self, b: Name, i: Bit) -> Option<&Value> {
        self.faces.get(&(b, i))
    }

    pub fn base(&self) -> &Value {
        &self.base
    }

    pub fn missing_bit(&self) -> Bit {
        self.kind.missing_bit()
    }

    /// The direction set `A`.
    pub fn names(&self) -> NameSet {
        self.faces.keys().map(|(b, _)| *b).collect()
    }

    /// Applies `face` to every face and `base` to the base.
    pub fn map(
        &self,
        face: impl Fn(&Value) -> Value,
        base: impl FnOnce(&Value) -> Value,
    ) -> OpenBox {
        OpenBox {
            kind: self.kind,
            dir: self.dir,
            faces: self.faces.iter().map(|(k, v)| (*k, face(v))).collect(),
            base: base(&self.base),
        }
    }

    /// Applies `face` to every face, keeping the original value whenever
    /// nothing changes, and reports whether anything did.
    pub(crate) fn map_sharing(
        &self,
        face: impl Fn(&Value) -> Value,
        base: impl FnOnce(&Value) -> Value,
    ) -> (OpenBox, bool) {
        let mut changed = false;
        let faces = self
            .faces
            .iter()
            .map(|(k, v)| {
                let w = face(v);
                changed |= !w.ptr_eq(v);
                (*k, w)
            })
            .collect();
        let b = base(&self.base);
        changed |= !b.ptr_eq(&self.base);
        (
            OpenBox {
                kind: self.kind,
                dir: self.dir,
                faces,
                base: b,
            },
            changed,
        )
    }

    /// Substitution in a direction outside `A`, applied facewise and to
    /// the base.
    pub fn subst(&self, c: Name, i: Bit) -> Result<OpenBox> {
        if self.faces.keys().any(|(b, _)| *b == c) {
            return Err(Error::IllegalSubstitution(format!(
                "{c} is a direction of the box"
            )));
        }
        Ok(self.map(|v| v.subst(c, i), |y| y.subst(c, i)))
    }
}

impl Nominal for OpenBox {
    fn act(&self, p: &Perm) -> Self {
        OpenBox {
            kind: self.kind,
            dir: p.apply(self.dir),
            faces: self
                .faces
                .iter()
                .map(|((b, i), v)| ((p.apply(*b), *i), v.act(p)))
                .collect(),
            base: self.base.act(p),
        }
    }

    fn support(&self) -> NameSet {
        let mut s = self.names();
        for v in self.faces.values() {
            s.extend_from(v.support());
        }
        s.extend_from(self.base.support());
        s
    }
}

/// Checks the shape and the three box conditions, with faces handled by
/// `src` and the base by `tgt`.
pub fn validate_box(
    bx: &OpenBox,
    src: &ZObject,
    over: &dyn Fn(&Value) -> Value,
    tgt: &ZObject,
) -> Result<()> {
    let names = bx.names();
    if !names.contains(bx.dir) {
        return Err(Error::MalformedBox(format!(
            "direction {} not among {names}",
            bx.dir
        )));
    }
    let expected = box_indices(bx.kind, &names, bx.dir);
    if !expected.iter().eq(bx.faces.keys()) {
        return Err(Error::MalformedBox(format!(
            "face set does not match a {} box in {names} open at {}",
            bx.kind, bx.dir
        )));
    }
    if !mutation::is_active(Mutation::BoxFreshness) {
        for (&(b, i), u) in &bx.faces {
            if src.support(u).contains(b) {
                return Err(Error::FreshnessViolation { name: b, bit: i });
            }
        }
    }
    for (&(b, i), u) in &bx.faces {
        for (&(c, j), w) in bx.faces.range((b, i)..).skip(1) {
            if b == c {
                continue;
            }
            if !src.equal(&src.subst(u, c, j), &src.subst(w, b, i)) {
                return Err(Error::AdjacencyViolation { b, i, c, j });
            }
        }
    }
    for (&(b, i), u) in &bx.faces {
        if !tgt.equal(&over(u), &tgt.subst(&bx.base, b, i)) {
            return Err(Error::NotOverBase { name: b, bit: i });
        }
    }
    Ok(())
}

/// Builds and validates an open box over `f`.
pub fn make_open_box(
    kind: BoxKind,
    names: &NameSet,
    dir: Name,
    faces: BTreeMap<(Name, Bit), Value>,
    base: Value,
    f: &ZMorphism,
) -> Result<OpenBox> {
    if !names.contains(dir) {
        return Err(Error::MalformedBox(format!(
            "direction {dir} not among {names}"
        )));
    }
    let bx = OpenBox {
        kind,
        dir,
        faces,
        base,
    };
    if bx.names() != *names {
        return Err(Error::MalformedBox(format!("faces do not cover {names}")));
    }
    for u in bx.faces.values() {
        if !f.source().contains(u) {
            return Err(Error::NotMember(f.source().describe()));
        }
    }
    if !f.target().contains(&bx.base) {
        return Err(Error::NotMember(f.target().describe()));
    }
    validate_box(&bx, f.source(), &|u| f.apply(u), f.target())?;
    Ok(bx)
}

/// A random valid box over `f`: the faces of one random element `t0` in
/// random directions, over `f(t0)`.
pub fn sample_box(f: &ZMorphism, rng: &mut Rng, cfg: &GenConfig, size: usize) -> OpenBox {
    let t0 = f.source().sample(rng, cfg, size);
    let kind = if rng.gen_bool(0.5) {
        BoxKind::Up
    } else {
        BoxKind::Down
    };
    box_of_faces(f.source(), &t0, f.apply(&t0), kind, rng, cfg)
}

/// The box formed by the faces of `t0` in random directions drawn mostly
/// from its support.
pub fn box_of_faces(
    src: &ZObject,
    t0: &Value,
    base: Value,
    kind: BoxKind,
    rng: &mut Rng,
    cfg: &GenConfig,
) -> OpenBox {
    let pool = src.support(t0).union(&cfg.alphabet());
    let names = sample::subset(rng, &pool, cfg.dims);
    let dirs = names.to_vec();
    let dir = dirs[rng.gen_range(0..dirs.len())];
    let faces = box_indices(kind, &names, dir)
        .into_iter()
        .map(|(b, i)| ((b, i), src.subst(t0, b, i)))
        .collect();
    OpenBox {
        kind,
        dir,
        faces,
        base,
    }
}

pub type BoxFn = Arc<dyn Fn(&OpenBox) -> Value + Send + Sync>;

/// Chooses a filler for every box; up- and down-boxes are told apart by
/// their kind.
#[derive(Clone)]
pub struct FillingOperator {
    label: String,
    fill: BoxFn,
}

impl FillingOperator {
    pub fn new(
        label: impl Into<String>,
        fill: impl Fn(&OpenBox) -> Value + Send + Sync + 'static,
    ) -> Self {
        FillingOperator {
            label: label.into(),
            fill: Arc::new(fill),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn fill(&self, bx: &OpenBox) -> Value {
        (self.fill)(bx)
    }
}

impl fmt::Debug for FillingOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FillingOperator({})", self.label)
    }
}

/// A morphism together with a filling operator for it.
#[derive(Clone, Debug)]
pub struct FibrationStructure {
    pub morphism: ZMorphism,
    pub filling: FillingOperator,
}

impl FibrationStructure {
    pub fn new(morphism: ZMorphism, filling: FillingOperator) -> Self {
        FibrationStructure { morphism, filling }
    }

    pub fn fill(&self, bx: &OpenBox) -> Value {
        self.filling.fill(bx)
    }
}

/// The identity on `x` with the filler that returns the base.
pub fn identity_fibration(x: &ZObject) -> FibrationStructure {
    FibrationStructure::new(
        ZMorphism::identity(x),
        FillingOperator::new("base", |bx: &OpenBox| bx.base().clone()),
    )
}

/// Checks that the operator returns fillers and is uniform: equivariant
/// and stable under substitution in directions outside the box.
pub fn check_uniformity(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let f = &fs.morphism;
    let (src, tgt) = (f.source(), f.target());
    let mut report = LawReport::new(format!("uniformity:{}", fs.filling.label()), seed, iters);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let bx = sample_box(f, &mut rng, cfg, cfg.rank);
        let bx_witness = || crate::value::Value::filler(bx.clone());
        let x = fs.fill(&bx);
        report.check("filler.member", src.contains(&x), || {
            witness(&[("box", &bx_witness()), ("filler", &x)])
        });
        let fx = f.apply(&x);
        report.check("filler.over-base", tgt.equal(&fx, bx.base()), || {
            witness(&[("box", &bx_witness()), ("filler", &x)])
        });
        for (&(b, i), u) in bx.faces() {
            let xb = src.subst(&x, b, i);
            report.check("filler.faces", src.equal(&xb, u), || {
                witness(&[
                    ("box", &bx_witness()),
                    ("filler", &x),
                    ("face", u),
                    ("restricted", &xb),
                ])
            });
        }
        let supp = bx.support();
        let p = sample::perm(&mut rng, cfg, &supp);
        let lhs = fs.fill(&bx.act(&p));
        let rhs = src.act(&p, &x);
        report.check("filler.equivariant", src.equal(&lhs, &rhs), || {
            witness(&[
                ("box", &bx_witness()),
                ("fill(p box)", &lhs),
                ("p fill(box)", &rhs),
            ])
        });
        let outside = supp.difference(&bx.names());
        let c = if outside.is_empty() || rng.gen_bool(0.2) {
            fresh_name(&supp)
        } else {
            let v = outside.to_vec();
            v[rng.gen_range(0..v.len())]
        };
        let j = sample::bit(&mut rng);
        let moved = bx.subst(c, j).expect("c is not a direction");
        let lhs = fs.fill(&moved);
        let rhs = src.subst(&x, c, j);
        report.check("filler.subst-uniform", src.equal(&lhs, &rhs), || {
            witness(&[
                ("box", &bx_witness()),
                ("fill(box(c:=j))", &lhs),
                ("fill(box)(c:=j)", &rhs),
            ])
        });
    }
    report
}

/// Corrupts sampled boxes and checks that validation names the broken
/// condition: a face replaced by the filler mentions its own direction, and
/// a face replaced by the opposite face of the filler breaks adjacency.
pub fn check_box_validation(
    fs: &FibrationStructure,
    iters: usize,
    seed: u64,
    cfg: &GenConfig,
) -> LawReport {
    let f = &fs.morphism;
    let (src, tgt) = (f.source(), f.target());
    let over = |u: &Value| f.apply(u);
    let mut report = LawReport::new(format!("boxes:{}", f.label()), seed, iters);
    let mut rng = sample::rng(seed);
    for _ in 0..iters {
        let bx = sample_box(f, &mut rng, cfg, cfg.rank);
        report.check(
            "box.sampled-valid",
            validate_box(&bx, src, &over, tgt).is_ok(),
            || witness(&[("box", &Value::filler(bx.clone()))]),
        );
        let x = fs.fill(&bx);
        let keys: Vec<(Name, Bit)> = bx.faces.keys().copied().collect();
        let (b, i) = keys[rng.gen_range(0..keys.len())];
        if src.support(&x).contains(b) {
            let mut stale = bx.clone();
            stale.faces.insert((b, i), x.clone());
            let got = validate_box(&stale, src, &over, tgt);
            report.check(
                "box.rejects-stale-face",
                matches!(got, Err(Error::FreshnessViolation { .. })),
                || witness(&[("box", &Value::filler(stale.clone()))]),
            );
        }
        let swapped = src.subst(&x, b, i.flip());
        let broken = bx.faces.iter().any(|(&(c, j), w)| {
            c != b && !src.equal(&src.subst(&swapped, c, j), &src.subst(w, b, i))
        });
        if broken {
            let mut bad = bx.clone();
            bad.faces.insert((b, i), swapped);
            let got = validate_box(&bad, src, &over, tgt);
            report.check(
                "box.rejects-misaligned-face",
                matches!(got, Err(Error::AdjacencyViolation { .. })),
                || witness(&[("box", &Value::filler(bad.clone()))]),
            );
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::{CubePoint, CubeVal};
    use crate::zsub::{cube_object, terminal_object};

    fn bang(keys: &NameSet) -> ZMorphism {
        ZMorphism::to_terminal(&cube_object(keys))
    }

    fn point(coords: &[(u32, CubeVal)]) -> Value {
        Value::cube(CubePoint::new(coords.iter().map(|(k, v)| (Name(*k), *v)).collect()).unwrap())
    }

    #[test]
    fn index_set_omits_the_missing_face() {
        let names = NameSet::first(2);
        let up = box_indices(BoxKind::Up, &names, Name(0));
        assert_eq!(up.len(), 3);
        assert!(!up.contains(&(Name(0), Bit::One)));
        let down = box_indices(BoxKind::Down, &names, Name(1));
        assert!(!down.contains(&(Name(1), Bit::Zero)));
    }

    #[test]
    fn rejects_a_face_mentioning_its_direction() {
        let f = bang(&NameSet::singleton(Name(9)));
        let faces = [((Name(0), Bit::Zero), point(&[(9, CubeVal::Name(Name(0)))]))]
            .into_iter()
            .collect();
        let err = make_open_box(
            BoxKind::Up,
            &NameSet::singleton(Name(0)),
            Name(0),
            faces,
            Value::unit(),
            &f,
        );
        assert_eq!(
            err,
            Err(Error::FreshnessViolation {
                name: Name(0),
                bit: Bit::Zero
            })
        );
    }

    #[test]
    fn rejects_faces_that_disagree_on_an_edge() {
        let f = bang(&NameSet::singleton(Name(9)));
        let names = NameSet::first(2);
        let mut faces = BTreeMap::new();
        faces.insert((Name(0), Bit::Zero), point(&[(9, CubeVal::Bit(Bit::Zero))]));
        faces.insert((Name(1), Bit::Zero), point(&[(9, CubeVal::Bit(Bit::One))]));
        faces.insert((Name(1), Bit::One), point(&[(9, CubeVal::Bit(Bit::One))]));
        let err = make_open_box(BoxKind::Up, &names, Name(0), faces, Value::unit(), &f);
        assert!(
            matches!(err, Err(Error::AdjacencyViolation { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn faces_of_one_element_form_a_box() {
        let f = bang(&NameSet::first(2));
        let mut rng = sample::rng(1);
        let cfg = GenConfig::default();
        for _ in 0..200 {
            let bx = sample_box(&f, &mut rng, &cfg, 0);
            let rebuilt = make_open_box(
                bx.kind(),
                &bx.names(),
                bx.dir(),
                bx.faces().clone(),
                bx.base().clone(),
                &f,
            );
            assert_eq!(rebuilt, Ok(bx));
        }
    }

    #[test]
    fn substitution_in_a_direction_is_illegal() {
        let f = bang(&NameSet::first(1));
        let mut rng = sample::rng(2);
        let bx = sample_box(&f, &mut rng, &GenConfig::default(), 0);
        assert!(matches!(
            bx.subst(bx.dir(), Bit::Zero),
            Err(Error::IllegalSubstitution(_))
        ));
    }

    #[test]
    fn base_filler_of_an_identity_is_uniform() {
        let cfg = GenConfig::default();
        let r = check_uniformity(
            &identity_fibration(&cube_object(&NameSet::first(2))),
            300,
            4,
            &cfg,
        );
        assert!(r.is_clean(), "{}", r.to_text());
        let r = check_uniformity(&identity_fibration(&terminal_object()), 20, 4, &cfg);
        assert!(r.is_clean(), "{}", r.to_text());
    }

    #[test]
    fn a_constant_filler_is_caught() {
        let x = cube_object(&NameSet::first(2));
        let fs = FibrationStructure::new(
            ZMorphism::identity(&x),
            FillingOperator::new("const", |_: &OpenBox| {
                Value::cube(CubePoint::identity(&NameSet::first(2)))
            }),
        );
        let r = check_uniformity(&fs, 100, 4, &GenConfig::default());
        assert!(!r.is_clean());
    }
}
