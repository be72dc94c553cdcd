//! Small hand-computed cases for each construction.

use std::collections::BTreeMap;

use kanforge::bridge::canonical_algebra;
use kanforge::enumerate::enumerate_k_terminal;
use kanforge::free::{formal_filling, pi_value, rho_value, sigma_value};
use kanforge::generators::{eta_value, JObject};
use kanforge::kan::make_open_box;
use kanforge::path::{
    abstraction_to_normal_form, homotopy_h, homotopy_k, is_prenormal, path_object,
    reflexivity_coalgebra,
};
use kanforge::zsub::{cube_object, terminal_object};
use kanforge::{
    make_free_fibration, Bit, BoxKind, CubePoint, CubeVal, KTerm, Name, NameSet, OpenBox, Value,
    ZMorphism,
};

fn a(i: u32) -> Name {
    Name(i)
}

fn unit_base() -> Value {
    Value::base(Value::unit())
}

/// The up-box in direction `a0` whose only face is `λ(*)`.
fn single_face() -> OpenBox {
    let faces = BTreeMap::from([((a(0), Bit::Zero), unit_base())]);
    OpenBox::from_parts_unchecked(BoxKind::Up, a(0), faces, Value::unit())
}

fn point(coords: &[(u32, CubeVal)]) -> CubePoint {
    CubePoint::new(coords.iter().map(|(k, v)| (Name(*k), *v)).collect()).unwrap()
}

#[test]
fn filler_substitution_cases() {
    let t = Value::filler(single_face());
    assert_eq!(t.subst(a(0), Bit::Zero), unit_base());
    assert_eq!(t.subst(a(0), Bit::One), Value::composite(single_face()));
    assert_eq!(t.subst(a(3), Bit::One), t);
}

#[test]
fn projection_cases() {
    let id = |x: &Value| x.clone();
    let x = Value::cube(point(&[(40, CubeVal::Name(a(0)))]));
    assert_eq!(rho_value(&id, &Value::base(x.clone())), x);
    let faces = BTreeMap::from([(
        (a(0), Bit::Zero),
        Value::base(Value::cube(point(&[(40, CubeVal::Bit(Bit::Zero))]))),
    )]);
    let bx = OpenBox::from_parts_unchecked(BoxKind::Up, a(0), faces, x.clone());
    assert_eq!(rho_value(&id, &Value::filler(bx.clone())), x);
    let end = Value::cube(point(&[(40, CubeVal::Bit(Bit::One))]));
    assert_eq!(rho_value(&id, &Value::composite(bx)), end);
}

#[test]
fn path_lifting_box_is_valid() {
    let c = cube_object(&NameSet::singleton(Name(40)));
    let f = ZMorphism::identity(&c);
    let x = Value::cube(point(&[(40, CubeVal::Bit(Bit::Zero))]));
    let y = Value::cube(point(&[(40, CubeVal::Name(a(0)))]));
    let faces = BTreeMap::from([((a(0), Bit::Zero), x)]);
    let bx = make_open_box(BoxKind::Up, &NameSet::singleton(a(0)), a(0), faces, y, &f);
    assert!(bx.is_ok(), "{bx:?}");
}

#[test]
fn comultiplication_and_multiplication_on_units() {
    let x = Value::base(Value::unit());
    assert_eq!(sigma_value(&x), x);
    let t = Value::filler(single_face());
    assert_eq!(pi_value(&Value::base(t.clone())), t);
}

#[test]
fn canonical_algebra_cases() {
    let kf = make_free_fibration(&ZMorphism::identity(&terminal_object()));
    let alg = canonical_algebra(&kf);
    let t = Value::filler(single_face());
    assert_eq!(alg.g.apply(&Value::base(t.clone())), t);
    // a box of units is filled by the box of their contents
    let lifted = single_face().map(|u| Value::base(u.clone()), Value::clone);
    assert_eq!(alg.g.apply(&Value::filler(lifted)), t);
}

#[test]
fn cube_point_substitution() {
    let p = point(&[(0, CubeVal::Name(a(2))), (1, CubeVal::Bit(Bit::Zero))]);
    let want = point(&[(0, CubeVal::Bit(Bit::One)), (1, CubeVal::Bit(Bit::Zero))]);
    assert_eq!(p.subst(a(2), Bit::One), want);
}

#[test]
fn unit_coalgebra_cases() {
    let obj = JObject::new(
        BoxKind::Up,
        NameSet::from_iter([Name(100), Name(101)]),
        Name(100),
        NameSet::new(),
    )
    .unwrap();
    let at = |p: CubePoint| Value::pair(Value::cube(p), Value::cube(CubePoint::identity(&NameSet::new())));
    // on the open box
    let boundary = at(point(&[(100, CubeVal::Bit(Bit::Zero)), (101, CubeVal::Name(a(5)))]));
    assert_eq!(eta_value(&obj, &boundary), Value::base(boundary.clone()));
    // every coordinate a name
    let inner = at(point(&[(100, CubeVal::Name(a(4))), (101, CubeVal::Name(a(5)))]));
    let KTerm::Filler(bx) = eta_value(&obj, &inner).as_term().cloned().unwrap() else {
        panic!("expected a filler");
    };
    assert_eq!(bx.dir(), a(4));
    assert_eq!(bx.base(), &inner);
    // the missing face
    let lid = at(point(&[(100, CubeVal::Bit(Bit::One)), (101, CubeVal::Name(a(5)))]));
    let e = eta_value(&obj, &lid);
    assert!(matches!(e.as_term(), Some(KTerm::Composite(_))), "{e}");
    assert!(!e.support().contains(a(4)) && e.support().contains(a(5)));
}

#[test]
fn path_cases_on_constant_paths() {
    let kf = make_free_fibration(&ZMorphism::identity(&terminal_object()));
    let fs = formal_filling(&kf);
    let x = Value::filler(single_face());
    let bx = Value::base(x.clone());
    assert!(is_prenormal(&bx, a(7)));
    assert!(!is_prenormal(&bx, a(0)));
    assert_eq!(homotopy_h(&fs, &bx, a(8)), x);
    assert_eq!(homotopy_k(&fs, &bx, a(8)), bx);
    let po = path_object(&fs);
    let (r, c, _) = reflexivity_coalgebra(&po);
    assert_eq!(c.apply(&r.apply(&x)), bx);
    assert_eq!(
        abstraction_to_normal_form(&fs, &Value::abs(a(7), x.clone())).unwrap(),
        r.apply(&x)
    );
}

#[test]
fn enumeration_small_counts() {
    assert_eq!(enumerate_k_terminal(0, 3, 10).unwrap().counts(), vec![1]);
    // one up-filler, its composite, and the two down companions
    assert_eq!(enumerate_k_terminal(1, 1, 10).unwrap().counts(), vec![1, 4]);
}
