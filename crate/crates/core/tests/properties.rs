//! Invariants of terms, names and boxes over random inputs.

use kanforge::free::{validate_term, FreeFibration};
use kanforge::generators::{yoneda_evaluate, JObject};
use kanforge::kan::sample_box;
use kanforge::sample::{self, GenConfig};
use kanforge::zsub::{cube_object, terminal_object};
use kanforge::{json, make_free_fibration, Bit, BoxKind, KTerm, Name, NameSet, Nominal, Perm, Value, ZMorphism};
use proptest::prelude::*;

fn unit_free() -> FreeFibration {
    make_free_fibration(&ZMorphism::identity(&terminal_object()))
}

fn cube_free() -> FreeFibration {
    make_free_fibration(&ZMorphism::to_terminal(&cube_object(&NameSet::from_iter([Name(40), Name(41)]))))
}

fn term(seed: u64, rank: usize, over_cube: bool) -> Value {
    let cfg = GenConfig { rank, ..GenConfig::default() };
    let kf = if over_cube { cube_free() } else { unit_free() };
    kf.sample(&mut sample::rng(seed), &cfg)
}

fn bit(b: bool) -> Bit {
    if b {
        Bit::One
    } else {
        Bit::Zero
    }
}

fn perm(pairs: &[(u32, u32)]) -> Perm {
    pairs
        .iter()
        .fold(Perm::identity(), |p, &(a, b)| p.compose(&Perm::swap(Name(a), Name(b))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sampled_terms_are_well_formed(seed in any::<u64>(), rank in 0usize..=3, cube in any::<bool>()) {
        let t = term(seed, rank, cube);
        let kf = if cube { cube_free() } else { unit_free() };
        prop_assert!(validate_term(&kf.f, &t).is_ok());
        prop_assert!(t.rank() <= rank);
        prop_assert_eq!(t.rank() == 0, matches!(t.as_term(), Some(KTerm::Base(_))));
    }

    #[test]
    fn json_round_trips(seed in any::<u64>(), cube in any::<bool>()) {
        let t = term(seed, 2, cube);
        let text = json::to_string(&t);
        let back = json::from_str(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(json::to_string(&back), text);
    }

    #[test]
    fn permutations_act(seed in any::<u64>(), p in prop::collection::vec((0u32..6, 0u32..6), 0..4), q in prop::collection::vec((0u32..6, 0u32..6), 0..4)) {
        let t = term(seed, 2, false);
        let (p, q) = (perm(&p), perm(&q));
        prop_assert_eq!(t.act(&Perm::identity()), t.clone());
        prop_assert_eq!(t.act(&q).act(&p), t.act(&p.compose(&q)));
        prop_assert_eq!(t.act(&p).act(&p.inverse()), t.clone());
        prop_assert_eq!(t.act(&p).support().clone(), t.support().act(&p));
        prop_assert_eq!(t.act(&p).rank(), t.rank());
    }

    #[test]
    fn substitution_laws(seed in any::<u64>(), a in 0u32..5, b in 0u32..5, i in any::<bool>(), j in any::<bool>(), cube in any::<bool>()) {
        let t = term(seed, 2, cube);
        let (a, b, i, j) = (Name(a), Name(b), bit(i), bit(j));
        let ta = t.subst(a, i);
        prop_assert!(!ta.support().contains(a));
        prop_assert!(ta.support().is_subset(t.support()));
        prop_assert!(ta.rank() <= t.rank());
        prop_assert_eq!(ta.subst(a, j), ta.clone());
        if !t.support().contains(a) {
            prop_assert_eq!(&ta, &t);
        }
        if a != b {
            prop_assert_eq!(ta.subst(b, j), t.subst(b, j).subst(a, i));
        }
    }

    #[test]
    fn substitution_is_equivariant(seed in any::<u64>(), a in 0u32..5, p in prop::collection::vec((0u32..6, 0u32..6), 0..3), i in any::<bool>()) {
        let t = term(seed, 2, false);
        let (a, p, i) = (Name(a), perm(&p), bit(i));
        prop_assert_eq!(t.subst(a, i).act(&p), t.act(&p).subst(p.apply(a), i));
    }

    #[test]
    fn composites_ignore_their_bound_name(seed in any::<u64>(), size in 0usize..=2) {
        let kf = unit_free();
        let cfg = GenConfig::default();
        let mut rng = sample::rng(seed);
        let bx = sample_box(&kf.f, &mut rng, &cfg, size);
        let fresh = bx.support().fresh();
        let renamed = Value::filler(bx.clone()).act(&Perm::swap(bx.dir(), fresh));
        let Some(KTerm::Filler(other)) = renamed.as_term() else { unreachable!() };
        prop_assert_eq!(Value::composite(bx.clone()), Value::composite(other.clone()));
        prop_assert!(!Value::composite(bx).support().contains(fresh));
    }

    #[test]
    fn the_generic_point_evaluates_to_any_point(seed in any::<u64>()) {
        let obj = JObject::new(BoxKind::Down, NameSet::from_iter([Name(100), Name(101)]), Name(101), NameSet::singleton(Name(200))).unwrap();
        let x = obj.codomain().sample(&mut sample::rng(seed), &GenConfig::default(), 0);
        let (p, q) = x.as_pair().unwrap();
        let mut merged = p.as_cube().unwrap().coords().clone();
        merged.extend(q.as_cube().unwrap().coords().iter().map(|(k, v)| (*k, *v)));
        let generic = Value::cube(kanforge::CubePoint::identity(&merged.keys().copied().collect()));
        let point = kanforge::CubePoint::new(merged).unwrap();
        prop_assert_eq!(yoneda_evaluate(&generic, &point).unwrap(), Value::cube(point));
    }
}
