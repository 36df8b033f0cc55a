mod common;

use common::*;
use kbalg::algebra::{Context, Homomorphism, PointSpace, Substitution, Term};
use kbalg::config::Limits;
use kbalg::formula::Formula;
use kbalg::frontend::parse_formula;
use kbalg::semantics::{
    exists_quant, forall_quant, semantically_equivalent, transport_hom, transport_subst, val, Direction, PointSet,
};
use proptest::prelude::*;
use std::sync::Arc;

fn limits() -> Limits {
    Limits::default()
}

fn points(names: &[&[usize]]) -> Vec<Vec<usize>> {
    names.iter().map(|p| p.to_vec()).collect()
}

fn space(mm: &kbalg::algebra::MultiModel, ctx: &Context) -> Arc<PointSpace> {
    Arc::new(PointSpace::new(mm.algebra_arc().clone(), ctx.clone(), 1 << 16).unwrap())
}

#[test]
fn values_of_formulas() {
    let mm = fixture("mp.kbm");
    let m = mm.instance("f1").unwrap();
    let sig = mm.signature();
    let x = Context::new([("x", 0)]).unwrap();
    let p = parse_formula("P(x)", sig, &x).unwrap();
    assert_eq!(points_of(&val(m, &x, &p, &limits()).unwrap()), points(&[&[0]]));
    let ex = parse_formula("exists x. P(x)", sig, &x).unwrap();
    assert!(val(m, &x, &ex, &limits()).unwrap().is_full());

    let xy = Context::new([("x", 0), ("y", 0)]).unwrap();
    let f = parse_formula("P(x) and not (x == y)", sig, &xy).unwrap();
    assert_eq!(points_of(&val(m, &xy, &f, &limits()).unwrap()), points(&[&[0, 1], &[0, 2]]));
}

#[test]
fn existential_quantifier_examples() {
    let mm = fixture("m0.kbm");
    let xy = Context::new([("x", 0), ("y", 0)]).unwrap();
    let sp = space(&mm, &xy);
    assert!(exists_quant(&PointSet::empty(&sp), "x").unwrap().is_empty());
    assert!(exists_quant(&PointSet::full(&sp), "y").unwrap().is_full());
    let a = PointSet::from_indices(&sp, [sp.index(&[0, 1])]);
    assert_eq!(
        points_of(&exists_quant(&a, "x").unwrap()),
        points(&[&[0, 1], &[1, 1], &[2, 1]])
    );
    assert!(exists_quant(&a, "z").is_err());
}

#[test]
fn substitution_transport_examples() {
    let mm = fixture("m0.kbm");
    let sig = mm.signature();
    let x = Context::new([("x", 0)]).unwrap();
    let yz = Context::new([("y", 0), ("z", 0)]).unwrap();
    let (sx, syz) = (space(&mm, &x), space(&mm, &yz));

    let id = Substitution::identity(&x);
    let a = PointSet::from_indices(&sx, [1]);
    assert_eq!(transport_subst(&id, &a, Direction::Preimage).unwrap(), a);
    assert_eq!(transport_subst(&id, &a, Direction::Image).unwrap(), a);

    let s = Substitution::new(sig, x, yz, vec![Term::var("y")]).unwrap();
    let a = PointSet::from_indices(&sx, [0]);
    let pre = transport_subst(&s, &a, Direction::Preimage).unwrap();
    assert_eq!(points_of(&pre), points(&[&[0, 0], &[0, 1], &[0, 2]]));
    let b = PointSet::from_indices(&syz, [syz.index(&[0, 1])]);
    assert_eq!(points_of(&transport_subst(&s, &b, Direction::Image).unwrap()), points(&[&[0]]));
}

#[test]
fn image_transport_is_not_boolean() {
    // s(x) = y over {y, z}: the image of a set and of its complement can overlap.
    let mm = fixture("m0.kbm");
    let x = Context::new([("x", 0)]).unwrap();
    let yz = Context::new([("y", 0), ("z", 0)]).unwrap();
    let s = Substitution::new(mm.signature(), x, yz.clone(), vec![Term::var("y")]).unwrap();
    let syz = space(&mm, &yz);
    let b = PointSet::from_indices(&syz, [syz.index(&[0, 0])]);
    let img = transport_subst(&s, &b, Direction::Image).unwrap();
    let img_c = transport_subst(&s, &b.complement(), Direction::Image).unwrap();
    assert_ne!(img.complement(), img_c);
    assert!(transport_subst(&s, &PointSet::empty(&syz), Direction::Image).unwrap().is_empty());
}

#[test]
fn homomorphism_transport_examples() {
    let mm = fixture("m0.kbm");
    let alg = mm.algebra_arc();
    let x = Context::new([("x", 0)]).unwrap();
    let sx = space(&mm, &x);
    let a = PointSet::from_indices(&sx, [0]);
    let id = Homomorphism::identity(alg);
    assert_eq!(transport_hom(&id, &a, Direction::Image).unwrap(), a);
    assert_eq!(transport_hom(&id, &a, Direction::Preimage).unwrap(), a);
    let cycle = Homomorphism::new(alg.clone(), alg.clone(), vec![vec![1, 2, 0]]).unwrap();
    assert_eq!(points_of(&transport_hom(&cycle, &a, Direction::Image).unwrap()), points(&[&[1]]));
    assert_eq!(points_of(&transport_hom(&cycle, &a, Direction::Preimage).unwrap()), points(&[&[2]]));
}

#[test]
fn semantic_equivalence_examples() {
    let mm = fixture("mp2.kbm");
    let sig = mm.signature();
    let y = Context::new([("y", 0)]).unwrap();
    let a = parse_formula("forall y. P(y)", sig, &y).unwrap();
    let b = Formula::exists("y", Formula::Rel(0, vec![Term::var("y")]).not()).not();
    assert!(semantically_equivalent(&a, &b, &mm, &y, &limits()).unwrap());

    let x = Context::new([("x", 0)]).unwrap();
    let p = parse_formula("P(x)", sig, &x).unwrap();
    assert!(!semantically_equivalent(&p, &p.clone().not(), &mm, &x, &limits()).unwrap());
    let refl = parse_formula("x == x", sig, &x).unwrap();
    assert!(semantically_equivalent(&refl, &Formula::True, &mm, &x, &limits()).unwrap());
}

#[test]
fn mismatched_spaces_are_rejected() {
    let mm = fixture("m0.kbm");
    let x = Context::new([("x", 0)]).unwrap();
    let y = Context::new([("y", 0)]).unwrap();
    let s = Substitution::identity(&y);
    let a = PointSet::full(&space(&mm, &x));
    assert!(transport_subst(&s, &a, Direction::Preimage).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn evaluator_matches_naive_semantics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let ctx = random_context(&mut r, sig, 3);
        let f = random_formula(&mut r, sig, &ctx, 4);
        let got = val(&m, &ctx, &f, &limits()).unwrap();
        prop_assert_eq!(points_of(&got), naive_val(&m, &ctx, &f), "{}", f.display(sig));
    }

    #[test]
    fn forall_is_dual_to_exists(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let ctx = random_context(&mut r, sig, 3);
        let f = random_formula(&mut r, sig, &ctx, 3);
        let v = ctx.name(0).to_string();
        let a = val(&m, &ctx, &f, &limits()).unwrap();
        let direct = val(&m, &ctx, &Formula::forall(v.clone(), f), &limits()).unwrap();
        prop_assert_eq!(&direct, &forall_quant(&a, &v).unwrap());
        prop_assert!(direct.is_subset(&a));
    }

    #[test]
    fn preimage_is_a_boolean_homomorphism(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let x = random_context(&mut r, sig, 2);
        let y = random_context(&mut r, sig, 3);
        let Some(s) = random_substitution(&mut r, sig, &x, &y) else { return Ok(()) };
        let sx = Arc::new(PointSpace::new(m.algebra_arc().clone(), x, 1 << 16).unwrap());
        let (a, b) = (random_set(&mut r, &PointSet::empty(&sx)), random_set(&mut r, &PointSet::empty(&sx)));
        let pre = |p: &PointSet| transport_subst(&s, p, Direction::Preimage).unwrap();
        prop_assert_eq!(pre(&a.union(&b)), pre(&a).union(&pre(&b)));
        prop_assert_eq!(pre(&a.intersection(&b)), pre(&a).intersection(&pre(&b)));
        prop_assert_eq!(pre(&a.complement()), pre(&a).complement());
        // the image direction is left adjoint: s^* B ⊆ A iff B ⊆ s_* A
        let sy = pre(&a);
        let c = random_set(&mut r, &sy);
        let img = transport_subst(&s, &c, Direction::Image).unwrap();
        prop_assert_eq!(img.is_subset(&a), c.is_subset(&sy));
    }

    #[test]
    fn values_commute_with_substitution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let x = random_context(&mut r, sig, 2);
        let y = Context::numbered("y", &(0..sig.sorts.len()).flat_map(|s| [s, s]).collect::<Vec<_>>());
        let Some(s) = random_substitution(&mut r, sig, &x, &y) else { return Ok(()) };
        let f = random_formula(&mut r, sig, &x, 2);
        let Ok(g) = f.apply_substitution(&s) else { return Ok(()) };
        let lhs = val(&m, &y, &g, &limits()).unwrap();
        let rhs = transport_subst(&s, &val(&m, &x, &f, &limits()).unwrap(), Direction::Preimage).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
