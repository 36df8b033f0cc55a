mod common;

use common::*;
use kbalg::algebra::{
    enumerate_points, eval_term, pull_point, Assignment, Context, Homomorphism, PointSpace, SortedBijection,
    Substitution, Term,
};
use kbalg::frontend::{parse_model, parse_term};
use kbalg::Error;
use proptest::prelude::*;
use rand::Rng;

fn z3() -> kbalg::algebra::MultiModel {
    fixture("z3.kbm")
}

#[test]
fn term_evaluation() {
    let mm = fixture("mp.kbm");
    let x = Context::new([("x", 0)]).unwrap();
    assert_eq!(eval_term(&Term::var("x"), &x, &Assignment(vec![1]), mm.algebra()).unwrap(), 1);

    let mm = z3();
    let t = parse_term("add(z, add(z, z))", mm.signature(), &Context::new([("z", 0)]).unwrap()).unwrap();
    let z = Context::new([("z", 0)]).unwrap();
    // z1 + z1 + z1 = 0 mod 3, and likewise for every other value
    assert_eq!(eval_term(&t, &z, &Assignment(vec![1]), mm.algebra()).unwrap(), 0);
    assert_eq!(eval_term(&t, &z, &Assignment(vec![2]), mm.algebra()).unwrap(), 0);

    let v4 = fixture("v4.kbm");
    let one = v4.signature().op_id("one").unwrap();
    let value = eval_term(&Term::App(one, vec![]), &Context::empty(), &Assignment(vec![]), v4.algebra()).unwrap();
    assert_eq!(value, v4.algebra().table(one)[0]);
}

#[test]
fn point_enumeration() {
    let mm = fixture("m0.kbm");
    let alg = mm.algebra_arc();
    let x = Context::new([("x", 0)]).unwrap();
    let pts = enumerate_points(alg, &x, 1 << 10).unwrap();
    assert_eq!(pts, vec![Assignment(vec![0]), Assignment(vec![1]), Assignment(vec![2])]);

    let xy = Context::new([("x", 0), ("y", 0)]).unwrap();
    let pts = enumerate_points(alg, &xy, 1 << 10).unwrap();
    assert_eq!(pts.len(), 9);
    assert_eq!(pts.first(), Some(&Assignment(vec![0, 0])));
    assert_eq!(pts[1], Assignment(vec![0, 1]));
    assert_eq!(pts.last(), Some(&Assignment(vec![2, 2])));

    assert_eq!(enumerate_points(alg, &Context::empty(), 1).unwrap(), vec![Assignment(vec![])]);
}

#[test]
fn point_cap_is_a_hard_error() {
    let mm = fixture("m0.kbm");
    let xy = Context::new([("x", 0), ("y", 0)]).unwrap();
    match PointSpace::new(mm.algebra_arc().clone(), xy, 8) {
        Err(Error::SizeLimit { size, cap, .. }) => assert_eq!((size, cap), (9, 8)),
        other => panic!("expected a size error, got {other:?}"),
    }
}

#[test]
fn empty_carriers_are_rejected() {
    let e = parse_model("sorts: s\ncarrier s:\nrel P(s)\ninstance f:\n  P: \n").unwrap_err();
    assert!(e.to_string().contains("carriers must be nonempty"), "{e}");
}

#[test]
fn point_pullback() {
    let mm = fixture("m0.kbm");
    let sig = mm.signature();
    let alg = mm.algebra();
    let x = Context::new([("x", 0)]).unwrap();
    let yz = Context::new([("y", 0), ("z", 0)]).unwrap();

    let id = Substitution::identity(&yz);
    assert_eq!(pull_point(&id, &Assignment(vec![1, 2]), alg).unwrap(), Assignment(vec![1, 2]));

    let s = Substitution::new(sig, x.clone(), yz, vec![Term::var("y")]).unwrap();
    assert_eq!(pull_point(&s, &Assignment(vec![1, 2]), alg).unwrap(), Assignment(vec![1]));

    let z = z3();
    let y = Context::new([("y", 0)]).unwrap();
    let add_yy = parse_term("add(y, y)", z.signature(), &y).unwrap();
    let s = Substitution::new(z.signature(), x, y, vec![add_yy]).unwrap();
    assert_eq!(pull_point(&s, &Assignment(vec![2]), z.algebra()).unwrap(), Assignment(vec![1]));
}

#[test]
fn substitutions_are_sort_checked() {
    let mm = fixture("two_sorted.kbm");
    let x = Context::new([("x", 0)]).unwrap();
    let y = Context::new([("y", 1)]).unwrap();
    assert!(Substitution::new(mm.signature(), x, y, vec![Term::var("y")]).is_err());
}

#[test]
fn homomorphism_checks() {
    let z = z3();
    let alg = z.algebra_arc();
    assert!(Homomorphism::new(alg.clone(), alg.clone(), vec![vec![0, 0, 0]]).is_ok());
    assert!(Homomorphism::new(alg.clone(), alg.clone(), vec![vec![1, 2, 0]]).is_err());
    let neg = SortedBijection::new(alg.clone(), alg.clone(), vec![vec![0, 2, 1]]).unwrap();
    assert!(neg.then(&neg).unwrap().is_identity());
    assert_eq!(neg.inverse(), neg);
    assert!(SortedBijection::new(alg.clone(), alg.clone(), vec![vec![0, 0, 0]]).is_err());

    let two = fixture("bare3.kbm");
    let small = parse_model("sorts: s\ncarrier s: a b\nrel P(s)\ninstance f:\n  P: (a)\n").unwrap();
    assert!(SortedBijection::new(two.algebra_arc().clone(), small.algebra_arc().clone(), vec![vec![0, 1, 0]]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn index_decode_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let ctx = random_context(&mut r, m.signature(), 4);
        let space = PointSpace::new(m.algebra_arc().clone(), ctx, 1 << 16).unwrap();
        for (i, p) in space.iter().enumerate() {
            prop_assert_eq!(space.index(&p.0), i);
            prop_assert_eq!(space.decode(i), p.0.clone());
            let expected: usize = p.0.iter().zip(space.radices()).fold(0, |acc, (&d, &r)| acc * r + d);
            prop_assert_eq!(expected, i);
        }
    }

    #[test]
    fn term_evaluation_is_homomorphic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let ctx = random_context(&mut r, sig, 3);
        let space = PointSpace::new(m.algebra_arc().clone(), ctx.clone(), 1 << 16).unwrap();
        for (op, decl) in sig.ops.iter().enumerate() {
            let args: Option<Vec<Term>> = decl.args.iter().map(|&s| random_term(&mut r, sig, &ctx, s, 2)).collect();
            let Some(args) = args else { continue };
            let t = Term::App(op, args.clone());
            for mu in space.iter() {
                let vals: Vec<usize> = args.iter().map(|a| eval_term(a, &ctx, &mu, m.algebra()).unwrap()).collect();
                prop_assert_eq!(eval_term(&t, &ctx, &mu, m.algebra()).unwrap(), m.algebra().apply(op, &vals));
                prop_assert_eq!(eval_term(&t, &ctx, &mu, m.algebra()).unwrap(), naive_term(&m, &ctx, &mu.0, &t));
            }
        }
    }

    #[test]
    fn pullback_is_contravariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 6);
        let sig = m.signature();
        let x = random_context(&mut r, sig, 3);
        let mut y = Context::numbered("y", &[]);
        let mut z = Context::numbered("z", &[]);
        for s in 0..sig.sorts.len() {
            for k in 0..r.gen_range(1..=2) {
                y.push(format!("y{s}_{k}"), s).unwrap();
                z.push(format!("z{s}_{k}"), s).unwrap();
            }
        }
        let (Some(s1), Some(s2)) = (random_substitution(&mut r, sig, &x, &y), random_substitution(&mut r, sig, &y, &z)) else {
            return Ok(());
        };
        let composite = s2.after(&s1).unwrap();
        let space = PointSpace::new(m.algebra_arc().clone(), z, 1 << 16).unwrap();
        for nu in space.iter() {
            let direct = pull_point(&composite, &nu, m.algebra()).unwrap();
            let stepwise = pull_point(&s1, &pull_point(&s2, &nu, m.algebra()).unwrap(), m.algebra()).unwrap();
            prop_assert_eq!(direct, stepwise);
        }
    }
}
