mod common;

use common::*;
use kbalg::algebra::{Context, Substitution, Term};
use kbalg::config::Limits;
use kbalg::formula::{Description, Formula};
use kbalg::frontend::{parse_query, parse_witness};
use kbalg::kbase::{InducedMap, KbConfig, KnowledgeBase};
use proptest::prelude::*;
use rand::Rng;

fn kb(file: &str) -> KnowledgeBase {
    KnowledgeBase::new(fixture(file))
}

fn desc(kb: &KnowledgeBase, text: &str) -> Description {
    parse_query(text, kb.data().signature()).unwrap()
}

fn map(m: InducedMap) -> kbalg::kbase::ContentMap {
    match m {
        InducedMap::Map(c) => c,
        InducedMap::Rejected { point } => panic!("rejected at {point}"),
    }
}

#[test]
fn query_examples() {
    let mp = kb("mp.kbm");
    let pp = desc(&mp, &std::fs::read_to_string(fixture_path("pp.kbq")).unwrap());
    assert_eq!(points_of(&mp.query("f1", &pp).unwrap()), vec![vec![0, 0]]);

    let two = kb("mp2.kbm");
    assert_eq!(points_of(&two.query("f2", &pp).unwrap()), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    assert!(two.query("nope", &pp).is_err());

    let empty = desc(&mp, "vars x:s;");
    assert!(mp.query("f1", &empty).unwrap().is_full());
}

#[test]
fn induced_maps() {
    let mp = kb("mp.kbm");
    let sig = mp.data().signature();
    let d1 = desc(&mp, "vars x:s, y:s;\nP(x)\nP(y)");
    let xy = d1.context.clone();

    let id = Substitution::identity(&xy);
    let m = map(mp.induced_content_map("f1", &id, &d1, &d1).unwrap());
    assert_eq!(m.pairs(), &[(0, 0)]);

    let z = Context::new([("z", 0)]).unwrap();
    let s = Substitution::new(sig, z, xy, vec![Term::var("x")]).unwrap();
    let d2 = desc(&mp, "vars z:s;\nP(z)");
    let m = map(mp.induced_content_map("f1", &s, &d1, &d2).unwrap());
    assert_eq!(m.pairs(), &[(0, 0)]);
    assert_eq!(m.to_string(), "x=e1 y=e1 -> z=e1\n");

    let d3 = desc(&mp, "vars z:s;\nnot P(z)");
    match mp.induced_content_map("f1", &s, &d1, &d3).unwrap() {
        InducedMap::Rejected { point } => assert_eq!(point, "x=e1 y=e1"),
        other => panic!("expected a rejection, got {other:?}"),
    }
}

#[test]
fn zero_caps_are_rejected() {
    let config = KbConfig {
        limits: Limits {
            max_points: 0,
            ..Limits::default()
        },
        ..KbConfig::default()
    };
    assert!(KnowledgeBase::with_config(fixture("mp.kbm"), config).is_err());
}

#[test]
fn equivalence_entry_points() {
    let (mp, mq, m0) = (kb("mp.kbm"), kb("mq.kbm"), kb("m0.kbm"));
    assert!(mp.equivalence(&mq, false).unwrap().is_equivalent());
    assert!(mp.equivalence(&mq, true).unwrap().is_equivalent());
    assert!(!mp.equivalence(&m0, false).unwrap().is_equivalent());

    let text = std::fs::read_to_string(fixture_path("pq.kbw")).unwrap();
    let w = parse_witness(&text, "pq.kbw", mp.data(), mq.data()).unwrap();
    assert!(mp.verify(&mq, &w).unwrap().all_passed());
}

/// Substitutions `s1: W(Y) -> W(X)` and `s2: W(Z) -> W(Y)` with descriptions over
/// `X, Y, Z` built so both are admissible: each reply is pulled into the next.
struct Chain {
    kb: KnowledgeBase,
    s1: Substitution,
    s2: Substitution,
    d1: Description,
    d2: Description,
    d3: Description,
}

/// Quantifier-free, so it pulls back along any substitution.
fn open_formula(r: &mut TestRng, sig: &kbalg::algebra::Signature, ctx: &Context, depth: usize) -> Formula {
    if depth == 0 || r.gen_bool(0.3) {
        return random_atom(r, sig, ctx);
    }
    match r.gen_range(0..3) {
        0 => open_formula(r, sig, ctx, depth - 1).not(),
        1 => open_formula(r, sig, ctx, depth - 1).and(open_formula(r, sig, ctx, depth - 1)),
        _ => open_formula(r, sig, ctx, depth - 1).or(open_formula(r, sig, ctx, depth - 1)),
    }
}

fn chain(seed: u64) -> Option<Chain> {
    let mut r = rng(seed);
    let mm = random_multimodel(&mut r, 5, 1);
    let sig = mm.signature().clone();
    let ctx = |r: &mut TestRng, stem: &str| {
        let mut sorts: Vec<usize> = (0..sig.sorts.len()).collect();
        if r.gen_bool(0.5) {
            sorts.push(r.gen_range(0..sig.sorts.len()));
        }
        Context::numbered(stem, &sorts)
    };
    let (x, y, z) = (ctx(&mut r, "x"), ctx(&mut r, "y"), ctx(&mut r, "z"));
    let s1 = random_substitution(&mut r, &sig, &y, &x)?;
    let s2 = random_substitution(&mut r, &sig, &z, &y)?;
    let w3 = open_formula(&mut r, &sig, &z, 2);
    let w2 = open_formula(&mut r, &sig, &y, 2);
    let pulled3 = w3.apply_substitution(&s2).ok()?;
    let d3 = Description::new(z, vec![w3]);
    let d2 = Description::new(y, vec![pulled3, w2]);
    let mut f1: Vec<Formula> = d2.formulas.iter().map(|f| f.apply_substitution(&s1)).collect::<Result<_, _>>().ok()?;
    f1.push(open_formula(&mut r, &sig, &x, 2));
    let d1 = Description::new(x, f1);
    Some(Chain { kb: KnowledgeBase::new(mm), s1, s2, d1, d2, d3 })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn induced_maps_compose(seed in any::<u64>()) {
        let Some(c) = chain(seed) else { return Ok(()) };
        let m1 = map(c.kb.induced_content_map("f1", &c.s1, &c.d1, &c.d2).unwrap());
        let m2 = map(c.kb.induced_content_map("f1", &c.s2, &c.d2, &c.d3).unwrap());
        let composite = c.s1.after(&c.s2).unwrap();
        let direct = map(c.kb.induced_content_map("f1", &composite, &c.d1, &c.d3).unwrap());
        prop_assert_eq!(m1.then(&m2).unwrap(), direct);

        let id = Substitution::identity(&c.d1.context);
        let m = map(c.kb.induced_content_map("f1", &id, &c.d1, &c.d1).unwrap());
        prop_assert!(m.pairs().iter().all(|&(a, b)| a == b));
    }

    #[test]
    fn stronger_sources_restrict_the_map(seed in any::<u64>(), extra_seed in any::<u64>()) {
        let Some(c) = chain(seed) else { return Ok(()) };
        let mut r = rng(extra_seed);
        let sig = c.kb.data().signature();
        let stronger = c.d1.with(random_formula(&mut r, sig, &c.d1.context, 2));
        let full = map(c.kb.induced_content_map("f1", &c.s1, &c.d1, &c.d2).unwrap());
        let part = map(c.kb.induced_content_map("f1", &c.s1, &stronger, &c.d2).unwrap());
        prop_assert!(part.source.is_subset(&full.source));
        prop_assert!(part.pairs().iter().all(|&(a, b)| full.apply(a) == Some(b)));
    }

    #[test]
    fn equivalent_descriptions_give_the_same_map(seed in any::<u64>()) {
        let Some(c) = chain(seed) else { return Ok(()) };
        let rewrite = |d: &Description| {
            let fs = d.formulas.iter().map(|f| f.clone().not().not().and(Formula::True)).collect();
            Description::new(d.context.clone(), fs)
        };
        let plain = c.kb.induced_content_map("f1", &c.s1, &c.d1, &c.d2).unwrap();
        let rewritten = c.kb.induced_content_map("f1", &c.s1, &rewrite(&c.d1), &rewrite(&c.d2)).unwrap();
        prop_assert_eq!(plain, rewritten);
    }
}

#[test]
fn chain_generator_is_not_vacuous() {
    let built = (0..200).filter(|&s| chain(s).is_some()).count();
    assert!(built >= 190, "only {built} of 200 seeds produced a chain");
}
