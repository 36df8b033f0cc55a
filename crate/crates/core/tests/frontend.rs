mod common;

use common::*;
use kbalg::algebra::{Context, Term};
use kbalg::formula::{Description, Formula};
use kbalg::frontend::{
    parse_formula, parse_model, parse_model_named, parse_probes, parse_query, parse_term, parse_witness, print_model,
    print_probes, print_query, print_witness,
};
use kbalg::Error;
use proptest::prelude::*;

fn diagnostic(e: Error) -> kbalg::error::SourceDiagnostic {
    match e {
        Error::Syntax(d) => d,
        other => panic!("expected a located diagnostic, got {other}"),
    }
}

#[test]
fn single_relation_model() {
    let mm = parse_model("sorts: s\ncarrier s: e1 e2 e3\nrel P(s)\ninstance f1:\n  P: (e1)\n").unwrap();
    let sig = mm.signature();
    assert_eq!((sig.sorts.len(), sig.ops.len(), sig.rels.len()), (1, 0, 1));
    assert_eq!(mm.instances().len(), 1);
    assert!(mm.instance("f1").unwrap().relation(0).contains(&[0]));
    assert_eq!(mm.instance("f1").unwrap().relation(0).len(), 1);
}

#[test]
fn missing_table_row_is_reported_at_the_op() {
    let text = "sorts: s\ncarrier s: e1 e2\nop add(s, s) -> s:\n  e1 e1 = e1\n  e2 e1 = e2\n  e2 e2 = e1\nrel P(s)\ninstance f1:\n  P: (e1)\n";
    let d = diagnostic(parse_model_named(text, "m.kbm").unwrap_err());
    assert_eq!((d.line, d.file.as_str()), (3, "m.kbm"));
    assert!(d.message.contains("operation table not total"), "{}", d.message);
    assert!(d.message.contains("(e1, e2)"), "{}", d.message);
}

#[test]
fn z3_rows_are_reemitted_in_argument_order() {
    let text = std::fs::read_to_string(fixture_path("z3.kbm")).unwrap();
    let mm = parse_model(&text).unwrap();
    let printed = print_model(&mm);
    let rows: Vec<&str> = printed.lines().filter(|l| l.contains(" = ")).map(str::trim).collect();
    assert_eq!(rows.len(), 9);
    let mut sorted = rows.clone();
    sorted.sort();
    assert_eq!(rows, sorted);
    assert_eq!(rows[5], "z1 z2 = z0");
    assert_eq!(parse_model(&printed).unwrap(), mm);
    assert_eq!(print_model(&parse_model(&printed).unwrap()), printed);
}

#[test]
fn identity_violations_are_rejected() {
    let text = "sorts: s\ncarrier s: a b\nop m(s, s) -> s:\n  a a = a\n  a b = a\n  b a = b\n  b b = b\nidentity x:s, y:s | m(x, y) == m(y, x)\nrel P(s)\ninstance f:\n  P: (a)\n";
    let d = diagnostic(parse_model(text).unwrap_err());
    assert_eq!(d.line, 8);
}

#[test]
fn bad_tuple_element_is_located() {
    let text = std::fs::read_to_string(fixture_path("bad_model.kbm")).unwrap();
    let d = diagnostic(parse_model_named(&text, "bad_model.kbm").unwrap_err());
    let line = text.lines().nth(d.line - 1).unwrap();
    assert!(line[d.column - 1..].starts_with("e3"), "{line:?} at {}", d.column);
}

#[test]
fn atoms_and_quantifiers_parse() {
    let mm = fixture("mp.kbm");
    let sig = mm.signature();
    let x = Context::new([("x", 0)]).unwrap();
    assert_eq!(parse_formula("P(x)", sig, &x).unwrap(), Formula::Rel(0, vec![Term::var("x")]));
    let xy = Context::new([("x", 0), ("y", 0)]).unwrap();
    let f = parse_formula("exists y. (P(y) and x == y)", sig, &xy).unwrap();
    let expected = Formula::exists(
        "y",
        Formula::Rel(0, vec![Term::var("y")]).and(Formula::eq(Term::var("x"), Term::var("y"))),
    );
    assert_eq!(f, expected);
    assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), ["x"]);
    assert_eq!(f.bound_vars().into_iter().collect::<Vec<_>>(), ["y"]);
}

#[test]
fn arity_mismatch_is_an_error() {
    let mm = fixture("z3.kbm");
    let ctx = Context::new([("x", 0), ("y", 0)]).unwrap();
    let d = diagnostic(parse_formula("x == add(y)", mm.signature(), &ctx).unwrap_err());
    assert!(d.message.contains("arity mismatch"), "{}", d.message);
    assert_eq!(d.column, 6);
}

#[test]
fn precedence_not_and_or() {
    let mm = fixture("mp.kbm");
    let sig = mm.signature();
    let ctx = Context::new([("x", 0), ("y", 0)]).unwrap();
    let p = |v: &str| Formula::Rel(0, vec![Term::var(v)]);
    let f = parse_formula("not P(x) and P(y) or P(x)", sig, &ctx).unwrap();
    assert_eq!(f, p("x").not().and(p("y")).or(p("x")));
    let g = parse_formula("P(x) or P(y) and not P(x)", sig, &ctx).unwrap();
    assert_eq!(g, p("x").or(p("y").and(p("x").not())));
    let h = parse_formula("exists y. P(y) and P(x)", sig, &ctx).unwrap();
    assert_eq!(h, Formula::exists("y", p("y").and(p("x"))));
    let k = parse_formula("P(x) and exists y. P(y) or P(x)", sig, &ctx).unwrap();
    assert_eq!(k, p("x").and(Formula::exists("y", p("y").or(p("x")))));
}

#[test]
fn forall_is_normalized() {
    let mm = fixture("mp.kbm");
    let sig = mm.signature();
    let ctx = Context::new([("y", 0)]).unwrap();
    let a = parse_formula("forall y. P(y)", sig, &ctx).unwrap();
    let b = parse_formula("not exists y. not P(y)", sig, &ctx).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.display(sig).to_string(), "forall y. P(y)");
}

#[test]
fn quantifying_an_undeclared_variable_fails() {
    let mm = fixture("mp.kbm");
    let ctx = Context::new([("x", 0)]).unwrap();
    let d = diagnostic(parse_formula("exists z. P(x)", mm.signature(), &ctx).unwrap_err());
    assert_eq!(d.column, 8);
}

#[test]
fn cross_sort_equality_fails() {
    let mm = fixture("two_sorted.kbm");
    let ctx = Context::new([("a", 0), ("b", 1)]).unwrap();
    assert!(parse_formula("a == b", mm.signature(), &ctx).is_err());
    assert!(parse_formula("I(a, b)", mm.signature(), &ctx).is_ok());
}

#[test]
fn constant_terms() {
    let mm = fixture("v4.kbm");
    let sig = mm.signature();
    let t = parse_term("one", sig, &Context::empty()).unwrap();
    assert_eq!(t, Term::App(sig.op_id("one").unwrap(), vec![]));
}

#[test]
fn probe_blocks_round_trip() {
    let mm = fixture("mq.kbm");
    let text = std::fs::read_to_string(fixture_path("q_probes.kbq")).unwrap();
    let probes = parse_probes(&text, "q_probes.kbq", mm.signature()).unwrap();
    assert_eq!(probes.len(), 2);
    let again = parse_probes(&print_probes(&probes, mm.signature()), "x", mm.signature()).unwrap();
    assert_eq!(again.len(), probes.len());
    for (a, b) in again.iter().zip(&probes) {
        assert_eq!(a.context, b.context);
        assert_eq!(a.formulas, b.formulas);
    }
}

#[test]
fn witness_round_trip_and_errors() {
    let (l, r) = (fixture("mp2.kbm"), fixture("mq2.kbm"));
    let text = std::fs::read_to_string(fixture_path("pq2.kbw")).unwrap();
    let w = parse_witness(&text, "pq2.kbw", &l, &r).unwrap();
    assert_eq!(w.pairs.len(), 2);
    assert_eq!(w.alpha("f1"), Some("g2"));
    let printed = print_witness(&w, &l, &r);
    let again = parse_witness(&printed, "p", &l, &r).unwrap();
    assert_eq!(print_witness(&again, &l, &r), printed);

    let (l, r) = (fixture("mp.kbm"), fixture("mq.kbm"));
    let bad = std::fs::read_to_string(fixture_path("bad_delta.kbw")).unwrap();
    let d = diagnostic(parse_witness(&bad, "bad_delta.kbw", &l, &r).unwrap_err());
    assert!(d.message.contains("not a bijection"), "{}", d.message);
    let orphan = "delta f1 -> g1: sort s: e1 -> e1 e2 -> e2 e3 -> e3\n";
    let d = diagnostic(parse_witness(orphan, "w", &l, &r).unwrap_err());
    assert!(d.message.contains("no `alpha` line"), "{}", d.message);
    let late = "alpha: f1 -> g1\ndelta f1 -> g1: sort s: e1 -> e1 e2 -> e2 e3 -> e3\nalpha: f2 -> g2\n";
    let d = diagnostic(parse_witness(late, "w", &fixture("mp2.kbm"), &fixture("mq2.kbm")).unwrap_err());
    assert_eq!((d.line, d.column), (3, 1));
    let partial = "alpha: f1 -> g1\ndelta f1 -> g1: sort s: e1 -> e1 e2 -> e2\n";
    let d = diagnostic(parse_witness(partial, "w", &l, &r).unwrap_err());
    assert!(d.message.contains("e3"), "{}", d.message);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn model_print_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let mm = random_multimodel(&mut r, 6, 1 + (seed % 3) as usize);
        let text = print_model(&mm);
        let back = parse_model(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back, &mm);
        prop_assert_eq!(print_model(&back), text);
    }

    #[test]
    fn query_print_parse_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let m = random_model(&mut r, 5);
        let sig = m.signature();
        let ctx = random_context(&mut r, sig, 3);
        let formulas = (0..3).map(|_| random_formula(&mut r, sig, &ctx, 3)).collect();
        let d = Description::new(ctx, formulas);
        let text = print_query(&d, sig);
        let back = parse_query(&text, sig).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(&back.context, &d.context);
        prop_assert_eq!(&back.formulas, &d.formulas);
        prop_assert_eq!(print_query(&back, sig), text);
    }

    #[test]
    fn diagnostics_point_inside_the_input(seed in any::<u64>(), cut in 0usize..200) {
        let mut r = rng(seed);
        let mm = random_multimodel(&mut r, 5, 2);
        let text = print_model(&mm);
        let cut = cut.min(text.len());
        let mangled = format!("{}@{}", &text[..cut], &text[cut..]);
        if let Err(Error::Syntax(d)) = parse_model(&mangled) {
            let line = mangled.lines().nth(d.line - 1);
            prop_assert!(line.is_some(), "line {} out of range", d.line);
            prop_assert!(d.column >= 1 && d.column <= line.unwrap().len() + 1);
        }
    }
}
