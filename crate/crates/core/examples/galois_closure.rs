//! Closes a description under entailment: the formulas it entails, the logical
//! kernel of a point, and whether a set of points is the content of anything.

use std::sync::Arc;

use kbalg::algebra::{Assignment, Context, PointSpace};
use kbalg::config::Limits;
use kbalg::frontend::{parse_formula, parse_model, parse_query};
use kbalg::galois::{content, entails, is_algebraic_set, log_kernel_contains, AlgebraicMethod};
use kbalg::semantics::PointSet;

fn main() -> kbalg::Result<()> {
    let mm = parse_model(include_str!("../fixtures/mp.kbm"))?;
    let m = mm.instance("f1")?;
    let sig = mm.signature();
    let limits = Limits::default();

    let d = parse_query("vars x:s, y:s;\nP(x)\nP(y)\n", sig)?;
    println!("content: {}", content(m, &d, &limits)?.format_inline());
    for v in ["x == y", "not x == y", "exists x. not P(x)"] {
        let f = parse_formula(v, sig, &d.context)?;
        println!("entails {v:<20} {}", entails(m, &d, &f, &limits)?);
    }

    let x = Context::new([("x", 0)])?;
    let u = parse_formula("not P(x)", sig, &x)?;
    for e in 0..3 {
        let inside = log_kernel_contains(m, &x, &Assignment(vec![e]), &u, &limits)?;
        println!("not P(x) in the kernel of x={}: {inside}", mm.algebra().elem_name(0, e));
    }

    let space = Arc::new(PointSpace::new(mm.algebra_arc().clone(), x, 64)?);
    for set in [PointSet::from_indices(&space, [1, 2]), PointSet::from_indices(&space, [1])] {
        let alg = is_algebraic_set(m, &set, AlgebraicMethod::Generated, &limits)?;
        println!("{} algebraic: {alg}", set.format_inline());
    }
    Ok(())
}
