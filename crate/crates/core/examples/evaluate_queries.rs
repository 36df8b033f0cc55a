//! Evaluates formulas and descriptions in a single-relation model and prints the
//! resulting point sets.

use kbalg::algebra::Context;
use kbalg::config::Limits;
use kbalg::frontend::{parse_formula, parse_model, parse_query};
use kbalg::galois::content;
use kbalg::semantics::val;

fn main() -> kbalg::Result<()> {
    let mm = parse_model(include_str!("../fixtures/mp.kbm"))?;
    let m = mm.instance("f1")?;
    let sig = mm.signature();
    let limits = Limits::default();

    let xy = Context::new([("x", 0), ("y", 0)])?;
    for text in ["P(x)", "P(x) and not x == y", "exists y. (P(y) and not x == y)", "forall y. x == y"] {
        let f = parse_formula(text, sig, &xy)?;
        println!("{:<34} {}", text, val(m, &xy, &f, &limits)?.format_inline());
    }

    let d = parse_query("vars x:s, y:s;\nP(x)\nnot P(y)\n", sig)?;
    println!("content of {{P(x), not P(y)}}: {}", content(m, &d, &limits)?.format_inline());
    Ok(())
}
