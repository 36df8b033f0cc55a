//! Parses a model, a query and a formula, then prints them back in canonical form.

use kbalg::algebra::Context;
use kbalg::frontend::{parse_formula, parse_model, parse_query, print_model, print_query};

const MODEL: &str = include_str!("../fixtures/z3.kbm");

fn main() -> kbalg::Result<()> {
    let mm = parse_model(MODEL)?;
    print!("{}", print_model(&mm));

    let sig = mm.signature();
    let q = parse_query("vars x:s, y:s;\nadd(x, y) == x\nnot x == y\n", sig)?;
    println!("---");
    print!("{}", print_query(&q, sig));

    let ctx = Context::new([("x", 0), ("y", 0)])?;
    let f = parse_formula("not exists y. not add(x, y) == add(y, x)", sig, &ctx)?;
    println!("---\n{}", f.display(sig));

    // a located error
    if let Err(e) = parse_formula("add(x) == x", sig, &ctx) {
        println!("---\n{e}");
    }
    Ok(())
}
