//! Decides whether two multi-model knowledge bases are informationally equivalent
//! and prints the witness or the reason they are not.

use kbalg::autgroup::{decide_equivalence, EquivOptions, Verdict};
use kbalg::frontend::{parse_model, print_witness};

fn main() -> kbalg::Result<()> {
    let left = parse_model(include_str!("../fixtures/mp2.kbm"))?;
    let right = parse_model(include_str!("../fixtures/mq2.kbm"))?;

    for uniform in [false, true] {
        println!("uniform = {uniform}");
        match decide_equivalence(&left, &right, EquivOptions { uniform, jobs: None })? {
            Verdict::Equivalent(w) => print!("{}", print_witness(&w, &left, &right)),
            Verdict::Inequivalent(why) => println!("not equivalent: {why}"),
        }
    }

    let m0 = parse_model(include_str!("../fixtures/m0.kbm"))?;
    let mp = parse_model(include_str!("../fixtures/mp.kbm"))?;
    if let Verdict::Inequivalent(why) = decide_equivalence(&mp, &m0, EquivOptions::default())? {
        println!("mp vs m0: {why}");
    }
    Ok(())
}
