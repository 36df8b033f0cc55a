//! Computes automorphism groups and decides automorphic equivalence of single
//! models.

use kbalg::autgroup::{algebra_isomorphisms, automorphic_equivalent, automorphism_group, model_isomorphisms};
use kbalg::frontend::parse_model;

fn main() -> kbalg::Result<()> {
    let load = |text: &str| parse_model(text).map(|mm| mm.instances()[0].model.clone());
    let mp = load(include_str!("../fixtures/mp.kbm"))?;
    let comp = load(include_str!("../fixtures/mp_complement.kbm"))?;
    let m0 = load(include_str!("../fixtures/m0.kbm"))?;
    let z3 = load(include_str!("../fixtures/z3.kbm"))?;

    for (name, m) in [("mp", &mp), ("m0", &m0), ("z3", &z3)] {
        let g = automorphism_group(m);
        println!("Aut({name}) has order {}", g.order());
        for h in g.members() {
            println!("  {}", h.display());
        }
    }
    println!("Z3 self-isomorphisms: {}", algebra_isomorphisms(z3.algebra_arc(), z3.algebra_arc())?.count());

    match automorphic_equivalent(&mp, &comp)? {
        Some(d) => println!("mp ~ mp_complement via {}", d.display()),
        None => println!("mp and mp_complement are not equivalent"),
    }
    println!("isomorphisms mp -> mp_complement: {}", model_isomorphisms(&mp, &comp)?.count());
    println!("mp ~ m0: {}", automorphic_equivalent(&mp, &m0)?.is_some());
    Ok(())
}
