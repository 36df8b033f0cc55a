//! Generates the Boolean algebra of definable subsets over a context and compares
//! its atoms with the orbits of the automorphism group.

use kbalg::algebra::Context;
use kbalg::autgroup::automorphism_group;
use kbalg::config::Limits;
use kbalg::frontend::{parse_model, parse_query};
use kbalg::galois::coordinate_algebra;
use kbalg::valuealg::{default_aux, generate_definable_algebra, orbit_partition};

fn main() -> kbalg::Result<()> {
    let mm = parse_model(include_str!("../fixtures/cycle4.kbm"))?;
    let m = &mm.instances()[0].model;
    let xy = Context::new([("x", 0), ("y", 0)])?;

    let d = generate_definable_algebra(m, &xy, default_aux(m))?;
    println!("{} atoms, {} definable sets", d.atom_count(), d.size().unwrap_or(0));
    for atom in d.atoms().blocks() {
        println!("  {}", atom.format_inline());
    }

    let orbits = orbit_partition(automorphism_group(m).members(), m.algebra_arc(), &xy, 1 << 12)?;
    println!("atoms are the orbits: {}", &orbits == d.atoms());

    // the algebra of a reply: definable sets restricted to it
    let sig = mm.signature();
    let q = parse_query(&format!("vars x:{0}, y:{0};\nnot x == y\n", sig.sort_name(0)), sig)?;
    let coords = coordinate_algebra(m, &q, None, &Limits::default())?;
    println!("coordinate algebra of x != y: {} atoms", coords.atoms().len());
    Ok(())
}
