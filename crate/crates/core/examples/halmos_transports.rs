//! Moves point sets along substitutions and automorphisms in both directions, and
//! shows the quantifier as an operator on point sets.

use std::sync::Arc;

use kbalg::algebra::{Context, Homomorphism, PointSpace, Substitution, Term};
use kbalg::frontend::parse_model;
use kbalg::semantics::{exists_quant, forall_quant, transport_hom, transport_subst, Direction, PointSet};

fn main() -> kbalg::Result<()> {
    let mm = parse_model(include_str!("../fixtures/m0.kbm"))?;
    let alg = mm.algebra_arc();
    let x = Context::new([("x", 0)])?;
    let yz = Context::new([("y", 0), ("z", 0)])?;
    let sx = Arc::new(PointSpace::new(alg.clone(), x.clone(), 1 << 10)?);
    let syz = Arc::new(PointSpace::new(alg.clone(), yz.clone(), 1 << 10)?);

    // s(x) = y
    let s = Substitution::new(mm.signature(), x, yz, vec![Term::var("y")])?;
    let a = PointSet::from_indices(&sx, [0]);
    println!("A            = {}", a.format_inline());
    println!("preimage(A)  = {}", transport_subst(&s, &a, Direction::Preimage)?.format_inline());

    let b = PointSet::from_indices(&syz, [syz.index(&[0, 1]), syz.index(&[2, 2])]);
    println!("B            = {}", b.format_inline());
    println!("image(B)     = {}", transport_subst(&s, &b, Direction::Image)?.format_inline());
    println!("exists z. B  = {}", exists_quant(&b, "z")?.format_inline());
    println!("forall z. B  = {}", forall_quant(&b, "z")?.format_inline());

    let cycle = Homomorphism::new(alg.clone(), alg.clone(), vec![vec![1, 2, 0]])?;
    println!("cycle image of A    = {}", transport_hom(&cycle, &a, Direction::Image)?.format_inline());
    println!("cycle preimage of A = {}", transport_hom(&cycle, &a, Direction::Preimage)?.format_inline());
    Ok(())
}
