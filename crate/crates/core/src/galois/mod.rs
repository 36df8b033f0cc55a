//! The Galois correspondence between descriptions and contents: `T^f`, entailment,
//! logical kernels, algebraic sets, coordinate algebras and admissibility.

mod coordinate;

pub use coordinate::{coordinate_algebra, CoordinateAlgebra};

use crate::algebra::{Assignment, Context, Homomorphism, Model, Substitution};
use crate::autgroup::automorphism_group;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::formula::{Description, Formula};
use crate::semantics::{transport_hom, transport_subst, Direction, Evaluator, PointSet};
use crate::valuealg::{default_aux, generate_with, group_orbits, GenerationConfig};

/// `T^f = ⋂_{u ∈ T} Val_f(u)`; the full space when `T` is empty.
pub fn content(m: &Model, d: &Description, limits: &Limits) -> Result<PointSet> {
    let ev = Evaluator::new(m, &d.context, limits)?;
    let mut acc = PointSet::full(ev.space());
    for u in &d.formulas {
        acc = acc.intersection(&ev.eval(u)?);
    }
    Ok(acc)
}

/// `v ∈ T^{ff}`: every point satisfying all of `T` satisfies `v`.
pub fn entails(m: &Model, d: &Description, v: &Formula, limits: &Limits) -> Result<bool> {
    let ev = Evaluator::new(m, &d.context, limits)?;
    let mut acc = PointSet::full(ev.space());
    for u in &d.formulas {
        acc = acc.intersection(&ev.eval(u)?);
    }
    Ok(acc.is_subset(&ev.eval(v)?))
}

/// Membership of `u` in the logical kernel of the point `μ`, i.e. `μ ∈ Val_f(u)`.
pub fn log_kernel_contains(m: &Model, ctx: &Context, mu: &Assignment, u: &Formula, limits: &Limits) -> Result<bool> {
    let ev = Evaluator::new(m, ctx, limits)?;
    let space = ev.space();
    if mu.0.len() != ctx.len() || mu.0.iter().zip(space.radices()).any(|(&e, &r)| e >= r) {
        return Err(Error::ContextMismatch("point does not belong to the context".into()));
    }
    Ok(ev.eval(u)?.contains(space.index(&mu.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlgebraicMethod {
    /// Membership in the generated algebra of definable sets.
    Generated,
    /// Invariance under the automorphism group of the model.
    Invariant,
}

/// Whether `a` is the content of some description, decided either by generating the
/// definable sets (with the default auxiliary budget) or by testing invariance under
/// every automorphism of the model.
pub fn is_algebraic_set(m: &Model, a: &PointSet, method: AlgebraicMethod, limits: &Limits) -> Result<bool> {
    check_over(m, a)?;
    match method {
        AlgebraicMethod::Generated => {
            let cfg = GenerationConfig {
                limits: *limits,
                ..GenerationConfig::new(default_aux(m))
            };
            Ok(generate_with(m, a.context(), &cfg)?.contains(a))
        }
        AlgebraicMethod::Invariant => {
            let orbits = group_orbits(&automorphism_group(m), a.context(), limits.max_points)?;
            Ok(orbits.saturates(a))
        }
    }
}

fn check_over(m: &Model, a: &PointSet) -> Result<()> {
    if !a.space().algebra().same_structure(m.algebra()) {
        return Err(Error::ContextMismatch("set does not live over the model's algebra".into()));
    }
    Ok(())
}

/// First point of `a` that `s` does not carry into `b`, where `s: W(Y) -> W(X)`,
/// `a` is over `X` and `b` over `Y`.
pub fn admissibility_violation(s: &Substitution, a: &PointSet, b: &PointSet) -> Result<Option<usize>> {
    let pulled = transport_subst(s, b, Direction::Preimage)?;
    if !pulled.same_space(a) {
        return Err(Error::ContextMismatch(format!("{} vs {}", pulled.space(), a.space())));
    }
    Ok(a.difference(&pulled).first())
}

/// `s` is admissible for `A` and `B`: `νs ∈ B` for every `ν ∈ A`.
pub fn check_admissible(s: &Substitution, a: &PointSet, b: &PointSet) -> Result<bool> {
    Ok(admissibility_violation(s, a, b)?.is_none())
}

/// `(s, δ)` is admissible for `A` over `G1` and `B` over `G2`: `δνs ∈ B` for every
/// `ν ∈ A`. Since `δ` is a homomorphism, `δ(νs) = (δν)s`.
pub fn check_admissible_pair(s: &Substitution, delta: &Homomorphism, a: &PointSet, b: &PointSet) -> Result<bool> {
    let moved = transport_hom(delta, a, Direction::Image)?;
    let pulled = transport_subst(s, b, Direction::Preimage)?;
    if !pulled.same_space(&moved) {
        return Err(Error::ContextMismatch(format!("{} vs {}", pulled.space(), moved.space())));
    }
    Ok(moved.is_subset(&pulled))
}
