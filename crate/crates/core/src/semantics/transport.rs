use std::sync::Arc;

use super::pointset::PointSet;
use crate::algebra::{odometer_step, Context, Homomorphism, Puller, Substitution, Term};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `s_*`, `δ_*`: pull membership back along the point map.
    Preimage,
    /// `s^*`, `δ^*`: push a set forward along the point map.
    Image,
}

/// Transport along `s: W(X) -> W(Y)`.
///
/// Preimage takes a set over `X` to `s_*A = {ν ∈ G^Y : νs ∈ A}`; image takes a set
/// `B` over `Y` to `s^*B = {νs : ν ∈ B}` over `X`.
pub fn transport_subst(s: &Substitution, a: &PointSet, mode: Direction) -> Result<PointSet> {
    let (expected, other) = match mode {
        Direction::Preimage => (s.domain(), s.codomain()),
        Direction::Image => (s.codomain(), s.domain()),
    };
    if a.context() != expected {
        return Err(Error::ContextMismatch(format!(
            "set is over [{}], substitution expects [{}]",
            a.context().display(a.space().algebra().signature()),
            expected.display(a.space().algebra().signature())
        )));
    }
    let target = Arc::new(a.space().derive(other.clone())?);
    let alg = a.space().algebra();
    let puller = Puller::new(s);
    Ok(match mode {
        Direction::Preimage => {
            let mut out = PointSet::empty(&target);
            let mut nu = vec![0; target.context().len()];
            let mut mu = vec![0; s.domain().len()];
            for i in 0..target.len() {
                puller.pull_into(alg, &nu, &mut mu);
                if a.contains(a.space().index(&mu)) {
                    out.insert(i);
                }
                odometer_step(target.radices(), &mut nu);
            }
            out
        }
        Direction::Image => {
            let mut out = PointSet::empty(&target);
            let mut nu = vec![0; a.context().len()];
            let mut mu = vec![0; s.domain().len()];
            for i in a.indices() {
                a.space().decode_into(i, &mut nu);
                puller.pull_into(alg, &nu, &mut mu);
                out.insert(target.index(&mu));
            }
            out
        }
    })
}

/// Transport along an algebra homomorphism `δ: G1 -> G2` at a fixed context.
///
/// Preimage takes `A` over `G2` to `δ_*A = {ν : δν ∈ A}` over `G1`; image takes `A`
/// over `G1` to `δ^*A = {δν : ν ∈ A}` over `G2`.
pub fn transport_hom(delta: &Homomorphism, a: &PointSet, mode: Direction) -> Result<PointSet> {
    let (expected, other) = match mode {
        Direction::Preimage => (delta.target(), delta.source()),
        Direction::Image => (delta.source(), delta.target()),
    };
    let space_alg = a.space().algebra_arc();
    if !(Arc::ptr_eq(space_alg, expected) || space_alg.same_structure(expected)) {
        return Err(Error::ContextMismatch(
            "set does not live over the homomorphism's expected algebra".into(),
        ));
    }
    let target = Arc::new(a.space().with_algebra(other.clone())?);
    let ctx = a.context();
    let map = |point: &mut [usize]| {
        for (k, e) in point.iter_mut().enumerate() {
            *e = delta.apply(ctx.sort(k), *e);
        }
    };
    let mut point = vec![0; ctx.len()];
    Ok(match mode {
        Direction::Preimage => {
            let mut out = PointSet::empty(&target);
            for i in 0..target.len() {
                target.decode_into(i, &mut point);
                map(&mut point);
                if a.contains(a.space().index(&point)) {
                    out.insert(i);
                }
            }
            out
        }
        Direction::Image => {
            let mut out = PointSet::empty(&target);
            for i in a.indices() {
                a.space().decode_into(i, &mut point);
                map(&mut point);
                out.insert(target.index(&point));
            }
            out
        }
    })
}

/// Restricts a set over `X ∪ Z` to the subcontext `X` by projection, i.e. the image
/// along the inclusion `W(X) -> W(X ∪ Z)`; equals `∃Z` read over `X`.
pub fn project(a: &PointSet, sub: &Context) -> Result<PointSet> {
    if !sub.is_subcontext_of(a.context()) {
        return Err(Error::ContextMismatch("projection target is not a subcontext".into()));
    }
    let images = sub.iter().map(|(n, _)| Term::var(n)).collect();
    let incl = Substitution::new(
        a.space().algebra().signature(),
        sub.clone(),
        a.context().clone(),
        images,
    )?;
    transport_subst(&incl, a, Direction::Image)
}

/// Extends a set over `X` to a superset context, unconstrained in the new variables.
pub fn cylinder(a: &PointSet, sup: &Context) -> Result<PointSet> {
    if !a.context().is_subcontext_of(sup) {
        return Err(Error::ContextMismatch("cylinder target is not a supercontext".into()));
    }
    let images = a.context().iter().map(|(n, _)| Term::var(n)).collect();
    let incl = Substitution::new(
        a.space().algebra().signature(),
        a.context().clone(),
        sup.clone(),
        images,
    )?;
    transport_subst(&incl, a, Direction::Preimage)
}
