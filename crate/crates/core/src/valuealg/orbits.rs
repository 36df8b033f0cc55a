use std::sync::Arc;

use super::partition::Partition;
use crate::algebra::{Context, FiniteAlgebra, PointSpace, SortedBijection};
use crate::autgroup::PermutationGroup;
use crate::error::Result;

/// Orbits of `G^X` under the diagonal action `(g·μ)(x) = g(μ(x))`.
///
/// The members must form a group; otherwise the error names a missing product or
/// inverse.
pub fn orbit_partition(
    group: &[SortedBijection],
    alg: &Arc<FiniteAlgebra>,
    ctx: &Context,
    max_points: usize,
) -> Result<Partition> {
    let g = PermutationGroup::new(alg.clone(), group.to_vec())?;
    group_orbits(&g, ctx, max_points)
}

/// Orbits of an already verified group.
pub fn group_orbits(group: &PermutationGroup, ctx: &Context, max_points: usize) -> Result<Partition> {
    let space = Arc::new(PointSpace::new(group.algebra().clone(), ctx.clone(), max_points)?);
    let mut orbit = vec![u32::MAX; space.len()];
    let mut point = vec![0; ctx.len()];
    let mut next = 0;
    for p in 0..space.len() {
        if orbit[p] != u32::MAX {
            continue;
        }
        space.decode_into(p, &mut point);
        for g in group.members() {
            let image: Vec<usize> = point.iter().enumerate().map(|(k, &e)| g.apply(ctx.sort(k), e)).collect();
            orbit[space.index(&image)] = next;
        }
        next += 1;
    }
    Ok(Partition::from_keys(&space, orbit))
}
