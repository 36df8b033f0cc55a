use crate::algebra::Model;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::formula::{Description, Formula};
use crate::semantics::{val, PointSet};
use crate::valuealg::{default_aux, generate_with, GenerationConfig};

use super::content;

/// The coordinate algebra of an algebraic set `A`: definable sets cut down to `A`,
/// with the Boolean operations relative to `A`. Two formulas give the same element
/// iff they agree on `A`.
#[derive(Debug, Clone)]
pub struct CoordinateAlgebra {
    set: PointSet,
    atoms: Vec<PointSet>,
}

impl CoordinateAlgebra {
    /// The algebraic set `A` (the unit).
    pub fn unit(&self) -> &PointSet {
        &self.set
    }

    pub fn zero(&self) -> PointSet {
        PointSet::empty(self.set.space())
    }

    /// Atoms of the definable algebra that lie inside `A`, in canonical order.
    pub fn atoms(&self) -> &[PointSet] {
        &self.atoms
    }

    /// `2^atoms`; a single element when `A` is empty.
    pub fn element_count(&self) -> Option<u128> {
        1u128.checked_shl(self.atoms.len() as u32)
    }

    /// The class of a set: `B ∩ A`.
    pub fn class_of(&self, b: &PointSet) -> PointSet {
        b.intersection(&self.set)
    }

    pub fn contains(&self, b: &PointSet) -> bool {
        b.is_subset(&self.set)
            && self
                .atoms
                .iter()
                .all(|a| a.is_disjoint(b) || a.is_subset(b))
    }

    pub fn meet(&self, a: &PointSet, b: &PointSet) -> PointSet {
        self.class_of(&a.intersection(b))
    }

    pub fn join(&self, a: &PointSet, b: &PointSet) -> PointSet {
        self.class_of(&a.union(b))
    }

    /// Complement relative to `A`.
    pub fn complement(&self, a: &PointSet) -> PointSet {
        self.set.difference(a)
    }

    /// The element named by a formula of the model.
    pub fn element_of(&self, m: &Model, u: &Formula, limits: &Limits) -> Result<PointSet> {
        Ok(self.class_of(&val(m, self.set.context(), u, limits)?))
    }

    /// Every element, ordered by atom mask (atom 0 lowest).
    pub fn elements(&self, max_elements: usize) -> Result<Vec<PointSet>> {
        let size = self.element_count().unwrap_or(u128::MAX);
        if size > max_elements as u128 {
            return Err(Error::SizeLimit {
                what: "coordinate algebra".into(),
                size,
                cap: max_elements as u128,
            });
        }
        Ok((0..size as usize)
            .map(|bits| {
                let mut acc = self.zero();
                for (k, a) in self.atoms.iter().enumerate() {
                    if bits >> k & 1 == 1 {
                        acc = acc.union(a);
                    }
                }
                acc
            })
            .collect())
    }
}

/// The coordinate algebra of `content(m, d)` with `aux` auxiliary variables per sort
/// (default: the total carrier size).
pub fn coordinate_algebra(m: &Model, d: &Description, aux: Option<usize>, limits: &Limits) -> Result<CoordinateAlgebra> {
    let set = content(m, d, limits)?;
    let cfg = GenerationConfig {
        limits: *limits,
        ..GenerationConfig::new(aux.unwrap_or_else(|| default_aux(m)))
    };
    let algebra = generate_with(m, &d.context, &cfg)?;
    let size = algebra.size().unwrap_or(u128::MAX);
    if size > limits.max_elements as u128 {
        return Err(Error::SizeLimit {
            what: "definable algebra".into(),
            size,
            cap: limits.max_elements as u128,
        });
    }
    let atoms = algebra
        .atoms()
        .blocks()
        .into_iter()
        .filter(|a| a.is_subset(&set))
        .collect();
    Ok(CoordinateAlgebra { set, atoms })
}
