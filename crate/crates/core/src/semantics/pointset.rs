use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::algebra::{Assignment, Context, PointSpace};

/// A subset of a finite point space `G^X`, stored as a dense bit vector indexed in
/// the space's enumeration order.
///
/// Binary set operations panic when the operands live in different spaces.
#[derive(Clone)]
pub struct PointSet {
    space: Arc<PointSpace>,
    bits: FixedBitSet,
}

impl PointSet {
    pub fn empty(space: &Arc<PointSpace>) -> Self {
        PointSet {
            space: space.clone(),
            bits: FixedBitSet::with_capacity(space.len()),
        }
    }

    pub fn full(space: &Arc<PointSpace>) -> Self {
        let mut bits = FixedBitSet::with_capacity(space.len());
        bits.insert_range(..);
        PointSet {
            space: space.clone(),
            bits,
        }
    }

    pub fn from_indices(space: &Arc<PointSpace>, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = PointSet::empty(space);
        for i in indices {
            s.bits.insert(i);
        }
        s
    }

    pub fn from_predicate(space: &Arc<PointSpace>, mut pred: impl FnMut(usize) -> bool) -> Self {
        let mut s = PointSet::empty(space);
        for i in 0..space.len() {
            if pred(i) {
                s.bits.insert(i);
            }
        }
        s
    }

    pub fn space(&self) -> &Arc<PointSpace> {
        &self.space
    }

    pub fn context(&self) -> &Context {
        self.space.context()
    }

    pub fn same_space(&self, other: &PointSet) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    fn assert_same_space(&self, other: &PointSet) {
        assert!(
            self.same_space(other),
            "point sets live in different spaces: {} vs {}",
            self.space,
            other.space
        );
    }

    pub fn contains(&self, index: usize) -> bool {
        self.bits.contains(index)
    }

    pub fn contains_point(&self, point: &Assignment) -> bool {
        self.bits.contains(self.space.index(&point.0))
    }

    pub fn insert(&mut self, index: usize) {
        self.bits.insert(index);
    }

    pub fn remove(&mut self, index: usize) {
        self.bits.set(index, false);
    }

    /// Number of points in the set.
    pub fn count(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.count() == self.space.len()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn points(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.bits.ones().map(|i| self.space.assignment(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.bits.ones().next()
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        self.assert_same_space(other);
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        PointSet {
            space: self.space.clone(),
            bits,
        }
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        self.assert_same_space(other);
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        PointSet {
            space: self.space.clone(),
            bits,
        }
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        self.assert_same_space(other);
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        PointSet {
            space: self.space.clone(),
            bits,
        }
    }

    pub fn complement(&self) -> PointSet {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        PointSet {
            space: self.space.clone(),
            bits,
        }
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.assert_same_space(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &PointSet) -> bool {
        self.assert_same_space(other);
        self.bits.is_disjoint(&other.bits)
    }

    /// Smallest point index in the symmetric difference, if the sets differ.
    pub fn first_difference(&self, other: &PointSet) -> Option<usize> {
        self.assert_same_space(other);
        let mine = self.bits.difference(&other.bits).next();
        let theirs = other.bits.difference(&self.bits).next();
        match (mine, theirs) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Renders a point of this set's space as `x=e1 y=e2`.
    pub fn format_point(&self, index: usize) -> String {
        self.space.format_point(index)
    }

    /// Renders the set as `{x=e1, x=e2}` on one line.
    pub fn format_inline(&self) -> String {
        let pts: Vec<String> = self.indices().map(|i| self.space.format_point(i)).collect();
        format!("{{{}}}", pts.join(", "))
    }
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.bits == other.bits
    }
}

impl Eq for PointSet {}

impl std::hash::Hash for PointSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.bits.as_slice().hash(state);
    }
}

/// One point per line in enumeration order, e.g. `x=e1 y=e2`.
impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in self.indices() {
            writeln!(f, "{}", self.space.format_point(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointSet{}", self.format_inline())
    }
}

impl BitAnd for &PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: &PointSet) -> PointSet {
        self.intersection(rhs)
    }
}

impl BitOr for &PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: &PointSet) -> PointSet {
        self.union(rhs)
    }
}

impl Sub for &PointSet {
    type Output = PointSet;
    fn sub(self, rhs: &PointSet) -> PointSet {
        self.difference(rhs)
    }
}

impl Not for &PointSet {
    type Output = PointSet;
    fn not(self) -> PointSet {
        self.complement()
    }
}
