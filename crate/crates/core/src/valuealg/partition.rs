use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::Arc;

use crate::algebra::PointSpace;
use crate::semantics::PointSet;

/// A partition of a point space into nonempty blocks, numbered by first point.
#[derive(Clone)]
pub struct Partition {
    space: Arc<PointSpace>,
    labels: Vec<u32>,
    count: usize,
}

impl Partition {
    /// Canonicalizes arbitrary per-point keys: points with equal keys share a block
    /// and blocks are numbered in order of their smallest point.
    pub fn from_keys<K: Hash + Eq>(space: &Arc<PointSpace>, keys: impl IntoIterator<Item = K>) -> Self {
        let mut ids: HashMap<K, u32> = HashMap::new();
        let labels: Vec<u32> = keys
            .into_iter()
            .map(|k| {
                let next = ids.len() as u32;
                *ids.entry(k).or_insert(next)
            })
            .collect();
        assert_eq!(labels.len(), space.len(), "one key per point");
        Partition {
            space: space.clone(),
            labels,
            count: ids.len(),
        }
    }

    /// The partition whose blocks are the given sets; they must be disjoint and cover.
    pub fn from_blocks(space: &Arc<PointSpace>, blocks: &[PointSet]) -> Option<Self> {
        let mut keys = vec![usize::MAX; space.len()];
        for (b, set) in blocks.iter().enumerate() {
            if set.is_empty() {
                return None;
            }
            for i in set.indices() {
                if keys[i] != usize::MAX {
                    return None;
                }
                keys[i] = b;
            }
        }
        if keys.contains(&usize::MAX) {
            return None;
        }
        Some(Partition::from_keys(space, keys))
    }

    pub fn space(&self) -> &Arc<PointSpace> {
        &self.space
    }

    /// Number of blocks.
    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn block_of(&self, point: usize) -> usize {
        self.labels[point] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn blocks(&self) -> Vec<PointSet> {
        let mut out: Vec<PointSet> = (0..self.count).map(|_| PointSet::empty(&self.space)).collect();
        for (i, &l) in self.labels.iter().enumerate() {
            out[l as usize].insert(i);
        }
        out
    }

    pub fn block(&self, b: usize) -> PointSet {
        PointSet::from_predicate(&self.space, |i| self.labels[i] as usize == b)
    }

    /// True iff every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        let mut image = vec![u32::MAX; self.count];
        for (&mine, &theirs) in self.labels.iter().zip(&coarser.labels) {
            let slot = &mut image[mine as usize];
            if *slot == u32::MAX {
                *slot = theirs;
            } else if *slot != theirs {
                return false;
            }
        }
        true
    }

    /// True iff `set` is a union of blocks.
    pub fn saturates(&self, set: &PointSet) -> bool {
        let mut state = vec![0u8; self.count];
        for (i, &l) in self.labels.iter().enumerate() {
            let bit = if set.contains(i) { 1 } else { 2 };
            state[l as usize] |= bit;
            if state[l as usize] == 3 {
                return false;
            }
        }
        true
    }
}

impl PartialEq for Partition {
    fn eq(&self, other: &Self) -> bool {
        *self.space == *other.space && self.labels == other.labels
    }
}

impl Eq for Partition {}

/// One block per line as `{x=e1 y=e2, x=e1 y=e3}`, blocks ordered by first point.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.blocks() {
            writeln!(f, "{}", b.format_inline())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Partition[")?;
        for (k, b) in self.blocks().iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", b.format_inline())?;
        }
        write!(f, "]")
    }
}
