use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use super::search::{algebra_isomorphisms, model_isomorphisms};
use crate::algebra::{Elem, FiniteAlgebra, Model, SortedBijection};
use crate::error::{Error, Result};

/// A finite group of automorphisms of one algebra, members in canonical order.
#[derive(Debug, Clone)]
pub struct PermutationGroup {
    algebra: Arc<FiniteAlgebra>,
    members: Vec<SortedBijection>,
}

impl PermutationGroup {
    /// Checks the group axioms; a failure names the offending pair.
    pub fn new(algebra: Arc<FiniteAlgebra>, mut members: Vec<SortedBijection>) -> Result<Self> {
        members.sort();
        members.dedup();
        let group = PermutationGroup { algebra, members };
        group.verify()?;
        Ok(group)
    }

    pub(crate) fn trusted(algebra: Arc<FiniteAlgebra>, mut members: Vec<SortedBijection>) -> Self {
        members.sort();
        PermutationGroup { algebra, members }
    }

    pub fn verify(&self) -> Result<()> {
        let set: HashSet<&[Vec<Elem>]> = self.members.iter().map(|g| g.maps()).collect();
        let id = SortedBijection::identity(&self.algebra);
        if !set.contains(id.maps()) {
            return Err(Error::NotGroup("the identity is missing".into()));
        }
        for g in &self.members {
            if !set.contains(g.inverse().maps()) {
                return Err(Error::NotGroup(format!("inverse of [{}] is missing", g.display())));
            }
            for h in &self.members {
                let gh = h.then(g)?;
                if !set.contains(gh.maps()) {
                    return Err(Error::NotGroup(format!(
                        "[{}] after [{}] is missing",
                        g.display(),
                        h.display()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }

    pub fn members(&self) -> &[SortedBijection] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, g: &SortedBijection) -> bool {
        self.members.binary_search(g).is_ok()
    }

    /// True iff `δ · self · δ⁻¹` equals `other` as a set.
    pub fn conjugates_onto(&self, delta: &SortedBijection, other: &PermutationGroup) -> bool {
        self.order() == other.order() && self.members.iter().all(|g| other.contains(&delta.conjugate(g)))
    }
}

impl PartialEq for PermutationGroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}

impl Eq for PermutationGroup {}

/// One member per line, `s: a->b ...`.
impl fmt::Display for PermutationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.members {
            writeln!(f, "{}", g.display())?;
        }
        Ok(())
    }
}

/// All automorphisms of the algebra preserving every relation of the model.
pub fn automorphism_group(m: &Model) -> PermutationGroup {
    let members = model_isomorphisms(m, m)
        .expect("a model is comparable with itself")
        .collect();
    PermutationGroup::trusted(m.algebra_arc().clone(), members)
}

/// The first algebra isomorphism `δ` (canonical order) with `Aut(m2) = δ Aut(m1) δ⁻¹`.
pub fn automorphic_equivalent(m1: &Model, m2: &Model) -> Result<Option<SortedBijection>> {
    let a1 = automorphism_group(m1);
    let a2 = automorphism_group(m2);
    first_conjugator(&a1, &a2)
}

pub(crate) fn first_conjugator(a1: &PermutationGroup, a2: &PermutationGroup) -> Result<Option<SortedBijection>> {
    if a1.order() != a2.order() {
        return Ok(None);
    }
    Ok(algebra_isomorphisms(a1.algebra(), a2.algebra())?.find(|d| a1.conjugates_onto(d, a2)))
}
