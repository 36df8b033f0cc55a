use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use super::structure::{all_tuples, Elem, FiniteAlgebra};
use super::SortId;
use crate::error::{Error, Result};

/// A sort-indexed map `G1 -> G2` preserving every operation table.
#[derive(Debug, Clone)]
pub struct Homomorphism {
    source: Arc<FiniteAlgebra>,
    target: Arc<FiniteAlgebra>,
    maps: Vec<Vec<Elem>>,
}

impl Homomorphism {
    /// Checks shape and operation preservation; a violation is reported with the
    /// offending table row.
    pub fn new(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, maps: Vec<Vec<Elem>>) -> Result<Self> {
        if let Some(m) = source.signature().operations_mismatch(target.signature()) {
            return Err(Error::SignatureMismatch(m));
        }
        if maps.len() != source.sort_count() {
            return Err(Error::Contract(format!(
                "map has {} components for {} sorts",
                maps.len(),
                source.sort_count()
            )));
        }
        for (s, m) in maps.iter().enumerate() {
            if m.len() != source.carrier_size(s) || m.iter().any(|&e| e >= target.carrier_size(s)) {
                return Err(Error::Contract(format!(
                    "component for sort `{}` does not map carrier to carrier",
                    source.signature().sort_name(s)
                )));
            }
        }
        let h = Homomorphism { source, target, maps };
        if let Some(msg) = h.violated_row() {
            return Err(Error::NotHomomorphism(msg));
        }
        Ok(h)
    }

    /// Unchecked construction for search code that has already verified preservation.
    pub(crate) fn trusted(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, maps: Vec<Vec<Elem>>) -> Self {
        Homomorphism { source, target, maps }
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>) -> Self {
        Homomorphism {
            source: alg.clone(),
            target: alg.clone(),
            maps: (0..alg.sort_count())
                .map(|s| (0..alg.carrier_size(s)).collect())
                .collect(),
        }
    }

    fn violated_row(&self) -> Option<String> {
        let src = &self.source;
        let sig = src.signature();
        for (op, decl) in sig.ops.iter().enumerate() {
            for args in all_tuples(&src.op_radices(op)) {
                let value = src.apply(op, &args);
                let mapped: Vec<Elem> = args
                    .iter()
                    .zip(&decl.args)
                    .map(|(&e, &s)| self.maps[s][e])
                    .collect();
                let image_value = self.target.apply(op, &mapped);
                let expected = self.maps[decl.result][value];
                if image_value != expected {
                    let names: Vec<&str> = args
                        .iter()
                        .zip(&decl.args)
                        .map(|(&e, &s)| src.elem_name(s, e))
                        .collect();
                    return Some(format!(
                        "row {}({}) = {} maps to {} but the target table gives {}",
                        decl.name,
                        names.join(", "),
                        src.elem_name(decl.result, value),
                        self.target.elem_name(decl.result, expected),
                        self.target.elem_name(decl.result, image_value)
                    ));
                }
            }
        }
        None
    }

    pub fn source(&self) -> &Arc<FiniteAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteAlgebra> {
        &self.target
    }

    pub fn maps(&self) -> &[Vec<Elem>] {
        &self.maps
    }

    pub fn apply(&self, sort: SortId, e: Elem) -> Elem {
        self.maps[sort][e]
    }

    pub fn is_bijective(&self) -> bool {
        self.maps.iter().enumerate().all(|(s, m)| {
            if m.len() != self.target.carrier_size(s) {
                return false;
            }
            let mut seen = vec![false; m.len()];
            m.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
        })
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Homomorphism) -> Result<Homomorphism> {
        if !(Arc::ptr_eq(&self.target, &next.source) || self.target.same_structure(&next.source)) {
            return Err(Error::Contract("homomorphisms do not compose".into()));
        }
        Ok(Homomorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            maps: self
                .maps
                .iter()
                .zip(&next.maps)
                .map(|(a, b)| a.iter().map(|&e| b[e]).collect())
                .collect(),
        })
    }

    pub fn display(&self) -> impl fmt::Display + '_ {
        MapDisplay(self)
    }
}

struct MapDisplay<'a>(&'a Homomorphism);

impl fmt::Display for MapDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = self.0;
        let sig = h.source.signature();
        for (s, m) in h.maps.iter().enumerate() {
            if s > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{}:", sig.sort_name(s))?;
            for (e, &img) in m.iter().enumerate() {
                write!(
                    f,
                    " {}->{}",
                    h.source.elem_name(s, e),
                    h.target.elem_name(s, img)
                )?;
            }
        }
        Ok(())
    }
}

/// A bijective homomorphism, i.e. an isomorphism of algebras. Automorphisms are the
/// case `source == target`. Equality and order compare the element maps only.
#[derive(Debug, Clone)]
pub struct SortedBijection(Homomorphism);

impl SortedBijection {
    pub fn new(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, maps: Vec<Vec<Elem>>) -> Result<Self> {
        SortedBijection::from_homomorphism(Homomorphism::new(source, target, maps)?)
    }

    pub fn from_homomorphism(h: Homomorphism) -> Result<Self> {
        if !h.is_bijective() {
            return Err(Error::NotBijective(format!("{}", h.display())));
        }
        Ok(SortedBijection(h))
    }

    pub(crate) fn trusted(source: Arc<FiniteAlgebra>, target: Arc<FiniteAlgebra>, maps: Vec<Vec<Elem>>) -> Self {
        SortedBijection(Homomorphism::trusted(source, target, maps))
    }

    pub fn identity(alg: &Arc<FiniteAlgebra>) -> Self {
        SortedBijection(Homomorphism::identity(alg))
    }

    pub fn as_homomorphism(&self) -> &Homomorphism {
        &self.0
    }

    pub fn inverse(&self) -> SortedBijection {
        let maps = self
            .0
            .maps
            .iter()
            .map(|m| {
                let mut inv = vec![0; m.len()];
                for (e, &img) in m.iter().enumerate() {
                    inv[img] = e;
                }
                inv
            })
            .collect();
        SortedBijection::trusted(self.0.target.clone(), self.0.source.clone(), maps)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &SortedBijection) -> Result<SortedBijection> {
        Ok(SortedBijection(self.0.then(&next.0)?))
    }

    /// `self ∘ g ∘ self⁻¹`, an automorphism of the target when `g` is one of the source.
    pub fn conjugate(&self, g: &SortedBijection) -> SortedBijection {
        let maps = self
            .0
            .maps
            .iter()
            .zip(&g.0.maps)
            .map(|(d, gm)| {
                let mut out = vec![0; d.len()];
                for (e, &de) in d.iter().enumerate() {
                    out[de] = d[gm[e]];
                }
                out
            })
            .collect();
        SortedBijection::trusted(self.0.target.clone(), self.0.target.clone(), maps)
    }

    pub fn is_identity(&self) -> bool {
        self.0
            .maps
            .iter()
            .all(|m| m.iter().enumerate().all(|(e, &i)| e == i))
    }
}

impl std::ops::Deref for SortedBijection {
    type Target = Homomorphism;

    fn deref(&self) -> &Homomorphism {
        &self.0
    }
}

impl PartialEq for SortedBijection {
    fn eq(&self, other: &Self) -> bool {
        self.0.maps == other.0.maps
    }
}

impl Eq for SortedBijection {}

impl PartialOrd for SortedBijection {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SortedBijection {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.maps.cmp(&other.0.maps)
    }
}

impl std::hash::Hash for SortedBijection {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.maps.hash(state);
    }
}
