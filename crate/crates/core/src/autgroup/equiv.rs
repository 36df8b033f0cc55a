use rayon::prelude::*;

use super::group::{automorphism_group, PermutationGroup};
use super::matching::perfect_matching;
use super::search::algebra_isomorphisms;
use crate::algebra::{MultiModel, SortedBijection};
use crate::error::{Error, Result};
use crate::parallel::with_jobs;
use crate::translate::Interpretation;

/// One matched pair `f ↦ α(f)` with its algebra isomorphism and optional translations.
#[derive(Debug, Clone)]
pub struct WitnessPair {
    pub left: String,
    pub right: String,
    pub delta: SortedBijection,
    /// `β_f`: relations of the left signature defined over the right one.
    pub beta: Option<Interpretation>,
    /// `β'_f`: relations of the right signature defined over the left one.
    pub beta_prime: Option<Interpretation>,
}

/// `(α, {δ_f}, {β_f, β'_f})`, pairs listed in left instance order.
#[derive(Debug, Clone, Default)]
pub struct EquivalenceWitness {
    pub pairs: Vec<WitnessPair>,
}

impl EquivalenceWitness {
    pub fn alpha(&self, left: &str) -> Option<&str> {
        self.pairs.iter().find(|p| p.left == left).map(|p| p.right.as_str())
    }

    /// Checks that `α` is a bijection of instance names and every `δ_f` an
    /// isomorphism between the two algebras. Returns the `δ_f` rebuilt over the
    /// multi-models' own algebras, in pair order.
    pub fn validate(&self, left: &MultiModel, right: &MultiModel) -> Result<Vec<SortedBijection>> {
        let names = |mm: &MultiModel| mm.instances().iter().map(|i| i.name.clone()).collect::<Vec<_>>();
        let (l, r) = (names(left), names(right));
        let mut lhs: Vec<&str> = self.pairs.iter().map(|p| p.left.as_str()).collect();
        let mut rhs: Vec<&str> = self.pairs.iter().map(|p| p.right.as_str()).collect();
        lhs.sort_unstable();
        rhs.sort_unstable();
        let mut l_sorted: Vec<&str> = l.iter().map(String::as_str).collect();
        let mut r_sorted: Vec<&str> = r.iter().map(String::as_str).collect();
        l_sorted.sort_unstable();
        r_sorted.sort_unstable();
        if lhs != l_sorted {
            return Err(Error::MalformedWitness(format!(
                "alpha must map each left instance exactly once; left instances are [{}]",
                l.join(", ")
            )));
        }
        if rhs != r_sorted {
            return Err(Error::MalformedWitness(format!(
                "alpha must hit each right instance exactly once; right instances are [{}]",
                r.join(", ")
            )));
        }
        let mut deltas = Vec::with_capacity(self.pairs.len());
        for p in &self.pairs {
            let d = &p.delta;
            if !d.source().same_structure(left.algebra()) || !d.target().same_structure(right.algebra()) {
                return Err(Error::MalformedWitness(format!(
                    "delta {}->{} is not a map between the two algebras",
                    p.left, p.right
                )));
            }
            let rebuilt = SortedBijection::new(
                left.algebra_arc().clone(),
                right.algebra_arc().clone(),
                d.maps().to_vec(),
            )
            .map_err(|e| Error::MalformedWitness(format!("delta {}->{}: {e}", p.left, p.right)))?;
            deltas.push(rebuilt);
            for (which, beta, src, tgt) in [
                ("beta", &p.beta, left, right),
                ("beta'", &p.beta_prime, right, left),
            ] {
                if let Some(b) = beta {
                    if **b.source() != *src.signature() || **b.target() != *tgt.signature() {
                        return Err(Error::MalformedWitness(format!(
                            "{which} for {} translates between the wrong signatures",
                            p.left
                        )));
                    }
                }
            }
        }
        Ok(deltas)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EquivOptions {
    /// Require one `δ` shared by all matched pairs (stricter than per-pair).
    pub uniform: bool,
    /// Worker threads for group computations; `None` uses the global pool.
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Equivalent(EquivalenceWitness),
    Inequivalent(String),
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent(_))
    }

    pub fn witness(&self) -> Option<&EquivalenceWitness> {
        match self {
            Verdict::Equivalent(w) => Some(w),
            Verdict::Inequivalent(_) => None,
        }
    }
}

/// Decides automorphic equivalence of two multi-models: a bijection of instances
/// under which each pair of models is automorphically equivalent.
pub fn decide_equivalence(left: &MultiModel, right: &MultiModel, opts: EquivOptions) -> Result<Verdict> {
    if let Some(m) = left.signature().operations_mismatch(right.signature()) {
        return Ok(Verdict::Inequivalent(format!("algebras are incomparable: {m}")));
    }
    let (nl, nr) = (left.instances().len(), right.instances().len());
    if nl != nr {
        return Ok(Verdict::Inequivalent(format!("instance counts differ: {nl} vs {nr}")));
    }
    let isos: Vec<SortedBijection> = algebra_isomorphisms(left.algebra_arc(), right.algebra_arc())?.collect();
    if isos.is_empty() {
        return Ok(Verdict::Inequivalent("the algebras are not isomorphic".into()));
    }
    let (g1, g2) = with_jobs(opts.jobs, || {
        let groups = |mm: &MultiModel| -> Vec<PermutationGroup> {
            mm.instances().par_iter().map(|i| automorphism_group(&i.model)).collect()
        };
        (groups(left), groups(right))
    });
    let orders = |gs: &[PermutationGroup]| gs.iter().map(|g| g.order().to_string()).collect::<Vec<_>>().join(", ");
    let failure = || {
        Verdict::Inequivalent(format!(
            "no perfect matching: group orders {} vs {}",
            orders(&g1),
            orders(&g2)
        ))
    };

    let assemble = |mate: Vec<usize>, deltas: &dyn Fn(usize, usize) -> SortedBijection| {
        let pairs = mate
            .iter()
            .enumerate()
            .map(|(i, &j)| WitnessPair {
                left: left.instances()[i].name.clone(),
                right: right.instances()[j].name.clone(),
                delta: deltas(i, j),
                beta: None,
                beta_prime: None,
            })
            .collect();
        Verdict::Equivalent(EquivalenceWitness { pairs })
    };

    if opts.uniform {
        for d in &isos {
            let adj: Vec<Vec<usize>> = g1
                .iter()
                .map(|a| (0..nr).filter(|&j| a.conjugates_onto(d, &g2[j])).collect())
                .collect();
            if let Some(mate) = perfect_matching(nr, &adj) {
                return Ok(assemble(mate, &|_, _| d.clone()));
            }
        }
        return Ok(failure());
    }

    // edge[i][j] = index into `isos` of the first conjugating δ.
    let edges: Vec<Vec<Option<usize>>> = with_jobs(opts.jobs, || {
        g1.par_iter()
            .map(|a| {
                g2.iter()
                    .map(|b| {
                        if a.order() != b.order() {
                            return None;
                        }
                        isos.iter().position(|d| a.conjugates_onto(d, b))
                    })
                    .collect()
            })
            .collect()
    });
    let adj: Vec<Vec<usize>> = edges
        .iter()
        .map(|row| (0..nr).filter(|&j| row[j].is_some()).collect())
        .collect();
    match perfect_matching(nr, &adj) {
        Some(mate) => Ok(assemble(mate, &|i, j| isos[edges[i][j].unwrap()].clone())),
        None => Ok(failure()),
    }
}

/// The witness of [`decide_equivalence`] with default options, if any.
pub fn multimodel_equivalent(left: &MultiModel, right: &MultiModel) -> Result<Option<EquivalenceWitness>> {
    Ok(match decide_equivalence(left, right, EquivOptions::default())? {
        Verdict::Equivalent(w) => Some(w),
        Verdict::Inequivalent(_) => None,
    })
}
