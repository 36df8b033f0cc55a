//! A knowledge base: a multi-model with query answering, the maps between replies
//! induced by admissible substitutions, and the equivalence entry points.

use std::fmt;

use crate::algebra::{MultiModel, Puller, Substitution};
use crate::autgroup::{decide_equivalence, EquivOptions, EquivalenceWitness, Verdict};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::formula::Description;
use crate::galois::{admissibility_violation, content};
use crate::semantics::PointSet;
use crate::translate::{verify_witness, Probes, Report};

#[derive(Debug, Clone, Default)]
pub struct KbConfig {
    pub limits: Limits,
    /// Auxiliary variables per sort for definable-set generation; `None` means the
    /// total carrier size.
    pub aux: Option<usize>,
    /// Probe battery for witness checks; `None` means the default battery.
    pub probes: Option<Probes>,
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    data: MultiModel,
    config: KbConfig,
}

/// The map `ν ↦ νs` from one reply to another, listed by source point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContentMap {
    pub source: PointSet,
    pub target: PointSet,
    pairs: Vec<(usize, usize)>,
}

impl ContentMap {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn apply(&self, point: usize) -> Option<usize> {
        self.pairs
            .binary_search_by_key(&point, |&(a, _)| a)
            .ok()
            .map(|k| self.pairs[k].1)
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &ContentMap) -> Result<ContentMap> {
        if self.target != next.source {
            return Err(Error::ContextMismatch("content maps do not compose".into()));
        }
        let pairs = self
            .pairs
            .iter()
            .map(|&(a, b)| (a, next.apply(b).expect("maps are total on their source")))
            .collect();
        Ok(ContentMap {
            source: self.source.clone(),
            target: next.target.clone(),
            pairs,
        })
    }
}

/// One line per source point: `x=e1 y=e1 -> z=e1`.
impl fmt::Display for ContentMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(a, b) in &self.pairs {
            writeln!(f, "{} -> {}", self.source.format_point(a), self.target.format_point(b))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InducedMap {
    Map(ContentMap),
    /// `s` is not admissible; the named point of the source reply leaves the target.
    Rejected { point: String },
}

impl KnowledgeBase {
    pub fn new(data: MultiModel) -> Self {
        KnowledgeBase {
            data,
            config: KbConfig::default(),
        }
    }

    pub fn with_config(data: MultiModel, config: KbConfig) -> Result<Self> {
        let l = &config.limits;
        if l.max_points == 0 || l.max_elements == 0 || l.max_iterations == 0 {
            return Err(Error::Contract("caps must be positive".into()));
        }
        Ok(KnowledgeBase { data, config })
    }

    pub fn data(&self) -> &MultiModel {
        &self.data
    }

    pub fn config(&self) -> &KbConfig {
        &self.config
    }

    /// The reply to a query: the content of `d` in the named instance.
    pub fn query(&self, instance: &str, d: &Description) -> Result<PointSet> {
        content(self.data.instance(instance)?, d, &self.config.limits)
    }

    /// For `s: W(Y) -> W(X)`, `d1` over `X` and `d2` over `Y`: the map from the reply
    /// to `d1` into the reply to `d2`, if `s` is admissible for them.
    pub fn induced_content_map(
        &self,
        instance: &str,
        s: &Substitution,
        d1: &Description,
        d2: &Description,
    ) -> Result<InducedMap> {
        let a = self.query(instance, d1)?;
        let b = self.query(instance, d2)?;
        if let Some(bad) = admissibility_violation(s, &a, &b)? {
            return Ok(InducedMap::Rejected {
                point: a.format_point(bad),
            });
        }
        let alg = a.space().algebra();
        let puller = Puller::new(s);
        let pairs = a
            .indices()
            .map(|i| (i, b.space().index(&puller.pull(alg, &a.space().decode(i)))))
            .collect();
        Ok(InducedMap::Map(ContentMap {
            source: a,
            target: b,
            pairs,
        }))
    }

    /// Decides automorphic equivalence with another knowledge base.
    pub fn equivalence(&self, other: &KnowledgeBase, uniform: bool) -> Result<Verdict> {
        decide_equivalence(
            &self.data,
            &other.data,
            EquivOptions {
                uniform,
                jobs: self.config.jobs,
            },
        )
    }

    /// Verifies a witness against another knowledge base with this base's probes.
    pub fn verify(&self, other: &KnowledgeBase, w: &EquivalenceWitness) -> Result<Report> {
        let probes = match &self.config.probes {
            Some(p) => p.clone(),
            None => Probes::defaults(self.data.signature(), other.data.signature()),
        };
        verify_witness(&self.data, &other.data, w, &probes, &self.config.limits, self.config.jobs)
    }
}
