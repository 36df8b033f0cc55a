//! Automorphism groups, algebra and model isomorphisms, conjugacy, and the
//! automorphic-equivalence decision for models and multi-models.

mod equiv;
mod group;
mod matching;
mod search;

pub use equiv::{decide_equivalence, multimodel_equivalent, EquivOptions, EquivalenceWitness, Verdict, WitnessPair};
pub use group::{automorphic_equivalent, automorphism_group, PermutationGroup};
pub use matching::perfect_matching;
pub use search::{algebra_isomorphisms, model_isomorphisms, BijectionSearch};
