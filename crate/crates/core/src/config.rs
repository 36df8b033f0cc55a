//! Resource caps shared by the evaluation, generation and CLI layers.

/// Default cap on the cardinality of a point space `G^X`.
pub const DEFAULT_MAX_POINTS: usize = 1 << 24;
/// Default cap on materialized Boolean-algebra elements.
pub const DEFAULT_MAX_ELEMENTS: usize = 1 << 16;
/// Default cap on refinement rounds and other fixpoint loops.
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;
/// Default term depth of the atomic seed used for definable-set generation.
pub const DEFAULT_SEED_DEPTH: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_points: usize,
    pub max_elements: usize,
    pub max_iterations: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_points: DEFAULT_MAX_POINTS,
            max_elements: DEFAULT_MAX_ELEMENTS,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}
