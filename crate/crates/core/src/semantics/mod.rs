//! Point sets of `G^X` with Boolean operations, cylindrifications, diagonals,
//! formula evaluation and the transports `s_*`, `s^*`, `δ_*`, `δ^*`.

mod eval;
mod pointset;
mod transport;

pub use eval::{diagonal, exists_quant, forall_quant, semantically_equivalent, val, Evaluator};
pub(crate) use eval::cylindrify;
pub use pointset::PointSet;
pub use transport::{cylinder, project, transport_hom, transport_subst, Direction};

