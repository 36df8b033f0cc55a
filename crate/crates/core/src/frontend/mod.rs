//! Text formats: model files (`.kbm`), formulas, query and probe files (`.kbq`) and
//! witness files (`.kbw`), with located diagnostics.

mod formula;
mod lexer;
mod model;
mod query;
mod witness;

pub use formula::{is_keyword, parse_formula, parse_formula_in, parse_term};
pub use model::{parse_model, parse_model_named, print_model};
pub use query::{parse_context, parse_probes, parse_query, parse_query_named, print_probes, print_query};
pub use witness::{parse_witness, print_witness};
