//! Signature interpretations `β`, the induced translation of formulas, witness
//! verification, and a bounded search for interpretations.

mod interp;
mod synth;
mod verify;

pub use interp::{translate_formula, Definition, Interpretation, Translation};
pub use synth::{synthesize_interpretation, SynthesisBounds};
pub use verify::{default_probes, verify_witness, CheckResult, Probes, Report};
