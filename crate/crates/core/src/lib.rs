//! Finite-model algebraic logic: multi-sorted first-order queries evaluated as
//! point sets, the Galois correspondence between descriptions and contents,
//! definable-set algebras, automorphism groups, and informational equivalence of
//! knowledge bases with witness verification.

pub mod algebra;
pub mod autgroup;
pub mod cli;
pub mod config;
pub mod error;
pub mod formula;
pub mod frontend;
pub mod galois;
pub mod kbase;
mod parallel;
pub mod semantics;
pub mod translate;
pub mod valuealg;

pub use error::{Error, Result};
