//! Finite multi-sorted algebras, the free algebra `W(X)` over a context, points of
//! `Hom(W(X), G)` and substitutions `s: W(X) -> W(Y)`.

mod morphism;
mod points;
mod signature;
mod structure;
mod syntax;

pub use morphism::{Homomorphism, SortedBijection};
pub use points::{enumerate_points, pull_point, PointSpace};
pub(crate) use points::Puller;
pub use signature::{Identity, OpDecl, OpId, RelDecl, RelId, Signature, SortId};
pub(crate) use structure::{all_tuples, odometer_step, CompiledTerm};
pub use structure::{eval_term, Elem, FiniteAlgebra, Instance, Model, MultiModel, Relation};
pub use syntax::{Assignment, Context, Substitution, Term};

