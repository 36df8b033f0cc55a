//! The algebra `R_f` of definable point sets at a context, its atoms, and orbit
//! partitions of automorphism groups.

mod generate;
mod orbits;
mod partition;

pub use generate::{default_aux, generate_definable_algebra, generate_with, DefinableAlgebra, GenerationConfig, Retraction};
pub use orbits::{group_orbits, orbit_partition};
pub use partition::Partition;
