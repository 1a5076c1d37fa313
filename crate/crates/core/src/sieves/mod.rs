//! Presheaves, sieves as subfunctors of representables, and the sheaf
//! condition along a sieve.

mod homs;
mod presheaf;
mod sieve;

pub use homs::{hom_from_sieve, is_sheaf, restriction_map, sheaf_condition, NatTransModule, SheafFailure, SheafVerdict};
pub use presheaf::{enumerate_presheaves, restrict_presheaf, Presheaf, PresheafViolation};
pub use sieve::{enumerate_sieves, sieve_lattice, Sieve};
