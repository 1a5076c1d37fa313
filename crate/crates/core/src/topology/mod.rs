//! Cover systems, Grothendieck topologies, canonical and induced
//! topologies, LC morphisms and tensor products of sites.

mod canonical;
mod cover;
mod lc;
mod tensor;

pub use canonical::{
    canonical_topology, check_maximality, is_subcanonical, subcanonical_failure, CanonicalTopology, Exclusion,
    MaximalityWitness,
};
pub use cover::{check_axioms, generate_topology, AxiomReport, AxiomViolation, CoverSystem, Topology};
pub use lc::{check_lc, image_sieve, induced_topology, Clause, LCReport};
pub use tensor::{
    check_tensor_lc, is_bimodule_sheaf, left_slice_functor, right_slice_functor, tensor_cover_system, tensor_site,
    BimoduleVerdict, Site, Slice,
};
