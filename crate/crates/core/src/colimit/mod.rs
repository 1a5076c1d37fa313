//! Filtered colimits of pseudofunctors into finite k-linear categories.
//!
//! Objects of the colimit are pairs `(x, A)`; morphisms are homotopy classes
//! of premorphisms `(u, f, v)_C`. Homotopy is decided by search over the
//! index category, and independently every hom module is materialized as a
//! quotient of the direct sum over all cospans by the push relations.

mod index;
mod materialize;
mod premorphism;
mod pseudo;
mod pseudonat;
mod union;
mod universal;

pub use index::{ArrowId, FilteredIndex, IndexArrow, IndexCategory};
pub use materialize::{ColimCategory, HomQuotient, HomotopyClass};
pub use premorphism::{ColimObject, Premorphism};
pub use pseudo::PseudoFunctor;
pub use pseudonat::{validate_modification, validate_pseudonat, Modification, PseudoNatTrans};
pub use union::{check_equivalence, union_colimit_equivalence, union_pseudofunctor, EquivalenceReport, UnionColimit};
pub use universal::{enumerate_pseudonat, modification_space, nat_trans_space, verify_universal_property, UniversalReport};
