//! Finitely presented k-linear categories, functors and natural
//! transformations.

pub mod builders;
mod category;
mod construct;
mod enumerate;
mod functor;
mod natural;
mod validate;

pub use category::{LinCategory, Morphism, ObjId};
pub use construct::{full_subcategory, full_subcategory_by_name, tensor_category, tensor_functor, tensor_object};
pub use enumerate::{enumerate_functors, functor_search_size};
pub use functor::LinFunctor;
pub use natural::LinNatTrans;
pub use validate::{
    validate_category, validate_functor, validate_nat_trans, CategoryViolation, FunctorViolation, NatTransViolation,
};
