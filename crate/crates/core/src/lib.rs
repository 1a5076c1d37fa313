//! Filtered colimits of finite k-linear categories, linear sites and their
//! sheaf conditions, computed exactly over prime fields and the rationals.

pub mod error;
pub mod exactalg;
pub mod colimit;
pub mod lincat;
pub mod sieves;
pub mod sitecat;
pub mod topology;

pub use error::{Bounds, Error, Result};

pub type F2 = exactalg::Fp<2>;
pub type F3 = exactalg::Fp<3>;
pub type F5 = exactalg::Fp<5>;
pub type F7 = exactalg::Fp<7>;
pub type Q = exactalg::Rational;
