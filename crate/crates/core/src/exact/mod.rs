//! Exact arithmetic: rationals, weighted polynomials in `x, y, z` and linear
//! algebra over the rationals.

pub mod linalg;
pub mod poly;
pub mod rat;
pub mod upoly;

pub use linalg::{signature, Basis, CoordinateSystem, LinalgError, Matrix};
pub use poly::{Grade, Monomial, PolyError, Var, WPoly};
pub use rat::Rat;
