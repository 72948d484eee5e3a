//! Riccati-pair certification and Hardy-type inequality verification on
//! model space forms of nonpositive curvature.

pub mod catalog;
pub mod error;
pub mod exprdsl;
pub mod geometry;
pub mod ode;
pub mod quadrature;
pub mod riccati;
pub mod specfun;
pub mod verifier;

pub use error::{Error, Result};
pub use exprdsl::{ParamBinding, ScalarExpr};
pub use geometry::{Comparison, ModelGeometry};
