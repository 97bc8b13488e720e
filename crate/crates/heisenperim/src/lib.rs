//! Perimeter measures of surfaces in the first Heisenberg group equipped
//! with a Carnot–Carathéodory metric generated by a planar convex body.

pub mod error;
pub mod exec;
pub mod heisenberg;
pub mod perimeter;
pub mod planar;
pub mod quadrature;
pub mod reference;
pub mod surfaces;
pub mod variation;

pub use error::{Error, Result};
pub use exec::Execution;
