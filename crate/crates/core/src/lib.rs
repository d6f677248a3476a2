//! Exact SU(2)-equivariant Szegő kernels on ℙ¹ and on ℙ¹×ℙ¹ with the line
//! bundle `O(1)⊠O(r)`, together with evaluators for their leading-order
//! asymptotics.
pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod kernels;
pub mod sections;
pub mod su2_rep;

pub use error::{Error, Result};
