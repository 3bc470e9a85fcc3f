//! Fusion rules between twisted and untwisted modules of affine vertex operator
//! algebras, computed from modular S-matrices and from alcove-folded tensor
//! multiplicities.

pub mod cartan;
pub mod cli;
pub mod error;
pub mod fold;
pub mod fusion;
pub mod linalg;
pub mod rep;
pub mod selfcheck;
pub mod smatrix;
pub mod weyl;

pub use error::{Error, Result};
