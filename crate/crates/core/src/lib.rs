//! Exact computation of Borel equivariant cohomology for finite Z/2-CW
//! complexes, with the group-theoretic and classification layers built on it.

pub mod abelian;
pub mod borel;
pub mod classify;
pub mod complex;
pub mod error;
pub mod linalg;

pub use abelian::{FgAbelianGroup, GroupHom};
pub use linalg::IntMatrix;
