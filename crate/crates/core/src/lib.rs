//! Soft-edge largest-eigenvalue statistics for the Gaussian and Laguerre
//! unitary ensembles.
//!
//! The limiting distribution `F(t) = det(I - xi K_Airy)` and its leading
//! `N^{-2/3}` correction are computed two ways: Nyström discretisation of
//! the Fredholm determinant ([`fredholm`]) and integration of the
//! sigma-form Painlevé II system ([`painleve`]). Finite-N kernels,
//! Monte Carlo samplers and last-passage percolation sit alongside for
//! validation.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fredholm;
pub mod kernels;
pub mod painleve;
pub mod par;
pub mod simulate;
pub mod specfun;
pub mod verify;

pub use error::{Error, Result};
pub use par::Execution;
