//! Distinguishability of a disk inclusion in the unit disk.
//!
//! The conductivity is `1 + A` on a ball `B(C, R)` inside the unit disk and `1`
//! elsewhere. A Moebius automorphism maps the ball onto a concentric one, where
//! the boundary maps are diagonal in the Fourier basis. Pulling the diagonal
//! operators back gives exact matrix representations (tridiagonal for the
//! Dirichlet-to-Neumann map), whose leading eigenvalues give the operator
//! norms that measure distinguishability.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod cli;
pub mod eigensolve;
pub mod error;
pub mod geometry;
pub mod operator_matrix;
pub mod oracle;
pub mod spectra;
pub mod tridiag;

pub use error::{Error, Result};
pub use geometry::{ComplexPoint, Inclusion, MobiusParam};
pub use operator_matrix::{OperatorKind, TruncatedOperatorMatrix};
pub use spectra::ConcentricSpec;
