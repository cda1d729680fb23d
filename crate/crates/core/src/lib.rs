//! Growth regimes of 2×2 matrix cocycles.
//!
//! * [`classifier`] decides bounded / linear / non-marginal growth for finite
//!   exact matrix sets and produces checkable certificates.
//! * [`growth`] computes the sequences `a_n` (max product norm) and `c_n`
//!   (max upper-right entry) by enumeration or by a convex-hull dynamic program.
//! * [`ergodic`] evaluates maximal ergodic averages of locally constant
//!   potentials via maximum-mean cycles, and the resulting linear growth rate
//!   of triangular cocycles.
//! * [`chacon`] runs the Chacon-subshift cocycle whose norms are unbounded
//!   yet grow sublinearly.

pub mod chacon;
pub mod classifier;
pub mod ergodic;
pub mod error;
pub mod growth;
pub mod matrix;
pub mod scalar;

pub use error::{Error, Result};
pub use matrix::{AnyMatrixSet, Mat2, MatrixSet};
pub use scalar::{QuadScalar, Rational, Scalar, ScalarKind};
