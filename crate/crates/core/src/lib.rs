//! Hilbert functions, Cohen-Macaulay tests and freeness certificates for
//! symmetric subspace arrangements and their invariant rings.

pub mod arrangement;
pub mod certify;
pub mod classify;
pub mod cm;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod partition;
pub mod poly;
pub mod report;
pub mod rng;
pub mod scalar;
pub mod series;
pub mod subalgebra;
pub mod sweep;
pub mod verdict;

pub use error::{AcmError, Result};
pub use partition::{Partition, Weights};
pub use poly::{Monomial, Poly};
pub use scalar::{Field, Scalar};
