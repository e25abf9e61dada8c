//! Moments of determinants of random unitary pencils.
//!
//! Exact finite-size formulas for scalar and identity-multiple coefficients,
//! large-size limits for general coefficient tuples, a Haar Monte Carlo
//! estimator, and the partition combinatorics behind them.

pub mod content_ratio;
pub mod error;
pub mod haar_mc;
pub mod lr;
pub mod matrices;
pub mod moments;
pub mod numbers;
pub mod partitions;
pub mod symgroup;

pub use error::{Error, Result};
pub use matrices::{CMatrix, MatrixTuple};

pub use lr::{SplitChain, SplitTerm};
pub use moments::{MomentValue, ScalarTuple};
pub use haar_mc::MomentEstimate;
pub use content_ratio::RatioReport;
pub use partitions::{CellGrid, Partition};
pub use symgroup::{MultiIndex, Permutation};
