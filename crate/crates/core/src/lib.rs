//! Memcomputing toolkit.
//!
//! The crate is organised around the objects a memcomputing machine is built from and the
//! two subset-sum solvers that exercise them:
//!
//! * [`umm`] and [`tm`]: memprocessors, memprocessor networks, the universal memcomputing
//!   machine and its Turing-machine embedding.
//! * [`dcram`]: a matrix of integer memprocessors driven by broadcast-add, move and replicate
//!   operations, solving subset sum in `n - 1` transitions.
//! * [`spectral`]: the generating-signal solver, `g(x) = -1 + prod(1 + e^{i 2 pi a_j x})`,
//!   whose integer spectrum counts subsets by their sums.
//! * [`cvm`]: closed-form model of the analog multiplier chain that synthesises `g(t)`.
//! * [`overhead`]: information-overhead bookkeeping and the sparse-state composition algebra.
//! * [`oracles`]: dynamic-programming and exhaustive ground truth.
//! * [`bench`]: timing sweeps comparing the streaming spectral solver with the DP oracle.

pub mod bench;
pub mod compensated;
pub mod cvm;
pub mod dcram;
mod error;
pub mod oracles;
pub mod overhead;
pub mod set;
pub mod spectral;
pub mod tm;
pub mod umm;

pub use error::{Error, Result};
pub use set::IntegerSet;
pub use spectral::Spectrum;
