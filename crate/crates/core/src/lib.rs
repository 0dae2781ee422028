//! Three-state quantum walks on the line: exact simulation, weak-limit
//! asymptotics for two one-parameter coin families, and a Fourier-space
//! oracle for cross-checking both.

// `!(x < bound)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asymptotics;
pub mod cli;
pub mod coin;
pub mod error;
pub mod quadrature;
pub mod spectral;
pub mod walk;

pub use asymptotics::{limit_distribution, LimitDistribution, PhiAsymptotics, RhoAsymptotics};
pub use coin::{Basis, CoinSpec, CoinState, Family, Spinor};
pub use error::{Error, Result};
