//! Differentially private optimization of approximated quasi-concave functions.
//!
//! The crate reduces private optimization of a quasi-concave target `Q(S, ·)` to
//! the private interior point problem: split the data into blocks, maximize `Q`
//! on every block, and privately pick a point between the block maximizers.
//! The reduction is extended coordinate by coordinate to `d` dimensions and
//! applied to two geometric problems:
//!
//! * [`tukey`]: private approximation of a Tukey median;
//! * [`linfeas`]: private linear feasibility and private halfspace learning.
//!
//! [`audit`] hosts an empirical privacy auditor together with a counterexample
//! mechanism that it rejects.
//!
//! Privacy primitives in [`dp_core`] are generic over the floating-point scalar
//! (`f32` or `f64`); geometric predicates are exact (integer and rational).

pub mod approximation;
pub mod audit;
pub mod cli;
pub mod dp_core;
pub mod error;
pub mod geometry;
pub mod interior_point;
pub mod linfeas;
pub mod optimizer;
pub mod rationals;
pub mod tukey;

pub use error::{Error, Result};
pub use rationals::{BoundedRational, RationalGrid};

/// Privacy parameters in double precision.
pub type PrivacyParams = dp_core::PrivacyParams<f64>;
/// Privacy parameters in single precision.
pub type PrivacyParams32 = dp_core::PrivacyParams<f32>;
/// Composition ledger in double precision.
pub type CompositionLedger = dp_core::CompositionLedger<f64>;
/// Composition ledger in single precision.
pub type CompositionLedger32 = dp_core::CompositionLedger<f32>;

pub use dp_core::RandomSource;
