//! Exact computation of Tsirelson-type norms on finitely supported vectors.
//!
//! * [`primal`] evaluates the Figiel–Johnson norm and mixed Tsirelson norms by
//!   memoized recursion over support blocks, returning witness trees.
//! * [`norming`] builds the norming sets of functionals on a finite window.
//! * [`dualnorm`] computes the dual norms exactly as the gauge of the convex
//!   hull of a norming set, solved with the exact simplex in [`lp`] and
//!   cross-checked against the dual ball maximization.

pub mod corpus;
pub mod dualnorm;
pub mod error;
pub mod families;
pub mod lp;
pub mod norming;
pub mod partition;
pub mod primal;
pub mod scalar;
pub mod vector;

pub use error::{Error, Result};
pub use families::{AdmissibilityFamily, MixedSpaceSpec, SpaceConfig};
pub use partition::{enumerate_partitions, BlockPartition};
pub use scalar::{Interval, Rational};
pub use vector::{pairing, FinVec};

/// Default cap on the number of signed functionals a norming set may hold.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Default cap on the θ precision (bits) used for irrational coefficients.
pub const DEFAULT_PRECISION_CAP: u32 = 256;
