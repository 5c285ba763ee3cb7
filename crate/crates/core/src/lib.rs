//! Variational points, maximal elements and equilibrium points on finite
//! almost metric spaces.
//!
//! The crate works with finite, possibly asymmetric distance tables. Given a
//! potential `phi` it finds points `v` above a start `u` in the order
//! `x <= y iff e(x, y) + phi(y) <= phi(x)` that are maximal, and it builds
//! the weighted metric `e(x, y) = B(G(x) + d(x, y)) - B(G(x))` from a normal
//! function `b` (with integral `B`) and an almost nonexpansive weight `G`.
//! Every solver returns a [`solver::Certificate`] with the slack of each
//! inequality it claims, so results can be checked independently.

// `!(a <= b)` is kept so that NaN fails the comparison.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod almost_metric;
pub mod equilibrium;
pub mod error;
pub mod generate;
pub mod normal_fn;
pub mod report;
pub mod scenario;
pub mod solver;
pub mod zhong;

pub use almost_metric::{AlmostMetricTable, FinitePrefixSequence, PointId, PseudometricTable, Tail, Verdict};
pub use equilibrium::{Bifunction, Marginal};
pub use error::{Error, Result};
pub use normal_fn::NormalFunction;
pub use report::{Inequality, Tolerances, ValidationReport};
pub use scenario::{Instance, Scenario, Selector};
pub use solver::{Certificate, Potential, Selection, Theorem};
pub use zhong::{Weight, ZhongMetric};
