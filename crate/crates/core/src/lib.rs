//! Dependence-uncertainty bounds on the outage capacity of fading diversity
//! channels.
//!
//! Given `n` links whose channel gains have fixed marginal distributions with
//! monotone densities, this crate computes the extremal (best- and worst-case
//! over all joint distributions) ε-outage and zero-outage capacities, with and
//! without transmitter channel state information. The analytic machinery is
//! cross-checked by an independent rearrangement-algorithm and Monte Carlo
//! oracle in [`oracle`].
//!
//! All core math is generic over the scalar type through the [`Real`] trait
//! (`f32` or `f64`); concrete `f64` aliases live at the crate root.

pub mod capacity;
pub mod csit;
pub mod depbounds;
pub mod marginals;
pub mod numerics;
pub mod oracle;

mod error;
mod real;

pub use error::{Error, Result};
pub use real::Real;

/// Exponential channel-gain marginal over `f64` (Rayleigh fading amplitude).
pub type ExponentialMarginal64 = marginals::ExponentialMarginal<f64>;
/// Uniform-on-[0,1] test marginal over `f64`.
pub type UniformMarginal64 = marginals::UniformMarginal<f64>;
/// Quantile-table marginal over `f64`.
pub type QuantileTableMarginal64 = marginals::QuantileTableMarginal<f64>;
/// Solver tolerances over `f64`.
pub type Tolerance64 = numerics::Tolerance<f64>;
/// System configuration over `f64`.
pub type SystemConfig64 = capacity::SystemConfig<f64>;
/// Capacity bound report over `f64`.
pub type BoundReport64 = capacity::BoundReport<f64>;
/// CSIT zero-outage report over `f64`.
pub type CsitReport64 = csit::CsitReport<f64>;
