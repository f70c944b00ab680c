//! Transformation-based MCMC (TMCMC).
//!
//! TMCMC proposes joint updates of a k-dimensional state by applying a
//! deterministic forward or backward transformation per coordinate, all
//! driven by a *single* scalar innovation. The acceptance ratio combines the
//! target ratio with a move-type probability ratio and the transformation
//! Jacobian; the innovation's own density cancels and is never evaluated.
//!
//! The crate provides:
//!
//! - [`transforms`]: the per-coordinate transformation families (additive,
//!   multiplicative, log-additive) with exact log-Jacobians.
//! - [`moves`]: move-indicator sampling and move-probability ratios, in
//!   per-coordinate product form or as an explicit table over move types.
//! - [`samplers`]: one-step kernels (TMCMC, random-walk MH, Gaussian MH,
//!   HMC with leap-frog integration) and a deterministic chain driver.
//! - [`bounds`]: closed-form upper bounds on acceptance rates showing how
//!   joint random-walk MH degrades with dimension much faster than
//!   singleton-innovation TMCMC.
//! - [`targets`]: log-densities for the bundled experiments (Challenger
//!   logit posterior, GP-Poisson geostatistical model, circular model).
//! - [`exchange`]: bridge-exchange sampling for doubly intractable
//!   posteriors with TMCMC bridge kernels.
//! - [`discrete`]: discrete-state TMCMC chains and exact finite-kernel
//!   stationarity oracles.
//! - [`diagnostics`]: summary tables, autocorrelations, and wrapped
//!   histogram density estimates.
//!
//! Chains are sequential; independent chains run concurrently via
//! [`samplers::run_chains`], which uses rayon when the `parallel` feature
//! (on by default) is enabled and falls back to a sequential loop otherwise.

pub mod bounds;
pub mod diagnostics;
pub mod discrete;
mod error;
pub mod exchange;
pub mod moves;
pub mod parallel;
pub mod samplers;
pub mod targets;
pub mod transforms;

pub use error::{Error, Result};

// covariance matrices in the public API are nalgebra types
pub use nalgebra;
