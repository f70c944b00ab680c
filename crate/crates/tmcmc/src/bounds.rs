//! Closed-form displacement-probability bounds on acceptance rates.
//!
//! For uniformly continuous targets, a proposal farther than some distance
//! `c` from the current point has small acceptance probability, so
//! `P(||x' - x|| < c)` upper-bounds how often meaningful acceptance can
//! occur. With per-coordinate proposal scales at least `K`:
//!
//! - joint RWMH in dimension k: `Phi((c^2/K^2 - k) / sqrt(2k))`
//! - additive singleton-innovation TMCMC: `2 Phi(c / (sqrt(k) K)) - 1`
//! - HMC (single leap-frog, unit masses): the displacement is
//!   noncentral-chi-squared and the same normal approximation gives
//!   `Phi((c^2/dt^2 - (k + lambda)) / sqrt(2 (k + 2 lambda)))`
//!
//! The RWMH bound collapses super-exponentially in k while the TMCMC bound
//! shrinks like 1/sqrt(k); the ratio of the two diverges. The modulus `c`
//! is a caller-supplied parameter: uniform continuity guarantees it exists
//! but gives no construction.

use crate::{Error, Result};

/// Standard normal CDF. Evaluated through erfc so that values near 1e-19
/// in the lower tail keep full relative accuracy.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Inputs shared by the bound calculators. `step` and `noncentrality` are
/// only consumed by the HMC bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInput {
    /// Displacement threshold c.
    pub distance: f64,
    /// Lower bound K on the per-coordinate proposal scales.
    pub min_scale: f64,
    /// State dimension k.
    pub dim: usize,
    /// HMC leap-frog step size.
    pub step: Option<f64>,
    /// HMC noncentrality, `dt^2/4 * sum_i (d/dx_i log pi)^2`.
    pub noncentrality: Option<f64>,
}

impl BoundInput {
    pub fn new(distance: f64, min_scale: f64, dim: usize) -> Result<Self> {
        if !(distance > 0.0) || !(min_scale > 0.0) || dim == 0 {
            return Err(Error::InvalidConfig(format!(
                "distance {distance}, min scale {min_scale}, and dim {dim} must be positive"
            )));
        }
        Ok(BoundInput {
            distance,
            min_scale,
            dim,
            step: None,
            noncentrality: None,
        })
    }

    pub fn with_hmc(mut self, step: f64, noncentrality: f64) -> Result<Self> {
        if !(step > 0.0) || noncentrality < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "step {step} must be positive and noncentrality {noncentrality} nonnegative"
            )));
        }
        self.step = Some(step);
        self.noncentrality = Some(noncentrality);
        Ok(self)
    }
}

/// `Phi((c^2/K^2 - k) / sqrt(2k))`, the joint random-walk bound.
pub fn rwmh_displacement_bound(input: &BoundInput) -> f64 {
    let k = input.dim as f64;
    let ratio = (input.distance / input.min_scale).powi(2);
    normal_cdf((ratio - k) / (2.0 * k).sqrt())
}

/// `2 Phi(c / (sqrt(k) K)) - 1`, the additive singleton-innovation bound.
pub fn tmcmc_displacement_bound(input: &BoundInput) -> f64 {
    let k = input.dim as f64;
    2.0 * normal_cdf(input.distance / (k.sqrt() * input.min_scale)) - 1.0
}

/// `Phi((c^2/dt^2 - (k + lambda)) / sqrt(2(k + 2 lambda)))`, the normal
/// approximation to the noncentral-chi-squared displacement law of a single
/// leap-frog step.
pub fn hmc_displacement_bound(input: &BoundInput) -> Result<f64> {
    let (Some(dt), Some(lambda)) = (input.step, input.noncentrality) else {
        return Err(Error::InvalidConfig(
            "HMC bound needs step and noncentrality".into(),
        ));
    };
    let k = input.dim as f64;
    let ratio = (input.distance / dt).powi(2);
    Ok(normal_cdf((ratio - (k + lambda)) / (2.0 * (k + 2.0 * lambda)).sqrt()))
}

/// One row of a dimension sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub dim: usize,
    pub rwmh: f64,
    pub tmcmc: f64,
    pub hmc: Option<f64>,
    /// `(c^2/K^2 - k) * K / (c sqrt(2))`: ratio of the two Phi arguments,
    /// diverging to -inf as the dimension grows.
    pub argument_ratio: f64,
}

/// Evaluates all bounds over a range of dimensions, holding the other
/// inputs of `template` fixed.
pub fn bound_sweep(dims: &[usize], template: &BoundInput) -> Result<Vec<BoundRow>> {
    if dims.is_empty() {
        return Err(Error::InvalidConfig("empty dimension range".into()));
    }
    dims.iter()
        .map(|&dim| {
            if dim == 0 {
                return Err(Error::InvalidConfig("dimension 0 in sweep".into()));
            }
            let input = BoundInput { dim, ..*template };
            let hmc = if input.step.is_some() {
                Some(hmc_displacement_bound(&input)?)
            } else {
                None
            };
            let k = dim as f64;
            let c = input.distance;
            let big_k = input.min_scale;
            Ok(BoundRow {
                dim,
                rwmh: rwmh_displacement_bound(&input),
                tmcmc: tmcmc_displacement_bound(&input),
                hmc,
                argument_ratio: (c * c / (big_k * big_k) - k) * big_k
                    / (c * std::f64::consts::SQRT_2),
            })
        })
        .collect()
}
