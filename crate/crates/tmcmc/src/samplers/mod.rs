//! One-step kernels and chain drivers.
//!
//! Every kernel works in log-domain throughout: targets return unnormalized
//! log-densities, acceptance tests compare against the log of a uniform
//! draw, and -inf marks points outside the support (a certain reject).
//! NaN from a target is treated as a bug and surfaces as an error.

mod chain;
mod gaussian;
mod hmc;
mod rwmh;
mod tmcmc_kernel;

pub use chain::{
    run_chain, run_chain_with_rng, run_chains, run_chains_sequential, ChainResult, Draws, Schedule,
};
pub use gaussian::GaussianMhKernel;
pub use hmc::{leapfrog, HmcConfig, HmcKernel};
pub use rwmh::{RwmhKernel, SeqRwmhKernel};
pub use tmcmc_kernel::TmcmcKernel;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use crate::transforms::EpsDomain;
use crate::{Error, Result};

/// Unnormalized log-density evaluator.
pub trait Target: Sync {
    fn dim(&self) -> usize;

    /// May return -inf outside the support; must never return NaN for
    /// finite input.
    fn log_density(&self, x: &[f64]) -> f64;
}

/// Target that also exposes the gradient of its log-density.
pub trait GradientTarget: Target {
    fn grad_log_density(&self, x: &[f64], grad: &mut [f64]);
}

impl<T: Target + ?Sized> Target for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn log_density(&self, x: &[f64]) -> f64 {
        (**self).log_density(x)
    }
}

impl<T: GradientTarget + ?Sized> GradientTarget for &T {
    fn grad_log_density(&self, x: &[f64], grad: &mut [f64]) {
        (**self).grad_log_density(x, grad)
    }
}

/// Current position together with its cached log-density.
#[derive(Debug, Clone)]
pub struct ChainState {
    pub position: Vec<f64>,
    pub log_density: f64,
}

impl ChainState {
    /// Evaluates the target at `position`. The starting log-density must be
    /// finite: a chain cannot be started outside the support.
    pub fn new<T: Target + ?Sized>(target: &T, position: Vec<f64>) -> Result<Self> {
        if position.len() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "init has {} coordinates, target has {}",
                position.len(),
                target.dim()
            )));
        }
        let log_density = target.log_density(&position);
        if log_density.is_nan() {
            return Err(Error::NanDensity(position));
        }
        if log_density == f64::NEG_INFINITY {
            return Err(Error::InvalidConfig(
                "chain initialized outside the target support".into(),
            ));
        }
        Ok(ChainState {
            position,
            log_density,
        })
    }
}

/// Proposal and acceptance counts contributed by one kernel invocation.
#[derive(Debug, Clone, Copy, Default)]
pub struct StepOutcome {
    pub accepted: u64,
    pub proposed: u64,
}

/// Acceptance bookkeeping for a single proposal, exposed so tests can
/// inspect the acceptance probability itself.
#[derive(Debug, Clone, Copy)]
pub struct StepDetail {
    pub accepted: bool,
    /// ln of the acceptance probability, i.e. `min(0, log ratio)`.
    pub log_accept_prob: f64,
}

impl From<StepDetail> for StepOutcome {
    fn from(d: StepDetail) -> Self {
        StepOutcome {
            accepted: u64::from(d.accepted),
            proposed: 1,
        }
    }
}

/// Markov transition kernel leaving its target invariant.
///
/// Kernels are immutable after construction and shareable across threads;
/// all per-chain state lives in the [`ChainState`].
pub trait Kernel: Sync {
    fn dim(&self) -> usize;

    /// Evaluates the kernel's target at a starting point, rejecting
    /// positions with NaN or -inf log-density.
    fn init_state(&self, init: &[f64]) -> Result<ChainState>;

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome>;
}

/// Metropolis-Hastings acceptance in log-domain.
///
/// `log_ratio` already contains every factor of the acceptance formula
/// (target ratio, move-probability ratio, Jacobian). Returns the detail and
/// leaves the state update to the caller.
pub(crate) fn accept(log_ratio: f64, u: f64) -> StepDetail {
    let log_accept_prob = log_ratio.min(0.0);
    StepDetail {
        // ln(u) < -inf is false, so -inf proposals are never accepted
        accepted: u.ln() < log_accept_prob,
        log_accept_prob,
    }
}

/// Checks a proposal's log-density: NaN is an error, anything else is a
/// valid value (-inf rejects downstream).
pub(crate) fn check_log_density(lp: f64, at: &[f64]) -> Result<f64> {
    if lp.is_nan() {
        Err(Error::NanDensity(at.to_vec()))
    } else {
        Ok(lp)
    }
}

/// Density-free innovation sampler restricted to a transformation domain.
///
/// The acceptance probability of a TMCMC step is independent of this
/// distribution (it cancels exactly because forward and backward moves share
/// the same innovation), so swapping samplers changes mixing speed only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsSampler {
    /// `N(0, sd^2)` restricted to the domain. On `(0, inf)` this is the
    /// half-normal; the default innovation law.
    TruncatedNormal { sd: f64 },
    /// Uniform on `[lo, hi)` restricted to the domain.
    Uniform { lo: f64, hi: f64 },
    /// Exponential with the given rate restricted to the domain.
    Exponential { rate: f64 },
}

impl Default for EpsSampler {
    fn default() -> Self {
        EpsSampler::TruncatedNormal { sd: 1.0 }
    }
}

impl EpsSampler {
    const REJECTION_CAP: u64 = 1_000_000;

    pub fn sample(&self, domain: &EpsDomain, rng: &mut dyn RngCore) -> Result<f64> {
        match *self {
            EpsSampler::TruncatedNormal { sd } if !(sd > 0.0) => {
                return Err(Error::InvalidConfig(format!("innovation sd {sd}")));
            }
            EpsSampler::Uniform { lo, hi } if !(hi > lo) => {
                return Err(Error::InvalidConfig(format!(
                    "innovation range [{lo}, {hi}) is empty"
                )));
            }
            EpsSampler::Exponential { rate } if !(rate > 0.0) => {
                return Err(Error::InvalidConfig(format!("innovation rate {rate}")));
            }
            _ => {}
        }
        for _ in 0..Self::REJECTION_CAP {
            let draw = match *self {
                EpsSampler::TruncatedNormal { sd } => {
                    let z: f64 = StandardNormal.sample(rng);
                    sd * z
                }
                EpsSampler::Uniform { lo, hi } => rng.random_range(lo..hi),
                EpsSampler::Exponential { rate } => -(1.0 - rng.random::<f64>()).ln() / rate,
            };
            if domain.contains(draw) {
                return Ok(draw);
            }
        }
        Err(Error::InvalidConfig(format!(
            "innovation sampler {self:?} places almost no mass on the domain"
        )))
    }
}
