//! Random-walk Metropolis-Hastings, joint and sequential.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use super::{accept, check_log_density, ChainState, Kernel, StepOutcome, Target};
use crate::{Error, Result};

/// Joint random walk: every coordinate is perturbed by its own independent
/// `N(0, a_i^2)` draw and the whole block is accepted or rejected at once.
#[derive(Debug, Clone)]
pub struct RwmhKernel<T> {
    target: T,
    scales: Vec<f64>,
}

impl<T: Target> RwmhKernel<T> {
    pub fn new(target: T, scales: Vec<f64>) -> Result<Self> {
        if scales.len() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} scales for a {}-dimensional target",
                scales.len(),
                target.dim()
            )));
        }
        if scales.iter().any(|a| *a < 0.0 || !a.is_finite()) {
            return Err(Error::InvalidConfig("negative proposal scale".into()));
        }
        Ok(RwmhKernel { target, scales })
    }
}

impl<T: Target> Kernel for RwmhKernel<T> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn init_state(&self, init: &[f64]) -> crate::Result<ChainState> {
        ChainState::new(&self.target, init.to_vec())
    }

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome> {
        let proposal: Vec<f64> = state
            .position
            .iter()
            .zip(&self.scales)
            .map(|(&x, &a)| {
                let z: f64 = StandardNormal.sample(rng);
                x + a * z
            })
            .collect();
        let lp_new = check_log_density(self.target.log_density(&proposal), &proposal)?;
        let detail = accept(lp_new - state.log_density, rng.random());
        if detail.accepted {
            state.position = proposal;
            state.log_density = lp_new;
        }
        Ok(detail.into())
    }
}

/// Sequential single-coordinate random walk. One kernel step sweeps all
/// coordinates in order, proposing and deciding each one separately.
#[derive(Debug, Clone)]
pub struct SeqRwmhKernel<T> {
    target: T,
    scales: Vec<f64>,
}

impl<T: Target> SeqRwmhKernel<T> {
    pub fn new(target: T, scales: Vec<f64>) -> Result<Self> {
        let inner = RwmhKernel::new(target, scales)?;
        Ok(SeqRwmhKernel {
            target: inner.target,
            scales: inner.scales,
        })
    }

    /// One full sweep; `accepted[i]` reports the decision for coordinate `i`.
    pub fn sweep(
        &self,
        state: &mut ChainState,
        rng: &mut dyn RngCore,
        accepted: &mut [bool],
    ) -> Result<()> {
        if accepted.len() != self.scales.len() {
            return Err(Error::DimensionMismatch(
                "acceptance buffer has wrong length".into(),
            ));
        }
        for (i, flag) in accepted.iter_mut().enumerate() {
            let z: f64 = StandardNormal.sample(rng);
            let old = state.position[i];
            let candidate = old + self.scales[i] * z;
            state.position[i] = candidate;
            let lp_new = check_log_density(
                self.target.log_density(&state.position),
                &state.position,
            );
            let lp_new = match lp_new {
                Ok(v) => v,
                Err(e) => {
                    state.position[i] = old;
                    return Err(e);
                }
            };
            let detail = accept(lp_new - state.log_density, rng.random());
            if detail.accepted {
                state.log_density = lp_new;
            } else {
                state.position[i] = old;
            }
            *flag = detail.accepted;
        }
        Ok(())
    }
}

impl<T: Target> Kernel for SeqRwmhKernel<T> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn init_state(&self, init: &[f64]) -> crate::Result<ChainState> {
        ChainState::new(&self.target, init.to_vec())
    }

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome> {
        let mut flags = vec![false; self.dim()];
        self.sweep(state, rng, &mut flags)?;
        Ok(StepOutcome {
            accepted: flags.iter().filter(|f| **f).count() as u64,
            proposed: flags.len() as u64,
        })
    }
}
