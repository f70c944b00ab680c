//! The transformation-based kernel with a singleton innovation.

use rand::{Rng, RngCore};

use super::{accept, check_log_density, ChainState, EpsSampler, Kernel, StepDetail, StepOutcome, Target};
use crate::moves::MoveLaw;
use crate::transforms::{apply_move, MoveIndicator, TransformFamily};
use crate::{Error, Result};

/// One TMCMC step draws a single scalar innovation and a move indicator,
/// transforms every selected coordinate, and accepts with probability
///
/// ```text
/// min{ 1, P(z^c)/P(z) * pi(x')/pi(x) * J(x, eps) }
/// ```
///
/// The innovation's density never enters the ratio.
#[derive(Debug, Clone)]
pub struct TmcmcKernel<T> {
    target: T,
    family: TransformFamily,
    law: MoveLaw,
    eps_sampler: EpsSampler,
}

impl<T: Target> TmcmcKernel<T> {
    pub fn new(
        target: T,
        family: TransformFamily,
        law: MoveLaw,
        eps_sampler: EpsSampler,
    ) -> Result<Self> {
        if family.dim() != target.dim() || law.dim() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "target dim {}, family dim {}, move law dim {}",
                target.dim(),
                family.dim(),
                law.dim()
            )));
        }
        Ok(TmcmcKernel {
            target,
            family,
            law,
            eps_sampler,
        })
    }

    pub fn target(&self) -> &T {
        &self.target
    }

    pub fn family(&self) -> &TransformFamily {
        &self.family
    }

    /// Deterministic core of the step: applies the given innovation, move
    /// indicator, and uniform draw. Exposed so tests can inject identical
    /// randomness into differently configured kernels.
    pub fn step_with(
        &self,
        state: &mut ChainState,
        eps: f64,
        z: &MoveIndicator,
        u: f64,
    ) -> Result<StepDetail> {
        let (proposal, log_jacobian) = apply_move(&state.position, eps, z, &self.family)?;
        let log_move_ratio = self.law.log_prob_ratio(z)?;
        let lp_new = check_log_density(self.target.log_density(&proposal), &proposal)?;
        let detail = accept(
            log_move_ratio + lp_new - state.log_density + log_jacobian,
            u,
        );
        if detail.accepted {
            state.position = proposal;
            state.log_density = lp_new;
        }
        Ok(detail)
    }
}

impl<T: Target> Kernel for TmcmcKernel<T> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn init_state(&self, init: &[f64]) -> crate::Result<ChainState> {
        ChainState::new(&self.target, init.to_vec())
    }

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome> {
        let eps = self.eps_sampler.sample(&self.family.eps_domain(), rng)?;
        let z = self.law.sample(rng)?;
        let u: f64 = rng.random();
        Ok(self.step_with(state, eps, &z, u)?.into())
    }
}
