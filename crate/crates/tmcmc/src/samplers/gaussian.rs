//! Metropolis-Hastings with a fixed multivariate normal proposal.

use nalgebra::DMatrix;
use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use super::{accept, check_log_density, ChainState, Kernel, StepOutcome, Target};
use crate::{Error, Result};

/// Proposal `x' ~ N(x, Sigma)`; the symmetric density cancels in the
/// acceptance ratio. `Sigma` is factored once at construction.
#[derive(Debug, Clone)]
pub struct GaussianMhKernel<T> {
    target: T,
    chol_lower: DMatrix<f64>,
}

impl<T: Target> GaussianMhKernel<T> {
    pub fn new(target: T, covariance: DMatrix<f64>) -> Result<Self> {
        let k = target.dim();
        if covariance.nrows() != k || covariance.ncols() != k {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} covariance for a {k}-dimensional target",
                covariance.nrows(),
                covariance.ncols()
            )));
        }
        let chol = nalgebra::linalg::Cholesky::new(covariance).ok_or_else(|| {
            Error::CholeskyFailure("proposal covariance is not positive definite".into())
        })?;
        Ok(GaussianMhKernel {
            target,
            chol_lower: chol.l(),
        })
    }
}

impl<T: Target> Kernel for GaussianMhKernel<T> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn init_state(&self, init: &[f64]) -> crate::Result<ChainState> {
        ChainState::new(&self.target, init.to_vec())
    }

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome> {
        let k = self.dim();
        let z = nalgebra::DVector::from_fn(k, |_, _| StandardNormal.sample(rng));
        let shift = &self.chol_lower * z;
        let proposal: Vec<f64> = state
            .position
            .iter()
            .zip(shift.iter())
            .map(|(&x, &d)| x + d)
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
