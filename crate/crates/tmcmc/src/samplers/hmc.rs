//! Hamiltonian Monte Carlo.
//!
//! HMC is the transformation-based special case with exactly one move type:
//! the leap-frog flow applied to the momentum-augmented state. The flow is
//! volume preserving, so no Jacobian appears in the acceptance probability,
//! and with a single move type there is no move-probability ratio either;
//! what remains is the total-energy difference.

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use super::{check_log_density, ChainState, GradientTarget, Kernel, StepDetail, StepOutcome};
use crate::{Error, Result};

/// Mass vector (diagonal mass matrix), step size, and trajectory length.
#[derive(Debug, Clone, PartialEq)]
pub struct HmcConfig {
    mass: Vec<f64>,
    step_size: f64,
    leapfrog_steps: usize,
}

impl HmcConfig {
    pub fn new(mass: Vec<f64>, step_size: f64, leapfrog_steps: usize) -> Result<Self> {
        if mass.is_empty() || mass.iter().any(|m| !(*m > 0.0) || !m.is_finite()) {
            return Err(Error::InvalidConfig("masses must be positive".into()));
        }
        if !(step_size > 0.0) || !step_size.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "step size {step_size} must be positive"
            )));
        }
        if leapfrog_steps == 0 {
            return Err(Error::InvalidConfig(
                "at least one leap-frog step is required".into(),
            ));
        }
        Ok(HmcConfig {
            mass,
            step_size,
            leapfrog_steps,
        })
    }

    /// Unit masses in `dim` coordinates.
    pub fn unit(dim: usize, step_size: f64, leapfrog_steps: usize) -> Result<Self> {
        HmcConfig::new(vec![1.0; dim], step_size, leapfrog_steps)
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn step_size(&self) -> f64 {
        self.step_size
    }

    pub fn leapfrog_steps(&self) -> usize {
        self.leapfrog_steps
    }

    /// Kinetic energy `p' M^-1 p / 2`, normalized so that exp(-H) is the
    /// phase-space density.
    pub fn kinetic_energy(&self, momentum: &[f64]) -> f64 {
        momentum
            .iter()
            .zip(&self.mass)
            .map(|(&p, &m)| p * p / (2.0 * m))
            .sum()
    }
}

/// Runs the leap-frog integrator in place for the configured number of
/// steps. Gradients of the potential `U = -log pi` are taken from the
/// target's log-density gradient; a non-finite gradient aborts.
pub fn leapfrog<T: GradientTarget + ?Sized>(
    target: &T,
    position: &mut [f64],
    momentum: &mut [f64],
    cfg: &HmcConfig,
) -> Result<()> {
    let dt = cfg.step_size;
    let mut grad = vec![0.0; position.len()];
    let refresh = |x: &[f64], g: &mut Vec<f64>| -> Result<()> {
        target.grad_log_density(x, g);
        if g.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteGradient(x.to_vec()));
        }
        Ok(())
    };
    refresh(position, &mut grad)?;
    for _ in 0..cfg.leapfrog_steps {
        // half kick: p - dt/2 * grad U = p + dt/2 * grad log pi
        for (p, g) in momentum.iter_mut().zip(&grad) {
            *p += 0.5 * dt * g;
        }
        // drift
        for ((x, p), m) in position.iter_mut().zip(momentum.iter()).zip(&cfg.mass) {
            *x += dt * p / m;
        }
        refresh(position, &mut grad)?;
        // closing half kick
        for (p, g) in momentum.iter_mut().zip(&grad) {
            *p += 0.5 * dt * g;
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct HmcKernel<T> {
    target: T,
    cfg: HmcConfig,
}

impl<T: GradientTarget> HmcKernel<T> {
    pub fn new(target: T, cfg: HmcConfig) -> Result<Self> {
        if cfg.dim() != target.dim() {
            return Err(Error::DimensionMismatch(format!(
                "config dim {} vs target dim {}",
                cfg.dim(),
                target.dim()
            )));
        }
        Ok(HmcKernel { target, cfg })
    }

    pub fn config(&self) -> &HmcConfig {
        &self.cfg
    }

    /// Step with an externally supplied momentum and uniform draw. The
    /// acceptance probability is exp(min(0, H(x,p') - H(x'',p''))) with no
    /// other factor.
    pub fn step_with_momentum(
        &self,
        state: &mut ChainState,
        momentum: Vec<f64>,
        u: f64,
    ) -> Result<StepDetail> {
        let h_current = -state.log_density + self.cfg.kinetic_energy(&momentum);

        let mut position = state.position.clone();
        let mut momentum = momentum;
        leapfrog(&self.target, &mut position, &mut momentum, &self.cfg)?;

        let lp_new = check_log_density(self.target.log_density(&position), &position)?;
        let h_proposed = -lp_new + self.cfg.kinetic_energy(&momentum);

        let detail = super::accept(h_current - h_proposed, u);
        if detail.accepted {
            state.position = position;
            state.log_density = lp_new;
        }
        Ok(detail)
    }
}

impl<T: GradientTarget> Kernel for HmcKernel<T> {
    fn dim(&self) -> usize {
        self.target.dim()
    }

    fn init_state(&self, init: &[f64]) -> crate::Result<ChainState> {
        ChainState::new(&self.target, init.to_vec())
    }

    fn step(&self, state: &mut ChainState, rng: &mut dyn RngCore) -> Result<StepOutcome> {
        // fresh momentum p ~ N(0, M), discarded after the step
        let momentum: Vec<f64> = self
            .cfg
            .mass
            .iter()
            .map(|&m| {
                let z: f64 = StandardNormal.sample(rng);
                z * m.sqrt()
            })
            .collect();
        let u: f64 = rng.random();
        Ok(self.step_with_momentum(state, momentum, u)?.into())
    }
}
