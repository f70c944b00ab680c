use crate::samplers::{GradientTarget, Target};

/// Standard normal `N(0, I_k)`, the calibration target for moment-recovery
/// checks and dimension sweeps.
#[derive(Debug, Clone, Copy)]
pub struct StdGaussian {
    dim: usize,
}

impl StdGaussian {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "dimension must be positive");
        StdGaussian { dim }
    }
}

impl Target for StdGaussian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        -0.5 * x.iter().map(|v| v * v).sum::<f64>()
    }
}

impl GradientTarget for StdGaussian {
    fn grad_log_density(&self, x: &[f64], grad: &mut [f64]) {
        for (g, v) in grad.iter_mut().zip(x) {
            *g = -v;
        }
    }
}
