//! Challenger O-ring failure data and its logit posterior.
//!
//! The model is `y_i ~ Bernoulli(pi_i)` with `logit(pi_i) = b1 + b2 * x_i`
//! and `x_i = t_i / max t_i` the scaled launch temperature, under a flat
//! prior on `(b1, b2)`.

use nalgebra::{Matrix2, Vector2};

use crate::samplers::Target;

/// (flight number, O-ring failure, temperature in degrees Fahrenheit).
pub const CHALLENGER_DATA: [(u32, u8, f64); 23] = [
    (14, 1, 53.0),
    (9, 1, 57.0),
    (23, 1, 58.0),
    (10, 1, 63.0),
    (1, 0, 66.0),
    (5, 0, 67.0),
    (13, 0, 67.0),
    (15, 0, 67.0),
    (4, 0, 68.0),
    (3, 0, 69.0),
    (8, 0, 70.0),
    (17, 0, 70.0),
    (2, 1, 70.0),
    (11, 1, 70.0),
    (6, 0, 72.0),
    (7, 0, 73.0),
    (16, 0, 75.0),
    (21, 1, 75.0),
    (19, 0, 76.0),
    (22, 0, 76.0),
    (12, 0, 78.0),
    (20, 0, 79.0),
    (18, 0, 81.0),
];

/// Scales of the golden additive transformation: the first column of the
/// Cholesky factor of the MLE covariance, taken in magnitude. The
/// `fit_challenger_mle` oracle re-derives these from the data.
pub const CHALLENGER_RIDGE_SCALES: [f64; 2] = [7.378_636_384_916_85, 8.742_446_366_206_26];

fn scaled_temps() -> [f64; 23] {
    let max_t = CHALLENGER_DATA
        .iter()
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut x = [0.0; 23];
    for (xi, row) in x.iter_mut().zip(&CHALLENGER_DATA) {
        *xi = row.2 / max_t;
    }
    x
}

/// `ln(1 + e^t)` without overflow.
fn log1p_exp(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

/// Unnormalized log-posterior at `beta = (b1, b2)`; the flat prior
/// contributes nothing. Defined and finite on all of R^2.
pub fn challenger_log_posterior(beta: [f64; 2]) -> f64 {
    let x = scaled_temps();
    let mut total = 0.0;
    for (xi, row) in x.iter().zip(&CHALLENGER_DATA) {
        let eta = beta[0] + beta[1] * xi;
        total += f64::from(row.1) * eta - log1p_exp(eta);
    }
    total
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ChallengerPosterior;

impl Target for ChallengerPosterior {
    fn dim(&self) -> usize {
        2
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        challenger_log_posterior([x[0], x[1]])
    }
}

/// Maximum-likelihood fit of the logit model.
#[derive(Debug, Clone, Copy)]
pub struct MleFit {
    pub beta: [f64; 2],
    /// Inverse observed information at the MLE.
    pub covariance: Matrix2<f64>,
    /// First column of the lower Cholesky factor of `covariance`.
    pub cholesky_column: [f64; 2],
}

/// Newton-Raphson fit; converges in a handful of iterations from the
/// origin and is fully deterministic.
pub fn fit_challenger_mle() -> MleFit {
    let x = scaled_temps();
    let mut beta = Vector2::new(0.0, 0.0);
    for _ in 0..100 {
        let mut grad = Vector2::zeros();
        let mut info = Matrix2::zeros();
        for (xi, row) in x.iter().zip(&CHALLENGER_DATA) {
            let eta = beta[0] + beta[1] * xi;
            let p = 1.0 / (1.0 + (-eta).exp());
            let w = p * (1.0 - p);
            let resid = f64::from(row.1) - p;
            grad += Vector2::new(resid, resid * xi);
            info += Matrix2::new(w, w * xi, w * xi, w * xi * xi);
        }
        let step = info
            .try_inverse()
            .expect("observed information is positive definite")
            * grad;
        beta += step;
        if step.amax() < 1e-13 {
            break;
        }
    }

    let mut info = Matrix2::zeros();
    for (xi, row) in x.iter().zip(&CHALLENGER_DATA) {
        let _ = row;
        let eta = beta[0] + beta[1] * xi;
        let p = 1.0 / (1.0 + (-eta).exp());
        let w = p * (1.0 - p);
        info += Matrix2::new(w, w * xi, w * xi, w * xi * xi);
    }
    let covariance = info.try_inverse().expect("information is invertible");
    let chol = nalgebra::linalg::Cholesky::new(covariance)
        .expect("MLE covariance is positive definite");
    let l = chol.l();
    MleFit {
        beta: [beta[0], beta[1]],
        covariance,
        cholesky_column: [l[(0, 0)], l[(1, 0)]],
    }
}
