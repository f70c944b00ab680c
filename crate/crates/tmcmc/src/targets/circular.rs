//! The circular model `h(y | nu) = exp(cos(y + nu sin y)) / Z(nu)` on
//! `(-pi, pi]`, whose normalizer `Z` has no closed form.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Reduces an angle modulo 2*pi into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    if a > -PI && a <= PI {
        return a; // already reduced; avoids rounding a representable angle
    }
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Log of the unnormalized density: `cos(y + nu * sin y)`.
pub fn circular_unnorm_log_f(y: f64, nu: f64) -> f64 {
    (y + nu * y.sin()).cos()
}

/// `ln integral_{-pi}^{pi} exp(cos(y + nu sin y)) dy`.
///
/// The integrand is smooth and 2*pi-periodic, where the uniform midpoint
/// rule converges geometrically, so the grid is doubled adaptively until
/// two successive levels agree to 1e-12 absolute. Only validation oracles
/// and reporting use this; exchange sampling never evaluates Z.
pub fn circular_log_z(nu: f64) -> Result<f64> {
    let mut n = 32usize;
    let mut prev = midpoint_rule(nu, n);
    for _ in 0..20 {
        n *= 2;
        let next = midpoint_rule(nu, n);
        if (next - prev).abs() < 1e-12 {
            return Ok(next.ln());
        }
        prev = next;
    }
    Err(Error::QuadratureNonConvergence)
}

fn midpoint_rule(nu: f64, n: usize) -> f64 {
    let h = 2.0 * PI / n as f64;
    (0..n)
        .map(|i| {
            let y = -PI + (i as f64 + 0.5) * h;
            circular_unnorm_log_f(y, nu).exp()
        })
        .sum::<f64>()
        * h
}

/// Angles wrapped into `(-pi, pi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircularSample(Vec<f64>);

impl CircularSample {
    pub fn new(angles: Vec<f64>) -> Self {
        CircularSample(angles.into_iter().map(wrap_angle).collect())
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wrap_convention_is_half_open_at_minus_pi() {
        assert_relative_eq!(wrap_angle(3.5), 3.5 - 2.0 * PI, epsilon = 1e-12);
        assert_eq!(wrap_angle(PI), PI);
        assert_eq!(wrap_angle(-PI), PI);
        for a in [-7.3, -0.1, 0.0, 2.9, 15.0] {
            assert_eq!(wrap_angle(wrap_angle(a)), wrap_angle(a));
            assert!(wrap_angle(a) > -PI && wrap_angle(a) <= PI);
        }
    }

    #[test]
    fn unnorm_log_f_fixed_points() {
        assert_eq!(circular_unnorm_log_f(0.0, 1.7), 1.0);
        assert_relative_eq!(circular_unnorm_log_f(PI, -0.4), -1.0, epsilon = 1e-12);
    }

    /// `y + nu sin y` is odd in `y`, so the density is even in `y` for
    /// every fixed `nu`.
    #[test]
    fn log_f_is_even_in_the_angle() {
        for i in 0..50 {
            let y = -PI + 2.0 * PI * (i as f64 + 0.5) / 50.0;
            for j in 0..10 {
                let nu = -PI + 2.0 * PI * (j as f64 + 0.5) / 10.0;
                assert_relative_eq!(
                    circular_unnorm_log_f(y, nu),
                    circular_unnorm_log_f(-y, nu),
                    epsilon = 1e-12
                );
            }
        }
    }

    #[test]
    fn normalizer_at_zero_is_the_von_mises_constant() {
        // Z(0) = 2 pi I_0(1); I_0(1) by its power series
        let i0: f64 = (0..20)
            .map(|j| {
                let fact: f64 = (1..=j).map(|v| v as f64).product();
                0.25f64.powi(j) / (fact * fact)
            })
            .sum();
        let expected = (2.0 * PI * i0).ln();
        assert_relative_eq!(circular_log_z(0.0).unwrap(), expected, epsilon = 1e-10);
    }

    #[test]
    fn normalizer_stays_within_the_integrand_bounds() {
        // e^-1 <= exp(cos .) <= e pins Z into [2 pi / e, 2 pi e]
        for nu in [-2.5, -0.3, 0.3, 1.1, 2.5, PI] {
            let a = circular_log_z(nu).unwrap();
            assert!(a >= (2.0 * PI / std::f64::consts::E).ln());
            assert!(a <= (2.0 * PI * std::f64::consts::E).ln());
        }
    }
}
