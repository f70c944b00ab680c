//! Spatial Poisson count model with a latent Gaussian process.
//!
//! Counts `Y_i ~ Poisson(t_i exp(b + s_i))` where `s` is a zero-mean
//! Gaussian process over the observation sites with isotropic covariance
//! `sigma^2 exp(-alpha ||z_1 - z_2||)`. Flat priors on
//! `(b, ln sigma^2, ln alpha)`. A chain state is the packed vector
//! `[b, ln sigma^2, ln alpha, s_1 .. s_n]`.

use std::io::{BufRead, BufReader, Read, Write};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::samplers::Target;
use crate::{Error, Result};

/// Diagonal jitter added before every Cholesky factorization.
const COVARIANCE_JITTER: f64 = 1e-10;

/// Observation sites, exposure durations, and observed counts.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoPoissonData {
    pub sites: Vec<[f64; 2]>,
    pub durations: Vec<f64>,
    pub counts: Vec<u64>,
}

impl GeoPoissonData {
    pub fn new(sites: Vec<[f64; 2]>, durations: Vec<f64>, counts: Vec<u64>) -> Result<Self> {
        if sites.is_empty() || sites.len() != durations.len() || sites.len() != counts.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} sites, {} durations, {} counts",
                sites.len(),
                durations.len(),
                counts.len()
            )));
        }
        if durations.iter().any(|t| !(*t > 0.0)) {
            return Err(Error::InvalidConfig("durations must be positive".into()));
        }
        Ok(GeoPoissonData {
            sites,
            durations,
            counts,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.sites.len()
    }

    /// Writes `site_x,site_y,duration,count` rows.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "site_x,site_y,duration,count")?;
        for i in 0..self.n_sites() {
            writeln!(
                w,
                "{},{},{},{}",
                self.sites[i][0], self.sites[i][1], self.durations[i], self.counts[i]
            )?;
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let reader = BufReader::new(r);
        let mut sites = Vec::new();
        let mut durations = Vec::new();
        let mut counts = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::InvalidConfig(format!("csv read: {e}")))?;
            if lineno == 0 {
                continue; // header
            }
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::InvalidConfig(format!(
                    "csv line {} has {} fields, expected 4",
                    lineno + 1,
                    fields.len()
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.trim()
                    .parse()
                    .map_err(|e| Error::InvalidConfig(format!("csv line {}: {e}", lineno + 1)))
            };
            sites.push([parse(fields[0])?, parse(fields[1])?]);
            durations.push(parse(fields[2])?);
            counts.push(parse(fields[3])? as u64);
        }
        GeoPoissonData::new(sites, durations, counts)
    }
}

/// Unpacked view of a chain state.
#[derive(Debug, Clone, PartialEq)]
pub struct GeoPoissonState {
    pub intercept: f64,
    pub log_sigma2: f64,
    pub log_alpha: f64,
    pub latent: Vec<f64>,
}

impl GeoPoissonState {
    pub fn pack(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(3 + self.latent.len());
        v.push(self.intercept);
        v.push(self.log_sigma2);
        v.push(self.log_alpha);
        v.extend_from_slice(&self.latent);
        v
    }

    pub fn unpack(packed: &[f64]) -> Result<Self> {
        if packed.len() < 4 {
            return Err(Error::DimensionMismatch(
                "packed geo state needs at least 4 entries".into(),
            ));
        }
        Ok(GeoPoissonState {
            intercept: packed[0],
            log_sigma2: packed[1],
            log_alpha: packed[2],
            latent: packed[3..].to_vec(),
        })
    }
}

/// Log-posterior evaluator over packed states.
#[derive(Debug, Clone)]
pub struct GeoPoissonPosterior {
    data: GeoPoissonData,
    distances: DMatrix<f64>,
}

impl GeoPoissonPosterior {
    pub fn new(data: GeoPoissonData) -> Self {
        let n = data.n_sites();
        let distances = DMatrix::from_fn(n, n, |i, j| {
            let dx = data.sites[i][0] - data.sites[j][0];
            let dy = data.sites[i][1] - data.sites[j][1];
            (dx * dx + dy * dy).sqrt()
        });
        GeoPoissonPosterior { data, distances }
    }

    pub fn data(&self) -> &GeoPoissonData {
        &self.data
    }

    pub fn log_density_state(&self, state: &GeoPoissonState) -> f64 {
        self.log_density(&state.pack())
    }
}

impl Target for GeoPoissonPosterior {
    fn dim(&self) -> usize {
        self.data.n_sites() + 3
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        let n = self.data.n_sites();
        let (intercept, log_sigma2, log_alpha) = (x[0], x[1], x[2]);
        let latent = &x[3..];

        let sigma2 = log_sigma2.exp();
        let alpha = log_alpha.exp();
        if !sigma2.is_finite() || !alpha.is_finite() || sigma2 == 0.0 {
            return f64::NEG_INFINITY;
        }

        // one Cholesky per evaluation; degenerate covariances reject
        let cov = DMatrix::from_fn(n, n, |i, j| {
            let base = sigma2 * (-alpha * self.distances[(i, j)]).exp();
            if i == j {
                base + COVARIANCE_JITTER
            } else {
                base
            }
        });
        let Some(chol) = nalgebra::linalg::Cholesky::new(cov) else {
            return f64::NEG_INFINITY;
        };
        let s = nalgebra::DVector::from_column_slice(latent);
        let quad = s.dot(&chol.solve(&s));
        let log_det = 2.0 * chol.l_dirty().diagonal().map(f64::ln).sum();

        let mut log_lik = 0.0;
        for i in 0..n {
            let mean_log = intercept + latent[i];
            let t = self.data.durations[i];
            log_lik += self.data.counts[i] as f64 * (t.ln() + mean_log) - t * mean_log.exp();
        }

        log_lik - 0.5 * quad - 0.5 * log_det
    }
}

/// Generative parameters for the synthetic data maker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoTrueParams {
    pub intercept: f64,
    pub sigma2: f64,
    pub alpha: f64,
    pub duration: f64,
}

impl Default for GeoTrueParams {
    fn default() -> Self {
        GeoTrueParams {
            intercept: 0.5,
            sigma2: 1.0,
            alpha: 0.1,
            duration: 100.0,
        }
    }
}

/// Draws sites on a jittered grid in the unit square, a latent field from
/// the Gaussian process, and Poisson counts. Deterministic given the seed.
pub fn make_synthetic_geo_data(
    n_sites: usize,
    params: &GeoTrueParams,
    seed: u64,
) -> Result<GeoPoissonData> {
    if n_sites == 0 {
        return Err(Error::InvalidConfig("need at least one site".into()));
    }
    if !(params.sigma2 > 0.0) || !(params.alpha > 0.0) || !(params.duration > 0.0) {
        return Err(Error::InvalidConfig(
            "sigma2, alpha, and duration must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = (n_sites as f64).sqrt().ceil() as usize;
    let mut sites = Vec::with_capacity(n_sites);
    'fill: for i in 0..cells {
        for j in 0..cells {
            if sites.len() == n_sites {
                break 'fill;
            }
            let jitter = 0.6 / cells as f64;
            let x = (i as f64 + 0.5) / cells as f64 + (rng.random::<f64>() - 0.5) * jitter;
            let y = (j as f64 + 0.5) / cells as f64 + (rng.random::<f64>() - 0.5) * jitter;
            sites.push([x, y]);
        }
    }

    let cov = DMatrix::from_fn(n_sites, n_sites, |i, j| {
        let dx = sites[i][0] - sites[j][0];
        let dy = sites[i][1] - sites[j][1];
        let d = (dx * dx + dy * dy).sqrt();
        let base = params.sigma2 * (-params.alpha * d).exp();
        if i == j {
            base + COVARIANCE_JITTER
        } else {
            base
        }
    });
    let chol = nalgebra::linalg::Cholesky::new(cov)
        .ok_or_else(|| Error::CholeskyFailure("synthetic covariance".into()))?;
    let z = nalgebra::DVector::from_fn(n_sites, |_, _| {
        let v: f64 = StandardNormal.sample(&mut rng);
        v
    });
    let latent = chol.l() * z;

    let mut counts = Vec::with_capacity(n_sites);
    for i in 0..n_sites {
        let rate = params.duration * (params.intercept + latent[i]).exp();
        let poisson = Poisson::new(rate)
            .map_err(|e| Error::InvalidConfig(format!("Poisson rate {rate}: {e}")))?;
        counts.push(poisson.sample(&mut rng) as u64);
    }

    GeoPoissonData::new(sites, vec![params.duration; n_sites], counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn single_site_reduces_to_poisson_plus_normal_prior() {
        let data = GeoPoissonData::new(vec![[0.2, 0.3]], vec![2.0], vec![3]).unwrap();
        let posterior = GeoPoissonPosterior::new(data);
        let state = GeoPoissonState {
            intercept: 0.4,
            log_sigma2: 0.3f64.ln(),
            log_alpha: 0.0,
            latent: vec![-0.2],
        };
        let got = posterior.log_density_state(&state);

        let sigma2 = 0.3 + COVARIANCE_JITTER;
        let s = -0.2f64;
        let mean_log: f64 = 0.4 + s;
        let expected = 3.0 * (2.0f64.ln() + mean_log) - 2.0 * mean_log.exp()
            - 0.5 * s * s / sigma2
            - 0.5 * sigma2.ln();
        assert_relative_eq!(got, expected, epsilon = 1e-12);
    }

    /// On an equilateral triangle the covariance is exactly equicorrelated,
    /// so both extremes of alpha can be checked against the closed-form
    /// inverse and determinant of sigma^2 [(1-rho) I + rho J].
    #[test]
    fn equicorrelated_closed_form_at_both_alpha_extremes() {
        let d = 0.4;
        let h = d * 3f64.sqrt() / 2.0;
        let sites = vec![[0.0, 0.0], [d, 0.0], [d / 2.0, h]];
        let data = GeoPoissonData::new(sites, vec![1.0; 3], vec![2, 0, 5]).unwrap();
        let posterior = GeoPoissonPosterior::new(data.clone());

        for log_alpha in [(1e-4f64).ln(), 40f64.ln()] {
            let sigma2: f64 = 0.7;
            let state = GeoPoissonState {
                intercept: 0.1,
                log_sigma2: sigma2.ln(),
                log_alpha,
                latent: vec![0.3, -0.5, 0.9],
            };
            let got = posterior.log_density_state(&state);

            let n = 3.0;
            let rho = (-log_alpha.exp() * d).exp();
            let s = &state.latent;
            let sum: f64 = s.iter().sum();
            let sum_sq: f64 = s.iter().map(|v| v * v).sum();
            // standard equicorrelation identities
            let quad = (sum_sq - rho * sum * sum / (1.0 + (n - 1.0) * rho))
                / (sigma2 * (1.0 - rho));
            let log_det = n * sigma2.ln()
                + (n - 1.0) * (1.0 - rho).ln()
                + (1.0 + (n - 1.0) * rho).ln();
            let mut log_lik = 0.0;
            for i in 0..3 {
                let m: f64 = 0.1 + s[i];
                log_lik += data.counts[i] as f64 * m - m.exp();
            }
            let expected = log_lik - 0.5 * quad - 0.5 * log_det;
            assert_relative_eq!(got, expected, epsilon = 2e-4, max_relative = 1e-5);
        }
    }

    #[test]
    fn degenerate_hyperparameters_reject_rather_than_nan() {
        let data = make_synthetic_geo_data(4, &GeoTrueParams::default(), 3).unwrap();
        let posterior = GeoPoissonPosterior::new(data);
        let mut packed = GeoPoissonState {
            intercept: 0.0,
            log_sigma2: 800.0, // exp overflows
            log_alpha: 0.0,
            latent: vec![0.1; 4],
        }
        .pack();
        assert_eq!(posterior.log_density(&packed), f64::NEG_INFINITY);
        packed[1] = -800.0; // sigma2 underflows to 0
        assert_eq!(posterior.log_density(&packed), f64::NEG_INFINITY);
        assert!(!posterior.log_density(&packed).is_nan());
    }

    #[test]
    fn synthetic_data_is_deterministic_given_seed() {
        let params = GeoTrueParams::default();
        let a = make_synthetic_geo_data(12, &params, 42).unwrap();
        let b = make_synthetic_geo_data(12, &params, 42).unwrap();
        assert_eq!(a, b);
        let c = make_synthetic_geo_data(12, &params, 43).unwrap();
        assert_ne!(a, c);
        assert!(a.sites.iter().all(|s| (0.0..1.0).contains(&s[0])));
    }

    #[test]
    fn count_mean_matches_the_lognormal_mixture_moment() {
        let params = GeoTrueParams {
            intercept: 0.3,
            sigma2: 0.5,
            alpha: 1.0,
            duration: 2.0,
        };
        let n_rep = 10_000;
        let mut total = 0u64;
        for seed in 0..n_rep {
            let data = make_synthetic_geo_data(1, &params, seed).unwrap();
            total += data.counts[0];
        }
        let mean = total as f64 / n_rep as f64;
        let expected = params.duration * (params.intercept + params.sigma2 / 2.0).exp();
        // 4 Monte Carlo standard errors of the mixture
        assert!(
            (mean - expected).abs() < 0.15,
            "mean {mean} vs expected {expected}"
        );
    }

    #[test]
    fn csv_round_trip() {
        let data = make_synthetic_geo_data(7, &GeoTrueParams::default(), 9).unwrap();
        let mut buf = Vec::new();
        data.write_csv(&mut buf).unwrap();
        let back = GeoPoissonData::read_csv(buf.as_slice()).unwrap();
        assert_eq!(data, back);
    }
}
