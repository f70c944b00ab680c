//! Exact finite-kernel verification of the discrete chains: stationarity,
//! detailed balance, and the parity obstruction of joint-only lattice
//! moves.

use std::path::Path;

use serde::{Deserialize, Serialize};

use tmcmc::discrete::{
    build_exact_lattice_kernel, build_exact_sign_kernel, DiscreteEps, LatticeState,
};
use tmcmc::moves::MoveProbabilities;

use crate::csvio::{fmt_f, CsvWriter};
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiscreteCheckSpec {
    /// Pairwise coupling of the two-spin weight exp(J s1 s2).
    pub ising_coupling: f64,
    /// Decay of the truncated geometric lattice target theta^(|v1|+|v2|).
    pub geometric_theta: f64,
    /// The lattice box is [-half_width, half_width]^2.
    pub box_half_width: i64,
    /// Probability of the single-coordinate lattice branch.
    pub single_site_prob: f64,
}

impl Default for DiscreteCheckSpec {
    fn default() -> Self {
        DiscreteCheckSpec {
            ising_coupling: 0.5,
            geometric_theta: 0.5,
            box_half_width: 4,
            single_site_prob: 0.3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteCheck {
    pub name: &'static str,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl DiscreteCheck {
    fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        DiscreteCheck {
            name,
            value,
            threshold,
            pass: value <= threshold,
        }
    }

    fn positive(name: &'static str, value: f64) -> Self {
        DiscreteCheck {
            name,
            value,
            threshold: 0.0,
            pass: value > 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiscreteReport {
    pub checks: Vec<DiscreteCheck>,
}

impl DiscreteReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&DiscreteCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run_discrete_check(spec: &DiscreteCheckSpec, out_dir: &Path) -> Result<DiscreteReport> {
    if !(0.0..=1.0).contains(&spec.single_site_prob) || spec.single_site_prob == 0.0 {
        return Err(CliError::InvalidArgs(
            "single-site probability must be in (0, 1]".into(),
        ));
    }
    if !(spec.geometric_theta > 0.0 && spec.geometric_theta < 1.0) {
        return Err(CliError::InvalidArgs(
            "geometric decay must lie in (0, 1)".into(),
        ));
    }
    let mut checks = Vec::new();

    // two-spin chain with pairwise coupling
    let coupling = spec.ising_coupling;
    let sign_weight = move |s: &[i8]| coupling * f64::from(s[0]) * f64::from(s[1]);
    let probs = MoveProbabilities::symmetric(2);
    let sign = build_exact_sign_kernel(2, sign_weight, &probs).map_err(CliError::Core)?;
    let sign_lw: Vec<f64> = sign.states.iter().map(|s| sign_weight(s.signs())).collect();
    checks.push(DiscreteCheck::at_most(
        "sign_row_sum_error",
        sign.max_row_sum_error(),
        1e-14,
    ));
    checks.push(DiscreteCheck::at_most(
        "sign_stationarity_gap",
        sign.stationarity_gap(&sign_lw),
        1e-12,
    ));
    checks.push(DiscreteCheck::at_most(
        "sign_detailed_balance_gap",
        sign.detailed_balance_gap(&sign_lw),
        1e-12,
    ));

    // truncated geometric lattice chain
    let theta = spec.geometric_theta;
    let lattice_weight =
        move |v: &[i64]| theta.ln() * v.iter().map(|c| c.abs()).sum::<i64>() as f64;
    let eps = DiscreteEps::unit_step();
    let lattice = build_exact_lattice_kernel(
        -spec.box_half_width,
        spec.box_half_width,
        2,
        lattice_weight,
        spec.single_site_prob,
        &probs,
        &eps,
    )
    .map_err(CliError::Core)?;
    let lattice_lw: Vec<f64> = lattice
        .states
        .iter()
        .map(|s| lattice_weight(&s.0))
        .collect();
    checks.push(DiscreteCheck::at_most(
        "lattice_row_sum_error",
        lattice.max_row_sum_error(),
        1e-14,
    ));
    checks.push(DiscreteCheck::at_most(
        "lattice_stationarity_gap",
        lattice.stationarity_gap(&lattice_lw),
        1e-12,
    ));
    checks.push(DiscreteCheck::at_most(
        "lattice_detailed_balance_gap",
        lattice.detailed_balance_gap(&lattice_lw),
        1e-12,
    ));

    // joint-only moves cannot change the parity of v1 - v2, so two-step
    // mass on same-parity states from (1, 2) must be exactly zero
    let joint_only = build_exact_lattice_kernel(
        -spec.box_half_width,
        spec.box_half_width,
        2,
        |_| 0.0,
        0.0,
        &probs,
        &eps,
    )
    .map_err(CliError::Core)?;
    let two = joint_only.two_step();
    let from = joint_only
        .state_index(&LatticeState(vec![1, 2]))
        .ok_or_else(|| CliError::InvalidArgs("box too small for the parity check".into()))?;
    let leak: f64 = joint_only
        .states
        .iter()
        .enumerate()
        .filter(|(_, s)| (s.0[0] - s.0[1]).rem_euclid(2) == 0)
        .map(|(j, _)| two[(from, j)])
        .fold(0.0, f64::max);
    checks.push(DiscreteCheck::at_most(
        "parity_leak_without_single_site",
        leak,
        0.0,
    ));

    // with the single-site branch, a small box is fully reachable in two
    // steps from the center
    let small = build_exact_lattice_kernel(
        -2,
        2,
        2,
        lattice_weight,
        spec.single_site_prob,
        &probs,
        &eps,
    )
    .map_err(CliError::Core)?;
    let two = small.two_step();
    let center = small.state_index(&LatticeState(vec![0, 0])).expect("center");
    let min_entry = (0..small.n_states())
        .map(|j| two[(center, j)])
        .fold(f64::INFINITY, f64::min);
    checks.push(DiscreteCheck::positive(
        "min_two_step_mass_with_single_site",
        min_entry,
    ));

    std::fs::create_dir_all(out_dir)?;
    let mut w = CsvWriter::create(
        &out_dir.join("discrete_checks.csv"),
        "check,value,threshold,pass",
    )?;
    for c in &checks {
        w.row(&[
            c.name.to_string(),
            fmt_f(c.value),
            fmt_f(c.threshold),
            c.pass.to_string(),
        ])?;
    }
    w.finish()?;

    Ok(DiscreteReport { checks })
}
