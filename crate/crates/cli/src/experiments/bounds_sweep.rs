//! Acceptance-rate bound tables over a range of dimensions.

use std::path::Path;

use serde::{Deserialize, Serialize};

use tmcmc::bounds::{bound_sweep, BoundInput, BoundRow};

use crate::csvio::{fmt_f, CsvWriter};
use crate::{CliError, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsSpec {
    /// Displacement threshold c.
    pub distance: f64,
    /// Minimum per-coordinate proposal scale K.
    pub min_scale: f64,
    pub dims: Vec<usize>,
    pub hmc_step: Option<f64>,
    pub hmc_noncentrality: Option<f64>,
}

impl Default for BoundsSpec {
    fn default() -> Self {
        BoundsSpec {
            distance: 0.1,
            min_scale: 2.0,
            dims: vec![160],
            hmc_step: None,
            hmc_noncentrality: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub rows: Vec<BoundRow>,
}

pub fn run_bounds(spec: &BoundsSpec, out_dir: &Path) -> Result<BoundsReport> {
    let mut input =
        BoundInput::new(spec.distance, spec.min_scale, 1).map_err(CliError::Core)?;
    if let (Some(dt), Some(lambda)) = (spec.hmc_step, spec.hmc_noncentrality) {
        input = input.with_hmc(dt, lambda).map_err(CliError::Core)?;
    }
    let rows = bound_sweep(&spec.dims, &input).map_err(CliError::Core)?;

    std::fs::create_dir_all(out_dir)?;
    let mut w = CsvWriter::create(
        &out_dir.join("bounds.csv"),
        "dim,rwmh_bound,tmcmc_bound,hmc_bound,argument_ratio",
    )?;
    for row in &rows {
        w.row(&[
            row.dim.to_string(),
            fmt_f(row.rwmh),
            fmt_f(row.tmcmc),
            row.hmc.map(fmt_f).unwrap_or_default(),
            fmt_f(row.argument_ratio),
        ])?;
    }
    w.finish()?;
    Ok(BoundsReport { rows })
}
