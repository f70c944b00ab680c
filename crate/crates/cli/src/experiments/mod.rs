//! The experiment suite: specs, dispatch, and the output manifest.

mod bounds_sweep;
mod bridge;
mod challenger;
mod discrete_check;
mod gaussian_bench;
mod geo;

pub use bounds_sweep::{run_bounds, BoundsReport, BoundsSpec};
pub use bridge::{run_bridge, BridgeReport, BridgeSpec};
pub use challenger::{
    run_challenger, ChallengerReport, ChallengerSpec, SamplerChoice, SamplerResult,
};
pub use discrete_check::{run_discrete_check, DiscreteCheck, DiscreteCheckSpec, DiscreteReport};
pub use gaussian_bench::{run_gaussian_bench, GaussianBenchReport, GaussianBenchSpec};
pub use geo::{run_geo, GeoReport, GeoSizeResult, GeoSpec};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::Result;

/// Any experiment the driver can run, as recorded in manifests.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentSpec {
    Challenger(ChallengerSpec),
    Geo(GeoSpec),
    Bridge(BridgeSpec),
    Bounds(BoundsSpec),
    DiscreteCheck(DiscreteCheckSpec),
    GaussianBench(GaussianBenchSpec),
}

impl ExperimentSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentSpec::Challenger(_) => "challenger",
            ExperimentSpec::Geo(_) => "geo",
            ExperimentSpec::Bridge(_) => "bridge",
            ExperimentSpec::Bounds(_) => "bounds",
            ExperimentSpec::DiscreteCheck(_) => "discrete-check",
            ExperimentSpec::GaussianBench(_) => "gaussian-bench",
        }
    }
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub version: String,
    pub spec: ExperimentSpec,
}

impl Manifest {
    pub fn new(spec: ExperimentSpec) -> Self {
        Manifest {
            version: env!("CARGO_PKG_VERSION").to_string(),
            spec,
        }
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        std::fs::create_dir_all(out_dir)?;
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(out_dir.join("manifest.json"), json + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Manifest> {
        let raw = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&raw)?)
    }
}

/// Runs any experiment, writing its outputs and manifest under `out_dir`.
pub fn run_experiment(spec: &ExperimentSpec, out_dir: &Path) -> Result<()> {
    std::fs::create_dir_all(out_dir)?;
    Manifest::new(spec.clone()).write(out_dir)?;
    match spec {
        ExperimentSpec::Challenger(s) => run_challenger(s, out_dir).map(drop),
        ExperimentSpec::Geo(s) => run_geo(s, out_dir).map(drop),
        ExperimentSpec::Bridge(s) => run_bridge(s, out_dir).map(drop),
        ExperimentSpec::Bounds(s) => run_bounds(s, out_dir).map(drop),
        ExperimentSpec::DiscreteCheck(s) => run_discrete_check(s, out_dir).map(drop),
        ExperimentSpec::GaussianBench(s) => run_gaussian_bench(s, out_dir).map(drop),
    }
}
