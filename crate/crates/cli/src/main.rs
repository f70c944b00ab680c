use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tmcmc::samplers::Schedule;
use tmcmc_cli::experiments::{
    run_experiment, BoundsSpec, BridgeSpec, ChallengerSpec, DiscreteCheckSpec, ExperimentSpec,
    GaussianBenchSpec, GeoSpec, Manifest, SamplerChoice,
};
use tmcmc_cli::CliError;

/// Transformation-based MCMC experiment driver.
///
/// Every run writes CSV outputs plus a manifest.json into the output
/// directory; `tmcmc rerun --manifest <path>` reproduces a run byte for
/// byte.
#[derive(Parser)]
#[command(name = "tmcmc", version, about)]
struct Cli {
    /// Output directory (falls back to $TMCMC_OUT_DIR, then ./tmcmc-out).
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ScheduleArgs {
    /// Total iterations.
    #[arg(long, default_value_t = 100_000)]
    n: usize,
    /// Iterations discarded before counting and storing.
    #[arg(long, default_value_t = 20_000)]
    burn_in: usize,
    /// Keep one stored draw per this many post-burn-in iterations.
    #[arg(long, default_value_t = 1)]
    thin: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

impl ScheduleArgs {
    fn schedule(&self) -> Schedule {
        Schedule {
            iterations: self.n,
            burn_in: self.burn_in,
            thin: self.thin,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// O-ring logit posterior: TMCMC vs sequential RWMH vs block MH.
    Challenger {
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Comma-separated subset of tmcmc,rwmh,mh.
        #[arg(long, value_delimiter = ',', default_value = "tmcmc,rwmh,mh")]
        samplers: Vec<SamplerChoice>,
        /// Proposal sd of the sequential random walk.
        #[arg(long, default_value_t = 1.5)]
        seq_scale: f64,
        /// Scale h of the block proposal N(beta, h^2 C).
        #[arg(long, default_value_t = 1.5)]
        mh_scale: f64,
    },
    /// Spatial Poisson model: TMCMC vs joint RWMH acceptance across sizes.
    Geo {
        #[command(flatten)]
        schedule: ScheduleArgs,
        /// Comma-separated site counts.
        #[arg(long, value_delimiter = ',', default_value = "20,50")]
        n_sites: Vec<usize>,
        /// Multiplier on the base scales (2, 5, 5, 2...).
        #[arg(long, default_value_t = 0.04)]
        scale_factor: f64,
        #[arg(long, default_value_t = 100)]
        data_seed: u64,
        /// Synthetic datasets pooled per size.
        #[arg(long, default_value_t = 3)]
        replicates: usize,
        #[arg(long, default_value_t = 0.5)]
        intercept: f64,
        #[arg(long, default_value_t = 1.0)]
        sigma2: f64,
        #[arg(long, default_value_t = 0.1)]
        alpha: f64,
        #[arg(long, default_value_t = 100.0)]
        duration: f64,
    },
    /// Bridge-exchange sampling of the circular model.
    Bridge {
        #[arg(long, default_value_t = 60_000)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        burn_in: usize,
        #[arg(long, default_value_t = 2)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        n_data: usize,
        /// Number of bridge levels M.
        #[arg(long, short = 'm', default_value_t = 100)]
        bridge_size: usize,
        /// Von Mises concentration of the parameter proposal.
        #[arg(long, default_value_t = 0.5)]
        kappa: f64,
        /// Parameter the synthetic data are drawn from.
        #[arg(long, default_value_t = 0.0)]
        true_nu: f64,
        #[arg(long, default_value_t = 16)]
        data_seed: u64,
        #[arg(long, default_value_t = 36)]
        bins: usize,
    },
    /// Closed-form acceptance-rate bound tables.
    Bounds {
        /// Displacement threshold c.
        #[arg(long, short = 'c', default_value_t = 0.1)]
        c: f64,
        /// Minimum per-coordinate proposal scale K.
        #[arg(long, short = 'k', default_value_t = 2.0)]
        big_k: f64,
        /// Comma-separated dimensions.
        #[arg(long, value_delimiter = ',', default_value = "160")]
        dims: Vec<usize>,
        #[arg(long)]
        hmc_step: Option<f64>,
        #[arg(long)]
        hmc_noncentrality: Option<f64>,
    },
    /// Exact stationarity and reachability checks of the discrete chains.
    DiscreteCheck {
        #[arg(long, default_value_t = 0.5)]
        ising_coupling: f64,
        #[arg(long, default_value_t = 0.5)]
        geometric_theta: f64,
        #[arg(long, default_value_t = 4)]
        box_half_width: i64,
        /// Probability of the single-coordinate lattice branch.
        #[arg(long, default_value_t = 0.3)]
        single_site_prob: f64,
    },
    /// Sampler comparison on a spherical Gaussian.
    GaussianBench {
        #[command(flatten)]
        schedule: ScheduleArgs,
        #[arg(long, default_value_t = 10)]
        dim: usize,
        #[arg(long, default_value_t = 0.5)]
        proposal_scale: f64,
        #[arg(long, default_value_t = 0.1)]
        hmc_step: f64,
        #[arg(long, default_value_t = 10)]
        hmc_leapfrog_steps: usize,
    },
    /// Re-run the experiment recorded in a manifest.
    Rerun {
        #[arg(long)]
        manifest: PathBuf,
    },
}

fn spec_from_command(command: Command) -> Result<ExperimentSpec, CliError> {
    Ok(match command {
        Command::Challenger {
            schedule,
            samplers,
            seq_scale,
            mh_scale,
        } => ExperimentSpec::Challenger(ChallengerSpec {
            schedule: schedule.schedule(),
            samplers,
            seq_proposal_scale: seq_scale,
            mh_proposal_scale: mh_scale,
        }),
        Command::Geo {
            schedule,
            n_sites,
            scale_factor,
            data_seed,
            replicates,
            intercept,
            sigma2,
            alpha,
            duration,
        } => ExperimentSpec::Geo(GeoSpec {
            schedule: schedule.schedule(),
            sizes: n_sites,
            scale_factor,
            data_seed,
            replicates,
            intercept,
            sigma2,
            alpha,
            duration,
        }),
        Command::Bridge {
            n,
            burn_in,
            seed,
            n_data,
            bridge_size,
            kappa,
            true_nu,
            data_seed,
            bins,
        } => ExperimentSpec::Bridge(BridgeSpec {
            iterations: n,
            burn_in,
            seed,
            n_data,
            bridge_size,
            kappa,
            true_nu,
            data_seed,
            bins,
        }),
        Command::Bounds {
            c,
            big_k,
            dims,
            hmc_step,
            hmc_noncentrality,
        } => ExperimentSpec::Bounds(BoundsSpec {
            distance: c,
            min_scale: big_k,
            dims,
            hmc_step,
            hmc_noncentrality,
        }),
        Command::DiscreteCheck {
            ising_coupling,
            geometric_theta,
            box_half_width,
            single_site_prob,
        } => ExperimentSpec::DiscreteCheck(DiscreteCheckSpec {
            ising_coupling,
            geometric_theta,
            box_half_width,
            single_site_prob,
        }),
        Command::GaussianBench {
            schedule,
            dim,
            proposal_scale,
            hmc_step,
            hmc_leapfrog_steps,
        } => ExperimentSpec::GaussianBench(GaussianBenchSpec {
            dim,
            schedule: schedule.schedule(),
            proposal_scale,
            hmc_step,
            hmc_leapfrog_steps,
        }),
        Command::Rerun { manifest } => Manifest::read(&manifest)?.spec,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are not errors
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    let out_dir = cli
        .out
        .or_else(|| std::env::var_os("TMCMC_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("tmcmc-out"));

    let spec = match spec_from_command(cli.command) {
        Ok(spec) => spec,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    match run_experiment(&spec, &out_dir) {
        Ok(()) => {
            println!("{} -> {}", spec.name(), out_dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
