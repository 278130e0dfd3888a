use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use clustercut::commands::{cmd_calibrate, cmd_direct, cmd_reconstruct, cmd_run_jobs, cmd_scaling};
use clustercut::config::Mode;
use clustercut::{CliResult, ExperimentConfig};

#[derive(Parser)]
#[command(name = "clustercut", version, about = "Wire-cut linear-cluster experiments: run jobs, reconstruct, compare, sweep")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the 48-job grid and write a job bundle.
    RunJobs(Common),
    /// Stitch a bundle into 12-qubit witness terms, distributions and the scaling table.
    Reconstruct(BundleArgs),
    /// Simulate the full n-qubit cluster state directly for comparison.
    Direct {
        #[command(flatten)]
        common: Common,
        /// Chain length.
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Write readout calibration counts and transition matrices.
    Calibrate(Common),
    /// Scaling sweep only (reconstruct with the k sweep).
    Scaling(BundleArgs),
}

#[derive(Args)]
struct Common {
    /// JSON experiment configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Shots per job; implies sampled mode unless --exact is given.
    #[arg(long)]
    shots: Option<u64>,
    /// Exact distributions instead of sampled counts.
    #[arg(long)]
    exact: bool,
}

#[derive(Args)]
struct BundleArgs {
    #[command(flatten)]
    common: Common,
    /// Job bundle directory (defaults to the config's `out`).
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// Sweep n = 9, 12, ..., 6 + 3 k_max.
    #[arg(long)]
    k_max: Option<usize>,
}

fn resolve(common: &Common, fallback: Option<&Path>) -> CliResult<ExperimentConfig> {
    let mut cfg = match (&common.config, fallback) {
        (Some(p), _) => ExperimentConfig::load(p)?,
        (None, Some(p)) if p.exists() => ExperimentConfig::load(p)?,
        _ => ExperimentConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    if let Some(shots) = common.shots {
        cfg.shots = shots;
        cfg.mode = Mode::Sampled;
    }
    if common.exact {
        cfg.mode = Mode::Exact;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Bundle commands read the bundle's own `config.json` unless `--config` is given;
/// reports go to `--out`, else `<bundle>/reports`.
fn resolve_bundle(args: &BundleArgs) -> CliResult<(ExperimentConfig, PathBuf, PathBuf, usize)> {
    let bundle = args.bundle.clone().or_else(|| args.common.out.clone());
    let probe = bundle.as_ref().map(|b| b.join("config.json"));
    let mut cfg = resolve(&args.common, probe.as_deref())?;
    let bundle = args.bundle.clone().unwrap_or_else(|| cfg.out.clone());
    let out = args.common.out.clone().unwrap_or_else(|| bundle.join("reports"));
    if let Some(k) = args.k_max {
        cfg.k_max = k;
    }
    cfg.out = out.clone();
    let k = cfg.k_max;
    Ok((cfg, bundle, out, k))
}

fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    Ok(match cli.command {
        Command::RunJobs(c) => cmd_run_jobs(&resolve(&c, None)?)?.files,
        Command::Calibrate(c) => cmd_calibrate(&resolve(&c, None)?)?.files,
        Command::Direct { common, n } => {
            let cfg = resolve(&common, None)?;
            cmd_direct(&cfg, n, &cfg.out)?.files
        }
        Command::Reconstruct(args) => {
            let (cfg, bundle, out, k) = resolve_bundle(&args)?;
            let r = cmd_reconstruct(&cfg, &bundle, &out, k)?;
            eprintln!(
                "stitched n=12 bound {:.6} ± {:.6}; block LC4 bound {:.6}",
                r.summary.stitched_n12.bound, r.summary.stitched_n12.bound_stddev, r.summary.block_lc4.bound
            );
            r.files
        }
        Command::Scaling(args) => {
            let (cfg, bundle, out, k) = resolve_bundle(&args)?;
            let r = cmd_scaling(&cfg, &bundle, &out, k)?;
            for row in &r.scaling {
                eprintln!("n={:>2} bound {:.6} ({} terms, {:.1} ms)", row.n, row.bound, row.n_terms, row.time_ms);
            }
            r.files
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(files) => {
            for f in files {
                println!("{}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
