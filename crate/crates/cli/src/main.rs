//! Command-line driver for the co-inversion experiments.
//!
//! Subcommands map one-to-one onto the pipeline phases: `simulate` writes a
//! measurement dataset, `locate` recovers sources, `coinvert` runs the full
//! locate/subtract/reconstruct chain, `obstacle-only` reconstructs with the
//! manifest's true sources, and `eigencount` certifies the auxiliary disk.
//!
//! Exit codes: 0 success, 2 validation error, 3 numerical failure.

use clap::{Args, Parser, Subcommand};
use coelast_core::eigenguard::count_n0;
use coelast_core::pipeline::{
    load_dataset, run_coinvert, run_locate, run_obstacle_only, run_simulate, DatasetManifest,
    ExperimentConfig, RunReport,
};
use coelast_core::{Error, Result};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "coelast", version, about = "Elastic source/obstacle co-inversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate noisy total-field measurements and write the dataset.
    Simulate(RunArgs),
    /// Recover source locations and polarizations from a dataset.
    Locate(RunArgs),
    /// Locate sources, subtract their fields, reconstruct the obstacle.
    Coinvert(RunArgs),
    /// Reconstruct the obstacle using the manifest's true sources.
    ObstacleOnly(RunArgs),
    /// Certify the auxiliary disk: interior-eigenvalue count and the zeros
    /// of the modal determinants below its radius.
    Eigencount(EigencountArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment configuration (JSON). Missing fields take the documented
    /// defaults; omit the flag entirely to run the default experiment.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for datasets, reports and plot CSVs.
    #[arg(long)]
    out: PathBuf,
    /// Override the configured noise seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Read an existing dataset from this directory instead of simulating
    /// one into `<out>/data`.
    #[arg(long)]
    data: Option<PathBuf>,
}

#[derive(Args)]
struct EigencountArgs {
    /// Experiment configuration (JSON); supplies the medium and the
    /// auxiliary-disk radius.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory for eigencount.json.
    #[arg(long)]
    out: PathBuf,
    /// Accepted for interface uniformity; the count is deterministic.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the disk radius from the config.
    #[arg(long)]
    radius: Option<f64>,
    /// Highest modal order scanned; it must come out zero-free.
    #[arg(long)]
    n_max: Option<u32>,
}

fn load_config(path: Option<&Path>, seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut config: ExperimentConfig = match path {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = seed {
        config.noise.seed = s;
    }
    config.validate()?;
    Ok(config)
}

/// Returns the dataset for an inversion run: loaded from `--data` when
/// given, otherwise simulated fresh into `<out>/data`.
fn obtain_dataset(
    args: &RunArgs,
) -> Result<(DatasetManifest, Vec<coelast_core::forward::FieldRecord>)> {
    if let Some(dir) = &args.data {
        let (manifest, records) = load_dataset(dir)?;
        return Ok((manifest, records));
    }
    let config = load_config(args.config.as_deref(), args.seed)?;
    let data_dir = args.out.join("data");
    run_simulate(&config, &data_dir)?;
    load_dataset(&data_dir)
}

fn summarize(report: &RunReport) {
    for (k, s) in report.sources.iter().enumerate() {
        println!(
            "source {k}: location ({:.4}, {:.4}) err {:.4}, angle {:.4} err {:.4}",
            s.estimated_location[0],
            s.estimated_location[1],
            s.location_error,
            s.estimated_angle,
            s.angle_error
        );
    }
    if let Some(e) = report.radial_l2_error {
        println!("radial L2 error {e:.4}");
    }
    if let Some(h) = report.hausdorff {
        println!("Hausdorff distance {h:.4}");
    }
    if let (Some(c), Some(n)) = (report.converged, report.iterations) {
        println!("iterations {n}, converged {c}");
    }
    for f in &report.failures {
        eprintln!("warning: {f}");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(args) => {
            let config = load_config(args.config.as_deref(), args.seed)?;
            let manifest = run_simulate(&config, &args.out)?;
            println!(
                "wrote {} record(s) and manifest.json to {}",
                manifest.records.len(),
                args.out.display()
            );
        }
        Command::Locate(args) => {
            let (manifest, records) = obtain_dataset(&args)?;
            let report = run_locate(&manifest, &records, Some(&args.out))?;
            summarize(&report);
        }
        Command::Coinvert(args) => {
            let (manifest, records) = obtain_dataset(&args)?;
            let report = run_coinvert(&manifest, &records, Some(&args.out))?;
            summarize(&report);
        }
        Command::ObstacleOnly(args) => {
            let (manifest, records) = obtain_dataset(&args)?;
            let report = run_obstacle_only(&manifest, &records, Some(&args.out))?;
            summarize(&report);
        }
        Command::Eigencount(args) => {
            let config = load_config(args.config.as_deref(), args.seed)?;
            let medium = config.medium()?;
            let radius = args.radius.unwrap_or(config.newton.aux_radius);
            // J_n(x) has no zeros below x = n, so this order bound is
            // conservative for both wavenumbers
            let n_max = args
                .n_max
                .unwrap_or_else(|| (medium.ks().max(medium.kp()) * radius).ceil() as u32 + 10);
            let result = count_n0(&medium, radius, n_max)?;
            let text = serde_json::to_string_pretty(&result)?;
            std::fs::create_dir_all(&args.out)?;
            std::fs::write(args.out.join("eigencount.json"), &text)?;
            println!("{text}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Solver(_) | Error::Truncation(_) => ExitCode::from(3),
                _ => ExitCode::from(2),
            }
        }
    }
}
