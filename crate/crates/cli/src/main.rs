use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use drmcmo::harness::{emit_front, front_csv, CampaignConfig, RunRecord, RECORDS_DIR};
use drmcmo::operators::OperatorKind;
use drmcmo::{build_problem, run, run_campaign, sample_reference_front, summarize_dir};
use drmcmo::{AlgorithmConfig, ProblemOptions, Variant};

#[derive(Parser)]
#[command(
    name = "drmcmo",
    version,
    about = "Detection-region CMOEA for binary constraints"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a campaign file, or a single configuration.
    Run(RunArgs),
    /// Recompute summary tables from the records in an output directory.
    Summarize {
        #[arg(long)]
        dir: PathBuf,
        /// Column to test the others against, e.g. `full-ga`.
        #[arg(long)]
        baseline: Option<String>,
    },
    /// Write the final feasible archive of a record as CSV.
    Front {
        #[arg(long)]
        record: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct RunArgs {
    /// TOML campaign file.
    #[arg(long, conflicts_with_all = ["problem", "variant", "seed"])]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long, default_value = "full")]
    variant: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "ga")]
    operator: String,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 100_000)]
    max_fe: usize,
    /// Decision-space dimension override.
    #[arg(long)]
    dim: Option<usize>,
    /// Reference front CSV; analytic fronts are used when available.
    #[arg(long)]
    front: Option<PathBuf>,
    /// Output directory for the record; printed to stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run(args) => run_cmd(args),
        Command::Summarize { dir, baseline } => {
            let summary = summarize_dir(&dir, baseline.as_deref())?;
            print!("{}", summary.to_text());
            Ok(())
        }
        Command::Front { record, out } => {
            let rec = RunRecord::load(&record)?;
            match out {
                Some(path) => emit_front(&rec, &path)?,
                None => print!("{}", front_csv(&rec)),
            }
            Ok(())
        }
    }
}

fn run_cmd(args: RunArgs) -> Result<()> {
    if let Some(path) = args.config {
        let config = CampaignConfig::load(&path)?;
        log::info!(
            "{} runs into {}",
            config.run_count(),
            config.output_dir.display()
        );
        let outcome = run_campaign(&config)?;
        print!("{}", outcome.summary.to_text());
        if !outcome.failures.is_empty() {
            bail!(
                "{} of {} runs failed",
                outcome.failures.len(),
                config.run_count()
            );
        }
        return Ok(());
    }
    let Some(name) = args.problem else {
        bail!("either --config or --problem is required");
    };
    let options = ProblemOptions {
        dim: args.dim,
        ..Default::default()
    };
    let problem = build_problem(&name, &options)?;
    let front = match sample_reference_front(problem.as_ref(), 1000, args.front.as_deref()) {
        Ok(f) => Some(f),
        Err(drmcmo::Error::Config(msg)) => {
            log::warn!("metrics disabled: {msg}");
            None
        }
        Err(e) => return Err(e.into()),
    };
    let config = AlgorithmConfig {
        population_size: args.n,
        max_fe: args.max_fe,
        variant: args.variant.parse::<Variant>()?,
        operator: args.operator.parse::<OperatorKind>()?,
        seed: args.seed,
        ..Default::default()
    };
    let out = run(problem.as_ref(), &config, front.as_ref())?;
    log::info!(
        "{name} {} seed {}: IGD {:?}, HV {:?}, {} archived, {:.2}s",
        out.record.algorithm(),
        args.seed,
        out.record.final_igd,
        out.record.final_hv,
        out.record.archive.len(),
        out.record.wall_time_secs
    );
    match args.out {
        Some(dir) => {
            let dir = dir.join(RECORDS_DIR);
            std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join(out.record.file_name());
            std::fs::write(&path, out.record.to_json())
                .with_context(|| format!("writing {}", path.display()))?;
            println!("{}", path.display());
        }
        None => println!("{}", out.record.to_json()),
    }
    Ok(())
}
