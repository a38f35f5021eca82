use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use blaids::estimation::{required_samples, AlphabetSizes};
use blaids::harness::{self, records, summary};
use blaids::rd::{blahut_arimoto, BaConfig};
use blaids::Error;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "blaids", version, about = "Rate-distortion learning targets for Bayesian bandits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded multi-trial regret experiment and write per-period records.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's master seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output CSV; falls back to the config's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare Blahut-Arimoto targets with satisficing targets on prior samples.
    RdCompare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        betas: Vec<f64>,
        #[arg(long, value_delimiter = ',', required = true)]
        epsilons: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        /// Prior samples; defaults to the config's `z`.
        #[arg(long)]
        z: Option<usize>,
    },
    /// Solve one Blahut-Arimoto instance and print its rate and distortion.
    BaSolve {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        distortion: PathBuf,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Print the posterior sample count needed for an epsilon-accurate plug-in rate.
    Bounds {
        #[arg(long)]
        epsilon: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        dmin: f64,
        #[arg(long)]
        nenv: usize,
        #[arg(long)]
        ntarget: usize,
    },
    /// Mean cumulative regret with 95% intervals per agent and period.
    Summarize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_config_error() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}

fn stdout_io(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn execute(cmd: Command) -> blaids::Result<()> {
    match cmd {
        Command::Run { config, seed, out } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            let recs = harness::run_experiment(&cfg)?;
            match out.or(cfg.output_path) {
                Some(path) => harness::write_records(&recs, path),
                None => records::write_records_to(&recs, std::io::stdout().lock()).map_err(stdout_io),
            }
        }
        Command::RdCompare { config, betas, epsilons, out, z } => {
            let cfg = harness::load_config(&config)?;
            let z = z.unwrap_or(cfg.agent.z);
            let points = harness::compare_targets(&cfg.spec, &betas, &epsilons, z, cfg.master_seed, &cfg.agent.ba)?;
            harness::write_rd_points(&points, out)
        }
        Command::BaSolve { source, distortion, beta, max_iters, tol } => {
            let src = harness::read_source_csv(source)?;
            let d = harness::read_distortion_csv(distortion)?;
            let s = blahut_arimoto(&src, &d, beta, &BaConfig { max_iters, tol, init_marginal: None })?;
            let mut o = std::io::stdout().lock();
            writeln!(o, "rate_bits={}", s.rate).map_err(stdout_io)?;
            writeln!(o, "distortion={}", s.distortion).map_err(stdout_io)?;
            writeln!(o, "iterations={}", s.iterations).map_err(stdout_io)?;
            writeln!(o, "converged={}", s.converged).map_err(stdout_io)
        }
        Command::Bounds { epsilon, delta, dmin, nenv, ntarget } => {
            let z = required_samples(epsilon, delta, dmin, AlphabetSizes::new(nenv, ntarget)?)?;
            println!("{z}");
            Ok(())
        }
        Command::Summarize { input, out } => {
            let rows = summary::summarize(&harness::read_records(input)?);
            match out {
                Some(path) => {
                    let f = std::fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
                    summary::write_summary_to(&rows, std::io::BufWriter::new(f)).map_err(|e| Error::io(&path, e))
                }
                None => summary::write_summary_to(&rows, std::io::stdout().lock()).map_err(stdout_io),
            }
        }
    }
}
