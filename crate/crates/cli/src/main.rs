use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use vmcascade::commands::{self, CheckFailed, OracleCheckOptions, Report};
use vmcascade::config::{Invalid, RunConfig};

/// Rate regions of cascade source coding with cost-constrained side
/// information.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the region bounds of the channels or grid points in a config.
    Eval {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize the weighted rate objective of a config.
    Optimize {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Greedy-minus-optimal sum-rate gain over the weight axis.
    Fig6 {
        /// Switching config; the S-channel example when absent.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Check a Fourier-Motzkin projection against its stated region.
    FmeCheck {
        /// `prop2`, `prop3`, `prop2-mutated` or a problem file.
        #[arg(default_value = "prop2")]
        problem: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Randomized cross-validation of evaluators, closed forms and optimizers.
    OracleCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[arg(long, default_value_t = 3)]
        max_size: usize,
        #[command(flatten)]
        common: Common,
    },
}

fn load(path: &Path, seed: Option<u64>) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report(r: Report, out: Option<&Path>) -> Result<()> {
    emit(&r.text, out)?;
    if r.passed {
        Ok(())
    } else {
        Err(CheckFailed.into())
    }
}

fn threads() -> Result<()> {
    if let Ok(v) = std::env::var("VMCASCADE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| Invalid(format!("VMCASCADE_THREADS={v} is not a count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    threads()?;
    match cli.command {
        Command::Eval { config, common } => {
            let cfg = load(&config, common.seed)?;
            let out = common.out.or(cfg.out.clone());
            emit(&commands::cmd_eval(&cfg)?, out.as_deref())
        }
        Command::Optimize { config, common } => {
            let cfg = load(&config, common.seed)?;
            let out = common.out.or(cfg.out.clone());
            emit(&commands::cmd_optimize(&cfg)?, out.as_deref())
        }
        Command::Fig6 { config, common } => {
            let mut cfg = match config {
                Some(p) => RunConfig::load(&p)?,
                None => commands::fig6_default_config(),
            };
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            let out = common.out.or(cfg.out.clone());
            emit(&commands::cmd_fig6(&cfg)?, out.as_deref())
        }
        Command::FmeCheck { problem, trials, common } => {
            let r = commands::cmd_fme_check(&problem, trials, common.seed.unwrap_or(0))?;
            report(r, common.out.as_deref())
        }
        Command::OracleCheck {
            trials,
            tolerance,
            max_size,
            common,
        } => {
            let opts = OracleCheckOptions {
                trials,
                seed: common.seed.unwrap_or(0),
                tolerance,
                max_size,
            };
            report(commands::cmd_oracle_check(&opts)?, common.out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<CheckFailed>().is_none() {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(vmcascade::exit_code(&e) as u8)
        }
    }
}
