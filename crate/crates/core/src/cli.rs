//! Command-line front end.
//!
//! Exit codes: 0 success, 1 runtime or I/O error, 2 invalid config or
//! arguments, 3 resource limit exceeded.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::ExperimentKind;
use crate::registry::list_registry;
use crate::runner::{run_experiment, RunOptions, OUT_ENV};

#[derive(Debug, Parser)]
#[command(name = "genericase", version, about = "Generic-case complexity measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run an experiment config (TOML or JSON).
    Run(RunArgs),
    /// List registered domains, processes, machines and subsets.
    List,
    /// Run a calibration config: chi-square of samples against the uniform measure.
    Calibrate(RunArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, env = OUT_ENV)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Results do not depend on this.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Largest sphere that may be enumerated.
    #[arg(long)]
    cap: Option<u128>,
}

impl RunArgs {
    fn options(&self, require_kind: Option<ExperimentKind>) -> RunOptions {
        RunOptions { seed: self.seed, out_dir: self.out.clone(), threads: self.threads, cap: self.cap, require_kind }
    }
}

fn execute(args: &RunArgs, require_kind: Option<ExperimentKind>) -> i32 {
    match run_experiment(&args.config, &args.options(require_kind)) {
        Ok(report) => {
            print!("{}", report.summary);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            println!("wrote {}", report.out_dir.display());
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match &cli.command {
        Command::Run(args) => execute(args, None),
        Command::Calibrate(args) => execute(args, Some(ExperimentKind::Calibrate)),
        Command::List => {
            print!("{}", list_registry());
            0
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn bad_flag_is_usage_error() {
        assert_eq!(main_with_args(["genericase", "run"]), 2);
        assert_eq!(main_with_args(["genericase", "frobnicate"]), 2);
    }
}
