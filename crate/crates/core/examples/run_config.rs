//! Runs a config file the same way `genericase run` does.
//!
//! `cargo run --example run_config -- configs/hnn-uniform.toml [out-dir]`

use std::path::PathBuf;

use genericase::runner::{run_experiment, RunOptions};

fn main() {
    let mut args = std::env::args().skip(1);
    let config = PathBuf::from(args.next().unwrap_or_else(|| "configs/two-element.toml".into()));
    let opts = RunOptions { out_dir: args.next().map(PathBuf::from), ..RunOptions::default() };
    match run_experiment(&config, &opts) {
        Ok(report) => {
            print!("{}", report.summary);
            for f in &report.files {
                println!("wrote {}", f.display());
            }
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(e.exit_code());
        }
    }
}
