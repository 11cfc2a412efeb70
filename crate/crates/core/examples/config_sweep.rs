//! Runs the sweep described by a JSON config and prints the CSV to stdout.
//!
//! `cargo run --example config_sweep -- crates/core/examples/bitflip3.json`

use std::path::PathBuf;

use zeno_bench::config::{config_hash, ExperimentConfig};
use zeno_bench::measurement::Protocol;
use zeno_bench::sweep::run_sweep;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bitflip3.json")));
    let (cfg, text) = ExperimentConfig::load(&path)?;
    let exp = cfg.build()?;
    let report = run_sweep(&exp, &[Protocol::Group, Protocol::Generators], config_hash(&text))?;
    report.write_csv(std::io::stdout().lock())?;
    eprintln!(
        "{} rows, {} violations, max D_sim/D_bound {:.4}",
        report.summary.rows, report.summary.violations, report.summary.max_ratio
    );
    Ok(())
}
