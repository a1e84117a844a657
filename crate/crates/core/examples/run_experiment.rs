//! Runs an experiment config and prints the human summary.

use coupling_lab::lab::{run_suite, ExperimentConfig};

fn main() -> coupling_lab::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/experiment.toml").into());
    let config = ExperimentConfig::load(&path)?;
    let report = run_suite(&config)?;
    print!("{}", report.human_summary(false));
    println!("config hash {}", report.header.config_hash);
    Ok(())
}
