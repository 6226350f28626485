//! Writes an SVG plot of a small Sim-6 run.
//!
//! ```text
//! cargo run --release --example plot -- [out.svg]
//! ```

use casper::analysis::{curves, plot_svg};
use casper::experiments::{preset, run_experiment, RunOptions};

fn main() -> casper::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "sim6.svg".into());
    let mut spec = preset("sim6")?;
    spec.n_subjects = 6;
    let results = run_experiment(&spec, &RunOptions::default(), &())?;
    let svg = plot_svg("Relational search", &curves(&results)?);
    std::fs::write(&path, svg)?;
    println!("wrote {path}");
    Ok(())
}
