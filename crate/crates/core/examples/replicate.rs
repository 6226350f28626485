//! Runs one shipped simulation and prints its RT curves and slopes.
//!
//! ```text
//! cargo run --release --example replicate -- sim6 [subjects] [seed=N] [param=value ...]
//! ```

use casper::analysis::{curves, fit_linear, fit_log, slope_between, default_include_target_only};
use casper::experiments::{preset, run_experiment, RunOptions};

fn main() -> casper::Result<()> {
    let mut args = std::env::args().skip(1);
    let id = args.next().unwrap_or_else(|| "sim1".into());
    let mut spec = preset(&id)?;
    for a in args {
        match a.split_once('=') {
            Some(("seed", v)) => spec.seed = v.parse().expect("seed"),
            Some((k, v)) => spec.params.set(k, v)?,
            None => spec.n_subjects = a.parse().expect("subject count"),
        }
    }
    let results = run_experiment(&spec, &RunOptions::default(), &())?;
    let include = default_include_target_only(&id);
    for c in curves(&results)? {
        let row: Vec<String> = c
            .points
            .iter()
            .map(|p| format!("{}:{:.1}±{:.1}", p.set_size, p.mean, p.sem))
            .collect();
        println!("{:<28} {}", c.condition, row.join("  "));
        let lin = fit_linear(&c, include)?;
        let log = fit_log(&c, include)?;
        print!(
            "{:<28} linear {:.2}/item (R² {:.3})  log {:.2}/ln (R² {:.3})",
            "", lin.slope, lin.r2, log.slope, log.r2
        );
        if let Ok(s) = slope_between(&c, 2, 8) {
            print!("  slope 2→8 {s:.2}");
        }
        println!();
    }
    println!("timeouts: {}", results.total_timeouts());
    Ok(())
}
