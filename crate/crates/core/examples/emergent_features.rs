//! Sweeps the salience of an emergent unit in the relational conditions
//! and reports mean RT at the largest set size.
//!
//! ```text
//! cargo run --release --example emergent_features
//! ```

use casper::analysis::{curves, slope_between};
use casper::experiments::{preset, run_experiment, RunOptions};

fn main() -> casper::Result<()> {
    let base = preset("sim6")?;
    println!("{:<6} {:>16} {:>16} {:>16}", "eta", "relation_only", "feature_only", "relation_feature");
    for eta in [0.0, 0.33, 1.0, 2.0] {
        let mut spec = base.clone();
        spec.n_subjects = 8;
        for c in &mut spec.conditions {
            c.emergent = Some(eta);
        }
        let results = run_experiment(&spec, &RunOptions::default(), &())?;
        let row: Vec<String> = curves(&results)?
            .iter()
            .map(|c| {
                let rt16 = c.mean_at(16).unwrap_or(f64::NAN);
                let s = slope_between(c, 2, 8).unwrap_or(f64::NAN);
                format!("{rt16:>7.1} ({s:>5.2})")
            })
            .collect();
        println!("{eta:<6} {:>16} {:>16} {:>16}", row[0], row[1], row[2]);
    }
    println!("cells: mean RT at 16 items (slope 2-8)");
    Ok(())
}
