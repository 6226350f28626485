//! Linear and log fits of RT curves, and comparison against a human
//! reference series.
//!
//! ```text
//! cargo run --release --example curve_fitting
//! ```

use casper::analysis::{
    curves, fit_linear, fit_log, fit_r2_vs_reference, load_reference_csv, second_differences,
};
use casper::experiments::{preset, run_experiment, RunOptions};

// Invented numbers in the expected format; real use needs digitized data.
const REFERENCE: &str = "# provenance: illustrative values, not measured data
label,set_size,mean_rt_ms
feature,1,450
feature,5,470
feature,15,480
feature,30,490
conjunction,1,480
conjunction,5,600
conjunction,15,880
conjunction,30,1300
";

fn main() -> casper::Result<()> {
    let mut spec = preset("sim1")?;
    spec.n_subjects = 10;
    let results = run_experiment(&spec, &RunOptions::default(), &())?;
    let curves = curves(&results)?;
    for c in &curves {
        let lin = fit_linear(c, false)?;
        let log = fit_log(c, false)?;
        let d2 = second_differences(c, &[5, 15, 30])?;
        println!(
            "{:<12} linear {:.2}/item R² {:.3} | log {:.2}/ln R² {:.3} | curvature {:+.3}",
            c.condition, lin.slope, lin.r2, log.slope, log.r2, d2[0]
        );
    }

    let refs = load_reference_csv(REFERENCE)?;
    let report = fit_r2_vs_reference(&curves, &refs, false)?;
    print!("\n{}", report.to_csv());
    Ok(())
}
