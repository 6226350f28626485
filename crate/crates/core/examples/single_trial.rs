//! One traced trial: the per-iteration phase, fixation and priorities of a
//! conjunction search display.
//!
//! ```text
//! cargo run --example single_trial -- [set_size] [seed]
//! ```

use casper::engine::{trace_csv, TraceRecord};
use casper::experiments::{preset, run_cell_trial, trial_rng};

fn main() -> casper::Result<()> {
    let mut args = std::env::args().skip(1);
    let set_size: usize = args.next().map_or(8, |a| a.parse().expect("set size"));
    let seed: u64 = args.next().map_or(3, |a| a.parse().expect("seed"));

    let spec = preset("sim1")?;
    let resolved = spec.resolve()?;
    let conjunction = &resolved[1];
    let mut rng = trial_rng(seed, 1, set_size, 0, 0);
    let mut trace: Vec<TraceRecord> = Vec::new();
    let result = run_cell_trial(conjunction, &mut rng, set_size, true, &mut trace)?;

    println!(
        "{}: {} after {} iterations, {} serial inspections, {} parallel rejections",
        conjunction.name,
        result.outcome.name(),
        result.rt_iterations,
        result.n_serial_inspections,
        result.n_parallel_rejections
    );
    for r in trace.iter().take(12) {
        let p: Vec<String> = r.priorities.iter().map(|p| format!("{p:.3}")).collect();
        println!(
            "{:>4} {:<13} {} [{}]",
            r.iteration,
            r.phase.name(),
            if r.frozen { "frozen" } else { "      " },
            p.join(" ")
        );
    }
    if trace.len() > 12 {
        println!("... {} more iterations", trace.len() - 12);
    }
    let csv = trace_csv(&trace);
    println!("trace CSV: {} rows", csv.lines().count() - 1);
    Ok(())
}
