//! Defines an experiment in the text grammar, runs it and prints the
//! canonical form and aggregate table.
//!
//! ```text
//! cargo run --release --example custom_experiment
//! ```

use casper::experiments::{aggregate_csv, run_experiment, RunOptions};
use casper::stimuli::{parse_experiment, serialize_experiment};

const SOURCE: &str = "
# A color pop-out condition next to a shape-only one.
experiment demo
seed 11
subjects 8
trials 20
set_sizes 1, 4, 8, 16
param delta 0.5

condition color {
    target = red vertical;
    distractor = green vertical;
}

condition shape {
    target = red vertical;
    distractor = red horizontal;
    salience shape 1.5;
}
";

fn main() -> casper::Result<()> {
    let spec = parse_experiment(SOURCE)?;
    let canonical = serialize_experiment(&spec);
    assert_eq!(parse_experiment(&canonical)?, spec);
    println!("{canonical}");

    let results = run_experiment(&spec, &RunOptions::default(), &())?;
    print!("{}", aggregate_csv(&results));

    if let Err(e) = parse_experiment("experiment bad\nset_sizes 1\ncondition c { target = above(red X); distractor = red O; }") {
        println!("\nparse error example: {e}");
    }
    Ok(())
}
