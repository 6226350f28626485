//! Experiment definitions, the shipped simulation presets, and the
//! multi-subject runner.
//!
//! Every trial draws from its own ChaCha8 stream, seeded from
//! `(master seed, condition index, set size, subject, trial)`. Results are
//! therefore independent of scheduling and of which other cells run.

mod presets;
mod spec;

use std::sync::atomic::{AtomicUsize, Ordering};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::engine::{run_trial_classified, Outcome, TraceSink, TrialResult};
use crate::error::{Error, Result};

pub use presets::{preset, preset_source, PRESET_IDS};
pub use spec::{
    ConditionSpec, ExperimentSpec, HigherOrderScope, HigherOrderSpec, ParamOverrides,
    ResolvedCondition, SalienceOverride, SalienceTarget, LAYOUT_PARAM_KEYS,
};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one trial's RNG stream.
pub fn stream_seed(master: u64, condition: usize, set_size: usize, subject: usize, trial: usize) -> u64 {
    [condition, set_size, subject, trial]
        .iter()
        .fold(splitmix64(master), |h, &x| splitmix64(h ^ x as u64))
}

pub fn trial_rng(master: u64, condition: usize, set_size: usize, subject: usize, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(stream_seed(master, condition, set_size, subject, trial))
}

/// Runs one trial of a resolved condition on its own stream.
pub fn run_cell_trial<T: TraceSink + ?Sized>(
    condition: &ResolvedCondition,
    stream: &mut ChaCha8Rng,
    set_size: usize,
    target_present: bool,
    trace: &mut T,
) -> Result<TrialResult> {
    let display =
        condition
            .prototypes
            .build_display(set_size, target_present, &condition.geometry, stream)?;
    run_trial_classified(
        &display,
        &condition.prototypes.template,
        &condition.classification,
        &condition.params,
        stream,
        trace,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialRecord {
    pub trial: usize,
    pub rt_iterations: u32,
    pub outcome: Outcome,
}

/// All trials of one (condition, set size, subject) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub condition: String,
    pub condition_index: usize,
    pub set_size: usize,
    pub subject: usize,
    pub trials: Vec<TrialRecord>,
}

impl CellResult {
    /// Response times of trials that ended in acceptance of the target.
    pub fn found_rts(&self) -> impl Iterator<Item = u32> + '_ {
        self.trials
            .iter()
            .filter(|t| t.outcome == Outcome::TargetFound)
            .map(|t| t.rt_iterations)
    }

    /// Mean RT over trials that found the target; NaN if none did.
    pub fn mean_rt(&self) -> f64 {
        let (sum, n) = self
            .found_rts()
            .fold((0.0, 0usize), |(s, n), rt| (s + rt as f64, n + 1));
        if n == 0 {
            f64::NAN
        } else {
            sum / n as f64
        }
    }

    pub fn count(&self, outcome: Outcome) -> usize {
        self.trials.iter().filter(|t| t.outcome == outcome).count()
    }

    pub fn n_timeouts(&self) -> usize {
        self.count(Outcome::IterationCap)
    }
}

/// Receives one event per finished cell, in completion order.
pub trait Progress: Sync {
    fn cell_done(&self, cell: &CellResult, completed: usize, total: usize);
}

impl Progress for () {
    fn cell_done(&self, _: &CellResult, _: usize, _: usize) {}
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    /// Target-absent trials are supported but the model was never tuned
    /// for them.
    pub target_present: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            threads: None,
            target_present: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResults {
    pub experiment: String,
    pub conditions: Vec<String>,
    pub set_sizes: Vec<usize>,
    pub n_subjects: usize,
    /// Sorted by condition index, set size order, subject.
    pub cells: Vec<CellResult>,
}

impl ExperimentResults {
    pub fn cells_for<'a>(
        &'a self,
        condition: &'a str,
        set_size: usize,
    ) -> impl Iterator<Item = &'a CellResult> + 'a {
        self.cells
            .iter()
            .filter(move |c| c.condition == condition && c.set_size == set_size)
    }

    pub fn total_timeouts(&self) -> usize {
        self.cells.iter().map(CellResult::n_timeouts).sum()
    }
}

/// Runs every (condition, set size, subject) cell of an experiment.
pub fn run_experiment(
    spec: &ExperimentSpec,
    options: &RunOptions,
    progress: &dyn Progress,
) -> Result<ExperimentResults> {
    let resolved = spec.resolve()?;
    let mut jobs = Vec::new();
    for ci in 0..resolved.len() {
        for (si, &n) in spec.set_sizes.iter().enumerate() {
            for subject in 0..spec.n_subjects {
                jobs.push((ci, si, n, subject));
            }
        }
    }
    let total = jobs.len();
    let completed = AtomicUsize::new(0);
    let run_cell = |&(ci, _si, set_size, subject): &(usize, usize, usize, usize)| {
        let cond = &resolved[ci];
        let mut trials = Vec::with_capacity(spec.trials_per_cell);
        for trial in 0..spec.trials_per_cell {
            let mut stream = trial_rng(spec.seed, ci, set_size, subject, trial);
            let res = run_cell_trial(cond, &mut stream, set_size, options.target_present, &mut ())?;
            trials.push(TrialRecord {
                trial,
                rt_iterations: res.rt_iterations,
                outcome: res.outcome,
            });
        }
        let cell = CellResult {
            condition: cond.name.clone(),
            condition_index: ci,
            set_size,
            subject,
            trials,
        };
        let done = completed.fetch_add(1, Ordering::Relaxed) + 1;
        progress.cell_done(&cell, done, total);
        Ok(cell)
    };
    let cells: Result<Vec<CellResult>> = match options.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidExperiment(e.to_string()))?
            .install(|| jobs.par_iter().map(run_cell).collect()),
        None => jobs.par_iter().map(run_cell).collect(),
    };
    // `collect` on an indexed parallel iterator preserves job order, which
    // is already (condition, set size, subject).
    Ok(ExperimentResults {
        experiment: spec.name.clone(),
        conditions: resolved.iter().map(|c| c.name.clone()).collect(),
        set_sizes: spec.set_sizes.clone(),
        n_subjects: spec.n_subjects,
        cells: cells?,
    })
}

/// Re-runs a single trial with tracing, reproducing exactly the trial
/// recorded by [`run_experiment`].
pub fn replay_trial<T: TraceSink + ?Sized>(
    spec: &ExperimentSpec,
    condition: &str,
    set_size: usize,
    subject: usize,
    trial: usize,
    trace: &mut T,
) -> Result<TrialResult> {
    let ci = spec
        .condition_index(condition)
        .ok_or_else(|| Error::InvalidExperiment(format!("no condition `{condition}`")))?;
    let resolved = spec.resolve()?;
    let mut stream = trial_rng(spec.seed, ci, set_size, subject, trial);
    run_cell_trial(&resolved[ci], &mut stream, set_size, true, trace)
}

/// Per-trial export: one row per trial.
pub fn results_csv(results: &ExperimentResults) -> String {
    let mut out = String::from("experiment,condition,set_size,subject,trial,rt_iterations,outcome\n");
    for cell in &results.cells {
        for t in &cell.trials {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                results.experiment,
                cell.condition,
                cell.set_size,
                cell.subject,
                t.trial,
                t.rt_iterations,
                t.outcome.name()
            ));
        }
    }
    out
}

/// Mean of subject means and its standard error for one cell group.
pub fn subject_mean_stats(cells: &[&CellResult]) -> (f64, f64) {
    let means: Vec<f64> = cells.iter().map(|c| c.mean_rt()).filter(|m| m.is_finite()).collect();
    let n = means.len() as f64;
    if means.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = means.iter().sum::<f64>() / n;
    if means.len() < 2 {
        return (mean, 0.0);
    }
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Per-cell aggregate export: mean of subject means with SEM.
pub fn aggregate_csv(results: &ExperimentResults) -> String {
    let mut out = String::from(
        "experiment,condition,set_size,n_subjects,mean_rt,sem,n_trials,n_found,n_missed,n_timeouts\n",
    );
    for cond in &results.conditions {
        for &n in &results.set_sizes {
            let cells: Vec<&CellResult> = results.cells_for(cond, n).collect();
            let (mean, sem) = subject_mean_stats(&cells);
            let sum = |f: &dyn Fn(&CellResult) -> usize| cells.iter().map(|c| f(c)).sum::<usize>();
            out.push_str(&format!(
                "{},{},{},{},{:.6},{:.6},{},{},{},{}\n",
                results.experiment,
                cond,
                n,
                cells.len(),
                mean,
                sem,
                sum(&|c| c.trials.len()),
                sum(&|c| c.count(Outcome::TargetFound)),
                sum(&|c| c.count(Outcome::AllRejected)),
                sum(&|c| c.count(Outcome::IterationCap)),
            ));
        }
    }
    out
}
