//! Command-line front end: argument types, artifact writing and run
//! manifests. The `casper` binary is a thin wrapper over [`run`].

use std::collections::BTreeMap;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    self, default_include_target_only, fit_linear, fit_log, fit_r2_vs_reference,
    load_reference_csv, paired_difference, per_subject_log_slopes, slope_between, RTCurve,
};
use crate::engine::{trace_csv, EngineParams, TraceRecord, ENGINE_PARAM_KEYS};
use crate::error::{Error, Result};
use crate::experiments::{
    aggregate_csv, preset, replay_trial, results_csv, run_experiment, CellResult, ExperimentResults,
    ExperimentSpec, Progress, RunOptions,
};
use crate::features::{color_table_csv, shape_table_csv};
use crate::stimuli::{parse_experiment, serialize_experiment, LayoutParams};

#[derive(Debug, Parser)]
#[command(name = "casper", version, about = "Visual search simulations with serial and parallel evaluation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a shipped simulation (sim1 .. sim10).
    Replicate {
        id: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Run an experiment definition file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Write the color and shape encoding tables as CSV.
    Tables {
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-run the experiment recorded in a manifest.
    Replay {
        manifest: PathBuf,
        /// Output directory; defaults to `<manifest dir>/replay`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// Master seed, replacing the one in the definition.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Virtual subjects per cell.
    #[arg(long)]
    pub subjects: Option<usize>,
    /// Trials per subject and cell.
    #[arg(long)]
    pub trials: Option<usize>,
    /// Human reference means (`label,set_size,mean_rt_ms`) to fit against.
    #[arg(long)]
    pub reference: Option<PathBuf>,
    /// Also write an iteration trace of the first trial of every cell.
    #[arg(long)]
    pub trace: bool,
    /// Print the canonical experiment definition and exit.
    #[arg(long)]
    pub dump_spec: bool,
    /// Worker threads (results do not depend on this).
    #[arg(long)]
    pub threads: Option<usize>,
}

impl Default for RunArgs {
    fn default() -> Self {
        RunArgs {
            seed: None,
            out: PathBuf::from("out"),
            subjects: None,
            trials: None,
            reference: None,
            trace: false,
            dump_spec: false,
            threads: None,
        }
    }
}

/// Everything needed to reproduce a run, written next to its artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub experiment: String,
    pub seed: u64,
    /// Canonical definition text, including subjects, trials and overrides.
    pub spec: String,
    /// Engine and geometry parameters after experiment-level overrides.
    /// Conditions may override further; those overrides live in `spec`.
    pub params: BTreeMap<String, String>,
    /// Artifact kind to file name, relative to the manifest.
    pub artifacts: BTreeMap<String, String>,
    pub wall_time_secs: f64,
    pub timeouts: usize,
}

/// What a finished command reports back to `main`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Some trials hit the iteration cap.
    Timeouts(usize),
    /// A replay produced different results from the recorded run.
    Mismatch,
}

/// Writes via a temporary file in the same directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let name = path
        .file_name()
        .ok_or_else(|| Error::InvalidExperiment(format!("not a file path: {}", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Dispatches one parsed command line.
pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Replicate { id, run } => {
            let spec = preset(&id)?;
            execute(spec, &run, default_include_target_only(&id))
        }
        Command::Run { file, run } => {
            let text = fs::read_to_string(&file)?;
            let spec = parse_experiment(&text)?;
            let include = default_include_target_only(&spec.name);
            execute(spec, &run, include)
        }
        Command::Tables { out } => {
            write_atomic(&out.join("colors.csv"), &color_table_csv())?;
            write_atomic(&out.join("shapes.csv"), &shape_table_csv())?;
            println!("wrote {} and {}", out.join("colors.csv").display(), out.join("shapes.csv").display());
            Ok(Status::Ok)
        }
        Command::Replay { manifest, out } => replay(&manifest, out),
    }
}

fn apply_overrides(mut spec: ExperimentSpec, args: &RunArgs) -> Result<ExperimentSpec> {
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    if let Some(n) = args.subjects {
        spec.n_subjects = n;
    }
    if let Some(n) = args.trials {
        spec.trials_per_cell = n;
    }
    spec.validate()?;
    Ok(spec)
}

/// Effective experiment-level parameters, in canonical key order.
pub fn effective_params(spec: &ExperimentSpec) -> Result<BTreeMap<String, String>> {
    let mut params = EngineParams::default();
    let mut geometry = LayoutParams::default();
    spec.params.apply(&mut params, &mut geometry)?;
    let mut out = BTreeMap::new();
    for key in ENGINE_PARAM_KEYS {
        out.insert(key.to_string(), params.get(key).unwrap_or_default());
    }
    out.insert("ring_radius".into(), geometry.ring_radius.to_string());
    out.insert("ring_capacity".into(), geometry.ring_capacity.to_string());
    out.insert("ring_spacing".into(), geometry.ring_spacing.to_string());
    Ok(out)
}

struct StderrProgress {
    last_decile: AtomicUsize,
}

impl Progress for StderrProgress {
    fn cell_done(&self, _: &CellResult, completed: usize, total: usize) {
        let decile = completed * 10 / total.max(1);
        if self.last_decile.fetch_max(decile, Ordering::Relaxed) < decile {
            eprint!("\r{:>3}%", decile * 10);
            if completed == total {
                eprintln!();
            }
        }
    }
}

/// Artifacts of one run, named after the experiment.
struct Artifacts {
    dir: PathBuf,
    prefix: String,
}

impl Artifacts {
    fn name(&self, kind: &str, ext: &str) -> String {
        format!("{}_{kind}.{ext}", self.prefix)
    }

    fn write(&self, index: &mut BTreeMap<String, String>, kind: &str, ext: &str, body: &str) -> Result<()> {
        let name = self.name(kind, ext);
        write_atomic(&self.dir.join(&name), body)?;
        index.insert(kind.to_string(), name);
        Ok(())
    }
}

fn execute(spec: ExperimentSpec, args: &RunArgs, include_target_only: bool) -> Result<Status> {
    let spec = apply_overrides(spec, args)?;
    if args.dump_spec {
        print!("{}", serialize_experiment(&spec));
        return Ok(Status::Ok);
    }
    let references = match &args.reference {
        Some(path) => Some(load_reference_csv(&fs::read_to_string(path)?)?),
        None => None,
    };

    let started = Instant::now();
    let options = RunOptions {
        threads: args.threads,
        ..RunOptions::default()
    };
    let progress = StderrProgress {
        last_decile: AtomicUsize::new(0),
    };
    let results = run_experiment(&spec, &options, &progress)?;
    let wall = started.elapsed().as_secs_f64();

    let out = Artifacts {
        dir: args.out.clone(),
        prefix: spec.name.clone(),
    };
    let mut index = BTreeMap::new();
    out.write(&mut index, "results", "csv", &results_csv(&results))?;
    out.write(&mut index, "aggregate", "csv", &aggregate_csv(&results))?;
    let curves = analysis::curves(&results)?;
    out.write(&mut index, "fits", "csv", &analysis::fits_csv(&curves, include_target_only))?;
    out.write(&mut index, "plot", "svg", &analysis::plot_svg(&spec.name, &curves))?;

    print_headline(&results, &curves, include_target_only);

    if let Some(refs) = &references {
        let report = fit_r2_vs_reference(&curves, refs, !include_target_only)?;
        for (label, r2, k) in &report.per_condition {
            println!("  {label:<24} R² {r2:.3}  {k:.2} ms/iteration");
        }
        println!(
            "  {:<24} R² {:.3}  {:.2} ms/iteration",
            "combined", report.concatenated, report.concatenated_ms_per_iteration
        );
        out.write(&mut index, "r2", "csv", &report.to_csv())?;
    }

    if args.trace {
        for cond in &results.conditions {
            for &n in &spec.set_sizes {
                let mut records: Vec<TraceRecord> = Vec::new();
                replay_trial(&spec, cond, n, 0, 0, &mut records)?;
                let kind = format!("trace_{cond}_n{n}");
                out.write(&mut index, &kind, "csv", &trace_csv(&records))?;
            }
        }
    }

    let timeouts = results.total_timeouts();
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        experiment: spec.name.clone(),
        seed: spec.seed,
        spec: serialize_experiment(&spec),
        params: effective_params(&spec)?,
        artifacts: index,
        wall_time_secs: wall,
        timeouts,
    };
    let manifest_path = out.dir.join(out.name("manifest", "json"));
    write_atomic(&manifest_path, &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    println!("wrote {} artifacts to {} ({wall:.1}s)", manifest.artifacts.len() + 1, out.dir.display());

    if timeouts > 0 {
        eprintln!("{timeouts} trials hit the iteration cap");
        return Ok(Status::Timeouts(timeouts));
    }
    Ok(Status::Ok)
}

fn print_headline(results: &ExperimentResults, curves: &[RTCurve], include_target_only: bool) {
    println!(
        "{}: {} subjects x {} conditions",
        results.experiment,
        results.n_subjects,
        results.conditions.len()
    );
    let mut subject_slopes = Vec::new();
    for c in curves {
        let mut line = format!("  {:<24}", c.condition);
        if let Ok(f) = fit_linear(c, include_target_only) {
            line.push_str(&format!(" linear {:.2}/item (R² {:.3})", f.slope, f.r2));
        }
        if let Ok(f) = fit_log(c, include_target_only) {
            line.push_str(&format!("  log {:.2}/ln (R² {:.3})", f.slope, f.r2));
        }
        if let Ok(s) = slope_between(c, 2, 8) {
            line.push_str(&format!("  slope 2-8 {s:.2}"));
        }
        println!("{line}");
        subject_slopes.push(per_subject_log_slopes(results, &c.condition, include_target_only).ok());
    }
    // per-subject log slopes, compared for each pair of conditions
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            if let (Some(a), Some(b)) = (&subject_slopes[i], &subject_slopes[j]) {
                if let Ok(d) = paired_difference(a, b) {
                    println!(
                        "  log slope {} - {}: {:.2} ± {:.2}{}",
                        curves[i].condition,
                        curves[j].condition,
                        d.mean,
                        d.sem,
                        if d.indistinguishable() { " (within 2 SEM)" } else { "" }
                    );
                }
            }
        }
    }
}

fn replay(manifest_path: &Path, out: Option<PathBuf>) -> Result<Status> {
    let manifest: RunManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    let spec = parse_experiment(&manifest.spec)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let out = out.unwrap_or_else(|| base.join("replay"));
    let args = RunArgs {
        out: out.clone(),
        ..RunArgs::default()
    };
    let include = default_include_target_only(&spec.name);
    let status = execute(spec, &args, include)?;

    let recorded = manifest.artifacts.get("results").map(|f| base.join(f));
    let fresh = out.join(format!("{}_results.csv", manifest.experiment));
    match recorded {
        Some(path) if path.exists() => {
            if fs::read(&path)? == fs::read(&fresh)? {
                println!("results identical to {}", path.display());
                Ok(status)
            } else {
                eprintln!("results differ from {}", path.display());
                Ok(Status::Mismatch)
            }
        }
        _ => Ok(status),
    }
}
