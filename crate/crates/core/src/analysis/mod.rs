//! Summary statistics over experiment results: RT curves, linear and
//! log-linear regressions, and comparisons with human reference data.
//!
//! Log fits use the natural logarithm of set size. The target-only set
//! size (1) can be dropped from any fit.

mod plot;
mod reference;

use crate::error::{Error, Result};
use crate::experiments::{subject_mean_stats, CellResult, ExperimentResults};

pub use plot::plot_svg;
pub use reference::{fit_r2_vs_reference, load_reference_csv, ms_per_iteration, R2Report, ReferenceSeries};

/// Scalar results quoted in the original work, kept for side-by-side
/// reporting. No full human curves ship with the crate.
pub mod anchors {
    /// Relation-only slope between set sizes 2 and 8, dual-color items.
    pub const SIM6_RELATION_ONLY_SLOPE: f64 = 12.02;
    /// Relation-only mean RT (iterations) at set sizes 2 and 8.
    pub const SIM6_RELATION_ONLY_RT2: f64 = 41.09;
    pub const SIM6_RELATION_ONLY_RT8: f64 = 113.23;
    /// Relation-only slope between set sizes 2 and 8, single-color items.
    pub const SIM7_RELATION_ONLY_SLOPE: f64 = 13.25;
    /// Human relational search slope, ms per item.
    pub const LOGAN_SLOPE_MS: f64 = 85.0;
    /// Human Relation-only log slope, ms per log unit (dual-color items).
    pub const EXP1A_RELATION_ONLY_LOG_SLOPE_MS: f64 = 596.0;
    /// Human conjunction search slope, ms per item.
    pub const TREISMAN_CONJUNCTION_SLOPE_MS: f64 = 28.7;
    /// ms per iteration for the feature and conjunction conditions.
    pub const SIM1_FEATURE_MS_PER_ITERATION: f64 = 4.5;
    pub const SIM1_CONJUNCTION_MS_PER_ITERATION: f64 = 6.3;
    pub const SIM6_MS_PER_ITERATION: f64 = 7.07;
    pub const SIM7_MS_PER_ITERATION: f64 = 6.42;
    pub const SIM5_POOR_MS_PER_ITERATION: f64 = 6.72;
    /// Combined R² of the feature/conjunction fit.
    pub const SIM1_COMBINED_R2: f64 = 0.998;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub set_size: usize,
    /// Mean of per-subject mean RTs.
    pub mean: f64,
    /// Standard error of the per-subject means.
    pub sem: f64,
}

/// Mean RT as a function of set size for one condition.
#[derive(Debug, Clone, PartialEq)]
pub struct RTCurve {
    pub condition: String,
    pub points: Vec<CurvePoint>,
}

impl RTCurve {
    pub fn new(condition: &str, points: Vec<CurvePoint>) -> Result<Self> {
        if points.windows(2).any(|w| w[0].set_size >= w[1].set_size) {
            return Err(Error::Analysis("set sizes must be strictly increasing".into()));
        }
        Ok(RTCurve {
            condition: condition.to_string(),
            points,
        })
    }

    /// Builds a curve from `(set_size, mean)` pairs with zero SEM.
    pub fn from_means(condition: &str, means: &[(usize, f64)]) -> Result<Self> {
        RTCurve::new(
            condition,
            means
                .iter()
                .map(|&(set_size, mean)| CurvePoint {
                    set_size,
                    mean,
                    sem: 0.0,
                })
                .collect(),
        )
    }

    pub fn from_results(results: &ExperimentResults, condition: &str) -> Result<Self> {
        if !results.conditions.iter().any(|c| c == condition) {
            return Err(Error::Analysis(format!("no condition `{condition}`")));
        }
        let mut sizes = results.set_sizes.clone();
        sizes.sort_unstable();
        sizes.dedup();
        let points = sizes
            .into_iter()
            .map(|n| {
                let cells: Vec<&CellResult> = results.cells_for(condition, n).collect();
                let (mean, sem) = subject_mean_stats(&cells);
                CurvePoint {
                    set_size: n,
                    mean,
                    sem,
                }
            })
            .collect();
        RTCurve::new(condition, points)
    }

    pub fn mean_at(&self, set_size: usize) -> Option<f64> {
        self.points
            .iter()
            .find(|p| p.set_size == set_size)
            .map(|p| p.mean)
    }

    /// Points kept by a fit, optionally dropping the target-only display.
    pub fn filtered(&self, include_target_only: bool) -> Vec<CurvePoint> {
        self.points
            .iter()
            .copied()
            .filter(|p| include_target_only || p.set_size != 1)
            .collect()
    }
}

/// Every condition of a result set, in declaration order.
pub fn curves(results: &ExperimentResults) -> Result<Vec<RTCurve>> {
    results
        .conditions
        .iter()
        .map(|c| RTCurve::from_results(results, c))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

/// Ordinary least squares of `y` on `x`.
pub fn ols(x: &[f64], y: &[f64]) -> Result<Fit> {
    if x.len() != y.len() {
        return Err(Error::Analysis("x and y differ in length".into()));
    }
    if x.len() < 2 {
        return Err(Error::Analysis("a fit needs at least 2 points".into()));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::Analysis("non-finite value in fit input".into()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Analysis("all x values are equal".into()));
    }
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let pred: Vec<f64> = x.iter().map(|a| intercept + slope * a).collect();
    Ok(Fit {
        slope,
        intercept,
        r2: r_squared(&pred, y),
    })
}

/// Coefficient of determination of `predicted` for `observed`. Negative
/// when the prediction is worse than the observed mean.
pub fn r_squared(predicted: &[f64], observed: &[f64]) -> f64 {
    let n = observed.len() as f64;
    let mean = observed.iter().sum::<f64>() / n;
    let ss_tot: f64 = observed.iter().map(|o| (o - mean).powi(2)).sum();
    let ss_res: f64 = predicted
        .iter()
        .zip(observed)
        .map(|(p, o)| (o - p).powi(2))
        .sum();
    if ss_tot == 0.0 {
        return if ss_res == 0.0 { 1.0 } else { f64::NEG_INFINITY };
    }
    1.0 - ss_res / ss_tot
}

/// Mean RT regressed on set size.
pub fn fit_linear(curve: &RTCurve, include_target_only: bool) -> Result<Fit> {
    let pts = curve.filtered(include_target_only);
    let x: Vec<f64> = pts.iter().map(|p| p.set_size as f64).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.mean).collect();
    ols(&x, &y)
}

/// Mean RT regressed on the natural log of set size; the slope is in RT
/// units per log unit.
pub fn fit_log(curve: &RTCurve, include_target_only: bool) -> Result<Fit> {
    let pts = curve.filtered(include_target_only);
    let x: Vec<f64> = pts.iter().map(|p| (p.set_size as f64).ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.mean).collect();
    ols(&x, &y)
}

/// `(rt(high) - rt(low)) / (high - low)`.
pub fn slope_between(curve: &RTCurve, low: usize, high: usize) -> Result<f64> {
    let get = |n| {
        curve
            .mean_at(n)
            .ok_or_else(|| Error::Analysis(format!("set size {n} missing from `{}`", curve.condition)))
    };
    if low == high {
        return Err(Error::Analysis("slope needs two different set sizes".into()));
    }
    Ok((get(high)? - get(low)?) / (high as f64 - low as f64))
}

/// Second finite differences of mean RT over the given set sizes.
/// For log-spaced sizes (e.g. 2, 4, 8, 16) negative values indicate a
/// curve that bends below linear growth in set size.
pub fn second_differences(curve: &RTCurve, set_sizes: &[usize]) -> Result<Vec<f64>> {
    let ys = set_sizes
        .iter()
        .map(|&n| {
            curve
                .mean_at(n)
                .ok_or_else(|| Error::Analysis(format!("set size {n} missing")))
        })
        .collect::<Result<Vec<f64>>>()?;
    let xs: Vec<f64> = set_sizes.iter().map(|&n| n as f64).collect();
    // divided differences so uneven spacing is handled
    let d1: Vec<f64> = (1..xs.len())
        .map(|i| (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]))
        .collect();
    Ok((1..d1.len()).map(|i| d1[i] - d1[i - 1]).collect())
}

/// Per-subject log slopes for one condition, ordered by subject.
pub fn per_subject_log_slopes(
    results: &ExperimentResults,
    condition: &str,
    include_target_only: bool,
) -> Result<Vec<f64>> {
    (0..results.n_subjects)
        .map(|s| {
            let mut pts: Vec<(f64, f64)> = results
                .cells
                .iter()
                .filter(|c| c.condition == condition && c.subject == s)
                .filter(|c| include_target_only || c.set_size != 1)
                .map(|c| ((c.set_size as f64).ln(), c.mean_rt()))
                .filter(|(_, m)| m.is_finite())
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            let (x, y): (Vec<f64>, Vec<f64>) = pts.into_iter().unzip();
            ols(&x, &y).map(|f| f.slope)
        })
        .collect()
}

/// Mean and standard error of paired differences `a - b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedDifference {
    pub mean: f64,
    pub sem: f64,
    pub n: usize,
}

impl PairedDifference {
    /// The difference is within two standard errors of zero.
    pub fn indistinguishable(&self) -> bool {
        self.mean.abs() < 2.0 * self.sem
    }
}

pub fn paired_difference(a: &[f64], b: &[f64]) -> Result<PairedDifference> {
    if a.len() != b.len() || a.len() < 2 {
        return Err(Error::Analysis("paired samples need equal lengths of at least 2".into()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let n = d.len() as f64;
    let mean = d.iter().sum::<f64>() / n;
    let var = d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok(PairedDifference {
        mean,
        sem: (var / n).sqrt(),
        n: d.len(),
    })
}

/// Linear and log fits per condition as CSV. Conditions with too few set
/// sizes to fit get empty cells.
pub fn fits_csv(curves: &[RTCurve], include_target_only: bool) -> String {
    let mut out = String::from(
        "condition,linear_slope,linear_intercept,linear_r2,log_slope,log_intercept,log_r2\n",
    );
    for c in curves {
        match (fit_linear(c, include_target_only), fit_log(c, include_target_only)) {
            (Ok(lin), Ok(log)) => out.push_str(&format!(
                "{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
                c.condition, lin.slope, lin.intercept, lin.r2, log.slope, log.intercept, log.r2
            )),
            _ => out.push_str(&format!("{},,,,,,\n", c.condition)),
        }
    }
    out
}

/// Whether the shipped analysis of a preset drops the target-only set
/// size. Simulation 4 keeps it because only two other set sizes exist.
pub fn default_include_target_only(experiment: &str) -> bool {
    experiment == "sim4"
}
