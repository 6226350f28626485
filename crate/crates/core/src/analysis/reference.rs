use crate::error::{Error, Result};

use super::{r_squared, RTCurve};

/// Human mean RTs for one condition, with a mandatory provenance note.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceSeries {
    pub label: String,
    pub provenance: String,
    /// `(set_size, mean_rt_ms)`, ascending by set size.
    pub points: Vec<(usize, f64)>,
}

impl ReferenceSeries {
    pub fn mean_at(&self, set_size: usize) -> Option<f64> {
        self.points.iter().find(|p| p.0 == set_size).map(|p| p.1)
    }
}

/// Parses reference data:
///
/// ```text
/// # provenance: digitized from <source>
/// label,set_size,mean_rt_ms
/// conjunction,1,480
/// ```
///
/// Series are returned in order of first appearance.
pub fn load_reference_csv(text: &str) -> Result<Vec<ReferenceSeries>> {
    let bad = |line: usize, m: &str| Error::Parse {
        line,
        column: 1,
        message: m.to_string(),
    };
    let mut provenance = None;
    let mut header_seen = false;
    let mut out: Vec<ReferenceSeries> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let no = i + 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(p) = comment.trim().strip_prefix("provenance:") {
                provenance = Some(p.trim().to_string());
            }
            continue;
        }
        if !header_seen {
            if line != "label,set_size,mean_rt_ms" {
                return Err(bad(no, "expected header `label,set_size,mean_rt_ms`"));
            }
            header_seen = true;
            continue;
        }
        let prov = provenance
            .clone()
            .filter(|p| !p.is_empty())
            .ok_or_else(|| bad(no, "reference data needs a `# provenance:` line before the data"))?;
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(bad(no, "expected 3 fields"));
        }
        let n: usize = fields[1]
            .parse()
            .map_err(|_| bad(no, "set_size must be a positive integer"))?;
        let rt: f64 = fields[2]
            .parse()
            .map_err(|_| bad(no, "mean_rt_ms must be a number"))?;
        if n == 0 || !rt.is_finite() {
            return Err(bad(no, "set_size must be positive and mean_rt_ms finite"));
        }
        match out.iter_mut().find(|s| s.label == fields[0]) {
            Some(s) => {
                if s.mean_at(n).is_some() {
                    return Err(bad(no, "duplicate set size for this label"));
                }
                s.points.push((n, rt));
                s.points.sort_by_key(|p| p.0);
            }
            None => out.push(ReferenceSeries {
                label: fields[0].to_string(),
                provenance: prov,
                points: vec![(n, rt)],
            }),
        }
    }
    if !header_seen {
        return Err(bad(1, "missing header `label,set_size,mean_rt_ms`"));
    }
    Ok(out)
}

/// Model and reference means on their shared grid.
fn paired(
    curve: &RTCurve,
    reference: &ReferenceSeries,
    exclude_target_only: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let model: Vec<_> = curve.filtered(!exclude_target_only);
    let refs: Vec<_> = reference
        .points
        .iter()
        .filter(|p| !(exclude_target_only && p.0 == 1))
        .collect();
    let grid_model: Vec<usize> = model.iter().map(|p| p.set_size).collect();
    let grid_ref: Vec<usize> = refs.iter().map(|p| p.0).collect();
    if grid_model != grid_ref {
        return Err(Error::Analysis(format!(
            "set sizes differ between model `{}` {:?} and reference `{}` {:?}",
            curve.condition, grid_model, reference.label, grid_ref
        )));
    }
    Ok((
        model.iter().map(|p| p.mean).collect(),
        refs.iter().map(|p| p.1).collect(),
    ))
}

fn range(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    max - min
}

/// Human RT range divided by model RT range on the shared set sizes.
pub fn ms_per_iteration(
    curve: &RTCurve,
    reference: &ReferenceSeries,
    exclude_target_only: bool,
) -> Result<f64> {
    let (m, r) = paired(curve, reference, exclude_target_only)?;
    ratio(&m, &r)
}

fn ratio(model: &[f64], reference: &[f64]) -> Result<f64> {
    let rm = range(model);
    if !(rm > 0.0) {
        return Err(Error::Analysis("model curve has zero range".into()));
    }
    Ok(range(reference) / rm)
}

/// Model iterations mapped onto the reference in ms: scaled by the
/// range ratio and shifted so the means agree.
fn rescale(model: &[f64], reference: &[f64], k: f64) -> Vec<f64> {
    let mm = model.iter().sum::<f64>() / model.len() as f64;
    let mr = reference.iter().sum::<f64>() / reference.len() as f64;
    model.iter().map(|v| mr + k * (v - mm)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct R2Report {
    /// `(condition, R², ms per iteration)`.
    pub per_condition: Vec<(String, f64, f64)>,
    /// R² over all conditions concatenated, using one common scale.
    pub concatenated: f64,
    pub concatenated_ms_per_iteration: f64,
}

impl R2Report {
    /// One line per condition, then the combined fit.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("condition,r2,ms_per_iteration\n");
        for (c, r2, k) in &self.per_condition {
            out.push_str(&format!("{c},{r2:.6},{k:.6}\n"));
        }
        out.push_str(&format!(
            "combined,{:.6},{:.6}\n",
            self.concatenated, self.concatenated_ms_per_iteration
        ));
        out
    }
}

/// Compares model curves with reference series matched by label.
pub fn fit_r2_vs_reference(
    curves: &[RTCurve],
    references: &[ReferenceSeries],
    exclude_target_only: bool,
) -> Result<R2Report> {
    let mut per_condition = Vec::new();
    let mut all_m = Vec::new();
    let mut all_r = Vec::new();
    for r in references {
        let curve = curves
            .iter()
            .find(|c| c.condition == r.label)
            .ok_or_else(|| Error::Analysis(format!("no model condition `{}`", r.label)))?;
        let (m, h) = paired(curve, r, exclude_target_only)?;
        let k = ratio(&m, &h)?;
        per_condition.push((r.label.clone(), r_squared(&rescale(&m, &h, k), &h), k));
        all_m.extend(m);
        all_r.extend(h);
    }
    if per_condition.is_empty() {
        return Err(Error::Analysis("no reference series".into()));
    }
    let k = ratio(&all_m, &all_r)?;
    Ok(R2Report {
        per_condition,
        concatenated: r_squared(&rescale(&all_m, &all_r, k), &all_r),
        concatenated_ms_per_iteration: k,
    })
}
