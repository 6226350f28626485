//! Single-trial dynamics.
//!
//! Every iteration runs one parallel pass (skipped while the eyes are
//! moving) followed by one step of the serial phase machine:
//!
//! ```text
//! Selecting -> Shifting(covert_cost) | MovingEyes(eye_cost) -> Scrutinizing(scrutiny_cost)
//!     ^                                                              |
//!     +--------------------------- reject ---------------------------+
//! ```
//!
//! The selection iteration is the first iteration of the shift, so a
//! one-item display is accepted after `shift cost + scrutiny_cost`
//! iterations. RNG draws happen in a fixed order: initial jitter per item,
//! then per iteration the dimension sample (one draw per non-absent
//! dimension, ascending), one `rho` per live item (ascending), the
//! selection draw, and the eye-movement draw.

mod params;
mod trace;

use rand::Rng;

use crate::error::{Error, Result};
use crate::features::{classify_pairs, FeatureClass, FeatureClassification, SalienceMap};
use crate::stimuli::{superimpose_roles, Display, ItemState, Point, SearchItem, TargetTemplate};

pub use params::{EngineParams, RelevanceBasis, ENGINE_PARAM_KEYS};
pub use trace::{trace_csv, TraceRecord, TraceSink};

/// Distance weight: `max(0, 1 - D / d_max)`.
pub fn distance_weight(position: Point, fixation: Point, d_max: f64) -> f64 {
    (1.0 - position.distance(fixation) / d_max).max(0.0)
}

/// Draws the dimensions compared on one parallel pass. Absent dimensions
/// are never drawn.
pub fn sample_dimensions<R: Rng + ?Sized>(
    classification: &FeatureClassification,
    params: &EngineParams,
    rng: &mut R,
) -> Vec<usize> {
    let mut out = Vec::new();
    for (k, class) in classification.classes().iter().enumerate() {
        let p = match class {
            FeatureClass::Relevant => params.p_sample_relevant,
            FeatureClass::Irrelevant => params.p_sample_irrelevant,
            FeatureClass::Absent => continue,
        };
        if rng.gen::<f64>() < p {
            out.push(k);
        }
    }
    out
}

/// Classifies the dimensions of a template against a set of items, using
/// the comparison basis in `params`.
pub fn classify_features<'a, I>(
    template: &TargetTemplate,
    items: I,
    params: &EngineParams,
) -> Result<FeatureClassification>
where
    I: IntoIterator<Item = &'a [crate::stimuli::RoleBoundVector]>,
{
    let width = template.layout().width();
    let roles: Vec<_> = template.role_set();
    let items: Vec<&[crate::stimuli::RoleBoundVector]> = items.into_iter().collect();
    for it in &items {
        if it.iter().map(|r| r.role).ne(roles.iter().copied()) {
            return Err(Error::RoleMismatch);
        }
    }
    let pooled = || {
        let t = superimpose_roles(&template.roles, params.pooling);
        let pooled: Vec<Vec<i8>> = items
            .iter()
            .map(|it| superimpose_roles(it, params.pooling))
            .collect();
        classify_pairs(width, pooled.iter().map(|v| (t.as_slice(), v.as_slice())))
    };
    let role_bound = || {
        classify_pairs(
            width,
            items.iter().flat_map(|it| {
                template
                    .roles
                    .iter()
                    .zip(it.iter())
                    .map(|(a, b)| (a.vector.values(), b.vector.values()))
            }),
        )
    };
    match params.relevance {
        RelevanceBasis::Pooled => pooled(),
        RelevanceBasis::RoleBound => role_bound(),
        RelevanceBasis::PooledFallback => {
            let c = pooled()?;
            let weight: f64 = c.relevant().map(|k| template.salience.get(k)).sum();
            if weight > 0.0 {
                Ok(c)
            } else {
                role_bound()
            }
        }
    }
}

/// Per-dimension match terms `m * w * eta` against a fixed template.
#[derive(Debug, Clone)]
pub struct Matcher {
    template: Vec<i8>,
    salience: Vec<f64>,
    relevant_salience: f64,
    w_present: f64,
    w_absent: f64,
    tau: f64,
}

impl Matcher {
    /// Fails with [`Error::DegenerateDisplay`] when the salience-weighted
    /// count of relevant dimensions is zero.
    pub fn new(
        template: &TargetTemplate,
        classification: &FeatureClassification,
        params: &EngineParams,
    ) -> Result<Self> {
        let pooled = superimpose_roles(&template.roles, params.pooling);
        Matcher::from_parts(pooled, &template.salience, classification, params)
    }

    pub fn from_parts(
        template: Vec<i8>,
        salience: &SalienceMap,
        classification: &FeatureClassification,
        params: &EngineParams,
    ) -> Result<Self> {
        if template.len() != classification.len() || template.len() != salience.len() {
            return Err(Error::LayoutMismatch {
                expected: template.len(),
                found: classification.len(),
            });
        }
        let relevant_salience: f64 = classification.relevant().map(|k| salience.get(k)).sum();
        if relevant_salience <= 0.0 {
            return Err(Error::DegenerateDisplay);
        }
        Ok(Matcher {
            template,
            salience: salience.values().to_vec(),
            relevant_salience,
            w_present: params.w_present,
            w_absent: params.w_absent,
            tau: params.tau,
        })
    }

    pub fn relevant_salience(&self) -> f64 {
        self.relevant_salience
    }

    /// `m(i_k, T_k) * w_k * eta_k` for one dimension.
    pub fn term(&self, item: &[i8], k: usize) -> f64 {
        let t = self.template[k];
        let m = if item[k] == t { 1.0 } else { -1.0 };
        let w = if t != 0 { self.w_present } else { self.w_absent };
        m * w * self.salience[k]
    }

    /// Match terms for every dimension of one item.
    pub fn terms(&self, item: &[i8]) -> Vec<f64> {
        (0..self.template.len()).map(|k| self.term(item, k)).collect()
    }

    /// Parallel match of a pooled item vector over the sampled dimensions.
    pub fn parallel_match(&self, item: &[i8], sampled: &[usize]) -> f64 {
        let sum: f64 = sampled.iter().map(|&k| self.term(item, k)).sum();
        self.tau * sum / self.relevant_salience
    }
}

/// `p * (1 - delta) + eps * phi * rho`.
pub fn priority_step(priority: f64, eps: f64, phi: f64, rho: f64, delta: f64) -> f64 {
    priority * (1.0 - delta) + eps * phi * rho
}

/// Applies one priority update with a fresh `rho ~ U(0, 1)`.
pub fn update_priority<R: Rng + ?Sized>(
    priority: f64,
    eps: f64,
    phi: f64,
    params: &EngineParams,
    rng: &mut R,
) -> f64 {
    let rho: f64 = rng.gen();
    priority_step(priority, eps, phi, rho, params.delta)
}

/// Selection weights `p_i * eps_i` for live items; dead items weigh zero.
pub fn selection_weights(items: &[SearchItem], fixation: Point, d_max: f64) -> Vec<f64> {
    items
        .iter()
        .map(|it| {
            if it.state == ItemState::Active {
                (it.priority * distance_weight(it.position, fixation, d_max)).max(0.0)
            } else {
                0.0
            }
        })
        .collect()
}

/// Draws an index with probability proportional to its weight. `None`
/// when every weight is zero.
pub fn luce_choice<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> Option<usize> {
    let total: f64 = weights.iter().sum();
    if !(total > 0.0) {
        return None;
    }
    let mut x = rng.gen::<f64>() * total;
    let mut last = None;
    for (i, &w) in weights.iter().enumerate() {
        if w <= 0.0 {
            continue;
        }
        if x < w {
            return Some(i);
        }
        x -= w;
        last = Some(i);
    }
    last
}

/// Luce selection over live items.
pub fn luce_select<R: Rng + ?Sized>(
    items: &[SearchItem],
    fixation: Point,
    params: &EngineParams,
    rng: &mut R,
) -> Option<usize> {
    luce_choice(&selection_weights(items, fixation, params.d_max), rng)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shift {
    Covert,
    Overt,
}

/// Overt with probability equal to the selected item's distance weight.
pub fn maybe_move_eyes<R: Rng + ?Sized>(
    position: Point,
    fixation: Point,
    params: &EngineParams,
    rng: &mut R,
) -> Shift {
    if !params.eyes_enabled {
        return Shift::Covert;
    }
    let eps = distance_weight(position, fixation, params.d_max);
    if rng.gen::<f64>() < eps {
        Shift::Overt
    } else {
        Shift::Covert
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
}

/// Strict comparison of every role-bound vector, roles included.
pub fn scrutinize(item: &SearchItem, template: &TargetTemplate) -> Verdict {
    if item.roles == template.roles {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Selecting,
    Shifting { remaining: u32 },
    MovingEyes { remaining: u32 },
    Scrutinizing { remaining: u32 },
}

impl Phase {
    pub fn name(&self) -> &'static str {
        match self {
            Phase::Selecting => "selecting",
            Phase::Shifting { .. } => "shifting",
            Phase::MovingEyes { .. } => "moving_eyes",
            Phase::Scrutinizing { .. } => "scrutinizing",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    TargetFound,
    /// Every item was rejected. In a target-present trial this is a miss.
    AllRejected,
    IterationCap,
}

impl Outcome {
    pub fn name(self) -> &'static str {
        match self {
            Outcome::TargetFound => "target_found",
            Outcome::AllRejected => "all_rejected",
            Outcome::IterationCap => "iteration_cap",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub rt_iterations: u32,
    pub outcome: Outcome,
    /// Index of the accepted item, if any.
    pub accepted: Option<usize>,
    pub n_serial_inspections: u32,
    pub n_parallel_rejections: u32,
    /// Starting fixation followed by each overt landing point.
    pub fixation_trace: Vec<Point>,
}

/// Mutable state of one running trial.
#[derive(Debug, Clone)]
pub struct TrialState {
    pub clock: u32,
    pub fixation: Point,
    pub attended: Option<usize>,
    pub phase: Phase,
    pub items: Vec<SearchItem>,
    pub classification: FeatureClassification,
    pending_shift: Option<Shift>,
}

/// Runs one trial, classifying features over this display.
pub fn run_trial<R: Rng + ?Sized>(
    display: &Display,
    template: &TargetTemplate,
    params: &EngineParams,
    rng: &mut R,
) -> Result<TrialResult> {
    let classification =
        classify_features(template, display.items.iter().map(|i| i.roles.as_slice()), params)?;
    run_trial_classified(display, template, &classification, params, rng, &mut ())
}

/// Runs one trial with a precomputed classification, streaming per-iteration
/// records into `trace`.
pub fn run_trial_classified<R: Rng + ?Sized, T: TraceSink + ?Sized>(
    display: &Display,
    template: &TargetTemplate,
    classification: &FeatureClassification,
    params: &EngineParams,
    rng: &mut R,
    trace: &mut T,
) -> Result<TrialResult> {
    params.validate()?;
    if display.is_empty() {
        return Err(Error::InvalidExperiment("empty display".into()));
    }
    let width = template.layout().width();
    for item in &display.items {
        if item.layout().width() != width {
            return Err(Error::LayoutMismatch {
                expected: width,
                found: item.layout().width(),
            });
        }
    }
    let matcher = Matcher::new(template, classification, params)?;
    let terms: Vec<Vec<f64>> = display
        .items
        .iter()
        .map(|it| matcher.terms(&superimpose_roles(&it.roles, params.pooling)))
        .collect();
    let scale = params.tau / matcher.relevant_salience();

    let mut state = TrialState {
        clock: 0,
        fixation: Point::ORIGIN,
        attended: None,
        phase: Phase::Selecting,
        items: display.items.clone(),
        classification: classification.clone(),
        pending_shift: None,
    };
    for item in &mut state.items {
        let jitter = if params.init_jitter > 0.0 {
            rng.gen_range(-params.init_jitter..params.init_jitter)
        } else {
            0.0
        };
        item.priority = 1.0 + jitter;
        item.state = ItemState::Active;
    }

    let mut result = TrialResult {
        rt_iterations: 0,
        outcome: Outcome::IterationCap,
        accepted: None,
        n_serial_inspections: 0,
        n_parallel_rejections: 0,
        fixation_trace: vec![state.fixation],
    };

    while state.clock < params.iteration_cap {
        let frozen = matches!(state.phase, Phase::MovingEyes { .. });
        if !frozen {
            let sampled = sample_dimensions(&state.classification, params, rng);
            for (i, item) in state.items.iter_mut().enumerate() {
                if item.state != ItemState::Active {
                    continue;
                }
                let phi = scale * sampled.iter().map(|&k| terms[i][k]).sum::<f64>();
                let eps = distance_weight(item.position, state.fixation, params.d_max);
                item.priority = update_priority(item.priority, eps, phi, params, rng);
                if item.priority < params.p_min && state.attended != Some(i) {
                    item.state = ItemState::RejectedParallel;
                    result.n_parallel_rejections += 1;
                }
            }
        }

        let done = serial_step(&mut state, template, params, rng, &mut result);
        trace.record(&TraceRecord::capture(&state, frozen));
        state.clock += 1;
        if let Some(outcome) = done {
            result.outcome = outcome;
            result.rt_iterations = state.clock;
            return Ok(result);
        }
    }
    result.outcome = Outcome::IterationCap;
    result.rt_iterations = state.clock;
    Ok(result)
}

fn serial_step<R: Rng + ?Sized>(
    state: &mut TrialState,
    template: &TargetTemplate,
    params: &EngineParams,
    rng: &mut R,
    result: &mut TrialResult,
) -> Option<Outcome> {
    match state.phase {
        Phase::Selecting => {
            let chosen = match luce_select(&state.items, state.fixation, params, rng) {
                Some(i) => i,
                None => return Some(Outcome::AllRejected),
            };
            state.attended = Some(chosen);
            let shift = maybe_move_eyes(state.items[chosen].position, state.fixation, params, rng);
            state.pending_shift = Some(shift);
            state.phase = match shift {
                Shift::Covert => Phase::Shifting {
                    remaining: params.covert_cost,
                },
                Shift::Overt => Phase::MovingEyes {
                    remaining: params.eye_cost,
                },
            };
            advance_shift(state, params, &mut result.fixation_trace);
            None
        }
        Phase::Shifting { .. } | Phase::MovingEyes { .. } => {
            advance_shift(state, params, &mut result.fixation_trace);
            None
        }
        Phase::Scrutinizing { remaining } => {
            if remaining > 1 {
                state.phase = Phase::Scrutinizing {
                    remaining: remaining - 1,
                };
                return None;
            }
            let idx = state.attended.take().expect("scrutiny without attended item");
            result.n_serial_inspections += 1;
            state.phase = Phase::Selecting;
            match scrutinize(&state.items[idx], template) {
                Verdict::Accept => {
                    state.items[idx].state = ItemState::Accepted;
                    result.accepted = Some(idx);
                    Some(Outcome::TargetFound)
                }
                Verdict::Reject => {
                    state.items[idx].state = ItemState::RejectedSerial;
                    if state.items.iter().all(|i| i.state.is_rejected()) {
                        Some(Outcome::AllRejected)
                    } else {
                        None
                    }
                }
            }
        }
    }
}

/// Consumes one iteration of an in-flight shift; on completion moves the
/// eyes (if overt) and enters scrutiny.
fn advance_shift(state: &mut TrialState, params: &EngineParams, fixations: &mut Vec<Point>) {
    let remaining = match state.phase {
        Phase::Shifting { remaining } | Phase::MovingEyes { remaining } => remaining - 1,
        _ => unreachable!(),
    };
    if remaining > 0 {
        state.phase = match state.phase {
            Phase::Shifting { .. } => Phase::Shifting { remaining },
            _ => Phase::MovingEyes { remaining },
        };
        return;
    }
    if state.pending_shift.take() == Some(Shift::Overt) {
        let idx = state.attended.expect("shift without attended item");
        state.fixation = state.items[idx].position;
        fixations.push(state.fixation);
    }
    state.phase = Phase::Scrutinizing {
        remaining: params.scrutiny_cost,
    };
}
