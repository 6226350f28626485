use std::str::FromStr;

use crate::error::{Error, Result};
use crate::stimuli::Pooling;

/// Which comparisons decide whether a dimension is relevant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelevanceBasis {
    /// Compare pooled (role-stripped) vectors.
    Pooled,
    /// Compare template and item role by role; a dimension is relevant if
    /// any role's filler differs on it.
    RoleBound,
    /// Pooled, unless that leaves no salient relevant dimension (targets
    /// that differ from distractors only in role bindings); then role-bound.
    PooledFallback,
}

impl RelevanceBasis {
    pub fn name(self) -> &'static str {
        match self {
            RelevanceBasis::Pooled => "pooled",
            RelevanceBasis::RoleBound => "role_bound",
            RelevanceBasis::PooledFallback => "pooled_fallback",
        }
    }
}

impl FromStr for RelevanceBasis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pooled" => Ok(RelevanceBasis::Pooled),
            "role_bound" => Ok(RelevanceBasis::RoleBound),
            "pooled_fallback" => Ok(RelevanceBasis::PooledFallback),
            other => Err(Error::InvalidParam {
                key: "relevance".into(),
                value: other.into(),
            }),
        }
    }
}

/// Model constants. Defaults are the published values.
#[derive(Debug, Clone, PartialEq)]
pub struct EngineParams {
    /// Decay factor; priorities are multiplied by `1 - delta` each pass.
    pub delta: f64,
    /// Strength of parallel matching.
    pub tau: f64,
    /// Rejection threshold.
    pub p_min: f64,
    /// Distance (visual-field radii) at which the distance weight reaches zero.
    pub d_max: f64,
    /// Match weight when the template has the feature.
    pub w_present: f64,
    /// Match weight when only the item has the feature.
    pub w_absent: f64,
    pub p_sample_relevant: f64,
    pub p_sample_irrelevant: f64,
    /// Iterations per overt (eye) movement; parallel processing is frozen.
    pub eye_cost: u32,
    /// Iterations per covert attention shift.
    pub covert_cost: u32,
    /// Iterations of scrutiny after a shift completes.
    pub scrutiny_cost: u32,
    pub eyes_enabled: bool,
    /// Half-width of the uniform jitter on initial priorities.
    pub init_jitter: f64,
    pub iteration_cap: u32,
    pub pooling: Pooling,
    pub relevance: RelevanceBasis,
}

impl Default for EngineParams {
    fn default() -> Self {
        EngineParams {
            delta: 0.5,
            tau: 3.0,
            p_min: 0.001,
            d_max: 4.0,
            w_present: 3.0,
            w_absent: 0.1,
            p_sample_relevant: 0.85,
            p_sample_irrelevant: 0.15,
            eye_cost: 30,
            covert_cost: 2,
            scrutiny_cost: 1,
            eyes_enabled: true,
            init_jitter: 0.1,
            iteration_cap: 100_000,
            pooling: Pooling::PresenceUnion,
            relevance: RelevanceBasis::PooledFallback,
        }
    }
}

/// Keys accepted by [`EngineParams::set`], in canonical order.
pub const ENGINE_PARAM_KEYS: &[&str] = &[
    "delta",
    "tau",
    "p_min",
    "d_max",
    "w_present",
    "w_absent",
    "p_sample_relevant",
    "p_sample_irrelevant",
    "eye_cost",
    "covert_cost",
    "scrutiny_cost",
    "eyes_enabled",
    "init_jitter",
    "iteration_cap",
    "pooling",
    "relevance",
];

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::InvalidParam {
        key: key.to_string(),
        value: value.to_string(),
    })
}

impl EngineParams {
    /// Sets one parameter by its documented key.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "delta" => self.delta = parse(key, value)?,
            "tau" => self.tau = parse(key, value)?,
            "p_min" => self.p_min = parse(key, value)?,
            "d_max" => self.d_max = parse(key, value)?,
            "w_present" => self.w_present = parse(key, value)?,
            "w_absent" => self.w_absent = parse(key, value)?,
            "p_sample_relevant" => self.p_sample_relevant = parse(key, value)?,
            "p_sample_irrelevant" => self.p_sample_irrelevant = parse(key, value)?,
            "eye_cost" => self.eye_cost = parse(key, value)?,
            "covert_cost" => self.covert_cost = parse(key, value)?,
            "scrutiny_cost" => self.scrutiny_cost = parse(key, value)?,
            "eyes_enabled" => self.eyes_enabled = parse(key, value)?,
            "init_jitter" => self.init_jitter = parse(key, value)?,
            "iteration_cap" => self.iteration_cap = parse(key, value)?,
            "pooling" => self.pooling = value.parse()?,
            "relevance" => self.relevance = value.parse()?,
            other => return Err(Error::UnknownParam(other.to_string())),
        }
        Ok(())
    }

    /// Current value of a parameter, formatted as [`EngineParams::set`] accepts it.
    pub fn get(&self, key: &str) -> Option<String> {
        Some(match key {
            "delta" => self.delta.to_string(),
            "tau" => self.tau.to_string(),
            "p_min" => self.p_min.to_string(),
            "d_max" => self.d_max.to_string(),
            "w_present" => self.w_present.to_string(),
            "w_absent" => self.w_absent.to_string(),
            "p_sample_relevant" => self.p_sample_relevant.to_string(),
            "p_sample_irrelevant" => self.p_sample_irrelevant.to_string(),
            "eye_cost" => self.eye_cost.to_string(),
            "covert_cost" => self.covert_cost.to_string(),
            "scrutiny_cost" => self.scrutiny_cost.to_string(),
            "eyes_enabled" => self.eyes_enabled.to_string(),
            "init_jitter" => self.init_jitter.to_string(),
            "iteration_cap" => self.iteration_cap.to_string(),
            "pooling" => self.pooling.name().to_string(),
            "relevance" => self.relevance.name().to_string(),
            _ => return None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return fail("delta must lie in (0, 1)");
        }
        if !(self.tau >= 0.0) {
            return fail("tau must be nonnegative");
        }
        if !(self.p_min > 0.0) {
            return fail("p_min must be positive");
        }
        if !(self.d_max > 0.0) {
            return fail("d_max must be positive");
        }
        for p in [self.p_sample_relevant, self.p_sample_irrelevant] {
            if !(0.0..=1.0).contains(&p) {
                return fail("sampling probabilities must lie in [0, 1]");
            }
        }
        if self.covert_cost == 0 || self.eye_cost == 0 || self.scrutiny_cost == 0 {
            return fail("shift, eye-movement and scrutiny costs must be at least 1");
        }
        if !(self.init_jitter >= 0.0 && self.init_jitter < 1.0) {
            return fail("init_jitter must lie in [0, 1)");
        }
        if self.iteration_cap == 0 {
            return fail("iteration_cap must be positive");
        }
        Ok(())
    }
}
