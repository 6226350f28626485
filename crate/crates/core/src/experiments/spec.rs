use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::engine::{classify_features, EngineParams, ENGINE_PARAM_KEYS};
use crate::error::{Error, Result};
use crate::features::{FeatureClassification, Layout, SalienceMap, Segment, EMERGENT_WIDTH};
use crate::stimuli::{
    attach_higher_order, emergent_pattern, make_roles, set_emergent, HigherOrderKind,
    ItemExpr, ItemPrototypes, LayoutParams, TargetTemplate, EMERGENT_TARGET,
};

/// Geometry keys accepted alongside the engine keys.
pub const LAYOUT_PARAM_KEYS: &[&str] = &["ring_radius", "ring_capacity", "ring_spacing"];

fn set_layout_param(geometry: &mut LayoutParams, key: &str, value: &str) -> Result<()> {
    let bad = || Error::InvalidParam {
        key: key.to_string(),
        value: value.to_string(),
    };
    match key {
        "ring_radius" => geometry.ring_radius = value.parse().map_err(|_| bad())?,
        "ring_capacity" => geometry.ring_capacity = value.parse().map_err(|_| bad())?,
        "ring_spacing" => geometry.ring_spacing = value.parse().map_err(|_| bad())?,
        other => return Err(Error::UnknownParam(other.to_string())),
    }
    Ok(())
}

/// Partial parameter set, kept as text in canonical key order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ParamOverrides(BTreeMap<String, String>);

impl ParamOverrides {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records an override after checking that the key exists and the
    /// value parses.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if ENGINE_PARAM_KEYS.contains(&key) {
            EngineParams::default().set(key, value)?;
        } else if LAYOUT_PARAM_KEYS.contains(&key) {
            set_layout_param(&mut LayoutParams::default(), key, value)?;
        } else {
            return Err(Error::UnknownParam(key.to_string()));
        }
        self.0.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.0.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, params: &mut EngineParams, geometry: &mut LayoutParams) -> Result<()> {
        for (k, v) in self.iter() {
            if LAYOUT_PARAM_KEYS.contains(&k) {
                set_layout_param(geometry, k, v)?;
            } else {
                params.set(k, v)?;
            }
        }
        Ok(())
    }
}

/// Which items a higher-order pattern is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HigherOrderScope {
    Both,
    Target,
    Distractor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HigherOrderSpec {
    pub scope: HigherOrderScope,
    pub kind: HigherOrderKind,
    /// Half-width of the pattern (`n` zeros and `n` ones).
    pub n: usize,
}

/// A salience override for a whole segment or one labelled dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct SalienceOverride {
    pub target: SalienceTarget,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SalienceTarget {
    Segment(Segment),
    Dimension(String),
}

impl fmt::Display for SalienceTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SalienceTarget::Segment(s) => f.write_str(s.name()),
            SalienceTarget::Dimension(d) => f.write_str(d),
        }
    }
}

impl FromStr for SalienceTarget {
    type Err = Error;

    /// Segment names win; anything else must be a dimension label of the
    /// experiment layout (checked at resolution).
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.parse::<Segment>() {
            Ok(seg) => SalienceTarget::Segment(seg),
            Err(_) => SalienceTarget::Dimension(s.to_string()),
        })
    }
}

/// One named condition of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionSpec {
    pub name: String,
    pub target: ItemExpr,
    /// Distractor types, dealt evenly across each display.
    pub distractors: Vec<ItemExpr>,
    pub salience: Vec<SalienceOverride>,
    /// Salience of the emergent units, when the condition uses them.
    pub emergent: Option<f64>,
    pub higher_order: Vec<HigherOrderSpec>,
    pub params: ParamOverrides,
}

impl ConditionSpec {
    pub fn new(name: &str, target: ItemExpr, distractors: Vec<ItemExpr>) -> Self {
        ConditionSpec {
            name: name.to_string(),
            target,
            distractors,
            salience: Vec::new(),
            emergent: None,
            higher_order: Vec::new(),
            params: ParamOverrides::new(),
        }
    }
}

/// A complete, runnable experiment definition.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub seed: u64,
    pub n_subjects: usize,
    pub trials_per_cell: usize,
    pub set_sizes: Vec<usize>,
    pub params: ParamOverrides,
    pub conditions: Vec<ConditionSpec>,
}

/// A condition turned into vectors, ready to generate displays.
#[derive(Debug, Clone)]
pub struct ResolvedCondition {
    pub name: String,
    pub prototypes: ItemPrototypes,
    pub classification: FeatureClassification,
    pub params: EngineParams,
    pub geometry: LayoutParams,
}

impl ExperimentSpec {
    /// Vector layout shared by every condition: wide enough for the
    /// largest higher-order pattern, with emergent units if any condition
    /// uses them.
    pub fn layout(&self) -> Layout {
        let higher_order = self
            .conditions
            .iter()
            .flat_map(|c| c.higher_order.iter().map(|h| 2 * h.n))
            .max()
            .unwrap_or(0);
        let emergent = if self.conditions.iter().any(|c| c.emergent.is_some()) {
            EMERGENT_WIDTH
        } else {
            0
        };
        Layout {
            higher_order,
            emergent,
        }
    }

    pub fn condition_index(&self, name: &str) -> Option<usize> {
        self.conditions.iter().position(|c| c.name == name)
    }

    /// Structural checks plus a full resolution of every condition.
    pub fn validate(&self) -> Result<()> {
        self.resolve().map(|_| ())
    }

    pub fn resolve(&self) -> Result<Vec<ResolvedCondition>> {
        let fail = |m: String| Err(Error::InvalidExperiment(m));
        if self.conditions.is_empty() {
            return fail("no conditions".into());
        }
        if self.set_sizes.is_empty() {
            return fail("set_sizes is empty".into());
        }
        if self.set_sizes.contains(&0) {
            return fail("set sizes must be at least 1".into());
        }
        if self.n_subjects == 0 || self.trials_per_cell == 0 {
            return fail("subjects and trials must be at least 1".into());
        }
        for (i, c) in self.conditions.iter().enumerate() {
            if self.conditions[..i].iter().any(|d| d.name == c.name) {
                return fail(format!("duplicate condition `{}`", c.name));
            }
        }
        let layout = self.layout();
        self.conditions
            .iter()
            .map(|c| self.resolve_condition(c, layout))
            .collect()
    }

    fn resolve_condition(&self, c: &ConditionSpec, layout: Layout) -> Result<ResolvedCondition> {
        let mut params = EngineParams::default();
        let mut geometry = LayoutParams::default();
        self.params.apply(&mut params, &mut geometry)?;
        c.params.apply(&mut params, &mut geometry)?;
        params.validate()?;
        if c.distractors.is_empty() {
            return Err(Error::InvalidExperiment(format!(
                "condition `{}` has no distractors",
                c.name
            )));
        }

        let mut target = make_roles(&c.target, layout)?;
        let mut distractors = c
            .distractors
            .iter()
            .map(|d| make_roles(d, layout))
            .collect::<Result<Vec<_>>>()?;
        for d in &distractors {
            if d.iter().map(|r| r.role).ne(target.iter().map(|r| r.role)) {
                return Err(Error::RoleMismatch);
            }
        }
        for h in &c.higher_order {
            if h.scope != HigherOrderScope::Distractor {
                attach_higher_order(&mut target, h.kind, h.n)?;
            }
            if h.scope != HigherOrderScope::Target {
                for d in &mut distractors {
                    attach_higher_order(d, h.kind, h.n)?;
                }
            }
        }

        let mut salience = SalienceMap::uniform(layout);
        if let Some(eta) = c.emergent {
            for d in &mut distractors {
                let pattern = emergent_pattern(&target, d);
                set_emergent(d, pattern)?;
            }
            set_emergent(&mut target, EMERGENT_TARGET)?;
            salience.set_segment(layout, Segment::Emergent, eta)?;
        }
        for s in &c.salience {
            match &s.target {
                SalienceTarget::Segment(seg) => salience.set_segment(layout, *seg, s.eta)?,
                SalienceTarget::Dimension(label) => {
                    let k = layout
                        .dimension_index(label)
                        .ok_or_else(|| Error::UnknownDimension(label.clone()))?;
                    salience.set(k, s.eta)?;
                }
            }
        }

        let template = TargetTemplate {
            roles: target.clone(),
            salience,
        };
        let classification = classify_features(
            &template,
            std::iter::once(target.as_slice()).chain(distractors.iter().map(Vec::as_slice)),
            &params,
        )?;
        // Fail early rather than on the first trial.
        crate::engine::Matcher::new(&template, &classification, &params)?;
        Ok(ResolvedCondition {
            name: c.name.clone(),
            prototypes: ItemPrototypes {
                template,
                target,
                distractors,
            },
            classification,
            params,
            geometry,
        })
    }
}
