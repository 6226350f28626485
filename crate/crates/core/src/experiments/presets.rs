use crate::error::{Error, Result};
use crate::stimuli::parse_experiment;

use super::ExperimentSpec;

/// Identifiers of the shipped simulations.
pub const PRESET_IDS: [&str; 10] = [
    "sim1", "sim2", "sim3", "sim4", "sim5", "sim6", "sim7", "sim8", "sim9", "sim10",
];

const SOURCES: [&str; 10] = [
    include_str!("../../presets/sim1.casper"),
    include_str!("../../presets/sim2.casper"),
    include_str!("../../presets/sim3.casper"),
    include_str!("../../presets/sim4.casper"),
    include_str!("../../presets/sim5.casper"),
    include_str!("../../presets/sim6.casper"),
    include_str!("../../presets/sim7.casper"),
    include_str!("../../presets/sim8.casper"),
    include_str!("../../presets/sim9.casper"),
    include_str!("../../presets/sim10.casper"),
];

/// Definition text of a preset.
pub fn preset_source(id: &str) -> Result<&'static str> {
    PRESET_IDS
        .iter()
        .position(|p| *p == id)
        .map(|i| SOURCES[i])
        .ok_or_else(|| Error::UnknownPreset(id.to_string()))
}

pub fn preset(id: &str) -> Result<ExperimentSpec> {
    parse_experiment(preset_source(id)?)
}
