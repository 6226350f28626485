use crate::stimuli::{ItemState, Point};

use super::{Phase, TrialState};

/// Snapshot taken at the end of every iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub iteration: u32,
    pub phase: Phase,
    /// True when the parallel pass was skipped for an eye movement.
    pub frozen: bool,
    pub fixation: Point,
    pub attended: Option<usize>,
    pub priorities: Vec<f64>,
    pub states: Vec<ItemState>,
}

impl TraceRecord {
    pub(crate) fn capture(state: &TrialState, frozen: bool) -> Self {
        TraceRecord {
            iteration: state.clock,
            phase: state.phase,
            frozen,
            fixation: state.fixation,
            attended: state.attended,
            priorities: state.items.iter().map(|i| i.priority).collect(),
            states: state.items.iter().map(|i| i.state).collect(),
        }
    }
}

pub trait TraceSink {
    fn record(&mut self, record: &TraceRecord);
}

impl TraceSink for () {
    fn record(&mut self, _: &TraceRecord) {}
}

impl TraceSink for Vec<TraceRecord> {
    fn record(&mut self, record: &TraceRecord) {
        self.push(record.clone());
    }
}

fn state_name(s: ItemState) -> &'static str {
    match s {
        ItemState::Active => "active",
        ItemState::RejectedParallel => "rejected_parallel",
        ItemState::RejectedSerial => "rejected_serial",
        ItemState::Accepted => "accepted",
    }
}

/// Long-format CSV, one row per item per iteration.
pub fn trace_csv(records: &[TraceRecord]) -> String {
    let mut out = String::from(
        "iteration,phase,frozen,fixation_x,fixation_y,attended,item,priority,state\n",
    );
    for r in records {
        let attended = r.attended.map(|a| a.to_string()).unwrap_or_default();
        for (i, (p, s)) in r.priorities.iter().zip(&r.states).enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                r.iteration,
                r.phase.name(),
                r.frozen,
                r.fixation.x,
                r.fixation.y,
                attended,
                i,
                p,
                state_name(*s)
            ));
        }
    }
    out
}
