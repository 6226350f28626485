//! CASPER: a stochastic model of visual search in which a parallel process
//! continuously re-prioritizes display items by partial feature matching
//! while a serial process inspects one item at a time.
//!
//! The crate is organized bottom-up:
//!
//! * [`features`]: trinary color and shape encodings and dimension classes.
//! * [`stimuli`]: items, relational roles, display geometry and the
//!   experiment definition grammar.
//! * [`engine`]: single-trial dynamics.
//! * [`experiments`]: the ten shipped simulations and the multi-subject runner.
//! * [`analysis`]: RT curves, regressions and comparisons with human data.
//! * [`cli`]: the `casper` command-line tool.

pub mod error;
pub mod features;
pub mod stimuli;
pub mod engine;
pub mod experiments;
pub mod analysis;
pub mod cli;

pub use error::{Error, Result};
