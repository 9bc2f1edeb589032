//! Experiment harness around `adscale-core`: figure presets, the
//! key-value config format, a deterministic parallel runner, and CSV/SVG
//! output.
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
mod error;
pub mod experiment;
pub mod output;
pub mod svg;

pub use config::{parse_config, parse_config_str, preset, ExperimentConfig, Preset};
pub use error::{LabError, Result};
pub use experiment::{run_experiment, ExperimentResult, PolicyResult};
pub use output::emit_csv;
pub use svg::emit_svg;
