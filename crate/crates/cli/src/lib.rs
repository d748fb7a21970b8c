//! Config-driven runner for laser-induced dipole-dipole calculations.
//!
//! A run reads one TOML file, evaluates its task at every sweep point in
//! parallel and writes rows in sweep order, plus a `<output>.meta.json`
//! sidecar with the config echo, the library version and the per-point
//! Markov diagnostics. Units are natural (`ħ = ε₀ = c = 1`): frequencies and
//! inverse lengths share one reference scale.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod model;
pub mod run;
pub mod sweep;
pub mod tasks;

pub use config::{RunConfig, Task};
pub use error::{CliError, ConfigError};
pub use run::{run, Outcome, RunOptions};
