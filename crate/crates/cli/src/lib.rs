//! Batch driver for the `lifshitz-core` calculations.
//!
//! A TOML config names materials and atoms, picks one scenario and its
//! geometry, and produces a table of [`Record`]s in CSV or JSON-lines form.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod run;
pub mod validate;

pub use config::{Format, ScenarioConfig, ScenarioKind};
pub use error::CliError;
pub use output::{read_csv_records, read_json_records, write_records, Record};
pub use run::{run_scenario, RunOutput};
pub use validate::{has_errors, validate_config, Diagnostic, Severity};
