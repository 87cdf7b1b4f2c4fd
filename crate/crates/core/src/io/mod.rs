//! Configuration, checkpoints and diagnostics files.

mod checkpoint;
mod config;
mod diagnostics;

pub use checkpoint::{
    decode_checkpoint, encode_checkpoint, read_checkpoint, write_checkpoint, CheckpointError, MAGIC, VERSION,
};
pub use config::{ConfigError, PerturbationConfig, PerturbationKindName, RunConfig};
pub use diagnostics::{
    format_float, read_diagnostics, write_diagnostics, DiagnosticsRow, CSV_HEADER, CSV_SCHEMA_VERSION,
};
