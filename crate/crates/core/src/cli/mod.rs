//! Batch front-end: spec files, run configuration, node cache and commands.

mod cache;
mod commands;
mod config;
mod csv_out;
mod specfile;

pub use cache::{CacheStatus, NodeCache};
pub use commands::{execute, Outcome, CHECKS};
pub use config::{RunConfig, RunDefaults};
pub use csv_out::{num, write_atomic, Table, SCHEMA_VERSION};
pub use specfile::{parse_spec_file, Expectation, NamedSet, SpecFile};
