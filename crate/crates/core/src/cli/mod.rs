//! Command-line front end: config parsing, table export and the run driver.

pub mod config;
pub mod run;
pub mod table;
pub mod verify;

pub use config::{parse_config, ConfigDoc, ConfigError, Format, Mode, RunConfig};
pub use run::{execute, run, Outcome, RunError};
pub use table::{write_table, Cell, Table, WriteError};
