//! Configuration parsing, run dispatch and CSV output for the `singlet`
//! command-line tool.

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod run;

pub use config::{parse_config, Mode, RunConfig};
pub use error::{CliError, ErrorCode};
pub use run::{run, Outcome};
