//! Batch front end: configuration files, binary snapshots, CSV output and
//! the `simulate`, `verify`, `norms` and `spectrum` commands.
//!
//! All files are written through a temporary file and renamed into place.

pub mod commands;
pub mod config;
pub mod init;
pub mod output;
pub mod snapshot;

pub use commands::{
    error_line, exit_code, norms, simulate, simulate_csv, spectrum, verify, NormValues, SimulateOutput,
    SpectrumOutput, Suite, VerifyOutput, SIMULATE_HEADER,
};
pub use config::{InitKind, InitSpec, RecursionParams, WorkbenchConfig};
pub use init::{initial_data, single_mode};
pub use snapshot::{decode, encode, read_snapshot, write_snapshot, MAGIC, VERSION};
