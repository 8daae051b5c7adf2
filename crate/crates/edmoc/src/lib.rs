//! File formats, plotting and the `edmoc` command-line interface on top of
//! [`edmoc_core`].

pub mod cli;
pub mod clock;
pub mod commands;
pub mod error;
pub mod io;
pub mod manifest;
pub mod svg;

pub use cli::Cli;
pub use clock::WallClock;
pub use commands::run;
pub use error::{CliError, CliResult};
pub use io::{load_dissimilarities, load_instance};
pub use manifest::RunManifest;
