//! File formats, report rendering, and the command-line interface around the
//! stance-core pipeline.

pub mod cli;
pub mod config;
pub mod dataset;
pub mod model_io;
pub mod report;
pub mod resources;

/// Prefixes an IO error with the file it concerns.
pub(crate) fn io_at(path: &std::path::Path, err: std::io::Error) -> std::io::Error {
    std::io::Error::new(err.kind(), format!("{}: {err}", path.display()))
}
