//! Persistence, document verification, plots and the command implementations
//! behind the `multcrit` binary.

pub mod commands;
mod document;
mod plot;
mod verify;

pub use document::{read_document, write_csv, write_document, ResultDocument, CSV_COLUMNS, SCHEMA_VERSION};
pub use plot::{render_svg, PlotWindow};
pub use verify::{verify_document, VerifyReport};
