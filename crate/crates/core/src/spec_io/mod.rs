//! Reading and writing `.canvas.json` documents, lint reports, and the JSON
//! shape of operation plans.

mod document;
mod lint;
mod parse;
mod plans;
mod write;

use thiserror::Error;

pub use document::{
    CanvasDocument, ChannelDoc, DatasetDoc, EquivalenceDoc, SeriesDoc, ViewDoc, VisualDoc, DOCUMENT_VERSION,
};
pub use lint::{format_lint_report, lint_report, LintEntry, LintReport, ReportStyle};
pub use parse::{from_document, parse_canvas, parse_canvas_in};
pub use plans::{plan_menu, PlanDoc, PlanMenu};
pub use write::{serialize_canvas, to_document};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid canvas document:\n  {}", .0.join("\n  "))]
    Validation(Vec<String>),
}
