//! File formats and human-facing output.

pub mod document;
pub mod dot;
pub mod reference;
pub mod table;

pub use document::{DocumentError, PlanDocument, FORMAT_VERSION};
pub use dot::export_dot;
pub use reference::{reported_counts, ReportedCounts};
pub use table::{ComparisonTable, RowSource, TableRow};
