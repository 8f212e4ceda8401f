//! The sheaf document format and the `sheaflab` command-line tool.

pub mod app;
pub mod document;
pub mod number;

pub use app::{run, EXIT_ERROR, EXIT_INCONSISTENT, EXIT_OK};
pub use document::{
    parse_sheaf_document, DocumentError, IntervalStanza, NamedValues, ParseMode, ResolvedSheaf,
    SheafDocument, FORMAT_VERSION,
};
