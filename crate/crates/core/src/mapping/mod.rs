//! Relational input (CSV tables) and the annotation layer binding tables
//! and attributes to ontology terms.

mod annotate;
mod spec;
mod table;
mod validate;

use thiserror::Error;

pub use annotate::{auto_annotate, normalize, AnnotationReport};
pub use spec::{parse_mapping, AttributeBinding, AttributeTarget, ConnectionHint, MappingSpec, TableBinding};
pub use table::{load_csv, TableData, Value};
pub use validate::{validate_mapping, Violation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MappingError {
    #[error("{table}: row on line {line} has the wrong number of cells")]
    RaggedRow { table: String, line: usize },
    #[error("{table}: missing or empty header")]
    EmptyHeader { table: String },
    #[error("{table}: attribute '{attribute}' appears twice in the header")]
    DuplicateAttribute { table: String, attribute: String },
    #[error("{table}: CSV error on line {line}: {reason}")]
    Csv { table: String, line: usize, reason: String },
    #[error("table '{0}' matches no ontology class")]
    UnknownTableClass(String),
    #[error("table '{table}' matches several classes: {candidates:?}")]
    AmbiguousTableClass { table: String, candidates: Vec<String> },
    #[error("mapping syntax error on line {line}: {reason}")]
    Syntax { line: usize, reason: String },
}
