//! SPARQL-subset queries: parsing, serialization, evaluation, the depth
//! metric and intent-driven synthesis against either schema.

mod ast;
mod eval;
mod intent;
mod parse;
mod synth;

use thiserror::Error;

pub use ast::{query_depth, BgpQuery, CompareOp, Filter, PatternTerm, Projection, TriplePattern};
pub use eval::{evaluate, evaluate_indexed, GraphIndex, ResultSet};
pub use intent::{parse_intents, AttrRef, IntentFilter, IntentKind, QueryIntent};
pub use parse::parse_sparql;
pub use synth::{attribute_var, synthesize, SchemaView, COUNT_VAR, ROW_VAR};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QueryError {
    #[error("syntax error on line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("the pattern graph is not connected")]
    DisconnectedPattern,
    #[error("variable ?{0} does not occur in any triple pattern")]
    UnboundVariable(String),
    #[error("filter on ?{var} compares the non-numeric value {value}")]
    TypeMismatch { var: String, value: String },
    #[error("attribute {table}.{attribute} cannot be reached in this schema")]
    UnreachableAttribute { table: String, attribute: String },
    #[error("intent '{name}': {reason}")]
    InvalidIntent { name: String, reason: String },
}
