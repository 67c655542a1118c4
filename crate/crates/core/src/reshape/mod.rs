//! Turns a knowledge-oriented ontology into a compact, data-oriented KG
//! schema: select the mapped sub-graph, join its fragments, then contract
//! every class that carries no data.

mod compact;
mod connect;
mod select;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::mapping::{ConnectionHint, MappingSpec};
use crate::ontology::{Direction, OntologyGraph, SchemaPath};
use crate::rdf::{local_name, namespace, serialize_turtle};

pub use compact::compact;
pub use connect::{connect_fragments, ConnectedSchema, ConnectorEntry};
pub use select::{data_domain, select_subgraph, Fragment, FragmentSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReshapeError {
    #[error("contraction would loop a class onto itself: {path}")]
    CompactionCycle { path: String },
}

/// One hop from a table class to an elevated class in the reshaped schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinkStep {
    pub property: String,
    pub direction: Direction,
}

/// Where an attribute's values live in the reshaped schema.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttributeHome {
    /// Literal of `property` on an instance of `host`.
    Data { host: String, property: String },
    /// Key literal of an entity of `class`. `link` leads there from the row
    /// entity; it is `None` when `class` is the table class itself or when
    /// the two are not connected.
    Key { class: String, link: Option<LinkStep> },
}

impl AttributeHome {
    pub fn host(&self) -> &str {
        match self {
            AttributeHome::Data { host, .. } => host,
            AttributeHome::Key { class, .. } => class,
        }
    }
}

/// Datatype property carrying the key value of an elevated class.
pub fn key_property(class: &str) -> String {
    format!("{}key_{}", namespace(class), local_name(class))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReshapedSchema {
    pub ontology: OntologyGraph,
    /// Keyed by (table, attribute).
    pub attribute_homes: BTreeMap<(String, String), AttributeHome>,
    pub composite_provenance: BTreeMap<String, SchemaPath>,
    pub connector_log: Vec<ConnectorEntry>,
    /// Classes kept only because a hint names them.
    pub retained: BTreeSet<String>,
}

impl ReshapedSchema {
    pub fn home(&self, table: &str, attribute: &str) -> Option<&AttributeHome> {
        self.attribute_homes.get(&(table.to_string(), attribute.to_string()))
    }

    pub fn to_turtle(&self) -> String {
        let mut g = self.ontology.to_graph();
        if let Some(c) = self.ontology.classes().iter().next() {
            let ns = namespace(c);
            g.set_prefix("onto", ns);
            g.set_prefix("comp", format!("{}/composite/", ns.trim_end_matches(['#', '/'])));
        }
        serialize_turtle(&g)
    }

    /// One line per composite: `composite <iri> := <p1> / <class> / ^<p2>`,
    /// with `^` marking a step against the property's direction.
    pub fn provenance_text(&self) -> String {
        let mut out = String::new();
        for (iri, path) in &self.composite_provenance {
            let _ = write!(out, "composite <{iri}> :=");
            for (i, step) in path.steps.iter().enumerate() {
                if i > 0 {
                    let _ = write!(out, " / <{}> /", path.steps[i - 1].class);
                }
                let hat = if step.direction == Direction::Reverse { "^" } else { "" };
                let _ = write!(out, " {hat}<{}>", step.property);
            }
            out.push('\n');
        }
        out
    }

    /// The connector log, one entry per line.
    pub fn log_text(&self) -> String {
        self.connector_log.iter().map(|e| format!("{e}\n")).collect()
    }
}

/// Runs selection, fragment joining and compaction.
pub fn reshape(o: &OntologyGraph, m: &MappingSpec, hints: &[ConnectionHint]) -> Result<ReshapedSchema, ReshapeError> {
    let fragments = select_subgraph(o, m);
    let connected = connect_fragments(o, &fragments, hints);
    compact(o, &connected, m)
}
