use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::ontology::OntologyGraph;

use super::{AttributeTarget, MappingSpec, TableData};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    /// A bound IRI is missing from the ontology or has the wrong kind.
    UnknownIri { context: String, iri: String },
    DuplicateBinding { table: String, attribute: Option<String> },
    UnknownTable { table: String },
    UnknownAttribute { table: String, attribute: String },
    /// Attribute bindings for a table that has no table binding.
    UnboundTable { table: String },
    /// Two attributes of one table elevate to the same class.
    DuplicateKeyClass { table: String, class: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownIri { context, iri } => write!(f, "{context}: <{iri}> not found in ontology"),
            Violation::DuplicateBinding { table, attribute: None } => write!(f, "table {table} bound twice"),
            Violation::DuplicateBinding {
                table,
                attribute: Some(a),
            } => write!(f, "attribute {table}.{a} bound twice"),
            Violation::UnknownTable { table } => write!(f, "no data for table {table}"),
            Violation::UnknownAttribute { table, attribute } => {
                write!(f, "table {table} has no attribute {attribute}")
            }
            Violation::UnboundTable { table } => write!(f, "attributes of {table} bound but table is not"),
            Violation::DuplicateKeyClass { table, class } => {
                write!(f, "table {table} elevates more than one attribute to <{class}>")
            }
        }
    }
}

/// Checks `m` against the ontology and, when `tables` is non-empty, against
/// the data. An empty result means the mapping is usable.
pub fn validate_mapping(m: &MappingSpec, o: &OntologyGraph, tables: &[TableData]) -> Vec<Violation> {
    let mut out = Vec::new();
    let by_name: BTreeMap<&str, &TableData> = tables.iter().map(|t| (t.name.as_str(), t)).collect();

    let mut seen_tables = BTreeSet::new();
    for t in &m.tables {
        if !seen_tables.insert(t.table.as_str()) {
            out.push(Violation::DuplicateBinding {
                table: t.table.clone(),
                attribute: None,
            });
        }
        if !o.has_class(&t.class) {
            out.push(Violation::UnknownIri {
                context: format!("table {}", t.table),
                iri: t.class.clone(),
            });
        }
        if !tables.is_empty() && !by_name.contains_key(t.table.as_str()) {
            out.push(Violation::UnknownTable { table: t.table.clone() });
        }
    }

    let mut seen_attrs = BTreeSet::new();
    let mut seen_keys = BTreeSet::new();
    let mut unbound_reported = BTreeSet::new();
    for a in &m.attributes {
        if !seen_attrs.insert((a.table.as_str(), a.attribute.as_str())) {
            out.push(Violation::DuplicateBinding {
                table: a.table.clone(),
                attribute: Some(a.attribute.clone()),
            });
        }
        if !seen_tables.contains(a.table.as_str()) && unbound_reported.insert(a.table.as_str()) {
            out.push(Violation::UnboundTable { table: a.table.clone() });
        }
        let ok = match &a.target {
            AttributeTarget::DataProperty(p) => o.is_datatype_property(p),
            AttributeTarget::ClassKey(c) => {
                if !seen_keys.insert((a.table.as_str(), c.as_str())) {
                    out.push(Violation::DuplicateKeyClass {
                        table: a.table.clone(),
                        class: c.clone(),
                    });
                }
                o.has_class(c)
            }
        };
        if !ok {
            out.push(Violation::UnknownIri {
                context: format!("attribute {}.{}", a.table, a.attribute),
                iri: a.target.iri().to_string(),
            });
        }
        if let Some(t) = by_name.get(a.table.as_str()) {
            if t.column_index(&a.attribute).is_none() {
                out.push(Violation::UnknownAttribute {
                    table: a.table.clone(),
                    attribute: a.attribute.clone(),
                });
            }
        }
    }

    for h in &m.hints {
        for end in [&h.from, &h.to] {
            if !o.has_class(end) {
                out.push(Violation::UnknownIri {
                    context: "hint".into(),
                    iri: end.clone(),
                });
            }
        }
        if o.is_datatype_property(&h.property) {
            out.push(Violation::UnknownIri {
                context: "hint property is a datatype property".into(),
                iri: h.property.clone(),
            });
        }
    }
    out
}
