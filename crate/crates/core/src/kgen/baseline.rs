use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use crate::mapping::{AttributeTarget, MappingSpec, TableData};
use crate::ontology::{Adjacency, Direction, OntologyGraph, SchemaPath};
use crate::rdf::{Graph, Term, RDF_TYPE};
use crate::reshape::{data_domain, key_property};

use super::{column, EntityMintingPolicy, KgBuildReport, KgenError, Variant};

enum Terminal {
    Row,
    /// Per-row node of the path's end class.
    RowScoped,
    /// Key entity minted from the value in this column.
    Key(usize),
}

struct Plan {
    column: usize,
    path: SchemaPath,
    terminal: Terminal,
    property: String,
}

struct TableJob<'a> {
    index: usize,
    class: &'a str,
    data: &'a TableData,
    plans: Vec<Plan>,
    /// Intermediate classes minted as IRIs rather than blank nodes.
    iri_scoped: BTreeSet<String>,
}

/// How the baseline KG reaches an attribute value from the row entity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaselineAccess {
    /// Ontology path from the table class; empty when the value sits on the
    /// row entity.
    pub path: SchemaPath,
    /// Datatype property carrying the value at the end of the path.
    pub property: String,
    /// When the path ends at a key entity, the attribute holding its key.
    pub key_attribute: Option<String>,
}

/// Resolves the baseline access path of `table.attribute`. `adj` must be
/// the adjacency of `o`.
pub fn baseline_access(
    o: &OntologyGraph,
    adj: &Adjacency,
    m: &MappingSpec,
    table: &str,
    attribute: &str,
) -> Result<BaselineAccess, KgenError> {
    let class = m.table_class(table).unwrap_or_default();
    let no_path = || KgenError::NoPath {
        class: class.to_string(),
        attribute: attribute.to_string(),
    };
    let binding = m.binding(table, attribute).ok_or_else(no_path)?;
    let access = match &binding.target {
        AttributeTarget::ClassKey(e) if e == class => BaselineAccess {
            path: SchemaPath::empty(class),
            property: key_property(e),
            key_attribute: None,
        },
        AttributeTarget::ClassKey(e) => BaselineAccess {
            path: adj.shortest_path(class, e).ok_or_else(no_path)?,
            property: key_property(e),
            key_attribute: Some(attribute.to_string()),
        },
        AttributeTarget::DataProperty(p) => {
            let domain = data_domain(o, m, table, p).ok_or_else(no_path)?;
            if domain == class {
                BaselineAccess {
                    path: SchemaPath::empty(class),
                    property: p.clone(),
                    key_attribute: None,
                }
            } else {
                BaselineAccess {
                    path: adj.shortest_path(class, &domain).ok_or_else(no_path)?,
                    property: p.clone(),
                    key_attribute: m.key_attribute(table, &domain).map(|k| k.attribute.clone()),
                }
            }
        }
    };
    Ok(access)
}

fn plan_table<'a>(
    o: &OntologyGraph,
    adj: &Adjacency,
    m: &MappingSpec,
    index: usize,
    table: &str,
    class: &'a str,
    data: &'a TableData,
) -> Result<TableJob<'a>, KgenError> {
    let mut iri_scoped: BTreeSet<String> = m.elevated_classes_of(table).map(String::from).collect();
    let mut plans = Vec::new();
    for a in m.attributes_of(table) {
        let access = baseline_access(o, adj, m, table, &a.attribute)?;
        let terminal = match &access.key_attribute {
            _ if access.path.is_empty() => Terminal::Row,
            Some(k) => Terminal::Key(column(data, k)?),
            None => {
                iri_scoped.insert(access.path.end().to_string());
                Terminal::RowScoped
            }
        };
        plans.push(Plan {
            column: column(data, &a.attribute)?,
            path: access.path,
            terminal,
            property: access.property,
        });
    }
    Ok(TableJob {
        index,
        class,
        data,
        plans,
        iri_scoped,
    })
}

/// Builds the KG with the domain ontology as schema.
///
/// Every row mints a row entity. Each non-null attribute value is reached by
/// walking the shortest ontology path from the table class to the
/// attribute's home; intermediate classes become one node per (row, class),
/// a blank node unless the class is itself a data home or keyed by the
/// table. Elevated values end the walk at the shared key entity.
pub fn build_baseline(o: &OntologyGraph, m: &MappingSpec, tables: &[TableData]) -> Result<(Graph, KgBuildReport), KgenError> {
    let policy = EntityMintingPolicy::for_mapping(m);
    let adj = Adjacency::of(o);
    let class_index: BTreeMap<&str, usize> = o.classes().iter().enumerate().map(|(i, c)| (c.as_str(), i)).collect();
    let mut jobs = Vec::new();
    for (index, t) in m.tables.iter().enumerate() {
        if let Some(data) = tables.iter().find(|d| d.name == t.table) {
            jobs.push(plan_table(o, &adj, m, index, &t.table, &t.class, data)?);
        }
    }

    let start = Instant::now();
    let ty = Term::iri(RDF_TYPE);
    let mut g = Graph::new();
    let mut rows_processed = 0;
    for job in &jobs {
        let table = job.data.name.as_str();
        for (i, row) in job.data.rows.iter().enumerate() {
            rows_processed += 1;
            let r = policy.row(job.class, table, i);
            g.add(r.clone(), ty.clone(), Term::iri(job.class));
            for plan in &job.plans {
                let Some(lit) = row[plan.column].to_literal() else {
                    continue;
                };
                let key = match plan.terminal {
                    Terminal::Key(k) if row[k].is_null() => continue,
                    Terminal::Key(k) => Some(policy.key(plan.path.end(), row[k].text())),
                    _ => None,
                };
                let mut prev = r.clone();
                for (n, step) in plan.path.steps.iter().enumerate() {
                    let node = match &key {
                        Some(k) if n + 1 == plan.path.len() => k.clone(),
                        _ if job.iri_scoped.contains(&step.class) => policy.row(&step.class, table, i),
                        _ => Term::blank(format!("t{}r{i}c{}", job.index, class_index[step.class.as_str()])),
                    };
                    g.add(node.clone(), ty.clone(), Term::iri(&step.class));
                    match step.direction {
                        Direction::Forward => g.add(prev, Term::iri(&step.property), node.clone()),
                        Direction::Reverse => g.add(node.clone(), Term::iri(&step.property), prev),
                    };
                    prev = node;
                }
                g.add(prev, Term::iri(&plan.property), Term::Literal(lit));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let report = KgBuildReport::new(Variant::Baseline, &g, elapsed, rows_processed);
    Ok((g, report))
}
