use std::time::Instant;

use crate::mapping::{MappingSpec, TableData};
use crate::ontology::Direction;
use crate::rdf::{Graph, Term, RDF_TYPE};
use crate::reshape::{key_property, AttributeHome, LinkStep, ReshapedSchema};

use super::{column, EntityMintingPolicy, KgBuildReport, KgenError, Variant};

enum Plan<'a> {
    /// Literal directly on the row entity.
    Row { column: usize, property: String },
    /// Key entity of `class`, linked from the row when a link exists.
    Key {
        column: usize,
        class: &'a str,
        link: Option<&'a LinkStep>,
    },
    /// Literal on the key entity of `class` keyed by `key`.
    OnKey {
        column: usize,
        key: usize,
        class: &'a str,
        property: &'a str,
    },
}

/// Builds the KG shaped by the reshaped schema. Literals sit directly on row
/// or key entities, so the graph has no blank nodes.
pub fn build_reshaped(s: &ReshapedSchema, m: &MappingSpec, tables: &[TableData]) -> Result<(Graph, KgBuildReport), KgenError> {
    let policy = EntityMintingPolicy::for_mapping(m);
    let mut jobs = Vec::new();
    for t in &m.tables {
        let Some(data) = tables.iter().find(|d| d.name == t.table) else {
            continue;
        };
        let mut plans = Vec::new();
        for a in m.attributes_of(&t.table) {
            let missing = || KgenError::MissingHome {
                table: t.table.clone(),
                attribute: a.attribute.clone(),
            };
            let col = column(data, &a.attribute)?;
            let plan = match s.home(&t.table, &a.attribute).ok_or_else(missing)? {
                AttributeHome::Key { class, .. } if *class == t.class => Plan::Row {
                    column: col,
                    property: key_property(class),
                },
                AttributeHome::Key { class, link } => Plan::Key {
                    column: col,
                    class,
                    link: link.as_ref(),
                },
                AttributeHome::Data { host, property } if *host == t.class => Plan::Row {
                    column: col,
                    property: property.clone(),
                },
                AttributeHome::Data { host, property } => {
                    let key = m.key_attribute(&t.table, host).ok_or_else(missing)?;
                    Plan::OnKey {
                        column: col,
                        key: column(data, &key.attribute)?,
                        class: host,
                        property,
                    }
                }
            };
            plans.push(plan);
        }
        jobs.push((t, data, plans));
    }

    let start = Instant::now();
    let ty = Term::iri(RDF_TYPE);
    let mut g = Graph::new();
    let mut rows_processed = 0;
    for (t, data, plans) in &jobs {
        for (i, row) in data.rows.iter().enumerate() {
            rows_processed += 1;
            let r = policy.row(&t.class, &t.table, i);
            g.add(r.clone(), ty.clone(), Term::iri(&t.class));
            for plan in plans {
                match plan {
                    Plan::Row { column, property } => {
                        if let Some(lit) = row[*column].to_literal() {
                            g.add(r.clone(), Term::iri(property), Term::Literal(lit));
                        }
                    }
                    Plan::Key { column, class, link } => {
                        let Some(lit) = row[*column].to_literal() else {
                            continue;
                        };
                        let k = policy.key(class, row[*column].text());
                        g.add(k.clone(), ty.clone(), Term::iri(*class));
                        g.add(k.clone(), Term::iri(key_property(class)), Term::Literal(lit));
                        if let Some(link) = link {
                            let p = Term::iri(&link.property);
                            match link.direction {
                                Direction::Forward => g.add(r.clone(), p, k),
                                Direction::Reverse => g.add(k, p, r.clone()),
                            };
                        }
                    }
                    Plan::OnKey {
                        column,
                        key,
                        class,
                        property,
                    } => {
                        if row[*key].is_null() {
                            continue;
                        }
                        if let Some(lit) = row[*column].to_literal() {
                            let k = policy.key(class, row[*key].text());
                            g.add(k, Term::iri(*property), Term::Literal(lit));
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let report = KgBuildReport::new(Variant::Reshaped, &g, elapsed, rows_processed);
    Ok((g, report))
}
