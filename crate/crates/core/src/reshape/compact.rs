use std::collections::BTreeSet;

use crate::mapping::{AttributeTarget, MappingSpec};
use crate::ontology::{Adjacency, Direction, OntologyGraph, PathStep, SchemaPath};
use crate::rdf::{local_name, namespace};

use super::connect::ConnectedSchema;
use super::select::data_domain;
use super::{key_property, AttributeHome, LinkStep, ReshapeError, ReshapedSchema};

fn composite_iri(path: &SchemaPath, taken: &BTreeSet<String>) -> String {
    let mut parts = Vec::new();
    for (i, step) in path.steps.iter().enumerate() {
        if i > 0 {
            parts.push(local_name(&path.steps[i - 1].class));
        }
        parts.push(local_name(&step.property));
    }
    let stem = format!(
        "{}/composite/{}",
        namespace(&path.start).trim_end_matches(['#', '/']),
        parts.join("_")
    );
    if !taken.contains(&stem) {
        return stem;
    }
    (2..)
        .map(|n| format!("{stem}_{n}"))
        .find(|c| !taken.contains(c))
        .expect("unbounded suffix range")
}

/// Runs the path along the majority of its property directions; ties keep
/// the start at the smaller IRI.
fn orient(path: SchemaPath) -> SchemaPath {
    let forward = path.steps.iter().filter(|s| s.direction == Direction::Forward).count();
    if 2 * forward < path.len() {
        path.reversed()
    } else {
        path
    }
}

struct Walker<'a> {
    adj: &'a Adjacency,
    surviving: &'a BTreeSet<String>,
    found: Vec<SchemaPath>,
}

impl Walker<'_> {
    fn walk(&mut self, path: &mut SchemaPath, on_path: &mut BTreeSet<String>) -> Result<(), ReshapeError> {
        let current = path.end().to_string();
        for (property, next, direction) in self.adj.neighbours(&current) {
            let step = PathStep {
                property: property.clone(),
                direction: *direction,
                class: next.clone(),
            };
            if self.surviving.contains(next) {
                if path.is_empty() {
                    continue;
                }
                if *next == path.start {
                    let backtrack = path.len() == 1
                        && path.steps[0].property == *property
                        && path.steps[0].direction == direction.flip();
                    if backtrack {
                        continue;
                    }
                    let mut cycle = path.clone();
                    cycle.steps.push(step);
                    return Err(ReshapeError::CompactionCycle { path: cycle.to_string() });
                }
                if next.as_str() > path.start.as_str() {
                    let mut full = path.clone();
                    full.steps.push(step);
                    self.found.push(orient(full));
                }
            } else if on_path.insert(next.clone()) {
                path.steps.push(step);
                self.walk(path, on_path)?;
                path.steps.pop();
                on_path.remove(next);
            }
        }
        Ok(())
    }
}

/// Contracts every class of `g` that is neither a table class, an elevated
/// class nor a hint endpoint.
///
/// Each simple path between two surviving classes whose interior is
/// contracted becomes one composite object property. Datatype properties are homed on the table
/// class, or on their domain when the same table keys that class. Each
/// elevated class gets a one-hop link from its table class, reusing an
/// existing edge or composite where the shortest connecting path allows.
pub fn compact(o: &OntologyGraph, g: &ConnectedSchema, m: &MappingSpec) -> Result<ReshapedSchema, ReshapeError> {
    let mut surviving: BTreeSet<String> = g.retained.clone();
    for t in &m.tables {
        if g.classes.contains(&t.class) {
            surviving.insert(t.class.clone());
        }
    }
    surviving.extend(
        m.elevated_classes()
            .filter(|c| g.classes.contains(*c))
            .map(String::from),
    );

    let adj = Adjacency::from_edges(&g.classes, &g.edges);
    let mut walker = Walker {
        adj: &adj,
        surviving: &surviving,
        found: Vec::new(),
    };
    for s in &surviving {
        let mut path = SchemaPath::empty(s.clone());
        let mut on_path = BTreeSet::from([s.clone()]);
        walker.walk(&mut path, &mut on_path)?;
    }

    let mut out = ReshapedSchema {
        connector_log: g.log.clone(),
        retained: g.retained.clone(),
        ..Default::default()
    };
    for c in &surviving {
        out.ontology.add_class(c.clone());
    }
    for e in &g.edges {
        if surviving.contains(&e.domain) && surviving.contains(&e.range) {
            out.ontology
                .add_object_property(e.iri.clone(), e.domain.clone(), e.range.clone())
                .expect("endpoints are surviving classes");
        }
    }

    let mut taken: BTreeSet<String> = o.object_properties().iter().map(|p| p.iri.clone()).collect();
    taken.extend(g.edges.iter().map(|p| p.iri.clone()));
    let mut add_composite = |out: &mut ReshapedSchema, path: SchemaPath| -> String {
        let iri = composite_iri(&path, &taken);
        taken.insert(iri.clone());
        out.ontology
            .add_object_property(iri.clone(), path.start.clone(), path.end().to_string())
            .expect("composite endpoints are surviving classes");
        out.composite_provenance.insert(iri.clone(), path);
        iri
    };
    for path in walker.found {
        add_composite(&mut out, path);
    }

    for t in &m.tables {
        let class = &t.class;
        if !surviving.contains(class) {
            continue;
        }
        for a in m.attributes_of(&t.table) {
            let home = match &a.target {
                AttributeTarget::ClassKey(e) if e == class => AttributeHome::Key {
                    class: e.clone(),
                    link: None,
                },
                AttributeTarget::ClassKey(e) => {
                    let link = adj.shortest_path(class, e).map(|path| match path.steps.as_slice() {
                        [one] => LinkStep {
                            property: one.property.clone(),
                            direction: one.direction,
                        },
                        _ => existing_composite(&out, &path).unwrap_or_else(|| LinkStep {
                            property: add_composite(&mut out, path),
                            direction: Direction::Forward,
                        }),
                    });
                    if link.is_none() {
                        log::warn!("no connection from <{class}> to elevated class <{e}>");
                    }
                    AttributeHome::Key {
                        class: e.clone(),
                        link,
                    }
                }
                AttributeTarget::DataProperty(p) => {
                    let Some(domain) = data_domain(o, m, &t.table, p) else {
                        continue;
                    };
                    let host = if m.key_attribute(&t.table, &domain).is_some() && surviving.contains(&domain) {
                        domain
                    } else {
                        class.clone()
                    };
                    AttributeHome::Data {
                        host,
                        property: p.clone(),
                    }
                }
            };
            match &home {
                AttributeHome::Data { host, property } => out.ontology.add_datatype_property(property.clone(), host.clone()),
                AttributeHome::Key { class, .. } => out.ontology.add_datatype_property(key_property(class), class.clone()),
            }
            .expect("host is a surviving class");
            out.attribute_homes
                .insert((a.table.clone(), a.attribute.clone()), home);
        }
    }
    Ok(out)
}

fn existing_composite(out: &ReshapedSchema, path: &SchemaPath) -> Option<LinkStep> {
    let reversed = path.reversed();
    out.composite_provenance.iter().find_map(|(iri, prov)| {
        let direction = if prov == path {
            Direction::Forward
        } else if *prov == reversed {
            Direction::Reverse
        } else {
            return None;
        };
        Some(LinkStep {
            property: iri.clone(),
            direction,
        })
    })
}
