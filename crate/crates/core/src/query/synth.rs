use crate::kgen::baseline_access;
use crate::mapping::MappingSpec;
use crate::ontology::{Adjacency, Direction, OntologyGraph, SchemaPath};
use crate::rdf::{local_name, RDF_TYPE};
use crate::reshape::{AttributeHome, LinkStep, ReshapedSchema};

use super::ast::{BgpQuery, Filter, PatternTerm, Projection, TriplePattern};
use super::intent::{AttrRef, IntentKind, QueryIntent};
use super::QueryError;

/// The schema a query is synthesized against.
#[derive(Debug, Clone, Copy)]
pub enum SchemaView<'a> {
    Baseline {
        ontology: &'a OntologyGraph,
        mapping: &'a MappingSpec,
    },
    Reshaped {
        schema: &'a ReshapedSchema,
        mapping: &'a MappingSpec,
    },
}

impl SchemaView<'_> {
    fn mapping(&self) -> &MappingSpec {
        match self {
            SchemaView::Baseline { mapping, .. } | SchemaView::Reshaped { mapping, .. } => mapping,
        }
    }
}

pub const ROW_VAR: &str = "_row";
pub const COUNT_VAR: &str = "_count";

fn sanitize(s: &str) -> String {
    s.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect()
}

/// Result column name of an attribute: the attribute name with characters
/// outside `[A-Za-z0-9_]` replaced by `_`, and an `a` prefix when it would
/// start with `_`.
pub fn attribute_var(attribute: &str) -> String {
    let s = sanitize(attribute);
    if s.is_empty() || s.starts_with('_') {
        format!("a{s}")
    } else {
        s
    }
}

fn node_var(class: &str) -> String {
    format!("_n_{}", sanitize(local_name(class)))
}

fn key_var(class: &str) -> String {
    format!("_k_{}", sanitize(local_name(class)))
}

struct Builder {
    patterns: Vec<TriplePattern>,
}

impl Builder {
    fn push(&mut self, s: PatternTerm, p: &str, o: PatternTerm) {
        let t = TriplePattern::new(s, PatternTerm::iri(p), o);
        if !self.patterns.contains(&t) {
            self.patterns.push(t);
        }
    }

    fn hop(&mut self, from: PatternTerm, property: &str, direction: Direction, to: PatternTerm) {
        match direction {
            Direction::Forward => self.push(from, property, to),
            Direction::Reverse => self.push(to, property, from),
        }
    }

    fn baseline_chain(&mut self, path: &SchemaPath, key_terminal: bool) -> PatternTerm {
        let mut prev = PatternTerm::var(ROW_VAR);
        for (n, step) in path.steps.iter().enumerate() {
            let var = if key_terminal && n + 1 == path.len() {
                key_var(&step.class)
            } else {
                node_var(&step.class)
            };
            let next = PatternTerm::var(var);
            self.hop(prev, &step.property, step.direction, next.clone());
            prev = next;
        }
        prev
    }

    fn link(&mut self, link: &LinkStep, class: &str) -> PatternTerm {
        let k = PatternTerm::var(key_var(class));
        self.hop(PatternTerm::var(ROW_VAR), &link.property, link.direction, k.clone());
        k
    }
}

fn unreachable(a: &AttrRef) -> QueryError {
    QueryError::UnreachableAttribute {
        table: a.table.clone(),
        attribute: a.attribute.clone(),
    }
}

fn reshaped_host(s: &ReshapedSchema, m: &MappingSpec, a: &AttrRef, b: &mut Builder) -> Result<(PatternTerm, String), QueryError> {
    let home = s.home(&a.table, &a.attribute).ok_or_else(|| unreachable(a))?;
    let class = m.table_class(&a.table).ok_or_else(|| unreachable(a))?;
    let row = PatternTerm::var(ROW_VAR);
    Ok(match home {
        AttributeHome::Key { class: e, .. } if e == class => (row, crate::reshape::key_property(e)),
        AttributeHome::Key { class: e, link } => {
            let link = link.as_ref().ok_or_else(|| unreachable(a))?;
            (b.link(link, e), crate::reshape::key_property(e))
        }
        AttributeHome::Data { host, property } if host == class => (row, property.clone()),
        AttributeHome::Data { host, property } => {
            let key = m.key_attribute(&a.table, host).ok_or_else(|| unreachable(a))?;
            let Some(AttributeHome::Key { link: Some(link), .. }) = s.home(&a.table, &key.attribute) else {
                return Err(unreachable(a));
            };
            (b.link(link, host), property.clone())
        }
    })
}

/// Builds the query answering `intent` over a KG built for `view`.
///
/// The row entity is anchored by its table class. Each mentioned attribute
/// adds the pattern chain to its value: the full ontology path for the
/// baseline, one direct or linked hop for the reshaped schema. Attribute
/// values bind to [`attribute_var`] names, so both variants produce the
/// same columns.
pub fn synthesize(intent: &QueryIntent, view: SchemaView<'_>) -> Result<BgpQuery, QueryError> {
    intent.check()?;
    let m = view.mapping();
    let table = &intent.targets[0].table;
    let attrs = intent.attributes();
    if let Some(other) = attrs.iter().find(|a| a.table != *table) {
        return Err(QueryError::InvalidIntent {
            name: intent.name.clone(),
            reason: format!("attribute {other} is not from table {table}"),
        });
    }
    let class = m.table_class(table).ok_or_else(|| unreachable(attrs[0]))?;

    let mut b = Builder { patterns: Vec::new() };
    b.push(PatternTerm::var(ROW_VAR), RDF_TYPE, PatternTerm::iri(class));
    let adj = match view {
        SchemaView::Baseline { ontology, .. } => Some(Adjacency::of(ontology)),
        SchemaView::Reshaped { .. } => None,
    };
    for a in &attrs {
        let (host, property) = match view {
            SchemaView::Baseline { ontology, mapping } => {
                let access = baseline_access(ontology, adj.as_ref().expect("baseline adjacency"), mapping, &a.table, &a.attribute)
                    .map_err(|_| unreachable(a))?;
                let end = b.baseline_chain(&access.path, access.key_attribute.is_some());
                (end, access.property)
            }
            SchemaView::Reshaped { schema, mapping } => reshaped_host(schema, mapping, a, &mut b)?,
        };
        b.push(host, &property, PatternTerm::var(attribute_var(&a.attribute)));
    }

    let var_of = |a: &AttrRef| attribute_var(&a.attribute);
    let (projection, filters) = match intent.kind {
        IntentKind::Inspection => (Projection::Vars(intent.targets.iter().map(var_of).collect()), Vec::new()),
        IntentKind::Summary => (
            Projection::Count {
                group_by: intent.group.iter().map(var_of).collect(),
                var: var_of(&intent.targets[0]),
                alias: COUNT_VAR.to_string(),
            },
            Vec::new(),
        ),
        IntentKind::Diagnostic => {
            let mut cols: Vec<String> = Vec::new();
            for a in intent.targets.iter().chain(&intent.context) {
                let v = var_of(a);
                if !cols.contains(&v) {
                    cols.push(v);
                }
            }
            let filters = intent
                .filter
                .iter()
                .map(|f| Filter {
                    var: var_of(&f.attribute),
                    op: f.op,
                    value: f.value.clone(),
                })
                .collect();
            (Projection::Vars(cols), filters)
        }
    };
    let q = BgpQuery {
        distinct: false,
        projection,
        patterns: b.patterns,
        filters,
    };
    q.validate()?;
    Ok(q)
}
