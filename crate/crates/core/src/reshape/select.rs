use std::collections::{BTreeMap, BTreeSet};

use crate::mapping::{AttributeTarget, MappingSpec};
use crate::ontology::{Adjacency, ObjectProperty, OntologyGraph};

/// A connected piece of the selected sub-graph.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Fragment {
    pub classes: BTreeSet<String>,
    pub edges: BTreeSet<ObjectProperty>,
}

/// Connected components of the selected sub-graph, ordered by their
/// smallest class IRI.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FragmentSet {
    pub fragments: Vec<Fragment>,
}

impl FragmentSet {
    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    pub fn classes(&self) -> impl Iterator<Item = &String> + '_ {
        self.fragments.iter().flat_map(|f| f.classes.iter())
    }

    pub fn edges(&self) -> impl Iterator<Item = &ObjectProperty> + '_ {
        self.fragments.iter().flat_map(|f| f.edges.iter())
    }
}

/// The ontology domain a bound datatype property is homed on for `table`.
///
/// With several declared domains the table class wins, then a class keyed
/// by the same table, then the domain closest to the table class; IRI order
/// breaks remaining ties.
pub fn data_domain(o: &OntologyGraph, m: &MappingSpec, table: &str, property: &str) -> Option<String> {
    let class = m.table_class(table)?;
    let domains: Vec<&str> = o.datatype_domains(property).collect();
    if domains.len() <= 1 {
        return domains.first().map(|d| d.to_string());
    }
    if domains.contains(&class) {
        return Some(class.to_string());
    }
    if let Some(d) = domains.iter().find(|d| m.key_attribute(table, d).is_some()) {
        return Some(d.to_string());
    }
    let adj = Adjacency::of(o);
    let dist = adj.distances(class);
    domains
        .iter()
        .min_by_key(|d| (dist.get(*d).copied().unwrap_or(usize::MAX), **d))
        .map(|d| d.to_string())
}

/// Classes the mapping touches: table classes, elevated classes and the
/// homes of bound datatype properties.
pub(crate) fn selected_classes(o: &OntologyGraph, m: &MappingSpec) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for t in &m.tables {
        if o.has_class(&t.class) {
            out.insert(t.class.clone());
        }
    }
    for a in &m.attributes {
        match &a.target {
            AttributeTarget::ClassKey(c) if o.has_class(c) => {
                out.insert(c.clone());
            }
            AttributeTarget::DataProperty(p) => {
                if let Some(d) = data_domain(o, m, &a.table, p) {
                    out.insert(d);
                }
            }
            _ => {}
        }
    }
    out
}

/// Splits `classes` with the given edges into connected components.
pub(crate) fn components(classes: &BTreeSet<String>, edges: &BTreeSet<ObjectProperty>) -> Vec<Fragment> {
    let adj = Adjacency::from_edges(classes, edges);
    let mut owner: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out: Vec<Fragment> = Vec::new();
    for c in classes {
        if owner.contains_key(c.as_str()) {
            continue;
        }
        let idx = out.len();
        let mut frag = Fragment::default();
        for reached in adj.distances(c).into_keys() {
            owner.insert(reached, idx);
            frag.classes.insert(reached.to_string());
        }
        out.push(frag);
    }
    for e in edges {
        if let Some(&i) = owner.get(e.domain.as_str()) {
            out[i].edges.insert(e.clone());
        }
    }
    out
}

/// Restricts the ontology to the classes the mapping touches and the object
/// properties among them, split into connected fragments.
pub fn select_subgraph(o: &OntologyGraph, m: &MappingSpec) -> FragmentSet {
    let classes = selected_classes(o, m);
    let edges: BTreeSet<ObjectProperty> = o
        .object_properties()
        .iter()
        .filter(|p| classes.contains(&p.domain) && classes.contains(&p.range))
        .cloned()
        .collect();
    FragmentSet {
        fragments: components(&classes, &edges),
    }
}
