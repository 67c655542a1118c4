use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::mapping::ConnectionHint;
use crate::ontology::{Adjacency, ObjectProperty, OntologyGraph, SchemaPath};
use crate::rdf::local_name;

use super::select::{components, FragmentSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConnectorEntry {
    /// Two components joined by a user hint (cost 0).
    Hint { from: String, property: String, to: String },
    /// Two components joined by an ontology path; cost is its length.
    Path { from: String, to: String, path: SchemaPath },
    /// Merging stopped with this many components left.
    Disconnected { components: usize },
}

impl ConnectorEntry {
    pub fn cost(&self) -> Option<usize> {
        match self {
            ConnectorEntry::Hint { .. } => Some(0),
            ConnectorEntry::Path { path, .. } => Some(path.len()),
            ConnectorEntry::Disconnected { .. } => None,
        }
    }
}

impl fmt::Display for ConnectorEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectorEntry::Hint { from, property, to } => write!(
                f,
                "hint {} -[{}]-> {} cost 0",
                local_name(from),
                local_name(property),
                local_name(to)
            ),
            ConnectorEntry::Path { path, .. } => write!(f, "path {path} cost {}", path.len()),
            ConnectorEntry::Disconnected { components } => {
                write!(f, "warning: schema left with {components} disconnected components")
            }
        }
    }
}

/// The selected sub-graph after fragment joining.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConnectedSchema {
    pub classes: BTreeSet<String>,
    /// Ontology edges plus hint edges.
    pub edges: BTreeSet<ObjectProperty>,
    pub hint_edges: BTreeSet<ObjectProperty>,
    /// Classes selected from the mapping.
    pub selected: BTreeSet<String>,
    /// Classes imported from ontology paths.
    pub connectors: BTreeSet<String>,
    /// Hint endpoints that were not otherwise selected.
    pub retained: BTreeSet<String>,
    pub log: Vec<ConnectorEntry>,
}

impl ConnectedSchema {
    pub fn component_count(&self) -> usize {
        components(&self.classes, &self.edges).len()
    }

    fn owners(&self) -> BTreeMap<String, usize> {
        components(&self.classes, &self.edges)
            .into_iter()
            .enumerate()
            .flat_map(|(i, f)| f.classes.into_iter().map(move |c| (c, i)))
            .collect()
    }
}

/// Joins fragments into one graph.
///
/// Every hint edge is added first and its endpoints retained. Components are
/// then merged greedily: each round picks the cross-component class pair
/// `(a, b)` with the smallest `(distance, a, b)` in the ontology and imports
/// the shortest path between them. Merging stops early, with a warning
/// entry, when no remaining pair is connected in the ontology.
pub fn connect_fragments(o: &OntologyGraph, f: &FragmentSet, hints: &[ConnectionHint]) -> ConnectedSchema {
    let selected: BTreeSet<String> = f.classes().cloned().collect();
    let mut g = ConnectedSchema {
        classes: selected.clone(),
        edges: f.edges().cloned().collect(),
        selected,
        ..Default::default()
    };

    let hints: BTreeSet<&ConnectionHint> = hints.iter().collect();
    for h in hints {
        for end in [&h.from, &h.to] {
            if g.classes.insert(end.clone()) {
                g.retained.insert(end.clone());
            }
        }
        let owners = g.owners();
        if owners[&h.from] != owners[&h.to] {
            g.log.push(ConnectorEntry::Hint {
                from: h.from.clone(),
                property: h.property.clone(),
                to: h.to.clone(),
            });
        }
        let edge = ObjectProperty {
            iri: h.property.clone(),
            domain: h.from.clone(),
            range: h.to.clone(),
        };
        g.edges.insert(edge.clone());
        g.hint_edges.insert(edge);
    }

    let adj = Adjacency::of(o);
    loop {
        let owners = g.owners();
        let count = owners.values().collect::<BTreeSet<_>>().len();
        if count <= 1 {
            break;
        }
        let mut best: Option<(usize, &str, &str)> = None;
        for a in &g.classes {
            for (b, d) in adj.distances(a) {
                let better = best.map_or(true, |cur| (d, a.as_str(), b) < cur);
                if a.as_str() < b && owners.get(b).is_some_and(|ob| *ob != owners[a]) && better {
                    best = Some((d, a.as_str(), b));
                }
            }
        }
        let Some((_, a, b)) = best else {
            log::warn!("reshaped schema has {count} disconnected components");
            g.log.push(ConnectorEntry::Disconnected { components: count });
            break;
        };
        let path = adj.shortest_path(a, b).expect("distance implies a path");
        let (a, b) = (a.to_string(), b.to_string());
        for c in path.interior() {
            if g.classes.insert(c.to_string()) {
                g.connectors.insert(c.to_string());
            }
        }
        g.edges.extend(path.edges());
        g.log.push(ConnectorEntry::Path { from: a, to: b, path });
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reshape::select::Fragment;

    const NS: &str = "http://ex.org/w#";

    fn iri(s: &str) -> String {
        format!("{NS}{s}")
    }

    /// A - B - C - D - E chain plus a spur C - F.
    fn chain() -> OntologyGraph {
        let mut o = OntologyGraph::new();
        for c in ["A", "B", "C", "D", "E", "F"] {
            o.add_class(iri(c));
        }
        for (p, d, r) in [("ab", "A", "B"), ("bc", "B", "C"), ("cd", "C", "D"), ("de", "D", "E"), ("cf", "C", "F")] {
            o.add_object_property(iri(p), iri(d), iri(r)).unwrap();
        }
        o
    }

    fn fragments(sets: &[&[&str]]) -> FragmentSet {
        FragmentSet {
            fragments: sets
                .iter()
                .map(|s| Fragment {
                    classes: s.iter().map(|c| iri(c)).collect(),
                    edges: BTreeSet::new(),
                })
                .collect(),
        }
    }

    #[test]
    fn single_fragment_unchanged() {
        let f = fragments(&[&["A"]]);
        let g = connect_fragments(&chain(), &f, &[]);
        assert!(g.log.is_empty());
        assert_eq!(g.classes.len(), 1);
    }

    #[test]
    fn hint_joins_at_zero_cost() {
        let f = fragments(&[&["A"], &["E"]]);
        let hint = ConnectionHint {
            from: iri("A"),
            property: iri("link"),
            to: iri("E"),
        };
        let g = connect_fragments(&chain(), &f, &[hint]);
        assert_eq!(g.log.len(), 1);
        assert_eq!(g.log[0].cost(), Some(0));
        assert!(g.connectors.is_empty());
        assert_eq!(g.component_count(), 1);
    }

    #[test]
    fn closest_pair_first() {
        let f = fragments(&[&["A"], &["D"], &["F"]]);
        let g = connect_fragments(&chain(), &f, &[]);
        let costs: Vec<_> = g.log.iter().map(|e| e.cost().unwrap()).collect();
        // D-F (via C) and A-F or A-D remain; the first join costs 2.
        assert_eq!(costs[0], 2);
        assert_eq!(g.component_count(), 1);
        let connectors: Vec<&str> = g.connectors.iter().map(|c| local_name(c)).collect();
        assert_eq!(connectors, vec!["B", "C"]);
    }

    #[test]
    fn disconnected_is_reported() {
        let mut o = chain();
        o.add_class(iri("Z"));
        let f = fragments(&[&["A"], &["Z"]]);
        let g = connect_fragments(&o, &f, &[]);
        assert_eq!(g.log, vec![ConnectorEntry::Disconnected { components: 2 }]);
    }

    #[test]
    fn hint_endpoints_are_retained() {
        let f = fragments(&[&["A"]]);
        let hint = ConnectionHint {
            from: iri("A"),
            property: iri("ab"),
            to: iri("B"),
        };
        let g = connect_fragments(&chain(), &f, &[hint]);
        assert_eq!(g.retained, BTreeSet::from([iri("B")]));
        assert_eq!(g.log.len(), 1);
    }
}
