use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ntriples::serialize_ntriples;
use super::term::{Term, Triple};

/// In-memory triple set. Iteration follows the canonical N-Triples text order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    triples: BTreeSet<Triple>,
    prefixes: BTreeMap<String, String>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the triple was not already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        self.triples.insert(triple)
    }

    pub fn add(&mut self, subject: Term, predicate: Term, object: Term) -> bool {
        self.insert(Triple::new(subject, predicate, object))
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.triples.contains(triple)
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Triple> + '_ {
        self.triples.iter()
    }

    pub fn prefixes(&self) -> &BTreeMap<String, String> {
        &self.prefixes
    }

    pub fn set_prefix(&mut self, prefix: impl Into<String>, iri: impl Into<String>) {
        self.prefixes.insert(prefix.into(), iri.into());
    }

    /// Triples with the given subject, in canonical order.
    pub fn triples_for_subject<'a>(&'a self, subject: &'a Term) -> impl Iterator<Item = &'a Triple> + 'a {
        self.triples
            .iter()
            .skip_while(move |t| &t.subject < subject)
            .take_while(move |t| &t.subject == subject)
    }

    /// Merges `other` into `self`. Blank nodes of `other` whose label is
    /// already used here are relabelled so they cannot be captured.
    pub fn merge(&mut self, other: &Graph) {
        let used: BTreeSet<String> = self.blank_labels();
        let mut renames: HashMap<String, String> = HashMap::new();
        let mut counter = 0usize;
        let mut taken = used.clone();
        taken.extend(other.blank_labels());
        let mut rename = |term: &Term| -> Term {
            match term {
                Term::Blank(label) if used.contains(label) => {
                    let fresh = renames.entry(label.clone()).or_insert_with(|| loop {
                        counter += 1;
                        let candidate = format!("{label}m{counter}");
                        if taken.insert(candidate.clone()) {
                            break candidate;
                        }
                    });
                    Term::Blank(fresh.clone())
                }
                other => other.clone(),
            }
        };
        for t in &other.triples {
            let s = rename(&t.subject);
            let o = rename(&t.object);
            self.triples.insert(Triple::new(s, t.predicate.clone(), o));
        }
        for (p, iri) in &other.prefixes {
            self.prefixes.entry(p.clone()).or_insert_with(|| iri.clone());
        }
    }

    fn blank_labels(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for t in &self.triples {
            for term in [&t.subject, &t.object] {
                if let Term::Blank(l) = term {
                    out.insert(l.clone());
                }
            }
        }
        out
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        Graph {
            triples: iter.into_iter().collect(),
            prefixes: BTreeMap::new(),
        }
    }
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        self.triples.extend(iter);
    }
}

/// Size statistics of a graph.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    /// Distinct IRI subjects.
    pub entity_count: usize,
    /// Distinct blank-node labels in any position.
    pub blank_node_count: usize,
    pub triple_count: usize,
    /// Byte length of the N-Triples serialization.
    pub storage_bytes: usize,
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    let mut entities: BTreeSet<&str> = BTreeSet::new();
    let mut blanks: BTreeSet<&str> = BTreeSet::new();
    for t in g.iter() {
        match &t.subject {
            Term::Iri(s) => {
                entities.insert(s);
            }
            Term::Blank(l) => {
                blanks.insert(l);
            }
            Term::Literal(_) => {}
        }
        if let Term::Blank(l) = &t.object {
            blanks.insert(l);
        }
    }
    GraphStats {
        entity_count: entities.len(),
        blank_node_count: blanks.len(),
        triple_count: g.len(),
        storage_bytes: serialize_ntriples(g).len(),
    }
}
