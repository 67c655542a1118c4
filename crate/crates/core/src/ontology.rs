//! Typed schema view over an RDF graph: classes, object properties
//! (domain → range edges) and datatype properties, plus the undirected
//! shortest-path search used by reshaping and KG materialization.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::rdf::{
    local_name, namespace, Graph, Literal, Term, OWL_CLASS, OWL_DATATYPE_PROPERTY, OWL_OBJECT_PROPERTY,
    RDFS_CLASS, RDFS_DOMAIN, RDFS_LABEL, RDFS_RANGE, RDF_TYPE,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OntologyError {
    #[error("property <{0}> has no rdfs:domain")]
    MissingDomain(String),
    #[error("object property <{0}> has no rdfs:range")]
    MissingRange(String),
    #[error("object property <{0}> declares more than one domain or range")]
    AmbiguousObjectProperty(String),
    #[error("property <{property}> refers to <{class}>, which is not a declared class")]
    UndeclaredClass { property: String, class: String },
    #[error("<{0}> is declared both as an object and a datatype property")]
    ConflictingPropertyKind(String),
    #[error("unknown class <{0}>")]
    UnknownClass(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectProperty {
    pub iri: String,
    pub domain: String,
    pub range: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DatatypeProperty {
    pub iri: String,
    pub domain: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OntologyGraph {
    classes: BTreeSet<String>,
    object_properties: BTreeSet<ObjectProperty>,
    datatype_properties: BTreeSet<DatatypeProperty>,
    labels: BTreeMap<String, String>,
}

impl OntologyGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, iri: impl Into<String>) {
        self.classes.insert(iri.into());
    }

    pub fn add_object_property(
        &mut self,
        iri: impl Into<String>,
        domain: impl Into<String>,
        range: impl Into<String>,
    ) -> Result<(), OntologyError> {
        let p = ObjectProperty {
            iri: iri.into(),
            domain: domain.into(),
            range: range.into(),
        };
        for class in [&p.domain, &p.range] {
            if !self.classes.contains(class) {
                return Err(OntologyError::UndeclaredClass {
                    property: p.iri.clone(),
                    class: class.clone(),
                });
            }
        }
        if self.datatype_properties.iter().any(|d| d.iri == p.iri) {
            return Err(OntologyError::ConflictingPropertyKind(p.iri));
        }
        self.object_properties.insert(p);
        Ok(())
    }

    pub fn add_datatype_property(
        &mut self,
        iri: impl Into<String>,
        domain: impl Into<String>,
    ) -> Result<(), OntologyError> {
        let p = DatatypeProperty {
            iri: iri.into(),
            domain: domain.into(),
        };
        if !self.classes.contains(&p.domain) {
            return Err(OntologyError::UndeclaredClass {
                property: p.iri,
                class: p.domain,
            });
        }
        if self.object_properties.iter().any(|o| o.iri == p.iri) {
            return Err(OntologyError::ConflictingPropertyKind(p.iri));
        }
        self.datatype_properties.insert(p);
        Ok(())
    }

    pub fn set_label(&mut self, iri: impl Into<String>, label: impl Into<String>) {
        self.labels.insert(iri.into(), label.into());
    }

    pub fn classes(&self) -> &BTreeSet<String> {
        &self.classes
    }

    pub fn object_properties(&self) -> &BTreeSet<ObjectProperty> {
        &self.object_properties
    }

    pub fn datatype_properties(&self) -> &BTreeSet<DatatypeProperty> {
        &self.datatype_properties
    }

    pub fn labels(&self) -> &BTreeMap<String, String> {
        &self.labels
    }

    pub fn has_class(&self, iri: &str) -> bool {
        self.classes.contains(iri)
    }

    pub fn is_object_property(&self, iri: &str) -> bool {
        self.object_properties.iter().any(|p| p.iri == iri)
    }

    pub fn is_datatype_property(&self, iri: &str) -> bool {
        self.datatype_properties.iter().any(|p| p.iri == iri)
    }

    /// Domains declared for a datatype property, in IRI order.
    pub fn datatype_domains<'a>(&'a self, iri: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.datatype_properties
            .iter()
            .filter(move |p| p.iri == iri)
            .map(|p| p.domain.as_str())
    }

    /// Namespace shared by the ontology's classes (that of the first class).
    pub fn base(&self) -> &str {
        self.classes.iter().next().map(|c| namespace(c)).unwrap_or("")
    }

    /// Emits the ontology as RDF with owl/rdfs vocabulary.
    pub fn to_graph(&self) -> Graph {
        let mut g = Graph::new();
        let ty = Term::iri(RDF_TYPE);
        for c in &self.classes {
            g.add(Term::iri(c), ty.clone(), Term::iri(OWL_CLASS));
        }
        for p in &self.object_properties {
            g.add(Term::iri(&p.iri), ty.clone(), Term::iri(OWL_OBJECT_PROPERTY));
            g.add(Term::iri(&p.iri), Term::iri(RDFS_DOMAIN), Term::iri(&p.domain));
            g.add(Term::iri(&p.iri), Term::iri(RDFS_RANGE), Term::iri(&p.range));
        }
        for p in &self.datatype_properties {
            g.add(Term::iri(&p.iri), ty.clone(), Term::iri(OWL_DATATYPE_PROPERTY));
            g.add(Term::iri(&p.iri), Term::iri(RDFS_DOMAIN), Term::iri(&p.domain));
        }
        for (iri, label) in &self.labels {
            g.add(Term::iri(iri), Term::iri(RDFS_LABEL), Term::Literal(Literal::string(label)));
        }
        g.set_prefix("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#");
        g.set_prefix("rdfs", "http://www.w3.org/2000/01/rdf-schema#");
        g.set_prefix("owl", "http://www.w3.org/2002/07/owl#");
        g.set_prefix("xsd", "http://www.w3.org/2001/XMLSchema#");
        g
    }
}

/// Reads classes and properties declared in `g`.
pub fn load_ontology(g: &Graph) -> Result<OntologyGraph, OntologyError> {
    let mut classes = BTreeSet::new();
    let mut object_props = BTreeSet::new();
    let mut datatype_props = BTreeSet::new();
    let mut domains: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut ranges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    let mut labels = BTreeMap::new();

    for t in g.iter() {
        let (Term::Iri(s), p) = (&t.subject, t.predicate_iri()) else {
            continue;
        };
        match (p, &t.object) {
            (RDF_TYPE, Term::Iri(o)) if o == OWL_CLASS || o == RDFS_CLASS => {
                classes.insert(s.as_str());
            }
            (RDF_TYPE, Term::Iri(o)) if o == OWL_OBJECT_PROPERTY => {
                object_props.insert(s.as_str());
            }
            (RDF_TYPE, Term::Iri(o)) if o == OWL_DATATYPE_PROPERTY => {
                datatype_props.insert(s.as_str());
            }
            (RDFS_DOMAIN, Term::Iri(o)) => domains.entry(s).or_default().push(o),
            (RDFS_RANGE, Term::Iri(o)) => ranges.entry(s).or_default().push(o),
            (RDFS_LABEL, Term::Literal(l)) => {
                labels.insert(s.clone(), l.lexical().to_string());
            }
            _ => {}
        }
    }

    let mut o = OntologyGraph::new();
    for c in &classes {
        o.add_class(*c);
    }
    for p in &object_props {
        if datatype_props.contains(p) {
            return Err(OntologyError::ConflictingPropertyKind(p.to_string()));
        }
        let dom = domains.get(p).ok_or_else(|| OntologyError::MissingDomain(p.to_string()))?;
        let ran = ranges.get(p).ok_or_else(|| OntologyError::MissingRange(p.to_string()))?;
        if dom.len() != 1 || ran.len() != 1 {
            return Err(OntologyError::AmbiguousObjectProperty(p.to_string()));
        }
        o.add_object_property(*p, dom[0], ran[0])?;
    }
    for p in &datatype_props {
        let dom = domains.get(p).ok_or_else(|| OntologyError::MissingDomain(p.to_string()))?;
        for d in dom {
            o.add_datatype_property(*p, *d)?;
        }
    }
    o.labels = labels
        .into_iter()
        .filter(|(iri, _)| o.classes.contains(iri) || object_props.contains(iri.as_str()) || datatype_props.contains(iri.as_str()))
        .collect();
    Ok(o)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// domain → range
    Forward,
    /// range → domain
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathStep {
    pub property: String,
    pub direction: Direction,
    /// Class reached by this step.
    pub class: String,
}

/// Alternating sequence of classes and property steps.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SchemaPath {
    pub start: String,
    pub steps: Vec<PathStep>,
}

impl SchemaPath {
    pub fn empty(start: impl Into<String>) -> Self {
        SchemaPath {
            start: start.into(),
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn end(&self) -> &str {
        self.steps.last().map(|s| s.class.as_str()).unwrap_or(&self.start)
    }

    /// Every class on the path, endpoints included.
    pub fn classes(&self) -> impl Iterator<Item = &str> + '_ {
        std::iter::once(self.start.as_str()).chain(self.steps.iter().map(|s| s.class.as_str()))
    }

    /// Classes strictly between the endpoints.
    pub fn interior(&self) -> impl Iterator<Item = &str> + '_ {
        let n = self.steps.len();
        self.steps.iter().take(n.saturating_sub(1)).map(|s| s.class.as_str())
    }

    pub fn reversed(&self) -> SchemaPath {
        let mut classes: Vec<&str> = self.classes().collect();
        classes.reverse();
        let steps = self
            .steps
            .iter()
            .rev()
            .zip(classes.iter().skip(1))
            .map(|(s, c)| PathStep {
                property: s.property.clone(),
                direction: s.direction.flip(),
                class: c.to_string(),
            })
            .collect();
        SchemaPath {
            start: classes[0].to_string(),
            steps,
        }
    }

    /// The (domain, property, range) edge behind each step.
    pub fn edges(&self) -> impl Iterator<Item = ObjectProperty> + '_ {
        self.classes().zip(self.steps.iter()).map(|(from, step)| match step.direction {
            Direction::Forward => ObjectProperty {
                iri: step.property.clone(),
                domain: from.to_string(),
                range: step.class.clone(),
            },
            Direction::Reverse => ObjectProperty {
                iri: step.property.clone(),
                domain: step.class.clone(),
                range: from.to_string(),
            },
        })
    }
}

impl fmt::Display for SchemaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", local_name(&self.start))?;
        for s in &self.steps {
            let arrow = match s.direction {
                Direction::Forward => "->",
                Direction::Reverse => "<-",
            };
            write!(f, " -{}{} {}", local_name(&s.property), arrow, local_name(&s.class))?;
        }
        Ok(())
    }
}

/// Undirected adjacency over object-property edges; each neighbour entry
/// keeps the property and the direction it is traversed in.
#[derive(Debug, Clone, Default)]
pub struct Adjacency {
    nodes: BTreeMap<String, Vec<(String, String, Direction)>>,
}

impl Adjacency {
    pub fn from_edges<'a>(classes: impl IntoIterator<Item = &'a String>, edges: impl IntoIterator<Item = &'a ObjectProperty>) -> Self {
        let mut nodes: BTreeMap<String, Vec<(String, String, Direction)>> =
            classes.into_iter().map(|c| (c.clone(), Vec::new())).collect();
        for e in edges {
            if e.domain == e.range {
                continue;
            }
            nodes
                .entry(e.domain.clone())
                .or_default()
                .push((e.iri.clone(), e.range.clone(), Direction::Forward));
            nodes
                .entry(e.range.clone())
                .or_default()
                .push((e.iri.clone(), e.domain.clone(), Direction::Reverse));
        }
        for list in nodes.values_mut() {
            list.sort();
            list.dedup();
        }
        Adjacency { nodes }
    }

    pub fn of(o: &OntologyGraph) -> Self {
        Self::from_edges(o.classes(), o.object_properties())
    }

    pub fn contains(&self, class: &str) -> bool {
        self.nodes.contains_key(class)
    }

    pub fn neighbours(&self, class: &str) -> &[(String, String, Direction)] {
        self.nodes.get(class).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Hop distances from `start` to every reachable class.
    pub fn distances(&self, start: &str) -> HashMap<&str, usize> {
        let mut dist: HashMap<&str, usize> = HashMap::new();
        let Some((key, _)) = self.nodes.get_key_value(start) else {
            return dist;
        };
        dist.insert(key.as_str(), 0);
        let mut queue = VecDeque::from([key.as_str()]);
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            for (_, v, _) in self.neighbours(u) {
                if !dist.contains_key(v.as_str()) {
                    dist.insert(v.as_str(), d + 1);
                    queue.push_back(v.as_str());
                }
            }
        }
        dist
    }

    /// Shortest path; among equally short paths the one with the
    /// lexicographically smallest (property, class) sequence wins.
    pub fn shortest_path(&self, from: &str, to: &str) -> Option<SchemaPath> {
        if !self.contains(from) || !self.contains(to) {
            return None;
        }
        let to_target = self.distances(to);
        let mut remaining = *to_target.get(from)?;
        let mut path = SchemaPath::empty(from);
        let mut current = from;
        while remaining > 0 {
            let (prop, next, dir) = self
                .neighbours(current)
                .iter()
                .filter(|(_, v, _)| to_target.get(v.as_str()) == Some(&(remaining - 1)))
                .min()
                .expect("BFS layer has a predecessor");
            path.steps.push(PathStep {
                property: prop.clone(),
                direction: *dir,
                class: next.clone(),
            });
            current = next;
            remaining -= 1;
        }
        Some(path)
    }
}

/// Breadth-first shortest path between two classes, treating every object
/// property as traversable in both directions. `Ok(None)` means the classes
/// are not connected.
pub fn shortest_schema_path(o: &OntologyGraph, from: &str, to: &str) -> Result<Option<SchemaPath>, OntologyError> {
    for c in [from, to] {
        if !o.has_class(c) {
            return Err(OntologyError::UnknownClass(c.to_string()));
        }
    }
    Ok(Adjacency::of(o).shortest_path(from, to))
}
