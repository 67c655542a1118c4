use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::rdf::{Literal, Term};

use super::QueryError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PatternTerm {
    Var(String),
    Const(Term),
}

impl PatternTerm {
    pub fn var(name: impl Into<String>) -> Self {
        PatternTerm::Var(name.into())
    }

    pub fn iri(iri: impl Into<String>) -> Self {
        PatternTerm::Const(Term::iri(iri))
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            PatternTerm::Var(v) => Some(v),
            PatternTerm::Const(_) => None,
        }
    }
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::Var(v) => write!(f, "?{v}"),
            PatternTerm::Const(t) => write!(f, "{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    pub subject: PatternTerm,
    pub predicate: PatternTerm,
    pub object: PatternTerm,
}

impl TriplePattern {
    pub fn new(subject: PatternTerm, predicate: PatternTerm, object: PatternTerm) -> Self {
        TriplePattern {
            subject,
            predicate,
            object,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> + '_ {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(PatternTerm::as_var)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompareOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl CompareOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Eq => "=",
            CompareOp::Ge => ">=",
            CompareOp::Gt => ">",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Self> {
        Some(match s {
            "<" => CompareOp::Lt,
            "<=" => CompareOp::Le,
            "=" => CompareOp::Eq,
            ">=" => CompareOp::Ge,
            ">" => CompareOp::Gt,
            _ => return None,
        })
    }

    pub fn holds(self, left: f64, right: f64) -> bool {
        match self {
            CompareOp::Lt => left < right,
            CompareOp::Le => left <= right,
            CompareOp::Eq => left == right,
            CompareOp::Ge => left >= right,
            CompareOp::Gt => left > right,
        }
    }
}

/// `FILTER(?var op constant)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Filter {
    pub var: String,
    pub op: CompareOp,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Projection {
    Vars(Vec<String>),
    /// `SELECT ?g.. (COUNT(DISTINCT ?var) AS ?alias) ... GROUP BY ?g..`
    Count {
        group_by: Vec<String>,
        var: String,
        alias: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BgpQuery {
    pub distinct: bool,
    pub projection: Projection,
    pub patterns: Vec<TriplePattern>,
    pub filters: Vec<Filter>,
}

impl BgpQuery {
    /// Output column names.
    pub fn columns(&self) -> Vec<String> {
        match &self.projection {
            Projection::Vars(v) => v.clone(),
            Projection::Count { group_by, alias, .. } => {
                let mut c = group_by.clone();
                c.push(alias.clone());
                c
            }
        }
    }

    /// Variables occurring in the triple patterns, in first-occurrence order.
    pub fn pattern_vars(&self) -> Vec<&str> {
        let mut seen = BTreeSet::new();
        self.patterns
            .iter()
            .flat_map(TriplePattern::vars)
            .filter(|v| seen.insert(*v))
            .collect()
    }

    /// Checks that projected, grouped and filtered variables are bound by
    /// some pattern and that the pattern graph is connected.
    pub fn validate(&self) -> Result<(), QueryError> {
        let bound: BTreeSet<&str> = self.pattern_vars().into_iter().collect();
        let used: Vec<&str> = match &self.projection {
            Projection::Vars(v) => v.iter().map(String::as_str).collect(),
            Projection::Count { group_by, var, .. } => {
                group_by.iter().map(String::as_str).chain([var.as_str()]).collect()
            }
        };
        for v in used.into_iter().chain(self.filters.iter().map(|f| f.var.as_str())) {
            if !bound.contains(v) {
                return Err(QueryError::UnboundVariable(v.to_string()));
            }
        }
        if let Projection::Count { alias, .. } = &self.projection {
            if bound.contains(alias.as_str()) {
                return Err(QueryError::Syntax {
                    line: 0,
                    reason: format!("aggregate alias ?{alias} is already bound"),
                });
            }
        }
        query_depth(self).map(|_| ())
    }
}

impl fmt::Display for BgpQuery {
    /// Renders the SPARQL subset with full IRIs and typed literals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("SELECT ")?;
        if self.distinct {
            f.write_str("DISTINCT ")?;
        }
        match &self.projection {
            Projection::Vars(vars) => {
                let names: Vec<String> = vars.iter().map(|v| format!("?{v}")).collect();
                f.write_str(&names.join(" "))?;
            }
            Projection::Count { group_by, var, alias } => {
                for g in group_by {
                    write!(f, "?{g} ")?;
                }
                write!(f, "(COUNT(DISTINCT ?{var}) AS ?{alias})")?;
            }
        }
        f.write_str(" WHERE {\n")?;
        for p in &self.patterns {
            writeln!(f, "  {} {} {} .", p.subject, p.predicate, p.object)?;
        }
        for flt in &self.filters {
            writeln!(f, "  FILTER(?{} {} {})", flt.var, flt.op.symbol(), flt.value)?;
        }
        f.write_str("}\n")?;
        if let Projection::Count { group_by, .. } = &self.projection {
            if !group_by.is_empty() {
                let names: Vec<String> = group_by.iter().map(|v| format!("?{v}")).collect();
                writeln!(f, "GROUP BY {}", names.join(" "))?;
            }
        }
        Ok(())
    }
}

/// Diameter of the undirected pattern graph whose nodes are the subject and
/// object positions (variables and constants alike) and whose edges are the
/// triple patterns.
pub fn query_depth(q: &BgpQuery) -> Result<usize, QueryError> {
    let mut index: BTreeMap<&PatternTerm, usize> = BTreeMap::new();
    for p in &q.patterns {
        for n in [&p.subject, &p.object] {
            let next = index.len();
            index.entry(n).or_insert(next);
        }
    }
    let mut adj = vec![Vec::new(); index.len()];
    for p in &q.patterns {
        let (s, o) = (index[&p.subject], index[&p.object]);
        if s != o {
            adj[s].push(o);
            adj[o].push(s);
        }
    }
    let mut diameter = 0;
    for start in 0..adj.len() {
        let mut dist = vec![usize::MAX; adj.len()];
        dist[start] = 0;
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            for &v in &adj[u] {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        for d in dist {
            if d == usize::MAX {
                return Err(QueryError::DisconnectedPattern);
            }
            diameter = diameter.max(d);
        }
    }
    Ok(diameter)
}
