use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::rdf::{Graph, Literal, Term, Triple};

use super::ast::{BgpQuery, PatternTerm, Projection, TriplePattern};
use super::QueryError;

/// Query answers. Rows are sorted; duplicates are kept unless the query
/// asked for DISTINCT.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ResultSet {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Term>>,
}

impl ResultSet {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// CSV with a header row; literals by lexical form, IRIs bare, blank
    /// nodes as `_:label`.
    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        w.write_record(&self.columns).expect("write to memory");
        for row in &self.rows {
            w.write_record(row.iter().map(|t| match t {
                Term::Iri(i) => i.clone(),
                Term::Blank(b) => format!("_:{b}"),
                Term::Literal(l) => l.lexical().to_string(),
            }))
            .expect("write to memory");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv output is utf8")
    }
}

/// Hash indexes over a graph for pattern lookups.
pub struct GraphIndex<'g> {
    all: Vec<&'g Triple>,
    by_subject: HashMap<&'g Term, Vec<&'g Triple>>,
    by_predicate: HashMap<&'g Term, Vec<&'g Triple>>,
    by_object: HashMap<&'g Term, Vec<&'g Triple>>,
    by_sp: HashMap<&'g Term, HashMap<&'g Term, Vec<&'g Triple>>>,
    by_po: HashMap<&'g Term, HashMap<&'g Term, Vec<&'g Triple>>>,
}

impl<'g> GraphIndex<'g> {
    pub fn new(g: &'g Graph) -> Self {
        let mut idx = GraphIndex {
            all: Vec::with_capacity(g.len()),
            by_subject: HashMap::new(),
            by_predicate: HashMap::new(),
            by_object: HashMap::new(),
            by_sp: HashMap::new(),
            by_po: HashMap::new(),
        };
        for t in g.iter() {
            idx.all.push(t);
            idx.by_subject.entry(&t.subject).or_default().push(t);
            idx.by_predicate.entry(&t.predicate).or_default().push(t);
            idx.by_object.entry(&t.object).or_default().push(t);
            idx.by_sp.entry(&t.subject).or_default().entry(&t.predicate).or_default().push(t);
            idx.by_po.entry(&t.predicate).or_default().entry(&t.object).or_default().push(t);
        }
        idx
    }

    fn candidates(&self, s: Option<&Term>, p: Option<&Term>, o: Option<&Term>) -> &[&'g Triple] {
        let hit = match (s, p, o) {
            (Some(s), Some(p), _) => self.by_sp.get(s).and_then(|m| m.get(p)),
            (_, Some(p), Some(o)) => self.by_po.get(p).and_then(|m| m.get(o)),
            (Some(s), _, _) => self.by_subject.get(s),
            (_, _, Some(o)) => self.by_object.get(o),
            (_, Some(p), _) => self.by_predicate.get(p),
            (None, None, None) => return &self.all,
        };
        hit.map(Vec::as_slice).unwrap_or(&[])
    }
}

type Binding<'g> = Vec<Option<&'g Term>>;

fn resolve<'a, 'g: 'a>(t: &'a PatternTerm, slots: &BTreeMap<&str, usize>, b: &Binding<'g>) -> Option<&'a Term> {
    match t {
        PatternTerm::Const(c) => Some(c),
        PatternTerm::Var(v) => b[slots[v.as_str()]],
    }
}

fn bound_count(p: &TriplePattern, bound: &BTreeSet<&str>) -> usize {
    [&p.subject, &p.predicate, &p.object]
        .into_iter()
        .filter(|t| match t {
            PatternTerm::Const(_) => true,
            PatternTerm::Var(v) => bound.contains(v.as_str()),
        })
        .count()
}

/// Evaluates with a fresh index; see [`evaluate_indexed`].
pub fn evaluate(q: &BgpQuery, g: &Graph) -> Result<ResultSet, QueryError> {
    evaluate_indexed(q, &GraphIndex::new(g))
}

/// Joins the patterns (most-bound pattern first), applies filters, then
/// grouping with COUNT(DISTINCT), then DISTINCT, and sorts the rows.
///
/// Filters compare numerically. A non-numeric literal on either side is a
/// [`QueryError::TypeMismatch`]; a binding to an IRI or blank node fails the
/// filter.
pub fn evaluate_indexed<'g>(q: &BgpQuery, idx: &GraphIndex<'g>) -> Result<ResultSet, QueryError> {
    let vars = q.pattern_vars();
    let slots: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();

    let mut remaining: Vec<&TriplePattern> = q.patterns.iter().collect();
    let mut bound: BTreeSet<&str> = BTreeSet::new();
    let mut solutions: Vec<Binding<'g>> = vec![vec![None; vars.len()]];
    while !remaining.is_empty() && !solutions.is_empty() {
        let pick = (0..remaining.len())
            .max_by_key(|&i| (bound_count(remaining[i], &bound), std::cmp::Reverse(i)))
            .expect("non-empty");
        let pattern = remaining.remove(pick);
        let mut next = Vec::new();
        for b in &solutions {
            let s = resolve(&pattern.subject, &slots, b);
            let p = resolve(&pattern.predicate, &slots, b);
            let o = resolve(&pattern.object, &slots, b);
            'triples: for t in idx.candidates(s, p, o) {
                let mut nb = b.clone();
                for (pt, actual) in [(&pattern.subject, &t.subject), (&pattern.predicate, &t.predicate), (&pattern.object, &t.object)] {
                    match pt {
                        PatternTerm::Const(c) if c != actual => continue 'triples,
                        PatternTerm::Const(_) => {}
                        PatternTerm::Var(v) => {
                            let slot = &mut nb[slots[v.as_str()]];
                            match slot {
                                Some(prev) if *prev != actual => continue 'triples,
                                _ => *slot = Some(actual),
                            }
                        }
                    }
                }
                next.push(nb);
            }
        }
        solutions = next;
        bound.extend(pattern.vars());
    }

    let mut kept = Vec::with_capacity(solutions.len());
    for b in solutions {
        let mut pass = true;
        for f in &q.filters {
            let right = f.value.as_f64().ok_or_else(|| QueryError::TypeMismatch {
                var: f.var.clone(),
                value: f.value.to_string(),
            })?;
            let left = match b[slots[f.var.as_str()]] {
                Some(Term::Literal(l)) => l.as_f64().ok_or_else(|| QueryError::TypeMismatch {
                    var: f.var.clone(),
                    value: l.to_string(),
                })?,
                _ => {
                    pass = false;
                    break;
                }
            };
            if !f.op.holds(left, right) {
                pass = false;
                break;
            }
        }
        if pass {
            kept.push(b);
        }
    }

    let value = |b: &Binding<'g>, v: &str| -> Term { b[slots[v]].expect("pattern variables are bound").clone() };
    let mut rows: Vec<Vec<Term>> = match &q.projection {
        Projection::Vars(cols) => kept.iter().map(|b| cols.iter().map(|c| value(b, c)).collect()).collect(),
        Projection::Count { group_by, var, .. } => {
            let mut groups: BTreeMap<Vec<Term>, BTreeSet<Term>> = BTreeMap::new();
            for b in &kept {
                let key = group_by.iter().map(|g| value(b, g)).collect();
                groups.entry(key).or_default().insert(value(b, var));
            }
            if group_by.is_empty() && groups.is_empty() {
                groups.insert(Vec::new(), BTreeSet::new());
            }
            groups
                .into_iter()
                .map(|(mut key, members)| {
                    key.push(Term::Literal(Literal::integer(members.len() as i64)));
                    key
                })
                .collect()
        }
    };
    rows.sort();
    if q.distinct {
        rows.dedup();
    }
    Ok(ResultSet {
        columns: q.columns(),
        rows,
    })
}
