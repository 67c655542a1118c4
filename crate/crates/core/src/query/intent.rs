use std::fmt;

use crate::rdf::{Datatype, Literal};

use super::ast::CompareOp;
use super::QueryError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntentKind {
    /// Type I: list attributes.
    Inspection,
    /// Type II: count distinct values per group.
    Summary,
    /// Type III: list attributes where a threshold is crossed.
    Diagnostic,
}

impl IntentKind {
    pub fn code(self) -> &'static str {
        match self {
            IntentKind::Inspection => "I",
            IntentKind::Summary => "II",
            IntentKind::Diagnostic => "III",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code {
            "I" => Some(IntentKind::Inspection),
            "II" => Some(IntentKind::Summary),
            "III" => Some(IntentKind::Diagnostic),
            _ => None,
        }
    }
}

/// A `table.attribute` reference.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrRef {
    pub table: String,
    pub attribute: String,
}

impl AttrRef {
    pub fn new(table: impl Into<String>, attribute: impl Into<String>) -> Self {
        AttrRef {
            table: table.into(),
            attribute: attribute.into(),
        }
    }
}

impl fmt::Display for AttrRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.table, self.attribute)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntentFilter {
    pub attribute: AttrRef,
    pub op: CompareOp,
    pub value: Literal,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryIntent {
    pub name: String,
    pub kind: IntentKind,
    pub targets: Vec<AttrRef>,
    pub group: Option<AttrRef>,
    pub filter: Option<IntentFilter>,
    pub context: Vec<AttrRef>,
}

impl QueryIntent {
    pub fn inspection(name: impl Into<String>, targets: Vec<AttrRef>) -> Self {
        QueryIntent {
            name: name.into(),
            kind: IntentKind::Inspection,
            targets,
            group: None,
            filter: None,
            context: Vec::new(),
        }
    }

    pub fn summary(name: impl Into<String>, target: AttrRef, group: AttrRef) -> Self {
        QueryIntent {
            name: name.into(),
            kind: IntentKind::Summary,
            targets: vec![target],
            group: Some(group),
            filter: None,
            context: Vec::new(),
        }
    }

    pub fn diagnostic(name: impl Into<String>, filter: IntentFilter, context: Vec<AttrRef>) -> Self {
        QueryIntent {
            name: name.into(),
            kind: IntentKind::Diagnostic,
            targets: vec![filter.attribute.clone()],
            group: None,
            filter: Some(filter),
            context,
        }
    }

    /// Every attribute the intent mentions, in a stable order.
    pub fn attributes(&self) -> Vec<&AttrRef> {
        let mut out: Vec<&AttrRef> = Vec::new();
        let all = self
            .targets
            .iter()
            .chain(self.group.iter())
            .chain(self.filter.iter().map(|f| &f.attribute))
            .chain(self.context.iter());
        for a in all {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        out
    }

    pub fn check(&self) -> Result<(), QueryError> {
        let bad = |reason: &str| QueryError::InvalidIntent {
            name: self.name.clone(),
            reason: reason.to_string(),
        };
        if self.targets.is_empty() {
            return Err(bad("no target attributes"));
        }
        match self.kind {
            IntentKind::Summary if self.group.is_none() => Err(bad("summary intent needs group=")),
            IntentKind::Diagnostic if self.filter.is_none() => Err(bad("diagnostic intent needs filter=")),
            _ => Ok(()),
        }
    }
}

fn join(refs: &[AttrRef]) -> String {
    refs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

impl fmt::Display for QueryIntent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "intent {} kind={} targets={}", self.name, self.kind.code(), join(&self.targets))?;
        if let Some(g) = &self.group {
            write!(f, " group={g}")?;
        }
        if let Some(flt) = &self.filter {
            write!(f, " filter={}{}{}", flt.attribute, flt.op.symbol(), flt.value.lexical())?;
        }
        if !self.context.is_empty() {
            write!(f, " context={}", join(&self.context))?;
        }
        Ok(())
    }
}

fn parse_ref(s: &str, line: usize) -> Result<AttrRef, QueryError> {
    s.split_once('.')
        .filter(|(t, a)| !t.is_empty() && !a.is_empty())
        .map(|(t, a)| AttrRef::new(t, a))
        .ok_or_else(|| QueryError::Syntax {
            line,
            reason: format!("expected table.attribute, found '{s}'"),
        })
}

fn parse_refs(s: &str, line: usize) -> Result<Vec<AttrRef>, QueryError> {
    s.split(',').map(|r| parse_ref(r, line)).collect()
}

/// Parses an intent file: one `intent <name> kind=<I|II|III> targets=...
/// [group=...] [filter=...] [context=...]` per line, `#` comments allowed.
pub fn parse_intents(text: &str) -> Result<Vec<QueryIntent>, QueryError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split_once('#').map_or(raw, |(c, _)| c).trim();
        if content.is_empty() {
            continue;
        }
        let err = |reason: String| QueryError::Syntax { line, reason };
        let mut words = content.split_whitespace();
        if words.next() != Some("intent") {
            return Err(err("expected 'intent'".into()));
        }
        let name = words.next().ok_or_else(|| err("missing intent name".into()))?;
        let mut kind = None;
        let mut targets = Vec::new();
        let mut group = None;
        let mut filter = None;
        let mut context = Vec::new();
        for w in words {
            let (key, value) = w.split_once('=').ok_or_else(|| err(format!("expected key=value, found '{w}'")))?;
            match key {
                "kind" => {
                    kind = Some(IntentKind::from_code(value).ok_or_else(|| err(format!("unknown kind '{value}'")))?)
                }
                "targets" => targets = parse_refs(value, line)?,
                "group" => group = Some(parse_ref(value, line)?),
                "context" => context = parse_refs(value, line)?,
                "filter" => {
                    let at = value
                        .find(['<', '>', '='])
                        .ok_or_else(|| err(format!("no comparison in filter '{value}'")))?;
                    let op_len = if value[at + 1..].starts_with('=') { 2 } else { 1 };
                    let op = CompareOp::from_symbol(&value[at..at + op_len])
                        .ok_or_else(|| err(format!("bad operator in filter '{value}'")))?;
                    let constant = &value[at + op_len..];
                    let lit = Literal::new(constant, Datatype::Integer)
                        .or_else(|| Literal::new(constant, Datatype::Decimal))
                        .ok_or_else(|| err(format!("filter constant '{constant}' is not numeric")))?;
                    filter = Some(IntentFilter {
                        attribute: parse_ref(&value[..at], line)?,
                        op,
                        value: lit,
                    });
                }
                _ => return Err(err(format!("unknown key '{key}'"))),
            }
        }
        let intent = QueryIntent {
            name: name.to_string(),
            kind: kind.ok_or_else(|| err("missing kind=".into()))?,
            targets,
            group,
            filter,
            context,
        };
        intent.check()?;
        out.push(intent);
    }
    Ok(out)
}
