use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::MappingError;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TableBinding {
    pub table: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AttributeTarget {
    /// Attribute values become literals of this datatype property.
    DataProperty(String),
    /// Attribute is elevated: its values key entities of this class.
    ClassKey(String),
}

impl AttributeTarget {
    pub fn iri(&self) -> &str {
        match self {
            AttributeTarget::DataProperty(i) | AttributeTarget::ClassKey(i) => i,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttributeBinding {
    pub table: String,
    pub attribute: String,
    pub target: AttributeTarget,
}

/// User-supplied edge used to join schema fragments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConnectionHint {
    pub from: String,
    pub property: String,
    pub to: String,
}

/// Bindings from tables and attributes to ontology elements, plus hints.
/// Entries keep file order; duplicates survive parsing so that validation
/// can report them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MappingSpec {
    pub prefixes: BTreeMap<String, String>,
    pub tables: Vec<TableBinding>,
    pub attributes: Vec<AttributeBinding>,
    pub hints: Vec<ConnectionHint>,
}

impl MappingSpec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty() && self.attributes.is_empty() && self.hints.is_empty()
    }

    pub fn table_class(&self, table: &str) -> Option<&str> {
        self.tables.iter().find(|t| t.table == table).map(|t| t.class.as_str())
    }

    pub fn attributes_of<'a>(&'a self, table: &'a str) -> impl Iterator<Item = &'a AttributeBinding> + 'a {
        self.attributes.iter().filter(move |a| a.table == table)
    }

    pub fn binding(&self, table: &str, attribute: &str) -> Option<&AttributeBinding> {
        self.attributes
            .iter()
            .find(|a| a.table == table && a.attribute == attribute)
    }

    /// Class keyed by an elevated attribute of `table`, if any attribute of
    /// the table elevates to `class`.
    pub fn key_attribute(&self, table: &str, class: &str) -> Option<&AttributeBinding> {
        self.attributes
            .iter()
            .find(|a| a.table == table && matches!(&a.target, AttributeTarget::ClassKey(c) if c == class))
    }

    /// Classes elevated by any attribute of any table.
    pub fn elevated_classes(&self) -> impl Iterator<Item = &str> + '_ {
        self.attributes.iter().filter_map(|a| match &a.target {
            AttributeTarget::ClassKey(c) => Some(c.as_str()),
            _ => None,
        })
    }

    /// Classes elevated by attributes of `table`.
    pub fn elevated_classes_of<'a>(&'a self, table: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.attributes_of(table).filter_map(|a| match &a.target {
            AttributeTarget::ClassKey(c) => Some(c.as_str()),
            _ => None,
        })
    }

    /// Appends the bindings of `other`; prefixes already bound here win.
    pub fn merge(&mut self, other: MappingSpec) {
        for (p, iri) in other.prefixes {
            self.prefixes.entry(p).or_insert(iri);
        }
        self.tables.extend(other.tables);
        self.attributes.extend(other.attributes);
        self.hints.extend(other.hints);
    }

    fn compact(&self, iri: &str) -> String {
        let best = self
            .prefixes
            .iter()
            .filter(|(_, base)| iri.starts_with(base.as_str()) && safe_local(&iri[base.len()..]))
            .max_by_key(|(_, base)| base.len());
        match best {
            Some((p, base)) => format!("{p}:{}", &iri[base.len()..]),
            None => format!("<{iri}>"),
        }
    }

    /// Writes the line-oriented mapping format.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        for (p, iri) in &self.prefixes {
            let _ = writeln!(out, "prefix {p} <{iri}>");
        }
        for t in &self.tables {
            let _ = writeln!(out, "table {} => class {}", t.table, self.compact(&t.class));
        }
        for a in &self.attributes {
            let (kind, iri) = match &a.target {
                AttributeTarget::DataProperty(i) => ("dataprop", i),
                AttributeTarget::ClassKey(i) => ("classkey", i),
            };
            let _ = writeln!(out, "attr {}.{} => {kind} {}", a.table, a.attribute, self.compact(iri));
        }
        for h in &self.hints {
            let _ = writeln!(
                out,
                "hint {} -[{}]-> {}",
                self.compact(&h.from),
                self.compact(&h.property),
                self.compact(&h.to)
            );
        }
        out
    }
}

fn safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(['.', '<', '>', '[', ']']) && !s.chars().any(char::is_whitespace)
}

fn resolve(prefixes: &BTreeMap<String, String>, token: &str, line: usize) -> Result<String, MappingError> {
    let err = |reason: String| MappingError::Syntax { line, reason };
    if let Some(inner) = token.strip_prefix('<') {
        let iri = inner
            .strip_suffix('>')
            .ok_or_else(|| err(format!("unterminated IRI '{token}'")))?;
        if !crate::rdf::valid_iri(iri) {
            return Err(err(format!("invalid IRI '{token}'")));
        }
        return Ok(iri.to_string());
    }
    let (p, local) = token
        .split_once(':')
        .ok_or_else(|| err(format!("expected a CURIE or <iri>, found '{token}'")))?;
    let base = prefixes
        .get(p)
        .ok_or_else(|| err(format!("undeclared prefix '{p}'")))?;
    Ok(format!("{base}{local}"))
}

/// Parses the mapping format. Checks only syntax; see
/// [`validate_mapping`](super::validate_mapping) for semantic checks.
pub fn parse_mapping(text: &str) -> Result<MappingSpec, MappingError> {
    let mut spec = MappingSpec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = strip_comment(raw);
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let err = |reason: &str| MappingError::Syntax {
            line,
            reason: reason.to_string(),
        };
        match tokens.as_slice() {
            ["prefix", p, iri] => {
                let p = p.strip_suffix(':').unwrap_or(p);
                if !valid_name(p) || p.contains(':') {
                    return Err(err("invalid prefix name"));
                }
                let iri = iri.strip_prefix('<').and_then(|i| i.strip_suffix('>')).unwrap_or(iri);
                if !crate::rdf::valid_iri(iri) {
                    return Err(err("invalid prefix IRI"));
                }
                spec.prefixes.insert(p.to_string(), iri.to_string());
            }
            ["table", name, "=>", "class", class] => {
                if !valid_name(name) {
                    return Err(err("invalid table name"));
                }
                spec.tables.push(TableBinding {
                    table: name.to_string(),
                    class: resolve(&spec.prefixes, class, line)?,
                });
            }
            ["attr", qualified, "=>", kind, target] => {
                let (table, attribute) = qualified
                    .split_once('.')
                    .filter(|(t, a)| valid_name(t) && !a.is_empty() && !a.contains(['<', '>']))
                    .ok_or_else(|| err("expected <table>.<attribute>"))?;
                let iri = resolve(&spec.prefixes, target, line)?;
                let target = match *kind {
                    "dataprop" => AttributeTarget::DataProperty(iri),
                    "classkey" => AttributeTarget::ClassKey(iri),
                    _ => return Err(err("expected 'dataprop' or 'classkey'")),
                };
                spec.attributes.push(AttributeBinding {
                    table: table.to_string(),
                    attribute: attribute.to_string(),
                    target,
                });
            }
            ["hint", from, edge, to] => {
                let property = edge
                    .strip_prefix("-[")
                    .and_then(|e| e.strip_suffix("]->"))
                    .ok_or_else(|| err("expected -[property]-> in hint"))?;
                spec.hints.push(ConnectionHint {
                    from: resolve(&spec.prefixes, from, line)?,
                    property: resolve(&spec.prefixes, property, line)?,
                    to: resolve(&spec.prefixes, to, line)?,
                });
            }
            _ => return Err(err(&format!("unrecognised statement '{}'", content.trim()))),
        }
    }
    Ok(spec)
}

/// A `#` starts a comment at line start or after whitespace, outside `<...>`.
fn strip_comment(raw: &str) -> String {
    let mut depth = 0usize;
    let mut out = String::new();
    let mut prev_space = true;
    for c in raw.chars() {
        match c {
            '<' => depth += 1,
            '>' => depth = depth.saturating_sub(1),
            '#' if depth == 0 && prev_space => break,
            _ => {}
        }
        prev_space = c.is_whitespace();
        out.push(c);
    }
    out.trim().to_string()
}
