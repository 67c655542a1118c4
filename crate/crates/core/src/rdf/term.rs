use std::cmp::Ordering;
use std::fmt;

pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const XSD_DECIMAL: &str = "http://www.w3.org/2001/XMLSchema#decimal";

/// The three literal datatypes the store understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Integer,
    Decimal,
}

impl Datatype {
    pub fn iri(self) -> &'static str {
        match self {
            Datatype::String => XSD_STRING,
            Datatype::Integer => XSD_INTEGER,
            Datatype::Decimal => XSD_DECIMAL,
        }
    }

    pub fn from_iri(iri: &str) -> Option<Self> {
        match iri {
            XSD_STRING => Some(Datatype::String),
            XSD_INTEGER => Some(Datatype::Integer),
            XSD_DECIMAL => Some(Datatype::Decimal),
            _ => None,
        }
    }

    /// Checks that `lexical` is a valid lexical form for this datatype.
    pub fn accepts(self, lexical: &str) -> bool {
        match self {
            Datatype::String => true,
            Datatype::Integer => is_integer_lexical(lexical),
            Datatype::Decimal => is_decimal_lexical(lexical),
        }
    }
}

pub(crate) fn is_integer_lexical(s: &str) -> bool {
    let digits = s.strip_prefix(['+', '-']).unwrap_or(s);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

pub(crate) fn is_decimal_lexical(s: &str) -> bool {
    let body = s.strip_prefix(['+', '-']).unwrap_or(s);
    let mut parts = body.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next().unwrap_or("");
    (!int.is_empty() || !frac.is_empty())
        && !frac.contains('.')
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.bytes().all(|b| b.is_ascii_digit())
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: String,
    datatype: Datatype,
}

impl Literal {
    /// Builds a literal, returning `None` if the lexical form does not fit the datatype.
    pub fn new(lexical: impl Into<String>, datatype: Datatype) -> Option<Self> {
        let lexical = lexical.into();
        datatype.accepts(&lexical).then_some(Literal { lexical, datatype })
    }

    pub fn string(lexical: impl Into<String>) -> Self {
        Literal {
            lexical: lexical.into(),
            datatype: Datatype::String,
        }
    }

    pub fn integer(value: i64) -> Self {
        Literal {
            lexical: value.to_string(),
            datatype: Datatype::Integer,
        }
    }

    pub fn lexical(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> Datatype {
        self.datatype
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self.datatype, Datatype::Integer | Datatype::Decimal)
    }

    pub fn as_f64(&self) -> Option<f64> {
        if self.is_numeric() {
            self.lexical.parse().ok()
        } else {
            None
        }
    }
}

/// An RDF term: IRI, blank node or literal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(String),
    Blank(String),
    Literal(Literal),
}

impl Term {
    pub fn iri(s: impl Into<String>) -> Self {
        Term::Iri(s.into())
    }

    pub fn blank(label: impl Into<String>) -> Self {
        Term::Blank(label.into())
    }

    pub fn as_iri(&self) -> Option<&str> {
        match self {
            Term::Iri(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(l) => Some(l),
            _ => None,
        }
    }

    pub fn is_blank(&self) -> bool {
        matches!(self, Term::Blank(_))
    }

    fn rank(&self) -> u8 {
        // first byte of the N-Triples form: '"' < '<' < '_'
        match self {
            Term::Literal(_) => 0,
            Term::Iri(_) => 1,
            Term::Blank(_) => 2,
        }
    }
}

pub fn valid_iri(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

pub fn valid_blank_label(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric())
}

/// Local name of an IRI: the part after the last `#` or `/`.
pub fn local_name(iri: &str) -> &str {
    match iri.rfind(['#', '/']) {
        Some(i) if i + 1 < iri.len() => &iri[i + 1..],
        _ => iri,
    }
}

/// Namespace of an IRI, including the trailing `#` or `/`.
pub fn namespace(iri: &str) -> &str {
    match iri.rfind(['#', '/']) {
        Some(i) => &iri[..=i],
        None => "",
    }
}

fn escape_byte(b: u8) -> Escaped {
    match b {
        b'"' => Escaped::Two(b'"'),
        b'\\' => Escaped::Two(b'\\'),
        b'\n' => Escaped::Two(b'n'),
        b'\r' => Escaped::Two(b'r'),
        b'\t' => Escaped::Two(b't'),
        other => Escaped::One(other),
    }
}

enum Escaped {
    One(u8),
    Two(u8),
}

impl IntoIterator for Escaped {
    type Item = u8;
    type IntoIter = std::iter::Take<std::array::IntoIter<u8, 2>>;

    fn into_iter(self) -> Self::IntoIter {
        match self {
            Escaped::One(b) => [b, 0].into_iter().take(1),
            Escaped::Two(b) => [b'\\', b].into_iter().take(2),
        }
    }
}

pub(crate) fn escape_string(s: &str) -> String {
    String::from_utf8(s.bytes().flat_map(escape_byte).collect()).expect("escaping preserves utf8")
}

/// Bytes of a literal's canonical form after the opening quote.
fn literal_tail(l: &Literal) -> impl Iterator<Item = u8> + '_ {
    let suffix: &[u8] = match l.datatype {
        Datatype::String => b"",
        Datatype::Integer => b"^^<http://www.w3.org/2001/XMLSchema#integer>",
        Datatype::Decimal => b"^^<http://www.w3.org/2001/XMLSchema#decimal>",
    };
    l.lexical
        .bytes()
        .flat_map(escape_byte)
        .chain(std::iter::once(b'"'))
        .chain(suffix.iter().copied())
}

impl Ord for Term {
    /// Byte order of the canonical N-Triples text.
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a
                .bytes()
                .chain(std::iter::once(b'>'))
                .cmp(b.bytes().chain(std::iter::once(b'>'))),
            (Term::Blank(a), Term::Blank(b)) => a.cmp(b),
            (Term::Literal(a), Term::Literal(b)) => literal_tail(a).cmp(literal_tail(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", escape_string(&self.lexical))?;
        match self.datatype {
            Datatype::String => Ok(()),
            dt => write!(f, "^^<{}>", dt.iri()),
        }
    }
}

impl fmt::Display for Term {
    /// Canonical N-Triples form.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(s) => write!(f, "<{s}>"),
            Term::Blank(l) => write!(f, "_:{l}"),
            Term::Literal(l) => l.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub subject: Term,
    pub predicate: Term,
    pub object: Term,
}

impl Triple {
    /// Panics if the subject is a literal or the predicate is not an IRI.
    pub fn new(subject: Term, predicate: Term, object: Term) -> Self {
        assert!(!matches!(subject, Term::Literal(_)), "literal subject");
        assert!(matches!(predicate, Term::Iri(_)), "non-IRI predicate");
        Triple {
            subject,
            predicate,
            object,
        }
    }

    pub fn predicate_iri(&self) -> &str {
        self.predicate.as_iri().expect("predicate is an IRI")
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_matches_canonical_text() {
        let terms = vec![
            Term::iri("http://ex/a"),
            Term::iri("http://ex/a1"),
            Term::iri("http://ex/a/b"),
            Term::blank("b1"),
            Term::blank("b10"),
            Term::Literal(Literal::string("x\"y")),
            Term::Literal(Literal::string("x")),
            Term::Literal(Literal::integer(5)),
            Term::Literal(Literal::new("5.0", Datatype::Decimal).unwrap()),
        ];
        for a in &terms {
            for b in &terms {
                assert_eq!(a.cmp(b), a.to_string().cmp(&b.to_string()), "{a} vs {b}");
            }
        }
    }

    #[test]
    fn lexical_checks() {
        assert!(is_integer_lexical("-12"));
        assert!(!is_integer_lexical("1.2"));
        assert!(is_decimal_lexical("1.25"));
        assert!(is_decimal_lexical(".5"));
        assert!(!is_decimal_lexical("."));
        assert!(!is_decimal_lexical("1.2.3"));
        assert!(Literal::new("abc", Datatype::Integer).is_none());
    }

    #[test]
    fn local_names() {
        assert_eq!(local_name("http://ex.org/onto#Machine"), "Machine");
        assert_eq!(local_name("http://ex.org/a/b"), "b");
        assert_eq!(namespace("http://ex.org/onto#Machine"), "http://ex.org/onto#");
    }
}
