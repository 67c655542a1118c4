use std::collections::BTreeMap;

use crate::rdf::{valid_iri, Datatype, Literal, Term, RDF_TYPE};

use super::ast::{BgpQuery, CompareOp, Filter, PatternTerm, Projection, TriplePattern};
use super::QueryError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Var(String),
    Iri(String),
    PName(String, String),
    Lit(Literal),
    Punct(&'static str),
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn line(&self) -> usize {
        self.src[..self.pos].matches('\n').count() + 1
    }

    fn err(&self, reason: impl Into<String>) -> QueryError {
        QueryError::Syntax {
            line: self.line(),
            reason: reason.into(),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_space(&mut self) {
        loop {
            let rest = self.rest();
            let trimmed = rest.trim_start();
            self.pos += rest.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.pos += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                break;
            }
        }
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c| !f(c)).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn next(&mut self) -> Result<Option<Tok>, QueryError> {
        self.skip_space();
        let rest = self.rest();
        let Some(c) = rest.chars().next() else {
            return Ok(None);
        };
        let name_char = |c: char| c.is_alphanumeric() || c == '_' || c == '-';
        let tok = match c {
            '?' | '$' => {
                self.pos += 1;
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_');
                if name.is_empty() {
                    return Err(self.err("empty variable name"));
                }
                Tok::Var(name.to_string())
            }
            '<' => {
                let close = rest.find(|c: char| c == '>' || c.is_whitespace());
                match close {
                    Some(i) if rest.as_bytes()[i] == b'>' && valid_iri(&rest[1..i]) && i > 1 => {
                        self.pos += i + 1;
                        Tok::Iri(rest[1..i].to_string())
                    }
                    _ if rest.starts_with("<=") => {
                        self.pos += 2;
                        Tok::Punct("<=")
                    }
                    _ => {
                        self.pos += 1;
                        Tok::Punct("<")
                    }
                }
            }
            '>' | '=' | '!' => {
                let op = if rest.starts_with(">=") {
                    ">="
                } else if c == '>' {
                    ">"
                } else if c == '=' {
                    "="
                } else {
                    return Err(self.err("unsupported operator '!'"));
                };
                self.pos += op.len();
                Tok::Punct(op)
            }
            '{' | '}' | '(' | ')' | ';' | ',' => {
                self.pos += 1;
                Tok::Punct(match c {
                    '{' => "{",
                    '}' => "}",
                    '(' => "(",
                    ')' => ")",
                    ';' => ";",
                    _ => ",",
                })
            }
            '.' if !rest[1..].starts_with(|c: char| c.is_ascii_digit()) => {
                self.pos += 1;
                Tok::Punct(".")
            }
            '"' => Tok::Lit(self.string_literal()?),
            c if c.is_ascii_digit() || c == '+' || c == '-' || c == '.' => {
                let text = self.take_while(|c| c.is_ascii_digit() || matches!(c, '+' | '-' | '.'));
                let text = text.strip_suffix('.').map_or(text, |t| {
                    self.pos -= 1;
                    t
                });
                let lit = Literal::new(text, Datatype::Integer)
                    .or_else(|| Literal::new(text, Datatype::Decimal))
                    .ok_or_else(|| self.err(format!("malformed number '{text}'")))?;
                Tok::Lit(lit)
            }
            c if c.is_alphabetic() || c == '_' => {
                let word = self.take_while(name_char);
                if self.rest().starts_with(':') {
                    self.pos += 1;
                    let local = self.local_name();
                    Tok::PName(word.to_string(), local)
                } else {
                    Tok::Word(word.to_string())
                }
            }
            ':' => {
                self.pos += 1;
                Tok::PName(String::new(), self.local_name())
            }
            _ => return Err(self.err(format!("unexpected character '{c}'"))),
        };
        Ok(Some(tok))
    }

    fn local_name(&mut self) -> String {
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = c.is_alphanumeric()
                || c == '_'
                || c == '-'
                || (c == '.' && rest[i + 1..].starts_with(|n: char| n.is_alphanumeric() || n == '_'));
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        self.pos += end;
        rest[..end].to_string()
    }

    fn string_literal(&mut self) -> Result<Literal, QueryError> {
        self.pos += 1;
        let mut value = String::new();
        loop {
            let Some(c) = self.rest().chars().next() else {
                return Err(self.err("unterminated string"));
            };
            self.pos += c.len_utf8();
            match c {
                '"' => break,
                '\\' => {
                    let e = self.rest().chars().next().ok_or_else(|| self.err("dangling escape"))?;
                    self.pos += 1;
                    value.push(match e {
                        'n' => '\n',
                        'r' => '\r',
                        't' => '\t',
                        '"' => '"',
                        '\\' => '\\',
                        _ => return Err(self.err(format!("unsupported escape '\\{e}'"))),
                    });
                }
                '\n' => return Err(self.err("newline in string")),
                c => value.push(c),
            }
        }
        if !self.rest().starts_with("^^") {
            return Ok(Literal::string(value));
        }
        self.pos += 2;
        let dt = match self.next()? {
            Some(Tok::Iri(i)) => i,
            Some(Tok::PName(p, l)) if p == "xsd" => format!("http://www.w3.org/2001/XMLSchema#{l}"),
            _ => return Err(self.err("expected datatype IRI after ^^")),
        };
        let datatype = Datatype::from_iri(&dt).ok_or_else(|| self.err(format!("unsupported datatype <{dt}>")))?;
        Literal::new(value.clone(), datatype).ok_or_else(|| self.err(format!("'{value}' is not a valid <{dt}>")))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    peeked: Option<Tok>,
    prefixes: BTreeMap<String, String>,
}

impl Parser<'_> {
    fn peek(&mut self) -> Result<Option<&Tok>, QueryError> {
        if self.peeked.is_none() {
            self.peeked = self.lexer.next()?;
        }
        Ok(self.peeked.as_ref())
    }

    fn bump(&mut self) -> Result<Option<Tok>, QueryError> {
        self.peek()?;
        Ok(self.peeked.take())
    }

    fn is_word(&mut self, w: &str) -> Result<bool, QueryError> {
        Ok(matches!(self.peek()?, Some(Tok::Word(x)) if x.eq_ignore_ascii_case(w)))
    }

    fn is_punct(&mut self, p: &str) -> Result<bool, QueryError> {
        Ok(matches!(self.peek()?, Some(Tok::Punct(x)) if *x == p))
    }

    fn expect_word(&mut self, w: &str) -> Result<(), QueryError> {
        if self.is_word(w)? {
            self.bump()?;
            Ok(())
        } else {
            Err(self.lexer.err(format!("expected {w}")))
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), QueryError> {
        if self.is_punct(p)? {
            self.bump()?;
            Ok(())
        } else {
            Err(self.lexer.err(format!("expected '{p}'")))
        }
    }

    fn var(&mut self) -> Result<String, QueryError> {
        match self.bump()? {
            Some(Tok::Var(v)) => Ok(v),
            _ => Err(self.lexer.err("expected a variable")),
        }
    }

    fn resolve(&self, p: &str, local: &str) -> Result<String, QueryError> {
        self.prefixes
            .get(p)
            .map(|base| format!("{base}{local}"))
            .ok_or_else(|| self.lexer.err(format!("undeclared prefix '{p}:'")))
    }

    fn term(&mut self, predicate: bool) -> Result<PatternTerm, QueryError> {
        let t = self.bump()?;
        Ok(match t {
            Some(Tok::Var(v)) => PatternTerm::Var(v),
            Some(Tok::Iri(i)) => PatternTerm::iri(i),
            Some(Tok::PName(p, l)) => PatternTerm::iri(self.resolve(&p, &l)?),
            Some(Tok::Word(w)) if predicate && w == "a" => PatternTerm::iri(RDF_TYPE),
            Some(Tok::Lit(l)) if !predicate => PatternTerm::Const(Term::Literal(l)),
            other => return Err(self.lexer.err(format!("unexpected {other:?} in triple pattern"))),
        })
    }

    fn filter(&mut self) -> Result<Filter, QueryError> {
        self.expect_punct("(")?;
        let var = self.var()?;
        let op = match self.bump()? {
            Some(Tok::Punct(p)) => CompareOp::from_symbol(p),
            _ => None,
        }
        .ok_or_else(|| self.lexer.err("expected a comparison operator"))?;
        let value = match self.bump()? {
            Some(Tok::Lit(l)) => l,
            _ => return Err(self.lexer.err("expected a literal constant")),
        };
        self.expect_punct(")")?;
        Ok(Filter { var, op, value })
    }

    fn group_graph(&mut self, patterns: &mut Vec<TriplePattern>, filters: &mut Vec<Filter>) -> Result<(), QueryError> {
        self.expect_punct("{")?;
        loop {
            if self.is_punct("}")? {
                self.bump()?;
                return Ok(());
            }
            if self.is_punct(".")? {
                self.bump()?;
                continue;
            }
            if self.is_word("FILTER")? {
                self.bump()?;
                filters.push(self.filter()?);
                continue;
            }
            let subject = self.term(false)?;
            if matches!(subject, PatternTerm::Const(Term::Literal(_))) {
                return Err(self.lexer.err("literal in subject position"));
            }
            loop {
                let predicate = self.term(true)?;
                loop {
                    let object = self.term(false)?;
                    patterns.push(TriplePattern::new(subject.clone(), predicate.clone(), object));
                    if !self.is_punct(",")? {
                        break;
                    }
                    self.bump()?;
                }
                if !self.is_punct(";")? {
                    break;
                }
                self.bump()?;
                if self.is_punct(".")? || self.is_punct("}")? {
                    break;
                }
            }
            if !self.is_punct("}")? && !self.is_word("FILTER")? {
                self.expect_punct(".")?;
            }
        }
    }

    fn query(&mut self) -> Result<BgpQuery, QueryError> {
        while self.is_word("PREFIX")? {
            self.bump()?;
            let (p, local) = match self.bump()? {
                Some(Tok::PName(p, l)) => (p, l),
                _ => return Err(self.lexer.err("expected 'prefix:' after PREFIX")),
            };
            if !local.is_empty() {
                return Err(self.lexer.err("prefix declaration with a local part"));
            }
            match self.bump()? {
                Some(Tok::Iri(i)) => self.prefixes.insert(p, i),
                _ => return Err(self.lexer.err("expected <iri> in PREFIX")),
            };
        }
        self.expect_word("SELECT")?;
        let distinct = self.is_word("DISTINCT")?;
        if distinct {
            self.bump()?;
        }
        let mut vars = Vec::new();
        let mut count = None;
        loop {
            match self.peek()? {
                Some(Tok::Var(_)) => vars.push(self.var()?),
                Some(Tok::Punct("(")) if count.is_none() => {
                    self.bump()?;
                    self.expect_word("COUNT")?;
                    self.expect_punct("(")?;
                    self.expect_word("DISTINCT")?;
                    let v = self.var()?;
                    self.expect_punct(")")?;
                    self.expect_word("AS")?;
                    let alias = self.var()?;
                    self.expect_punct(")")?;
                    count = Some((v, alias));
                }
                _ => break,
            }
        }
        if vars.is_empty() && count.is_none() {
            return Err(self.lexer.err("SELECT needs at least one variable"));
        }
        if self.is_word("WHERE")? {
            self.bump()?;
        }
        let mut patterns = Vec::new();
        let mut filters = Vec::new();
        self.group_graph(&mut patterns, &mut filters)?;
        if patterns.is_empty() {
            return Err(self.lexer.err("empty WHERE clause"));
        }
        let mut group_by = Vec::new();
        if self.is_word("GROUP")? {
            self.bump()?;
            self.expect_word("BY")?;
            while let Some(Tok::Var(_)) = self.peek()? {
                group_by.push(self.var()?);
            }
            if group_by.is_empty() {
                return Err(self.lexer.err("GROUP BY needs a variable"));
            }
        }
        if let Some(t) = self.bump()? {
            return Err(self.lexer.err(format!("trailing input {t:?}")));
        }
        let projection = match count {
            Some((var, alias)) => {
                if vars != group_by {
                    return Err(self.lexer.err("selected variables must equal the GROUP BY list"));
                }
                Projection::Count { group_by, var, alias }
            }
            None if !group_by.is_empty() => return Err(self.lexer.err("GROUP BY without COUNT")),
            None => Projection::Vars(vars),
        };
        let q = BgpQuery {
            distinct,
            projection,
            patterns,
            filters,
        };
        q.validate()?;
        Ok(q)
    }
}

/// Parses the supported SPARQL subset.
pub fn parse_sparql(text: &str) -> Result<BgpQuery, QueryError> {
    let mut p = Parser {
        lexer: Lexer { src: text, pos: 0 },
        peeked: None,
        prefixes: BTreeMap::new(),
    };
    p.query()
}
