use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::graph::Graph;
use super::lexer::{Lexer, Token};
use super::term::{Term, Triple};
use super::{check_positions, resolve_term, RdfError, RDF_TYPE};

/// Parses the supported Turtle subset: `@prefix`, prefixed names, `<iri>`,
/// `a`, `;`/`,` continuations, plain/typed literals and bare numbers.
pub fn parse_turtle(text: &str) -> Result<Graph, RdfError> {
    let mut lex = Lexer::new(text, 1);
    let mut prefixes: BTreeMap<String, String> = BTreeMap::new();
    let mut g = Graph::new();
    loop {
        let tok = lex.next_token()?;
        match tok {
            Token::Eof => break,
            Token::PrefixDirective => {
                let Token::Prefixed(prefix, local) = lex.next_token()? else {
                    return Err(lex.error("expected 'prefix:' after @prefix"));
                };
                if !local.is_empty() {
                    return Err(lex.error("expected 'prefix:' after @prefix"));
                }
                let Token::IriRef(iri) = lex.next_token()? else {
                    return Err(lex.error("expected <iri> in @prefix"));
                };
                if lex.next_token()? != Token::Dot {
                    return Err(lex.error("expected '.' after @prefix"));
                }
                if let Some(existing) = prefixes.get(&prefix) {
                    if existing != &iri {
                        return Err(RdfError::DuplicatePrefix {
                            prefix,
                            first: existing.clone(),
                            second: iri,
                        });
                    }
                }
                prefixes.insert(prefix, iri);
            }
            subject_tok => {
                let subject = resolve_term(subject_tok, Some(&prefixes)).map_err(|r| lex.error(r))?;
                parse_predicate_objects(&mut lex, &prefixes, subject, &mut g)?;
            }
        }
    }
    for (p, iri) in prefixes {
        g.set_prefix(p, iri);
    }
    Ok(g)
}

fn parse_predicate_objects(
    lex: &mut Lexer<'_>,
    prefixes: &BTreeMap<String, String>,
    subject: Term,
    g: &mut Graph,
) -> Result<(), RdfError> {
    loop {
        let ptok = lex.next_token()?;
        if ptok == Token::Dot {
            // trailing ';' before '.'
            return Ok(());
        }
        let predicate = resolve_term(ptok, Some(prefixes)).map_err(|r| lex.error(r))?;
        check_positions(&subject, &predicate).map_err(|r| lex.error(r))?;
        loop {
            let otok = lex.next_token()?;
            if otok == Token::A {
                return Err(lex.error("'a' is only allowed as a predicate"));
            }
            let object = resolve_term(otok, Some(prefixes)).map_err(|r| lex.error(r))?;
            g.insert(Triple::new(subject.clone(), predicate.clone(), object));
            match lex.next_token()? {
                Token::Comma => continue,
                Token::Semicolon => break,
                Token::Dot => return Ok(()),
                other => return Err(lex.error(format!("expected ',', ';' or '.', found {other:?}"))),
            }
        }
    }
}

fn safe_local(local: &str) -> bool {
    let mut chars = local.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

fn write_term(out: &mut String, term: &Term, prefixes: &BTreeMap<String, String>) {
    if let Term::Iri(iri) = term {
        let best = prefixes
            .iter()
            .filter(|(_, base)| iri.starts_with(base.as_str()) && safe_local(&iri[base.len()..]))
            .max_by_key(|(_, base)| base.len());
        if let Some((p, base)) = best {
            let _ = write!(out, "{p}:{}", &iri[base.len()..]);
            return;
        }
    }
    let _ = write!(out, "{term}");
}

/// Writes `g` in the Turtle subset, grouping triples by subject.
pub fn serialize_turtle(g: &Graph) -> String {
    let prefixes = g.prefixes();
    let mut out = String::new();
    for (p, iri) in prefixes {
        let _ = writeln!(out, "@prefix {p}: <{iri}> .");
    }
    if !prefixes.is_empty() && !g.is_empty() {
        out.push('\n');
    }
    let mut current_subject: Option<&Term> = None;
    let mut current_predicate: Option<&Term> = None;
    for t in g.iter() {
        if current_subject == Some(&t.subject) {
            if current_predicate == Some(&t.predicate) {
                out.push_str(", ");
            } else {
                out.push_str(" ;\n    ");
                write_predicate(&mut out, &t.predicate, prefixes);
                out.push(' ');
            }
        } else {
            if current_subject.is_some() {
                out.push_str(" .\n");
            }
            write_term(&mut out, &t.subject, prefixes);
            out.push(' ');
            write_predicate(&mut out, &t.predicate, prefixes);
            out.push(' ');
        }
        write_term(&mut out, &t.object, prefixes);
        current_subject = Some(&t.subject);
        current_predicate = Some(&t.predicate);
    }
    if current_subject.is_some() {
        out.push_str(" .\n");
    }
    out
}

fn write_predicate(out: &mut String, predicate: &Term, prefixes: &BTreeMap<String, String>) {
    if predicate.as_iri() == Some(RDF_TYPE) {
        out.push('a');
    } else {
        write_term(out, predicate, prefixes);
    }
}
