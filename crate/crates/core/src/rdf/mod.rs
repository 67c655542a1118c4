//! RDF term model, in-memory graph store and the N-Triples / Turtle-subset
//! readers and writers.

mod graph;
mod lexer;
mod ntriples;
mod term;
mod turtle;

use std::collections::BTreeMap;

use thiserror::Error;

pub use graph::{graph_stats, Graph, GraphStats};
pub use ntriples::{parse_ntriples, serialize_ntriples};
pub use term::{
    local_name, namespace, valid_blank_label, valid_iri, Datatype, Literal, Term, Triple, XSD_DECIMAL,
    XSD_INTEGER, XSD_STRING,
};
pub use turtle::{parse_turtle, serialize_turtle};

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDFS_CLASS: &str = "http://www.w3.org/2000/01/rdf-schema#Class";
pub const RDFS_DOMAIN: &str = "http://www.w3.org/2000/01/rdf-schema#domain";
pub const RDFS_RANGE: &str = "http://www.w3.org/2000/01/rdf-schema#range";
pub const RDFS_LABEL: &str = "http://www.w3.org/2000/01/rdf-schema#label";
pub const RDFS_SUBCLASS_OF: &str = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
pub const OWL_CLASS: &str = "http://www.w3.org/2002/07/owl#Class";
pub const OWL_OBJECT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#ObjectProperty";
pub const OWL_DATATYPE_PROPERTY: &str = "http://www.w3.org/2002/07/owl#DatatypeProperty";

#[derive(Debug, Error, PartialEq)]
pub enum RdfError {
    #[error("syntax error at {line}:{column}: {reason}")]
    Syntax { line: usize, column: usize, reason: String },
    #[error("prefix '{prefix}:' bound to both <{first}> and <{second}>")]
    DuplicatePrefix { prefix: String, first: String, second: String },
}

fn resolve_iri(prefixes: Option<&BTreeMap<String, String>>, prefix: &str, local: &str) -> Result<String, String> {
    let Some(map) = prefixes else {
        return Err(format!("prefixed name '{prefix}:{local}' not allowed here"));
    };
    map.get(prefix)
        .map(|base| format!("{base}{local}"))
        .ok_or_else(|| format!("undeclared prefix '{prefix}:'"))
}

/// Turns a lexer token into a term. `prefixes` is `None` for N-Triples.
pub(crate) fn resolve_term(
    token: lexer::Token,
    prefixes: Option<&BTreeMap<String, String>>,
) -> Result<Term, String> {
    use lexer::{DatatypeRef, Token};
    match token {
        Token::IriRef(iri) => {
            if valid_iri(&iri) {
                Ok(Term::Iri(iri))
            } else {
                Err(format!("invalid IRI <{iri}>"))
            }
        }
        Token::Prefixed(p, l) => resolve_iri(prefixes, &p, &l).map(Term::Iri),
        Token::Blank(label) => Ok(Term::Blank(label)),
        Token::Literal(lexical, dt) => {
            let dt_iri = match dt {
                None => return Ok(Term::Literal(Literal::string(lexical))),
                Some(DatatypeRef::Iri(iri)) => iri,
                Some(DatatypeRef::Prefixed(p, l)) => resolve_iri(prefixes, &p, &l)?,
            };
            let datatype =
                Datatype::from_iri(&dt_iri).ok_or_else(|| format!("unsupported datatype <{dt_iri}>"))?;
            Literal::new(lexical.clone(), datatype)
                .map(Term::Literal)
                .ok_or_else(|| format!("'{lexical}' is not a valid {datatype:?} literal"))
        }
        Token::Number(n) if prefixes.is_some() => {
            let dt = if n.contains('.') { Datatype::Decimal } else { Datatype::Integer };
            Literal::new(n.clone(), dt)
                .map(Term::Literal)
                .ok_or_else(|| format!("malformed number '{n}'"))
        }
        Token::A if prefixes.is_some() => Ok(Term::iri(RDF_TYPE)),
        other => Err(format!("expected a term, found {other:?}")),
    }
}

pub(crate) fn check_positions(subject: &Term, predicate: &Term) -> Result<(), String> {
    if matches!(subject, Term::Literal(_)) {
        return Err("literal in subject position".into());
    }
    if !matches!(predicate, Term::Iri(_)) {
        return Err("predicate must be an IRI".into());
    }
    Ok(())
}
