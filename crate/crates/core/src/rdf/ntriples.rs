use super::graph::Graph;
use super::lexer::{Lexer, Token};
use super::term::Triple;
use super::{check_positions, resolve_term, RdfError};

/// One triple per line in canonical sorted order.
pub fn serialize_ntriples(g: &Graph) -> String {
    let mut out = String::new();
    for t in g.iter() {
        out.push_str(&t.to_string());
        out.push('\n');
    }
    out
}

pub fn parse_ntriples(text: &str) -> Result<Graph, RdfError> {
    let mut g = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut lex = Lexer::new(line, idx + 1);
        let mut terms = Vec::with_capacity(3);
        for _ in 0..3 {
            let tok = lex.next_token()?;
            terms.push(resolve_term(tok, None).map_err(|reason| lex.error(reason))?);
        }
        if lex.next_token()? != Token::Dot {
            return Err(lex.error("missing terminating '.'"));
        }
        if lex.next_token()? != Token::Eof {
            return Err(lex.error("trailing content after '.'"));
        }
        let object = terms.pop().expect("three terms");
        let predicate = terms.pop().expect("three terms");
        let subject = terms.pop().expect("three terms");
        check_positions(&subject, &predicate).map_err(|reason| lex.error(reason))?;
        g.insert(Triple::new(subject, predicate, object));
    }
    Ok(g)
}
