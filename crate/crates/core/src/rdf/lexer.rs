//! Tokenizer shared by the N-Triples and Turtle-subset parsers.

use super::RdfError;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum DatatypeRef {
    Iri(String),
    Prefixed(String, String),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Token {
    IriRef(String),
    Prefixed(String, String),
    Blank(String),
    Literal(String, Option<DatatypeRef>),
    Number(String),
    A,
    PrefixDirective,
    Dot,
    Semicolon,
    Comma,
    Eof,
}

pub(crate) struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    column: usize,
    token_line: usize,
    token_column: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '-' || c == '.'
}

impl<'a> Lexer<'a> {
    pub fn new(text: &'a str, first_line: usize) -> Self {
        Lexer {
            chars: text.char_indices().peekable(),
            line: first_line,
            column: 1,
            token_line: first_line,
            token_column: 1,
        }
    }

    pub fn error(&self, reason: impl Into<String>) -> RdfError {
        RdfError::Syntax {
            line: self.token_line,
            column: self.token_column,
            reason: reason.into(),
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.chars.peek().map(|&(_, c)| c)
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '#' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else {
                break;
            }
        }
    }

    pub fn next_token(&mut self) -> Result<Token, RdfError> {
        self.skip_trivia();
        self.token_line = self.line;
        self.token_column = self.column;
        let Some(c) = self.peek() else {
            return Ok(Token::Eof);
        };
        match c {
            '<' => {
                self.bump();
                let iri = self.read_iri()?;
                Ok(Token::IriRef(iri))
            }
            '"' => {
                self.bump();
                let lexical = self.read_string()?;
                let datatype = if self.peek() == Some('^') {
                    self.bump();
                    if self.bump() != Some('^') {
                        return Err(self.error("expected '^^' before datatype"));
                    }
                    match self.peek() {
                        Some('<') => {
                            self.bump();
                            Some(DatatypeRef::Iri(self.read_iri()?))
                        }
                        _ => {
                            let (p, l) = self.read_prefixed()?;
                            Some(DatatypeRef::Prefixed(p, l))
                        }
                    }
                } else if self.peek() == Some('@') {
                    return Err(self.error("language-tagged literals are not supported"));
                } else {
                    None
                };
                Ok(Token::Literal(lexical, datatype))
            }
            '_' => {
                self.bump();
                if self.bump() != Some(':') {
                    return Err(self.error("expected ':' after '_' in blank node"));
                }
                let mut label = String::new();
                while let Some(c) = self.peek() {
                    if c.is_ascii_alphanumeric() {
                        label.push(c);
                        self.bump();
                    } else {
                        break;
                    }
                }
                if label.is_empty() {
                    return Err(self.error("empty blank node label"));
                }
                Ok(Token::Blank(label))
            }
            '.' => {
                self.bump();
                Ok(Token::Dot)
            }
            ';' => {
                self.bump();
                Ok(Token::Semicolon)
            }
            ',' => {
                self.bump();
                Ok(Token::Comma)
            }
            '@' => {
                self.bump();
                let word = self.read_word();
                if word == "prefix" {
                    Ok(Token::PrefixDirective)
                } else {
                    Err(self.error(format!("unsupported directive '@{word}'")))
                }
            }
            '[' | ']' | '(' | ')' => Err(self.error(format!("'{c}' is outside the supported Turtle subset"))),
            c if c.is_ascii_digit() || c == '+' || c == '-' => self.read_number(),
            'a' if {
                let mut look = self.chars.clone();
                look.next();
                look.peek().is_none_or(|&(_, n)| !(is_name_char(n) || n == ':'))
            } =>
            {
                self.bump();
                Ok(Token::A)
            }
            _ => {
                let (prefix, local) = self.read_prefixed()?;
                Ok(Token::Prefixed(prefix, local))
            }
        }
    }

    fn read_word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek() {
            if c.is_alphanumeric() {
                word.push(c);
                self.bump();
            } else {
                break;
            }
        }
        word
    }

    fn read_iri(&mut self) -> Result<String, RdfError> {
        let mut iri = String::new();
        loop {
            match self.bump() {
                Some('>') => break,
                Some(c) if c.is_whitespace() || c == '<' || c == '"' => {
                    return Err(self.error("invalid character in IRI"))
                }
                Some(c) => iri.push(c),
                None => return Err(self.error("unterminated IRI")),
            }
        }
        if iri.is_empty() {
            return Err(self.error("empty IRI"));
        }
        Ok(iri)
    }

    fn read_string(&mut self) -> Result<String, RdfError> {
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(s),
                Some('\\') => match self.bump() {
                    Some('"') => s.push('"'),
                    Some('\\') => s.push('\\'),
                    Some('n') => s.push('\n'),
                    Some('r') => s.push('\r'),
                    Some('t') => s.push('\t'),
                    Some('u') => {
                        let mut hex = String::new();
                        for _ in 0..4 {
                            hex.extend(self.bump());
                        }
                        let ch = u32::from_str_radix(&hex, 16)
                            .ok()
                            .and_then(char::from_u32)
                            .ok_or_else(|| self.error("bad \\u escape"))?;
                        s.push(ch);
                    }
                    _ => return Err(self.error("unknown escape sequence")),
                },
                Some('\n') | None => return Err(self.error("unterminated string literal")),
                Some(c) => s.push(c),
            }
        }
    }

    fn read_number(&mut self) -> Result<Token, RdfError> {
        let mut s = String::new();
        if let Some(c @ ('+' | '-')) = self.peek() {
            s.push(c);
            self.bump();
        }
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            s.push(c);
            self.bump();
        }
        // a '.' only belongs to the number when digits follow it
        if self.peek() == Some('.') {
            let mut look = self.chars.clone();
            look.next();
            if look.peek().is_some_and(|&(_, c)| c.is_ascii_digit()) {
                s.push('.');
                self.bump();
                while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                    s.push(c);
                    self.bump();
                }
            }
        }
        if !s.bytes().any(|b| b.is_ascii_digit()) {
            return Err(self.error("malformed number"));
        }
        Ok(Token::Number(s))
    }

    fn read_prefixed(&mut self) -> Result<(String, String), RdfError> {
        let mut prefix = String::new();
        while let Some(c) = self.peek() {
            if c == ':' {
                break;
            }
            if is_name_char(c) {
                prefix.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if self.peek() != Some(':') {
            if prefix == "a" {
                return Err(self.error("'a' is only allowed as a predicate"));
            }
            let next = self.peek().map(String::from).unwrap_or_default();
            return Err(self.error(format!("unexpected token '{prefix}{next}'")));
        }
        self.bump();
        let mut local = String::new();
        while let Some(c) = self.peek() {
            if c == '.' {
                // a dot inside a local name must be followed by another name char
                let mut look = self.chars.clone();
                look.next();
                if !look.peek().is_some_and(|&(_, n)| is_name_char(n) && n != '.') {
                    break;
                }
            } else if !is_name_char(c) {
                break;
            }
            local.push(c);
            self.bump();
        }
        Ok((prefix, local))
    }
}
