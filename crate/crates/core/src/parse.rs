//! Recursive-descent parser for the term grammar
//!
//! ```text
//! term   := factor | term '*' factor
//! factor := '0' | 'p' | 'x' DIGITS | '(' term ')'
//! ```
//!
//! `*` is left-associative and whitespace between tokens is ignored.

use crate::term::Term;
use thiserror::Error;

/// Parenthesis nesting beyond this depth is rejected; the parser recurses
/// per nesting level.
const MAX_NESTING: usize = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: {message}")]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl ParseError {
    fn new(position: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            position,
            message: message.into(),
        }
    }
}

/// Parses a term; rejects empty input and trailing garbage.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        depth: 0,
    };
    p.skip_ws();
    if p.at_end() {
        return Err(ParseError::new(p.pos, "empty input"));
    }
    let term = p.term()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(ParseError::new(
            p.pos,
            format!("unexpected character {:?}", p.peek_char()),
        ));
    }
    Ok(term)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    depth: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.bytes.len()
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn peek_char(&self) -> char {
        // Non-ASCII input is reported by its leading byte.
        self.peek().map(char::from).unwrap_or('\0')
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.factor()?;
        loop {
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
                self.skip_ws();
                let rhs = self.factor()?;
                acc = Term::star(acc, rhs);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(b'p') => {
                self.pos += 1;
                Ok(Term::P)
            }
            Some(b'x') => {
                self.pos += 1;
                self.variable()
            }
            Some(b'(') => {
                let open = self.pos;
                self.pos += 1;
                self.depth += 1;
                if self.depth > MAX_NESTING {
                    return Err(ParseError::new(open, "expression nests too deeply"));
                }
                self.skip_ws();
                let inner = self.term()?;
                self.skip_ws();
                self.depth -= 1;
                if self.peek() == Some(b')') {
                    self.pos += 1;
                    Ok(inner)
                } else {
                    Err(ParseError::new(
                        open,
                        "unclosed '(': expected ')' before end of input",
                    ))
                }
            }
            Some(_) => Err(ParseError::new(
                self.pos,
                format!(
                    "expected '0', 'p', a variable, or '(', found {:?}",
                    self.peek_char()
                ),
            )),
            None => Err(ParseError::new(self.pos, "unexpected end of input")),
        }
    }

    /// Parses the DIGITS of a variable; the leading 'x' is already consumed.
    fn variable(&mut self) -> Result<Term, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(ParseError::new(
                start,
                "expected digits after 'x' in a variable",
            ));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        match digits.parse::<u32>() {
            Ok(0) => Err(ParseError::new(start, "variable indices start at 1")),
            Ok(i) => Ok(Term::Var(i)),
            Err(_) => Err(ParseError::new(
                start,
                format!("variable index {digits} is too large"),
            )),
        }
    }
}
