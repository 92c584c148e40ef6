//! Expression parser for series values: integer literals, the scalar `p`,
//! ring variables, parentheses, `+ - * ^` with the usual precedence
//! (`^` binds tightest, then unary minus, then `*`, then `+`/`-`).
//!
//! Every error carries the line of the enclosing document and the 1-based
//! column inside that line.  The printed form of a series parses back to
//! the identical series.

use std::sync::Arc;

use crate::arith::{RingSpec, TruncSeries};

use super::ReaderError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(u128),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: usize, col0: usize) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line,
            col0,
        }
    }

    fn col(&self, at: usize) -> usize {
        self.col0 + at
    }

    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ReaderError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let c = self.src[self.pos];
            let at = self.pos;
            match c {
                b' ' | b'\t' => {
                    self.pos += 1;
                }
                b'+' => {
                    out.push((Tok::Plus, self.col(at)));
                    self.pos += 1;
                }
                b'-' => {
                    out.push((Tok::Minus, self.col(at)));
                    self.pos += 1;
                }
                b'*' => {
                    out.push((Tok::Star, self.col(at)));
                    self.pos += 1;
                }
                b'^' => {
                    out.push((Tok::Caret, self.col(at)));
                    self.pos += 1;
                }
                b'(' => {
                    out.push((Tok::LParen, self.col(at)));
                    self.pos += 1;
                }
                b')' => {
                    out.push((Tok::RParen, self.col(at)));
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    let start = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    let v: u128 = text.parse().map_err(|_| ReaderError::Syntax {
                        line: self.line,
                        col: self.col(start),
                        message: format!("integer literal '{text}' is too large"),
                    })?;
                    out.push((Tok::Int(v), self.col(start)));
                }
                b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                    let start = self.pos;
                    while self.pos < self.src.len()
                        && (self.src[self.pos].is_ascii_alphanumeric()
                            || self.src[self.pos] == b'_')
                    {
                        self.pos += 1;
                    }
                    let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    out.push((Tok::Ident(text.to_string()), self.col(start)));
                }
                other => {
                    return Err(ReaderError::Syntax {
                        line: self.line,
                        col: self.col(at),
                        message: format!("unexpected character '{}'", other as char),
                    });
                }
            }
        }
        Ok(out)
    }
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    end_col: usize,
    ring: &'a Arc<RingSpec>,
}

/// Parse one expression occupying `src`, reporting positions as
/// `line` : `col0 + offset`.  The entire input must be consumed.
pub(super) fn parse_series(
    src: &str,
    line: usize,
    col0: usize,
    ring: &Arc<RingSpec>,
) -> Result<TruncSeries, ReaderError> {
    let toks = Lexer::new(src, line, col0).tokens()?;
    if toks.is_empty() {
        return Err(ReaderError::Syntax {
            line,
            col: col0,
            message: "empty expression".into(),
        });
    }
    let end_col = col0 + src.len();
    let mut p = Parser {
        toks,
        pos: 0,
        line,
        end_col,
        ring,
    };
    let value = p.expr()?;
    if let Some((tok, col)) = p.peek() {
        return Err(ReaderError::Syntax {
            line,
            col,
            message: format!("unexpected trailing token {}", describe(&tok)),
        });
    }
    if value.is_saturated() {
        return Err(ReaderError::WindowOverflow { line, col: col0 });
    }
    Ok(value)
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Int(v) => format!("'{v}'"),
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<(Tok, usize)> {
        self.toks.get(self.pos).cloned()
    }

    fn advance(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, col: usize, message: impl Into<String>) -> ReaderError {
        ReaderError::Syntax {
            line: self.line,
            col,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<TruncSeries, ReaderError> {
        let mut acc = self.term()?;
        while let Some((tok, _)) = self.peek() {
            match tok {
                Tok::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    acc = acc.try_add(&rhs)?;
                }
                Tok::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    acc = acc.try_sub(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<TruncSeries, ReaderError> {
        let mut acc = self.factor()?;
        while let Some((Tok::Star, _)) = self.peek() {
            self.advance();
            let rhs = self.factor()?;
            acc = acc.try_mul(&rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TruncSeries, ReaderError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.advance();
            let inner = self.factor()?;
            return Ok(inner.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<TruncSeries, ReaderError> {
        let base = self.atom()?;
        if let Some((Tok::Caret, caret_col)) = self.peek() {
            self.advance();
            let (tok, col) = self
                .advance()
                .ok_or_else(|| self.syntax(self.end_col, "expected an integer exponent"))?;
            let Tok::Int(exp) = tok else {
                return Err(self.syntax(
                    col,
                    format!("expected an integer exponent, found {}", describe(&tok)),
                ));
            };
            let cap = self.ring.degree_cap();
            let scalar_base = base.positive_part().is_zero();
            if !scalar_base && exp > u128::from(cap) {
                return Err(ReaderError::ExponentTooLarge {
                    line: self.line,
                    col,
                    exponent: exp,
                    cap,
                });
            }
            if exp > u128::from(u32::MAX) {
                return Err(ReaderError::ExponentTooLarge {
                    line: self.line,
                    col,
                    exponent: exp,
                    cap,
                });
            }
            let _ = caret_col;
            return Ok(base.pow(exp as u32));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<TruncSeries, ReaderError> {
        let Some((tok, col)) = self.advance() else {
            return Err(self.syntax(self.end_col, "expected a value"));
        };
        match tok {
            Tok::Int(v) => {
                if v > i128::MAX as u128 {
                    return Err(self.syntax(col, format!("integer literal '{v}' is too large")));
                }
                Ok(TruncSeries::scalar(self.ring, v as i128))
            }
            Tok::Ident(name) if name == "p" => Ok(TruncSeries::p(self.ring)),
            Tok::Ident(name) => match self.ring.vars().iter().position(|v| *v == name) {
                Some(i) => Ok(TruncSeries::var(self.ring, i)),
                None => Err(ReaderError::UnknownVariable {
                    line: self.line,
                    col,
                    name,
                }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.advance() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    Some((other, c)) => {
                        Err(self.syntax(c, format!("expected ')', found {}", describe(&other))))
                    }
                    None => Err(self.syntax(self.end_col, "expected ')'")),
                }
            }
            other => Err(self.syntax(col, format!("expected a value, found {}", describe(&other)))),
        }
    }
}
