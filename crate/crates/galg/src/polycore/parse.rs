//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (explicit `*`, integer exponents, rationals as `a/b`):
//!
//! ```text
//! expr   := ['-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := base ['^' uint]
//! base   := '(' expr ')' | variable | integer ['/' uint]
//! ```
//!
//! Errors carry line and column of the offending token.

use super::field::Field;
use super::poly::{Polynomial, RingRc};
use crate::{EngineError, Result};
use num_bigint::BigInt;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str, line: u32) -> Self {
        Lexer { src, chars: src.char_indices().peekable(), line, col: 1 }
    }

    fn err(&self, msg: &str) -> EngineError {
        EngineError::Input(format!("line {}, column {}: {}", self.line, self.col, msg))
    }

    fn bump(&mut self) -> Option<(usize, char)> {
        let c = self.chars.next();
        if c.is_some() {
            self.col += 1;
        }
        c
    }

    fn next_tok(&mut self) -> Result<(Tok, u32)> {
        while let Some(&(_, c)) = self.chars.peek() {
            if c == ' ' || c == '\t' {
                self.bump();
            } else {
                break;
            }
        }
        let col = self.col;
        let Some(&(start, c)) = self.chars.peek() else {
            return Ok((Tok::End, col));
        };
        let tok = match c {
            '+' => {
                self.bump();
                Tok::Plus
            }
            '-' => {
                self.bump();
                Tok::Minus
            }
            '*' => {
                self.bump();
                Tok::Star
            }
            '^' => {
                self.bump();
                Tok::Caret
            }
            '/' => {
                self.bump();
                Tok::Slash
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            _ if c.is_ascii_digit() => {
                let mut end = start;
                while let Some(&(i, d)) = self.chars.peek() {
                    if d.is_ascii_digit() {
                        end = i + d.len_utf8();
                        self.bump();
                    } else {
                        break;
                    }
                }
                let s = &self.src[start..end];
                Tok::Int(s.parse::<BigInt>().map_err(|_| self.err("bad integer"))?)
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let mut end = start;
                while let Some(&(i, d)) = self.chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        end = i + d.len_utf8();
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(self.src[start..end].to_string())
            }
            other => return Err(self.err(&format!("unexpected character {other:?}"))),
        };
        Ok((tok, col))
    }
}

pub struct Parser<'a, K: Field> {
    ring: &'a RingRc<K>,
    toks: Vec<(Tok, u32)>,
    pos: usize,
    line: u32,
}

impl<'a, K: Field> Parser<'a, K> {
    fn err_at(&self, col: u32, msg: &str) -> EngineError {
        EngineError::Input(format!("line {}, column {}: {}", self.line, col, msg))
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> u32 {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Polynomial<K>> {
        let mut neg = false;
        if *self.peek() == Tok::Minus {
            self.bump();
            neg = true;
        }
        let mut acc = self.term()?;
        if neg {
            acc = acc.neg();
        }
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.add(&t)?;
                }
                Tok::Minus => {
                    self.bump();
                    let t = self.term()?;
                    acc = acc.sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial<K>> {
        let mut acc = self.factor()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let f = self.factor()?;
            acc = acc.mul(&f)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial<K>> {
        let base = self.base()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            let col = self.col();
            match self.bump() {
                Tok::Int(n) => {
                    let e: u32 = n
                        .try_into()
                        .map_err(|_| self.err_at(col, "exponent out of range"))?;
                    if e > 2000 {
                        return Err(self.err_at(col, "exponent out of range"));
                    }
                    base.pow(e)
                }
                _ => Err(self.err_at(col, "expected integer exponent after '^'")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Polynomial<K>> {
        let col = self.col();
        match self.bump() {
            Tok::LParen => {
                let e = self.expr()?;
                let col = self.col();
                match self.bump() {
                    Tok::RParen => Ok(e),
                    _ => Err(self.err_at(col, "expected ')'")),
                }
            }
            Tok::Ident(name) => match self.ring.var_index(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err(self.err_at(col, &format!("unknown variable {name}"))),
            },
            Tok::Int(n) => {
                let num = self.ring.field.from_bigint(&n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    let col = self.col();
                    match self.bump() {
                        Tok::Int(d) => {
                            let den = self.ring.field.from_bigint(&d);
                            if self.ring.field.is_zero(&den) {
                                return Err(self.err_at(col, "zero denominator"));
                            }
                            Ok(Polynomial::constant(
                                self.ring,
                                self.ring.field.div(&num, &den),
                            ))
                        }
                        _ => Err(self.err_at(col, "expected integer denominator")),
                    }
                } else {
                    Ok(Polynomial::constant(self.ring, num))
                }
            }
            _ => Err(self.err_at(col, "expected a variable, number, or '('")),
        }
    }
}

/// Parse one polynomial expression. `line` seeds error locations when the
/// expression came from a larger file.
pub fn poly_from_str_at<K: Field>(ring: &RingRc<K>, src: &str, line: u32) -> Result<Polynomial<K>> {
    let mut lx = Lexer::new(src, line);
    let mut toks = Vec::new();
    loop {
        let (t, col) = lx.next_tok()?;
        let end = t == Tok::End;
        toks.push((t, col));
        if end {
            break;
        }
    }
    let mut p = Parser { ring, toks, pos: 0, line };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.err_at(p.col(), "trailing input after expression"));
    }
    Ok(poly)
}

pub fn poly_from_str<K: Field>(ring: &RingRc<K>, src: &str) -> Result<Polynomial<K>> {
    poly_from_str_at(ring, src, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polycore::field::{PrimeField, Rationals};
    use crate::polycore::poly::PolyRing;

    #[test]
    fn parses_and_round_trips() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x", "y", "z"]).unwrap();
        for src in ["x*y - z^2", "x^3 + 3*x*y^2 - 7", "-(x - y)*(x + y)", "2*x^2*y"] {
            let p = poly_from_str(&r, src).unwrap();
            let back = poly_from_str(&r, &p.to_string()).unwrap();
            assert_eq!(p, back, "{src}");
        }
        let p = poly_from_str(&r, "x*y - z^2").unwrap();
        assert_eq!(p.num_terms(), 2);
    }

    #[test]
    fn rational_coefficients() {
        let r = PolyRing::standard(Rationals, &["x"]).unwrap();
        let p = poly_from_str(&r, "1/2*x + 1/3").unwrap();
        assert_eq!(p.to_string(), "1/2*x + 1/3");
    }

    #[test]
    fn errors_carry_position() {
        let r = PolyRing::standard(PrimeField::new(101).unwrap(), &["x"]).unwrap();
        let e = poly_from_str(&r, "x + w").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("column 5"), "{msg}");
        assert!(poly_from_str(&r, "x +").is_err());
        assert!(poly_from_str(&r, "x ^ y").is_err());
        assert!(poly_from_str(&r, "(x").is_err());
    }
}
