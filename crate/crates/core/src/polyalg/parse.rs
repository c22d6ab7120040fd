//! Recursive-descent parser for the polynomial text grammar.
//!
//! ```text
//! expr   := unary (('+' | '-') unary)*
//! unary  := ('+' | '-') unary | term
//! term   := power ('*' power)*          (inside unary: a*b*c)
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | 'I' | IDENT | '(' expr ')'
//! ```
//!
//! Implicit multiplication (`2x`) is rejected.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{Coeff, PolyError, Polynomial, Ring};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = src[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(src[start..i].to_string())));
                continue;
            }
            other => {
                return Err(PolyError::Parse { pos: start, msg: format!("unexpected character `{other}`") })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse { pos: self.pos(), msg: msg.into() })
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.at).map(|(_, t)| t.clone());
        self.at += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.unary()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.unary()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, PolyError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(-self.unary()?)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.unary()
            }
            _ => self.term(),
        }
    }

    fn term(&mut self) -> Result<Polynomial, PolyError> {
        let mut acc = self.power()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            let rhs = match self.peek() {
                Some(Tok::Minus) | Some(Tok::Plus) => self.unary()?,
                _ => self.power()?,
            };
            acc = acc.checked_mul(&rhs)?;
        }
        match self.peek() {
            Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                self.err("implicit multiplication is not allowed; use `*`")
            }
            _ => Ok(acc),
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let k: u32 = n
                        .try_into()
                        .ok()
                        .filter(|k: &u32| *k < 1 << 31)
                        .ok_or(PolyError::Parse { pos, msg: "exponent too large".into() })?;
                    return base.checked_pow(k);
                }
                _ => return Err(PolyError::Parse { pos, msg: "expected nonnegative integer exponent".into() }),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, PolyError> {
        let pos = self.pos();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let mut value = BigRational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dpos = self.pos();
                    match self.bump() {
                        Some(Tok::Int(d)) if !d.is_zero() => {
                            value /= BigRational::from_integer(d);
                        }
                        Some(Tok::Int(_)) => {
                            return Err(PolyError::Parse { pos: dpos, msg: "zero denominator".into() })
                        }
                        _ => {
                            return Err(PolyError::Parse {
                                pos: dpos,
                                msg: "`/` only forms integer fractions a/b".into(),
                            })
                        }
                    }
                }
                Ok(Polynomial::constant(self.ring, Coeff::from_rational(value)))
            }
            Some(Tok::Ident(name)) if name == "I" => Ok(Polynomial::constant(self.ring, Coeff::i())),
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err(PolyError::UnknownVariable { name, pos: Some(pos) }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    _ => Err(PolyError::Parse { pos: self.toks.get(self.at - 1).map(|t| t.0).unwrap_or(self.end), msg: "expected `)`".into() }),
                }
            }
            Some(_) => Err(PolyError::Parse { pos, msg: "expected a number, variable, `I` or `(`".into() }),
            None => Err(PolyError::Parse { pos, msg: "unexpected end of input".into() }),
        }
    }
}

/// Parses `src` as a polynomial over `ring`.
pub fn parse_poly(src: &str, ring: &Ring) -> Result<Polynomial, PolyError> {
    let toks = lex(src)?;
    let mut p = Parser { toks, at: 0, end: src.len(), ring };
    let out = p.expr()?;
    if p.at < p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(out)
}

/// Parses a constant expression (no variables) into a coefficient.
pub fn parse_coeff(src: &str) -> Result<Coeff, PolyError> {
    Ok(parse_poly(src, &Ring::of(&[]))?.constant_term())
}
