//! Parser for the expression grammar produced by the `Display` impls of
//! [`ScalarPoly`] and [`OperatorExpr`].
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := power (['*'] power)*          juxtaposition multiplies
//! power  := atom ['^' ['-'] int]
//! atom   := int ['/' int] | 'i' | symbol | generator | '(' expr ')'
//! ```
//!
//! Products keep left-to-right order, so words like `Ah+ Ah-` parse as
//! written. Any well-formed input is accepted, not only canonical text.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

use crate::scalars::{GaussRat, ScalarPoly, Symbol};
use crate::weyl::{Generator, Mode, OperatorExpr, WeylError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {0:?} at byte {1}")]
    BadChar(char, usize),
    #[error("unknown identifier `{0}`")]
    UnknownIdent(String),
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected token {0} at position {1}")]
    Unexpected(String, usize),
    #[error("generator `{0}` does not belong to {1} mode")]
    WrongMode(String, Mode),
    #[error("generators are not allowed in a scalar")]
    GeneratorInScalar,
    #[error("invalid exponent on {0}")]
    BadExponent(String),
    #[error("division by zero")]
    ZeroDenominator,
    #[error(transparent)]
    Algebra(#[from] WeylError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Imag,
    Sym(Symbol),
    Gen(Generator, Mode, String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => n.to_string(),
            Tok::Imag => "i".into(),
            Tok::Sym(s) => s.name().into(),
            Tok::Gen(_, _, n) => n.clone(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Caret => "^".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<Tok>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let c = bytes[k] as char;
        match c {
            ' ' | '\t' | '\n' => k += 1,
            '+' => (out.push(Tok::Plus), k += 1).1,
            '-' => (out.push(Tok::Minus), k += 1).1,
            '*' => (out.push(Tok::Star), k += 1).1,
            '^' => (out.push(Tok::Caret), k += 1).1,
            '(' => (out.push(Tok::LParen), k += 1).1,
            ')' => (out.push(Tok::RParen), k += 1).1,
            '0'..='9' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                let num: BigInt = src[start..k].parse().expect("digits");
                let mut den = BigInt::from(1);
                // A '/' directly between digits is part of the literal.
                if k + 1 < bytes.len() && bytes[k] == b'/' && bytes[k + 1].is_ascii_digit() {
                    k += 1;
                    let ds = k;
                    while k < bytes.len() && bytes[k].is_ascii_digit() {
                        k += 1;
                    }
                    den = src[ds..k].parse().expect("digits");
                    if den == BigInt::from(0) {
                        return Err(ParseError::ZeroDenominator);
                    }
                }
                out.push(Tok::Num(BigRational::new(num, den)));
            }
            c if c.is_ascii_alphabetic() => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_alphanumeric() {
                    k += 1;
                }
                let mut ident = src[start..k].to_string();
                if (ident == "A" || ident == "Ah") && k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                    ident.push(bytes[k] as char);
                    k += 1;
                }
                if ident == "i" {
                    out.push(Tok::Imag);
                } else if let Some(sym) = Symbol::from_name(&ident) {
                    out.push(Tok::Sym(sym));
                } else if let Some((g, m)) = Generator::from_name(&ident) {
                    out.push(Tok::Gen(g, m, ident));
                } else {
                    return Err(ParseError::UnknownIdent(ident));
                }
            }
            other => return Err(ParseError::BadChar(other, k)),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    mode: Mode,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Result<Tok, ParseError> {
        let t = self.toks.get(self.pos).cloned().ok_or(ParseError::Eof)?;
        self.pos += 1;
        Ok(t)
    }

    fn expr(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                negate = true;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_add(&t)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc.try_sub(&t)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(
            self.peek(),
            Some(Tok::Num(_) | Tok::Imag | Tok::Sym(_) | Tok::Gen(..) | Tok::LParen)
        )
    }

    fn term(&mut self) -> Result<OperatorExpr, ParseError> {
        let mut acc = self.power()?;
        loop {
            if matches!(self.peek(), Some(Tok::Star)) {
                self.pos += 1;
            } else if !self.starts_atom() {
                return Ok(acc);
            }
            let rhs = self.power()?;
            acc = acc.try_mul(&rhs)?;
        }
    }

    fn exponent(&mut self) -> Result<Option<i64>, ParseError> {
        if !matches!(self.peek(), Some(Tok::Caret)) {
            return Ok(None);
        }
        self.pos += 1;
        let neg = if matches!(self.peek(), Some(Tok::Minus)) {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        match self.next()? {
            Tok::Num(n) if n.is_integer() => {
                let v: i64 = n.to_integer().try_into().map_err(|_| ParseError::BadExponent(n.to_string()))?;
                Ok(Some(if neg { -v } else { v }))
            }
            t => Err(ParseError::Unexpected(t.describe(), at)),
        }
    }

    fn power(&mut self) -> Result<OperatorExpr, ParseError> {
        let at = self.pos;
        let tok = self.next()?;
        let base = match &tok {
            Tok::Sym(sym) => {
                let e = self.exponent()?.unwrap_or(1);
                if e < 0 && !sym.is_laurent() {
                    return Err(ParseError::BadExponent(sym.name().into()));
                }
                return Ok(OperatorExpr::scalar(self.mode, ScalarPoly::pow(*sym, e as i32)));
            }
            Tok::Num(n) => OperatorExpr::scalar(self.mode, ScalarPoly::constant(GaussRat::real(n.clone()))),
            Tok::Imag => OperatorExpr::scalar(self.mode, ScalarPoly::i()),
            Tok::Gen(g, m, name) => {
                if *m != self.mode {
                    return Err(ParseError::WrongMode(name.clone(), self.mode));
                }
                OperatorExpr::gen(self.mode, *g)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let at = self.pos;
                match self.next()? {
                    Tok::RParen => inner,
                    t => return Err(ParseError::Unexpected(t.describe(), at)),
                }
            }
            t => return Err(ParseError::Unexpected(t.describe(), at)),
        };
        match self.exponent()? {
            None => Ok(base),
            Some(e) if e >= 0 => {
                let mut acc = OperatorExpr::one(self.mode);
                for _ in 0..e {
                    acc = acc.try_mul(&base)?;
                }
                Ok(acc)
            }
            Some(_) => Err(ParseError::BadExponent(tok.describe())),
        }
    }
}

/// Parses an operator expression of the given mode.
pub fn parse_operator(src: &str, mode: Mode) -> Result<OperatorExpr, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, pos: 0, mode };
    let e = p.expr()?;
    if let Some(t) = p.peek() {
        return Err(ParseError::Unexpected(t.describe(), p.pos));
    }
    Ok(e)
}

/// Parses a scalar; generators are rejected.
pub fn parse_scalar(src: &str) -> Result<ScalarPoly, ParseError> {
    let toks = tokenize(src)?;
    if toks.iter().any(|t| matches!(t, Tok::Gen(..))) {
        return Err(ParseError::GeneratorInScalar);
    }
    let e = parse_operator(src, Mode::Classical)?;
    Ok(e.as_scalar().expect("no generators"))
}

impl FromStr for ScalarPoly {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_scalar(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::p0;

    #[test]
    fn parses_canonical_renderings() {
        for src in [
            "0",
            "2*s^-2 - 1/2",
            "-i*hbar",
            "(1/2-3*i)*w^2*x1",
            "-1/3*a*beta*gamma*b + hbar*s^-3*z3",
        ] {
            let p = parse_scalar(src).unwrap();
            assert_eq!(p.to_string(), src);
        }
        let ops = "2*s^-2 * Ah+ Ah- - 2*s^-2 * Ah- Ah+";
        assert_eq!(parse_operator(ops, Mode::Quantum).unwrap().to_string(), ops);
    }

    #[test]
    fn parses_informal_forms() {
        let e = parse_operator("(ph + 1/2*s^2) * s^-2", Mode::Quantum).unwrap();
        let expect = &(&OperatorExpr::gen(Mode::Quantum, Generator::P)
            + &OperatorExpr::scalar(Mode::Quantum, p0()))
            .scale(&ScalarPoly::pow(Symbol::S, -2))
            + &OperatorExpr::zero(Mode::Quantum);
        assert_eq!(e, expect);
        // juxtaposed ph qh is normalized through the CCR
        let f = parse_operator("ph qh", Mode::Quantum).unwrap();
        assert_eq!(f.to_string(), "-i*hbar + qh ph");
        let g = parse_operator("A- - A+", Mode::Classical).unwrap();
        assert_eq!(g.to_string(), "-A+ + A-");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_scalar("q"), Err(ParseError::GeneratorInScalar)));
        assert!(matches!(parse_operator("qh", Mode::Classical), Err(ParseError::WrongMode(..))));
        assert!(matches!(parse_scalar("w^-1"), Err(ParseError::BadExponent(_))));
        assert!(matches!(parse_scalar("foo"), Err(ParseError::UnknownIdent(_))));
        assert!(matches!(parse_scalar("1/0"), Err(ParseError::ZeroDenominator)));
        assert!(parse_scalar("(1 + w").is_err());
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("1 ) 2").is_err());
    }
}
