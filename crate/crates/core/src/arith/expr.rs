//! Parser for integer polynomial expressions.
//!
//! Grammar (whitespace is ignored between tokens):
//!
//! ```text
//! list   := expr (',' expr)*
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT | VAR | '(' expr ')'
//! ```
//!
//! Exponents must be positive integer literals and juxtaposition (`2x0`,
//! `x0 x1`) is rejected.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Sparse polynomial with integer coefficients, keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(e, BigInt::one());
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Vec<u32>, BigInt> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degrees of all monomials present.
    pub fn total_degrees(&self) -> impl Iterator<Item = u32> + '_ {
        self.terms.keys().map(|e| e.iter().sum())
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let entry = out.terms.entry(e.clone()).or_insert_with(BigInt::zero);
                *entry += ca * cb;
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(self.nvars, BigInt::one());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: expected {}, found {}",
            self.position, self.expected, self.found
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Comma,
    End,
}

impl Tok {
    fn describe(&self, src: &str, pos: usize) -> String {
        match self {
            Tok::End => "end of input".into(),
            _ => {
                let rest = &src[pos..];
                let len = rest
                    .char_indices()
                    .find(|(i, c)| *i > 0 && !(c.is_ascii_alphanumeric()))
                    .map(|(i, _)| i)
                    .unwrap_or(rest.len());
                let len = if matches!(self, Tok::Int(_) | Tok::Var(_)) {
                    len
                } else {
                    1
                };
                format!("'{}'", &rest[..len])
            }
        }
    }
}

fn tokenize(src: &str, vars: &[&str]) -> Result<Vec<(Tok, usize)>, ParseError> {
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
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(src[start..i].parse().expect("digits")), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let word = &src[start..i];
                match vars.iter().position(|v| *v == word) {
                    Some(k) => out.push((Tok::Var(k), start)),
                    None => {
                        return Err(ParseError {
                            position: start,
                            expected: format!("variable ({})", vars.join(" | ")),
                            found: format!("'{word}'"),
                        })
                    }
                }
                continue;
            }
            other => {
                return Err(ParseError {
                    position: start,
                    expected: "number, variable, operator or parenthesis".into(),
                    found: format!("'{other}'"),
                })
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, src.len()));
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<(Tok, usize)>,
    at: usize,
    nvars: usize,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn error(&self, expected: &str) -> ParseError {
        let (tok, pos) = &self.toks[self.at];
        ParseError {
            position: *pos,
            expected: expected.into(),
            found: tok.describe(self.src, *pos),
        }
    }

    fn expr(&mut self) -> Result<SparsePoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.at += 1;
                    acc = acc.add(&self.term()?);
                }
                Tok::Minus => {
                    self.at += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.at += 1;
            acc = acc.mul(&self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly, ParseError> {
        if *self.peek() == Tok::Minus {
            self.at += 1;
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<SparsePoly, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.at += 1;
        let Tok::Int(k) = self.peek().clone() else {
            return Err(self.error("positive integer exponent"));
        };
        let k: u32 = match u32::try_from(&k) {
            Ok(k) if (1..=1000).contains(&k) => k,
            _ => return Err(self.error("positive integer exponent")),
        };
        self.at += 1;
        Ok(base.pow(k))
    }

    fn atom(&mut self) -> Result<SparsePoly, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.at += 1;
                Ok(SparsePoly::constant(self.nvars, n))
            }
            Tok::Var(i) => {
                self.at += 1;
                Ok(SparsePoly::variable(self.nvars, i))
            }
            Tok::LParen => {
                self.at += 1;
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("')'"));
                }
                self.at += 1;
                Ok(inner)
            }
            _ => Err(self.error("number, variable or '('")),
        }
    }
}

/// Parses a comma-separated list of polynomial expressions in `vars`.
pub fn parse_list(src: &str, vars: &[&str]) -> Result<Vec<SparsePoly>, ParseError> {
    let toks = tokenize(src, vars)?;
    let mut p = Parser {
        src,
        toks,
        at: 0,
        nvars: vars.len(),
    };
    let mut out = vec![p.expr()?];
    loop {
        match p.peek() {
            Tok::Comma => {
                p.at += 1;
                out.push(p.expr()?);
            }
            Tok::End => return Ok(out),
            _ => return Err(p.error("operator, ',' or end of input")),
        }
    }
}

/// Parses a single expression.
pub fn parse_expr(src: &str, vars: &[&str]) -> Result<SparsePoly, ParseError> {
    let toks = tokenize(src, vars)?;
    let mut p = Parser {
        src,
        toks,
        at: 0,
        nvars: vars.len(),
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("operator or end of input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    const V: [&str; 3] = ["x0", "x1", "x2"];

    #[test]
    fn precedence_and_unary_minus() {
        let p = parse_expr("-x0^2 + 3*(x1 - x2)*x1", &V).unwrap();
        let q = parse_expr("3*x1^2 - 3*x1*x2 - x0*x0", &V).unwrap();
        assert_eq!(p, q);
        assert_eq!(
            parse_expr("--x0", &V).unwrap(),
            parse_expr("x0", &V).unwrap()
        );
    }

    #[test]
    fn rejects_juxtaposition_and_bad_exponents() {
        let e = parse_expr("2x0", &V).unwrap_err();
        assert_eq!(e.position, 1);
        assert!(parse_expr("x0 x1", &V).is_err());
        assert!(parse_expr("x0^0", &V).is_err());
        assert!(parse_expr("x0^-1", &V).is_err());
        assert!(parse_expr("x0^x1", &V).is_err());
        assert!(parse_expr("x0/2", &V).is_err());
        let e = parse_expr("(x0 + x1", &V).unwrap_err();
        assert_eq!(e.expected, "')'");
        assert_eq!(e.found, "end of input");
        let e = parse_expr("x3", &V).unwrap_err();
        assert_eq!((e.position, e.found.as_str()), (0, "'x3'"));
    }

    #[test]
    fn lists() {
        let l = parse_list("x0, x1 ,x2", &V).unwrap();
        assert_eq!(l.len(), 3);
        assert!(parse_list("x0,,x1", &V).is_err());
    }
}
