//! Textual polynomial syntax: `2*x1^2*y2 + x3 + 1`.
//!
//! Terms are joined by `+` (a `-` is accepted and negates); a monomial is
//! `c*v1^e1*v2^e2` with coefficient and exponents optional. Parentheses are
//! accepted on input; output never uses them.

use std::collections::HashMap;
use std::fmt;

use super::MultiPoly;
use crate::error::{Error, Result};
use crate::gf::PrimeField;

/// Variable names for printing and parsing, index `i` is variable `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarNames {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

const INPUT_LETTERS: [char; 6] = ['x', 'y', 'z', 'u', 'v', 'w'];

impl VarNames {
    pub fn new(names: Vec<String>) -> Self {
        let index = names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), i))
            .collect();
        VarNames { names, index }
    }

    /// `prefix1, ..., prefixN`.
    pub fn indexed(prefix: &str, n: usize) -> Self {
        Self::new((1..=n).map(|i| format!("{prefix}{i}")).collect())
    }

    /// Names for the coordinates of `n_inputs` elements with `h` coordinates
    /// each, input-major: `x1..xh, y1..yh, ...` for up to six inputs and
    /// `v1_1 .. vN_h` beyond that.
    pub fn coordinates(n_inputs: usize, h: usize) -> Self {
        let mut names = Vec::with_capacity(n_inputs * h);
        for i in 0..n_inputs {
            for k in 1..=h {
                if n_inputs <= INPUT_LETTERS.len() {
                    names.push(format!("{}{k}", INPUT_LETTERS[i]));
                } else {
                    names.push(format!("v{}_{k}", i + 1));
                }
            }
        }
        Self::new(names)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

pub(super) struct Display<'a> {
    pub poly: &'a MultiPoly,
    pub names: &'a VarNames,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let mut first = true;
            if m.is_one() || c.value() != 1 {
                write!(f, "{}", c.value())?;
                first = false;
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !first {
                    write!(f, "*")?;
                }
                first = false;
                write!(f, "{}", self.names.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(u64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        match c {
            ' ' | '\t' => {
                i += 1;
                continue;
            }
            '+' => out.push((start, Tok::Plus)),
            '-' => out.push((start, Tok::Minus)),
            '*' => out.push((start, Tok::Star)),
            '^' => out.push((start, Tok::Caret)),
            '(' => out.push((start, Tok::LParen)),
            ')' => out.push((start, Tok::RParen)),
            d if d.is_ascii_digit() => {
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| Error::Format(format!("number too large: {s}")))?;
                out.push((start, Tok::Num(n)));
                continue;
            }
            a if a.is_ascii_alphabetic() || a == '_' => {
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(chars[start..i].iter().collect())));
                continue;
            }
            other => {
                return Err(Error::Format(format!(
                    "unexpected character '{other}' at column {}",
                    start + 1
                )))
            }
        }
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    field: PrimeField,
    names: &'a VarNames,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn err(&self, msg: &str) -> Error {
        match self.toks.get(self.pos) {
            Some((col, _)) => Error::Format(format!("{msg} at column {}", col + 1)),
            None => Error::Format(format!("{msg} at end of input")),
        }
    }

    fn expr(&mut self) -> Result<MultiPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly> {
        let mut acc = self.unary()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            acc = acc.mul(&self.unary()?)?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<MultiPoly> {
        if let Some(Tok::Minus) = self.peek() {
            self.pos += 1;
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            match self.peek() {
                Some(&Tok::Num(e)) => {
                    self.pos += 1;
                    return Ok(base.pow(e));
                }
                _ => return Err(self.err("expected exponent")),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly> {
        let n = self.names.len();
        match self.peek().cloned() {
            Some(Tok::Num(c)) => {
                self.pos += 1;
                Ok(MultiPoly::constant(
                    self.field,
                    n,
                    (c % self.field.q() as u64) as u32,
                ))
            }
            Some(Tok::Ident(name)) => match self.names.lookup(&name) {
                Some(i) => {
                    self.pos += 1;
                    Ok(MultiPoly::var(self.field, n, i))
                }
                None => Err(self.err(&format!("unknown variable '{name}'"))),
            },
            Some(Tok::LParen) => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek() {
                    Some(Tok::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(self.err("expected ')'")),
                }
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

pub(super) fn parse(text: &str, field: PrimeField, names: &VarNames) -> Result<MultiPoly> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(Error::Format("empty polynomial".into()));
    }
    let mut p = Parser {
        toks,
        pos: 0,
        field,
        names,
    };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("unexpected token"));
    }
    Ok(out)
}

fn indexed_var(name: &str) -> Option<usize> {
    let digits = name.strip_prefix('x')?;
    if digits.is_empty() || digits.starts_with('0') {
        return None;
    }
    digits.parse().ok()
}

pub(super) fn parse_indexed(
    text: &str,
    field: PrimeField,
    n_vars: Option<usize>,
) -> Result<MultiPoly> {
    let mut max = 0;
    for (_, t) in lex(text)? {
        if let Tok::Ident(name) = t {
            match indexed_var(&name) {
                Some(k) => max = max.max(k),
                None => {
                    return Err(Error::Format(format!(
                        "variable '{name}' is not of the form x<k>"
                    )))
                }
            }
        }
    }
    let n = match n_vars {
        Some(n) if max > n => {
            return Err(Error::Format(format!(
                "variable x{max} exceeds the declared arity {n}"
            )))
        }
        Some(n) => n,
        None => max,
    };
    parse(text, field, &VarNames::indexed("x", n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let names = VarNames::coordinates(2, 2);
        let p = MultiPoly::parse("1 + x2*y2", f(2), &names).unwrap();
        assert_eq!(p.display(&names).to_string(), "1 + x2*y2");
        let p = MultiPoly::parse_indexed("2*x1^2*x3 + x2 - 1", f(3), None).unwrap();
        assert_eq!(p.n_vars(), 3);
        assert_eq!(p.to_string(), "2 + x2 + 2*x1^2*x3");
        let p = MultiPoly::parse_indexed("(x1 + 1)^2", f(5), None).unwrap();
        assert_eq!(p.to_string(), "1 + 2*x1 + x1^2");
        assert_eq!(MultiPoly::zero(f(2), 2).to_string(), "0");
        assert_eq!(MultiPoly::parse_indexed("x1 + x1", f(2), Some(1)).unwrap().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        let names = VarNames::indexed("x", 2);
        for bad in ["", "x1 +", "x3", "x1 ^", "2 $ x1", "(x1"] {
            assert!(
                matches!(MultiPoly::parse(bad, f(2), &names), Err(Error::Format(_))),
                "{bad:?}"
            );
        }
        assert!(MultiPoly::parse_indexed("y1", f(2), None).is_err());
        assert!(MultiPoly::parse_indexed("x3", f(2), Some(2)).is_err());
    }

    #[test]
    fn coordinate_names() {
        let n = VarNames::coordinates(2, 3);
        assert_eq!(n.name(0), "x1");
        assert_eq!(n.name(5), "y3");
        let n = VarNames::coordinates(7, 1);
        assert_eq!(n.name(6), "v7_1");
    }
}
