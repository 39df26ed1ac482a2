//! The line-oriented algebra file format.
//!
//! ```text
//! ALGEBRA v1
//! q 2
//! alphas 1 1
//! op + 2 builtin-sum
//! op p1 2 structured
//!   level 1 linear [[0]] [[0]] tail poly x2*y2
//!   level 2 linear [[0]] [[0]] tail const 0
//! op t 1 table
//!   00 -> 00
//!   01 -> 10
//!   10 -> 01
//!   11 -> 11
//! END
//! ```
//!
//! `#` starts a comment. A structured operation lists one `level` line per
//! level; its tail is `const c1 .. ca`, `poly P1 ; .. ; Pa` over the input
//! coordinates `x1..xh, y1..yh, ...`, or `table` followed by one row
//! `LOWER -> VALUES` per assignment of the lower-level coordinates of all
//! arguments. A `table` operation lists one row `ARGS -> RESULT` per argument
//! tuple, elements as digit strings.

use std::fmt::Write;

use super::{
    CoordAlgebra, Coordinatization, LevelSpec, Matrix, OpKind, OperationSpec, Tail,
};
use crate::error::{Error, Limits, Result};
use crate::gf::PrimeField;
use crate::poly::{MultiPoly, VarNames};

struct Lines<'a> {
    items: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Lines { items, pos: 0 }
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let item = self.items.get(self.pos).copied();
        self.pos += 1;
        item
    }

    fn last_line(&self) -> usize {
        self.items.last().map(|(n, _)| *n).unwrap_or(0)
    }

    fn expect(&mut self, what: &str) -> Result<(usize, &'a str)> {
        let last = self.last_line();
        self.next()
            .ok_or_else(|| Error::parse(last, format!("unexpected end of file, expected {what}")))
    }
}

fn parse_num(tok: &str, line: usize, what: &str) -> Result<u64> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected {what}, found '{tok}'")))
}

fn parse_digits(s: &str, q: u32, len: usize, line: usize) -> Result<Vec<u32>> {
    let digits: Vec<u32> = s
        .chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            c.to_digit(36)
                .filter(|&d| d < q)
                .ok_or_else(|| Error::parse(line, format!("'{c}' is not a base-{q} digit")))
        })
        .collect::<Result<_>>()?;
    if digits.len() != len {
        return Err(Error::parse(
            line,
            format!("expected {len} digits, found {}", digits.len()),
        ));
    }
    Ok(digits)
}

fn split_arrow(s: &str, line: usize) -> Result<(&str, &str)> {
    s.split_once("->")
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::parse(line, "expected a row of the form 'ARGS -> RESULT'"))
}

fn digits_to_index(digits: &[u32], q: u32) -> usize {
    digits.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

fn parse_matrices(s: &str, line: usize) -> Result<Vec<Matrix>> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut depth = 0;
    let mut start = 0;
    for (i, c) in compact.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = i;
                }
                depth += 1;
            }
            ']' => {
                if depth == 0 {
                    return Err(Error::parse(line, "unbalanced ']' in matrix"));
                }
                depth -= 1;
                if depth == 0 {
                    out.push(parse_matrix(&compact[start..=i], line)?);
                }
            }
            _ if depth == 0 => {
                return Err(Error::parse(line, format!("unexpected '{c}' between matrices")))
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::parse(line, "unbalanced '[' in matrix"));
    }
    Ok(out)
}

fn parse_matrix(s: &str, line: usize) -> Result<Matrix> {
    let inner = s
        .strip_prefix("[[")
        .and_then(|r| r.strip_suffix("]]"))
        .ok_or_else(|| Error::parse(line, format!("malformed matrix {s}")))?;
    let rows = inner
        .split("],[")
        .map(|row| {
            row.split(',')
                .map(|x| parse_num(x, line, "matrix entry").map(|v| v as u32))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).map_err(|e| Error::parse(line, e.to_string()))
}

/// Parses an algebra file and builds the validated algebra.
pub fn parse_algebra(text: &str, limits: Limits) -> Result<CoordAlgebra> {
    let mut lines = Lines::new(text);
    let (n, header) = lines.expect("the ALGEBRA header")?;
    if header != "ALGEBRA v1" {
        return Err(Error::parse(n, "expected header 'ALGEBRA v1'"));
    }
    let (n, qline) = lines.expect("'q <prime>'")?;
    let q = match qline.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["q", v] => parse_num(v, n, "a prime")?,
        _ => return Err(Error::parse(n, "expected 'q <prime>'")),
    };
    let field = PrimeField::new(q).map_err(|e| Error::parse(n, e.to_string()))?;
    let (n, aline) = lines.expect("'alphas ...'")?;
    let mut toks = aline.split_whitespace();
    if toks.next() != Some("alphas") {
        return Err(Error::parse(n, "expected 'alphas a1 .. as'"));
    }
    let alphas = toks
        .map(|t| parse_num(t, n, "a level size").map(|v| v as usize))
        .collect::<Result<Vec<_>>>()?;
    let coord = Coordinatization::new(field, alphas).map_err(|e| Error::parse(n, e.to_string()))?;

    let mut specs = Vec::new();
    loop {
        let (n, l) = lines.expect("an 'op' line or END")?;
        if l == "END" {
            break;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        let (name, arity, kind) = match toks.as_slice() {
            ["op", name, arity, kind] => (*name, parse_num(arity, n, "an arity")? as usize, *kind),
            _ => return Err(Error::parse(n, "expected 'op NAME ARITY KIND'")),
        };
        let kind = match kind {
            "builtin-sum" => OpKind::Sum,
            "table" => OpKind::Table(parse_op_table(&mut lines, &coord, arity)?),
            "structured" => OpKind::Structured(parse_levels(&mut lines, &coord, arity)?),
            other => return Err(Error::parse(n, format!("unknown operation kind '{other}'"))),
        };
        specs.push((n, OperationSpec {
            name: name.to_string(),
            arity,
            kind,
        }));
    }
    if let Some((n, _)) = lines.next() {
        return Err(Error::parse(n, "content after END"));
    }
    // attribute construction errors to the op's line where we can
    let first_line: Vec<(usize, String)> = specs.iter().map(|(n, s)| (*n, s.name.clone())).collect();
    CoordAlgebra::new(coord, specs.into_iter().map(|(_, s)| s).collect(), limits).map_err(|e| {
        let line = first_line
            .iter()
            .find(|(_, name)| e.to_string().contains(&format!("operation {name}")))
            .map(|(n, _)| *n);
        match (line, e) {
            (Some(n), e @ (Error::Usage(_) | Error::Domain(_))) => Error::parse(n, e.to_string()),
            (_, e) => e,
        }
    })
}

fn parse_op_table(lines: &mut Lines, coord: &Coordinatization, arity: usize) -> Result<Vec<u32>> {
    let order = coord.order() as u64;
    let size = order
        .checked_pow(arity as u32)
        .filter(|&s| s <= super::COMPILE_LIMIT)
        .ok_or_else(|| Error::usage("operation table too large"))? as usize;
    let h = coord.h();
    let q = coord.q();
    let mut table = vec![None; size];
    for _ in 0..size {
        let (n, row) = lines.expect("a table row")?;
        let (lhs, rhs) = split_arrow(row, n)?;
        let args = parse_digits(lhs, q, h * arity, n)?;
        let res = parse_digits(rhs, q, h, n)?;
        let at = digits_to_index(&args, q);
        if table[at].is_some() {
            return Err(Error::parse(n, format!("duplicate row for {lhs}")));
        }
        table[at] = Some(digits_to_index(&res, q) as u32);
    }
    Ok(table.into_iter().map(|v| v.expect("all rows seen")).collect())
}

fn parse_levels(lines: &mut Lines, coord: &Coordinatization, arity: usize) -> Result<Vec<LevelSpec>> {
    let q = coord.q();
    let names = VarNames::coordinates(arity, coord.h());
    let mut levels = Vec::with_capacity(coord.s());
    for j in 0..coord.s() {
        let (n, l) = lines.expect("a 'level' line")?;
        let rest = l
            .strip_prefix("level")
            .ok_or_else(|| Error::parse(n, "expected 'level J linear ... tail ...'"))?
            .trim_start();
        let (num, rest) = rest
            .split_once(char::is_whitespace)
            .ok_or_else(|| Error::parse(n, "expected a level number"))?;
        if parse_num(num, n, "a level number")? != j as u64 + 1 {
            return Err(Error::parse(n, format!("expected level {}", j + 1)));
        }
        let rest = rest
            .trim_start()
            .strip_prefix("linear")
            .ok_or_else(|| Error::parse(n, "expected 'linear'"))?;
        let (mats, tail) = rest
            .split_once(" tail ")
            .ok_or_else(|| Error::parse(n, "expected 'tail'"))?;
        let linear = parse_matrices(mats, n)?;
        let tail = tail.trim();
        let (kind, body) = tail.split_once(char::is_whitespace).unwrap_or((tail, ""));
        let alpha = coord.alphas()[j];
        let tail = match kind {
            "const" => Tail::Const(
                body.split_whitespace()
                    .map(|t| parse_num(t, n, "a residue").map(|v| v as u32))
                    .collect::<Result<_>>()?,
            ),
            "poly" => Tail::Poly(
                body.split(';')
                    .map(|p| {
                        MultiPoly::parse(p.trim(), coord.field(), &names)
                            .map_err(|e| Error::parse(n, e.to_string()))
                    })
                    .collect::<Result<_>>()?,
            ),
            "table" => {
                let width = coord.higher_range(j).len() * arity;
                let size = (q as u64)
                    .checked_pow(width as u32)
                    .filter(|&s| s <= super::COMPILE_LIMIT)
                    .ok_or_else(|| Error::parse(n, "tail table too large"))?
                    as usize;
                let mut rows = vec![None; size];
                for _ in 0..size {
                    let (rn, row) = lines.expect("a tail table row")?;
                    let (lhs, rhs) = split_arrow(row, rn)?;
                    let key = parse_digits(lhs, q, width, rn)?;
                    let vals = parse_digits(rhs, q, alpha, rn)?;
                    let at = digits_to_index(&key, q);
                    if rows[at].is_some() {
                        return Err(Error::parse(rn, format!("duplicate row for {lhs}")));
                    }
                    rows[at] = Some(vals);
                }
                Tail::Table(rows.into_iter().map(|r| r.expect("all rows seen")).collect())
            }
            other => return Err(Error::parse(n, format!("unknown tail kind '{other}'"))),
        };
        levels.push(LevelSpec { linear, tail });
    }
    Ok(levels)
}

fn digits(values: &[u32]) -> String {
    values
        .iter()
        .map(|&d| std::char::from_digit(d, 36).expect("digit below 36"))
        .collect()
}

fn index_digits(mut idx: usize, q: u32, len: usize) -> Vec<u32> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (idx % q as usize) as u32;
        idx /= q as usize;
    }
    out
}

/// Canonical text of an algebra; [`parse_algebra`] reads it back unchanged.
pub fn print_algebra(alg: &CoordAlgebra) -> String {
    let coord = alg.coordinatization();
    let q = coord.q();
    let h = coord.h();
    let mut out = String::new();
    let alphas: Vec<String> = coord.alphas().iter().map(|a| a.to_string()).collect();
    writeln!(out, "ALGEBRA v1").unwrap();
    writeln!(out, "q {q}").unwrap();
    writeln!(out, "alphas {}", alphas.join(" ")).unwrap();
    for op in alg.ops() {
        match &op.kind {
            OpKind::Sum => {
                writeln!(out, "op {} {} builtin-sum", op.name, op.arity).unwrap();
            }
            OpKind::Table(t) => {
                writeln!(out, "op {} {} table", op.name, op.arity).unwrap();
                for (at, &res) in t.iter().enumerate() {
                    let args = index_digits(at, q, h * op.arity);
                    let args: Vec<String> = args.chunks(h).map(digits).collect();
                    let res = alg.format_element(&alg.decode(res));
                    writeln!(out, "  {} -> {res}", args.join(" ")).unwrap();
                }
            }
            OpKind::Structured(levels) => {
                writeln!(out, "op {} {} structured", op.name, op.arity).unwrap();
                let names = VarNames::coordinates(op.arity, h);
                for (j, lvl) in levels.iter().enumerate() {
                    let mats: Vec<String> = lvl.linear.iter().map(|m| m.to_string()).collect();
                    write!(out, "  level {} linear {} tail ", j + 1, mats.join(" ")).unwrap();
                    match &lvl.tail {
                        Tail::Const(v) => {
                            let v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                            writeln!(out, "const {}", v.join(" ")).unwrap();
                        }
                        Tail::Poly(ps) => {
                            let ps: Vec<String> =
                                ps.iter().map(|p| p.display(&names).to_string()).collect();
                            writeln!(out, "poly {}", ps.join(" ; ")).unwrap();
                        }
                        Tail::Table(rows) => {
                            writeln!(out, "table").unwrap();
                            let width = coord.higher_range(j).len() * op.arity;
                            for (at, vals) in rows.iter().enumerate() {
                                writeln!(out, "    {} -> {}", digits(&index_digits(at, q, width)), digits(vals))
                                    .unwrap();
                            }
                        }
                    }
                }
            }
        }
    }
    writeln!(out, "END").unwrap();
    out
}
