//! Finite supernilpotent algebras of prime power order, presented in
//! coordinatized (wreath-product) form.
//!
//! An element is a vector of `h` residues mod `q`, grouped into levels of
//! sizes `alphas[0], ..., alphas[s-1]`, level 1 first. Every operation is
//! triangular: the level-`j` output is linear in the level-`j` inputs plus a
//! tail that reads only levels below it in the listing (`j+1, ..., s`). The
//! last level's tail is a constant.

mod format;
mod product;

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use serde::Serialize;

pub use format::{parse_algebra, print_algebra};
pub use product::{direct_product, ProductAlgebra, ProductElement};

use crate::error::{Error, Limits, Result};
use crate::gf::PrimeField;
use crate::poly::{interpolate, MultiPoly, VarNames};

/// Operations whose full table has at most this many entries are compiled to
/// a lookup table at construction.
pub const COMPILE_LIMIT: u64 = 1 << 20;

/// Structured operations are validated by interpolation up to this many
/// argument tuples and syntactically beyond; the two agree on structured specs.
pub const SEMANTIC_LIMIT: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coordinatization {
    field: PrimeField,
    alphas: Vec<usize>,
    level_of: Vec<usize>,
    level_start: Vec<usize>,
    order: u32,
}

impl Coordinatization {
    pub fn new(field: PrimeField, alphas: Vec<usize>) -> Result<Self> {
        if alphas.is_empty() || alphas.contains(&0) {
            return Err(Error::usage("alphas must be a nonempty list of positive integers"));
        }
        let h: usize = alphas.iter().sum();
        let order = (field.q() as u64)
            .checked_pow(h as u32)
            .filter(|&o| o <= u32::MAX as u64)
            .ok_or_else(|| Error::usage(format!("algebra of order {}^{h} is too large", field.q())))?;
        let mut level_of = Vec::with_capacity(h);
        let mut level_start = Vec::with_capacity(alphas.len());
        for (j, &a) in alphas.iter().enumerate() {
            level_start.push(level_of.len());
            level_of.extend(std::iter::repeat_n(j, a));
        }
        Ok(Coordinatization {
            field,
            alphas,
            level_of,
            level_start,
            order: order as u32,
        })
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn q(&self) -> u32 {
        self.field.q()
    }

    pub fn alphas(&self) -> &[usize] {
        &self.alphas
    }

    /// Total number of coordinates.
    pub fn h(&self) -> usize {
        self.level_of.len()
    }

    /// Number of levels.
    pub fn s(&self) -> usize {
        self.alphas.len()
    }

    /// `|A| = q^h`.
    pub fn order(&self) -> u32 {
        self.order
    }

    /// Level (0-based) holding coordinate `k` (0-based).
    pub fn level_of(&self, k: usize) -> usize {
        self.level_of[k]
    }

    /// Coordinate range of level `j` (0-based).
    pub fn level_range(&self, j: usize) -> std::ops::Range<usize> {
        let start = self.level_start[j];
        start..start + self.alphas[j]
    }

    /// Coordinates strictly below level `j` in the listing (levels `j+1..s`).
    pub fn higher_range(&self, j: usize) -> std::ops::Range<usize> {
        self.level_range(j).end..self.h()
    }
}

/// An element as its coordinate vector, level-1 coordinates first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Element(Vec<u32>);

impl Element {
    pub fn zero(h: usize) -> Self {
        Element(vec![0; h])
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// An `alpha × alpha` matrix over `F_q`, row-major; acts on column vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub dim: usize,
    pub entries: Vec<u32>,
}

impl Matrix {
    pub fn zero(dim: usize) -> Self {
        Matrix {
            dim,
            entries: vec![0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<u32>>) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 || rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Format("matrix must be square and nonempty".into()));
        }
        Ok(Matrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.dim + c]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.dim {
            if r > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for c in 0..self.dim {
                if c > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    /// One value per coordinate of the level.
    Const(Vec<u32>),
    /// One polynomial per coordinate of the level, over all `h·arity` input
    /// coordinates (named as in [`VarNames::coordinates`]).
    Poly(Vec<MultiPoly>),
    /// Indexed by the concatenated lower-level coordinates of all arguments
    /// (argument-major); each entry is one value per coordinate of the level.
    Table(Vec<Vec<u32>>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSpec {
    /// One matrix per argument.
    pub linear: Vec<Matrix>,
    pub tail: Tail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpKind {
    /// Componentwise sum of all arguments.
    Sum,
    /// One [`LevelSpec`] per level.
    Structured(Vec<LevelSpec>),
    /// Result code for every argument tuple; tuple index is the base-`|A|`
    /// number formed by the argument codes, first argument most significant.
    Table(Vec<u32>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationSpec {
    pub name: String,
    pub arity: usize,
    pub kind: OpKind,
}

impl OperationSpec {
    pub fn sum(arity: usize) -> Self {
        OperationSpec {
            name: "+".into(),
            arity,
            kind: OpKind::Sum,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub op: String,
    /// 1-based output coordinate.
    pub coord: usize,
    pub monomial: String,
    pub reason: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "op {} coordinate {}: monomial {} {}",
            self.op, self.coord, self.monomial, self.reason
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checked: Vec<String>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone)]
struct CompiledOp {
    spec: OperationSpec,
    table: Option<Vec<u32>>,
}

/// A supernilpotent algebra in coordinatized form. Immutable once built.
#[derive(Debug, Clone)]
pub struct CoordAlgebra {
    coord: Coordinatization,
    ops: Vec<CompiledOp>,
    by_name: HashMap<String, usize>,
}

/// The two degree bounds for the field polynomial of an equation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    /// `(m·q)^h = |A|^(log_q m + 1)`.
    pub coarse: BigUint,
    /// `(q-1)·(m·q)^(h - alpha_s)·alpha_s`.
    pub refined: BigUint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DChoice {
    Refined,
    Coarse,
}

impl DegreeBound {
    pub fn pick(&self, choice: DChoice) -> &BigUint {
        match choice {
            DChoice::Refined => &self.refined,
            DChoice::Coarse => &self.coarse,
        }
    }
}

impl CoordAlgebra {
    /// Builds and validates an algebra. Fails if `+` is missing, shapes are
    /// inconsistent, or some operation is not triangular.
    pub fn new(coord: Coordinatization, specs: Vec<OperationSpec>, limits: Limits) -> Result<Self> {
        let mut by_name = HashMap::new();
        for (i, s) in specs.iter().enumerate() {
            if by_name.insert(s.name.clone(), i).is_some() {
                return Err(Error::usage(format!("operation {} defined twice", s.name)));
            }
            check_shape(&coord, s)?;
        }
        match by_name.get("+").map(|&i| &specs[i].kind) {
            Some(OpKind::Sum) => {}
            _ => return Err(Error::usage("the algebra must contain the builtin sum `+`")),
        }
        let mut alg = CoordAlgebra {
            coord,
            ops: specs
                .into_iter()
                .map(|spec| CompiledOp { spec, table: None })
                .collect(),
            by_name,
        };
        let report = alg.validate_triangular(limits)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::Domain(format!("operation is not triangular: {v}")));
        }
        for i in 0..alg.ops.len() {
            let size = (alg.order() as u64).checked_pow(alg.ops[i].spec.arity as u32);
            if matches!(size, Some(s) if s <= COMPILE_LIMIT) {
                let table = alg.full_table(i);
                alg.ops[i].table = Some(table);
            }
        }
        Ok(alg)
    }

    pub fn coordinatization(&self) -> &Coordinatization {
        &self.coord
    }

    pub fn field(&self) -> PrimeField {
        self.coord.field
    }

    pub fn q(&self) -> u32 {
        self.coord.q()
    }

    pub fn h(&self) -> usize {
        self.coord.h()
    }

    pub fn order(&self) -> u32 {
        self.coord.order
    }

    /// Maximal arity of a basic operation.
    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(|o| o.spec.arity).max().unwrap_or(0)
    }

    pub fn ops(&self) -> impl Iterator<Item = &OperationSpec> + '_ {
        self.ops.iter().map(|o| &o.spec)
    }

    pub fn op_index(&self, name: &str) -> Option<usize> {
        self.by_name.get(name).copied()
    }

    pub fn op(&self, idx: usize) -> &OperationSpec {
        &self.ops[idx].spec
    }

    pub fn zero(&self) -> Element {
        Element::zero(self.h())
    }

    pub fn element(&self, coords: Vec<u32>) -> Result<Element> {
        if coords.len() != self.h() {
            return Err(Error::Format(format!(
                "element has {} coordinates, expected {}",
                coords.len(),
                self.h()
            )));
        }
        if let Some(c) = coords.iter().find(|&&c| c >= self.q()) {
            return Err(Error::Format(format!("coordinate {c} is not in F_{}", self.q())));
        }
        Ok(Element(coords))
    }

    /// Parses `h` base-`q` digits, level-1 digit leftmost.
    pub fn parse_element(&self, digits: &str) -> Result<Element> {
        let coords = digits
            .chars()
            .map(|c| {
                c.to_digit(36)
                    .filter(|&d| d < self.q())
                    .ok_or_else(|| Error::Format(format!("'{c}' is not a base-{} digit", self.q())))
            })
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != self.h() {
            return Err(Error::Format(format!(
                "element '{digits}' has {} digits, expected {}",
                coords.len(),
                self.h()
            )));
        }
        Ok(Element(coords))
    }

    pub fn format_element(&self, e: &Element) -> String {
        e.0.iter()
            .map(|&d| std::char::from_digit(d, 36).expect("digit below 36"))
            .collect()
    }

    /// Element code: the coordinates read as a base-`q` number, coordinate 1 most significant.
    pub fn encode(&self, e: &Element) -> u32 {
        e.0.iter().fold(0, |acc, &c| acc * self.q() + c)
    }

    pub fn decode(&self, mut code: u32) -> Element {
        let q = self.q();
        let mut coords = vec![0; self.h()];
        for slot in coords.iter_mut().rev() {
            *slot = code % q;
            code /= q;
        }
        Element(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order()).map(|c| self.decode(c))
    }

    pub fn eval_op(&self, op: &str, args: &[Element]) -> Result<Element> {
        let idx = self
            .op_index(op)
            .ok_or_else(|| Error::usage(format!("unknown operation {op}")))?;
        let arity = self.ops[idx].spec.arity;
        if args.len() != arity {
            return Err(Error::usage(format!(
                "operation {op} takes {arity} arguments, got {}",
                args.len()
            )));
        }
        for a in args {
            if a.0.len() != self.h() || a.0.iter().any(|&c| c >= self.q()) {
                return Err(Error::usage(format!("argument {a:?} is not an element")));
            }
        }
        let codes: Vec<u32> = args.iter().map(|a| self.encode(a)).collect();
        Ok(self.decode(self.apply_codes(idx, &codes)))
    }

    /// Applies operation `idx` to element codes. Arguments must be valid codes.
    #[inline]
    pub fn apply_codes(&self, idx: usize, args: &[u32]) -> u32 {
        let op = &self.ops[idx];
        if let Some(table) = &op.table {
            let order = self.order() as usize;
            let at = args.iter().fold(0usize, |acc, &a| acc * order + a as usize);
            return table[at];
        }
        let coords: Vec<Vec<u32>> = args.iter().map(|&a| self.decode(a).0).collect();
        self.encode(&Element(self.eval_structural(&op.spec, &coords)))
    }

    fn eval_structural(&self, spec: &OperationSpec, args: &[Vec<u32>]) -> Vec<u32> {
        let f = self.field();
        let h = self.h();
        match &spec.kind {
            OpKind::Sum => (0..h)
                .map(|k| args.iter().fold(0, |acc, a| f.add(acc, a[k])))
                .collect(),
            OpKind::Table(table) => {
                let order = self.order() as usize;
                let at = args.iter().fold(0usize, |acc, a| {
                    acc * order + self.encode(&Element(a.clone())) as usize
                });
                self.decode(table[at]).0
            }
            OpKind::Structured(levels) => {
                let mut out = vec![0u32; h];
                let flat: Vec<u32> = args.iter().flatten().copied().collect();
                for (j, lvl) in levels.iter().enumerate() {
                    let range = self.coord.level_range(j);
                    let start = range.start;
                    let tail = self.eval_tail(j, &lvl.tail, args, &flat);
                    for (r, slot) in out[range.clone()].iter_mut().enumerate() {
                        let mut acc = tail[r];
                        for (m, a) in lvl.linear.iter().zip(args) {
                            for c in 0..m.dim {
                                acc = f.add(acc, f.mul(m.get(r, c), a[start + c]));
                            }
                        }
                        *slot = acc;
                    }
                }
                out
            }
        }
    }

    fn eval_tail(&self, level: usize, tail: &Tail, args: &[Vec<u32>], flat: &[u32]) -> Vec<u32> {
        match tail {
            Tail::Const(v) => v.clone(),
            Tail::Poly(ps) => ps.iter().map(|p| p.eval_raw(flat)).collect(),
            Tail::Table(rows) => {
                let q = self.q() as usize;
                let higher = self.coord.higher_range(level);
                let at = args
                    .iter()
                    .flat_map(|a| a[higher.clone()].iter())
                    .fold(0usize, |acc, &c| acc * q + c as usize);
                rows[at].clone()
            }
        }
    }

    /// Result codes of operation `idx` for every argument tuple.
    fn full_table(&self, idx: usize) -> Vec<u32> {
        let spec = &self.ops[idx].spec;
        let order = self.order() as usize;
        let size = order.pow(spec.arity as u32);
        if let OpKind::Table(t) = &spec.kind {
            return t.clone();
        }
        (0..size)
            .map(|mut at| {
                let mut args = vec![Vec::new(); spec.arity];
                for slot in args.iter_mut().rev() {
                    *slot = self.decode((at % order) as u32).0;
                    at /= order;
                }
                self.encode(&Element(self.eval_structural(spec, &args)))
            })
            .collect()
    }

    /// Checks that every operation is triangular by interpolating each output
    /// coordinate as a polynomial in the `h·arity` input coordinates.
    ///
    /// Operations too large to tabulate under `limits` fall back to a
    /// syntactic check of their tails.
    pub fn validate_triangular(&self, limits: Limits) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        for (idx, op) in self.ops.iter().enumerate() {
            report.checked.push(op.spec.name.clone());
            let h = self.h();
            let arity = op.spec.arity;
            let cap = match op.spec.kind {
                OpKind::Sum => continue,
                OpKind::Table(_) => limits,
                OpKind::Structured(_) => Limits::new(limits.max_points.min(SEMANTIC_LIMIT)),
            };
            if cap.check_space(self.q() as u64, h * arity).is_ok() {
                self.validate_semantic(idx, limits, &mut report.violations)?;
            } else if let OpKind::Table(_) = op.spec.kind {
                return Err(Error::LimitExceeded {
                    space: format!("{}^{}", self.q(), h * arity),
                    limit: limits.max_points,
                });
            } else {
                validate_syntactic(&self.coord, &op.spec, &mut report.violations);
            }
        }
        Ok(report)
    }

    fn validate_semantic(&self, idx: usize, limits: Limits, out: &mut Vec<Violation>) -> Result<()> {
        let spec = &self.ops[idx].spec;
        let h = self.h();
        let q = self.q() as usize;
        let arity = spec.arity;
        let n = h * arity;
        let table = self.full_table(idx);
        let order = self.order() as usize;
        let names = VarNames::coordinates(arity, h);
        // the coordinate-vector index and the argument-code index coincide
        debug_assert_eq!(q.pow(n as u32), order.pow(arity as u32));
        for k in 0..h {
            let column: Vec<u32> = table.iter().map(|&c| self.decode(c).0[k]).collect();
            let p = interpolate(self.field(), n, &column, limits)?;
            let level = self.coord.level_of(k);
            for (m, _) in p.terms() {
                let levels: Vec<usize> = m.support().map(|v| self.coord.level_of(v % h)).collect();
                let reason = if let Some(&lv) = levels.iter().find(|&&lv| lv < level) {
                    Some(format!("reads a level-{} input from level {}", lv + 1, level + 1))
                } else if levels.contains(&level) && m.degree() != 1 {
                    Some(format!("is not linear in level-{} inputs", level + 1))
                } else {
                    None
                };
                if let Some(reason) = reason {
                    let single = MultiPoly::from_terms(
                        self.field(),
                        n,
                        [(m.exponents().iter().map(|&e| e as u64).collect(), 1)],
                    )?;
                    out.push(Violation {
                        op: spec.name.clone(),
                        coord: k + 1,
                        monomial: single.display(&names).to_string(),
                        reason,
                    });
                }
            }
        }
        Ok(())
    }

    /// `coarse = (m·q)^h`, `refined = (q-1)·(m·q)^(h - alpha_s)·alpha_s`.
    pub fn degree_bound(&self) -> DegreeBound {
        degree_bound(self.q(), self.coord.alphas(), self.max_arity())
    }
}

pub fn degree_bound(q: u32, alphas: &[usize], m: usize) -> DegreeBound {
    let h: usize = alphas.iter().sum();
    let alpha_s = *alphas.last().expect("at least one level");
    let mq = BigUint::from(m as u64 * q as u64);
    DegreeBound {
        coarse: mq.pow(h as u32),
        refined: BigUint::from(q - 1) * mq.pow((h - alpha_s) as u32) * BigUint::from(alpha_s),
    }
}

fn check_shape(coord: &Coordinatization, spec: &OperationSpec) -> Result<()> {
    let q = coord.q();
    let bad = |msg: String| Err(Error::usage(format!("operation {}: {msg}", spec.name)));
    if spec.arity == 0 {
        return bad("arity must be at least 1".into());
    }
    match &spec.kind {
        OpKind::Sum => Ok(()),
        OpKind::Table(t) => {
            let expected = (coord.order() as u64).checked_pow(spec.arity as u32);
            if expected != Some(t.len() as u64) {
                return bad(format!("table has {} entries", t.len()));
            }
            if t.iter().any(|&c| c >= coord.order()) {
                return bad("table entry is not an element".into());
            }
            Ok(())
        }
        OpKind::Structured(levels) => {
            if levels.len() != coord.s() {
                return bad(format!("{} levels given, expected {}", levels.len(), coord.s()));
            }
            let n_inputs = coord.h() * spec.arity;
            for (j, lvl) in levels.iter().enumerate() {
                let a = coord.alphas()[j];
                if lvl.linear.len() != spec.arity {
                    return bad(format!("level {}: {} linear parts", j + 1, lvl.linear.len()));
                }
                if lvl
                    .linear
                    .iter()
                    .any(|m| m.dim != a || m.entries.iter().any(|&x| x >= q))
                {
                    return bad(format!("level {}: linear part must be {a}x{a} over F_{q}", j + 1));
                }
                match &lvl.tail {
                    Tail::Const(v) if v.len() != a || v.iter().any(|&x| x >= q) => {
                        return bad(format!("level {}: constant tail needs {a} residues", j + 1))
                    }
                    Tail::Poly(ps)
                        if ps.len() != a
                            || ps.iter().any(|p| p.n_vars() != n_inputs || p.field() != coord.field()) =>
                    {
                        return bad(format!("level {}: tail needs {a} polynomials", j + 1))
                    }
                    Tail::Table(rows) => {
                        let width = coord.higher_range(j).len() * spec.arity;
                        let expected = (q as u64).checked_pow(width as u32);
                        if expected != Some(rows.len() as u64)
                            || rows.iter().any(|r| r.len() != a || r.iter().any(|&x| x >= q))
                        {
                            return bad(format!("level {}: tail table has the wrong shape", j + 1));
                        }
                    }
                    _ => {}
                }
                if j + 1 == coord.s() && !matches!(lvl.tail, Tail::Const(_)) {
                    return bad("the last level's tail must be a constant".into());
                }
            }
            Ok(())
        }
    }
}

fn validate_syntactic(coord: &Coordinatization, spec: &OperationSpec, out: &mut Vec<Violation>) {
    let OpKind::Structured(levels) = &spec.kind else {
        return;
    };
    let h = coord.h();
    let names = VarNames::coordinates(spec.arity, h);
    for (j, lvl) in levels.iter().enumerate() {
        if let Tail::Poly(ps) = &lvl.tail {
            for (r, p) in ps.iter().enumerate() {
                for (m, _) in p.terms() {
                    if let Some(v) = m.support().find(|&v| coord.level_of(v % h) <= j) {
                        out.push(Violation {
                            op: spec.name.clone(),
                            coord: coord.level_range(j).start + r + 1,
                            monomial: names.name(v).to_string(),
                            reason: format!(
                                "tail reads a level-{} input from level {}",
                                coord.level_of(v % h) + 1,
                                j + 1
                            ),
                        });
                    }
                }
            }
        }
    }
}

/// The example family `A[h, m]` over `F_q`: `h` levels of one coordinate,
/// binary `+`, and `p_1..p_{h-1}` of arity `m` where `p_i` writes the product
/// of its arguments' coordinate `i+1` into coordinate `i` and zero elsewhere.
pub fn build_example(q: u64, h: usize, m: usize) -> Result<CoordAlgebra> {
    let field = PrimeField::new(q)?;
    if h == 0 {
        return Err(Error::usage("h must be at least 1"));
    }
    if m < 2 {
        return Err(Error::usage("m must be at least 2"));
    }
    let coord = Coordinatization::new(field, vec![1; h])?;
    let n_inputs = h * m;
    let mut specs = vec![OperationSpec::sum(2)];
    for i in 1..h {
        let levels = (0..h)
            .map(|j| {
                let linear = vec![Matrix::zero(1); m];
                let tail = if j + 1 == i {
                    // coordinate i+1 (0-based i) of every argument
                    let mut prod = MultiPoly::constant(field, n_inputs, 1);
                    for arg in 0..m {
                        let v = MultiPoly::var(field, n_inputs, arg * h + i);
                        prod = prod.mul(&v).expect("same ring");
                    }
                    Tail::Poly(vec![prod])
                } else {
                    Tail::Const(vec![0])
                };
                LevelSpec { linear, tail }
            })
            .collect();
        specs.push(OperationSpec {
            name: format!("p{i}"),
            arity: m,
            kind: OpKind::Structured(levels),
        });
    }
    CoordAlgebra::new(coord, specs, Limits::default())
}
