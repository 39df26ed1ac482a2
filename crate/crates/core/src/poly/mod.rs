//! Multivariate polynomials over `F_q` in normal form modulo `x^q = x`.
//!
//! Every exponent is kept in `{0} ∪ [1, q-1]`, so two polynomials are equal as
//! functions `F_q^n -> F_q` exactly when their term maps are equal.

mod density;
mod interp;
mod text;

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

pub use density::{
    check_density, count_preimage, density_bound, preimage_histogram, preimage_reduction,
    DensityBound, DensityCheck, ReductionStep, ReductionTrace, StepKind,
};
pub(crate) use density::classify as classify_count;
pub use interp::{interpolate, value_table};
pub use text::VarNames;

use crate::error::{Error, Result};
use crate::gf::{reduce_exponent, FieldElement, PrimeField};

/// Exponent vector of a monomial, each entry already reduced.
///
/// Ordered by total degree first; within a degree, lexicographically with
/// `x1` leading (so `x1` sorts before `x2`, `x1^2` before `x1*x2`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u8>);

impl Monomial {
    pub fn one(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, i: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[i] = 1;
        Monomial(e)
    }

    /// Builds a monomial from raw exponents, reducing them modulo `x^q = x`.
    pub fn new(exps: &[u64], q: u32) -> Self {
        Monomial(exps.iter().map(|&e| reduce_exponent(e, q) as u8).collect())
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, _)| i)
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial, q: u32) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(&a, &b)| reduce_exponent(a as u64 + b as u64, q) as u8)
                .collect(),
        )
    }

    fn without(&self, var: usize) -> Monomial {
        let mut e = self.0.clone();
        e.remove(var);
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// What [`MultiPoly::substitute`] puts in place of the eliminated variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Replacement {
    Const(u32),
    /// `constant + Σ coeffs[j]·x_j` over the remaining `n-1` variables.
    Affine { coeffs: Vec<u32>, constant: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    field: PrimeField,
    n_vars: usize,
    terms: BTreeMap<Monomial, u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, n_vars: usize) -> Self {
        MultiPoly {
            field,
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: PrimeField, n_vars: usize, c: u32) -> Self {
        let mut p = Self::zero(field, n_vars);
        p.add_term(Monomial::one(n_vars), c);
        p
    }

    pub fn var(field: PrimeField, n_vars: usize, i: usize) -> Self {
        assert!(i < n_vars, "variable index {i} out of range for arity {n_vars}");
        let mut p = Self::zero(field, n_vars);
        p.add_term(Monomial::var(n_vars, i), 1);
        p
    }

    /// Collects `(exponents, coefficient)` pairs into normal form.
    pub fn from_terms<I>(field: PrimeField, n_vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u64>, u64)>,
    {
        let mut p = Self::zero(field, n_vars);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(Error::usage(format!(
                    "monomial has {} exponents, expected {n_vars}",
                    exps.len()
                )));
            }
            let c = (c % field.q() as u64) as u32;
            p.add_term(Monomial::new(&exps, field.q()), c);
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = f.add(*o.get(), c);
                if s == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, FieldElement)> + '_ {
        self.terms.iter().map(|(m, &c)| (m, self.field.elem(c as u64)))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> FieldElement {
        self.field
            .elem(self.terms.get(m).copied().unwrap_or(0) as u64)
    }

    pub fn constant_term(&self) -> FieldElement {
        self.coefficient(&Monomial::one(self.n_vars))
    }

    /// Constant value if the polynomial has no non-constant terms.
    pub fn as_constant(&self) -> Option<u32> {
        match self.terms.len() {
            0 => Some(0),
            1 => {
                let (m, &c) = self.terms.iter().next().unwrap();
                m.is_one().then_some(c)
            }
            _ => None,
        }
    }

    /// Maximal total degree of a stored monomial; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    fn compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch {
                left: self.field.q(),
                right: other.field.q(),
            });
        }
        if self.n_vars != other.n_vars {
            return Err(Error::usage(format!(
                "arity mismatch: {} vs {}",
                self.n_vars, other.n_vars
            )));
        }
        Ok(())
    }

    pub fn arith(&self, other: &MultiPoly, op: PolyOp) -> Result<MultiPoly> {
        match op {
            PolyOp::Add => self.add(other),
            PolyOp::Mul => self.mul(other),
        }
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let mut out = self.clone();
        for (m, &c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.compatible(other)?;
        let f = self.field;
        let mut out = Self::zero(f, self.n_vars);
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &other.terms {
                out.add_term(ma.mul(mb, f.q()), f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        self.scale(self.field.neg(1))
    }

    pub fn scale(&self, c: u32) -> MultiPoly {
        let f = self.field;
        let c = c % f.q();
        let mut out = Self::zero(f, self.n_vars);
        if c != 0 {
            for (m, &v) in &self.terms {
                out.terms.insert(m.clone(), f.mul(v, c));
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> MultiPoly {
        let mut acc = Self::constant(self.field, self.n_vars, 1);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base).expect("same ring");
            }
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElement]) -> Result<FieldElement> {
        if point.len() != self.n_vars {
            return Err(Error::usage(format!(
                "point has {} coordinates, polynomial has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let mut raw = Vec::with_capacity(point.len());
        for x in point {
            if x.field() != self.field {
                return Err(Error::FieldMismatch {
                    left: self.field.q(),
                    right: x.field().q(),
                });
            }
            raw.push(x.value());
        }
        Ok(self.field.elem(self.eval_raw(&raw) as u64))
    }

    /// Evaluation on raw residues; `point` must have `n_vars` entries in `[0, q)`.
    pub fn eval_raw(&self, point: &[u32]) -> u32 {
        let f = self.field;
        let mut acc = 0;
        for (m, &c) in &self.terms {
            let mut t = c;
            for (&x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = f.mul(t, f.pow(x, e as u64));
                    if t == 0 {
                        break;
                    }
                }
            }
            acc = f.add(acc, t);
        }
        acc
    }

    /// Eliminates variable `var`, replacing it by a constant or an affine form
    /// in the remaining variables. The result has arity `n_vars - 1`.
    pub fn substitute(&self, var: usize, replacement: &Replacement) -> Result<MultiPoly> {
        if var >= self.n_vars {
            return Err(Error::usage(format!(
                "variable index {var} out of range for arity {}",
                self.n_vars
            )));
        }
        let f = self.field;
        let n = self.n_vars - 1;
        let repl = match replacement {
            Replacement::Const(c) => Self::constant(f, n, c % f.q()),
            Replacement::Affine { coeffs, constant } => {
                if coeffs.len() != n {
                    return Err(Error::usage(format!(
                        "affine replacement has {} coefficients, expected {n}",
                        coeffs.len()
                    )));
                }
                let mut r = Self::constant(f, n, constant % f.q());
                for (j, &b) in coeffs.iter().enumerate() {
                    r.add_term(Monomial::var(n, j), b % f.q());
                }
                r
            }
        };
        let mut powers = vec![Self::constant(f, n, 1)];
        for e in 1..f.q() as usize {
            let next = powers[e - 1].mul(&repl)?;
            powers.push(next);
        }
        let mut out = Self::zero(f, n);
        for (m, &c) in &self.terms {
            let e = m.exponents()[var] as usize;
            let rest = m.without(var);
            for (mr, &cr) in &powers[e].terms {
                out.add_term(rest.mul(mr, f.q()), f.mul(c, cr));
            }
        }
        Ok(out)
    }

    /// Same polynomial viewed in a larger ring, variable `i` mapped to `map[i]`.
    pub fn embed(&self, n_vars: usize, map: &[usize]) -> MultiPoly {
        assert_eq!(map.len(), self.n_vars);
        let mut out = Self::zero(self.field, n_vars);
        for (m, &c) in &self.terms {
            let mut e = vec![0u8; n_vars];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[map[i]] = x;
            }
            out.add_term(Monomial(e), c);
        }
        out
    }

    pub fn display<'a>(&'a self, names: &'a VarNames) -> impl fmt::Display + 'a {
        text::Display { poly: self, names }
    }

    pub fn parse(text: &str, field: PrimeField, names: &VarNames) -> Result<MultiPoly> {
        text::parse(text, field, names)
    }

    /// Parses text over variables `x1, x2, ...`; arity is `n_vars` or the
    /// largest index mentioned.
    pub fn parse_indexed(text: &str, field: PrimeField, n_vars: Option<usize>) -> Result<MultiPoly> {
        text::parse_indexed(text, field, n_vars)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = VarNames::indexed("x", self.n_vars);
        let shown = self.display(&names).to_string();
        f.write_str(&shown)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn p(text: &str, q: u64, n: usize) -> MultiPoly {
        MultiPoly::parse_indexed(text, f(q), Some(n)).unwrap()
    }

    fn all_points(q: u32, n: usize) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v| {
                    (0..q).map(move |a| {
                        let mut w = v.clone();
                        w.push(a);
                        w
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn arith_examples() {
        let x1 = p("x1", 2, 1);
        assert_eq!(x1.mul(&x1).unwrap(), x1);
        let sum = p("x1 + x2", 2, 2).add(&p("x2", 2, 2)).unwrap();
        assert_eq!(sum, p("x1", 2, 2));
        let prod = p("x1 + 1", 3, 1).mul(&p("x1 + 2", 3, 1)).unwrap();
        assert_eq!(prod, p("x1^2 + 2", 3, 1));
        // pointwise: (a+1)(a+2) == a^2 + 2 over F_3
        for a in 0..3 {
            assert_eq!(prod.eval_raw(&[a]), ((a + 1) * (a + 2)) % 3);
        }
    }

    #[test]
    fn arity_and_field_mismatch() {
        assert!(matches!(
            p("x1", 2, 1).add(&p("x1", 2, 2)),
            Err(Error::Usage(_))
        ));
        assert!(matches!(
            p("x1", 2, 1).mul(&p("x1", 3, 1)),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_examples() {
        let f2 = f(2);
        let poly = p("1 + x1*x2", 2, 2);
        assert_eq!(poly.evaluate(&[f2.one(), f2.one()]).unwrap().value(), 0);
        let q = p("2*x1^2 + x2 + 2", 3, 2);
        let f3 = f(3);
        assert_eq!(q.evaluate(&[f3.zero(), f3.zero()]).unwrap(), q.constant_term());
        let r = p("x1^2 + 2", 3, 1);
        assert_eq!(r.evaluate(&[f3.elem(2)]).unwrap().value(), 0);
        assert!(poly.evaluate(&[f2.one()]).is_err());
        assert!(poly.evaluate(&[f3.one(), f3.one()]).is_err());
    }

    #[test]
    fn degree_examples() {
        let names = VarNames::new(vec!["x2".into(), "y2".into()]);
        let poly = MultiPoly::parse("1 + x2*y2", f(2), &names).unwrap();
        assert_eq!(poly.degree(), 2);
        assert_eq!(MultiPoly::zero(f(2), 3).degree(), 0);
        let f3 = f(3);
        let prod = p("1 - x1^2", 3, 2).mul(&p("1 - x2^2", 3, 2)).unwrap();
        assert_eq!(prod.degree(), 4);
        let _ = f3;
    }

    #[test]
    fn indicator_product_degrees() {
        for q in [2u64, 3, 5] {
            for n in 1..=4 {
                let field = f(q);
                let mut acc = MultiPoly::constant(field, n, 1);
                for i in 0..n {
                    let xi = MultiPoly::var(field, n, i);
                    let factor = MultiPoly::constant(field, n, 1)
                        .sub(&xi.pow(q - 1))
                        .unwrap();
                    acc = acc.mul(&factor).unwrap();
                }
                assert_eq!(acc.degree(), (q as usize - 1) * n, "q={q} n={n}");
            }
        }
    }

    #[test]
    fn substitute_examples() {
        let r = p("1 + x1*x2", 2, 2)
            .substitute(1, &Replacement::Const(1))
            .unwrap();
        assert_eq!(r, p("1 + x1", 2, 1));
        let r = p("x1 + x2", 2, 2)
            .substitute(1, &Replacement::Affine { coeffs: vec![1], constant: 0 })
            .unwrap();
        assert!(r.is_zero());
        let r = p("x1 + x2", 3, 2)
            .substitute(1, &Replacement::Affine { coeffs: vec![2], constant: 1 })
            .unwrap();
        assert_eq!(r, p("1", 3, 1));
        for a in 0..3 {
            assert_eq!(r.eval_raw(&[a]), (a + 2 * a + 1) % 3);
        }
        assert!(p("x1", 2, 1).substitute(1, &Replacement::Const(0)).is_err());
    }

    #[test]
    fn substitute_agrees_pointwise() {
        let poly = p("2*x1^2*x3 + x2*x3^2 + x1*x2 + 1", 3, 3);
        let repl = Replacement::Affine { coeffs: vec![2, 1], constant: 1 };
        let r = poly.substitute(1, &repl).unwrap();
        assert!(r.degree() <= poly.degree());
        for pt in all_points(3, 2) {
            let x2 = (1 + 2 * pt[0] + pt[1]) % 3;
            assert_eq!(r.eval_raw(&pt), poly.eval_raw(&[pt[0], x2, pt[1]]));
        }
    }

    #[test]
    fn monomial_order_is_graded() {
        let poly = p("x2^2 + x1*x2 + x1^2 + x2 + x1 + 1", 3, 2);
        let order: Vec<String> = poly
            .terms()
            .map(|(m, _)| format!("{:?}", m.exponents()))
            .collect();
        assert_eq!(
            order,
            ["[0, 0]", "[1, 0]", "[0, 1]", "[2, 0]", "[1, 1]", "[0, 2]"]
        );
        assert_eq!(poly.to_string(), "1 + x1 + x2 + x1^2 + x1*x2 + x2^2");
    }

    #[test]
    fn embed_remaps_variables() {
        let poly = p("x1*x2 + 1", 2, 2);
        let e = poly.embed(4, &[1, 3]);
        assert_eq!(e, p("x2*x4 + 1", 2, 4));
    }
}
