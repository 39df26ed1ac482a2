//! Preimage counting and the lower bound on the size of nonempty preimages
//! `|f^-1(y)| >= q^(n - deg f - q·log2 q)`, together with the constructive
//! substitution sequence that witnesses it.

use serde::Serialize;

use super::{value_table, MultiPoly, Replacement};
use crate::error::{Error, Limits, Result};
use crate::gf::{FieldElement, PrimeField};

/// Number of points of `F_q^n` mapped to `y`.
pub fn count_preimage(p: &MultiPoly, y: FieldElement, limits: Limits) -> Result<u64> {
    check_field(p, y)?;
    let table = value_table(p, limits)?;
    Ok(table.iter().filter(|&&v| v == y.value()).count() as u64)
}

/// Preimage sizes of every field value at once, indexed by value.
pub fn preimage_histogram(p: &MultiPoly, limits: Limits) -> Result<Vec<u64>> {
    let table = value_table(p, limits)?;
    let mut hist = vec![0u64; p.field().q() as usize];
    for v in table {
        hist[v as usize] += 1;
    }
    Ok(hist)
}

fn check_field(p: &MultiPoly, y: FieldElement) -> Result<()> {
    if y.field() != p.field() {
        return Err(Error::FieldMismatch {
            left: p.field().q(),
            right: y.field().q(),
        });
    }
    Ok(())
}

/// `q^(n - d - q·log2 q)`, kept as the exact pair `(n - d, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DensityBound {
    pub n_minus_d: i64,
    pub q: u32,
}

pub fn density_bound(n: usize, d: usize, q: u32) -> DensityBound {
    DensityBound {
        n_minus_d: n as i64 - d as i64,
        q,
    }
}

impl DensityBound {
    /// `q·log2 q`.
    pub fn penalty(&self) -> f64 {
        self.q as f64 * (self.q as f64).log2()
    }

    /// Exponent of `q` in the bound.
    pub fn exponent(&self) -> f64 {
        self.n_minus_d as f64 - self.penalty()
    }

    pub fn value(&self) -> f64 {
        (self.q as f64).powf(self.exponent())
    }

    /// Whether `count >= q^exponent`.
    ///
    /// Exact for `q = 2` (the exponent is the integer `n - d - 2`); for odd
    /// primes `q·log2 q` is irrational so the comparison has no ties.
    pub fn admits(&self, count: u64) -> bool {
        if count == 0 {
            return false;
        }
        if self.q == 2 {
            let e = self.n_minus_d - 2;
            if e <= 0 {
                return true;
            }
            return e < 64 && count >= 1u64 << e;
        }
        (count as f64).ln() / (self.q as f64).ln() >= self.exponent()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum DensityCheck {
    Holds { count: u64, bound: f64 },
    Vacuous,
    /// The bound failed: an implementation bug, the bound itself is a theorem.
    Violation { count: u64, bound: f64 },
}

pub fn check_density(p: &MultiPoly, y: FieldElement, limits: Limits) -> Result<DensityCheck> {
    let count = count_preimage(p, y, limits)?;
    Ok(classify(p, count))
}

pub(crate) fn classify(p: &MultiPoly, count: u64) -> DensityCheck {
    if count == 0 {
        return DensityCheck::Vacuous;
    }
    let bound = density_bound(p.n_vars(), p.degree(), p.field().q());
    if bound.admits(count) {
        DensityCheck::Holds {
            count,
            bound: bound.value(),
        }
    } else {
        DensityCheck::Violation {
            count,
            bound: bound.value(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    /// Variable fixed to `value`; taken while the preimage is below `q^q`.
    Constant { value: u32 },
    /// Variable solved from `beta·x = rhs`; `independent` are the `q`
    /// linearly independent preimage points found by elimination.
    Affine {
        beta: Vec<u32>,
        rhs: u32,
        independent: Vec<Vec<u32>>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub kind: StepKind,
    /// Index of the eliminated variable in the polynomial before the step.
    pub var: usize,
    /// Index of the eliminated variable in the original polynomial.
    pub original_var: usize,
    pub preimage_before: u64,
    pub preimage_after: u64,
    pub degree_before: usize,
    pub degree_after: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub n_vars: usize,
    pub q: u32,
    pub y: u32,
    pub degree: usize,
    pub initial_preimage: u64,
    pub steps: Vec<ReductionStep>,
    #[serde(skip)]
    pub final_poly: MultiPoly,
    pub final_preimage: u64,
    pub l: usize,
    pub l1: usize,
    pub l2: usize,
}

impl ReductionTrace {
    /// Every property the sequence must have; empty when all hold.
    pub fn violations(&self) -> Vec<String> {
        let q = self.q as u64;
        let mut out = Vec::new();
        let mut prev = self.initial_preimage;
        let mut prev_deg = self.degree;
        for (i, s) in self.steps.iter().enumerate() {
            if s.preimage_before != prev {
                out.push(format!("step {i}: preimage chain broken"));
            }
            if s.preimage_after == 0 {
                out.push(format!("step {i}: preimage became empty"));
            }
            match &s.kind {
                StepKind::Constant { .. } if s.preimage_after * 2 > s.preimage_before => {
                    out.push(format!(
                        "step {i}: constant step {} -> {} does not halve",
                        s.preimage_before, s.preimage_after
                    ))
                }
                StepKind::Affine { .. } if s.preimage_after * q > s.preimage_before => out.push(
                    format!(
                        "step {i}: affine step {} -> {} does not divide by {q}",
                        s.preimage_before, s.preimage_after
                    ),
                ),
                _ => {}
            }
            if s.degree_before != prev_deg || s.degree_after > s.degree_before {
                out.push(format!("step {i}: degree increased"));
            }
            prev = s.preimage_after;
            prev_deg = s.degree_after;
        }
        if self.final_preimage != prev {
            out.push("final preimage does not match the last step".into());
        }
        let arity = self.n_vars - self.l;
        if self.final_poly.n_vars() != arity {
            out.push("final arity is not n - l".into());
        }
        if self.final_preimage != 1 && arity != 1 {
            out.push(format!(
                "not terminal: preimage {} with {arity} variables",
                self.final_preimage
            ));
        }
        if self.l != self.l1 + self.l2 || self.l != self.steps.len() {
            out.push("step counters inconsistent".into());
        }
        let penalty = self.q as f64 * (self.q as f64).log2();
        if self.l1 as f64 > penalty {
            out.push(format!("l1 = {} exceeds q·log2 q = {penalty:.3}", self.l1));
        }
        if self.l2 as f64 > (self.initial_preimage as f64).ln() / (self.q as f64).ln() + 1e-9 {
            out.push(format!("l2 = {} exceeds log_q K", self.l2));
        }
        if self.degree + self.l < self.n_vars {
            out.push(format!(
                "degree {} < n - l = {} - {}",
                self.degree, self.n_vars, self.l
            ));
        }
        out
    }
}

fn preimage_points(p: &MultiPoly, y: u32, limits: Limits) -> Result<Vec<Vec<u32>>> {
    let q = p.field().q() as usize;
    let n = p.n_vars();
    let table = value_table(p, limits)?;
    Ok(table
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == y)
        .map(|(mut idx, _)| {
            let mut pt = vec![0u32; n];
            for slot in pt.iter_mut().rev() {
                *slot = (idx % q) as u32;
                idx /= q;
            }
            pt
        })
        .collect())
}

/// Greedy Gaussian elimination: the first `want` preimage points (in table
/// order) that are linearly independent.
fn independent_points(f: PrimeField, points: &[Vec<u32>], want: usize) -> Vec<Vec<u32>> {
    // rows kept in echelon form with their pivot columns
    let mut echelon: Vec<(usize, Vec<u32>)> = Vec::new();
    let mut chosen = Vec::new();
    for pt in points {
        let mut v = pt.clone();
        for (pivot, row) in &echelon {
            let c = v[*pivot];
            if c != 0 {
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        if let Some(pivot) = v.iter().position(|&x| x != 0) {
            let inv = f.inv(v[pivot]).expect("nonzero pivot");
            for x in v.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for (_, row) in echelon.iter_mut() {
                let c = row[pivot];
                if c != 0 {
                    for (x, &r) in row.iter_mut().zip(&v) {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
            }
            echelon.push((pivot, v));
            chosen.push(pt.clone());
            if chosen.len() == want {
                break;
            }
        }
    }
    chosen
}

/// A solution `beta` of `beta·v_k = k` for the independent points `v_0..v_{q-1}`.
fn dual_vector(f: PrimeField, vs: &[Vec<u32>]) -> Vec<u32> {
    let n = vs[0].len();
    // augmented rows [v_k | k]
    let mut rows: Vec<Vec<u32>> = vs
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mut r = v.clone();
            r.push(k as u32 % f.q());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][col]).expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                let pivot_row = rows[r].clone();
                for (x, pr) in rows[i].iter_mut().zip(pivot_row) {
                    *x = f.sub(*x, f.mul(c, pr));
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let mut beta = vec![0u32; n];
    for (row, &col) in rows.iter().zip(&pivots) {
        beta[col] = row[n];
    }
    beta
}

fn dot(f: PrimeField, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

fn surjective_on(f: PrimeField, beta: &[u32], points: &[Vec<u32>]) -> bool {
    let mut seen = vec![false; f.q() as usize];
    let mut left = f.q();
    for pt in points {
        let v = dot(f, beta, pt) as usize;
        if !seen[v] {
            seen[v] = true;
            left -= 1;
            if left == 0 {
                return true;
            }
        }
    }
    false
}

/// Lexicographically smallest nonzero `beta` (first coordinate most
/// significant) whose linear form takes every value on `points`, searched up
/// to the elimination witness `limit`, which is known to qualify.
fn smallest_surjective(f: PrimeField, points: &[Vec<u32>], limit: &[u32]) -> Vec<u32> {
    let n = limit.len();
    let q = f.q();
    let mut beta = vec![0u32; n];
    loop {
        // increment as a base-q counter, last coordinate fastest
        let mut i = n;
        while i > 0 {
            i -= 1;
            beta[i] += 1;
            if beta[i] < q {
                break;
            }
            beta[i] = 0;
        }
        if surjective_on(f, &beta, points) || beta.as_slice() == limit {
            return beta;
        }
    }
}

/// Builds the substitution sequence `f_0 = p, f_1, ..., f_l` that shrinks the
/// preimage of `y` until it is a singleton or one variable remains.
///
/// Below `q^q` preimage points a variable is fixed to the constant leaving
/// the smallest nonempty preimage; at or above it, a variable is solved from
/// a linear form `beta·x = b` that is onto on the preimage, with `b` again
/// chosen to minimise the preimage. Ties go to the smallest residue.
pub fn preimage_reduction(p: &MultiPoly, y: FieldElement, limits: Limits) -> Result<ReductionTrace> {
    check_field(p, y)?;
    if p.as_constant().is_some() {
        return Err(Error::Domain(
            "preimage reduction needs a non-constant polynomial".into(),
        ));
    }
    let f = p.field();
    let q = f.q() as usize;
    let y = y.value();
    let mut points = preimage_points(p, y, limits)?;
    if points.is_empty() {
        return Err(Error::Domain(format!("value {y} is not attained")));
    }
    let initial = points.len() as u64;
    let threshold = (q as u64).pow(q as u32);
    let mut cur = p.clone();
    let mut original: Vec<usize> = (0..p.n_vars()).collect();
    let mut steps = Vec::new();
    let (mut l1, mut l2) = (0, 0);

    while cur.n_vars() > 1 && points.len() > 1 {
        let before = points.len() as u64;
        let n = cur.n_vars();
        let (var, replacement, kind) = if before < threshold {
            let var = (0..n)
                .rev()
                .find(|&j| points.iter().any(|pt| pt[j] != points[0][j]))
                .expect("distinct preimage points differ somewhere");
            let mut classes = vec![0u64; q];
            for pt in &points {
                classes[pt[var] as usize] += 1;
            }
            let value = argmin_nonzero(&classes);
            l1 += 1;
            (var, Replacement::Const(value), StepKind::Constant { value })
        } else {
            let independent = independent_points(f, &points, q);
            debug_assert_eq!(independent.len(), q);
            let witness = dual_vector(f, &independent);
            let beta = smallest_surjective(f, &points, &witness);
            let var = (0..n).rev().find(|&j| beta[j] != 0).expect("beta is nonzero");
            let mut classes = vec![0u64; q];
            for pt in &points {
                classes[dot(f, &beta, pt) as usize] += 1;
            }
            let rhs = argmin_nonzero(&classes);
            // x_var = beta_var^-1 (rhs - Σ_{j≠var} beta_j x_j)
            let inv = f.inv(beta[var]).expect("nonzero");
            let coeffs = (0..n)
                .filter(|&j| j != var)
                .map(|j| f.neg(f.mul(inv, beta[j])))
                .collect();
            let replacement = Replacement::Affine {
                coeffs,
                constant: f.mul(inv, rhs),
            };
            l2 += 1;
            (
                var,
                replacement,
                StepKind::Affine {
                    beta,
                    rhs,
                    independent,
                },
            )
        };
        let next = cur.substitute(var, &replacement)?;
        points = preimage_points(&next, y, limits)?;
        steps.push(ReductionStep {
            kind,
            var,
            original_var: original.remove(var),
            preimage_before: before,
            preimage_after: points.len() as u64,
            degree_before: cur.degree(),
            degree_after: next.degree(),
        });
        cur = next;
        if points.is_empty() {
            break;
        }
    }

    let l = steps.len();
    Ok(ReductionTrace {
        n_vars: p.n_vars(),
        q: f.q(),
        y,
        degree: p.degree(),
        initial_preimage: initial,
        steps,
        final_preimage: points.len() as u64,
        final_poly: cur,
        l,
        l1,
        l2,
    })
}

fn argmin_nonzero(classes: &[u64]) -> u32 {
    classes
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .min_by_key(|(i, &c)| (c, *i))
        .map(|(i, _)| i as u32)
        .expect("at least one class is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::VarNames;

    fn f(q: u64) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn p(text: &str, q: u64, n: usize) -> MultiPoly {
        MultiPoly::parse_indexed(text, f(q), Some(n)).unwrap()
    }

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn count_examples() {
        let f2 = f(2);
        assert_eq!(count_preimage(&p("x1*x2", 2, 2), f2.one(), lim()).unwrap(), 1);
        assert_eq!(count_preimage(&p("x1 + x2", 2, 2), f2.zero(), lim()).unwrap(), 2);
        let names = VarNames::coordinates(2, 2);
        let g = MultiPoly::parse("1 + x2*y2", f2, &names).unwrap();
        // brute force over all 16 points
        let mut brute = 0;
        for a in 0..16u32 {
            let pt: Vec<u32> = (0..4).map(|i| (a >> (3 - i)) & 1).collect();
            if (1 + pt[1] * pt[3]) % 2 == 1 {
                brute += 1;
            }
        }
        assert_eq!(brute, 12);
        assert_eq!(count_preimage(&g, f2.one(), lim()).unwrap(), 12);
        assert!(matches!(
            count_preimage(&g, f2.one(), Limits::new(8)),
            Err(Error::LimitExceeded { .. })
        ));
        assert!(count_preimage(&g, f(3).one(), lim()).is_err());
        assert_eq!(preimage_histogram(&g, lim()).unwrap(), vec![4, 12]);
    }

    #[test]
    fn bound_examples() {
        let b = density_bound(4, 2, 2);
        assert_eq!(b.exponent(), 0.0);
        assert_eq!(b.value(), 1.0);
        let b = density_bound(3, 3, 2);
        assert_eq!(b.exponent(), -2.0);
        assert_eq!(b.value(), 0.25);
        let b = density_bound(2, 1, 2);
        assert_eq!(b.exponent(), -1.0);
        assert_eq!(b.value(), 0.5);
        assert!(!b.admits(0));
        assert!(b.admits(1));
        let b = density_bound(6, 0, 2);
        assert!(b.admits(16) && !b.admits(15));
        let b3 = density_bound(8, 0, 3);
        // exponent 8 - 3·log2 3 ≈ 3.245, 3^3.245 ≈ 35.3
        assert!(b3.admits(36) && !b3.admits(35));
    }

    #[test]
    fn check_examples() {
        let f2 = f(2);
        assert!(matches!(
            check_density(&p("x1*x2*x3", 2, 3), f2.one(), lim()).unwrap(),
            DensityCheck::Holds { count: 1, .. }
        ));
        assert!(matches!(
            check_density(&p("x1 + 1", 2, 1), f2.zero(), lim()).unwrap(),
            DensityCheck::Holds { count: 1, .. }
        ));
        assert_eq!(
            check_density(&MultiPoly::zero(f2, 2), f2.one(), lim()).unwrap(),
            DensityCheck::Vacuous
        );
    }

    #[test]
    fn reduction_examples() {
        let f2 = f(2);
        let t = preimage_reduction(&p("x1*x2", 2, 2), f2.one(), lim()).unwrap();
        assert_eq!((t.l, t.l1, t.l2), (0, 0, 0));
        assert!(t.violations().is_empty());
        assert!(t.degree >= 2);

        let t = preimage_reduction(&p("x1 + x2", 2, 2), f2.zero(), lim()).unwrap();
        assert_eq!((t.l, t.l1, t.l2), (1, 1, 0));
        assert_eq!(t.initial_preimage, 2);
        assert_eq!(t.final_preimage, 1);
        // preimage {(0,0),(1,1)}: x2 differs; both classes have size 1, value 0 wins
        assert_eq!(t.steps[0].var, 1);
        assert_eq!(t.steps[0].kind, StepKind::Constant { value: 0 });
        assert!(t.violations().is_empty());

        let t = preimage_reduction(&p("x1", 2, 1), f2.one(), lim()).unwrap();
        assert_eq!(t.l, 0);
        assert!(t.violations().is_empty());
    }

    #[test]
    fn reduction_preconditions() {
        let f2 = f(2);
        assert!(matches!(
            preimage_reduction(&p("1", 2, 2), f2.one(), lim()),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            preimage_reduction(&p("x1*x2 + x1*x2 + 1", 2, 2), f2.zero(), lim()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn affine_step_on_large_preimage() {
        // x1*x2*x3*x4 = 0 over F_2 has 15 preimage points >= 2^2
        let f2 = f(2);
        let poly = p("x1*x2*x3*x4", 2, 4);
        let t = preimage_reduction(&poly, f2.zero(), lim()).unwrap();
        assert!(t.l2 >= 1, "{t:?}");
        match &t.steps[0].kind {
            StepKind::Affine { beta, independent, .. } => {
                assert_eq!(independent.len(), 2);
                // (0,0,0,1) is onto on the preimage
                assert_eq!(beta, &vec![0, 0, 0, 1]);
            }
            other => panic!("expected affine step, got {other:?}"),
        }
        assert!(t.violations().is_empty(), "{:?}", t.violations());
        // every step's preimage agrees with an independent count on the final polynomial
        assert_eq!(count_preimage(&t.final_poly, f2.zero(), lim()).unwrap(), t.final_preimage);
    }

    #[test]
    fn dual_vector_solves_targets() {
        let f3 = f(3);
        let vs = vec![vec![1, 0, 2], vec![0, 1, 1], vec![1, 1, 0], vec![1, 1, 1]];
        let ind = independent_points(f3, &vs, 3);
        assert_eq!(ind.len(), 3);
        let beta = dual_vector(f3, &ind);
        for (k, v) in ind.iter().enumerate() {
            assert_eq!(dot(f3, &beta, v), k as u32);
        }
    }

    #[test]
    fn exhaustive_f2_three_vars() {
        let f2 = f(2);
        for code in 0u32..256 {
            let table: Vec<u32> = (0..8).map(|i| (code >> i) & 1).collect();
            let poly = crate::poly::interpolate(f2, 3, &table, lim()).unwrap();
            for y in f2.elements() {
                let c = check_density(&poly, y, lim()).unwrap();
                assert!(!matches!(c, DensityCheck::Violation { .. }), "{poly} {y}");
                if poly.as_constant().is_none() && matches!(c, DensityCheck::Holds { .. }) {
                    let t = preimage_reduction(&poly, y, lim()).unwrap();
                    assert!(t.violations().is_empty(), "{poly} y={y}: {:?}", t.violations());
                }
            }
        }
    }
}
