//! From circuits over an algebra to polynomial equations over `F_q`, and the
//! reverse encoding of field equations into the example algebras `A[h, m]`.

use std::sync::Arc;

use num_bigint::BigUint;
use serde::Serialize;

use crate::algebra::{build_example, CoordAlgebra};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Limits, Result};
use crate::gf::PrimeField;
use crate::poly::{interpolate, value_table, MultiPoly, VarNames};

/// Variable names for a circuit's coordinates: `x1..xh, y1..yh, ...`.
pub fn coordinate_names(c: &Circuit) -> VarNames {
    VarNames::coordinates(c.n_inputs(), c.algebra().h())
}

/// One polynomial per output coordinate `k`: the interpolation of
/// `π_k(g1) - π_k(g2)` over the `n·h` input coordinates.
pub fn circuit_to_system(c: &Circuit, limits: Limits) -> Result<Vec<MultiPoly>> {
    let alg = c.algebra();
    let h = alg.h();
    let q = alg.q();
    let f = alg.field();
    let n_vars = c.n_inputs() * h;
    let size = limits.check_space(q as u64, n_vars)? as usize;
    let order = alg.order();
    let mut tables = vec![vec![0u32; size]; h];
    let mut codes = vec![0u32; c.n_inputs()];
    let mut scratch = Vec::with_capacity(c.size());
    // the point index read in base |A| gives the input codes, first input most significant
    for t in 0..size {
        let (x, y) = c.eval_codes(&codes, &mut scratch);
        let (x, y) = (alg.decode(x), alg.decode(y));
        for k in 0..h {
            tables[k][t] = f.sub(x.coords()[k], y.coords()[k]);
        }
        for slot in codes.iter_mut().rev() {
            *slot += 1;
            if *slot < order {
                break;
            }
            *slot = 0;
        }
    }
    tables
        .iter()
        .map(|t| interpolate(f, n_vars, t, limits))
        .collect()
}

/// `f = Π (1 - p_i^(q-1))`: 1 exactly on the common zeros of the system.
pub fn combine(system: &[MultiPoly]) -> Result<MultiPoly> {
    let first = system
        .first()
        .ok_or_else(|| Error::usage("cannot combine an empty system"))?;
    let field = first.field();
    let n = first.n_vars();
    let one = MultiPoly::constant(field, n, 1);
    let mut f = one.clone();
    for p in system {
        let factor = one.sub(&p.pow(field.q() as u64 - 1))?;
        f = f.mul(&factor)?;
    }
    Ok(f)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationReport {
    pub assignments: u64,
    /// Assignments where `f = 1` and circuit satisfaction disagree.
    pub mismatches: u64,
    /// Points where `f` is neither 0 nor 1.
    pub non_boolean: u64,
    pub deg_f: usize,
    pub refined: BigUint,
    pub coarse: BigUint,
    /// Largest degree of a system polynomial within each level.
    pub level_degrees: Vec<usize>,
    /// `Σ α_i · d_i`.
    pub aggregate: BigUint,
    /// `(m·q)^(h - α_s) · α_s`.
    pub aggregate_bound: BigUint,
    pub violations: Vec<String>,
}

impl TranslationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively checks that `f(coords(a)) = 1` iff `a` satisfies `c`, and
/// that `deg f` and the per-level degrees respect the bounds.
pub fn verify_translation(c: &Circuit, f: &MultiPoly, limits: Limits) -> Result<TranslationReport> {
    let alg = c.algebra();
    let h = alg.h();
    if f.n_vars() != c.n_inputs() * h || f.field() != alg.field() {
        return Err(Error::usage("polynomial does not match the circuit's coordinates"));
    }
    let values = value_table(f, limits)?;
    let order = alg.order();
    let mut codes = vec![0u32; c.n_inputs()];
    let mut scratch = Vec::with_capacity(c.size());
    let (mut mismatches, mut non_boolean) = (0, 0);
    for &v in &values {
        let (x, y) = c.eval_codes(&codes, &mut scratch);
        if v > 1 {
            non_boolean += 1;
        }
        if (v == 1) != (x == y) {
            mismatches += 1;
        }
        for slot in codes.iter_mut().rev() {
            *slot += 1;
            if *slot < order {
                break;
            }
            *slot = 0;
        }
    }

    let system = circuit_to_system(c, limits)?;
    let coord = alg.coordinatization();
    let level_degrees: Vec<usize> = (0..coord.s())
        .map(|j| coord.level_range(j).map(|k| system[k].degree()).max().unwrap_or(0))
        .collect();
    let aggregate: BigUint = coord
        .alphas()
        .iter()
        .zip(&level_degrees)
        .map(|(&a, &d)| BigUint::from(a * d))
        .sum();
    let mq = BigUint::from(alg.max_arity() as u64 * alg.q() as u64);
    let alpha_s = *coord.alphas().last().expect("at least one level");
    let aggregate_bound = mq.pow((h - alpha_s) as u32) * BigUint::from(alpha_s);
    let bound = alg.degree_bound();
    let deg_f = f.degree();

    let mut violations = Vec::new();
    if mismatches > 0 {
        violations.push(format!("{mismatches} assignments where f = 1 disagrees with the circuit"));
    }
    if non_boolean > 0 {
        violations.push(format!("f takes values outside {{0,1}} at {non_boolean} points"));
    }
    if BigUint::from(deg_f) > bound.refined {
        violations.push(format!("deg f = {deg_f} exceeds the refined bound {}", bound.refined));
    }
    if bound.refined > bound.coarse {
        violations.push(format!("refined bound {} exceeds coarse bound {}", bound.refined, bound.coarse));
    }
    if aggregate > aggregate_bound {
        violations.push(format!("level aggregate {aggregate} exceeds {aggregate_bound}"));
    }
    Ok(TranslationReport {
        assignments: values.len() as u64,
        mismatches,
        non_boolean,
        deg_f,
        refined: bound.refined,
        coarse: bound.coarse,
        level_degrees,
        aggregate,
        aggregate_bound,
        violations,
    })
}

/// Parses `lhs = rhs` over `x1, x2, ...`. A constant right side is `y`;
/// otherwise the equation is read as `lhs - rhs = 0`.
pub fn parse_field_equation(text: &str, field: PrimeField) -> Result<(MultiPoly, u32)> {
    let (lhs, rhs) = text
        .split_once('=')
        .ok_or_else(|| Error::usage(format!("expected an equation 'p = y', got '{text}'")))?;
    let n = MultiPoly::parse_indexed(lhs, field, None)?
        .n_vars()
        .max(MultiPoly::parse_indexed(rhs, field, None)?.n_vars());
    let l = MultiPoly::parse_indexed(lhs, field, Some(n))?;
    let r = MultiPoly::parse_indexed(rhs, field, Some(n))?;
    Ok(match r.as_constant() {
        Some(y) => (l, y),
        None => (l.sub(&r)?, 0),
    })
}

/// Encodes `p(x) = y` over `F_q` as a circuit over `A[h, m]`. Variable `x_i`
/// is read from the bottom coordinate of input `i`; each monomial becomes a
/// tree of `p`-gates of depth `T` (the least `t` with `m^t >= deg p`), so the
/// sum lands in coordinate `h - T` where it is compared with `y`.
pub fn encode_field_equation(p: &MultiPoly, y: u32, h: usize, m: usize) -> Result<Circuit> {
    let alg = Arc::new(build_example(p.field().q() as u64, h, m)?);
    encode_into(alg, p, y)
}

/// As [`encode_field_equation`], reusing an already built `A[h, m]`.
pub fn encode_into(alg: Arc<CoordAlgebra>, p: &MultiPoly, y: u32) -> Result<Circuit> {
    let q = alg.q();
    let h = alg.h();
    let m = alg.max_arity();
    if p.field() != alg.field() {
        return Err(Error::usage("polynomial and algebra live over different fields"));
    }
    if y >= q {
        return Err(Error::usage(format!("{y} is not an element of F_{q}")));
    }
    let deg = p.degree();
    let cap = (m as u128).checked_pow(h as u32 - 1).unwrap_or(u128::MAX);
    if deg as u128 > cap {
        return Err(Error::Domain(format!(
            "deg too high for this h,m: degree {deg} exceeds m^(h-1) = {cap}"
        )));
    }
    let mut depth = 0;
    while (m as u128).pow(depth as u32) < deg as u128 {
        depth += 1;
    }
    // element with value v at 1-based coordinate k
    let at = |k: usize, v: u32| v * q.pow((h - k) as u32);
    let n = p.n_vars();
    let plus = alg.op_index("+").expect("A[h,m] has +");
    let mut gates: Vec<Gate> = (0..n).map(Gate::Input).collect();
    let push = |gates: &mut Vec<Gate>, g: Gate| {
        gates.push(g);
        gates.len() - 1
    };

    let mut units = vec![None; h + 1];
    let mut summands = Vec::new();
    for (mono, coef) in p.terms() {
        if mono.degree() == 0 {
            summands.push(push(&mut gates, Gate::Const(at(h - depth, coef.value()))));
            continue;
        }
        let mut nodes: Vec<usize> = mono
            .exponents()
            .iter()
            .enumerate()
            .flat_map(|(v, &e)| std::iter::repeat_n(v, e as usize))
            .collect();
        for t in 1..=depth {
            let op = alg.op_index(&format!("p{}", h - t)).expect("A[h,m] has p_i");
            let mut next = Vec::with_capacity(nodes.len().div_ceil(m));
            for chunk in nodes.chunks(m) {
                let mut args = chunk.to_vec();
                if args.len() < m {
                    let pad = *units[h - t + 1]
                        .get_or_insert_with(|| push(&mut gates, Gate::Const(at(h - t + 1, 1))));
                    args.resize(m, pad);
                }
                next.push(push(&mut gates, Gate::Apply { op, args }));
            }
            nodes = next;
        }
        debug_assert_eq!(nodes.len(), 1);
        summands.extend(std::iter::repeat_n(nodes[0], coef.value() as usize));
    }
    let lhs = match summands.split_first() {
        None => push(&mut gates, Gate::Const(0)),
        Some((&first, rest)) => rest.iter().fold(first, |acc, &s| {
            push(&mut gates, Gate::Apply { op: plus, args: vec![acc, s] })
        }),
    };
    let rhs = push(&mut gates, Gate::Const(at(h - depth, y)));
    Circuit::from_gates(alg, n, gates, [lhs, rhs])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_circuit, random_circuit, Assignment};
    use crate::solve::{solve_brute, SolveOptions};

    fn a22() -> Arc<CoordAlgebra> {
        Arc::new(build_example(2, 2, 2).unwrap())
    }

    fn show(c: &Circuit, p: &MultiPoly) -> String {
        p.display(&coordinate_names(c)).to_string()
    }

    #[test]
    fn equations_parse() {
        let f2 = PrimeField::new(2).unwrap();
        let (p, y) = parse_field_equation("x1*x2 = 1", f2).unwrap();
        assert_eq!((p.to_string().as_str(), y), ("x1*x2", 1));
        let (p, y) = parse_field_equation("x1 = x3", f2).unwrap();
        assert_eq!((p.to_string().as_str(), p.n_vars(), y), ("x1 + x3", 3, 0));
        let (p, y) = parse_field_equation("0 = 0", f2).unwrap();
        assert_eq!((p.n_vars(), y), (0, 0));
        assert!(parse_field_equation("x1", f2).is_err());
    }

    #[test]
    fn system_examples() {
        let c = parse_circuit("inputs 2\ng3 = p1 g1 g2\ng4 = const 00\noutput g3 g4\n", a22()).unwrap();
        let sys = circuit_to_system(&c, Limits::default()).unwrap();
        assert_eq!(show(&c, &sys[0]), "x2*y2");
        assert!(sys[1].is_zero());
        let f = combine(&sys).unwrap();
        assert_eq!(show(&c, &f), "1 + x2*y2");
        assert_eq!(f.degree(), 2);
        let rep = verify_translation(&c, &f, Limits::default()).unwrap();
        assert!(rep.is_ok(), "{:?}", rep.violations);
        assert_eq!(rep.level_degrees, [2, 0]);
        assert_eq!(rep.aggregate, BigUint::from(2u32));
        assert_eq!(rep.aggregate_bound, BigUint::from(4u32));
        assert_eq!((rep.refined.clone(), rep.coarse.clone()), (BigUint::from(4u32), BigUint::from(16u32)));

        let id = parse_circuit("inputs 1\noutput g1 g1\n", a22()).unwrap();
        let sys = circuit_to_system(&id, Limits::default()).unwrap();
        assert!(sys.iter().all(|p| p.is_zero()));
        let f = combine(&sys).unwrap();
        assert_eq!(f.as_constant(), Some(1));
        assert!(verify_translation(&id, &f, Limits::default()).unwrap().is_ok());

        let bad = parse_circuit("inputs 1\ng2 = const 10\ng3 = const 00\noutput g2 g3\n", a22()).unwrap();
        let sys = circuit_to_system(&bad, Limits::default()).unwrap();
        assert_eq!(sys[0].as_constant(), Some(1));
        assert_eq!(combine(&sys).unwrap().as_constant(), Some(0));
    }

    #[test]
    fn wrong_f_is_caught() {
        let c = parse_circuit("inputs 2\ng3 = p1 g1 g2\ng4 = const 00\noutput g3 g4\n", a22()).unwrap();
        let f = MultiPoly::constant(PrimeField::new(2).unwrap(), 4, 1);
        let rep = verify_translation(&c, &f, Limits::default()).unwrap();
        assert_eq!(rep.mismatches, 4);
        assert!(!rep.is_ok());
    }

    #[test]
    fn random_circuits_translate() {
        let alg = Arc::new(build_example(3, 2, 2).unwrap());
        for seed in 0..30 {
            let c = random_circuit(alg.clone(), 2, 8, seed).unwrap();
            let f = combine(&circuit_to_system(&c, Limits::default()).unwrap()).unwrap();
            let rep = verify_translation(&c, &f, Limits::default()).unwrap();
            assert!(rep.is_ok(), "{:?}", rep.violations);
        }
    }

    fn field_sat(p: &MultiPoly, y: u32) -> bool {
        value_table(p, Limits::default()).unwrap().contains(&y)
    }

    #[test]
    fn encode_examples() {
        let f2 = PrimeField::new(2).unwrap();
        let names = VarNames::indexed("x", 2);
        let prod = MultiPoly::parse("x1*x2", f2, &names).unwrap();
        let c = encode_field_equation(&prod, 1, 2, 2).unwrap();
        assert_eq!(c.to_text(), "CIRCUIT v1\ninputs 2\ng3 = p1 g1 g2\ng4 = const 10\noutput g3 g4\n");
        let alg = c.algebra().clone();
        let sat: Vec<Vec<String>> = alg
            .elements()
            .flat_map(|x| alg.elements().map(move |y| (x.clone(), y)))
            .map(|(x, y)| Assignment(vec![x, y]))
            .filter(|a| c.check(a).unwrap())
            .map(|a| c.format_assignment(&a))
            .collect();
        assert!(sat.iter().all(|a| a.iter().all(|s| s.ends_with('1'))));
        assert_eq!(sat.len(), 4);

        let zero = MultiPoly::zero(f2, 0);
        let c = encode_field_equation(&zero, 0, 2, 2).unwrap();
        assert_eq!(c.to_text(), "CIRCUIT v1\ninputs 0\ng1 = const 00\ng2 = const 00\noutput g1 g2\n");

        let sum = MultiPoly::parse("x1 + x2", f2, &names).unwrap();
        let c = encode_field_equation(&sum, 1, 2, 2).unwrap();
        assert_eq!(c.to_text(), "CIRCUIT v1\ninputs 2\ng3 = + g1 g2\ng4 = const 01\noutput g3 g4\n");
        for x in alg.elements() {
            for y in alg.elements() {
                let ok = c.check(&Assignment(vec![x.clone(), y.clone()])).unwrap();
                let bottom = x.coords()[1] != y.coords()[1];
                let top = x.coords()[0] == y.coords()[0];
                assert_eq!(ok, bottom && top);
            }
        }

        let cube = MultiPoly::parse("x1*x2 + x1", f2, &VarNames::indexed("x", 2)).unwrap();
        assert!(encode_field_equation(&cube, 1, 2, 2).is_ok());
        let deg3 = MultiPoly::parse("x1*x2*x3", f2, &VarNames::indexed("x", 3)).unwrap();
        let err = encode_field_equation(&deg3, 1, 2, 2).unwrap_err();
        assert!(matches!(err, Error::Domain(_)) && err.to_string().contains("deg too high"));
        assert!(encode_field_equation(&deg3, 1, 3, 2).is_ok());
    }

    #[test]
    fn encoding_agrees_with_field_solving() {
        let f3 = PrimeField::new(3).unwrap();
        let names = VarNames::indexed("x", 2);
        let opts = SolveOptions::default();
        for text in ["x1^2 + 2*x2", "x1*x2 + 1", "2*x1^2*x2 + x2", "x1^2*x2^2", "2"] {
            let p = MultiPoly::parse(text, f3, &names).unwrap();
            for y in 0..3 {
                let c = encode_field_equation(&p, y, 3, 2).unwrap();
                let ans = solve_brute(&c, &opts).unwrap();
                assert_eq!(ans.is_sat(), field_sat(&p, y), "{text} = {y}");
                if let Some(w) = ans.witness {
                    let point: Vec<u32> = w.0.iter().map(|e| *e.coords().last().unwrap()).collect();
                    assert_eq!(p.eval_raw(&point), y);
                }
            }
        }
    }
}
