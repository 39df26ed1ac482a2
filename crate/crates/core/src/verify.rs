//! Batch sweeps over polynomials and circuits that check the density bound,
//! the reduction traces and the translation degree bounds.

use std::sync::Arc;

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::CoordAlgebra;
use crate::circuit::{random_circuit, Circuit};
use crate::error::{Error, Limits, Result};
use crate::gf::PrimeField;
use crate::poly::{classify_count, interpolate, preimage_histogram, preimage_reduction, DensityCheck, MultiPoly};
use crate::translate::{circuit_to_system, combine, verify_translation};

/// A random polynomial in normal form: half the time the interpolation of a
/// uniform value table, otherwise a sum of up to four random terms.
pub fn random_poly(field: PrimeField, n: usize, rng: &mut impl Rng) -> MultiPoly {
    let q = field.q();
    if rng.random_bool(0.5) {
        let size = (q as usize).pow(n as u32);
        let table: Vec<u32> = (0..size).map(|_| rng.random_range(0..q)).collect();
        return interpolate(field, n, &table, Limits::default()).expect("small table");
    }
    let terms = rng.random_range(1..=4);
    let mut p = MultiPoly::zero(field, n);
    for _ in 0..terms {
        let exps: Vec<u64> = (0..n).map(|_| rng.random_range(0..q) as u64).collect();
        let t = MultiPoly::from_terms(field, n, [(exps, rng.random_range(1..q) as u64)]).expect("valid term");
        p = p.add(&t).expect("same ring");
    }
    p
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DensitySweep {
    pub polynomials: u64,
    /// (polynomial, y) pairs with a nonempty preimage.
    pub checked: u64,
    pub vacuous: u64,
    pub violations: Vec<String>,
}

impl DensitySweep {
    fn record(&mut self, p: &MultiPoly, limits: Limits) -> Result<()> {
        self.polynomials += 1;
        for (y, &count) in preimage_histogram(p, limits)?.iter().enumerate() {
            match classify_count(p, count) {
                DensityCheck::Vacuous => self.vacuous += 1,
                DensityCheck::Holds { .. } => self.checked += 1,
                DensityCheck::Violation { count, bound } => {
                    self.checked += 1;
                    self.violations.push(format!("{p} = {y}: preimage {count} < {bound}"));
                }
            }
        }
        Ok(())
    }
}

fn all_tables(q: u32, n: usize, limits: Limits) -> Result<(usize, u64)> {
    let size = limits.check_space(q as u64, n)? as usize;
    let count = limits.check_space(q as u64, size)?;
    Ok((size, count))
}

fn table_of(mut idx: u64, q: u32, size: usize) -> Vec<u32> {
    let mut t = vec![0; size];
    for slot in t.iter_mut() {
        *slot = (idx % q as u64) as u32;
        idx /= q as u64;
    }
    t
}

/// Every function `F_q^n -> F_q`, through its normal-form polynomial.
pub fn density_exhaustive(q: u64, n: usize, limits: Limits) -> Result<DensitySweep> {
    let field = PrimeField::new(q)?;
    let (size, count) = all_tables(field.q(), n, limits)?;
    let mut sweep = DensitySweep::default();
    for idx in 0..count {
        let p = interpolate(field, n, &table_of(idx, field.q(), size), limits)?;
        sweep.record(&p, limits)?;
    }
    Ok(sweep)
}

/// `count` random polynomials with `1..=n_max` variables.
pub fn density_random(q: u64, n_max: usize, count: u64, seed: u64, limits: Limits) -> Result<DensitySweep> {
    let field = PrimeField::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = DensitySweep::default();
    for _ in 0..count {
        let n = rng.random_range(1..=n_max.max(1));
        let p = random_poly(field, n, &mut rng);
        sweep.record(&p, limits)?;
    }
    Ok(sweep)
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ReductionSweep {
    pub traces: u64,
    pub constant_steps: u64,
    pub affine_steps: u64,
    pub max_l: usize,
    pub violations: Vec<String>,
}

impl ReductionSweep {
    fn record(&mut self, p: &MultiPoly, y: u32, limits: Limits) -> Result<()> {
        let trace = preimage_reduction(p, p.field().elem(y as u64), limits)?;
        self.traces += 1;
        self.constant_steps += trace.l1 as u64;
        self.affine_steps += trace.l2 as u64;
        self.max_l = self.max_l.max(trace.l);
        for v in trace.violations() {
            self.violations.push(format!("{p} = {y}: {v}"));
        }
        Ok(())
    }
}

/// Reduction traces for every non-constant function of `n` variables and
/// every attained value.
pub fn reduction_exhaustive(q: u64, n: usize, limits: Limits) -> Result<ReductionSweep> {
    let field = PrimeField::new(q)?;
    let (size, count) = all_tables(field.q(), n, limits)?;
    let mut sweep = ReductionSweep::default();
    for idx in 0..count {
        let table = table_of(idx, field.q(), size);
        let p = interpolate(field, n, &table, limits)?;
        if p.as_constant().is_some() {
            continue;
        }
        for y in 0..field.q() {
            if table.contains(&y) {
                sweep.record(&p, y, limits)?;
            }
        }
    }
    Ok(sweep)
}

/// `count` random non-constant polynomials with `1..=n_max` variables, each
/// paired with a uniformly chosen attained value.
pub fn reduction_random(q: u64, n_max: usize, count: u64, seed: u64, limits: Limits) -> Result<ReductionSweep> {
    let field = PrimeField::new(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = ReductionSweep::default();
    while sweep.traces < count {
        let n = rng.random_range(1..=n_max.max(1));
        let p = random_poly(field, n, &mut rng);
        if p.as_constant().is_some() {
            continue;
        }
        let attained: Vec<u32> = preimage_histogram(&p, limits)?
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(y, _)| y as u32)
            .collect();
        let y = attained[rng.random_range(0..attained.len())];
        sweep.record(&p, y, limits)?;
    }
    Ok(sweep)
}

/// Seeded circuits with `n_inputs` inputs and between `n_inputs + 2` and
/// `max_gates` gates; circuit `i` uses seed `seed + i`.
pub fn random_corpus(alg: &Arc<CoordAlgebra>, n_inputs: usize, max_gates: usize, count: usize, seed: u64) -> Result<Vec<Circuit>> {
    let lo = n_inputs + 2;
    if max_gates < lo {
        return Err(Error::Usage(format!("max_gates must be at least {lo}")));
    }
    (0..count)
        .map(|i| {
            let s = seed.wrapping_add(i as u64);
            let k = lo + (s as usize % (max_gates - lo + 1));
            random_circuit(alg.clone(), n_inputs, k, s)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSweep {
    pub circuits: u64,
    pub max_deg_f: usize,
    pub max_aggregate: BigUint,
    pub refined: BigUint,
    pub coarse: BigUint,
    pub aggregate_bound: BigUint,
    pub violations: Vec<String>,
}

/// Translates every circuit, checks the iff exhaustively and compares the
/// degrees against both bounds and the per-level aggregate.
pub fn degree_sweep(circuits: &[Circuit], limits: Limits) -> Result<DegreeSweep> {
    let first = circuits.first().ok_or_else(|| Error::Usage("empty corpus".into()))?;
    let bound = first.algebra().degree_bound();
    let mut sweep = DegreeSweep {
        circuits: 0,
        max_deg_f: 0,
        max_aggregate: BigUint::from(0u32),
        refined: bound.refined,
        coarse: bound.coarse,
        aggregate_bound: BigUint::from(0u32),
        violations: Vec::new(),
    };
    for (i, c) in circuits.iter().enumerate() {
        let f = combine(&circuit_to_system(c, limits)?)?;
        let rep = verify_translation(c, &f, limits)?;
        sweep.circuits += 1;
        sweep.max_deg_f = sweep.max_deg_f.max(rep.deg_f);
        if rep.aggregate > sweep.max_aggregate {
            sweep.max_aggregate = rep.aggregate.clone();
        }
        sweep.aggregate_bound = rep.aggregate_bound.clone();
        for v in rep.violations {
            sweep.violations.push(format!("circuit {i}: {v}"));
        }
    }
    Ok(sweep)
}
