use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{confirm, DChoice, SolverAnswer, Stats, Status};
use crate::algebra::CoordAlgebra;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloConfig {
    pub epsilon: f64,
    pub seed: u64,
    pub max_trials: u64,
    pub d_choice: DChoice,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig {
            epsilon: 0.01,
            seed: 0,
            max_trials: 1 << 32,
            d_choice: DChoice::Refined,
        }
    }
}

impl MonteCarloConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Usage(format!("epsilon must lie in (0,1), got {}", self.epsilon)));
        }
        if self.max_trials == 0 {
            return Err(Error::Usage("max_trials must be at least 1".into()));
        }
        Ok(())
    }
}

/// Per-trial success probability `c = q^exponent`, `exponent = -(d + q·log2 q)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Density {
    pub q: u32,
    pub d: BigUint,
    pub exponent: f64,
    /// `q^exponent`; underflows to 0 for very large `d`.
    pub value: f64,
}

impl Density {
    /// `ln c`, finite even when `value` underflows.
    pub fn ln(&self) -> f64 {
        self.exponent * (self.q as f64).ln()
    }
}

pub fn mc_density_for(q: u32, d: &BigUint) -> Density {
    let qf = q as f64;
    let d_f = d.to_f64().unwrap_or(f64::INFINITY);
    let exponent = -(d_f + qf * qf.log2());
    Density {
        q,
        d: d.clone(),
        exponent,
        value: qf.powf(exponent),
    }
}

pub fn mc_density(alg: &CoordAlgebra, choice: DChoice) -> Density {
    mc_density_for(alg.q(), alg.degree_bound().pick(choice))
}

/// Trials needed so that a `c`-correct sampler misses with probability at
/// most `epsilon`: `ceil(ln(1/epsilon)/c)`, and 1 when `c >= 1`.
pub fn mc_trials(c: f64, epsilon: f64) -> Result<u64> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::Usage(format!("density must lie in (0,1], got {c}")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Usage(format!("epsilon must lie in (0,1), got {epsilon}")));
    }
    if c >= 1.0 {
        return Ok(1);
    }
    Ok(((1.0 / epsilon).ln() / c).ceil().max(1.0) as u64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialPlan {
    pub c: Density,
    pub epsilon: f64,
    /// Trials actually run.
    pub trials: u64,
    /// True if the formula asked for more than `max_trials`.
    pub capped: bool,
    /// True if the planned trials exceed `|A|^n`; exhaustive search is then cheaper.
    pub exceeds_space: bool,
}

pub fn mc_plan(c: &Circuit, cfg: &MonteCarloConfig) -> Result<TrialPlan> {
    cfg.validate()?;
    let alg = c.algebra();
    let density = mc_density(alg, cfg.d_choice);
    // work in logs so huge d does not underflow
    let ln_needed = (1.0 / cfg.epsilon).ln().ln() - density.ln();
    let wanted = if ln_needed < 62.0 * std::f64::consts::LN_2 {
        Some(mc_trials(density.value, cfg.epsilon)?)
    } else {
        None
    };
    let (trials, capped) = match wanted {
        Some(n) if n <= cfg.max_trials => (n, false),
        _ => (cfg.max_trials, true),
    };
    let space = (alg.order() as f64).powi(c.n_inputs() as i32);
    let exceeds_space = wanted.is_none_or(|n| n as f64 > space);
    Ok(TrialPlan {
        c: density,
        epsilon: cfg.epsilon,
        trials,
        capped,
        exceeds_space,
    })
}

/// Uniform sampling with a seeded ChaCha8 stream. SAT answers carry a
/// verified witness; otherwise the answer is PROBABLY_UNSAT.
pub fn solve_monte_carlo(c: &Circuit, cfg: &MonteCarloConfig) -> Result<SolverAnswer> {
    let start = Instant::now();
    let plan = mc_plan(c, cfg)?;
    let alg = c.algebra();
    let q = alg.q();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut coords = vec![0u32; c.n_inputs() * alg.h()];
    let mut codes = vec![0u32; c.n_inputs()];
    let mut scratch = Vec::with_capacity(c.size());
    let mut stats = Stats::default();
    for _ in 0..plan.trials {
        stats.trials += 1;
        stats.candidates_checked += 1;
        stats.gate_evals += c.size() as u64;
        for x in coords.iter_mut() {
            *x = rng.random_range(0..q);
        }
        c.codes_from_coords(&coords, &mut codes);
        let (x, y) = c.eval_codes(&codes, &mut scratch);
        if x == y {
            stats.elapsed = start.elapsed();
            let mut ans = confirm(c, &codes, stats)?;
            ans.plan = Some(plan);
            return Ok(ans);
        }
    }
    stats.elapsed = start.elapsed();
    let mut ans = SolverAnswer::new(Status::ProbablyUnsat, None, stats);
    ans.plan = Some(plan);
    Ok(ans)
}
