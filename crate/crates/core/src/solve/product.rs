use std::time::{Duration, Instant};

use super::{solve_brute, solve_deterministic, solve_monte_carlo, DChoice, MonteCarloConfig, SolveOptions, SolverAnswer, Stats, Status};
use crate::circuit::{ProductAssignment, ProductCircuit};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Brute,
    Hitting(DChoice),
    MonteCarlo(MonteCarloConfig),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductAnswer {
    pub status: Status,
    pub witness: Option<ProductAssignment>,
    /// First factor (0-based) that is not SAT.
    pub failing_factor: Option<usize>,
    /// Answers of the factors solved, in order.
    pub factors: Vec<SolverAnswer>,
    pub elapsed: Duration,
}

impl ProductAnswer {
    pub fn stats(&self) -> Stats {
        let mut s = Stats {
            elapsed: self.elapsed,
            ..Stats::default()
        };
        for f in &self.factors {
            s.candidates_checked += f.stats.candidates_checked;
            s.trials += f.stats.trials;
            s.gate_evals += f.stats.gate_evals;
        }
        s
    }
}

/// Solves the projection onto each factor and conjoins the answers.
pub fn solve_product(c: &ProductCircuit, method: Method, opts: &SolveOptions) -> Result<ProductAnswer> {
    let start = Instant::now();
    let mut factors = Vec::new();
    for f in 0..c.algebra().factors().len() {
        let part = c.project(f)?;
        let ans = match method {
            Method::Brute => solve_brute(&part, opts)?,
            Method::Hitting(choice) => solve_deterministic(&part, choice, opts)?,
            Method::MonteCarlo(cfg) => solve_monte_carlo(&part, &cfg)?,
        };
        let status = ans.status;
        factors.push(ans);
        if status != Status::Sat {
            return Ok(ProductAnswer {
                status,
                witness: None,
                failing_factor: Some(f),
                factors,
                elapsed: start.elapsed(),
            });
        }
    }
    let witness: ProductAssignment = (0..c.n_inputs())
        .map(|i| {
            crate::algebra::ProductElement(
                factors
                    .iter()
                    .map(|a| a.witness.as_ref().expect("SAT carries a witness").0[i].clone())
                    .collect(),
            )
        })
        .collect();
    if !c.check(&witness)? {
        return Err(Error::Domain("internal error: assembled witness failed verification".into()));
    }
    Ok(ProductAnswer {
        status: Status::Sat,
        witness: Some(witness),
        failing_factor: None,
        factors,
        elapsed: start.elapsed(),
    })
}

/// Exhaustive search over the product itself, evaluating in the product.
pub fn solve_product_brute(c: &ProductCircuit, opts: &SolveOptions) -> Result<ProductAnswer> {
    let start = Instant::now();
    let alg = c.algebra();
    let order = alg.order();
    let total = opts.limits.check_space(order, c.n_inputs())?;
    let mut codes = vec![0u64; c.n_inputs()];
    for _ in 0..total {
        let a: ProductAssignment = codes.iter().map(|&x| alg.decode(x)).collect();
        if c.check(&a)? {
            return Ok(ProductAnswer {
                status: Status::Sat,
                witness: Some(a),
                failing_factor: None,
                factors: Vec::new(),
                elapsed: start.elapsed(),
            });
        }
        for slot in codes.iter_mut().rev() {
            *slot += 1;
            if *slot < order {
                break;
            }
            *slot = 0;
        }
    }
    Ok(ProductAnswer {
        status: Status::Unsat,
        witness: None,
        failing_factor: None,
        factors: Vec::new(),
        elapsed: start.elapsed(),
    })
}
