//! Solvers: brute force, the deterministic hitting-set scan, Monte Carlo
//! sampling, and the direct-product reduction.

mod hitting;
mod monte_carlo;
mod product;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

pub use hitting::{hitting_set_size, HittingIter, HittingSet};
pub use monte_carlo::{mc_density, mc_density_for, mc_plan, mc_trials, solve_monte_carlo, Density, MonteCarloConfig, TrialPlan};
pub use product::{solve_product, solve_product_brute, Method, ProductAnswer};

pub use crate::algebra::DChoice;
use crate::circuit::{Assignment, Circuit};
use crate::error::{Error, Limits, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Sat,
    Unsat,
    ProbablyUnsat,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::ProbablyUnsat => "PROBABLY_UNSAT",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub candidates_checked: u64,
    pub trials: u64,
    pub gate_evals: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverAnswer {
    pub status: Status,
    /// Present exactly when `status` is SAT; always passes `Circuit::check`.
    pub witness: Option<Assignment>,
    pub stats: Stats,
    /// Support bound of the hitting-set scan.
    pub d: Option<BigUint>,
    pub hitting_set_size: Option<BigUint>,
    pub plan: Option<TrialPlan>,
}

impl SolverAnswer {
    fn new(status: Status, witness: Option<Assignment>, stats: Stats) -> Self {
        SolverAnswer {
            status,
            witness,
            stats,
            d: None,
            hitting_set_size: None,
            plan: None,
        }
    }

    pub fn is_sat(&self) -> bool {
        self.status == Status::Sat
    }
}

/// Work limits; exceeding one is an error, never an answer.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub max_candidates: Option<u64>,
    pub time: Option<Duration>,
}

impl Budget {
    /// True if checking one more candidate after `checked` breaks the cap.
    fn full(&self, checked: u64) -> bool {
        self.max_candidates.is_some_and(|m| checked >= m)
    }

    fn out_of_time(&self, start: Instant) -> bool {
        self.time.is_some_and(|t| start.elapsed() > t)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: Limits,
    pub budget: Budget,
    /// Worker threads for the deterministic scan.
    pub jobs: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limits: Limits::default(),
            budget: Budget::default(),
            jobs: 1,
        }
    }
}

// Re-checks a witness through the public path before it is reported.
fn confirm(c: &Circuit, codes: &[u32], stats: Stats) -> Result<SolverAnswer> {
    let w = c.assignment_from_codes(codes);
    if !c.check(&w)? {
        return Err(Error::Domain("internal error: witness failed verification".into()));
    }
    Ok(SolverAnswer::new(Status::Sat, Some(w), stats))
}

/// Exhaustive search; the witness is the first satisfying assignment in
/// lexicographic digit-string order.
pub fn solve_brute(c: &Circuit, opts: &SolveOptions) -> Result<SolverAnswer> {
    let start = Instant::now();
    let order = c.algebra().order();
    let total = opts.limits.check_space(order as u64, c.n_inputs())?;
    let mut codes = vec![0u32; c.n_inputs()];
    let mut scratch = Vec::with_capacity(c.size());
    let mut stats = Stats::default();
    for _ in 0..total {
        if opts.budget.full(stats.candidates_checked) {
            return Err(Error::Budget {
                candidates: stats.candidates_checked,
                elapsed: start.elapsed(),
            });
        }
        stats.candidates_checked += 1;
        stats.gate_evals += c.size() as u64;
        let (x, y) = c.eval_codes(&codes, &mut scratch);
        if x == y {
            stats.elapsed = start.elapsed();
            return confirm(c, &codes, stats);
        }
        if stats.candidates_checked % 4096 == 0 && opts.budget.out_of_time(start) {
            return Err(Error::Budget {
                candidates: stats.candidates_checked,
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
    stats.elapsed = start.elapsed();
    Ok(SolverAnswer::new(Status::Unsat, None, stats))
}

const BLOCK: u64 = 4096;

/// Checks every assignment whose coordinate vector has at most `d` nonzero
/// entries, `d` being the chosen degree bound. The witness is the first hit
/// in enumeration order, also when the scan runs on several threads.
pub fn solve_deterministic(c: &Circuit, choice: DChoice, opts: &SolveOptions) -> Result<SolverAnswer> {
    let start = Instant::now();
    let alg = c.algebra();
    let d = alg.degree_bound().pick(choice).clone();
    let n = c.n_inputs() * alg.h();
    let hs = HittingSet::new(n, &d, alg.q());
    let size = hs.len();
    let total = size.to_u64().ok_or_else(|| Error::LimitExceeded {
        space: format!("hitting set of {size}"),
        limit: u64::MAX,
    })?;
    let (hit, checked) = if opts.jobs <= 1 {
        scan_sequential(c, &hs, opts, start)?
    } else {
        scan_parallel(c, &hs, total, opts, start)?
    };
    let stats = Stats {
        candidates_checked: checked,
        trials: 0,
        gate_evals: checked * c.size() as u64,
        elapsed: start.elapsed(),
    };
    let mut ans = match hit {
        Some(rank) => {
            let coords = hs.unrank(rank).expect("rank in range");
            let mut codes = vec![0; c.n_inputs()];
            c.codes_from_coords(&coords, &mut codes);
            confirm(c, &codes, stats)?
        }
        None => SolverAnswer::new(Status::Unsat, None, stats),
    };
    ans.d = Some(d);
    ans.hitting_set_size = Some(size);
    Ok(ans)
}

fn scan_sequential(c: &Circuit, hs: &HittingSet, opts: &SolveOptions, start: Instant) -> Result<(Option<u64>, u64)> {
    let mut it = hs.iter();
    let mut coords = vec![0u32; hs.n()];
    let mut codes = vec![0u32; c.n_inputs()];
    let mut scratch = Vec::with_capacity(c.size());
    let mut checked = 0u64;
    while it.next_into(&mut coords) {
        if opts.budget.full(checked) {
            return Err(Error::Budget {
                candidates: checked,
                elapsed: start.elapsed(),
            });
        }
        checked += 1;
        c.codes_from_coords(&coords, &mut codes);
        let (x, y) = c.eval_codes(&codes, &mut scratch);
        if x == y {
            return Ok((Some(checked - 1), checked));
        }
        if checked.is_multiple_of(BLOCK) && opts.budget.out_of_time(start) {
            return Err(Error::Budget {
                candidates: checked,
                elapsed: start.elapsed(),
            });
        }
    }
    Ok((None, checked))
}

fn scan_parallel(
    c: &Circuit,
    hs: &HittingSet,
    total: u64,
    opts: &SolveOptions,
    start: Instant,
) -> Result<(Option<u64>, u64)> {
    let next_block = AtomicU64::new(0);
    let best = AtomicU64::new(u64::MAX);
    let checked = AtomicU64::new(0);
    let over_budget = AtomicBool::new(false);
    let cap = opts.budget.max_candidates.unwrap_or(u64::MAX);
    std::thread::scope(|s| {
        for _ in 0..opts.jobs {
            s.spawn(|| {
                let mut coords = vec![0u32; hs.n()];
                let mut codes = vec![0u32; c.n_inputs()];
                let mut scratch = Vec::with_capacity(c.size());
                loop {
                    let b = next_block.fetch_add(1, Ordering::Relaxed);
                    let lo = b.saturating_mul(BLOCK);
                    if lo >= total || lo > best.load(Ordering::Acquire) || over_budget.load(Ordering::Relaxed) {
                        break;
                    }
                    if lo >= cap {
                        break;
                    }
                    let hi = (lo + BLOCK).min(total).min(cap);
                    let mut it = hs.iter_from(lo);
                    let mut done = 0;
                    for rank in lo..hi {
                        if rank > best.load(Ordering::Acquire) || !it.next_into(&mut coords) {
                            break;
                        }
                        done += 1;
                        c.codes_from_coords(&coords, &mut codes);
                        let (x, y) = c.eval_codes(&codes, &mut scratch);
                        if x == y {
                            best.fetch_min(rank, Ordering::AcqRel);
                            break;
                        }
                    }
                    checked.fetch_add(done, Ordering::Relaxed);
                    if opts.budget.out_of_time(start) {
                        over_budget.store(true, Ordering::Relaxed);
                    }
                }
            });
        }
    });
    let checked = checked.into_inner();
    let best = best.into_inner();
    // a hit inside the cap is an answer whatever the other workers saw
    if best < cap && best != u64::MAX {
        return Ok((Some(best), checked));
    }
    if over_budget.into_inner() || cap < total {
        return Err(Error::Budget {
            candidates: checked,
            elapsed: start.elapsed(),
        });
    }
    Ok((None, checked))
}

#[cfg(test)]
mod tests;
