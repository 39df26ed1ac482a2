use std::sync::Arc;

use num_bigint::BigUint;

use super::*;
use crate::algebra::{build_example, direct_product, CoordAlgebra};
use crate::circuit::{parse_circuit, parse_product_circuit, random_circuit};

fn a22() -> Arc<CoordAlgebra> {
    Arc::new(build_example(2, 2, 2).unwrap())
}

fn circ(text: &str) -> Circuit {
    parse_circuit(text, a22()).unwrap()
}

const P1_VS_ZERO: &str = "inputs 2\ng3 = p1 g1 g2\ng4 = const 00\noutput g3 g4\n";
const P1_VS_10: &str = "inputs 2\ng3 = p1 g1 g2\ng4 = const 10\noutput g3 g4\n";
const MISMATCH: &str = "inputs 2\ng3 = const 10\ng4 = const 00\noutput g3 g4\n";
const IDENTITY: &str = "inputs 1\noutput g1 g1\n";

fn digits(c: &Circuit, a: &SolverAnswer) -> Vec<String> {
    c.format_assignment(a.witness.as_ref().unwrap())
}

#[test]
fn brute_examples() {
    let opts = SolveOptions::default();
    let c = circ(P1_VS_ZERO);
    let a = solve_brute(&c, &opts).unwrap();
    assert_eq!(a.status, Status::Sat);
    assert_eq!(digits(&c, &a), ["00", "00"]);
    assert_eq!(solve_brute(&circ(MISMATCH), &opts).unwrap().status, Status::Unsat);
    let id = circ(IDENTITY);
    assert_eq!(digits(&id, &solve_brute(&id, &opts).unwrap()), ["00"]);
}

#[test]
fn deterministic_examples() {
    let opts = SolveOptions::default();
    let c = circ(P1_VS_10);
    let a = solve_deterministic(&c, DChoice::Refined, &opts).unwrap();
    assert_eq!(a.status, Status::Sat);
    assert_eq!(digits(&c, &a), ["01", "01"]);
    assert!(a.stats.candidates_checked <= 16);
    assert_eq!(a.hitting_set_size, Some(BigUint::from(16u32)));

    let u = solve_deterministic(&circ(MISMATCH), DChoice::Refined, &opts).unwrap();
    assert_eq!(u.status, Status::Unsat);
    assert_eq!(u.stats.candidates_checked, 16);

    let id = solve_deterministic(&circ(IDENTITY), DChoice::Coarse, &opts).unwrap();
    assert_eq!(id.stats.candidates_checked, 1);
    assert_eq!(id.d, Some(BigUint::from(16u32)));
}

#[test]
fn parallel_scan_matches_sequential() {
    let alg = Arc::new(build_example(2, 3, 2).unwrap());
    for seed in 0..40 {
        let c = random_circuit(alg.clone(), 3, 10, seed).unwrap();
        let seq = solve_deterministic(&c, DChoice::Refined, &SolveOptions::default()).unwrap();
        let par = solve_deterministic(
            &c,
            DChoice::Refined,
            &SolveOptions {
                jobs: 4,
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(seq.status, par.status);
        assert_eq!(seq.witness, par.witness);
        if seq.status == Status::Unsat {
            assert_eq!(seq.stats.candidates_checked, par.stats.candidates_checked);
        }
    }
}

#[test]
fn budget_is_an_error() {
    let alg = Arc::new(build_example(2, 3, 3).unwrap());
    let c = parse_circuit("inputs 6\ng7 = const 100\ng8 = const 000\noutput g7 g8\n", alg).unwrap();
    let opts = SolveOptions {
        budget: Budget {
            max_candidates: Some(10),
            time: None,
        },
        ..SolveOptions::default()
    };
    assert!(matches!(solve_brute(&c, &opts), Err(Error::Budget { .. })));
    assert!(matches!(solve_deterministic(&c, DChoice::Refined, &opts), Err(Error::Budget { .. })));
    let par = SolveOptions { jobs: 3, ..opts };
    assert!(matches!(solve_deterministic(&c, DChoice::Refined, &par), Err(Error::Budget { .. })));
}

#[test]
fn density_examples() {
    let a = a22();
    let r = mc_density(&a, DChoice::Refined);
    assert_eq!(r.value, 1.0 / 64.0);
    assert_eq!(r.exponent, -6.0);
    assert_eq!(mc_density(&a, DChoice::Coarse).exponent, -18.0);
    let z2 = build_example(2, 1, 2).unwrap();
    assert_eq!(mc_density(&z2, DChoice::Refined).value, 1.0 / 8.0);
}

#[test]
fn trial_counts() {
    assert_eq!(mc_trials(1.0 / 64.0, 0.01).unwrap(), 295);
    assert_eq!(mc_trials(1.0, 0.3).unwrap(), 1);
    assert_eq!(mc_trials(1.0 / 8.0, 0.5).unwrap(), 6);
    assert!(mc_trials(0.5, 2.0).is_err());
    assert!(mc_trials(0.0, 0.5).is_err());
}

#[test]
fn plan_flags() {
    let c = circ(P1_VS_ZERO);
    let plan = mc_plan(&c, &MonteCarloConfig::default()).unwrap();
    assert_eq!(plan.trials, 295);
    assert!(!plan.capped);
    assert!(plan.exceeds_space);
    let capped = mc_plan(
        &c,
        &MonteCarloConfig {
            max_trials: 10,
            ..MonteCarloConfig::default()
        },
    )
    .unwrap();
    assert_eq!((capped.trials, capped.capped), (10, true));
    let big = Arc::new(build_example(3, 4, 4).unwrap());
    let c = parse_circuit("inputs 1\noutput g1 g1\n", big).unwrap();
    let coarse = mc_plan(
        &c,
        &MonteCarloConfig {
            d_choice: DChoice::Coarse,
            max_trials: 1000,
            ..MonteCarloConfig::default()
        },
    )
    .unwrap();
    assert!(coarse.capped && coarse.c.value == 0.0 && coarse.c.ln().is_finite());
}

#[test]
fn monte_carlo_examples() {
    let cfg = MonteCarloConfig::default();
    let u = solve_monte_carlo(&circ(MISMATCH), &cfg).unwrap();
    assert_eq!(u.status, Status::ProbablyUnsat);
    assert_eq!(u.stats.trials, 295);
    let id = solve_monte_carlo(&circ(IDENTITY), &cfg).unwrap();
    assert_eq!((id.status, id.stats.trials), (Status::Sat, 1));
    let c = circ(P1_VS_ZERO);
    let x = solve_monte_carlo(&c, &MonteCarloConfig { seed: 9, ..cfg }).unwrap();
    let y = solve_monte_carlo(&c, &MonteCarloConfig { seed: 9, ..cfg }).unwrap();
    assert_eq!(x, SolverAnswer { stats: Stats { elapsed: x.stats.elapsed, ..y.stats.clone() }, ..y });
    let hits = (0..1000)
        .filter(|&s| solve_monte_carlo(&c, &MonteCarloConfig { seed: s, ..cfg }).unwrap().is_sat())
        .count();
    assert!(hits >= 990, "{hits}");
    assert!(solve_monte_carlo(&c, &MonteCarloConfig { epsilon: 2.0, ..cfg }).is_err());
}

#[test]
fn product_examples() {
    let a = a22();
    let p = Arc::new(direct_product(a.clone(), a.clone()).unwrap());
    let opts = SolveOptions::default();
    let id = parse_product_circuit(IDENTITY, p.clone()).unwrap();
    let ans = solve_product(&id, Method::Hitting(DChoice::Refined), &opts).unwrap();
    assert_eq!(ans.status, Status::Sat);
    assert_eq!(p.format_element(&ans.witness.unwrap()[0]), "00|00");

    let half = parse_product_circuit("inputs 1\ng2 = const 00|10\ng3 = const 00|00\noutput g2 g3\n", p.clone()).unwrap();
    for m in [Method::Brute, Method::Hitting(DChoice::Refined)] {
        let ans = solve_product(&half, m, &opts).unwrap();
        assert_eq!((ans.status, ans.failing_factor), (Status::Unsat, Some(1)));
    }
    assert_eq!(solve_product_brute(&half, &opts).unwrap().status, Status::Unsat);
}

#[test]
fn candidate_cap_is_exact() {
    let c = circ(MISMATCH);
    for jobs in [1, 3] {
        let capped = |m| SolveOptions {
            budget: Budget {
                max_candidates: Some(m),
                time: None,
            },
            jobs,
            ..SolveOptions::default()
        };
        let a = solve_deterministic(&c, DChoice::Refined, &capped(16)).unwrap();
        assert_eq!((a.status, a.stats.candidates_checked), (Status::Unsat, 16));
        assert_eq!(solve_brute(&c, &capped(16)).unwrap().status, Status::Unsat);
        match solve_deterministic(&c, DChoice::Refined, &capped(15)) {
            Err(Error::Budget { candidates, .. }) => assert!(candidates <= 15),
            other => panic!("{other:?}"),
        }
        assert!(matches!(solve_brute(&c, &capped(3)), Err(Error::Budget { candidates: 3, .. })));
        // a witness found inside the cap is still reported
        let sat = circ(P1_VS_10);
        assert!(solve_deterministic(&sat, DChoice::Refined, &capped(10)).unwrap().is_sat());
    }
}
