//! Python bindings: algebras, circuits, the three solvers, translation and
//! the field-equation encoder.

use std::sync::Arc;
use std::time::Duration;

use num_bigint::BigUint;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use supernil_core::algebra::{build_example, parse_algebra, print_algebra, CoordAlgebra};
use supernil_core::circuit::{parse_circuit, random_circuit, Assignment, Circuit as CoreCircuit};
use supernil_core::gf::PrimeField;
use supernil_core::solve::{
    self, solve_brute, solve_deterministic, solve_monte_carlo, Budget, DChoice, MonteCarloConfig, SolveOptions,
    SolverAnswer,
};
use supernil_core::translate::{circuit_to_system, combine, coordinate_names, encode_field_equation, parse_field_equation, verify_translation};
use supernil_core::{Error, ErrorKind, Limits};

create_exception!(supernil, SupernilError, PyException, "Base class of library errors.");
create_exception!(supernil, FormatError, SupernilError, "Malformed algebra or circuit text.");
create_exception!(supernil, ResourceError, SupernilError, "Exhaustion limit or solver budget exceeded.");

fn to_py(e: Error) -> PyErr {
    let msg = e.to_string();
    match e.kind() {
        ErrorKind::Usage | ErrorKind::Domain => PyValueError::new_err(msg),
        ErrorKind::Format | ErrorKind::Io => FormatError::new_err(msg),
        ErrorKind::Resource => ResourceError::new_err(msg),
    }
}

fn d_choice(d: &str) -> PyResult<DChoice> {
    match d {
        "refined" => Ok(DChoice::Refined),
        "coarse" => Ok(DChoice::Coarse),
        other => Err(PyValueError::new_err(format!("d must be 'refined' or 'coarse', got '{other}'"))),
    }
}

/// A finite algebra in coordinatized form.
#[pyclass(frozen, module = "supernil")]
struct Algebra {
    inner: Arc<CoordAlgebra>,
}

#[pymethods]
impl Algebra {
    /// The example algebra A[h,m] over F_q.
    #[staticmethod]
    fn example(q: u64, h: usize, m: usize) -> PyResult<Self> {
        Ok(Algebra {
            inner: Arc::new(build_example(q, h, m).map_err(to_py)?),
        })
    }

    #[staticmethod]
    #[pyo3(signature = (text, max_points = supernil_core::error::DEFAULT_EXHAUSTION_LIMIT))]
    fn parse(text: &str, max_points: u64) -> PyResult<Self> {
        Ok(Algebra {
            inner: Arc::new(parse_algebra(text, Limits::new(max_points)).map_err(to_py)?),
        })
    }

    fn to_text(&self) -> String {
        print_algebra(&self.inner)
    }

    #[getter]
    fn q(&self) -> u32 {
        self.inner.q()
    }

    #[getter]
    fn h(&self) -> usize {
        self.inner.h()
    }

    #[getter]
    fn order(&self) -> u32 {
        self.inner.order()
    }

    /// `(name, arity)` for every operation.
    #[getter]
    fn operations(&self) -> Vec<(String, usize)> {
        self.inner.ops().map(|o| (o.name.clone(), o.arity)).collect()
    }

    /// All elements as digit strings, in code order.
    fn elements(&self) -> Vec<String> {
        (0..self.inner.order())
            .map(|c| self.inner.format_element(&self.inner.decode(c)))
            .collect()
    }

    fn apply(&self, op: &str, args: Vec<String>) -> PyResult<String> {
        let elems = args
            .iter()
            .map(|a| self.inner.parse_element(a))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        let out = self.inner.eval_op(op, &elems).map_err(to_py)?;
        Ok(self.inner.format_element(&out))
    }

    /// `(coarse, refined)` degree bounds.
    fn degree_bound(&self) -> (BigUint, BigUint) {
        let b = self.inner.degree_bound();
        (b.coarse, b.refined)
    }

    fn __repr__(&self) -> String {
        format!("Algebra(q={}, order={}, ops={})", self.inner.q(), self.inner.order(), self.inner.ops().count())
    }
}

/// An equation between two gates of a circuit over an algebra.
#[pyclass(frozen, module = "supernil")]
struct Circuit {
    inner: CoreCircuit,
}

impl Circuit {
    fn assignment(&self, values: &[String]) -> PyResult<Assignment> {
        if values.len() != self.inner.n_inputs() {
            return Err(PyValueError::new_err(format!(
                "expected {} values, got {}",
                self.inner.n_inputs(),
                values.len()
            )));
        }
        let alg = self.inner.algebra();
        let elems = values
            .iter()
            .map(|v| alg.parse_element(v))
            .collect::<Result<Vec<_>, _>>()
            .map_err(to_py)?;
        Ok(Assignment(elems))
    }
}

#[pymethods]
impl Circuit {
    #[staticmethod]
    fn parse(text: &str, algebra: &Algebra) -> PyResult<Self> {
        Ok(Circuit {
            inner: parse_circuit(text, algebra.inner.clone()).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn random(algebra: &Algebra, n_inputs: usize, n_gates: usize, seed: u64) -> PyResult<Self> {
        Ok(Circuit {
            inner: random_circuit(algebra.inner.clone(), n_inputs, n_gates, seed).map_err(to_py)?,
        })
    }

    /// Encodes a field equation such as `"x1*x2 = 1"` over A[h,m].
    #[staticmethod]
    fn encode(equation: &str, q: u64, h: usize, m: usize) -> PyResult<Self> {
        let field = PrimeField::new(q).map_err(to_py)?;
        let (p, y) = parse_field_equation(equation, field).map_err(to_py)?;
        Ok(Circuit {
            inner: encode_field_equation(&p, y, h, m).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    #[getter]
    fn n_inputs(&self) -> usize {
        self.inner.n_inputs()
    }

    #[getter]
    fn size(&self) -> usize {
        self.inner.size()
    }

    #[getter]
    fn algebra(&self) -> Algebra {
        Algebra {
            inner: self.inner.algebra().clone(),
        }
    }

    /// Values of the two output gates.
    fn eval(&self, values: Vec<String>) -> PyResult<(String, String)> {
        let (a, b) = self.inner.eval(&self.assignment(&values)?).map_err(to_py)?;
        let alg = self.inner.algebra();
        Ok((alg.format_element(&a), alg.format_element(&b)))
    }

    fn check(&self, values: Vec<String>) -> PyResult<bool> {
        self.inner.check(&self.assignment(&values)?).map_err(to_py)
    }

    /// `(system, f, report)`: the polynomial system and its combination in
    /// the coordinate variables, and the degree report as a dict.
    #[pyo3(signature = (max_points = supernil_core::error::DEFAULT_EXHAUSTION_LIMIT))]
    fn translate<'py>(&self, py: Python<'py>, max_points: u64) -> PyResult<(Vec<String>, String, Bound<'py, pyo3::types::PyDict>)> {
        let limits = Limits::new(max_points);
        let names = coordinate_names(&self.inner);
        let system = circuit_to_system(&self.inner, limits).map_err(to_py)?;
        let f = combine(&system).map_err(to_py)?;
        let rep = verify_translation(&self.inner, &f, limits).map_err(to_py)?;
        let d = pyo3::types::PyDict::new(py);
        d.set_item("deg_f", rep.deg_f)?;
        d.set_item("refined", rep.refined)?;
        d.set_item("coarse", rep.coarse)?;
        d.set_item("level_degrees", rep.level_degrees)?;
        d.set_item("aggregate", rep.aggregate)?;
        d.set_item("aggregate_bound", rep.aggregate_bound)?;
        d.set_item("mismatches", rep.mismatches)?;
        d.set_item("violations", rep.violations)?;
        let shown: Vec<String> = system.iter().map(|p| p.display(&names).to_string()).collect();
        let f_text = f.display(&names).to_string();
        Ok((shown, f_text, d))
    }

    fn __repr__(&self) -> String {
        format!("Circuit(inputs={}, gates={})", self.inner.n_inputs(), self.inner.size())
    }
}

/// Result of a solver run.
#[pyclass(frozen, get_all, module = "supernil")]
struct Answer {
    /// "SAT", "UNSAT" or "PROBABLY_UNSAT".
    status: String,
    witness: Option<Vec<String>>,
    candidates_checked: u64,
    trials: u64,
    gate_evals: u64,
    elapsed: f64,
    d: Option<BigUint>,
    hitting_set_size: Option<BigUint>,
}

#[pymethods]
impl Answer {
    #[getter]
    fn is_sat(&self) -> bool {
        self.status == "SAT"
    }

    fn __repr__(&self) -> String {
        match &self.witness {
            Some(w) => format!("Answer(SAT, witness={w:?})"),
            None => format!("Answer({})", self.status),
        }
    }
}

fn answer(c: &CoreCircuit, a: SolverAnswer) -> Answer {
    Answer {
        status: a.status.to_string(),
        witness: a.witness.as_ref().map(|w| c.format_assignment(w)),
        candidates_checked: a.stats.candidates_checked,
        trials: a.stats.trials,
        gate_evals: a.stats.gate_evals,
        elapsed: a.stats.elapsed.as_secs_f64(),
        d: a.d,
        hitting_set_size: a.hitting_set_size,
    }
}

fn options(max_candidates: Option<u64>, budget: Option<f64>, jobs: usize, max_points: u64) -> PyResult<SolveOptions> {
    let time = budget
        .map(Duration::try_from_secs_f64)
        .transpose()
        .map_err(|e| PyValueError::new_err(format!("bad budget: {e}")))?;
    if jobs == 0 {
        return Err(PyValueError::new_err("jobs must be at least 1"));
    }
    Ok(SolveOptions {
        limits: Limits::new(max_points),
        budget: Budget { max_candidates, time },
        jobs,
    })
}

/// Exhaustive search over all assignments.
#[pyfunction(name = "solve_brute")]
#[pyo3(signature = (circuit, max_candidates = None, budget = None, max_points = supernil_core::error::DEFAULT_EXHAUSTION_LIMIT))]
fn solve_brute_force(
    py: Python<'_>,
    circuit: &Circuit,
    max_candidates: Option<u64>,
    budget: Option<f64>,
    max_points: u64,
) -> PyResult<Answer> {
    let opts = options(max_candidates, budget, 1, max_points)?;
    let c = &circuit.inner;
    let a = py.detach(|| solve_brute(c, &opts)).map_err(to_py)?;
    Ok(answer(c, a))
}

/// Deterministic scan of the bounded-support hitting set.
#[pyfunction]
#[pyo3(signature = (circuit, d = "refined", jobs = 1, max_candidates = None, budget = None))]
fn solve_hitting(
    py: Python<'_>,
    circuit: &Circuit,
    d: &str,
    jobs: usize,
    max_candidates: Option<u64>,
    budget: Option<f64>,
) -> PyResult<Answer> {
    let choice = d_choice(d)?;
    let opts = options(max_candidates, budget, jobs, supernil_core::error::DEFAULT_EXHAUSTION_LIMIT)?;
    let c = &circuit.inner;
    let a = py.detach(|| solve_deterministic(c, choice, &opts)).map_err(to_py)?;
    Ok(answer(c, a))
}

/// Seeded Monte Carlo sampling; never wrong on SAT answers.
#[pyfunction(name = "solve_monte_carlo")]
#[pyo3(signature = (circuit, epsilon = 0.01, seed = 0, max_trials = None, d = "refined"))]
fn solve_monte_carlo_sampling(
    py: Python<'_>,
    circuit: &Circuit,
    epsilon: f64,
    seed: u64,
    max_trials: Option<u64>,
    d: &str,
) -> PyResult<Answer> {
    let cfg = MonteCarloConfig {
        epsilon,
        seed,
        max_trials: max_trials.unwrap_or(MonteCarloConfig::default().max_trials),
        d_choice: d_choice(d)?,
    };
    let c = &circuit.inner;
    let a = py.detach(|| solve_monte_carlo(c, &cfg)).map_err(to_py)?;
    Ok(answer(c, a))
}

/// Number of vectors in F_q^n with at most d nonzero entries.
#[pyfunction]
fn hitting_set_size(n: usize, d: BigUint, q: u32) -> BigUint {
    solve::hitting_set_size(n, &d, q)
}

/// Monte Carlo trials needed for per-trial density `c` and failure `epsilon`.
#[pyfunction]
fn mc_trials(c: f64, epsilon: f64) -> PyResult<u64> {
    solve::mc_trials(c, epsilon).map_err(to_py)
}

#[pymodule]
fn supernil(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("SupernilError", m.py().get_type::<SupernilError>())?;
    m.add("FormatError", m.py().get_type::<FormatError>())?;
    m.add("ResourceError", m.py().get_type::<ResourceError>())?;
    m.add_class::<Algebra>()?;
    m.add_class::<Circuit>()?;
    m.add_class::<Answer>()?;
    m.add_function(wrap_pyfunction!(solve_brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(solve_hitting, m)?)?;
    m.add_function(wrap_pyfunction!(solve_monte_carlo_sampling, m)?)?;
    m.add_function(wrap_pyfunction!(hitting_set_size, m)?)?;
    m.add_function(wrap_pyfunction!(mc_trials, m)?)?;
    Ok(())
}
