use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use supernil_core::algebra::{build_example, parse_algebra, print_algebra, CoordAlgebra, ProductAlgebra};
use supernil_core::circuit::{parse_circuit, parse_product_circuit, random_circuit, Circuit, ProductCircuit, RawCircuit};
use supernil_core::gf::PrimeField;
use supernil_core::solve::{
    solve_brute, solve_deterministic, solve_monte_carlo, solve_product, Budget, DChoice, Method, MonteCarloConfig,
    ProductAnswer, SolveOptions, SolverAnswer,
};
use supernil_core::translate::{
    circuit_to_system, combine, coordinate_names, encode_field_equation, parse_field_equation,
    verify_translation,
};
use supernil_core::verify::{
    degree_sweep, density_exhaustive, density_random, random_corpus, reduction_exhaustive, reduction_random,
};
use supernil_core::{Error, Limits};

use crate::report::*;
use crate::*;

type CmdResult<T> = std::result::Result<T, Failure>;

pub fn run(cli: &Cli, command: Vec<String>) -> CmdResult<u8> {
    let limits = Limits::new(cli.max_points);
    let mut config = Config {
        jobs: 1,
        max_points: cli.max_points,
        ..Config::default()
    };
    let (outcome, text, code) = match &cli.command {
        Command::Solve(a) => solve(a, limits, &mut config)?,
        Command::Translate(a) => translate(a, limits)?,
        Command::Encode(a) => encode(a)?,
        Command::Verify(a) => verify(a, limits, &mut config)?,
        Command::Gen(a) => gen(a, limits, &mut config)?,
        Command::Bench(a) => bench(a, limits, &mut config)?,
    };
    let report = RunReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        command,
        config,
        result: outcome,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    if let Some(path) = &cli.report {
        write_file(path, &(json.clone() + "\n"))?;
    }
    let out = if cli.json { json + "\n" } else { text };
    // a closed pipe downstream is not an error of the run
    let _ = std::io::Write::write_all(&mut std::io::stdout().lock(), out.as_bytes());
    Ok(code)
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_FORMAT,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_file(path: &Path) -> CmdResult<String> {
    std::fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn write_file(path: &Path, text: &str) -> CmdResult<()> {
    std::fs::write(path, text).map_err(|e| io_failure(path, e))
}

// Keeps the exit code of a library error and names the file it came from.
fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    }
}

fn load_algebra(path: &Path, limits: Limits) -> CmdResult<Arc<CoordAlgebra>> {
    let text = read_file(path)?;
    Ok(Arc::new(parse_algebra(&text, limits).map_err(in_file(path))?))
}

/// A circuit over one algebra or over the direct product of several.
enum Loaded {
    Single(Circuit),
    Product(ProductCircuit),
}

// Header paths are tried relative to the circuit file, then as given.
fn header_path(circuit: &Path, p: &str) -> PathBuf {
    let beside = circuit.parent().unwrap_or(Path::new("")).join(p);
    if beside.exists() {
        beside
    } else {
        PathBuf::from(p)
    }
}

fn load_circuit(files: &[PathBuf], limits: Limits) -> CmdResult<Loaded> {
    let (circuit_path, alg_paths) = files.split_last().expect("clap requires a file");
    let text = read_file(circuit_path)?;
    let alg_paths: Vec<PathBuf> = if alg_paths.is_empty() {
        let raw = RawCircuit::parse(&text).map_err(in_file(circuit_path))?;
        if raw.algebra_paths.is_empty() {
            return Err(Failure::usage(format!(
                "{}: no algebra given and the circuit has no 'algebra' header",
                circuit_path.display()
            )));
        }
        raw.algebra_paths.iter().map(|p| header_path(circuit_path, p)).collect()
    } else {
        alg_paths.to_vec()
    };
    let algs = alg_paths
        .iter()
        .map(|p| load_algebra(p, limits))
        .collect::<CmdResult<Vec<_>>>()?;
    if algs.len() == 1 {
        let c = parse_circuit(&text, algs[0].clone()).map_err(in_file(circuit_path))?;
        Ok(Loaded::Single(c))
    } else {
        let prod = Arc::new(ProductAlgebra::new(algs)?);
        let c = parse_product_circuit(&text, prod).map_err(in_file(circuit_path))?;
        Ok(Loaded::Product(c))
    }
}

fn d_choice(d: DArg) -> DChoice {
    match d {
        DArg::Refined => DChoice::Refined,
        DArg::Coarse => DChoice::Coarse,
    }
}

fn d_name(d: DArg) -> &'static str {
    match d {
        DArg::Refined => "refined",
        DArg::Coarse => "coarse",
    }
}

struct Plan {
    opts: SolveOptions,
    mc: MonteCarloConfig,
}

fn plan(method: Option<MethodArg>, flags: &SolverFlags, limits: Limits, config: &mut Config) -> CmdResult<Plan> {
    if flags.epsilon.is_some() && method.is_some_and(|m| m != MethodArg::Mc) {
        return Err(Failure::usage("--epsilon only applies to --method mc"));
    }
    if flags.jobs == 0 {
        return Err(Failure::usage("--jobs must be at least 1"));
    }
    let time = match flags.budget {
        None => None,
        Some(s) => Some(Duration::try_from_secs_f64(s).map_err(|_| Failure::usage(format!("bad --budget {s}")))?),
    };
    let defaults = MonteCarloConfig::default();
    let mc = MonteCarloConfig {
        epsilon: flags.epsilon.unwrap_or(defaults.epsilon),
        seed: flags.seed,
        max_trials: flags.max_trials.unwrap_or(defaults.max_trials),
        d_choice: d_choice(flags.d),
    };
    mc.validate()?;
    config.method = method.map(|m| m.name().to_string());
    config.d_choice = Some(d_name(flags.d).to_string());
    config.budget_secs = flags.budget;
    config.max_candidates = flags.max_candidates;
    config.jobs = flags.jobs;
    if method.is_none_or(|m| m == MethodArg::Mc) {
        config.epsilon = Some(mc.epsilon);
        config.seed = Some(mc.seed);
        config.max_trials = Some(mc.max_trials);
    }
    Ok(Plan {
        opts: SolveOptions {
            limits,
            budget: Budget {
                max_candidates: flags.max_candidates,
                time,
            },
            jobs: flags.jobs,
        },
        mc,
    })
}

fn run_single(c: &Circuit, method: MethodArg, p: &Plan) -> supernil_core::Result<SolverAnswer> {
    match method {
        MethodArg::Brute => solve_brute(c, &p.opts),
        MethodArg::Hitting => solve_deterministic(c, p.mc.d_choice, &p.opts),
        MethodArg::Mc => solve_monte_carlo(c, &p.mc),
    }
}

fn summarize(c: &Circuit, a: &SolverAnswer) -> SolveSummary {
    SolveSummary {
        status: a.status.to_string(),
        witness: a.witness.as_ref().map(|w| c.format_assignment(w)),
        candidates_checked: a.stats.candidates_checked,
        trials: a.stats.trials,
        gate_evals: a.stats.gate_evals,
        elapsed_secs: a.stats.elapsed.as_secs_f64(),
        d: a.d.as_ref().map(|d| d.to_string()),
        hitting_set_size: a.hitting_set_size.as_ref().map(|s| s.to_string()),
        density: a.plan.as_ref().map(|p| p.c.value),
        planned_trials: a.plan.as_ref().map(|p| p.trials),
        capped: a.plan.as_ref().map(|p| p.capped),
        failing_factor: None,
    }
}

fn summarize_product(c: &ProductCircuit, a: &ProductAnswer) -> SolveSummary {
    let stats = a.stats();
    let last = a.factors.last();
    SolveSummary {
        status: a.status.to_string(),
        witness: a
            .witness
            .as_ref()
            .map(|w| w.iter().map(|e| c.algebra().format_element(e)).collect()),
        candidates_checked: stats.candidates_checked,
        trials: stats.trials,
        gate_evals: stats.gate_evals,
        elapsed_secs: stats.elapsed.as_secs_f64(),
        d: last.and_then(|f| f.d.as_ref()).map(|d| d.to_string()),
        hitting_set_size: None,
        density: last.and_then(|f| f.plan.as_ref()).map(|p| p.c.value),
        planned_trials: None,
        capped: None,
        failing_factor: a.failing_factor,
    }
}

fn solve_text(s: &SolveSummary) -> String {
    let mut t = format!("status: {}\n", s.status);
    if let Some(w) = &s.witness {
        let _ = writeln!(t, "witness: {}", w.join(" "));
    }
    if let Some(f) = s.failing_factor {
        let _ = writeln!(t, "failing factor: {}", f + 1);
    }
    let _ = writeln!(t, "candidates checked: {}", s.candidates_checked);
    if let Some(n) = &s.hitting_set_size {
        let _ = writeln!(t, "hitting set size: {n}");
    }
    if let Some(d) = &s.d {
        let _ = writeln!(t, "d: {d}");
    }
    if let Some(c) = s.density {
        let _ = writeln!(t, "density bound c: {c}");
    }
    if let Some(n) = s.planned_trials {
        let capped = if s.capped == Some(true) { " (capped)" } else { "" };
        let _ = writeln!(t, "trials: {} of {n}{capped}", s.trials);
    }
    let _ = writeln!(t, "gate evaluations: {}", s.gate_evals);
    let _ = writeln!(t, "elapsed: {:.6}s", s.elapsed_secs);
    t
}

type Done = (Outcome, String, u8);

fn solve(a: &SolveArgs, limits: Limits, config: &mut Config) -> CmdResult<Done> {
    let p = plan(Some(a.method), &a.flags, limits, config)?;
    let summary = match load_circuit(&a.files, limits)? {
        Loaded::Single(c) => summarize(&c, &run_single(&c, a.method, &p)?),
        Loaded::Product(c) => {
            let method = match a.method {
                MethodArg::Brute => Method::Brute,
                MethodArg::Hitting => Method::Hitting(p.mc.d_choice),
                MethodArg::Mc => Method::MonteCarlo(p.mc),
            };
            summarize_product(&c, &solve_product(&c, method, &p.opts)?)
        }
    };
    let code = match (a.status_exit, summary.status.as_str()) {
        (false, _) => 0,
        (true, "SAT") => EXIT_SAT,
        (true, _) => EXIT_UNSAT,
    };
    let text = solve_text(&summary);
    Ok((Outcome::Solve(summary), text, code))
}

fn translate(a: &TranslateArgs, limits: Limits) -> CmdResult<Done> {
    let Loaded::Single(c) = load_circuit(&a.files, limits)? else {
        return Err(Failure::usage("translate works on circuits over a single algebra"));
    };
    let names = coordinate_names(&c);
    let system = circuit_to_system(&c, limits)?;
    let f = combine(&system)?;
    let rep = verify_translation(&c, &f, limits)?;
    let summary = TranslateSummary {
        variables: (0..names.len()).map(|i| names.name(i).to_string()).collect(),
        system: system.iter().map(|p| p.display(&names).to_string()).collect(),
        f: f.display(&names).to_string(),
        deg_f: rep.deg_f,
        refined: rep.refined.to_string(),
        coarse: rep.coarse.to_string(),
        level_degrees: rep.level_degrees.clone(),
        aggregate: rep.aggregate.to_string(),
        aggregate_bound: rep.aggregate_bound.to_string(),
        assignments: rep.assignments,
        mismatches: rep.mismatches,
        violations: rep.violations.clone(),
    };
    let mut t = format!("variables: {}\n", summary.variables.join(" "));
    for (k, p) in summary.system.iter().enumerate() {
        let _ = writeln!(t, "p{} = {p}", k + 1);
    }
    let _ = writeln!(t, "f = {}", summary.f);
    let _ = writeln!(t, "deg {} <= {} <= {}", rep.deg_f, rep.refined, rep.coarse);
    let levels: Vec<String> = rep.level_degrees.iter().map(|d| d.to_string()).collect();
    let _ = writeln!(
        t,
        "aggregate {} <= {} (level degrees {})",
        rep.aggregate,
        rep.aggregate_bound,
        levels.join(" ")
    );
    let _ = writeln!(t, "iff: {} assignments, {} mismatches", rep.assignments, rep.mismatches);
    let code = violations_text(&mut t, &summary.violations);
    Ok((Outcome::Translate(summary), t, code))
}

fn violations_text(t: &mut String, violations: &[String]) -> u8 {
    for v in violations.iter().take(20) {
        let _ = writeln!(t, "violation: {v}");
    }
    if violations.len() > 20 {
        let _ = writeln!(t, "... {} more", violations.len() - 20);
    }
    if violations.is_empty() {
        0
    } else {
        EXIT_VIOLATION
    }
}

fn encode(a: &EncodeArgs) -> CmdResult<Done> {
    let field = PrimeField::new(a.q)?;
    let (p, y) = parse_field_equation(&a.equation, field)?;
    let mut c = encode_field_equation(&p, y, a.h, a.m)?;
    if let Some(path) = &a.algebra_path {
        c = c.with_algebra_path(path.clone());
    }
    let circuit = c.to_text();
    let summary = EncodeSummary {
        equation: a.equation.clone(),
        q: a.q,
        h: a.h,
        m: a.m,
        gates: c.size(),
        output: a.out.as_ref().map(|p| p.display().to_string()),
    };
    let text = match &a.out {
        Some(path) => {
            write_file(path, &circuit)?;
            format!("wrote {} ({} gates)\n", path.display(), c.size())
        }
        None => circuit,
    };
    Ok((Outcome::Encode(summary), text, 0))
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> CmdResult<T> {
    s.parse().map_err(|_| Failure::usage(format!("{what} must be a number, got '{s}'")))
}

fn exhaustion_feasible(q: u64, n: usize, limits: Limits) -> bool {
    limits
        .check_space(q, n)
        .and_then(|size| limits.check_space(q, size as usize))
        .is_ok()
}

fn verify(a: &VerifyArgs, limits: Limits, config: &mut Config) -> CmdResult<Done> {
    let s = &a.sweep;
    let summary = if let Some(v) = &s.density {
        let (q, n) = (v[0], v[1] as usize);
        let exhaustive = !a.random && exhaustion_feasible(q, n, limits);
        let sweep = if exhaustive {
            density_exhaustive(q, n, limits)?
        } else {
            config.seed = Some(a.seed);
            density_random(q, n, a.count, a.seed, limits)?
        };
        VerifySummary {
            sweep: "density".into(),
            exhaustive,
            checked: sweep.polynomials,
            details: vec![
                ("nonempty preimages".into(), sweep.checked.to_string()),
                ("empty preimages".into(), sweep.vacuous.to_string()),
            ],
            violations: sweep.violations,
        }
    } else if let Some(v) = &s.reduction {
        let (q, n) = (v[0], v[1] as usize);
        let exhaustive = !a.random && exhaustion_feasible(q, n, limits);
        let sweep = if exhaustive {
            reduction_exhaustive(q, n, limits)?
        } else {
            config.seed = Some(a.seed);
            reduction_random(q, n, a.count, a.seed, limits)?
        };
        VerifySummary {
            sweep: "reduction".into(),
            exhaustive,
            checked: sweep.traces,
            details: vec![
                ("constant steps".into(), sweep.constant_steps.to_string()),
                ("affine steps".into(), sweep.affine_steps.to_string()),
                ("max l".into(), sweep.max_l.to_string()),
            ],
            violations: sweep.violations,
        }
    } else {
        let v = s.degree.as_ref().expect("clap enforces one sweep");
        let path = PathBuf::from(&v[0]);
        let n: usize = num(&v[1], "N")?;
        let count: usize = num(&v[2], "COUNT")?;
        if count == 0 {
            return Err(Failure::usage("COUNT must be at least 1"));
        }
        let alg = load_algebra(&path, limits)?;
        config.seed = Some(a.seed);
        let corpus = random_corpus(&alg, n, a.max_gates, count, a.seed)?;
        let sweep = degree_sweep(&corpus, limits)?;
        VerifySummary {
            sweep: "degree".into(),
            exhaustive: true,
            checked: sweep.circuits,
            details: vec![
                ("max deg f".into(), sweep.max_deg_f.to_string()),
                ("refined".into(), sweep.refined.to_string()),
                ("coarse".into(), sweep.coarse.to_string()),
                ("max aggregate".into(), sweep.max_aggregate.to_string()),
                ("aggregate bound".into(), sweep.aggregate_bound.to_string()),
            ],
            violations: sweep.violations,
        }
    };
    let d = |k: &str| {
        summary
            .details
            .iter()
            .find(|(n, _)| n == k)
            .map_or(String::new(), |(_, v)| v.clone())
    };
    let nv = summary.violations.len();
    let mut t = match summary.sweep.as_str() {
        "density" => {
            let what = if summary.exhaustive { "functions" } else { "random polynomials" };
            format!(
                "{} {what} checked, {nv} violations ({} nonempty preimages)\n",
                summary.checked,
                d("nonempty preimages")
            )
        }
        "reduction" => format!(
            "{} traces checked, {nv} violations ({} constant steps, {} affine steps, max l = {}); deg >= n - l on every trace\n",
            summary.checked,
            d("constant steps"),
            d("affine steps"),
            d("max l")
        ),
        _ => format!(
            "{} circuits, max deg f = {} <= {} <= {}, max aggregate {} <= {}, {nv} violations\n",
            summary.checked,
            d("max deg f"),
            d("refined"),
            d("coarse"),
            d("max aggregate"),
            d("aggregate bound")
        ),
    };
    let code = violations_text(&mut t, &summary.violations);
    Ok((Outcome::Verify(summary), t, code))
}

fn gen(a: &GenArgs, limits: Limits, config: &mut Config) -> CmdResult<Done> {
    let mut files = Vec::new();
    if let Some(v) = &a.what.example {
        let (q, h, m) = (v[0], v[1] as usize, v[2] as usize);
        let alg = build_example(q, h, m)?;
        std::fs::create_dir_all(&a.out).map_err(|e| io_failure(&a.out, e))?;
        let name = if q == 2 { format!("a{h}{m}.alg") } else { format!("a{h}{m}_q{q}.alg") };
        let path = a.out.join(name);
        write_file(&path, &print_algebra(&alg))?;
        files.push(path);
    } else {
        let v = a.what.random_circuits.as_ref().expect("clap enforces one target");
        let alg_path = PathBuf::from(&v[0]);
        let n: usize = num(&v[1], "N")?;
        let k: usize = num(&v[2], "K")?;
        let count: usize = num(&v[3], "COUNT")?;
        let seed: u64 = num(&v[4], "SEED")?;
        config.seed = Some(seed);
        let alg = load_algebra(&alg_path, limits)?;
        let circuits = (0..count)
            .map(|i| random_circuit(alg.clone(), n, k, seed.wrapping_add(i as u64)))
            .collect::<supernil_core::Result<Vec<_>>>()?;
        std::fs::create_dir_all(&a.out).map_err(|e| io_failure(&a.out, e))?;
        let width = count.saturating_sub(1).to_string().len().max(4);
        for (i, c) in circuits.into_iter().enumerate() {
            let path = a.out.join(format!("c{i:0width$}.cir"));
            write_file(&path, &c.with_algebra_path(v[0].clone()).to_text())?;
            files.push(path);
        }
    }
    let files: Vec<String> = files.iter().map(|p| p.display().to_string()).collect();
    let text = match files.as_slice() {
        [one] => format!("wrote {one}\n"),
        many => format!("wrote {} files to {}\n", many.len(), a.out.display()),
    };
    Ok((Outcome::Gen(GenSummary { files }), text, 0))
}

fn corpus_files(dir: &Path) -> CmdResult<Vec<PathBuf>> {
    let entries = std::fs::read_dir(dir).map_err(|e| io_failure(dir, e))?;
    let mut files = Vec::new();
    for e in entries {
        let p = e.map_err(|e| io_failure(dir, e))?.path();
        if p.extension().is_some_and(|x| x == "cir") {
            files.push(p);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(Failure::usage(format!("{}: no .cir files", dir.display())));
    }
    Ok(files)
}

// Monte Carlo only claims PROBABLY_UNSAT, which agrees with UNSAT.
fn statuses_agree(a: &str, b: &str) -> bool {
    let norm = |s: &str| if s == "PROBABLY_UNSAT" { "UNSAT".to_string() } else { s.to_string() };
    norm(a) == norm(b)
}

fn bench(a: &BenchArgs, limits: Limits, config: &mut Config) -> CmdResult<Done> {
    let p = plan(None, &a.flags, limits, config)?;
    let names: Vec<&str> = a.methods.iter().map(|m| m.name()).collect();
    config.method = Some(names.join(","));
    let alg = load_algebra(&a.algebra, limits)?;
    let files = corpus_files(&a.corpus)?;
    let oracle = if a.methods.contains(&MethodArg::Brute) { MethodArg::Brute } else { a.methods[0] };
    let mut rows = Vec::new();
    for file in &files {
        let text = read_file(file)?;
        let c = parse_circuit(&text, alg.clone()).map_err(in_file(file))?;
        let instance = file.file_name().map_or(String::new(), |n| n.to_string_lossy().into_owned());
        let mut batch: Vec<BenchRow> = Vec::new();
        for &m in &a.methods {
            let start = Instant::now();
            let row = match run_single(&c, m, &p) {
                Ok(ans) => BenchRow {
                    instance: instance.clone(),
                    method: m.name().into(),
                    status: ans.status.to_string(),
                    agrees: None,
                    candidates_checked: ans.stats.candidates_checked,
                    hitting_set_size: ans.hitting_set_size.as_ref().map(|s| s.to_string()),
                    trials: ans.stats.trials,
                    planned_trials: ans.plan.as_ref().map(|p| p.trials),
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                },
                Err(Error::Budget { candidates, .. }) => BenchRow {
                    instance: instance.clone(),
                    method: m.name().into(),
                    status: "BUDGET".into(),
                    agrees: None,
                    candidates_checked: candidates,
                    hitting_set_size: None,
                    trials: 0,
                    planned_trials: None,
                    wall_ms: start.elapsed().as_secs_f64() * 1e3,
                },
                Err(e) => return Err(in_file(file)(e)),
            };
            batch.push(row);
        }
        let reference = batch
            .iter()
            .find(|r| r.method == oracle.name() && r.status != "BUDGET")
            .map(|r| r.status.clone());
        for r in &mut batch {
            if r.status != "BUDGET" {
                r.agrees = reference.as_ref().map(|s| statuses_agree(s, &r.status));
            }
        }
        rows.extend(batch);
    }
    let aggregate: Vec<BenchAggregate> = a
        .methods
        .iter()
        .map(|m| {
            let mine: Vec<&BenchRow> = rows.iter().filter(|r| r.method == m.name()).collect();
            let compared = mine.iter().filter(|r| r.agrees.is_some()).count();
            let agreeing = mine.iter().filter(|r| r.agrees == Some(true)).count();
            BenchAggregate {
                method: m.name().into(),
                instances: mine.len(),
                agreement: if compared == 0 { 0.0 } else { 100.0 * agreeing as f64 / compared as f64 },
                budget_exhausted: mine.iter().filter(|r| r.status == "BUDGET").count(),
                max_candidates: mine.iter().map(|r| r.candidates_checked).max().unwrap_or(0),
                total_ms: mine.iter().map(|r| r.wall_ms).sum(),
            }
        })
        .collect();
    let summary = BenchSummary {
        oracle: oracle.name().into(),
        rows,
        aggregate,
    };
    if let Some(path) = &a.tsv {
        write_file(path, &summary.tsv())?;
    }
    let mut t = summary.tsv().replace('\t', "  ");
    let _ = writeln!(t, "\nmethod  instances  agreement%  budget  max_candidates  total_ms  (oracle: {})", summary.oracle);
    for g in &summary.aggregate {
        let _ = writeln!(
            t,
            "{}  {}  {:.1}  {}  {}  {:.3}",
            g.method, g.instances, g.agreement, g.budget_exhausted, g.max_candidates, g.total_ms
        );
    }
    Ok((Outcome::Bench(summary), t, 0))
}
