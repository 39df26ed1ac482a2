mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use supernil_core::{Error, ErrorKind};

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FORMAT: u8 = 2;
pub const EXIT_RESOURCE: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;
pub const EXIT_SAT: u8 = 10;
pub const EXIT_UNSAT: u8 = 20;

#[derive(Parser, Debug)]
#[command(name = "supernil", version, about = "Circuit satisfiability over finite supernilpotent algebras")]
pub struct Cli {
    /// Print the JSON run report on stdout instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    report: Option<PathBuf>,
    /// Cap on points visited by any exhaustive scan.
    #[arg(long, global = true, default_value_t = supernil_core::error::DEFAULT_EXHAUSTION_LIMIT)]
    max_points: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide satisfiability of a circuit.
    Solve(SolveArgs),
    /// Print the polynomial system, f and the degree report of a circuit.
    Translate(TranslateArgs),
    /// Encode a field equation `p = y` as a circuit over A[h,m].
    Encode(EncodeArgs),
    /// Batch checks of the density, degree and reduction bounds.
    Verify(VerifyArgs),
    /// Write example algebras or random circuit corpora.
    Gen(GenArgs),
    /// Run several methods over a corpus and tabulate the work counters.
    Bench(BenchArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Brute,
    Hitting,
    Mc,
}

impl MethodArg {
    fn name(self) -> &'static str {
        match self {
            MethodArg::Brute => "brute",
            MethodArg::Hitting => "hitting",
            MethodArg::Mc => "mc",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DArg {
    Refined,
    Coarse,
}

#[derive(Args, Debug, Clone)]
pub struct SolverFlags {
    /// Degree bound used by the hitting-set scan and the Monte Carlo density.
    #[arg(long = "d", value_enum, default_value = "refined")]
    d: DArg,
    /// Target failure probability of the Monte Carlo solver (default 0.01).
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Upper limit on Monte Carlo trials.
    #[arg(long)]
    max_trials: Option<u64>,
    /// Wall-clock budget in seconds.
    #[arg(long, value_name = "SECS")]
    budget: Option<f64>,
    /// Budget on candidates checked.
    #[arg(long)]
    max_candidates: Option<u64>,
    /// Worker threads for the hitting-set scan.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Algebra file(s) followed by the circuit file. Several algebras solve
    /// over their direct product; with only a circuit, its `algebra` header
    /// names the algebras.
    #[arg(required = true, num_args = 1.., value_name = "FILES")]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "hitting")]
    method: MethodArg,
    #[command(flatten)]
    flags: SolverFlags,
    /// Exit 10 on SAT and 20 on UNSAT or PROBABLY_UNSAT.
    #[arg(long)]
    status_exit: bool,
}

#[derive(Args, Debug)]
pub struct TranslateArgs {
    /// Algebra file followed by the circuit file, or just the circuit.
    #[arg(required = true, num_args = 1..=2, value_name = "FILES")]
    files: Vec<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EncodeArgs {
    /// Equation over x1, x2, ..., e.g. "x1*x2 = 1".
    equation: String,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    h: usize,
    #[arg(long)]
    m: usize,
    /// Write the circuit here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Algebra path recorded in the circuit header.
    #[arg(long)]
    algebra_path: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "sweep")]
pub struct VerifySweep {
    /// Density bound over F_Q with up to N_MAX variables.
    #[arg(long, num_args = 2, value_names = ["Q", "N_MAX"])]
    density: Option<Vec<u64>>,
    /// Translation and degree bounds on COUNT random circuits with N inputs.
    #[arg(long, num_args = 3, value_names = ["ALGEBRA", "N", "COUNT"])]
    degree: Option<Vec<String>>,
    /// Reduction traces over F_Q with up to N_MAX variables.
    #[arg(long, num_args = 2, value_names = ["Q", "N_MAX"])]
    reduction: Option<Vec<u64>>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    sweep: VerifySweep,
    /// Sample random polynomials even when exhaustion is feasible.
    #[arg(long)]
    random: bool,
    /// Number of random polynomials.
    #[arg(long, default_value_t = 10_000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest circuit size for the degree sweep.
    #[arg(long, default_value_t = 10)]
    max_gates: usize,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false, id = "what")]
pub struct GenWhat {
    /// The example algebra A[h,m] over F_q.
    #[arg(long, num_args = 3, value_names = ["Q", "H", "M"])]
    example: Option<Vec<u64>>,
    /// COUNT random circuits with N inputs and K gates; circuit i uses SEED + i.
    #[arg(long, num_args = 5, value_names = ["ALGEBRA", "N", "K", "COUNT", "SEED"])]
    random_circuits: Option<Vec<String>>,
}

#[derive(Args, Debug)]
pub struct GenArgs {
    #[command(flatten)]
    what: GenWhat,
    /// Output directory.
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    algebra: PathBuf,
    /// Directory of `.cir` files.
    corpus: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "brute,hitting")]
    methods: Vec<MethodArg>,
    #[command(flatten)]
    flags: SolverFlags,
    /// Write the per-instance table as tab-separated text.
    #[arg(long, value_name = "PATH")]
    tsv: Option<PathBuf>,
}

/// An error already mapped to its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.kind() {
            ErrorKind::Usage | ErrorKind::Domain => EXIT_USAGE,
            ErrorKind::Format | ErrorKind::Io => EXIT_FORMAT,
            ErrorKind::Resource => EXIT_RESOURCE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match commands::run(&cli, argv[1..].to_vec()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
