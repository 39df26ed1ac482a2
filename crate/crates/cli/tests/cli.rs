use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SAT: &str = "inputs 2\ng3 = p1 g1 g2\ng4 = const 10\noutput g3 g4\n";
const UNSAT: &str = "inputs 2\ng3 = const 10\ng4 = const 00\noutput g3 g4\n";
const P1_ZERO: &str = "inputs 2\ng3 = p1 g1 g2\ng4 = const 00\noutput g3 g4\n";

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supernil"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Temp dir holding a22.alg plus the sample circuits.
fn workspace() -> TempDir {
    let dir = TempDir::new().unwrap();
    let o = run(dir.path(), &["gen", "--example", "2", "2", "2"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for (name, text) in [("sat.cir", SAT), ("unsat.cir", UNSAT), ("p1.cir", P1_ZERO)] {
        fs::write(dir.path().join(name), text).unwrap();
    }
    dir
}

#[test]
fn gen_example_matches_definition() {
    let dir = workspace();
    let text = fs::read_to_string(dir.path().join("a22.alg")).unwrap();
    assert!(text.starts_with("ALGEBRA v1\nq 2\nalphas 1 1\n"));
    assert!(text.contains("op + 2 builtin-sum"));
    assert!(text.contains("tail poly x2*y2"));
    assert_eq!(code(&run(dir.path(), &["gen", "--example", "1", "2", "2"])), 1);
}

#[test]
fn solve_exit_codes() {
    let dir = workspace();
    let d = dir.path();
    let o = run(d, &["solve", "a22.alg", "sat.cir", "--method", "hitting"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("status: SAT\nwitness: 01 01\n"), "{}", stdout(&o));
    let o = run(d, &["solve", "a22.alg", "sat.cir", "--method", "hitting", "--status-exit"]);
    assert_eq!(code(&o), 10);
    let o = run(d, &["solve", "a22.alg", "unsat.cir", "--method", "brute", "--status-exit"]);
    assert_eq!(code(&o), 20);
    let o = run(d, &["solve", "a22.alg", "unsat.cir", "--method", "mc", "--status-exit"]);
    assert_eq!(code(&o), 20);
    assert!(stdout(&o).contains("PROBABLY_UNSAT"));
    assert_eq!(code(&run(d, &["solve", "a22.alg", "sat.cir", "--method", "mc", "--epsilon", "2"])), 1);
    assert_eq!(code(&run(d, &["solve", "a22.alg", "sat.cir", "--epsilon", "0.1"])), 1);
    assert_eq!(code(&run(d, &["solve", "a22.alg", "sat.cir", "--method", "quantum"])), 1);
    assert_eq!(code(&run(d, &["solve"])), 1);
    assert_eq!(code(&run(d, &["--help"])), 0);
}

#[test]
fn solve_error_codes() {
    let dir = workspace();
    let d = dir.path();
    assert_eq!(code(&run(d, &["solve", "a22.alg", "missing.cir"])), 2);
    fs::write(d.join("bad.cir"), "inputs 2\ng3 = foo g1 g2\noutput g3 g1\n").unwrap();
    let o = run(d, &["solve", "a22.alg", "bad.cir"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    // no algebra and no header
    assert_eq!(code(&run(d, &["solve", "sat.cir"])), 1);
    let o = run(d, &["solve", "a22.alg", "unsat.cir", "--method", "brute", "--max-points", "4"]);
    assert_eq!(code(&o), 3);
    let o = run(d, &["solve", "a22.alg", "unsat.cir", "--max-candidates", "3"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn report_echoes_config_and_round_trips() {
    let dir = workspace();
    let d = dir.path();
    let args = ["solve", "a22.alg", "p1.cir", "--method", "mc", "--seed", "9", "--report", "r.json"];
    let o = run(d, &args);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 9);
    assert_eq!(report["config"]["epsilon"], 0.01);
    assert_eq!(report["config"]["method"], "mc");
    assert_eq!(report["result"]["planned_trials"], 295);
    // rerunning from the echoed command reproduces the answer
    let echoed: Vec<String> = report["command"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let echoed: Vec<&str> = echoed.iter().map(String::as_str).collect();
    let again = run(d, &[&echoed[..echoed.len() - 2], &["--json"]].concat());
    let second: serde_json::Value = serde_json::from_str(&stdout(&again)).unwrap();
    assert_eq!(second["result"]["witness"], report["result"]["witness"]);
    assert_eq!(second["result"]["trials"], report["result"]["trials"]);
}

#[test]
fn translate_prints_f_and_degrees() {
    let dir = workspace();
    let o = run(dir.path(), &["translate", "a22.alg", "p1.cir"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("f = 1 + x2*y2\n"), "{out}");
    assert!(out.contains("deg 2 <= 4 <= 16\n"), "{out}");
    assert!(out.contains("aggregate 2 <= 4"), "{out}");
}

#[test]
fn encode_and_solve() {
    let dir = workspace();
    let d = dir.path();
    let o = run(d, &["encode", "x1*x2 = 1", "--q", "2", "--h", "2", "--m", "2", "-o", "eq.cir"]);
    assert_eq!(code(&o), 0);
    assert_eq!(fs::read_to_string(d.join("eq.cir")).unwrap(), format!("CIRCUIT v1\n{SAT}"));
    let o = run(d, &["solve", "a22.alg", "eq.cir", "--status-exit"]);
    assert_eq!(code(&o), 10);
    let o = run(d, &["encode", "x1*x2*x3 = 1", "--q", "2", "--h", "2", "--m", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("deg too high for this h,m"));
    assert_eq!(code(&run(d, &["encode", "x1*x2", "--q", "2", "--h", "2", "--m", "2"])), 1);
    assert_eq!(code(&run(d, &["encode", "x1 = 1", "--q", "4", "--h", "2", "--m", "2"])), 1);
}

#[test]
fn verify_sweeps() {
    let dir = workspace();
    let d = dir.path();
    let o = run(d, &["verify", "--density", "2", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("256 functions checked, 0 violations"), "{}", stdout(&o));
    let o = run(d, &["verify", "--degree", "a22.alg", "2", "100"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("100 circuits, max deg f = "), "{}", stdout(&o));
    let o = run(d, &["verify", "--reduction", "2", "3"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 violations"));
    let o = run(d, &["verify", "--density", "3", "2", "--random", "--count", "50"]);
    assert!(stdout(&o).starts_with("50 random polynomials checked, 0 violations"));
    assert_eq!(code(&run(d, &["verify"])), 1);
    assert_eq!(code(&run(d, &["verify", "--density", "2", "3", "--reduction", "2", "3"])), 1);
    let o = run(d, &["verify", "--degree", "a22.alg", "2", "5", "--max-points", "8"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn gen_corpus_is_reproducible_and_bench_agrees() {
    let dir = workspace();
    let d = dir.path();
    let args = ["gen", "--random-circuits", "a22.alg", "2", "8", "100", "7", "-o"];
    assert_eq!(code(&run(d, &[&args[..], &["one"]].concat())), 0);
    assert_eq!(code(&run(d, &[&args[..], &["two"]].concat())), 0);
    let list = |sub: &str| -> Vec<PathBuf> {
        let mut v: Vec<PathBuf> = fs::read_dir(d.join(sub)).unwrap().map(|e| e.unwrap().path()).collect();
        v.sort();
        v
    };
    let (one, two) = (list("one"), list("two"));
    assert_eq!(one.len(), 100);
    for (a, b) in one.iter().zip(&two) {
        assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap());
    }
    // the header lets a circuit be solved on its own
    assert_eq!(code(&run(d, &["solve", "one/c0000.cir"])), 0);

    let o = run(d, &["bench", "a22.alg", "one", "--methods", "brute,hitting,mc", "--tsv", "b.tsv", "--json"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for agg in report["result"]["aggregate"].as_array().unwrap() {
        assert_eq!(agg["agreement"], 100.0, "{agg}");
        assert_eq!(agg["instances"], 100);
    }
    for row in report["result"]["rows"].as_array().unwrap() {
        match row["method"].as_str().unwrap() {
            "hitting" => assert!(row["candidates_checked"].as_u64().unwrap() <= 16),
            "mc" => assert_eq!(row["planned_trials"], 295),
            _ => {}
        }
    }
    let tsv = fs::read_to_string(d.join("b.tsv")).unwrap();
    assert_eq!(tsv.lines().count(), 301);
}

#[test]
fn product_solving() {
    let dir = workspace();
    let d = dir.path();
    fs::write(
        d.join("prod.cir"),
        "algebra a22.alg a22.alg\ninputs 1\ng2 = const 00|10\ng3 = const 00|00\noutput g2 g3\n",
    )
    .unwrap();
    for method in ["brute", "hitting", "mc"] {
        let o = run(d, &["solve", "prod.cir", "--method", method, "--status-exit"]);
        assert_eq!(code(&o), 20, "{method}");
        assert!(stdout(&o).contains("failing factor: 2"));
    }
    fs::write(d.join("id.cir"), "inputs 1\noutput g1 g1\n").unwrap();
    let o = run(d, &["solve", "a22.alg", "a22.alg", "id.cir", "--status-exit"]);
    assert_eq!(code(&o), 10);
    assert!(stdout(&o).contains("witness: 00|00"));
}
