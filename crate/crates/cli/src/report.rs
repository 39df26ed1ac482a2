//! The machine-readable run report. Every knob that affects a run is echoed
//! in `config`, so a report is enough to reproduce it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: String,
    pub command: Vec<String>,
    pub config: Config,
    pub result: Outcome,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Config {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub d_choice: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget_secs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_candidates: Option<u64>,
    pub jobs: usize,
    pub max_points: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Solve(SolveSummary),
    Translate(TranslateSummary),
    Encode(EncodeSummary),
    Verify(VerifySummary),
    Gen(GenSummary),
    Bench(BenchSummary),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub status: String,
    pub witness: Option<Vec<String>>,
    pub candidates_checked: u64,
    pub trials: u64,
    pub gate_evals: u64,
    pub elapsed_secs: f64,
    /// Big integers are kept as decimal strings.
    pub d: Option<String>,
    pub hitting_set_size: Option<String>,
    pub density: Option<f64>,
    pub planned_trials: Option<u64>,
    pub capped: Option<bool>,
    pub failing_factor: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranslateSummary {
    pub variables: Vec<String>,
    pub system: Vec<String>,
    pub f: String,
    pub deg_f: usize,
    pub refined: String,
    pub coarse: String,
    pub level_degrees: Vec<usize>,
    pub aggregate: String,
    pub aggregate_bound: String,
    pub assignments: u64,
    pub mismatches: u64,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EncodeSummary {
    pub equation: String,
    pub q: u64,
    pub h: usize,
    pub m: usize,
    pub gates: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifySummary {
    pub sweep: String,
    pub exhaustive: bool,
    pub checked: u64,
    pub details: Vec<(String, String)>,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenSummary {
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub instance: String,
    pub method: String,
    pub status: String,
    pub agrees: Option<bool>,
    pub candidates_checked: u64,
    pub hitting_set_size: Option<String>,
    pub trials: u64,
    pub planned_trials: Option<u64>,
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchAggregate {
    pub method: String,
    pub instances: usize,
    pub agreement: f64,
    pub budget_exhausted: usize,
    pub max_candidates: u64,
    pub total_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub oracle: String,
    pub rows: Vec<BenchRow>,
    pub aggregate: Vec<BenchAggregate>,
}

impl BenchSummary {
    pub const HEADER: [&'static str; 9] = [
        "instance",
        "method",
        "status",
        "agrees",
        "candidates",
        "hitting_set_size",
        "trials",
        "planned_trials",
        "wall_ms",
    ];

    /// One tab-separated line per instance and method, header first.
    pub fn tsv(&self) -> String {
        let mut out = Self::HEADER.join("\t");
        out.push('\n');
        for r in &self.rows {
            let cells = [
                r.instance.clone(),
                r.method.clone(),
                r.status.clone(),
                r.agrees.map_or("-".into(), |a| a.to_string()),
                r.candidates_checked.to_string(),
                r.hitting_set_size.clone().unwrap_or_else(|| "-".into()),
                r.trials.to_string(),
                r.planned_trials.map_or("-".into(), |n| n.to_string()),
                format!("{:.3}", r.wall_ms),
            ];
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_round_trips() {
        let r = RunReport {
            version: "0.1.0".into(),
            command: vec!["solve".into(), "a.alg".into()],
            config: Config {
                method: Some("mc".into()),
                epsilon: Some(0.01),
                seed: Some(7),
                jobs: 1,
                max_points: 1 << 24,
                ..Config::default()
            },
            result: Outcome::Solve(SolveSummary {
                status: "SAT".into(),
                witness: Some(vec!["01".into()]),
                hitting_set_size: Some("16".into()),
                ..SolveSummary::default()
            }),
        };
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: RunReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
    }
}
