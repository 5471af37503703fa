//! Scores a file of guessed proofs against a test set.

use std::io::BufRead;

use proofsynth_core::datagen::{evaluate_outputs, DatasetEntry, EvalConfig, EvalReport};
use serde::Serialize;

use crate::bench::align;
use crate::guide::lex_lenient;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseJson {
    pub index: usize,
    pub parsable: bool,
    pub typable: bool,
    pub repair_distance: usize,
    pub size: usize,
    pub distance: Option<usize>,
    pub approximate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportJson {
    pub n_total: usize,
    pub n_parsable: usize,
    pub n_typable: usize,
    pub closeness: f64,
    pub n_scored: usize,
    pub cases: Vec<CaseJson>,
}

impl From<&EvalReport> for ReportJson {
    fn from(r: &EvalReport) -> Self {
        ReportJson {
            n_total: r.n_total,
            n_parsable: r.n_parsable,
            n_typable: r.n_typable,
            closeness: r.closeness,
            n_scored: r.n_scored,
            cases: r
                .cases
                .iter()
                .enumerate()
                .map(|(index, c)| CaseJson {
                    index,
                    parsable: c.parsable,
                    typable: c.typable,
                    repair_distance: c.repair_distance,
                    size: c.size,
                    distance: c.distance,
                    approximate: c.approximate,
                })
                .collect(),
        }
    }
}

/// One output line per test entry, in order. A line may be empty or malformed.
pub fn read_outputs<R: BufRead>(input: R) -> std::io::Result<Vec<String>> {
    input.lines().collect()
}

pub fn evaluate(entries: &[DatasetEntry], outputs: &[String], config: &EvalConfig) -> anyhow::Result<EvalReport> {
    anyhow::ensure!(
        entries.len() == outputs.len(),
        "{} outputs for {} test entries; the files must align line by line",
        outputs.len(),
        entries.len()
    );
    let cases: Vec<_> = entries.iter().zip(outputs).map(|(e, o)| (e.goal_type.clone(), lex_lenient(o))).collect();
    Ok(evaluate_outputs(&cases, config))
}

pub fn render_report(r: &EvalReport) -> String {
    let pct = |k: usize| if r.n_total == 0 { 0.0 } else { 100.0 * k as f64 / r.n_total as f64 };
    let approximate = r.cases.iter().filter(|c| c.approximate).count();
    let lines = vec![
        vec!["metric".to_string(), "value".into()],
        vec!["cases".into(), r.n_total.to_string()],
        vec!["parsable".into(), format!("{} ({:.1}%)", r.n_parsable, pct(r.n_parsable))],
        vec!["typable".into(), format!("{} ({:.1}%)", r.n_typable, pct(r.n_typable))],
        vec!["closeness per node".into(), format!("{:.4}", r.closeness)],
        vec!["scored".into(), r.n_scored.to_string()],
        vec!["approximate".into(), approximate.to_string()],
    ];
    align(&lines)
}
