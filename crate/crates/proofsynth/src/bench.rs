//! Benchmark harness: every test goal under each procedure, with running
//! times averaged per guide-to-proof edit distance.

use std::fmt::Write as _;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::{Duration, Instant};

use proofsynth_core::datagen::DatasetEntry;
use proofsynth_core::search::{synthesize_with_oracle, GuideOracle, GuideSpec, Outcome, SynthesisConfig};
use proofsynth_core::token::{encode_term, encode_type, tokenize_term};
use proofsynth_core::tree_edit::CostKind;
use serde::Serialize;

use crate::guide::ProcessGuide;

/// Smallest number of ED-n columns shown, so tables line up across runs.
pub const MIN_BUCKETS: usize = 4;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub index: usize,
    pub goal: String,
    pub procedure: String,
    /// Tree edit distance from the guide to the proof; absent for bf.
    pub guide_distance: Option<usize>,
    pub pops: usize,
    pub pushes: usize,
    pub wall_ms: f64,
    pub outcome: String,
    pub proof: Option<String>,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub procedures: Vec<CostKind>,
    pub guide: GuideSpec,
    pub max_pops: usize,
    pub seed: u64,
    pub jobs: usize,
    pub guide_timeout: Duration,
}

/// Runs every (goal, procedure) case; records come back ordered by goal
/// index, then by procedure order. With an external guide each worker
/// talks to its own guide process.
pub fn run_bench(entries: &[DatasetEntry], config: &BenchConfig) -> anyhow::Result<Vec<BenchRecord>> {
    let cases: Vec<(usize, CostKind)> =
        (0..entries.len()).flat_map(|i| config.procedures.iter().map(move |&k| (i, k))).collect();
    let slots: Mutex<Vec<Option<BenchRecord>>> = Mutex::new(vec![None; cases.len()]);
    let next = AtomicUsize::new(0);
    let jobs = config.jobs.clamp(1, cases.len().max(1));
    thread::scope(|scope| -> anyhow::Result<()> {
        let workers: Vec<_> = (0..jobs)
            .map(|_| {
                scope.spawn(|| -> anyhow::Result<()> {
                    let mut guide = match &config.guide {
                        GuideSpec::External(cmd) => Some(ProcessGuide::spawn(cmd, config.guide_timeout)?),
                        _ => None,
                    };
                    loop {
                        let c = next.fetch_add(1, Ordering::Relaxed);
                        let Some(&(i, kind)) = cases.get(c) else { return Ok(()) };
                        let oracle = guide.as_mut().map(|g| g as &mut dyn GuideOracle);
                        let record = run_case(i, &entries[i], kind, config, oracle)?;
                        slots.lock().expect("no worker panicked")[c] = Some(record);
                    }
                })
            })
            .collect();
        for w in workers {
            w.join().expect("bench worker panicked")?;
        }
        Ok(())
    })?;
    Ok(slots.into_inner().expect("no worker panicked").into_iter().map(|r| r.expect("every case ran")).collect())
}

fn run_case(
    index: usize,
    entry: &DatasetEntry,
    kind: CostKind,
    config: &BenchConfig,
    oracle: Option<&mut dyn GuideOracle>,
) -> anyhow::Result<BenchRecord> {
    let guide = if kind == CostKind::Bf { GuideSpec::Null } else { config.guide.clone() };
    let sc = SynthesisConfig {
        max_pops: config.max_pops,
        seed: config.seed.wrapping_add(index as u64),
        ..SynthesisConfig::new(kind, guide)
    };
    let start = Instant::now();
    let r = synthesize_with_oracle(&entry.goal_type, &sc, Some(&entry.proof), oracle)
        .map_err(|e| anyhow::anyhow!("case {index}: {e}"))?;
    let wall = start.elapsed();
    Ok(BenchRecord {
        index,
        goal: encode_type(&entry.type_tokens),
        procedure: kind.tag().into(),
        guide_distance: r.guide_distance,
        pops: r.pops,
        pushes: r.pushes,
        wall_ms: wall.as_secs_f64() * 1e3,
        outcome: r.outcome.tag(),
        proof: match &r.outcome {
            Outcome::Proved(p) => Some(encode_term(&tokenize_term(p))),
            _ => None,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProcedureSummary {
    pub procedure: String,
    pub cases: usize,
    pub proved: usize,
    /// Mean wall time in ms of the proved cases at guide distance n; `None` if there are none.
    pub ed_means_ms: Vec<Option<f64>>,
    pub sum_ms: f64,
}

/// Per-procedure rows in first-appearance order, all with the same number of ED columns.
pub fn summarize(records: &[BenchRecord]) -> Vec<ProcedureSummary> {
    let width = records.iter().filter_map(|r| r.guide_distance).max().map_or(0, |d| d + 1).max(MIN_BUCKETS);
    let mut order: Vec<&str> = Vec::new();
    for r in records {
        if !order.contains(&r.procedure.as_str()) {
            order.push(&r.procedure);
        }
    }
    order
        .into_iter()
        .map(|p| {
            let mine: Vec<&BenchRecord> = records.iter().filter(|r| r.procedure == p).collect();
            let ed_means_ms = (0..width)
                .map(|n| {
                    let times: Vec<f64> =
                        mine.iter().filter(|r| r.guide_distance == Some(n)).map(|r| r.wall_ms).collect();
                    (!times.is_empty()).then(|| times.iter().sum::<f64>() / times.len() as f64)
                })
                .collect();
            ProcedureSummary {
                procedure: p.into(),
                cases: mine.len(),
                proved: mine.iter().filter(|r| r.proof.is_some()).count(),
                ed_means_ms,
                sum_ms: mine.iter().map(|r| r.wall_ms).sum(),
            }
        })
        .collect()
}

pub fn render_table(rows: &[ProcedureSummary]) -> String {
    let width = rows.first().map_or(MIN_BUCKETS, |r| r.ed_means_ms.len());
    let mut header = vec!["procedure".to_string(), "cases".into(), "proved".into()];
    header.extend((0..width).map(|n| format!("ED-{n}")));
    header.push("Sum".into());
    let mut lines = vec![header];
    for r in rows {
        let mut line = vec![r.procedure.clone(), r.cases.to_string(), r.proved.to_string()];
        line.extend(r.ed_means_ms.iter().map(|m| m.map_or_else(|| "N/A".into(), |v| format!("{v:.3}"))));
        line.push(format!("{:.3}", r.sum_ms));
        lines.push(line);
    }
    align(&lines)
}

/// Left-aligns the first column and right-aligns the rest.
pub fn align(lines: &[Vec<String>]) -> String {
    let cols = lines.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| lines.iter().filter_map(|l| l.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for l in lines {
        for (c, cell) in l.iter().enumerate() {
            if c == 0 {
                let _ = write!(out, "{cell:<w$}", w = widths[c]);
            } else {
                let _ = write!(out, "  {cell:>w$}", w = widths[c]);
            }
        }
        out.push('\n');
    }
    out
}
