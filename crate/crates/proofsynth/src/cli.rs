//! Command-line interface.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use proofsynth_core::ast::TypeExpr;
use proofsynth_core::datagen::{test_dataset_entries, training_dataset, DatasetConfig, EvalConfig};
use proofsynth_core::repair::{nearest_term_with_budget, DEFAULT_REPAIR_BUDGET};
use proofsynth_core::search::{
    synthesize_with_oracle, GuideOracle, GuideSpec, Outcome, SynthesisConfig, DEFAULT_MAX_CANDIDATE_SIZE,
    DEFAULT_MAX_POPS,
};
use proofsynth_core::token::{encode_term, encode_type, read_term, read_type, tokenize_term, tokenize_type};
use proofsynth_core::tree_edit::CostKind;
use proofsynth_core::typing::{check_closed, infer_type};
use serde::Serialize;

use crate::bench::{render_table, run_bench, summarize, BenchConfig};
use crate::dataset::{read_dataset, write_dataset, Dataset, Header};
use crate::eval::{evaluate, read_outputs, render_report, ReportJson};
use crate::guide::{lex_lenient, serve, ProcessGuide};

/// Exit status when a search or check ran but found no proof.
pub const EXIT_NOT_PROVED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "proofsynth", version, about = "Guided proof synthesis for intuitionistic propositional logic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SeedArg {
    /// Random seed.
    #[arg(long, env = "PROOFSYNTH_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a JSONL dataset of (type, proof) pairs.
    GenDataset {
        /// Number of entries.
        #[arg(short = 'n', value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// Keep only βη-normal proofs.
        #[arg(long)]
        normal_only: bool,
        /// Sample a test set: distinct types, none in the `--exclude` dataset.
        #[arg(long)]
        test: bool,
        /// Dataset whose types a test set must avoid.
        #[arg(long, requires = "test")]
        exclude: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        min_size: usize,
        #[arg(long, default_value_t = 9)]
        max_size: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Output file; standard output if omitted.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
    },
    /// Search for a proof of a type.
    Synthesize {
        /// Goal type, e.g. "a * b -> b * a".
        goal: String,
        #[arg(long, value_enum, default_value_t = Cost::Bf)]
        cost: Cost,
        /// null | fixed:<term tokens> | corrupt:<k> | exec:<command line>
        #[arg(long, default_value = "null", value_parser = parse_guide)]
        guide: GuideArg,
        /// Reference proof, required by corrupt:<k>.
        #[arg(long)]
        reference: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_POPS)]
        max_pops: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_CANDIDATE_SIZE)]
        max_size: usize,
        #[command(flatten)]
        seed: SeedArg,
        /// Seconds to wait for each guide reply.
        #[arg(long, default_value_t = 30)]
        guide_timeout: u64,
        #[arg(long)]
        json: bool,
    },
    /// Type-check a term, or infer its principal type.
    Check {
        term: String,
        /// Goal type; without it the principal type is printed.
        #[arg(long = "type")]
        goal: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Turn a token string into the nearest term.
    Repair {
        tokens: String,
        #[arg(long, default_value_t = DEFAULT_REPAIR_BUDGET)]
        budget: usize,
        #[arg(long)]
        json: bool,
    },
    /// Score guessed proofs (one per line) against a test set.
    Eval {
        #[arg(long)]
        outputs: PathBuf,
        #[arg(long)]
        testset: PathBuf,
        #[arg(long, default_value_t = 9)]
        max_proof_size: usize,
        #[arg(long)]
        json: bool,
    },
    /// Run procedures over a test set and tabulate times per guide distance.
    Bench {
        #[arg(long)]
        testset: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Cost::Bf, Cost::Ed, Cost::Im])]
        procedures: Vec<Cost>,
        #[arg(long, default_value = "corrupt:1", value_parser = parse_guide)]
        guide: GuideArg,
        #[arg(long, default_value_t = DEFAULT_MAX_POPS)]
        max_pops: usize,
        #[command(flatten)]
        seed: SeedArg,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long, default_value_t = 30)]
        guide_timeout: u64,
        /// Per-case records as JSONL.
        #[arg(short = 'o', long)]
        output: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Answer guide requests on standard input with proofs memorized from a dataset.
    ServeGuide {
        #[arg(long)]
        dataset: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Cost {
    Bf,
    Ed,
    Im,
}

impl From<Cost> for CostKind {
    fn from(c: Cost) -> Self {
        match c {
            Cost::Bf => CostKind::Bf,
            Cost::Ed => CostKind::Ed,
            Cost::Im => CostKind::Im,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GuideArg(pub GuideSpec);

pub fn parse_guide(s: &str) -> Result<GuideArg, String> {
    let spec = match s.split_once(':') {
        None if s == "null" => GuideSpec::Null,
        Some(("fixed", tokens)) => {
            let toks = lex_lenient(tokens);
            GuideSpec::Fixed(nearest_term_with_budget(&toks, DEFAULT_REPAIR_BUDGET).term)
        }
        Some(("corrupt", k)) => GuideSpec::CorruptedOracle(k.parse().map_err(|e| format!("corrupt:<k>: {e}"))?),
        Some(("exec", cmd)) if !cmd.trim().is_empty() => GuideSpec::External(cmd.into()),
        _ => return Err(format!("unknown guide `{s}`; expected null, fixed:<tokens>, corrupt:<k> or exec:<command>")),
    };
    Ok(GuideArg(spec))
}

pub fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::GenDataset { n, normal_only, test, exclude, min_size, max_size, seed, output } => {
            let config = DatasetConfig { min_size, max_size, ..DatasetConfig::normal_only(normal_only) };
            anyhow::ensure!(2 <= min_size && min_size <= max_size, "need 2 <= --min-size <= --max-size");
            let n = usize::try_from(n)?;
            let entries = if test {
                let excluded: Vec<TypeExpr> = match &exclude {
                    Some(p) => load_dataset(p)?.entries.into_iter().map(|e| e.goal_type).collect(),
                    None => Vec::new(),
                };
                test_dataset_entries(n, &excluded, &config, seed.seed)?
            } else {
                training_dataset(n, &config, seed.seed)?
            };
            let header = Header::new(seed.seed, normal_only, entries.len());
            match output {
                Some(p) => {
                    let f = File::create(&p).with_context(|| format!("cannot create {}", p.display()))?;
                    write_dataset(BufWriter::new(f), &header, &entries)?
                }
                None => write_dataset(io::stdout().lock(), &header, &entries)?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Synthesize { goal, cost, guide, reference, max_pops, max_size, seed, guide_timeout, json } => {
            let goal = read_type(&goal).map_err(|e| anyhow::anyhow!("goal type: {e}"))?;
            let reference =
                reference.map(|r| read_term(&r).map_err(|e| anyhow::anyhow!("reference term: {e}"))).transpose()?;
            let config = SynthesisConfig {
                cost_kind: cost.into(),
                max_pops,
                max_candidate_size: max_size,
                seed: seed.seed,
                guide: guide.0,
                record_trace: false,
            };
            synthesize_command(&goal, &config, reference.as_ref(), Duration::from_secs(guide_timeout), json)
        }
        Command::Check { term, goal, json } => {
            let term = read_term(&term).map_err(|e| anyhow::anyhow!("term: {e}"))?;
            let (ok, message) = match goal {
                Some(g) => {
                    let g = read_type(&g).map_err(|e| anyhow::anyhow!("type: {e}"))?;
                    let ok = check_closed(&term, &g);
                    (
                        ok,
                        if ok {
                            "ok".to_string()
                        } else {
                            format!("not a proof of {}", encode_type(&tokenize_type(&g)))
                        },
                    )
                }
                None => match infer_type(&term) {
                    Ok(t) => (true, encode_type(&tokenize_type(&t))),
                    Err(e) => (false, e.to_string()),
                },
            };
            if json {
                print_json(&serde_json::json!({ "ok": ok, "message": message }))?;
            } else {
                println!("{message}");
            }
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NOT_PROVED) })
        }
        Command::Repair { tokens, budget, json } => {
            let input = lex_lenient(&tokens);
            let r = nearest_term_with_budget(&input, budget);
            let text = encode_term(&r.tokens);
            let canonical = encode_term(&tokenize_term(&r.term));
            if json {
                print_json(&serde_json::json!({
                    "tokens": text,
                    "term": canonical,
                    "distance": r.distance,
                    "budget_exceeded": r.budget_exceeded,
                    "explored": r.explored,
                }))?;
            } else {
                println!("{text}");
                if canonical != text {
                    println!("canonical: {canonical}");
                }
                println!("distance: {}{}", r.distance, if r.budget_exceeded { " (budget exceeded)" } else { "" });
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Eval { outputs, testset, max_proof_size, json } => {
            let data = load_dataset(&testset)?;
            let f = File::open(&outputs).with_context(|| format!("cannot open {}", outputs.display()))?;
            let lines = read_outputs(BufReader::new(f))?;
            let config = EvalConfig { max_proof_size, ..EvalConfig::default() };
            let report = evaluate(&data.entries, &lines, &config)?;
            if json {
                print_json(&ReportJson::from(&report))?;
            } else {
                print!("{}", render_report(&report));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench { testset, procedures, guide, max_pops, seed, jobs, guide_timeout, output, json } => {
            let data = load_dataset(&testset)?;
            let config = BenchConfig {
                procedures: procedures.into_iter().map(CostKind::from).collect(),
                guide: guide.0,
                max_pops,
                seed: seed.seed,
                jobs,
                guide_timeout: Duration::from_secs(guide_timeout),
            };
            let records = run_bench(&data.entries, &config)?;
            if let Some(p) = output {
                let mut w = BufWriter::new(File::create(&p).with_context(|| format!("cannot create {}", p.display()))?);
                for r in &records {
                    writeln!(w, "{}", serde_json::to_string(r)?)?;
                }
                w.flush()?;
            }
            let rows = summarize(&records);
            if json {
                print_json(&rows)?;
            } else {
                print!("{}", render_table(&rows));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ServeGuide { dataset } => {
            let data = load_dataset(&dataset)?;
            let memo: std::collections::BTreeMap<TypeExpr, Vec<_>> =
                data.entries.iter().map(|e| (e.goal_type.canonical_atoms(), e.term_tokens.clone())).collect();
            serve(
                io::stdin().lock(),
                io::stdout().lock(),
                |goal| {
                    let ty = proofsynth_core::token::parse_type(goal).ok()?;
                    memo.get(&ty.canonical_atoms()).cloned()
                },
                |m| eprintln!("{m}"),
            )?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Serialize)]
struct SynthesisReport {
    outcome: String,
    proof: Option<String>,
    pops: usize,
    pushes: usize,
    cost: String,
    guide: String,
    guide_repair_distance: usize,
    guide_distance: Option<usize>,
    elapsed_ms: f64,
}

fn synthesize_command(
    goal: &TypeExpr,
    config: &SynthesisConfig,
    reference: Option<&proofsynth_core::ast::Term>,
    guide_timeout: Duration,
    json: bool,
) -> anyhow::Result<ExitCode> {
    let mut process = match &config.guide {
        GuideSpec::External(cmd) => Some(ProcessGuide::spawn(cmd, guide_timeout)?),
        _ => None,
    };
    let start = Instant::now();
    let oracle = process.as_mut().map(|g| g as &mut dyn GuideOracle);
    let mut result = synthesize_with_oracle(goal, config, reference, oracle)?;
    result.elapsed = Some(start.elapsed());
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let proof = result.proof().map(|p| encode_term(&tokenize_term(p)));
    let report = SynthesisReport {
        outcome: result.outcome.tag(),
        proof: proof.clone(),
        pops: result.pops,
        pushes: result.pushes,
        cost: config.cost_kind.tag().into(),
        guide: encode_term(&tokenize_term(&result.guide.term)),
        guide_repair_distance: result.guide.repair_distance,
        guide_distance: result.guide_distance,
        elapsed_ms,
    };
    if json {
        print_json(&report)?;
    } else {
        match &proof {
            Some(p) => println!("{p}"),
            None => println!("no proof ({})", report.outcome),
        }
        let distance = report.guide_distance.map_or_else(|| "-".into(), |d| d.to_string());
        println!(
            "outcome: {}  pops: {}  pushes: {}  guide distance: {distance}  time: {elapsed_ms:.3} ms",
            report.outcome, report.pops, report.pushes
        );
        println!("guide: {}", report.guide);
    }
    Ok(match result.outcome {
        Outcome::Proved(_) => ExitCode::SUCCESS,
        Outcome::BudgetExceeded | Outcome::Exhausted => ExitCode::from(EXIT_NOT_PROVED),
    })
}

fn load_dataset(path: &Path) -> anyhow::Result<Dataset> {
    let f = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    read_dataset(BufReader::new(f)).with_context(|| format!("reading {}", path.display()))
}

fn print_json<T: Serialize>(value: &T) -> anyhow::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}
