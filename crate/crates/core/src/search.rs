//! Guided best-first proof search.
//!
//! Candidates are partial terms. Each step pops the cheapest candidate and, if
//! it still has holes, fills its leftmost-outermost hole with every shallow
//! context, keeping the results that are βη-normal, partially typable at the
//! goal and within the size bound.

use alloc::collections::{BTreeSet, BinaryHeap};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::fmt;
use core::time::Duration;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{canonical_key, find_beta_eta_redex, Term, TypeExpr, VarName};
use crate::repair::nearest_term;
use crate::token::{tokenize_type, Token};
use crate::tree_edit::{tree_edit_distance, CostKind, Coster};
use crate::typing::{check_partial, Skel, TypingContext};

pub const DEFAULT_MAX_CANDIDATE_SIZE: usize = 12;
pub const DEFAULT_MAX_POPS: usize = 100_000;

/// A depth-one term whose holes are the only unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShallowContext {
    UseVar(VarName),
    Lam(VarName),
    App,
    Pair,
    CasePairOn(VarName, VarName),
    InjL,
    InjR,
    CaseSumOn(VarName, VarName),
}

impl ShallowContext {
    /// The context as a term, holes included.
    pub fn to_term(&self) -> Term {
        use Term::Hole;
        let h = || alloc::boxed::Box::new(Hole);
        match self {
            ShallowContext::UseVar(x) => Term::Var(x.clone()),
            ShallowContext::Lam(x) => Term::Lam(x.clone(), h()),
            ShallowContext::App => Term::App(h(), h()),
            ShallowContext::Pair => Term::Pair(h(), h()),
            ShallowContext::CasePairOn(x, y) => Term::CasePair(h(), x.clone(), y.clone(), h()),
            ShallowContext::InjL => Term::InjL(h()),
            ShallowContext::InjR => Term::InjR(h()),
            ShallowContext::CaseSumOn(x, y) => Term::CaseSum(h(), x.clone(), h(), y.clone(), h()),
        }
    }

    /// Every context usable at a hole with `scope` in scope, in generation
    /// order. `fresh` is the first unused binder index.
    pub fn all(scope: &[VarName], fresh: usize) -> Vec<ShallowContext> {
        let mut seen = BTreeSet::new();
        let mut out: Vec<ShallowContext> =
            scope.iter().filter(|x| seen.insert((*x).clone())).map(|x| ShallowContext::UseVar(x.clone())).collect();
        let (x, y) = (VarName::indexed(fresh), VarName::indexed(fresh + 1));
        out.push(ShallowContext::Lam(x.clone()));
        out.push(ShallowContext::App);
        out.push(ShallowContext::Pair);
        out.push(ShallowContext::CasePairOn(x.clone(), y.clone()));
        out.push(ShallowContext::InjL);
        out.push(ShallowContext::InjR);
        out.push(ShallowContext::CaseSumOn(x, y));
        out
    }
}

/// Smallest `k` such that no `x_j` with `j ≥ k` occurs in `t`.
fn next_fresh_index(t: &Term) -> usize {
    t.all_names().iter().filter_map(VarName::index).map(|i| i + 1).max().unwrap_or(0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchError {
    NoHole,
    InvalidConfig(&'static str),
    MissingReference,
    /// An external guide was requested without an oracle to ask.
    NoOracle,
    Guide(String),
}

impl fmt::Display for SearchError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchError::NoHole => f.write_str("no hole to fill"),
            SearchError::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            SearchError::MissingReference => f.write_str("a corrupted-oracle guide needs a reference proof"),
            SearchError::NoOracle => f.write_str("an external guide needs an oracle"),
            SearchError::Guide(msg) => write!(f, "guide failed: {msg}"),
        }
    }
}

impl core::error::Error for SearchError {}

/// One-step refinements of `n` at its leftmost-outermost hole that survive
/// the redex, typing and size filters, deduplicated up to α.
pub fn gen_candidates(n: &Term, goal: &TypeExpr, max_size: usize) -> Result<Vec<Term>, SearchError> {
    gen_candidates_skel(n, &Skel::from(goal), max_size)
}

fn gen_candidates_skel(n: &Term, goal: &Skel, max_size: usize) -> Result<Vec<Term>, SearchError> {
    let path = n.first_hole().ok_or(SearchError::NoHole)?;
    let scope = n.scope_at(&path);
    let ctx = TypingContext::new();
    let mut keys = BTreeSet::new();
    let mut out = Vec::new();
    for c in ShallowContext::all(&scope, next_fresh_index(n)) {
        let filler = c.to_term();
        if n.size() - 1 + filler.size() > max_size {
            continue;
        }
        let candidate = n.replace_at(&path, filler).expect("hole path is valid");
        if find_beta_eta_redex(&candidate).is_some() || !check_partial(&ctx, &candidate, goal) {
            continue;
        }
        if keys.insert(canonical_key(&candidate)) {
            out.push(candidate);
        }
    }
    Ok(out)
}

/// Min-heap of candidates by cost, first-in first-out among equal costs.
#[derive(Default)]
pub struct CandidateQueue {
    heap: BinaryHeap<Reverse<QueueEntry>>,
    counter: u64,
}

struct QueueEntry {
    cost: usize,
    tiebreak: u64,
    term: Term,
}

impl PartialEq for QueueEntry {
    fn eq(&self, other: &Self) -> bool {
        (self.cost, self.tiebreak) == (other.cost, other.tiebreak)
    }
}

impl Eq for QueueEntry {}

impl Ord for QueueEntry {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.cost, self.tiebreak).cmp(&(other.cost, other.tiebreak))
    }
}

impl PartialOrd for QueueEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl CandidateQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, cost: usize, term: Term) {
        let tiebreak = self.counter;
        self.counter += 1;
        self.heap.push(Reverse(QueueEntry { cost, tiebreak, term }));
    }

    /// The cheapest entry as `(cost, tiebreak, term)`.
    pub fn pop(&mut self) -> Option<(usize, u64, Term)> {
        self.heap.pop().map(|Reverse(e)| (e.cost, e.tiebreak, e.term))
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }
}

/// Where the guide term comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GuideSpec {
    Null,
    Fixed(Term),
    /// The reference proof after this many random label edits.
    CorruptedOracle(usize),
    /// An external process; the string is its command line.
    External(String),
}

/// Anything that answers a goal's token sequence with a guessed term's tokens.
pub trait GuideOracle {
    /// `Ok(None)` means the oracle declined to guess.
    fn guess(&mut self, goal: &[Token]) -> Result<Option<Vec<Token>>, String>;
}

/// A guide term ready for costing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolvedGuide {
    pub term: Term,
    /// The oracle's raw reply, when there was one.
    pub raw_tokens: Option<Vec<Token>>,
    /// Edits `nearest_term` needed to make the reply a term.
    pub repair_distance: usize,
}

impl ResolvedGuide {
    fn plain(term: Term) -> Self {
        ResolvedGuide { term, raw_tokens: None, repair_distance: 0 }
    }
}

/// Label-only corruption: each edit renames one variable occurrence to a
/// different binder name of the term (or a fresh one), or swaps one
/// injection for the other. A single edit is at tree edit distance 1.
pub fn corrupt(reference: &Term, k: usize, seed: u64) -> Term {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = reference.clone();
    for _ in 0..k {
        let mut sites = Vec::new();
        collect_sites(&t, &mut Vec::new(), &mut sites);
        if sites.is_empty() {
            break;
        }
        let path = sites[rng.gen_range(0..sites.len())].clone();
        let node = t.subterm_mut(&path).expect("site path is valid");
        match node {
            Term::Var(x) => {
                let mut names: Vec<VarName> = reference.all_names().into_iter().collect();
                names.push(VarName::indexed(next_fresh_index(reference)));
                names.retain(|n| n != x);
                *x = names[rng.gen_range(0..names.len())].clone();
            }
            Term::InjL(inner) => *node = Term::InjR(core::mem::replace(inner, alloc::boxed::Box::new(Term::Hole))),
            Term::InjR(inner) => *node = Term::InjL(core::mem::replace(inner, alloc::boxed::Box::new(Term::Hole))),
            _ => unreachable!("only variables and injections are sites"),
        }
    }
    t
}

fn collect_sites(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if matches!(t, Term::Var(_) | Term::InjL(_) | Term::InjR(_)) {
        out.push(path.clone());
    }
    for (i, c) in t.children().into_iter().enumerate() {
        path.push(i);
        collect_sites(c, path, out);
        path.pop();
    }
}

/// Produces the guide term for `goal`. External guides are asked through
/// `oracle` and their reply is repaired into a term; a declined guess
/// becomes the empty guide.
pub fn make_guide(
    goal: &TypeExpr,
    spec: &GuideSpec,
    reference: Option<&Term>,
    seed: u64,
    oracle: Option<&mut dyn GuideOracle>,
) -> Result<ResolvedGuide, SearchError> {
    match spec {
        GuideSpec::Null => Ok(ResolvedGuide::plain(Term::Hole)),
        GuideSpec::Fixed(t) => Ok(ResolvedGuide::plain(t.clone())),
        GuideSpec::CorruptedOracle(k) => {
            let reference = reference.ok_or(SearchError::MissingReference)?;
            Ok(ResolvedGuide::plain(corrupt(reference, *k, seed)))
        }
        GuideSpec::External(_) => {
            let oracle = oracle.ok_or(SearchError::NoOracle)?;
            match oracle.guess(&tokenize_type(goal)).map_err(SearchError::Guide)? {
                None => Ok(ResolvedGuide::plain(Term::Hole)),
                Some(tokens) => {
                    let repair = nearest_term(&tokens);
                    Ok(ResolvedGuide { term: repair.term, raw_tokens: Some(tokens), repair_distance: repair.distance })
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisConfig {
    pub cost_kind: CostKind,
    pub max_pops: usize,
    pub max_candidate_size: usize,
    pub seed: u64,
    pub guide: GuideSpec,
    pub record_trace: bool,
}

impl Default for SynthesisConfig {
    fn default() -> Self {
        SynthesisConfig {
            cost_kind: CostKind::Bf,
            max_pops: DEFAULT_MAX_POPS,
            max_candidate_size: DEFAULT_MAX_CANDIDATE_SIZE,
            seed: 0,
            guide: GuideSpec::Null,
            record_trace: false,
        }
    }
}

impl SynthesisConfig {
    pub fn new(cost_kind: CostKind, guide: GuideSpec) -> Self {
        SynthesisConfig { cost_kind, guide, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        if self.max_pops == 0 {
            return Err(SearchError::InvalidConfig("max_pops must be positive"));
        }
        if self.max_candidate_size == 0 {
            return Err(SearchError::InvalidConfig("max_candidate_size must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Proved(Term),
    /// `max_pops` candidates were investigated without finding a proof.
    BudgetExceeded,
    /// Every candidate within the size bound was investigated.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub cost: usize,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynthesisResult {
    pub outcome: Outcome,
    pub pops: usize,
    pub pushes: usize,
    pub guide: ResolvedGuide,
    /// Tree edit distance between the guide and the proof.
    pub guide_distance: Option<usize>,
    /// Wall time, when the caller measured it.
    pub elapsed: Option<Duration>,
    /// Popped candidates in order, when requested.
    pub trace: Vec<TraceEntry>,
}

impl SynthesisResult {
    pub fn proof(&self) -> Option<&Term> {
        match &self.outcome {
            Outcome::Proved(t) => Some(t),
            _ => None,
        }
    }
}

/// Resolves the guide, then searches. External guides need
/// [`synthesize_with_oracle`].
pub fn synthesize(
    goal: &TypeExpr,
    config: &SynthesisConfig,
    reference: Option<&Term>,
) -> Result<SynthesisResult, SearchError> {
    synthesize_with_oracle(goal, config, reference, None)
}

pub fn synthesize_with_oracle(
    goal: &TypeExpr,
    config: &SynthesisConfig,
    reference: Option<&Term>,
    oracle: Option<&mut dyn GuideOracle>,
) -> Result<SynthesisResult, SearchError> {
    config.validate()?;
    let guide = make_guide(goal, &config.guide, reference, config.seed, oracle)?;
    Ok(search(goal, config, guide))
}

/// Best-first search from the hole term under a resolved guide.
pub fn search(goal: &TypeExpr, config: &SynthesisConfig, guide: ResolvedGuide) -> SynthesisResult {
    // Candidates are named x0, x1, … in binder preorder; the guide is renamed
    // the same way so that variable labels line up.
    let coster = Coster::new(config.cost_kind, guide.term.canonical_names(), false);
    let goal_skel = Skel::from(goal);
    let mut queue = CandidateQueue::new();
    let mut pushed: BTreeSet<String> = BTreeSet::new();
    let mut visited: BTreeSet<String> = BTreeSet::new();
    let mut trace = Vec::new();
    let (mut pops, mut pushes) = (0usize, 0usize);

    let start = Term::Hole;
    pushed.insert(canonical_key(&start));
    queue.push(coster.cost(&start), start);
    pushes += 1;

    let outcome = loop {
        if pops >= config.max_pops {
            break Outcome::BudgetExceeded;
        }
        let Some((cost, _, n)) = queue.pop() else { break Outcome::Exhausted };
        if !visited.insert(canonical_key(&n)) {
            continue;
        }
        pops += 1;
        if config.record_trace {
            trace.push(TraceEntry { cost, term: n.clone() });
        }
        if n.is_hole_free() {
            break Outcome::Proved(n);
        }
        let candidates =
            gen_candidates_skel(&n, &goal_skel, config.max_candidate_size).expect("popped term has a hole");
        for c in candidates {
            if pushed.insert(canonical_key(&c)) {
                queue.push(coster.cost(&c), c);
                pushes += 1;
            }
        }
    };

    let guide_distance = match (&outcome, config.cost_kind) {
        (Outcome::Proved(p), CostKind::Ed | CostKind::Im) => Some(tree_edit_distance(coster.guide(), p)),
        _ => None,
    };
    SynthesisResult { outcome, pops, pushes, guide, guide_distance, elapsed: None, trace }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Proved(_) => f.write_str("proved"),
            Outcome::BudgetExceeded => f.write_str("budget"),
            Outcome::Exhausted => f.write_str("exhausted"),
        }
    }
}

impl Outcome {
    pub fn tag(&self) -> String {
        self.to_string()
    }
}
