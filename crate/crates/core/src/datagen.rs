//! Exact counting, uniform sampling and enumeration of closed well-typed
//! terms by size, plus dataset construction and output evaluation.
//!
//! Terms are built in preorder by filling the leftmost hole. A generation
//! state is the remaining node budget together with the pending holes, each
//! carrying its context types, goal type and normal-form restriction. After
//! each step the substitution is applied and metavariables are renamed in
//! first-occurrence order, so states that admit the same completions share one
//! memoized count. Variables are chosen by context position, so every choice
//! sequence yields a distinct α-class.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ast::{Term, TypeExpr, VarName};
use crate::repair::nearest_term;
use crate::token::{parse_term, tokenize_term, tokenize_type, Token};
use crate::tree_edit::tree_edit_distance;
use crate::typing::{check_closed, infer_type, Skel, Substitution};

/// Restriction on what may fill a hole, so that only βη-normal terms are built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Tag {
    Free,
    /// Function position: no abstraction.
    NoLam,
    /// Product scrutinee: no pair.
    NoPair,
    /// Sum scrutinee: no injection.
    NoInj,
    /// Body of the abstraction binding this level.
    LamBody(u8),
    /// Argument of an application in a `LamBody`; the bare variable is
    /// banned unless the function mentions it.
    EtaArg {
        level: u8,
        used: bool,
    },
    /// Body of a pair case binding these levels.
    PairBody(u8, u8),
    /// Choosing this variable arms the next pending hole.
    ArmIfVar(u8),
    /// Second component under `PairBody`; once armed, this variable is banned.
    PairSnd {
        level: u8,
        armed: bool,
    },
    /// Left arm of a sum case.
    SumLeft(u8),
    /// Right arm of a sum case; once armed, `Right` of this variable is banned.
    SumRight {
        level: u8,
        armed: bool,
    },
    ForbidVar(u8),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct PendingHole {
    ctx: Vec<Skel>,
    goal: Skel,
    tag: Tag,
}

/// Canonical generation state.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct State {
    remaining: u8,
    holes: Vec<PendingHole>,
}

/// One generation step at the leftmost pending hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    /// The variable bound at this context position, outermost first.
    UseVar(usize),
    Lam,
    App,
    Pair,
    CasePair,
    InjL,
    InjR,
    CaseSum,
}

const CONSTRUCTOR_STEPS: [Step; 7] =
    [Step::Lam, Step::App, Step::Pair, Step::CasePair, Step::InjL, Step::InjR, Step::CaseSum];

impl Step {
    fn children(self) -> usize {
        match self {
            Step::UseVar(_) => 0,
            Step::Lam | Step::InjL | Step::InjR => 1,
            Step::App | Step::Pair | Step::CasePair => 2,
            Step::CaseSum => 3,
        }
    }

    /// The filler for this step in a term whose next fresh binder index is `fresh`.
    fn filler(self, scope: &[VarName], fresh: usize) -> Term {
        let h = Term::Hole;
        let x = || VarName::indexed(fresh);
        let y = || VarName::indexed(fresh + 1);
        match self {
            Step::UseVar(i) => Term::Var(scope[i].clone()),
            Step::Lam => Term::Lam(x(), h.into()),
            Step::App => Term::App(h.clone().into(), h.into()),
            Step::Pair => Term::Pair(h.clone().into(), h.into()),
            Step::CasePair => Term::CasePair(h.clone().into(), x(), y(), h.into()),
            Step::InjL => Term::InjL(h.into()),
            Step::InjR => Term::InjR(h.into()),
            Step::CaseSum => Term::CaseSum(h.clone().into(), x(), h.clone().into(), y(), h.into()),
        }
    }
}

fn next_fresh_index(t: &Term) -> usize {
    t.all_names().iter().filter_map(VarName::index).map(|i| i + 1).max().unwrap_or(0)
}

/// Applies `step` to `t` at its leftmost hole.
fn apply_to_term(t: &Term, step: Step) -> Term {
    let path = t.first_hole().expect("term has a hole");
    let scope = t.scope_at(&path);
    t.replace_at(&path, step.filler(&scope, next_fresh_index(t))).expect("valid path")
}

fn max_meta(state: &State) -> Option<u32> {
    state.holes.iter().flat_map(|h| h.ctx.iter().chain(core::iter::once(&h.goal))).filter_map(Skel::max_meta).max()
}

fn rename(t: &Skel, map: &mut BTreeMap<u32, u32>) -> Skel {
    match t {
        Skel::Atom(_) => t.clone(),
        Skel::Meta(m) => {
            let next = map.len() as u32;
            Skel::Meta(*map.entry(*m).or_insert(next))
        }
        Skel::Arrow(l, r) => Skel::arrow(rename(l, map), rename(r, map)),
        Skel::Prod(l, r) => Skel::prod(rename(l, map), rename(r, map)),
        Skel::Sum(l, r) => Skel::sum(rename(l, map), rename(r, map)),
    }
}

fn canonicalize(remaining: u8, holes: Vec<PendingHole>, subst: &Substitution) -> State {
    let mut map = BTreeMap::new();
    let holes = holes
        .into_iter()
        .map(|h| PendingHole {
            ctx: h.ctx.iter().map(|t| rename(&subst.apply(t), &mut map)).collect(),
            goal: rename(&subst.apply(&h.goal), &mut map),
            tag: h.tag,
        })
        .collect();
    State { remaining, holes }
}

/// Whether `step` is allowed at a hole with this tag in normal-only mode.
fn tag_allows(tag: Tag, step: Step) -> bool {
    match (tag, step) {
        (Tag::NoLam, Step::Lam) => false,
        (Tag::NoPair, Step::Pair) => false,
        (Tag::NoInj, Step::InjL | Step::InjR) => false,
        (Tag::EtaArg { level, used: false }, Step::UseVar(v)) => v != level as usize,
        (Tag::PairSnd { level, armed: true }, Step::UseVar(v)) => v != level as usize,
        (Tag::ForbidVar(level), Step::UseVar(v)) => v != level as usize,
        _ => true,
    }
}

/// The child state after `step`, or `None` if the step is impossible.
fn advance(state: &State, step: Step, normal_only: bool) -> Option<State> {
    let (hole, rest) = state.holes.split_first()?;
    let needed = rest.len() + step.children();
    if (state.remaining as usize) < 1 + needed {
        return None;
    }
    if normal_only && !tag_allows(hole.tag, step) {
        return None;
    }
    let mut next_meta = max_meta(state).map_or(0, |m| m + 1);
    let mut fresh = || {
        next_meta += 1;
        Skel::Meta(next_meta - 1)
    };
    let mut subst = Substitution::new();
    let ctx = &hole.ctx;
    let goal = &hole.goal;
    let level = ctx.len() as u8;
    let extended = |extra: &[Skel]| {
        let mut c = ctx.clone();
        c.extend_from_slice(extra);
        c
    };
    let child = |ctx: Vec<Skel>, goal: Skel, tag: Tag| PendingHole { ctx, goal, tag };
    let tag_if = |cond: bool, tag: Tag| if normal_only && cond { tag } else { Tag::Free };
    let plain = |tag: Tag| if normal_only { tag } else { Tag::Free };

    let children: Vec<PendingHole> = match step {
        Step::UseVar(i) => {
            subst.unify_in_place(ctx.get(i)?, goal).ok()?;
            Vec::new()
        }
        Step::Lam => {
            let (a, b) = (fresh(), fresh());
            subst.unify_in_place(goal, &Skel::arrow(a.clone(), b.clone())).ok()?;
            vec![child(extended(&[a]), b, plain(Tag::LamBody(level)))]
        }
        Step::App => {
            let a = fresh();
            let eta = match hole.tag {
                Tag::LamBody(l) => tag_if(true, Tag::EtaArg { level: l, used: false }),
                _ => Tag::Free,
            };
            vec![
                child(ctx.clone(), Skel::arrow(a.clone(), goal.clone()), plain(Tag::NoLam)),
                child(ctx.clone(), a, eta),
            ]
        }
        Step::Pair => {
            let (a, b) = (fresh(), fresh());
            subst.unify_in_place(goal, &Skel::prod(a.clone(), b.clone())).ok()?;
            let (fst, snd) = match hole.tag {
                Tag::PairBody(x, y) if normal_only => (Tag::ArmIfVar(x), Tag::PairSnd { level: y, armed: false }),
                _ => (Tag::Free, Tag::Free),
            };
            vec![child(ctx.clone(), a, fst), child(ctx.clone(), b, snd)]
        }
        Step::CasePair => {
            let (a, b) = (fresh(), fresh());
            vec![
                child(ctx.clone(), Skel::prod(a.clone(), b.clone()), plain(Tag::NoPair)),
                child(extended(&[a, b]), goal.clone(), plain(Tag::PairBody(level, level + 1))),
            ]
        }
        Step::InjL | Step::InjR => {
            let (a, b) = (fresh(), fresh());
            subst.unify_in_place(goal, &Skel::sum(a.clone(), b.clone())).ok()?;
            let tag = match (step, hole.tag) {
                (Step::InjL, Tag::SumLeft(x)) if normal_only => Tag::ArmIfVar(x),
                (Step::InjR, Tag::SumRight { level, armed: true }) if normal_only => Tag::ForbidVar(level),
                _ => Tag::Free,
            };
            let inner = if step == Step::InjL { a } else { b };
            vec![child(ctx.clone(), inner, tag)]
        }
        Step::CaseSum => {
            let (a, b) = (fresh(), fresh());
            vec![
                child(ctx.clone(), Skel::sum(a.clone(), b.clone()), plain(Tag::NoInj)),
                child(extended(&[a]), goal.clone(), plain(Tag::SumLeft(level))),
                child(extended(&[b]), goal.clone(), plain(Tag::SumRight { level, armed: false })),
            ]
        }
    };

    let mut holes = children;
    holes.extend(rest.iter().cloned());
    if let Step::UseVar(v) = step {
        for h in holes.iter_mut() {
            if let Tag::EtaArg { level, used } = &mut h.tag {
                if *level as usize == v {
                    *used = true;
                }
            }
        }
        if hole.tag == Tag::ArmIfVar(v as u8) {
            if let Some(next) = holes.first_mut() {
                match &mut next.tag {
                    Tag::PairSnd { armed, .. } | Tag::SumRight { armed, .. } => *armed = true,
                    _ => {}
                }
            }
        }
    }
    Some(canonicalize(state.remaining - 1, holes, &subst))
}

fn steps(state: &State) -> Vec<Step> {
    let vars = state.holes.first().map_or(0, |h| h.ctx.len());
    (0..vars).map(Step::UseVar).chain(CONSTRUCTOR_STEPS).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DatagenError {
    /// No term of this size exists.
    Empty { size: usize },
    /// Gave up after this many samples.
    IterationCap(usize),
    /// The size does not fit the generator.
    SizeTooLarge(usize),
}

impl fmt::Display for DatagenError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DatagenError::Empty { size } => write!(f, "no term of size {size}"),
            DatagenError::IterationCap(n) => write!(f, "iteration cap of {n} samples exceeded"),
            DatagenError::SizeTooLarge(s) => write!(f, "size {s} is too large"),
        }
    }
}

impl core::error::Error for DatagenError {}

/// Counting, sampling and enumeration with a shared memo table.
pub struct TermSpace {
    normal_only: bool,
    memo: BTreeMap<State, u128>,
}

impl TermSpace {
    /// `normal_only` restricts every operation to βη-normal terms.
    pub fn new(normal_only: bool) -> Self {
        TermSpace { normal_only, memo: BTreeMap::new() }
    }

    pub fn normal_only(&self) -> bool {
        self.normal_only
    }

    fn root(size: usize, goal: Option<&TypeExpr>) -> Result<State, DatagenError> {
        let remaining = u8::try_from(size).map_err(|_| DatagenError::SizeTooLarge(size))?;
        let goal = goal.map_or(Skel::Meta(0), Skel::from);
        let holes = vec![PendingHole { ctx: Vec::new(), goal, tag: Tag::Free }];
        Ok(canonicalize(remaining, holes, &Substitution::new()))
    }

    fn count_state(&mut self, state: &State) -> u128 {
        if state.holes.is_empty() {
            return u128::from(state.remaining == 0);
        }
        if (state.remaining as usize) < state.holes.len() {
            return 0;
        }
        if let Some(&n) = self.memo.get(state) {
            return n;
        }
        let mut total = 0u128;
        for step in steps(state) {
            if let Some(child) = advance(state, step, self.normal_only) {
                total += self.count_state(&child);
            }
        }
        self.memo.insert(state.clone(), total);
        total
    }

    /// Number of α-classes of closed, hole-free, typable terms of `size` nodes.
    pub fn count_terms(&mut self, size: usize) -> u128 {
        Self::root(size, None).map_or(0, |s| self.count_state(&s))
    }

    /// Number of α-classes of closed terms of `size` nodes that prove `goal`.
    pub fn count_proofs(&mut self, goal: &TypeExpr, size: usize) -> u128 {
        Self::root(size, Some(goal)).map_or(0, |s| self.count_state(&s))
    }

    /// A term drawn uniformly from the α-classes counted by [`Self::count_terms`].
    pub fn sample_term<R: Rng + ?Sized>(&mut self, size: usize, rng: &mut R) -> Result<Term, DatagenError> {
        let mut state = Self::root(size, None)?;
        if self.count_state(&state) == 0 {
            return Err(DatagenError::Empty { size });
        }
        let mut term = Term::Hole;
        while !state.holes.is_empty() {
            let mut options: Vec<(Step, State, u128)> = Vec::new();
            for step in steps(&state) {
                if let Some(child) = advance(&state, step, self.normal_only) {
                    let n = self.count_state(&child);
                    if n > 0 {
                        options.push((step, child, n));
                    }
                }
            }
            let total: u128 = options.iter().map(|o| o.2).sum();
            let mut pick = rng.gen_range(0..total);
            let (step, child, _) = options
                .into_iter()
                .find(|o| {
                    if pick < o.2 {
                        true
                    } else {
                        pick -= o.2;
                        false
                    }
                })
                .expect("pick is below the total");
            term = apply_to_term(&term, step);
            state = child;
        }
        Ok(term)
    }

    fn walk<F: FnMut(&Term) -> bool>(&mut self, state: &State, term: &Term, visit: &mut F) -> bool {
        if state.holes.is_empty() {
            return visit(term);
        }
        for step in steps(state) {
            let Some(child) = advance(state, step, self.normal_only) else { continue };
            if self.count_state(&child) == 0 {
                continue;
            }
            if !self.walk(&child, &apply_to_term(term, step), visit) {
                return false;
            }
        }
        true
    }

    /// Visits every counted term of `size` nodes (proving `goal`, if given) in
    /// generation order until `visit` returns false. Returns whether the
    /// enumeration ran to completion.
    pub fn for_each<F: FnMut(&Term) -> bool>(&mut self, size: usize, goal: Option<&TypeExpr>, mut visit: F) -> bool {
        match Self::root(size, goal) {
            Ok(state) => self.walk(&state, &Term::Hole, &mut visit),
            Err(_) => true,
        }
    }

    /// Every counted term of `size` nodes, proving `goal` if given.
    pub fn enumerate(&mut self, size: usize, goal: Option<&TypeExpr>) -> Vec<Term> {
        let mut out = Vec::new();
        self.for_each(size, goal, |t| {
            out.push(t.clone());
            true
        });
        out
    }
}

/// Number of α-classes of closed, hole-free, typable terms of `size` nodes.
pub fn count_terms(size: usize, normal_only: bool) -> u128 {
    TermSpace::new(normal_only).count_terms(size)
}

/// A uniformly random α-class of closed typable terms of `size` nodes.
pub fn sample_term(size: usize, normal_only: bool, seed: u64) -> Result<Term, DatagenError> {
    TermSpace::new(normal_only).sample_term(size, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A proposition with one of its proofs, both also in canonical token form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetEntry {
    pub goal_type: TypeExpr,
    pub proof: Term,
    pub type_tokens: Vec<Token>,
    pub term_tokens: Vec<Token>,
}

impl DatasetEntry {
    pub fn new(goal_type: TypeExpr, proof: Term) -> Self {
        let type_tokens = tokenize_type(&goal_type);
        let term_tokens = tokenize_term(&proof);
        DatasetEntry { goal_type, proof, type_tokens, term_tokens }
    }

    pub fn size(&self) -> usize {
        self.proof.size()
    }
}

/// Parameters of the dataset sampler.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DatasetConfig {
    pub normal_only: bool,
    pub min_size: usize,
    pub max_size: usize,
    /// Types with more distinct atoms are rejected.
    pub max_atoms: usize,
    /// Samples allowed per requested entry before giving up.
    pub samples_per_entry: usize,
}

impl Default for DatasetConfig {
    fn default() -> Self {
        DatasetConfig { normal_only: false, min_size: 2, max_size: 9, max_atoms: 3, samples_per_entry: 1000 }
    }
}

impl DatasetConfig {
    pub fn normal_only(normal_only: bool) -> Self {
        DatasetConfig { normal_only, ..Self::default() }
    }
}

/// Draws sizes uniformly from the configured range and terms uniformly of
/// that size, yielding each term with its principal type.
pub struct Sampler {
    space: TermSpace,
    rng: ChaCha8Rng,
    config: DatasetConfig,
    draws: usize,
}

impl Sampler {
    pub fn new(config: DatasetConfig, seed: u64) -> Self {
        Sampler { space: TermSpace::new(config.normal_only), rng: ChaCha8Rng::seed_from_u64(seed), config, draws: 0 }
    }

    pub fn draws(&self) -> usize {
        self.draws
    }

    /// The next sampled pair whose type respects the atom budget.
    pub fn next_pair(&mut self, cap: usize) -> Result<(TypeExpr, Term), DatagenError> {
        loop {
            if self.draws >= cap {
                return Err(DatagenError::IterationCap(cap));
            }
            self.draws += 1;
            let size = self.rng.gen_range(self.config.min_size..=self.config.max_size);
            let term = match self.space.sample_term(size, &mut self.rng) {
                Ok(t) => t,
                Err(DatagenError::Empty { .. }) => continue,
                Err(e) => return Err(e),
            };
            let ty = infer_type(&term).expect("sampled terms are typable");
            if ty.atoms().len() <= self.config.max_atoms {
                return Ok((ty, term));
            }
        }
    }
}

/// Every sample seen while building a training set, in draw order.
pub type SampleTrace = Vec<(TypeExpr, Term)>;

/// `n` entries with pairwise distinct types (up to atom renaming), keeping
/// the smallest proof seen for each type.
pub fn training_dataset(n: usize, config: &DatasetConfig, seed: u64) -> Result<Vec<DatasetEntry>, DatagenError> {
    training_dataset_traced(n, config, seed).map(|(d, _)| d)
}

pub fn training_dataset_traced(
    n: usize,
    config: &DatasetConfig,
    seed: u64,
) -> Result<(Vec<DatasetEntry>, SampleTrace), DatagenError> {
    let mut sampler = Sampler::new(config.clone(), seed);
    let cap = n.saturating_mul(config.samples_per_entry).max(config.samples_per_entry);
    let mut index: BTreeMap<TypeExpr, usize> = BTreeMap::new();
    let mut entries: Vec<(TypeExpr, Term)> = Vec::new();
    let mut trace = Vec::new();
    while entries.len() < n {
        let (ty, term) = sampler.next_pair(cap)?;
        trace.push((ty.clone(), term.clone()));
        let key = ty.canonical_atoms();
        match index.get(&key) {
            Some(&i) => {
                if term.size() < entries[i].1.size() {
                    entries[i] = (ty, term);
                }
            }
            None => {
                index.insert(key, entries.len());
                entries.push((ty, term));
            }
        }
    }
    Ok((entries.into_iter().map(|(t, m)| DatasetEntry::new(t, m)).collect(), trace))
}

/// `n` distinct types from the dataset sampler, none equal up to atom
/// renaming to a type in `exclude`; each with the proof it was sampled with.
pub fn test_dataset_entries(
    n: usize,
    exclude: &[TypeExpr],
    config: &DatasetConfig,
    seed: u64,
) -> Result<Vec<DatasetEntry>, DatagenError> {
    let mut seen: BTreeSet<TypeExpr> = exclude.iter().map(TypeExpr::canonical_atoms).collect();
    let mut sampler = Sampler::new(config.clone(), seed);
    let cap = n.saturating_mul(config.samples_per_entry).max(config.samples_per_entry);
    let mut out = Vec::new();
    while out.len() < n {
        let (ty, term) = sampler.next_pair(cap)?;
        if seen.insert(ty.canonical_atoms()) {
            out.push(DatasetEntry::new(ty, term));
        }
    }
    Ok(out)
}

/// The types of [`test_dataset_entries`].
pub fn test_dataset(
    n: usize,
    exclude: &[TypeExpr],
    config: &DatasetConfig,
    seed: u64,
) -> Result<Vec<TypeExpr>, DatagenError> {
    test_dataset_entries(n, exclude, config, seed).map(|v| v.into_iter().map(|e| e.goal_type).collect())
}

/// Per-case outcome of [`evaluate_outputs`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseReport {
    pub parsable: bool,
    /// The repaired output type-checks at the goal.
    pub typable: bool,
    /// Repair edits applied to the output; zero when it was already canonical.
    pub repair_distance: usize,
    /// Nodes of the repaired output.
    pub size: usize,
    /// Least tree edit distance to a proof of the goal, if any was enumerated.
    pub distance: Option<usize>,
    /// The enumeration cap was hit, so `distance` is an upper bound.
    pub approximate: bool,
}

impl CaseReport {
    pub fn repaired(&self) -> bool {
        self.repair_distance > 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalReport {
    pub n_total: usize,
    pub n_parsable: usize,
    pub n_typable: usize,
    /// Mean of distance over size across cases with a known distance.
    pub closeness: f64,
    /// Cases with a known distance.
    pub n_scored: usize,
    pub cases: Vec<CaseReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Largest proof size enumerated per goal.
    pub max_proof_size: usize,
    /// Enumerated proofs per goal before the distance is marked approximate.
    pub enumeration_cap: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { max_proof_size: 9, enumeration_cap: 200_000 }
    }
}

/// Least tree edit distance from `n` to a proof of `goal` of at most
/// `config.max_proof_size` nodes, and whether the enumeration was cut short.
pub fn closest_proof_distance(
    space: &mut TermSpace,
    goal: &TypeExpr,
    n: &Term,
    config: &EvalConfig,
) -> (Option<usize>, bool) {
    let n = n.canonical_names();
    let mut best: Option<usize> = None;
    let mut seen = 0usize;
    let mut complete = true;
    for size in 1..=config.max_proof_size {
        complete = space.for_each(size, Some(goal), |m| {
            seen += 1;
            let d = tree_edit_distance(&n, m);
            best = Some(best.map_or(d, |b| b.min(d)));
            best != Some(0) && seen < config.enumeration_cap
        });
        if !complete {
            break;
        }
    }
    let approximate = !complete && best != Some(0);
    (best, approximate)
}

/// Parsability, typability after repair and closeness of guessed proofs.
pub fn evaluate_outputs(cases: &[(TypeExpr, Vec<Token>)], config: &EvalConfig) -> EvalReport {
    let mut space = TermSpace::new(false);
    let mut reports = Vec::with_capacity(cases.len());
    for (goal, tokens) in cases {
        let parsable = parse_term(tokens).is_ok();
        let repair = nearest_term(tokens);
        let typable = check_closed(&repair.term, goal);
        let (distance, approximate) = closest_proof_distance(&mut space, goal, &repair.term, config);
        reports.push(CaseReport {
            parsable,
            typable,
            repair_distance: repair.distance,
            size: repair.term.size(),
            distance,
            approximate,
        });
    }
    let scored: Vec<&CaseReport> = reports.iter().filter(|c| c.distance.is_some()).collect();
    let closeness = if scored.is_empty() {
        0.0
    } else {
        scored.iter().map(|c| c.distance.unwrap() as f64 / c.size as f64).sum::<f64>() / scored.len() as f64
    };
    EvalReport {
        n_total: reports.len(),
        n_parsable: reports.iter().filter(|c| c.parsable).count(),
        n_typable: reports.iter().filter(|c| c.typable).count(),
        closeness,
        n_scored: scored.len(),
        cases: reports,
    }
}

/// Sorted token texts used by a dataset, as a shared vocabulary.
pub fn vocabulary<'a>(entries: impl IntoIterator<Item = &'a DatasetEntry>) -> Vec<String> {
    let mut set = BTreeSet::new();
    for e in entries {
        for t in e.type_tokens.iter().chain(&e.term_tokens) {
            set.insert(String::from(t.text()));
        }
    }
    set.into_iter().collect()
}
