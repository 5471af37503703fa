//! Reference implementations used to check the library. Each one is written
//! independently of the code under test and favours obviousness over speed.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use proofsynth_core::ast::{Term, TypeExpr, VarName};
use proofsynth_core::token::{parse_term, Token};
use proofsynth_core::tree_edit::LabeledTree;

// ---------------------------------------------------------------------------
// Trees and tree edit distance by exhaustive edit mappings.

/// Every ordered tree with exactly `n` nodes, labels drawn from `labels`.
pub fn trees_of_size(n: usize, labels: &[&str]) -> Vec<LabeledTree> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for forest in forests_of_size(n - 1, labels) {
        for l in labels {
            out.push(LabeledTree::node(*l, forest.clone()));
        }
    }
    out
}

fn forests_of_size(n: usize, labels: &[&str]) -> Vec<Vec<LabeledTree>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 1..=n {
        for t in trees_of_size(first, labels) {
            for mut rest in forests_of_size(n - first, labels) {
                rest.insert(0, t.clone());
                out.push(rest);
            }
        }
    }
    out
}

/// Nodes in preorder with parent links and postorder ranks.
struct Flat {
    labels: Vec<String>,
    parent: Vec<Option<usize>>,
    post: Vec<usize>,
}

fn flatten(t: &LabeledTree) -> Flat {
    fn go(t: &LabeledTree, parent: Option<usize>, f: &mut Flat, counter: &mut usize) {
        let me = f.labels.len();
        f.labels.push(t.label.clone());
        f.parent.push(parent);
        f.post.push(0);
        for c in &t.children {
            go(c, Some(me), f, counter);
        }
        f.post[me] = *counter;
        *counter += 1;
    }
    let mut f = Flat { labels: Vec::new(), parent: Vec::new(), post: Vec::new() };
    go(t, None, &mut f, &mut 0);
    f
}

fn is_ancestor(f: &Flat, a: usize, mut d: usize) -> bool {
    while let Some(p) = f.parent[d] {
        if p == a {
            return true;
        }
        d = p;
    }
    false
}

/// `a` lies entirely to the left of `b`.
fn is_left_of(f: &Flat, a: usize, b: usize) -> bool {
    a != b && f.post[a] < f.post[b] && !is_ancestor(f, b, a)
}

/// Tree edit distance as the cheapest valid edit mapping: one-to-one,
/// preserving ancestry and sibling order; unmapped nodes cost one each and
/// mapped pairs cost one when their labels differ.
pub fn mapping_distance(a: &LabeledTree, b: &LabeledTree) -> usize {
    let fa = flatten(a);
    let fb = flatten(b);
    let mut best = fa.labels.len() + fb.labels.len();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; fb.labels.len()];
    search(&fa, &fb, 0, &mut pairs, &mut used, 0, &mut best);
    best
}

fn search(
    fa: &Flat,
    fb: &Flat,
    i: usize,
    pairs: &mut Vec<(usize, usize)>,
    used: &mut Vec<bool>,
    relabels: usize,
    best: &mut usize,
) {
    let cost_now = relabels + (fa.labels.len() - pairs.len()) + (fb.labels.len() - pairs.len());
    // Mapping every remaining node could at best save two per pair.
    let remaining = (fa.labels.len() - i).min(fb.labels.len() - pairs.len());
    if cost_now.saturating_sub(2 * remaining) >= *best {
        return;
    }
    if i == fa.labels.len() {
        *best = (*best).min(cost_now);
        return;
    }
    search(fa, fb, i + 1, pairs, used, relabels, best);
    for j in 0..fb.labels.len() {
        if used[j] {
            continue;
        }
        let consistent = pairs.iter().all(|&(p, q)| {
            is_ancestor(fa, p, i) == is_ancestor(fb, q, j)
                && is_ancestor(fa, i, p) == is_ancestor(fb, j, q)
                && is_left_of(fa, p, i) == is_left_of(fb, q, j)
                && is_left_of(fa, i, p) == is_left_of(fb, j, q)
        });
        if !consistent {
            continue;
        }
        used[j] = true;
        pairs.push((i, j));
        let r = relabels + usize::from(fa.labels[i] != fb.labels[j]);
        search(fa, fb, i + 1, pairs, used, r, best);
        pairs.pop();
        used[j] = false;
    }
}

// ---------------------------------------------------------------------------
// Insert/delete distance by dynamic programming.

pub fn dp_indel<T: Eq>(a: &[T], b: &[T]) -> usize {
    let mut lcs = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            lcs[i][j] = if a[i - 1] == b[j - 1] { lcs[i - 1][j - 1] + 1 } else { lcs[i - 1][j].max(lcs[i][j - 1]) };
        }
    }
    a.len() + b.len() - 2 * lcs[a.len()][b.len()]
}

// ---------------------------------------------------------------------------
// Repair distance by breadth-first search over edit scripts.

/// Terminals a repair may insert, given the input's variables.
pub fn insertable(input: &[Token]) -> Vec<Token> {
    let mut out = vec![
        Token::LParen,
        Token::RParen,
        Token::Lambda,
        Token::Dot,
        Token::Comma,
        Token::Case,
        Token::Of,
        Token::LBrace,
        Token::RBrace,
        Token::Semi,
        Token::Left,
        Token::Right,
        Token::Arrow,
        Token::Var("x0".into()),
    ];
    for t in input {
        if matches!(t, Token::Var(_)) && !out.contains(t) {
            out.push(t.clone());
        }
    }
    out
}

/// Fewest single-token insertions or deletions that make `input` parse,
/// searching at most `max_depth` edits.
pub fn bfs_repair_distance(input: &[Token], max_depth: usize) -> Option<usize> {
    let alphabet = insertable(input);
    let mut seen: HashSet<Vec<Token>> = HashSet::new();
    let mut frontier: VecDeque<(Vec<Token>, usize)> = VecDeque::new();
    seen.insert(input.to_vec());
    frontier.push_back((input.to_vec(), 0));
    while let Some((s, d)) = frontier.pop_front() {
        if parse_term(&s).is_ok() {
            return Some(d);
        }
        if d == max_depth {
            continue;
        }
        for i in 0..s.len() {
            let mut t = s.clone();
            t.remove(i);
            if seen.insert(t.clone()) {
                frontier.push_back((t, d + 1));
            }
        }
        for i in 0..=s.len() {
            for tok in &alphabet {
                let mut t = s.clone();
                t.insert(i, tok.clone());
                if seen.insert(t.clone()) {
                    frontier.push_back((t, d + 1));
                }
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Closed terms by brute force.

fn name(level: usize) -> VarName {
    VarName::new(format!("v{level}"))
}

/// Every hole-free term of exactly `size` nodes whose free variables are
/// among the `depth` enclosing binders, one per α-class.
pub fn brute_terms(size: usize, depth: usize) -> Vec<Term> {
    let mut memo = BTreeMap::new();
    brute(size, depth, &mut memo)
}

fn brute(size: usize, depth: usize, memo: &mut BTreeMap<(usize, usize), Vec<Term>>) -> Vec<Term> {
    if let Some(v) = memo.get(&(size, depth)) {
        return v.clone();
    }
    let mut out = Vec::new();
    if size == 1 {
        out.extend((0..depth).map(|l| Term::Var(name(l))));
    }
    if size >= 2 {
        let x = name(depth);
        for b in brute(size - 1, depth + 1, memo) {
            out.push(Term::Lam(x.clone(), Box::new(b)));
        }
        for m in brute(size - 1, depth, memo) {
            out.push(Term::inj_l(m.clone()));
            out.push(Term::inj_r(m));
        }
    }
    if size >= 3 {
        for k in 1..size - 1 {
            let lefts = brute(k, depth, memo);
            let rights = brute(size - 1 - k, depth, memo);
            let bodies = brute(size - 1 - k, depth + 2, memo);
            for l in &lefts {
                for r in &rights {
                    out.push(Term::app(l.clone(), r.clone()));
                    out.push(Term::pair(l.clone(), r.clone()));
                }
                for b in &bodies {
                    out.push(Term::CasePair(Box::new(l.clone()), name(depth), name(depth + 1), Box::new(b.clone())));
                }
            }
        }
    }
    if size >= 4 {
        for k in 1..size - 2 {
            for j in 1..size - 1 - k {
                let r = size - 1 - k - j;
                let scruts = brute(k, depth, memo);
                let ls = brute(j, depth + 1, memo);
                let rs = brute(r, depth + 1, memo);
                for s in &scruts {
                    for l in &ls {
                        for rr in &rs {
                            out.push(Term::CaseSum(
                                Box::new(s.clone()),
                                name(depth),
                                Box::new(l.clone()),
                                name(depth),
                                Box::new(rr.clone()),
                            ));
                        }
                    }
                }
            }
        }
    }
    memo.insert((size, depth), out.clone());
    out
}

// ---------------------------------------------------------------------------
// Type inference by constraint collection and syntactic unification.

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ty {
    Var(usize),
    Con(String),
    Arr(Box<Ty>, Box<Ty>),
    Prod(Box<Ty>, Box<Ty>),
    Sum(Box<Ty>, Box<Ty>),
}

struct Collector {
    next: usize,
    eqs: Vec<(Ty, Ty)>,
}

impl Collector {
    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next - 1)
    }

    fn gen(&mut self, t: &Term, env: &mut Vec<(VarName, Ty)>) -> Option<Ty> {
        let arr = |a: Ty, b: Ty| Ty::Arr(Box::new(a), Box::new(b));
        Some(match t {
            Term::Hole => self.fresh(),
            Term::Var(x) => env.iter().rev().find(|(y, _)| y == x)?.1.clone(),
            Term::Lam(x, b) => {
                let a = self.fresh();
                env.push((x.clone(), a.clone()));
                let r = self.gen(b, env);
                env.pop();
                arr(a, r?)
            }
            Term::App(f, a) => {
                let tf = self.gen(f, env)?;
                let ta = self.gen(a, env)?;
                let r = self.fresh();
                self.eqs.push((tf, arr(ta, r.clone())));
                r
            }
            Term::Pair(a, b) => Ty::Prod(Box::new(self.gen(a, env)?), Box::new(self.gen(b, env)?)),
            Term::CasePair(s, x, y, b) => {
                let ts = self.gen(s, env)?;
                let (p, q) = (self.fresh(), self.fresh());
                self.eqs.push((ts, Ty::Prod(Box::new(p.clone()), Box::new(q.clone()))));
                env.push((x.clone(), p));
                env.push((y.clone(), q));
                let r = self.gen(b, env);
                env.pop();
                env.pop();
                r?
            }
            Term::InjL(m) => Ty::Sum(Box::new(self.gen(m, env)?), Box::new(self.fresh())),
            Term::InjR(m) => Ty::Sum(Box::new(self.fresh()), Box::new(self.gen(m, env)?)),
            Term::CaseSum(s, x, l, y, r) => {
                let ts = self.gen(s, env)?;
                let (p, q) = (self.fresh(), self.fresh());
                self.eqs.push((ts, Ty::Sum(Box::new(p.clone()), Box::new(q.clone()))));
                env.push((x.clone(), p));
                let tl = self.gen(l, env);
                env.pop();
                env.push((y.clone(), q));
                let tr = self.gen(r, env);
                env.pop();
                let (tl, tr) = (tl?, tr?);
                self.eqs.push((tl.clone(), tr));
                tl
            }
        })
    }
}

/// Triangular substitution solved by repeated decomposition.
fn walk(t: &Ty, s: &BTreeMap<usize, Ty>) -> Ty {
    match t {
        Ty::Var(v) => match s.get(v) {
            Some(u) => walk(u, s),
            None => t.clone(),
        },
        _ => t.clone(),
    }
}

fn resolve(t: &Ty, s: &BTreeMap<usize, Ty>) -> Ty {
    match walk(t, s) {
        Ty::Arr(a, b) => Ty::Arr(Box::new(resolve(&a, s)), Box::new(resolve(&b, s))),
        Ty::Prod(a, b) => Ty::Prod(Box::new(resolve(&a, s)), Box::new(resolve(&b, s))),
        Ty::Sum(a, b) => Ty::Sum(Box::new(resolve(&a, s)), Box::new(resolve(&b, s))),
        other => other,
    }
}

fn occurs(v: usize, t: &Ty, s: &BTreeMap<usize, Ty>) -> bool {
    match walk(t, s) {
        Ty::Var(u) => u == v,
        Ty::Con(_) => false,
        Ty::Arr(a, b) | Ty::Prod(a, b) | Ty::Sum(a, b) => occurs(v, &a, s) || occurs(v, &b, s),
    }
}

fn solve(eqs: Vec<(Ty, Ty)>) -> Option<BTreeMap<usize, Ty>> {
    let mut s = BTreeMap::new();
    let mut work = eqs;
    while let Some((a, b)) = work.pop() {
        match (walk(&a, &s), walk(&b, &s)) {
            (Ty::Var(x), Ty::Var(y)) if x == y => {}
            (Ty::Var(x), t) | (t, Ty::Var(x)) => {
                if occurs(x, &t, &s) {
                    return None;
                }
                s.insert(x, t);
            }
            (Ty::Con(x), Ty::Con(y)) => {
                if x != y {
                    return None;
                }
            }
            (Ty::Arr(a1, a2), Ty::Arr(b1, b2))
            | (Ty::Prod(a1, a2), Ty::Prod(b1, b2))
            | (Ty::Sum(a1, a2), Ty::Sum(b1, b2)) => {
                work.push((*a1, *b1));
                work.push((*a2, *b2));
            }
            _ => return None,
        }
    }
    Some(s)
}

fn to_ty(t: &TypeExpr) -> Ty {
    match t {
        TypeExpr::Atom(a) => Ty::Con(a.clone()),
        TypeExpr::Arrow(a, b) => Ty::Arr(Box::new(to_ty(a)), Box::new(to_ty(b))),
        TypeExpr::Prod(a, b) => Ty::Prod(Box::new(to_ty(a)), Box::new(to_ty(b))),
        TypeExpr::Sum(a, b) => Ty::Sum(Box::new(to_ty(a)), Box::new(to_ty(b))),
    }
}

fn to_type(t: &Ty, names: &mut BTreeMap<usize, String>) -> TypeExpr {
    match t {
        Ty::Var(v) => {
            let next = format!("t{}", names.len());
            TypeExpr::atom(names.entry(*v).or_insert(next).clone())
        }
        Ty::Con(c) => TypeExpr::atom(c.clone()),
        Ty::Arr(a, b) => TypeExpr::arrow(to_type(a, names), to_type(b, names)),
        Ty::Prod(a, b) => TypeExpr::prod(to_type(a, names), to_type(b, names)),
        Ty::Sum(a, b) => TypeExpr::sum(to_type(a, names), to_type(b, names)),
    }
}

/// Principal type of a closed term, atoms named by first occurrence.
pub fn oracle_principal(t: &Term) -> Option<TypeExpr> {
    let mut c = Collector { next: 0, eqs: Vec::new() };
    let ty = c.gen(t, &mut Vec::new())?;
    let s = solve(c.eqs)?;
    Some(to_type(&resolve(&ty, &s), &mut BTreeMap::new()))
}

/// Whether some instance of the term's typing proves `goal`, holes being
/// arbitrary.
pub fn oracle_has_type(t: &Term, goal: &TypeExpr) -> bool {
    let mut c = Collector { next: 0, eqs: Vec::new() };
    let Some(ty) = c.gen(t, &mut Vec::new()) else { return false };
    c.eqs.push((ty, to_ty(goal)));
    solve(c.eqs).is_some()
}

/// Atoms of `t` in first-occurrence order.
pub fn atoms(t: &TypeExpr) -> Vec<String> {
    fn go(t: &TypeExpr, out: &mut Vec<String>) {
        match t {
            TypeExpr::Atom(a) => {
                if !out.contains(a) {
                    out.push(a.clone());
                }
            }
            TypeExpr::Arrow(a, b) | TypeExpr::Prod(a, b) | TypeExpr::Sum(a, b) => {
                go(a, out);
                go(b, out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut out);
    out
}

/// Equality after a bijective renaming of atoms.
pub fn same_up_to_atoms(a: &TypeExpr, b: &TypeExpr) -> bool {
    fn go(a: &TypeExpr, b: &TypeExpr, fwd: &mut BTreeMap<String, String>, back: &mut BTreeMap<String, String>) -> bool {
        match (a, b) {
            (TypeExpr::Atom(x), TypeExpr::Atom(y)) => {
                fwd.entry(x.clone()).or_insert_with(|| y.clone()) == y
                    && back.entry(y.clone()).or_insert_with(|| x.clone()) == x
            }
            (TypeExpr::Arrow(a1, a2), TypeExpr::Arrow(b1, b2))
            | (TypeExpr::Prod(a1, a2), TypeExpr::Prod(b1, b2))
            | (TypeExpr::Sum(a1, a2), TypeExpr::Sum(b1, b2)) => go(a1, b1, fwd, back) && go(a2, b2, fwd, back),
            _ => false,
        }
    }
    go(a, b, &mut BTreeMap::new(), &mut BTreeMap::new())
}

/// De Bruijn rendering, independent of the library's key.
pub fn debruijn(t: &Term) -> String {
    fn go(t: &Term, env: &mut Vec<VarName>, out: &mut String) {
        let idx = |env: &Vec<VarName>, x: &VarName| match env.iter().rposition(|y| y == x) {
            Some(p) => format!("{}", env.len() - 1 - p),
            None => format!("'{}", x.as_str()),
        };
        match t {
            Term::Hole => out.push('?'),
            Term::Var(x) => {
                out.push_str(&idx(env, x));
                out.push(' ');
            }
            Term::Lam(x, b) => {
                out.push_str("(L ");
                env.push(x.clone());
                go(b, env, out);
                env.pop();
                out.push(')');
            }
            Term::App(f, a) => {
                out.push_str("(A ");
                go(f, env, out);
                go(a, env, out);
                out.push(')');
            }
            Term::Pair(a, b) => {
                out.push_str("(P ");
                go(a, env, out);
                go(b, env, out);
                out.push(')');
            }
            Term::CasePair(s, x, y, b) => {
                out.push_str("(CP ");
                go(s, env, out);
                env.push(x.clone());
                env.push(y.clone());
                go(b, env, out);
                env.pop();
                env.pop();
                out.push(')');
            }
            Term::InjL(m) => {
                out.push_str("(IL ");
                go(m, env, out);
                out.push(')');
            }
            Term::InjR(m) => {
                out.push_str("(IR ");
                go(m, env, out);
                out.push(')');
            }
            Term::CaseSum(s, x, l, y, r) => {
                out.push_str("(CS ");
                go(s, env, out);
                env.push(x.clone());
                go(l, env, out);
                env.pop();
                env.push(y.clone());
                go(r, env, out);
                env.pop();
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// βη-normality by a direct structural scan.
pub fn oracle_is_normal(t: &Term) -> bool {
    fn free_in(x: &VarName, t: &Term) -> bool {
        t.free_vars().contains(x)
    }
    let here = match t {
        Term::App(f, _) => matches!(**f, Term::Lam(..)),
        Term::CasePair(s, x, y, b) => {
            matches!(**s, Term::Pair(..))
                || matches!(&**b, Term::Pair(p, q) if **p == Term::Var(x.clone()) && **q == Term::Var(y.clone()) && x != y)
        }
        Term::CaseSum(s, x, l, y, r) => {
            matches!(**s, Term::InjL(_) | Term::InjR(_))
                || (matches!(&**l, Term::InjL(m) if **m == Term::Var(x.clone()))
                    && matches!(&**r, Term::InjR(m) if **m == Term::Var(y.clone())))
        }
        Term::Lam(x, b) => matches!(&**b, Term::App(f, a) if **a == Term::Var(x.clone()) && !free_in(x, f)),
        _ => false,
    };
    !here && t.children().into_iter().all(oracle_is_normal)
}

/// Distinct α-classes among `terms`.
pub fn classes(terms: &[Term]) -> BTreeSet<String> {
    terms.iter().map(debruijn).collect()
}
