//! Insert/delete edit distance between token sequences (Myers' O((N+M)D)
//! algorithm) and `nearest_term`, which finds the term whose rendering is
//! closest to an arbitrary, possibly unparsable, token sequence.
//!
//! `nearest_term` is a language edit distance: a best-first search over
//! (parser stack, input position) pairs for the grammar accepted by
//! [`parse_term`], where shifting a matching token is free and inserting or
//! deleting a token costs one. Among minimal repairs it prefers fewer output
//! tokens, then the lexicographically smallest output. Holes are kept when
//! present but never inserted.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};

use crate::ast::Term;
use crate::token::{parse_term, Token};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EditOp<T> {
    Keep(T),
    /// Insert `token`; it ends up at index `at` of the target.
    Insert {
        token: T,
        at: usize,
    },
    /// Delete the token at index `at` of the source.
    Delete {
        at: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EditScript<T> {
    pub ops: Vec<EditOp<T>>,
}

impl<T: Clone> EditScript<T> {
    pub fn cost(&self) -> usize {
        self.ops.iter().filter(|op| !matches!(op, EditOp::Keep(_))).count()
    }

    /// Replays the script over `source`.
    pub fn apply(&self, source: &[T]) -> Vec<T> {
        let mut out = Vec::with_capacity(source.len());
        let mut i = 0;
        for op in &self.ops {
            match op {
                EditOp::Keep(t) => {
                    debug_assert!(i < source.len());
                    out.push(t.clone());
                    i += 1;
                }
                EditOp::Insert { token, .. } => out.push(token.clone()),
                EditOp::Delete { .. } => i += 1,
            }
        }
        out
    }
}

/// Minimal number of insertions and deletions turning `a` into `b`, with a
/// witnessing script.
pub fn seq_edit_distance<T: Clone + Eq>(a: &[T], b: &[T]) -> (usize, EditScript<T>) {
    let (n, m) = (a.len() as isize, b.len() as isize);
    let max = (n + m) as usize;
    let off = max as isize + 1;
    let idx = |k: isize| (k + off) as usize;
    let mut v = vec![0isize; 2 * max + 3];
    let mut trace: Vec<Vec<isize>> = Vec::new();
    let mut found = None;
    'outer: for d in 0..=max as isize {
        trace.push(v.clone());
        let mut k = -d;
        while k <= d {
            let mut x =
                if k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)]) { v[idx(k + 1)] } else { v[idx(k - 1)] + 1 };
            let mut y = x - k;
            while x < n && y < m && a[x as usize] == b[y as usize] {
                x += 1;
                y += 1;
            }
            v[idx(k)] = x;
            if x >= n && y >= m {
                found = Some(d);
                break 'outer;
            }
            k += 2;
        }
    }
    let dist = found.unwrap_or(0);
    let mut ops = Vec::new();
    let (mut x, mut y) = (n, m);
    for d in (0..=dist).rev() {
        let v = &trace[d as usize];
        let k = x - y;
        let prev_k = if k == -d || (k != d && v[idx(k - 1)] < v[idx(k + 1)]) { k + 1 } else { k - 1 };
        let prev_x = v[idx(prev_k)];
        let prev_y = prev_x - prev_k;
        while x > prev_x && y > prev_y {
            ops.push(EditOp::Keep(a[(x - 1) as usize].clone()));
            x -= 1;
            y -= 1;
        }
        if d > 0 {
            if x == prev_x {
                ops.push(EditOp::Insert { token: b[prev_y as usize].clone(), at: prev_y as usize });
            } else {
                ops.push(EditOp::Delete { at: prev_x as usize });
            }
        }
        x = prev_x;
        y = prev_y;
    }
    ops.reverse();
    (dist as usize, EditScript { ops })
}

/// Result of repairing a token sequence into a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Repair {
    pub term: Term,
    /// Rendering of `term`.
    pub tokens: Vec<Token>,
    /// Insertions plus deletions between `tokens` and the input.
    pub distance: usize,
    /// The state budget ran out; `term` is a valid but possibly non-minimal repair.
    pub budget_exceeded: bool,
    /// Search states expanded.
    pub explored: usize,
}

pub const DEFAULT_REPAIR_BUDGET: usize = 1_000_000;

/// Closest term to `input` under insert/delete edits of its rendering.
pub fn nearest_term(input: &[Token]) -> Repair {
    nearest_term_with_budget(input, DEFAULT_REPAIR_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nt {
    /// A term.
    Expr,
    /// Alternatives of a case.
    Alts,
    /// Further arguments of an application; may be empty.
    Args,
    /// An injection or an atom.
    Head,
    /// A variable, a hole or a parenthesized term or pair.
    Atom,
    /// The rest of a parenthesized term after its first component.
    Close,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Sym {
    N(Nt),
    /// A fixed terminal, as an index into the token table.
    Tok(u32),
    Var,
}

/// Token texts in sorted order, so comparing ids compares texts.
struct Table {
    texts: Vec<String>,
    is_var: Vec<bool>,
}

impl Table {
    fn id(&self, text: &str, var: bool) -> u32 {
        self.texts.iter().zip(&self.is_var).position(|(t, v)| t == text && *v == var).expect("token registered") as u32
    }

    fn token(&self, id: u32) -> Token {
        let text = &self.texts[id as usize];
        if self.is_var[id as usize] {
            return Token::Var(text.clone());
        }
        FIXED.iter().find(|t| t.text() == text).cloned().expect("fixed terminal")
    }
}

const FIXED: [Token; 14] = [
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
    Token::Hole,
];

const DEFAULT_VAR: &str = "x0";

struct Grammar {
    table: Table,
    lparen: u32,
    rparen: u32,
    lambda: u32,
    dot: u32,
    comma: u32,
    case: u32,
    of: u32,
    lbrace: u32,
    rbrace: u32,
    semi: u32,
    left: u32,
    right: u32,
    arrow: u32,
    hole: u32,
    default_var: u32,
}

impl Grammar {
    fn new(input: &[Token]) -> Self {
        let mut entries: BTreeSet<(String, bool)> = FIXED.iter().map(|t| (String::from(t.text()), false)).collect();
        entries.insert((String::from(DEFAULT_VAR), true));
        for t in input {
            if let Token::Var(v) = t {
                entries.insert((v.clone(), true));
            }
        }
        let mut entries: Vec<_> = entries.into_iter().collect();
        entries.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let table = Table {
            texts: entries.iter().map(|e| e.0.clone()).collect(),
            is_var: entries.iter().map(|e| e.1).collect(),
        };
        let f = |t: Token| table.id(t.text(), false);
        Grammar {
            lparen: f(Token::LParen),
            rparen: f(Token::RParen),
            lambda: f(Token::Lambda),
            dot: f(Token::Dot),
            comma: f(Token::Comma),
            case: f(Token::Case),
            of: f(Token::Of),
            lbrace: f(Token::LBrace),
            rbrace: f(Token::RBrace),
            semi: f(Token::Semi),
            left: f(Token::Left),
            right: f(Token::Right),
            arrow: f(Token::Arrow),
            hole: f(Token::Hole),
            default_var: table.id(DEFAULT_VAR, true),
            table,
        }
    }

    /// Right-hand sides, each in reading order.
    fn productions(&self, nt: Nt) -> Vec<Vec<Sym>> {
        use Sym::{Tok, Var, N};
        match nt {
            Nt::Expr => vec![
                vec![Tok(self.lambda), Var, Tok(self.dot), N(Nt::Expr)],
                vec![Tok(self.case), N(Nt::Expr), Tok(self.of), N(Nt::Alts)],
                vec![N(Nt::Head), N(Nt::Args)],
            ],
            Nt::Alts => vec![
                vec![Tok(self.lparen), Var, Tok(self.comma), Var, Tok(self.rparen), Tok(self.arrow), N(Nt::Expr)],
                vec![
                    Tok(self.lbrace),
                    Tok(self.left),
                    Var,
                    Tok(self.arrow),
                    N(Nt::Expr),
                    Tok(self.semi),
                    Tok(self.right),
                    Var,
                    Tok(self.arrow),
                    N(Nt::Expr),
                    Tok(self.rbrace),
                ],
            ],
            Nt::Args => vec![vec![], vec![N(Nt::Head), N(Nt::Args)]],
            Nt::Head => vec![vec![Tok(self.left), N(Nt::Atom)], vec![Tok(self.right), N(Nt::Atom)], vec![N(Nt::Atom)]],
            Nt::Atom => vec![vec![Var], vec![Tok(self.hole)], vec![Tok(self.lparen), N(Nt::Expr), N(Nt::Close)]],
            Nt::Close => vec![vec![Tok(self.rparen)], vec![Tok(self.comma), N(Nt::Expr), Tok(self.rparen)]],
        }
    }

    /// Shortest, then lexicographically least, insertable token string
    /// derivable from `sym`.
    fn min_completion(&self, sym: Sym, out: &mut Vec<u32>) {
        match sym {
            Sym::Tok(t) => out.push(t),
            Sym::Var | Sym::N(Nt::Expr | Nt::Head | Nt::Atom) => out.push(self.default_var),
            Sym::N(Nt::Args) => {}
            Sym::N(Nt::Close) => out.push(self.rparen),
            Sym::N(Nt::Alts) => out.extend([
                self.lparen,
                self.default_var,
                self.comma,
                self.default_var,
                self.rparen,
                self.arrow,
                self.default_var,
            ]),
        }
    }
}

fn min_len(sym: Sym) -> usize {
    match sym {
        Sym::N(Nt::Args) => 0,
        Sym::N(Nt::Alts) => 7,
        _ => 1,
    }
}

/// How an input token can be consumed by the grammar.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Input {
    Fixed(u32),
    Var(u32),
    Foreign,
}

#[derive(PartialEq, Eq)]
struct Entry {
    priority: usize,
    cost: usize,
    out: Vec<u32>,
    pos: usize,
    /// Top of stack last.
    stack: Vec<Sym>,
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.priority
            .cmp(&other.priority)
            .then(self.out.len().cmp(&other.out.len()))
            .then_with(|| self.out.cmp(&other.out))
            .then(other.pos.cmp(&self.pos))
            .then_with(|| self.stack.cmp(&other.stack))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// [`nearest_term`] with an explicit limit on expanded search states.
pub fn nearest_term_with_budget(input: &[Token], budget: usize) -> Repair {
    let g = Grammar::new(input);
    let n = input.len();
    let classified: Vec<Input> = input
        .iter()
        .map(|t| match t {
            Token::Var(v) => Input::Var(g.table.id(v, true)),
            other if FIXED.contains(other) => Input::Fixed(g.table.id(other.text(), false)),
            _ => Input::Foreign,
        })
        .collect();

    let heuristic = |stack: &[Sym], pos: usize| {
        let need: usize = stack.iter().map(|s| min_len(*s)).sum();
        need.saturating_sub(n - pos)
    };

    let mut heap = BinaryHeap::new();
    let mut settled: BTreeSet<(usize, Vec<Sym>)> = BTreeSet::new();
    let mut best_cost: BTreeMap<(usize, Vec<Sym>), usize> = BTreeMap::new();
    let start = vec![Sym::N(Nt::Expr)];
    heap.push(Reverse(Entry { priority: heuristic(&start, 0), cost: 0, out: Vec::new(), pos: 0, stack: start }));

    let mut explored = 0usize;
    // Furthest-advanced settled state, kept for the over-budget fallback.
    let mut furthest: Option<(usize, usize, Vec<u32>, Vec<Sym>)> = None;

    let push = |heap: &mut BinaryHeap<Reverse<Entry>>,
                best_cost: &mut BTreeMap<(usize, Vec<Sym>), usize>,
                cost: usize,
                out: Vec<u32>,
                pos: usize,
                stack: Vec<Sym>| {
        let key = (pos, stack);
        match best_cost.get(&key) {
            Some(&c) if c < cost => return,
            _ => {}
        }
        best_cost.insert(key.clone(), cost);
        let (pos, stack) = key;
        let priority = cost + heuristic(&stack, pos);
        heap.push(Reverse(Entry { priority, cost, out, pos, stack }));
    };

    while let Some(Reverse(e)) = heap.pop() {
        let key = (e.pos, e.stack);
        if settled.contains(&key) {
            continue;
        }
        let (pos, stack) = key;
        if stack.is_empty() && pos == n {
            return finish(&g, e.out, e.cost, false, explored);
        }
        settled.insert((pos, stack.clone()));
        explored += 1;
        if furthest.as_ref().is_none_or(|f| pos > f.0) {
            furthest = Some((pos, e.cost, e.out.clone(), stack.clone()));
        }
        if explored >= budget {
            break;
        }

        if pos < n {
            push(&mut heap, &mut best_cost, e.cost + 1, e.out.clone(), pos + 1, stack.clone());
        }
        let Some(&top) = stack.last() else { continue };
        let mut rest = stack.clone();
        rest.pop();
        match top {
            Sym::N(nt) => {
                for rhs in g.productions(nt) {
                    let mut next = rest.clone();
                    next.extend(rhs.into_iter().rev());
                    push(&mut heap, &mut best_cost, e.cost, e.out.clone(), pos, next);
                }
            }
            Sym::Tok(t) => {
                if pos < n && classified[pos] == Input::Fixed(t) {
                    let mut out = e.out.clone();
                    out.push(t);
                    push(&mut heap, &mut best_cost, e.cost, out, pos + 1, rest.clone());
                }
                if t != g.hole {
                    let mut out = e.out.clone();
                    out.push(t);
                    push(&mut heap, &mut best_cost, e.cost + 1, out, pos, rest);
                }
            }
            Sym::Var => {
                if let Some(Input::Var(v)) = classified.get(pos) {
                    let mut out = e.out.clone();
                    out.push(*v);
                    push(&mut heap, &mut best_cost, e.cost, out, pos + 1, rest.clone());
                }
                let mut out = e.out;
                out.push(g.default_var);
                push(&mut heap, &mut best_cost, e.cost + 1, out, pos, rest);
            }
        }
    }

    // Out of budget: drop the unread input and close the stack as cheaply as possible.
    let (pos, cost, mut out, stack) = furthest.unwrap_or((0, 0, Vec::new(), vec![Sym::N(Nt::Expr)]));
    let mut cost = cost + (n - pos);
    for &sym in stack.iter().rev() {
        let before = out.len();
        g.min_completion(sym, &mut out);
        cost += out.len() - before;
    }
    finish(&g, out, cost, true, explored)
}

fn finish(g: &Grammar, out: Vec<u32>, distance: usize, budget_exceeded: bool, explored: usize) -> Repair {
    let tokens: Vec<Token> = out.iter().map(|&id| g.table.token(id)).collect();
    let term = parse_term(&tokens).expect("grammar derivations parse");
    Repair { term, tokens, distance, budget_exceeded, explored }
}
