//! Ordered tree edit distance (Zhang–Shasha, unit costs) over term ASTs, the
//! `imitate` matching of a partial candidate against a guide, and the three
//! search cost functions built from them.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::ast::{Term, VarName};

/// An ordered tree with string labels.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledTree {
    pub label: String,
    pub children: Vec<LabeledTree>,
}

impl LabeledTree {
    pub fn leaf(label: impl Into<String>) -> Self {
        LabeledTree { label: label.into(), children: Vec::new() }
    }

    pub fn node(label: impl Into<String>, children: Vec<LabeledTree>) -> Self {
        LabeledTree { label: label.into(), children }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(LabeledTree::size).sum::<usize>()
    }

    /// The tree image of a term. Binder and variable names are part of the
    /// labels unless `ignore_names` is set.
    pub fn from_term(t: &Term, ignore_names: bool) -> Self {
        let named = |kind: &str, names: &[&VarName]| -> String {
            if ignore_names {
                String::from(kind)
            } else {
                let mut s = format!("{}:", kind);
                for (i, n) in names.iter().enumerate() {
                    if i > 0 {
                        s.push(',');
                    }
                    s.push_str(n.as_str());
                }
                s
            }
        };
        let kids = |t: &Term| t.children().into_iter().map(|c| Self::from_term(c, ignore_names)).collect();
        match t {
            Term::Hole => Self::leaf("hole"),
            Term::Var(x) => Self::leaf(named("var", &[x])),
            Term::Lam(x, _) => Self::node(named("lam", &[x]), kids(t)),
            Term::App(..) => Self::node("app", kids(t)),
            Term::Pair(..) => Self::node("pair", kids(t)),
            Term::CasePair(_, x, y, _) => Self::node(named("casepair", &[x, y]), kids(t)),
            Term::InjL(_) => Self::node("left", kids(t)),
            Term::InjR(_) => Self::node("right", kids(t)),
            Term::CaseSum(_, x, _, y, _) => Self::node(named("casesum", &[x, y]), kids(t)),
        }
    }
}

/// Postorder flattening used by the Zhang–Shasha recurrences.
struct Postorder<'a> {
    labels: Vec<&'a str>,
    /// Leftmost leaf descendant of each node, in postorder indices.
    leftmost: Vec<usize>,
    keyroots: Vec<usize>,
}

impl<'a> Postorder<'a> {
    fn new(root: &'a LabeledTree) -> Self {
        fn walk<'a>(t: &'a LabeledTree, labels: &mut Vec<&'a str>, leftmost: &mut Vec<usize>) -> usize {
            let mut first_leaf = None;
            for c in &t.children {
                let l = walk(c, labels, leftmost);
                first_leaf.get_or_insert(l);
            }
            let idx = labels.len();
            labels.push(&t.label);
            let l = first_leaf.unwrap_or(idx);
            leftmost.push(l);
            l
        }
        let mut labels = Vec::new();
        let mut leftmost = Vec::new();
        walk(root, &mut labels, &mut leftmost);
        // A keyroot is the highest node with a given leftmost leaf.
        let n = labels.len();
        let mut seen = vec![false; n];
        let mut keyroots = Vec::new();
        for i in (0..n).rev() {
            if !seen[leftmost[i]] {
                seen[leftmost[i]] = true;
                keyroots.push(i);
            }
        }
        keyroots.sort_unstable();
        Postorder { labels, leftmost, keyroots }
    }
}

/// Unit-cost ordered tree edit distance.
pub fn zhang_shasha(a: &LabeledTree, b: &LabeledTree) -> usize {
    let pa = Postorder::new(a);
    let pb = Postorder::new(b);
    let (n, m) = (pa.labels.len(), pb.labels.len());
    let mut tree = vec![vec![0usize; m]; n];
    let mut forest = vec![vec![0usize; m + 1]; n + 1];
    for &i in &pa.keyroots {
        for &j in &pb.keyroots {
            let (li, lj) = (pa.leftmost[i], pb.leftmost[j]);
            // forest[x][y]: distance between a[li..li+x) and b[lj..lj+y)
            forest[0][0] = 0;
            for x in 1..=(i - li + 1) {
                forest[x][0] = forest[x - 1][0] + 1;
            }
            for y in 1..=(j - lj + 1) {
                forest[0][y] = forest[0][y - 1] + 1;
            }
            for x in 1..=(i - li + 1) {
                for y in 1..=(j - lj + 1) {
                    let (ni, nj) = (li + x - 1, lj + y - 1);
                    let del = forest[x - 1][y] + 1;
                    let ins = forest[x][y - 1] + 1;
                    if pa.leftmost[ni] == li && pb.leftmost[nj] == lj {
                        let relabel = usize::from(pa.labels[ni] != pb.labels[nj]);
                        let sub = forest[x - 1][y - 1] + relabel;
                        forest[x][y] = del.min(ins).min(sub);
                        tree[ni][nj] = forest[x][y];
                    } else {
                        let px = pa.leftmost[ni] - li;
                        let py = pb.leftmost[nj] - lj;
                        let sub = forest[px][py] + tree[ni][nj];
                        forest[x][y] = del.min(ins).min(sub);
                    }
                }
            }
        }
    }
    tree[n - 1][m - 1]
}

/// Tree edit distance between the labeled images of two terms.
pub fn tree_edit_distance(a: &Term, b: &Term) -> usize {
    zhang_shasha(&LabeledTree::from_term(a, false), &LabeledTree::from_term(b, false))
}

/// Same, with binder and variable names erased from labels.
pub fn tree_edit_distance_unnamed(a: &Term, b: &Term) -> usize {
    zhang_shasha(&LabeledTree::from_term(a, true), &LabeledTree::from_term(b, true))
}

/// Renames free occurrences of `from` to `to` in `t`, or `None` when `to`
/// would be captured.
fn rename_free(t: &Term, from: &VarName, to: &VarName) -> Option<Term> {
    if from == to {
        return Some(t.clone());
    }
    let r = |s: &Term| rename_free(s, from, to);
    let under = |binders: &[&VarName], body: &Term| -> Option<Term> {
        if binders.contains(&from) {
            Some(body.clone())
        } else if binders.contains(&to) && body.mentions_free(from) {
            None
        } else {
            rename_free(body, from, to)
        }
    };
    Some(match t {
        Term::Hole => Term::Hole,
        Term::Var(x) if x == from => Term::Var(to.clone()),
        Term::Var(_) => t.clone(),
        Term::Lam(x, b) => Term::Lam(x.clone(), under(&[x], b)?.into()),
        Term::App(a, b) => Term::app(r(a)?, r(b)?),
        Term::Pair(a, b) => Term::pair(r(a)?, r(b)?),
        Term::InjL(a) => Term::inj_l(r(a)?),
        Term::InjR(a) => Term::inj_r(r(a)?),
        Term::CasePair(s, x, y, b) => Term::CasePair(r(s)?.into(), x.clone(), y.clone(), under(&[x, y], b)?.into()),
        Term::CaseSum(s, x, l, y, rt) => {
            Term::CaseSum(r(s)?.into(), x.clone(), under(&[x], l)?.into(), y.clone(), under(&[y], rt)?.into())
        }
    })
}

/// Brings `guide_body`, bound by `guide_binders`, under the candidate's binder
/// names. `None` when renaming would capture a free variable.
fn align(guide_body: &Term, guide_binders: &[&VarName], cand_binders: &[&VarName]) -> Option<Term> {
    if guide_binders == cand_binders {
        return Some(guide_body.clone());
    }
    if guide_binders.iter().any(|g| cand_binders.contains(g)) && guide_binders.len() > 1 {
        // Simultaneous renaming with overlapping names; route through names
        // that cannot occur in either term.
        let mut t = guide_body.clone();
        let temps: Vec<VarName> = (0..guide_binders.len()).map(|i| VarName::new(format!("#tmp{}", i))).collect();
        for (g, tmp) in guide_binders.iter().zip(&temps) {
            t = rename_free(&t, g, tmp)?;
        }
        for (tmp, c) in temps.iter().zip(cand_binders) {
            t = rename_free(&t, tmp, c)?;
        }
        return Some(t);
    }
    let mut t = guide_body.clone();
    for (g, c) in guide_binders.iter().zip(cand_binders) {
        t = rename_free(&t, g, c)?;
    }
    Some(t)
}

/// Fills the holes of candidate `n` with the corresponding subterms of guide
/// `m` wherever their constructors agree down to the hole; on any mismatch
/// the candidate subterm is returned unchanged.
pub fn imitate(n: &Term, m: &Term) -> Term {
    match (n, m) {
        (Term::Hole, _) => m.clone(),
        (Term::Lam(x, nb), Term::Lam(y, mb)) => match align(mb, &[y], &[x]) {
            Some(mb) => Term::Lam(x.clone(), imitate(nb, &mb).into()),
            None => n.clone(),
        },
        (Term::App(n1, n2), Term::App(m1, m2)) => Term::app(imitate(n1, m1), imitate(n2, m2)),
        (Term::Pair(n1, n2), Term::Pair(m1, m2)) => Term::pair(imitate(n1, m1), imitate(n2, m2)),
        (Term::InjL(a), Term::InjL(b)) => Term::inj_l(imitate(a, b)),
        (Term::InjR(a), Term::InjR(b)) => Term::inj_r(imitate(a, b)),
        (Term::CasePair(n1, x, y, n2), Term::CasePair(m1, u, v, m2)) => match align(m2, &[u, v], &[x, y]) {
            Some(m2) => Term::CasePair(imitate(n1, m1).into(), x.clone(), y.clone(), imitate(n2, &m2).into()),
            None => n.clone(),
        },
        (Term::CaseSum(n1, x, n2, y, n3), Term::CaseSum(m1, u, m2, v, m3)) => {
            match (align(m2, &[u], &[x]), align(m3, &[v], &[y])) {
                (Some(m2), Some(m3)) => Term::CaseSum(
                    imitate(n1, m1).into(),
                    x.clone(),
                    imitate(n2, &m2).into(),
                    y.clone(),
                    imitate(n3, &m3).into(),
                ),
                _ => n.clone(),
            }
        }
        _ => n.clone(),
    }
}

/// Which cost orders the search queue.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CostKind {
    /// `size(N)`: ignores the guide.
    Bf,
    /// `size(N) + EditDist(M, N)`
    Ed,
    /// `size(N) + EditDist(M, imitate(N, M))`
    Im,
}

impl CostKind {
    pub fn tag(self) -> &'static str {
        match self {
            CostKind::Bf => "bf",
            CostKind::Ed => "ed",
            CostKind::Im => "im",
        }
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for CostKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bf" => Ok(CostKind::Bf),
            "ed" => Ok(CostKind::Ed),
            "im" => Ok(CostKind::Im),
            other => Err(format!("unknown cost function `{}` (expected bf, ed or im)", other)),
        }
    }
}

/// Cost of `candidate` relative to `guide`.
pub fn cost(kind: CostKind, guide: &Term, candidate: &Term) -> usize {
    match kind {
        CostKind::Bf => candidate.size(),
        CostKind::Ed => candidate.size() + tree_edit_distance(guide, candidate),
        CostKind::Im => candidate.size() + tree_edit_distance(guide, &imitate(candidate, guide)),
    }
}

/// A cost function with the guide's tree image computed once.
pub struct Coster {
    kind: CostKind,
    guide: Term,
    guide_tree: LabeledTree,
    ignore_names: bool,
}

impl Coster {
    pub fn new(kind: CostKind, guide: Term, ignore_names: bool) -> Self {
        let guide_tree = LabeledTree::from_term(&guide, ignore_names);
        Coster { kind, guide, guide_tree, ignore_names }
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn guide(&self) -> &Term {
        &self.guide
    }

    pub fn cost(&self, candidate: &Term) -> usize {
        let size = candidate.size();
        match self.kind {
            CostKind::Bf => size,
            CostKind::Ed => {
                size + zhang_shasha(&self.guide_tree, &LabeledTree::from_term(candidate, self.ignore_names))
            }
            CostKind::Im => {
                let imitated = imitate(candidate, &self.guide);
                size + zhang_shasha(&self.guide_tree, &LabeledTree::from_term(&imitated, self.ignore_names))
            }
        }
    }
}
