//! Propositions (types) and proof terms with holes, plus the structural
//! utilities the rest of the crate is built on: size, free variables,
//! α-equivalence, βη-redex detection and α-invariant keys.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// A proposition: atoms closed under `→`, `×` and `+`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeExpr {
    Atom(String),
    Arrow(Box<TypeExpr>, Box<TypeExpr>),
    Prod(Box<TypeExpr>, Box<TypeExpr>),
    Sum(Box<TypeExpr>, Box<TypeExpr>),
}

impl TypeExpr {
    pub fn atom(name: impl Into<String>) -> Self {
        TypeExpr::Atom(name.into())
    }

    pub fn arrow(l: TypeExpr, r: TypeExpr) -> Self {
        TypeExpr::Arrow(Box::new(l), Box::new(r))
    }

    pub fn prod(l: TypeExpr, r: TypeExpr) -> Self {
        TypeExpr::Prod(Box::new(l), Box::new(r))
    }

    pub fn sum(l: TypeExpr, r: TypeExpr) -> Self {
        TypeExpr::Sum(Box::new(l), Box::new(r))
    }

    /// Number of nodes (atoms and connectives).
    pub fn size(&self) -> usize {
        match self {
            TypeExpr::Atom(_) => 1,
            TypeExpr::Arrow(l, r) | TypeExpr::Prod(l, r) | TypeExpr::Sum(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Distinct atom names in first-occurrence (left-to-right) order.
    pub fn atoms(&self) -> Vec<String> {
        fn go(t: &TypeExpr, out: &mut Vec<String>) {
            match t {
                TypeExpr::Atom(a) => {
                    if !out.contains(a) {
                        out.push(a.clone());
                    }
                }
                TypeExpr::Arrow(l, r) | TypeExpr::Prod(l, r) | TypeExpr::Sum(l, r) => {
                    go(l, out);
                    go(r, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut out);
        out
    }

    /// Renames atoms to `a`, `b`, `c`, … in first-occurrence order. Two types
    /// are equal up to atom renaming iff their canonical forms are equal.
    pub fn canonical_atoms(&self) -> TypeExpr {
        let order = self.atoms();
        fn go(t: &TypeExpr, order: &[String]) -> TypeExpr {
            match t {
                TypeExpr::Atom(a) => {
                    let i = order.iter().position(|o| o == a).unwrap_or(0);
                    TypeExpr::Atom(atom_name(i))
                }
                TypeExpr::Arrow(l, r) => TypeExpr::arrow(go(l, order), go(r, order)),
                TypeExpr::Prod(l, r) => TypeExpr::prod(go(l, order), go(r, order)),
                TypeExpr::Sum(l, r) => TypeExpr::sum(go(l, order), go(r, order)),
            }
        }
        go(self, &order)
    }

    /// Equality up to a bijective renaming of atoms.
    pub fn eq_up_to_renaming(&self, other: &TypeExpr) -> bool {
        self.canonical_atoms() == other.canonical_atoms()
    }
}

/// Name of the `i`-th generated atom: `a` … `z`, then `a1` … `z1`, and so on.
pub fn atom_name(i: usize) -> String {
    let letter = (b'a' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{}{}", letter, i / 26)
    }
}

/// A term variable.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarName(String);

impl VarName {
    /// # Panics
    /// If `name` is empty.
    pub fn new(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(!name.is_empty(), "variable names are nonempty");
        VarName(name)
    }

    /// The canonical generated name `x{index}`.
    pub fn indexed(index: usize) -> Self {
        VarName(format!("x{}", index))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// `Some(k)` when the name has the generated form `x{k}`.
    pub fn index(&self) -> Option<usize> {
        let digits = self.0.strip_prefix('x')?;
        if digits.is_empty() || (digits.len() > 1 && digits.starts_with('0')) {
            return None;
        }
        digits.parse().ok()
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for VarName {
    fn from(s: &str) -> Self {
        VarName::new(s)
    }
}

/// A proof term, possibly containing holes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Hole,
    Var(VarName),
    Lam(VarName, Box<Term>),
    App(Box<Term>, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    /// `case scrut of (x, y) → body`
    CasePair(Box<Term>, VarName, VarName, Box<Term>),
    InjL(Box<Term>),
    InjR(Box<Term>),
    /// `case scrut of { Left x → left ; Right y → right }`
    CaseSum(Box<Term>, VarName, Box<Term>, VarName, Box<Term>),
}

/// Position of a subterm: child indices from the root, children numbered in
/// field order (e.g. `CaseSum`: scrutinee 0, left branch 1, right branch 2).
pub type Path = Vec<usize>;

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(VarName::new(name))
    }

    pub fn lam(x: impl Into<String>, body: Term) -> Self {
        Term::Lam(VarName::new(x), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Self {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn pair(a: Term, b: Term) -> Self {
        Term::Pair(Box::new(a), Box::new(b))
    }

    pub fn case_pair(s: Term, x: impl Into<String>, y: impl Into<String>, body: Term) -> Self {
        Term::CasePair(Box::new(s), VarName::new(x), VarName::new(y), Box::new(body))
    }

    pub fn inj_l(t: Term) -> Self {
        Term::InjL(Box::new(t))
    }

    pub fn inj_r(t: Term) -> Self {
        Term::InjR(Box::new(t))
    }

    pub fn case_sum(s: Term, x: impl Into<String>, l: Term, y: impl Into<String>, r: Term) -> Self {
        Term::CaseSum(Box::new(s), VarName::new(x), Box::new(l), VarName::new(y), Box::new(r))
    }

    /// Immediate subterms in field order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Hole | Term::Var(_) => Vec::new(),
            Term::Lam(_, b) | Term::InjL(b) | Term::InjR(b) => alloc::vec![&**b],
            Term::App(a, b) | Term::Pair(a, b) | Term::CasePair(a, _, _, b) => {
                alloc::vec![&**a, &**b]
            }
            Term::CaseSum(s, _, l, _, r) => alloc::vec![&**s, &**l, &**r],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Hole | Term::Var(_) => Vec::new(),
            Term::Lam(_, b) | Term::InjL(b) | Term::InjR(b) => alloc::vec![&mut **b],
            Term::App(a, b) | Term::Pair(a, b) | Term::CasePair(a, _, _, b) => {
                alloc::vec![&mut **a, &mut **b]
            }
            Term::CaseSum(s, _, l, _, r) => alloc::vec![&mut **s, &mut **l, &mut **r],
        }
    }

    /// Variables bound by this node for its `child`-th subterm.
    pub fn binders_for_child(&self, child: usize) -> Vec<&VarName> {
        match (self, child) {
            (Term::Lam(x, _), 0) => alloc::vec![x],
            (Term::CasePair(_, x, y, _), 1) => alloc::vec![x, y],
            (Term::CaseSum(_, x, _, _, _), 1) => alloc::vec![x],
            (Term::CaseSum(_, _, _, y, _), 2) => alloc::vec![y],
            _ => Vec::new(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    pub fn is_hole_free(&self) -> bool {
        match self {
            Term::Hole => false,
            _ => self.children().iter().all(|c| c.is_hole_free()),
        }
    }

    pub fn hole_count(&self) -> usize {
        match self {
            Term::Hole => 1,
            _ => self.children().iter().map(|c| c.hole_count()).sum(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        let mut bound = Vec::new();
        collect_free(self, &mut bound, &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Whether `x` occurs free.
    pub fn mentions_free(&self, x: &VarName) -> bool {
        match self {
            Term::Hole => false,
            Term::Var(v) => v == x,
            Term::Lam(b, body) => b != x && body.mentions_free(x),
            Term::App(a, b) | Term::Pair(a, b) => a.mentions_free(x) || b.mentions_free(x),
            Term::InjL(a) | Term::InjR(a) => a.mentions_free(x),
            Term::CasePair(s, y, z, body) => s.mentions_free(x) || (y != x && z != x && body.mentions_free(x)),
            Term::CaseSum(s, y, l, z, r) => {
                s.mentions_free(x) || (y != x && l.mentions_free(x)) || (z != x && r.mentions_free(x))
            }
        }
    }

    /// Every variable name that appears anywhere, bound or free.
    pub fn all_names(&self) -> BTreeSet<VarName> {
        fn go(t: &Term, out: &mut BTreeSet<VarName>) {
            match t {
                Term::Var(x) | Term::Lam(x, _) => {
                    out.insert(x.clone());
                }
                Term::CasePair(_, x, y, _) | Term::CaseSum(_, x, _, y, _) => {
                    out.insert(x.clone());
                    out.insert(y.clone());
                }
                _ => {}
            }
            for c in t.children() {
                go(c, out);
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Number of binder positions (a pair case binds two).
    pub fn binder_count(&self) -> usize {
        let own = match self {
            Term::Lam(..) => 1,
            Term::CasePair(..) | Term::CaseSum(..) => 2,
            _ => 0,
        };
        own + self.children().iter().map(|c| c.binder_count()).sum::<usize>()
    }

    pub fn subterm(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.subterm(rest),
        }
    }

    pub fn subterm_mut(&mut self, path: &[usize]) -> Option<&mut Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children_mut().into_iter().nth(i)?.subterm_mut(rest),
        }
    }

    /// Path to the leftmost-outermost (first in preorder) hole.
    pub fn first_hole(&self) -> Option<Path> {
        fn go(t: &Term, path: &mut Path) -> bool {
            if let Term::Hole = t {
                return true;
            }
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                if go(c, path) {
                    return true;
                }
                path.pop();
            }
            false
        }
        let mut path = Vec::new();
        go(self, &mut path).then_some(path)
    }

    /// Variables in scope at `path`, outermost binder first.
    pub fn scope_at(&self, path: &[usize]) -> Vec<VarName> {
        let mut scope = Vec::new();
        let mut node = self;
        for &i in path {
            scope.extend(node.binders_for_child(i).into_iter().cloned());
            match node.children().get(i) {
                Some(c) => node = c,
                None => break,
            }
        }
        scope
    }

    /// Replaces the subterm at `path` by `with`.
    pub fn replace_at(&self, path: &[usize], with: Term) -> Option<Term> {
        let mut out = self.clone();
        *out.subterm_mut(path)? = with;
        Some(out)
    }

    /// Renames bound variables to `x0`, `x1`, … in preorder of their binders,
    /// skipping names that occur free. Generated terms already have this form.
    pub fn canonical_names(&self) -> Term {
        let free = self.free_vars();
        let mut next = 0usize;
        let mut env: Vec<(VarName, VarName)> = Vec::new();
        canon(self, &free, &mut next, &mut env)
    }
}

fn fresh_canonical(free: &BTreeSet<VarName>, next: &mut usize) -> VarName {
    loop {
        let v = VarName::indexed(*next);
        *next += 1;
        if !free.contains(&v) {
            return v;
        }
    }
}

fn canon(t: &Term, free: &BTreeSet<VarName>, next: &mut usize, env: &mut Vec<(VarName, VarName)>) -> Term {
    let look = |env: &Vec<(VarName, VarName)>, x: &VarName| {
        env.iter().rev().find(|(from, _)| from == x).map(|(_, to)| to.clone()).unwrap_or_else(|| x.clone())
    };
    match t {
        Term::Hole => Term::Hole,
        Term::Var(x) => Term::Var(look(env, x)),
        Term::Lam(x, b) => {
            let nx = fresh_canonical(free, next);
            env.push((x.clone(), nx.clone()));
            let b = canon(b, free, next, env);
            env.pop();
            Term::Lam(nx, Box::new(b))
        }
        Term::App(a, b) => {
            let a = canon(a, free, next, env);
            Term::App(Box::new(a), Box::new(canon(b, free, next, env)))
        }
        Term::Pair(a, b) => {
            let a = canon(a, free, next, env);
            Term::Pair(Box::new(a), Box::new(canon(b, free, next, env)))
        }
        Term::InjL(a) => Term::InjL(Box::new(canon(a, free, next, env))),
        Term::InjR(a) => Term::InjR(Box::new(canon(a, free, next, env))),
        Term::CasePair(s, x, y, b) => {
            let nx = fresh_canonical(free, next);
            let ny = fresh_canonical(free, next);
            let s = canon(s, free, next, env);
            env.push((x.clone(), nx.clone()));
            env.push((y.clone(), ny.clone()));
            let b = canon(b, free, next, env);
            env.truncate(env.len() - 2);
            Term::CasePair(Box::new(s), nx, ny, Box::new(b))
        }
        Term::CaseSum(s, x, l, y, r) => {
            let nx = fresh_canonical(free, next);
            let ny = fresh_canonical(free, next);
            let s = canon(s, free, next, env);
            env.push((x.clone(), nx.clone()));
            let l = canon(l, free, next, env);
            env.pop();
            env.push((y.clone(), ny.clone()));
            let r = canon(r, free, next, env);
            env.pop();
            Term::CaseSum(Box::new(s), nx, Box::new(l), ny, Box::new(r))
        }
    }
}

fn collect_free<'a>(t: &'a Term, bound: &mut Vec<&'a VarName>, out: &mut BTreeSet<VarName>) {
    match t {
        Term::Hole => {}
        Term::Var(x) => {
            if !bound.contains(&x) {
                out.insert(x.clone());
            }
        }
        Term::Lam(x, b) => {
            bound.push(x);
            collect_free(b, bound, out);
            bound.pop();
        }
        Term::App(a, b) | Term::Pair(a, b) => {
            collect_free(a, bound, out);
            collect_free(b, bound, out);
        }
        Term::InjL(a) | Term::InjR(a) => collect_free(a, bound, out),
        Term::CasePair(s, x, y, b) => {
            collect_free(s, bound, out);
            bound.push(x);
            bound.push(y);
            collect_free(b, bound, out);
            bound.truncate(bound.len() - 2);
        }
        Term::CaseSum(s, x, l, y, r) => {
            collect_free(s, bound, out);
            bound.push(x);
            collect_free(l, bound, out);
            bound.pop();
            bound.push(y);
            collect_free(r, bound, out);
            bound.pop();
        }
    }
}

/// α-equivalence. Free variables are compared by name, bound ones by binding
/// position, holes only match holes.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    fn lookup(env: &[&VarName], x: &VarName) -> Option<usize> {
        env.iter().rev().position(|v| *v == x)
    }
    fn go<'a>(a: &'a Term, b: &'a Term, ea: &mut Vec<&'a VarName>, eb: &mut Vec<&'a VarName>) -> bool {
        match (a, b) {
            (Term::Hole, Term::Hole) => true,
            (Term::Var(x), Term::Var(y)) => match (lookup(ea, x), lookup(eb, y)) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            },
            (Term::Lam(x, m), Term::Lam(y, n)) => {
                ea.push(x);
                eb.push(y);
                let r = go(m, n, ea, eb);
                ea.pop();
                eb.pop();
                r
            }
            (Term::App(m1, m2), Term::App(n1, n2)) | (Term::Pair(m1, m2), Term::Pair(n1, n2)) => {
                go(m1, n1, ea, eb) && go(m2, n2, ea, eb)
            }
            (Term::InjL(m), Term::InjL(n)) | (Term::InjR(m), Term::InjR(n)) => go(m, n, ea, eb),
            (Term::CasePair(s1, x1, y1, m), Term::CasePair(s2, x2, y2, n)) => {
                if !go(s1, s2, ea, eb) {
                    return false;
                }
                ea.push(x1);
                ea.push(y1);
                eb.push(x2);
                eb.push(y2);
                let r = go(m, n, ea, eb);
                ea.truncate(ea.len() - 2);
                eb.truncate(eb.len() - 2);
                r
            }
            (Term::CaseSum(s1, x1, l1, y1, r1), Term::CaseSum(s2, x2, l2, y2, r2)) => {
                if !go(s1, s2, ea, eb) {
                    return false;
                }
                ea.push(x1);
                eb.push(x2);
                let left = go(l1, l2, ea, eb);
                ea.pop();
                eb.pop();
                if !left {
                    return false;
                }
                ea.push(y1);
                eb.push(y2);
                let right = go(r1, r2, ea, eb);
                ea.pop();
                eb.pop();
                right
            }
            _ => false,
        }
    }
    go(a, b, &mut Vec::new(), &mut Vec::new())
}

/// A de Bruijn-style rendering: equal for two terms iff they are α-equivalent.
pub fn canonical_key(t: &Term) -> String {
    fn go<'a>(t: &'a Term, env: &mut Vec<&'a VarName>, out: &mut String) {
        match t {
            Term::Hole => out.push('_'),
            Term::Var(x) => match env.iter().rev().position(|v| *v == x) {
                Some(i) => {
                    out.push('#');
                    out.push_str(&i.to_string());
                    out.push(';');
                }
                None => {
                    out.push('$');
                    out.push_str(x.as_str());
                    out.push(';');
                }
            },
            Term::Lam(x, b) => {
                out.push_str("L(");
                env.push(x);
                go(b, env, out);
                env.pop();
                out.push(')');
            }
            Term::App(a, b) => {
                out.push_str("A(");
                go(a, env, out);
                out.push(',');
                go(b, env, out);
                out.push(')');
            }
            Term::Pair(a, b) => {
                out.push_str("P(");
                go(a, env, out);
                out.push(',');
                go(b, env, out);
                out.push(')');
            }
            Term::InjL(a) => {
                out.push_str("l(");
                go(a, env, out);
                out.push(')');
            }
            Term::InjR(a) => {
                out.push_str("r(");
                go(a, env, out);
                out.push(')');
            }
            Term::CasePair(s, x, y, b) => {
                out.push_str("C(");
                go(s, env, out);
                out.push(',');
                env.push(x);
                env.push(y);
                go(b, env, out);
                env.truncate(env.len() - 2);
                out.push(')');
            }
            Term::CaseSum(s, x, l, y, r) => {
                out.push_str("S(");
                go(s, env, out);
                out.push(',');
                env.push(x);
                go(l, env, out);
                env.pop();
                out.push(',');
                env.push(y);
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

/// The shape of a detour or expansion pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RedexKind {
    /// `(λx.M) N`
    BetaApp,
    /// `case (M, N) of (x, y) → P`
    BetaPair,
    /// `case Left M of {…}` or `case Right M of {…}`
    BetaSum,
    /// `λx. M x` with `x` not free in `M`
    EtaLam,
    /// `case M of (x, y) → (x, y)`
    EtaPair,
    /// `case M of { Left x → Left x ; Right y → Right y }`
    EtaSum,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RedexLocation {
    pub path: Path,
    pub kind: RedexKind,
}

/// Redex pattern matched at the root of `t`, if any. Holes never match.
pub fn redex_at_root(t: &Term) -> Option<RedexKind> {
    match t {
        Term::App(f, _) if matches!(**f, Term::Lam(..)) => Some(RedexKind::BetaApp),
        Term::CasePair(s, _, _, _) if matches!(**s, Term::Pair(..)) => Some(RedexKind::BetaPair),
        Term::CaseSum(s, ..) if matches!(**s, Term::InjL(_) | Term::InjR(_)) => Some(RedexKind::BetaSum),
        Term::Lam(x, body) => match &**body {
            Term::App(f, a) if matches!(&**a, Term::Var(v) if v == x) && !f.mentions_free(x) => Some(RedexKind::EtaLam),
            _ => None,
        },
        Term::CasePair(_, x, y, body) => match &**body {
            Term::Pair(a, b)
                if matches!(&**a, Term::Var(v) if v == x) && matches!(&**b, Term::Var(v) if v == y) && x != y =>
            {
                Some(RedexKind::EtaPair)
            }
            _ => None,
        },
        Term::CaseSum(_, x, l, y, r) => {
            let left = matches!(&**l, Term::InjL(i) if matches!(&**i, Term::Var(v) if v == x));
            let right = matches!(&**r, Term::InjR(i) if matches!(&**i, Term::Var(v) if v == y));
            (left && right).then_some(RedexKind::EtaSum)
        }
        _ => None,
    }
}

/// The first βη-redex in preorder, if the term contains one.
pub fn find_beta_eta_redex(t: &Term) -> Option<RedexLocation> {
    fn go(t: &Term, path: &mut Path) -> Option<RedexLocation> {
        if let Some(kind) = redex_at_root(t) {
            return Some(RedexLocation { path: path.clone(), kind });
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            if let Some(r) = go(c, path) {
                return Some(r);
            }
            path.pop();
        }
        None
    }
    go(t, &mut Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn swap() -> Term {
        Term::lam("x0", Term::case_pair(Term::var("x0"), "x1", "x2", Term::pair(Term::var("x2"), Term::var("x1"))))
    }

    #[test]
    fn sizes() {
        assert_eq!(Term::Hole.size(), 1);
        assert_eq!(Term::lam("x", Term::var("x")).size(), 2);
        assert_eq!(swap().size(), 6);
    }

    #[test]
    fn free_variables() {
        let x: VarName = "x".into();
        assert_eq!(Term::var("x").free_vars().into_iter().collect::<Vec<_>>(), vec![x]);
        assert!(Term::lam("x", Term::var("x")).free_vars().is_empty());
        let t = Term::case_pair(Term::var("x"), "y", "z", Term::pair(Term::var("z"), Term::var("w")));
        let fv: Vec<_> = t.free_vars().into_iter().map(|v| v.to_string()).collect();
        assert_eq!(fv, vec!["w", "x"]);
    }

    #[test]
    fn alpha_equivalence() {
        assert!(alpha_eq(&Term::lam("x", Term::var("x")), &Term::lam("y", Term::var("y"))));
        let k = Term::lam("x", Term::lam("y", Term::var("x")));
        let ki = Term::lam("x", Term::lam("y", Term::var("y")));
        assert!(!alpha_eq(&k, &ki));
        assert!(alpha_eq(&Term::Hole, &Term::Hole));
        assert!(!alpha_eq(&Term::Hole, &Term::var("x")));
        // shadowing: λx.λx.x is λa.λb.b
        let shadow = Term::lam("x", Term::lam("x", Term::var("x")));
        assert!(alpha_eq(&shadow, &ki));
    }

    #[test]
    fn keys() {
        assert_eq!(canonical_key(&Term::lam("x", Term::var("x"))), canonical_key(&Term::lam("y", Term::var("y"))));
        assert_ne!(
            canonical_key(&Term::lam("x", Term::lam("y", Term::var("x")))),
            canonical_key(&Term::lam("x", Term::lam("y", Term::var("y"))))
        );
        assert_eq!(canonical_key(&Term::Hole), "_");
    }

    #[test]
    fn redexes() {
        let beta = Term::app(Term::lam("x", Term::var("x")), Term::var("y"));
        assert_eq!(find_beta_eta_redex(&beta), Some(RedexLocation { path: vec![], kind: RedexKind::BetaApp }));
        let eta = Term::lam("x", Term::app(Term::var("y"), Term::var("x")));
        assert_eq!(find_beta_eta_redex(&eta).map(|r| r.kind), Some(RedexKind::EtaLam));
        // x free in the function position: not an η-redex
        let not_eta = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
        assert_eq!(find_beta_eta_redex(&not_eta), None);
        assert_eq!(find_beta_eta_redex(&swap()), None);
        let eta_pair = Term::case_pair(Term::var("p"), "a", "b", Term::pair(Term::var("a"), Term::var("b")));
        assert_eq!(find_beta_eta_redex(&eta_pair).map(|r| r.kind), Some(RedexKind::EtaPair));
        let eta_sum =
            Term::case_sum(Term::var("s"), "a", Term::inj_l(Term::var("a")), "b", Term::inj_r(Term::var("b")));
        assert_eq!(find_beta_eta_redex(&eta_sum).map(|r| r.kind), Some(RedexKind::EtaSum));
        let beta_sum = Term::case_sum(Term::inj_l(Term::Hole), "a", Term::Hole, "b", Term::Hole);
        assert_eq!(find_beta_eta_redex(&beta_sum).map(|r| r.kind), Some(RedexKind::BetaSum));
        // holes never form redexes
        let holey = Term::app(Term::Hole, Term::var("y"));
        assert_eq!(find_beta_eta_redex(&holey), None);
        let nested = Term::lam("z", Term::pair(Term::var("z"), beta));
        assert_eq!(find_beta_eta_redex(&nested).unwrap().path, vec![0, 1]);
    }

    #[test]
    fn holes_and_scope() {
        let t = Term::lam("x0", Term::case_sum(Term::var("x0"), "x1", Term::Hole, "x2", Term::Hole));
        assert_eq!(t.first_hole(), Some(vec![0, 1]));
        let scope: Vec<_> = t.scope_at(&[0, 2]).into_iter().map(|v| v.to_string()).collect();
        assert_eq!(scope, vec!["x0", "x2"]);
        let filled = t.replace_at(&[0, 1], Term::var("x1")).unwrap();
        assert_eq!(filled.first_hole(), Some(vec![0, 2]));
        assert_eq!(filled.size(), t.size());
    }

    #[test]
    fn canonical_renaming() {
        let t = Term::lam("p", Term::case_pair(Term::var("p"), "a", "b", Term::pair(Term::var("b"), Term::var("a"))));
        assert_eq!(t.canonical_names(), swap());
        assert!(alpha_eq(&t, &t.canonical_names()));
    }

    #[test]
    fn atom_renaming() {
        let t = TypeExpr::arrow(TypeExpr::atom("q"), TypeExpr::prod(TypeExpr::atom("p"), TypeExpr::atom("q")));
        let c = t.canonical_atoms();
        assert_eq!(c, TypeExpr::arrow(TypeExpr::atom("a"), TypeExpr::prod(TypeExpr::atom("b"), TypeExpr::atom("a"))));
        assert!(t.eq_up_to_renaming(&c));
        assert_eq!(atom_name(27), "b1");
    }
}
