//! Simple types with unification variables, first-order unification, and the
//! typing judgement for partial terms (a hole checks against any type).

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::ast::{atom_name, Term, TypeExpr, VarName};

/// A type that may mention metavariables `?n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Skel {
    Atom(String),
    Meta(u32),
    Arrow(Box<Skel>, Box<Skel>),
    Prod(Box<Skel>, Box<Skel>),
    Sum(Box<Skel>, Box<Skel>),
}

impl Skel {
    pub fn arrow(l: Skel, r: Skel) -> Self {
        Skel::Arrow(Box::new(l), Box::new(r))
    }

    pub fn prod(l: Skel, r: Skel) -> Self {
        Skel::Prod(Box::new(l), Box::new(r))
    }

    pub fn sum(l: Skel, r: Skel) -> Self {
        Skel::Sum(Box::new(l), Box::new(r))
    }

    pub fn occurs(&self, m: u32) -> bool {
        match self {
            Skel::Atom(_) => false,
            Skel::Meta(n) => *n == m,
            Skel::Arrow(l, r) | Skel::Prod(l, r) | Skel::Sum(l, r) => l.occurs(m) || r.occurs(m),
        }
    }

    pub fn max_meta(&self) -> Option<u32> {
        match self {
            Skel::Atom(_) => None,
            Skel::Meta(n) => Some(*n),
            Skel::Arrow(l, r) | Skel::Prod(l, r) | Skel::Sum(l, r) => l.max_meta().max(r.max_meta()),
        }
    }

    /// Metavariables in first-occurrence order.
    pub fn metas(&self, out: &mut Vec<u32>) {
        match self {
            Skel::Atom(_) => {}
            Skel::Meta(n) => {
                if !out.contains(n) {
                    out.push(*n);
                }
            }
            Skel::Arrow(l, r) | Skel::Prod(l, r) | Skel::Sum(l, r) => {
                l.metas(out);
                r.metas(out);
            }
        }
    }

    /// `None` while metavariables remain.
    pub fn to_type(&self) -> Option<TypeExpr> {
        Some(match self {
            Skel::Atom(a) => TypeExpr::Atom(a.clone()),
            Skel::Meta(_) => return None,
            Skel::Arrow(l, r) => TypeExpr::arrow(l.to_type()?, r.to_type()?),
            Skel::Prod(l, r) => TypeExpr::prod(l.to_type()?, r.to_type()?),
            Skel::Sum(l, r) => TypeExpr::sum(l.to_type()?, r.to_type()?),
        })
    }
}

impl From<&TypeExpr> for Skel {
    fn from(t: &TypeExpr) -> Self {
        match t {
            TypeExpr::Atom(a) => Skel::Atom(a.clone()),
            TypeExpr::Arrow(l, r) => Skel::arrow((&**l).into(), (&**r).into()),
            TypeExpr::Prod(l, r) => Skel::prod((&**l).into(), (&**r).into()),
            TypeExpr::Sum(l, r) => Skel::sum((&**l).into(), (&**r).into()),
        }
    }
}

impl fmt::Display for Skel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skel::Atom(a) => f.write_str(a),
            Skel::Meta(n) => write!(f, "?{}", n),
            Skel::Arrow(l, r) => write!(f, "({} → {})", l, r),
            Skel::Prod(l, r) => write!(f, "({} × {})", l, r),
            Skel::Sum(l, r) => write!(f, "({} + {})", l, r),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnifyError {
    Occurs,
    Clash,
}

impl fmt::Display for UnifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnifyError::Occurs => f.write_str("occurs check failed"),
            UnifyError::Clash => f.write_str("constructor clash"),
        }
    }
}

impl core::error::Error for UnifyError {}

/// An idempotent substitution: no bound metavariable occurs in any image.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    map: BTreeMap<u32, Skel>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, m: u32) -> Option<&Skel> {
        self.map.get(&m)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Skel)> {
        self.map.iter().map(|(k, v)| (*k, v))
    }

    pub fn apply(&self, t: &Skel) -> Skel {
        match t {
            Skel::Atom(_) => t.clone(),
            Skel::Meta(n) => match self.map.get(n) {
                Some(s) => s.clone(),
                None => t.clone(),
            },
            Skel::Arrow(l, r) => Skel::arrow(self.apply(l), self.apply(r)),
            Skel::Prod(l, r) => Skel::prod(self.apply(l), self.apply(r)),
            Skel::Sum(l, r) => Skel::sum(self.apply(l), self.apply(r)),
        }
    }

    fn bind(&mut self, m: u32, t: Skel) -> Result<(), UnifyError> {
        if let Skel::Meta(n) = t {
            if n == m {
                return Ok(());
            }
        }
        if t.occurs(m) {
            return Err(UnifyError::Occurs);
        }
        for v in self.map.values_mut() {
            if v.occurs(m) {
                *v = replace_meta(v, m, &t);
            }
        }
        self.map.insert(m, t);
        Ok(())
    }

    /// Extends `self` to a most general unifier of `a` and `b`. On failure
    /// `self` may hold a partial extension; callers that need to backtrack
    /// keep a copy (see [`unify`]).
    pub fn unify_in_place(&mut self, a: &Skel, b: &Skel) -> Result<(), UnifyError> {
        let a = self.apply(a);
        let b = self.apply(b);
        self.unify_resolved(&a, &b)
    }

    fn unify_resolved(&mut self, a: &Skel, b: &Skel) -> Result<(), UnifyError> {
        match (a, b) {
            (Skel::Meta(m), _) => self.bind(*m, b.clone()),
            (_, Skel::Meta(m)) => self.bind(*m, a.clone()),
            (Skel::Atom(x), Skel::Atom(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(UnifyError::Clash)
                }
            }
            (Skel::Arrow(a1, a2), Skel::Arrow(b1, b2))
            | (Skel::Prod(a1, a2), Skel::Prod(b1, b2))
            | (Skel::Sum(a1, a2), Skel::Sum(b1, b2)) => {
                self.unify_resolved(a1, b1)?;
                let a2 = self.apply(a2);
                let b2 = self.apply(b2);
                self.unify_resolved(&a2, &b2)
            }
            _ => Err(UnifyError::Clash),
        }
    }
}

fn replace_meta(t: &Skel, m: u32, with: &Skel) -> Skel {
    match t {
        Skel::Atom(_) => t.clone(),
        Skel::Meta(n) if *n == m => with.clone(),
        Skel::Meta(_) => t.clone(),
        Skel::Arrow(l, r) => Skel::arrow(replace_meta(l, m, with), replace_meta(r, m, with)),
        Skel::Prod(l, r) => Skel::prod(replace_meta(l, m, with), replace_meta(r, m, with)),
        Skel::Sum(l, r) => Skel::sum(replace_meta(l, m, with), replace_meta(r, m, with)),
    }
}

/// Most general unifier of `a` and `b` extending `s`.
pub fn unify(a: &Skel, b: &Skel, s: Substitution) -> Result<Substitution, UnifyError> {
    let mut s = s;
    s.unify_in_place(a, b)?;
    Ok(s)
}

/// Ordered bindings; later bindings shadow earlier ones.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypingContext {
    bindings: Vec<(VarName, Skel)>,
}

impl TypingContext {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, x: VarName, t: Skel) -> Self {
        self.bindings.push((x, t));
        self
    }

    pub fn push(&mut self, x: VarName, t: Skel) {
        self.bindings.push((x, t));
    }

    pub fn pop(&mut self) {
        self.bindings.pop();
    }

    pub fn lookup(&self, x: &VarName) -> Option<&Skel> {
        self.bindings.iter().rev().find(|(v, _)| v == x).map(|(_, t)| t)
    }

    pub fn bindings(&self) -> &[(VarName, Skel)] {
        &self.bindings
    }

    fn max_meta(&self) -> Option<u32> {
        self.bindings.iter().filter_map(|(_, t)| t.max_meta()).max()
    }
}

/// Why a term could not be given a type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeError {
    Unbound(VarName),
    Unify(UnifyError),
    HasHoles,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeError::Unbound(x) => write!(f, "unbound variable {}", x),
            TypeError::Unify(e) => write!(f, "ill-typed: {}", e),
            TypeError::HasHoles => f.write_str("term contains holes"),
        }
    }
}

impl core::error::Error for TypeError {}

impl From<UnifyError> for TypeError {
    fn from(e: UnifyError) -> Self {
        TypeError::Unify(e)
    }
}

/// One inference session: owns its substitution and metavariable counter.
pub struct Inference {
    pub subst: Substitution,
    next_meta: u32,
}

impl Inference {
    pub fn starting_after(max_meta: Option<u32>) -> Self {
        Inference { subst: Substitution::new(), next_meta: max_meta.map_or(0, |m| m + 1) }
    }

    pub fn fresh(&mut self) -> Skel {
        let m = self.next_meta;
        self.next_meta += 1;
        Skel::Meta(m)
    }

    /// Constrains `t` to have type `goal` under `ctx`.
    pub fn check(&mut self, ctx: &mut TypingContext, t: &Term, goal: &Skel) -> Result<(), TypeError> {
        match t {
            Term::Hole => Ok(()),
            Term::Var(x) => {
                let ty = ctx.lookup(x).ok_or_else(|| TypeError::Unbound(x.clone()))?.clone();
                Ok(self.subst.unify_in_place(&ty, goal)?)
            }
            Term::Lam(x, body) => {
                let (a, r) = (self.fresh(), self.fresh());
                self.subst.unify_in_place(goal, &Skel::arrow(a.clone(), r.clone()))?;
                ctx.push(x.clone(), a);
                let res = self.check(ctx, body, &r);
                ctx.pop();
                res
            }
            Term::App(f, arg) => {
                let a = self.fresh();
                self.check(ctx, f, &Skel::arrow(a.clone(), goal.clone()))?;
                self.check(ctx, arg, &a)
            }
            Term::Pair(m, n) => {
                let (a, b) = (self.fresh(), self.fresh());
                self.subst.unify_in_place(goal, &Skel::prod(a.clone(), b.clone()))?;
                self.check(ctx, m, &a)?;
                self.check(ctx, n, &b)
            }
            Term::InjL(m) | Term::InjR(m) => {
                let (a, b) = (self.fresh(), self.fresh());
                self.subst.unify_in_place(goal, &Skel::sum(a.clone(), b.clone()))?;
                let inner = if matches!(t, Term::InjL(_)) { a } else { b };
                self.check(ctx, m, &inner)
            }
            Term::CasePair(s, x, y, body) => {
                let (a, b) = (self.fresh(), self.fresh());
                self.check(ctx, s, &Skel::prod(a.clone(), b.clone()))?;
                ctx.push(x.clone(), a);
                ctx.push(y.clone(), b);
                let res = self.check(ctx, body, goal);
                ctx.pop();
                ctx.pop();
                res
            }
            Term::CaseSum(s, x, l, y, r) => {
                let (a, b) = (self.fresh(), self.fresh());
                self.check(ctx, s, &Skel::sum(a.clone(), b.clone()))?;
                ctx.push(x.clone(), a);
                let left = self.check(ctx, l, goal);
                ctx.pop();
                left?;
                ctx.push(y.clone(), b);
                let right = self.check(ctx, r, goal);
                ctx.pop();
                right
            }
        }
    }
}

/// Whether some assignment of types to holes and metavariables gives
/// `ctx ⊢ t : goal`. Atoms in `goal` are rigid.
pub fn check_partial(ctx: &TypingContext, t: &Term, goal: &Skel) -> bool {
    let mut inf = Inference::starting_after(ctx.max_meta().max(goal.max_meta()));
    let mut ctx = ctx.clone();
    inf.check(&mut ctx, t, goal).is_ok()
}

/// `check_partial` for a closed term against a proposition.
pub fn check_closed(t: &Term, goal: &TypeExpr) -> bool {
    check_partial(&TypingContext::new(), t, &Skel::from(goal))
}

/// Principal simple type of a closed hole-free term, with residual
/// metavariables renamed to `a`, `b`, … in first-occurrence order.
pub fn infer_type(t: &Term) -> Result<TypeExpr, TypeError> {
    if !t.is_hole_free() {
        return Err(TypeError::HasHoles);
    }
    let mut inf = Inference::starting_after(None);
    let goal = inf.fresh();
    inf.check(&mut TypingContext::new(), t, &goal)?;
    Ok(ground(&inf.subst.apply(&goal)))
}

/// Replaces metavariables by fresh atoms in first-occurrence order.
pub fn ground(t: &Skel) -> TypeExpr {
    let mut order = Vec::new();
    t.metas(&mut order);
    fn go(t: &Skel, order: &[u32]) -> TypeExpr {
        match t {
            Skel::Atom(a) => TypeExpr::Atom(a.clone()),
            Skel::Meta(m) => {
                let i = order.iter().position(|o| o == m).unwrap_or(0);
                TypeExpr::Atom(atom_name(i))
            }
            Skel::Arrow(l, r) => TypeExpr::arrow(go(l, order), go(r, order)),
            Skel::Prod(l, r) => TypeExpr::prod(go(l, order), go(r, order)),
            Skel::Sum(l, r) => TypeExpr::sum(go(l, order), go(r, order)),
        }
    }
    go(t, &order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: &str) -> TypeExpr {
        TypeExpr::atom(n)
    }

    fn swap_type() -> TypeExpr {
        TypeExpr::arrow(TypeExpr::prod(a("α1"), a("α2")), TypeExpr::prod(a("α2"), a("α1")))
    }

    fn swap_with(first: &str, second: &str) -> Term {
        Term::lam("x0", Term::case_pair(Term::var("x0"), "x1", "x2", Term::pair(Term::var(first), Term::var(second))))
    }

    #[test]
    fn unification() {
        let bb = Skel::arrow(Skel::Atom("β".into()), Skel::Atom("β".into()));
        let s = unify(&Skel::Meta(0), &bb, Substitution::new()).unwrap();
        assert_eq!(s.get(0), Some(&bb));
        let occurs = unify(&Skel::Meta(0), &Skel::arrow(Skel::Meta(0), Skel::Atom("β".into())), Substitution::new());
        assert_eq!(occurs, Err(UnifyError::Occurs));
        let clash = unify(
            &Skel::prod(Skel::Atom("α".into()), Skel::Atom("β".into())),
            &Skel::sum(Skel::Atom("α".into()), Skel::Atom("β".into())),
            Substitution::new(),
        );
        assert_eq!(clash, Err(UnifyError::Clash));
    }

    #[test]
    fn substitution_stays_idempotent() {
        let mut s = Substitution::new();
        s.unify_in_place(&Skel::Meta(0), &Skel::arrow(Skel::Meta(1), Skel::Meta(2))).unwrap();
        s.unify_in_place(&Skel::Meta(1), &Skel::Meta(2)).unwrap();
        s.unify_in_place(&Skel::Meta(2), &Skel::Atom("a".into())).unwrap();
        for (m, img) in s.iter() {
            for (n, _) in s.iter() {
                assert!(!img.occurs(n), "?{} ↦ {} mentions ?{}", m, img, n);
            }
        }
        assert_eq!(s.apply(&Skel::Meta(0)), Skel::arrow(Skel::Atom("a".into()), Skel::Atom("a".into())));
    }

    #[test]
    fn holes_check_against_anything() {
        for t in [a("α"), swap_type(), TypeExpr::sum(a("p"), TypeExpr::arrow(a("q"), a("p")))] {
            assert!(check_closed(&Term::Hole, &t));
        }
    }

    #[test]
    fn swap_terms() {
        assert!(!check_closed(&swap_with("x1", "x1"), &swap_type()));
        assert!(check_closed(&swap_with("x2", "x1"), &swap_type()));
    }

    #[test]
    fn unbound_is_false() {
        assert!(!check_closed(&Term::var("y"), &a("α")));
        assert!(matches!(infer_type(&Term::var("y")), Err(TypeError::Unbound(_))));
    }

    #[test]
    fn inference() {
        assert_eq!(infer_type(&Term::lam("x", Term::var("x"))).unwrap(), TypeExpr::arrow(a("a"), a("a")));
        assert_eq!(
            infer_type(&swap_with("x2", "x1")).unwrap(),
            TypeExpr::arrow(TypeExpr::prod(a("a"), a("b")), TypeExpr::prod(a("b"), a("a")))
        );
        let omega = Term::lam("x", Term::app(Term::var("x"), Term::var("x")));
        assert_eq!(infer_type(&omega), Err(TypeError::Unify(UnifyError::Occurs)));
        assert_eq!(infer_type(&Term::lam("x", Term::Hole)), Err(TypeError::HasHoles));
    }

    #[test]
    fn case_sum_typing() {
        // λx0. case x0 of { Left x1 → Right x1 ; Right x2 → Left x2 } : a + b → b + a
        let t = Term::lam(
            "x0",
            Term::case_sum(Term::var("x0"), "x1", Term::inj_r(Term::var("x1")), "x2", Term::inj_l(Term::var("x2"))),
        );
        assert_eq!(
            infer_type(&t).unwrap(),
            TypeExpr::arrow(TypeExpr::sum(a("a"), a("b")), TypeExpr::sum(a("b"), a("a")))
        );
    }

    #[test]
    fn open_context() {
        let ctx =
            TypingContext::new().with(VarName::new("f"), Skel::arrow(Skel::Atom("a".into()), Skel::Atom("b".into())));
        assert!(check_partial(&ctx, &Term::app(Term::var("f"), Term::Hole), &Skel::Atom("b".into())));
        assert!(!check_partial(&ctx, &Term::app(Term::var("f"), Term::Hole), &Skel::Atom("a".into())));
    }
}
