//! Algebraic laws checked on random inputs.

mod common;

use common::{dp_indel, oracle_has_type, oracle_is_normal};
use proofsynth_core::ast::{alpha_eq, canonical_key, Term, TypeExpr, VarName};
use proofsynth_core::datagen::TermSpace;
use proofsynth_core::repair::{nearest_term, seq_edit_distance};
use proofsynth_core::search::{synthesize, GuideSpec, Outcome, SynthesisConfig};
use proofsynth_core::token::{
    encode_term, encode_type, lex_term, lex_type, parse_term, parse_type, tokenize_term, tokenize_type, Token,
};
use proofsynth_core::tree_edit::{imitate, tree_edit_distance, CostKind};
use proofsynth_core::typing::{check_closed, check_partial, infer_type, Skel, TypingContext};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_type() -> impl Strategy<Value = TypeExpr> {
    let leaf = prop::sample::select(vec!["a", "b", "c"]).prop_map(TypeExpr::atom);
    leaf.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| TypeExpr::arrow(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| TypeExpr::prod(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| TypeExpr::sum(l, r)),
        ]
    })
}

fn name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["x0", "x1", "x2", "y"]).prop_map(String::from)
}

/// Terms over a few names, possibly open, possibly with holes.
fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![1 => Just(Term::Hole), 3 => name().prop_map(Term::var)];
    leaf.prop_recursive(5, 24, 3, |inner| {
        prop_oneof![
            (name(), inner.clone()).prop_map(|(x, b)| Term::lam(x, b)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::pair(a, b)),
            (inner.clone(), name(), name(), inner.clone()).prop_map(|(s, x, y, b)| Term::case_pair(s, x, y, b)),
            inner.clone().prop_map(Term::inj_l),
            inner.clone().prop_map(Term::inj_r),
            (inner.clone(), name(), inner.clone(), name(), inner)
                .prop_map(|(s, x, l, y, r)| Term::case_sum(s, x, l, y, r)),
        ]
    })
}

/// Random closed typable hole-free terms from the uniform sampler.
fn arb_closed(max: usize, normal_only: bool) -> impl Strategy<Value = Term> {
    (2..=max, any::<u64>()).prop_map(move |(size, seed)| {
        TermSpace::new(normal_only).sample_term(size, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    })
}

/// Renames every binder (and its occurrences) injectively with a suffix.
fn rename_bound(t: &Term, suffix: &str) -> Term {
    fn go(t: &Term, env: &mut Vec<(VarName, VarName)>, suffix: &str, counter: &mut usize) -> Term {
        let fresh = |x: &VarName, counter: &mut usize| {
            *counter += 1;
            (x.clone(), VarName::new(format!("{}{suffix}{}", x.as_str(), counter)))
        };
        match t {
            Term::Hole => Term::Hole,
            Term::Var(x) => match env.iter().rev().find(|(a, _)| a == x) {
                Some((_, b)) => Term::Var(b.clone()),
                None => t.clone(),
            },
            Term::Lam(x, b) => {
                let pair = fresh(x, counter);
                let new = pair.1.clone();
                env.push(pair);
                let body = go(b, env, suffix, counter);
                env.pop();
                Term::Lam(new, Box::new(body))
            }
            Term::App(f, a) => Term::app(go(f, env, suffix, counter), go(a, env, suffix, counter)),
            Term::Pair(a, b) => Term::pair(go(a, env, suffix, counter), go(b, env, suffix, counter)),
            Term::CasePair(s, x, y, b) => {
                let s = go(s, env, suffix, counter);
                let px = fresh(x, counter);
                let py = fresh(y, counter);
                let (nx, ny) = (px.1.clone(), py.1.clone());
                env.push(px);
                env.push(py);
                let body = go(b, env, suffix, counter);
                env.pop();
                env.pop();
                Term::CasePair(Box::new(s), nx, ny, Box::new(body))
            }
            Term::InjL(m) => Term::inj_l(go(m, env, suffix, counter)),
            Term::InjR(m) => Term::inj_r(go(m, env, suffix, counter)),
            Term::CaseSum(s, x, l, y, r) => {
                let s = go(s, env, suffix, counter);
                let px = fresh(x, counter);
                let nx = px.1.clone();
                env.push(px);
                let l = go(l, env, suffix, counter);
                env.pop();
                let py = fresh(y, counter);
                let ny = py.1.clone();
                env.push(py);
                let r = go(r, env, suffix, counter);
                env.pop();
                Term::CaseSum(Box::new(s), nx, Box::new(l), ny, Box::new(r))
            }
        }
    }
    go(t, &mut Vec::new(), suffix, &mut 0)
}

/// Paths to every node in preorder.
fn paths(t: &Term) -> Vec<Vec<usize>> {
    fn go(t: &Term, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(p.clone());
        for (i, c) in t.children().into_iter().enumerate() {
            p.push(i);
            go(c, p, out);
            p.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

fn arb_tokens() -> impl Strategy<Value = Vec<Token>> {
    let tok = prop::sample::select(vec![
        Token::LParen,
        Token::RParen,
        Token::Lambda,
        Token::Dot,
        Token::Comma,
        Token::Case,
        Token::Of,
        Token::Left,
        Token::Right,
        Token::Arrow,
        Token::Var("x0".into()),
        Token::Var("x1".into()),
    ]);
    prop::collection::vec(tok, 0..12)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, ..ProptestConfig::default() })]

    #[test]
    fn alpha_eq_is_an_equivalence(t in arb_term()) {
        let a = rename_bound(&t, "a");
        let b = rename_bound(&a, "b");
        prop_assert!(alpha_eq(&t, &t));
        prop_assert!(alpha_eq(&t, &a) && alpha_eq(&a, &t));
        prop_assert!(alpha_eq(&a, &b) && alpha_eq(&t, &b));
    }

    #[test]
    fn keys_decide_alpha_equivalence(s in arb_term(), t in arb_term()) {
        prop_assert_eq!(canonical_key(&s) == canonical_key(&t), alpha_eq(&s, &t));
        prop_assert_eq!(canonical_key(&s), canonical_key(&rename_bound(&s, "r")));
    }

    #[test]
    fn canonical_names_preserve_alpha(t in arb_term()) {
        let c = t.canonical_names();
        prop_assert!(alpha_eq(&t, &c));
        prop_assert_eq!(c.canonical_names(), c);
    }

    #[test]
    fn filling_a_hole_adds_the_filler(t in arb_term(), filler in arb_term()) {
        if let Some(path) = t.first_hole() {
            let filled = t.replace_at(&path, filler.clone()).unwrap();
            prop_assert_eq!(filled.size(), t.size() - 1 + filler.size());
        }
    }

    #[test]
    fn types_round_trip(ty in arb_type()) {
        let toks = tokenize_type(&ty);
        prop_assert_eq!(parse_type(&toks).unwrap(), ty.clone());
        prop_assert_eq!(lex_type(&encode_type(&toks)).unwrap(), toks);
    }

    #[test]
    fn terms_round_trip(t in arb_term()) {
        let toks = tokenize_term(&t);
        prop_assert_eq!(parse_term(&toks).unwrap(), t.clone());
        prop_assert_eq!(lex_term(&encode_term(&toks)).unwrap(), toks);
    }

    #[test]
    fn tree_edit_distance_is_a_metric(a in arb_term(), b in arb_term(), c in arb_term()) {
        let ab = tree_edit_distance(&a, &b);
        prop_assert_eq!(tree_edit_distance(&a, &a), 0);
        prop_assert_eq!(ab, tree_edit_distance(&b, &a));
        prop_assert!(ab <= tree_edit_distance(&a, &c) + tree_edit_distance(&c, &b));
        prop_assert!(ab <= a.size() + b.size());
        prop_assert_eq!(ab == 0, a == b);
    }

    #[test]
    fn imitation_agrees_with_its_guide_on_holes(n in arb_term(), m in arb_term()) {
        let i = imitate(&n, &m);
        if n.is_hole_free() {
            prop_assert_eq!(i, n.clone());
        }
        prop_assert_eq!(imitate(&Term::Hole, &m), m.clone());
    }

    #[test]
    fn hole_refinement_is_monotone(t in arb_closed(8, false), pick in any::<prop::sample::Index>()) {
        let goal = infer_type(&t).unwrap();
        let ps = paths(&t);
        let coarser = t.replace_at(&ps[pick.index(ps.len())], Term::Hole).unwrap();
        prop_assert!(check_closed(&t, &goal));
        prop_assert!(check_closed(&coarser, &goal));
    }

    #[test]
    fn partial_checking_matches_constraint_solver(t in arb_term(), goal in arb_type()) {
        let ours = check_partial(&TypingContext::new(), &t, &Skel::from(&goal));
        prop_assert_eq!(ours, t.is_closed() && oracle_has_type(&t, &goal));
    }

    #[test]
    fn inference_is_stable_under_renaming(t in arb_closed(9, false)) {
        prop_assert_eq!(infer_type(&t), infer_type(&rename_bound(&t, "q")));
    }

    #[test]
    fn myers_matches_dp_and_script_replays(a in arb_tokens(), b in arb_tokens()) {
        let (d, script) = seq_edit_distance(&a, &b);
        prop_assert_eq!(d, dp_indel(&a, &b));
        prop_assert_eq!(script.cost(), d);
        prop_assert_eq!(script.apply(&a), b);
    }

    #[test]
    fn repair_output_parses_at_its_distance(input in arb_tokens()) {
        let r = nearest_term(&input);
        prop_assert!(!r.budget_exceeded);
        prop_assert_eq!(parse_term(&r.tokens).unwrap(), r.term.clone());
        prop_assert_eq!(seq_edit_distance(&r.tokens, &input).0, r.distance);
        prop_assert!(r.term.is_hole_free());
        if parse_term(&input).is_ok() {
            prop_assert_eq!(r.distance, 0);
        }
    }

    #[test]
    fn samples_are_closed_typable_and_sized(size in 2usize..=9, seed in any::<u64>(), normal_only in any::<bool>()) {
        let t = TermSpace::new(normal_only).sample_term(size, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(t.size(), size);
        prop_assert!(t.is_closed() && t.is_hole_free());
        prop_assert!(infer_type(&t).is_ok());
        if normal_only {
            prop_assert!(oracle_is_normal(&t));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn search_results_are_sound(t in arb_closed(6, true), kind in prop::sample::select(vec![CostKind::Bf, CostKind::Ed, CostKind::Im]), k in 0usize..3) {
        let goal = infer_type(&t).unwrap();
        let config = SynthesisConfig { max_pops: 5_000, ..SynthesisConfig::new(kind, GuideSpec::CorruptedOracle(k)) };
        let r = synthesize(&goal, &config, Some(&t)).unwrap();
        if let Outcome::Proved(p) = &r.outcome {
            prop_assert!(p.is_hole_free());
            prop_assert!(check_closed(p, &goal));
            prop_assert!(oracle_is_normal(p));
            prop_assert!(p.size() <= config.max_candidate_size);
        }
    }
}
