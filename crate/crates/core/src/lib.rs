//! Proof synthesis for negation-free intuitionistic propositional logic.
//!
//! A proposition is a simple type over atoms with `→`, `×` and `+`; a proof
//! is a closed λ-term with pairs and sums inhabiting it. Synthesis starts
//! from a single hole and repeatedly fills the leftmost hole with a depth-one
//! context, exploring candidates in order of a cost that can reward closeness
//! (tree edit distance) to a *guide term* suggested by an external oracle.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ast;
pub mod datagen;
pub mod repair;
pub mod search;
pub mod token;
pub mod tree_edit;
pub mod typing;

pub use ast::{alpha_eq, canonical_key, find_beta_eta_redex, RedexKind, RedexLocation, Term, TypeExpr, VarName};
pub use datagen::{
    count_terms, evaluate_outputs, sample_term, test_dataset, training_dataset, DatasetEntry, EvalReport,
};
pub use repair::{nearest_term, seq_edit_distance, Repair};
pub use search::{gen_candidates, synthesize, GuideSpec, Outcome, SynthesisConfig, SynthesisResult};
pub use token::{parse_term, parse_type, tokenize_term, tokenize_type, ParseError, Token};
pub use tree_edit::{imitate, tree_edit_distance, CostKind};
pub use typing::{check_closed, check_partial, infer_type, unify, Skel, Substitution, TypeError, TypingContext};
