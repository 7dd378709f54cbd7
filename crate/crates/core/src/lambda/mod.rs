//! Planar affine λ-calculus: syntax, parsing, ordered type checking,
//! normalization, βη-comparison and Church encodings of words.

mod church;
pub(crate) mod db;
mod parse;
pub mod random;
mod syntax;
mod typing;

use std::collections::HashMap;

use thiserror::Error;

pub use church::{church_encode, church_readback, word_term};
pub use parse::{parse_program, parse_term, parse_type, Declaration, Program, TypeAst};
pub use syntax::{type_subst, Name, Signature, StrType, Term, Type, EPS};
pub use typing::{
    require_purely_affine, typecheck, typecheck_in, Derivation, Judgement, Mode, Rule,
};

/// Default β-step budget for [`normalize`].
pub const DEFAULT_FUEL: u64 = 1_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LambdaError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("duplicate definition of '{name}' at line {line}")]
    DuplicateDefinition { name: String, line: usize },
    #[error("unbound variable '{0}'")]
    Unbound(String),
    #[error("linear variable '{0}' used more than once")]
    UsedTwice(String),
    #[error("planar order violated: '{earlier}' is used after '{later}' but bound before it")]
    PlanarOrder { earlier: String, later: String },
    #[error("type mismatch: expected {expected}, found {found}")]
    TypeMismatch { expected: String, found: String },
    #[error("linear variable '{0}' occurs in the argument of an unrestricted application")]
    LinearInUnrestrictedArgument(String),
    #[error("type {0} is not purely affine")]
    NotPurelyAffine(String),
    #[error("normalization did not finish within {limit} β-steps")]
    FuelExhausted { limit: u64 },
    #[error("η-expansion failed: {0}")]
    EtaShape(String),
    #[error("normal form is not a word: {0}")]
    NotAWord(String),
    #[error("letter '{0}' is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("invalid signature: {0}")]
    Signature(String),
}

/// β-normal form by leftmost-outermost reduction with the default budget.
pub fn normalize(t: &Term) -> Result<Term, LambdaError> {
    normalize_with_fuel(t, DEFAULT_FUEL)
}

pub fn normalize_with_fuel(t: &Term, fuel: u64) -> Result<Term, LambdaError> {
    let mut fuel = db::Fuel::new(fuel);
    Ok(db::normalize(db::Db::from_term(t), &mut fuel)?.to_term())
}

/// Normal form together with the number of β-steps taken.
pub fn normalize_counting(t: &Term, fuel: u64) -> Result<(Term, u64), LambdaError> {
    let mut fuel = db::Fuel::new(fuel);
    let nf = db::normalize(db::Db::from_term(t), &mut fuel)?.to_term();
    Ok((nf, fuel.used))
}

/// β-normal η-long form of a closed-over-`sig` term at `ty`. Free
/// variables are typed by `context`.
pub fn eta_long_normal(
    t: &Term,
    ty: &Type,
    sig: &Signature,
    context: &[(Name, Type)],
    fuel: u64,
) -> Result<Term, LambdaError> {
    let mut f = db::Fuel::new(fuel);
    let nf = db::normalize(db::Db::from_term(t), &mut f)?;
    let free: HashMap<Name, Type> = context.iter().cloned().collect();
    let constant = |c: &str| sig.constant_type(c);
    let env = db::EtaEnv {
        constant: &constant,
        free: &free,
    };
    Ok(db::eta_long(&nf, ty, &env)?.to_term())
}

/// α-renames bound variables away from `avoid`.
pub fn rename_apart(t: &Term, avoid: impl IntoIterator<Item = Name>) -> Term {
    db::Db::from_term(t).to_term_avoiding(avoid)
}

/// βη-equivalence of two terms of type `ty` over `sig`.
pub fn beta_eta_equal(t: &Term, u: &Term, ty: &Type, sig: &Signature) -> Result<bool, LambdaError> {
    beta_eta_equal_in(&[], t, u, ty, sig)
}

/// βη-equivalence with free variables typed by `context`.
pub fn beta_eta_equal_in(
    context: &[(Name, Type)],
    t: &Term,
    u: &Term,
    ty: &Type,
    sig: &Signature,
) -> Result<bool, LambdaError> {
    let a = eta_long_normal(t, ty, sig, context, DEFAULT_FUEL)?;
    let b = eta_long_normal(u, ty, sig, context, DEFAULT_FUEL)?;
    Ok(a.alpha_eq(&b))
}
