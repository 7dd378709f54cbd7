//! Interpretation of purely affine terms as diagrams.
//!
//! `⟦o⟧ = +-` and `⟦τ -o σ⟧ = ⟦σ⟧ ⊗ ⟦τ⟧*`. A term in context `Δ` denotes a
//! diagram `⟦Δ⟧ -> ⟦τ⟧`, computed by recursion on its typing derivation.

use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Edge, Planarity, Polarity, PolarityWord, Vertex};
use crate::lambda::{
    typecheck, typecheck_in, Derivation, Judgement, LambdaError, Mode, Name, Rule, Signature, Term,
    Type, EPS,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InterpError {
    #[error("type {0} is not purely affine")]
    NotPurelyAffine(String),
    #[error("unrestricted variable '{0}' cannot be interpreted")]
    NonLinearVariable(String),
    #[error("unknown constant '{0}'")]
    UnknownConstant(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// The output alphabet and the category variant to interpret into.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InterpEnv {
    pub alphabet: Signature,
    pub mode: Planarity,
}

impl InterpEnv {
    pub fn new(alphabet: Signature, mode: Planarity) -> InterpEnv {
        InterpEnv { alphabet, mode }
    }

    pub fn for_mode(alphabet: Signature, mode: Mode) -> InterpEnv {
        let mode = match mode {
            Mode::Planar => Planarity::Planar,
            Mode::Commutative => Planarity::Symmetric,
        };
        InterpEnv { alphabet, mode }
    }

    pub fn base_object() -> PolarityWord {
        PolarityWord::new(vec![Polarity::Plus, Polarity::Minus])
    }

    /// `⟦a⟧ : 1 -> +-+-`, or `⟦eps⟧ : 1 -> +-`.
    pub fn constant(&self, name: &str) -> Result<Diagram, InterpError> {
        if name == EPS {
            return Ok(Diagram::new(
                PolarityWord::unit(),
                InterpEnv::base_object(),
                vec![Edge::new(Vertex::output(2), Vertex::output(1), "")],
                self.mode,
            )?);
        }
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if self.alphabet.contains(c) => Ok(Diagram::new(
                PolarityWord::unit(),
                interp_type(&Type::endo())?,
                vec![
                    Edge::new(Vertex::output(4), Vertex::output(1), ""),
                    Edge::new(Vertex::output(2), Vertex::output(3), c.to_string()),
                ],
                self.mode,
            )?),
            _ => Err(InterpError::UnknownConstant(name.to_string())),
        }
    }
}

pub fn interp_type(ty: &Type) -> Result<PolarityWord, InterpError> {
    match ty {
        Type::Base => Ok(InterpEnv::base_object()),
        Type::Lin(d, c) => Ok(interp_type(c)?.tensor(&interp_type(d)?.dual())),
        Type::Full(..) => Err(InterpError::NotPurelyAffine(ty.to_string())),
    }
}

/// `⟦x₁ : τ₁, …, xₙ : τₙ⟧ = ⟦τ₁⟧ ⊗ … ⊗ ⟦τₙ⟧`.
pub fn interp_context(ctx: &[(Name, Type)]) -> Result<PolarityWord, InterpError> {
    ctx.iter().try_fold(PolarityWord::unit(), |acc, (_, t)| {
        Ok(acc.tensor(&interp_type(t)?))
    })
}

pub fn interp_term(j: &Judgement, env: &InterpEnv) -> Result<Diagram, InterpError> {
    interp_derivation(&j.derivation, env)
}

pub fn interp_derivation(d: &Derivation, env: &InterpEnv) -> Result<Diagram, InterpError> {
    let context = interp_context(&d.context)?;
    let result = match &d.rule {
        Rule::Constant(c) => Diagram::bottom_in(&context, &PolarityWord::unit(), env.mode)
            .compose(&env.constant(c)?)?,
        Rule::LinearVar { index } => {
            let before = interp_context(&d.context[..*index])?;
            let after = interp_context(&d.context[index + 1..])?;
            let unit = PolarityWord::unit();
            Diagram::bottom_in(&before, &unit, env.mode)
                .tensor(&Diagram::identity_in(&interp_type(&d.ty)?, env.mode))
                .tensor(&Diagram::bottom_in(&after, &unit, env.mode))
        }
        Rule::LinLam { body, .. } => interp_derivation(body, env)?.curry(context.len())?,
        Rule::LinApp {
            fun,
            arg,
            fun_ctx,
            arg_ctx,
        } => {
            let (dom, cod) = match &fun.ty {
                Type::Lin(dom, cod) => (dom, cod),
                other => return Err(InterpError::NotPurelyAffine(other.to_string())),
            };
            let pair = interp_derivation(fun, env)?.tensor(&interp_derivation(arg, env)?);
            let ev = Diagram::identity_in(&interp_type(cod)?, env.mode)
                .tensor(&Diagram::cap(&interp_type(dom)?));
            let applied = pair.compose(&ev)?;
            let order: Vec<usize> = fun_ctx.iter().chain(arg_ctx).copied().collect();
            if order.iter().enumerate().all(|(i, &j)| i == j) {
                applied
            } else {
                let blocks = d
                    .context
                    .iter()
                    .map(|(_, t)| interp_type(t))
                    .collect::<Result<Vec<_>, _>>()?;
                Diagram::permutation(&blocks, &order).compose(&applied)?
            }
        }
        Rule::NonLinearVar(x) => return Err(InterpError::NonLinearVariable(x.to_string())),
        Rule::FullLam { .. } | Rule::FullApp { .. } => {
            return Err(InterpError::NotPurelyAffine(d.ty.to_string()))
        }
    };
    Ok(result)
}

/// Type checks a closed term and interprets it.
pub fn interp_closed(
    term: &Term,
    ty: &Type,
    sig: &Signature,
    mode: Mode,
) -> Result<Diagram, InterpError> {
    let j = typecheck(term, ty, sig, mode)?;
    interp_term(&j, &InterpEnv::for_mode(sig.clone(), mode))
}

/// Type checks and interprets a term in an ordered linear context.
pub fn interp_open(
    ctx: &[(Name, Type)],
    term: &Term,
    ty: &Type,
    sig: &Signature,
    mode: Mode,
) -> Result<Diagram, InterpError> {
    let j = typecheck_in(ctx, term, ty, sig, mode)?;
    interp_term(&j, &InterpEnv::for_mode(sig.clone(), mode))
}

/// The label of the only possible edge of a diagram `1 -> +-`; `None` is ⊥.
pub fn readoff(d: &Diagram) -> Result<Option<String>, DiagramError> {
    if !d.dom().is_empty() {
        return Err(DiagramError::BoundaryMismatch {
            left: d.dom().clone(),
            right: PolarityWord::unit(),
        });
    }
    if d.cod() != &InterpEnv::base_object() {
        return Err(DiagramError::BoundaryMismatch {
            left: d.cod().clone(),
            right: InterpEnv::base_object(),
        });
    }
    Ok(d.label_between(Vertex::output(2), Vertex::output(1))
        .map(str::to_string))
}
