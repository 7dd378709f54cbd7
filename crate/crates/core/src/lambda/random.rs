//! Random well-typed planar affine terms, for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::syntax::{Signature, Term, Type, EPS};

/// A random purely affine type with at most `depth` nested arrows.
pub fn random_affine_type<R: Rng + ?Sized>(rng: &mut R, depth: usize) -> Type {
    if depth == 0 || rng.gen_bool(0.45) {
        Type::Base
    } else {
        Type::lin(
            random_affine_type(rng, depth - 1),
            random_affine_type(rng, depth - 1),
        )
    }
}

/// Generates terms of a requested type in an ordered linear context. Every
/// produced term is planar: application splits the context at a cut.
pub struct TermGen<'a> {
    pub sig: &'a Signature,
    pub max_type_depth: usize,
    /// Probability of building a β-redex at an application node.
    pub redex_bias: f64,
    counter: usize,
}

impl<'a> TermGen<'a> {
    pub fn new(sig: &'a Signature) -> TermGen<'a> {
        TermGen {
            sig,
            max_type_depth: 2,
            redex_bias: 0.5,
            counter: 0,
        }
    }

    fn fresh(&mut self) -> String {
        self.counter += 1;
        format!("x{}", self.counter)
    }

    /// A closed term of type `ty` whose syntax tree has depth at most
    /// roughly `depth`.
    pub fn closed<R: Rng + ?Sized>(&mut self, rng: &mut R, ty: &Type, depth: usize) -> Term {
        self.term(rng, &[], ty, depth)
    }

    /// A term of type `ty` using variables of `ctx` in order.
    pub fn term<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        ctx: &[(String, Type)],
        ty: &Type,
        depth: usize,
    ) -> Term {
        let vars: Vec<&String> = ctx
            .iter()
            .filter(|(_, t)| t == ty)
            .map(|(x, _)| x)
            .collect();
        if depth == 0 {
            if let Some(x) = vars.choose(rng) {
                return Term::var(x);
            }
            return self.inhabitant(rng, ctx, ty);
        }
        let choice = rng.gen_range(0..10);
        match (choice, ty) {
            (0..=1, _) if !vars.is_empty() => Term::var(vars.choose(rng).expect("non-empty")),
            (2..=4, Type::Lin(dom, cod)) => {
                let x = self.fresh();
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**dom).clone()));
                Term::lam(&x, self.term(rng, &inner, cod, depth - 1))
            }
            (2..=4, Type::Base) if !self.sig.letters().is_empty() => {
                let c = *self.sig.letters().choose(rng).expect("non-empty");
                Term::app(
                    Term::Const(Signature::letter_name(c)),
                    self.term(rng, ctx, ty, depth - 1),
                )
            }
            _ => {
                let arg_ty = random_affine_type(rng, self.max_type_depth);
                let cut = rng.gen_range(0..=ctx.len());
                let fun_ty = Type::lin(arg_ty.clone(), ty.clone());
                let fun = if rng.gen_bool(self.redex_bias) {
                    let x = self.fresh();
                    let mut inner = ctx[..cut].to_vec();
                    inner.push((x.clone(), arg_ty.clone()));
                    Term::lam(&x, self.term(rng, &inner, ty, depth - 1))
                } else {
                    self.term(rng, &ctx[..cut], &fun_ty, depth - 1)
                };
                let arg = self.term(rng, &ctx[cut..], &arg_ty, depth - 1);
                Term::app(fun, arg)
            }
        }
    }

    /// Some term of type `ty`, preferring context variables at base type.
    fn inhabitant<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        ctx: &[(String, Type)],
        ty: &Type,
    ) -> Term {
        match ty {
            Type::Base => {
                let endos: Vec<&String> = ctx
                    .iter()
                    .filter(|(_, t)| *t == Type::endo())
                    .map(|(x, _)| x)
                    .collect();
                match endos.choose(rng) {
                    Some(f) if rng.gen_bool(0.5) => Term::app(Term::var(f), Term::constant(EPS)),
                    _ => Term::constant(EPS),
                }
            }
            Type::Lin(dom, cod) => {
                let x = self.fresh();
                let mut inner = ctx.to_vec();
                inner.push((x.clone(), (**dom).clone()));
                Term::lam(&x, self.term(rng, &inner, cod, 0))
            }
            Type::Full(_, cod) => {
                let x = self.fresh();
                Term::lam(&x, self.inhabitant(rng, ctx, cod))
            }
        }
    }
}

/// Syntax-tree depth.
pub fn depth(t: &Term) -> usize {
    match t {
        Term::Var(_) | Term::Const(_) => 0,
        Term::Lam(_, b) => 1 + depth(b),
        Term::App(f, a) => 1 + depth(f).max(depth(a)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{typecheck, Mode};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_terms_typecheck_planar() {
        let sig = Signature::from_str_letters("ab").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut g = TermGen::new(&sig);
        let mut redexes = 0;
        for _ in 0..300 {
            let ty = random_affine_type(&mut rng, 2);
            let t = g.closed(&mut rng, &ty, 5);
            redexes += t.redex_count();
            typecheck(&t, &ty, &sig, Mode::Planar).unwrap_or_else(|e| panic!("{t} : {ty}: {e}"));
        }
        assert!(redexes > 100, "{redexes}");
    }
}
