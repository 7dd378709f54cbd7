//! Nameless term representation used for reduction and comparison.

use std::collections::{BTreeSet, HashMap};

use super::syntax::{Name, Term, Type};
use super::LambdaError;

#[derive(Clone, Debug)]
pub(crate) enum Db {
    Bound(usize),
    Free(Name),
    Const(Name),
    /// Binder name is only a hint for read-back.
    Lam(Name, Box<Db>),
    App(Box<Db>, Box<Db>),
}

impl Db {
    pub fn from_term(t: &Term) -> Db {
        fn go(t: &Term, scope: &mut Vec<Name>) -> Db {
            match t {
                Term::Var(x) => match scope.iter().rev().position(|y| y == x) {
                    Some(i) => Db::Bound(i),
                    None => Db::Free(x.clone()),
                },
                Term::Const(c) => Db::Const(c.clone()),
                Term::Lam(x, b) => {
                    scope.push(x.clone());
                    let body = go(b, scope);
                    scope.pop();
                    Db::Lam(x.clone(), Box::new(body))
                }
                Term::App(f, a) => Db::App(Box::new(go(f, scope)), Box::new(go(a, scope))),
            }
        }
        go(t, &mut Vec::new())
    }

    pub fn to_term(&self) -> Term {
        self.to_term_avoiding(std::iter::empty())
    }

    /// Read-back whose binders avoid the free names and `extra`.
    pub fn to_term_avoiding(&self, extra: impl IntoIterator<Item = Name>) -> Term {
        let mut avoid: BTreeSet<Name> = extra.into_iter().collect();
        self.collect_free(&mut avoid);
        self.to_term_in(&mut Vec::new(), &avoid)
    }

    fn collect_free(&self, out: &mut BTreeSet<Name>) {
        match self {
            Db::Free(x) => {
                out.insert(x.clone());
            }
            Db::Bound(_) | Db::Const(_) => {}
            Db::Lam(_, b) => b.collect_free(out),
            Db::App(f, a) => {
                f.collect_free(out);
                a.collect_free(out);
            }
        }
    }

    fn to_term_in(&self, scope: &mut Vec<Name>, avoid: &BTreeSet<Name>) -> Term {
        match self {
            Db::Bound(i) => Term::Var(scope[scope.len() - 1 - i].clone()),
            Db::Free(x) => Term::Var(x.clone()),
            Db::Const(c) => Term::Const(c.clone()),
            Db::Lam(hint, b) => {
                let mut name = hint.to_string();
                while avoid.contains(name.as_str()) || scope.iter().any(|s| **s == *name) {
                    name.push('\'');
                }
                let name: Name = name.into();
                scope.push(name.clone());
                let body = b.to_term_in(scope, avoid);
                scope.pop();
                Term::Lam(name, Box::new(body))
            }
            Db::App(f, a) => Term::app(f.to_term_in(scope, avoid), a.to_term_in(scope, avoid)),
        }
    }

    pub fn alpha_eq(&self, other: &Db) -> bool {
        match (self, other) {
            (Db::Bound(i), Db::Bound(j)) => i == j,
            (Db::Free(x), Db::Free(y)) | (Db::Const(x), Db::Const(y)) => x == y,
            (Db::Lam(_, b), Db::Lam(_, c)) => b.alpha_eq(c),
            (Db::App(f, a), Db::App(g, b)) => f.alpha_eq(g) && a.alpha_eq(b),
            _ => false,
        }
    }

    /// Adds `by` to every bound index `>= cutoff`.
    fn shift(&self, by: usize, cutoff: usize) -> Db {
        if by == 0 {
            return self.clone();
        }
        match self {
            Db::Bound(i) if *i >= cutoff => Db::Bound(i + by),
            Db::Bound(_) | Db::Free(_) | Db::Const(_) => self.clone(),
            Db::Lam(h, b) => Db::Lam(h.clone(), Box::new(b.shift(by, cutoff + 1))),
            Db::App(f, a) => Db::App(Box::new(f.shift(by, cutoff)), Box::new(a.shift(by, cutoff))),
        }
    }

    /// Body of an abstraction with its bound variable replaced by `arg`.
    fn instantiate(&self, arg: &Db) -> Db {
        fn go(t: &Db, depth: usize, arg: &Db) -> Db {
            match t {
                Db::Bound(i) if *i == depth => arg.shift(depth, 0),
                Db::Bound(i) if *i > depth => Db::Bound(i - 1),
                Db::Bound(_) | Db::Free(_) | Db::Const(_) => t.clone(),
                Db::Lam(h, b) => Db::Lam(h.clone(), Box::new(go(b, depth + 1, arg))),
                Db::App(f, a) => Db::App(Box::new(go(f, depth, arg)), Box::new(go(a, depth, arg))),
            }
        }
        go(self, 0, arg)
    }

    fn app(f: Db, a: Db) -> Db {
        Db::App(Box::new(f), Box::new(a))
    }
}

/// Step budget for normalization.
#[derive(Debug)]
pub(crate) struct Fuel {
    pub limit: u64,
    pub used: u64,
}

impl Fuel {
    pub fn new(limit: u64) -> Fuel {
        Fuel { limit, used: 0 }
    }

    fn step(&mut self) -> Result<(), LambdaError> {
        self.used += 1;
        if self.used > self.limit {
            Err(LambdaError::FuelExhausted { limit: self.limit })
        } else {
            Ok(())
        }
    }
}

/// Normal-order (leftmost-outermost) normalization.
pub(crate) fn normalize(t: Db, fuel: &mut Fuel) -> Result<Db, LambdaError> {
    let mut cur = t;
    loop {
        let (head, mut args) = unspine(cur);
        match head {
            Db::Lam(h, body) => {
                if args.is_empty() {
                    return Ok(Db::Lam(h, Box::new(normalize(*body, fuel)?)));
                }
                fuel.step()?;
                let arg = args.remove(0);
                cur = args.into_iter().fold(body.instantiate(&arg), Db::app);
            }
            head => {
                let mut acc = head;
                for a in args {
                    acc = Db::app(acc, normalize(a, fuel)?);
                }
                return Ok(acc);
            }
        }
    }
}

fn unspine(t: Db) -> (Db, Vec<Db>) {
    let mut args = Vec::new();
    let mut cur = t;
    while let Db::App(f, a) = cur {
        args.push(*a);
        cur = *f;
    }
    args.reverse();
    (cur, args)
}

/// Type environment for η-expansion: types of free variables and constants.
pub(crate) struct EtaEnv<'a> {
    pub constant: &'a dyn Fn(&str) -> Option<Type>,
    pub free: &'a HashMap<Name, Type>,
}

/// η-long form of a β-normal term at the given type.
pub(crate) fn eta_long(t: &Db, ty: &Type, env: &EtaEnv<'_>) -> Result<Db, LambdaError> {
    eta_in(t, ty, &mut Vec::new(), env)
}

fn eta_in(t: &Db, ty: &Type, ctx: &mut Vec<Type>, env: &EtaEnv<'_>) -> Result<Db, LambdaError> {
    match (t, ty.arrow_parts()) {
        (Db::Lam(h, b), Some((dom, cod))) => {
            ctx.push(dom.clone());
            let body = eta_in(b, cod, ctx, env);
            ctx.pop();
            Ok(Db::Lam(h.clone(), Box::new(body?)))
        }
        (Db::Lam(..), None) => Err(LambdaError::EtaShape(
            "abstraction found at base type".into(),
        )),
        (_, Some((dom, cod))) => {
            // Neutral term at an arrow type: expand once and continue.
            let applied = Db::app(t.shift(1, 0), Db::Bound(0));
            ctx.push(dom.clone());
            let body = eta_in(&applied, cod, ctx, env);
            ctx.pop();
            Ok(Db::Lam("x".into(), Box::new(body?)))
        }
        (_, None) => {
            let (head, args) = unspine(t.clone());
            let mut head_ty =
                match &head {
                    Db::Bound(i) => ctx[ctx.len() - 1 - i].clone(),
                    Db::Free(x) => env.free.get(x).cloned().ok_or_else(|| {
                        LambdaError::EtaShape(format!("untyped free variable {x}"))
                    })?,
                    Db::Const(c) => (env.constant)(c)
                        .ok_or_else(|| LambdaError::EtaShape(format!("unknown constant {c}")))?,
                    _ => return Err(LambdaError::EtaShape("term is not β-normal".into())),
                };
            let mut acc = head;
            for a in args {
                let (dom, cod) = match head_ty.arrow_parts() {
                    Some((d, c)) => (d.clone(), c.clone()),
                    None => {
                        return Err(LambdaError::EtaShape(
                            "too many arguments for head type".into(),
                        ))
                    }
                };
                acc = Db::app(acc, eta_in(&a, &dom, ctx, env)?);
                head_ty = cod;
            }
            if head_ty != Type::Base {
                return Err(LambdaError::EtaShape(
                    "neutral term not at base type".into(),
                ));
            }
            Ok(acc)
        }
    }
}
