//! Abstract syntax of types and terms.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use super::LambdaError;

/// Identifier of a variable, constant or binder.
pub type Name = Arc<str>;

/// Reserved constant name for the empty word `ε`.
pub const EPS: &str = "eps";

/// Simple types built from the base type `o`, the linear arrow `-o` and the
/// unrestricted arrow `->`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base,
    Lin(Box<Type>, Box<Type>),
    Full(Box<Type>, Box<Type>),
}

impl Type {
    pub fn lin(dom: Type, cod: Type) -> Type {
        Type::Lin(Box::new(dom), Box::new(cod))
    }

    pub fn full(dom: Type, cod: Type) -> Type {
        Type::Full(Box::new(dom), Box::new(cod))
    }

    /// `o -o o`, the type of a letter constant.
    pub fn endo() -> Type {
        Type::lin(Type::Base, Type::Base)
    }

    /// True when no `->` occurs in the type.
    pub fn is_purely_affine(&self) -> bool {
        match self {
            Type::Base => true,
            Type::Lin(d, c) => d.is_purely_affine() && c.is_purely_affine(),
            Type::Full(..) => false,
        }
    }

    /// Number of occurrences of the base type.
    pub fn base_count(&self) -> usize {
        match self {
            Type::Base => 1,
            Type::Lin(d, c) | Type::Full(d, c) => d.base_count() + c.base_count(),
        }
    }

    /// Domain and codomain of an arrow of either kind.
    pub fn arrow_parts(&self) -> Option<(&Type, &Type)> {
        match self {
            Type::Lin(d, c) | Type::Full(d, c) => Some((d, c)),
            Type::Base => None,
        }
    }

    /// Substitutes `kappa` for every occurrence of the base type. Arrows of
    /// both kinds keep their kind.
    pub fn subst(&self, kappa: &Type) -> Type {
        match self {
            Type::Base => kappa.clone(),
            Type::Lin(d, c) => Type::lin(d.subst(kappa), c.subst(kappa)),
            Type::Full(d, c) => Type::full(d.subst(kappa), c.subst(kappa)),
        }
    }

    /// Church string type `(o -o o) -> ... -> (o -o o) -> o -> o` with one
    /// letter argument per alphabet symbol.
    pub fn church_string(alphabet_len: usize) -> Type {
        (0..alphabet_len).fold(Type::full(Type::Base, Type::Base), |acc, _| {
            Type::full(Type::endo(), acc)
        })
    }

    /// `Str_Σ[κ]`.
    pub fn church_string_at(alphabet_len: usize, kappa: &Type) -> Type {
        Type::church_string(alphabet_len).subst(kappa)
    }

    /// `κ_n = (o -o o) -o ... -o (o -o o) -o o`, the register-bank type.
    pub fn register_bank(n: usize) -> Type {
        (0..n).fold(Type::Base, |acc, _| Type::lin(Type::endo(), acc))
    }
}

/// Substitution of `kappa` for `o` in `ty`.
pub fn type_subst(ty: &Type, kappa: &Type) -> Type {
    ty.subst(kappa)
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn atom(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                Type::Base => write!(f, "o"),
                _ => write!(f, "({t})"),
            }
        }
        match self {
            Type::Base => write!(f, "o"),
            Type::Lin(d, c) => {
                atom(d, f)?;
                write!(f, " -o ")?;
                match **c {
                    Type::Full(..) => atom(c, f),
                    _ => write!(f, "{c}"),
                }
            }
            Type::Full(d, c) => {
                match **d {
                    Type::Base => write!(f, "o")?,
                    _ => write!(f, "({d})")?,
                }
                write!(f, " -> {c}")
            }
        }
    }
}

/// Untyped λ-terms with named binders. Equality on this type is syntactic;
/// use [`Term::alpha_eq`] for comparison up to renaming.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Const(Name),
    Lam(Name, Box<Term>),
    App(Box<Term>, Box<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn lam(binder: &str, body: Term) -> Term {
        Term::Lam(binder.into(), Box::new(body))
    }

    /// Nested abstraction over several binders, outermost first.
    pub fn lams<'a>(binders: impl IntoIterator<Item = &'a str>, body: Term) -> Term {
        let binders: Vec<&str> = binders.into_iter().collect();
        binders
            .into_iter()
            .rev()
            .fold(body, |acc, b| Term::lam(b, acc))
    }

    pub fn app(fun: Term, arg: Term) -> Term {
        Term::App(Box::new(fun), Box::new(arg))
    }

    /// Left-nested application `head a1 ... an`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Free variables (not constants), in first-occurrence order.
    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Term::Const(_) => {}
                Term::Lam(x, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Number of free occurrences of variable `x`.
    pub fn occurrences(&self, x: &str) -> usize {
        match self {
            Term::Var(y) => usize::from(&**y == x),
            Term::Const(_) => 0,
            Term::Lam(y, b) => {
                if &**y == x {
                    0
                } else {
                    b.occurrences(x)
                }
            }
            Term::App(f, a) => f.occurrences(x) + a.occurrences(x),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 1,
            Term::Lam(_, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Capture-avoiding substitution `self[u/x]`.
    pub fn substitute(&self, x: &str, u: &Term) -> Term {
        let fv_u = u.free_vars();
        self.subst_with(x, u, &fv_u)
    }

    fn subst_with(&self, x: &str, u: &Term, fv_u: &[Name]) -> Term {
        match self {
            Term::Var(y) if &**y == x => u.clone(),
            Term::Var(_) | Term::Const(_) => self.clone(),
            Term::App(f, a) => Term::app(f.subst_with(x, u, fv_u), a.subst_with(x, u, fv_u)),
            Term::Lam(y, body) => {
                if &**y == x || body.occurrences(x) == 0 {
                    return self.clone();
                }
                if fv_u.contains(y) {
                    let mut avoid: BTreeSet<Name> = fv_u.iter().cloned().collect();
                    avoid.extend(body.free_vars());
                    let fresh = fresh_name(y, &avoid);
                    let renamed =
                        body.subst_with(y, &Term::Var(fresh.clone()), std::slice::from_ref(&fresh));
                    Term::Lam(fresh, Box::new(renamed.subst_with(x, u, fv_u)))
                } else {
                    Term::Lam(y.clone(), Box::new(body.subst_with(x, u, fv_u)))
                }
            }
        }
    }

    /// Comparison up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        super::db::Db::from_term(self).alpha_eq(&super::db::Db::from_term(other))
    }

    /// Splits a term into its application head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut cur = self;
        while let Term::App(f, a) = cur {
            args.push(&**a);
            cur = f;
        }
        args.reverse();
        (cur, args)
    }

    pub fn is_beta_normal(&self) -> bool {
        match self {
            Term::Var(_) | Term::Const(_) => true,
            Term::Lam(_, b) => b.is_beta_normal(),
            Term::App(f, a) => {
                !matches!(**f, Term::Lam(..)) && f.is_beta_normal() && a.is_beta_normal()
            }
        }
    }

    pub fn redex_count(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Lam(_, b) => b.redex_count(),
            Term::App(f, a) => {
                usize::from(matches!(**f, Term::Lam(..))) + f.redex_count() + a.redex_count()
            }
        }
    }

    /// Contracts the `n`-th β-redex in pre-order, if there is one.
    pub fn contract_redex(&self, n: usize) -> Option<Term> {
        fn go(t: &Term, n: &mut usize) -> Option<Term> {
            match t {
                Term::Var(_) | Term::Const(_) => None,
                Term::Lam(x, b) => go(b, n).map(|b| Term::Lam(x.clone(), Box::new(b))),
                Term::App(f, a) => {
                    if let Term::Lam(x, body) = &**f {
                        if *n == 0 {
                            return Some(body.substitute(x, a));
                        }
                        *n -= 1;
                    }
                    if let Some(f2) = go(f, n) {
                        return Some(Term::app(f2, (**a).clone()));
                    }
                    go(a, n).map(|a2| Term::app((**f).clone(), a2))
                }
            }
        }
        go(self, &mut { n })
    }
}

/// Appends primes to `base` until the name avoids `avoid`.
pub(crate) fn fresh_name(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut candidate = format!("{base}'");
    while avoid.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    candidate.into()
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(x) | Term::Const(x) => write!(f, "{x}"),
            Term::Lam(..) => {
                let mut cur = self;
                write!(f, "\\")?;
                let mut first = true;
                while let Term::Lam(x, b) = cur {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{x}")?;
                    first = false;
                    cur = b;
                }
                write!(f, ". {cur}")
            }
            Term::App(..) => {
                let (head, args) = self.spine();
                match head {
                    Term::Lam(..) => write!(f, "({head})")?,
                    _ => write!(f, "{head}")?,
                }
                for a in args {
                    match a {
                        Term::Var(_) | Term::Const(_) => write!(f, " {a}")?,
                        _ => write!(f, " ({a})")?,
                    }
                }
                Ok(())
            }
        }
    }
}

/// The output signature `Γ`: letter constants of type `o -o o` plus `eps : o`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    letters: Vec<char>,
}

impl Signature {
    pub fn new(letters: impl IntoIterator<Item = char>) -> Result<Signature, LambdaError> {
        let letters: Vec<char> = letters.into_iter().collect();
        for (i, c) in letters.iter().enumerate() {
            if letters[..i].contains(c) {
                return Err(LambdaError::Signature(format!("duplicate letter '{c}'")));
            }
            if c.is_whitespace() || matches!(c, '\\' | '.' | '(' | ')' | '{' | '}' | ',') {
                return Err(LambdaError::Signature(format!("'{c}' cannot be a letter")));
            }
        }
        Ok(Signature { letters })
    }

    pub fn from_str_letters(letters: &str) -> Result<Signature, LambdaError> {
        Signature::new(letters.chars())
    }

    pub fn letters(&self) -> &[char] {
        &self.letters
    }

    pub fn contains(&self, c: char) -> bool {
        self.letters.contains(&c)
    }

    /// Type of a constant, if `name` belongs to the signature.
    pub fn constant_type(&self, name: &str) -> Option<Type> {
        if name == EPS {
            return Some(Type::Base);
        }
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if self.contains(c) => Some(Type::endo()),
            _ => None,
        }
    }

    pub fn letter_name(c: char) -> Name {
        c.to_string().into()
    }
}

/// A Church string type `Str_Σ[κ]` kept in sugared form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrType {
    pub alphabet: Vec<char>,
    pub substitution: Option<Type>,
}

impl StrType {
    pub fn expand(&self) -> Type {
        let base = Type::church_string(self.alphabet.len());
        match &self.substitution {
            Some(k) => base.subst(k),
            None => base,
        }
    }
}
