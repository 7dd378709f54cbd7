//! Ordered affine type checking.
//!
//! Checking runs in two passes. The first infers simple types for every
//! binder by unification, so that unannotated redexes such as `(\x. t) u`
//! can be typed. The second walks the elaborated tree and builds a
//! derivation, splitting the linear context at each application according
//! to which variables occur on each side. In planar mode the split must be
//! a prefix/suffix cut of the context; in commutative mode any partition is
//! accepted and the permutation is recorded in the derivation.

use std::fmt;

use super::syntax::{Name, Signature, Term, Type};
use super::LambdaError;

/// Structural rules available to the checker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    #[default]
    Planar,
    /// Adds the exchange rule.
    Commutative,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Planar => "planar",
            Mode::Commutative => "commutative",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "planar" => Ok(Mode::Planar),
            "commutative" => Ok(Mode::Commutative),
            other => Err(format!(
                "unknown mode '{other}' (expected planar or commutative)"
            )),
        }
    }
}

/// A typing derivation. Each node records the linear context it was checked
/// in and the type it concludes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub context: Vec<(Name, Type)>,
    pub ty: Type,
    pub rule: Rule,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// A letter or `eps` from the signature.
    Constant(Name),
    /// A variable bound by an unrestricted abstraction.
    NonLinearVar(Name),
    /// The linear variable at `index` in the node's context.
    LinearVar {
        index: usize,
    },
    LinLam {
        binder: Name,
        body: Box<Derivation>,
    },
    FullLam {
        binder: Name,
        body: Box<Derivation>,
    },
    /// `fun_ctx` and `arg_ctx` partition the context indices; each list is
    /// increasing. In planar mode `fun_ctx ++ arg_ctx` is `0..n`.
    LinApp {
        fun: Box<Derivation>,
        arg: Box<Derivation>,
        fun_ctx: Vec<usize>,
        arg_ctx: Vec<usize>,
    },
    FullApp {
        fun: Box<Derivation>,
        arg: Box<Derivation>,
    },
}

impl Derivation {
    /// Sum over all nodes of the base-type occurrences in the node's
    /// context and conclusion.
    pub fn base_occurrences(&self) -> usize {
        let here = self.ty.base_count()
            + self
                .context
                .iter()
                .map(|(_, t)| t.base_count())
                .sum::<usize>();
        here + match &self.rule {
            Rule::Constant(_) | Rule::NonLinearVar(_) | Rule::LinearVar { .. } => 0,
            Rule::LinLam { body, .. } | Rule::FullLam { body, .. } => body.base_occurrences(),
            Rule::LinApp { fun, arg, .. } | Rule::FullApp { fun, arg } => {
                fun.base_occurrences() + arg.base_occurrences()
            }
        }
    }

    /// True when no rule in the derivation involves `->`.
    pub fn is_purely_affine(&self) -> bool {
        self.ty.is_purely_affine()
            && self.context.iter().all(|(_, t)| t.is_purely_affine())
            && match &self.rule {
                Rule::Constant(_) | Rule::LinearVar { .. } => true,
                Rule::NonLinearVar(_) | Rule::FullLam { .. } | Rule::FullApp { .. } => false,
                Rule::LinLam { body, .. } => body.is_purely_affine(),
                Rule::LinApp { fun, arg, .. } => fun.is_purely_affine() && arg.is_purely_affine(),
            }
    }
}

/// Evidence that `context ⊢ term : ty` holds over `signature`.
#[derive(Clone, Debug)]
pub struct Judgement {
    pub signature: Signature,
    pub context: Vec<(Name, Type)>,
    pub term: Term,
    pub ty: Type,
    pub mode: Mode,
    pub derivation: Derivation,
}

/// Checks a closed term against `expected`.
pub fn typecheck(
    term: &Term,
    expected: &Type,
    sig: &Signature,
    mode: Mode,
) -> Result<Judgement, LambdaError> {
    typecheck_in(&[], term, expected, sig, mode)
}

/// Checks a term in an ordered linear context.
pub fn typecheck_in(
    context: &[(Name, Type)],
    term: &Term,
    expected: &Type,
    sig: &Signature,
    mode: Mode,
) -> Result<Judgement, LambdaError> {
    let mut inf = Inference::default();
    let mut scope: Vec<(Name, usize)> = Vec::new();
    for (i, (name, ty)) in context.iter().enumerate() {
        inf.bindings.push(BindInfo {
            name: name.clone(),
            ty: MTy::from_type(ty),
            kind: KindRef::Known(ArrowKind::Lin),
        });
        scope.push((name.clone(), i));
    }
    let (node, ty) = inf.infer(term, &mut scope, sig)?;
    inf.unify(&ty, &MTy::from_type(expected))?;
    inf.propagate_kinds(&node);

    let bindings: Vec<Binding> = inf
        .bindings
        .iter()
        .map(|b| Binding {
            name: b.name.clone(),
            ty: inf.zonk(&b.ty),
            linear: inf.kind(&b.kind) == ArrowKind::Lin,
        })
        .collect();
    let node = inf.finish(node);
    let checker = Checker { bindings, mode };
    let delta: Vec<usize> = (0..context.len()).collect();
    let derivation = checker.derive(&node, &delta)?;
    debug_assert_eq!(&derivation.ty, expected);
    Ok(Judgement {
        signature: sig.clone(),
        context: context.to_vec(),
        term: term.clone(),
        ty: expected.clone(),
        mode,
        derivation,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ArrowKind {
    Lin,
    Full,
}

#[derive(Clone, Copy, Debug)]
enum KindRef {
    Known(ArrowKind),
    Var(usize),
}

#[derive(Clone, Copy, Debug)]
enum KindSlot {
    Unknown,
    Known(ArrowKind),
    Link(usize),
}

#[derive(Clone, Debug)]
enum MTy {
    Base,
    Arrow(KindRef, Box<MTy>, Box<MTy>),
    Meta(usize),
}

impl MTy {
    fn from_type(t: &Type) -> MTy {
        match t {
            Type::Base => MTy::Base,
            Type::Lin(d, c) => MTy::Arrow(
                KindRef::Known(ArrowKind::Lin),
                Box::new(MTy::from_type(d)),
                Box::new(MTy::from_type(c)),
            ),
            Type::Full(d, c) => MTy::Arrow(
                KindRef::Known(ArrowKind::Full),
                Box::new(MTy::from_type(d)),
                Box::new(MTy::from_type(c)),
            ),
        }
    }
}

struct BindInfo {
    name: Name,
    ty: MTy,
    kind: KindRef,
}

/// Elaborated term: every variable resolved to a binding id or a constant.
enum Node<T> {
    Var(usize),
    Const(Name, Type),
    Lam {
        binding: usize,
        body: Box<Node<T>>,
    },
    App {
        fun: Box<Node<T>>,
        arg: Box<Node<T>>,
        fun_ty: T,
    },
}

#[derive(Default)]
struct Inference {
    metas: Vec<Option<MTy>>,
    kinds: Vec<KindSlot>,
    bindings: Vec<BindInfo>,
}

impl Inference {
    fn fresh(&mut self) -> MTy {
        self.metas.push(None);
        MTy::Meta(self.metas.len() - 1)
    }

    fn fresh_kind(&mut self) -> KindRef {
        self.kinds.push(KindSlot::Unknown);
        KindRef::Var(self.kinds.len() - 1)
    }

    fn infer(
        &mut self,
        term: &Term,
        scope: &mut Vec<(Name, usize)>,
        sig: &Signature,
    ) -> Result<(Node<MTy>, MTy), LambdaError> {
        match term {
            Term::Var(x) | Term::Const(x) => {
                if let Term::Var(_) = term {
                    if let Some((_, id)) = scope.iter().rev().find(|(n, _)| n == x) {
                        return Ok((Node::Var(*id), self.bindings[*id].ty.clone()));
                    }
                }
                match sig.constant_type(x) {
                    Some(ty) => {
                        let m = MTy::from_type(&ty);
                        Ok((Node::Const(x.clone(), ty), m))
                    }
                    None => Err(LambdaError::Unbound(x.to_string())),
                }
            }
            Term::Lam(x, body) => {
                let param = self.fresh();
                let kind = self.fresh_kind();
                let id = self.bindings.len();
                self.bindings.push(BindInfo {
                    name: x.clone(),
                    ty: param.clone(),
                    kind,
                });
                scope.push((x.clone(), id));
                let inferred = self.infer(body, scope, sig);
                scope.pop();
                let (body, body_ty) = inferred?;
                Ok((
                    Node::Lam {
                        binding: id,
                        body: Box::new(body),
                    },
                    MTy::Arrow(kind, Box::new(param), Box::new(body_ty)),
                ))
            }
            Term::App(f, a) => {
                let (fun, fun_ty) = self.infer(f, scope, sig)?;
                let (arg, arg_ty) = self.infer(a, scope, sig)?;
                let result = self.fresh();
                let kind = self.fresh_kind();
                let expected = MTy::Arrow(kind, Box::new(arg_ty), Box::new(result.clone()));
                self.unify(&fun_ty, &expected)?;
                Ok((
                    Node::App {
                        fun: Box::new(fun),
                        arg: Box::new(arg),
                        fun_ty,
                    },
                    result,
                ))
            }
        }
    }

    /// Fixes open binder kinds that cannot be linear: binders free in the
    /// argument of an unrestricted application, and binders used twice.
    fn propagate_kinds(&mut self, node: &Node<MTy>) {
        let mut uses = vec![0usize; self.bindings.len()];
        count_uses(node, &mut uses);
        for (id, &n) in uses.iter().enumerate() {
            if n > 1 {
                self.force_full(id);
            }
        }
        loop {
            let mut changed = false;
            self.propagate_once(node, &mut changed);
            if !changed {
                break;
            }
        }
    }

    fn force_full(&mut self, id: usize) -> bool {
        match self.resolve_kind(self.bindings[id].kind) {
            KindRef::Var(v) => {
                self.kinds[v] = KindSlot::Known(ArrowKind::Full);
                true
            }
            KindRef::Known(_) => false,
        }
    }

    fn propagate_once(&mut self, node: &Node<MTy>, changed: &mut bool) {
        match node {
            Node::Var(_) | Node::Const(..) => {}
            Node::Lam { body, .. } => self.propagate_once(body, changed),
            Node::App { fun, arg, fun_ty } => {
                if let MTy::Arrow(k, ..) = self.resolve(fun_ty) {
                    if let KindRef::Known(ArrowKind::Full) = self.resolve_kind(k) {
                        let mut free = Vec::new();
                        free_bindings(arg, &mut Vec::new(), &mut free);
                        for id in free {
                            *changed |= self.force_full(id);
                        }
                    }
                }
                self.propagate_once(fun, changed);
                self.propagate_once(arg, changed);
            }
        }
    }

    fn resolve(&self, t: &MTy) -> MTy {
        let mut cur = t.clone();
        while let MTy::Meta(m) = cur {
            match &self.metas[m] {
                Some(next) => cur = next.clone(),
                None => return MTy::Meta(m),
            }
        }
        cur
    }

    fn resolve_kind(&self, k: KindRef) -> KindRef {
        let mut cur = k;
        while let KindRef::Var(v) = cur {
            match self.kinds[v] {
                KindSlot::Known(known) => return KindRef::Known(known),
                KindSlot::Link(next) => cur = KindRef::Var(next),
                KindSlot::Unknown => return cur,
            }
        }
        cur
    }

    fn occurs(&self, m: usize, t: &MTy) -> bool {
        match self.resolve(t) {
            MTy::Meta(n) => n == m,
            MTy::Base => false,
            MTy::Arrow(_, d, c) => self.occurs(m, &d) || self.occurs(m, &c),
        }
    }

    fn unify(&mut self, a: &MTy, b: &MTy) -> Result<(), LambdaError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            (MTy::Meta(m), MTy::Meta(n)) if m == n => Ok(()),
            (MTy::Meta(m), other) | (other, MTy::Meta(m)) => {
                if self.occurs(*m, other) {
                    return Err(self.mismatch(&a, &b));
                }
                self.metas[*m] = Some(other.clone());
                Ok(())
            }
            (MTy::Base, MTy::Base) => Ok(()),
            (MTy::Arrow(k1, d1, c1), MTy::Arrow(k2, d2, c2)) => {
                self.unify_kind(*k1, *k2)
                    .map_err(|_| self.mismatch(&a, &b))?;
                self.unify(d1, d2)?;
                self.unify(c1, c2)
            }
            _ => Err(self.mismatch(&a, &b)),
        }
    }

    fn unify_kind(&mut self, a: KindRef, b: KindRef) -> Result<(), ()> {
        match (self.resolve_kind(a), self.resolve_kind(b)) {
            (KindRef::Known(x), KindRef::Known(y)) => {
                if x == y {
                    Ok(())
                } else {
                    Err(())
                }
            }
            (KindRef::Var(v), KindRef::Known(k)) | (KindRef::Known(k), KindRef::Var(v)) => {
                self.kinds[v] = KindSlot::Known(k);
                Ok(())
            }
            (KindRef::Var(v), KindRef::Var(w)) => {
                if v != w {
                    self.kinds[w] = KindSlot::Link(v);
                }
                Ok(())
            }
        }
    }

    /// Arrow kinds left open by inference default to linear.
    fn kind(&self, k: &KindRef) -> ArrowKind {
        match self.resolve_kind(*k) {
            KindRef::Known(k) => k,
            KindRef::Var(_) => ArrowKind::Lin,
        }
    }

    fn zonk(&self, t: &MTy) -> Type {
        match self.resolve(t) {
            MTy::Base | MTy::Meta(_) => Type::Base,
            MTy::Arrow(k, d, c) => {
                let (d, c) = (self.zonk(&d), self.zonk(&c));
                match self.kind(&k) {
                    ArrowKind::Lin => Type::lin(d, c),
                    ArrowKind::Full => Type::full(d, c),
                }
            }
        }
    }

    fn mismatch(&self, a: &MTy, b: &MTy) -> LambdaError {
        LambdaError::TypeMismatch {
            expected: self.zonk(b).to_string(),
            found: self.zonk(a).to_string(),
        }
    }

    fn finish(&self, node: Node<MTy>) -> Node<Type> {
        match node {
            Node::Var(id) => Node::Var(id),
            Node::Const(n, t) => Node::Const(n, t),
            Node::Lam { binding, body } => Node::Lam {
                binding,
                body: Box::new(self.finish(*body)),
            },
            Node::App { fun, arg, fun_ty } => Node::App {
                fun: Box::new(self.finish(*fun)),
                arg: Box::new(self.finish(*arg)),
                fun_ty: self.zonk(&fun_ty),
            },
        }
    }
}

fn count_uses<T>(node: &Node<T>, uses: &mut [usize]) {
    match node {
        Node::Var(id) => uses[*id] += 1,
        Node::Const(..) => {}
        Node::Lam { body, .. } => count_uses(body, uses),
        Node::App { fun, arg, .. } => {
            count_uses(fun, uses);
            count_uses(arg, uses);
        }
    }
}

fn free_bindings<T>(node: &Node<T>, bound: &mut Vec<usize>, out: &mut Vec<usize>) {
    match node {
        Node::Var(id) if !bound.contains(id) => out.push(*id),
        Node::Var(_) | Node::Const(..) => {}
        Node::Lam { binding, body } => {
            bound.push(*binding);
            free_bindings(body, bound, out);
            bound.pop();
        }
        Node::App { fun, arg, .. } => {
            free_bindings(fun, bound, out);
            free_bindings(arg, bound, out);
        }
    }
}

struct Binding {
    name: Name,
    ty: Type,
    linear: bool,
}

struct Checker {
    bindings: Vec<Binding>,
    mode: Mode,
}

impl Checker {
    fn context(&self, delta: &[usize]) -> Vec<(Name, Type)> {
        delta
            .iter()
            .map(|&id| (self.bindings[id].name.clone(), self.bindings[id].ty.clone()))
            .collect()
    }

    /// Linear binding ids occurring free in `node`, in occurrence order.
    fn linear_occurrences(&self, node: &Node<Type>, out: &mut Vec<usize>) {
        match node {
            Node::Var(id) if self.bindings[*id].linear => out.push(*id),
            Node::Var(_) | Node::Const(..) => {}
            Node::Lam { body, .. } => self.linear_occurrences(body, out),
            Node::App { fun, arg, .. } => {
                self.linear_occurrences(fun, out);
                self.linear_occurrences(arg, out);
            }
        }
    }

    fn type_of(&self, node: &Node<Type>) -> Type {
        match node {
            Node::Var(id) => self.bindings[*id].ty.clone(),
            Node::Const(_, t) => t.clone(),
            Node::Lam { binding, body } => {
                let b = &self.bindings[*binding];
                if b.linear {
                    Type::lin(b.ty.clone(), self.type_of(body))
                } else {
                    Type::full(b.ty.clone(), self.type_of(body))
                }
            }
            Node::App { fun_ty, .. } => fun_ty
                .arrow_parts()
                .map(|(_, c)| c.clone())
                .expect("application of a non-function survived unification"),
        }
    }

    fn derive(&self, node: &Node<Type>, delta: &[usize]) -> Result<Derivation, LambdaError> {
        let context = self.context(delta);
        let ty = self.type_of(node);
        let rule = match node {
            Node::Const(name, _) => Rule::Constant(name.clone()),
            Node::Var(id) => {
                let b = &self.bindings[*id];
                if b.linear {
                    match delta.iter().position(|d| d == id) {
                        Some(index) => Rule::LinearVar { index },
                        None => return Err(LambdaError::UsedTwice(b.name.to_string())),
                    }
                } else {
                    Rule::NonLinearVar(b.name.clone())
                }
            }
            Node::Lam { binding, body } => {
                let b = &self.bindings[*binding];
                if b.linear {
                    let mut inner = delta.to_vec();
                    inner.push(*binding);
                    Rule::LinLam {
                        binder: b.name.clone(),
                        body: Box::new(self.derive(body, &inner)?),
                    }
                } else {
                    Rule::FullLam {
                        binder: b.name.clone(),
                        body: Box::new(self.derive(body, delta)?),
                    }
                }
            }
            Node::App { fun, arg, fun_ty } => {
                let mut in_fun = Vec::new();
                let mut in_arg = Vec::new();
                self.linear_occurrences(fun, &mut in_fun);
                self.linear_occurrences(arg, &mut in_arg);
                in_fun.retain(|id| delta.contains(id));
                in_arg.retain(|id| delta.contains(id));
                if let Some(dup) = in_fun.iter().find(|id| in_arg.contains(id)) {
                    return Err(LambdaError::UsedTwice(self.bindings[*dup].name.to_string()));
                }
                match fun_ty {
                    Type::Full(..) => {
                        if let Some(id) = in_arg.first() {
                            return Err(LambdaError::LinearInUnrestrictedArgument(
                                self.bindings[*id].name.to_string(),
                            ));
                        }
                        Rule::FullApp {
                            fun: Box::new(self.derive(fun, delta)?),
                            arg: Box::new(self.derive(arg, &[])?),
                        }
                    }
                    _ => {
                        let (fun_ctx, arg_ctx) = self.split(delta, &in_fun, &in_arg)?;
                        let pick = |ix: &[usize]| ix.iter().map(|&i| delta[i]).collect::<Vec<_>>();
                        Rule::LinApp {
                            fun: Box::new(self.derive(fun, &pick(&fun_ctx))?),
                            arg: Box::new(self.derive(arg, &pick(&arg_ctx))?),
                            fun_ctx,
                            arg_ctx,
                        }
                    }
                }
            }
        };
        Ok(Derivation { context, ty, rule })
    }

    /// Partitions the context positions between function and argument.
    fn split(
        &self,
        delta: &[usize],
        in_fun: &[usize],
        in_arg: &[usize],
    ) -> Result<(Vec<usize>, Vec<usize>), LambdaError> {
        let position = |id: &usize| {
            delta
                .iter()
                .position(|d| d == id)
                .ok_or_else(|| LambdaError::UsedTwice(self.bindings[*id].name.to_string()))
        };
        let fun_pos = in_fun.iter().map(position).collect::<Result<Vec<_>, _>>()?;
        let arg_pos = in_arg.iter().map(position).collect::<Result<Vec<_>, _>>()?;
        let last_fun = fun_pos.iter().max().copied();
        let first_arg = arg_pos.iter().min().copied();
        let ordered = match (last_fun, first_arg) {
            (Some(f), Some(a)) => f < a,
            _ => true,
        };
        if ordered {
            let cut = last_fun.map_or(0, |f| f + 1);
            return Ok(((0..cut).collect(), (cut..delta.len()).collect()));
        }
        match self.mode {
            Mode::Planar => {
                let (f, a) = (last_fun.unwrap(), first_arg.unwrap());
                Err(LambdaError::PlanarOrder {
                    earlier: self.bindings[delta[a]].name.to_string(),
                    later: self.bindings[delta[f]].name.to_string(),
                })
            }
            Mode::Commutative => {
                let mut fun_ctx: Vec<usize> = fun_pos;
                fun_ctx.sort_unstable();
                fun_ctx.dedup();
                let arg_ctx = (0..delta.len()).filter(|i| !fun_ctx.contains(i)).collect();
                Ok((fun_ctx, arg_ctx))
            }
        }
    }
}

/// Ensures a type reaching the interpreter is purely affine.
pub fn require_purely_affine(ty: &Type) -> Result<(), LambdaError> {
    if ty.is_purely_affine() {
        Ok(())
    } else {
        Err(LambdaError::NotPurelyAffine(ty.to_string()))
    }
}
