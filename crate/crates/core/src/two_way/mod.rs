//! Two-way reversible transducers as functors out of the automaton
//! category, λ-transducers, compilation between them, and a randomized
//! equivalence harness.

mod format;
mod table;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diagram::{Diagram, DiagramError, Planarity, Polarity, PolarityWord, Vertex};
use crate::interp::{interp_closed, interp_type, readoff, InterpEnv, InterpError};
use crate::lambda::{
    church_readback, eta_long_normal, normalize_with_fuel, typecheck, LambdaError, Mode, Name,
    Signature, Term, Type, DEFAULT_FUEL, EPS,
};
use crate::registers::{pipeline_compose, reverse_term, StrFunction};

pub use format::{str_function_from_program, TransducerJson};
pub use table::{from_table, parse_table, TableRow, TableSymbol, TransitionTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoWayError {
    #[error("{what} has boundary {found}, expected {expected}")]
    Boundary {
        what: String,
        expected: PolarityWord,
        found: PolarityWord,
    },
    #[error("no transition for letter '{0}'")]
    MissingStep(char),
    #[error("letter '{0}' is not in the input alphabet")]
    LetterOutsideAlphabet(char),
    #[error("output letter '{0}' is not in the output alphabet")]
    OutputLetter(char),
    #[error("table line {line}: {msg}")]
    Table { line: usize, msg: String },
    #[error("rows at lines {first} and {second} share a vertex on symbol {symbol}")]
    ConflictingRows {
        symbol: String,
        first: usize,
        second: usize,
    },
    #[error("unexpected normal form shape: {0}")]
    Shape(String),
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
    #[error(transparent)]
    Interp(#[from] InterpError),
}

/// Boundary objects of `init` and `final`: `(1, +-)` or `(+, +)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    EpsPm,
    Pp,
}

impl Convention {
    /// Domain of `init`.
    pub fn start(self) -> PolarityWord {
        match self {
            Convention::EpsPm => PolarityWord::unit(),
            Convention::Pp => plus(),
        }
    }

    /// Codomain of `final`.
    pub fn end(self) -> PolarityWord {
        match self {
            Convention::EpsPm => InterpEnv::base_object(),
            Convention::Pp => plus(),
        }
    }
}

fn plus() -> PolarityWord {
    PolarityWord::new(vec![Polarity::Plus])
}

fn minus() -> PolarityWord {
    PolarityWord::new(vec![Polarity::Minus])
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Convention::EpsPm => "eps_pm",
            Convention::Pp => "pp",
        })
    }
}

impl FromStr for Convention {
    type Err = TwoWayError;
    fn from_str(s: &str) -> Result<Convention, TwoWayError> {
        match s {
            "eps_pm" | "eps" => Ok(Convention::EpsPm),
            "pp" => Ok(Convention::Pp),
            other => Err(TwoWayError::Format(format!(
                "unknown convention '{other}' (expected eps or pp)"
            ))),
        }
    }
}

/// A functor from the automaton category: `init` is the image of ▷,
/// `steps` of the letters and `final` of ◁.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoWayTransducer {
    input: Vec<char>,
    output: Signature,
    convention: Convention,
    states: PolarityWord,
    init: Diagram,
    steps: BTreeMap<char, Diagram>,
    final_: Diagram,
    mode: Planarity,
}

impl TwoWayTransducer {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        input: Vec<char>,
        output: Signature,
        convention: Convention,
        states: PolarityWord,
        init: Diagram,
        steps: BTreeMap<char, Diagram>,
        final_: Diagram,
        mode: Planarity,
    ) -> Result<TwoWayTransducer, TwoWayError> {
        let t = TwoWayTransducer {
            input,
            output,
            convention,
            states,
            init,
            steps,
            final_,
            mode,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<(), TwoWayError> {
        let check = |what: &str, d: &Diagram, dom: &PolarityWord, cod: &PolarityWord| {
            for (side, expected, found) in [("domain", dom, d.dom()), ("codomain", cod, d.cod())] {
                if expected != found {
                    return Err(TwoWayError::Boundary {
                        what: format!("{side} of {what}"),
                        expected: expected.clone(),
                        found: found.clone(),
                    });
                }
            }
            if self.mode == Planarity::Planar && d.mode() == Planarity::Symmetric {
                d.with_mode(Planarity::Planar)?;
            }
            if let Some(c) = d
                .edges()
                .iter()
                .flat_map(|e| e.label.chars())
                .find(|c| !self.output.contains(*c))
            {
                return Err(TwoWayError::OutputLetter(c));
            }
            Ok(())
        };
        let s = &self.states;
        check("init", &self.init, &self.convention.start(), s)?;
        check("final", &self.final_, s, &self.convention.end())?;
        for a in &self.input {
            let d = self.steps.get(a).ok_or(TwoWayError::MissingStep(*a))?;
            check(&format!("step {a}"), d, s, s)?;
        }
        if let Some(a) = self.steps.keys().find(|a| !self.input.contains(a)) {
            return Err(TwoWayError::LetterOutsideAlphabet(*a));
        }
        Ok(())
    }

    pub fn input(&self) -> &[char] {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn states(&self) -> &PolarityWord {
        &self.states
    }

    pub fn init(&self) -> &Diagram {
        &self.init
    }

    pub fn step(&self, a: char) -> Option<&Diagram> {
        self.steps.get(&a)
    }

    pub fn steps(&self) -> &BTreeMap<char, Diagram> {
        &self.steps
    }

    pub fn final_diagram(&self) -> &Diagram {
        &self.final_
    }

    pub fn mode(&self) -> Planarity {
        self.mode
    }

    /// Replaces the transition of one letter.
    pub fn with_step(&self, a: char, d: Diagram) -> Result<TwoWayTransducer, TwoWayError> {
        let mut t = self.clone();
        t.steps.insert(a, d);
        t.validate()?;
        Ok(t)
    }

    /// `init ; step(w₁) ; … ; step(wₙ) ; final`.
    pub fn run_diagram(&self, w: &str) -> Result<Diagram, TwoWayError> {
        let mut acc = self.init.clone();
        for a in w.chars() {
            let step = self
                .steps
                .get(&a)
                .ok_or(TwoWayError::LetterOutsideAlphabet(a))?;
            acc = acc.compose(step)?;
        }
        Ok(acc.compose(&self.final_)?)
    }

    /// The output word, or `None` for ⊥.
    pub fn run_word(&self, w: &str) -> Result<Option<String>, TwoWayError> {
        let d = self.run_diagram(w)?;
        Ok(match self.convention {
            Convention::EpsPm => readoff(&d)?,
            Convention::Pp => d
                .label_between(Vertex::input(1), Vertex::output(1))
                .map(str::to_string),
        })
    }
}

pub fn run_word(t: &TwoWayTransducer, w: &str) -> Result<Option<String>, TwoWayError> {
    t.run_word(w)
}

/// A λ-transducer: `d_a : κ -o κ`, `d_ε : κ`, `o : κ -o o`, typed over the
/// output signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTransducer {
    input: Vec<char>,
    output: Signature,
    kappa: Type,
    steps: BTreeMap<char, Term>,
    init: Term,
    output_term: Term,
    mode: Mode,
}

impl LambdaTransducer {
    pub fn new(
        input: Vec<char>,
        output: Signature,
        kappa: Type,
        steps: BTreeMap<char, Term>,
        init: Term,
        output_term: Term,
        mode: Mode,
    ) -> LambdaTransducer {
        LambdaTransducer {
            input,
            output,
            kappa,
            steps,
            init,
            output_term,
            mode,
        }
    }

    pub fn input(&self) -> &[char] {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn kappa(&self) -> &Type {
        &self.kappa
    }

    pub fn step(&self, a: char) -> Option<&Term> {
        self.steps.get(&a)
    }

    pub fn init(&self) -> &Term {
        &self.init
    }

    pub fn output_term(&self) -> &Term {
        &self.output_term
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Type checks every component.
    pub fn check(&self) -> Result<(), TwoWayError> {
        if !self.kappa.is_purely_affine() {
            return Err(LambdaError::NotPurelyAffine(self.kappa.to_string()).into());
        }
        let endo = Type::lin(self.kappa.clone(), self.kappa.clone());
        for a in &self.input {
            let d = self.steps.get(a).ok_or(TwoWayError::MissingStep(*a))?;
            typecheck(d, &endo, &self.output, self.mode)?;
        }
        typecheck(&self.init, &self.kappa, &self.output, self.mode)?;
        typecheck(
            &self.output_term,
            &Type::lin(self.kappa.clone(), Type::Base),
            &self.output,
            self.mode,
        )?;
        Ok(())
    }

    /// `o (d_{wₙ} (… (d_{w₁} d_ε)…))`.
    pub fn fold_term(&self, w: &str) -> Result<Term, TwoWayError> {
        let mut acc = self.init.clone();
        for a in w.chars() {
            let d = self
                .steps
                .get(&a)
                .ok_or(TwoWayError::LetterOutsideAlphabet(a))?;
            acc = Term::app(d.clone(), acc);
        }
        Ok(Term::app(self.output_term.clone(), acc))
    }

    /// Normalization semantics.
    pub fn run_oracle(&self, w: &str) -> Result<String, TwoWayError> {
        self.run_oracle_with_fuel(w, DEFAULT_FUEL)
    }

    pub fn run_oracle_with_fuel(&self, w: &str, fuel: u64) -> Result<String, TwoWayError> {
        let nf = normalize_with_fuel(&self.fold_term(w)?, fuel)?;
        Ok(church_readback(&nf, &self.output)?)
    }

    /// `λs.λb₁…λb_k.λε. o (s d₁ … dₙ d_ε)` with letters rebound. Church
    /// words apply their first letter outermost, so this term maps `w` to
    /// the transducer's output on the reversal of `w`.
    pub fn shape_term(&self) -> StrFunction {
        let letters: Vec<Name> = self
            .output
            .letters()
            .iter()
            .map(|&c| Signature::letter_name(c))
            .collect();
        let mut avoid: BTreeSet<Name> = BTreeSet::new();
        for t in self.components() {
            collect_names(t, &mut avoid);
        }
        avoid.extend(letters.iter().cloned());
        avoid.insert(EPS.into());
        let s = fresh_avoiding("s", &avoid);
        let mut binders: HashMap<Name, Name> = HashMap::new();
        let mut names = Vec::new();
        for l in letters.iter().chain(std::iter::once(&Name::from(EPS))) {
            let b = fresh_avoiding(&format!("{l}_"), &avoid);
            avoid.insert(b.clone());
            binders.insert(l.clone(), b.clone());
            names.push(b);
        }
        let bind = |t: &Term| consts_to_vars(t, &binders);
        let body = Term::app(
            bind(&self.output_term),
            Term::apps(
                Term::Var(s.clone()),
                self.input
                    .iter()
                    .map(|a| bind(&self.steps[a]))
                    .chain(std::iter::once(bind(&self.init))),
            ),
        );
        let term = Term::lams(std::iter::once(&*s).chain(names.iter().map(|n| &**n)), body);
        let input = Signature::new(self.input.iter().copied()).expect("input letters are distinct");
        StrFunction::new(term, input, self.kappa.clone(), self.output.clone())
    }

    /// A λ-definition of the same function: the shape term precomposed
    /// with reversal.
    pub fn to_term(&self) -> StrFunction {
        let shape = self.shape_term();
        let rev = reverse_term(&shape.input);
        pipeline_compose(&shape, &rev).expect("reversal has matching alphabets")
    }

    fn components(&self) -> impl Iterator<Item = &Term> {
        self.steps.values().chain([&self.init, &self.output_term])
    }
}

fn collect_names(t: &Term, out: &mut BTreeSet<Name>) {
    match t {
        Term::Var(x) | Term::Const(x) => {
            out.insert(x.clone());
        }
        Term::Lam(x, b) => {
            out.insert(x.clone());
            collect_names(b, out);
        }
        Term::App(f, a) => {
            collect_names(f, out);
            collect_names(a, out);
        }
    }
}

fn fresh_avoiding(base: &str, avoid: &BTreeSet<Name>) -> Name {
    let mut name = base.to_string();
    while avoid.contains(name.as_str()) {
        name.push('\'');
    }
    name.into()
}

fn consts_to_vars(t: &Term, map: &HashMap<Name, Name>) -> Term {
    match t {
        Term::Const(c) => match map.get(c) {
            Some(v) => Term::Var(v.clone()),
            None => t.clone(),
        },
        Term::Var(_) => t.clone(),
        Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(consts_to_vars(b, map))),
        Term::App(f, a) => Term::app(consts_to_vars(f, map), consts_to_vars(a, map)),
    }
}

/// Free occurrences of the mapped variables become constants.
fn vars_to_consts(t: &Term, map: &HashMap<Name, Name>) -> Term {
    match t {
        Term::Var(x) => match map.get(x) {
            Some(c) => Term::Const(c.clone()),
            None => t.clone(),
        },
        Term::Const(_) => t.clone(),
        Term::Lam(x, b) if map.contains_key(x) => {
            let mut inner = map.clone();
            inner.remove(x);
            Term::Lam(x.clone(), Box::new(vars_to_consts(b, &inner)))
        }
        Term::Lam(x, b) => Term::Lam(x.clone(), Box::new(vars_to_consts(b, map))),
        Term::App(f, a) => Term::app(vars_to_consts(f, map), vars_to_consts(a, map)),
    }
}

fn planarity(mode: Mode) -> Planarity {
    match mode {
        Mode::Planar => Planarity::Planar,
        Mode::Commutative => Planarity::Symmetric,
    }
}

/// States `⟦κ⟧`, `init = ⟦d_ε⟧`, `step(a) = Λ⁻¹⟦d_a⟧`, `final = Λ⁻¹⟦o⟧`.
pub fn compile(l: &LambdaTransducer) -> Result<TwoWayTransducer, TwoWayError> {
    let states = interp_type(&l.kappa)?;
    let endo = Type::lin(l.kappa.clone(), l.kappa.clone());
    let init = interp_closed(&l.init, &l.kappa, &l.output, l.mode)?;
    let mut steps = BTreeMap::new();
    for a in &l.input {
        let d = l.steps.get(a).ok_or(TwoWayError::MissingStep(*a))?;
        let named = interp_closed(d, &endo, &l.output, l.mode)?;
        steps.insert(*a, named.uncurry(states.len())?);
    }
    let out_ty = Type::lin(l.kappa.clone(), Type::Base);
    let final_ = interp_closed(&l.output_term, &out_ty, &l.output, l.mode)?.uncurry(2)?;
    TwoWayTransducer::new(
        l.input.clone(),
        l.output.clone(),
        Convention::EpsPm,
        states,
        init,
        steps,
        final_,
        planarity(l.mode),
    )
}

/// Reads `(κ, d_a, d_ε, o)` off the η-long normal form
/// `λs.λb₁…λb_k.λε. C[s d₁ … dₙ d_ε e₁ … e_m]` of a term of type
/// `Str_Σ[κ] -o Str_Γ`, with `o = λK. C[K e₁ … e_m]`.
pub fn extract_lambda_transducer(
    f: &StrFunction,
    mode: Mode,
) -> Result<LambdaTransducer, TwoWayError> {
    if !f.kappa.is_purely_affine() {
        return Err(LambdaError::NotPurelyAffine(f.kappa.to_string()).into());
    }
    let ty = f.ty();
    typecheck(&f.term, &ty, &f.output, mode)?;
    let long = eta_long_normal(&f.term, &ty, &f.output, &[], DEFAULT_FUEL)?;
    let (s, mut body) = match &long {
        Term::Lam(s, b) => (s.clone(), &**b),
        other => return Err(TwoWayError::Shape(other.to_string())),
    };
    let mut rebind: HashMap<Name, Name> = HashMap::new();
    let letter_names = f
        .output
        .letters()
        .iter()
        .map(|&c| Signature::letter_name(c))
        .chain(std::iter::once(Name::from(EPS)));
    for name in letter_names {
        match body {
            Term::Lam(b, inner) => {
                rebind.insert(b.clone(), name);
                body = inner;
            }
            other => return Err(TwoWayError::Shape(other.to_string())),
        }
    }
    let n = f.input.letters().len();
    let mut avoid = BTreeSet::new();
    collect_names(body, &mut avoid);
    let k = fresh_avoiding("K", &avoid);
    let (context, found) = split_at_head(body, &s, &Term::Var(k.clone()), n)?;
    let conv = |t: &Term| vars_to_consts(t, &rebind);
    let output_term = Term::Lam(k, Box::new(conv(&context)));
    let (steps, init) = match found {
        Some(args) => {
            let steps = f
                .input
                .letters()
                .iter()
                .zip(&args[..n])
                .map(|(a, d)| (*a, conv(d)))
                .collect();
            (steps, conv(&args[n]))
        }
        None => {
            let id = Term::lam("x", Term::var("x"));
            (
                f.input.letters().iter().map(|a| (*a, id.clone())).collect(),
                canonical_inhabitant(&f.kappa),
            )
        }
    };
    let l = LambdaTransducer::new(
        f.input.letters().to_vec(),
        f.output.clone(),
        f.kappa.clone(),
        steps,
        init,
        output_term,
        mode,
    );
    l.check()?;
    Ok(l)
}

/// Replaces the unique application `s d₁ … dₙ d_ε e₁ … e_m` inside a chain
/// of letter applications by `hole e₁ … e_m`; returns the first `n + 1`
/// arguments.
fn split_at_head(
    body: &Term,
    s: &Name,
    hole: &Term,
    n: usize,
) -> Result<(Term, Option<Vec<Term>>), TwoWayError> {
    let (head, args) = body.spine();
    match head {
        Term::Var(x) if x == s => {
            if args.len() < n + 1 {
                return Err(TwoWayError::Shape(format!("{body}: too few arguments")));
            }
            let rebuilt = Term::apps(hole.clone(), args[n + 1..].iter().map(|t| (*t).clone()));
            Ok((
                rebuilt,
                Some(args[..=n].iter().map(|t| (*t).clone()).collect()),
            ))
        }
        _ if body.occurrences(s) == 0 => Ok((body.clone(), None)),
        Term::Var(_) | Term::Const(_) if args.len() == 1 => {
            let (inner, found) = split_at_head(args[0], s, hole, n)?;
            Ok((Term::app(head.clone(), inner), found))
        }
        _ => Err(TwoWayError::Shape(body.to_string())),
    }
}

/// Some closed term of a purely affine type.
pub fn canonical_inhabitant(ty: &Type) -> Term {
    match ty {
        Type::Base => Term::constant(EPS),
        Type::Lin(_, c) | Type::Full(_, c) => Term::lam("x", canonical_inhabitant(c)),
    }
}

/// A λ-transducer for the function a term defines, obtained by extracting
/// from its precomposition with reversal. The iteration type becomes
/// `κ -o κ`.
pub fn lambda_transducer_of(f: &StrFunction, mode: Mode) -> Result<LambdaTransducer, TwoWayError> {
    let rev = reverse_term(&f.input);
    let g = pipeline_compose(f, &rev)?;
    extract_lambda_transducer(&g, mode)
}

/// Moves between the `(1, +-)` and `(+, +)` presentations.
pub fn convert_convention(
    t: &TwoWayTransducer,
    to: Convention,
) -> Result<TwoWayTransducer, TwoWayError> {
    if t.convention == to {
        return Ok(t.clone());
    }
    let mode = t.mode;
    let extra = match to {
        Convention::EpsPm => minus(),
        Convention::Pp => plus(),
    };
    let id_extra = Diagram::identity_in(&extra, mode);
    let (init, final_) = match to {
        Convention::EpsPm => (
            Diagram::cup(&plus()).compose(&t.init.tensor(&id_extra))?,
            t.final_.tensor(&id_extra),
        ),
        Convention::Pp => (
            t.init.tensor(&id_extra),
            t.final_
                .tensor(&id_extra)
                .compose(&id_extra.tensor(&Diagram::cap(&plus())))?,
        ),
    };
    let steps = t
        .steps
        .iter()
        .map(|(a, d)| (*a, d.tensor(&id_extra)))
        .collect();
    TwoWayTransducer::new(
        t.input.clone(),
        t.output.clone(),
        to,
        t.states.tensor(&extra),
        init,
        steps,
        final_,
        mode,
    )
}

/// Words over `alphabet`: lengths uniform in `0..=max_len`, letters uniform.
pub fn sample_words(alphabet: &[char], samples: usize, max_len: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut words = vec![String::new()];
    while words.len() < samples.max(1) {
        let len = rng.gen_range(0..=max_len);
        let w = if alphabet.is_empty() {
            String::new()
        } else {
            (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())])
                .collect()
        };
        words.push(w);
    }
    words
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub word: String,
    pub expected: String,
    pub found: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivReport {
    pub checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl EquivReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Compares the transducer against the normalization semantics of `l` on
/// sampled words, the empty word first.
pub fn check_equiv(
    l: &LambdaTransducer,
    t: &TwoWayTransducer,
    samples: usize,
    max_len: usize,
    seed: u64,
) -> Result<EquivReport, TwoWayError> {
    check_equiv_with_fuel(l, t, samples, max_len, seed, DEFAULT_FUEL)
}

/// [`check_equiv`] with a β-step budget per oracle run.
pub fn check_equiv_with_fuel(
    l: &LambdaTransducer,
    t: &TwoWayTransducer,
    samples: usize,
    max_len: usize,
    seed: u64,
    fuel: u64,
) -> Result<EquivReport, TwoWayError> {
    if l.input != t.input {
        return Err(TwoWayError::AlphabetMismatch(format!(
            "λ-transducer reads {:?}, transducer reads {:?}",
            l.input, t.input
        )));
    }
    let words = sample_words(&l.input, samples, max_len, seed);
    for (i, w) in words.iter().enumerate() {
        let expected = l.run_oracle_with_fuel(w, fuel)?;
        let found = t.run_word(w)?;
        if found.as_deref() != Some(expected.as_str()) {
            return Ok(EquivReport {
                checked: i + 1,
                counterexample: Some(Counterexample {
                    word: w.clone(),
                    expected,
                    found,
                }),
            });
        }
    }
    Ok(EquivReport {
        checked: words.len(),
        counterexample: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Edge;
    use crate::lambda::parse_term;

    fn ab() -> Signature {
        Signature::from_str_letters("ab").unwrap()
    }

    fn p(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    fn lt(kappa: Type, steps: &[(char, &str)], init: &str, out: &str) -> LambdaTransducer {
        let l = LambdaTransducer::new(
            steps.iter().map(|(a, _)| *a).collect(),
            Signature::from_str_letters("abc").unwrap(),
            kappa,
            steps.iter().map(|(a, t)| (*a, p(t))).collect(),
            p(init),
            p(out),
            Mode::Planar,
        );
        l.check().unwrap();
        l
    }

    fn l_rev() -> LambdaTransducer {
        lt(
            Type::Base,
            &[('a', "\\x. a x"), ('b', "\\x. b x")],
            "eps",
            "\\x. x",
        )
    }

    fn l_id() -> LambdaTransducer {
        lt(
            Type::endo(),
            &[('a', "\\f z. f (a z)"), ('b', "\\f z. f (b z)")],
            "\\x. x",
            "\\f. f eps",
        )
    }

    fn l_const() -> LambdaTransducer {
        lt(
            Type::Base,
            &[('a', "\\x. x"), ('b', "\\x. x")],
            "eps",
            "\\x. c x",
        )
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(l_rev().run_oracle("ab").unwrap(), "ba");
        assert_eq!(l_id().run_oracle("abb").unwrap(), "abb");
        assert_eq!(l_const().run_oracle("ab").unwrap(), "c");
    }

    #[test]
    fn compiled_examples() {
        let t = compile(&l_rev()).unwrap();
        assert_eq!(t.states(), &"+-".parse().unwrap());
        assert_eq!(t.run_word("ab").unwrap().as_deref(), Some("ba"));
        let t = compile(&l_id()).unwrap();
        for w in ["", "a", "ab", "bba"] {
            assert_eq!(t.run_word(w).unwrap().as_deref(), Some(w));
        }
        assert_eq!(
            compile(&l_const())
                .unwrap()
                .run_word("abab")
                .unwrap()
                .as_deref(),
            Some("c")
        );
    }

    #[test]
    fn extract_reverse() {
        let l = extract_lambda_transducer(&reverse_term(&ab()), Mode::Planar).unwrap();
        assert!(l.step('a').unwrap().alpha_eq(&p("\\x z. x (a z)")));
        assert!(l.init().alpha_eq(&p("\\x. x")));
        assert!(l.output_term().alpha_eq(&p("\\K. K eps")));
        // the raw shape reads the word back to front
        assert_eq!(l.run_oracle("ab").unwrap(), "ab");
    }

    #[test]
    fn extract_eta_short_identity() {
        let f = StrFunction::new(p("\\s. s"), ab(), Type::Base, ab());
        let l = extract_lambda_transducer(&f, Mode::Planar).unwrap();
        assert!(l.step('b').unwrap().alpha_eq(&p("\\x. b x")));
        assert!(l.init().alpha_eq(&p("eps")));
        assert!(l.output_term().alpha_eq(&p("\\K. K")));
    }

    #[test]
    fn extract_constant_function() {
        let f = StrFunction::new(p("\\s a b e. a e"), ab(), Type::Base, ab());
        let l = extract_lambda_transducer(&f, Mode::Planar).unwrap();
        assert_eq!(l.run_oracle("abba").unwrap(), "a");
    }

    #[test]
    fn term_transducers_follow_the_term() {
        let f = reverse_term(&ab());
        let l = lambda_transducer_of(&f, Mode::Planar).unwrap();
        let t = compile(&l).unwrap();
        for w in ["", "a", "ab", "aab", "babb"] {
            let expected = f.apply(w).unwrap();
            assert_eq!(l.run_oracle(w).unwrap(), expected);
            assert_eq!(t.run_word(w).unwrap(), Some(expected));
        }
    }

    #[test]
    fn to_term_round_trip() {
        let l = l_rev();
        let f = l.to_term();
        f.check(Mode::Planar).unwrap();
        assert_eq!(f.apply("aab").unwrap(), "baa");
        let shape = l.shape_term();
        shape.check(Mode::Planar).unwrap();
        assert_eq!(shape.apply("aab").unwrap(), "aab");
    }

    #[test]
    fn conventions_round_trip() {
        let t = compile(&l_id()).unwrap();
        let pp = convert_convention(&t, Convention::Pp).unwrap();
        assert_eq!(pp.states(), &"+-+-+".parse().unwrap());
        let back = convert_convention(&pp, Convention::EpsPm).unwrap();
        for w in ["", "a", "ba", "abb"] {
            assert_eq!(pp.run_word(w).unwrap().as_deref(), Some(w));
            assert_eq!(back.run_word(w).unwrap().as_deref(), Some(w));
        }
        assert_eq!(convert_convention(&t, Convention::EpsPm).unwrap(), t);
    }

    #[test]
    fn bottom_final_gives_bottom() {
        let t = compile(&l_rev()).unwrap();
        let mut broken = t.clone();
        broken.final_ = Diagram::bottom(t.states(), &InterpEnv::base_object());
        broken.validate().unwrap();
        assert_eq!(broken.run_word("ab").unwrap(), None);
    }

    #[test]
    fn equivalence_harness() {
        let l = l_rev();
        let t = compile(&l).unwrap();
        let report = check_equiv(&l, &t, 100, 8, 42).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked, 100);
        let step = t.step('a').unwrap();
        let edges: Vec<Edge> = step
            .edges()
            .iter()
            .map(|e| {
                if e.label == "a" {
                    Edge::new(e.src, e.tgt, "b")
                } else {
                    e.clone()
                }
            })
            .collect();
        let tampered =
            Diagram::new(step.dom().clone(), step.cod().clone(), edges, step.mode()).unwrap();
        let bad = t.with_step('a', tampered).unwrap();
        let report = check_equiv(&l, &bad, 100, 8, 42).unwrap();
        let cex = report.counterexample.unwrap();
        assert!(cex.word.contains('a'));
        assert_ne!(cex.found.as_deref(), Some(cex.expected.as_str()));
    }

    #[test]
    fn sampling_is_deterministic() {
        let a = sample_words(&['a', 'b'], 50, 6, 7);
        assert_eq!(a, sample_words(&['a', 'b'], 50, 6, 7));
        assert_eq!(a[0], "");
        assert!(a.iter().all(|w| w.len() <= 6));
    }
}
