//! Copyless monotone register updates, stateless register machines, and
//! their λ-encodings; Church-string functions and their composition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lambda::{
    church_encode, church_readback, normalize_with_fuel, type_subst, typecheck, Judgement,
    LambdaError, Mode, Name, Signature, Term, Type, DEFAULT_FUEL, EPS,
};
use crate::two_way::LambdaTransducer;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegisterError {
    #[error("copyless violation: register {0} occurs more than once")]
    Copyless(usize),
    #[error("monotone violation: register {earlier} occurs after register {later}")]
    Monotone { earlier: usize, later: usize },
    #[error("register {index} is out of range for {src} source registers")]
    IndexOutOfRange { index: usize, src: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("a machine needs at least one register")]
    NoRegisters,
    #[error("letter '{0}' is not in the alphabet")]
    LetterOutsideAlphabet(char),
    #[error("no update for letter '{0}'")]
    MissingUpdate(char),
    #[error("{0}")]
    Format(String),
    #[error(transparent)]
    Lambda(#[from] LambdaError),
}

/// An output letter or a source-register index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sym {
    Letter(char),
    Reg(usize),
}

/// An element of `CMRupdate{src}{n}`: an `n`-tuple of words over output
/// letters and indices `< src`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegisterUpdate {
    src: usize,
    words: Vec<Vec<Sym>>,
}

impl RegisterUpdate {
    /// Builds and validates an update.
    pub fn new(src: usize, words: Vec<Vec<Sym>>) -> Result<RegisterUpdate, RegisterError> {
        let u = RegisterUpdate { src, words };
        validate_update(&u)?;
        Ok(u)
    }

    /// Builds without validation.
    pub fn new_unchecked(src: usize, words: Vec<Vec<Sym>>) -> RegisterUpdate {
        RegisterUpdate { src, words }
    }

    /// Parses words like `"0a1"`; digits are registers, `\d` is the letter `d`.
    pub fn parse(src: usize, words: &[&str]) -> Result<RegisterUpdate, RegisterError> {
        let words = words
            .iter()
            .map(|w| parse_word(w))
            .collect::<Result<_, _>>()?;
        RegisterUpdate::new(src, words)
    }

    pub fn identity(n: usize) -> RegisterUpdate {
        RegisterUpdate {
            src: n,
            words: (0..n).map(|i| vec![Sym::Reg(i)]).collect(),
        }
    }

    /// `ε^n ∈ CMRupdate{0}{n}`.
    pub fn empty(n: usize) -> RegisterUpdate {
        RegisterUpdate {
            src: 0,
            words: vec![Vec::new(); n],
        }
    }

    /// `π_ℓ ∈ CMRupdate{n}{1}`.
    pub fn projection(n: usize, l: usize) -> RegisterUpdate {
        RegisterUpdate {
            src: n,
            words: vec![vec![Sym::Reg(l)]],
        }
    }

    pub fn src_count(&self) -> usize {
        self.src
    }

    pub fn tgt_count(&self) -> usize {
        self.words.len()
    }

    pub fn words(&self) -> &[Vec<Sym>] {
        &self.words
    }

    /// The word of an update in `CMRupdate{0}{1}`.
    pub fn content(&self) -> Option<String> {
        match self.words.as_slice() {
            [w] if self.src == 0 => w
                .iter()
                .map(|s| match s {
                    Sym::Letter(c) => Some(*c),
                    Sym::Reg(_) => None,
                })
                .collect(),
            _ => None,
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = char> + '_ {
        self.words.iter().flatten().filter_map(|s| match s {
            Sym::Letter(c) => Some(*c),
            Sym::Reg(_) => None,
        })
    }
}

fn parse_word(w: &str) -> Result<Vec<Sym>, RegisterError> {
    let mut out = Vec::new();
    let mut chars = w.chars();
    while let Some(c) = chars.next() {
        match c {
            '\\' => match chars.next() {
                Some(d) => out.push(Sym::Letter(d)),
                None => return Err(RegisterError::Format(format!("dangling escape in '{w}'"))),
            },
            d if d.is_ascii_digit() => out.push(Sym::Reg(d.to_digit(10).expect("digit") as usize)),
            c => out.push(Sym::Letter(c)),
        }
    }
    Ok(out)
}

fn word_to_string(w: &[Sym]) -> String {
    let mut s = String::new();
    for sym in w {
        match sym {
            Sym::Reg(i) => s.push_str(&i.to_string()),
            Sym::Letter(c) if c.is_ascii_digit() || *c == '\\' => {
                s.push('\\');
                s.push(*c);
            }
            Sym::Letter(c) => s.push(*c),
        }
    }
    s
}

impl fmt::Display for RegisterUpdate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "\"{}\"", word_to_string(w))?;
        }
        write!(f, ")")
    }
}

pub fn validate_update(u: &RegisterUpdate) -> Result<(), RegisterError> {
    let mut seen = BTreeSet::new();
    let mut last: Option<usize> = None;
    for sym in u.words.iter().flatten() {
        if let Sym::Reg(i) = *sym {
            if i >= u.src {
                return Err(RegisterError::IndexOutOfRange {
                    index: i,
                    src: u.src,
                });
            }
            if !seen.insert(i) {
                return Err(RegisterError::Copyless(i));
            }
            if let Some(l) = last {
                if i < l {
                    return Err(RegisterError::Monotone {
                        earlier: i,
                        later: l,
                    });
                }
            }
            last = Some(i);
        }
    }
    Ok(())
}

/// `σ ∘ σ'`: every index `i` of `σ` replaced by the `i`-th word of `σ'`.
pub fn compose_update(
    sigma: &RegisterUpdate,
    sigma2: &RegisterUpdate,
) -> Result<RegisterUpdate, RegisterError> {
    if sigma.src != sigma2.tgt_count() {
        return Err(RegisterError::Arity {
            expected: sigma.src,
            found: sigma2.tgt_count(),
        });
    }
    let words = sigma
        .words
        .iter()
        .map(|w| {
            w.iter()
                .flat_map(|s| match s {
                    Sym::Reg(i) => sigma2.words[*i].clone(),
                    Sym::Letter(_) => vec![*s],
                })
                .collect()
        })
        .collect();
    let out = RegisterUpdate {
        src: sigma2.src,
        words,
    };
    debug_assert_eq!(validate_update(&out), Ok(()));
    Ok(out)
}

/// A stateless machine with `registers` registers and one update per
/// input letter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegisterMachine {
    registers: usize,
    input: Vec<char>,
    output: Signature,
    updates: BTreeMap<char, RegisterUpdate>,
}

impl RegisterMachine {
    pub fn new(
        registers: usize,
        input: Vec<char>,
        output: Signature,
        updates: BTreeMap<char, RegisterUpdate>,
    ) -> Result<RegisterMachine, RegisterError> {
        if registers == 0 {
            return Err(RegisterError::NoRegisters);
        }
        for a in &input {
            let u = updates.get(a).ok_or(RegisterError::MissingUpdate(*a))?;
            if u.src != registers {
                return Err(RegisterError::Arity {
                    expected: registers,
                    found: u.src,
                });
            }
            if u.tgt_count() != registers {
                return Err(RegisterError::Arity {
                    expected: registers,
                    found: u.tgt_count(),
                });
            }
            validate_update(u)?;
            if let Some(c) = u.letters().find(|c| !output.contains(*c)) {
                return Err(RegisterError::LetterOutsideAlphabet(c));
            }
        }
        if let Some(c) = updates.keys().find(|c| !input.contains(c)) {
            return Err(RegisterError::LetterOutsideAlphabet(*c));
        }
        Ok(RegisterMachine {
            registers,
            input,
            output,
            updates,
        })
    }

    pub fn registers(&self) -> usize {
        self.registers
    }

    pub fn input(&self) -> &[char] {
        &self.input
    }

    pub fn output(&self) -> &Signature {
        &self.output
    }

    pub fn update(&self, a: char) -> Option<&RegisterUpdate> {
        self.updates.get(&a)
    }

    pub fn to_json(&self) -> MachineJson {
        MachineJson {
            registers: self.registers,
            alphabet: self.input.iter().collect(),
            output: Some(self.output.letters().iter().collect()),
            updates: self
                .updates
                .iter()
                .map(|(a, u)| {
                    (
                        a.to_string(),
                        u.words.iter().map(|w| word_to_string(w)).collect(),
                    )
                })
                .collect(),
        }
    }

    pub fn from_json(j: &MachineJson) -> Result<RegisterMachine, RegisterError> {
        let input: Vec<char> = j.alphabet.chars().collect();
        let mut updates = BTreeMap::new();
        let mut used = BTreeSet::new();
        for (key, words) in &j.updates {
            let mut chars = key.chars();
            let a = match (chars.next(), chars.next()) {
                (Some(a), None) => a,
                _ => {
                    return Err(RegisterError::Format(format!(
                        "update key '{key}' is not a letter"
                    )))
                }
            };
            let words = words
                .iter()
                .map(|w| parse_word(w))
                .collect::<Result<Vec<_>, _>>()?;
            let u = RegisterUpdate::new(j.registers, words)?;
            used.extend(u.letters());
            updates.insert(a, u);
        }
        let output = match &j.output {
            Some(o) => o.chars().collect::<Vec<_>>(),
            None => {
                let mut o = input.clone();
                o.extend(used.into_iter().filter(|c| !input.contains(c)));
                o
            }
        };
        let output = Signature::new(output).map_err(|e| RegisterError::Format(e.to_string()))?;
        RegisterMachine::new(j.registers, input, output, updates)
    }
}

/// Wire format of a register machine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MachineJson {
    pub registers: usize,
    pub alphabet: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
    pub updates: BTreeMap<String, Vec<String>>,
}

impl FromStr for RegisterMachine {
    type Err = RegisterError;
    fn from_str(s: &str) -> Result<RegisterMachine, RegisterError> {
        let j: MachineJson =
            serde_json::from_str(s).map_err(|e| RegisterError::Format(e.to_string()))?;
        RegisterMachine::from_json(&j)
    }
}

/// Folds the updates over `w` from empty registers and reads register 0.
pub fn run_machine(m: &RegisterMachine, w: &str) -> Result<String, RegisterError> {
    let mut state = RegisterUpdate::empty(m.registers);
    for a in w.chars() {
        let u = m
            .updates
            .get(&a)
            .ok_or(RegisterError::LetterOutsideAlphabet(a))?;
        state = compose_update(u, &state)?;
    }
    let out = compose_update(&RegisterUpdate::projection(m.registers, 0), &state)?;
    Ok(out.content().expect("closed single-register update"))
}

fn register_var(j: usize) -> String {
    format!("f{}", j + 1)
}

/// `λz. c₁ (c₂ (… (cₘ z)))` for one component of an update.
fn component_term(w: &[Sym]) -> Term {
    let body = w.iter().rev().fold(Term::var("z"), |acc, s| {
        let head = match s {
            Sym::Letter(c) => Term::Const(Signature::letter_name(*c)),
            Sym::Reg(j) => Term::var(&register_var(*j)),
        };
        Term::app(head, acc)
    });
    Term::lam("z", body)
}

/// `σ̲ = λF f₁…f_k. F t₁ … t_n : κ_n -o κ_k` for `σ ∈ CMRupdate{k}{n}`.
pub fn update_to_lambda(u: &RegisterUpdate) -> Result<Term, RegisterError> {
    validate_update(u)?;
    let body = Term::apps(Term::var("F"), u.words.iter().map(|w| component_term(w)));
    let binders: Vec<String> = std::iter::once("F".to_string())
        .chain((0..u.src).map(register_var))
        .collect();
    Ok(Term::lams(binders.iter().map(String::as_str), body))
}

/// `κ_n -o κ_k`, the type of the encoding of `CMRupdate{k}{n}`.
pub fn update_type(src: usize, tgt: usize) -> Type {
    Type::lin(Type::register_bank(tgt), Type::register_bank(src))
}

/// The λ-transducer of a register machine, with iteration type `κ_n -o o`.
pub fn machine_to_lambda(m: &RegisterMachine) -> Result<LambdaTransducer, RegisterError> {
    let n = m.registers;
    let kappa = Type::lin(Type::register_bank(n), Type::Base);
    let mut steps = BTreeMap::new();
    for a in &m.input {
        let sigma = update_to_lambda(&m.updates[a])?;
        let d = Term::lams(
            ["X", "z"],
            Term::app(Term::var("X"), Term::app(sigma, Term::var("z"))),
        );
        steps.insert(*a, d);
    }
    let identity = Term::lam("x", Term::var("x"));
    let init = Term::lam(
        "Z",
        Term::apps(Term::var("Z"), (0..n).map(|_| identity.clone())),
    );
    let regs: Vec<String> = (0..n).map(register_var).collect();
    let readout = Term::lams(
        regs.iter().map(String::as_str),
        Term::app(Term::var(&regs[0]), Term::constant(EPS)),
    );
    let output_term = Term::lam("K", Term::app(Term::var("K"), readout));
    let l = LambdaTransducer::new(
        m.input.clone(),
        m.output.clone(),
        kappa,
        steps,
        init,
        output_term,
        Mode::Planar,
    );
    l.check().map_err(|e| match e {
        crate::two_way::TwoWayError::Lambda(e) => RegisterError::Lambda(e),
        other => RegisterError::Format(other.to_string()),
    })?;
    Ok(l)
}

/// A λ-definition `Str_Σ[κ] -o Str_Γ` of a string function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrFunction {
    pub term: Term,
    pub input: Signature,
    pub kappa: Type,
    pub output: Signature,
}

impl StrFunction {
    pub fn new(term: Term, input: Signature, kappa: Type, output: Signature) -> StrFunction {
        StrFunction {
            term,
            input,
            kappa,
            output,
        }
    }

    pub fn ty(&self) -> Type {
        Type::lin(
            Type::church_string_at(self.input.letters().len(), &self.kappa),
            Type::church_string(self.output.letters().len()),
        )
    }

    pub fn check(&self, mode: Mode) -> Result<Judgement, LambdaError> {
        typecheck(&self.term, &self.ty(), &self.output, mode)
    }

    /// Applies the term to `⌜w⌝` and reads back the normal form.
    pub fn apply(&self, w: &str) -> Result<String, LambdaError> {
        self.apply_with_fuel(w, DEFAULT_FUEL)
    }

    pub fn apply_with_fuel(&self, w: &str, fuel: u64) -> Result<String, LambdaError> {
        let arg = church_encode(w, &self.input)?;
        let nf = normalize_with_fuel(&Term::app(self.term.clone(), arg), fuel)?;
        church_readback(&nf, &self.output)
    }
}

/// The reversal function over `alphabet`, at iteration type `o -o o`.
pub fn reverse_term(alphabet: &Signature) -> StrFunction {
    let letters: Vec<Name> = alphabet
        .letters()
        .iter()
        .map(|&c| Signature::letter_name(c))
        .collect();
    let step = |a: &Name| {
        Term::lams(
            ["x0", "z0"],
            Term::app(
                Term::var("x0"),
                Term::app(Term::Var(a.clone()), Term::var("z0")),
            ),
        )
    };
    let body = Term::apps(
        Term::var("s0"),
        letters
            .iter()
            .map(step)
            .chain([Term::lam("x0", Term::var("x0")), Term::var(EPS)]),
    );
    let binders: Vec<&str> = std::iter::once("s0")
        .chain(letters.iter().map(|n| &**n))
        .chain(std::iter::once(EPS))
        .collect();
    StrFunction::new(
        Term::lams(binders, body),
        alphabet.clone(),
        Type::endo(),
        alphabet.clone(),
    )
}

/// `λs. f (g s)`, typed at `Str_Σ[κ_g[κ_f]] -o Str_Γ`.
pub fn pipeline_compose(f: &StrFunction, g: &StrFunction) -> Result<StrFunction, LambdaError> {
    if f.input.letters() != g.output.letters() {
        return Err(LambdaError::Signature(format!(
            "cannot compose: inner output {:?} differs from outer input {:?}",
            g.output.letters(),
            f.input.letters()
        )));
    }
    let term = Term::lam(
        "s",
        Term::app(f.term.clone(), Term::app(g.term.clone(), Term::var("s"))),
    );
    Ok(StrFunction::new(
        term,
        g.input.clone(),
        type_subst(&g.kappa, &f.kappa),
        f.output.clone(),
    ))
}

/// The identity function as a λ-definition at `κ = o`.
pub fn identity_term(alphabet: &Signature) -> StrFunction {
    StrFunction::new(
        Term::lam("s", Term::var("s")),
        alphabet.clone(),
        Type::Base,
        alphabet.clone(),
    )
}

/// A random valid update in `CMRupdate{src}{tgt}`: a random increasing
/// subset of the registers spread over the components in order, padded
/// with up to `max_letters` letters per component.
pub fn random_update<R: Rng + ?Sized>(
    rng: &mut R,
    src: usize,
    tgt: usize,
    alphabet: &[char],
    max_letters: usize,
) -> RegisterUpdate {
    let mut words = vec![Vec::new(); tgt];
    if tgt > 0 {
        let mut slot = 0;
        for i in 0..src {
            if rng.gen_bool(0.7) {
                slot = rng.gen_range(slot..tgt);
                words[slot].push(Sym::Reg(i));
            }
        }
    }
    for w in &mut words {
        if alphabet.is_empty() {
            continue;
        }
        for _ in 0..rng.gen_range(0..=max_letters) {
            let c = alphabet[rng.gen_range(0..alphabet.len())];
            let at = rng.gen_range(0..=w.len());
            w.insert(at, Sym::Letter(c));
        }
    }
    let u = RegisterUpdate { src, words };
    debug_assert_eq!(validate_update(&u), Ok(()));
    u
}

/// A random machine over `input` with output alphabet `output`.
pub fn random_machine<R: Rng + ?Sized>(
    rng: &mut R,
    registers: usize,
    input: &[char],
    output: &Signature,
    max_letters: usize,
) -> RegisterMachine {
    let updates = input
        .iter()
        .map(|&a| {
            (
                a,
                random_update(rng, registers, registers, output.letters(), max_letters),
            )
        })
        .collect();
    RegisterMachine::new(registers, input.to_vec(), output.clone(), updates)
        .expect("generated machine is valid")
}
