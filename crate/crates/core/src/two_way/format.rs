//! JSON for two-way transducers and the `.lam` layout of λ-transducers.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{LambdaTransducer, TwoWayError, TwoWayTransducer};
use crate::diagram::{diagram_from_json, diagram_to_json, to_dot, Diagram, DiagramJson, Planarity};
use crate::lambda::{rename_apart, Declaration, Mode, Name, Program, Signature, EPS};
use crate::registers::StrFunction;

/// Wire format of a [`TwoWayTransducer`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransducerJson {
    pub convention: String,
    pub mode: String,
    pub input: String,
    pub output: String,
    pub states: String,
    pub init: DiagramJson,
    pub steps: BTreeMap<String, DiagramJson>,
    #[serde(rename = "final")]
    pub final_: DiagramJson,
}

impl TwoWayTransducer {
    pub fn to_json(&self) -> TransducerJson {
        let alphabet: String = self.output.letters().iter().collect();
        let dj = |d: &Diagram| diagram_to_json(d, &alphabet);
        TransducerJson {
            convention: self.convention.to_string(),
            mode: self.mode.to_string(),
            input: self.input.iter().collect(),
            output: alphabet.clone(),
            states: if self.states.is_empty() {
                String::new()
            } else {
                self.states.to_string()
            },
            init: dj(&self.init),
            steps: self
                .steps
                .iter()
                .map(|(a, d)| (a.to_string(), dj(d)))
                .collect(),
            final_: dj(&self.final_),
        }
    }

    pub fn from_json(j: &TransducerJson) -> Result<TwoWayTransducer, TwoWayError> {
        let output = Signature::from_str_letters(&j.output)?;
        let diagram =
            |d: &DiagramJson| -> Result<Diagram, TwoWayError> { Ok(diagram_from_json(d)?.0) };
        let mut steps = BTreeMap::new();
        for (key, d) in &j.steps {
            let mut chars = key.chars();
            match (chars.next(), chars.next()) {
                (Some(a), None) => steps.insert(a, diagram(d)?),
                _ => {
                    return Err(TwoWayError::Format(format!(
                        "step key '{key}' is not a letter"
                    )))
                }
            };
        }
        TwoWayTransducer::new(
            j.input.chars().collect(),
            output,
            j.convention.parse()?,
            j.states.parse()?,
            diagram(&j.init)?,
            steps,
            diagram(&j.final_)?,
            j.mode.parse::<Planarity>()?,
        )
    }

    /// One DOT graph per diagram.
    pub fn to_dot(&self) -> String {
        let mut out = to_dot(&self.init, "init");
        for (a, d) in &self.steps {
            out.push_str(&to_dot(d, &format!("step_{a}")));
        }
        out.push_str(&to_dot(&self.final_, "final"));
        out
    }
}

impl LambdaTransducer {
    /// `.lam` text with `sig out`, `type kappa`, `def init`, `def step_<a>`
    /// and `def output`; [`LambdaTransducer::from_program`] reads it back.
    pub fn to_lam(&self) -> String {
        let avoid: Vec<Name> = self
            .output
            .letters()
            .iter()
            .map(|&c| Signature::letter_name(c))
            .chain([Name::from(EPS)])
            .collect();
        let show = |t| rename_apart(t, avoid.iter().cloned()).to_string();
        let letters: Vec<String> = self.output.letters().iter().map(char::to_string).collect();
        let mut s = String::new();
        writeln!(s, "sig out {{{}}}", letters.join(", ")).expect("write to string");
        writeln!(s, "type kappa = {}", self.kappa).expect("write to string");
        writeln!(s, "def init = {}", show(&self.init)).expect("write to string");
        for a in &self.input {
            writeln!(s, "def step_{a} = {}", show(&self.steps[a])).expect("write to string");
        }
        writeln!(s, "def output = {}", show(&self.output_term)).expect("write to string");
        s
    }

    /// Reads the layout written by [`LambdaTransducer::to_lam`]. Returns
    /// `None` when the program has no `output` definition.
    pub fn from_program(p: &Program, mode: Mode) -> Result<Option<LambdaTransducer>, TwoWayError> {
        let Some(output_term) = p.term("output") else {
            return Ok(None);
        };
        let missing = |what: &str| TwoWayError::Format(format!("λ-transducer needs '{what}'"));
        let output = p
            .signature("out")
            .ok_or_else(|| missing("sig out"))?
            .clone();
        let kappa = p
            .type_decl("kappa")
            .ok_or_else(|| missing("type kappa"))?
            .expand();
        let init = p.term("init").ok_or_else(|| missing("def init"))?.clone();
        let mut input = Vec::new();
        let mut steps = BTreeMap::new();
        for d in &p.declarations {
            if let Declaration::Def { name, term, line } = d {
                if let Some(letter) = name.strip_prefix("step_") {
                    let mut chars = letter.chars();
                    let a = match (chars.next(), chars.next()) {
                        (Some(a), None) => a,
                        _ => {
                            return Err(TwoWayError::Table {
                                line: *line,
                                msg: format!("'{name}' does not name a single letter"),
                            })
                        }
                    };
                    input.push(a);
                    steps.insert(a, term.clone());
                }
            }
        }
        let l = LambdaTransducer::new(input, output, kappa, steps, init, output_term.clone(), mode);
        l.check()?;
        Ok(Some(l))
    }
}

/// The definition `name` at the type declared under the same name, which
/// must have the form `Str{Σ}[κ] -o Str{Γ}`.
pub fn str_function_from_program(
    p: &Program,
    name: &str,
    ty: Option<&str>,
) -> Result<StrFunction, TwoWayError> {
    let term = p
        .term(name)
        .ok_or_else(|| TwoWayError::Format(format!("no definition '{name}'")))?;
    let ty = match ty {
        Some(text) => p.parse_type(text)?,
        None => p
            .type_decl(name)
            .cloned()
            .ok_or_else(|| TwoWayError::Format(format!("no type given for '{name}'")))?,
    };
    let (input, kappa, output) = ty.as_string_function().ok_or_else(|| {
        TwoWayError::Format(format!("type of '{name}' is not Str{{..}}[κ] -o Str{{..}}"))
    })?;
    Ok(StrFunction::new(
        term.clone(),
        Signature::new(input)?,
        kappa,
        Signature::new(output)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::super::compile;
    use super::*;
    use crate::lambda::{parse_program, parse_term, Term, Type};

    fn l_id() -> LambdaTransducer {
        let sig = Signature::from_str_letters("abz").unwrap();
        let steps = ['a', 'z']
            .iter()
            .map(|&c| {
                let body = Term::app(
                    Term::var("f"),
                    Term::app(Term::Const(Signature::letter_name(c)), Term::var("z")),
                );
                (c, Term::lams(["f", "z"], body))
            })
            .collect();
        LambdaTransducer::new(
            vec!['a', 'z'],
            sig,
            Type::endo(),
            steps,
            parse_term("\\x. x").unwrap(),
            parse_term("\\f. f eps").unwrap(),
            Mode::Planar,
        )
    }

    #[test]
    fn transducer_json_round_trip() {
        let t = compile(&l_id()).unwrap();
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let j: TransducerJson = serde_json::from_str(&text).unwrap();
        assert_eq!(TwoWayTransducer::from_json(&j).unwrap(), t);
        assert!(text.contains("\"final\""));
    }

    #[test]
    fn lam_round_trip_avoids_letter_binders() {
        let l = l_id();
        let text = l.to_lam();
        assert!(!text.contains("\\f z."), "{text}");
        let back = LambdaTransducer::from_program(&parse_program(&text).unwrap(), Mode::Planar)
            .unwrap()
            .unwrap();
        assert_eq!(back.run_oracle("aza").unwrap(), "aza");
        assert_eq!(back.input(), l.input());
    }

    #[test]
    fn string_function_from_declarations() {
        let p =
            parse_program("type main = Str{a,b}[o -o o] -o Str{a,b}\ndef main = \\s. s").unwrap();
        let f = str_function_from_program(&p, "main", None).unwrap();
        assert_eq!(f.kappa, Type::endo());
        assert!(str_function_from_program(&p, "main", Some("o")).is_err());
    }
}
