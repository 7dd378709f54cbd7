//! Church encodings of words and their read-back.

use super::syntax::{Name, Signature, Term, Type, EPS};
use super::{eta_long_normal, LambdaError, DEFAULT_FUEL};

/// The open term `w̲ : o` over the letter constants, first letter outermost.
pub fn word_term(w: &str) -> Term {
    w.chars().rev().fold(Term::constant(EPS), |acc, c| {
        Term::app(Term::Const(Signature::letter_name(c)), acc)
    })
}

/// The closed Church encoding `⌜w⌝ = λa₁…λaₙ.λε. w̲` of type `Str_Σ`.
pub fn church_encode(w: &str, alphabet: &Signature) -> Result<Term, LambdaError> {
    let mut body = Term::var(EPS);
    for c in w.chars().rev() {
        if !alphabet.contains(c) {
            return Err(LambdaError::LetterOutsideAlphabet(c));
        }
        body = Term::app(Term::Var(Signature::letter_name(c)), body);
    }
    let binders: Vec<Name> = alphabet
        .letters()
        .iter()
        .map(|&c| Signature::letter_name(c))
        .chain(std::iter::once(Name::from(EPS)))
        .collect();
    Ok(binders
        .into_iter()
        .rev()
        .fold(body, |acc, b| Term::Lam(b, Box::new(acc))))
}

/// Reads the word denoted by `t`, which must either have type `o` over the
/// signature (open form) or type `Str_Γ` (closed form).
pub fn church_readback(t: &Term, sig: &Signature) -> Result<String, LambdaError> {
    let nf = super::normalize(t)?;
    match nf {
        Term::Lam(..) => {
            let ty = Type::church_string(sig.letters().len());
            let long = eta_long_normal(&nf, &ty, sig, &[], DEFAULT_FUEL)?;
            let mut binders = Vec::new();
            let mut body = &long;
            for _ in 0..=sig.letters().len() {
                match body {
                    Term::Lam(x, b) => {
                        binders.push(x.clone());
                        body = b;
                    }
                    _ => return Err(LambdaError::NotAWord(nf.to_string())),
                }
            }
            let eps = binders.pop().expect("at least the ε binder");
            read_spine(body, |name, is_var| {
                if !is_var {
                    return None;
                }
                if **name == *eps {
                    return Some(None);
                }
                binders
                    .iter()
                    .rposition(|b| b == name)
                    .map(|i| Some(sig.letters()[i]))
            })
            .ok_or_else(|| LambdaError::NotAWord(nf.to_string()))
        }
        _ => read_spine(&nf, |name, is_var| {
            if is_var {
                return None;
            }
            if &**name == EPS {
                return Some(None);
            }
            let mut chars = name.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if sig.contains(c) => Some(Some(c)),
                _ => None,
            }
        })
        .ok_or_else(|| LambdaError::NotAWord(nf.to_string())),
    }
}

/// Walks `l₁ (l₂ (… e))`. `classify` maps a head to `Some(Some(letter))`,
/// `Some(None)` for the empty-word constant, or `None` if it is neither.
fn read_spine(t: &Term, classify: impl Fn(&Name, bool) -> Option<Option<char>>) -> Option<String> {
    let mut out = String::new();
    let mut cur = t;
    loop {
        match cur {
            Term::Var(x) | Term::Const(x) => {
                return match classify(x, matches!(cur, Term::Var(_)))? {
                    None => Some(out),
                    Some(_) => None,
                };
            }
            Term::App(f, a) => {
                let letter = match &**f {
                    Term::Var(x) => classify(x, true)??,
                    Term::Const(x) => classify(x, false)??,
                    _ => return None,
                };
                out.push(letter);
                cur = a;
            }
            Term::Lam(..) => return None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::{parse_term, typecheck, Mode};

    fn ab() -> Signature {
        Signature::from_str_letters("ab").unwrap()
    }

    #[test]
    fn encodes_with_first_letter_outermost() {
        let t = church_encode("aab", &ab()).unwrap();
        assert_eq!(t.to_string(), "\\a b eps. a (a (b eps))");
        assert_eq!(
            church_encode("", &ab()).unwrap().to_string(),
            "\\a b eps. eps"
        );
        assert_eq!(
            church_encode("b", &ab()).unwrap().to_string(),
            "\\a b eps. b eps"
        );
    }

    #[test]
    fn rejects_letters_outside_alphabet() {
        assert_eq!(
            church_encode("ac", &ab()),
            Err(LambdaError::LetterOutsideAlphabet('c'))
        );
    }

    #[test]
    fn reads_open_words() {
        assert_eq!(church_readback(&word_term("ab"), &ab()).unwrap(), "ab");
        assert_eq!(church_readback(&Term::constant(EPS), &ab()).unwrap(), "");
        let t = parse_term("(\\x. a x) (b eps)").unwrap();
        assert_eq!(church_readback(&t, &ab()).unwrap(), "ab");
    }

    #[test]
    fn reads_closed_words() {
        let t = church_encode("abba", &ab()).unwrap();
        assert_eq!(church_readback(&t, &ab()).unwrap(), "abba");
    }

    #[test]
    fn church_word_is_planar_string() {
        let t = church_encode("aab", &ab()).unwrap();
        let ty = Type::church_string(2);
        typecheck(&t, &ty, &ab(), Mode::Planar).unwrap();
    }

    #[test]
    fn non_word_is_rejected() {
        let t = parse_term("\\x. x").unwrap();
        assert!(church_readback(&t, &ab()).is_err());
    }
}
