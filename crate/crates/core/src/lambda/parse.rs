//! Parser for `.lam` programs.
//!
//! ```text
//! program := decl*
//! decl    := "sig" NAME "{" NAME ("," NAME)* "}"
//!          | "type" NAME "=" type
//!          | "def" NAME "=" term
//! type    := "o" | NAME | type "-o" type | type "->" type | "(" type ")"
//!          | "Str{" letters "}" ("[" type "]")?
//! term    := "\" NAME+ "." term | atom+
//! atom    := NAME | "(" term ")"
//! ```
//!
//! `-o` binds tighter than `->`; both associate to the right. `#` starts a
//! line comment. A free name in a `def` refers to an earlier `def` when one
//! exists and is otherwise a signature constant.

use std::collections::HashMap;

use super::syntax::{Name, Signature, Term, Type};
use super::LambdaError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Backslash,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Equals,
    Lollipop,
    Arrow,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Name(n) => write!(f, "'{n}'"),
            Tok::Backslash => write!(f, "'\\'"),
            Tok::Dot => write!(f, "'.'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::LBrace => write!(f, "'{{'"),
            Tok::RBrace => write!(f, "'}}'"),
            Tok::LBracket => write!(f, "'['"),
            Tok::RBracket => write!(f, "']'"),
            Tok::Comma => write!(f, "','"),
            Tok::Equals => write!(f, "'='"),
            Tok::Lollipop => write!(f, "'-o'"),
            Tok::Arrow => write!(f, "'->'"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, LambdaError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (lineno + 1, i + 1);
            let single = match c {
                '#' => break,
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                '\\' | 'λ' => Some(Tok::Backslash),
                '.' => Some(Tok::Dot),
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '{' => Some(Tok::LBrace),
                '}' => Some(Tok::RBrace),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ',' => Some(Tok::Comma),
                '=' => Some(Tok::Equals),
                '⊸' => Some(Tok::Lollipop),
                '→' => Some(Tok::Arrow),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Spanned { tok, line, col });
                i += 1;
                continue;
            }
            if c == '-' {
                let tok = match chars.get(i + 1) {
                    Some('o') if !chars.get(i + 2).copied().is_some_and(is_name_char) => {
                        Tok::Lollipop
                    }
                    Some('>') => Tok::Arrow,
                    _ => {
                        return Err(LambdaError::Parse {
                            line,
                            col,
                            msg: "expected '-o' or '->'".into(),
                        })
                    }
                };
                out.push(Spanned { tok, line, col });
                i += 2;
                continue;
            }
            if is_name_char(c) {
                let start = i;
                while i < chars.len() && is_name_char(chars[i]) {
                    i += 1;
                }
                out.push(Spanned {
                    tok: Tok::Name(chars[start..i].iter().collect()),
                    line,
                    col,
                });
                continue;
            }
            return Err(LambdaError::Parse {
                line,
                col,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

/// Type syntax before expansion; keeps `Str{..}[..]` sugar visible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeAst {
    Base,
    Lin(Box<TypeAst>, Box<TypeAst>),
    Full(Box<TypeAst>, Box<TypeAst>),
    Str {
        alphabet: Vec<char>,
        subst: Option<Box<TypeAst>>,
    },
}

impl TypeAst {
    pub fn expand(&self) -> Type {
        match self {
            TypeAst::Base => Type::Base,
            TypeAst::Lin(d, c) => Type::lin(d.expand(), c.expand()),
            TypeAst::Full(d, c) => Type::full(d.expand(), c.expand()),
            TypeAst::Str { alphabet, subst } => {
                let base = Type::church_string(alphabet.len());
                match subst {
                    Some(k) => base.subst(&k.expand()),
                    None => base,
                }
            }
        }
    }

    /// Recognizes `Str{Σ}[κ] -o Str{Γ}`, returning `(Σ, κ, Γ)`. A missing
    /// substitution means `κ = o`.
    pub fn as_string_function(&self) -> Option<(Vec<char>, Type, Vec<char>)> {
        match self {
            TypeAst::Lin(d, c) => match (&**d, &**c) {
                (
                    TypeAst::Str {
                        alphabet: input,
                        subst,
                    },
                    TypeAst::Str {
                        alphabet: output,
                        subst: None,
                    },
                ) => Some((
                    input.clone(),
                    subst.as_ref().map_or(Type::Base, |k| k.expand()),
                    output.clone(),
                )),
                _ => None,
            },
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Declaration {
    Sig {
        name: Name,
        signature: Signature,
        line: usize,
    },
    Type {
        name: Name,
        ty: TypeAst,
        line: usize,
    },
    Def {
        name: Name,
        term: Term,
        line: usize,
    },
}

/// A parsed `.lam` file. Definitions are stored with earlier definitions
/// already inlined.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub declarations: Vec<Declaration>,
}

impl Program {
    pub fn term(&self, name: &str) -> Option<&Term> {
        self.declarations.iter().find_map(|d| match d {
            Declaration::Def { name: n, term, .. } if &**n == name => Some(term),
            _ => None,
        })
    }

    pub fn type_decl(&self, name: &str) -> Option<&TypeAst> {
        self.declarations.iter().find_map(|d| match d {
            Declaration::Type { name: n, ty, .. } if &**n == name => Some(ty),
            _ => None,
        })
    }

    pub fn signature(&self, name: &str) -> Option<&Signature> {
        self.declarations.iter().find_map(|d| match d {
            Declaration::Sig {
                name: n, signature, ..
            } if &**n == name => Some(signature),
            _ => None,
        })
    }

    pub fn signatures(&self) -> impl Iterator<Item = (&Name, &Signature)> {
        self.declarations.iter().filter_map(|d| match d {
            Declaration::Sig {
                name, signature, ..
            } => Some((name, signature)),
            _ => None,
        })
    }

    /// Parses a type that may mention this program's named types.
    pub fn parse_type(&self, text: &str) -> Result<TypeAst, LambdaError> {
        let toks = lex(text)?;
        let mut p = Parser::new(toks, self.type_env());
        let ty = p.parse_type()?;
        p.expect_end()?;
        Ok(ty)
    }

    fn type_env(&self) -> HashMap<String, TypeAst> {
        self.declarations
            .iter()
            .filter_map(|d| match d {
                Declaration::Type { name, ty, .. } => Some((name.to_string(), ty.clone())),
                _ => None,
            })
            .collect()
    }
}

pub fn parse_program(text: &str) -> Result<Program, LambdaError> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks, HashMap::new());
    let mut program = Program::default();
    let mut defs: HashMap<String, Term> = HashMap::new();
    while let Some(tok) = p.peek().cloned() {
        let line = tok.line;
        let keyword = match &tok.tok {
            Tok::Name(k) if k == "sig" || k == "type" || k == "def" => k.clone(),
            other => {
                return Err(p.error_at(
                    &tok,
                    format!("expected 'sig', 'type' or 'def', found {other}"),
                ))
            }
        };
        p.advance();
        let name = p.expect_name()?;
        let duplicate = program
            .declarations
            .iter()
            .any(|d| match (d, keyword.as_str()) {
                (Declaration::Sig { name: n, .. }, "sig")
                | (Declaration::Type { name: n, .. }, "type")
                | (Declaration::Def { name: n, .. }, "def") => **n == *name,
                _ => false,
            });
        if duplicate {
            return Err(LambdaError::DuplicateDefinition { name, line });
        }
        let decl = match keyword.as_str() {
            "sig" => {
                p.expect(Tok::LBrace)?;
                let mut letters = Vec::new();
                loop {
                    let at = p.peek().cloned();
                    let letter = p.expect_name()?;
                    let mut chars = letter.chars();
                    match (chars.next(), chars.next()) {
                        (Some(c), None) => letters.push(c),
                        _ => {
                            return Err(p.error_at(
                                &at.expect("name was just read"),
                                format!("letter '{letter}' must be a single character"),
                            ))
                        }
                    }
                    if !p.eat(&Tok::Comma) {
                        break;
                    }
                }
                p.expect(Tok::RBrace)?;
                let signature = Signature::new(letters).map_err(|e| LambdaError::Parse {
                    line,
                    col: tok.col,
                    msg: e.to_string(),
                })?;
                Declaration::Sig {
                    name: name.into(),
                    signature,
                    line,
                }
            }
            "type" => {
                p.expect(Tok::Equals)?;
                let ty = p.parse_type()?;
                p.types.insert(name.clone(), ty.clone());
                Declaration::Type {
                    name: name.into(),
                    ty,
                    line,
                }
            }
            _ => {
                p.expect(Tok::Equals)?;
                let term = p.parse_term(&mut Vec::new(), &defs)?;
                defs.insert(name.clone(), term.clone());
                Declaration::Def {
                    name: name.into(),
                    term,
                    line,
                }
            }
        };
        program.declarations.push(decl);
    }
    Ok(program)
}

/// Parses a standalone type; named types are not available.
pub fn parse_type(text: &str) -> Result<TypeAst, LambdaError> {
    Program::default().parse_type(text)
}

/// Parses a standalone term; every free name becomes a constant.
pub fn parse_term(text: &str) -> Result<Term, LambdaError> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks, HashMap::new());
    let t = p.parse_term(&mut Vec::new(), &HashMap::new())?;
    p.expect_end()?;
    Ok(t)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    types: HashMap<String, TypeAst>,
}

impl Parser {
    fn new(toks: Vec<Spanned>, types: HashMap<String, TypeAst>) -> Parser {
        Parser {
            toks,
            pos: 0,
            types,
        }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn peek_tok(&self) -> Option<&Tok> {
        self.peek().map(|s| &s.tok)
    }

    fn advance(&mut self) {
        self.pos += 1;
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek_tok() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn error_at(&self, at: &Spanned, msg: String) -> LambdaError {
        LambdaError::Parse {
            line: at.line,
            col: at.col,
            msg,
        }
    }

    fn error_here(&self, msg: String) -> LambdaError {
        match self.peek() {
            Some(s) => self.error_at(s, msg),
            None => {
                let (line, col) = self.toks.last().map_or((1, 1), |s| (s.line, s.col + 1));
                LambdaError::Parse {
                    line,
                    col,
                    msg: format!("{msg} at end of input"),
                }
            }
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<(), LambdaError> {
        if self.eat(&tok) {
            Ok(())
        } else {
            let found = self
                .peek_tok()
                .map(|t| format!(", found {t}"))
                .unwrap_or_default();
            Err(self.error_here(format!("expected {tok}{found}")))
        }
    }

    fn expect_name(&mut self) -> Result<String, LambdaError> {
        match self.peek_tok() {
            Some(Tok::Name(n)) => {
                let n = n.clone();
                self.advance();
                Ok(n)
            }
            Some(other) => Err(self.error_here(format!("expected a name, found {other}"))),
            None => Err(self.error_here("expected a name".into())),
        }
    }

    fn expect_end(&self) -> Result<(), LambdaError> {
        match self.peek() {
            None => Ok(()),
            Some(s) => Err(self.error_at(s, format!("unexpected {}", s.tok))),
        }
    }

    fn parse_type(&mut self) -> Result<TypeAst, LambdaError> {
        let lhs = self.parse_lin_type()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.parse_type()?;
            Ok(TypeAst::Full(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn parse_lin_type(&mut self) -> Result<TypeAst, LambdaError> {
        let lhs = self.parse_type_atom()?;
        if self.eat(&Tok::Lollipop) {
            let rhs = self.parse_lin_type()?;
            Ok(TypeAst::Lin(Box::new(lhs), Box::new(rhs)))
        } else {
            Ok(lhs)
        }
    }

    fn parse_type_atom(&mut self) -> Result<TypeAst, LambdaError> {
        if self.eat(&Tok::LParen) {
            let t = self.parse_type()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        let at = self.peek().cloned();
        let name = self.expect_name()?;
        match name.as_str() {
            "o" => Ok(TypeAst::Base),
            "Str" if self.peek_tok() == Some(&Tok::LBrace) => {
                self.advance();
                let mut alphabet = Vec::new();
                if !self.eat(&Tok::RBrace) {
                    loop {
                        let at = self.peek().cloned();
                        let letter = self.expect_name()?;
                        let mut chars = letter.chars();
                        match (chars.next(), chars.next()) {
                            (Some(c), None) if !alphabet.contains(&c) => alphabet.push(c),
                            _ => {
                                return Err(self.error_at(
                                    &at.expect("name was just read"),
                                    format!("'{letter}' is not a fresh single-character letter"),
                                ))
                            }
                        }
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RBrace)?;
                }
                let subst = if self.eat(&Tok::LBracket) {
                    let k = self.parse_type()?;
                    self.expect(Tok::RBracket)?;
                    Some(Box::new(k))
                } else {
                    None
                };
                Ok(TypeAst::Str { alphabet, subst })
            }
            other => self.types.get(other).cloned().ok_or_else(|| {
                self.error_at(
                    &at.expect("name was just read"),
                    format!("unknown type '{other}'"),
                )
            }),
        }
    }

    fn parse_term(
        &mut self,
        bound: &mut Vec<String>,
        defs: &HashMap<String, Term>,
    ) -> Result<Term, LambdaError> {
        if self.eat(&Tok::Backslash) {
            let mut binders = vec![self.expect_name()?];
            while let Some(Tok::Name(n)) = self.peek_tok() {
                binders.push(n.clone());
                self.advance();
            }
            self.expect(Tok::Dot)?;
            let depth = bound.len();
            bound.extend(binders.iter().cloned());
            let body = self.parse_term(bound, defs);
            bound.truncate(depth);
            return Ok(Term::lams(binders.iter().map(String::as_str), body?));
        }
        let mut head = match self.parse_atom(bound, defs)? {
            Some(t) => t,
            None => return Err(self.error_here("expected a term".into())),
        };
        loop {
            if self.peek_tok() == Some(&Tok::Backslash) {
                let arg = self.parse_term(bound, defs)?;
                return Ok(Term::app(head, arg));
            }
            match self.parse_atom(bound, defs)? {
                Some(arg) => head = Term::app(head, arg),
                None => return Ok(head),
            }
        }
    }

    fn parse_atom(
        &mut self,
        bound: &mut Vec<String>,
        defs: &HashMap<String, Term>,
    ) -> Result<Option<Term>, LambdaError> {
        match self.peek_tok() {
            Some(Tok::LParen) => {
                self.advance();
                let t = self.parse_term(bound, defs)?;
                self.expect(Tok::RParen)?;
                Ok(Some(t))
            }
            Some(Tok::Name(n)) if !matches!(n.as_str(), "def" | "type" | "sig") => {
                let n = n.clone();
                self.advance();
                Ok(Some(if bound.contains(&n) {
                    Term::var(&n)
                } else if let Some(t) = defs.get(&n) {
                    t.clone()
                } else {
                    Term::constant(&n)
                }))
            }
            _ => Ok(None),
        }
    }
}
