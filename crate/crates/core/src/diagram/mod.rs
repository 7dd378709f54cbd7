//! Labelled planar transition diagrams and the category they form.
//!
//! Objects are words over `{+,-}`. A morphism `A -> B` is a set of labelled
//! edges between the input row (positions of `A`) and the output row
//! (positions of `B`), every vertex carrying at most one edge. Input `+` and
//! output `-` vertices are sources; output `+` and input `-` vertices are
//! targets. Edges are stored oriented from source to target.

mod format;
pub mod random;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use format::{diagram_from_json, diagram_to_json, to_dot, DiagramJson};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    Plus,
    Minus,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Plus => Polarity::Minus,
            Polarity::Minus => Polarity::Plus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Polarity::Plus => '+',
            Polarity::Minus => '-',
        }
    }
}

/// An object of the diagram category. The empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PolarityWord(Vec<Polarity>);

impl PolarityWord {
    pub fn unit() -> PolarityWord {
        PolarityWord(Vec::new())
    }

    pub fn new(ps: Vec<Polarity>) -> PolarityWord {
        PolarityWord(ps)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn polarities(&self) -> &[Polarity] {
        &self.0
    }

    /// Polarity at a 1-based position.
    pub fn at(&self, pos: usize) -> Polarity {
        self.0[pos - 1]
    }

    pub fn tensor(&self, other: &PolarityWord) -> PolarityWord {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        PolarityWord(v)
    }

    /// Reverses the word and flips every polarity.
    pub fn dual(&self) -> PolarityWord {
        PolarityWord(self.0.iter().rev().map(|p| p.flip()).collect())
    }

    /// The subword at 0-based positions `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> PolarityWord {
        PolarityWord(self.0[start..end].to_vec())
    }
}

impl fmt::Display for PolarityWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for p in &self.0 {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PolarityWord {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<PolarityWord, DiagramError> {
        if s == "1" {
            return Ok(PolarityWord::unit());
        }
        s.chars()
            .map(|c| match c {
                '+' => Ok(Polarity::Plus),
                '-' | '−' => Ok(Polarity::Minus),
                other => Err(DiagramError::Format(format!("'{other}' is not a polarity"))),
            })
            .collect::<Result<_, _>>()
            .map(PolarityWord)
    }
}

pub fn dual_object(a: &PolarityWord) -> PolarityWord {
    a.dual()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub side: Side,
    /// 1-based.
    pub pos: usize,
}

impl Vertex {
    pub fn input(pos: usize) -> Vertex {
        Vertex {
            side: Side::In,
            pos,
        }
    }

    pub fn output(pos: usize) -> Vertex {
        Vertex {
            side: Side::Out,
            pos,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::In => write!(f, "in{}", self.pos),
            Side::Out => write!(f, "out{}", self.pos),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub src: Vertex,
    pub tgt: Vertex,
    pub label: String,
}

impl Edge {
    pub fn new(src: Vertex, tgt: Vertex, label: impl Into<String>) -> Edge {
        Edge {
            src,
            tgt,
            label: label.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.src, self.tgt)?;
        if !self.label.is_empty() {
            write!(f, " \"{}\"", self.label)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Planarity {
    #[default]
    Planar,
    Symmetric,
}

impl Planarity {
    fn join(self, other: Planarity) -> Planarity {
        if self == Planarity::Symmetric || other == Planarity::Symmetric {
            Planarity::Symmetric
        } else {
            Planarity::Planar
        }
    }
}

impl fmt::Display for Planarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Planarity::Planar => "planar",
            Planarity::Symmetric => "symmetric",
        })
    }
}

impl FromStr for Planarity {
    type Err = DiagramError;
    fn from_str(s: &str) -> Result<Planarity, DiagramError> {
        match s {
            "planar" => Ok(Planarity::Planar),
            "symmetric" => Ok(Planarity::Symmetric),
            other => Err(DiagramError::Format(format!("unknown mode '{other}'"))),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("boundary mismatch: {left} vs {right}")]
    BoundaryMismatch {
        left: PolarityWord,
        right: PolarityWord,
    },
    #[error("vertex {0} is out of bounds")]
    OutOfBounds(Vertex),
    #[error("vertex {0} has degree greater than one")]
    Degree(Vertex),
    #[error("edge {0} does not run from a source to a target")]
    Orientation(Edge),
    #[error("edges {0} and {1} cross")]
    Crossing(Edge, Edge),
    #[error("split at {at} does not fit a boundary of length {len}")]
    Split { at: usize, len: usize },
    #[error("symmetries are not available in planar mode")]
    PlanarSymmetry,
    #[error("label '{label}' uses a letter outside the alphabet '{alphabet}'")]
    Label { label: String, alphabet: String },
    #[error("{0}")]
    Format(String),
}

/// `true` when an edge at `v` must start there.
pub fn is_source(v: Vertex, polarity: Polarity) -> bool {
    matches!(
        (v.side, polarity),
        (Side::In, Polarity::Plus) | (Side::Out, Polarity::Minus)
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    dom: PolarityWord,
    cod: PolarityWord,
    /// Sorted.
    edges: Vec<Edge>,
    mode: Planarity,
}

impl Diagram {
    /// Builds and validates a diagram.
    pub fn new(
        dom: PolarityWord,
        cod: PolarityWord,
        edges: Vec<Edge>,
        mode: Planarity,
    ) -> Result<Diagram, DiagramError> {
        let d = Diagram::from_parts(dom, cod, edges, mode);
        d.validate()?;
        Ok(d)
    }

    fn from_parts(
        dom: PolarityWord,
        cod: PolarityWord,
        mut edges: Vec<Edge>,
        mode: Planarity,
    ) -> Diagram {
        edges.sort();
        Diagram {
            dom,
            cod,
            edges,
            mode,
        }
    }

    pub fn dom(&self) -> &PolarityWord {
        &self.dom
    }

    pub fn cod(&self) -> &PolarityWord {
        &self.cod
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn mode(&self) -> Planarity {
        self.mode
    }

    /// The same diagram viewed in another mode; checks planarity when
    /// moving to planar mode.
    pub fn with_mode(&self, mode: Planarity) -> Result<Diagram, DiagramError> {
        let d = Diagram {
            mode,
            ..self.clone()
        };
        d.validate()?;
        Ok(d)
    }

    fn polarity(&self, v: Vertex) -> Polarity {
        match v.side {
            Side::In => self.dom.at(v.pos),
            Side::Out => self.cod.at(v.pos),
        }
    }

    fn in_bounds(&self, v: Vertex) -> bool {
        let len = match v.side {
            Side::In => self.dom.len(),
            Side::Out => self.cod.len(),
        };
        (1..=len).contains(&v.pos)
    }

    /// Position in the boundary order `in_n < … < in_1 < out_1 < … < out_m`.
    fn rank(&self, v: Vertex) -> usize {
        match v.side {
            Side::In => self.dom.len() - v.pos,
            Side::Out => self.dom.len() + v.pos - 1,
        }
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let n = self.dom.len() + self.cod.len();
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for (i, e) in self.edges.iter().enumerate() {
            for v in [e.src, e.tgt] {
                if !self.in_bounds(v) {
                    return Err(DiagramError::OutOfBounds(v));
                }
                let r = self.rank(v);
                if owner[r].is_some() {
                    return Err(DiagramError::Degree(v));
                }
                owner[r] = Some(i);
            }
            if !is_source(e.src, self.polarity(e.src)) || is_source(e.tgt, self.polarity(e.tgt)) {
                return Err(DiagramError::Orientation(e.clone()));
            }
        }
        if self.mode == Planarity::Planar {
            let mut stack: Vec<usize> = Vec::new();
            let mut seen = vec![false; self.edges.len()];
            for slot in owner.iter() {
                let Some(i) = *slot else { continue };
                if !seen[i] {
                    seen[i] = true;
                    stack.push(i);
                } else {
                    let top = stack.pop().expect("closing edge was opened");
                    if top != i {
                        return Err(DiagramError::Crossing(
                            self.edges[top].clone(),
                            self.edges[i].clone(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Pairs of vertices wired with empty labels, oriented by polarity.
    fn wiring(
        dom: PolarityWord,
        cod: PolarityWord,
        pairs: impl IntoIterator<Item = (Vertex, Vertex)>,
        mode: Planarity,
    ) -> Diagram {
        let mut d = Diagram {
            dom,
            cod,
            edges: Vec::new(),
            mode,
        };
        let edges = pairs
            .into_iter()
            .map(|(u, v)| {
                if is_source(u, d.polarity(u)) {
                    Edge::new(u, v, "")
                } else {
                    Edge::new(v, u, "")
                }
            })
            .collect();
        d.edges = edges;
        d.edges.sort();
        debug_assert_eq!(d.validate(), Ok(()));
        d
    }

    pub fn identity(a: &PolarityWord) -> Diagram {
        Diagram::identity_in(a, Planarity::Planar)
    }

    pub fn identity_in(a: &PolarityWord, mode: Planarity) -> Diagram {
        Diagram::wiring(
            a.clone(),
            a.clone(),
            (1..=a.len()).map(|k| (Vertex::input(k), Vertex::output(k))),
            mode,
        )
    }

    /// The edgeless diagram `A -> B`, least in its hom-set.
    pub fn bottom(a: &PolarityWord, b: &PolarityWord) -> Diagram {
        Diagram::from_parts(a.clone(), b.clone(), Vec::new(), Planarity::Planar)
    }

    pub fn bottom_in(a: &PolarityWord, b: &PolarityWord, mode: Planarity) -> Diagram {
        Diagram::from_parts(a.clone(), b.clone(), Vec::new(), mode)
    }

    /// `η_A : 1 -> A ⊗ A*`.
    pub fn cup(a: &PolarityWord) -> Diagram {
        let n = a.len();
        Diagram::wiring(
            PolarityWord::unit(),
            a.tensor(&a.dual()),
            (1..=n).map(|i| (Vertex::output(i), Vertex::output(2 * n + 1 - i))),
            Planarity::Planar,
        )
    }

    /// `ε_A : A* ⊗ A -> 1`.
    pub fn cap(a: &PolarityWord) -> Diagram {
        let n = a.len();
        Diagram::wiring(
            a.dual().tensor(a),
            PolarityWord::unit(),
            (1..=n).map(|i| (Vertex::input(i), Vertex::input(2 * n + 1 - i))),
            Planarity::Planar,
        )
    }

    /// `γ_{A,B} : A ⊗ B -> B ⊗ A`, symmetric mode only.
    pub fn symmetry(a: &PolarityWord, b: &PolarityWord) -> Diagram {
        let (na, nb) = (a.len(), b.len());
        let pairs = (1..=na)
            .map(|i| (Vertex::input(i), Vertex::output(nb + i)))
            .chain((1..=nb).map(|j| (Vertex::input(na + j), Vertex::output(j))));
        Diagram::wiring(a.tensor(b), b.tensor(a), pairs, Planarity::Symmetric)
    }

    /// Rewires `blocks[0] ⊗ … ⊗ blocks[k-1]` so that output block `i` is
    /// input block `order[i]`. `order` must be a permutation.
    pub fn permutation(blocks: &[PolarityWord], order: &[usize]) -> Diagram {
        assert_eq!(blocks.len(), order.len(), "permutation arity");
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut acc = 0;
        for b in blocks {
            offsets.push(acc);
            acc += b.len();
        }
        let dom = blocks.iter().fold(PolarityWord::unit(), |w, b| w.tensor(b));
        let cod = order
            .iter()
            .fold(PolarityWord::unit(), |w, &i| w.tensor(&blocks[i]));
        let mut pairs = Vec::with_capacity(acc);
        let mut out = 0;
        for &i in order {
            for k in 1..=blocks[i].len() {
                pairs.push((Vertex::input(offsets[i] + k), Vertex::output(out + k)));
            }
            out += blocks[i].len();
        }
        let identity = order.iter().enumerate().all(|(i, &j)| i == j);
        let mode = if identity {
            Planarity::Planar
        } else {
            Planarity::Symmetric
        };
        Diagram::wiring(dom, cod, pairs, mode)
    }

    /// `self ; g`: first `self`, then `g`.
    pub fn compose(&self, g: &Diagram) -> Result<Diagram, DiagramError> {
        if self.cod != g.dom {
            return Err(DiagramError::BoundaryMismatch {
                left: self.cod.clone(),
                right: g.dom.clone(),
            });
        }
        let f = self;
        let incident = |d: &Diagram| {
            let mut ins = vec![usize::MAX; d.dom.len() + 1];
            let mut outs = vec![usize::MAX; d.cod.len() + 1];
            for (i, e) in d.edges.iter().enumerate() {
                for v in [e.src, e.tgt] {
                    match v.side {
                        Side::In => ins[v.pos] = i,
                        Side::Out => outs[v.pos] = i,
                    }
                }
            }
            (ins, outs)
        };
        let (_, f_out) = incident(f);
        let (g_in, _) = incident(g);

        let mut edges = Vec::new();
        let budget = f.edges.len() + g.edges.len();
        let starts = f
            .edges
            .iter()
            .filter(|e| e.src.side == Side::In)
            .map(|e| (true, e))
            .chain(
                g.edges
                    .iter()
                    .filter(|e| e.src.side == Side::Out)
                    .map(|e| (false, e)),
            );
        'chains: for (in_f, first) in starts {
            let mut label = String::new();
            let mut in_f = in_f;
            let mut e = first;
            for _ in 0..=budget {
                label.push_str(&e.label);
                match (in_f, e.tgt.side) {
                    (true, Side::In) | (false, Side::Out) => {
                        edges.push(Edge::new(first.src, e.tgt, label));
                        continue 'chains;
                    }
                    (true, Side::Out) => {
                        let next = g_in[e.tgt.pos];
                        if next == usize::MAX {
                            continue 'chains;
                        }
                        e = &g.edges[next];
                        in_f = false;
                    }
                    (false, Side::In) => {
                        let next = f_out[e.tgt.pos];
                        if next == usize::MAX {
                            continue 'chains;
                        }
                        e = &f.edges[next];
                        in_f = true;
                    }
                }
            }
            unreachable!("chain longer than the edge count: invalid operand");
        }
        Ok(Diagram::from_parts(
            f.dom.clone(),
            g.cod.clone(),
            edges,
            f.mode.join(g.mode),
        ))
    }

    /// Composes a non-empty sequence left to right.
    pub fn compose_all<'a>(
        ds: impl IntoIterator<Item = &'a Diagram>,
    ) -> Result<Diagram, DiagramError> {
        let mut it = ds.into_iter();
        let first = it
            .next()
            .expect("compose_all needs at least one diagram")
            .clone();
        it.try_fold(first, |acc, d| acc.compose(d))
    }

    /// `self ⊗ h`, with `h` placed after `self` on both boundaries.
    pub fn tensor(&self, h: &Diagram) -> Diagram {
        let (di, do_) = (self.dom.len(), self.cod.len());
        let shift = |v: Vertex| match v.side {
            Side::In => Vertex::input(v.pos + di),
            Side::Out => Vertex::output(v.pos + do_),
        };
        let mut edges = self.edges.clone();
        edges.extend(
            h.edges
                .iter()
                .map(|e| Edge::new(shift(e.src), shift(e.tgt), e.label.clone())),
        );
        Diagram::from_parts(
            self.dom.tensor(&h.dom),
            self.cod.tensor(&h.cod),
            edges,
            self.mode.join(h.mode),
        )
    }

    /// `Λ(f) = (id_A ⊗ η_B) ; (f ⊗ id_{B*})` where `dom(self) = A ⊗ B` and
    /// `|A| = split`.
    pub fn curry(&self, split: usize) -> Result<Diagram, DiagramError> {
        if split > self.dom.len() {
            return Err(DiagramError::Split {
                at: split,
                len: self.dom.len(),
            });
        }
        let a = self.dom.slice(0, split);
        let b = self.dom.slice(split, self.dom.len());
        let left = Diagram::identity_in(&a, self.mode).tensor(&Diagram::cup(&b));
        let right = self.tensor(&Diagram::identity_in(&b.dual(), self.mode));
        left.compose(&right)
    }

    /// `Λ⁻¹(g) = (g ⊗ id_B) ; (id_C ⊗ ε_B)` where `cod(self) = C ⊗ B*` and
    /// `|C| = split`.
    pub fn uncurry(&self, split: usize) -> Result<Diagram, DiagramError> {
        if split > self.cod.len() {
            return Err(DiagramError::Split {
                at: split,
                len: self.cod.len(),
            });
        }
        let c = self.cod.slice(0, split);
        let b = self.cod.slice(split, self.cod.len()).dual();
        let left = self.tensor(&Diagram::identity_in(&b, self.mode));
        let right = Diagram::identity_in(&c, self.mode).tensor(&Diagram::cap(&b));
        left.compose(&right)
    }

    /// Edge inclusion with equal labels.
    pub fn leq(&self, other: &Diagram) -> Result<bool, DiagramError> {
        if self.dom != other.dom {
            return Err(DiagramError::BoundaryMismatch {
                left: self.dom.clone(),
                right: other.dom.clone(),
            });
        }
        if self.cod != other.cod {
            return Err(DiagramError::BoundaryMismatch {
                left: self.cod.clone(),
                right: other.cod.clone(),
            });
        }
        Ok(self
            .edges
            .iter()
            .all(|e| other.edges.binary_search(e).is_ok()))
    }

    /// The same diagram with the given edges removed.
    pub fn without_edges(&self, drop: impl Fn(usize, &Edge) -> bool) -> Diagram {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, e)| !drop(*i, e))
            .map(|(_, e)| e.clone())
            .collect();
        Diagram {
            edges,
            ..self.clone()
        }
    }

    /// The label of the edge between two vertices, if any.
    pub fn label_between(&self, src: Vertex, tgt: Vertex) -> Option<&str> {
        self.edges
            .iter()
            .find(|e| e.src == src && e.tgt == tgt)
            .map(|e| e.label.as_str())
    }

    /// Total label length plus edge count.
    pub fn size(&self) -> usize {
        self.edges.iter().map(|e| 1 + e.label.len()).sum()
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.dom, self.cod)?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, " {e}")?;
        }
        write!(f, " }}")
    }
}

pub fn identity(a: &PolarityWord) -> Diagram {
    Diagram::identity(a)
}

pub fn bottom(a: &PolarityWord, b: &PolarityWord) -> Diagram {
    Diagram::bottom(a, b)
}

pub fn compose(f: &Diagram, g: &Diagram) -> Result<Diagram, DiagramError> {
    f.compose(g)
}

pub fn tensor(f: &Diagram, h: &Diagram) -> Diagram {
    f.tensor(h)
}

pub fn cup(a: &PolarityWord) -> Diagram {
    Diagram::cup(a)
}

pub fn cap(a: &PolarityWord) -> Diagram {
    Diagram::cap(a)
}

pub fn curry(f: &Diagram, split: usize) -> Result<Diagram, DiagramError> {
    f.curry(split)
}

pub fn uncurry(g: &Diagram, split: usize) -> Result<Diagram, DiagramError> {
    g.uncurry(split)
}

/// `γ_{A,B}`; refused in planar mode unless one side is the unit.
pub fn symmetry(
    a: &PolarityWord,
    b: &PolarityWord,
    mode: Planarity,
) -> Result<Diagram, DiagramError> {
    match mode {
        Planarity::Symmetric => Ok(Diagram::symmetry(a, b)),
        Planarity::Planar if a.is_empty() || b.is_empty() => Ok(Diagram::identity(&a.tensor(b))),
        Planarity::Planar => Err(DiagramError::PlanarSymmetry),
    }
}

pub fn leq(d: &Diagram, e: &Diagram) -> Result<bool, DiagramError> {
    d.leq(e)
}
