//! Random generation of valid diagrams, for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{is_source, Diagram, Edge, Planarity, Polarity, PolarityWord, Side, Vertex};

pub fn random_polarity_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> PolarityWord {
    let len = rng.gen_range(0..=max_len);
    PolarityWord::new(
        (0..len)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    Polarity::Plus
                } else {
                    Polarity::Minus
                }
            })
            .collect(),
    )
}

pub fn random_label<R: Rng + ?Sized>(rng: &mut R, alphabet: &[char], max_len: usize) -> String {
    if alphabet.is_empty() {
        return String::new();
    }
    let len = rng.gen_range(0..=max_len);
    (0..len)
        .map(|_| *alphabet.choose(rng).expect("non-empty"))
        .collect()
}

/// A random valid diagram `dom -> cod`. `density` is the probability of
/// trying to attach an edge at each vertex.
pub fn random_diagram<R: Rng + ?Sized>(
    rng: &mut R,
    dom: &PolarityWord,
    cod: &PolarityWord,
    mode: Planarity,
    alphabet: &[char],
    max_label: usize,
    density: f64,
) -> Diagram {
    let polarity = |v: Vertex| match v.side {
        Side::In => dom.at(v.pos),
        Side::Out => cod.at(v.pos),
    };
    // Boundary order: in_n … in_1, out_1 … out_m.
    let order: Vec<Vertex> = (1..=dom.len())
        .rev()
        .map(Vertex::input)
        .chain((1..=cod.len()).map(Vertex::output))
        .collect();
    let mut edges = Vec::new();
    let mut connect = |u: Vertex, v: Vertex, rng: &mut R| {
        let label = random_label(rng, alphabet, max_label);
        if is_source(u, polarity(u)) {
            edges.push(Edge::new(u, v, label));
        } else {
            edges.push(Edge::new(v, u, label));
        }
    };
    match mode {
        Planarity::Planar => {
            let mut open: Vec<Vertex> = Vec::new();
            for v in order {
                if !rng.gen_bool(density) {
                    continue;
                }
                while let Some(&top) = open.last() {
                    if is_source(top, polarity(top)) != is_source(v, polarity(v)) {
                        break;
                    }
                    if rng.gen_bool(0.5) {
                        open.pop();
                    } else {
                        break;
                    }
                }
                match open.last() {
                    Some(&top)
                        if is_source(top, polarity(top)) != is_source(v, polarity(v))
                            && rng.gen_bool(0.7) =>
                    {
                        open.pop();
                        connect(top, v, rng);
                    }
                    _ => open.push(v),
                }
            }
        }
        Planarity::Symmetric => {
            let mut sources: Vec<Vertex> = order
                .iter()
                .copied()
                .filter(|&v| is_source(v, polarity(v)))
                .collect();
            let mut targets: Vec<Vertex> = order
                .iter()
                .copied()
                .filter(|&v| !is_source(v, polarity(v)))
                .collect();
            sources.shuffle(rng);
            targets.shuffle(rng);
            for (s, t) in sources.into_iter().zip(targets) {
                if rng.gen_bool(density) {
                    connect(s, t, rng);
                }
            }
        }
    }
    Diagram::new(dom.clone(), cod.clone(), edges, mode).expect("generator produces valid diagrams")
}
