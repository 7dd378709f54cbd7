//! JSON and DOT renderings of diagrams.

use serde::{Deserialize, Serialize};

use super::{Diagram, DiagramError, Edge, Planarity, PolarityWord, Side, Vertex};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub src: (String, usize),
    pub tgt: (String, usize),
    pub label: String,
}

/// Wire format: `{"mode","alphabet","dom","cod","edges"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub mode: String,
    pub alphabet: String,
    pub dom: String,
    pub cod: String,
    pub edges: Vec<EdgeJson>,
}

fn vertex_json(v: Vertex) -> (String, usize) {
    let side = match v.side {
        Side::In => "in",
        Side::Out => "out",
    };
    (side.to_string(), v.pos)
}

fn vertex_from_json((side, pos): &(String, usize)) -> Result<Vertex, DiagramError> {
    match side.as_str() {
        "in" => Ok(Vertex::input(*pos)),
        "out" => Ok(Vertex::output(*pos)),
        other => Err(DiagramError::Format(format!("unknown side '{other}'"))),
    }
}

fn polarity_json(w: &PolarityWord) -> String {
    if w.is_empty() {
        String::new()
    } else {
        w.to_string()
    }
}

pub fn diagram_to_json(d: &Diagram, alphabet: &str) -> DiagramJson {
    DiagramJson {
        mode: d.mode().to_string(),
        alphabet: alphabet.to_string(),
        dom: polarity_json(d.dom()),
        cod: polarity_json(d.cod()),
        edges: d
            .edges()
            .iter()
            .map(|e| EdgeJson {
                src: vertex_json(e.src),
                tgt: vertex_json(e.tgt),
                label: e.label.clone(),
            })
            .collect(),
    }
}

/// Parses and validates, returning the diagram and its alphabet.
pub fn diagram_from_json(j: &DiagramJson) -> Result<(Diagram, String), DiagramError> {
    let mode: Planarity = j.mode.parse()?;
    let edges = j
        .edges
        .iter()
        .map(|e| {
            if e.label.chars().any(|c| !j.alphabet.contains(c)) {
                return Err(DiagramError::Label {
                    label: e.label.clone(),
                    alphabet: j.alphabet.clone(),
                });
            }
            Ok(Edge::new(
                vertex_from_json(&e.src)?,
                vertex_from_json(&e.tgt)?,
                e.label.clone(),
            ))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let d = Diagram::new(j.dom.parse()?, j.cod.parse()?, edges, mode)?;
    Ok((d, j.alphabet.clone()))
}

/// Graphviz rendering: inputs on the left, outputs on the right.
pub fn to_dot(d: &Diagram, name: &str) -> String {
    let mut s =
        format!("digraph \"{name}\" {{\n  rankdir=LR;\n  node [shape=circle, fontsize=10];\n");
    let row = |side: &str, w: &PolarityWord, s: &mut String| {
        s.push_str(&format!(
            "  subgraph cluster_{side} {{\n    label=\"{side}\";\n    style=dashed;\n"
        ));
        for (i, p) in w.polarities().iter().enumerate() {
            s.push_str(&format!(
                "    {side}{} [label=\"{}\"];\n",
                i + 1,
                p.symbol()
            ));
        }
        for i in 1..w.len() {
            s.push_str(&format!(
                "    {side}{i} -> {side}{} [style=invis];\n",
                i + 1
            ));
        }
        s.push_str("  }\n");
    };
    row("in", d.dom(), &mut s);
    row("out", d.cod(), &mut s);
    for e in d.edges() {
        s.push_str(&format!("  {} -> {}", e.src, e.tgt));
        if !e.label.is_empty() {
            s.push_str(&format!(" [label=\"{}\"]", e.label));
        }
        s.push_str(";\n");
    }
    s.push_str("}\n");
    s
}
