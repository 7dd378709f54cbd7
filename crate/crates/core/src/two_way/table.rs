//! Transition tables in the `(+, +)` convention.
//!
//! ```text
//! states: q0+ q1+ q2+ q3- q4+
//! input: 012            # optional, default: letters of the rows
//! output: 012           # optional, default: input plus output letters
//! mode: planar          # optional
//! q0 > q1 eps
//! q1 2 q3 eps
//! ```
//!
//! `>` is ▷, `<` is ◁ and `eps` the empty output.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use super::{Convention, TwoWayError, TwoWayTransducer};
use crate::diagram::{Diagram, DiagramError, Edge, Planarity, Polarity, PolarityWord, Vertex};
use crate::lambda::Signature;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TableSymbol {
    Start,
    End,
    Letter(char),
}

impl fmt::Display for TableSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableSymbol::Start => write!(f, ">"),
            TableSymbol::End => write!(f, "<"),
            TableSymbol::Letter(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub state: String,
    pub symbol: TableSymbol,
    pub target: String,
    pub output: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionTable {
    /// Listed order; `Plus` marks a forward state.
    pub states: Vec<(String, Polarity)>,
    pub input: Vec<char>,
    pub output: Signature,
    pub mode: Planarity,
    pub rows: Vec<TableRow>,
}

fn table_err(line: usize, msg: impl Into<String>) -> TwoWayError {
    TwoWayError::Table {
        line,
        msg: msg.into(),
    }
}

fn single_char(s: &str) -> Option<char> {
    let mut chars = s.chars();
    match (chars.next(), chars.next()) {
        (Some(c), None) => Some(c),
        _ => None,
    }
}

pub fn parse_table(text: &str) -> Result<TransitionTable, TwoWayError> {
    let mut states: Option<Vec<(String, Polarity)>> = None;
    let mut input: Option<Vec<char>> = None;
    let mut output: Option<Vec<char>> = None;
    let mut mode = Planarity::Planar;
    let mut rows = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = content.split_once(':') {
            let value = value.trim();
            match key.trim() {
                "states" => {
                    let mut list = Vec::new();
                    for tok in value.split_whitespace() {
                        let (name, mark) =
                            tok.split_at(tok.len() - tok.chars().last().map_or(0, char::len_utf8));
                        let polarity = match mark {
                            "+" => Polarity::Plus,
                            "-" | "−" => Polarity::Minus,
                            _ => {
                                return Err(table_err(
                                    line,
                                    format!("state '{tok}' needs a + or - mark"),
                                ))
                            }
                        };
                        if name.is_empty() || list.iter().any(|(n, _)| n == name) {
                            return Err(table_err(line, format!("bad or repeated state '{tok}'")));
                        }
                        list.push((name.to_string(), polarity));
                    }
                    states = Some(list);
                }
                "input" => input = Some(value.chars().filter(|c| !c.is_whitespace()).collect()),
                "output" => output = Some(value.chars().filter(|c| !c.is_whitespace()).collect()),
                "mode" => {
                    mode = value
                        .parse()
                        .map_err(|e: DiagramError| table_err(line, e.to_string()))?
                }
                other => return Err(table_err(line, format!("unknown header '{other}'"))),
            }
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let [state, symbol, target, out] = toks[..] else {
            return Err(table_err(line, "expected 'state symbol target output'"));
        };
        let symbol = match symbol {
            ">" | "▷" => TableSymbol::Start,
            "<" | "◁" => TableSymbol::End,
            s => TableSymbol::Letter(
                single_char(s).ok_or_else(|| table_err(line, format!("'{s}' is not a letter")))?,
            ),
        };
        let output_word = if out == "eps" || out == "ε" {
            String::new()
        } else {
            out.to_string()
        };
        rows.push(TableRow {
            state: state.into(),
            symbol,
            target: target.into(),
            output: output_word,
            line,
        });
    }
    let states = states.ok_or_else(|| table_err(0, "missing 'states:' line"))?;
    let input = input.unwrap_or_else(|| {
        let mut letters = Vec::new();
        for r in &rows {
            if let TableSymbol::Letter(c) = r.symbol {
                if !letters.contains(&c) {
                    letters.push(c);
                }
            }
        }
        letters
    });
    let output = match output {
        Some(o) => o,
        None => {
            let mut o = input.clone();
            for c in rows.iter().flat_map(|r| r.output.chars()) {
                if !o.contains(&c) {
                    o.push(c);
                }
            }
            o
        }
    };
    Ok(TransitionTable {
        states,
        input,
        output: Signature::new(output)?,
        mode,
        rows,
    })
}

/// Builds the `(+, +)` transducer read off the table: every listed state
/// is a vertex of the state object, forward states positive.
pub fn from_table(tbl: &TransitionTable) -> Result<TwoWayTransducer, TwoWayError> {
    let index: HashMap<&str, (usize, Polarity)> = tbl
        .states
        .iter()
        .enumerate()
        .map(|(i, (n, p))| (n.as_str(), (i + 1, *p)))
        .collect();
    let states = PolarityWord::new(tbl.states.iter().map(|(_, p)| *p).collect());
    let plus = PolarityWord::new(vec![Polarity::Plus]);
    let mut edges: BTreeMap<TableSymbol, Vec<(Edge, usize)>> = BTreeMap::new();
    for row in &tbl.rows {
        let lookup = |q: &str| {
            index
                .get(q)
                .copied()
                .ok_or_else(|| table_err(row.line, format!("unknown state '{q}'")))
        };
        let (qp, qpol) = lookup(&row.state)?;
        let (tp, tpol) = lookup(&row.target)?;
        let forward = |p| p == Polarity::Plus;
        let src = match (row.symbol, forward(qpol)) {
            (TableSymbol::Start, true) => Vertex::input(1),
            (TableSymbol::End, false) => {
                return Err(table_err(
                    row.line,
                    format!("backward state '{}' cannot read <", row.state),
                ))
            }
            (_, true) => Vertex::input(qp),
            (_, false) => Vertex::output(qp),
        };
        let tgt = match (row.symbol, forward(tpol)) {
            (TableSymbol::End, true) => Vertex::output(1),
            (TableSymbol::Start, false) => {
                return Err(table_err(
                    row.line,
                    format!("row moves left of > into '{}'", row.target),
                ))
            }
            (_, true) => Vertex::output(tp),
            (_, false) => Vertex::input(tp),
        };
        if let TableSymbol::Letter(c) = row.symbol {
            if !tbl.input.contains(&c) {
                return Err(table_err(
                    row.line,
                    format!("letter '{c}' is not in the input alphabet"),
                ));
            }
        }
        if let Some(c) = row.output.chars().find(|c| !tbl.output.contains(*c)) {
            return Err(table_err(
                row.line,
                format!("output letter '{c}' is not in the output alphabet"),
            ));
        }
        let bucket = edges.entry(row.symbol).or_default();
        for (other, line) in bucket.iter() {
            if other.src == src || other.tgt == tgt {
                return Err(TwoWayError::ConflictingRows {
                    symbol: row.symbol.to_string(),
                    first: *line,
                    second: row.line,
                });
            }
        }
        bucket.push((Edge::new(src, tgt, row.output.clone()), row.line));
    }
    let mut build = |symbol: TableSymbol, dom: &PolarityWord, cod: &PolarityWord| {
        let rows = edges.remove(&symbol).unwrap_or_default();
        let lines: Vec<String> = rows.iter().map(|(_, l)| l.to_string()).collect();
        Diagram::new(
            dom.clone(),
            cod.clone(),
            rows.into_iter().map(|(e, _)| e).collect(),
            tbl.mode,
        )
        .map_err(|e| {
            table_err(
                lines.first().and_then(|l| l.parse().ok()).unwrap_or(0),
                format!(
                    "rows for {symbol} at lines {} are invalid: {e}",
                    lines.join(", ")
                ),
            )
        })
    };
    let init = build(TableSymbol::Start, &plus, &states)?;
    let final_ = build(TableSymbol::End, &states, &plus)?;
    let mut steps = BTreeMap::new();
    for &a in &tbl.input {
        steps.insert(a, build(TableSymbol::Letter(a), &states, &states)?);
    }
    TwoWayTransducer::new(
        tbl.input.clone(),
        tbl.output.clone(),
        Convention::Pp,
        states,
        init,
        steps,
        final_,
        tbl.mode,
    )
}
