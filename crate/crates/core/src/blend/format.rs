use std::fmt::Write;

use super::{CompatibleMetricPair, LengthFunction};
use crate::boundary::ReducedWord;
use crate::error::{BlendError, TreeError};
use crate::num::Scalar;
use crate::tree::{Location, TreeBuilder};

fn parse_err(line: usize, message: String) -> BlendError {
    BlendError::Tree(TreeError::Parse { line, message })
}

fn number<S: Scalar>(line: usize, s: &str) -> Result<S, BlendError> {
    S::parse_literal(s).map_err(|e| parse_err(line, e.to_string()))
}

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let f: Vec<&str> = l.split('#').next().unwrap_or("").split_whitespace().collect();
        (!f.is_empty()).then_some((i + 1, f))
    })
}

/// Parses a pair file: `edge a b len0 len1` records, plus `point`, and
/// `vertex` records as in tree files. Point offsets refer to the first
/// metric.
pub fn parse_pair<S: Scalar>(text: &str) -> Result<CompatibleMetricPair<S>, BlendError> {
    let mut b = TreeBuilder::new();
    let mut d1 = Vec::new();
    for (line, f) in records(text) {
        match (f[0], f.len()) {
            ("edge", 5) => {
                b.edge(f[1], f[2], number(line, f[3])?);
                d1.push(number(line, f[4])?);
            }
            ("point", 5) => {
                b.point(f[1], f[2], f[3], number(line, f[4])?);
            }
            ("point", 3) => {
                b.point_at(f[1], f[2]);
            }
            ("vertex", 2) => {
                b.vertex(f[1]);
            }
            (kw @ ("edge" | "point" | "vertex"), n) => return Err(parse_err(line, format!("`{kw}` record has {} fields", n - 1))),
            (kw, _) => return Err(parse_err(line, format!("unknown record `{kw}`"))),
        }
    }
    CompatibleMetricPair::new(b.build()?, d1)
}

pub fn write_pair<S: Scalar>(pair: &CompatibleMetricPair<S>) -> String {
    let t = pair.tree0();
    let mut out = String::new();
    for (e, l1) in t.edges().iter().zip(pair.d1()) {
        let _ = writeln!(out, "edge {} {} {} {}", t.vertex_name(e.a), t.vertex_name(e.b), e.length, l1);
    }
    for p in t.points() {
        let _ = match &p.location {
            Location::Vertex(v) => writeln!(out, "point {} {}", p.name, t.vertex_name(*v)),
            Location::OnEdge { edge, offset } => {
                let e = t.edge(*edge);
                writeln!(out, "point {} {} {} {}", p.name, t.vertex_name(e.a), t.vertex_name(e.b), offset)
            }
        };
    }
    out
}

/// Parses `word value` lines into a table length function.
pub fn parse_length_table<S: Scalar>(text: &str) -> Result<LengthFunction<S>, BlendError> {
    let mut entries = Vec::new();
    for (line, f) in records(text) {
        let [w, v] = f.as_slice() else {
            return Err(parse_err(line, "expected `word value`".into()));
        };
        let word = ReducedWord::parse(w).map_err(|e| parse_err(line, e.to_string()))?;
        entries.push((word, number(line, v)?));
    }
    Ok(LengthFunction::from_table(entries))
}
