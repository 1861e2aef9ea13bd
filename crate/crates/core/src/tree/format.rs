//! Line-oriented text formats.
//!
//! Trees:
//!
//! ```text
//! # comment
//! edge A B 1
//! edge B C 3/2
//! point p A B 0.25      # on edge A-B, 0.25 from A
//! point q C             # at vertex C
//! vertex solo           # only needed for a one-vertex tree
//! open A                # removed end of an interior tree
//! ```
//!
//! Metric tables list the points and then every unordered pair:
//!
//! ```text
//! point x
//! point y
//! d x y 2
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;

use super::{Location, MetricTable, MetricTree, TreeBuilder, VertexId};
use crate::error::TreeError;
use crate::num::Scalar;

fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.split('#').next().unwrap_or("");
        let fields: Vec<&str> = line.split_whitespace().collect();
        (!fields.is_empty()).then_some((i + 1, fields))
    })
}

fn parse_err(line: usize, message: impl Into<String>) -> TreeError {
    TreeError::Parse { line, message: message.into() }
}

fn number<S: Scalar>(line: usize, s: &str) -> Result<S, TreeError> {
    S::parse_literal(s).map_err(|e| parse_err(line, e.to_string()))
}

pub fn parse_tree<S: Scalar>(text: &str) -> Result<MetricTree<S>, TreeError> {
    let mut b = TreeBuilder::new();
    let mut open = Vec::new();
    for (line, f) in records(text) {
        match (f[0], f.len()) {
            ("edge", 4) => {
                b.edge(f[1], f[2], number(line, f[3])?);
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
            ("open", 2) => open.push((line, f[1].to_string())),
            (kw @ ("edge" | "point" | "vertex" | "open"), n) => return Err(parse_err(line, format!("`{kw}` record has {} fields", n - 1))),
            (kw, _) => return Err(parse_err(line, format!("unknown record `{kw}`"))),
        }
    }
    let mut tree = b.build()?;
    for (line, v) in open {
        let id = tree.vertex_id(&v).ok_or_else(|| parse_err(line, format!("unknown vertex `{v}`")))?;
        if tree.degree(id) != 1 {
            return Err(parse_err(line, format!("open vertex `{v}` is not a leaf")));
        }
        tree.open_vertices.insert(id);
    }
    Ok(tree)
}

pub fn write_tree<S: Scalar>(tree: &MetricTree<S>) -> String {
    let mut out = String::new();
    let name = |v: VertexId| tree.vertex_name(v);
    if tree.edges().is_empty() {
        for v in tree.vertex_names() {
            let _ = writeln!(out, "vertex {v}");
        }
    }
    for e in tree.edges() {
        let _ = writeln!(out, "edge {} {} {}", name(e.a), name(e.b), e.length);
    }
    for p in tree.points() {
        match &p.location {
            Location::Vertex(v) => {
                let _ = writeln!(out, "point {} {}", p.name, name(*v));
            }
            Location::OnEdge { edge, offset } => {
                let e = tree.edge(*edge);
                let _ = writeln!(out, "point {} {} {} {}", p.name, name(e.a), name(e.b), offset);
            }
        }
    }
    for v in tree.open_vertices() {
        let _ = writeln!(out, "open {}", name(*v));
    }
    out
}

pub fn parse_table<S: Scalar>(text: &str) -> Result<MetricTable<S>, TreeError> {
    let mut names: Vec<String> = Vec::new();
    let mut index = HashMap::new();
    let mut entries = Vec::new();
    for (line, f) in records(text) {
        match (f[0], f.len()) {
            ("point", 2) => {
                if index.insert(f[1].to_string(), names.len()).is_some() {
                    return Err(TreeError::DuplicateName(f[1].to_string()));
                }
                names.push(f[1].to_string());
            }
            ("d", 4) => entries.push((line, f[1].to_string(), f[2].to_string(), number::<S>(line, f[3])?)),
            (kw, _) => return Err(parse_err(line, format!("unexpected record `{kw}`"))),
        }
    }
    let n = names.len();
    let mut d: Vec<Vec<Option<S>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(S::zero());
    }
    for (line, p, q, v) in entries {
        let lookup = |s: &str| index.get(s).copied().ok_or_else(|| parse_err(line, format!("unknown point `{s}`")));
        let (i, j) = (lookup(&p)?, lookup(&q)?);
        for (a, b) in [(i, j), (j, i)] {
            if let Some(old) = &d[a][b] {
                if !old.approx_eq(&v) {
                    return Err(parse_err(line, format!("conflicting values for d({p}, {q})")));
                }
            }
            d[a][b] = Some(v.clone());
        }
    }
    let mut rows = Vec::with_capacity(n);
    for (i, row) in d.into_iter().enumerate() {
        let mut out = Vec::with_capacity(n);
        for (j, v) in row.into_iter().enumerate() {
            out.push(v.ok_or_else(|| TreeError::MalformedTable(format!("missing d({}, {})", names[i], names[j])))?);
        }
        rows.push(out);
    }
    MetricTable::new(names, rows)
}

pub fn write_table<S: Scalar>(table: &MetricTable<S>) -> String {
    let mut out = String::new();
    for n in table.names() {
        let _ = writeln!(out, "point {n}");
    }
    let names = table.names();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let _ = writeln!(out, "d {} {} {}", names[i], names[j], table.get(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;

    #[test]
    fn tree_round_trip() {
        let text = "# path\nedge A B 1\nedge B C 3/2 # second\npoint p A B 0.25\npoint q C\n";
        let t: MetricTree<Rational> = parse_tree(text).unwrap();
        assert_eq!(t.distance_by_name("p", "q").unwrap(), Rational::from_ratio(9, 4));
        let again: MetricTree<Rational> = parse_tree(&write_tree(&t)).unwrap();
        assert_eq!(write_tree(&again), write_tree(&t));
    }

    #[test]
    fn open_ends_survive_round_trip() {
        let t: MetricTree<Rational> = parse_tree("edge L R 3").unwrap();
        let it = t.interior_tree().unwrap();
        let back: MetricTree<Rational> = parse_tree(&write_tree(&it)).unwrap();
        assert_eq!(back.open_vertices().len(), 2);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_tree::<Rational>("edge A B 1\nedge B C x\n").unwrap_err();
        assert!(matches!(err, TreeError::Parse { line: 2, .. }));
        let err = parse_tree::<Rational>("\nbogus 1\n").unwrap_err();
        assert!(matches!(err, TreeError::Parse { line: 2, .. }));
    }

    #[test]
    fn table_round_trip() {
        let text = "point a\npoint b\npoint c\nd a b 1\nd b c 1\nd a c 2\n";
        let t: MetricTable<Rational> = parse_table(text).unwrap();
        assert_eq!(t.distance("c", "a").unwrap(), Rational::from_ratio(2, 1));
        assert_eq!(parse_table::<Rational>(&write_table(&t)).unwrap(), t);
        assert!(parse_table::<Rational>("point a\npoint b\n").is_err());
    }
}
