//! Finite metric trees.
//!
//! A [`MetricTree`] is a finite combinatorial tree with positive edge lengths.
//! Points are either vertices or positions strictly inside an edge; both are
//! first-class [`Location`]s, and operations such as [`MetricTree::center`]
//! freely produce new edge-interior locations.

mod format;
mod reconstruct;
mod table;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

pub use format::{parse_table, parse_tree, write_table, write_tree};
pub use reconstruct::reconstruct_tree;
pub use table::{check_hyperbolic, HyperbolicityVerdict, MetricTable, Witness};

use crate::error::TreeError;
use crate::num::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

type Route<S> = ((VertexId, S), (VertexId, S), S);

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub a: VertexId,
    pub b: VertexId,
    pub length: S,
}

/// A point of a finite tree. Edge offsets are measured from `edge.a` and lie
/// strictly between 0 and the edge length.
#[derive(Clone, Debug, PartialEq)]
pub enum Location<S> {
    Vertex(VertexId),
    OnEdge { edge: EdgeId, offset: S },
}

/// A named point of the tree.
#[derive(Clone, Debug, PartialEq)]
pub struct NamedPoint<S> {
    pub name: String,
    pub location: Location<S>,
}

/// A sub-interval of one edge, traversed from `from` to `to` (offsets from `edge.a`).
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentPiece<S> {
    pub edge: EdgeId,
    pub from: S,
    pub to: S,
}

impl<S: Scalar> SegmentPiece<S> {
    pub fn length(&self) -> S {
        (self.to.clone() - self.from.clone()).abs()
    }
}

/// The geodesic arc between two points as a chain of edge pieces.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment<S> {
    pub pieces: Vec<SegmentPiece<S>>,
}

impl<S: Scalar> Segment<S> {
    pub fn length(&self) -> S {
        self.pieces.iter().fold(S::zero(), |acc, p| acc + p.length())
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }
}

/// Incremental construction of a [`MetricTree`].
#[derive(Clone, Debug)]
pub struct TreeBuilder<S> {
    vertices: Vec<String>,
    index: HashMap<String, usize>,
    edges: Vec<(usize, usize, S)>,
    points: Vec<(String, usize, usize, S)>,
    vertex_points: Vec<(String, usize)>,
}

impl<S: Scalar> Default for TreeBuilder<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> TreeBuilder<S> {
    pub fn new() -> Self {
        TreeBuilder { vertices: Vec::new(), index: HashMap::new(), edges: Vec::new(), points: Vec::new(), vertex_points: Vec::new() }
    }

    pub fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.vertices.push(name.to_string());
        self.index.insert(name.to_string(), self.vertices.len() - 1);
        self.vertices.len() - 1
    }

    pub fn edge(&mut self, a: &str, b: &str, length: S) -> &mut Self {
        let a = self.vertex(a);
        let b = self.vertex(b);
        self.edges.push((a, b, length));
        self
    }

    /// Designates a point on edge `a`-`b` at `offset` from `a`.
    pub fn point(&mut self, name: &str, a: &str, b: &str, offset: S) -> &mut Self {
        let a = self.vertex(a);
        let b = self.vertex(b);
        self.points.push((name.to_string(), a, b, offset));
        self
    }

    /// Designates a point located at vertex `v`.
    pub fn point_at(&mut self, name: &str, v: &str) -> &mut Self {
        let v = self.vertex(v);
        self.vertex_points.push((name.to_string(), v));
        self
    }

    pub fn build(&self) -> Result<MetricTree<S>, TreeError> {
        let n = self.vertices.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (i, (a, b, len)) in self.edges.iter().enumerate() {
            if a == b {
                return Err(TreeError::SelfLoop(self.vertices[*a].clone()));
            }
            if !len.is_positive() {
                return Err(TreeError::NonPositiveLength(self.vertices[*a].clone(), self.vertices[*b].clone()));
            }
            adjacency[*a].push((VertexId(*b), EdgeId(i)));
            adjacency[*b].push((VertexId(*a), EdgeId(i)));
            edges.push(Edge { a: VertexId(*a), b: VertexId(*b), length: len.clone() });
        }
        if edges.len() + 1 != n {
            return Err(TreeError::NotATree(format!("{} vertices but {} edges", n, edges.len())));
        }
        // connectivity (with |E| = |V| - 1 this also rules out cycles)
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &adjacency[v] {
                if !seen[w.0] {
                    seen[w.0] = true;
                    stack.push(w.0);
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(TreeError::NotATree(format!("vertex `{}` is disconnected", self.vertices[v])));
        }

        let vertex_index: HashMap<String, VertexId> = self.index.iter().map(|(k, &v)| (k.clone(), VertexId(v))).collect();
        let mut tree = MetricTree {
            vertex_names: self.vertices.clone(),
            vertex_index,
            edges,
            adjacency,
            points: Vec::new(),
            point_index: HashMap::new(),
            open_vertices: BTreeSet::new(),
            dist: Vec::new(),
            hop: Vec::new(),
        };
        tree.compute_paths();

        let mut located = Vec::new();
        for (name, v) in &self.vertex_points {
            located.push((name.clone(), Location::Vertex(VertexId(*v))));
        }
        for (name, a, b, offset) in &self.points {
            let (edge, from_a) = tree
                .edge_between(VertexId(*a), VertexId(*b))
                .ok_or_else(|| TreeError::NoSuchEdge(self.vertices[*a].clone(), self.vertices[*b].clone()))?;
            let len = tree.edges[edge.0].length.clone();
            if *offset < S::zero() - S::tolerance() || *offset > len.clone() + S::tolerance() {
                return Err(TreeError::OffsetOutOfRange(name.clone()));
            }
            let off = if from_a { offset.clone() } else { len - offset.clone() };
            located.push((name.clone(), tree.normalize(edge, off)));
        }
        for (name, loc) in located {
            tree.add_point(name, loc)?;
        }
        Ok(tree)
    }
}

/// Finite ℝ-tree given by a combinatorial tree with positive edge lengths.
#[derive(Clone, Debug)]
pub struct MetricTree<S> {
    vertex_names: Vec<String>,
    vertex_index: HashMap<String, VertexId>,
    edges: Vec<Edge<S>>,
    adjacency: Vec<Vec<(VertexId, EdgeId)>>,
    points: Vec<NamedPoint<S>>,
    point_index: HashMap<String, usize>,
    /// Vertices removed from the tree (the half-open ends of an interior tree).
    open_vertices: BTreeSet<VertexId>,
    dist: Vec<Vec<S>>,
    /// `hop[u][v]`: first step on the path from `u` to `v`.
    hop: Vec<Vec<Option<(VertexId, EdgeId)>>>,
}

impl<S: Scalar> MetricTree<S> {
    pub fn builder() -> TreeBuilder<S> {
        TreeBuilder::new()
    }

    fn compute_paths(&mut self) {
        let n = self.vertex_names.len();
        self.dist = vec![vec![S::zero(); n]; n];
        self.hop = vec![vec![None; n]; n];
        for root in 0..n {
            let mut stack = vec![(root, None::<usize>)];
            while let Some((v, parent)) = stack.pop() {
                for &(w, e) in &self.adjacency[v] {
                    if Some(w.0) == parent {
                        continue;
                    }
                    self.dist[root][w.0] = self.dist[root][v].clone() + self.edges[e.0].length.clone();
                    self.hop[root][w.0] = if v == root { Some((w, e)) } else { self.hop[root][v] };
                    stack.push((w.0, Some(v)));
                }
            }
        }
    }

    fn add_point(&mut self, name: String, location: Location<S>) -> Result<(), TreeError> {
        if self.point_index.contains_key(&name) {
            return Err(TreeError::DuplicateName(name));
        }
        if let Some(&v) = self.vertex_index.get(&name) {
            if location != Location::Vertex(v) {
                return Err(TreeError::DuplicateName(name));
            }
        }
        self.point_index.insert(name.clone(), self.points.len());
        self.points.push(NamedPoint { name, location });
        Ok(())
    }

    /// Returns the edge joining `a` and `b`, and whether it is stored as `a → b`.
    pub fn edge_between(&self, a: VertexId, b: VertexId) -> Option<(EdgeId, bool)> {
        self.adjacency[a.0].iter().find(|(w, _)| *w == b).map(|&(_, e)| (e, self.edges[e.0].a == a))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_names.len()
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge<S> {
        &self.edges[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertex_names[v.0]
    }

    pub fn vertex_id(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v.0].len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[(VertexId, EdgeId)] {
        &self.adjacency[v.0]
    }

    /// Designated points, in insertion order.
    pub fn points(&self) -> &[NamedPoint<S>] {
        &self.points
    }

    pub fn point_names(&self) -> Vec<&str> {
        self.points.iter().map(|p| p.name.as_str()).collect()
    }

    pub fn open_vertices(&self) -> &BTreeSet<VertexId> {
        &self.open_vertices
    }

    pub fn is_open(&self, v: VertexId) -> bool {
        self.open_vertices.contains(&v)
    }

    /// Total length of all edges.
    pub fn total_length(&self) -> S {
        self.edges.iter().fold(S::zero(), |acc, e| acc + e.length.clone())
    }

    /// Resolves a designated point or vertex name.
    pub fn locate(&self, name: &str) -> Result<Location<S>, TreeError> {
        if let Some(&i) = self.point_index.get(name) {
            return Ok(self.points[i].location.clone());
        }
        self.vertex_index.get(name).map(|&v| Location::Vertex(v)).ok_or_else(|| TreeError::UnknownPoint(name.to_string()))
    }

    /// Canonical location for `offset` along `edge` (snapping to endpoints).
    pub fn normalize(&self, edge: EdgeId, offset: S) -> Location<S> {
        let e = &self.edges[edge.0];
        if offset.approx_zero() || offset < S::zero() {
            Location::Vertex(e.a)
        } else if offset.approx_eq(&e.length) || offset > e.length {
            Location::Vertex(e.b)
        } else {
            Location::OnEdge { edge, offset }
        }
    }

    /// Point equality up to the scalar tolerance.
    pub fn same_point(&self, p: &Location<S>, q: &Location<S>) -> bool {
        match (p, q) {
            (Location::Vertex(a), Location::Vertex(b)) => a == b,
            (Location::OnEdge { edge: e, offset: o }, Location::OnEdge { edge: f, offset: r }) => e == f && o.approx_eq(r),
            _ => false,
        }
    }

    /// Human-readable label: the designated or vertex name when there is one.
    pub fn describe(&self, p: &Location<S>) -> String {
        if let Some(np) = self.points.iter().find(|np| self.same_point(&np.location, p)) {
            return np.name.clone();
        }
        match p {
            Location::Vertex(v) => self.vertex_names[v.0].clone(),
            Location::OnEdge { edge, offset } => {
                let e = &self.edges[edge.0];
                format!("{}-{}@{}", self.vertex_names[e.a.0], self.vertex_names[e.b.0], offset)
            }
        }
    }

    fn anchors(&self, p: &Location<S>) -> Vec<(VertexId, S)> {
        match p {
            Location::Vertex(v) => vec![(*v, S::zero())],
            Location::OnEdge { edge, offset } => {
                let e = &self.edges[edge.0];
                vec![(e.a, offset.clone()), (e.b, e.length.clone() - offset.clone())]
            }
        }
    }

    /// Best anchor pair: `(anchor of p, anchor of q, total length)`.
    fn route(&self, p: &Location<S>, q: &Location<S>) -> Route<S> {
        let mut best: Option<Route<S>> = None;
        for ap in self.anchors(p) {
            for aq in self.anchors(q) {
                let total = ap.1.clone() + self.dist[ap.0 .0][aq.0 .0].clone() + aq.1.clone();
                if best.as_ref().is_none_or(|b| total < b.2) {
                    best = Some((ap.clone(), aq, total));
                }
            }
        }
        best.expect("locations have at least one anchor")
    }

    /// Length of the unique arc `[p, q]`.
    pub fn distance(&self, p: &Location<S>, q: &Location<S>) -> S {
        if let (Location::OnEdge { edge: e, offset: o }, Location::OnEdge { edge: f, offset: r }) = (p, q) {
            if e == f {
                return (o.clone() - r.clone()).abs();
            }
        }
        self.route(p, q).2
    }

    pub fn distance_by_name(&self, p: &str, q: &str) -> Result<S, TreeError> {
        Ok(self.distance(&self.locate(p)?, &self.locate(q)?))
    }

    /// Gromov product `(x, z)_w`.
    pub fn gromov_product(&self, x: &Location<S>, z: &Location<S>, w: &Location<S>) -> S {
        (self.distance(w, x) + self.distance(w, z) - self.distance(x, z)).half()
    }

    fn vertex_path(&self, from: VertexId, to: VertexId) -> Vec<(VertexId, EdgeId)> {
        let mut out = Vec::new();
        let mut cur = from;
        while cur != to {
            let (next, e) = self.hop[cur.0][to.0].expect("tree is connected");
            out.push((next, e));
            cur = next;
        }
        out
    }

    /// The arc `[p, q]` as an ordered chain of edge sub-intervals.
    pub fn segment(&self, p: &Location<S>, q: &Location<S>) -> Segment<S> {
        if self.same_point(p, q) {
            return Segment { pieces: Vec::new() };
        }
        if let (Location::OnEdge { edge: e, offset: o }, Location::OnEdge { edge: f, offset: r }) = (p, q) {
            if e == f {
                return Segment { pieces: vec![SegmentPiece { edge: *e, from: o.clone(), to: r.clone() }] };
            }
        }
        let ((va, _), (vb, _), _) = self.route(p, q);
        let mut pieces = Vec::new();
        if let Location::OnEdge { edge, offset } = p {
            let e = &self.edges[edge.0];
            let end = if va == e.a { S::zero() } else { e.length.clone() };
            pieces.push(SegmentPiece { edge: *edge, from: offset.clone(), to: end });
        }
        let mut cur = va;
        for (next, edge) in self.vertex_path(va, vb) {
            let e = &self.edges[edge.0];
            let (from, to) = if e.a == cur { (S::zero(), e.length.clone()) } else { (e.length.clone(), S::zero()) };
            pieces.push(SegmentPiece { edge, from, to });
            cur = next;
        }
        if let Location::OnEdge { edge, offset } = q {
            let e = &self.edges[edge.0];
            let start = if vb == e.a { S::zero() } else { e.length.clone() };
            pieces.push(SegmentPiece { edge: *edge, from: start, to: offset.clone() });
        }
        Segment { pieces }
    }

    /// The point of `[p, q]` at distance `t` from `p` (clamped to the arc).
    pub fn point_along(&self, p: &Location<S>, q: &Location<S>, t: &S) -> Location<S> {
        if !t.is_positive() {
            return p.clone();
        }
        let mut remaining = t.clone();
        for piece in self.segment(p, q).pieces {
            let len = piece.length();
            if remaining <= len.clone() + S::tolerance() {
                let offset = if piece.to >= piece.from { piece.from.clone() + remaining } else { piece.from.clone() - remaining };
                return self.normalize(piece.edge, offset);
            }
            remaining = remaining - len;
        }
        q.clone()
    }

    pub fn midpoint(&self, p: &Location<S>, q: &Location<S>) -> Location<S> {
        self.point_along(p, q, &self.distance(p, q).half())
    }

    /// The unique median of three points.
    pub fn center(&self, p1: &Location<S>, p2: &Location<S>, p3: &Location<S>) -> Location<S> {
        let t = self.gromov_product(p2, p3, p1);
        self.point_along(p1, p2, &t)
    }

    /// Whether `center(p, q, r)` is also the center of `(w, p, q)`, decided by
    /// the Gromov-product inequality `(p, q)_w >= max((p, r)_w, (q, r)_w)`.
    pub fn center_condition(&self, w: &Location<S>, p: &Location<S>, q: &Location<S>, r: &Location<S>) -> bool {
        let pq = self.gromov_product(p, q, w);
        let pr = self.gromov_product(p, r, w);
        let qr = self.gromov_product(q, r, w);
        !pq.definitely_lt(&S::max_of(pr, qr))
    }

    /// `r ∈ [p, q]`, i.e. `r` is the center of `(p, q, r)`.
    pub fn point_on_segment(&self, r: &Location<S>, p: &Location<S>, q: &Location<S>) -> bool {
        self.same_point(&self.center(p, q, r), r)
    }

    /// Number of components of the tree with `p` removed.
    pub fn branch_count(&self, p: &Location<S>) -> usize {
        match p {
            Location::Vertex(v) => self.degree(*v),
            Location::OnEdge { .. } => 2,
        }
    }

    /// A point is extremal when removing it leaves the tree connected.
    pub fn is_extremal(&self, p: &Location<S>) -> bool {
        self.branch_count(p) <= 1
    }

    /// The tree without its extremal points. Leaves become open ends,
    /// recorded in [`MetricTree::open_vertices`]; designated points sitting on
    /// them are dropped.
    pub fn interior_tree(&self) -> Result<MetricTree<S>, TreeError> {
        if self.edges.is_empty() {
            return Err(TreeError::NoInterior);
        }
        let mut out = self.clone();
        for v in 0..self.vertex_count() {
            if self.degree(VertexId(v)) == 1 {
                out.open_vertices.insert(VertexId(v));
            }
        }
        out.points.retain(|p| !matches!(p.location, Location::Vertex(v) if out.open_vertices.contains(&v)));
        out.point_index = out.points.iter().enumerate().map(|(i, p)| (p.name.clone(), i)).collect();
        Ok(out)
    }

    /// The same shape with new edge lengths; designated points keep their
    /// fractional position along each edge.
    pub fn with_lengths(&self, lengths: &[S]) -> Result<MetricTree<S>, TreeError> {
        assert_eq!(lengths.len(), self.edges.len(), "one length per edge");
        let mut out = self.clone();
        for (i, len) in lengths.iter().enumerate() {
            if !len.is_positive() {
                let e = &self.edges[i];
                return Err(TreeError::NonPositiveLength(self.vertex_names[e.a.0].clone(), self.vertex_names[e.b.0].clone()));
            }
            out.edges[i].length = len.clone();
        }
        for p in out.points.iter_mut() {
            if let Location::OnEdge { edge, offset } = &mut p.location {
                let old = &self.edges[edge.0].length;
                *offset = offset.clone() * lengths[edge.0].clone() / old.clone();
            }
        }
        out.compute_paths();
        Ok(out)
    }

    /// Shape coordinates of a location: the vertex, or the edge and the
    /// fraction of its length measured from `edge.a`.
    pub fn shape_coordinates(&self, p: &Location<S>) -> ShapePoint<S> {
        match p {
            Location::Vertex(v) => ShapePoint::Vertex(*v),
            Location::OnEdge { edge, offset } => ShapePoint::OnEdge(*edge, offset.clone() / self.edges[edge.0].length.clone()),
        }
    }

    /// Distances between designated points (vertices when none are designated).
    pub fn metric_table(&self) -> MetricTable<S> {
        let (names, locs): (Vec<String>, Vec<Location<S>>) = if self.points.is_empty() {
            (0..self.vertex_count())
                .filter(|v| !self.is_open(VertexId(*v)))
                .map(|v| (self.vertex_names[v].clone(), Location::Vertex(VertexId(v))))
                .unzip()
        } else {
            self.points.iter().map(|p| (p.name.clone(), p.location.clone())).unzip()
        };
        let d = locs.iter().map(|p| locs.iter().map(|q| self.distance(p, q)).collect()).collect();
        MetricTable::from_parts_unchecked(names, d)
    }

    /// Vertex names, in id order.
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }
}

/// Position of a point relative to the combinatorial shape only.
#[derive(Clone, Debug, PartialEq)]
pub enum ShapePoint<S> {
    Vertex(VertexId),
    OnEdge(EdgeId, S),
}

impl<S: Scalar> fmt::Display for MetricTree<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_tree(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn path() -> MetricTree<Rational> {
        let mut b = MetricTree::builder();
        b.edge("A", "B", r(1, 1)).edge("B", "C", r(2, 1));
        b.build().unwrap()
    }

    fn star() -> MetricTree<Rational> {
        let mut b = MetricTree::builder();
        b.edge("H", "x", r(1, 1)).edge("H", "y", r(2, 1)).edge("H", "z", r(3, 1));
        b.build().unwrap()
    }

    /// Brute-force path enumeration: DFS over vertices summing edge lengths.
    fn dfs_distance(t: &MetricTree<Rational>, a: &str, b: &str) -> Rational {
        let (a, b) = (t.vertex_id(a).unwrap(), t.vertex_id(b).unwrap());
        let mut stack = vec![(a, None, r(0, 1))];
        while let Some((v, parent, acc)) = stack.pop() {
            if v == b {
                return acc;
            }
            for &(w, e) in t.neighbors(v) {
                if Some(w) != parent {
                    stack.push((w, Some(v), acc.clone() + t.edge(e).length.clone()));
                }
            }
        }
        unreachable!()
    }

    #[test]
    fn distance_examples() {
        let p = path();
        assert_eq!(p.distance_by_name("A", "C").unwrap(), r(3, 1));
        assert_eq!(p.distance_by_name("B", "B").unwrap(), r(0, 1));
        let s = star();
        assert_eq!(s.distance_by_name("x", "z").unwrap(), dfs_distance(&s, "x", "z"));
        assert_eq!(s.distance_by_name("x", "z").unwrap(), r(4, 1));
        assert!(matches!(s.distance_by_name("x", "nope"), Err(TreeError::UnknownPoint(_))));
    }

    #[test]
    fn gromov_product_examples() {
        let s = star();
        let (x, y, z) = (s.locate("x").unwrap(), s.locate("y").unwrap(), s.locate("z").unwrap());
        assert_eq!(s.gromov_product(&x, &x, &y), s.distance(&y, &x));
        assert_eq!(s.gromov_product(&x, &z, &x), r(0, 1));
        // w = leaf at leg 1 (x): (y, z)_x is the distance from x to the hub
        let brute = (r(3, 1) + r(4, 1) - r(5, 1)) / r(2, 1);
        assert_eq!(s.gromov_product(&y, &z, &x), brute);
        assert_eq!(brute, r(1, 1));
    }

    #[test]
    fn center_examples() {
        let p = path();
        let (a, b, c) = (p.locate("A").unwrap(), p.locate("B").unwrap(), p.locate("C").unwrap());
        assert_eq!(p.center(&a, &a, &c), a);
        let z = p.center(&a, &c, &b);
        assert_eq!(z, b);
        for (u, v) in [(&a, &c), (&a, &b), (&c, &b)] {
            assert_eq!(p.distance(u, v), p.distance(u, &z) + p.distance(v, &z));
        }
        let s = star();
        let h = s.locate("H").unwrap();
        let (x, y, zz) = (s.locate("x").unwrap(), s.locate("y").unwrap(), s.locate("z").unwrap());
        assert_eq!(s.center(&x, &y, &zz), h);
    }

    #[test]
    fn center_can_land_inside_an_edge() {
        let mut b = MetricTree::builder();
        b.edge("u", "v", r(4, 1)).edge("v", "w", r(1, 1));
        b.point("p", "u", "v", r(1, 1)).point("q", "u", "v", r(3, 1));
        let t = b.build().unwrap();
        let (p, q, w) = (t.locate("p").unwrap(), t.locate("q").unwrap(), t.locate("w").unwrap());
        let u = t.locate("u").unwrap();
        assert_eq!(t.center(&p, &u, &w), p);
        assert_eq!(t.center(&q, &u, &w), q);
        assert_eq!(t.distance(&p, &q), r(2, 1));
        assert_eq!(t.describe(&t.midpoint(&p, &q)), "u-v@2");
    }

    #[test]
    fn center_condition_examples() {
        let s = star();
        let mut b = MetricTree::builder();
        b.edge("H", "x", r(1, 1)).edge("H", "y", r(2, 1)).edge("H", "z", r(3, 1)).edge("H", "w", r(1, 2));
        let s4 = b.build().unwrap();
        let l = |t: &MetricTree<Rational>, n: &str| t.locate(n).unwrap();
        assert!(s.center_condition(&l(&s, "z"), &l(&s, "x"), &l(&s, "y"), &l(&s, "z")));
        let (w, x, y, z) = (l(&s4, "w"), l(&s4, "x"), l(&s4, "y"), l(&s4, "z"));
        let direct = s4.center(&x, &y, &z) == s4.center(&w, &x, &y);
        assert!(direct);
        assert_eq!(s4.center_condition(&w, &x, &y, &z), direct);
        let p = path();
        let (a, bb, c) = (l(&p, "A"), l(&p, "B"), l(&p, "C"));
        let direct = p.center(&a, &bb, &c) == p.center(&a, &a, &bb);
        assert_eq!(p.center_condition(&a, &a, &bb, &c), direct);
    }

    #[test]
    fn segment_examples() {
        let p = path();
        let (a, c) = (p.locate("A").unwrap(), p.locate("C").unwrap());
        assert!(p.segment(&a, &a).is_empty());
        let seg = p.segment(&a, &c);
        assert_eq!(seg.pieces.len(), 2);
        assert_eq!(seg.pieces[0], SegmentPiece { edge: EdgeId(0), from: r(0, 1), to: r(1, 1) });
        assert_eq!(seg.pieces[1], SegmentPiece { edge: EdgeId(1), from: r(0, 1), to: r(2, 1) });
        assert_eq!(seg.length(), p.distance(&a, &c));
        let s = star();
        let seg = s.segment(&s.locate("x").unwrap(), &s.locate("z").unwrap());
        assert_eq!(seg.pieces.len(), 2);
        assert_eq!(seg.length(), r(4, 1));
    }

    #[test]
    fn point_on_segment_examples() {
        let p = path();
        let (a, b, c) = (p.locate("A").unwrap(), p.locate("B").unwrap(), p.locate("C").unwrap());
        assert!(p.point_on_segment(&a, &a, &c));
        assert!(p.point_on_segment(&b, &a, &c));
        let s = star();
        let l = |n: &str| s.locate(n).unwrap();
        assert!(s.point_on_segment(&l("H"), &l("x"), &l("z")));
        assert!(!s.point_on_segment(&l("y"), &l("x"), &l("z")));
        // cross-check against additivity of distances
        for rr in ["H", "x", "y", "z"] {
            let add = s.distance(&l("x"), &l(rr)) + s.distance(&l(rr), &l("z")) == s.distance(&l("x"), &l("z"));
            assert_eq!(s.point_on_segment(&l(rr), &l("x"), &l("z")), add);
        }
    }

    #[test]
    fn extremal_points() {
        let p = path();
        assert!(p.is_extremal(&p.locate("A").unwrap()));
        assert!(!p.is_extremal(&p.normalize(EdgeId(1), r(1, 1))));
        let s = star();
        assert!(!s.is_extremal(&s.locate("H").unwrap()));
        assert_eq!(s.branch_count(&s.locate("H").unwrap()), 3);
    }

    #[test]
    fn interior_trees() {
        let mut b = MetricTree::builder();
        b.edge("L", "R", r(3, 1));
        let seg = b.build().unwrap();
        let int = seg.interior_tree().unwrap();
        assert_eq!(int.open_vertices().len(), 2);
        assert_eq!(int.total_length(), r(3, 1));

        let s = star().interior_tree().unwrap();
        assert!(!s.is_open(s.vertex_id("H").unwrap()));
        assert_eq!(s.open_vertices().len(), 3);

        // tripod of tripods
        let mut b = MetricTree::builder();
        b.edge("c", "h1", r(1, 1)).edge("c", "h2", r(1, 1)).edge("c", "h3", r(1, 1));
        for h in ["h1", "h2", "h3"] {
            b.edge(h, &format!("{h}a"), r(1, 1)).edge(h, &format!("{h}b"), r(1, 1));
        }
        let t = b.build().unwrap();
        let it = t.interior_tree().unwrap();
        for v in 0..t.vertex_count() {
            let v = VertexId(v);
            assert_eq!(it.is_open(v), t.is_extremal(&Location::Vertex(v)));
        }
        assert_eq!(it.open_vertices().len(), 6);

        let mut b = MetricTree::<Rational>::builder();
        b.vertex("solo");
        assert_eq!(b.build().unwrap().interior_tree().unwrap_err(), TreeError::NoInterior);
    }

    #[test]
    fn builder_rejects_bad_input() {
        let mut b = MetricTree::builder();
        b.edge("a", "b", r(0, 1));
        assert!(matches!(b.build(), Err(TreeError::NonPositiveLength(..))));
        let mut b = MetricTree::builder();
        b.edge("a", "b", r(1, 1)).edge("b", "c", r(1, 1)).edge("c", "a", r(1, 1));
        assert!(matches!(b.build(), Err(TreeError::NotATree(_))));
        let mut b = MetricTree::builder();
        b.edge("a", "b", r(1, 1)).edge("c", "d", r(1, 1));
        assert!(matches!(b.build(), Err(TreeError::NotATree(_))));
        let mut b = MetricTree::builder();
        b.edge("a", "b", r(1, 1)).point("p", "a", "b", r(2, 1));
        assert!(matches!(b.build(), Err(TreeError::OffsetOutOfRange(_))));
        let mut b = MetricTree::builder();
        b.edge("a", "b", r(1, 1)).point("p", "b", "a", r(1, 4));
        let t = b.build().unwrap();
        assert_eq!(t.distance_by_name("a", "p").unwrap(), r(3, 4));
    }

    #[test]
    fn float_mode_tolerates_rounding() {
        let mut b = MetricTree::<f64>::builder();
        b.edge("a", "b", 0.1).edge("b", "c", 0.2);
        let t = b.build().unwrap();
        let (a, bb, c) = (t.locate("a").unwrap(), t.locate("b").unwrap(), t.locate("c").unwrap());
        let z = t.center(&a, &c, &bb);
        assert!(t.same_point(&z, &bb));
        assert!((t.distance(&a, &c) - 0.3).abs() < 1e-12);
    }
}
