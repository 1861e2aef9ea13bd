//! Directions, the observers' topology and inferior limits.
//!
//! Everything here talks to a tree through [`TreeOracle`], so the same code
//! runs on finite [`MetricTree`]s, on the real line with its two ends and on
//! multipods with finitely or countably many arms.
//!
//! Infinite sequences are only ever probed to a finite depth. For a sequence
//! truncated to `n` terms, "eventually" means "for every index from
//! `h = ⌈n/2⌉` on", and the inferior limit is reported as the endpoint `R_h`
//! of `⋂_{h ≤ k ≤ n} [Q, P_k]`.

mod oracles;

use std::fmt;

pub use oracles::{LinePoint, Multipod, PodPoint, RealLine};

use crate::error::ObserverError;
use crate::num::{Dist, Scalar};
use crate::tree::{Location, MetricTree};

/// Query interface for (possibly infinite) ℝ-trees and their ends.
pub trait TreeOracle: Send + Sync {
    type S: Scalar;
    type Point: Clone + fmt::Debug + PartialEq + Send + Sync;

    /// Distance; infinite whenever a boundary point is involved.
    fn distance(&self, p: &Self::Point, q: &Self::Point) -> Dist<Self::S>;
    /// The median of three points.
    fn center(&self, p: &Self::Point, q: &Self::Point, r: &Self::Point) -> Self::Point;
    fn is_boundary(&self, _p: &Self::Point) -> bool {
        false
    }
    fn same_point(&self, p: &Self::Point, q: &Self::Point) -> bool {
        p == q
    }
    /// The point halfway between two points at finite distance.
    fn midpoint(&self, p: &Self::Point, q: &Self::Point) -> Option<Self::Point>;
    /// The `i`-th point of a fixed countable dense sample.
    fn sample_point(&self, i: usize) -> Self::Point;
    fn describe(&self, p: &Self::Point) -> String;
}

/// The component of `T̂ ∖ {base}` containing `representative`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction<P> {
    pub base: P,
    pub representative: P,
}

pub fn direction_of<O: TreeOracle>(oracle: &O, p: &O::Point, q: &O::Point) -> Result<Direction<O::Point>, ObserverError> {
    if oracle.same_point(p, q) {
        return Err(ObserverError::DegenerateDirection);
    }
    Ok(Direction { base: p.clone(), representative: q.clone() })
}

/// `r ∈ dir_P(Q)` iff `center(P, Q, r) ≠ P`.
pub fn in_direction<O: TreeOracle>(oracle: &O, d: &Direction<O::Point>, r: &O::Point) -> Result<bool, ObserverError> {
    if oracle.same_point(r, &d.base) {
        return Err(ObserverError::PointIsBase);
    }
    Ok(contains(oracle, d, r))
}

/// Like [`in_direction`], with the base itself counted as outside.
fn contains<O: TreeOracle>(oracle: &O, d: &Direction<O::Point>, r: &O::Point) -> bool {
    !oracle.same_point(&oracle.center(&d.base, &d.representative, r), &d.base)
}

/// Whether two directions are the same subset.
pub fn same_direction<O: TreeOracle>(oracle: &O, a: &Direction<O::Point>, b: &Direction<O::Point>) -> bool {
    oracle.same_point(&a.base, &b.base) && contains(oracle, a, &b.representative)
}

type Generator<'a, P> = Box<dyn Fn(usize) -> Option<P> + Send + Sync + 'a>;

/// A sequence `P_1, P_2, ...` of oracle points, produced on demand.
pub struct PointSequence<'a, P> {
    generator: Generator<'a, P>,
    limit: Option<usize>,
}

impl<'a, P: Clone + Send + Sync + 'a> PointSequence<'a, P> {
    /// Terms come from `f(1), f(2), ...`; `None` ends the sequence.
    pub fn from_fn(f: impl Fn(usize) -> Option<P> + Send + Sync + 'a) -> Self {
        PointSequence { generator: Box::new(f), limit: None }
    }

    pub fn from_vec(terms: Vec<P>) -> Self {
        let n = terms.len();
        PointSequence { generator: Box::new(move |i| terms.get(i - 1).cloned()), limit: Some(n) }
    }

    pub fn constant(p: P) -> Self {
        PointSequence { generator: Box::new(move |_| Some(p.clone())), limit: None }
    }

    /// Caps the sequence at `n` terms.
    pub fn truncated(mut self, n: usize) -> Self {
        self.limit = Some(self.limit.map_or(n, |m| m.min(n)));
        self
    }

    pub fn term(&self, i: usize) -> Option<P> {
        if i == 0 || self.limit.is_some_and(|n| i > n) {
            return None;
        }
        (self.generator)(i)
    }

    /// The first `depth` terms (fewer if the sequence ends).
    pub fn terms(&self, depth: usize) -> Vec<P> {
        (1..=depth).map_while(|i| self.term(i)).collect()
    }
}

/// Start of the tail window of a truncation with `n` terms (1-based).
pub fn tail_start(n: usize) -> usize {
    n.div_ceil(2).max(1)
}

/// Inferior limit of a truncated sequence together with its certificate.
#[derive(Clone, Debug, PartialEq)]
pub struct Liminf<P, S> {
    /// `R_h`, the estimate of the inferior limit.
    pub point: P,
    /// `d(R_{h−1}, R_h)`; zero when `h = 1`.
    pub certificate: Dist<S>,
    /// Least `m` with `R_m = R_h`.
    pub stabilized_at: usize,
    pub terms_used: usize,
    /// `R_1, ..., R_n`.
    pub endpoints: Vec<P>,
}

pub fn liminf_from<O: TreeOracle>(
    oracle: &O,
    q: &O::Point,
    seq: &PointSequence<'_, O::Point>,
    depth: usize,
) -> Result<Liminf<O::Point, O::S>, ObserverError> {
    if depth == 0 {
        return Err(ObserverError::ZeroDepth);
    }
    liminf_of_terms(oracle, q, &seq.terms(depth))
}

/// [`liminf_from`] on an explicit list of terms.
pub fn liminf_of_terms<O: TreeOracle>(oracle: &O, q: &O::Point, terms: &[O::Point]) -> Result<Liminf<O::Point, O::S>, ObserverError> {
    if oracle.is_boundary(q) {
        return Err(ObserverError::BoundaryBasepoint);
    }
    let n = terms.len();
    if n == 0 {
        return Err(ObserverError::EmptySequence);
    }
    // [Q, R] ∩ [Q, P] = [Q, center(Q, P, R)]
    let mut endpoints = terms.to_vec();
    for m in (0..n - 1).rev() {
        endpoints[m] = oracle.center(q, &terms[m], &endpoints[m + 1]);
    }
    let h = tail_start(n);
    let point = endpoints[h - 1].clone();
    let certificate = if h == 1 { Dist::Finite(O::S::zero()) } else { oracle.distance(&endpoints[h - 2], &point) };
    let stabilized_at = (0..h).find(|&m| oracle.same_point(&endpoints[m], &point)).unwrap_or(h - 1) + 1;
    Ok(Liminf { point, certificate, stabilized_at, terms_used: n, endpoints })
}

/// Outcome of [`converges_obs`].
#[derive(Clone, Debug, PartialEq)]
pub enum ObsVerdict {
    /// Every probe containing the target holds all tail terms.
    Consistent { probes_containing_target: usize },
    /// `probe` contains the target but term `term` (1-based) lies outside.
    Refuted { probe: usize, term: usize },
}

impl ObsVerdict {
    pub fn is_consistent(&self) -> bool {
        matches!(self, ObsVerdict::Consistent { .. })
    }
}

pub fn converges_obs<O: TreeOracle>(
    oracle: &O,
    seq: &PointSequence<'_, O::Point>,
    target: &O::Point,
    probes: &[Direction<O::Point>],
    depth: usize,
) -> Result<ObsVerdict, ObserverError> {
    if depth == 0 {
        return Err(ObserverError::ZeroDepth);
    }
    let terms = seq.terms(depth);
    if terms.is_empty() {
        return Err(ObserverError::EmptySequence);
    }
    let h = tail_start(terms.len());
    let mut relevant = 0;
    for (i, d) in probes.iter().enumerate() {
        if !contains(oracle, d, target) {
            continue;
        }
        relevant += 1;
        if let Some(k) = (h - 1..terms.len()).find(|&k| !contains(oracle, d, &terms[k])) {
            return Ok(ObsVerdict::Refuted { probe: i, term: k + 1 });
        }
    }
    Ok(ObsVerdict::Consistent { probes_containing_target: relevant })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MetricVerdict<S> {
    pub converges: bool,
    /// Largest distance from the target over the tail window.
    pub tail_distance: Dist<S>,
}

/// Metric convergence at finite depth: every tail term within `tol` of `target`.
pub fn metric_convergence<O: TreeOracle>(
    oracle: &O,
    seq: &PointSequence<'_, O::Point>,
    target: &O::Point,
    depth: usize,
    tol: &O::S,
) -> Result<MetricVerdict<O::S>, ObserverError> {
    let terms = seq.terms(depth);
    if terms.is_empty() {
        return Err(ObserverError::EmptySequence);
    }
    let mut worst = Dist::Finite(O::S::zero());
    for p in &terms[tail_start(terms.len()) - 1..] {
        worst = match (worst, oracle.distance(p, target)) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(O::S::max_of(a, b)),
            _ => Dist::Infinite,
        };
    }
    Ok(MetricVerdict { converges: worst.within(tol), tail_distance: worst })
}

/// Directions `dir_P(Q)` for `P` a midpoint of two of the first `k` sample
/// points and `Q` one of those points, one per distinct direction, in order of
/// first appearance.
pub fn subbasis_from_sample<O: TreeOracle>(
    oracle: &O,
    sample: impl IntoIterator<Item = O::Point>,
    k: usize,
) -> Result<Vec<Direction<O::Point>>, ObserverError> {
    let mut pts: Vec<O::Point> = Vec::new();
    for p in sample.into_iter().take(k) {
        if !pts.iter().any(|x| oracle.same_point(x, &p)) {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(ObserverError::DegenerateSample);
    }
    let mut mids: Vec<O::Point> = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if let Some(m) = oracle.midpoint(&pts[i], &pts[j]) {
                if !mids.iter().any(|x| oracle.same_point(x, &m)) {
                    mids.push(m);
                }
            }
        }
    }
    let mut out: Vec<Direction<O::Point>> = Vec::new();
    for m in &mids {
        for p in &pts {
            if oracle.same_point(p, m) {
                continue;
            }
            let d = Direction { base: m.clone(), representative: p.clone() };
            if !out.iter().any(|e| same_direction(oracle, e, &d)) {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// How one direction was used during extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SideChoice {
    Inside,
    Outside,
    /// The kept side would have had fewer than two terms.
    Exhausted,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Extraction<P, S> {
    /// Kept indices (1-based) into the original sequence.
    pub indices: Vec<usize>,
    pub choices: Vec<SideChoice>,
    pub exhausted: bool,
    pub limit: Liminf<P, S>,
}

/// Greedy diagonal extraction: for each direction in turn keep the side
/// (inside or outside) holding the majority of the remaining terms, ties
/// going to the side of the last term. Stops early, flagging exhaustion,
/// when a side would drop below two terms.
pub fn extract_convergent_subsequence<O: TreeOracle>(
    oracle: &O,
    seq: &PointSequence<'_, O::Point>,
    dirs: &[Direction<O::Point>],
    depth: usize,
    basepoint: Option<&O::Point>,
) -> Result<Extraction<O::Point, O::S>, ObserverError> {
    if depth == 0 {
        return Err(ObserverError::ZeroDepth);
    }
    let terms = seq.terms(depth);
    if terms.is_empty() {
        return Err(ObserverError::EmptySequence);
    }
    let mut kept: Vec<usize> = (0..terms.len()).collect();
    let mut choices = Vec::new();
    let mut exhausted = false;
    for d in dirs {
        let (inside, outside): (Vec<usize>, Vec<usize>) = kept.iter().partition(|&&k| contains(oracle, d, &terms[k]));
        let last = *kept.last().expect("kept is never empty");
        let take_inside = match inside.len().cmp(&outside.len()) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Less => false,
            std::cmp::Ordering::Equal => inside.contains(&last),
        };
        let side = if take_inside { inside } else { outside };
        if side.len() < 2 {
            choices.push(SideChoice::Exhausted);
            exhausted = true;
            break;
        }
        choices.push(if take_inside { SideChoice::Inside } else { SideChoice::Outside });
        kept = side;
    }
    let sub: Vec<O::Point> = kept.iter().map(|&k| terms[k].clone()).collect();
    let base = basepoint.cloned().unwrap_or_else(|| terms[0].clone());
    let limit = liminf_of_terms(oracle, &base, &sub)?;
    Ok(Extraction { indices: kept.iter().map(|k| k + 1).collect(), choices, exhausted, limit })
}

/// Where a shape-map check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeWitness {
    /// `center(p, q, r)` equals the designated point `s` in exactly one tree.
    Center { p: String, q: String, r: String, s: String },
    /// Two triples share a center in exactly one tree.
    CenterCoincidence { first: [String; 3], second: [String; 3] },
    /// `r ∈ [p, q]` holds in exactly one tree.
    Segment { r: String, p: String, q: String },
}

impl fmt::Display for ShapeWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeWitness::Center { p, q, r, s } => write!(f, "center({p}, {q}, {r}) vs {s}"),
            ShapeWitness::CenterCoincidence { first, second } => {
                write!(f, "center({}) vs center({})", first.join(", "), second.join(", "))
            }
            ShapeWitness::Segment { r, p, q } => write!(f, "{r} in [{p}, {q}]"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShapeVerdict {
    pub passes: bool,
    pub witness: Option<ShapeWitness>,
}

fn marked_points<S: Scalar>(t: &MetricTree<S>) -> Vec<(String, Location<S>)> {
    if t.points().is_empty() {
        t.vertex_names().iter().map(|n| (n.clone(), t.locate(n).expect("vertex"))).collect()
    } else {
        t.points().iter().map(|p| (p.name.clone(), p.location.clone())).collect()
    }
}

/// Checks that `map` (designated points of `a` to points of `b`) preserves
/// centers of triples and segment membership. Trees without designated
/// points use their vertices.
pub fn verify_shape_map<S: Scalar>(a: &MetricTree<S>, b: &MetricTree<S>, map: &[(String, String)]) -> Result<ShapeVerdict, ObserverError> {
    let pa = marked_points(a);
    let pb = marked_points(b);
    let mut image = Vec::with_capacity(pa.len());
    for (name, _) in &pa {
        let hits: Vec<&String> = map.iter().filter(|(x, _)| x == name).map(|(_, y)| y).collect();
        match hits.as_slice() {
            [y] => image.push(b.locate(y).map_err(|_| ObserverError::NotBijective(format!("`{y}` is not a point")))?),
            [] => return Err(ObserverError::NotBijective(format!("`{name}` has no image"))),
            _ => return Err(ObserverError::NotBijective(format!("`{name}` has several images"))),
        }
    }
    if map.len() != pa.len() {
        return Err(ObserverError::NotBijective("map mentions unknown points".into()));
    }
    for i in 0..image.len() {
        for j in i + 1..image.len() {
            if b.same_point(&image[i], &image[j]) {
                return Err(ObserverError::NotBijective(format!("`{}` and `{}` collide", pa[i].0, pa[j].0)));
            }
        }
    }
    if image.len() != pb.len() {
        return Err(ObserverError::NotBijective(format!("{} points map onto {}", image.len(), pb.len())));
    }

    let n = pa.len();
    let name = |i: usize| pa[i].0.clone();
    let fail = |w| Ok(ShapeVerdict { passes: false, witness: Some(w) });
    let mut triples = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let ca = a.center(&pa[i].1, &pa[j].1, &pa[k].1);
                let cb = b.center(&image[i], &image[j], &image[k]);
                for s in 0..n {
                    if a.same_point(&ca, &pa[s].1) != b.same_point(&cb, &image[s]) {
                        return fail(ShapeWitness::Center { p: name(i), q: name(j), r: name(k), s: name(s) });
                    }
                }
                triples.push(([i, j, k], ca, cb));
            }
        }
    }
    for x in 0..triples.len() {
        for y in x + 1..triples.len() {
            let (ta, ca, cb) = &triples[x];
            let (tb, da, db) = &triples[y];
            if a.same_point(ca, da) != b.same_point(cb, db) {
                return fail(ShapeWitness::CenterCoincidence { first: ta.map(name), second: tb.map(name) });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for r in 0..n {
                if a.point_on_segment(&pa[r].1, &pa[i].1, &pa[j].1) != b.point_on_segment(&image[r], &image[i], &image[j]) {
                    return fail(ShapeWitness::Segment { r: name(r), p: name(i), q: name(j) });
                }
            }
        }
    }
    Ok(ShapeVerdict { passes: true, witness: None })
}

/// A set of designated points is convex when it contains every designated
/// point lying on a segment between two of its members.
pub fn is_convex<S: Scalar>(tree: &MetricTree<S>, subset: &[&str]) -> Result<bool, ObserverError> {
    let inside: Vec<Location<S>> = subset.iter().map(|n| tree.locate(n)).collect::<Result<_, _>>()?;
    let all = marked_points(tree);
    for p in &inside {
        for q in &inside {
            for (_, r) in &all {
                if tree.point_on_segment(r, p, q) && !inside.iter().any(|x| tree.same_point(x, r)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
