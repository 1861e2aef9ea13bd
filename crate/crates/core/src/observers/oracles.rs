use std::cmp::Ordering;
use std::fmt;

use super::TreeOracle;
use crate::num::{Dist, Scalar};
use crate::tree::{Location, MetricTree, VertexId};

/// `j`-th dyadic number in `(0, 1]`: 1, 1/2, 1/4, 3/4, 1/8, 3/8, ...
pub(crate) fn dyadic<S: Scalar>(j: usize) -> S {
    if j == 0 {
        return S::one();
    }
    let level = usize::BITS - j.leading_zeros(); // 2^(level-1) <= j < 2^level
    let k = 2 * (j - (1usize << (level - 1))) + 1;
    S::from_i128(k as i128) / S::from_i128(1i128 << level)
}

/// Inverse Cantor pairing `i -> (a, b)`.
pub(crate) fn unpair(i: usize) -> (usize, usize) {
    let mut w = 0usize;
    while (w + 1) * (w + 2) / 2 <= i {
        w += 1;
    }
    let b = i - w * (w + 1) / 2;
    (w - b, b)
}

impl<S: Scalar> TreeOracle for MetricTree<S> {
    type S = S;
    type Point = Location<S>;

    fn distance(&self, p: &Location<S>, q: &Location<S>) -> Dist<S> {
        Dist::Finite(MetricTree::distance(self, p, q))
    }

    fn center(&self, p: &Location<S>, q: &Location<S>, r: &Location<S>) -> Location<S> {
        MetricTree::center(self, p, q, r)
    }

    fn same_point(&self, p: &Location<S>, q: &Location<S>) -> bool {
        MetricTree::same_point(self, p, q)
    }

    fn midpoint(&self, p: &Location<S>, q: &Location<S>) -> Option<Location<S>> {
        Some(MetricTree::midpoint(self, p, q))
    }

    /// Designated points, then closed vertices, then dyadic points of every
    /// edge level by level.
    fn sample_point(&self, i: usize) -> Location<S> {
        let pts = self.points();
        if i < pts.len() {
            return pts[i].location.clone();
        }
        let closed: Vec<VertexId> = (0..self.vertex_count()).map(VertexId).filter(|v| !self.is_open(*v)).collect();
        let i = i - pts.len();
        if i < closed.len() || self.edges().is_empty() {
            return Location::Vertex(closed[i % closed.len().max(1)]);
        }
        let i = i - closed.len();
        let m = self.edges().len();
        let (edge, j) = (i % m, i / m + 1);
        let e = crate::tree::EdgeId(edge);
        self.normalize(e, dyadic::<S>(j) * self.edge(e).length.clone())
    }

    fn describe(&self, p: &Location<S>) -> String {
        MetricTree::describe(self, p)
    }
}

/// A point of the extended real line.
#[derive(Clone, Debug, PartialEq)]
pub enum LinePoint<S> {
    NegInf,
    At(S),
    PosInf,
}

impl<S: Scalar> LinePoint<S> {
    fn rank(&self) -> u8 {
        match self {
            LinePoint::NegInf => 0,
            LinePoint::At(_) => 1,
            LinePoint::PosInf => 2,
        }
    }

    pub fn cmp_line(&self, other: &Self) -> Ordering {
        match (self, other) {
            (LinePoint::At(a), LinePoint::At(b)) => a.cmp_total(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    pub fn coordinate(&self) -> Option<&S> {
        match self {
            LinePoint::At(x) => Some(x),
            _ => None,
        }
    }
}

impl<S: Scalar> fmt::Display for LinePoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinePoint::NegInf => write!(f, "-inf"),
            LinePoint::At(x) => write!(f, "{x}"),
            LinePoint::PosInf => write!(f, "+inf"),
        }
    }
}

/// The real line together with its two ends.
#[derive(Clone, Copy, Debug, Default)]
pub struct RealLine<S>(std::marker::PhantomData<S>);

impl<S> RealLine<S> {
    pub fn new() -> Self {
        RealLine(std::marker::PhantomData)
    }
}

impl<S: Scalar> TreeOracle for RealLine<S> {
    type S = S;
    type Point = LinePoint<S>;

    fn distance(&self, p: &LinePoint<S>, q: &LinePoint<S>) -> Dist<S> {
        match (p, q) {
            (LinePoint::At(a), LinePoint::At(b)) => Dist::Finite((a.clone() - b.clone()).abs()),
            _ if p == q => Dist::Finite(S::zero()),
            _ => Dist::Infinite,
        }
    }

    fn center(&self, p: &LinePoint<S>, q: &LinePoint<S>, r: &LinePoint<S>) -> LinePoint<S> {
        let mut v = [p, q, r];
        v.sort_by(|a, b| a.cmp_line(b));
        v[1].clone()
    }

    fn is_boundary(&self, p: &LinePoint<S>) -> bool {
        !matches!(p, LinePoint::At(_))
    }

    fn same_point(&self, p: &LinePoint<S>, q: &LinePoint<S>) -> bool {
        match (p, q) {
            (LinePoint::At(a), LinePoint::At(b)) => a.approx_eq(b),
            _ => p == q,
        }
    }

    fn midpoint(&self, p: &LinePoint<S>, q: &LinePoint<S>) -> Option<LinePoint<S>> {
        match (p, q) {
            (LinePoint::At(a), LinePoint::At(b)) => Some(LinePoint::At((a.clone() + b.clone()).half())),
            _ if p == q => Some(p.clone()),
            _ => None,
        }
    }

    /// 0, then integers plus dyadic fractions.
    fn sample_point(&self, i: usize) -> LinePoint<S> {
        if i == 0 {
            return LinePoint::At(S::zero());
        }
        let (a, j) = unpair(i - 1);
        let z = if a % 2 == 0 { -((a / 2) as i128) } else { (a / 2 + 1) as i128 };
        let frac = if j == 0 { S::zero() } else { dyadic::<S>(j) };
        LinePoint::At(S::from_i128(z) + frac)
    }

    fn describe(&self, p: &LinePoint<S>) -> String {
        p.to_string()
    }
}

/// A point of a multipod: the hub or a point on an arm at `offset ∈ (0, 1]`
/// from the hub.
#[derive(Clone, Debug, PartialEq)]
pub enum PodPoint<S> {
    Hub,
    Arm { arm: usize, offset: S },
}

impl<S: Scalar> fmt::Display for PodPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PodPoint::Hub => write!(f, "hub"),
            PodPoint::Arm { arm, offset } => write!(f, "arm {arm} {offset}"),
        }
    }
}

/// Unit intervals glued at a common hub; `arms = None` gives countably many.
#[derive(Clone, Copy, Debug)]
pub struct Multipod<S> {
    arms: Option<usize>,
    _s: std::marker::PhantomData<S>,
}

impl<S: Scalar> Multipod<S> {
    pub fn new(arms: usize) -> Self {
        assert!(arms >= 1, "a multipod needs at least one arm");
        Multipod { arms: Some(arms), _s: std::marker::PhantomData }
    }

    pub fn infinite() -> Self {
        Multipod { arms: None, _s: std::marker::PhantomData }
    }

    pub fn arms(&self) -> Option<usize> {
        self.arms
    }

    /// Point on `arm` at `offset` from the hub (offset 0 is the hub).
    pub fn point(&self, arm: usize, offset: S) -> PodPoint<S> {
        assert!(self.arms.is_none_or(|n| arm < n), "arm {arm} does not exist");
        assert!(offset >= S::zero() && offset <= S::one(), "offset must lie in [0, 1]");
        if offset.approx_zero() {
            PodPoint::Hub
        } else {
            PodPoint::Arm { arm, offset }
        }
    }

    fn coords(p: &PodPoint<S>) -> Option<(usize, &S)> {
        match p {
            PodPoint::Hub => None,
            PodPoint::Arm { arm, offset } => Some((*arm, offset)),
        }
    }
}

impl<S: Scalar> TreeOracle for Multipod<S> {
    type S = S;
    type Point = PodPoint<S>;

    fn distance(&self, p: &PodPoint<S>, q: &PodPoint<S>) -> Dist<S> {
        let d = match (Self::coords(p), Self::coords(q)) {
            (None, None) => S::zero(),
            (Some((_, o)), None) | (None, Some((_, o))) => o.clone(),
            (Some((a, o)), Some((b, r))) if a == b => (o.clone() - r.clone()).abs(),
            (Some((_, o)), Some((_, r))) => o.clone() + r.clone(),
        };
        Dist::Finite(d)
    }

    fn center(&self, p: &PodPoint<S>, q: &PodPoint<S>, r: &PodPoint<S>) -> PodPoint<S> {
        let pts = [p, q, r];
        for arm in pts.iter().filter_map(|x| Self::coords(x).map(|c| c.0)) {
            let mut on: Vec<&S> = pts.iter().filter_map(|x| Self::coords(x)).filter(|c| c.0 == arm).map(|c| c.1).collect();
            if on.len() < 2 {
                continue;
            }
            on.sort_by(|a, b| a.cmp_total(b));
            // two points on the arm: the branch point toward the hub is the
            // nearer one; three points: the median offset
            let offset = if on.len() == 3 { on[1].clone() } else { on[0].clone() };
            return PodPoint::Arm { arm, offset };
        }
        PodPoint::Hub
    }

    fn same_point(&self, p: &PodPoint<S>, q: &PodPoint<S>) -> bool {
        match (p, q) {
            (PodPoint::Arm { arm: a, offset: o }, PodPoint::Arm { arm: b, offset: r }) => a == b && o.approx_eq(r),
            _ => p == q,
        }
    }

    fn midpoint(&self, p: &PodPoint<S>, q: &PodPoint<S>) -> Option<PodPoint<S>> {
        let half = self.distance(p, q).finite()?.half();
        // walk from the point farther from the hub
        let (far, near) = match (Self::coords(p), Self::coords(q)) {
            (Some((_, o)), Some((_, r))) if o >= r => (p, q),
            (Some(_), None) => (p, q),
            _ => (q, p),
        };
        Some(match Self::coords(far) {
            None => PodPoint::Hub,
            Some((arm, o)) => {
                let same_arm = Self::coords(near).is_some_and(|(b, _)| b == arm);
                let along = o.clone() - half.clone();
                if same_arm || along >= S::zero() {
                    self.point(arm, along)
                } else {
                    let (b, _) = Self::coords(near).expect("points on different arms");
                    self.point(b, -along)
                }
            }
        })
    }

    /// The hub, then every arm at offsets 1, 1/2, 1/4, 3/4, ...; finite
    /// multipods sweep all arms per offset, infinite ones use Cantor pairing.
    fn sample_point(&self, i: usize) -> PodPoint<S> {
        if i == 0 {
            return PodPoint::Hub;
        }
        let (arm, j) = match self.arms {
            Some(n) => ((i - 1) % n, (i - 1) / n),
            None => unpair(i - 1),
        };
        PodPoint::Arm { arm, offset: dyadic(j) }
    }

    fn describe(&self, p: &PodPoint<S>) -> String {
        p.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Rational;

    #[test]
    fn dyadics_enumerate_level_by_level() {
        let v: Vec<Rational> = (0..6).map(dyadic).collect();
        let want: Vec<Rational> =
            [(1, 1), (1, 2), (1, 4), (3, 4), (1, 8), (3, 8)].iter().map(|&(a, b)| Rational::from_ratio(a, b)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn unpair_is_a_bijection_on_a_prefix() {
        let mut seen = std::collections::HashSet::new();
        for i in 0..55 {
            assert!(seen.insert(unpair(i)));
        }
        assert!((0..10).all(|a| (0..10 - a).all(|b| seen.contains(&(a, b)))));
    }

    #[test]
    fn line_center_is_the_median() {
        let l = RealLine::<Rational>::new();
        let at = |n: i64| LinePoint::At(Rational::from_ratio(n, 1));
        assert_eq!(l.center(&at(3), &at(-1), &at(7)), at(3));
        assert_eq!(l.center(&LinePoint::PosInf, &at(-1), &LinePoint::NegInf), at(-1));
        assert_eq!(l.distance(&at(1), &LinePoint::PosInf), Dist::Infinite);
    }

    #[test]
    fn multipod_metric_and_centers() {
        let m = Multipod::<Rational>::new(5);
        let half = Rational::from_ratio(1, 2);
        let p = m.point(1, Rational::one());
        let q = m.point(1, half.clone());
        let r = m.point(3, Rational::one());
        assert_eq!(m.distance(&p, &r), Dist::Finite(Rational::from_ratio(2, 1)));
        assert_eq!(m.center(&p, &q, &r), q);
        assert_eq!(m.center(&p, &r, &m.point(4, half)), PodPoint::Hub);
    }
}
