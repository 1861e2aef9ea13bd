//! The map `Q: ∂F_N → T̂` for computable isometric actions.
//!
//! `Q(X)` is the inferior limit, seen from a basepoint `P`, of the orbit
//! points `w_i P` where `w_i` runs over the prefixes of `X`. The module also
//! searches for conjugacy classes of small translation length and builds
//! finite samples of the dual lamination from them.

mod line;
mod rotation;

use std::cmp::Ordering;

pub use line::{parse_action, small_words_search, LineAction};
pub use rotation::PodRotation;

use crate::boundary::{
    act, audit, cyclically_reduced_words, saturate, AuditReport, Basis, BoundaryPair, BoundaryPoint, LaminationSample, ReducedWord,
};
use crate::error::{ObserverError, QmapError};
use crate::num::{Dist, Scalar};
use crate::observers::{liminf_of_terms, TreeOracle};

/// Orbit depth used when none is given.
pub const DEFAULT_DEPTH: usize = 10_000;

/// `1e-6`, the tolerance used when none is given.
pub fn default_tol<S: Scalar>() -> S {
    S::from_ratio(1, 1_000_000)
}

pub type PointOf<A> = <<A as IsometricAction>::Oracle as TreeOracle>::Point;
pub type ScalarOf<A> = <<A as IsometricAction>::Oracle as TreeOracle>::S;

/// State of a hypothesis that is recorded rather than checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flag {
    Holds,
    Fails,
    Unknown,
}

/// Standing hypotheses on an action as declared by its constructor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hypotheses {
    pub very_small: Flag,
    pub dense_orbits: Flag,
    pub note: &'static str,
}

/// An action of `F_N` by isometries on a tree oracle, extended to its ends.
pub trait IsometricAction: Send + Sync {
    type Oracle: TreeOracle;

    fn oracle(&self) -> &Self::Oracle;
    fn rank(&self) -> usize;
    fn apply(&self, w: &ReducedWord, p: &PointOf<Self>) -> PointOf<Self>;
    fn basepoint(&self) -> PointOf<Self>;
    fn hypotheses(&self) -> Hypotheses;

    /// `X.prefix(i) · p` for `i = 1..=depth`.
    fn orbit(&self, x: &BoundaryPoint, p: &PointOf<Self>, depth: usize) -> Vec<PointOf<Self>> {
        (1..=depth).map(|i| self.apply(&x.prefix_word(i), p)).collect()
    }

    /// The end of the tree the orbit of `p` along `x` runs off to, when the
    /// action can tell.
    fn escape(&self, _x: &BoundaryPoint, _p: &PointOf<Self>, _orbit: &[PointOf<Self>]) -> Option<PointOf<Self>> {
        None
    }

    /// Translation length of a nonempty cyclically reduced word. The default
    /// takes the least displacement over the first `samples` sample points,
    /// which bounds the true value from above.
    fn translation_length(&self, w: &ReducedWord) -> TranslationLength<ScalarOf<Self>> {
        let samples = 64;
        let o = self.oracle();
        let mut best: Option<ScalarOf<Self>> = None;
        for i in 0..samples {
            let p = o.sample_point(i);
            if let Dist::Finite(d) = o.distance(&p, &self.apply(w, &p)) {
                if best.as_ref().is_none_or(|b| d < *b) {
                    best = Some(d);
                }
            }
        }
        TranslationLength { value: best.unwrap_or_else(ScalarOf::<Self>::zero), exact: false, samples }
    }

    /// Conjugacy classes of cyclically reduced words of length at most
    /// `maxlen` with translation length below `epsilon`, in report order.
    fn small_words(&self, epsilon: &ScalarOf<Self>, maxlen: usize) -> Vec<ConjugacyClassRecord<ScalarOf<Self>>> {
        let basis = Basis::new(self.rank().max(1)).expect("rank is at least one");
        let mut out: Vec<_> = cyclically_reduced_words(&basis, maxlen)
            .into_iter()
            .filter(|w| w.conjugacy_representative() == *w)
            .filter_map(|w| {
                let tl = self.translation_length(&w).value;
                (tl < *epsilon).then_some(ConjugacyClassRecord { word: w, translation_length: tl })
            })
            .collect();
        sort_records(&mut out);
        out
    }
}

/// A translation length together with how it was obtained.
#[derive(Clone, Debug, PartialEq)]
pub struct TranslationLength<S> {
    pub value: S,
    /// False for sampled values, which are upper bounds.
    pub exact: bool,
    /// Number of sample points used; 0 when exact.
    pub samples: usize,
}

/// A conjugacy class, represented by its least cyclic rotation.
#[derive(Clone, Debug, PartialEq)]
pub struct ConjugacyClassRecord<S> {
    pub word: ReducedWord,
    pub translation_length: S,
}

/// Order by translation length, then word length, then letters.
pub fn sort_records<S: Scalar>(v: &mut [ConjugacyClassRecord<S>]) {
    v.sort_by(|a, b| a.translation_length.cmp_total(&b.translation_length).then_with(|| a.word.cmp(&b.word)));
}

fn check_rank<A: IsometricAction + ?Sized>(action: &A, used: usize) -> Result<(), QmapError> {
    if used > action.rank() {
        return Err(QmapError::RankMismatch { action: action.rank(), word: used });
    }
    Ok(())
}

/// Translation length of `w`, after cyclic reduction.
pub fn translation_length<A: IsometricAction>(action: &A, w: &ReducedWord) -> Result<TranslationLength<ScalarOf<A>>, QmapError> {
    let core = w.cyclic_core();
    if core.is_empty() {
        return Err(QmapError::EmptyWord);
    }
    check_rank(action, core.rank_used())?;
    Ok(action.translation_length(&core))
}

/// An estimate of `Q(X)` from a basepoint.
#[derive(Clone, Debug, PartialEq)]
pub struct QEstimate<P, S> {
    pub point: P,
    /// Distance between the last two window endpoints; zero when the orbit
    /// was found to escape.
    pub certificate: Dist<S>,
    pub stabilized_at: usize,
    pub depth: usize,
    pub escaped: bool,
}

impl<P, S: Scalar> QEstimate<P, S> {
    pub fn is_stabilized(&self, tol: &S) -> bool {
        self.escaped || self.certificate.within(tol)
    }
}

pub type QEstimateOf<A> = QEstimate<PointOf<A>, ScalarOf<A>>;

/// `liminf_P X.prefix(i) · P` over `i = 1..=depth`.
pub fn qmap_estimate<A: IsometricAction>(action: &A, x: &BoundaryPoint, p: &PointOf<A>, depth: usize) -> Result<QEstimateOf<A>, QmapError> {
    if depth == 0 {
        return Err(ObserverError::ZeroDepth.into());
    }
    check_rank(action, x.rank_used(depth))?;
    let orbit = action.orbit(x, p, depth);
    if let Some(end) = action.escape(x, p, &orbit) {
        return Ok(QEstimate { point: end, certificate: Dist::Finite(ScalarOf::<A>::zero()), stabilized_at: depth, depth, escaped: true });
    }
    let l = liminf_of_terms(action.oracle(), p, &orbit)?;
    Ok(QEstimate { point: l.point, certificate: l.certificate, stabilized_at: l.stabilized_at, depth, escaped: false })
}

/// Outcome of a fiber comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiberVerdict {
    Same,
    Different,
    /// One of the estimates had not stabilized within the tolerance.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberCheck<S> {
    pub verdict: FiberVerdict,
    /// Distance between the two estimates (infinite for distinct ends).
    pub residual: Dist<S>,
}

/// Whether `Q(X) = Q(X')` within `tol`, both estimated from the action's
/// basepoint. Ends of the tree must coincide exactly.
pub fn q_fiber_check<A: IsometricAction>(
    action: &A,
    x: &BoundaryPoint,
    y: &BoundaryPoint,
    depth: usize,
    tol: &ScalarOf<A>,
) -> Result<FiberCheck<ScalarOf<A>>, QmapError> {
    let zero = || Dist::Finite(ScalarOf::<A>::zero());
    if x == y {
        return Ok(FiberCheck { verdict: FiberVerdict::Same, residual: zero() });
    }
    let p = action.basepoint();
    let qx = qmap_estimate(action, x, &p, depth)?;
    let qy = qmap_estimate(action, y, &p, depth)?;
    let o = action.oracle();
    let residual = o.distance(&qx.point, &qy.point);
    if !qx.is_stabilized(tol) || !qy.is_stabilized(tol) {
        return Ok(FiberCheck { verdict: FiberVerdict::Inconclusive, residual });
    }
    let same = if o.is_boundary(&qx.point) || o.is_boundary(&qy.point) { qx.point == qy.point } else { residual.within(tol) };
    Ok(FiberCheck { verdict: if same { FiberVerdict::Same } else { FiberVerdict::Different }, residual })
}

/// Separation of two estimates as seen from `p`: their distance when both
/// are points of the tree, otherwise `1 / (1 + d(p, center(p, y, z)))`, which
/// is 1 for distinct ends and shrinks as the common direction from `p`
/// narrows.
pub fn separation<O: TreeOracle>(o: &O, p: &O::Point, y: &O::Point, z: &O::Point) -> O::S {
    if o.same_point(y, z) {
        return O::S::zero();
    }
    if !o.is_boundary(y) && !o.is_boundary(z) {
        if let Dist::Finite(d) = o.distance(y, z) {
            return d;
        }
    }
    match o.distance(p, &o.center(p, y, z)) {
        Dist::Finite(d) => O::S::one() / (O::S::one() + d),
        Dist::Infinite => O::S::zero(),
    }
}

/// Per-probe result of [`q_continuity_probe`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeRow<P, S> {
    pub probe: BoundaryPoint,
    pub estimate: P,
    pub separation: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ContinuityReport<P, S> {
    pub k: usize,
    pub reference: P,
    pub rows: Vec<ProbeRow<P, S>>,
    pub residual: S,
}

/// Compares `Q(X)` with `Q(Y)` for the points `Y = X.prefix(k) · tail`.
///
/// The default tails are `ℓ^∞` for every letter `ℓ`; tails whose first
/// letter cancels against the prefix are skipped.
pub fn q_continuity_probe<A: IsometricAction>(
    action: &A,
    x: &BoundaryPoint,
    k: usize,
    depth: usize,
    tails: Option<&[BoundaryPoint]>,
) -> Result<ContinuityReport<PointOf<A>, ScalarOf<A>>, QmapError> {
    if k == 0 {
        return Err(ObserverError::ZeroDepth.into());
    }
    let basis = Basis::new(action.rank().max(1))?;
    let default: Vec<BoundaryPoint>;
    let tails = match tails {
        Some(t) => t,
        None => {
            default = basis
                .letters()
                .into_iter()
                .map(|l| BoundaryPoint::power(&ReducedWord::letter(l)).expect("single letters are nonempty periods"))
                .collect();
            &default
        }
    };
    let prefix = x.prefix_word(k);
    let p = action.basepoint();
    let reference = qmap_estimate(action, x, &p, depth)?.point;
    let mut rows = Vec::new();
    let mut residual = ScalarOf::<A>::zero();
    for t in tails {
        if prefix.letters().last().is_some_and(|&l| l.inverse() == t.letter(0)) {
            continue;
        }
        let probe = act(&prefix, t);
        let est = qmap_estimate(action, &probe, &p, depth)?.point;
        let s = separation(action.oracle(), &p, &reference, &est);
        if s > residual {
            residual = s.clone();
        }
        rows.push(ProbeRow { probe, estimate: est, separation: s });
    }
    Ok(ContinuityReport { k, reference, rows, residual })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EquivarianceReport<P, S> {
    /// `Q(w X)`.
    pub translated: P,
    /// `w Q(X)`.
    pub moved: P,
    pub residual: Dist<S>,
    /// Sum of the two liminf certificates.
    pub bound: Dist<S>,
}

/// Distance between `Q(w X)` and `w Q(X)`.
pub fn equivariance_check<A: IsometricAction>(
    action: &A,
    w: &ReducedWord,
    x: &BoundaryPoint,
    depth: usize,
) -> Result<EquivarianceReport<PointOf<A>, ScalarOf<A>>, QmapError> {
    check_rank(action, w.rank_used())?;
    let p = action.basepoint();
    let lhs = qmap_estimate(action, &act(w, x), &p, depth)?;
    let rhs = qmap_estimate(action, x, &p, depth)?;
    let moved = action.apply(w, &rhs.point);
    let residual = action.oracle().distance(&lhs.point, &moved);
    let bound = match (&lhs.certificate, &rhs.certificate) {
        (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a.clone() + b.clone()),
        _ => Dist::Infinite,
    };
    Ok(EquivarianceReport { translated: lhs.point, moved, residual, bound })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PanelReport<P, S> {
    pub estimates: Vec<QEstimate<P, S>>,
    /// Largest distance between two estimates.
    pub spread: Dist<S>,
    /// `None` when some estimate did not stabilize within the tolerance.
    pub agrees: Option<bool>,
}

/// Estimates `Q(X)` from each basepoint of a panel and compares the results.
pub fn basepoint_panel<A: IsometricAction>(
    action: &A,
    x: &BoundaryPoint,
    panel: &[PointOf<A>],
    depth: usize,
    tol: &ScalarOf<A>,
) -> Result<PanelReport<PointOf<A>, ScalarOf<A>>, QmapError> {
    let estimates = panel.iter().map(|p| qmap_estimate(action, x, p, depth)).collect::<Result<Vec<_>, _>>()?;
    let o = action.oracle();
    let mut spread = Dist::Finite(ScalarOf::<A>::zero());
    for (i, a) in estimates.iter().enumerate() {
        for b in &estimates[i + 1..] {
            spread = max_dist(spread, o.distance(&a.point, &b.point));
        }
    }
    let agrees = if estimates.iter().all(|e| e.is_stabilized(tol)) { Some(spread.within(&(tol.clone() + tol.clone()))) } else { None };
    Ok(PanelReport { estimates, spread, agrees })
}

fn max_dist<S: Scalar>(a: Dist<S>, b: Dist<S>) -> Dist<S> {
    match (a, b) {
        (Dist::Finite(x), Dist::Finite(y)) => Dist::Finite(if x.cmp_total(&y) == Ordering::Less { y } else { x }),
        _ => Dist::Infinite,
    }
}

/// A dual lamination sample with the fiber check of every pair.
#[derive(Clone, Debug)]
pub struct DualLamination<S> {
    pub words: Vec<ConjugacyClassRecord<S>>,
    pub sample: LaminationSample,
    /// Aligned with `sample.entries`.
    pub fibers: Vec<FiberCheck<S>>,
    pub audit: AuditReport,
    pub depth: usize,
}

/// Pairs `(w^∞, w⁻¹^∞)` for the small words `w`, saturated once under the
/// basis generators, with each pair checked against the fibers of `Q`.
pub fn dual_lamination_sample<A: IsometricAction>(
    action: &A,
    epsilon: &ScalarOf<A>,
    maxlen: usize,
    depth: usize,
    tol: &ScalarOf<A>,
) -> Result<DualLamination<ScalarOf<A>>, QmapError> {
    let words = action.small_words(epsilon, maxlen);
    let seeds = words
        .iter()
        .map(|r| {
            let x = BoundaryPoint::power(&r.word)?;
            let y = BoundaryPoint::power(&r.word.inverse())?;
            BoundaryPair::new(x, y)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let basis = Basis::new(action.rank().max(1))?;
    let gens: Vec<ReducedWord> = basis.generators().into_iter().map(ReducedWord::letter).collect();
    let sample = saturate(&LaminationSample::from_pairs(seeds), &gens, 1);
    let fibers = sample.entries.iter().map(|e| q_fiber_check(action, &e.pair.x, &e.pair.y, depth, tol)).collect::<Result<Vec<_>, _>>()?;
    let audit = audit(&sample);
    Ok(DualLamination { words, sample, fibers, audit, depth })
}
