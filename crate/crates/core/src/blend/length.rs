use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::boundary::{reduced_words, Basis, ReducedWord};
use crate::error::BlendError;
use crate::num::Scalar;
use crate::qmap::LineAction;

/// A rose whose petals are marked by the images of the basis generators.
///
/// The translation length of `w` is the weighted length of the cyclic core
/// of its image, each letter weighted by the length of its petal.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkedGraph<S> {
    images: Vec<ReducedWord>,
    lengths: Vec<S>,
}

impl<S: Scalar> MarkedGraph<S> {
    /// Rejects markings that the greedy Nielsen reduction of
    /// [`check_generates`] cannot reduce to a basis.
    pub fn new(images: Vec<ReducedWord>, lengths: Vec<S>) -> Result<Self, BlendError> {
        if lengths.len() != images.len() {
            return Err(BlendError::LengthCount { expected: images.len(), got: lengths.len() });
        }
        if let Some(i) = lengths.iter().position(|l| !l.is_positive()) {
            return Err(BlendError::NonPositiveLength(i));
        }
        check_generates(&images)?;
        Ok(MarkedGraph { images, lengths })
    }

    /// The rose with the identity marking.
    pub fn identity(lengths: Vec<S>) -> Result<Self, BlendError> {
        let images = (1..=lengths.len()).map(|k| ReducedWord::letter(crate::boundary::Letter::generator(k))).collect();
        MarkedGraph::new(images, lengths)
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn length(&self, w: &ReducedWord) -> Result<S, BlendError> {
        if w.rank_used() > self.rank() {
            return Err(BlendError::Incompatible(format!("word {w} exceeds rank {}", self.rank())));
        }
        let core = w.substitute(&self.images).cyclic_core();
        Ok(core.letters().iter().fold(S::zero(), |acc, l| acc + self.lengths.get(l.index() - 1).cloned().unwrap_or_else(S::one)))
    }
}

/// Replaces images by shorter products `x y^±1` or `y^±1 x` until none
/// exists, then asks for a permutation of the generators up to inversion.
///
/// This greedy reduction decides primitivity of most small markings but
/// can stall on a basis whose reduction needs length-preserving moves;
/// such markings are rejected.
fn check_generates(images: &[ReducedWord]) -> Result<(), BlendError> {
    let n = images.len();
    let mut v: Vec<ReducedWord> = images.to_vec();
    if let Some(i) = v.iter().position(|w| w.rank_used() > n) {
        return Err(BlendError::NotGenerating(format!("image {} uses a generator beyond rank {n}", v[i])));
    }
    loop {
        if let Some(i) = v.iter().position(|w| w.is_empty()) {
            return Err(BlendError::NotGenerating(format!("image {} reduces to the identity", i + 1)));
        }
        let mut changed = false;
        'outer: for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                for y in [v[j].clone(), v[j].inverse()] {
                    for cand in [v[i].mul(&y), y.mul(&v[i])] {
                        if cand.len() < v[i].len() {
                            v[i] = cand;
                            changed = true;
                            break 'outer;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut seen = vec![false; n];
    for w in &v {
        match w.letters() {
            [l] if !seen[l.index() - 1] => seen[l.index() - 1] = true,
            _ => {
                let shown: Vec<String> = v.iter().map(|w| w.to_string()).collect();
                return Err(BlendError::NotGenerating(format!("reduction stops at ({})", shown.join(", "))));
            }
        }
    }
    Ok(())
}

/// `‖w‖` for the rose given by `marking` and `lengths`.
pub fn marked_graph_length<S: Scalar>(marking: &[ReducedWord], lengths: &[S], w: &ReducedWord) -> Result<S, BlendError> {
    MarkedGraph::new(marking.to_vec(), lengths.to_vec())?.length(w)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Provenance {
    LineAction,
    MarkedGraph,
    Table,
    Combination,
}

type Evaluator<S> = Arc<dyn Fn(&ReducedWord) -> Option<S> + Send + Sync>;

/// A translation-length function on the free group. It is evaluated on
/// cyclic cores, so conjugation never changes its value; `None` means the
/// value is unknown (a word missing from a table).
#[derive(Clone)]
pub struct LengthFunction<S> {
    eval: Evaluator<S>,
    pub provenance: Provenance,
    pub label: String,
}

impl<S: Scalar> LengthFunction<S> {
    pub fn from_fn(
        label: impl Into<String>,
        provenance: Provenance,
        f: impl Fn(&ReducedWord) -> Option<S> + Send + Sync + 'static,
    ) -> Self {
        LengthFunction { eval: Arc::new(f), provenance, label: label.into() }
    }

    pub fn from_line(action: &LineAction<S>) -> Self {
        let a = action.clone();
        LengthFunction::from_fn("line", Provenance::LineAction, move |w| Some(a.mu(w).abs()))
    }

    pub fn from_marked_graph(g: &MarkedGraph<S>) -> Self {
        let g = g.clone();
        LengthFunction::from_fn("rose", Provenance::MarkedGraph, move |w| g.length(w).ok())
    }

    /// Values are looked up by conjugacy class.
    pub fn from_table(entries: impl IntoIterator<Item = (ReducedWord, S)>) -> Self {
        let table: HashMap<ReducedWord, S> = entries.into_iter().map(|(w, v)| (w.conjugacy_representative(), v)).collect();
        LengthFunction::from_fn("table", Provenance::Table, move |w| table.get(&w.conjugacy_representative()).cloned())
    }

    /// `λ ℓ1 + (1 − λ) ℓ0`, evaluated pointwise.
    pub fn combination(l0: &LengthFunction<S>, l1: &LengthFunction<S>, lambda: &S) -> Self {
        let (a, b, lam) = (l0.clone(), l1.clone(), lambda.clone());
        let label = format!("{lambda}*{} + (1-{lambda})*{}", l1.label, l0.label);
        LengthFunction::from_fn(label, Provenance::Combination, move |w| {
            Some(lam.clone() * b.eval(w)? + (S::one() - lam.clone()) * a.eval(w)?)
        })
    }

    pub fn eval(&self, w: &ReducedWord) -> Option<S> {
        let core = w.cyclic_core();
        if core.is_empty() {
            return Some(S::zero());
        }
        (self.eval)(&core)
    }
}

impl<S> fmt::Debug for LengthFunction<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LengthFunction({:?}, {})", self.provenance, self.label)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CombinationReport<S> {
    pub max_deviation: S,
    pub witness: Option<ReducedWord>,
    pub evaluated: usize,
    /// Words on which one of the functions was undefined.
    pub skipped: usize,
}

/// `max_w |ℓ_blend(w) − (λ ℓ1(w) + (1 − λ) ℓ0(w))|`.
pub fn convex_combination_length_check<S: Scalar>(
    l0: &LengthFunction<S>,
    l1: &LengthFunction<S>,
    blend: &LengthFunction<S>,
    lambda: &S,
    words: &[ReducedWord],
) -> CombinationReport<S> {
    let mut rep = CombinationReport { max_deviation: S::zero(), witness: None, evaluated: 0, skipped: 0 };
    for w in words {
        let (Some(a), Some(b), Some(c)) = (l0.eval(w), l1.eval(w), blend.eval(w)) else {
            rep.skipped += 1;
            continue;
        };
        rep.evaluated += 1;
        let dev = (c - (lambda.clone() * b + (S::one() - lambda.clone()) * a)).abs();
        if dev > rep.max_deviation {
            rep.max_deviation = dev;
            rep.witness = Some(w.clone());
        }
    }
    rep
}

/// Words of length at most `maxlen`, paired as `(u, v)` with
/// `|u| + |v| <= maxlen` so that every product stays within the bound.
#[derive(Clone, Debug, PartialEq)]
pub struct WordSet {
    pub words: Vec<ReducedWord>,
    pub maxlen: usize,
}

impl WordSet {
    pub fn up_to(rank: usize, maxlen: usize) -> Self {
        let basis = Basis::new(rank.max(1)).expect("rank is at least one");
        let words = (1..=maxlen).flat_map(|n| reduced_words(&basis, n)).collect();
        WordSet { words, maxlen }
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&ReducedWord, &ReducedWord)> {
        self.words.iter().flat_map(move |u| self.words.iter().filter(move |v| u.len() + v.len() <= self.maxlen).map(move |v| (u, v)))
    }
}

/// Conditions on the length function of a tree action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Axiom {
    NonNegative,
    /// `‖w‖ = ‖w⁻¹‖`.
    Inverse,
    /// `‖u v u⁻¹‖ = ‖v‖`.
    Conjugacy,
    /// `‖uv‖ = ‖uv⁻¹‖` or `max(‖uv‖, ‖uv⁻¹‖) <= ‖u‖ + ‖v‖`.
    Products,
    /// For `‖u‖, ‖v‖ > 0`: `‖uv‖ = ‖uv⁻¹‖ > ‖u‖ + ‖v‖` or
    /// `max(‖uv‖, ‖uv⁻¹‖) = ‖u‖ + ‖v‖`.
    Hyperbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub u: ReducedWord,
    pub v: Option<ReducedWord>,
    /// The values involved, rendered for reports.
    pub values: Vec<String>,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} u={}", self.axiom, self.u)?;
        if let Some(v) = &self.v {
            write!(f, " v={v}")?;
        }
        write!(f, " values={}", self.values.join(","))
    }
}

/// `passes` means no violation was found on the word set, not that the
/// function comes from a tree.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub passes: bool,
    pub witness: Option<AxiomViolation>,
    pub pairs_checked: usize,
}

/// Searches the word set for a violation of the conditions in [`Axiom`],
/// checking single words first and then pairs in word-set order.
pub fn length_axiom_check<S: Scalar>(lf: &LengthFunction<S>, words: &WordSet) -> AxiomReport {
    let fail = |axiom, u: &ReducedWord, v: Option<&ReducedWord>, vals: &[&S], pairs| AxiomReport {
        passes: false,
        witness: Some(AxiomViolation { axiom, u: u.clone(), v: v.cloned(), values: vals.iter().map(|s| s.to_string()).collect() }),
        pairs_checked: pairs,
    };
    let same = |a: &S, b: &S| a.approx_eq(b);
    for u in &words.words {
        let Some(x) = lf.eval(u) else { continue };
        if x.definitely_lt(&S::zero()) {
            return fail(Axiom::NonNegative, u, None, &[&x], 0);
        }
        if let Some(y) = lf.eval(&u.inverse()) {
            if !same(&x, &y) {
                return fail(Axiom::Inverse, u, None, &[&x, &y], 0);
            }
        }
    }
    let mut pairs = 0;
    for (u, v) in words.pairs() {
        pairs += 1;
        let conj = u.mul(v).mul(&u.inverse());
        let (Some(lu), Some(lv)) = (lf.eval(u), lf.eval(v)) else { continue };
        if let Some(lc) = lf.eval(&conj) {
            if !same(&lc, &lv) {
                return fail(Axiom::Conjugacy, u, Some(v), &[&lc, &lv], pairs);
            }
        }
        let (Some(p), Some(m)) = (lf.eval(&u.mul(v)), lf.eval(&u.mul(&v.inverse()))) else { continue };
        let sum = lu.clone() + lv.clone();
        let top = S::max_of(p.clone(), m.clone());
        if !same(&p, &m) && sum.definitely_lt(&top) {
            return fail(Axiom::Products, u, Some(v), &[&p, &m, &lu, &lv], pairs);
        }
        if lu.is_positive() && lv.is_positive() {
            let disjoint = same(&p, &m) && sum.definitely_lt(&p);
            if !disjoint && !same(&top, &sum) {
                return fail(Axiom::Hyperbolic, u, Some(v), &[&p, &m, &lu, &lv], pairs);
            }
        }
    }
    AxiomReport { passes: true, witness: None, pairs_checked: pairs }
}

/// [`length_axiom_check`] on `λ ℓ1 + (1 − λ) ℓ0` for each `λ` of a grid.
pub fn axiom_scan<S: Scalar>(l0: &LengthFunction<S>, l1: &LengthFunction<S>, grid: &[S], words: &WordSet) -> Vec<(S, AxiomReport)> {
    grid.iter().map(|lam| (lam.clone(), length_axiom_check(&LengthFunction::combination(l0, l1, lam), words))).collect()
}
