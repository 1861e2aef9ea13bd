use std::collections::{HashMap, VecDeque};

use super::{sort_records, ConjugacyClassRecord, Flag, Hypotheses, IsometricAction, TranslationLength};
use crate::boundary::{BoundaryPoint, Letter, ReducedWord};
use crate::error::QmapError;
use crate::num::Scalar;
use crate::observers::{tail_start, LinePoint, RealLine};

/// `F_N` acting on the real line by translations: `w · x = x + μ(w)`, where
/// `μ` is the homomorphism to `R` given by one weight per generator.
///
/// Every element of the kernel of `μ` fixes the whole line, so for rank at
/// least 2 arc stabilizers are far from cyclic and the action is not very
/// small. It is a computable sandbox for the machinery, not an instance of
/// the trees the theory is about.
#[derive(Clone, Debug)]
pub struct LineAction<S> {
    line: RealLine<S>,
    weights: Vec<S>,
    basepoint: S,
}

impl<S: Scalar> LineAction<S> {
    pub fn new(weights: Vec<S>) -> Result<Self, QmapError> {
        if weights.is_empty() {
            return Err(QmapError::WeightCount { expected: 1, got: 0 });
        }
        Ok(LineAction { line: RealLine::new(), weights, basepoint: S::zero() })
    }

    pub fn with_basepoint(mut self, p: S) -> Self {
        self.basepoint = p;
        self
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    fn step(&self, l: Letter) -> S {
        let m = self.weights[l.index() - 1].clone();
        if l.is_inverse() {
            -m
        } else {
            m
        }
    }

    /// `μ(w)`, the signed weighted exponent sum.
    pub fn mu(&self, w: &ReducedWord) -> S {
        w.letters().iter().fold(S::zero(), |acc, &l| acc + self.step(l))
    }

    fn mu_of_exponents(&self, e: &[i64]) -> S {
        e.iter().zip(&self.weights).fold(S::zero(), |acc, (&k, m)| acc + S::from_i128(k as i128) * m.clone())
    }

    /// Whether the image of `μ` is dense in `R`, when decidable.
    pub fn dense_image(&self) -> Flag {
        let mut unknown = false;
        for (i, a) in self.weights.iter().enumerate() {
            for b in &self.weights[i + 1..] {
                match a.rationally_independent(b) {
                    Some(true) => return Flag::Holds,
                    Some(false) => {}
                    None => unknown = true,
                }
            }
        }
        if unknown {
            Flag::Unknown
        } else {
            Flag::Fails
        }
    }
}

impl<S: Scalar> IsometricAction for LineAction<S> {
    type Oracle = RealLine<S>;

    fn oracle(&self) -> &RealLine<S> {
        &self.line
    }

    fn rank(&self) -> usize {
        self.weights.len()
    }

    fn apply(&self, w: &ReducedWord, p: &LinePoint<S>) -> LinePoint<S> {
        match p {
            LinePoint::At(x) => LinePoint::At(x.clone() + self.mu(w)),
            end => end.clone(),
        }
    }

    fn basepoint(&self) -> LinePoint<S> {
        LinePoint::At(self.basepoint.clone())
    }

    fn hypotheses(&self) -> Hypotheses {
        let free = self.weights.len() == 1 && !self.weights[0].approx_zero();
        Hypotheses {
            very_small: if free { Flag::Holds } else { Flag::Fails },
            dense_orbits: self.dense_image(),
            note: "arc stabilizers contain the kernel of the weight homomorphism",
        }
    }

    fn orbit(&self, x: &BoundaryPoint, p: &LinePoint<S>, depth: usize) -> Vec<LinePoint<S>> {
        let LinePoint::At(start) = p else {
            return vec![p.clone(); depth];
        };
        let mut acc = start.clone();
        (0..depth)
            .map(|i| {
                acc = acc.clone() + self.step(x.letter(i));
                LinePoint::At(acc.clone())
            })
            .collect()
    }

    /// When the second half of the orbit runs through at least one full
    /// period of an eventually periodic point, the orbit escapes exactly when
    /// the period has nonzero weight. Otherwise it is declared escaping when
    /// its second half lies strictly beyond the basepoint and the first half.
    fn escape(&self, x: &BoundaryPoint, p: &LinePoint<S>, orbit: &[LinePoint<S>]) -> Option<LinePoint<S>> {
        let LinePoint::At(start) = p else {
            return Some(p.clone());
        };
        let h = tail_start(orbit.len());
        // the tail window lies in the periodic part and covers a period
        let covered = |prefix: &[Letter], period: &[Letter]| prefix.len() < h && orbit.len() + 1 - h >= period.len();
        match x {
            BoundaryPoint::Periodic { prefix, period } if covered(prefix, period) => {
                let drift = period.iter().fold(S::zero(), |acc, &l| acc + self.step(l));
                return if drift.is_positive() {
                    Some(LinePoint::PosInf)
                } else if (-drift).is_positive() {
                    Some(LinePoint::NegInf)
                } else {
                    None
                };
            }
            _ => {}
        }
        if h < 2 {
            return None;
        }
        let coord = |q: &LinePoint<S>| q.coordinate().cloned().unwrap_or_else(S::zero);
        let head = std::iter::once(start.clone()).chain(orbit[..h - 1].iter().map(coord));
        let (lo, hi) = head.fold((start.clone(), start.clone()), |(lo, hi), v| (S::min_of(lo, v.clone()), S::max_of(hi, v)));
        let tail: Vec<S> = orbit[h - 1..].iter().map(coord).collect();
        if tail.iter().all(|v| hi.definitely_lt(v)) {
            Some(LinePoint::PosInf)
        } else if tail.iter().all(|v| v.definitely_lt(&lo)) {
            Some(LinePoint::NegInf)
        } else {
            None
        }
    }

    fn translation_length(&self, w: &ReducedWord) -> TranslationLength<S> {
        TranslationLength { value: self.mu(w).abs(), exact: true, samples: 0 }
    }

    fn small_words(&self, epsilon: &S, maxlen: usize) -> Vec<ConjugacyClassRecord<S>> {
        small_words_search(self, epsilon, maxlen)
    }
}

/// Largest exponent box for which the reachability table is built.
const MAX_TABLE: usize = 2_000_000;

/// Exponent vectors within the L1 ball of radius `m`, indexed in a box.
struct ExponentTable {
    rank: usize,
    m: i64,
    side: usize,
    /// L1 distance to the nearest vector with `|μ| < ε`; `u32::MAX` when none.
    reach: Vec<u32>,
}

impl ExponentTable {
    fn build<S: Scalar>(action: &LineAction<S>, epsilon: &S, m: usize) -> Option<Self> {
        let rank = action.weights.len();
        let side = 2 * m + 1;
        let size = side.checked_pow(rank as u32).filter(|&s| s <= MAX_TABLE)?;
        let t = ExponentTable { rank, m: m as i64, side, reach: vec![u32::MAX; size] };
        let mut reach = t.reach.clone();
        let mut queue = VecDeque::new();
        for (idx, r) in reach.iter_mut().enumerate() {
            let e = t.decode(idx);
            if e.iter().map(|v| v.abs()).sum::<i64>() <= t.m && action.mu_of_exponents(&e).abs() < *epsilon {
                *r = 0;
                queue.push_back(idx);
            }
        }
        while let Some(idx) = queue.pop_front() {
            let e = t.decode(idx);
            for i in 0..rank {
                for s in [-1, 1] {
                    let mut f = e.clone();
                    f[i] += s;
                    if f.iter().map(|v| v.abs()).sum::<i64>() > t.m {
                        continue;
                    }
                    let j = t.encode(&f);
                    if reach[j] == u32::MAX {
                        reach[j] = reach[idx] + 1;
                        queue.push_back(j);
                    }
                }
            }
        }
        Some(ExponentTable { reach, ..t })
    }

    fn encode(&self, e: &[i64]) -> usize {
        e.iter().rev().fold(0, |acc, &v| acc * self.side + (v + self.m) as usize)
    }

    fn decode(&self, mut idx: usize) -> Vec<i64> {
        (0..self.rank)
            .map(|_| {
                let v = (idx % self.side) as i64 - self.m;
                idx /= self.side;
                v
            })
            .collect()
    }

    fn reachable(&self, e: &[i64], budget: usize) -> bool {
        let r = self.reach[self.encode(e)];
        r != u32::MAX && r as usize <= budget
    }
}

/// Cyclically reduced words of length at most `maxlen` with `|μ(w)| < ε`,
/// one per conjugacy class (its least rotation), sorted by translation
/// length, then length, then letters.
///
/// The search runs depth first and abandons a prefix as soon as no exponent
/// vector reachable with the remaining letters has weight below `ε`.
pub fn small_words_search<S: Scalar>(action: &LineAction<S>, epsilon: &S, maxlen: usize) -> Vec<ConjugacyClassRecord<S>> {
    let rank = action.weights.len();
    let table = ExponentTable::build(action, epsilon, maxlen);
    let letters: Vec<Letter> = (1..=rank).flat_map(|k| [Letter::generator(k), Letter::generator(k).inverse()]).collect();
    let mut values: HashMap<Vec<i64>, Option<S>> = HashMap::new();
    let mut out = Vec::new();
    let mut word = Vec::with_capacity(maxlen);
    let mut exps = vec![0i64; rank];

    struct Ctx<'a, S> {
        action: &'a LineAction<S>,
        epsilon: &'a S,
        maxlen: usize,
        letters: &'a [Letter],
        table: Option<&'a ExponentTable>,
    }

    fn dfs<S: Scalar>(
        cx: &Ctx<'_, S>,
        word: &mut Vec<Letter>,
        exps: &mut Vec<i64>,
        values: &mut HashMap<Vec<i64>, Option<S>>,
        out: &mut Vec<ConjugacyClassRecord<S>>,
    ) {
        if !word.is_empty() && is_cyclically_reduced(word) && is_least_rotation(word) {
            let v = values
                .entry(exps.clone())
                .or_insert_with(|| {
                    let m = cx.action.mu_of_exponents(exps).abs();
                    (m < *cx.epsilon).then_some(m)
                })
                .clone();
            if let Some(tl) = v {
                out.push(ConjugacyClassRecord {
                    word: ReducedWord::parse(&word_text(word)).expect("letters are valid"),
                    translation_length: tl,
                });
            }
        }
        if word.len() == cx.maxlen {
            return;
        }
        for &l in cx.letters {
            if let Some(&last) = word.last() {
                if l == last.inverse() {
                    continue;
                }
            }
            // a least rotation starts with its least letter
            if word.first().is_some_and(|&f| l < f) {
                continue;
            }
            let i = l.index() - 1;
            exps[i] += if l.is_inverse() { -1 } else { 1 };
            if cx.table.is_none_or(|t| t.reachable(exps, cx.maxlen - word.len() - 1)) {
                word.push(l);
                dfs(cx, word, exps, values, out);
                word.pop();
            }
            exps[i] -= if l.is_inverse() { -1 } else { 1 };
        }
    }

    let cx = Ctx { action, epsilon, maxlen, letters: &letters, table: table.as_ref() };
    if maxlen > 0 {
        dfs(&cx, &mut word, &mut exps, &mut values, &mut out);
    }
    sort_records(&mut out);
    out
}

fn is_cyclically_reduced(w: &[Letter]) -> bool {
    w.len() == 1 || w[0] != w[w.len() - 1].inverse()
}

fn is_least_rotation(w: &[Letter]) -> bool {
    let n = w.len();
    (1..n).all(|r| {
        for i in 0..n {
            let a = w[i];
            let b = w[(i + r) % n];
            if a != b {
                return a < b;
            }
        }
        true
    })
}

fn word_text(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_char()).collect()
}

/// Parses an action file: a `line` header, then one `weight <gen> <value>`
/// line per generator and optionally `basepoint <value>`. `#` starts a
/// comment.
pub fn parse_action<S: Scalar>(text: &str) -> Result<LineAction<S>, QmapError> {
    let err = |line: usize, message: String| QmapError::Parse { line, message };
    let mut header = false;
    let mut weights: Vec<Option<S>> = Vec::new();
    let mut basepoint = S::zero();
    for (i, raw) in text.lines().enumerate() {
        let n = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        match parts.as_slice() {
            ["line"] if !header => header = true,
            _ if !header => return Err(err(n, "expected `line` header".into())),
            ["weight", g, v] => {
                let mut cs = g.chars();
                let (Some(c), None) = (cs.next(), cs.next()) else {
                    return Err(err(n, format!("bad generator `{g}`")));
                };
                let l = Letter::from_char(c).map_err(|e| err(n, e.to_string()))?;
                if l.is_inverse() {
                    return Err(err(n, format!("generator `{g}` must be lowercase")));
                }
                let k = l.index();
                if weights.len() < k {
                    weights.resize(k, None);
                }
                if weights[k - 1].is_some() {
                    return Err(err(n, format!("duplicate weight for `{g}`")));
                }
                weights[k - 1] = Some(S::parse_literal(v).map_err(|e| err(n, e.to_string()))?);
            }
            ["basepoint", v] => basepoint = S::parse_literal(v).map_err(|e| err(n, e.to_string()))?,
            _ => return Err(err(n, format!("unrecognised line `{line}`"))),
        }
    }
    if !header {
        return Err(err(0, "missing `line` header".into()));
    }
    let got = weights.iter().filter(|w| w.is_some()).count();
    let weights = weights.into_iter().collect::<Option<Vec<S>>>().ok_or(QmapError::WeightCount { expected: got + 1, got })?;
    Ok(LineAction::new(weights)?.with_basepoint(basepoint))
}
