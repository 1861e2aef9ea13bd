use std::collections::{HashSet, VecDeque};
use std::fmt;

use super::point::{act, common_prefix, BoundaryPoint, PointKey, STREAM_KEY_DEPTH};
use super::word::ReducedWord;
use crate::error::WordError;

/// An element `(X, X')` of `∂²F_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryPair {
    pub x: BoundaryPoint,
    pub y: BoundaryPoint,
}

impl BoundaryPair {
    /// Rejects pairs on the diagonal (equal periodic points, or generated
    /// points agreeing on the first [`STREAM_KEY_DEPTH`] letters).
    pub fn new(x: BoundaryPoint, y: BoundaryPoint) -> Result<BoundaryPair, WordError> {
        if x == y {
            return Err(WordError::DiagonalPair(common_prefix(&x, &y, STREAM_KEY_DEPTH)));
        }
        Ok(BoundaryPair { x, y })
    }

    /// Parses `X | X'`.
    pub fn parse(s: &str) -> Result<BoundaryPair, WordError> {
        let (a, b) = s.split_once('|').ok_or_else(|| WordError::BoundarySyntax(s.to_string()))?;
        BoundaryPair::new(BoundaryPoint::parse(a)?, BoundaryPoint::parse(b)?)
    }

    pub fn flip(&self) -> BoundaryPair {
        BoundaryPair { x: self.y.clone(), y: self.x.clone() }
    }

    /// `w · (X, X')`.
    pub fn act(&self, w: &ReducedWord) -> BoundaryPair {
        BoundaryPair { x: act(w, &self.x), y: act(w, &self.y) }
    }

    pub fn key(&self) -> (PointKey, PointKey) {
        (self.x.key(), self.y.key())
    }
}

impl fmt::Display for BoundaryPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} | {}", self.x, self.y)
    }
}

pub fn flip(p: &BoundaryPair) -> BoundaryPair {
    p.flip()
}

/// Parses a pair file: one `X | X'` per line, `#` comments.
pub fn parse_pairs(text: &str) -> Result<Vec<BoundaryPair>, (usize, WordError)> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            out.push(BoundaryPair::parse(line).map_err(|e| (i + 1, e))?);
        }
    }
    Ok(out)
}

/// A pair together with the number of word applications that produced it.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleEntry {
    pub pair: BoundaryPair,
    pub layer: usize,
}

/// A finite piece of an algebraic lamination.
///
/// The sample records the words it was saturated under and the radius
/// `depth`: it is closed under the flip, and every pair of layer below
/// `depth` has its images under the recorded words and their inverses in
/// the sample.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LaminationSample {
    pub entries: Vec<SampleEntry>,
    pub words: Vec<ReducedWord>,
    pub depth: usize,
}

impl LaminationSample {
    /// Seed pairs at layer 0, not yet saturated.
    pub fn from_pairs(pairs: impl IntoIterator<Item = BoundaryPair>) -> Self {
        let mut s = LaminationSample::default();
        let mut seen = HashSet::new();
        for p in pairs {
            if seen.insert(p.key()) {
                s.entries.push(SampleEntry { pair: p, layer: 0 });
            }
        }
        s
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn pairs(&self) -> impl Iterator<Item = &BoundaryPair> {
        self.entries.iter().map(|e| &e.pair)
    }

    pub fn contains(&self, p: &BoundaryPair) -> bool {
        let k = p.key();
        self.entries.iter().any(|e| e.pair.key() == k)
    }

    fn actors(&self) -> Vec<ReducedWord> {
        let mut out: Vec<ReducedWord> = Vec::new();
        for w in &self.words {
            for v in [w.clone(), w.inverse()] {
                if !v.is_empty() && !out.contains(&v) {
                    out.push(v);
                }
            }
        }
        out
    }
}

/// Closes `sample` under the flip and, breadth first up to `depth` word
/// applications, under the action of `words` and their inverses.
pub fn saturate(sample: &LaminationSample, words: &[ReducedWord], depth: usize) -> LaminationSample {
    let mut out = LaminationSample { entries: Vec::new(), words: sample.words.clone(), depth: sample.depth.max(depth) };
    for w in words {
        if !out.words.contains(w) {
            out.words.push(w.clone());
        }
    }
    let actors = out.actors();
    let mut seen: HashSet<(PointKey, PointKey)> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut push = |out: &mut LaminationSample, pair: BoundaryPair, layer: usize, queue: &mut VecDeque<usize>| {
        if seen.insert(pair.key()) {
            out.entries.push(SampleEntry { pair, layer });
            queue.push_back(out.entries.len() - 1);
        }
    };
    let mut seeds: Vec<&SampleEntry> = sample.entries.iter().collect();
    seeds.sort_by_key(|e| e.layer);
    for e in seeds {
        push(&mut out, e.pair.clone(), e.layer, &mut queue);
        push(&mut out, e.pair.flip(), e.layer, &mut queue);
    }
    while let Some(i) = queue.pop_front() {
        let SampleEntry { pair, layer } = out.entries[i].clone();
        if layer >= out.depth {
            continue;
        }
        for w in &actors {
            let img = pair.act(w);
            push(&mut out, img.flip(), layer + 1, &mut queue);
            push(&mut out, img, layer + 1, &mut queue);
        }
    }
    out
}

/// Result of a closure audit.
#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport {
    pub flip_closed: bool,
    pub action_closed: bool,
    /// A pair whose flip or image is missing, with the offending word
    /// (`None` for the flip).
    pub missing: Option<(BoundaryPair, Option<ReducedWord>)>,
}

impl AuditReport {
    pub fn passes(&self) -> bool {
        self.flip_closed && self.action_closed
    }
}

/// Checks flip closure, and closure under the recorded words for every pair
/// of layer below the recorded depth.
pub fn audit(sample: &LaminationSample) -> AuditReport {
    let keys: HashSet<(PointKey, PointKey)> = sample.entries.iter().map(|e| e.pair.key()).collect();
    for e in &sample.entries {
        if !keys.contains(&e.pair.flip().key()) {
            return AuditReport { flip_closed: false, action_closed: true, missing: Some((e.pair.clone(), None)) };
        }
    }
    let actors = sample.actors();
    for e in sample.entries.iter().filter(|e| e.layer < sample.depth) {
        for w in &actors {
            if !keys.contains(&e.pair.act(w).key()) {
                return AuditReport { flip_closed: true, action_closed: false, missing: Some((e.pair.clone(), Some(w.clone()))) };
            }
        }
    }
    AuditReport { flip_closed: true, action_closed: true, missing: None }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(s: &str) -> BoundaryPair {
        BoundaryPair::parse(s).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    #[test]
    fn flips() {
        let p = pair(";ab | ;BA");
        assert_eq!(p.flip().flip(), p);
        assert_eq!(p.flip().x, p.y);
        assert!(matches!(BoundaryPair::parse(";a | ;aa"), Err(WordError::DiagonalPair(_))));
    }

    #[test]
    fn fixed_pair_saturates_to_its_flip_closure() {
        let s = LaminationSample::from_pairs([pair(";a | ;A")]);
        for d in [0, 1, 5] {
            let sat = saturate(&s, &[w("a")], d);
            assert_eq!(sat.len(), 2);
            assert!(sat.contains(&pair(";A | ;a")));
            assert!(audit(&sat).passes());
        }
        let none = saturate(&LaminationSample::from_pairs([pair(";ab | b;a")]), &[], 4);
        assert_eq!(none.len(), 2);
    }

    /// Orbit of one pair under words of length <= 3, by direct expansion.
    fn expand(p: &BoundaryPair, depth: usize) -> usize {
        let basis = crate::boundary::Basis::new(2).unwrap();
        let mut keys = HashSet::new();
        for n in 0..=depth {
            for g in crate::boundary::reduced_words(&basis, n) {
                let img = p.act(&g);
                keys.insert(img.flip().key());
                keys.insert(img.key());
            }
        }
        keys.len()
    }

    #[test]
    fn orbit_sizes_match_direct_expansion() {
        let p = pair(";ab | ;BA");
        let s = LaminationSample::from_pairs([p.clone()]);
        for d in 0..4 {
            let sat = saturate(&s, &[w("a"), w("b")], d);
            assert_eq!(sat.len(), expand(&p, d), "depth {d}");
            assert!(audit(&sat).passes());
            assert_eq!(saturate(&sat, &[w("a"), w("b")], d), sat);
        }
    }

    #[test]
    fn audit_finds_missing_images() {
        let mut s = LaminationSample::from_pairs([pair(";a | ;b"), pair(";b | ;a")]);
        assert!(audit(&s).passes());
        s.words.push(w("a"));
        s.depth = 1;
        let rep = audit(&s);
        assert!(rep.flip_closed && !rep.action_closed);
        let one = LaminationSample::from_pairs([pair(";a | ;b")]);
        assert!(!audit(&one).flip_closed);
    }

    #[test]
    fn pair_files() {
        let ps = parse_pairs("# sample\n;ab | ;BA\n\nb;a | ;A  # tail\n").unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(parse_pairs(";a | ;a").unwrap_err().0, 1);
    }
}
