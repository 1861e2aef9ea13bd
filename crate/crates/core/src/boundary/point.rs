use std::fmt;
use std::sync::Arc;

use super::word::{parse_symbols, reduce, Letter, ReducedWord};
use crate::error::WordError;

/// Number of letters used to identify points given by a generator.
pub const STREAM_KEY_DEPTH: usize = 128;

type LetterFn = Arc<dyn Fn(usize) -> Letter + Send + Sync>;

/// A point of `∂F_N`: an infinite reduced word.
///
/// Eventually periodic points `u v v v ...` are stored in a canonical form
/// (shortest prefix, primitive period) so that equality is exact. Other
/// points come from a generator `i ↦ letter i` and are compared on their
/// first [`STREAM_KEY_DEPTH`] letters.
#[derive(Clone)]
pub enum BoundaryPoint {
    Periodic { prefix: Vec<Letter>, period: Vec<Letter> },
    Stream { label: String, letters: LetterFn },
}

/// Identity of a boundary point used for hashing and set membership.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKey {
    Periodic(Vec<Letter>, Vec<Letter>),
    Prefix(Vec<Letter>),
}

impl BoundaryPoint {
    /// `prefix · period^∞`, reduced and put in canonical form.
    pub fn periodic(prefix: &[Letter], period: &[Letter]) -> Result<BoundaryPoint, WordError> {
        let (u, core) = reduce(period).cyclic_reduction();
        if core.is_empty() {
            return Err(WordError::EmptyPeriod);
        }
        // (u c u⁻¹)^∞ = u c^∞
        let mut head = reduce(prefix).mul(&u).letters().to_vec();
        let mut per = core.letters().to_vec();
        // absorb cancellation between the head and the periodic tail
        while let Some(&l) = head.last() {
            if l != per[0].inverse() {
                break;
            }
            head.pop();
            per.rotate_left(1);
        }
        // shortest prefix
        while let Some(&l) = head.last() {
            if l != *per.last().expect("period is nonempty") {
                break;
            }
            head.pop();
            per.rotate_right(1);
        }
        // primitive period
        let n = per.len();
        if let Some(d) = (1..n).find(|&d| n % d == 0 && (d..n).all(|i| per[i] == per[i - d])) {
            per.truncate(d);
        }
        Ok(BoundaryPoint::Periodic { prefix: head, period: per })
    }

    /// `w^∞` for a nonempty word.
    pub fn power(w: &ReducedWord) -> Result<BoundaryPoint, WordError> {
        BoundaryPoint::periodic(&[], w.letters())
    }

    /// A point given letter by letter; the caller guarantees the word is
    /// reduced.
    pub fn from_fn(label: impl Into<String>, f: impl Fn(usize) -> Letter + Send + Sync + 'static) -> BoundaryPoint {
        BoundaryPoint::Stream { label: label.into(), letters: Arc::new(f) }
    }

    /// Parses `prefix;period`, e.g. `ab;ba` for `ab(ba)^∞`.
    pub fn parse(s: &str) -> Result<BoundaryPoint, WordError> {
        let (p, q) = s.trim().split_once(';').ok_or_else(|| WordError::BoundarySyntax(s.to_string()))?;
        let prefix = if p.trim().is_empty() { Vec::new() } else { parse_symbols(p)? };
        let period = parse_symbols(q)?;
        BoundaryPoint::periodic(&prefix, &period)
    }

    pub fn letter(&self, i: usize) -> Letter {
        match self {
            BoundaryPoint::Periodic { prefix, period } => {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    period[(i - prefix.len()) % period.len()]
                }
            }
            BoundaryPoint::Stream { letters, .. } => letters(i),
        }
    }

    pub fn prefix(&self, k: usize) -> Vec<Letter> {
        (0..k).map(|i| self.letter(i)).collect()
    }

    pub fn prefix_word(&self, k: usize) -> ReducedWord {
        reduce(&self.prefix(k))
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, BoundaryPoint::Periodic { .. })
    }

    pub fn key(&self) -> PointKey {
        match self {
            BoundaryPoint::Periodic { prefix, period } => PointKey::Periodic(prefix.clone(), period.clone()),
            BoundaryPoint::Stream { .. } => PointKey::Prefix(self.prefix(STREAM_KEY_DEPTH)),
        }
    }

    /// Largest generator index appearing in the first `k` letters (all of a
    /// periodic point).
    pub fn rank_used(&self, k: usize) -> usize {
        match self {
            BoundaryPoint::Periodic { prefix, period } => prefix.iter().chain(period).map(|l| l.index()).max().unwrap_or(0),
            BoundaryPoint::Stream { .. } => self.prefix(k).iter().map(|l| l.index()).max().unwrap_or(0),
        }
    }
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl fmt::Debug for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BoundaryPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |v: &[Letter]| v.iter().map(|l| l.to_char()).collect::<String>();
        match self {
            BoundaryPoint::Periodic { prefix, period } => write!(f, "{};{}", s(prefix), s(period)),
            BoundaryPoint::Stream { label, .. } => write!(f, "{label}[{}...]", s(&self.prefix(16))),
        }
    }
}

/// `w · X`, with the cancellation between `w` and `X` absorbed.
pub fn act(w: &ReducedWord, x: &BoundaryPoint) -> BoundaryPoint {
    match x {
        BoundaryPoint::Periodic { prefix, period } => {
            let head = w.mul(&reduce(prefix));
            BoundaryPoint::periodic(head.letters(), period).expect("period stays nonempty")
        }
        BoundaryPoint::Stream { label, letters } => {
            let wl = w.letters();
            let mut c = 0;
            while c < wl.len() && letters(c) == wl[wl.len() - 1 - c].inverse() {
                c += 1;
            }
            let head = wl[..wl.len() - c].to_vec();
            let inner = letters.clone();
            BoundaryPoint::from_fn(format!("{w}.{label}"), move |i| if i < head.len() { head[i] } else { inner(i - head.len() + c) })
        }
    }
}

/// Length of the longest common prefix, capped at `k`.
pub fn common_prefix(x: &BoundaryPoint, y: &BoundaryPoint, k: usize) -> usize {
    (0..k).find(|&i| x.letter(i) != y.letter(i)).unwrap_or(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BoundaryPoint {
        BoundaryPoint::parse(s).unwrap()
    }

    fn w(s: &str) -> ReducedWord {
        ReducedWord::parse(s).unwrap()
    }

    fn text(v: &[Letter]) -> String {
        v.iter().map(|l| l.to_char()).collect()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(p("ab;ba").to_string(), "ab;ba");
        assert_eq!(p(";abab").to_string(), ";ab");
        assert_eq!(p("b;ab"), p(";ba"));
        assert_eq!(p(";abA").to_string(), "a;b");
        assert_eq!(p("aaB;b"), p("aa;b"));
        assert_eq!(text(&p("aaB;b").prefix(4)), "aabb");
        assert!(matches!(BoundaryPoint::parse(";aA"), Err(WordError::EmptyPeriod)));
        assert!(BoundaryPoint::parse("ab").is_err());
    }

    #[test]
    fn action_examples() {
        let x = p(";AB");
        assert_eq!(act(&ReducedWord::empty(), &x), x);
        assert_eq!(act(&w("a"), &p(";A")), p(";A"));
        assert_eq!(act(&w("b"), &p(";A")).to_string(), "b;A");
        // prefix identity: act(w, X).prefix(k) = reduce(w · X.prefix(k + |w|)) cut to k
        for ws in ["", "a", "ba", "BAb", "abab"] {
            let ww = w(ws);
            for xs in [";ab", "B;a", "aB;bA", ";Ab"] {
                let x = p(xs);
                for k in 0..10 {
                    let want: Vec<Letter> = reduce(&[ww.letters(), x.prefix(k + ww.len()).as_slice()].concat()).letters()[..k].to_vec();
                    assert_eq!(act(&ww, &x).prefix(k), want);
                }
            }
        }
    }

    #[test]
    fn streams_act_lazily() {
        // a b a a b a a a b ...: never periodic
        let x = BoundaryPoint::from_fn("sturm", |i| {
            let mut n = 0;
            let mut pos = 0;
            loop {
                n += 1;
                if i < pos + n {
                    return Letter(1);
                }
                if i == pos + n {
                    return Letter(2);
                }
                pos += n + 1;
            }
        });
        assert_eq!(text(&x.prefix(9)), "abaabaaab");
        let y = act(&w("bA"), &x);
        assert_eq!(text(&y.prefix(6)), "bbaaba");
        let back = act(&w("aB"), &y);
        assert_eq!(back, x);
    }

    #[test]
    fn common_prefixes() {
        assert_eq!(common_prefix(&p(";a"), &p(";a"), 7), 7);
        assert_eq!(common_prefix(&p(";a"), &p(";b"), 7), 0);
        assert_eq!(common_prefix(&p(";ab"), &p("ababab;ba"), 20), 6);
    }
}
