use std::cmp::Ordering;
use std::fmt;

use crate::error::WordError;

/// A generator (`Letter(k)`, `k >= 1`) or its inverse (`Letter(-k)`).
///
/// Generators print as `a b c ...`, inverses as `A B C ...`. Letters are
/// ordered `a < A < b < B < ...`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter(pub i32);

impl Letter {
    pub fn generator(k: usize) -> Letter {
        Letter(k as i32)
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// 1-based generator index.
    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn from_char(c: char) -> Result<Letter, WordError> {
        match c {
            'a'..='z' => Ok(Letter(c as i32 - 'a' as i32 + 1)),
            'A'..='Z' => Ok(Letter(-(c as i32 - 'A' as i32 + 1))),
            _ => Err(WordError::UnknownSymbol(c)),
        }
    }

    pub fn to_char(self) -> char {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        (base + (self.index() - 1) as u8) as char
    }

    fn key(self) -> (usize, bool) {
        (self.index(), self.is_inverse())
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_char())
    }
}

/// Free basis of `F_N`, `2 <= N <= 26`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Basis {
    rank: usize,
}

impl Basis {
    pub fn new(rank: usize) -> Result<Basis, WordError> {
        if rank < 2 {
            return Err(WordError::RankTooSmall(rank));
        }
        if rank > 26 {
            return Err(WordError::RankTooLarge(rank));
        }
        Ok(Basis { rank })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// All `2N` letters in order `a, A, b, B, ...`.
    pub fn letters(&self) -> Vec<Letter> {
        (1..=self.rank as i32).flat_map(|k| [Letter(k), Letter(-k)]).collect()
    }

    pub fn generators(&self) -> Vec<Letter> {
        (1..=self.rank).map(Letter::generator).collect()
    }

    pub fn check(&self, l: Letter) -> Result<Letter, WordError> {
        if l.0 == 0 || l.index() > self.rank {
            Err(WordError::LetterOutOfRange(l.0))
        } else {
            Ok(l)
        }
    }

    /// Parses and freely reduces a word, rejecting letters outside the basis.
    pub fn parse_word(&self, s: &str) -> Result<ReducedWord, WordError> {
        let w = ReducedWord::parse(s)?;
        for &l in w.letters() {
            self.check(l)?;
        }
        Ok(w)
    }
}

/// Parses a symbol string without reducing it. `1` and `ε` denote the empty
/// word; whitespace is ignored.
pub fn parse_symbols(s: &str) -> Result<Vec<Letter>, WordError> {
    let t = s.trim();
    if t == "1" || t == "ε" {
        return Ok(Vec::new());
    }
    t.chars().filter(|c| !c.is_whitespace()).map(Letter::from_char).collect()
}

/// Free reduction.
pub fn reduce(symbols: &[Letter]) -> ReducedWord {
    let mut out: Vec<Letter> = Vec::with_capacity(symbols.len());
    for &l in symbols {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    ReducedWord(out)
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ReducedWord(Vec<Letter>);

impl ReducedWord {
    pub fn empty() -> Self {
        ReducedWord(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self, WordError> {
        Ok(reduce(&parse_symbols(s)?))
    }

    pub fn letter(l: Letter) -> Self {
        ReducedWord(vec![l])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest generator index used.
    pub fn rank_used(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Self {
        ReducedWord(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        let mut rest = other.0.as_slice();
        while let (Some(&l), Some(&r)) = (v.last(), rest.first()) {
            if l != r.inverse() {
                break;
            }
            v.pop();
            rest = &rest[1..];
        }
        v.extend_from_slice(rest);
        ReducedWord(v)
    }

    pub fn pow(&self, n: usize) -> Self {
        (0..n).fold(ReducedWord::empty(), |acc, _| acc.mul(self))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || f != l.inverse(),
            _ => true,
        }
    }

    /// `w = u c u⁻¹` with `c` cyclically reduced; returns `(u, c)`.
    pub fn cyclic_reduction(&self) -> (ReducedWord, ReducedWord) {
        let v = &self.0;
        let mut k = 0;
        while 2 * k + 1 < v.len() && v[k] == v[v.len() - 1 - k].inverse() {
            k += 1;
        }
        (ReducedWord(v[..k].to_vec()), ReducedWord(v[k..v.len() - k].to_vec()))
    }

    pub fn cyclic_core(&self) -> ReducedWord {
        self.cyclic_reduction().1
    }

    /// Cyclic rotations of a cyclically reduced word (`self` first).
    pub fn rotations(&self) -> Vec<ReducedWord> {
        let n = self.0.len().max(1);
        (0..n)
            .map(|i| {
                let mut v = self.0[i.min(self.0.len())..].to_vec();
                v.extend_from_slice(&self.0[..i.min(self.0.len())]);
                ReducedWord(v)
            })
            .collect()
    }

    /// Canonical representative of the conjugacy class: the least rotation
    /// of the cyclic core in letter order.
    pub fn conjugacy_representative(&self) -> ReducedWord {
        self.cyclic_core().rotations().into_iter().min_by(|a, b| a.0.cmp(&b.0)).unwrap_or_default()
    }

    /// Signed exponent sum of each generator (length `rank`).
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut e = vec![0i64; rank];
        for l in &self.0 {
            e[l.index() - 1] += if l.is_inverse() { -1 } else { 1 };
        }
        e
    }

    /// Applies a substitution `generator k ↦ images[k-1]` and reduces.
    pub fn substitute(&self, images: &[ReducedWord]) -> ReducedWord {
        let mut out = ReducedWord::empty();
        for l in &self.0 {
            let img = &images[l.index() - 1];
            out = out.mul(&if l.is_inverse() { img.inverse() } else { img.clone() });
        }
        out
    }
}

impl PartialOrd for ReducedWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex: length first, then letters.
impl Ord for ReducedWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for ReducedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// All reduced words of length exactly `len`, in letter order.
pub fn reduced_words(basis: &Basis, len: usize) -> Vec<ReducedWord> {
    let letters = basis.letters();
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * (letters.len() - 1));
        for w in &out {
            for &l in &letters {
                if w.last().is_none_or(|&p: &Letter| p != l.inverse()) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out.into_iter().map(ReducedWord).collect()
}

/// Nonempty cyclically reduced words of length at most `maxlen`, shortlex.
pub fn cyclically_reduced_words(basis: &Basis, maxlen: usize) -> Vec<ReducedWord> {
    (1..=maxlen).flat_map(|n| reduced_words(basis, n)).filter(|w| w.is_cyclically_reduced()).collect()
}
