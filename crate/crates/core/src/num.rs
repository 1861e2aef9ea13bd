//! Numeric tower.
//!
//! Tree metrics default to exact rationals: the four-point inequality and the
//! center equations are equality tests and must not be decided by rounding.
//! Two further scalars exist for the line sandbox: [`Quadratic`] (exact
//! arithmetic in a real quadratic field, e.g. `1 + 3√2`) and plain `f64`
//! compared with an absolute tolerance of `1e-9`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number.
pub type Rational = num_rational::BigRational;

/// Absolute tolerance used by the float mode.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("cannot parse numeric literal `{0}`")]
    Syntax(String),
    #[error("literal `{0}` is not representable in this numeric mode")]
    NotRepresentable(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// Ordered field used for lengths, offsets and distances.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when comparisons are decided exactly (tolerance zero).
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i128(v: i128) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;
    fn to_f64(&self) -> f64;
    fn parse_literal(s: &str) -> Result<Self, NumError>;

    /// Absolute comparison slack; zero in exact modes.
    fn tolerance() -> Self;

    /// Rescales a batch of values to a common integer grid when that is
    /// possible without loss: returns `(ints, scale)` with
    /// `values[i] == ints[i] / scale`.
    fn scaled_integers(_values: &[Self]) -> Option<(Vec<i64>, Self)> {
        None
    }

    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn half(&self) -> Self {
        self.clone() / Self::from_i128(2)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).abs() <= Self::tolerance()
    }

    fn approx_zero(&self) -> bool {
        self.abs() <= Self::tolerance()
    }

    /// `self < other` by more than the tolerance.
    fn definitely_lt(&self, other: &Self) -> bool {
        self.clone() + Self::tolerance() < *other
    }

    fn is_positive(&self) -> bool {
        *self > Self::tolerance()
    }

    fn min_of(a: Self, b: Self) -> Self {
        if b < a {
            b
        } else {
            a
        }
    }

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }

    /// Total order for sorting; incomparable values (NaN) sort as equal.
    fn cmp_total(&self, other: &Self) -> Ordering {
        self.partial_cmp(other).unwrap_or(Ordering::Equal)
    }

    /// Whether two values are linearly independent over `Q`, when that can
    /// be decided.
    fn rationally_independent(&self, _other: &Self) -> Option<bool> {
        None
    }
}

/// `rational + coeff·sqrt:n`, with `n` squarefree when present.
struct Literal {
    rational: Rational,
    sqrt: Option<(Rational, u64)>,
}

fn parse_unsigned_rational(s: &str, full: &str) -> Result<Rational, NumError> {
    let syntax = || NumError::Syntax(full.to_string());
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| syntax())?;
        let q: BigInt = q.trim().parse().map_err(|_| syntax())?;
        if q.is_zero() {
            return Err(NumError::ZeroDenominator(full.to_string()));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.chars().any(|c| !c.is_ascii_digit()) || int.chars().any(|c| !c.is_ascii_digit()) {
            return Err(syntax());
        }
        if int.is_empty() && frac.is_empty() {
            return Err(syntax());
        }
        let digits = format!("{int}{frac}");
        let num: BigInt = digits.parse().map_err(|_| syntax())?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(num, den));
    }
    if s.is_empty() || s.chars().any(|c| !c.is_ascii_digit()) {
        return Err(syntax());
    }
    let n: BigInt = s.parse().map_err(|_| syntax())?;
    Ok(Rational::from_integer(n))
}

fn parse_literal_parts(s: &str) -> Result<Literal, NumError> {
    let t = s.trim();
    let (negative, rest) = match t.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let sign = |v: Rational, neg: bool| if neg { -v } else { v };
    // `r+c*sqrt:n` or `r-c*sqrt:n`
    if let Some(i) = rest.rfind(['+', '-']).filter(|_| rest.contains("sqrt:")) {
        let (r, tail) = (&rest[..i], &rest[i + 1..]);
        if r.contains("sqrt:") {
            return Err(NumError::Syntax(s.to_string()));
        }
        let (c, n) = parse_sqrt_term(tail.trim(), s)?.ok_or_else(|| NumError::Syntax(s.to_string()))?;
        let rational = sign(parse_unsigned_rational(r.trim(), s)?, negative);
        let c = sign(c, rest.as_bytes()[i] == b'-');
        return Ok(normalize(rational, c, n));
    }
    Ok(match parse_sqrt_term(rest, s)? {
        Some((c, n)) => normalize(<Rational as Zero>::zero(), sign(c, negative), n),
        None => Literal { rational: sign(parse_unsigned_rational(rest, s)?, negative), sqrt: None },
    })
}

/// `c*sqrt:n` or `sqrt:n`, unsigned; `None` if `s` has no square root.
fn parse_sqrt_term(s: &str, full: &str) -> Result<Option<(Rational, u64)>, NumError> {
    let (coeff, r) = match s.split_once('*') {
        Some((c, r)) if r.trim_start().starts_with("sqrt:") => (parse_unsigned_rational(c.trim(), full)?, r.trim()),
        _ if s.starts_with("sqrt:") => (<Rational as One>::one(), s),
        _ => return Ok(None),
    };
    let n: u64 = r["sqrt:".len()..].trim().parse().map_err(|_| NumError::Syntax(full.to_string()))?;
    Ok(Some((coeff, n)))
}

fn normalize(rational: Rational, coeff: Rational, n: u64) -> Literal {
    let (outside, radicand) = squarefree_split(n);
    let c = coeff * Rational::from_integer(BigInt::from(outside));
    match (n, radicand) {
        (0, _) => Literal { rational, sqrt: None },
        (_, 1) => Literal { rational: rational + c, sqrt: None },
        _ => Literal { rational, sqrt: Some((c, radicand)) },
    }
}

/// Writes `n = outside² · radicand` with `radicand` squarefree.
fn squarefree_split(mut n: u64) -> (u64, u64) {
    if n == 0 {
        return (0, 1);
    }
    let mut outside = 1u64;
    let mut radicand = 1u64;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            radicand *= p;
        }
        p += 1;
    }
    radicand *= n;
    (outside, radicand)
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn rationally_independent(&self, _other: &Self) -> Option<bool> {
        Some(false)
    }

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i128(v: i128) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn parse_literal(s: &str) -> Result<Self, NumError> {
        match parse_literal_parts(s)? {
            Literal { rational, sqrt: None } => Ok(rational),
            _ => Err(NumError::NotRepresentable(s.to_string())),
        }
    }
    fn tolerance() -> Self {
        Zero::zero()
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
    fn scaled_integers(values: &[Self]) -> Option<(Vec<i64>, Self)> {
        let mut lcm = BigInt::one();
        for v in values {
            lcm = lcm.lcm(v.denom());
        }
        let ints = values.iter().map(|v| (v.numer() * (&lcm / v.denom())).to_i64()).collect::<Option<Vec<_>>>()?;
        // Sums of a handful of entries must stay well inside i128.
        if ints.iter().any(|v| v.unsigned_abs() > (1u64 << 60)) {
            return None;
        }
        Some((ints, Rational::from_integer(lcm)))
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i128(v: i128) -> Self {
        v as f64
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse_literal(s: &str) -> Result<Self, NumError> {
        let lit = parse_literal_parts(s)?;
        let r = ToPrimitive::to_f64(&lit.rational).unwrap_or(f64::NAN);
        Ok(match lit.sqrt {
            Some((c, n)) => r + ToPrimitive::to_f64(&c).unwrap_or(f64::NAN) * (n as f64).sqrt(),
            None => r,
        })
    }
    fn tolerance() -> Self {
        FLOAT_TOLERANCE
    }
}

/// Exact element `rational + coeff·√radicand` of a real quadratic field.
///
/// Values from different fields (distinct squarefree radicands, both with a
/// nonzero irrational part) cannot be combined; doing so panics.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quadratic {
    rational: Rational,
    coeff: Rational,
    /// Squarefree and > 1 when `coeff != 0`; 0 otherwise.
    radicand: u64,
}

impl Quadratic {
    pub fn new(rational: Rational, coeff: Rational, radicand: u64) -> Self {
        let (outside, r) = squarefree_split(radicand);
        let coeff = coeff * Rational::from_integer(BigInt::from(outside));
        if r <= 1 || coeff.is_zero() {
            let rational = if r == 1 { rational + coeff } else { rational };
            return Quadratic { rational, coeff: <Rational as Zero>::zero(), radicand: 0 };
        }
        Quadratic { rational, coeff, radicand: r }
    }

    /// `d` must already be squarefree (or 0).
    fn make(rational: Rational, coeff: Rational, d: u64) -> Self {
        if coeff.is_zero() || d == 0 {
            return Quadratic { rational, coeff: <Rational as Zero>::zero(), radicand: 0 };
        }
        Quadratic { rational, coeff, radicand: d }
    }

    pub fn rational(r: Rational) -> Self {
        Quadratic { rational: r, coeff: <Rational as Zero>::zero(), radicand: 0 }
    }

    /// `√n`.
    pub fn sqrt(n: u64) -> Self {
        Quadratic::new(<Rational as Zero>::zero(), <Rational as One>::one(), n)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.rational
    }

    pub fn irrational_part(&self) -> (&Rational, u64) {
        (&self.coeff, self.radicand)
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    fn is_zero_value(&self) -> bool {
        self.coeff.is_zero() && self.rational.is_zero()
    }

    fn field(a: &Self, b: &Self) -> u64 {
        match (a.radicand, b.radicand) {
            (0, r) | (r, 0) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("cannot combine values from Q(√{r}) and Q(√{s})"),
        }
    }

    fn sign(&self) -> Ordering {
        let a = self.rational.cmp(&<Rational as Zero>::zero());
        let b = self.coeff.cmp(&<Rational as Zero>::zero());
        match (a, b) {
            (x, Ordering::Equal) => x,
            (Ordering::Equal, y) => y,
            (x, y) if x == y => x,
            (x, y) => {
                // opposite signs: compare a² with b²·d
                let a2 = &self.rational * &self.rational;
                let b2d = &self.coeff * &self.coeff * Rational::from_integer(BigInt::from(self.radicand));
                match a2.cmp(&b2d) {
                    Ordering::Greater => x,
                    Ordering::Less => y,
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.rational);
        }
        let c = if self.coeff == <Rational as One>::one() {
            String::new()
        } else if self.coeff == -<Rational as One>::one() {
            "-".to_string()
        } else {
            format!("{}*", self.coeff)
        };
        if self.rational.is_zero() {
            write!(f, "{c}sqrt:{}", self.radicand)
        } else if self.coeff.is_negative() {
            let c = if self.coeff == -<Rational as One>::one() { String::new() } else { format!("{}*", -self.coeff.clone()) };
            write!(f, "{}-{c}sqrt:{}", self.rational, self.radicand)
        } else {
            write!(f, "{}+{c}sqrt:{}", self.rational, self.radicand)
        }
    }
}

impl PartialOrd for Quadratic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some((self.clone() - other.clone()).sign())
    }
}

impl Add for Quadratic {
    type Output = Quadratic;
    fn add(self, rhs: Self) -> Self {
        let d = Quadratic::field(&self, &rhs);
        Quadratic::make(self.rational + rhs.rational, self.coeff + rhs.coeff, d)
    }
}

impl Sub for Quadratic {
    type Output = Quadratic;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Quadratic {
    type Output = Quadratic;
    fn neg(self) -> Self {
        Quadratic { rational: -self.rational, coeff: -self.coeff, radicand: self.radicand }
    }
}

impl Mul for Quadratic {
    type Output = Quadratic;
    fn mul(self, rhs: Self) -> Self {
        let d = Quadratic::field(&self, &rhs);
        let dd = Rational::from_integer(BigInt::from(d));
        let rational = &self.rational * &rhs.rational + &self.coeff * &rhs.coeff * dd;
        let coeff = &self.rational * &rhs.coeff + &self.coeff * &rhs.rational;
        Quadratic::make(rational, coeff, d)
    }
}

impl Div for Quadratic {
    type Output = Quadratic;
    fn div(self, rhs: Self) -> Self {
        let d = Quadratic::field(&self, &rhs);
        let dd = Rational::from_integer(BigInt::from(d));
        let norm = &rhs.rational * &rhs.rational - &rhs.coeff * &rhs.coeff * dd;
        assert!(!norm.is_zero(), "division by zero");
        let conj = Quadratic { rational: rhs.rational.clone(), coeff: -rhs.coeff.clone(), radicand: rhs.radicand };
        let num = self * conj;
        Quadratic::make(num.rational / norm.clone(), num.coeff / norm, d)
    }
}

impl Scalar for Quadratic {
    const EXACT: bool = true;

    fn rationally_independent(&self, other: &Self) -> Option<bool> {
        if self.is_zero_value() || other.is_zero_value() {
            return Some(false);
        }
        if self.radicand != 0 && other.radicand != 0 && self.radicand != other.radicand {
            return Some(true);
        }
        Some(self.rational.clone() * other.coeff.clone() != self.coeff.clone() * other.rational.clone())
    }

    fn zero() -> Self {
        Quadratic::rational(<Rational as Zero>::zero())
    }
    fn one() -> Self {
        Quadratic::rational(<Rational as One>::one())
    }
    fn from_i128(v: i128) -> Self {
        Quadratic::rational(Rational::from_integer(BigInt::from(v)))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Quadratic::rational(Rational::new(BigInt::from(num), BigInt::from(den)))
    }
    fn from_rational(r: &Rational) -> Self {
        Quadratic::rational(r.clone())
    }
    fn to_f64(&self) -> f64 {
        let r = ToPrimitive::to_f64(&self.rational).unwrap_or(f64::NAN);
        if self.coeff.is_zero() {
            r
        } else {
            r + ToPrimitive::to_f64(&self.coeff).unwrap_or(f64::NAN) * (self.radicand as f64).sqrt()
        }
    }
    fn parse_literal(s: &str) -> Result<Self, NumError> {
        let lit = parse_literal_parts(s)?;
        Ok(match lit.sqrt {
            Some((c, n)) => Quadratic::new(lit.rational, c, n),
            None => Quadratic::rational(lit.rational),
        })
    }
    fn tolerance() -> Self {
        Quadratic::zero()
    }
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }
}

/// Parses a comma separated list of literals (`1,sqrt:2,3/4`).
pub fn parse_list<S: Scalar>(s: &str) -> Result<Vec<S>, NumError> {
    s.split(',').map(|t| S::parse_literal(t.trim())).collect()
}

/// Distance value that may be infinite (boundary points of an oracle).
#[derive(Clone, Debug, PartialEq)]
pub enum Dist<S> {
    Finite(S),
    Infinite,
}

impl<S: Scalar> Dist<S> {
    pub fn finite(&self) -> Option<&S> {
        match self {
            Dist::Finite(s) => Some(s),
            Dist::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Dist::Finite(s) => s.to_f64(),
            Dist::Infinite => f64::INFINITY,
        }
    }

    /// `self <= bound` where `Infinite` exceeds every finite bound.
    pub fn within(&self, bound: &S) -> bool {
        match self {
            Dist::Finite(s) => *s <= bound.clone() + S::tolerance(),
            Dist::Infinite => false,
        }
    }
}

impl<S: Scalar> fmt::Display for Dist<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(s) => write!(f, "{s}"),
            Dist::Infinite => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        Rational::parse_literal(s).unwrap()
    }

    #[test]
    fn parses_rational_literals() {
        assert_eq!(q("3"), Rational::from_ratio(3, 1));
        assert_eq!(q("1.25"), Rational::from_ratio(5, 4));
        assert_eq!(q("-3/6"), Rational::from_ratio(-1, 2));
        assert_eq!(q(".5"), Rational::from_ratio(1, 2));
        assert_eq!(q("sqrt:9"), Rational::from_ratio(3, 1));
        assert!(Rational::parse_literal("sqrt:2").is_err());
        assert!(Rational::parse_literal("1/0").is_err());
        assert!(Rational::parse_literal("abc").is_err());
    }

    #[test]
    fn quadratic_sign_is_exact() {
        let s2 = Quadratic::sqrt(2);
        let seventeen = Quadratic::from_i128(17);
        let twelve = Quadratic::from_i128(12);
        let v = seventeen - twelve * s2.clone();
        assert!(v > Quadratic::zero());
        assert!((v.to_f64() - (17.0 - 12.0 * 2f64.sqrt())).abs() < 1e-12);
        let w = Quadratic::from_i128(7) - Quadratic::from_i128(5) * s2.clone();
        assert!(w < Quadratic::zero());
        assert_eq!(s2.clone() * s2.clone(), Quadratic::from_i128(2));
        assert_eq!(Quadratic::parse_literal("sqrt:8").unwrap(), Quadratic::from_i128(2) * s2.clone());
        let inv = Quadratic::one() / (Quadratic::one() + s2.clone());
        assert_eq!(inv, s2 - Quadratic::one());
    }

    #[test]
    fn float_literals_accept_square_roots() {
        let v = f64::parse_literal("3*sqrt:2").unwrap();
        assert!((v - 3.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(f64::parse_literal("-0.5").unwrap(), -0.5);
    }

    #[test]
    fn quadratic_display_parses_back() {
        let s2 = Quadratic::sqrt(2);
        let half = Quadratic::from_ratio(1, 2);
        let vals = [
            Quadratic::from_i128(3) - Quadratic::from_i128(2) * s2.clone(),
            Quadratic::from_ratio(-3, 2) + s2.clone(),
            half.clone() * s2.clone() - half,
            -s2.clone(),
            Quadratic::from_i128(-7) - s2.clone(),
            Quadratic::from_ratio(5, 4),
        ];
        for v in vals {
            assert_eq!(Quadratic::parse_literal(&v.to_string()).unwrap(), v, "{v}");
        }
        assert_eq!(Quadratic::parse_literal("1+sqrt:8").unwrap(), Quadratic::one() + Quadratic::from_i128(2) * s2);
        assert!((f64::parse_literal("17-12*sqrt:2").unwrap() - (17.0 - 12.0 * 2f64.sqrt())).abs() < 1e-12);
        assert!(Rational::parse_literal("1+sqrt:2").is_err());
        assert!(Quadratic::parse_literal("sqrt:2+sqrt:3").is_err());
        assert!(Quadratic::parse_literal("1+2").is_err());
    }

    #[test]
    fn scaled_integers_share_a_denominator() {
        let vals = vec![q("1/2"), q("2/3"), q("5")];
        let (ints, scale) = Rational::scaled_integers(&vals).unwrap();
        assert_eq!(scale, q("6"));
        assert_eq!(ints, vec![3, 4, 30]);
    }

    #[test]
    fn squarefree_split_factors() {
        assert_eq!(squarefree_split(12), (2, 3));
        assert_eq!(squarefree_split(2), (1, 2));
        assert_eq!(squarefree_split(49), (7, 1));
    }
}
