//! Scalar kinds used by the matrix code.
//!
//! Three kinds are supported: exact rationals, exact elements of a real
//! quadratic field `Q(sqrt d)`, and binary64 floats. A single computation
//! never mixes kinds; the generic code is written against [`Scalar`].

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator by `num-rational`.
pub type Rational = BigRational;

/// Which scalar kind a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Quadratic,
    Float,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => f.write_str("rational"),
            ScalarKind::Quadratic => f.write_str("quadratic"),
            ScalarKind::Float => f.write_str("float"),
        }
    }
}

/// An ordered field (or a floating approximation of one).
///
/// Operations take references so that big-number kinds avoid needless copies.
pub trait Scalar: Clone + PartialEq + PartialOrd + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_rational(r: &Rational) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse; `None` for zero.
    fn recip(&self) -> Option<Self>;

    fn is_zero(&self) -> bool;
    fn to_f64(&self) -> f64;

    /// Exact rational value, when the kind is exact and the value lies in `Q`.
    fn to_rational(&self) -> Option<Rational> {
        None
    }

    /// Whether the two values may be combined arithmetically.
    fn compatible(&self, _other: &Self) -> bool {
        true
    }

    /// Equality used when matching computed quantities (exact for exact kinds).
    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Encoding used in JSON outputs: strings for exact kinds, numbers for floats.
    fn to_json(&self) -> serde_json::Value {
        serde_json::Value::String(self.to_string())
    }

    fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    fn is_negative(&self) -> bool {
        self.partial_cmp(&Self::zero()) == Some(Ordering::Less)
    }

    fn is_positive(&self) -> bool {
        self.partial_cmp(&Self::zero()) == Some(Ordering::Greater)
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

/// Exact scalar kinds, which can be bracketed by rationals.
pub trait ExactScalar: Scalar {
    /// Smallest-effort rational `r` with `self <= r`, and `r < cap` whenever `self < cap`.
    fn rational_upper_bound(&self, cap: Option<&Rational>) -> Rational;

    /// Exact rational value, if the element lies in `Q`.
    fn as_rational(&self) -> Option<Rational>;
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn abs(&self) -> Self {
        Signed::abs(self)
    }
}

impl ExactScalar for Rational {
    fn rational_upper_bound(&self, _cap: Option<&Rational>) -> Rational {
        self.clone()
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn from_rational(r: &Rational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn approx_eq(&self, other: &Self) -> bool {
        f64::abs(self - other) <= 1e-9 * (1.0 + f64::abs(*self).max(f64::abs(*other)))
    }
    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self).map(serde_json::Value::Number).unwrap_or(serde_json::Value::Null)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
}

/// Parse `"p/q"`, `"p"`, or a finite decimal such as `"0.25"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim().replace('\u{2212}', "-");
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if !t.contains('/') {
            let negative = int_part.starts_with('-');
            let digits = format!("{}{}", int_part.trim_start_matches(['-', '+']), frac_part);
            let numer = BigInt::from_str(&digits).map_err(|_| Error::Parse(format!("invalid rational '{s}'")))?;
            let denom = num_traits::pow(BigInt::from(10), frac_part.len());
            let r = Rational::new(numer, denom);
            return Ok(if negative { -r } else { r });
        }
    }
    let r = Rational::from_str(&t).map_err(|_| Error::Parse(format!("invalid rational '{s}'")))?;
    Ok(r)
}

/// Build `p/q` from machine integers. Panics on a zero denominator.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Exact conversion of a finite float.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_f64(x)
}

/// Square root of a non-negative rational if it is itself rational.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if Signed::is_negative(r) {
        return None;
    }
    let n = r.numer();
    let d = r.denom();
    let sn = n.sqrt();
    let sd = d.sqrt();
    if &(&sn * &sn) == n && &(&sd * &sd) == d {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

pub fn is_perfect_square(r: &Rational) -> bool {
    rational_sqrt(r).is_some()
}

/// Element `a + b·sqrt(d)` of the real quadratic field `Q(sqrt d)`.
///
/// `d` is fixed per field. Values with `b = 0` are rational and combine with
/// any field; two irrational values with different radicands do not combine.
#[derive(Clone, Debug)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    d: Rational,
}

impl QuadScalar {
    /// Normalising constructor: folds `sqrt d` into `a` when `d` is a perfect square.
    pub fn new(a: Rational, b: Rational, d: Rational) -> Result<Self> {
        if Signed::is_negative(&d) {
            return Err(Error::Domain(format!("negative radicand {d}")));
        }
        if Zero::is_zero(&b) {
            return Ok(QuadScalar { a, b, d });
        }
        if let Some(s) = rational_sqrt(&d) {
            return Ok(QuadScalar { a: a + b * s, b: Zero::zero(), d });
        }
        Ok(QuadScalar { a, b, d })
    }

    pub fn rational(a: Rational) -> Self {
        QuadScalar { a, b: Zero::zero(), d: Zero::zero() }
    }

    /// `sqrt(r)` as a field element, or `None` for negative `r`.
    pub fn sqrt_of(r: &Rational) -> Option<Self> {
        if Signed::is_negative(r) {
            return None;
        }
        match rational_sqrt(r) {
            Some(s) => Some(QuadScalar { a: s, b: Zero::zero(), d: r.clone() }),
            None => Some(QuadScalar { a: Zero::zero(), b: One::one(), d: r.clone() }),
        }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &Rational {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        Zero::is_zero(&self.b)
    }

    /// Field-checked addition.
    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let d = self.joint_radicand(rhs)?;
        Ok(QuadScalar { a: &self.a + &rhs.a, b: &self.b + &rhs.b, d })
    }

    /// Field-checked multiplication.
    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let d = self.joint_radicand(rhs)?;
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &d;
        let b = &self.a * &rhs.b + &rhs.a * &self.b;
        Ok(QuadScalar { a, b, d })
    }

    fn joint_radicand(&self, rhs: &Self) -> Result<Rational> {
        match (self.is_rational(), rhs.is_rational()) {
            (false, false) if self.d != rhs.d => {
                Err(Error::ScalarKindMismatch(format!("Q(sqrt {}) and Q(sqrt {})", self.d, rhs.d)))
            }
            (false, _) => Ok(self.d.clone()),
            (true, false) => Ok(rhs.d.clone()),
            (true, true) => Ok(if Zero::is_zero(&self.d) { rhs.d.clone() } else { self.d.clone() }),
        }
    }

    fn sign(&self) -> Ordering {
        let sa = self.a.cmp(&Zero::zero());
        let sb = self.b.cmp(&Zero::zero());
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        // Opposite signs: compare a^2 with b^2 d (never equal, d is not a square).
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.d;
        if a2 > b2d {
            sa
        } else {
            sb
        }
    }

    fn expect_ok(r: Result<Self>) -> Self {
        r.unwrap_or_else(|e| panic!("{e}"))
    }
}

impl PartialEq for QuadScalar {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && (self.is_rational() || self.d == other.d)
    }
}

impl PartialOrd for QuadScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.checked_add(&other.neg()).ok().map(|diff| diff.sign())
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "{}", self.a)
        } else if Zero::is_zero(&self.a) {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else if Signed::is_negative(&self.b) {
            write!(f, "{}-{}*sqrt({})", self.a, -&self.b, self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Scalar for QuadScalar {
    const KIND: ScalarKind = ScalarKind::Quadratic;

    fn to_rational(&self) -> Option<Rational> {
        self.as_rational()
    }

    fn zero() -> Self {
        QuadScalar::rational(Zero::zero())
    }
    fn one() -> Self {
        QuadScalar::rational(One::one())
    }
    fn from_i64(v: i64) -> Self {
        QuadScalar::rational(Rational::from_integer(BigInt::from(v)))
    }
    fn from_rational(r: &Rational) -> Self {
        QuadScalar::rational(r.clone())
    }
    fn add(&self, rhs: &Self) -> Self {
        Self::expect_ok(self.checked_add(rhs))
    }
    fn sub(&self, rhs: &Self) -> Self {
        Self::expect_ok(self.checked_add(&rhs.neg()))
    }
    fn mul(&self, rhs: &Self) -> Self {
        Self::expect_ok(self.checked_mul(rhs))
    }
    fn neg(&self) -> Self {
        QuadScalar { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(QuadScalar { a: &self.a / &norm, b: -&self.b / &norm, d: self.d.clone() })
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.a) && Zero::is_zero(&self.b)
    }
    fn to_f64(&self) -> f64 {
        let a = Scalar::to_f64(&self.a);
        if self.is_rational() {
            a
        } else {
            a + Scalar::to_f64(&self.b) * Scalar::to_f64(&self.d).sqrt()
        }
    }
    fn compatible(&self, other: &Self) -> bool {
        self.joint_radicand(other).is_ok()
    }
}

impl ExactScalar for QuadScalar {
    fn rational_upper_bound(&self, cap: Option<&Rational>) -> Rational {
        if self.is_rational() {
            return self.a.clone();
        }
        // Bisection on an exact bracket [lo, hi] with lo < self <= hi.
        let approx = Scalar::to_f64(self);
        let margin = 1e-6 * (1.0 + approx.abs());
        let mut lo = rational_from_f64(approx - margin).expect("finite");
        let mut hi = rational_from_f64(approx + margin).expect("finite");
        while QuadScalar::from_rational(&lo) >= *self {
            lo = &lo - <Rational as One>::one();
        }
        while QuadScalar::from_rational(&hi) < *self {
            hi = &hi + <Rational as One>::one();
        }
        if let Some(c) = cap {
            if QuadScalar::from_rational(c) > *self && &hi >= c {
                hi = c.clone();
            }
        }
        let limit = cap.filter(|c| QuadScalar::from_rational(c) > *self);
        let two = Rational::from_integer(BigInt::from(2));
        let mut iter = 0;
        while iter < 64 || limit.is_some_and(|c| &hi >= c) {
            let mid = (&lo + &hi) / &two;
            if QuadScalar::from_rational(&mid) >= *self {
                hi = mid;
            } else {
                lo = mid;
            }
            iter += 1;
        }
        hi
    }

    fn as_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }
}

impl FromStr for QuadScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(QuadScalar::rational(parse_rational(s)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64) -> QuadScalar {
        QuadScalar::new(rat(a, 1), rat(b, 1), rat(d, 1)).unwrap()
    }

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("-3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("\u{2212}3/2").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0x").is_err());
    }

    #[test]
    fn perfect_squares_fold() {
        let x = q(1, 2, 9);
        assert!(x.is_rational());
        assert_eq!(x, QuadScalar::rational(rat(7, 1)));
        assert_eq!(rational_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rational_sqrt(&rat(2, 1)), None);
    }

    #[test]
    fn field_arithmetic_is_closed() {
        let s2 = q(0, 1, 2);
        assert_eq!(s2.mul(&s2), QuadScalar::from_i64(2));
        let x = q(3, -2, 2);
        let inv = x.recip().unwrap();
        assert_eq!(x.mul(&inv), QuadScalar::one());
    }

    #[test]
    fn exact_ordering() {
        // 1 - sqrt 2 < 0 < 3 - 2 sqrt 2
        assert!(q(1, -1, 2) < QuadScalar::zero());
        assert!(q(3, -2, 2) > QuadScalar::zero());
        assert!(q(0, 1, 2) > QuadScalar::from_rational(&rat(1414, 1000)));
        assert!(q(0, 1, 2) < QuadScalar::from_rational(&rat(1415, 1000)));
    }

    #[test]
    fn mixing_fields_is_an_error() {
        let a = q(0, 1, 2);
        let b = q(0, 1, 3);
        assert!(matches!(a.checked_mul(&b), Err(Error::ScalarKindMismatch(_))));
        assert!(!a.compatible(&b));
        assert!(a.compatible(&QuadScalar::from_i64(5)));
    }

    #[test]
    fn upper_bounds_respect_cap() {
        let half_sqrt2 = QuadScalar::new(rat(0, 1), rat(1, 2), rat(2, 1)).unwrap();
        let one = rat(1, 1);
        let r = half_sqrt2.rational_upper_bound(Some(&one));
        assert!(QuadScalar::from_rational(&r) >= half_sqrt2);
        assert!(r < one);
        assert!((Scalar::to_f64(&r) - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-3);
    }
}
