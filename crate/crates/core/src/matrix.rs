//! 2×2 matrices over a [`Scalar`], the norms used for growth sequences, and
//! the matrix-set JSON format.

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::scalar::{parse_rational, QuadScalar, Rational, Scalar, ScalarKind};

/// Row-major 2×2 matrix `[[e11, e12], [e21, e22]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat2<S> {
    pub e11: S,
    pub e12: S,
    pub e21: S,
    pub e22: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn new(e11: S, e12: S, e21: S, e22: S) -> Self {
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn from_rows(rows: [[S; 2]; 2]) -> Self {
        let [[e11, e12], [e21, e22]] = rows;
        Mat2 { e11, e12, e21, e22 }
    }

    pub fn identity() -> Self {
        Mat2::new(S::one(), S::zero(), S::zero(), S::one())
    }

    pub fn zero() -> Self {
        Mat2::new(S::zero(), S::zero(), S::zero(), S::zero())
    }

    pub fn scalar(c: S) -> Self {
        Mat2::new(c.clone(), S::zero(), S::zero(), c)
    }

    pub fn diag(a: S, c: S) -> Self {
        Mat2::new(a, S::zero(), S::zero(), c)
    }

    pub fn upper(a: S, b: S, c: S) -> Self {
        Mat2::new(a, b, S::zero(), c)
    }

    pub fn entries(&self) -> [&S; 4] {
        [&self.e11, &self.e12, &self.e21, &self.e22]
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Mat2<T> {
        Mat2::new(f(&self.e11), f(&self.e12), f(&self.e21), f(&self.e22))
    }

    pub fn to_f64(&self) -> Mat2<f64> {
        self.map(|x| x.to_f64())
    }

    /// Product `self · rhs`, refusing to mix incompatible scalar fields.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        let lhs_entries = self.entries();
        for x in lhs_entries {
            for y in rhs.entries() {
                if !x.compatible(y) {
                    return Err(Error::ScalarKindMismatch(format!("cannot multiply {x} by {y}")));
                }
            }
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, r: &Self) -> Self {
        Mat2::new(
            self.e11.mul(&r.e11).add(&self.e12.mul(&r.e21)),
            self.e11.mul(&r.e12).add(&self.e12.mul(&r.e22)),
            self.e21.mul(&r.e11).add(&self.e22.mul(&r.e21)),
            self.e21.mul(&r.e12).add(&self.e22.mul(&r.e22)),
        )
    }

    pub fn add(&self, r: &Self) -> Self {
        Mat2::new(self.e11.add(&r.e11), self.e12.add(&r.e12), self.e21.add(&r.e21), self.e22.add(&r.e22))
    }

    pub fn sub(&self, r: &Self) -> Self {
        Mat2::new(self.e11.sub(&r.e11), self.e12.sub(&r.e12), self.e21.sub(&r.e21), self.e22.sub(&r.e22))
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Mat2::identity();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn det(&self) -> S {
        self.e11.mul(&self.e22).sub(&self.e12.mul(&self.e21))
    }

    pub fn trace(&self) -> S {
        self.e11.add(&self.e22)
    }

    pub fn inverse(&self) -> Option<Self> {
        let inv_det = self.det().recip()?;
        Some(Mat2::new(
            self.e22.mul(&inv_det),
            self.e12.neg().mul(&inv_det),
            self.e21.neg().mul(&inv_det),
            self.e11.mul(&inv_det),
        ))
    }

    pub fn is_scalar(&self) -> bool {
        self.e12.is_zero() && self.e21.is_zero() && self.e11 == self.e22
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.e21.is_zero()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries().iter().all(|x| !x.is_negative())
    }

    /// Entrywise `self <= other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.e11 <= other.e11 && self.e12 <= other.e12 && self.e21 <= other.e21 && self.e22 <= other.e22
    }

    /// `|e11| + |e12| + |e21| + |e22|`.
    pub fn sum_norm(&self) -> S {
        self.e11.abs().add(&self.e12.abs()).add(&self.e21.abs()).add(&self.e22.abs())
    }

    /// Absolute value of the upper-right entry.
    pub fn upper_right_seminorm(&self) -> S {
        self.e12.abs()
    }

    /// Largest singular value, from the closed form
    /// `(sqrt((a+d)^2 + (b-c)^2) + sqrt((a-d)^2 + (b+c)^2)) / 2`.
    pub fn op_norm_2(&self) -> f64 {
        let (a, b, c, d) = (self.e11.to_f64(), self.e12.to_f64(), self.e21.to_f64(), self.e22.to_f64());
        0.5 * ((a + d).hypot(b - c) + (a - d).hypot(b + c))
    }

    /// Exact test `op_norm_2(self) <= t` (exact for exact scalar kinds).
    pub fn op_norm_2_le(&self, t: &S) -> bool {
        if t.is_negative() {
            return false;
        }
        let (s, det2) = self.gram_invariants();
        let two = S::from_i64(2);
        let lhs = two.mul(&t.mul(t)).sub(&s);
        if lhs.is_negative() {
            return false;
        }
        let disc = s.mul(&s).sub(&S::from_i64(4).mul(&det2));
        lhs.mul(&lhs) >= disc
    }

    /// Exact test `op_norm_2(self) >= t` (exact for exact scalar kinds).
    pub fn op_norm_2_ge(&self, t: &S) -> bool {
        if !t.is_positive() {
            return true;
        }
        let (s, det2) = self.gram_invariants();
        let two = S::from_i64(2);
        let lhs = two.mul(&t.mul(t)).sub(&s);
        if !lhs.is_positive() {
            return true;
        }
        let disc = s.mul(&s).sub(&S::from_i64(4).mul(&det2));
        lhs.mul(&lhs) <= disc
    }

    /// Frobenius norm squared and squared determinant.
    fn gram_invariants(&self) -> (S, S) {
        let s = self
            .e11
            .mul(&self.e11)
            .add(&self.e12.mul(&self.e12))
            .add(&self.e21.mul(&self.e21))
            .add(&self.e22.mul(&self.e22));
        let det = self.det();
        (s, det.mul(&det))
    }

    /// Spectral radius in floating point; `sqrt|det|` for a complex pair.
    pub fn spectral_radius_f64(&self) -> f64 {
        let tr = self.trace().to_f64();
        let det = self.det().to_f64();
        let disc = tr * tr - 4.0 * det;
        if disc >= 0.0 {
            0.5 * (tr.abs() + disc.sqrt())
        } else {
            det.abs().sqrt()
        }
    }

    /// For triangular matrices: `max(|e11|, |e22|)`, exactly.
    pub fn triangular_spectral_radius(&self) -> S {
        self.e11.abs().max_of(self.e22.abs())
    }

    pub fn apply(&self, v: &[S; 2]) -> [S; 2] {
        [self.e11.mul(&v[0]).add(&self.e12.mul(&v[1])), self.e21.mul(&v[0]).add(&self.e22.mul(&v[1]))]
    }
}

impl<S: Scalar> std::ops::Mul for &Mat2<S> {
    type Output = Mat2<S>;

    /// Panics on incompatible quadratic fields; use [`Mat2::try_mul`] to recover.
    fn mul(self, rhs: Self) -> Mat2<S> {
        self.try_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<S: Scalar> fmt::Display for Mat2<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.e11, self.e12, self.e21, self.e22)
    }
}

impl Mat2<Rational> {
    /// Exact spectral radius: `(|tr| + sqrt(disc)) / 2` for real eigenvalues,
    /// `sqrt|det|` for a complex pair.
    pub fn spectral_radius(&self) -> QuadScalar {
        let tr = self.trace();
        let det = self.det();
        let disc = &tr * &tr - Rational::from_i64(4) * &det;
        if !disc.is_negative() {
            let root = QuadScalar::sqrt_of(&disc).expect("non-negative");
            QuadScalar::from_rational(&Scalar::abs(&tr))
                .add(&root)
                .mul(&QuadScalar::from_rational(&crate::scalar::rat(1, 2)))
        } else {
            QuadScalar::sqrt_of(&Scalar::abs(&det)).expect("non-negative")
        }
    }

    /// Real invariant lines of the matrix.
    ///
    /// Directions are normalised so that their first non-zero coordinate is 1
    /// and listed in decreasing order of eigenvalue; a diagonal non-scalar
    /// matrix lists `(1,0)` before `(0,1)`.
    pub fn real_eigenlines(&self) -> Eigenlines {
        if self.is_scalar() {
            return Eigenlines::All;
        }
        let q = |x: &Rational| QuadScalar::from_rational(x);
        if self.e12.is_zero() && self.e21.is_zero() {
            return Eigenlines::Lines(vec![
                Eigenline { value: q(&self.e11), direction: [QuadScalar::one(), QuadScalar::zero()] },
                Eigenline { value: q(&self.e22), direction: [QuadScalar::zero(), QuadScalar::one()] },
            ]);
        }
        let tr = self.trace();
        let disc = &tr * &tr - Rational::from_i64(4) * self.det();
        if disc.is_negative() {
            return Eigenlines::None;
        }
        let root = QuadScalar::sqrt_of(&disc).expect("non-negative");
        let half = QuadScalar::from_rational(&crate::scalar::rat(1, 2));
        let tr_q = q(&tr);
        let mut values = vec![tr_q.add(&root).mul(&half)];
        if !disc.is_zero() {
            values.push(tr_q.sub(&root).mul(&half));
        }
        let lines = values
            .into_iter()
            .map(|lambda| {
                let raw = if !self.e12.is_zero() {
                    [q(&self.e12), lambda.sub(&q(&self.e11))]
                } else {
                    [lambda.sub(&q(&self.e22)), q(&self.e21)]
                };
                Eigenline { value: lambda, direction: normalize_direction(raw) }
            })
            .collect();
        Eigenlines::Lines(lines)
    }
}

/// Scale a non-zero vector so its first non-zero coordinate is 1.
pub fn normalize_direction<S: Scalar>(v: [S; 2]) -> [S; 2] {
    let pivot = if !v[0].is_zero() { &v[0] } else { &v[1] };
    let inv = pivot.recip().expect("non-zero direction");
    [v[0].mul(&inv), v[1].mul(&inv)]
}

/// `true` when `v` and `w` are parallel (exact for exact kinds).
pub fn parallel<S: Scalar>(v: &[S; 2], w: &[S; 2]) -> bool {
    v[0].mul(&w[1]).sub(&v[1].mul(&w[0])).is_zero()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenline {
    pub value: QuadScalar,
    pub direction: [QuadScalar; 2],
}

#[derive(Clone, Debug, PartialEq)]
pub enum Eigenlines {
    /// Scalar matrix: every line is invariant.
    All,
    Lines(Vec<Eigenline>),
    /// Complex eigenvalues: no real invariant line.
    None,
}

/// Product along a word in time order: `A[w_{n-1}] ··· A[w_1] A[w_0]`.
pub fn word_product<S: Scalar>(mats: &[Mat2<S>], word: &[usize]) -> Mat2<S> {
    let mut acc = Mat2::identity();
    for &w in word {
        acc = &mats[w] * &acc;
    }
    acc
}

/// Ordered, non-empty list of invertible matrices indexed by the symbols `1..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixSet<S> {
    matrices: Vec<Mat2<S>>,
}

impl<S: Scalar> MatrixSet<S> {
    pub fn new(matrices: Vec<Mat2<S>>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::InvalidInput("matrix set is empty".into()));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.det().is_zero() {
                return Err(Error::InvalidInput(format!("matrix {} is singular", i + 1)));
            }
        }
        let first = matrices[0].entries()[0].clone();
        for m in &matrices {
            for x in m.entries() {
                if !x.compatible(&first) {
                    return Err(Error::ScalarKindMismatch("matrix set mixes quadratic fields".into()));
                }
            }
        }
        Ok(MatrixSet { matrices })
    }

    pub fn matrices(&self) -> &[Mat2<S>] {
        &self.matrices
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn get(&self, label: usize) -> Option<&Mat2<S>> {
        label.checked_sub(1).and_then(|i| self.matrices.get(i))
    }

    pub fn conjugate_by(&self, r: &Mat2<S>) -> Result<Self> {
        let inv = r.inverse().ok_or_else(|| Error::InvalidInput("singular conjugator".into()))?;
        MatrixSet::new(self.matrices.iter().map(|a| &(&inv * a) * r).collect())
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.matrices.iter().all(Mat2::is_upper_triangular)
    }

    pub fn to_f64(&self) -> MatrixSet<f64> {
        MatrixSet { matrices: self.matrices.iter().map(Mat2::to_f64).collect() }
    }
}

/// A matrix set of either exact or floating kind, as read from JSON.
#[derive(Clone, Debug)]
pub enum AnyMatrixSet {
    Exact(MatrixSet<Rational>),
    Float(MatrixSet<f64>),
}

impl AnyMatrixSet {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyMatrixSet::Exact(_) => ScalarKind::Rational,
            AnyMatrixSet::Float(_) => ScalarKind::Float,
        }
    }

    pub fn exact(&self) -> Result<&MatrixSet<Rational>> {
        match self {
            AnyMatrixSet::Exact(s) => Ok(s),
            AnyMatrixSet::Float(_) => Err(Error::NotExact("float".into())),
        }
    }

    pub fn to_f64(&self) -> MatrixSet<f64> {
        match self {
            AnyMatrixSet::Exact(s) => s.to_f64(),
            AnyMatrixSet::Float(s) => s.clone(),
        }
    }

    /// Parse `{"matrices": [[["p/q","p/q"],["p/q","p/q"]], ...]}`. JSON integers
    /// are exact; any non-integer JSON number makes the whole set floating point.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let mats = v
            .get("matrices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("expected an object with a \"matrices\" array".into()))?;
        let mut raw: Vec<[&Value; 4]> = Vec::with_capacity(mats.len());
        for (i, m) in mats.iter().enumerate() {
            let rows = m.as_array().filter(|r| r.len() == 2);
            let rows = rows.ok_or_else(|| Error::Parse(format!("matrix {} must have 2 rows", i + 1)))?;
            let mut cells = Vec::with_capacity(4);
            for row in rows {
                let row = row
                    .as_array()
                    .filter(|r| r.len() == 2)
                    .ok_or_else(|| Error::Parse(format!("matrix {} rows must have 2 entries", i + 1)))?;
                cells.extend(row.iter());
            }
            raw.push([cells[0], cells[1], cells[2], cells[3]]);
        }
        let any_float = raw.iter().flatten().any(|x| x.is_f64());
        if any_float {
            let conv = |x: &Value| -> Result<f64> {
                match x {
                    Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                    Value::String(s) => Ok(parse_rational(s)?.to_f64()),
                    other => Err(Error::Parse(format!("bad matrix entry {other}"))),
                }
            };
            let ms = raw
                .iter()
                .map(|c| Ok(Mat2::new(conv(c[0])?, conv(c[1])?, conv(c[2])?, conv(c[3])?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyMatrixSet::Float(MatrixSet::new(ms)?))
        } else {
            let conv = |x: &Value| -> Result<Rational> {
                exact_value(x).ok_or_else(|| Error::Parse(format!("bad matrix entry {x}")))?
            };
            let ms = raw
                .iter()
                .map(|c| Ok(Mat2::new(conv(c[0])?, conv(c[1])?, conv(c[2])?, conv(c[3])?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(AnyMatrixSet::Exact(MatrixSet::new(ms)?))
        }
    }
}

/// An exact JSON value: a rational string or an integer number.
pub fn exact_value(x: &Value) -> Option<Result<Rational>> {
    match x {
        Value::String(s) => Some(parse_rational(s)),
        Value::Number(n) => n.as_i64().map(|v| Ok(Rational::from_i64(v))),
        _ => None,
    }
}

/// JSON form of an exact matrix set, entries as reduced rational strings.
pub fn matrix_set_to_json<S: Scalar>(set: &MatrixSet<S>) -> Value {
    Value::Object(
        [("matrices".to_string(), Value::Array(set.matrices().iter().map(matrix_to_json).collect()))]
            .into_iter()
            .collect(),
    )
}

pub fn matrix_to_json<S: Scalar>(m: &Mat2<S>) -> Value {
    Value::Array(vec![
        Value::Array(vec![m.e11.to_json(), m.e12.to_json()]),
        Value::Array(vec![m.e21.to_json(), m.e22.to_json()]),
    ])
}
