//! Bounded / linear / non-marginal classification of finite 2×2 matrix sets
//! with joint spectral radius one.
//!
//! The decision procedure:
//!
//! 1. Without a common invariant line the set admits an extremal norm, so the
//!    semigroup is bounded ("extremal norm case", no numeric certificate).
//! 2. Otherwise conjugate to upper-triangular form and split the set by
//!    `|det| < 1` and `|det| = 1`.
//! 3. Among the unit-determinant matrices, a nontrivial Jordan block, or two
//!    determinant −1 matrices that are not scalar multiples of each other,
//!    witness linear growth. Otherwise they lie in a group `{±I, ±X}` and the
//!    semigroup is bounded by a domination argument with the extremal pair
//!    `[[1, M], [0, β]]`, `[[β, M], [0, 1]]`.

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::matrix::{matrix_to_json, parallel, word_product, Eigenlines, Mat2, MatrixSet};
use crate::scalar::{ExactScalar, QuadScalar, Rational, Scalar};

/// Conjugation `S⁻¹ A S` of every matrix to upper-triangular form.
#[derive(Clone, Debug)]
pub struct Triangularization {
    /// Columns: the common eigenvector, then its completion.
    pub basis: Mat2<QuadScalar>,
    pub conjugated: Vec<Mat2<QuadScalar>>,
}

impl Triangularization {
    /// The conjugated set over `Q`, when no irrational entry occurs.
    pub fn rational_conjugated(&self) -> Option<Vec<Mat2<Rational>>> {
        self.conjugated
            .iter()
            .map(|m| {
                Some(Mat2::new(m.e11.as_rational()?, m.e12.as_rational()?, m.e21.as_rational()?, m.e22.as_rational()?))
            })
            .collect()
    }

    pub fn basis_is_identity(&self) -> bool {
        self.basis == Mat2::identity()
    }

    /// Floating-point conjugation by an orthogonal basis whose first column is
    /// the common eigenvector. Operator 2-norms of products are preserved.
    pub fn orthogonal_f64(&self, original: &MatrixSet<Rational>) -> Vec<Mat2<f64>> {
        let v0 = self.basis.e11.to_f64();
        let v1 = self.basis.e21.to_f64();
        let r = v0.hypot(v1);
        let (c, s) = (v0 / r, v1 / r);
        let q = Mat2::new(c, -s, s, c);
        let qt = Mat2::new(c, s, -s, c);
        original
            .matrices()
            .iter()
            .map(|a| {
                let mut m = &(&qt * &a.to_f64()) * &q;
                m.e21 = 0.0;
                m
            })
            .collect()
    }
}

/// Indices (0-based, input order) of the matrices with `|det| < 1` and `|det| = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetPartition {
    pub a0: Vec<usize>,
    pub a1: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum GrowthTag {
    Bounded,
    Linear,
    NotMarginal,
}

/// Finite bound on the sum norm of every product.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundCertificate {
    /// Bound on the smaller diagonal entry (in absolute value) of each generator.
    pub beta: Rational,
    /// Bound on the upper-right entry of each generator.
    pub m_const: Rational,
    /// Sum-norm bound for products in the triangularising basis.
    pub bound: Rational,
    /// Sum-norm bound for products of the input matrices.
    pub original_bound: Rational,
}

impl BoundCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "beta": self.beta.to_string(),
            "m_const": self.m_const.to_string(),
            "bound": self.bound.to_string(),
            "original_bound": self.original_bound.to_string(),
        })
    }
}

/// A product `B` with equal diagonal entries ±1 and non-zero upper-right entry.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearWitness {
    /// Symbols `1..=N` in time order; the product is `A[w_last] ··· A[w_first]`.
    pub word: Vec<usize>,
    /// The product in the triangularising basis.
    pub product: Mat2<QuadScalar>,
    /// `|B_12| / len(word)`, rounded down to a rational when irrational.
    pub rate_lower: Rational,
}

impl LinearWitness {
    pub fn to_json(&self) -> Value {
        json!({
            "word": self.word,
            "rate_lower": self.rate_lower.to_string(),
            "product": matrix_to_json(&self.product),
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthClass {
    pub tag: GrowthTag,
    pub reason: String,
    pub certificate: Option<BoundCertificate>,
    pub witness: Option<LinearWitness>,
    pub rho: Option<RhoReport>,
}

impl GrowthClass {
    /// `{"tag", "reason", "certificate": {...}|null, "witness": {...}|null, "rho": {...}|null}`.
    pub fn to_json(&self) -> Value {
        json!({
            "tag": self.tag,
            "reason": self.reason,
            "certificate": self.certificate.as_ref().map(BoundCertificate::to_json),
            "witness": self.witness.as_ref().map(LinearWitness::to_json),
            "rho": self.rho.as_ref().map(|r| serde_json::to_value(r).expect("serializable")),
        })
    }
}

pub const REASON_EXTREMAL_NORM: &str = "extremal norm case";

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status")]
pub enum RhoStatus {
    ExactOne,
    NumericWithin { eps: f64 },
    Not1 { estimate: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoReport {
    #[serde(flatten)]
    pub status: RhoStatus,
    pub lower: f64,
    pub upper: f64,
    pub exact: bool,
}

impl RhoReport {
    pub fn accepts_one(&self) -> bool {
        !matches!(self.status, RhoStatus::Not1 { .. })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyConfig {
    /// Product length used for the numeric joint-spectral-radius bracket.
    pub depth: usize,
    /// Tolerance on `1 ∈ [lower, upper]` for the numeric bracket.
    pub tolerance: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { depth: 10, tolerance: 1e-9 }
    }
}

fn quad(m: &Mat2<Rational>) -> Mat2<QuadScalar> {
    m.map(QuadScalar::from_rational)
}

/// A line preserved by every matrix, if one exists.
///
/// The pivot is the first non-scalar matrix; its eigenlines are tried in the
/// order [`Mat2::real_eigenlines`] returns them. An all-scalar set yields `(1,0)`.
pub fn common_invariant_line(set: &MatrixSet<Rational>) -> Option<[QuadScalar; 2]> {
    let Some(pivot) = set.matrices().iter().find(|m| !m.is_scalar()) else {
        return Some([QuadScalar::one(), QuadScalar::zero()]);
    };
    let lines = match pivot.real_eigenlines() {
        Eigenlines::Lines(lines) => lines,
        Eigenlines::None => return None,
        Eigenlines::All => unreachable!("pivot is not scalar"),
    };
    let quads: Vec<_> = set.matrices().iter().map(quad).collect();
    lines.into_iter().map(|l| l.direction).find(|v| quads.iter().all(|a| parallel(&a.apply(v), v)))
}

/// Exact simultaneous triangularisation. An already upper-triangular set is
/// returned unchanged with the identity basis.
pub fn triangularize(set: &MatrixSet<Rational>) -> Option<Triangularization> {
    if set.is_upper_triangular() {
        return Some(Triangularization {
            basis: Mat2::identity(),
            conjugated: set.matrices().iter().map(quad).collect(),
        });
    }
    let v = common_invariant_line(set)?;
    // v is normalised: either (1, t) or (0, 1).
    let basis = if v[0].is_zero() {
        Mat2::new(QuadScalar::zero(), QuadScalar::one(), QuadScalar::one(), QuadScalar::zero())
    } else {
        Mat2::new(v[0].clone(), QuadScalar::zero(), v[1].clone(), QuadScalar::one())
    };
    let inv = basis.inverse().expect("basis is invertible");
    let conjugated = set
        .matrices()
        .iter()
        .map(|a| {
            let mut c = &(&inv * &quad(a)) * &basis;
            debug_assert!(c.e21.is_zero());
            c.e21 = QuadScalar::zero();
            c
        })
        .collect();
    Some(Triangularization { basis, conjugated })
}

/// Decide whether the joint spectral radius equals one.
///
/// Exact for triangularisable sets (the maximum modulus of a diagonal entry);
/// otherwise a numeric bracket from products of length `<= depth`.
pub fn verify_rho_one(set: &MatrixSet<Rational>, depth: usize, tolerance: f64) -> RhoReport {
    if let Some(tri) = triangularize(set) {
        let rho = tri
            .conjugated
            .iter()
            .map(Mat2::triangular_spectral_radius)
            .reduce(|a, b| a.max_of(b))
            .expect("non-empty set");
        let est = rho.to_f64();
        let status = if rho == QuadScalar::one() { RhoStatus::ExactOne } else { RhoStatus::Not1 { estimate: est } };
        return RhoReport { status, lower: est, upper: est, exact: true };
    }
    let (lower, upper) = jsr_bracket(&set.to_f64(), depth.max(1));
    let status = if lower > 1.0 + tolerance {
        RhoStatus::Not1 { estimate: lower }
    } else if upper < 1.0 - tolerance {
        RhoStatus::Not1 { estimate: upper }
    } else {
        RhoStatus::NumericWithin { eps: tolerance }
    };
    RhoReport { status, lower, upper, exact: false }
}

/// `[max_P rho(P)^{1/|P|}, min_n (max_{|P|=n} ||P||_2)^{1/n}]` over products of length `<= depth`.
pub fn jsr_bracket(set: &MatrixSet<f64>, depth: usize) -> (f64, f64) {
    let mats = set.matrices();
    let mut level: Vec<Mat2<f64>> = mats.to_vec();
    let mut lower = 0.0f64;
    let mut upper = f64::INFINITY;
    for n in 1..=depth {
        let (rho_max, norm_max) = level
            .par_iter()
            .map(|p| (p.spectral_radius_f64(), p.op_norm_2()))
            .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
        let inv_n = 1.0 / n as f64;
        lower = lower.max(rho_max.powf(inv_n));
        upper = upper.min(norm_max.powf(inv_n));
        if n < depth {
            level = level.par_iter().flat_map_iter(|p| mats.iter().map(move |a| a * p)).collect();
        }
    }
    (lower, upper)
}

/// Split by `|det| < 1` and `|det| = 1`; determinants are conjugation invariant.
pub fn partition_by_det(tri: &Triangularization) -> DetPartition {
    let mut part = DetPartition { a0: Vec::new(), a1: Vec::new() };
    for (i, m) in tri.conjugated.iter().enumerate() {
        if m.det().abs() == QuadScalar::one() {
            part.a1.push(i);
        } else {
            part.a0.push(i);
        }
    }
    part
}

/// Certificate for a finite set of upper-triangular matrices with spectral
/// radius at most one and `|det| < 1`.
///
/// Every generator is entrywise dominated in absolute value by
/// `B1 = [[1, M], [0, β]]` or `B2 = [[β, M], [0, 1]]`, where `β` bounds the
/// smaller diagonal modulus and `M` the upper-right modulus. Products of `B1`,
/// `B2` have maximal sum norm at some `B1^m B2^k`, and
/// `sup_n |B1^n|_1 = max(2, 1 + M/(1-β))`, hence the squared bound.
pub fn bounded_certificate<S: ExactScalar>(tri_set: &[Mat2<S>]) -> Result<BoundCertificate> {
    if tri_set.is_empty() {
        return Err(Error::Precondition("empty set".into()));
    }
    let one = Rational::from_i64(1);
    let mut beta = Rational::from_i64(0);
    let mut m_const = Rational::from_i64(0);
    for (i, a) in tri_set.iter().enumerate() {
        if !a.is_upper_triangular() {
            return Err(Error::Precondition(format!("matrix {} is not upper triangular", i + 1)));
        }
        let d1 = a.e11.abs();
        let d2 = a.e22.abs();
        if d1 > S::one() || d2 > S::one() {
            return Err(Error::Precondition(format!("matrix {} has spectral radius > 1", i + 1)));
        }
        if a.det().abs() >= S::one() {
            return Err(Error::Precondition(format!("matrix {} has |det| = 1", i + 1)));
        }
        let small = if d1 < d2 { d1 } else { d2 };
        let b = small.rational_upper_bound(Some(&one));
        if b > beta {
            beta = b;
        }
        let m = a.e12.abs().rational_upper_bound(None);
        if m > m_const {
            m_const = m;
        }
    }
    let bound = certificate_bound(&beta, &m_const);
    Ok(BoundCertificate { beta, m_const, original_bound: bound.clone(), bound })
}

/// `max(2, 1 + M/(1-β))²`.
pub fn certificate_bound(beta: &Rational, m_const: &Rational) -> Rational {
    let two = Rational::from_i64(2);
    let one = Rational::from_i64(1);
    let b1_sup = &one + m_const / (&one - beta);
    let s = if b1_sup > two { b1_sup } else { two };
    &s * &s
}

/// Exact test for simultaneous diagonalisability of upper-triangular matrices:
/// each is diagonalisable and they pairwise commute.
pub fn simultaneously_diagonalizable<S: Scalar>(mats: &[Mat2<S>]) -> bool {
    let each = mats.iter().all(|m| m.is_scalar() || m.e11 != m.e22 || m.e12.is_zero());
    each && mats.iter().enumerate().all(|(i, a)| mats[i + 1..].iter().all(|b| a * b == b * a))
}

/// Classify the growth of products of the set.
pub fn classify(set: &MatrixSet<Rational>, cfg: &ClassifyConfig) -> GrowthClass {
    let rho = verify_rho_one(set, cfg.depth, cfg.tolerance);
    if !rho.accepts_one() {
        let est = match rho.status {
            RhoStatus::Not1 { estimate } => estimate,
            _ => unreachable!(),
        };
        return GrowthClass {
            tag: GrowthTag::NotMarginal,
            reason: format!("joint spectral radius is not 1 (estimate {est})"),
            certificate: None,
            witness: None,
            rho: Some(rho),
        };
    }
    let Some(tri) = triangularize(set) else {
        return GrowthClass {
            tag: GrowthTag::Bounded,
            reason: REASON_EXTREMAL_NORM.into(),
            certificate: None,
            witness: None,
            rho: Some(rho),
        };
    };
    let mut class = classify_triangular(&tri);
    if let Some(cert) = class.certificate.as_mut() {
        cert.original_bound = &cert.bound * basis_distortion(&tri.basis);
    }
    class.rho = Some(rho);
    class
}

/// Classify a set given as [`crate::AnyMatrixSet`]; floats are rejected.
pub fn classify_any(set: &crate::AnyMatrixSet, cfg: &ClassifyConfig) -> Result<GrowthClass> {
    Ok(classify(set.exact()?, cfg))
}

/// `colmax(S) · rowmax(S⁻¹)`, so that `|S P S⁻¹|_1 <= factor · |P|_1`.
fn basis_distortion(basis: &Mat2<QuadScalar>) -> Rational {
    if *basis == Mat2::identity() {
        return Rational::from_i64(1);
    }
    let inv = basis.inverse().expect("invertible basis");
    let col = basis.e11.abs().add(&basis.e21.abs()).max_of(basis.e12.abs().add(&basis.e22.abs()));
    let row = inv.e11.abs().add(&inv.e12.abs()).max_of(inv.e21.abs().add(&inv.e22.abs()));
    col.mul(&row).rational_upper_bound(None)
}

fn classify_triangular(tri: &Triangularization) -> GrowthClass {
    let mats = &tri.conjugated;
    let part = partition_by_det(tri);
    let one = QuadScalar::one();

    // Type 2: nontrivial Jordan block with determinant 1.
    for &i in &part.a1 {
        let m = &mats[i];
        if m.det() == one && !m.e12.is_zero() {
            return linear(vec![i + 1], m.clone(), "nontrivial Jordan generator with determinant 1");
        }
    }
    // Type 3: determinant -1. Two that are not ±each other multiply to a Jordan block.
    let neg_det: Vec<usize> = part.a1.iter().copied().filter(|&i| mats[i].det() == one.neg()).collect();
    for (k, &i) in neg_det.iter().enumerate() {
        for &j in &neg_det[k + 1..] {
            let (x, y) = (&mats[i], &mats[j]);
            if *x != *y && *x != y.neg() {
                // Time order [j, i]: the product is x · y.
                let product = word_product(mats, &[j, i]);
                return linear(
                    vec![j + 1, i + 1],
                    product,
                    "two determinant -1 generators whose product is a nontrivial Jordan block",
                );
            }
        }
    }

    // Bounded: the unit-determinant part lies in the group {±I, ±X}.
    let x = neg_det.first().map(|&i| mats[i].clone());
    let mut group = vec![Mat2::<QuadScalar>::identity(), Mat2::identity().neg()];
    if let Some(x) = &x {
        group.push(x.clone());
        group.push(x.neg());
    }
    let group_bound = group.iter().map(|g| g.sum_norm().rational_upper_bound(None)).max().expect("non-empty");
    let a0: Vec<_> = part.a0.iter().map(|&i| mats[i].clone()).collect();
    let reason = match (&x, part.a1.is_empty()) {
        (_, true) => "all generators have |det| < 1".to_string(),
        (None, false) => "unit-determinant generators lie in {I, -I}".to_string(),
        (Some(_), false) => "unit-determinant generators lie in the group {I, -I, X, -X}".to_string(),
    };
    let cert = if a0.is_empty() {
        let z = Rational::from_i64(0);
        BoundCertificate { beta: z.clone(), m_const: z, bound: group_bound.clone(), original_bound: group_bound }
    } else {
        let mut hat = a0.clone();
        for g in &group[1..] {
            for a in &a0 {
                hat.push(g * a);
                hat.push(a * g);
            }
        }
        let mut cert = bounded_certificate(&hat).expect("generators satisfy the domination hypotheses");
        if group_bound > cert.bound {
            cert.bound = group_bound;
        }
        cert.original_bound = cert.bound.clone();
        cert
    };
    GrowthClass { tag: GrowthTag::Bounded, reason, certificate: Some(cert), witness: None, rho: None }
}

fn linear(word: Vec<usize>, product: Mat2<QuadScalar>, reason: &str) -> GrowthClass {
    let len = Rational::from_i64(word.len() as i64);
    let seminorm = product.upper_right_seminorm();
    let rate_lower = match seminorm.as_rational() {
        Some(r) => r / &len,
        // Rational lower bound of an irrational seminorm.
        None => {
            let up = seminorm.neg().rational_upper_bound(None);
            -up / &len
        }
    };
    GrowthClass {
        tag: GrowthTag::Linear,
        reason: reason.into(),
        certificate: None,
        witness: Some(LinearWitness { word, product, rate_lower }),
        rho: None,
    }
}
