//! Growth sequences of products of upper-triangular cocycles.
//!
//! For products `P` of length `n`, `a_n` is the maximal norm and `c_n` the
//! maximal modulus of the upper-right entry. `c_n` is subadditive, so
//! `c_n / n` decreases to its limit along doublings and `min_n c_n / n` is a
//! rigorous upper bound for it.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::ergodic::{CocycleSpec, Digraph};
use crate::error::{Error, Result};
use crate::matrix::{Mat2, MatrixSet};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NormKind {
    Op2,
    Sum,
}

impl std::str::FromStr for NormKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op2" => Ok(NormKind::Op2),
            "sum" => Ok(NormKind::Sum),
            other => Err(Error::Parse(format!("unknown norm {other:?} (expected op2 or sum)"))),
        }
    }
}

pub const DEFAULT_PRODUCT_BUDGET: u64 = 1 << 26;
pub const MAX_HULL_STEPS: usize = 100_000;

#[derive(Clone, Debug)]
pub struct EnumerationConfig {
    pub max_len: usize,
    /// Drop products entrywise dominated by another product of the same length.
    /// Requires nonnegative upper-triangular generators.
    pub prune_domination: bool,
    /// Merge products equal up to sign; every tracked quantity is sign invariant.
    pub dedup: bool,
    pub norm: NormKind,
    /// Maximum number of matrix multiplications.
    pub budget: u64,
}

impl EnumerationConfig {
    pub fn new(max_len: usize) -> Self {
        EnumerationConfig {
            max_len,
            prune_domination: false,
            dedup: true,
            norm: NormKind::Op2,
            budget: DEFAULT_PRODUCT_BUDGET,
        }
    }
}

/// Per-length maxima. `lengths[i]` is the `n` of entry `i` of every vector.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GrowthCurve {
    pub lengths: Vec<usize>,
    pub norm: Option<NormKind>,
    pub a_vals: Option<Vec<f64>>,
    /// Exact `a_n`, for the sum norm over exact scalars.
    pub a_exact: Option<Vec<Rational>>,
    pub c_vals: Vec<f64>,
    pub c_exact: Option<Vec<Rational>>,
    /// Exact `|Φ_n|` of a word found by a floating search: a lower bound on `c_n`.
    pub c_lower_exact: Option<Vec<Rational>>,
    /// Lexicographically least maximising word for `a_n` (symbols `1..=N`, time order).
    pub a_argmax: Option<Vec<Vec<usize>>>,
    pub c_argmax: Option<Vec<Vec<usize>>>,
    /// Largest number of hull points held at one node.
    pub hull_watermark: Option<usize>,
}

impl GrowthCurve {
    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// `min_n c_n / n` over the recorded lengths.
    pub fn fekete_upper(&self) -> f64 {
        self.lengths.iter().zip(&self.c_vals).map(|(&n, &c)| c / n as f64).fold(f64::INFINITY, f64::min)
    }

    pub fn write_csv(&self, mut w: impl Write) -> std::io::Result<()> {
        w.write_all(self.to_csv().as_bytes())
    }

    /// CSV with header `n,a_n,c_n,c_n_over_n`; `a_n` is empty when not computed.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,a_n,c_n,c_n_over_n\n");
        for (i, &n) in self.lengths.iter().enumerate() {
            let a = self.a_vals.as_ref().map(|a| a[i].to_string()).unwrap_or_default();
            let c = self.c_vals[i];
            writeln!(s, "{n},{a},{c},{}", c / n as f64).expect("string write");
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeketeBracket {
    /// `min_n c_n / n`, an upper bound for `lim c_n / n`.
    pub upper: f64,
    pub upper_at: usize,
    /// `c_n / n` at the largest recorded `n`.
    pub latest: f64,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub upper_exact: Option<Rational>,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub latest_exact: Option<Rational>,
    /// `c_{2n}/(2n) <= c_n/n + 1e-12` for every recorded pair `(n, 2n)`.
    pub monotone_doublings: bool,
}

fn ser_opt_ratio<Ser: serde::Serializer>(r: &Option<Rational>, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}

pub fn fekete_bracket(curve: &GrowthCurve) -> Result<FeketeBracket> {
    if curve.is_empty() {
        return Err(Error::Precondition("empty growth curve".into()));
    }
    let ratio = |i: usize| curve.c_vals[i] / curve.lengths[i] as f64;
    let mut best = 0;
    for i in 1..curve.lengths.len() {
        if ratio(i) < ratio(best) {
            best = i;
        }
    }
    let last = curve.lengths.len() - 1;
    let exact_ratio =
        |i: usize| curve.c_exact.as_ref().map(|c| &c[i] / Rational::from_integer(BigInt::from(curve.lengths[i])));
    let upper_exact = curve
        .c_exact
        .as_ref()
        .map(|_| (0..curve.lengths.len()).map(|i| exact_ratio(i).expect("exact")).min().expect("non-empty"));
    let mut monotone = true;
    for (i, &n) in curve.lengths.iter().enumerate() {
        if let Ok(j) = curve.lengths.binary_search(&(2 * n)) {
            if ratio(j) > ratio(i) + 1e-12 {
                monotone = false;
            }
        }
    }
    Ok(FeketeBracket {
        upper: ratio(best),
        upper_at: curve.lengths[best],
        latest: ratio(last),
        upper_exact,
        latest_exact: exact_ratio(last),
        monotone_doublings: monotone,
    })
}

struct Entry<S> {
    m: Mat2<S>,
    word: Vec<u8>,
}

fn cmp_scalar<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).unwrap_or(Ordering::Equal)
}

fn cmp_mat<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Ordering {
    a.entries().iter().zip(b.entries()).map(|(x, y)| cmp_scalar(*x, y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
}

fn sign_canonical<S: Scalar>(m: Mat2<S>) -> Mat2<S> {
    let first = m.entries().into_iter().find(|x| !x.is_zero()).cloned();
    match first {
        Some(x) if x.is_negative() => m.neg(),
        _ => m,
    }
}

fn total_products(n: usize, max_len: usize) -> u64 {
    let mut total: u64 = 0;
    let mut level: u64 = 1;
    for _ in 0..max_len {
        level = level.saturating_mul(n as u64);
        total = total.saturating_add(level);
    }
    total
}

/// Maxima of `|P|` and `|P_12|` over products of each length `1..=max_len`.
///
/// Products are generated level by level; with `dedup` equal products (up to
/// sign) are merged, and with `prune_domination` products entrywise dominated
/// by another product are dropped. Both preserve the maxima: for nonnegative
/// matrices every tracked quantity is monotone in the entries.
pub fn enumerate_growth<S: Scalar>(set: &MatrixSet<S>, cfg: &EnumerationConfig) -> Result<GrowthCurve> {
    if cfg.max_len == 0 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    let mats = set.matrices();
    if mats.len() > u8::MAX as usize {
        return Err(Error::InvalidInput("at most 255 matrices".into()));
    }
    if cfg.prune_domination && !mats.iter().all(|m| m.is_nonnegative() && m.is_upper_triangular()) {
        return Err(Error::Precondition("domination pruning needs nonnegative upper-triangular matrices".into()));
    }
    if !cfg.prune_domination && !cfg.dedup && total_products(mats.len(), cfg.max_len) > cfg.budget {
        return Err(Error::Budget(format!(
            "{}^{} products exceed the budget of {} (enable pruning)",
            mats.len(),
            cfg.max_len,
            cfg.budget
        )));
    }
    let exact = mats.iter().all(|m| m.entries().iter().all(|x| x.to_rational().is_some()));
    let mut curve = GrowthCurve { norm: Some(cfg.norm), ..Default::default() };
    let (mut a_vals, mut a_exact, mut c_exact, mut a_arg, mut c_arg) = (vec![], vec![], vec![], vec![], vec![]);
    let mut level: Vec<Entry<S>> = vec![Entry { m: Mat2::identity(), word: Vec::new() }];
    let mut spent: u64 = 0;
    for n in 1..=cfg.max_len {
        spent = spent.saturating_add((level.len() * mats.len()) as u64);
        if spent > cfg.budget {
            return Err(Error::Budget(format!("more than {} products at length {n}", cfg.budget)));
        }
        let mut next: Vec<Entry<S>> = level
            .par_iter()
            .flat_map_iter(|e| {
                mats.iter().enumerate().map(move |(a, m)| {
                    let mut word = e.word.clone();
                    word.push(a as u8);
                    Entry { m: m * &e.m, word }
                })
            })
            .collect();
        if cfg.dedup {
            next = dedup_level(next);
        }
        if cfg.prune_domination {
            next = prune_level(next);
        }
        let norm = cfg.norm;
        let a_of = |m: &Mat2<S>| match norm {
            NormKind::Op2 => m.op_norm_2(),
            NormKind::Sum => m.sum_norm().to_f64(),
        };
        let best_a = next
            .par_iter()
            .map(|e| (a_of(&e.m), e))
            .reduce_with(|x, y| if y.0 > x.0 || (y.0 == x.0 && y.1.word < x.1.word) { y } else { x })
            .expect("non-empty level")
            .1;
        let best_c = next
            .par_iter()
            .reduce_with(|x, y| match cmp_scalar(&y.m.upper_right_seminorm(), &x.m.upper_right_seminorm()) {
                Ordering::Greater => y,
                Ordering::Equal if y.word < x.word => y,
                _ => x,
            })
            .expect("non-empty level");
        // Under Sum the f64 maximiser may tie; the exact maximum is recomputed.
        if norm == NormKind::Sum && exact {
            let best = next.iter().map(|e| e.m.sum_norm()).reduce(|x, y| x.max_of(y)).expect("non-empty level");
            a_exact.push(best.to_rational().expect("exact"));
        }
        a_vals.push(a_of(&best_a.m));
        a_arg.push(best_a.word.iter().map(|&s| s as usize + 1).collect());
        let c = best_c.m.upper_right_seminorm();
        curve.c_vals.push(c.to_f64());
        if exact {
            c_exact.push(c.to_rational().expect("exact"));
        }
        c_arg.push(best_c.word.iter().map(|&s| s as usize + 1).collect());
        curve.lengths.push(n);
        level = next;
    }
    curve.a_vals = Some(a_vals);
    curve.a_exact = (norm_is_sum(cfg) && exact).then_some(a_exact);
    curve.c_exact = exact.then_some(c_exact);
    curve.a_argmax = Some(a_arg);
    curve.c_argmax = Some(c_arg);
    Ok(curve)
}

fn norm_is_sum(cfg: &EnumerationConfig) -> bool {
    cfg.norm == NormKind::Sum
}

fn dedup_level<S: Scalar>(level: Vec<Entry<S>>) -> Vec<Entry<S>> {
    let mut level: Vec<Entry<S>> = level.into_iter().map(|e| Entry { m: sign_canonical(e.m), word: e.word }).collect();
    level.par_sort_by(|x, y| cmp_mat(&x.m, &y.m).then_with(|| x.word.cmp(&y.word)));
    level.dedup_by(|later, kept| later.m == kept.m);
    level.par_sort_by(|x, y| x.word.cmp(&y.word));
    level
}

fn prune_level<S: Scalar>(mut level: Vec<Entry<S>>) -> Vec<Entry<S>> {
    // A dominating product has at least the same entry sum, so it is seen first.
    level.par_sort_by(|x, y| cmp_scalar(&y.m.sum_norm(), &x.m.sum_norm()).then_with(|| x.word.cmp(&y.word)));
    let mut kept: Vec<Entry<S>> = Vec::new();
    for e in level {
        if !kept.iter().any(|k| e.m.dominated_by(&k.m)) {
            kept.push(e);
        }
    }
    kept.sort_by(|x, y| x.word.cmp(&y.word));
    kept
}

/// Coordinates for the hull dynamic programme: exact integers or floats.
trait Coord: Clone + PartialEq + Send + Sync {
    fn add(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_negative(&self) -> bool;
    fn abs_cmp(&self, o: &Self) -> Ordering;
    fn total_cmp(&self, o: &Self) -> Ordering;
    /// Orientation of `(b - a) × (c - a)`, with `Equal` for collinear.
    fn turn(a: &(Self, Self), b: &(Self, Self), c: &(Self, Self)) -> Ordering;
}

impl Coord for BigInt {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn abs_cmp(&self, o: &Self) -> Ordering {
        self.magnitude().cmp(o.magnitude())
    }
    fn total_cmp(&self, o: &Self) -> Ordering {
        self.cmp(o)
    }
    fn turn(a: &(Self, Self), b: &(Self, Self), c: &(Self, Self)) -> Ordering {
        let l = (&b.0 - &a.0) * (&c.1 - &a.1);
        let r = (&b.1 - &a.1) * (&c.0 - &a.0);
        l.cmp(&r)
    }
}

/// Relative collinearity tolerance for floating hulls.
const HULL_TOL: f64 = 1e-12;

impl Coord for f64 {
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn abs_cmp(&self, o: &Self) -> Ordering {
        f64::abs(*self).total_cmp(&f64::abs(*o))
    }
    fn total_cmp(&self, o: &Self) -> Ordering {
        f64::total_cmp(self, o)
    }
    fn turn(a: &(Self, Self), b: &(Self, Self), c: &(Self, Self)) -> Ordering {
        let l = (b.0 - a.0) * (c.1 - a.1);
        let r = (b.1 - a.1) * (c.0 - a.0);
        if (l - r).abs() <= HULL_TOL * (l.abs() + r.abs()) {
            Ordering::Equal
        } else {
            l.total_cmp(&r)
        }
    }
}

type Pt<C, X> = ((C, C), X);

/// Extreme points of the convex hull (monotone chain, collinear points
/// dropped). Each point carries a payload that follows it.
fn convex_hull<C: Coord, X: Clone>(mut pts: Vec<Pt<C, X>>) -> Vec<Pt<C, X>> {
    pts.sort_by(|p, q| p.0 .0.total_cmp(&q.0 .0).then_with(|| p.0 .1.total_cmp(&q.0 .1)));
    pts.dedup_by(|later, kept| later.0 == kept.0);
    if pts.len() <= 2 {
        return pts;
    }
    let chain = |iter: &mut dyn Iterator<Item = &Pt<C, X>>| {
        let mut out: Vec<Pt<C, X>> = Vec::new();
        for p in iter {
            while out.len() >= 2 && C::turn(&out[out.len() - 2].0, &out[out.len() - 1].0, &p.0) != Ordering::Greater {
                out.pop();
            }
            out.push(p.clone());
        }
        out.pop();
        out
    };
    let mut hull = chain(&mut pts.iter());
    hull.extend(chain(&mut pts.iter().rev()));
    hull
}

/// Transition `from --(f, φ, g)--> to` of the window graph.
#[derive(Clone)]
struct Step<C> {
    from: usize,
    f: C,
    phi: C,
    g: C,
}

impl<C: Coord> Step<C> {
    /// Left multiplication by `[[f, φ], [0, g]]`, stored with `G >= 0`.
    fn apply(&self, (phi, g): &(C, C)) -> (C, C) {
        let p = self.f.mul(phi).add(&self.phi.mul(g));
        let q = self.g.mul(g);
        if q.is_negative() {
            (p.neg(), q.neg())
        } else {
            (p, q)
        }
    }
}

fn max_abs<'a, C: Coord + 'a>(xs: impl Iterator<Item = &'a C>) -> C {
    let best = xs.max_by(|a, b| a.abs_cmp(b)).expect("non-empty").clone();
    if best.is_negative() {
        best.neg()
    } else {
        best
    }
}

/// Exact core of the hull DP over scaled integers.
///
/// Each node holds the extreme points of the set of pairs `(Φ_n(x), G_n(x))`
/// over words ending there, where `G_n` is the product of the `g` values.
/// Appending a letter with data `(f, φ, g)` multiplies the product on the left
/// by `[[f, φ], [0, g]]`, which sends `(Φ, G) ↦ (f Φ + φ G, g G)`.
///
/// The accumulated `F`-product never enters this update: later letters only
/// multiply `Φ` by their own `f`, and the diagonal entry `F` of the built word
/// is never read. So `F` is not stored.
///
/// Every future value of `Φ` is `α Φ + γ G` for coefficients fixed by the
/// future word alone, and the objective is its absolute value, a convex
/// function of `(Φ, G)`. Its maximum over a node's points is attained at an
/// extreme point, so discarding interior points is lossless whatever the signs
/// of `f`, `g`, `φ`. The sign of a pair is also irrelevant, so pairs are stored
/// with `G > 0`.
fn hull_run_exact(incoming: &[Vec<Step<BigInt>>], n_max: usize) -> (Vec<BigInt>, usize) {
    let mut hulls: Vec<Vec<Pt<BigInt, ()>>> = vec![vec![((BigInt::zero(), BigInt::one()), ())]; incoming.len()];
    let mut maxima = Vec::with_capacity(n_max);
    let mut watermark = 1;
    for _ in 0..n_max {
        hulls = incoming
            .par_iter()
            .map(|steps| {
                let cand =
                    steps.iter().flat_map(|s| hulls[s.from].iter().map(move |(p, _)| (s.apply(p), ()))).collect();
                convex_hull(cand)
            })
            .collect();
        watermark = watermark.max(hulls.iter().map(Vec::len).max().unwrap_or(0));
        maxima.push(max_abs(hulls.iter().flatten().map(|p| &p.0 .0)));
    }
    (maxima, watermark)
}

/// Floating core of the hull DP. Same recursion as [`hull_run_exact`] with a
/// tolerant hull, and pairs with `G < cutoff` collapsed to the two with
/// extreme `Φ`. A collapsed pair changes any later value by at most
/// `2 · cutoff · sup |γ|`, negligible against the tolerances used here.
///
/// With `shadow` steps each pair also carries its exact scaled value, so the
/// reported exact maxima are attained by actual words: exact lower bounds on
/// `c_n`.
fn hull_run_float(
    incoming: &[Vec<Step<f64>>],
    shadow: Option<&[Vec<Step<BigInt>>]>,
    n_max: usize,
    cutoff: f64,
) -> (Vec<f64>, Option<Vec<BigInt>>, usize) {
    type Shadow = Option<(BigInt, BigInt)>;
    type NodeStep = (Vec<Pt<f64, Shadow>>, f64, Option<BigInt>);
    let init: Pt<f64, Shadow> = ((0.0, 1.0), shadow.map(|_| (BigInt::zero(), BigInt::one())));
    let mut hulls: Vec<Vec<Pt<f64, Shadow>>> = vec![vec![init]; incoming.len()];
    let mut maxima = Vec::with_capacity(n_max);
    let mut exact_maxima = Vec::with_capacity(if shadow.is_some() { n_max } else { 0 });
    let mut watermark = 1;
    for _ in 0..n_max {
        let results: Vec<NodeStep> = incoming
            .par_iter()
            .enumerate()
            .map(|(to, steps)| {
                let mut cand: Vec<Pt<f64, Shadow>> = Vec::new();
                for (k, s) in steps.iter().enumerate() {
                    let ex = shadow.map(|sh| &sh[to][k]);
                    for (p, x) in &hulls[s.from] {
                        let xs = match (ex, x) {
                            (Some(e), Some(v)) => Some(e.apply(v)),
                            _ => None,
                        };
                        cand.push((s.apply(p), xs));
                    }
                }
                let best = max_abs(cand.iter().map(|c| &c.0 .0));
                let best_exact = shadow.map(|_| max_abs(cand.iter().map(|c| &c.1.as_ref().expect("shadow").0)));
                let (small, mut big): (Vec<_>, Vec<_>) = cand.into_iter().partition(|c| c.0 .1 < cutoff);
                let lo = small.iter().min_by(|a, b| a.0 .0.total_cmp(&b.0 .0));
                let hi = small.iter().max_by(|a, b| a.0 .0.total_cmp(&b.0 .0));
                big.extend(lo.into_iter().chain(hi).cloned());
                (convex_hull(big), best, best_exact)
            })
            .collect();
        let mut best = 0.0f64;
        let mut best_exact: Option<BigInt> = None;
        hulls = Vec::with_capacity(results.len());
        for (h, b, e) in results {
            best = best.max(b);
            if let Some(e) = e {
                if best_exact.as_ref().is_none_or(|x| e > *x) {
                    best_exact = Some(e);
                }
            }
            hulls.push(h);
        }
        watermark = watermark.max(hulls.iter().map(Vec::len).max().unwrap_or(0));
        maxima.push(best);
        if let Some(e) = best_exact {
            exact_maxima.push(e);
        }
    }
    (maxima, shadow.map(|_| exact_maxima), watermark)
}

/// Arithmetic used by the hull DP.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum HullMode {
    /// Exact for rational data when `n_max <= EXACT_AUTO_MAX`, floating otherwise.
    #[default]
    Auto,
    /// Exact rational hulls. Hull sizes can grow linearly in `n`, so the cost
    /// is roughly cubic; intended for moderate `n`.
    Exact,
    /// Floating hulls; for rational data the exact values of the maximising
    /// words are carried alongside.
    Float,
}

pub const EXACT_AUTO_MAX: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullConfig {
    pub mode: HullMode,
    /// Floating mode: pairs with `G` below this are collapsed.
    pub small_g_cutoff: f64,
}

impl Default for HullConfig {
    fn default() -> Self {
        HullConfig { mode: HullMode::Auto, small_g_cutoff: 1e-15 }
    }
}

/// Exact values of `(f, φ, g)` for every edge, when all are rational.
type RationalEdges = Vec<[Rational; 3]>;

fn run_tables<S: Scalar>(
    nodes: usize,
    edges: &[(usize, usize, S, S, S)],
    n_max: usize,
    cfg: &HullConfig,
) -> Result<GrowthCurve> {
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be at least 1".into()));
    }
    if n_max > MAX_HULL_STEPS {
        return Err(Error::Budget(format!("n_max {n_max} exceeds {MAX_HULL_STEPS}")));
    }
    let lengths: Vec<usize> = (1..=n_max).collect();
    let rational: Option<RationalEdges> =
        edges.iter().map(|(_, _, f, phi, g)| Some([f.to_rational()?, phi.to_rational()?, g.to_rational()?])).collect();
    let exact = match cfg.mode {
        HullMode::Exact if rational.is_none() => {
            return Err(Error::NotExact("float table".into()));
        }
        HullMode::Exact => true,
        HullMode::Float => false,
        HullMode::Auto => rational.is_some() && n_max <= EXACT_AUTO_MAX,
    };
    // Scale by a common denominator D so that D^n (Φ_n, G_n) are integers.
    let scaled = rational.as_ref().map(|rats| {
        let d = rats.iter().flatten().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let int = |r: &Rational| r.numer() * (&d / r.denom());
        let mut incoming: Vec<Vec<Step<BigInt>>> = vec![Vec::new(); nodes];
        for ((from, to, ..), [f, phi, g]) in edges.iter().zip(rats) {
            incoming[*to].push(Step { from: *from, f: int(f), phi: int(phi), g: int(g) });
        }
        (d, incoming)
    });
    let unscale = |d: &BigInt, maxima: Vec<BigInt>| -> Vec<Rational> {
        let mut scale = BigInt::one();
        maxima
            .into_iter()
            .map(|m| {
                scale *= d;
                Rational::new(m, scale.clone())
            })
            .collect()
    };
    if exact {
        let (d, incoming) = scaled.expect("rational tables");
        let (maxima, watermark) = hull_run_exact(&incoming, n_max);
        let c_exact = unscale(&d, maxima);
        let c_vals = c_exact.iter().map(|c| c.to_f64()).collect();
        return Ok(GrowthCurve {
            lengths,
            c_vals,
            c_exact: Some(c_exact),
            hull_watermark: Some(watermark),
            ..Default::default()
        });
    }
    let mut incoming: Vec<Vec<Step<f64>>> = vec![Vec::new(); nodes];
    for (from, to, f, phi, g) in edges {
        incoming[*to].push(Step { from: *from, f: f.to_f64(), phi: phi.to_f64(), g: g.to_f64() });
    }
    let (c_vals, lower, watermark) =
        hull_run_float(&incoming, scaled.as_ref().map(|s| s.1.as_slice()), n_max, cfg.small_g_cutoff);
    let c_lower_exact = lower.map(|l| unscale(&scaled.as_ref().expect("rational").0, l));
    Ok(GrowthCurve { lengths, c_vals, c_lower_exact, hull_watermark: Some(watermark), ..Default::default() })
}

/// `c_n = sup_x |Φ_n(x)|` for `n = 1..=n_max` by the hull DP over the window graph.
pub fn hull_dp_growth<S: Scalar>(spec: &CocycleSpec<S>, n_max: usize) -> Result<GrowthCurve> {
    hull_dp_growth_with(spec, n_max, &HullConfig::default())
}

pub fn hull_dp_growth_with<S: Scalar>(spec: &CocycleSpec<S>, n_max: usize, cfg: &HullConfig) -> Result<GrowthCurve> {
    let graph = Digraph::de_bruijn(&spec.phi);
    let (f, g, phi) = (spec.f.table(), spec.g.table(), spec.phi.table());
    let edges: Vec<_> =
        graph.edges.iter().map(|e| (e.from, e.to, f[e.word].clone(), phi[e.word].clone(), g[e.word].clone())).collect();
    run_tables(graph.nodes, &edges, n_max, cfg)
}

/// `c_n` for products of an upper-triangular matrix set, by the hull DP on a
/// single node. Diagonal entries may have any sign.
pub fn hull_dp_matrices<S: Scalar>(set: &MatrixSet<S>, n_max: usize) -> Result<GrowthCurve> {
    hull_dp_matrices_with(set, n_max, &HullConfig::default())
}

pub fn hull_dp_matrices_with<S: Scalar>(set: &MatrixSet<S>, n_max: usize, cfg: &HullConfig) -> Result<GrowthCurve> {
    if !set.is_upper_triangular() {
        return Err(Error::Precondition("hull DP needs upper-triangular matrices".into()));
    }
    let edges: Vec<_> = set.matrices().iter().map(|m| (0, 0, m.e11.clone(), m.e12.clone(), m.e22.clone())).collect();
    run_tables(1, &edges, n_max, cfg)
}

/// A word whose product has equal diagonal entries `±1`, so that its powers
/// grow linearly with rate `|P_12| / len`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicBound {
    /// Symbols `1..=N` in time order.
    pub word: Vec<usize>,
    pub rate: Rational,
}

/// Best linear rate certified by a single word of length `<= max_word`.
/// Ties go to the shorter, then lexicographically smaller, word.
pub fn periodic_lower_bound(set: &MatrixSet<Rational>, max_word: usize) -> Result<Option<PeriodicBound>> {
    if !set.is_upper_triangular() {
        return Err(Error::Precondition("periodic bound needs upper-triangular matrices".into()));
    }
    if total_products(set.len(), max_word) > DEFAULT_PRODUCT_BUDGET {
        return Err(Error::Budget(format!("{}^{max_word} words", set.len())));
    }
    let mats = set.matrices();
    let one = <Rational as One>::one();
    let mut best: Option<PeriodicBound> = None;
    let mut level: Vec<(Mat2<Rational>, Vec<usize>)> = vec![(Mat2::identity(), Vec::new())];
    for len in 1..=max_word {
        level = level
            .iter()
            .flat_map(|(p, w)| {
                mats.iter().enumerate().map(move |(a, m)| {
                    let mut w = w.clone();
                    w.push(a + 1);
                    (m * p, w)
                })
            })
            .collect();
        for (p, w) in &level {
            if p.e11 == p.e22 && Signed::abs(&p.e11) == one && !Zero::is_zero(&p.e12) {
                let rate = Signed::abs(&p.e12) / Rational::from_integer(BigInt::from(len));
                if best.as_ref().is_none_or(|b| rate > b.rate) {
                    best = Some(PeriodicBound { word: w.clone(), rate });
                }
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ergodic::LocallyConstantPotential;
    use crate::scalar::rat;

    fn jordan() -> MatrixSet<Rational> {
        MatrixSet::new(vec![Mat2::upper(rat(1, 1), rat(1, 1), rat(1, 1))]).unwrap()
    }

    #[test]
    fn jordan_norm_is_linear() {
        let set = jordan().to_f64();
        let curve = enumerate_growth(&set, &EnumerationConfig::new(1000)).unwrap();
        let a = curve.a_vals.unwrap()[999] / 1000.0;
        assert!((0.99..=1.01).contains(&a), "{a}");
    }

    #[test]
    fn rotation_is_isometric() {
        let r = MatrixSet::new(vec![Mat2::new(rat(0, 1), rat(-1, 1), rat(1, 1), rat(0, 1))]).unwrap();
        let curve = enumerate_growth(&r, &EnumerationConfig::new(24)).unwrap();
        assert!(curve.a_vals.unwrap().iter().all(|&a| (a - 1.0).abs() < 1e-12));
    }

    #[test]
    fn budget_is_enforced() {
        let two = MatrixSet::new(vec![Mat2::diag(rat(1, 1), rat(1, 2)), Mat2::upper(rat(1, 2), rat(1, 1), rat(1, 1))])
            .unwrap();
        let mut cfg = EnumerationConfig::new(30);
        cfg.dedup = false;
        assert!(matches!(enumerate_growth(&two, &cfg), Err(Error::Budget(_))));
        cfg.dedup = true;
        cfg.budget = 1000;
        assert!(matches!(enumerate_growth(&two, &cfg), Err(Error::Budget(_))));
    }

    #[test]
    fn pruning_needs_nonnegative_triangular() {
        let mut cfg = EnumerationConfig::new(3);
        cfg.prune_domination = true;
        let neg = MatrixSet::new(vec![Mat2::upper(rat(1, 1), rat(-1, 1), rat(1, 1))]).unwrap();
        assert!(matches!(enumerate_growth(&neg, &cfg), Err(Error::Precondition(_))));
    }

    #[test]
    fn hull_dp_birkhoff_sum() {
        let one = LocallyConstantPotential::constant(1, 1, rat(1, 1)).unwrap();
        let spec = CocycleSpec::new(one.clone(), one.clone(), one).unwrap();
        let curve = hull_dp_growth(&spec, 50).unwrap();
        for (n, c) in curve.lengths.iter().zip(curve.c_exact.unwrap()) {
            assert_eq!(c, rat(*n as i64, 1));
        }
        let j = hull_dp_matrices(&jordan(), 20).unwrap();
        assert_eq!(j.c_vals[19], 20.0);
    }

    #[test]
    fn hull_dp_matches_enumeration_on_signed_sets() {
        let set = MatrixSet::new(vec![
            Mat2::upper(rat(1, 1), rat(1, 1), rat(-1, 1)),
            Mat2::upper(rat(1, 1), rat(0, 1), rat(-1, 1)),
            Mat2::upper(rat(-1, 2), rat(3, 2), rat(2, 3)),
        ])
        .unwrap();
        let dp = hull_dp_matrices(&set, 9).unwrap();
        let en = enumerate_growth(&set, &EnumerationConfig::new(9)).unwrap();
        assert_eq!(dp.c_exact, en.c_exact);
    }

    #[test]
    fn fekete_examples() {
        let lin = GrowthCurve {
            lengths: (1..=10).collect(),
            c_vals: (1..=10).map(f64::from).collect(),
            ..Default::default()
        };
        let b = fekete_bracket(&lin).unwrap();
        assert_eq!((b.upper, b.latest), (1.0, 1.0));
        assert!(b.monotone_doublings);
        let k = GrowthCurve { lengths: (1..=100).collect(), c_vals: vec![3.0; 100], ..Default::default() };
        let b = fekete_bracket(&k).unwrap();
        assert_eq!((b.upper, b.upper_at), (0.03, 100));
        assert!(fekete_bracket(&GrowthCurve::default()).is_err());
    }

    #[test]
    fn periodic_examples() {
        let p = periodic_lower_bound(&jordan(), 4).unwrap().unwrap();
        assert_eq!((p.word, p.rate), (vec![1], rat(1, 1)));
        let pair = MatrixSet::new(vec![
            Mat2::upper(rat(1, 1), rat(1, 1), rat(-1, 1)),
            Mat2::upper(rat(1, 1), rat(0, 1), rat(-1, 1)),
        ])
        .unwrap();
        let p = periodic_lower_bound(&pair, 6).unwrap().unwrap();
        assert_eq!((p.word.len(), p.rate), (2, rat(1, 2)));
        let bounded = MatrixSet::new(vec![
            Mat2::upper(rat(1, 1), rat(1, 1), rat(1, 2)),
            Mat2::upper(rat(1, 2), rat(1, 1), rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(periodic_lower_bound(&bounded, 8).unwrap(), None);
    }

    #[test]
    fn csv_layout() {
        let curve = hull_dp_matrices(&jordan(), 2).unwrap();
        assert_eq!(curve.to_csv(), "n,a_n,c_n,c_n_over_n\n1,,1,1\n2,,2,1\n");
    }

    #[test]
    fn convex_hull_drops_interior_and_collinear() {
        let pts: Vec<(BigInt, BigInt)> = [(0, 0), (2, 0), (1, 0), (1, 1), (0, 2), (2, 2)]
            .iter()
            .map(|&(a, b)| (BigInt::from(a), BigInt::from(b)))
            .collect();
        let pts: Vec<_> = pts.into_iter().map(|p| (p, ())).collect();
        assert_eq!(convex_hull(pts).len(), 4);
        let line = vec![((0.0, 1.0), 0), ((1.0, 1.0), 1), ((2.0, 1.0), 2)];
        assert_eq!(convex_hull(line), vec![((0.0, 1.0), 0), ((2.0, 1.0), 2)]);
    }
}
