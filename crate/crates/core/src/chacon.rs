//! The Chacon subshift and a Lipschitz cocycle over it whose products grow
//! without bound but sublinearly.
//!
//! `Z` is the orbit closure of the fixed point of `0 → 0010, 1 → 1`. The
//! symbol `1` has frequency `1/3`. With `f = g = e^{-dist(·, Z)}` and
//! `φ = [x_0 = 1] - 1/3`, products along `Z` are `[[1, S_n], [0, 1]]` where
//! `S_n` is the Birkhoff sum of `φ`, so their growth is the discrepancy of the
//! subshift.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::Mat2;
use crate::scalar::{rat, Rational};

/// Deepest substitution level that may be generated (`|σ^16(0)| ≈ 6.5·10^7`).
pub const MAX_LEVEL: usize = 16;
pub const DEFAULT_RADIUS_CAP: usize = 16;

/// `σ^level(0)` as a vector of `0`/`1` symbols.
pub fn chacon_prefix(level: usize) -> Result<Vec<u8>> {
    if level > MAX_LEVEL {
        return Err(Error::Budget(format!("level {level} exceeds {MAX_LEVEL}")));
    }
    let mut w = vec![0u8];
    for _ in 0..level {
        let mut next = Vec::with_capacity(3 * w.len() + 1);
        for &s in &w {
            if s == 0 {
                next.extend_from_slice(&[0, 0, 1, 0]);
            } else {
                next.push(1);
            }
        }
        w = next;
    }
    Ok(w)
}

/// `|σ^k(0)| = (3^{k+1} - 1) / 2`.
pub fn level_length(k: usize) -> usize {
    (3usize.pow(k as u32 + 1) - 1) / 2
}

fn window_codes(word: &[u8], n: usize) -> HashSet<u64> {
    assert!((1..=64).contains(&n), "factor length must be in 1..=64");
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut set = HashSet::new();
    let mut code = 0u64;
    for (i, &s) in word.iter().enumerate() {
        code = ((code << 1) | u64::from(s)) & mask;
        if i + 1 >= n {
            set.insert(code);
        }
    }
    set
}

/// Factors of one length, encoded as bit strings (first symbol most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct FactorSet {
    pub n: usize,
    pub codes: HashSet<u64>,
    /// No new factor appears when the prefix is deepened by one level.
    pub stabilized: bool,
}

impl FactorSet {
    pub fn contains(&self, word: &[u8]) -> bool {
        word.len() == self.n && self.codes.contains(&encode(word))
    }

    /// Factors as `0`/`1` strings in increasing order.
    pub fn words(&self) -> Vec<String> {
        let mut codes: Vec<u64> = self.codes.iter().copied().collect();
        codes.sort_unstable();
        codes
            .into_iter()
            .map(|c| (0..self.n).rev().map(|b| if c >> b & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

fn encode(word: &[u8]) -> u64 {
    word.iter().fold(0, |c, &s| (c << 1) | u64::from(s))
}

/// Cached prefix `σ^depth(0)` and factor sets used for distances to `Z`.
#[derive(Clone, Debug)]
pub struct ChaconModel {
    depth: usize,
    prefix: Vec<u8>,
    radius_cap: usize,
    /// Factor sets of lengths `2k + 1`, `k = 0..=radius_cap`.
    centred: Vec<HashSet<u64>>,
    centred_stable: bool,
}

impl ChaconModel {
    pub fn new(depth: usize) -> Result<Self> {
        Self::with_radius_cap(depth, DEFAULT_RADIUS_CAP)
    }

    pub fn with_radius_cap(depth: usize, radius_cap: usize) -> Result<Self> {
        if 2 * radius_cap + 1 > 64 {
            return Err(Error::InvalidInput("radius cap must be at most 31".into()));
        }
        let prefix = chacon_prefix(depth)?;
        let shallower = &prefix[..level_length(depth.saturating_sub(1))];
        let centred: Vec<HashSet<u64>> = (0..=radius_cap).map(|k| window_codes(&prefix, 2 * k + 1)).collect();
        let centred_stable = depth > 0 && (0..=radius_cap).all(|k| window_codes(shallower, 2 * k + 1) == centred[k]);
        Ok(ChaconModel { depth, prefix, radius_cap, centred, centred_stable })
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn radius_cap(&self) -> usize {
        self.radius_cap
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    /// `σ^k(0)`, a prefix of the cached word.
    pub fn level(&self, k: usize) -> &[u8] {
        assert!(k <= self.depth, "level beyond cached depth");
        &self.prefix[..level_length(k)]
    }

    /// Whether the factor sets behind [`Self::dist_to_z`] were already complete
    /// one level earlier.
    pub fn distance_index_stabilized(&self) -> bool {
        self.centred_stable
    }

    /// Length-`n` factors from the shortest cached level of length at least
    /// `max(3^8, 40 n)`, compared against the next level.
    pub fn factor_set(&self, n: usize) -> Result<FactorSet> {
        if n == 0 || n > 64 {
            return Err(Error::InvalidInput("factor length must be in 1..=64".into()));
        }
        let need = (3usize.pow(8)).max(40 * n);
        let Some(level) = (0..=self.depth).find(|&k| level_length(k) >= need) else {
            let codes = window_codes(&self.prefix, n);
            return Ok(FactorSet { n, codes, stabilized: false });
        };
        let codes = window_codes(self.level(level), n);
        let stabilized = level < self.depth && window_codes(self.level(level + 1), n) == codes;
        Ok(FactorSet { n, codes, stabilized })
    }

    /// Largest `k <= cap` such that the block `x_{-k} .. x_k` is a factor of `Z`,
    /// or `None` when every radius up to the cap is admissible.
    fn kappa(&self, word: &[u8], origin: usize, extension: Extension) -> Result<Option<isize>> {
        let o = origin as isize;
        let len = word.len() as isize;
        let at = |i: isize| -> Option<u8> {
            if (0..len).contains(&i) {
                Some(word[i as usize])
            } else {
                match extension {
                    Extension::Strict => None,
                    Extension::RepeatEdge => Some(word[i.clamp(0, len - 1) as usize]),
                }
            }
        };
        let mut code = 0u64;
        for k in 0..=self.radius_cap as isize {
            let block = if k == 0 {
                at(o).map(u64::from)
            } else {
                at(o - k).zip(at(o + k)).map(|(l, r)| (u64::from(l) << (2 * k)) | (code << 1) | u64::from(r))
            };
            let Some(block) = block else {
                return Err(Error::WindowTooShort(format!(
                    "radius {k} leaves the {}-symbol window before a non-factor is found",
                    word.len()
                )));
            };
            if !self.centred[k as usize].contains(&block) {
                return Ok(Some(k - 1));
            }
            code = block;
        }
        Ok(None)
    }

    fn dist_at(&self, word: &[u8], origin: usize, extension: Extension) -> Result<f64> {
        Ok(match self.kappa(word, origin, extension)? {
            None => 0.0,
            Some(k) => 0.5f64.powi((k + 1) as i32),
        })
    }

    /// `dist(x, Z)` for `d(x, y) = 2^{-min{|i| : x_i ≠ y_i}}`: `2^{-(κ+1)}` where
    /// `κ` is the admissible radius, and `0` once the radius cap is reached.
    ///
    /// Since the language of a minimal subshift is exactly its set of factors,
    /// this is the true distance whenever `κ` is below the cap.
    pub fn dist_to_z(&self, p: &PointSample) -> Result<f64> {
        self.dist_at(&p.word, p.origin, p.extension)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extension {
    /// Symbols outside the window are unknown.
    Strict,
    /// Symbols outside repeat the nearest edge symbol.
    RepeatEdge,
}

/// A finite window of a point of `{0,1}^Z` with its zero coordinate marked.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSample {
    pub word: Vec<u8>,
    pub origin: usize,
    pub extension: Extension,
}

impl PointSample {
    pub fn new(word: Vec<u8>, origin: usize, extension: Extension) -> Result<Self> {
        if origin >= word.len() {
            return Err(Error::InvalidInput("origin outside the window".into()));
        }
        if word.iter().any(|&s| s > 1) {
            return Err(Error::InvalidInput("symbols must be 0 or 1".into()));
        }
        Ok(PointSample { word, origin, extension })
    }

    /// The shifted point `T^j x`.
    pub fn shifted(&self, j: usize) -> Result<Self> {
        PointSample::new(self.word.clone(), self.origin + j, self.extension)
    }
}

/// `A(x) = [[f(x), φ(x)], [0, g(x)]]` with `f = g = e^{-dist(x, Z)}` and
/// `φ = [x_0 = 1] - ν([1])`.
#[derive(Clone, Debug)]
pub struct LipschitzCocycle<'a> {
    pub model: &'a ChaconModel,
    /// Frequency of the symbol `1` on `Z`.
    pub nu1: Rational,
    pub metric_base: Rational,
}

pub fn build_cocycle(model: &ChaconModel) -> LipschitzCocycle<'_> {
    LipschitzCocycle { model, nu1: rat(1, 3), metric_base: rat(1, 2) }
}

impl LipschitzCocycle<'_> {
    pub fn f(&self, p: &PointSample) -> Result<f64> {
        Ok((-self.model.dist_to_z(p)?).exp())
    }

    pub fn g(&self, p: &PointSample) -> Result<f64> {
        self.f(p)
    }

    pub fn phi(&self, p: &PointSample) -> Rational {
        Rational::from_integer(BigInt::from(p.word[p.origin])) - &self.nu1
    }

    pub fn matrix(&self, p: &PointSample) -> Result<Mat2<f64>> {
        self.matrix_at(&p.word, p.origin, p.extension)
    }

    fn matrix_at(&self, word: &[u8], origin: usize, extension: Extension) -> Result<Mat2<f64>> {
        let f = (-self.model.dist_at(word, origin, extension)?).exp();
        let phi = f64::from(word[origin]) - num_traits::ToPrimitive::to_f64(&self.nu1).expect("finite");
        Ok(Mat2::new(f, phi, 0.0, f))
    }

    /// `A(T^{n-1} x) ··· A(x)` in floating point. Coordinates beyond the window
    /// follow the sample's extension rule.
    pub fn orbit_product(&self, p: &PointSample, n: usize) -> Result<Mat2<f64>> {
        let mut m = Mat2::identity();
        for j in 0..n {
            let o = p.origin + j;
            let a = if o < p.word.len() {
                self.matrix_at(&p.word, o, p.extension)?
            } else if p.extension == Extension::RepeatEdge {
                self.matrix_at(&p.word, p.word.len() - 1, p.extension)?
            } else {
                return Err(Error::WindowTooShort(format!("orbit leaves the window at step {j}")));
            };
            m = &a * &m;
        }
        Ok(m)
    }

    /// Exact product along the window of the cached prefix starting at
    /// `start`. Every position must lie at distance `0` from `Z`, so each
    /// factor is `[[1, φ], [0, 1]]`.
    pub fn z_window_product(&self, start: usize, n: usize) -> Result<Mat2<Rational>> {
        let prefix = self.model.prefix();
        let cap = self.model.radius_cap();
        if start < cap || start + n + cap > prefix.len() {
            return Err(Error::WindowTooShort(format!("window [{start}, {}) too close to the prefix ends", start + n)));
        }
        let one = Rational::one();
        let mut m = Mat2::<Rational>::identity();
        for j in 0..n {
            let o = start + j;
            if self.model.kappa(prefix, o, Extension::Strict)?.is_some() {
                return Err(Error::Domain(format!("position {o} is not on Z")));
            }
            let phi = Rational::from_integer(BigInt::from(prefix[o])) - &self.nu1;
            let a = Mat2::upper(one.clone(), phi, one.clone());
            m = &a * &m;
        }
        Ok(m)
    }
}

/// Default checkpoints: powers of 2 and of 3 up to `n_max`, and `n_max`.
pub fn checkpoints(n_max: usize) -> Vec<usize> {
    let mut v = vec![n_max];
    for base in [2usize, 3] {
        let mut p = 1;
        while p <= n_max {
            v.push(p);
            p = match p.checked_mul(base) {
                Some(q) => q,
                None => break,
            };
        }
    }
    v.sort_unstable();
    v.dedup();
    v
}

/// `3 · (#1s in prefix[..j]) - j`, so a window `[i, j)` has Birkhoff sum `(P_j - P_i) / 3`.
fn birkhoff_walk(word: &[u8]) -> Vec<i64> {
    let mut p = Vec::with_capacity(word.len() + 1);
    let mut acc = 0i64;
    p.push(0);
    for &s in word {
        acc += 3 * i64::from(s) - 1;
        p.push(acc);
    }
    p
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscrepancyCurve {
    pub thresholds: Vec<usize>,
    /// `3 · D(N)`; every `D(N)` is a multiple of `1/3`.
    pub thrice: Vec<i64>,
}

impl DiscrepancyCurve {
    pub fn value(&self, i: usize) -> Rational {
        rat(self.thrice[i], 3)
    }

    pub fn value_f64(&self, i: usize) -> f64 {
        self.thrice[i] as f64 / 3.0
    }

    pub fn at(&self, n: usize) -> Option<Rational> {
        self.thresholds.binary_search(&n).ok().map(|i| self.value(i))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("N,D\n");
        for i in 0..self.thresholds.len() {
            writeln!(s, "{},{}", self.thresholds[i], self.value_f64(i)).expect("string write");
        }
        s
    }
}

/// `D(N) = max |#1s - n/3|` over windows of the cached prefix of length `n <= N`.
pub fn birkhoff_discrepancy(model: &ChaconModel, thresholds: &[usize]) -> Result<DiscrepancyCurve> {
    let word = model.prefix();
    let mut ts = thresholds.to_vec();
    ts.sort_unstable();
    ts.dedup();
    if ts.first() == Some(&0) {
        return Err(Error::InvalidInput("thresholds must be positive".into()));
    }
    if let Some(&last) = ts.last() {
        if last > word.len() {
            return Err(Error::Precondition(format!("N = {last} exceeds the cached prefix length {}", word.len())));
        }
    }
    let p = birkhoff_walk(word);
    let thrice = ts.iter().map(|&n| max_spread(&p, n)).collect();
    Ok(DiscrepancyCurve { thresholds: ts, thrice })
}

/// `max |p_j - p_i|` over `0 < j - i <= n`, by sliding-window extrema.
fn max_spread(p: &[i64], n: usize) -> i64 {
    let mut lo: VecDeque<usize> = VecDeque::new();
    let mut hi: VecDeque<usize> = VecDeque::new();
    let mut best = 0;
    for j in 0..p.len() {
        while lo.front().is_some_and(|&i| i + n < j) {
            lo.pop_front();
        }
        while hi.front().is_some_and(|&i| i + n < j) {
            hi.pop_front();
        }
        if let (Some(&a), Some(&b)) = (lo.front(), hi.front()) {
            best = best.max(p[j] - p[a]).max(p[b] - p[j]);
        }
        while lo.back().is_some_and(|&i| p[i] >= p[j]) {
            lo.pop_back();
        }
        lo.push_back(j);
        while hi.back().is_some_and(|&i| p[i] <= p[j]) {
            hi.pop_back();
        }
        hi.push_back(j);
    }
    best
}

/// `max |p_{i+n} - p_i|` over the given starts.
fn max_exact_spread(p: &[i64], n: usize, starts: &[usize]) -> i64 {
    starts.iter().filter(|&&i| i + n < p.len()).map(|&i| (p[i + n] - p[i]).abs()).max().unwrap_or(0)
}

#[derive(Clone, Debug)]
pub struct SupGrowthConfig {
    pub max_n: usize,
    /// Number of random `Z`-window starts; `0` uses every admissible start.
    pub z_samples: usize,
    /// Number of off-`Z` samples (one flipped symbol at the origin).
    pub off_z: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SupGrowth {
    pub lengths: Vec<usize>,
    /// `s_n`: maximal operator 2-norm of the length-`n` product over all samples.
    pub s_vals: Vec<f64>,
    /// `max |S_n|` over the `Z` samples, exact.
    pub z_birkhoff: Vec<Rational>,
    /// Maximal operator 2-norm over the off-`Z` samples alone.
    pub off_z_vals: Vec<f64>,
}

impl SupGrowth {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,s_n,s_n_over_n\n");
        for (n, v) in self.lengths.iter().zip(&self.s_vals) {
            writeln!(s, "{n},{v},{}", v / *n as f64).expect("string write");
        }
        s
    }
}

/// Operator 2-norm of `[[1, s], [0, 1]]`.
fn jordan_norm(s: f64) -> f64 {
    let s = s.abs();
    (s + (s * s + 4.0).sqrt()) / 2.0
}

/// `s_n` at the checkpoints of `max_n`, over `Z`-windows of the cached prefix
/// and single-symbol corruptions of them.
pub fn cocycle_sup_growth(model: &ChaconModel, cfg: &SupGrowthConfig) -> Result<SupGrowth> {
    let cap = model.radius_cap();
    let word = model.prefix();
    if cfg.max_n == 0 {
        return Err(Error::InvalidInput("max_n must be positive".into()));
    }
    if cfg.max_n + 2 * cap >= word.len() {
        return Err(Error::Precondition(format!(
            "max_n = {} needs a longer prefix (depth {})",
            cfg.max_n,
            model.depth()
        )));
    }
    let lengths = checkpoints(cfg.max_n);
    let (lo, hi) = (cap, word.len() - cfg.max_n - cap);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = birkhoff_walk(word);
    let z_thrice: Vec<i64> = if cfg.z_samples == 0 {
        lengths.iter().map(|&n| (0..=p.len() - 1 - n).map(|i| (p[i + n] - p[i]).abs()).max().unwrap_or(0)).collect()
    } else {
        let starts: Vec<usize> = (0..cfg.z_samples).map(|_| rng.gen_range(lo..hi)).collect();
        lengths.iter().map(|&n| max_exact_spread(&p, n, &starts)).collect()
    };
    let cocycle = build_cocycle(model);
    let mut off = vec![0.0f64; lengths.len()];
    for _ in 0..cfg.off_z {
        let start = rng.gen_range(lo..hi);
        let mut w = word[start - cap..start + cfg.max_n + cap].to_vec();
        w[cap] ^= 1;
        let mut m = Mat2::<f64>::identity();
        let mut next = 0;
        for j in 0..cfg.max_n {
            // Beyond the radius cap the flipped symbol is invisible: f = g = 1.
            let a = if j <= cap {
                cocycle.matrix_at(&w, cap + j, Extension::Strict)?
            } else {
                Mat2::new(1.0, f64::from(w[cap + j]) - 1.0 / 3.0, 0.0, 1.0)
            };
            m = &a * &m;
            if j + 1 == lengths[next] {
                off[next] = off[next].max(m.op_norm_2());
                next += 1;
            }
        }
    }
    let s_vals = z_thrice.iter().zip(&off).map(|(&t, &o)| jordan_norm(t as f64 / 3.0).max(o)).collect();
    Ok(SupGrowth { lengths, s_vals, z_birkhoff: z_thrice.iter().map(|&t| rat(t, 3)).collect(), off_z_vals: off })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "D")]
    pub d: f64,
    pub d_exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChaconSummary {
    pub depth: usize,
    pub prefix_length: usize,
    pub max_n: usize,
    pub checkpoints: Vec<Checkpoint>,
    pub s_over_n_first: f64,
    pub s_over_n_last: f64,
    /// `s_n^{1/n} - 1` at the largest `n`.
    pub growth_exponent_last: f64,
    /// `D(N)/N` at the largest recorded power of 3 not above `max_n`.
    pub sublinear_ratio: f64,
    pub sublinear_at: usize,
    pub rho_one_observed: bool,
    pub sublinear_observed: bool,
    pub unbounded_trend_observed: bool,
    pub distance_index_stabilized: bool,
}

pub const SUBLINEAR_TOL: f64 = 0.01;
pub const RHO_TOL: f64 = 0.01;

/// Verdicts on a run:
///
/// * sublinear: `D(N)/N <= 0.01` at the largest recorded power of 3 not above `max_n`;
/// * unbounded trend: `D(3^k)` nondecreasing in `k` and `D(3^K) > D(3^{⌊K/2⌋})`;
/// * spectral radius one: `s_n^{1/n} - 1 <= 0.01` at the largest `n`.
pub fn summarize(model: &ChaconModel, d: &DiscrepancyCurve, s: &SupGrowth) -> ChaconSummary {
    let pow3: Vec<(usize, usize)> = (0..)
        .map(|k| (k, 3usize.pow(k as u32)))
        .take_while(|&(_, n)| n <= *d.thresholds.last().unwrap_or(&0))
        .filter(|&(_, n)| d.thresholds.binary_search(&n).is_ok())
        .collect();
    let at = |n: usize| d.value_f64(d.thresholds.binary_search(&n).expect("checkpoint"));
    let (k_max, n_top) = *pow3.last().unwrap_or(&(0, 1));
    let d_vals: Vec<f64> = pow3.iter().map(|&(_, n)| at(n)).collect();
    let nondecreasing = d_vals.windows(2).all(|w| w[0] <= w[1]);
    let half = 3usize.pow((k_max / 2) as u32);
    let unbounded = k_max >= 2 && nondecreasing && at(n_top) > at(half);
    let last = s.lengths.len() - 1;
    let n_last = s.lengths[last];
    let n_sub = pow3.iter().map(|&(_, n)| n).rfind(|&n| n <= n_last);
    let sublinear_ratio = n_sub.map_or(f64::INFINITY, |n| at(n) / n as f64);
    let exponent = s.s_vals[last].powf(1.0 / n_last as f64) - 1.0;
    ChaconSummary {
        depth: model.depth(),
        prefix_length: model.prefix().len(),
        max_n: n_last,
        checkpoints: (0..d.thresholds.len())
            .map(|i| Checkpoint { n: d.thresholds[i], d: d.value_f64(i), d_exact: d.value(i).to_string() })
            .collect(),
        s_over_n_first: s.s_vals[0] / s.lengths[0] as f64,
        s_over_n_last: s.s_vals[last] / n_last as f64,
        growth_exponent_last: exponent,
        sublinear_ratio,
        sublinear_at: n_sub.unwrap_or(0),
        rho_one_observed: exponent <= RHO_TOL,
        sublinear_observed: sublinear_ratio <= SUBLINEAR_TOL,
        unbounded_trend_observed: unbounded,
        distance_index_stabilized: model.distance_index_stabilized(),
    }
}

/// `ν([1])` from the level recurrence: `ones_k / len_k → 1/3`. Returns the
/// exact ratio at level `k`.
pub fn ones_frequency(model: &ChaconModel, k: usize) -> Rational {
    let w = model.level(k);
    let ones = w.iter().filter(|&&s| s == 1).count();
    Rational::new(BigInt::from(ones), BigInt::from(w.len()))
}

/// `|ones/len - 1/3|` at level `k`; it equals `1 / (3 len)`.
pub fn frequency_gap(model: &ChaconModel, k: usize) -> Rational {
    let f = ones_frequency(model, k) - rat(1, 3);
    if f < Rational::zero() {
        -f
    } else {
        f
    }
}
