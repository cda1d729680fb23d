//! Fixtures and brute-force oracles shared by the integration tests.
//! Oracles here avoid the library's algorithms: plain loops over words and cycles.

#![allow(dead_code)]

use mgl_core::classifier::GrowthTag;
use mgl_core::ergodic::{CocycleSpec, LocallyConstantPotential};
use mgl_core::{Mat2, MatrixSet, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn ri(p: i64) -> Rational {
    r(p, 1)
}

pub fn mat(e: [(i64, i64); 4]) -> Mat2<Rational> {
    Mat2::new(r(e[0].0, e[0].1), r(e[1].0, e[1].1), r(e[2].0, e[2].1), r(e[3].0, e[3].1))
}

pub fn imat(e: [i64; 4]) -> Mat2<Rational> {
    Mat2::new(ri(e[0]), ri(e[1]), ri(e[2]), ri(e[3]))
}

pub fn set(ms: Vec<Mat2<Rational>>) -> MatrixSet<Rational> {
    MatrixSet::new(ms).expect("non-empty set")
}

/// The pair `[[1, M], [0, β]]`, `[[β, M], [0, 1]]`.
pub fn beta_m_pair(beta: Rational, m: Rational) -> MatrixSet<Rational> {
    let (one, zero) = (ri(1), ri(0));
    set(vec![Mat2::new(one.clone(), m.clone(), zero.clone(), beta.clone()), Mat2::new(beta, m, zero, one)])
}

/// Rotations with rational entries from Pythagorean triples.
pub fn rational_rotations() -> Vec<Mat2<Rational>> {
    [(3, 4, 5), (5, 12, 13), (8, 15, 17)]
        .iter()
        .map(|&(a, b, c)| Mat2::new(r(a, c), r(-b, c), r(b, c), r(a, c)))
        .collect()
}

pub fn conjugate(s: &MatrixSet<Rational>, q: &Mat2<Rational>) -> MatrixSet<Rational> {
    let qt = Mat2::new(q.e11.clone(), q.e21.clone(), q.e12.clone(), q.e22.clone());
    set(s.matrices().iter().map(|m| &(q * m) * &qt).collect())
}

/// Curated sets with hand-derived growth classes.
pub fn tagged_sets() -> Vec<(&'static str, MatrixSet<Rational>, GrowthTag)> {
    use GrowthTag::*;
    vec![
        ("jordan", set(vec![imat([1, 1, 0, 1])]), Linear),
        ("negative jordan", set(vec![imat([-1, 1, 0, -1])]), Linear),
        ("rotation", set(vec![imat([0, -1, 1, 0])]), Bounded),
        ("rotation and swap", set(vec![imat([0, -1, 1, 0]), imat([0, 1, 1, 0])]), Bounded),
        ("det -1 pair", set(vec![imat([1, 1, 0, -1]), imat([1, 0, 0, -1])]), Linear),
        ("pair 1/2 1", beta_m_pair(r(1, 2), ri(1)), Bounded),
        ("pair 1/4 2", beta_m_pair(r(1, 4), ri(2)), Bounded),
        ("pair 3/4 1/2", beta_m_pair(r(3, 4), r(1, 2)), Bounded),
        ("diagonal", set(vec![mat([(1, 1), (0, 1), (0, 1), (1, 2)]), mat([(1, 3), (0, 1), (0, 1), (1, 1)])]), Bounded),
        ("signed diagonal", set(vec![imat([1, 0, 0, -1]), mat([(1, 2), (0, 1), (0, 1), (1, 2)])]), Bounded),
        (
            "plus minus identity",
            set(vec![imat([1, 0, 0, 1]), imat([-1, 0, 0, -1]), mat([(1, 2), (1, 1), (0, 1), (1, 3)])]),
            Bounded,
        ),
        ("minus identity", set(vec![imat([-1, 0, 0, -1]), mat([(1, 1), (3, 1), (0, 1), (1, 2)])]), Bounded),
        ("reflection and contraction", set(vec![imat([1, 0, 0, -1]), mat([(1, 2), (1, 1), (0, 1), (1, 2)])]), Bounded),
        ("jordan and contraction", set(vec![imat([1, 1, 0, 1]), mat([(1, 2), (0, 1), (0, 1), (1, 2)])]), Linear),
        ("expanding diagonal", set(vec![mat([(2, 1), (0, 1), (0, 1), (1, 2)])]), NotMarginal),
        ("jordan and expansion", set(vec![imat([1, 1, 0, 1]), mat([(3, 2), (0, 1), (0, 1), (1, 2)])]), NotMarginal),
        ("scaled rotation", set(vec![imat([0, -2, 2, 0])]), NotMarginal),
    ]
}

/// Exact `Σ |entries|`.
pub fn sum_norm(m: &Mat2<Rational>) -> Rational {
    [&m.e11, &m.e12, &m.e21, &m.e22].iter().map(|x| x.abs()).sum()
}

/// Every product of length `n`, word in time order (symbols `0..N`).
pub fn all_products(mats: &[Mat2<Rational>], n: usize) -> Vec<(Vec<usize>, Mat2<Rational>)> {
    let mut level = vec![(Vec::new(), Mat2::identity())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * mats.len());
        for (w, p) in &level {
            for (a, m) in mats.iter().enumerate() {
                let mut w2 = w.clone();
                w2.push(a);
                next.push((w2, m * p));
            }
        }
        level = next;
    }
    level
}

/// `max |Φ_n|` over all words of length `n + k - 1`, with `(Φ, G)` updated
/// letter by letter in time order.
pub fn brute_c(spec: &CocycleSpec<Rational>, n: usize) -> Rational {
    let (alpha, k) = (spec.alphabet(), spec.window());
    let total = alpha.pow((n + k - 1) as u32);
    let mut best = Rational::zero();
    for code in 0..total {
        let mut digits = vec![0usize; n + k - 1];
        let mut c = code;
        for d in digits.iter_mut().rev() {
            *d = c % alpha;
            c /= alpha;
        }
        let (mut phi, mut g) = (Rational::zero(), ri(1));
        for t in 0..n {
            let w = digits[t..t + k].iter().fold(0, |acc, &a| acc * alpha + a);
            let (fw, pw, gw) = (&spec.f.table()[w], &spec.phi.table()[w], &spec.g.table()[w]);
            phi = fw * &phi + pw * &g;
            g = gw * &g;
        }
        if phi.abs() > best {
            best = phi.abs();
        }
    }
    best
}

/// Maximum mean over simple cycles of a multigraph, by depth-first search
/// from each start node through larger-numbered nodes only.
pub fn brute_max_mean(nodes: usize, edges: &[(usize, usize, Rational)]) -> Option<Rational> {
    fn dfs(
        start: usize,
        v: usize,
        edges: &[(usize, usize, Rational)],
        on_path: &mut Vec<bool>,
        sum: Rational,
        len: i64,
        best: &mut Option<Rational>,
    ) {
        for (from, to, w) in edges {
            if *from != v {
                continue;
            }
            let s = &sum + w;
            if *to == start {
                let mean = &s / ri(len + 1);
                if best.as_ref().is_none_or(|b| mean > *b) {
                    *best = Some(mean);
                }
            } else if *to > start && !on_path[*to] {
                on_path[*to] = true;
                dfs(start, *to, edges, on_path, s, len + 1, best);
                on_path[*to] = false;
            }
        }
    }
    let mut best = None;
    for start in 0..nodes {
        let mut on_path = vec![false; nodes];
        on_path[start] = true;
        dfs(start, start, edges, &mut on_path, Rational::zero(), 0, &mut best);
    }
    best
}

/// A small random rational `p/q` with `|p| <= num`, `1 <= q <= den`.
pub fn rand_rational(rng: &mut ChaCha8Rng, num: i64, den: i64) -> Rational {
    r(rng.gen_range(-num..=num), rng.gen_range(1..=den))
}

/// A random rational in `(0, 1]` with denominator at most `den`; `1` with probability `p_one`.
pub fn rand_unit(rng: &mut ChaCha8Rng, den: i64, p_one: f64) -> Rational {
    if rng.gen_bool(p_one) {
        return ri(1);
    }
    let q = rng.gen_range(2..=den);
    r(rng.gen_range(1..q), q)
}

pub fn potential(alphabet: usize, window: usize, table: Vec<Rational>) -> LocallyConstantPotential<Rational> {
    LocallyConstantPotential::new(alphabet, window, table).expect("valid potential")
}

pub fn random_spec(rng: &mut ChaCha8Rng, alphabet: usize, window: usize) -> CocycleSpec<Rational> {
    let size = alphabet.pow(window as u32);
    let f = (0..size).map(|_| rand_unit(rng, 4, 0.5)).collect();
    let g = (0..size).map(|_| rand_unit(rng, 4, 0.5)).collect();
    let phi = (0..size).map(|_| rand_rational(rng, 3, 2)).collect();
    CocycleSpec::new(potential(alphabet, window, f), potential(alphabet, window, g), potential(alphabet, window, phi))
        .expect("valid spec")
}

/// Generators `[[f, φ], [0, g]]` of a window-1 cocycle.
pub fn generators(spec: &CocycleSpec<Rational>) -> Vec<Mat2<Rational>> {
    (0..spec.alphabet())
        .map(|a| Mat2::upper(spec.f.table()[a].clone(), spec.phi.table()[a].clone(), spec.g.table()[a].clone()))
        .collect()
}

pub fn is_pos_unit(x: &Rational) -> bool {
    x.is_positive() && *x <= ri(1)
}

/// `c_1 .. c_{n_max}` for a window-1 cocycle by depth-first search over words.
pub fn brute_c_window_one(spec: &CocycleSpec<Rational>, n_max: usize) -> Vec<Rational> {
    fn go(spec: &CocycleSpec<Rational>, depth: usize, phi: &Rational, g: &Rational, best: &mut [Rational]) {
        if depth == best.len() {
            return;
        }
        for a in 0..spec.alphabet() {
            let phi2 = &spec.f.table()[a] * phi + &spec.phi.table()[a] * g;
            let g2 = &spec.g.table()[a] * g;
            if phi2.abs() > best[depth] {
                best[depth] = phi2.abs();
            }
            go(spec, depth + 1, &phi2, &g2, best);
        }
    }
    let mut best = vec![Rational::zero(); n_max];
    go(spec, 0, &Rational::zero(), &ri(1), &mut best);
    best
}

/// Largest eigenvalue `λ` of `PᵀP` satisfies `λ <= t²` iff `t² >= tr/2` and
/// `(t² - tr/2)² >= tr²/4 - det²`.
fn gram(p: &Mat2<Rational>) -> (Rational, Rational) {
    let tr = &p.e11 * &p.e11 + &p.e12 * &p.e12 + &p.e21 * &p.e21 + &p.e22 * &p.e22;
    let det = &p.e11 * &p.e22 - &p.e12 * &p.e21;
    let half = &tr / ri(2);
    let disc = &half * &half - &det * &det;
    (half, disc)
}

/// Exact `‖P‖₂ <= t` for `t >= 0`.
pub fn op2_le(p: &Mat2<Rational>, t: &Rational) -> bool {
    let (half, disc) = gram(p);
    let d = t * t - half;
    !d.is_negative() && &d * &d >= disc
}

/// Exact `‖P‖₂ >= t` for `t >= 0`.
pub fn op2_ge(p: &Mat2<Rational>, t: &Rational) -> bool {
    let (half, disc) = gram(p);
    let d = t * t - half;
    !d.is_positive() || &d * &d <= disc
}
