//! Ergodic optimisation for locally constant potentials on the full shift.
//!
//! A window-`k` potential over `N` symbols is a table indexed by words of
//! length `k`; the value at `x` is `table[x_0 .. x_{k-1}]`. Invariant measures
//! correspond to circulations on the de Bruijn graph, so `sup ∫φ dμ` is the
//! maximum mean weight of a directed cycle.

use std::collections::VecDeque;

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::exact_value;
use crate::scalar::{parse_rational, Rational, Scalar, ScalarKind};

/// Values are stored base-`N`, first symbol most significant. Symbols are
/// 0-based internally and written `1..=N` in JSON and word labels.
#[derive(Clone, Debug, PartialEq)]
pub struct LocallyConstantPotential<S> {
    alphabet: usize,
    window: usize,
    table: Vec<S>,
}

pub const MAX_ALPHABET: usize = 9;

impl<S: Scalar> LocallyConstantPotential<S> {
    pub fn new(alphabet: usize, window: usize, table: Vec<S>) -> Result<Self> {
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(Error::InvalidInput(format!("alphabet size must be in 1..={MAX_ALPHABET}")));
        }
        if window == 0 {
            return Err(Error::InvalidInput("window must be at least 1".into()));
        }
        let size = table_size(alphabet, window)?;
        if table.len() != size {
            return Err(Error::InvalidInput(format!("table has {} entries, expected {size}", table.len())));
        }
        Ok(LocallyConstantPotential { alphabet, window, table })
    }

    /// The potential `x ↦ value` for every word.
    pub fn constant(alphabet: usize, window: usize, value: S) -> Result<Self> {
        let size = table_size(alphabet, window)?;
        Self::new(alphabet, window, vec![value; size])
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn table(&self) -> &[S] {
        &self.table
    }

    /// Value on the word with 0-based symbols.
    pub fn value(&self, word: &[usize]) -> &S {
        &self.table[word_index(self.alphabet, word)]
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        LocallyConstantPotential {
            alphabet: self.alphabet,
            window: self.window,
            table: self.table.iter().map(f).collect(),
        }
    }

    pub fn max_abs(&self) -> S {
        self.table.iter().map(Scalar::abs).reduce(S::max_of).expect("non-empty table")
    }

    pub fn to_f64(&self) -> LocallyConstantPotential<f64> {
        LocallyConstantPotential {
            alphabet: self.alphabet,
            window: self.window,
            table: self.table.iter().map(S::to_f64).collect(),
        }
    }

    fn check_unit_interval(&self, name: &str) -> Result<()> {
        for (i, v) in self.table.iter().enumerate() {
            if !v.is_positive() || *v > S::one() {
                let w = word_label(self.alphabet, self.window, i);
                return Err(Error::OutOfRange(format!("{name}({w}) = {v} is not in (0, 1]")));
            }
        }
        Ok(())
    }
}

fn table_size(alphabet: usize, window: usize) -> Result<usize> {
    u32::try_from(window)
        .ok()
        .and_then(|w| alphabet.checked_pow(w))
        .filter(|&s| s <= 1 << 24)
        .ok_or_else(|| Error::Budget(format!("table of {alphabet}^{window} entries")))
}

fn word_index(alphabet: usize, word: &[usize]) -> usize {
    word.iter().fold(0, |acc, &a| acc * alphabet + a)
}

/// Digit-string label (symbols `1..=N`) of the word with the given index.
pub fn word_label(alphabet: usize, len: usize, mut index: usize) -> String {
    let mut digits = vec![0u8; len];
    for d in digits.iter_mut().rev() {
        *d = b'1' + (index % alphabet) as u8;
        index /= alphabet;
    }
    String::from_utf8(digits).expect("ascii digits")
}

fn parse_word(alphabet: usize, window: usize, label: &str) -> Result<usize> {
    let bad = || Error::Parse(format!("word {label:?} is not a length-{window} string over 1..={alphabet}"));
    if label.len() != window {
        return Err(bad());
    }
    let mut idx = 0;
    for c in label.bytes() {
        let d = c.checked_sub(b'1').map(usize::from).filter(|&d| d < alphabet).ok_or_else(bad)?;
        idx = idx * alphabet + d;
    }
    Ok(idx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge<S> {
    pub from: usize,
    pub to: usize,
    pub weight: S,
    /// Index of the window word this edge reads (de Bruijn graphs) or a free tag.
    pub word: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Digraph<S> {
    pub nodes: usize,
    pub edges: Vec<Edge<S>>,
}

impl<S: Scalar> Digraph<S> {
    pub fn new(nodes: usize, edges: Vec<Edge<S>>) -> Result<Self> {
        if let Some(e) = edges.iter().find(|e| e.from >= nodes || e.to >= nodes) {
            return Err(Error::InvalidInput(format!("edge {}->{} outside {nodes} nodes", e.from, e.to)));
        }
        Ok(Digraph { nodes, edges })
    }

    /// De Bruijn graph of the potential: nodes are words of length `k-1`
    /// (a single node when `k = 1`) and the edge for word `u·a` goes from
    /// `u` to the suffix of `u·a`.
    pub fn de_bruijn(p: &LocallyConstantPotential<S>) -> Self {
        let nodes = p.alphabet.pow(p.window as u32 - 1);
        let edges = p
            .table
            .iter()
            .enumerate()
            .map(|(w, v)| Edge { from: w / p.alphabet, to: w % nodes, weight: v.clone(), word: w })
            .collect();
        Digraph { nodes, edges }
    }

    /// Keep the edges satisfying `keep`, and all nodes.
    pub fn filter(&self, keep: impl Fn(&Edge<S>) -> bool) -> Self {
        Digraph { nodes: self.nodes, edges: self.edges.iter().filter(|e| keep(e)).cloned().collect() }
    }

    pub fn with_weights<T: Scalar>(&self, w: impl Fn(&Edge<S>) -> T) -> Digraph<T> {
        Digraph {
            nodes: self.nodes,
            edges: self.edges.iter().map(|e| Edge { from: e.from, to: e.to, weight: w(e), word: e.word }).collect(),
        }
    }

    fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.nodes];
        for (i, e) in self.edges.iter().enumerate() {
            out[e.from].push(i);
        }
        out
    }

    pub fn has_cycle(&self) -> bool {
        // Kahn's algorithm: a cycle exists iff some node is never released.
        let mut indeg = vec![0usize; self.nodes];
        for e in &self.edges {
            indeg[e.to] += 1;
        }
        let out = self.out_edges();
        let mut queue: VecDeque<usize> = (0..self.nodes).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &i in &out[v] {
                let t = self.edges[i].to;
                indeg[t] -= 1;
                if indeg[t] == 0 {
                    queue.push_back(t);
                }
            }
        }
        seen < self.nodes
    }
}

/// A cycle attaining the maximum mean edge weight.
#[derive(Clone, Debug, PartialEq)]
pub struct MeanCycle<S> {
    pub value: S,
    /// Edge indices in traversal order, starting at the lowest-numbered node
    /// that lies on an optimal cycle.
    pub cycle: Vec<usize>,
}

/// Maximum cycle mean by Karp's recurrence.
///
/// `D_j(v)` is the heaviest walk of exactly `j` edges ending at `v`, from any
/// start. Then `λ = max_v min_{j<n} (D_n(v) - D_j(v)) / (n - j)`.
/// The witness is recovered from the subgraph of edges tight for potentials of
/// the weights `w - λ`; every cycle there has mean exactly `λ`.
pub fn max_mean_cycle<S: Scalar>(g: &Digraph<S>) -> Result<MeanCycle<S>> {
    let n = g.nodes;
    if n == 0 || g.edges.is_empty() {
        return Err(Error::Acyclic);
    }
    let mut d: Vec<Vec<Option<S>>> = Vec::with_capacity(n + 1);
    d.push(vec![Some(S::zero()); n]);
    for j in 1..=n {
        let prev = &d[j - 1];
        let mut cur: Vec<Option<S>> = vec![None; n];
        for e in &g.edges {
            if let Some(p) = &prev[e.from] {
                let cand = p.add(&e.weight);
                let slot = &mut cur[e.to];
                if slot.as_ref().is_none_or(|s| cand > *s) {
                    *slot = Some(cand);
                }
            }
        }
        d.push(cur);
    }
    let mut best: Option<S> = None;
    for v in 0..n {
        let Some(dn) = &d[n][v] else { continue };
        let mut worst: Option<S> = None;
        for (j, row) in d.iter().enumerate().take(n) {
            if let Some(dj) = &row[v] {
                let r = dn.sub(dj).mul(&S::from_i64((n - j) as i64).recip().expect("non-zero"));
                if worst.as_ref().is_none_or(|w| r < *w) {
                    worst = Some(r);
                }
            }
        }
        if let Some(w) = worst {
            if best.as_ref().is_none_or(|b| w > *b) {
                best = Some(w);
            }
        }
    }
    let value = best.ok_or(Error::Acyclic)?;
    let cycle = tight_cycle(g, &value);
    Ok(MeanCycle { value, cycle })
}

fn tight_cycle<S: Scalar>(g: &Digraph<S>, lambda: &S) -> Vec<usize> {
    let n = g.nodes;
    // Longest-path potentials for w - λ from a virtual source; no positive cycles exist.
    let mut pot = vec![S::zero(); n];
    for _ in 0..n {
        let mut changed = false;
        for e in &g.edges {
            let cand = pot[e.from].add(&e.weight.sub(lambda));
            if cand > pot[e.to] && !cand.approx_eq(&pot[e.to]) {
                pot[e.to] = cand;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let tight = g.filter(|e| pot[e.from].add(&e.weight.sub(lambda)).approx_eq(&pot[e.to]));
    // Map tight edges back to the original indices.
    let orig: Vec<usize> = (0..g.edges.len())
        .filter(|&i| {
            let e = &g.edges[i];
            pot[e.from].add(&e.weight.sub(lambda)).approx_eq(&pot[e.to])
        })
        .collect();
    let out = tight.out_edges();
    for start in 0..n {
        // Shortest cycle through `start` by breadth-first search.
        let mut via: Vec<Option<usize>> = vec![None; n];
        let mut queue = VecDeque::new();
        let mut found = None;
        for &i in &out[start] {
            let t = tight.edges[i].to;
            if t == start {
                found = Some(i);
                break;
            }
            if via[t].is_none() {
                via[t] = Some(i);
                queue.push_back(t);
            }
        }
        while found.is_none() {
            let Some(v) = queue.pop_front() else { break };
            for &i in &out[v] {
                let t = tight.edges[i].to;
                if t == start {
                    found = Some(i);
                    break;
                }
                if via[t].is_none() {
                    via[t] = Some(i);
                    queue.push_back(t);
                }
            }
        }
        if let Some(last) = found {
            let mut path = vec![last];
            let mut v = tight.edges[last].from;
            while v != start {
                let i = via[v].expect("bfs tree");
                path.push(i);
                v = tight.edges[i].from;
            }
            path.reverse();
            return path.into_iter().map(|i| orig[i]).collect();
        }
    }
    unreachable!("an optimal cycle is tight")
}

/// `sup_μ ∫φ dμ` over shift-invariant probability measures.
pub fn beta<S: Scalar>(p: &LocallyConstantPotential<S>) -> S {
    max_mean_cycle(&Digraph::de_bruijn(p)).expect("de Bruijn graphs have cycles").value
}

/// Edges of the de Bruijn graph where `f = 1`. Since `log f <= 0`,
/// `β(log f) = 0` exactly when this subgraph has a cycle.
pub fn mmax_subgraph<S: Scalar>(f: &LocallyConstantPotential<S>) -> Result<Digraph<S>> {
    f.check_unit_interval("f")?;
    Ok(Digraph::de_bruijn(f).filter(|e| e.weight == S::one()))
}

/// Data `(f, g, φ)` of the upper-triangular cocycle `A(x) = [[f(x), φ(x)], [0, g(x)]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleSpec<S> {
    pub f: LocallyConstantPotential<S>,
    pub g: LocallyConstantPotential<S>,
    pub phi: LocallyConstantPotential<S>,
}

impl<S: Scalar> CocycleSpec<S> {
    pub fn new(
        f: LocallyConstantPotential<S>,
        g: LocallyConstantPotential<S>,
        phi: LocallyConstantPotential<S>,
    ) -> Result<Self> {
        let dims = |p: &LocallyConstantPotential<S>| (p.alphabet, p.window);
        if dims(&f) != dims(&g) || dims(&f) != dims(&phi) {
            return Err(Error::InvalidInput("f, g and phi must share alphabet and window".into()));
        }
        f.check_unit_interval("f")?;
        g.check_unit_interval("g")?;
        Ok(CocycleSpec { f, g, phi })
    }

    pub fn alphabet(&self) -> usize {
        self.f.alphabet
    }

    pub fn window(&self) -> usize {
        self.f.window
    }

    pub fn to_f64(&self) -> CocycleSpec<f64> {
        CocycleSpec { f: self.f.to_f64(), g: self.g.to_f64(), phi: self.phi.to_f64() }
    }

    pub fn to_json(&self) -> Value {
        let table = |p: &LocallyConstantPotential<S>| {
            let m: Map<String, Value> =
                p.table.iter().enumerate().map(|(i, v)| (word_label(p.alphabet, p.window, i), v.to_json())).collect();
            Value::Object(m)
        };
        json!({
            "alphabet": self.alphabet(),
            "window": self.window(),
            "f": table(&self.f),
            "g": table(&self.g),
            "phi": table(&self.phi),
        })
    }
}

/// A cocycle of either scalar kind, as read from JSON.
#[derive(Clone, Debug)]
pub enum AnyCocycle {
    Exact(CocycleSpec<Rational>),
    Float(CocycleSpec<f64>),
}

impl AnyCocycle {
    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyCocycle::Exact(_) => ScalarKind::Rational,
            AnyCocycle::Float(_) => ScalarKind::Float,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_json(&serde_json::from_str(text)?)
    }

    /// Parse `{"alphabet": N, "window": k, "f": {word: value}, "g": {...}, "phi": {...}}`.
    /// Values are rational strings or JSON numbers; a non-integer number makes
    /// the whole cocycle floating point.
    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| v.get(name).ok_or_else(|| Error::Parse(format!("missing field {name:?}")));
        let uint = |name: &str| -> Result<usize> {
            field(name)?
                .as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| Error::Parse(format!("{name} must be a positive integer")))
        };
        let alphabet = uint("alphabet")?;
        let window = uint("window")?;
        if alphabet == 0 || alphabet > MAX_ALPHABET || window == 0 {
            return Err(Error::Parse(format!("alphabet must be in 1..={MAX_ALPHABET} and window >= 1")));
        }
        let size = table_size(alphabet, window)?;
        let mut raw = Vec::new();
        for name in ["f", "g", "phi"] {
            let obj = field(name)?.as_object().ok_or_else(|| Error::Parse(format!("{name} must be an object")))?;
            let mut cells: Vec<Option<&Value>> = vec![None; size];
            for (label, val) in obj {
                let i = parse_word(alphabet, window, label)?;
                cells[i] = Some(val);
            }
            let cells = cells
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    c.ok_or_else(|| Error::Parse(format!("{name} is missing word {}", word_label(alphabet, window, i))))
                })
                .collect::<Result<Vec<_>>>()?;
            raw.push(cells);
        }
        if raw.iter().flatten().any(|x| x.is_f64()) {
            let conv = |x: &Value| -> Result<f64> {
                match x {
                    Value::Number(n) => n.as_f64().ok_or_else(|| Error::Parse(format!("bad number {n}"))),
                    Value::String(s) => Ok(parse_rational(s)?.to_f64()),
                    other => Err(Error::Parse(format!("bad table value {other}"))),
                }
            };
            let mut p = raw.iter().map(|cells| {
                LocallyConstantPotential::new(alphabet, window, cells.iter().map(|x| conv(x)).collect::<Result<_>>()?)
            });
            let (f, g, phi) = (p.next().unwrap()?, p.next().unwrap()?, p.next().unwrap()?);
            Ok(AnyCocycle::Float(CocycleSpec::new(f, g, phi)?))
        } else {
            let conv = |x: &Value| -> Result<Rational> {
                exact_value(x).ok_or_else(|| Error::Parse(format!("bad table value {x}")))?
            };
            let mut p = raw.iter().map(|cells| {
                LocallyConstantPotential::new(alphabet, window, cells.iter().map(|x| conv(x)).collect::<Result<_>>()?)
            });
            let (f, g, phi) = (p.next().unwrap()?, p.next().unwrap()?, p.next().unwrap()?);
            Ok(AnyCocycle::Exact(CocycleSpec::new(f, g, phi)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem3Result<S> {
    pub beta_log_f_zero: bool,
    pub beta_log_g_zero: bool,
    pub intersection_nonempty: bool,
    /// `sup |∫φ dμ|` over invariant measures maximising both `log f` and `log g`.
    pub limit: S,
    /// Window words (labels `1..=N`) along the cycle attaining the limit.
    pub witness_cycle: Option<Vec<String>>,
}

impl<S: Scalar> Theorem3Result<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "beta_log_f_zero": self.beta_log_f_zero,
            "beta_log_g_zero": self.beta_log_g_zero,
            "intersection_nonempty": self.intersection_nonempty,
            "limit": self.limit.to_json(),
            "limit_f64": self.limit.to_f64(),
            "witness_cycle": self.witness_cycle,
        })
    }
}

/// Limit of `sup_x |Φ_n(x)| / n` for the cocycle, where `Φ_n` is the upper-right
/// entry of the length-`n` product.
///
/// Requires `β(log f) = β(log g) = 0`. The measures maximising both are those
/// carried by `Z = {f = g = 1}`, so the limit is the larger of the maximum cycle
/// means of `φ` and `-φ` on the subgraph of edges with `f = g = 1`, or `0` when
/// that subgraph is acyclic.
pub fn theorem3_limit<S: Scalar>(spec: &CocycleSpec<S>) -> Result<Theorem3Result<S>> {
    let zf = mmax_subgraph(&spec.f)?;
    if !zf.has_cycle() {
        return Err(Error::Hypothesis("beta(log f) < 0: no cycle with f = 1".into()));
    }
    let zg = mmax_subgraph(&spec.g)?;
    if !zg.has_cycle() {
        return Err(Error::Hypothesis("beta(log g) < 0: no cycle with g = 1".into()));
    }
    let (f, g) = (spec.f.table(), spec.g.table());
    let z = Digraph::de_bruijn(&spec.phi).filter(|e| f[e.word] == S::one() && g[e.word] == S::one());
    if !z.has_cycle() {
        return Ok(Theorem3Result {
            beta_log_f_zero: true,
            beta_log_g_zero: true,
            intersection_nonempty: false,
            limit: S::zero(),
            witness_cycle: None,
        });
    }
    let plus = max_mean_cycle(&z)?;
    let minus = max_mean_cycle(&z.with_weights(|e| e.weight.neg()))?;
    let (limit, cycle) = if minus.value > plus.value { (minus.value, minus.cycle) } else { (plus.value, plus.cycle) };
    let (n, k) = (spec.alphabet(), spec.window());
    let words = cycle.iter().map(|&i| word_label(n, k, z.edges[i].word)).collect();
    Ok(Theorem3Result {
        beta_log_f_zero: true,
        beta_log_g_zero: true,
        intersection_nonempty: true,
        limit,
        witness_cycle: Some(words),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn pot(n: usize, k: usize, vals: &[(i64, i64)]) -> LocallyConstantPotential<Rational> {
        LocallyConstantPotential::new(n, k, vals.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap()
    }

    fn graph(nodes: usize, edges: &[(usize, usize, i64)]) -> Digraph<Rational> {
        let es = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b, w))| Edge { from: a, to: b, weight: rat(w, 1), word: i })
            .collect();
        Digraph::new(nodes, es).unwrap()
    }

    #[test]
    fn karp_examples() {
        let r = max_mean_cycle(&graph(1, &[(0, 0, 5)])).unwrap();
        assert_eq!(r.value, rat(5, 1));
        let r = max_mean_cycle(&graph(2, &[(0, 1, 1), (1, 0, 3)])).unwrap();
        assert_eq!((r.value, r.cycle), (rat(2, 1), vec![0, 1]));
        let r = max_mean_cycle(&Digraph::de_bruijn(&pot(2, 1, &[(1, 1), (0, 1)]))).unwrap();
        assert_eq!((r.value, r.cycle), (rat(1, 1), vec![0]));
        assert!(matches!(max_mean_cycle(&graph(2, &[(0, 1, 1)])), Err(Error::Acyclic)));
    }

    #[test]
    fn karp_prefers_heavier_cycle_off_the_first_node() {
        // Node 0 only reaches a mean-1 loop; the optimum is the loop at node 2.
        let r = max_mean_cycle(&graph(3, &[(0, 0, 1), (0, 1, 9), (1, 2, 0), (2, 2, 4)])).unwrap();
        assert_eq!((r.value, r.cycle), (rat(4, 1), vec![3]));
    }

    #[test]
    fn beta_examples() {
        assert_eq!(beta(&pot(3, 2, &[(2, 7); 9])), rat(2, 7));
        assert_eq!(beta(&pot(2, 1, &[(1, 1), (-1, 1)])), rat(1, 1));
        assert_eq!(beta(&pot(2, 2, &[(0, 1), (1, 1), (1, 1), (0, 1)])), rat(1, 1));
        let f = pot(2, 1, &[(1, 1), (1, 1)]).to_f64();
        assert_eq!(beta(&f), 1.0);
    }

    #[test]
    fn mmax_examples() {
        assert_eq!(mmax_subgraph(&pot(2, 1, &[(1, 1), (1, 1)])).unwrap().edges.len(), 2);
        let z = mmax_subgraph(&pot(2, 1, &[(1, 1), (1, 2)])).unwrap();
        assert_eq!(z.edges.iter().map(|e| e.word).collect::<Vec<_>>(), vec![0]);
        assert!(z.has_cycle());
        let z = mmax_subgraph(&pot(2, 1, &[(1, 2), (2, 3)])).unwrap();
        assert!(z.edges.is_empty() && !z.has_cycle());
        assert!(matches!(mmax_subgraph(&pot(2, 1, &[(3, 2), (1, 1)])), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn theorem3_examples() {
        let one = pot(2, 1, &[(1, 1), (1, 1)]);
        let spec = CocycleSpec::new(one.clone(), one.clone(), pot(2, 1, &[(1, 1), (-1, 1)])).unwrap();
        let r = theorem3_limit(&spec).unwrap();
        assert_eq!(r.limit, rat(1, 1));
        assert!(r.intersection_nonempty);

        let spec =
            CocycleSpec::new(one.clone(), pot(2, 1, &[(1, 1), (1, 2)]), pot(2, 1, &[(7, 10), (123, 1)])).unwrap();
        let r = theorem3_limit(&spec).unwrap();
        assert_eq!(r.limit, rat(7, 10));
        assert_eq!(r.witness_cycle, Some(vec!["1".to_string()]));

        let spec = CocycleSpec::new(pot(2, 1, &[(1, 1), (1, 2)]), pot(2, 1, &[(1, 2), (1, 1)]), one.clone()).unwrap();
        let r = theorem3_limit(&spec).unwrap();
        assert!(!r.intersection_nonempty);
        assert_eq!(r.limit, rat(0, 1));
        assert!(r.witness_cycle.is_none());

        let spec = CocycleSpec::new(pot(2, 1, &[(1, 2), (1, 2)]), one.clone(), one).unwrap();
        assert!(matches!(theorem3_limit(&spec), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn window_two_witness_labels() {
        let one = pot(2, 2, &[(1, 1); 4]);
        let spec = CocycleSpec::new(one.clone(), one, pot(2, 2, &[(0, 1), (1, 1), (1, 1), (0, 1)])).unwrap();
        let r = theorem3_limit(&spec).unwrap();
        assert_eq!(r.limit, rat(1, 1));
        assert_eq!(r.witness_cycle, Some(vec!["12".to_string(), "21".to_string()]));
    }

    #[test]
    fn cocycle_json_round_trip() {
        let text = r#"{"alphabet": 2, "window": 1, "f": {"1": "1", "2": "1"},
                       "g": {"1": "1", "2": "1/2"}, "phi": {"1": "7/10", "2": 123}}"#;
        let AnyCocycle::Exact(spec) = AnyCocycle::from_json_str(text).unwrap() else { panic!("expected exact") };
        assert_eq!(spec.phi.table()[1], rat(123, 1));
        let AnyCocycle::Exact(again) = AnyCocycle::from_json(&spec.to_json()).unwrap() else { panic!() };
        assert_eq!(again, spec);

        let float =
            r#"{"alphabet": 2, "window": 1, "f": {"1": 1, "2": 0.5}, "g": {"1": 1, "2": 1}, "phi": {"1": 0, "2": 1}}"#;
        assert_eq!(AnyCocycle::from_json_str(float).unwrap().kind(), ScalarKind::Float);
        let missing = r#"{"alphabet": 2, "window": 1, "f": {"1": 1}, "g": {"1": 1, "2": 1}, "phi": {"1": 0, "2": 1}}"#;
        assert!(matches!(AnyCocycle::from_json_str(missing), Err(Error::Parse(_))));
        let range =
            r#"{"alphabet": 2, "window": 1, "f": {"1": 2, "2": 1}, "g": {"1": 1, "2": 1}, "phi": {"1": 0, "2": 1}}"#;
        assert!(matches!(AnyCocycle::from_json_str(range), Err(Error::OutOfRange(_))));
        let word = r#"{"alphabet": 2, "window": 1, "f": {"3": 1}, "g": {}, "phi": {}}"#;
        assert!(matches!(AnyCocycle::from_json_str(word), Err(Error::Parse(_))));
    }
}
