//! Optimal paths under non-decreasing aggregate costs over typed
//! connections.
//!
//! A chain of n nodes offers k connection types per step with integer
//! latencies. The aggregate cost is `f(ltotal(1), ..., ltotal(k))` over the
//! per-type latency sums, `f` non-decreasing in every argument.
//!
//! - [`nonlinear_chain_dp`]: pseudo-polynomial table `Lmin(i, t_1..t_{k-1})`
//!   = minimum type-k latency sum reaching node i with the stated totals
//!   for types 1..k-1.
//! - [`nonlinear_bsearch_max`]: for `f = max_j c_j * t_j^{p_j}`, binary
//!   search over the discrete candidate cost set with a bounded-table
//!   feasibility test.
//! - [`nonlinear_graph_sp`]: the generalization to arbitrary directed typed
//!   graphs via a shortest-path run over expanded `(vertex, totals)` states,
//!   all sources seeded in a single invocation.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{sat_add, VertexId, INF};

/// Default cell budget for expanded tables.
pub const DEFAULT_CELL_BUDGET: usize = 100_000_000;

/// A path of `n` nodes with `k` connection types per step;
/// `steps[i][j]` is the latency of the type-(j+1) connection on step i+1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedChain {
    pub k: usize,
    pub steps: Vec<Vec<i64>>,
}

impl TypedChain {
    pub fn new(k: usize, steps: Vec<Vec<i64>>) -> Result<Self> {
        if k == 0 {
            return Err(Error::arg("need at least one connection type"));
        }
        for (i, row) in steps.iter().enumerate() {
            if row.len() != k {
                return Err(Error::arg(format!(
                    "step {} has {} latencies, expected {k}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(l) = row.iter().find(|&&l| l < 0) {
                return Err(Error::arg(format!("negative latency {l}")));
            }
        }
        Ok(TypedChain { k, steps })
    }

    /// Header `n k`, then n-1 lines of k latencies each.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            });
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(Error::parse(hline, "header must be \"n k\""));
        }
        let n: usize = fields[0].parse().map_err(|_| Error::parse(hline, "bad node count"))?;
        let k: usize = fields[1].parse().map_err(|_| Error::parse(hline, "bad type count"))?;
        if n == 0 {
            return Err(Error::parse(hline, "need at least one node"));
        }
        let mut steps = Vec::with_capacity(n.saturating_sub(1));
        for (line_no, line) in lines {
            let row: Vec<i64> = line
                .split_whitespace()
                .map(|t| t.parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(line_no, "bad latency"))?;
            steps.push(row);
        }
        if steps.len() != n - 1 {
            return Err(Error::parse(1, format!("expected {} step lines, got {}", n - 1, steps.len())));
        }
        TypedChain::new(k, steps).map_err(|e| Error::parse(hline, e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.steps.len() + 1
    }

    /// Per-type total latency when every step picks that type: the loosest
    /// useful coordinate bounds.
    pub fn default_bounds(&self) -> Vec<i64> {
        (0..self.k)
            .map(|j| self.steps.iter().fold(0i64, |acc, row| sat_add(acc, row[j])))
            .collect()
    }
}

enum CostKind {
    Custom(Box<dyn Fn(&[i64]) -> i64>),
    Parametric { g: GForm, coeffs: Vec<i64>, exps: Vec<u32> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GForm {
    Sum,
    Max,
}

/// `c * t^p` saturating at `INF`.
fn pow_cost(c: i64, t: i64, p: u32) -> i64 {
    if t == INF {
        return INF;
    }
    let mut acc: i128 = 1;
    for _ in 0..p {
        acc = acc.saturating_mul(t as i128);
        if acc >= INF as i128 {
            return INF;
        }
    }
    let scaled = (c as i128).saturating_mul(acc);
    if scaled >= INF as i128 {
        INF
    } else {
        scaled as i64
    }
}

/// Aggregate cost: a black-box evaluator over per-type totals, or the
/// parametric form `g(c_1 * t_1^{p_1}, ..., c_k * t_k^{p_k})` with `g` sum
/// or max, which is non-decreasing by construction.
pub struct AggregateCost {
    kind: CostKind,
}

impl AggregateCost {
    pub fn parametric(g: GForm, coeffs: Vec<i64>, exps: Vec<u32>) -> Result<Self> {
        if coeffs.len() != exps.len() || coeffs.is_empty() {
            return Err(Error::arg("coefficient and exponent lists must match and be non-empty"));
        }
        if coeffs.iter().any(|&c| c <= 0) {
            return Err(Error::arg("coefficients must be positive"));
        }
        if exps.iter().any(|&p| p < 1) {
            return Err(Error::arg("exponents must be at least 1"));
        }
        Ok(AggregateCost { kind: CostKind::Parametric { g, coeffs, exps } })
    }

    /// A caller-supplied evaluator; non-decreasingness is sampled at solve
    /// time, not proven.
    pub fn custom(f: impl Fn(&[i64]) -> i64 + 'static) -> Self {
        AggregateCost { kind: CostKind::Custom(Box::new(f)) }
    }

    pub fn eval(&self, totals: &[i64]) -> i64 {
        match &self.kind {
            CostKind::Custom(f) => f(totals),
            CostKind::Parametric { g, coeffs, exps } => {
                let terms = totals
                    .iter()
                    .zip(coeffs.iter().zip(exps))
                    .map(|(&t, (&c, &p))| pow_cost(c, t, p));
                match g {
                    GForm::Sum => terms.fold(0i64, sat_add),
                    GForm::Max => terms.max().unwrap_or(0),
                }
            }
        }
    }

    /// Probe random coordinate bumps looking for a decrease. Deterministic
    /// (fixed LCG seed); only custom evaluators are sampled.
    fn check_nondecreasing_sampled(&self, k: usize, bounds: &[i64]) -> Result<()> {
        if matches!(self.kind, CostKind::Parametric { .. }) {
            return Ok(());
        }
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = |m: u64| -> u64 {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m.max(1)
        };
        let mut totals = vec![0i64; k];
        for _ in 0..256 {
            for (j, t) in totals.iter_mut().enumerate() {
                *t = next(bounds[j].max(0) as u64 + 1) as i64;
            }
            let base = self.eval(&totals);
            let j = next(k as u64) as usize;
            if totals[j] < bounds[j] {
                totals[j] += 1;
                if self.eval(&totals) < base {
                    return Err(Error::arg(format!(
                        "aggregate cost decreases when total {} grows at {totals:?}",
                        j + 1
                    )));
                }
                totals[j] -= 1;
            }
        }
        Ok(())
    }
}

/// Row-major table over coordinates `t_j in 0..=bounds[j]` for j < k-1.
struct CoordSpace {
    bounds: Vec<i64>,
    strides: Vec<usize>,
    size: usize,
}

impl CoordSpace {
    fn new(bounds: &[i64], per_row_budget: usize) -> Result<Self> {
        let mut size: usize = 1;
        let mut strides = vec![0usize; bounds.len()];
        for (j, &b) in bounds.iter().enumerate().rev() {
            if b < 0 {
                return Err(Error::arg("bounds must be non-negative"));
            }
            strides[j] = size;
            size = size
                .checked_mul(b as usize + 1)
                .filter(|&s| s <= per_row_budget)
                .ok_or_else(|| {
                    Error::Capability(format!(
                        "state space exceeds the {per_row_budget}-cell budget"
                    ))
                })?;
        }
        Ok(CoordSpace { bounds: bounds.to_vec(), strides, size })
    }

    fn index(&self, coords: &[i64]) -> usize {
        coords
            .iter()
            .zip(&self.strides)
            .map(|(&c, &s)| c as usize * s)
            .sum()
    }

    /// Iterate all coordinate tuples in row-major order.
    fn for_each(&self, mut f: impl FnMut(usize, &[i64])) {
        let mut coords = vec![0i64; self.bounds.len()];
        for idx in 0..self.size {
            f(idx, &coords);
            for j in (0..coords.len()).rev() {
                if coords[j] < self.bounds[j] {
                    coords[j] += 1;
                    break;
                }
                coords[j] = 0;
            }
        }
    }
}

fn chain_lmin_table(
    chain: &TypedChain,
    bounds: &[i64],
    cell_budget: usize,
) -> Result<(CoordSpace, Vec<Vec<i64>>)> {
    let n = chain.n();
    let space = CoordSpace::new(bounds, cell_budget / n.max(1))?;
    let mut rows: Vec<Vec<i64>> = Vec::with_capacity(n);
    let mut first = vec![INF; space.size];
    first[0] = 0; // Lmin(1, 0, ..., 0) = 0, +INF elsewhere
    rows.push(first);
    for i in 1..n {
        let step = &chain.steps[i - 1];
        let prev = &rows[i - 1];
        let mut row = vec![INF; space.size];
        space.for_each(|idx, coords| {
            // Type-k connection: totals unchanged, value grows.
            let mut best = sat_add(prev[idx], step[chain.k - 1]);
            // Type-j connection (j < k): coordinate j shrinks by l(i-1, j).
            for j in 0..chain.k - 1 {
                let l = step[j];
                if coords[j] >= l {
                    let pidx = idx - (l as usize) * space.strides[j];
                    best = best.min(prev[pidx]);
                }
            }
            row[idx] = best;
        });
        rows.push(row);
    }
    Ok((space, rows))
}

/// Pseudo-polynomial chain DP. Returns the minimum aggregate cost and one
/// optimal type choice per step (1-based types).
///
/// `bounds` caps the type-1..k-1 totals; `None` uses the per-type latency
/// sums. The table is `n * prod(bounds + 1)` cells against `cell_budget`.
pub fn nonlinear_chain_dp(
    chain: &TypedChain,
    cost: &AggregateCost,
    bounds: Option<&[i64]>,
    cell_budget: usize,
) -> Result<(i64, Vec<usize>)> {
    let default_bounds;
    let bounds = match bounds {
        Some(b) => {
            if b.len() != chain.k - 1 {
                return Err(Error::arg(format!(
                    "expected {} bounds, got {}",
                    chain.k - 1,
                    b.len()
                )));
            }
            b
        }
        None => {
            default_bounds = chain.default_bounds();
            &default_bounds[..chain.k - 1]
        }
    };
    let mut full_bounds = bounds.to_vec();
    full_bounds.push(chain.default_bounds()[chain.k - 1]);
    cost.check_nondecreasing_sampled(chain.k, &full_bounds)?;

    let n = chain.n();
    let (space, rows) = chain_lmin_table(chain, bounds, cell_budget)?;

    // Optimum over the last row: f(totals_1..k-1, Lmin(n, totals)).
    let mut best: Option<(i64, Vec<i64>)> = None;
    let last = &rows[n - 1];
    space.for_each(|idx, coords| {
        if last[idx] == INF {
            return;
        }
        let mut totals = coords.to_vec();
        totals.push(last[idx]);
        let value = cost.eval(&totals);
        match &best {
            Some((b, _)) if *b <= value => {}
            _ => best = Some((value, coords.to_vec())),
        }
    });
    let Some((value, mut coords)) = best else {
        return Err(Error::arg("no feasible assignment within the bounds"));
    };

    // Back-walk the table to recover the type per step.
    let mut choices = vec![0usize; n - 1];
    for i in (1..n).rev() {
        let idx = space.index(&coords);
        let step = &chain.steps[i - 1];
        let here = rows[i][idx];
        let mut picked = chain.k; // default: type k
        for j in 0..chain.k - 1 {
            let l = step[j];
            if coords[j] >= l && rows[i - 1][idx - (l as usize) * space.strides[j]] == here {
                picked = j + 1;
                break;
            }
        }
        if picked == chain.k {
            debug_assert_eq!(sat_add(rows[i - 1][idx], step[chain.k - 1]), here);
        } else {
            coords[picked - 1] -= step[picked - 1];
        }
        choices[i - 1] = picked;
    }
    Ok((value, choices))
}

/// Smallest integer `t >= 0` with `c * t^p <= budget`, as an upper bound
/// search; returns the largest such t.
fn lmax_for(budget: i64, c: i64, p: u32, hard_cap: i64) -> i64 {
    let (mut lo, mut hi) = (0i64, hard_cap);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if pow_cost(c, mid, p) <= budget {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// Binary search for the optimal max-form aggregate
/// `max_j c_j * t_j^{p_j}` over the discrete candidate cost set
/// `{c_j * t^{p_j}}`. A candidate C is feasible when the DP bounded by
/// `lmax(j) = floor((C / c_j)^(1/p_j))` leaves some final state whose
/// type-k sum stays within `lmax(k)`.
pub fn nonlinear_bsearch_max(
    chain: &TypedChain,
    coeffs: &[i64],
    exps: &[u32],
    cell_budget: usize,
) -> Result<i64> {
    if coeffs.len() != chain.k || exps.len() != chain.k {
        return Err(Error::arg(format!("need {} coefficients and exponents", chain.k)));
    }
    // Validates positivity.
    let _ = AggregateCost::parametric(GForm::Max, coeffs.to_vec(), exps.to_vec())?;

    let full_bounds = chain.default_bounds();
    let mut candidates: Vec<i64> = Vec::new();
    for j in 0..chain.k {
        for t in 0..=full_bounds[j] {
            candidates.push(pow_cost(coeffs[j], t, exps[j]));
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let feasible = |ccost: i64| -> Result<bool> {
        let lmax: Vec<i64> = (0..chain.k)
            .map(|j| lmax_for(ccost, coeffs[j], exps[j], full_bounds[j]))
            .collect();
        let (space, rows) = chain_lmin_table(chain, &lmax[..chain.k - 1], cell_budget)?;
        let last = &rows[chain.n() - 1];
        let mut ok = false;
        space.for_each(|idx, _| {
            if last[idx] <= lmax[chain.k - 1] {
                ok = true;
            }
        });
        Ok(ok)
    };

    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if !feasible(candidates[hi])? {
        return Err(Error::arg("no feasible assignment within the bounds"));
    }
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(candidates[mid])? {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(candidates[lo])
}

/// Directed graph whose edges carry a connection type and a latency.
#[derive(Debug, Clone)]
pub struct TypedGraph {
    n: usize,
    k: usize,
    /// (from, to, type 1..=k, latency), adjacency grouped per tail.
    adj: Vec<Vec<(usize, usize, i64)>>,
    m: usize,
}

impl TypedGraph {
    pub fn new(
        n: usize,
        k: usize,
        directed: bool,
        edges: &[(usize, usize, usize, i64)],
    ) -> Result<Self> {
        if k == 0 {
            return Err(Error::arg("need at least one connection type"));
        }
        let mut adj: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); n];
        let mut m = 0usize;
        for &(u, v, t, l) in edges {
            if u == 0 || u > n || v == 0 || v > n {
                return Err(Error::arg(format!("edge ({u}, {v}) out of range")));
            }
            if t == 0 || t > k {
                return Err(Error::arg(format!("connection type {t} out of range 1..={k}")));
            }
            if l < 0 {
                return Err(Error::arg(format!("negative latency {l}")));
            }
            adj[u - 1].push((v - 1, t, l));
            m += 1;
            if !directed && u != v {
                adj[v - 1].push((u - 1, t, l));
                m += 1;
            }
        }
        Ok(TypedGraph { n, k, adj, m })
    }

    /// Header `n m k directed|undirected`, then m lines `u v type latency`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            });
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(Error::parse(hline, "header must be \"n m k directed|undirected\""));
        }
        let n: usize = fields[0].parse().map_err(|_| Error::parse(hline, "bad vertex count"))?;
        let m: usize = fields[1].parse().map_err(|_| Error::parse(hline, "bad edge count"))?;
        let k: usize = fields[2].parse().map_err(|_| Error::parse(hline, "bad type count"))?;
        let directed = match fields[3] {
            "directed" => true,
            "undirected" => false,
            other => {
                return Err(Error::parse(hline, format!("expected directed|undirected, got {other:?}")))
            }
        };
        let mut edges = Vec::with_capacity(m);
        for (line_no, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 4 {
                return Err(Error::parse(line_no, "edge line must be \"u v type latency\""));
            }
            let parse = |s: &str| -> Result<i64> {
                s.parse().map_err(|_| Error::parse(line_no, format!("bad number {s:?}")))
            };
            edges.push((
                parse(f[0])? as usize,
                parse(f[1])? as usize,
                parse(f[2])? as usize,
                parse(f[3])?,
            ));
        }
        if edges.len() != m {
            return Err(Error::parse(1, format!("expected {m} edge lines, got {}", edges.len())));
        }
        TypedGraph::new(n, k, directed, &edges).map_err(|e| Error::parse(hline, e.to_string()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edge_count(&self) -> usize {
        self.m
    }
}

/// Expanded-graph shortest path: states `(vertex, t_1..t_{k-1})`, zero-cost
/// arcs for type-1..k-1 connections shifting the matching coordinate, and
/// type-k arcs weighted by their latency. All sources are seeded at
/// distance 0 in one run. Returns, per destination, the minimum of
/// `f(totals, dist)` over its states, or `None` when unreachable.
pub fn nonlinear_graph_sp(
    g: &TypedGraph,
    sources: &[VertexId],
    destinations: &[VertexId],
    cost: &AggregateCost,
    bounds: &[i64],
    cell_budget: usize,
) -> Result<Vec<Option<i64>>> {
    if bounds.len() != g.k - 1 {
        return Err(Error::arg(format!("expected {} bounds, got {}", g.k - 1, bounds.len())));
    }
    if sources.is_empty() {
        return Err(Error::arg("source set must not be empty"));
    }
    for &v in sources.iter().chain(destinations) {
        if v.0 == 0 || v.0 > g.n {
            return Err(Error::arg(format!("vertex {v} out of range 1..={}", g.n)));
        }
    }
    let mut full_bounds = bounds.to_vec();
    full_bounds.push(i64::MAX - 1);
    cost.check_nondecreasing_sampled(g.k, &full_bounds)?;

    let space = CoordSpace::new(bounds, cell_budget / g.n.max(1))?;
    let nstates = space.size * g.n;
    let mut dist = vec![INF; nstates];
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
    for &s in sources {
        let st = s.ix() * space.size;
        if dist[st] != 0 {
            dist[st] = 0;
            heap.push(Reverse((0, st)));
        }
    }
    let mut coords_buf = vec![0i64; g.k - 1];
    while let Some(Reverse((d, st))) = heap.pop() {
        if d != dist[st] {
            continue;
        }
        let v = st / space.size;
        let mut rem = st % space.size;
        for j in 0..g.k - 1 {
            coords_buf[j] = (rem / space.strides[j]) as i64;
            rem %= space.strides[j];
        }
        for &(to, t, l) in &g.adj[v] {
            let nst;
            let nd;
            if t < g.k {
                let j = t - 1;
                if coords_buf[j] + l > bounds[j] {
                    continue;
                }
                nst = to * space.size + (st % space.size) + (l as usize) * space.strides[j];
                nd = d;
            } else {
                nst = to * space.size + (st % space.size);
                nd = sat_add(d, l);
            }
            if nd < dist[nst] {
                dist[nst] = nd;
                heap.push(Reverse((nd, nst)));
            }
        }
    }

    let mut out = Vec::with_capacity(destinations.len());
    for &dvert in destinations {
        let base = dvert.ix() * space.size;
        let mut best: Option<i64> = None;
        space.for_each(|idx, coords| {
            let lk = dist[base + idx];
            if lk == INF {
                return;
            }
            let mut totals = coords.to_vec();
            totals.push(lk);
            let value = cost.eval(&totals);
            best = Some(best.map_or(value, |b: i64| b.min(value)));
        });
        out.push(best);
    }
    Ok(out)
}
