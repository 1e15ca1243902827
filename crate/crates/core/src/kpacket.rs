//! Dynamic programs for k-packet routing with ordering constraints.
//!
//! [`kpacket_cover`] sends k identical packets so that every vertex in
//! `1..=n` is visited while packets only move to strictly larger indices.
//! States are descending-sorted position tuples whose maximum bounds the
//! visited interval; the refined transition forwards a packet into the
//! state's maximum, with the single-predecessor shortcut when the maximum
//! stands clear of the rest.
//!
//! [`kflow_requests`] serves m requests in order with k flows; the state
//! pins the flow that served the latest request and tracks the other k-1
//! positions as a sorted tuple (identical flows) or a raw tuple (distinct
//! flows, ordering constraint dropped).
//!
//! Both DPs assume costs satisfying the triangle inequality; run raw
//! matrices through [`metric_closure`] first.

use crate::error::{Error, Result};
use crate::graph::{sat_add, VertexId, INF};

/// Hard cap on the packet count: the state table is Theta(n^k).
pub const MAX_PACKETS: usize = 4;

/// Default cell budget for DP tables.
pub const DEFAULT_DP_BUDGET: usize = 100_000_000;

/// Dense n-by-n non-negative cost matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CostMatrix {
    n: usize,
    c: Vec<i64>,
}

impl CostMatrix {
    pub fn new(n: usize, entries: Vec<i64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::arg(format!(
                "cost matrix needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(w) = entries.iter().find(|&&w| w < 0) {
            return Err(Error::arg(format!("negative cost {w}")));
        }
        Ok(CostMatrix { n, c: entries })
    }

    /// Costs as pairwise distances of points on a line.
    pub fn from_line_coords(coords: &[i64]) -> Self {
        let n = coords.len();
        let mut c = vec![0i64; n * n];
        for i in 0..n {
            for j in 0..n {
                c[i * n + j] = (coords[i] - coords[j]).abs();
            }
        }
        CostMatrix { n, c }
    }

    /// Parse `n` on the first line followed by n rows of n entries.
    /// `#`-comments and blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l))
            .filter(|(_, l)| {
                let t = l.trim_start();
                !t.is_empty() && !t.starts_with('#')
            });
        let (hline, header) =
            lines.next().ok_or_else(|| Error::parse(1, "missing size line"))?;
        let n: usize = header
            .trim()
            .parse()
            .map_err(|_| Error::parse(hline, "first line must be the matrix size"))?;
        let mut entries = Vec::with_capacity(n * n);
        for (line_no, line) in lines {
            for tok in line.split_whitespace() {
                let w: i64 = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad cost {tok:?}")))?;
                entries.push(w);
            }
        }
        CostMatrix::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Cost between 1-based vertices.
    pub fn cost(&self, from: VertexId, to: VertexId) -> i64 {
        self.at(from.ix(), to.ix())
    }

    fn at(&self, i: usize, j: usize) -> i64 {
        self.c[i * self.n + j]
    }
}

/// Replace every entry by the cheapest path cost, forcing a zero diagonal.
/// Idempotent; the result satisfies the triangle inequality and never
/// exceeds the input entrywise.
pub fn metric_closure(c: &CostMatrix) -> CostMatrix {
    let n = c.n;
    let mut d = c.c.clone();
    for i in 0..n {
        d[i * n + i] = d[i * n + i].min(0);
    }
    for q in 0..n {
        for i in 0..n {
            let diq = d[i * n + q];
            if diq == INF {
                continue;
            }
            for j in 0..n {
                let via = sat_add(diq, d[q * n + j]);
                if via < d[i * n + j] {
                    d[i * n + j] = via;
                }
            }
        }
    }
    CostMatrix { n, c: d }
}

/// Ranks descending-sorted multisets over `1..=n` in increasing
/// lexicographic order. Rank arithmetic uses a precomputed binomial table.
struct MultisetIndexer {
    n: usize,
    k: usize,
    /// binom[a][b] = C(a, b) for b <= k.
    binom: Vec<Vec<u128>>,
}

impl MultisetIndexer {
    fn new(n: usize, k: usize, budget: usize) -> Result<Self> {
        // Pascal's triangle up to C(n + k, k + 1).
        let rows = n + k + 1;
        let mut binom = vec![vec![0u128; k + 2]; rows];
        for a in 0..rows {
            binom[a][0] = 1;
            for b in 1..=(k + 1) {
                if a == 0 {
                    break;
                }
                let up = binom[a - 1][b];
                let upleft = binom[a - 1][b - 1];
                binom[a][b] = up.saturating_add(upleft);
            }
        }
        let idx = MultisetIndexer { n, k, binom };
        let total = idx.total_u128();
        if total > budget as u128 {
            return Err(Error::Capability(format!(
                "state table needs {total} entries, budget is {budget}"
            )));
        }
        Ok(idx)
    }

    /// Number of non-increasing j-tuples over `1..=maxv`.
    fn count(&self, j: usize, maxv: usize) -> u128 {
        // C(maxv + j - 1, j)
        if j == 0 {
            1
        } else {
            self.binom[maxv + j - 1][j]
        }
    }

    fn total_u128(&self) -> u128 {
        self.count(self.k, self.n)
    }

    fn total(&self) -> usize {
        self.total_u128() as usize
    }

    /// Rank of a non-increasing tuple in increasing lexicographic order.
    fn rank(&self, tuple: &[usize]) -> usize {
        debug_assert_eq!(tuple.len(), self.k);
        let mut r = 0u128;
        for (i, &v) in tuple.iter().enumerate() {
            debug_assert!(v >= 1 && v <= self.n);
            debug_assert!(i == 0 || v <= tuple[i - 1]);
            r += self.count(self.k - i, v - 1);
        }
        r as usize
    }

    /// Advance to the next tuple in lexicographic order; false at the end.
    fn next(&self, tuple: &mut [usize]) -> bool {
        for i in (0..self.k).rev() {
            let cap = if i == 0 { self.n } else { tuple[i - 1] };
            if tuple[i] < cap {
                tuple[i] += 1;
                for t in tuple.iter_mut().skip(i + 1) {
                    *t = 1;
                }
                return true;
            }
        }
        false
    }
}

/// Insert `v` into a descending-sorted slice, in O(k).
fn insert_sorted_desc(rest: &[usize], v: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(rest.len() + 1);
    let pos = rest.partition_point(|&x| x >= v);
    out.extend_from_slice(&rest[..pos]);
    out.push(v);
    out.extend_from_slice(&rest[pos..]);
    out
}

/// Minimum-cost coverage plan: total cost plus the `(from, to)` move list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPacketSolution {
    pub cost: i64,
    pub moves: Vec<(VertexId, VertexId)>,
}

/// Cover all of `1..=n` with k packets moving to strictly larger indices.
///
/// The initial positions must include vertex 1 and cover the whole interval
/// `[1, max(vinit)]`; otherwise the interval-shaped visited set the DP
/// tracks is wrong from the start.
pub fn kpacket_cover(
    n: usize,
    k: usize,
    vinit: &[VertexId],
    c: &CostMatrix,
) -> Result<KPacketSolution> {
    if k == 0 {
        return Err(Error::arg("need at least one packet"));
    }
    if k > MAX_PACKETS {
        return Err(Error::Capability(format!(
            "k = {k} exceeds the supported maximum of {MAX_PACKETS} packets"
        )));
    }
    if vinit.len() != k {
        return Err(Error::arg(format!("expected {k} initial positions, got {}", vinit.len())));
    }
    if n == 0 || c.n() != n {
        return Err(Error::arg("cost matrix size must equal n >= 1"));
    }
    for &v in vinit {
        if v.0 == 0 || v.0 > n {
            return Err(Error::arg(format!("initial position {v} out of range 1..={n}")));
        }
    }
    let mut start: Vec<usize> = vinit.iter().map(|v| v.0).collect();
    start.sort_unstable_by(|a, b| b.cmp(a));
    if start[k - 1] != 1 {
        return Err(Error::arg("the smallest initial position must be vertex 1"));
    }
    for want in 1..=start[0] {
        if !start.contains(&want) {
            return Err(Error::arg(format!(
                "initial positions must cover 1..={}, vertex {want} is missing",
                start[0]
            )));
        }
    }

    let idx = MultisetIndexer::new(n, k, DEFAULT_DP_BUDGET)?;
    let total = idx.total();
    let mut cmin = vec![INF; total];
    // Source vertex of the move that created each state; usize::MAX = none.
    let mut from = vec![usize::MAX; total];
    let rank0 = idx.rank(&start);
    cmin[rank0] = 0;

    let mut best: Option<(i64, Vec<usize>)> = None;
    let mut consider_answer = |cost: i64, tuple: &[usize]| {
        if tuple[0] == n && cost < INF {
            match &best {
                Some((b, _)) if *b <= cost => {}
                _ => best = Some((cost, tuple.to_vec())),
            }
        }
    };
    consider_answer(0, &start);

    let mut tuple = vec![1usize; k];
    let mut rank = 0usize;
    loop {
        debug_assert_eq!(rank, idx.rank(&tuple));
        if rank > rank0 {
            let v1 = tuple[0];
            let rest = &tuple[1..];
            let second = if k > 1 { tuple[1] } else { 0 };
            let mut val = INF;
            let mut src = usize::MAX;
            if v1 - 1 > second {
                // The interval below v1 must already be covered and the
                // other packets all sit under v1 - 1, so the mover can only
                // have stood at v1 - 1.
                let mut pred = tuple.clone();
                pred[0] = v1 - 1;
                let pc = cmin[idx.rank(&pred)];
                if pc < INF {
                    val = sat_add(pc, c.at(v1 - 2, v1 - 1));
                    src = v1 - 1;
                }
            } else {
                for v_prev in 1..v1 {
                    let pred = insert_sorted_desc(rest, v_prev);
                    let pc = cmin[idx.rank(&pred)];
                    if pc < INF {
                        let cand = sat_add(pc, c.at(v_prev - 1, v1 - 1));
                        if cand < val {
                            val = cand;
                            src = v_prev;
                        }
                    }
                }
            }
            cmin[rank] = val;
            from[rank] = src;
            consider_answer(val, &tuple);
        }
        if !idx.next(&mut tuple) {
            break;
        }
        rank += 1;
    }

    let Some((cost, mut state)) = best else {
        return Err(Error::arg(format!("vertex {n} cannot be covered")));
    };
    // Walk the parents back to the initial state collecting moves.
    let mut moves: Vec<(VertexId, VertexId)> = Vec::new();
    let mut r = idx.rank(&state);
    while r != rank0 {
        let src = from[r];
        debug_assert_ne!(src, usize::MAX);
        moves.push((VertexId(src), VertexId(state[0])));
        state = insert_sorted_desc(&state[1..], src);
        r = idx.rank(&state);
    }
    moves.reverse();
    Ok(KPacketSolution { cost, moves })
}

/// Serving plan: total cost plus the position each request was served from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KFlowSolution {
    pub cost: i64,
    pub serves: Vec<VertexId>,
}

/// Serve m requests in order with k flows. One flow is pinned at the vertex
/// of the last served request; the remaining k-1 positions form the state.
/// With `distinct_flows` the ordering constraint on the state tuple is
/// dropped (raw tuples); costs are identical either way.
pub fn kflow_requests(
    n: usize,
    k: usize,
    vinit: &[VertexId],
    requests: &[VertexId],
    c: &CostMatrix,
    distinct_flows: bool,
) -> Result<KFlowSolution> {
    if k == 0 {
        return Err(Error::arg("need at least one flow"));
    }
    if k > MAX_PACKETS {
        return Err(Error::Capability(format!(
            "k = {k} exceeds the supported maximum of {MAX_PACKETS} flows"
        )));
    }
    if vinit.len() != k {
        return Err(Error::arg(format!("expected {k} initial positions, got {}", vinit.len())));
    }
    if requests.is_empty() {
        return Err(Error::arg("need at least one request"));
    }
    if n == 0 || c.n() != n {
        return Err(Error::arg("cost matrix size must equal n >= 1"));
    }
    for &v in vinit.iter().chain(requests) {
        if v.0 == 0 || v.0 > n {
            return Err(Error::arg(format!("vertex {v} out of range 1..={n}")));
        }
    }
    let m = requests.len();

    // State encoding: sorted tuples rank through the multiset indexer, raw
    // tuples through mixed radix.
    let indexer;
    let raw_total = n.checked_pow((k - 1) as u32);
    let total = if distinct_flows {
        let t = raw_total
            .ok_or_else(|| Error::Capability("state table overflows".to_string()))?;
        if t.saturating_mul(m + 1) > DEFAULT_DP_BUDGET {
            return Err(Error::Capability(format!(
                "state table needs {} entries, budget is {DEFAULT_DP_BUDGET}",
                t.saturating_mul(m + 1)
            )));
        }
        indexer = None;
        t
    } else {
        let idx = MultisetIndexer::new(n, k - 1, DEFAULT_DP_BUDGET / (m + 1))?;
        let t = idx.total();
        indexer = Some(idx);
        t
    };
    let rank_of = |tuple: &[usize]| -> usize {
        match &indexer {
            Some(idx) => {
                let mut sorted = tuple.to_vec();
                sorted.sort_unstable_by(|a, b| b.cmp(a));
                idx.rank(&sorted)
            }
            None => tuple.iter().fold(0usize, |acc, &v| acc * n + (v - 1)),
        }
    };

    // The k-th flow starts pinned at vinit[k-1] (request 0).
    let mut free: Vec<usize> = vinit[..k - 1].iter().map(|v| v.0).collect();
    if !distinct_flows {
        free.sort_unstable();
    }
    let mut layer = vec![INF; total];
    layer[rank_of(&free)] = 0;
    let mut tuples_alive: Vec<Vec<usize>> = vec![free.clone()];
    // Parent info per layer: (from position, mover slot, pinned flag) per
    // state. The slot matters only for raw tuples, where arrangement is
    // part of the state identity.
    let mut parents: Vec<Vec<(u32, u8, bool)>> = Vec::with_capacity(m);

    let mut pinned = vinit[k - 1].0;
    for i in 0..m {
        let target = requests[i].0;
        let mut next_layer = vec![INF; total];
        let mut next_parent = vec![(u32::MAX, u8::MAX, false); total];
        let mut next_alive: Vec<Vec<usize>> = Vec::new();
        for tuple in &tuples_alive {
            let cur = layer[rank_of(tuple)];
            if cur == INF {
                continue;
            }
            let mut push =
                |succ: Vec<usize>, cost: i64, from_pos: usize, slot: u8, was_pinned: bool| {
                    let r = rank_of(&succ);
                    if cost < next_layer[r] {
                        if next_layer[r] == INF {
                            next_alive.push(succ);
                        }
                        next_layer[r] = cost;
                        next_parent[r] = (from_pos as u32, slot, was_pinned);
                    }
                };
            // Move a free flow to the request; the pinned one joins the
            // free set at the mover's slot.
            for j in 0..k - 1 {
                let mut succ = tuple.clone();
                succ[j] = pinned;
                if !distinct_flows {
                    succ.sort_unstable();
                }
                let cost = sat_add(cur, c.at(tuple[j] - 1, target - 1));
                push(succ, cost, tuple[j], j as u8, false);
            }
            // Or send the pinned flow onward.
            let cost = sat_add(cur, c.at(pinned - 1, target - 1));
            push(tuple.clone(), cost, pinned, u8::MAX, true);
        }
        layer = next_layer;
        tuples_alive = next_alive;
        parents.push(next_parent);
        pinned = target;
    }

    let mut best: Option<(i64, Vec<usize>)> = None;
    for tuple in &tuples_alive {
        let v = layer[rank_of(tuple)];
        if v < INF {
            match &best {
                Some((b, bt)) if (*b, bt.as_slice()) <= (v, tuple.as_slice()) => {}
                _ => best = Some((v, tuple.clone())),
            }
        }
    }
    let Some((cost, mut state)) = best else {
        return Err(Error::arg("no feasible serving plan"));
    };

    // Reconstruct served-from positions in reverse.
    let mut serves = vec![VertexId(0); m];
    for i in (0..m).rev() {
        let (from_pos, slot, was_pinned) = parents[i][rank_of(&state)];
        let from_pos = from_pos as usize;
        serves[i] = VertexId(from_pos);
        if !was_pinned {
            // The pinned flow re-entered the free set at r(i-1)'s vertex
            // (or the initial pinned vertex for i = 0); undo that swap. Raw
            // tuples undo by slot, sorted tuples by value.
            if distinct_flows {
                state[slot as usize] = from_pos;
            } else {
                let rejoined = if i == 0 { vinit[k - 1].0 } else { requests[i - 1].0 };
                let pos = state
                    .iter()
                    .position(|&v| v == rejoined)
                    .expect("rejoined position present in state");
                state[pos] = from_pos;
                state.sort_unstable();
            }
        }
    }
    Ok(KFlowSolution { cost, serves })
}
