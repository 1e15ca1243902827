//! Shared generators and independent oracles for the integration suites.
//!
//! Oracles deliberately avoid the library's solver code paths: widest paths
//! and safety values enumerate simple paths, packet costs search the full
//! configuration space, connectivity answers recompute components from
//! scratch, and Pareto fronts enumerate bounded walks with local additive
//! updates.

#![allow(dead_code)]

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use offroute::connectivity::{AggregatorPair, GAgg, OperationScript, ScriptOp};
use offroute::graph::{sat_add, Graph, VertexId, INF};
use offroute::index::BottleneckIndex;
use offroute::kpacket::CostMatrix;
use offroute::lex::{lex_compare, AggregatorSpec};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- generators

/// Random undirected single-column graph, possibly disconnected, with
/// parallel edges and self-loops allowed.
pub fn random_undirected(rng: &mut ChaCha8Rng, nmax: usize, mmax: usize, wmax: i64) -> Graph {
    let n = rng.random_range(1..=nmax);
    let m = rng.random_range(0..=mmax);
    let edges: Vec<(usize, usize, i64)> = (0..m)
        .map(|_| {
            (rng.random_range(1..=n), rng.random_range(1..=n), rng.random_range(0..=wmax))
        })
        .collect();
    Graph::from_weighted_edges(n, false, &edges).unwrap()
}

/// Random connected undirected graph: a random spanning tree plus extras.
pub fn random_connected_undirected(
    rng: &mut ChaCha8Rng,
    nmax: usize,
    extra_max: usize,
    wmax: i64,
) -> Graph {
    let n = rng.random_range(1..=nmax);
    let mut edges: Vec<(usize, usize, i64)> = Vec::new();
    for v in 2..=n {
        edges.push((rng.random_range(1..v), v, rng.random_range(0..=wmax)));
    }
    for _ in 0..rng.random_range(0..=extra_max) {
        edges.push((rng.random_range(1..=n), rng.random_range(1..=n), rng.random_range(0..=wmax)));
    }
    Graph::from_weighted_edges(n, false, &edges).unwrap()
}

/// Random directed multigraph with `arity` weight columns in `[wmin, wmax]`.
pub fn random_directed(
    rng: &mut ChaCha8Rng,
    nmax: usize,
    mmax: usize,
    wmin: i64,
    wmax: i64,
    arity: usize,
) -> Graph {
    let n = rng.random_range(1.max(2.min(nmax))..=nmax);
    let m = rng.random_range(0..=mmax);
    let edges = (0..m).map(|_| {
        let u = rng.random_range(1..=n);
        let v = rng.random_range(1..=n);
        let w: Vec<i64> = (0..arity).map(|_| rng.random_range(wmin..=wmax)).collect();
        (u, v, w)
    });
    Graph::from_edges(n, true, arity, edges).unwrap()
}

// ------------------------------------------------------------------- widest

/// Maximum over simple s-t paths of the minimum edge capacity.
/// `Some(INF)` for s == t, `None` when unreachable.
pub fn widest_oracle(g: &Graph, s: VertexId, t: VertexId, col: usize) -> Option<i64> {
    if s == t {
        return Some(INF);
    }
    let n = g.n();
    let mut best: Option<i64> = None;
    let mut on_path = vec![false; n];
    fn dfs(
        g: &Graph,
        col: usize,
        v: usize,
        t: usize,
        cap: i64,
        on_path: &mut Vec<bool>,
        best: &mut Option<i64>,
    ) {
        if v == t {
            *best = Some(best.map_or(cap, |b| b.max(cap)));
            return;
        }
        on_path[v] = true;
        for oe in g.out_edges(VertexId(v + 1)) {
            let j = oe.to.0 - 1;
            if !on_path[j] {
                dfs(g, col, j, t, cap.min(g.weight(oe.edge, col)), on_path, best);
            }
        }
        on_path[v] = false;
    }
    dfs(g, col, s.0 - 1, t.0 - 1, INF, &mut on_path, &mut best);
    best
}

// ---------------------------------------------------------------------- lex

/// Brute-force lexicographic optimum per vertex over simple paths.
pub fn lex_oracle(g: &Graph, spec: &AggregatorSpec, s: VertexId) -> Vec<Option<Vec<i64>>> {
    let n = g.n();
    let mut best: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut on_path = vec![false; n];
    fn dfs(
        g: &Graph,
        spec: &AggregatorSpec,
        v: usize,
        acc: &[i64],
        on_path: &mut Vec<bool>,
        best: &mut Vec<Option<Vec<i64>>>,
    ) {
        let better = match &best[v] {
            None => true,
            Some(b) => lex_compare(spec, acc, b).unwrap() == Ordering::Less,
        };
        if better {
            best[v] = Some(acc.to_vec());
        }
        on_path[v] = true;
        for oe in g.out_edges(VertexId(v + 1)) {
            let j = oe.to.0 - 1;
            if !on_path[j] {
                let next = spec.combine(acc, &g.edges()[oe.edge].weights);
                dfs(g, spec, j, &next, on_path, best);
            }
        }
        on_path[v] = false;
    }
    let seed = spec.seed();
    dfs(g, spec, s.0 - 1, &seed, &mut on_path, &mut best);
    best
}

// ------------------------------------------------------------------ farthest

/// Maximum over simple s-t paths of the minimum `dmin` over the path's
/// vertices, endpoints included. `Some(dmin(s))` for s == t.
pub fn farthest_oracle(g: &Graph, dmin: &[i64], s: VertexId, t: VertexId) -> Option<i64> {
    if s == t {
        return Some(dmin[s.0 - 1]);
    }
    let n = g.n();
    let mut best: Option<i64> = None;
    let mut on_path = vec![false; n];
    fn dfs(
        g: &Graph,
        dmin: &[i64],
        v: usize,
        t: usize,
        safety: i64,
        on_path: &mut Vec<bool>,
        best: &mut Option<i64>,
    ) {
        if v == t {
            *best = Some(best.map_or(safety, |b| b.max(safety)));
            return;
        }
        on_path[v] = true;
        for oe in g.out_edges(VertexId(v + 1)) {
            let j = oe.to.0 - 1;
            if !on_path[j] {
                dfs(g, dmin, j, t, safety.min(dmin[j]), on_path, best);
            }
        }
        on_path[v] = false;
    }
    let start = s.0 - 1;
    dfs(g, dmin, start, t.0 - 1, dmin[start], &mut on_path, &mut best);
    best
}

// ---------------------------------------------------------------------- lca

/// Level-equalizing LCA walk over the index accessors; `None` when the
/// walks end at different component roots.
pub fn naive_lca(idx: &BottleneckIndex, u: VertexId, v: VertexId) -> Option<VertexId> {
    let (mut pu, mut pv) = (u, v);
    while idx.level_of(pu) > idx.level_of(pv) {
        pu = idx.parent_of(pu)?;
    }
    while idx.level_of(pv) > idx.level_of(pu) {
        pv = idx.parent_of(pv)?;
    }
    while pu != pv {
        match (idx.parent_of(pu), idx.parent_of(pv)) {
            (Some(a), Some(b)) => {
                pu = a;
                pv = b;
            }
            _ => return None,
        }
    }
    Some(pu)
}

// ------------------------------------------------------------------- packets

/// Exact minimum coverage cost by cost-ordered search over the full
/// configuration space (sorted positions, visited set). Covers every legal
/// schedule, not just the DP's restricted ones.
pub fn kpacket_oracle(n: usize, vinit: &[VertexId], c: &CostMatrix) -> Option<i64> {
    let full: u32 = (1u32 << n) - 1;
    let mut start: Vec<usize> = vinit.iter().map(|v| v.0).collect();
    start.sort_unstable();
    let mut mask = 0u32;
    for &p in &start {
        mask |= 1 << (p - 1);
    }
    let mut best: HashMap<(Vec<usize>, u32), i64> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(i64, Vec<usize>, u32)>> = BinaryHeap::new();
    best.insert((start.clone(), mask), 0);
    heap.push(Reverse((0, start, mask)));
    while let Some(Reverse((cost, pos, mask))) = heap.pop() {
        if best.get(&(pos.clone(), mask)) != Some(&cost) {
            continue;
        }
        if mask == full {
            return Some(cost);
        }
        for slot in 0..pos.len() {
            for target in pos[slot] + 1..=n {
                let mut npos = pos.clone();
                npos[slot] = target;
                npos.sort_unstable();
                let nmask = mask | (1 << (target - 1));
                let ncost = sat_add(cost, c.cost(VertexId(pos[slot]), VertexId(target)));
                let key = (npos.clone(), nmask);
                if best.get(&key).is_none_or(|&b| ncost < b) {
                    best.insert(key, ncost);
                    heap.push(Reverse((ncost, npos, nmask)));
                }
            }
        }
    }
    None
}

/// Exhaustive enumeration of all k^m flow-to-request assignments.
pub fn kflow_oracle(vinit: &[VertexId], requests: &[VertexId], c: &CostMatrix) -> i64 {
    fn rec(positions: &mut Vec<usize>, i: usize, requests: &[VertexId], c: &CostMatrix) -> i64 {
        if i == requests.len() {
            return 0;
        }
        let target = requests[i].0;
        let mut best = INF;
        for j in 0..positions.len() {
            let old = positions[j];
            let step = c.cost(VertexId(old), VertexId(target));
            positions[j] = target;
            best = best.min(sat_add(step, rec(positions, i + 1, requests, c)));
            positions[j] = old;
        }
        best
    }
    let mut positions: Vec<usize> = vinit.iter().map(|v| v.0).collect();
    rec(&mut positions, 0, requests, c)
}

// -------------------------------------------------------------- connectivity

fn gagg_fold(agg: GAgg, vals: &[i64]) -> i64 {
    match agg {
        GAgg::Sum => vals.iter().fold(0i64, |a, &b| a.wrapping_add(b)),
        GAgg::Product => vals.iter().fold(1i64, |a, &b| a.wrapping_mul(b)),
        GAgg::Xor => vals.iter().fold(0i64, |a, &b| a ^ b),
    }
}

/// Answer every query by recomputing components from scratch at that point
/// of the script (BFS over the live subgraph).
pub fn connectivity_oracle(
    g: &Graph,
    weights: &[i64],
    script: &OperationScript,
    aggs: &AggregatorPair,
) -> Vec<i64> {
    let n = g.n();
    let mut vertex_alive = vec![true; n];
    let mut edge_alive = vec![true; g.edges().len()];
    let mut answers = Vec::new();

    let component_of = |vertex_alive: &[bool], edge_alive: &[bool], x: usize| -> Vec<usize> {
        let mut seen = vec![false; n];
        seen[x] = true;
        let mut queue = VecDeque::from([x]);
        let mut members = vec![x];
        while let Some(v) = queue.pop_front() {
            for oe in g.out_edges(VertexId(v + 1)) {
                let j = oe.to.0 - 1;
                if edge_alive[oe.edge] && vertex_alive[j] && !seen[j] {
                    seen[j] = true;
                    members.push(j);
                    queue.push_back(j);
                }
            }
        }
        members
    };
    let wcc_of = |members: &[usize]| -> i64 {
        members[1..]
            .iter()
            .fold(weights[members[0]], |acc, &v| aggs.ccagg.apply(acc, weights[v]))
    };

    for op in &script.ops {
        match *op {
            ScriptOp::DeleteEdge(u, v) => {
                let (ui, vi) = (u.0 - 1, v.0 - 1);
                let e = g
                    .edges()
                    .iter()
                    .enumerate()
                    .position(|(i, ed)| {
                        edge_alive[i]
                            && ((ed.u.0 - 1 == ui && ed.v.0 - 1 == vi)
                                || (ed.u.0 - 1 == vi && ed.v.0 - 1 == ui))
                    })
                    .expect("script was validated");
                edge_alive[e] = false;
            }
            ScriptOp::DeleteVertex(x) => {
                let xi = x.0 - 1;
                vertex_alive[xi] = false;
                for (i, ed) in g.edges().iter().enumerate() {
                    if ed.u.0 - 1 == xi || ed.v.0 - 1 == xi {
                        edge_alive[i] = false;
                    }
                }
            }
            ScriptOp::QueryComponent(x) => {
                let members = component_of(&vertex_alive, &edge_alive, x.0 - 1);
                answers.push(wcc_of(&members));
            }
            ScriptOp::QueryGraph => {
                let mut seen = vec![false; n];
                let mut comps = Vec::new();
                for v in 0..n {
                    if vertex_alive[v] && !seen[v] {
                        let members = component_of(&vertex_alive, &edge_alive, v);
                        for &m in &members {
                            seen[m] = true;
                        }
                        comps.push(wcc_of(&members));
                    }
                }
                answers.push(gagg_fold(aggs.gagg, &comps));
            }
        }
    }
    answers
}

/// Random structurally valid deletion/query script.
pub fn random_script(rng: &mut ChaCha8Rng, g: &Graph, max_ops: usize) -> OperationScript {
    let n = g.n();
    let mut vertex_alive = vec![true; n];
    let mut edge_alive: Vec<bool> = vec![true; g.edges().len()];
    let mut ops = Vec::new();
    for _ in 0..max_ops {
        let live_vertices: Vec<usize> = (0..n).filter(|&v| vertex_alive[v]).collect();
        if live_vertices.is_empty() {
            break;
        }
        let live_edges: Vec<usize> = (0..g.edges().len()).filter(|&e| edge_alive[e]).collect();
        match rng.random_range(0..5u32) {
            0 if !live_edges.is_empty() => {
                let e = live_edges[rng.random_range(0..live_edges.len())];
                let ed = &g.edges()[e];
                edge_alive[e] = false;
                // Deletion by endpoints removes the smallest live edge index
                // for that pair, which is not necessarily `e`; emit the
                // endpoints and re-mark the edge the solver will pick.
                ops.push(ScriptOp::DeleteEdge(ed.u, ed.v));
                edge_alive[e] = true;
                let pick = live_edges
                    .iter()
                    .copied()
                    .find(|&x| {
                        let xd = &g.edges()[x];
                        (xd.u == ed.u && xd.v == ed.v) || (xd.u == ed.v && xd.v == ed.u)
                    })
                    .unwrap();
                edge_alive[pick] = false;
            }
            1 => {
                let x = live_vertices[rng.random_range(0..live_vertices.len())];
                vertex_alive[x] = false;
                for (i, ed) in g.edges().iter().enumerate() {
                    if ed.u.0 - 1 == x || ed.v.0 - 1 == x {
                        edge_alive[i] = false;
                    }
                }
                ops.push(ScriptOp::DeleteVertex(VertexId(x + 1)));
            }
            2 | 3 => {
                let x = live_vertices[rng.random_range(0..live_vertices.len())];
                ops.push(ScriptOp::QueryComponent(VertexId(x + 1)));
            }
            _ => ops.push(ScriptOp::QueryGraph),
        }
    }
    OperationScript { ops }
}

// -------------------------------------------------------------------- pareto

/// All score tuples observable at the destinations over walks of at most
/// `max_edges` edges, under purely additive objectives clipped to
/// `[0, vmax]`. Independent of the pareto module's update machinery.
pub fn pareto_walk_tuples(
    g: &Graph,
    p: usize,
    vmax: i64,
    sources: &[VertexId],
    dests: &[VertexId],
    max_edges: usize,
) -> HashSet<Vec<i64>> {
    let mut out: HashSet<Vec<i64>> = HashSet::new();
    let dests: HashSet<VertexId> = dests.iter().copied().collect();
    struct Ctx<'a> {
        g: &'a Graph,
        p: usize,
        vmax: i64,
        dests: &'a HashSet<VertexId>,
        max_edges: usize,
    }
    fn walk(ctx: &Ctx, v: VertexId, scores: &[i64], depth: usize, out: &mut HashSet<Vec<i64>>) {
        if ctx.dests.contains(&v) {
            out.insert(scores.to_vec());
        }
        if depth == ctx.max_edges {
            return;
        }
        for oe in ctx.g.out_edges(v) {
            let w = &ctx.g.edges()[oe.edge].weights;
            let next: Vec<i64> = (0..ctx.p).map(|i| sat_add(scores[i], w[i])).collect();
            if next.iter().all(|&x| x <= ctx.vmax) {
                walk(ctx, oe.to, &next, depth + 1, out);
            }
        }
    }
    let ctx = Ctx { g, p, vmax, dests: &dests, max_edges };
    let seeds = vec![0i64; p];
    let mut seen_sources = HashSet::new();
    for &s in sources {
        if seen_sources.insert(s) {
            walk(&ctx, s, &seeds, 0, &mut out);
        }
    }
    out
}

/// Non-dominated subset under less-is-better on every coordinate, sorted.
pub fn non_dominated_min(tuples: &HashSet<Vec<i64>>, weak: bool) -> Vec<Vec<i64>> {
    let all: Vec<&Vec<i64>> = tuples.iter().collect();
    let dominates = |a: &[i64], b: &[i64]| -> bool {
        if weak {
            a.iter().zip(b).all(|(x, y)| x <= y) && a != b
        } else {
            a.iter().zip(b).all(|(x, y)| x < y)
        }
    };
    let mut out: Vec<Vec<i64>> = all
        .iter()
        .filter(|t| !all.iter().any(|o| dominates(o, t)))
        .map(|t| (*t).clone())
        .collect();
    out.sort();
    out.dedup();
    out
}
