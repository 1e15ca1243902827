//! Maximum-capacity (widest) paths and multicast trees.
//!
//! Three interchangeable strategies compute the same per-vertex value
//! `cmx(i)`: the maximum over all paths from a source of the minimum edge
//! capacity along the path.
//!
//! - [`max_capacity_dijkstra`]: modified Dijkstra with the relaxation
//!   `cmx(j) <- max(cmx(j), min(cmx(i), c(i, j)))`.
//! - [`max_capacity_buckets`]: per-capacity-value linked lists swept from
//!   the largest capacity down, with either eager bucket moves or lazy
//!   deletion of stale entries.
//! - [`max_capacity_bsearch`]: binary search over the sorted distinct edge
//!   capacities with an O(n+m) reachability test per probe.
//!
//! A vertex with `cmx = 0` and no parent link is unreachable; a vertex
//! reached through a 0-capacity edge keeps a parent link, so the two cases
//! stay distinguishable.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, INF};

/// Per-vertex bottleneck labels from one solver run.
#[derive(Debug, Clone)]
pub struct CapacityLabels {
    /// Best bottleneck value per vertex (0-based by vertex index).
    /// Sources hold `INF`.
    pub cmx: Vec<i64>,
    /// Predecessor vertex and edge index of one optimal path, absent for
    /// sources and unreachable vertices.
    pub parent: Vec<Option<(VertexId, usize)>>,
    pub sources: Vec<VertexId>,
}

impl CapacityLabels {
    pub fn capacity(&self, v: VertexId) -> i64 {
        self.cmx[v.ix()]
    }

    pub fn is_source(&self, v: VertexId) -> bool {
        self.sources.contains(&v)
    }

    /// A vertex is reachable iff it is a source or carries a parent link.
    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.is_source(v) || self.parent[v.ix()].is_some()
    }

    /// Reconstruct one optimal path from a source to `v`.
    pub fn path_to(&self, v: VertexId) -> Option<Vec<VertexId>> {
        if !self.is_reachable(v) {
            return None;
        }
        let mut path = vec![v];
        let mut cur = v;
        while let Some((p, _)) = self.parent[cur.ix()] {
            cur = p;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Result of a single-pair query: the bottleneck value plus one witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BottleneckPath {
    pub capacity: i64,
    pub path: Vec<VertexId>,
}

/// A rooted multicast tree; `capacity` is the minimum capacity of its edges
/// (`INF` when the tree has no edges).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MulticastTree {
    pub root: VertexId,
    /// `(parent, child, capacity)` triples, sorted by child id.
    pub tree_edges: Vec<(VertexId, VertexId, i64)>,
    pub capacity: i64,
}

fn checked_sources(g: &Graph, sources: &[VertexId]) -> Result<Vec<VertexId>> {
    if sources.is_empty() {
        return Err(Error::arg("source set must not be empty"));
    }
    let mut out: Vec<VertexId> = Vec::new();
    for &s in sources {
        g.check_vertex(s)?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Modified Dijkstra for maximum-capacity paths from a source set.
///
/// Requires a directed graph; convert undirected inputs with
/// [`crate::graph::to_directed`] first.
pub fn max_capacity_dijkstra(
    g: &Graph,
    sources: &[VertexId],
    capacity_column: usize,
) -> Result<CapacityLabels> {
    if !g.directed() {
        return Err(Error::arg("max_capacity_dijkstra expects a directed graph"));
    }
    g.check_column(capacity_column)?;
    let sources = checked_sources(g, sources)?;

    let n = g.n();
    let mut cmx = vec![0i64; n];
    let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut expanded = vec![false; n];
    // Max-heap on capacity; ties pop the smallest vertex id first.
    let mut heap: BinaryHeap<(i64, Reverse<usize>)> = BinaryHeap::new();
    for &s in &sources {
        cmx[s.ix()] = INF;
        reached[s.ix()] = true;
        heap.push((INF, Reverse(s.ix())));
    }

    while let Some((cap, Reverse(ix))) = heap.pop() {
        if expanded[ix] || cap != cmx[ix] {
            continue;
        }
        expanded[ix] = true;
        for oe in g.out_edges(VertexId::from_ix(ix)) {
            let jx = oe.to.ix();
            let cand = cmx[ix].min(g.weight(oe.edge, capacity_column));
            if cand > cmx[jx] || !reached[jx] {
                cmx[jx] = cand;
                parent[jx] = Some((VertexId::from_ix(ix), oe.edge));
                reached[jx] = true;
                heap.push((cand, Reverse(jx)));
            }
        }
    }

    Ok(CapacityLabels { cmx, parent, sources })
}

/// Doubly-linked bucket lists over capacity values, one list per value.
struct BucketLists {
    head: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
    /// Bucket each vertex currently sits in, or `NONE`.
    at: Vec<usize>,
}

const NONE: usize = usize::MAX;

impl BucketLists {
    fn new(n: usize, buckets: usize) -> Self {
        BucketLists {
            head: vec![NONE; buckets],
            next: vec![NONE; n],
            prev: vec![NONE; n],
            at: vec![NONE; n],
        }
    }

    fn remove(&mut self, v: usize) {
        let b = self.at[v];
        if b == NONE {
            return;
        }
        let (p, nx) = (self.prev[v], self.next[v]);
        if p == NONE {
            self.head[b] = nx;
        } else {
            self.next[p] = nx;
        }
        if nx != NONE {
            self.prev[nx] = p;
        }
        self.at[v] = NONE;
    }

    fn push_front(&mut self, b: usize, v: usize) {
        debug_assert_eq!(self.at[v], NONE);
        let h = self.head[b];
        self.next[v] = h;
        self.prev[v] = NONE;
        if h != NONE {
            self.prev[h] = v;
        }
        self.head[b] = v;
        self.at[v] = b;
    }

    fn pop_front(&mut self, b: usize) -> Option<usize> {
        let v = self.head[b];
        if v == NONE {
            return None;
        }
        self.remove(v);
        Some(v)
    }
}

/// Bucket-sweep variant for integer capacities in `[0, capmax]`.
///
/// With `lazy` set, updates push fresh bucket entries without deleting the
/// old ones; stale entries are recognized on extraction by comparing the
/// bucket value against the current label.
pub fn max_capacity_buckets(
    g: &Graph,
    sources: &[VertexId],
    capacity_column: usize,
    capmax: i64,
    lazy: bool,
) -> Result<CapacityLabels> {
    if !g.directed() {
        return Err(Error::arg("max_capacity_buckets expects a directed graph"));
    }
    g.check_column(capacity_column)?;
    if capmax < 0 {
        return Err(Error::arg("capmax must be non-negative"));
    }
    for e in g.edges() {
        let c = e.weights[capacity_column];
        if c < 0 || c > capmax {
            return Err(Error::arg(format!(
                "capacity {c} outside [0, {capmax}] on edge {} {}",
                e.u, e.v
            )));
        }
    }
    let sources = checked_sources(g, sources)?;

    let n = g.n();
    let capmax_u = capmax as usize;
    let mut cmx = vec![0i64; n];
    let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; n];
    let mut reached = vec![false; n];
    let mut expanded = vec![false; n];
    let mut is_source = vec![false; n];
    for &s in &sources {
        cmx[s.ix()] = INF;
        reached[s.ix()] = true;
        is_source[s.ix()] = true;
    }
    // Sources sit in the capmax bucket; their label is the INF sentinel.
    let bucket_of = |cmx: &[i64], v: usize| -> usize { cmx[v].min(capmax) as usize };

    let mut eager = BucketLists::new(n, capmax_u + 1);
    let mut lazy_buckets: Vec<Vec<usize>> = vec![Vec::new(); capmax_u + 1];
    if lazy {
        for v in (0..n).rev() {
            if is_source[v] {
                lazy_buckets[capmax_u].push(v);
            } else {
                lazy_buckets[0].push(v);
            }
        }
    } else {
        for v in (0..n).rev() {
            if is_source[v] {
                eager.push_front(capmax_u, v);
            } else {
                eager.push_front(0, v);
            }
        }
    }

    for c in (0..=capmax_u).rev() {
        loop {
            let v = if lazy { lazy_buckets[c].pop() } else { eager.pop_front(c) };
            let Some(v) = v else { break };
            if expanded[v] || bucket_of(&cmx, v) != c || !reached[v] {
                // Stale occurrence or a vertex never reached: skip.
                continue;
            }
            expanded[v] = true;
            for oe in g.out_edges(VertexId::from_ix(v)) {
                let j = oe.to.ix();
                let cand = cmx[v].min(g.weight(oe.edge, capacity_column));
                if cand > cmx[j] || !reached[j] {
                    if !lazy {
                        eager.remove(j);
                    }
                    cmx[j] = cand;
                    parent[j] = Some((VertexId::from_ix(v), oe.edge));
                    reached[j] = true;
                    let b = bucket_of(&cmx, j);
                    if lazy {
                        lazy_buckets[b].push(j);
                    } else {
                        eager.push_front(b, j);
                    }
                }
            }
        }
    }

    Ok(CapacityLabels { cmx, parent, sources })
}

/// Breadth-first reachability from `s` using only edges with capacity at
/// least `threshold`; returns the parent tree over reached vertices.
fn threshold_bfs(
    g: &Graph,
    s: VertexId,
    threshold: i64,
    column: usize,
) -> Vec<Option<(VertexId, usize)>> {
    let n = g.n();
    let mut parent: Vec<Option<(VertexId, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s.ix()] = true;
    let mut queue = VecDeque::new();
    queue.push_back(s.ix());
    while let Some(v) = queue.pop_front() {
        for oe in g.out_edges(VertexId::from_ix(v)) {
            if g.weight(oe.edge, column) < threshold {
                continue;
            }
            let j = oe.to.ix();
            if !seen[j] {
                seen[j] = true;
                parent[j] = Some((VertexId::from_ix(v), oe.edge));
                queue.push_back(j);
            }
        }
    }
    parent
}

fn bfs_reached(parent: &[Option<(VertexId, usize)>], s: VertexId, v: VertexId) -> bool {
    v == s || parent[v.ix()].is_some()
}

/// The subset of `targets` reachable from `s` using only edges whose
/// capacity (in `capacity_column`) is at least `threshold`, sorted by id.
pub fn feasibility_reachable(
    g: &Graph,
    threshold: i64,
    s: VertexId,
    targets: &[VertexId],
    capacity_column: usize,
) -> Result<Vec<VertexId>> {
    g.check_vertex(s)?;
    for &t in targets {
        g.check_vertex(t)?;
    }
    g.check_column(capacity_column)?;
    let parent = threshold_bfs(g, s, threshold, capacity_column);
    let mut out: Vec<VertexId> = targets
        .iter()
        .copied()
        .filter(|&t| bfs_reached(&parent, s, t))
        .collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Sorted distinct capacity values of one weight column.
fn distinct_caps(g: &Graph, column: usize) -> Vec<i64> {
    let mut caps: Vec<i64> = g.edges().iter().map(|e| e.weights[column]).collect();
    caps.sort_unstable();
    caps.dedup();
    caps
}

/// Binary-search strategy for a single (s, t) pair. Candidate capacities are
/// the sorted distinct edge capacities; each probe is a linear-time
/// reachability test. Returns `None` when `t` is unreachable from `s`.
pub fn max_capacity_bsearch(
    g: &Graph,
    s: VertexId,
    t: VertexId,
    capacity_column: usize,
) -> Result<Option<BottleneckPath>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    g.check_column(capacity_column)?;
    if s == t {
        return Ok(Some(BottleneckPath { capacity: INF, path: vec![s] }));
    }
    let reach =
        |th: i64| -> Vec<Option<(VertexId, usize)>> { threshold_bfs(g, s, th, capacity_column) };
    if !bfs_reached(&reach(0), s, t) {
        return Ok(None);
    }
    let caps = distinct_caps(g, capacity_column);
    // Largest candidate capacity that keeps t reachable.
    let (mut lo, mut hi) = (0usize, caps.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if bfs_reached(&reach(caps[mid]), s, t) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let best = caps[lo];
    let parent = reach(best);
    debug_assert!(bfs_reached(&parent, s, t));
    let mut path = vec![t];
    let mut cur = t;
    while let Some((p, _)) = parent[cur.ix()] {
        cur = p;
        path.push(cur);
    }
    path.reverse();
    debug_assert_eq!(path[0], s);
    Ok(Some(BottleneckPath { capacity: best, path }))
}

/// Union of the label paths from `s` to every destination, assembled in
/// O(n) by marking: each walk stops at the first previously marked vertex.
pub fn multicast_tree_from_labels(
    g: &Graph,
    labels: &CapacityLabels,
    s: VertexId,
    destinations: &[VertexId],
    capacity_column: usize,
) -> Result<MulticastTree> {
    g.check_vertex(s)?;
    g.check_column(capacity_column)?;
    if labels.sources.as_slice() != [s] {
        return Err(Error::arg("labels must be computed with the single source s"));
    }
    if labels.cmx.len() != g.n() {
        return Err(Error::arg("labels do not match the graph"));
    }
    for &d in destinations {
        g.check_vertex(d)?;
        if !labels.is_reachable(d) {
            return Err(Error::UnreachableDestination { vertex: d.0 });
        }
    }

    let mut capacity = INF;
    for &d in destinations {
        capacity = capacity.min(labels.capacity(d));
    }

    let mut marked = vec![false; g.n()];
    marked[s.ix()] = true;
    let mut tree_edges: Vec<(VertexId, VertexId, i64)> = Vec::new();
    for &d in destinations {
        let mut cur = d;
        while !marked[cur.ix()] {
            marked[cur.ix()] = true;
            let (p, e) = labels.parent[cur.ix()].expect("reachable non-source has a parent");
            tree_edges.push((p, cur, g.weight(e, capacity_column)));
            cur = p;
        }
    }
    tree_edges.sort_unstable_by_key(|&(_, child, _)| child);
    debug_assert_eq!(
        capacity,
        tree_edges.iter().map(|&(_, _, c)| c).min().unwrap_or(INF)
    );
    Ok(MulticastTree { root: s, tree_edges, capacity })
}

/// Binary-search multicast tree: find the best threshold keeping every
/// destination reachable, take the BFS tree at that threshold, then prune
/// non-destination leaves bottom-up.
pub fn multicast_tree_bsearch(
    g: &Graph,
    s: VertexId,
    destinations: &[VertexId],
    capacity_column: usize,
) -> Result<MulticastTree> {
    g.check_vertex(s)?;
    g.check_column(capacity_column)?;
    for &d in destinations {
        g.check_vertex(d)?;
    }
    if destinations.iter().all(|&d| d == s) {
        return Ok(MulticastTree { root: s, tree_edges: Vec::new(), capacity: INF });
    }

    let first_unreachable = |parent: &[Option<(VertexId, usize)>]| -> Option<VertexId> {
        destinations.iter().copied().find(|&d| !bfs_reached(parent, s, d))
    };
    let base = threshold_bfs(g, s, 0, capacity_column);
    if let Some(d) = first_unreachable(&base) {
        return Err(Error::UnreachableDestination { vertex: d.0 });
    }
    let caps = distinct_caps(g, capacity_column);
    let (mut lo, mut hi) = (0usize, caps.len() - 1);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if first_unreachable(&threshold_bfs(g, s, caps[mid], capacity_column)).is_none() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    let threshold = caps[lo];
    let parent = threshold_bfs(g, s, threshold, capacity_column);
    debug_assert!(first_unreachable(&parent).is_none());

    // BFS order: parents precede children, so a reverse sweep sees every
    // child before its parent (recursive leaf pruning, iteratively).
    let mut order: Vec<usize> = Vec::new();
    {
        let mut queue = VecDeque::new();
        let mut seen = vec![false; g.n()];
        seen[s.ix()] = true;
        queue.push_back(s.ix());
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for oe in g.out_edges(VertexId::from_ix(v)) {
                let j = oe.to.ix();
                if parent[j].map(|(p, e)| (p.ix(), e)) == Some((v, oe.edge)) && !seen[j] {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    let mut keep = vec![false; g.n()];
    keep[s.ix()] = true;
    for &d in destinations {
        keep[d.ix()] = true;
    }
    for &v in order.iter().rev() {
        if keep[v] {
            if let Some((p, _)) = parent[v] {
                keep[p.ix()] = true;
            }
        }
    }
    let mut tree_edges: Vec<(VertexId, VertexId, i64)> = Vec::new();
    let mut capacity = INF;
    for &v in &order {
        if !keep[v] {
            continue;
        }
        if let Some((p, e)) = parent[v] {
            let c = g.weight(e, capacity_column);
            capacity = capacity.min(c);
            tree_edges.push((p, VertexId::from_ix(v), c));
        }
    }
    tree_edges.sort_unstable_by_key(|&(_, child, _)| child);
    Ok(MulticastTree { root: s, tree_edges, capacity })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{parse_graph, to_directed};

    fn fixture() -> Graph {
        // Undirected 3-cycle with capacities 5, 2, 4.
        to_directed(&parse_graph("3 3 undirected 1\n1 2 5\n2 3 2\n1 3 4").unwrap())
    }

    #[test]
    fn dijkstra_single_arc() {
        let g = Graph::from_weighted_edges(2, true, &[(1, 2, 7)]).unwrap();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        assert_eq!(labels.capacity(VertexId(2)), 7);
        assert_eq!(labels.path_to(VertexId(2)).unwrap(), vec![VertexId(1), VertexId(2)]);
    }

    #[test]
    fn dijkstra_fixture() {
        // Best 1->3 bottleneck is the direct capacity-4 edge: the detour via
        // 2 is throttled to min(5, 2) = 2.
        let labels = max_capacity_dijkstra(&fixture(), &[VertexId(1)], 0).unwrap();
        assert_eq!(labels.capacity(VertexId(3)), 4);
        assert_eq!(labels.capacity(VertexId(2)), 5);
        assert_eq!(labels.capacity(VertexId(1)), INF);
        assert_eq!(labels.path_to(VertexId(3)).unwrap(), vec![VertexId(1), VertexId(3)]);
    }

    #[test]
    fn dijkstra_unreachable_has_no_parent() {
        let g = Graph::from_weighted_edges(2, true, &[]).unwrap();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        assert_eq!(labels.capacity(VertexId(2)), 0);
        assert!(!labels.is_reachable(VertexId(2)));
        assert!(labels.path_to(VertexId(2)).is_none());
    }

    #[test]
    fn dijkstra_zero_capacity_is_reachable() {
        let g = Graph::from_weighted_edges(3, true, &[(1, 2, 0), (2, 3, 5)]).unwrap();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        assert_eq!(labels.capacity(VertexId(2)), 0);
        assert!(labels.is_reachable(VertexId(2)));
        assert_eq!(labels.capacity(VertexId(3)), 0);
        assert_eq!(
            labels.path_to(VertexId(3)).unwrap(),
            vec![VertexId(1), VertexId(2), VertexId(3)]
        );
    }

    #[test]
    fn dijkstra_rejects_empty_sources() {
        assert!(max_capacity_dijkstra(&fixture(), &[], 0).is_err());
    }

    #[test]
    fn dijkstra_rejects_undirected() {
        let g = parse_graph("2 1 undirected 1\n1 2 3").unwrap();
        assert!(max_capacity_dijkstra(&g, &[VertexId(1)], 0).is_err());
    }

    #[test]
    fn buckets_match_dijkstra_on_fixture() {
        let g = fixture();
        let d = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        for lazy in [false, true] {
            let b = max_capacity_buckets(&g, &[VertexId(1)], 0, 5, lazy).unwrap();
            assert_eq!(b.cmx, d.cmx, "lazy={lazy}");
        }
    }

    #[test]
    fn buckets_uniform_capacities() {
        let g = Graph::from_weighted_edges(4, true, &[(1, 2, 9), (2, 3, 9), (1, 4, 9)]).unwrap();
        let b = max_capacity_buckets(&g, &[VertexId(1)], 0, 9, false).unwrap();
        for v in [2, 3, 4] {
            assert_eq!(b.capacity(VertexId(v)), 9);
        }
    }

    #[test]
    fn buckets_reject_out_of_range() {
        let g = Graph::from_weighted_edges(2, true, &[(1, 2, 7)]).unwrap();
        assert!(max_capacity_buckets(&g, &[VertexId(1)], 0, 5, false).is_err());
    }

    #[test]
    fn bsearch_fixture() {
        let got = max_capacity_bsearch(&fixture(), VertexId(1), VertexId(3), 0)
            .unwrap()
            .unwrap();
        assert_eq!(got.capacity, 4);
        assert_eq!(got.path.first(), Some(&VertexId(1)));
        assert_eq!(got.path.last(), Some(&VertexId(3)));
    }

    #[test]
    fn bsearch_self_pair() {
        let got = max_capacity_bsearch(&fixture(), VertexId(2), VertexId(2), 0)
            .unwrap()
            .unwrap();
        assert_eq!(got.capacity, INF);
        assert_eq!(got.path, vec![VertexId(2)]);
    }

    #[test]
    fn bsearch_disconnected() {
        let g = Graph::from_weighted_edges(2, true, &[]).unwrap();
        assert!(max_capacity_bsearch(&g, VertexId(1), VertexId(2), 0).unwrap().is_none());
    }

    #[test]
    fn feasibility_no_filtering() {
        let g = fixture();
        let all =
            feasibility_reachable(&g, 0, VertexId(1), &[VertexId(2), VertexId(3)], 0).unwrap();
        assert_eq!(all, vec![VertexId(2), VertexId(3)]);
    }

    #[test]
    fn feasibility_threshold_five() {
        let g = fixture();
        let got =
            feasibility_reachable(&g, 5, VertexId(1), &[VertexId(2), VertexId(3)], 0).unwrap();
        assert_eq!(got, vec![VertexId(2)]);
    }

    #[test]
    fn feasibility_above_max() {
        let g = fixture();
        let got = feasibility_reachable(
            &g,
            6,
            VertexId(1),
            &[VertexId(1), VertexId(2), VertexId(3)],
            0,
        )
        .unwrap();
        assert_eq!(got, vec![VertexId(1)]);
    }

    fn multicast_fixture() -> Graph {
        to_directed(&parse_graph("4 4 undirected 1\n1 2 5\n2 3 2\n1 3 4\n3 4 1").unwrap())
    }

    #[test]
    fn multicast_from_labels_fixture() {
        // Vertex 4 hangs off the cycle behind the capacity-1 edge, so any
        // tree reaching it has capacity 1; destination 2 contributes 5.
        let g = multicast_fixture();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        let tree =
            multicast_tree_from_labels(&g, &labels, VertexId(1), &[VertexId(2), VertexId(4)], 0)
                .unwrap();
        assert_eq!(tree.capacity, 1);
        assert_eq!(tree.root, VertexId(1));
        let children: Vec<usize> = tree.tree_edges.iter().map(|&(_, c, _)| c.0).collect();
        assert!(children.contains(&2) && children.contains(&4));
    }

    #[test]
    fn multicast_destination_is_source() {
        let g = multicast_fixture();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        let tree =
            multicast_tree_from_labels(&g, &labels, VertexId(1), &[VertexId(1)], 0).unwrap();
        assert_eq!(tree.capacity, INF);
        assert!(tree.tree_edges.is_empty());
    }

    #[test]
    fn multicast_forced_path() {
        let g = to_directed(&parse_graph("3 2 undirected 1\n1 2 5\n2 3 2").unwrap());
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        let tree =
            multicast_tree_from_labels(&g, &labels, VertexId(1), &[VertexId(3)], 0).unwrap();
        assert_eq!(tree.capacity, 2);
        assert_eq!(
            tree.tree_edges,
            vec![(VertexId(1), VertexId(2), 5), (VertexId(2), VertexId(3), 2)]
        );
    }

    #[test]
    fn multicast_unreachable_destination_named() {
        let g = Graph::from_weighted_edges(3, true, &[(1, 2, 4)]).unwrap();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        let err =
            multicast_tree_from_labels(&g, &labels, VertexId(1), &[VertexId(2), VertexId(3)], 0)
                .unwrap_err();
        match err {
            Error::UnreachableDestination { vertex } => assert_eq!(vertex, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn multicast_bsearch_matches_labels_variant() {
        let g = multicast_fixture();
        let labels = max_capacity_dijkstra(&g, &[VertexId(1)], 0).unwrap();
        let a =
            multicast_tree_from_labels(&g, &labels, VertexId(1), &[VertexId(2), VertexId(4)], 0)
                .unwrap();
        let b = multicast_tree_bsearch(&g, VertexId(1), &[VertexId(2), VertexId(4)], 0).unwrap();
        assert_eq!(a.capacity, b.capacity);
        // No non-destination leaf survives pruning.
        let mut has_child = std::collections::HashSet::new();
        for &(p, _, _) in &b.tree_edges {
            has_child.insert(p);
        }
        for &(_, c, _) in &b.tree_edges {
            if !has_child.contains(&c) {
                assert!(c == VertexId(2) || c == VertexId(4), "leaf {c} is not a destination");
            }
        }
    }

    #[test]
    fn multicast_bsearch_star() {
        let g = to_directed(&parse_graph("4 3 undirected 1\n1 2 3\n1 3 5\n1 4 2").unwrap());
        let tree =
            multicast_tree_bsearch(&g, VertexId(1), &[VertexId(2), VertexId(3), VertexId(4)], 0)
                .unwrap();
        assert_eq!(tree.tree_edges.len(), 3);
        assert_eq!(tree.capacity, 2);
    }

    #[test]
    fn multicast_bsearch_source_only() {
        let g = multicast_fixture();
        let tree = multicast_tree_bsearch(&g, VertexId(1), &[VertexId(1)], 0).unwrap();
        assert_eq!(tree.capacity, INF);
        assert!(tree.tree_edges.is_empty());
    }
}
