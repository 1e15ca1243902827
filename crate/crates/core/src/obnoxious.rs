//! Farthest-distance routing away from obnoxious vertices.
//!
//! `dmin(v)` is the shortest-path distance from `v` to its nearest
//! obnoxious vertex (multi-source Dijkstra, or BFS when all lengths are 1).
//! Two reductions turn "maximize the minimum dmin along the path" into a
//! maximum-capacity problem:
//!
//! - [`transform_split`]: vertex splitting into `u_in`/`u_out` with a
//!   capacity-`dmin(u)` arc between them and infinite-capacity arcs along
//!   the original edges.
//! - [`transform_edge_min`]: keep the topology, set each edge's capacity to
//!   `min(dmin(u), dmin(v))`.
//!
//! The composed solvers and the preprocessed index work on the edge-min
//! form. The safety of the zero-edge path `s = t` is defined as `dmin(s)`
//! at this module's level; the raw index keeps its own empty-path `INF`
//! convention.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, VecDeque};

use crate::bottleneck::{max_capacity_dijkstra, multicast_tree_from_labels, MulticastTree};
use crate::error::{Error, Result};
use crate::graph::{sat_add, to_directed, Graph, VertexId, INF};
use crate::index::{build_index, BottleneckIndex};

/// Per-vertex distance to the nearest obnoxious vertex.
#[derive(Debug, Clone)]
pub struct DminLabels {
    /// Indexed by vertex; `INF` when no obnoxious vertex reaches it.
    pub dmin: Vec<i64>,
    pub obnoxious: Vec<VertexId>,
}

impl DminLabels {
    pub fn of(&self, v: VertexId) -> i64 {
        self.dmin[v.ix()]
    }
}

fn checked_obnoxious(g: &Graph, obnoxious: &[VertexId]) -> Result<Vec<VertexId>> {
    if obnoxious.is_empty() {
        return Err(Error::arg("obnoxious set must not be empty"));
    }
    let mut out = Vec::new();
    for &o in obnoxious {
        g.check_vertex(o)?;
        if !out.contains(&o) {
            out.push(o);
        }
    }
    Ok(out)
}

/// Multi-source Dijkstra from the obnoxious set over an undirected graph.
pub fn compute_dmin(g: &Graph, obnoxious: &[VertexId], length_column: usize) -> Result<DminLabels> {
    if g.directed() {
        return Err(Error::arg("compute_dmin expects an undirected graph"));
    }
    g.check_column(length_column)?;
    let obnoxious = checked_obnoxious(g, obnoxious)?;

    let n = g.n();
    let mut dmin = vec![INF; n];
    let mut heap: BinaryHeap<Reverse<(i64, usize)>> = BinaryHeap::new();
    for &o in &obnoxious {
        dmin[o.ix()] = 0;
        heap.push(Reverse((0, o.ix())));
    }
    while let Some(Reverse((d, v))) = heap.pop() {
        if d != dmin[v] {
            continue;
        }
        for oe in g.out_edges(VertexId::from_ix(v)) {
            let nd = sat_add(d, g.weight(oe.edge, length_column));
            let j = oe.to.ix();
            if nd < dmin[j] {
                dmin[j] = nd;
                heap.push(Reverse((nd, j)));
            }
        }
    }
    Ok(DminLabels { dmin, obnoxious })
}

/// BFS specialization for unit lengths; must agree with [`compute_dmin`]
/// whenever every length equals 1.
pub fn compute_dmin_bfs(g: &Graph, obnoxious: &[VertexId]) -> Result<DminLabels> {
    if g.directed() {
        return Err(Error::arg("compute_dmin_bfs expects an undirected graph"));
    }
    let obnoxious = checked_obnoxious(g, obnoxious)?;
    let n = g.n();
    let mut dmin = vec![INF; n];
    let mut queue = VecDeque::new();
    for &o in &obnoxious {
        dmin[o.ix()] = 0;
        queue.push_back(o.ix());
    }
    while let Some(v) = queue.pop_front() {
        for oe in g.out_edges(VertexId::from_ix(v)) {
            let j = oe.to.ix();
            if dmin[j] == INF {
                dmin[j] = dmin[v] + 1;
                queue.push_back(j);
            }
        }
    }
    Ok(DminLabels { dmin, obnoxious })
}

/// Vertex-splitting reduction: vertex `u` becomes `u_in = u` and
/// `u_out = u + n`, joined by an arc of capacity `dmin(u)`; each undirected
/// edge (u, v) becomes arcs `(u_out, v_in)` and `(v_out, u_in)` of infinite
/// capacity. Widest `s_in -> t_out` paths equal farthest-path safety values.
pub fn transform_split(g: &Graph, dmin: &DminLabels) -> Graph {
    let n = g.n();
    let mut edges: Vec<(usize, usize, Vec<i64>)> = Vec::with_capacity(n + 2 * g.edges().len());
    for v in 1..=n {
        edges.push((v, v + n, vec![dmin.dmin[v - 1]]));
    }
    for e in g.edges() {
        edges.push((e.u.0 + n, e.v.0, vec![INF]));
        edges.push((e.v.0 + n, e.u.0, vec![INF]));
    }
    Graph::from_edges(2 * n, true, 1, edges).expect("split graph is structurally valid")
}

/// Edge-min reduction: same topology, one capacity column holding
/// `min(dmin(u), dmin(v))` per edge.
pub fn transform_edge_min(g: &Graph, dmin: &DminLabels) -> Graph {
    let edges = g
        .edges()
        .iter()
        .map(|e| (e.u.0, e.v.0, vec![dmin.of(e.u).min(dmin.of(e.v))]));
    Graph::from_edges(g.n(), false, 1, edges).expect("edge-min graph is structurally valid")
}

/// Farthest path from `s` to `t`: the safety value is the maximum over
/// s-t paths of the minimum `dmin` over the path's vertices (endpoints
/// included). `None` when `t` is unreachable. A zero-edge path has safety
/// `dmin(s)`.
pub fn farthest_path(
    g: &Graph,
    obnoxious: &[VertexId],
    s: VertexId,
    t: VertexId,
    length_column: usize,
) -> Result<Option<(i64, Vec<VertexId>)>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let dmin = compute_dmin(g, obnoxious, length_column)?;
    if s == t {
        return Ok(Some((dmin.of(s), vec![s])));
    }
    let capacitated = to_directed(&transform_edge_min(g, &dmin));
    let labels = max_capacity_dijkstra(&capacitated, &[s], 0)?;
    if !labels.is_reachable(t) {
        return Ok(None);
    }
    let path = labels.path_to(t).expect("reachable vertex has a path");
    Ok(Some((labels.capacity(t), path)))
}

/// Farthest multicast tree rooted at `s`: the edge-min reduction composed
/// with the label-based tree construction. The tree's capacity is the
/// safety of its worst destination; a destination equal to `s` contributes
/// `dmin(s)`.
pub fn farthest_tree(
    g: &Graph,
    obnoxious: &[VertexId],
    s: VertexId,
    destinations: &[VertexId],
    length_column: usize,
) -> Result<MulticastTree> {
    g.check_vertex(s)?;
    let dmin = compute_dmin(g, obnoxious, length_column)?;
    if destinations.iter().all(|&d| d == s) {
        return Ok(MulticastTree { root: s, tree_edges: Vec::new(), capacity: dmin.of(s) });
    }
    let capacitated = to_directed(&transform_edge_min(g, &dmin));
    let labels = max_capacity_dijkstra(&capacitated, &[s], 0)?;
    let mut tree = multicast_tree_from_labels(&capacitated, &labels, s, destinations, 0)?;
    // Every path capacity already accounts for dmin(s) through the first
    // edge, so only an explicit `s` destination needs the override.
    if destinations.contains(&s) {
        tree.capacity = tree.capacity.min(dmin.of(s));
    }
    Ok(tree)
}

/// Preprocess farthest-distance queries: a bottleneck index over the
/// edge-min reduction. Queries answer safety values; `query(u, u)` keeps
/// the index's raw empty-path `INF` convention.
pub fn build_farthest_index(
    g: &Graph,
    obnoxious: &[VertexId],
    length_column: usize,
) -> Result<BottleneckIndex> {
    let dmin = compute_dmin(g, obnoxious, length_column)?;
    build_index(&transform_edge_min(g, &dmin), 0)
}
