//! Offline aggregate connectivity under edge and vertex deletions.
//!
//! The whole operation script is known up front, so the replay runs it
//! backwards: apply every deletion, aggregate the terminal components, then
//! walk the script in reverse turning deletions into insertions (union by
//! rank with path compression) while recording query answers, which come
//! out in forward order at the end.
//!
//! Two aggregate levels: `ccagg` folds vertex weights into a component
//! weight, `gagg` folds component weights into the graph weight and must be
//! invertible so merges can retire the two old component weights and admit
//! the merged one. min and max are therefore rejected for `gagg`. Sums use
//! wrapping arithmetic (exact inverses even on overflow); products divide
//! exactly and track zero factors separately.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// Commutative aggregate over vertex weights within a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CcAgg {
    Sum,
    Min,
    Max,
    Product,
    Xor,
}

impl CcAgg {
    pub fn apply(self, a: i64, b: i64) -> i64 {
        match self {
            CcAgg::Sum => a.wrapping_add(b),
            CcAgg::Min => a.min(b),
            CcAgg::Max => a.max(b),
            CcAgg::Product => a.wrapping_mul(b),
            CcAgg::Xor => a ^ b,
        }
    }
}

impl FromStr for CcAgg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "+" => Ok(CcAgg::Sum),
            "min" => Ok(CcAgg::Min),
            "max" => Ok(CcAgg::Max),
            "product" | "*" => Ok(CcAgg::Product),
            "xor" => Ok(CcAgg::Xor),
            other => Err(Error::arg(format!("unknown component aggregate {other:?}"))),
        }
    }
}

/// Commutative aggregate over component weights with an exact inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GAgg {
    Sum,
    Product,
    Xor,
}

impl FromStr for GAgg {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum" | "+" => Ok(GAgg::Sum),
            "product" | "*" => Ok(GAgg::Product),
            "xor" => Ok(GAgg::Xor),
            "min" | "max" => Err(Error::arg(
                "min/max have no inverse and cannot serve as the graph aggregate",
            )),
            other => Err(Error::arg(format!("unknown graph aggregate {other:?}"))),
        }
    }
}

/// Running graph weight under an invertible aggregate. Products keep a
/// zero-factor count so removal divides only by non-zero weights.
#[derive(Debug, Clone)]
struct WgTracker {
    agg: GAgg,
    acc: i64,
    zeros: usize,
}

impl WgTracker {
    fn new(agg: GAgg) -> Self {
        let acc = match agg {
            GAgg::Sum | GAgg::Xor => 0,
            GAgg::Product => 1,
        };
        WgTracker { agg, acc, zeros: 0 }
    }

    fn add(&mut self, w: i64) {
        match self.agg {
            GAgg::Sum => self.acc = self.acc.wrapping_add(w),
            GAgg::Xor => self.acc ^= w,
            GAgg::Product => {
                if w == 0 {
                    self.zeros += 1;
                } else {
                    self.acc = self.acc.wrapping_mul(w);
                }
            }
        }
    }

    fn remove(&mut self, w: i64) {
        match self.agg {
            GAgg::Sum => self.acc = self.acc.wrapping_sub(w),
            GAgg::Xor => self.acc ^= w,
            GAgg::Product => {
                if w == 0 {
                    debug_assert!(self.zeros > 0);
                    self.zeros -= 1;
                } else {
                    debug_assert_eq!(self.acc % w, 0, "product inverse must divide exactly");
                    self.acc /= w;
                }
            }
        }
    }

    fn value(&self) -> i64 {
        if self.agg == GAgg::Product && self.zeros > 0 {
            0
        } else {
            self.acc
        }
    }
}

/// Component and graph aggregates used by one replay.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AggregatorPair {
    pub ccagg: CcAgg,
    pub gagg: GAgg,
}

impl AggregatorPair {
    pub fn new(ccagg: CcAgg, gagg: GAgg) -> Self {
        AggregatorPair { ccagg, gagg }
    }

    /// Sampled sanity check: ccagg commutes and associates, gagg's inverse
    /// really inverts. Deterministic probe values.
    pub fn self_check(&self) -> Result<()> {
        let samples: [i64; 6] = [-7, -1, 0, 1, 3, 12];
        for &a in &samples {
            for &b in &samples {
                if self.ccagg.apply(a, b) != self.ccagg.apply(b, a) {
                    return Err(Error::arg("component aggregate is not commutative"));
                }
                let mut t = WgTracker::new(self.gagg);
                t.add(a);
                t.add(b);
                t.remove(b);
                if t.value() != {
                    let mut only_a = WgTracker::new(self.gagg);
                    only_a.add(a);
                    only_a.value()
                } {
                    return Err(Error::arg("graph aggregate inverse fails"));
                }
                for &c in &samples {
                    let ab_c = self.ccagg.apply(self.ccagg.apply(a, b), c);
                    let a_bc = self.ccagg.apply(a, self.ccagg.apply(b, c));
                    if ab_c != a_bc {
                        return Err(Error::arg("component aggregate is not associative"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// One scripted operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptOp {
    DeleteEdge(VertexId, VertexId),
    DeleteVertex(VertexId),
    QueryComponent(VertexId),
    QueryGraph,
}

/// An ordered deletion/query script.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationScript {
    pub ops: Vec<ScriptOp>,
}

impl OperationScript {
    /// One op per line: `delete u v`, `deletevertex x`, `qcomp x`, `qgraph`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut ops = Vec::new();
        for (line_no, line) in text.lines().enumerate().map(|(i, l)| (i + 1, l)) {
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            let vertex = |s: &str| -> Result<VertexId> {
                s.parse::<usize>()
                    .map(VertexId)
                    .map_err(|_| Error::parse(line_no, format!("bad vertex {s:?}")))
            };
            let op = match (f[0], f.len()) {
                ("delete", 3) => ScriptOp::DeleteEdge(vertex(f[1])?, vertex(f[2])?),
                ("deletevertex", 2) => ScriptOp::DeleteVertex(vertex(f[1])?),
                ("qcomp", 2) => ScriptOp::QueryComponent(vertex(f[1])?),
                ("qgraph", 1) => ScriptOp::QueryGraph,
                _ => return Err(Error::parse(line_no, format!("bad operation {t:?}"))),
            };
            ops.push(op);
        }
        Ok(OperationScript { ops })
    }

    pub fn query_count(&self) -> usize {
        self.ops
            .iter()
            .filter(|op| matches!(op, ScriptOp::QueryComponent(_) | ScriptOp::QueryGraph))
            .count()
    }
}

/// Structural simulation resolving each operation, shared by validation and
/// the replay's forward pass.
enum Resolved {
    DelEdge { edge: usize },
    DelVertex { x: usize, killed: Vec<usize> },
    QComp { x: usize },
    QGraph,
}

fn resolve_script(g: &Graph, script: &OperationScript) -> Result<Vec<Resolved>> {
    let n = g.n();
    let mut vertex_alive = vec![true; n];
    let mut edge_alive = vec![true; g.edges().len()];
    // Incident edge lists (undirected: each edge listed at both endpoints).
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.u.ix()].push(i);
        if e.v != e.u {
            incident[e.v.ix()].push(i);
        }
    }
    let mut out = Vec::with_capacity(script.ops.len());
    for (index, op) in script.ops.iter().enumerate() {
        let check = |v: VertexId| -> Result<usize> {
            if v.0 == 0 || v.0 > n {
                return Err(Error::Script {
                    index,
                    msg: format!("vertex {v} out of range 1..={n}"),
                });
            }
            if !vertex_alive[v.ix()] {
                return Err(Error::Script { index, msg: format!("vertex {v} was deleted") });
            }
            Ok(v.ix())
        };
        match *op {
            ScriptOp::DeleteEdge(u, v) => {
                let ui = check(u)?;
                let vi = check(v)?;
                // Smallest-index live edge joining u and v, either way round.
                let edge = incident[ui]
                    .iter()
                    .copied()
                    .filter(|&e| edge_alive[e])
                    .find(|&e| {
                        let ed = &g.edges()[e];
                        (ed.u.ix() == ui && ed.v.ix() == vi) || (ed.u.ix() == vi && ed.v.ix() == ui)
                    });
                match edge {
                    Some(e) => {
                        edge_alive[e] = false;
                        out.push(Resolved::DelEdge { edge: e });
                    }
                    None => {
                        return Err(Error::Script {
                            index,
                            msg: format!("no live edge between {u} and {v}"),
                        })
                    }
                }
            }
            ScriptOp::DeleteVertex(x) => {
                let xi = check(x)?;
                let killed: Vec<usize> =
                    incident[xi].iter().copied().filter(|&e| edge_alive[e]).collect();
                for &e in &killed {
                    edge_alive[e] = false;
                }
                vertex_alive[xi] = false;
                out.push(Resolved::DelVertex { x: xi, killed });
            }
            ScriptOp::QueryComponent(x) => {
                out.push(Resolved::QComp { x: check(x)? });
            }
            ScriptOp::QueryGraph => out.push(Resolved::QGraph),
        }
    }
    Ok(out)
}

/// Check a script against the graph without running any aggregation.
/// `Ok` or the first violation (operation index plus reason).
pub fn validate_script(g: &Graph, script: &OperationScript) -> Result<()> {
    resolve_script(g, script).map(|_| ())
}

/// Union-find with rank and optional path compression.
struct Dsu {
    parent: Vec<usize>,
    rank: Vec<u32>,
    compress: bool,
}

impl Dsu {
    fn new(n: usize, compress: bool) -> Self {
        Dsu { parent: (0..n).collect(), rank: vec![0; n], compress }
    }

    fn find(&mut self, v: usize) -> usize {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        if self.compress {
            let mut cur = v;
            while self.parent[cur] != root {
                let next = self.parent[cur];
                self.parent[cur] = root;
                cur = next;
            }
        }
        root
    }

    /// Union by rank; returns (winner, loser) roots or None when already
    /// joined.
    fn union(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (winner, loser) = match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Equal => {
                self.rank[rb] += 1;
                (rb, ra)
            }
        };
        self.parent[loser] = winner;
        Some((winner, loser))
    }
}

/// Replay a deletion/query script and answer every query, in script order.
pub fn run_offline(
    g: &Graph,
    weights: &[i64],
    script: &OperationScript,
    aggs: &AggregatorPair,
) -> Result<Vec<i64>> {
    run_offline_with(g, weights, script, aggs, true)
}

/// [`run_offline`] with explicit control over path compression. Answers
/// must not depend on the flag; it exists so tests can verify exactly that.
pub fn run_offline_with(
    g: &Graph,
    weights: &[i64],
    script: &OperationScript,
    aggs: &AggregatorPair,
    path_compression: bool,
) -> Result<Vec<i64>> {
    if g.directed() {
        return Err(Error::arg("offline connectivity expects an undirected graph"));
    }
    let n = g.n();
    if weights.len() != n {
        return Err(Error::arg(format!("expected {n} vertex weights, got {}", weights.len())));
    }
    aggs.self_check()?;
    let resolved = resolve_script(g, script)?;

    // Forward state after all deletions.
    let mut vertex_alive = vec![true; n];
    let mut edge_alive = vec![true; g.edges().len()];
    for r in &resolved {
        match r {
            Resolved::DelEdge { edge } => edge_alive[*edge] = false,
            Resolved::DelVertex { x, killed } => {
                vertex_alive[*x] = false;
                for &e in killed {
                    edge_alive[e] = false;
                }
            }
            _ => {}
        }
    }

    let mut dsu = Dsu::new(n, path_compression);
    for (i, e) in g.edges().iter().enumerate() {
        if edge_alive[i] {
            dsu.union(e.u.ix(), e.v.ix());
        }
    }
    // Component weights live at the representatives.
    let mut wcc: Vec<Option<i64>> = vec![None; n];
    for v in 0..n {
        if !vertex_alive[v] {
            continue;
        }
        let r = dsu.find(v);
        wcc[r] = Some(match wcc[r] {
            None => weights[v],
            Some(acc) => aggs.ccagg.apply(acc, weights[v]),
        });
    }
    let mut wg = WgTracker::new(aggs.gagg);
    for v in 0..n {
        if let Some(w) = wcc[v] {
            if dsu.find(v) == v {
                wg.add(w);
            }
        }
    }

    let insert_edge = |dsu: &mut Dsu, wcc: &mut Vec<Option<i64>>, wg: &mut WgTracker, e: usize| {
        let ed = &g.edges()[e];
        if let Some((winner, loser)) = dsu.union(ed.u.ix(), ed.v.ix()) {
            let a = wcc[winner].expect("live component has a weight");
            let b = wcc[loser].expect("live component has a weight");
            // Retire both old component weights, admit the merged one.
            wg.remove(a);
            wg.remove(b);
            let merged = aggs.ccagg.apply(a, b);
            wcc[winner] = Some(merged);
            wcc[loser] = None;
            wg.add(merged);
        }
    };

    // Backward pass; answers are collected reversed.
    let mut answers_rev: Vec<i64> = Vec::with_capacity(script.query_count());
    for r in resolved.iter().rev() {
        match r {
            Resolved::QGraph => answers_rev.push(wg.value()),
            Resolved::QComp { x } => {
                let root = dsu.find(*x);
                answers_rev.push(wcc[root].expect("queried vertex is alive"));
            }
            Resolved::DelEdge { edge } => {
                insert_edge(&mut dsu, &mut wcc, &mut wg, *edge);
            }
            Resolved::DelVertex { x, killed } => {
                // Re-create the vertex as a singleton, then restore its
                // incident edges in reverse deletion order.
                debug_assert_eq!(dsu.find(*x), *x);
                wcc[*x] = Some(weights[*x]);
                wg.add(weights[*x]);
                for &e in killed.iter().rev() {
                    insert_edge(&mut dsu, &mut wcc, &mut wg, e);
                }
            }
        }
        #[cfg(debug_assertions)]
        if n <= 1024 {
            let mut check = WgTracker::new(aggs.gagg);
            for v in 0..n {
                if wcc[v].is_some() && dsu.find(v) == v {
                    check.add(wcc[v].unwrap());
                }
            }
            debug_assert_eq!(check.value(), wg.value(), "wg drifted from its components");
        }
    }
    answers_rev.reverse();
    Ok(answers_rev)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn triangle() -> Graph {
        parse_graph("3 3 undirected 1\n1 2 1\n1 3 1\n2 3 1").unwrap()
    }

    fn sum_sum() -> AggregatorPair {
        AggregatorPair::new(CcAgg::Sum, GAgg::Sum)
    }

    #[test]
    fn triangle_script() {
        // Deleting (1,2) leaves the triangle connected via 3; deleting
        // (1,3) isolates vertex 1.
        let script = OperationScript::parse(
            "delete 1 2\nqcomp 1\ndelete 1 3\nqcomp 1\nqgraph",
        )
        .unwrap();
        let answers = run_offline(&triangle(), &[1, 2, 3], &script, &sum_sum()).unwrap();
        assert_eq!(answers, vec![6, 1, 6]);
    }

    #[test]
    fn query_before_any_deletion() {
        let script = OperationScript::parse("qgraph").unwrap();
        let answers = run_offline(&triangle(), &[1, 2, 3], &script, &sum_sum()).unwrap();
        assert_eq!(answers, vec![6]);
    }

    #[test]
    fn vertex_deletion_script() {
        let script = OperationScript::parse("deletevertex 3\nqcomp 1\nqgraph").unwrap();
        let answers = run_offline(&triangle(), &[1, 2, 3], &script, &sum_sum()).unwrap();
        assert_eq!(answers, vec![3, 3]);
    }

    #[test]
    fn validate_double_edge_deletion() {
        let script = OperationScript::parse("delete 1 2\ndelete 1 2").unwrap();
        match validate_script(&triangle(), &script) {
            Err(Error::Script { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn validate_ok_fixture() {
        let script =
            OperationScript::parse("delete 1 2\nqcomp 1\ndelete 1 3\nqcomp 1\nqgraph").unwrap();
        validate_script(&triangle(), &script).unwrap();
    }

    #[test]
    fn validate_query_on_deleted_vertex() {
        let script = OperationScript::parse("deletevertex 2\nqcomp 2").unwrap();
        match validate_script(&triangle(), &script) {
            Err(Error::Script { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected violation, got {other:?}"),
        }
    }

    #[test]
    fn parallel_edges_delete_one_at_a_time() {
        let g = parse_graph("2 2 undirected 1\n1 2 1\n1 2 1").unwrap();
        let script =
            OperationScript::parse("delete 1 2\nqcomp 1\ndelete 1 2\nqcomp 1").unwrap();
        let answers = run_offline(&g, &[5, 7], &script, &sum_sum()).unwrap();
        assert_eq!(answers, vec![12, 5]);
    }

    #[test]
    fn xor_style_inverse() {
        let aggs = AggregatorPair::new(CcAgg::Xor, GAgg::Xor);
        let script = OperationScript::parse("qgraph\ndelete 1 2\nqgraph").unwrap();
        let answers = run_offline(&triangle(), &[1, 2, 4], &script, &aggs).unwrap();
        // Connected: one component 1^2^4 = 7; still connected after one
        // triangle edge goes.
        assert_eq!(answers, vec![7, 7]);
    }

    #[test]
    fn product_with_zero_weights() {
        let aggs = AggregatorPair::new(CcAgg::Sum, GAgg::Product);
        let script = OperationScript::parse("qgraph\ndelete 1 2\ndelete 1 3\nqgraph").unwrap();
        // Vertex weights sum to component weights; after isolating vertex 1
        // the components weigh 0 and 5, product 0.
        let answers = run_offline(&triangle(), &[0, 2, 3], &script, &aggs).unwrap();
        assert_eq!(answers, vec![5, 0]);
    }

    #[test]
    fn compression_flag_does_not_change_answers() {
        let g = parse_graph(
            "6 7 undirected 1\n1 2 1\n2 3 1\n3 4 1\n4 5 1\n5 6 1\n6 1 1\n2 5 1",
        )
        .unwrap();
        let script = OperationScript::parse(
            "qgraph\ndelete 2 5\nqcomp 5\ndeletevertex 1\nqcomp 2\nqgraph\ndelete 3 4\nqcomp 4\nqgraph",
        )
        .unwrap();
        let w = [3, 1, 4, 1, 5, 9];
        for aggs in [sum_sum(), AggregatorPair::new(CcAgg::Max, GAgg::Sum)] {
            let with = run_offline_with(&g, &w, &script, &aggs, true).unwrap();
            let without = run_offline_with(&g, &w, &script, &aggs, false).unwrap();
            assert_eq!(with, without);
        }
    }

    #[test]
    fn gagg_rejects_min_max() {
        assert!("min".parse::<GAgg>().is_err());
        assert!("max".parse::<GAgg>().is_err());
        assert!("sum".parse::<GAgg>().is_ok());
    }

    #[test]
    fn script_parse_errors() {
        assert!(OperationScript::parse("remove 1 2").is_err());
        assert!(OperationScript::parse("delete 1").is_err());
        let s = OperationScript::parse("# comment\n\ndelete 1 2\nqgraph").unwrap();
        assert_eq!(s.ops.len(), 2);
        assert_eq!(s.query_count(), 1);
    }
}
