//! Graph representation, text parsing/serialization and the
//! directed/undirected transformations shared by all solvers.
//!
//! Vertices are 1-based everywhere in the public API and in text formats.
//! Weights are non-negative 64-bit integers; `INF` is a reserved sentinel
//! strictly greater than any real path aggregate and all arithmetic
//! saturates at it.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Sentinel standing in for +infinity. Strictly greater than every
/// representable path aggregate; saturating arithmetic keeps it absorbing.
pub const INF: i64 = i64::MAX;

/// Addition that treats `INF` as absorbing and never wraps.
pub fn sat_add(a: i64, b: i64) -> i64 {
    if a == INF || b == INF {
        INF
    } else {
        a.saturating_add(b)
    }
}

/// Render a weight, mapping the sentinel to `inf`.
pub fn fmt_value(v: i64) -> String {
    if v == INF {
        "inf".to_string()
    } else {
        v.to_string()
    }
}

/// 1-based vertex identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub usize);

impl VertexId {
    /// 0-based index into per-vertex arrays.
    pub(crate) fn ix(self) -> usize {
        self.0 - 1
    }

    pub(crate) fn from_ix(ix: usize) -> Self {
        VertexId(ix + 1)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: VertexId,
    pub v: VertexId,
    /// 1-based ordinal among edges sharing the same (u, v) orientation;
    /// disambiguates parallel edges.
    pub eid: u32,
    /// One entry per weight column; length equals the graph's arity.
    pub weights: Vec<i64>,
}

/// Adjacency entry: the edge index into `Graph::edges` plus the endpoint
/// reached when leaving the list owner along it.
#[derive(Debug, Clone, Copy)]
pub struct OutEdge {
    pub to: VertexId,
    pub edge: usize,
}

/// Immutable vertex/edge container. Undirected edges are stored once in the
/// edge list but appear in both endpoint adjacency lists; directed edges
/// appear only in the tail's list. Parallel edges and self-loops are legal.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    weight_arity: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<OutEdge>>,
}

impl Graph {
    /// Build a graph from 1-based endpoint pairs with full weight rows.
    pub fn from_edges(
        n: usize,
        directed: bool,
        weight_arity: usize,
        edges: impl IntoIterator<Item = (usize, usize, Vec<i64>)>,
    ) -> Result<Graph> {
        if weight_arity == 0 {
            return Err(Error::arg("weight arity must be at least 1"));
        }
        let mut g = Graph {
            n,
            directed,
            weight_arity,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        };
        let mut eid_counter: HashMap<(usize, usize), u32> = HashMap::new();
        for (u, v, weights) in edges {
            g.push_edge(u, v, weights, &mut eid_counter)?;
        }
        Ok(g)
    }

    /// Convenience constructor for single-weight graphs.
    pub fn from_weighted_edges(
        n: usize,
        directed: bool,
        edges: &[(usize, usize, i64)],
    ) -> Result<Graph> {
        Graph::from_edges(n, directed, 1, edges.iter().map(|&(u, v, w)| (u, v, vec![w])))
    }

    fn push_edge(
        &mut self,
        u: usize,
        v: usize,
        weights: Vec<i64>,
        eid_counter: &mut HashMap<(usize, usize), u32>,
    ) -> Result<()> {
        if u == 0 || u > self.n {
            return Err(Error::arg(format!("vertex {u} out of range 1..={}", self.n)));
        }
        if v == 0 || v > self.n {
            return Err(Error::arg(format!("vertex {v} out of range 1..={}", self.n)));
        }
        if weights.len() != self.weight_arity {
            return Err(Error::arg(format!(
                "expected {} weights, got {}",
                self.weight_arity,
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|&&w| w < 0) {
            return Err(Error::arg(format!("negative weight {w}")));
        }
        let eid = eid_counter.entry((u, v)).or_insert(0);
        *eid += 1;
        let idx = self.edges.len();
        self.edges.push(Edge {
            u: VertexId(u),
            v: VertexId(v),
            eid: *eid,
            weights,
        });
        self.adj[u - 1].push(OutEdge { to: VertexId(v), edge: idx });
        if !self.directed && u != v {
            self.adj[v - 1].push(OutEdge { to: VertexId(u), edge: idx });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn weight_arity(&self) -> usize {
        self.weight_arity
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: VertexId) -> &[OutEdge] {
        &self.adj[v.ix()]
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (1..=self.n).map(VertexId)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 == 0 || v.0 > self.n {
            Err(Error::arg(format!("vertex {v} out of range 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    pub fn check_column(&self, column: usize) -> Result<()> {
        if column >= self.weight_arity {
            Err(Error::arg(format!(
                "weight column {column} out of range for arity {}",
                self.weight_arity
            )))
        } else {
            Ok(())
        }
    }

    /// Weight of one edge in one column.
    pub fn weight(&self, edge: usize, column: usize) -> i64 {
        self.edges[edge].weights[column]
    }

    /// Verify that the adjacency lists and the edge list describe the same
    /// edge multiset. Used by tests; cheap enough to run on any graph.
    pub fn consistency_check(&self) -> std::result::Result<(), String> {
        let mut from_adj: Vec<usize> = Vec::new();
        for (ix, list) in self.adj.iter().enumerate() {
            for oe in list {
                let e = &self.edges[oe.edge];
                let owner = VertexId::from_ix(ix);
                let ok = if self.directed {
                    e.u == owner && e.v == oe.to
                } else {
                    (e.u == owner && e.v == oe.to) || (e.v == owner && e.u == oe.to)
                };
                if !ok {
                    return Err(format!("adjacency of {owner} disagrees with edge {}", oe.edge));
                }
                from_adj.push(oe.edge);
            }
        }
        from_adj.sort_unstable();
        let mut expected: Vec<usize> = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            expected.push(i);
            if !self.directed && e.u != e.v {
                expected.push(i);
            }
        }
        if from_adj != expected {
            return Err("adjacency lists and edge list disagree".to_string());
        }
        Ok(())
    }
}

/// Parse the line-oriented edge-list format.
///
/// Header `n m directed|undirected arity`, then `m` lines `u v w1 [w2 ...]`.
/// Lines whose first non-blank character is `#` and blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| {
            let t = l.trim_start();
            !t.is_empty() && !t.starts_with('#')
        });

    let (header_no, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header line"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 4 {
        return Err(Error::parse(
            header_no,
            "header must be \"n m directed|undirected arity\"",
        ));
    }
    let n: usize = fields[0]
        .parse()
        .map_err(|_| Error::parse(header_no, format!("bad vertex count {:?}", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| Error::parse(header_no, format!("bad edge count {:?}", fields[1])))?;
    let directed = match fields[2] {
        "directed" => true,
        "undirected" => false,
        other => {
            return Err(Error::parse(
                header_no,
                format!("expected directed|undirected, got {other:?}"),
            ))
        }
    };
    let arity: usize = fields[3]
        .parse()
        .map_err(|_| Error::parse(header_no, format!("bad weight arity {:?}", fields[3])))?;
    if arity == 0 {
        return Err(Error::parse(header_no, "weight arity must be at least 1"));
    }

    let mut g = Graph {
        n,
        directed,
        weight_arity: arity,
        edges: Vec::with_capacity(m),
        adj: vec![Vec::new(); n],
    };
    let mut eid_counter: HashMap<(usize, usize), u32> = HashMap::new();
    let mut parsed = 0usize;
    for (line_no, line) in lines {
        if parsed == m {
            return Err(Error::parse(line_no, format!("expected exactly {m} edge lines")));
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(Error::parse(line_no, "edge line must be \"u v w1 [w2 ...]\""));
        }
        let u: usize = fields[0]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad vertex {:?}", fields[0])))?;
        let v: usize = fields[1]
            .parse()
            .map_err(|_| Error::parse(line_no, format!("bad vertex {:?}", fields[1])))?;
        let mut weights = Vec::with_capacity(arity);
        for f in &fields[2..] {
            let w: i64 = f
                .parse()
                .map_err(|_| Error::parse(line_no, format!("bad weight {f:?}")))?;
            weights.push(w);
        }
        g.push_edge(u, v, weights, &mut eid_counter)
            .map_err(|e| Error::parse(line_no, e.to_string()))?;
        parsed += 1;
    }
    if parsed != m {
        return Err(Error::parse(
            text.lines().count().max(1),
            format!("expected {m} edge lines, found {parsed}"),
        ));
    }
    Ok(g)
}

/// Inverse of [`parse_graph`] up to eid assignment.
pub fn serialize_graph(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{} {} {} {}\n",
        g.n,
        g.edges.len(),
        if g.directed { "directed" } else { "undirected" },
        g.weight_arity
    ));
    for e in &g.edges {
        out.push_str(&format!("{} {}", e.u, e.v));
        for w in &e.weights {
            out.push_str(&format!(" {w}"));
        }
        out.push('\n');
    }
    out
}

/// Replace every undirected edge by two opposite arcs carrying the same
/// weights. Directed input is returned unchanged.
pub fn to_directed(g: &Graph) -> Graph {
    if g.directed {
        return g.clone();
    }
    let mut out = Graph {
        n: g.n,
        directed: true,
        weight_arity: g.weight_arity,
        edges: Vec::with_capacity(2 * g.edges.len()),
        adj: vec![Vec::new(); g.n],
    };
    let mut eid_counter: HashMap<(usize, usize), u32> = HashMap::new();
    for e in &g.edges {
        out.push_edge(e.u.0, e.v.0, e.weights.clone(), &mut eid_counter)
            .expect("source edge already validated");
        out.push_edge(e.v.0, e.u.0, e.weights.clone(), &mut eid_counter)
            .expect("source edge already validated");
    }
    out
}
