//! Generalized optimal paths over multi-component edge weights.
//!
//! Each of the k weight columns carries its own aggregator from
//! {min, max, sum}; the optimization direction is derived per component
//! (maximize what min aggregates, minimize what max or sum aggregate).
//! Weight vectors compare lexicographically: the first differing component
//! decides under its own direction.
//!
//! [`generalized_dijkstra`] runs the label-setting procedure literally: one
//! vector label per vertex, lazy decrease-key, re-insertion on improvement.
//! For specs where a min or max aggregator is followed by further
//! components, prefix-optimality can fail (the clamped component may tie
//! where the discarded prefix would have won); the label-setting answer is
//! then a valid path vector but not always the lexicographic optimum. The
//! guaranteed-exact class is all-sum prefixes with at most one trailing
//! min/max component; divergence elsewhere is measured by the test suite
//! rather than hidden.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{sat_add, Graph, VertexId, INF};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregator {
    Min,
    Max,
    Sum,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Ordered list of per-component aggregators with derived directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AggregatorSpec {
    aggs: Vec<Aggregator>,
}

impl AggregatorSpec {
    pub fn new(aggs: Vec<Aggregator>) -> Result<Self> {
        if aggs.is_empty() {
            return Err(Error::arg("aggregator spec must not be empty"));
        }
        Ok(AggregatorSpec { aggs })
    }

    /// Parse a comma list such as `min,sum` or `max,sum,min`. `+` is an
    /// accepted alias for `sum`.
    pub fn parse(s: &str) -> Result<Self> {
        let aggs = s
            .split(',')
            .map(|tok| match tok.trim() {
                "min" => Ok(Aggregator::Min),
                "max" => Ok(Aggregator::Max),
                "sum" | "+" => Ok(Aggregator::Sum),
                other => Err(Error::arg(format!("unknown aggregator {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        AggregatorSpec::new(aggs)
    }

    pub fn k(&self) -> usize {
        self.aggs.len()
    }

    pub fn aggregator(&self, i: usize) -> Aggregator {
        self.aggs[i]
    }

    /// Derived optimization direction: maximize min-aggregated components,
    /// minimize max- and sum-aggregated ones.
    pub fn direction(&self, i: usize) -> Direction {
        match self.aggs[i] {
            Aggregator::Min => Direction::Maximize,
            Aggregator::Max | Aggregator::Sum => Direction::Minimize,
        }
    }

    /// Empty-path vector: 0 for max/sum components, `INF` for min ones.
    pub fn seed(&self) -> Vec<i64> {
        self.aggs
            .iter()
            .map(|a| match a {
                Aggregator::Min => INF,
                Aggregator::Max | Aggregator::Sum => 0,
            })
            .collect()
    }

    /// Extend a path vector by one edge's weights.
    pub fn combine(&self, acc: &[i64], edge: &[i64]) -> Vec<i64> {
        self.aggs
            .iter()
            .enumerate()
            .map(|(i, a)| match a {
                Aggregator::Min => acc[i].min(edge[i]),
                Aggregator::Max => acc[i].max(edge[i]),
                Aggregator::Sum => sat_add(acc[i], edge[i]),
            })
            .collect()
    }

    /// Drop the first component (for the binary-search variant).
    fn tail(&self) -> AggregatorSpec {
        AggregatorSpec { aggs: self.aggs[1..].to_vec() }
    }

    fn cmp_unchecked(&self, a: &[i64], b: &[i64]) -> Ordering {
        for (i, (&x, &y)) in a.iter().zip(b).enumerate() {
            if x == y {
                continue;
            }
            return match self.direction(i) {
                Direction::Minimize => x.cmp(&y),
                Direction::Maximize => y.cmp(&x),
            };
        }
        Ordering::Equal
    }

    /// Sort key under which smaller means better: maximize-direction
    /// components are negated.
    fn order_key(&self, v: &[i64]) -> Vec<i64> {
        v.iter()
            .enumerate()
            .map(|(i, &x)| match self.direction(i) {
                Direction::Minimize => x,
                Direction::Maximize => -x,
            })
            .collect()
    }
}

/// Compare two weight vectors under a spec. `Less` means `a` is better.
pub fn lex_compare(spec: &AggregatorSpec, a: &[i64], b: &[i64]) -> Result<Ordering> {
    if a.len() != spec.k() || b.len() != spec.k() {
        return Err(Error::arg(format!(
            "vector arity mismatch: spec has {} components, got {} and {}",
            spec.k(),
            a.len(),
            b.len()
        )));
    }
    Ok(spec.cmp_unchecked(a, b))
}

/// Per-vertex results of the generalized algorithm.
#[derive(Debug, Clone)]
pub struct LexLabels {
    pub spec: AggregatorSpec,
    /// Best vector per vertex, `None` when unreached.
    pub vectors: Vec<Option<Vec<i64>>>,
    pub parents: Vec<Option<(VertexId, usize)>>,
    pub sources: Vec<VertexId>,
}

impl LexLabels {
    pub fn vector(&self, v: VertexId) -> Option<&[i64]> {
        self.vectors[v.ix()].as_deref()
    }

    pub fn path_to(&self, v: VertexId) -> Option<Vec<VertexId>> {
        self.vectors[v.ix()].as_ref()?;
        let mut path = vec![v];
        let mut cur = v;
        while let Some((p, _)) = self.parents[cur.ix()] {
            cur = p;
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

/// Dijkstra over lexicographically ordered weight vectors: extract the best
/// vector, relax outgoing edges with the per-component aggregators,
/// re-insert on improvement (lazy decrease-key). Equal vectors never
/// replace an existing parent; queue ties break by vertex id.
pub fn generalized_dijkstra(
    g: &Graph,
    spec: &AggregatorSpec,
    sources: &[VertexId],
) -> Result<LexLabels> {
    if !g.directed() {
        return Err(Error::arg("generalized_dijkstra expects a directed graph"));
    }
    if g.weight_arity() != spec.k() {
        return Err(Error::arg(format!(
            "graph arity {} does not match spec arity {}",
            g.weight_arity(),
            spec.k()
        )));
    }
    if sources.is_empty() {
        return Err(Error::arg("source set must not be empty"));
    }
    for &s in sources {
        g.check_vertex(s)?;
    }

    let n = g.n();
    let mut vectors: Vec<Option<Vec<i64>>> = vec![None; n];
    let mut parents: Vec<Option<(VertexId, usize)>> = vec![None; n];
    // Min-heap via Reverse on (order_key, vertex).
    let mut heap: BinaryHeap<std::cmp::Reverse<(Vec<i64>, usize)>> = BinaryHeap::new();
    let seed = spec.seed();
    let mut srcs = Vec::new();
    for &s in sources {
        if !srcs.contains(&s) {
            srcs.push(s);
        }
        if vectors[s.ix()].is_none() {
            vectors[s.ix()] = Some(seed.clone());
            heap.push(std::cmp::Reverse((spec.order_key(&seed), s.ix())));
        }
    }

    while let Some(std::cmp::Reverse((key, v))) = heap.pop() {
        let cur = vectors[v].as_ref().expect("queued vertex has a label");
        if key != spec.order_key(cur) {
            continue; // stale entry
        }
        let cur = cur.clone();
        for oe in g.out_edges(VertexId::from_ix(v)) {
            let w_new = spec.combine(&cur, &g.edges()[oe.edge].weights);
            let better = match &vectors[oe.to.ix()] {
                None => true,
                Some(old) => spec.cmp_unchecked(&w_new, old) == Ordering::Less,
            };
            if better {
                let key = spec.order_key(&w_new);
                vectors[oe.to.ix()] = Some(w_new);
                parents[oe.to.ix()] = Some((VertexId::from_ix(v), oe.edge));
                heap.push(std::cmp::Reverse((key, oe.to.ix())));
            }
        }
    }

    Ok(LexLabels { spec: spec.clone(), vectors, parents, sources: srcs })
}

/// Binary search on the first component (which must be min- or max-
/// aggregated), using the (k-1)-component algorithm on the filtered
/// subgraph as the feasibility test. Returns the full weight vector and a
/// witness path, or `None` when `t` is unreachable at every threshold.
pub fn first_component_bsearch(
    g: &Graph,
    spec: &AggregatorSpec,
    s: VertexId,
    t: VertexId,
) -> Result<Option<(Vec<i64>, Vec<VertexId>)>> {
    if !g.directed() {
        return Err(Error::arg("first_component_bsearch expects a directed graph"));
    }
    if spec.k() < 2 {
        return Err(Error::arg("first_component_bsearch needs at least 2 components"));
    }
    if spec.aggregator(0) == Aggregator::Sum {
        return Err(Error::arg("the first component must be min- or max-aggregated"));
    }
    if g.weight_arity() != spec.k() {
        return Err(Error::arg(format!(
            "graph arity {} does not match spec arity {}",
            g.weight_arity(),
            spec.k()
        )));
    }
    g.check_vertex(s)?;
    g.check_vertex(t)?;

    if s == t {
        return Ok(Some((spec.seed(), vec![s])));
    }

    let tail = spec.tail();
    let maximize_first = spec.direction(0) == Direction::Maximize;
    // Keep edges at or above (below) the candidate first-component value.
    let filtered = |threshold: i64| -> Graph {
        let edges = g.edges().iter().filter_map(|e| {
            let keep = if maximize_first {
                e.weights[0] >= threshold
            } else {
                e.weights[0] <= threshold
            };
            keep.then(|| (e.u.0, e.v.0, e.weights[1..].to_vec()))
        });
        Graph::from_edges(g.n(), true, spec.k() - 1, edges).expect("filtered edges stay valid")
    };
    let feasible = |threshold: i64| -> Result<LexLabels> {
        generalized_dijkstra(&filtered(threshold), &tail, &[s])
    };

    let mut candidates: Vec<i64> = g.edges().iter().map(|e| e.weights[0]).collect();
    candidates.sort_unstable();
    candidates.dedup();
    if candidates.is_empty() {
        return Ok(None); // no edges at all, and s != t
    }

    // The loosest threshold admits every edge; bail out early if even that
    // cannot reach t.
    let loosest = if maximize_first { 0 } else { *candidates.last().unwrap() };
    if feasible(loosest)?.vector(t).is_none() {
        return Ok(None);
    }

    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    if maximize_first {
        // Largest candidate that keeps t reachable.
        while lo < hi {
            let mid = (lo + hi).div_ceil(2);
            if feasible(candidates[mid])?.vector(t).is_some() {
                lo = mid;
            } else {
                hi = mid - 1;
            }
        }
    } else {
        // Smallest candidate that makes t reachable.
        while lo < hi {
            let mid = (lo + hi) / 2;
            if feasible(candidates[mid])?.vector(t).is_some() {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
    }
    let best = candidates[lo];
    let labels = feasible(best)?;
    let rest = labels.vector(t).expect("feasible threshold reaches t").to_vec();
    let path = labels.path_to(t).expect("feasible threshold reaches t");
    let mut vector = Vec::with_capacity(spec.k());
    vector.push(best);
    vector.extend(rest);
    Ok(Some((vector, path)))
}
