//! Multi-objective path enumeration and non-dominated fronts.
//!
//! Every edge carries p integer costs in `[0, VMAX]`; per-objective update
//! functions fold the previous score tuple and the edge cost tuple into the
//! next score. The reachable-state hyper-graph over `(vertex, s_1..s_p)`
//! tuples is explored breadth-first; states leaving `[0, VMAX]` on any
//! coordinate are discarded (and counted). Fronts keep the tuples at
//! destination vertices that no other destination tuple beats on all p
//! objectives; the strict all-objectives rule is the default, with weak
//! domination (better-or-equal everywhere, strictly better once) as an
//! option.
//!
//! When the last objective is monotone, [`monotone_sp`] drops it from the
//! state key and tracks its best value per `(vertex, s_1..s_{p-1})` state
//! with a Dijkstra-style expansion whose edges depend on the value being
//! computed.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BinaryHeap, HashMap, VecDeque};

use crate::error::{Error, Result};
use crate::graph::{sat_add, Graph, VertexId, INF};

/// Default cap on enumerated states.
pub const DEFAULT_STATE_BUDGET: usize = 20_000_000;

type UpdateFn = Box<dyn Fn(&[i64], &[i64]) -> i64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preference {
    /// `better(a, b)` iff `a < b`.
    Smaller,
    /// `better(a, b)` iff `a > b`.
    Larger,
}

impl Preference {
    pub fn better(self, a: i64, b: i64) -> bool {
        match self {
            Preference::Smaller => a < b,
            Preference::Larger => a > b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Sum,
    Max,
    Min,
}

/// One objective: empty-path seed, update function over (previous scores,
/// edge costs), and the comparator direction.
pub struct Objective {
    pub seed: i64,
    pub update: UpdateFn,
    pub better: Preference,
}

impl Objective {
    /// Standard objective reading cost column `col`: additive, running max,
    /// or running min (seeded with `INF`).
    pub fn standard(kind: ObjectiveKind, col: usize, better: Preference) -> Self {
        let (seed, update): (i64, UpdateFn) = match kind {
            ObjectiveKind::Sum => (0, Box::new(move |prev, edge| sat_add(prev[col], edge[col]))),
            ObjectiveKind::Max => (0, Box::new(move |prev, edge| prev[col].max(edge[col]))),
            ObjectiveKind::Min => (INF, Box::new(move |prev, edge| prev[col].min(edge[col]))),
        };
        Objective { seed, update, better }
    }

    /// Natural comparator for a kind: minimize sums and maxima, maximize
    /// minima.
    pub fn natural(kind: ObjectiveKind, col: usize) -> Self {
        let better = match kind {
            ObjectiveKind::Sum | ObjectiveKind::Max => Preference::Smaller,
            ObjectiveKind::Min => Preference::Larger,
        };
        Objective::standard(kind, col, better)
    }

    pub fn custom(seed: i64, better: Preference, update: impl Fn(&[i64], &[i64]) -> i64 + 'static) -> Self {
        Objective { seed, update: Box::new(update), better }
    }
}

/// Cost model: p objectives over a p-column graph, a `VMAX` range bound and
/// a state budget.
pub struct CostModel {
    pub objectives: Vec<Objective>,
    pub vmax: i64,
    pub state_budget: usize,
}

impl CostModel {
    pub fn new(objectives: Vec<Objective>, vmax: i64) -> Result<Self> {
        if objectives.is_empty() {
            return Err(Error::arg("need at least one objective"));
        }
        if vmax < 0 {
            return Err(Error::arg("VMAX must be non-negative"));
        }
        Ok(CostModel { objectives, vmax, state_budget: DEFAULT_STATE_BUDGET })
    }

    /// Standard model with natural comparators per kind.
    pub fn standard(kinds: &[ObjectiveKind], vmax: i64) -> Result<Self> {
        let objectives =
            kinds.iter().enumerate().map(|(i, &k)| Objective::natural(k, i)).collect();
        CostModel::new(objectives, vmax)
    }

    pub fn p(&self) -> usize {
        self.objectives.len()
    }

    pub fn seeds(&self) -> Vec<i64> {
        self.objectives.iter().map(|o| o.seed).collect()
    }

    fn step(&self, prev: &[i64], edge: &[i64]) -> Vec<i64> {
        self.objectives.iter().map(|o| (o.update)(prev, edge)).collect()
    }

    /// A non-seed coordinate outside `[0, VMAX]` leaves the model.
    fn in_range(&self, scores: &[i64]) -> bool {
        scores.iter().all(|&s| s >= 0 && s <= self.vmax)
    }

    fn check_graph(&self, g: &Graph) -> Result<()> {
        if !g.directed() {
            return Err(Error::arg("cost models operate on directed graphs"));
        }
        if g.weight_arity() != self.p() {
            return Err(Error::arg(format!(
                "graph arity {} does not match {} objectives",
                g.weight_arity(),
                self.p()
            )));
        }
        let budget_bound = (self.vmax as u128 + 1)
            .checked_pow(self.p() as u32)
            .and_then(|s| s.checked_mul(g.n() as u128));
        match budget_bound {
            Some(b) if b <= self.state_budget as u128 => Ok(()),
            _ => Err(Error::Capability(format!(
                "n * (VMAX+1)^p exceeds the {}-state budget",
                self.state_budget
            ))),
        }
    }
}

/// Domination rule for front extraction: the strict rule requires a strict
/// win on every objective; the weak rule requires no loss anywhere and a
/// strict win somewhere.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DominationRule {
    #[default]
    Strict,
    Weak,
}

impl DominationRule {
    fn dominates(self, model: &CostModel, a: &[i64], b: &[i64]) -> bool {
        match self {
            DominationRule::Strict => {
                model.objectives.iter().enumerate().all(|(j, o)| o.better.better(a[j], b[j]))
            }
            DominationRule::Weak => {
                let mut strict = false;
                for (j, o) in model.objectives.iter().enumerate() {
                    if o.better.better(a[j], b[j]) {
                        strict = true;
                    } else if a[j] != b[j] {
                        return false;
                    }
                }
                strict
            }
        }
    }
}

/// All states reachable from the seeded sources, with predecessor links.
#[derive(Debug, Clone)]
pub struct StateSet {
    /// `(vertex, scores)` in BFS discovery order.
    pub states: Vec<(VertexId, Vec<i64>)>,
    /// Predecessor state id and edge index, absent for seeds.
    pub pred: Vec<Option<(usize, usize)>>,
    /// Expansions dropped because a coordinate left `[0, VMAX]`.
    pub discarded: u64,
}

impl StateSet {
    /// States sitting at one vertex.
    pub fn at_vertex(&self, v: VertexId) -> impl Iterator<Item = (usize, &[i64])> {
        self.states
            .iter()
            .enumerate()
            .filter(move |(_, (sv, _))| *sv == v)
            .map(|(i, (_, sc))| (i, sc.as_slice()))
    }

    /// Vertex path from a seed to a state.
    pub fn path(&self, mut id: usize) -> Vec<VertexId> {
        let mut out = vec![self.states[id].0];
        while let Some((p, _)) = self.pred[id] {
            id = p;
            out.push(self.states[id].0);
        }
        out.reverse();
        out
    }

    /// Edge index sequence from a seed to a state.
    pub fn edge_path(&self, mut id: usize) -> Vec<usize> {
        let mut out = Vec::new();
        while let Some((p, e)) = self.pred[id] {
            out.push(e);
            id = p;
        }
        out.reverse();
        out
    }
}

/// Breadth-first enumeration of the reachable score states. Seeds are
/// `(source, per-objective seed)`; a marked state is never re-enqueued.
pub fn enumerate_reachable(g: &Graph, model: &CostModel, sources: &[VertexId]) -> Result<StateSet> {
    model.check_graph(g)?;
    if sources.is_empty() {
        return Err(Error::arg("source set must not be empty"));
    }
    for &s in sources {
        g.check_vertex(s)?;
    }

    let mut states: Vec<(VertexId, Vec<i64>)> = Vec::new();
    let mut pred: Vec<Option<(usize, usize)>> = Vec::new();
    let mut index: HashMap<(usize, Vec<i64>), usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut discarded = 0u64;
    let seeds = model.seeds();
    for &s in sources {
        if let Entry::Vacant(e) = index.entry((s.ix(), seeds.clone())) {
            e.insert(states.len());
            queue.push_back(states.len());
            states.push((s, seeds.clone()));
            pred.push(None);
        }
    }
    while let Some(id) = queue.pop_front() {
        let (v, scores) = states[id].clone();
        for oe in g.out_edges(v) {
            let next = model.step(&scores, &g.edges()[oe.edge].weights);
            if !model.in_range(&next) {
                discarded += 1;
                continue;
            }
            if states.len() >= model.state_budget {
                return Err(Error::Capability(format!(
                    "reachable states exceed the {}-state budget",
                    model.state_budget
                )));
            }
            if let Entry::Vacant(e) = index.entry((oe.to.ix(), next.clone())) {
                e.insert(states.len());
                queue.push_back(states.len());
                states.push((oe.to, next));
                pred.push(Some((id, oe.edge)));
            }
        }
    }
    Ok(StateSet { states, pred, discarded })
}

/// A non-dominated cost tuple with one witness path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontEntry {
    pub scores: Vec<i64>,
    pub vertex: VertexId,
    pub path: Vec<VertexId>,
    pub edges: Vec<usize>,
}

/// Extract the non-dominated front over the destination vertices. Output is
/// sorted lexicographically by score tuple; identical tuples collapse into
/// one entry whose witness is the earliest discovered state.
pub fn pareto_front(
    states: &StateSet,
    destinations: &[VertexId],
    model: &CostModel,
    rule: DominationRule,
) -> Result<Vec<FrontEntry>> {
    for &d in destinations {
        if d.0 == 0 {
            return Err(Error::arg("invalid destination"));
        }
    }
    let mut candidates: Vec<(usize, &[i64])> = Vec::new();
    let mut dests = destinations.to_vec();
    dests.sort_unstable();
    dests.dedup();
    for &d in &dests {
        candidates.extend(states.at_vertex(d));
    }
    let mut survivors: BTreeMap<Vec<i64>, usize> = BTreeMap::new();
    'outer: for &(id, scores) in &candidates {
        for &(_, other) in &candidates {
            if rule.dominates(model, other, scores) {
                continue 'outer;
            }
        }
        survivors.entry(scores.to_vec()).or_insert(id);
    }
    Ok(survivors
        .into_iter()
        .map(|(scores, id)| FrontEntry {
            scores,
            vertex: states.states[id].0,
            path: states.path(id),
            edges: states.edge_path(id),
        })
        .collect())
}

/// Best-last-objective table keyed by `(vertex, s_1..s_{p-1})`.
#[derive(Debug, Clone)]
pub struct SpTable {
    /// Deterministic iteration order; values are the best p-th objective.
    pub sp: BTreeMap<(VertexId, Vec<i64>), i64>,
    pub discarded: u64,
}

impl SpTable {
    /// Assemble full p-tuples at the destinations and filter to the front.
    pub fn front(
        &self,
        destinations: &[VertexId],
        model: &CostModel,
        rule: DominationRule,
    ) -> Vec<Vec<i64>> {
        let mut dests = destinations.to_vec();
        dests.sort_unstable();
        dests.dedup();
        let mut tuples: Vec<Vec<i64>> = Vec::new();
        for ((v, prefix), &sp) in &self.sp {
            if dests.binary_search(v).is_ok() {
                let mut t = prefix.clone();
                t.push(sp);
                tuples.push(t);
            }
        }
        let mut out: Vec<Vec<i64>> = Vec::new();
        'outer: for t in &tuples {
            for other in &tuples {
                if rule.dominates(model, other, t) {
                    continue 'outer;
                }
            }
            if !out.contains(t) {
                out.push(t.clone());
            }
        }
        out.sort();
        out
    }
}

/// Monotone-last-objective optimization: states drop the p-th score and
/// keep its best value per state instead. Expansion order follows the p-th
/// objective's comparator, so each state settles when popped; successor
/// states depend on the settled value (the hyper-graph is discovered on the
/// fly). Requires `f_p` monotone in the p-th argument.
pub fn monotone_sp(g: &Graph, model: &CostModel, sources: &[VertexId]) -> Result<SpTable> {
    model.check_graph(g)?;
    if model.p() < 2 {
        return Err(Error::arg("monotone_sp needs at least two objectives"));
    }
    if sources.is_empty() {
        return Err(Error::arg("source set must not be empty"));
    }
    for &s in sources {
        g.check_vertex(s)?;
    }
    let p = model.p();
    let last = &model.objectives[p - 1];
    // Order keys so that better sp values pop first.
    let order_key = |sp: i64| -> i64 {
        match last.better {
            Preference::Smaller => sp,
            Preference::Larger => -sp,
        }
    };

    let mut best: HashMap<(usize, Vec<i64>), i64> = HashMap::new();
    let mut heap: BinaryHeap<std::cmp::Reverse<(i64, usize, Vec<i64>)>> = BinaryHeap::new();
    let seeds = model.seeds();
    let seed_prefix = seeds[..p - 1].to_vec();
    let seed_sp = seeds[p - 1];
    for &s in sources {
        if let Entry::Vacant(e) = best.entry((s.ix(), seed_prefix.clone())) {
            e.insert(seed_sp);
            heap.push(std::cmp::Reverse((order_key(seed_sp), s.ix(), seed_prefix.clone())));
        }
    }
    let mut discarded = 0u64;
    let mut full = vec![0i64; p];
    while let Some(std::cmp::Reverse((key_sp, v, prefix))) = heap.pop() {
        let cur = *best.get(&(v, prefix.clone())).expect("queued state has a value");
        if key_sp != order_key(cur) {
            continue; // stale
        }
        full[..p - 1].copy_from_slice(&prefix);
        full[p - 1] = cur;
        for oe in g.out_edges(VertexId::from_ix(v)) {
            let weights = &g.edges()[oe.edge].weights;
            let next = model.step(&full, weights);
            if !model.in_range(&next) {
                discarded += 1;
                continue;
            }
            if best.len() >= model.state_budget {
                return Err(Error::Capability(format!(
                    "sp states exceed the {}-state budget",
                    model.state_budget
                )));
            }
            let (next_prefix, next_sp) = (next[..p - 1].to_vec(), next[p - 1]);
            let key = (oe.to.ix(), next_prefix.clone());
            let improved = match best.get(&key) {
                None => true,
                Some(&old) => last.better.better(next_sp, old),
            };
            if improved {
                best.insert(key, next_sp);
                heap.push(std::cmp::Reverse((order_key(next_sp), oe.to.ix(), next_prefix)));
            }
        }
    }

    let sp = best
        .into_iter()
        .map(|((v, prefix), val)| ((VertexId::from_ix(v), prefix), val))
        .collect();
    Ok(SpTable { sp, discarded })
}
