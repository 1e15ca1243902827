//! Preprocessed maximum-capacity query index.
//!
//! Edges are processed in non-increasing capacity order through a
//! union-by-rank forest built *without* path compression, so every union
//! edge survives as a tree edge carrying the uniting capacity. A synthetic
//! super-root sits above every component root via capacity-0 edges. Queries
//! then reduce to walks in this forest:
//!
//! - [`BottleneckIndex::query_levelwise`] climbs both endpoints level by
//!   level and returns the minimum capacity crossed.
//! - [`BottleneckIndex::query_via_lca`] finds the LCA with ancestor jumps of
//!   length `k = ceil(sqrt(H))` and inspects only the two edges below the
//!   LCA; correct because capacities never increase on the way up.
//!
//! Two vertices in different components meet only at the super-root across
//! capacity-0 edges, so disconnected queries answer 0.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId, INF};

/// Rooted query forest. Real vertices are internal indices `0..n`; the
/// super-root is index `n`.
#[derive(Debug, Clone)]
pub struct BottleneckIndex {
    n: usize,
    parent: Vec<usize>,
    parent_cap: Vec<i64>,
    level: Vec<u32>,
    dfsnum: Vec<u32>,
    dfsmax: Vec<u32>,
    /// Ancestor `k` levels above, clamped at the super-root.
    anc2: Vec<usize>,
    /// Jump distance, `ceil(sqrt(height))`.
    k: u32,
    /// Maximum level over all nodes (super-root is level 0).
    height: u32,
}

/// Build the index from an undirected capacitated graph.
///
/// Ties in the capacity sort are broken by input order (stable sort); equal
/// subtree heights attach the first endpoint's root under the second's and
/// bump the height.
pub fn build_index(g: &Graph, capacity_column: usize) -> Result<BottleneckIndex> {
    if g.directed() {
        return Err(Error::arg("build_index expects an undirected graph"));
    }
    g.check_column(capacity_column)?;
    let n = g.n();

    let mut order: Vec<usize> = (0..g.edges().len()).collect();
    order.sort_by_key(|&e| std::cmp::Reverse(g.weight(e, capacity_column)));

    let mut parent: Vec<usize> = (0..n).collect();
    let mut parent_cap = vec![0i64; n];
    // Subtree height counted in vertices: singletons start at 1.
    let mut height = vec![1u32; n];

    // Plain walks, no path compression: tree edges must persist.
    let find = |parent: &[usize], mut v: usize| -> usize {
        while parent[v] != v {
            v = parent[v];
        }
        v
    };

    for e in order {
        let edge = &g.edges()[e];
        let ru = find(&parent, edge.u.ix());
        let rv = find(&parent, edge.v.ix());
        if ru == rv {
            continue;
        }
        let cap = edge.weights[capacity_column];
        if height[ru] < height[rv] {
            parent[ru] = rv;
            parent_cap[ru] = cap;
            height[rv] = height[rv].max(height[ru] + 1);
        } else if height[rv] < height[ru] {
            parent[rv] = ru;
            parent_cap[rv] = cap;
            height[ru] = height[ru].max(height[rv] + 1);
        } else {
            parent[ru] = rv;
            parent_cap[ru] = cap;
            height[rv] += 1;
        }
    }

    let index = finish_forest(n, parent, parent_cap);
    debug_assert!(index.monotone_cap_check().is_ok());
    Ok(index)
}

impl BottleneckIndex {
    /// Assemble an index from an explicit forest: `parents[v] == None` marks
    /// a component root. Slices are 0-indexed by vertex; ids are 1-based.
    ///
    /// Queries through [`Self::query_via_lca`] assume the builder's
    /// monotone-capacity invariant; arbitrary forests still answer LCA and
    /// level-wise walks correctly.
    pub fn from_forest(parents: &[Option<VertexId>], cap_to_parent: &[i64]) -> Result<Self> {
        let n = parents.len();
        if cap_to_parent.len() != n {
            return Err(Error::arg("parent and capacity slices differ in length"));
        }
        let mut parent: Vec<usize> = (0..n).collect();
        let mut parent_cap = vec![0i64; n];
        for v in 0..n {
            if let Some(p) = parents[v] {
                if p.0 == 0 || p.0 > n {
                    return Err(Error::arg(format!("parent {p} out of range")));
                }
                if p.ix() == v {
                    return Err(Error::arg(format!("vertex {} is its own parent", v + 1)));
                }
                parent[v] = p.ix();
                parent_cap[v] = cap_to_parent[v];
            }
        }
        // Cycle detection in O(n): 0 unknown, 1 on current walk, 2 cleared.
        let mut state = vec![0u8; n];
        let mut chain: Vec<usize> = Vec::new();
        for start in 0..n {
            let mut v = start;
            chain.clear();
            while state[v] == 0 && parent[v] != v {
                state[v] = 1;
                chain.push(v);
                v = parent[v];
                if state[v] == 1 {
                    return Err(Error::arg("parent links contain a cycle"));
                }
            }
            for &c in &chain {
                state[c] = 2;
            }
        }
        Ok(finish_forest(n, parent, parent_cap))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Maximum level over all nodes; the super-root has level 0.
    pub fn height(&self) -> u32 {
        self.height
    }

    /// Ancestor jump distance used by the LCA routine.
    pub fn jump(&self) -> u32 {
        self.k
    }

    /// Parent in the forest; `None` when the parent is the super-root.
    pub fn parent_of(&self, v: VertexId) -> Option<VertexId> {
        let p = self.parent[v.ix()];
        if p == self.n {
            None
        } else {
            Some(VertexId::from_ix(p))
        }
    }

    pub fn parent_cap_of(&self, v: VertexId) -> i64 {
        self.parent_cap[v.ix()]
    }

    pub fn level_of(&self, v: VertexId) -> u32 {
        self.level[v.ix()]
    }

    pub fn dfs_interval(&self, v: VertexId) -> (u32, u32) {
        (self.dfsnum[v.ix()], self.dfsmax[v.ix()])
    }

    fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v.0 == 0 || v.0 > self.n {
            Err(Error::arg(format!("vertex {v} out of range 1..={}", self.n)))
        } else {
            Ok(())
        }
    }

    fn level_at(&self, ix: usize) -> u32 {
        if ix == self.n {
            0
        } else {
            self.level[ix]
        }
    }

    fn cap_at(&self, ix: usize) -> i64 {
        if ix == self.n {
            0
        } else {
            self.parent_cap[ix]
        }
    }

    fn parent_at(&self, ix: usize) -> usize {
        if ix == self.n {
            self.n
        } else {
            self.parent[ix]
        }
    }

    fn dfsnum_at(&self, ix: usize) -> u32 {
        if ix == self.n {
            1
        } else {
            self.dfsnum[ix]
        }
    }

    fn interval_at(&self, ix: usize) -> (u32, u32) {
        if ix == self.n {
            (1, (self.n + 1) as u32)
        } else {
            (self.dfsnum[ix], self.dfsmax[ix])
        }
    }

    fn anc2_at(&self, ix: usize) -> usize {
        if ix == self.n {
            self.n
        } else {
            self.anc2[ix]
        }
    }

    /// Does the subtree interval of `anc` contain the dfs number of `v`?
    fn contains(&self, anc: usize, v: usize) -> bool {
        let (lo, hi) = self.interval_at(anc);
        let d = self.dfsnum_at(v);
        lo <= d && d <= hi
    }

    /// Level-by-level query: always advance the deeper walker, recording the
    /// minimum capacity crossed. `INF` for `u == v`, 0 across components.
    pub fn query_levelwise(&self, u: VertexId, v: VertexId) -> Result<i64> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(INF);
        }
        let (mut pu, mut pv) = (u.ix(), v.ix());
        let mut cap = INF;
        while pu != pv {
            if self.level_at(pu) > self.level_at(pv) {
                cap = cap.min(self.cap_at(pu));
                pu = self.parent_at(pu);
            } else {
                cap = cap.min(self.cap_at(pv));
                pv = self.parent_at(pv);
            }
        }
        Ok(cap)
    }

    /// Lowest common ancestor via `k`-jumps then single parent steps.
    /// `None` means the LCA is the super-root (different components).
    pub fn lca(&self, u: VertexId, v: VertexId) -> Result<Option<VertexId>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let l = self.lca_ix(u.ix(), v.ix());
        Ok(if l == self.n { None } else { Some(VertexId::from_ix(l)) })
    }

    fn lca_ix(&self, u: usize, v: usize) -> usize {
        let mut pu = u;
        if self.contains(pu, v) {
            return pu;
        }
        // Jump k levels at a time until pu's interval covers v, then refine
        // from the overshoot predecessor one parent at a time.
        let mut ppu = pu;
        while !self.contains(pu, v) {
            ppu = pu;
            pu = self.anc2_at(pu);
        }
        while !self.contains(ppu, v) {
            ppu = self.parent_at(ppu);
        }
        ppu
    }

    /// The child of `l` whose subtree contains `v`; `v` must be a strict
    /// descendant of `l`. Jumps first, refines with parent steps.
    fn child_toward(&self, l: usize, v: usize) -> usize {
        let strictly_inside = |x: usize| -> bool {
            if x == l || x == self.n {
                return false;
            }
            let (lo, hi) = self.interval_at(x);
            let (llo, lhi) = self.interval_at(l);
            llo <= lo && hi <= lhi && (lo != llo || hi != lhi)
        };
        let mut a = v;
        debug_assert!(strictly_inside(a));
        loop {
            let nxt = self.anc2_at(a);
            if nxt != a && strictly_inside(nxt) {
                a = nxt;
            } else {
                break;
            }
        }
        loop {
            let nxt = self.parent_at(a);
            if nxt != a && strictly_inside(nxt) {
                a = nxt;
            } else {
                break;
            }
        }
        a
    }

    /// LCA-based query: the answer is the minimum of the capacities of the
    /// edges joining the LCA to the subtrees holding `u` and `v` (just the
    /// last tree edge when one endpoint is an ancestor of the other).
    pub fn query_via_lca(&self, u: VertexId, v: VertexId) -> Result<i64> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Ok(INF);
        }
        let (u, v) = (u.ix(), v.ix());
        let l = self.lca_ix(u, v);
        if l == u {
            return Ok(self.cap_at(self.child_toward(l, v)));
        }
        if l == v {
            return Ok(self.cap_at(self.child_toward(l, u)));
        }
        let su = self.child_toward(l, u);
        let sv = self.child_toward(l, v);
        Ok(self.cap_at(su).min(self.cap_at(sv)))
    }

    /// The monotone-capacity invariant: capacities never increase from a
    /// vertex's parent edge to its grandparent edge, excluding edges into
    /// the super-root.
    pub fn monotone_cap_check(&self) -> std::result::Result<(), String> {
        for v in 0..self.n {
            let p = self.parent[v];
            if p == self.n || self.parent[p] == self.n {
                continue;
            }
            if self.parent_cap[v] < self.parent_cap[p] {
                return Err(format!(
                    "capacity increases from vertex {} ({}) to parent {} ({})",
                    v + 1,
                    self.parent_cap[v],
                    p + 1,
                    self.parent_cap[p]
                ));
            }
        }
        Ok(())
    }

    /// Text form: header `index n height k`, then one line per real vertex
    /// `id parent cap level dfsnum dfsmax anc2`, with 0 standing for the
    /// super-root.
    pub fn serialize(&self) -> String {
        let show = |ix: usize| -> usize { if ix == self.n { 0 } else { ix + 1 } };
        let mut out = format!("index {} {} {}\n", self.n, self.height, self.k);
        for v in 0..self.n {
            out.push_str(&format!(
                "{} {} {} {} {} {} {}\n",
                v + 1,
                show(self.parent[v]),
                self.parent_cap[v],
                self.level[v],
                self.dfsnum[v],
                self.dfsmax[v],
                show(self.anc2[v]),
            ));
        }
        out
    }

    /// Parse [`BottleneckIndex::serialize`] output. The forest is rebuilt
    /// from the parent links and every derived column is cross-checked.
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
        if fields.len() != 4 || fields[0] != "index" {
            return Err(Error::parse(hline, "header must be \"index n height k\""));
        }
        let n: usize =
            fields[1].parse().map_err(|_| Error::parse(hline, "bad vertex count"))?;
        let mut parents: Vec<Option<VertexId>> = vec![None; n];
        let mut caps = vec![0i64; n];
        let mut rows: Vec<Option<(usize, Vec<i64>)>> = vec![None; n];
        for (line_no, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 7 {
                return Err(Error::parse(line_no, "vertex line must have 7 fields"));
            }
            let nums: Vec<i64> = f
                .iter()
                .map(|s| s.parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(line_no, "bad number"))?;
            let id = nums[0];
            if id < 1 || id as usize > n {
                return Err(Error::parse(line_no, format!("vertex id {id} out of range")));
            }
            let id = id as usize;
            if rows[id - 1].is_some() {
                return Err(Error::parse(line_no, format!("duplicate vertex {id}")));
            }
            if nums[1] != 0 {
                parents[id - 1] = Some(VertexId(nums[1] as usize));
            }
            caps[id - 1] = nums[2];
            rows[id - 1] = Some((line_no, nums));
        }
        if let Some(missing) = rows.iter().position(|r| r.is_none()) {
            return Err(Error::parse(1, format!("missing line for vertex {}", missing + 1)));
        }
        let index = BottleneckIndex::from_forest(&parents, &caps)?;
        for (v, row) in rows.into_iter().enumerate() {
            let (line_no, nums) = row.unwrap();
            let want = (
                index.level[v] as i64,
                index.dfsnum[v] as i64,
                index.dfsmax[v] as i64,
                if index.anc2[v] == n { 0 } else { index.anc2[v] as i64 + 1 },
            );
            if (nums[3], nums[4], nums[5], nums[6]) != want {
                return Err(Error::parse(
                    line_no,
                    format!("derived fields disagree with the forest for vertex {}", v + 1),
                ));
            }
        }
        Ok(index)
    }
}

/// Attach the super-root, run the DFS numbering and place ancestor jumps.
fn finish_forest(n: usize, mut parent: Vec<usize>, mut parent_cap: Vec<i64>) -> BottleneckIndex {
    let root = n;
    for v in 0..n {
        if parent[v] == v {
            parent[v] = root;
            parent_cap[v] = 0;
        }
    }
    // Children in vertex-id order give a deterministic DFS.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for v in 0..n {
        children[parent[v]].push(v);
    }

    let mut level = vec![0u32; n];
    let mut dfsnum = vec![0u32; n];
    let mut dfsmax = vec![0u32; n];

    // Iterative DFS: dfs numbers, levels, subtree maxima, overall height.
    let mut counter = 1u32; // the super-root takes dfs number 1
    let mut height = 0u32;
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(&(v, child_ix)) = stack.last() {
        if child_ix == 0 && v != root {
            counter += 1;
            dfsnum[v] = counter;
            level[v] = (stack.len() - 1) as u32;
            height = height.max(level[v]);
        }
        if child_ix < children[v].len() {
            stack.last_mut().unwrap().1 += 1;
            stack.push((children[v][child_ix], 0));
        } else {
            if v != root {
                dfsmax[v] = counter;
            }
            stack.pop();
        }
    }

    let k = (f64::from(height.max(1))).sqrt().ceil() as u32;

    // Second pass: ancestor jumps of length k along the DFS path stack.
    let mut anc2 = vec![root; n];
    let mut path: Vec<usize> = vec![root];
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    while let Some(&(v, child_ix)) = stack.last() {
        if child_ix == 0 && v != root {
            // `path` holds the ancestors of v; jump k levels up, clamped
            // at the super-root.
            let depth = path.len();
            anc2[v] = path[depth.saturating_sub(k as usize).min(depth - 1)];
            path.push(v);
        }
        if child_ix < children[v].len() {
            stack.last_mut().unwrap().1 += 1;
            stack.push((children[v][child_ix], 0));
        } else {
            if v != root {
                path.pop();
            }
            stack.pop();
        }
    }

    BottleneckIndex {
        n,
        parent,
        parent_cap,
        level,
        dfsnum,
        dfsmax,
        anc2,
        k,
        height,
    }
}
