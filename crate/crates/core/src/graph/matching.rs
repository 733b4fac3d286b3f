use std::collections::{BTreeMap, VecDeque};

use super::{has_out_branching, out_branching_from, ArcColoredDigraph, OutBranching};
use crate::error::{Error, Result};

const NONE: usize = usize::MAX;

/// Vertex-disjoint set of arcs, stored as ascending arc indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ArcMatching {
    arcs: Vec<usize>,
}

impl ArcMatching {
    /// Validates that no two arcs share an endpoint.
    pub fn new(d: &ArcColoredDigraph, mut arcs: Vec<usize>) -> Result<Self> {
        arcs.sort_unstable();
        arcs.dedup();
        let mut used = vec![false; d.n() + 1];
        for &a in &arcs {
            if a >= d.num_arcs() {
                return Err(Error::Invariant(format!("arc index {a} out of range")));
            }
            let arc = d.arc(a);
            for v in [arc.tail, arc.head] {
                if std::mem::replace(&mut used[v], true) {
                    return Err(Error::Invariant(format!(
                        "vertex {v} covered twice by the matching"
                    )));
                }
            }
        }
        Ok(Self { arcs })
    }

    pub fn arcs(&self) -> &[usize] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Every vertex covered by the matching, ascending.
    pub fn vertices(&self, d: &ArcColoredDigraph) -> Vec<usize> {
        let mut vs: Vec<usize> = self
            .arcs
            .iter()
            .flat_map(|&a| [d.arc(a).tail, d.arc(a).head])
            .collect();
        vs.sort_unstable();
        vs
    }
}

/// Edmonds' blossom algorithm on an undirected simple graph with vertices
/// `0..n`. Returns the mate of every vertex (`None` when unmatched).
struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>]) -> Self {
        let n = adj.len();
        Self {
            adj,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let next = self.mate[to];
                    self.used[next] = true;
                    queue.push_back(next);
                }
            }
        }
        None
    }

    fn run(mut self) -> Vec<usize> {
        for root in 0..self.adj.len() {
            if self.mate[root] != NONE {
                continue;
            }
            if let Some(end) = self.find_path(root) {
                let mut v = end;
                while v != NONE {
                    let pv = self.parent[v];
                    let ppv = self.mate[pv];
                    self.mate[v] = pv;
                    self.mate[pv] = v;
                    v = ppv;
                }
            }
        }
        self.mate
    }
}

/// Maximum-cardinality matching of an undirected graph on `0..n`.
/// Parallel edges are tolerated. Returns pairs `(u, v)` with `u < v`, ascending.
pub fn max_matching_undirected(n: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        if u != v && !adj[u].contains(&v) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mate = Blossom::new(&adj).run();
    (0..n)
        .filter(|&u| mate[u] != NONE && u < mate[u])
        .map(|u| (u, mate[u]))
        .collect()
}

/// Maximum matching of the underlying undirected graph of `d`, mapped back
/// to arcs. Each undirected edge is represented by its smallest arc index.
pub fn maximum_matching(d: &ArcColoredDigraph) -> ArcMatching {
    let mut rep: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (i, a) in d.arcs().iter().enumerate() {
        let key = (a.tail.min(a.head) - 1, a.tail.max(a.head) - 1);
        rep.entry(key).or_insert(i);
    }
    let edges: Vec<(usize, usize)> = rep.keys().copied().collect();
    let arcs = max_matching_undirected(d.n(), &edges)
        .into_iter()
        .map(|e| rep[&e])
        .collect();
    ArcMatching::new(d, arcs).expect("blossom output is a matching")
}

/// Leaf-exchange procedure: returns an out-branching of `d` in which no arc
/// of `m` has both endpoints as leaves.
pub fn exchange_out_branching(d: &ArcColoredDigraph, m: &ArcMatching) -> Result<OutBranching> {
    exchange_counted(d, m).map(|(b, _)| b)
}

/// Same as [`exchange_out_branching`], also returning the number of exchanges.
pub(crate) fn exchange_counted(
    d: &ArcColoredDigraph,
    m: &ArcMatching,
) -> Result<(OutBranching, usize)> {
    let roots = has_out_branching(d);
    let root = *roots.first().ok_or_else(|| {
        Error::NoOutBranching("digraph has more than one source component".into())
    })?;
    let mut b = out_branching_from(d, root).expect("source component reaches every vertex");
    let mut exchanges = 0;
    // each exchange adds one arc of m to b and removes a non-m arc
    'rescan: loop {
        let out = b.out_degrees(d);
        for &a in m.arcs() {
            let arc = d.arc(a);
            if out[arc.tail - 1] == 0 && out[arc.head - 1] == 0 {
                b.set_parent_arc(arc.head, a);
                exchanges += 1;
                continue 'rescan;
            }
        }
        break;
    }
    debug_assert!(exchanges <= m.len());
    debug_assert!(b.validate(d).is_ok());
    Ok((b, exchanges))
}
