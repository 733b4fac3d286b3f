use std::collections::VecDeque;

use super::ArcColoredDigraph;
use crate::error::{Error, Result};

/// Spanning out-tree of a digraph: the root plus, for every other vertex,
/// the index of the arc entering it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OutBranching {
    root: usize,
    /// Indexed by `vertex - 1`; `None` exactly at the root.
    parent_arc: Vec<Option<usize>>,
}

impl OutBranching {
    /// Builds and validates a branching from its parent arcs.
    pub fn new(d: &ArcColoredDigraph, root: usize, parent_arc: Vec<Option<usize>>) -> Result<Self> {
        let b = Self { root, parent_arc };
        b.validate(d)?;
        Ok(b)
    }

    /// Builds a branching from a set of exactly `n - 1` arc indices.
    pub fn from_arcs(d: &ArcColoredDigraph, arcs: &[usize]) -> Result<Self> {
        let n = d.n();
        let mut parent = vec![None; n];
        for &a in arcs {
            let head = d.arc(a).head;
            if parent[head - 1].replace(a).is_some() {
                return Err(Error::Invariant(format!("vertex {head} has in-degree > 1")));
            }
        }
        let roots: Vec<usize> = (1..=n).filter(|&v| parent[v - 1].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::Invariant(format!(
                "expected one root, found {}",
                roots.len()
            )));
        }
        Self::new(d, roots[0], parent)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Arc entering `v`, or `None` for the root.
    pub fn parent_arc(&self, v: usize) -> Option<usize> {
        self.parent_arc[v - 1]
    }

    pub(crate) fn set_parent_arc(&mut self, v: usize, arc: usize) {
        self.parent_arc[v - 1] = Some(arc);
    }

    /// Arc indices in ascending order.
    pub fn arcs(&self) -> Vec<usize> {
        let mut a: Vec<usize> = self.parent_arc.iter().flatten().copied().collect();
        a.sort_unstable();
        a
    }

    /// Out-degree of every vertex, indexed by `vertex - 1`.
    pub fn out_degrees(&self, d: &ArcColoredDigraph) -> Vec<usize> {
        let mut deg = vec![0; d.n()];
        for a in self.parent_arc.iter().flatten() {
            deg[d.arc(*a).tail - 1] += 1;
        }
        deg
    }

    pub fn is_leaf(&self, d: &ArcColoredDigraph, v: usize) -> bool {
        !self
            .parent_arc
            .iter()
            .flatten()
            .any(|&a| d.arc(a).tail == v)
    }

    /// Vertices with at least one child, ascending.
    pub fn internal_vertices(&self, d: &ArcColoredDigraph) -> Vec<usize> {
        self.out_degrees(d)
            .iter()
            .enumerate()
            .filter(|&(_, &deg)| deg > 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn num_internal(&self, d: &ArcColoredDigraph) -> usize {
        self.internal_vertices(d).len()
    }

    /// Number of distinct arc colors used (0 when uncolored).
    pub fn num_colors(&self, d: &ArcColoredDigraph) -> usize {
        let mut seen: Vec<usize> = self
            .parent_arc
            .iter()
            .flatten()
            .filter_map(|&a| d.arc(a).color)
            .collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Checks in-degrees, arc heads, and that every vertex is reachable from the root.
    pub fn validate(&self, d: &ArcColoredDigraph) -> Result<()> {
        let n = d.n();
        if self.parent_arc.len() != n || self.root == 0 || self.root > n {
            return Err(Error::Invariant(
                "branching does not match the digraph".into(),
            ));
        }
        for v in 1..=n {
            match self.parent_arc[v - 1] {
                None if v == self.root => {}
                None => return Err(Error::Invariant(format!("vertex {v} has no parent arc"))),
                Some(_) if v == self.root => {
                    return Err(Error::Invariant("root has a parent arc".into()));
                }
                Some(a) => {
                    if a >= d.num_arcs() || d.arc(a).head != v {
                        return Err(Error::Invariant(format!(
                            "parent arc of {v} does not enter it"
                        )));
                    }
                }
            }
        }
        // walk up from every vertex; a cycle never reaches the root
        for v in 1..=n {
            let mut cur = v;
            let mut steps = 0;
            while let Some(a) = self.parent_arc[cur - 1] {
                cur = d.arc(a).tail;
                steps += 1;
                if steps > n {
                    return Err(Error::Invariant("branching contains a cycle".into()));
                }
            }
            if cur != self.root {
                return Err(Error::Invariant(format!(
                    "vertex {v} is not reachable from the root"
                )));
            }
        }
        Ok(())
    }
}

/// Strongly connected components, each a sorted vertex list (1-based).
fn strongly_connected_components(d: &ArcColoredDigraph) -> (Vec<Vec<usize>>, Vec<usize>) {
    // Kosaraju with explicit stacks.
    let n = d.n();
    let out = d.out_arcs();
    let inn = d.in_arcs();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for s in 0..n {
        if visited[s] {
            continue;
        }
        visited[s] = true;
        let mut stack = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < out[v].len() {
                let w = d.arc(out[v][*i]).head - 1;
                *i += 1;
                if !visited[w] {
                    visited[w] = true;
                    stack.push((w, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for &s in order.iter().rev() {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        let mut members = vec![];
        let mut stack = vec![s];
        comp[s] = id;
        while let Some(v) = stack.pop() {
            members.push(v + 1);
            for &a in &inn[v] {
                let w = d.arc(a).tail - 1;
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                }
            }
        }
        members.sort_unstable();
        comps.push(members);
    }
    (comps, comp)
}

/// Returns the members of the unique source strongly connected component if
/// `d` has an out-branching, or an empty list otherwise. Any returned vertex
/// can serve as the root.
pub fn has_out_branching(d: &ArcColoredDigraph) -> Vec<usize> {
    if d.n() == 0 {
        return vec![];
    }
    let (comps, comp) = strongly_connected_components(d);
    let mut has_incoming = vec![false; comps.len()];
    for a in d.arcs() {
        let (ct, ch) = (comp[a.tail - 1], comp[a.head - 1]);
        if ct != ch {
            has_incoming[ch] = true;
        }
    }
    let sources: Vec<usize> = (0..comps.len()).filter(|&c| !has_incoming[c]).collect();
    if sources.len() == 1 {
        comps[sources[0]].clone()
    } else {
        vec![]
    }
}

/// Breadth-first out-branching rooted at `root`, scanning arcs in index order.
pub fn out_branching_from(d: &ArcColoredDigraph, root: usize) -> Option<OutBranching> {
    let n = d.n();
    if root == 0 || root > n {
        return None;
    }
    let out = d.out_arcs();
    let mut parent = vec![None; n];
    let mut seen = vec![false; n];
    seen[root - 1] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &a in &out[v - 1] {
            let w = d.arc(a).head;
            if !seen[w - 1] {
                seen[w - 1] = true;
                parent[w - 1] = Some(a);
                queue.push_back(w);
            }
        }
    }
    if seen.iter().all(|&s| s) {
        Some(OutBranching {
            root,
            parent_arc: parent,
        })
    } else {
        None
    }
}
