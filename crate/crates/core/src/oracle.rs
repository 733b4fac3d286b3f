//! Brute-force ground truth: exhaustive enumeration of out-branchings,
//! perfect matchings, and splitter coverage. Slow on purpose.

use crate::error::{Error, Result};
use crate::graph::{has_out_branching, ArcColoredDigraph, OutBranching};
use crate::planar::PlanarEmbeddedGraph;
use crate::splitters::SplitterSpec;

/// Largest digraph the branching oracle accepts.
pub const MAX_BRANCHING_VERTICES: usize = 10;
/// Largest number of parent-arc combinations the branching oracle will scan.
pub const MAX_BRANCHING_CANDIDATES: u128 = 100_000_000;
/// Largest graph the matching oracle accepts.
pub const MAX_MATCHING_VERTICES: usize = 16;
/// Largest number of k-subsets the coverage oracle will scan.
pub const MAX_COVERAGE_SUBSETS: u128 = 20_000_000;

/// Every out-branching rooted at `root`, each once, in lexicographic order of
/// the parent-arc choices (vertices ascending, arcs by index).
pub fn enum_out_branchings(d: &ArcColoredDigraph, root: usize) -> Result<OutBranchings<'_>> {
    let n = d.n();
    if n > MAX_BRANCHING_VERTICES {
        return Err(Error::Guard(format!(
            "branching oracle limited to {MAX_BRANCHING_VERTICES} vertices, got {n}"
        )));
    }
    if root == 0 || root > n {
        return Err(Error::Input(format!("root {root} outside 1..={n}")));
    }
    let in_arcs = d.in_arcs();
    let choices: Vec<Vec<usize>> = (1..=n)
        .filter(|&v| v != root)
        .map(|v| in_arcs[v - 1].clone())
        .collect();
    let candidates = choices
        .iter()
        .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128));
    if candidates > MAX_BRANCHING_CANDIDATES {
        return Err(Error::Guard(format!(
            "{candidates} parent-arc combinations exceed the oracle budget"
        )));
    }
    let done = choices.iter().any(|c| c.is_empty());
    Ok(OutBranchings {
        d,
        root,
        counter: vec![0; choices.len()],
        choices,
        done,
    })
}

/// Iterator returned by [`enum_out_branchings`].
pub struct OutBranchings<'a> {
    d: &'a ArcColoredDigraph,
    root: usize,
    choices: Vec<Vec<usize>>,
    counter: Vec<usize>,
    done: bool,
}

impl OutBranchings<'_> {
    fn advance(&mut self) {
        for pos in (0..self.counter.len()).rev() {
            self.counter[pos] += 1;
            if self.counter[pos] < self.choices[pos].len() {
                return;
            }
            self.counter[pos] = 0;
        }
        self.done = true;
    }
}

impl Iterator for OutBranchings<'_> {
    type Item = OutBranching;

    fn next(&mut self) -> Option<OutBranching> {
        while !self.done {
            let mut parent = vec![None; self.d.n()];
            let mut slot = 0;
            for (v, p) in parent.iter_mut().enumerate() {
                if v + 1 != self.root {
                    *p = Some(self.choices[slot][self.counter[slot]]);
                    slot += 1;
                }
            }
            self.advance();
            if let Ok(b) = OutBranching::new(self.d, self.root, parent) {
                return Some(b);
            }
        }
        None
    }
}

/// Maximum number of internal vertices over all out-branchings, or `None`
/// when the digraph has no out-branching.
pub fn max_internal(d: &ArcColoredDigraph) -> Result<Option<usize>> {
    best_over_branchings(d, |b| b.num_internal(d))
}

/// Maximum number of distinct arc colors over all out-branchings.
pub fn max_colors(d: &ArcColoredDigraph) -> Result<Option<usize>> {
    best_over_branchings(d, |b| b.num_colors(d))
}

fn best_over_branchings(
    d: &ArcColoredDigraph,
    score: impl Fn(&OutBranching) -> usize,
) -> Result<Option<usize>> {
    if d.n() > MAX_BRANCHING_VERTICES {
        return Err(Error::Guard(format!(
            "branching oracle limited to {MAX_BRANCHING_VERTICES} vertices"
        )));
    }
    let mut best = None;
    for r in has_out_branching(d) {
        for b in enum_out_branchings(d, r)? {
            let s = score(&b);
            best = Some(best.map_or(s, |x: usize| x.max(s)));
        }
    }
    Ok(best)
}

/// Every perfect matching as ascending edge ids (0-based), in lexicographic
/// order of the partner chosen for the smallest unmatched vertex.
pub fn enum_perfect_matchings(g: &PlanarEmbeddedGraph) -> Result<std::vec::IntoIter<Vec<usize>>> {
    let n = g.n();
    if n > MAX_MATCHING_VERTICES {
        return Err(Error::Guard(format!(
            "matching oracle limited to {MAX_MATCHING_VERTICES} vertices, got {n}"
        )));
    }
    let mut incident = vec![Vec::new(); n];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.u - 1].push((e.v - 1, i));
        incident[e.v - 1].push((e.u - 1, i));
    }
    for list in incident.iter_mut() {
        list.sort_unstable();
    }
    fn rec(
        incident: &[Vec<(usize, usize)>],
        used: &mut [bool],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(v) = used.iter().position(|&u| !u) else {
            let mut m = cur.clone();
            m.sort_unstable();
            out.push(m);
            return;
        };
        used[v] = true;
        for &(w, e) in &incident[v] {
            if !used[w] {
                used[w] = true;
                cur.push(e);
                rec(incident, used, cur, out);
                cur.pop();
                used[w] = false;
            }
        }
        used[v] = false;
    }
    let mut out = vec![];
    if n.is_multiple_of(2) {
        rec(&incident, &mut vec![false; n], &mut vec![], &mut out);
    }
    Ok(out.into_iter())
}

/// Maximum number of distinct edge colors over all perfect matchings.
pub fn max_matching_colors(g: &PlanarEmbeddedGraph) -> Result<Option<usize>> {
    Ok(enum_perfect_matchings(g)?
        .map(|m| {
            let mut colors: Vec<usize> = m.iter().map(|&e| g.edges()[e].color).collect();
            colors.sort_unstable();
            colors.dedup();
            colors.len()
        })
        .max())
}

/// Outcome of an exhaustive coverage check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coverage {
    pub covered: bool,
    /// Lexicographically first k-subset (1-based) no vector splits.
    pub first_uncovered: Option<Vec<usize>>,
    pub vectors_seen: u128,
}

/// Whether `colors[I]` partitions `I` almost equally over `t` colors.
pub fn splits_almost_equally(colors: &[u32], subset: &[usize], t: usize) -> bool {
    if t >= subset.len() {
        // sizes are 0 or 1: the colors must be distinct
        for (a, &x) in subset.iter().enumerate() {
            for &y in &subset[a + 1..] {
                if colors[x] == colors[y] {
                    return false;
                }
            }
        }
        return true;
    }
    let mut counts = vec![0usize; t];
    for &x in subset {
        counts[colors[x] as usize - 1] += 1;
    }
    let lo = *counts.iter().min().unwrap();
    let hi = *counts.iter().max().unwrap();
    hi - lo <= 1
}

/// Exhaustively checks that `family` is an `(n, k, t)`-splitter (with
/// `t = k`, a perfect hash family). Vectors hold colors in `1..=t` and are
/// consumed as a stream.
pub fn verify_splitter<I>(family: I, spec: SplitterSpec) -> Result<Coverage>
where
    I: IntoIterator<Item = Vec<u32>>,
{
    let SplitterSpec { n, k, t } = spec;
    let total = binomial(n, k);
    if total > MAX_COVERAGE_SUBSETS {
        return Err(Error::Guard(format!(
            "{total} subsets exceed the coverage budget"
        )));
    }
    let mut covered = vec![false; total as usize];
    let mut remaining = total;
    let mut seen = 0u128;
    for v in family {
        seen += 1;
        if v.len() != n || v.iter().any(|&c| c == 0 || c as usize > t) {
            return Err(Error::Invariant(format!(
                "vector {seen} is not in [{t}]^{n}"
            )));
        }
        if remaining == 0 {
            continue;
        }
        for (idx, subset) in KSubsets::new(n, k).enumerate() {
            if !covered[idx] && splits_almost_equally(&v, &subset, t) {
                covered[idx] = true;
                remaining -= 1;
            }
        }
    }
    let first_uncovered = covered.iter().position(|&c| !c).map(|idx| {
        KSubsets::new(n, k)
            .nth(idx)
            .unwrap()
            .iter()
            .map(|&x| x + 1)
            .collect()
    });
    Ok(Coverage {
        covered: first_uncovered.is_none(),
        first_uncovered,
        vectors_seen: seen,
    })
}

/// k-subsets of `0..n` in lexicographic order.
pub struct KSubsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

impl KSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            cur: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for KSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}
