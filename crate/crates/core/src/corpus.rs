//! Instance generators for fixtures, tests and the acceptance suite.
//! All generators are deterministic functions of their seed.

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::ArcColoredDigraph;
use crate::planar::{Edge, PlanarEmbeddedGraph};

/// Random simple digraph: every ordered pair is an arc with probability `p`.
/// With `colors = Some(c)`, each arc gets a uniform color in `1..=c`.
pub fn random_digraph(
    rng: &mut impl Rng,
    n: usize,
    p: f64,
    colors: Option<usize>,
) -> ArcColoredDigraph {
    let mut triples = vec![];
    for u in 1..=n {
        for v in 1..=n {
            if u != v && rng.gen_bool(p) {
                triples.push((u, v, colors.map(|c| rng.gen_range(1..=c))));
            }
        }
    }
    ArcColoredDigraph::new(
        n,
        triples
            .into_iter()
            .map(|(tail, head, color)| crate::graph::Arc { tail, head, color })
            .collect(),
    )
    .expect("generated digraph is valid")
}

/// Digraph on `n` vertices whose arc set is given by the bits of `mask`
/// over the ordered pairs `(u, v)`, `u != v`, in lexicographic order.
pub fn digraph_from_mask(n: usize, mask: u64) -> ArcColoredDigraph {
    let mut pairs = vec![];
    let mut bit = 0;
    for u in 1..=n {
        for v in 1..=n {
            if u != v {
                if mask >> bit & 1 == 1 {
                    pairs.push((u, v));
                }
                bit += 1;
            }
        }
    }
    ArcColoredDigraph::from_pairs(n, &pairs).expect("valid")
}

/// Random out-tree rooted at 1 (random recursive tree), as parent arcs.
pub fn random_out_tree(rng: &mut impl Rng, n: usize) -> ArcColoredDigraph {
    let pairs: Vec<(usize, usize)> = (2..=n).map(|v| (rng.gen_range(1..v), v)).collect();
    ArcColoredDigraph::from_pairs(n, &pairs).expect("valid")
}

fn half(dx: i64, dy: i64) -> u8 {
    u8::from(dy < 0 || (dy == 0 && dx < 0))
}

/// Counterclockwise angular order of direction vectors, exact on integers.
fn angle_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    half(a.0, a.1)
        .cmp(&half(b.0, b.1))
        .then_with(|| (b.0 * a.1).cmp(&(a.0 * b.1)))
}

/// Straight-line embedding: rotations sorted counterclockwise around each point.
pub fn embed_points(
    points: &[(i64, i64)],
    pairs: &[(usize, usize)],
    colors: &[usize],
) -> PlanarEmbeddedGraph {
    let n = points.len();
    let edges: Vec<Edge> = pairs
        .iter()
        .zip(colors)
        .map(|(&(u, v), &color)| Edge { u, v, color })
        .collect();
    let rotation = (1..=n)
        .map(|v| {
            let mut inc: Vec<usize> = (0..edges.len())
                .filter(|&i| edges[i].u == v || edges[i].v == v)
                .collect();
            let dir = |i: usize| {
                let w = if edges[i].u == v {
                    edges[i].v
                } else {
                    edges[i].u
                };
                (
                    points[w - 1].0 - points[v - 1].0,
                    points[w - 1].1 - points[v - 1].1,
                )
            };
            inc.sort_by(|&a, &b| angle_cmp(dir(a), dir(b)));
            inc
        })
        .collect();
    PlanarEmbeddedGraph::new(n, edges, rotation).expect("straight-line drawing is planar")
}

/// Cycle `1 - 2 - ... - n - 1` with every edge colored 1.
pub fn cycle_graph(n: usize) -> PlanarEmbeddedGraph {
    let points: Vec<(i64, i64)> = (0..n)
        .map(|i| {
            let a = std::f64::consts::TAU * i as f64 / n as f64;
            (
                (1000.0 * a.cos()).round() as i64,
                (1000.0 * a.sin()).round() as i64,
            )
        })
        .collect();
    let pairs: Vec<(usize, usize)> = (1..=n).map(|i| (i, i % n + 1)).collect();
    embed_points(&points, &pairs, &vec![1; n])
}

/// `rows x cols` grid graph with every edge colored 1.
pub fn grid_graph(rows: usize, cols: usize) -> PlanarEmbeddedGraph {
    let id = |r: usize, c: usize| r * cols + c + 1;
    let points: Vec<(i64, i64)> = (0..rows)
        .flat_map(|r| (0..cols).map(move |c| (c as i64, r as i64)))
        .collect();
    let mut pairs = vec![];
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                pairs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                pairs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    let colors = vec![1; pairs.len()];
    embed_points(&points, &pairs, &colors)
}

/// Same graph with the given edge colors.
pub fn recolor(g: &PlanarEmbeddedGraph, colors: &[usize]) -> PlanarEmbeddedGraph {
    let edges = g
        .edges()
        .iter()
        .zip(colors)
        .map(|(e, &color)| Edge { color, ..*e })
        .collect();
    let rotation = (1..=g.n()).map(|v| g.rotation(v).to_vec()).collect();
    PlanarEmbeddedGraph::new(g.n(), edges, rotation).expect("recoloring keeps the embedding")
}

fn orient(a: (i64, i64), b: (i64, i64), c: (i64, i64)) -> i64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

fn segments_cross(p: (i64, i64), q: (i64, i64), r: (i64, i64), s: (i64, i64)) -> bool {
    // points are in general position, so touching only happens at shared endpoints
    if p == r || p == s || q == r || q == s {
        return false;
    }
    let d1 = orient(p, q, r).signum();
    let d2 = orient(p, q, s).signum();
    let d3 = orient(r, s, p).signum();
    let d4 = orient(r, s, q).signum();
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Random connected straight-line planar graph on `n` points in general
/// position. Each non-crossing candidate edge (shortest first) is kept with
/// probability `density`; a final pass joins components. Colors are uniform
/// in `1..=colors`.
pub fn random_planar(
    rng: &mut impl Rng,
    n: usize,
    density: f64,
    colors: usize,
) -> PlanarEmbeddedGraph {
    let mut points: Vec<(i64, i64)> = Vec::with_capacity(n);
    while points.len() < n {
        let p = (rng.gen_range(0..200), rng.gen_range(0..200));
        let collinear = points.contains(&p)
            || (0..points.len())
                .any(|i| (i + 1..points.len()).any(|j| orient(points[i], points[j], p) == 0));
        if !collinear {
            points.push(p);
        }
    }
    let mut candidates: Vec<(usize, usize)> = (1..=n)
        .flat_map(|u| (u + 1..=n).map(move |v| (u, v)))
        .collect();
    candidates.shuffle(rng);
    let len2 = |&(u, v): &(usize, usize)| {
        let (a, b) = (points[u - 1], points[v - 1]);
        (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2)
    };
    candidates.sort_by_key(len2);
    let mut pairs: Vec<(usize, usize)> = vec![];
    let crosses = |pairs: &[(usize, usize)], (u, v): (usize, usize)| {
        pairs.iter().any(|&(a, b)| {
            segments_cross(points[u - 1], points[v - 1], points[a - 1], points[b - 1])
        })
    };
    for &c in &candidates {
        if rng.gen_bool(density) && !crosses(&pairs, c) {
            pairs.push(c);
        }
    }
    let mut comp: Vec<usize> = (0..=n).collect();
    fn find(comp: &mut [usize], x: usize) -> usize {
        if comp[x] != x {
            let r = find(comp, comp[x]);
            comp[x] = r;
        }
        comp[x]
    }
    for &(u, v) in &pairs {
        let (a, b) = (find(&mut comp, u), find(&mut comp, v));
        comp[a] = b;
    }
    for &c in &candidates {
        let (a, b) = (find(&mut comp, c.0), find(&mut comp, c.1));
        if a != b && !crosses(&pairs, c) {
            pairs.push(c);
            comp[a] = b;
        }
    }
    let edge_colors: Vec<usize> = (0..pairs.len())
        .map(|_| rng.gen_range(1..=colors))
        .collect();
    embed_points(&points, &pairs, &edge_colors)
}
