//! Embedded planar graphs, face tracing, Kasteleyn orientations, and the
//! Pfaffian perfect-matching evaluator.
//!
//! Faces are traced with the rule: arriving at `v` along edge `e`, leave
//! along the edge that follows `e` in the rotation of `v`. An edge is
//! *clockwise* on a face when its orientation agrees with the direction the
//! face walk traverses it. The outer face is the longest face; ties go to the
//! face containing the smallest vertex id, then to the face traced first.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;

use crate::algebra::{signed_pfaffian, IntMatrix, SkewMatrix};
use crate::error::{Error, Result};
use crate::graph::digraph_parse_num as parse_num;
use crate::partition::ColorPartition;
use crate::sieve::SievedEvaluator;

/// Undirected edge `{u, v}` (1-based endpoints) with a color in `1..=t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: usize,
}

/// Simple edge-colored graph with a rotation system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarEmbeddedGraph {
    n: usize,
    edges: Vec<Edge>,
    /// Cyclic order of incident edge ids (0-based) for every vertex, indexed by `vertex - 1`.
    rotation: Vec<Vec<usize>>,
    colors: usize,
    faces: Vec<Vec<usize>>,
}

/// A traced face: the half-edges along its boundary walk. Half-edge `2e`
/// runs `u -> v` on edge `e`, half-edge `2e + 1` runs `v -> u`.
pub type Face = Vec<usize>;

impl PlanarEmbeddedGraph {
    /// Validates the rotation system and checks Euler's formula on every
    /// connected component. Colors are renumbered by first occurrence.
    pub fn new(n: usize, edges: Vec<Edge>, rotation: Vec<Vec<usize>>) -> Result<Self> {
        let m = edges.len();
        let mut seen_pairs = HashSet::new();
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut normalized = Vec::with_capacity(m);
        for (i, e) in edges.iter().enumerate() {
            if e.u == 0 || e.u > n || e.v == 0 || e.v > n {
                return Err(Error::Invariant(format!(
                    "edge {} has an endpoint outside 1..={n}",
                    i + 1
                )));
            }
            if e.u == e.v {
                return Err(Error::Invariant(format!("edge {} is a loop", i + 1)));
            }
            if !seen_pairs.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(Error::Invariant(format!(
                    "edge {} is parallel to an earlier edge",
                    i + 1
                )));
            }
            if e.color == 0 {
                return Err(Error::Invariant(format!("edge {} has color 0", i + 1)));
            }
            let next = remap.len() + 1;
            let color = *remap.entry(e.color).or_insert(next);
            normalized.push(Edge {
                u: e.u,
                v: e.v,
                color,
            });
        }
        if rotation.len() != n {
            return Err(Error::Invariant(format!(
                "rotation given for {} of {n} vertices",
                rotation.len()
            )));
        }
        for (vi, rot) in rotation.iter().enumerate() {
            let v = vi + 1;
            let mut expected: Vec<usize> = (0..m)
                .filter(|&i| normalized[i].u == v || normalized[i].v == v)
                .collect();
            let mut got = rot.clone();
            got.sort_unstable();
            if got.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Invariant(format!(
                    "rotation of vertex {v} repeats an edge"
                )));
            }
            expected.sort_unstable();
            if got != expected {
                return Err(Error::Invariant(format!(
                    "rotation of vertex {v} does not list exactly its incident edges"
                )));
            }
        }
        let mut g = Self {
            n,
            edges: normalized,
            rotation,
            colors: remap.len(),
            faces: vec![],
        };
        g.faces = g.trace_faces();
        g.check_euler()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_colors(&self) -> usize {
        self.colors
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v - 1]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    /// Tail and head of a half-edge.
    pub fn half_edge(&self, h: usize) -> (usize, usize) {
        let e = self.edges[h / 2];
        if h.is_multiple_of(2) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        }
    }

    fn next_half_edge(&self, h: usize) -> usize {
        let e = h / 2;
        let (_, to) = self.half_edge(h);
        let rot = &self.rotation[to - 1];
        let pos = rot
            .iter()
            .position(|&x| x == e)
            .expect("rotation lists incident edges");
        let f = rot[(pos + 1) % rot.len()];
        if self.edges[f].u == to {
            2 * f
        } else {
            2 * f + 1
        }
    }

    fn trace_faces(&self) -> Vec<Face> {
        let mut visited = vec![false; 2 * self.edges.len()];
        let mut faces = vec![];
        for start in 0..visited.len() {
            if visited[start] {
                continue;
            }
            let mut face = vec![];
            let mut h = start;
            while !visited[h] {
                visited[h] = true;
                face.push(h);
                h = self.next_half_edge(h);
            }
            faces.push(face);
        }
        faces
    }

    /// Connected component id of every vertex, indexed by `vertex - 1`.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n];
        let mut next = 0;
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut stack = vec![s + 1];
            while let Some(v) = stack.pop() {
                for &e in &self.rotation[v - 1] {
                    let w = if self.edges[e].u == v {
                        self.edges[e].v
                    } else {
                        self.edges[e].u
                    };
                    if comp[w - 1] == usize::MAX {
                        comp[w - 1] = next;
                        stack.push(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    fn check_euler(&self) -> Result<()> {
        let comp = self.components();
        let count = comp.iter().copied().max().map(|c| c + 1).unwrap_or(0);
        let mut verts = vec![0i64; count];
        let mut edges = vec![0i64; count];
        let mut faces = vec![0i64; count];
        for &c in &comp {
            verts[c] += 1;
        }
        for e in &self.edges {
            edges[comp[e.u - 1]] += 1;
        }
        for f in &self.faces {
            let (tail, _) = self.half_edge(f[0]);
            faces[comp[tail - 1]] += 1;
        }
        for c in 0..count {
            // an isolated vertex bounds one face
            let f = if edges[c] == 0 { 1 } else { faces[c] };
            if verts[c] - edges[c] + f != 2 {
                return Err(Error::NotPlanar(format!(
                    "component with {} vertices, {} edges and {} faces violates Euler's formula",
                    verts[c], edges[c], f
                )));
            }
        }
        Ok(())
    }

    /// Index into [`PlanarEmbeddedGraph::faces`] of the outer face.
    pub fn outer_face(&self) -> Option<usize> {
        let key = |i: usize| {
            let f = &self.faces[i];
            let min_v = f.iter().map(|&h| self.half_edge(h).0).min().unwrap();
            (std::cmp::Reverse(f.len()), min_v, i)
        };
        (0..self.faces.len()).min_by_key(|&i| key(i))
    }

    /// Parses the planar embedding format:
    ///
    /// ```text
    /// p planar <n> <m>
    /// e <u> <v> <color>              (m lines, edge ids 1..=m in file order)
    /// r <v> <deg> <edge ids...>      (n lines, cyclic order)
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = vec![];
        let mut rotation: Vec<Option<Vec<usize>>> = vec![];
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line, msg };
            let fields: Vec<&str> = content.split_whitespace().collect();
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate header".into()));
                    }
                    if fields.len() != 4 || fields[1] != "planar" {
                        return Err(err("expected `p planar <n> <m>`".into()));
                    }
                    let n = parse_num(fields[2], line)?;
                    header = Some((n, parse_num(fields[3], line)?));
                    rotation = vec![None; n];
                }
                "e" => {
                    let (n, _) = header.ok_or_else(|| err("edge before header".into()))?;
                    if fields.len() != 4 {
                        return Err(err("expected `e <u> <v> <color>`".into()));
                    }
                    let u = parse_num(fields[1], line)?;
                    let v = parse_num(fields[2], line)?;
                    let color = parse_num(fields[3], line)?;
                    if u == 0 || u > n || v == 0 || v > n {
                        return Err(err(format!("vertex id out of range 1..={n}")));
                    }
                    if u == v {
                        return Err(err("self-loop".into()));
                    }
                    if color == 0 {
                        return Err(err("colors must be positive".into()));
                    }
                    edges.push(Edge { u, v, color });
                }
                "r" => {
                    let (n, m) = header.ok_or_else(|| err("rotation before header".into()))?;
                    if fields.len() < 3 {
                        return Err(err("expected `r <v> <deg> <edge ids...>`".into()));
                    }
                    let v = parse_num(fields[1], line)?;
                    let deg = parse_num(fields[2], line)?;
                    if v == 0 || v > n {
                        return Err(err(format!("vertex id out of range 1..={n}")));
                    }
                    if fields.len() != 3 + deg {
                        return Err(err(format!(
                            "rotation declares degree {deg} but lists {}",
                            fields.len() - 3
                        )));
                    }
                    let ids = fields[3..]
                        .iter()
                        .map(|f| {
                            let id = parse_num(f, line)?;
                            if id == 0 || id > m {
                                Err(err(format!("edge id {id} out of range 1..={m}")))
                            } else {
                                Ok(id - 1)
                            }
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if rotation[v - 1].replace(ids).is_some() {
                        return Err(err(format!("duplicate rotation for vertex {v}")));
                    }
                }
                other => return Err(err(format!("unknown line type `{other}`"))),
            }
        }
        let last = text.lines().count();
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if edges.len() != m {
            return Err(Error::Parse {
                line: last,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        let rotation = rotation
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                r.ok_or(Error::Parse {
                    line: last,
                    msg: format!("missing rotation for vertex {}", i + 1),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(n, edges, rotation).map_err(|e| match e {
            Error::Invariant(msg) => Error::Parse { line: last, msg },
            other => other,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("p planar {} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            writeln!(s, "e {} {} {}", e.u, e.v, e.color).unwrap();
        }
        for (i, rot) in self.rotation.iter().enumerate() {
            write!(s, "r {} {}", i + 1, rot.len()).unwrap();
            for e in rot {
                write!(s, " {}", e + 1).unwrap();
            }
            s.push('\n');
        }
        s
    }
}

/// Orientation of every edge as `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KasteleynOrientation {
    direction: Vec<(usize, usize)>,
}

impl KasteleynOrientation {
    pub fn direction(&self, e: usize) -> (usize, usize) {
        self.direction[e]
    }

    /// Whether half-edge `h` runs along the orientation of its edge.
    fn agrees(&self, g: &PlanarEmbeddedGraph, h: usize) -> bool {
        g.half_edge(h) == self.direction[h / 2]
    }

    /// Clockwise edge count of every face.
    pub fn clockwise_counts(&self, g: &PlanarEmbeddedGraph) -> Vec<usize> {
        g.faces()
            .iter()
            .map(|f| f.iter().filter(|&&h| self.agrees(g, h)).count())
            .collect()
    }

    /// True when every face except the outer one has an odd clockwise count.
    pub fn is_kasteleyn(&self, g: &PlanarEmbeddedGraph) -> bool {
        let outer = g.outer_face();
        self.clockwise_counts(g)
            .iter()
            .enumerate()
            .all(|(i, &c)| Some(i) == outer || c % 2 == 1)
    }
}

/// Kasteleyn orientation of a connected embedded graph.
///
/// Spanning-tree edges keep their stored direction `u -> v`. The remaining
/// edges form a spanning tree of the dual rooted at the outer face; faces are
/// closed leaf to root, each fixing its last free edge to make its own
/// clockwise count odd.
pub fn kasteleyn_orient(g: &PlanarEmbeddedGraph) -> Result<KasteleynOrientation> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = g.edges().len();
    let mut direction: Vec<Option<(usize, usize)>> = vec![None; m];
    let mut seen = vec![false; g.n()];
    if g.n() > 0 {
        seen[0] = true;
        let mut queue = VecDeque::from([1usize]);
        while let Some(v) = queue.pop_front() {
            let mut incident = g.rotation(v).to_vec();
            incident.sort_unstable();
            for e in incident {
                let Edge { u, v: w, .. } = g.edges()[e];
                let other = if u == v { w } else { u };
                if !seen[other - 1] {
                    seen[other - 1] = true;
                    direction[e] = Some((u, w));
                    queue.push_back(other);
                }
            }
        }
    }
    let faces = g.faces();
    let face_of: Vec<usize> = {
        let mut f = vec![0; 2 * m];
        for (i, face) in faces.iter().enumerate() {
            for &h in face {
                f[h] = i;
            }
        }
        f
    };
    let outer = g.outer_face();
    let mut free = vec![0usize; faces.len()];
    for e in 0..m {
        if direction[e].is_none() {
            free[face_of[2 * e]] += 1;
            free[face_of[2 * e + 1]] += 1;
        }
    }
    let mut queue: VecDeque<usize> = (0..faces.len())
        .filter(|&f| Some(f) != outer && free[f] == 1)
        .collect();
    while let Some(f) = queue.pop_front() {
        if free[f] != 1 {
            continue;
        }
        let mut clockwise = 0;
        let mut pending = None;
        for &h in &faces[f] {
            match direction[h / 2] {
                Some(dir) => clockwise += usize::from(g.half_edge(h) == dir),
                None => pending = Some(h),
            }
        }
        let h = pending.expect("face has one free edge");
        let (a, b) = g.half_edge(h);
        direction[h / 2] = Some(if clockwise % 2 == 0 { (a, b) } else { (b, a) });
        free[f] = 0;
        let other = face_of[h ^ 1];
        free[other] -= 1;
        if Some(other) != outer && free[other] == 1 {
            queue.push_back(other);
        }
    }
    let direction = direction
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| {
            Error::NotPlanar("non-tree edges do not form a dual spanning tree".into())
        })?;
    Ok(KasteleynOrientation { direction })
}

/// Pfaffian of the Kasteleyn matrix with every edge variable replaced by the
/// value of its color class.
#[derive(Debug, Clone)]
pub struct MatchingEvaluator {
    n: usize,
    /// `(from, to, class)` with 0-based endpoints.
    entries: Vec<(usize, usize, Option<usize>)>,
    k: usize,
}

impl MatchingEvaluator {
    /// Kasteleyn matrix with the classes in `zeroed` set to 0, the rest to 1.
    pub fn matrix(&self, zeroed: u64) -> SkewMatrix {
        let mut m = IntMatrix::zeros(self.n);
        for &(from, to, class) in &self.entries {
            if class.map(|c| zeroed >> c & 1 == 0).unwrap_or(true) {
                m.set(from, to, 1);
                m.set(to, from, -1);
            }
        }
        SkewMatrix::new(m).expect("Kasteleyn matrix is skew-symmetric with even dimension")
    }
}

impl SievedEvaluator for MatchingEvaluator {
    fn num_classes(&self) -> usize {
        self.k
    }

    fn evaluate_mask(&self, zeroed: u64) -> BigInt {
        if self.n % 2 == 1 {
            return BigInt::from(0);
        }
        signed_pfaffian(&self.matrix(zeroed))
    }
}

/// Matching evaluator over edge-color classes.
pub fn build_matching_evaluator(
    g: &PlanarEmbeddedGraph,
    orientation: &KasteleynOrientation,
    c: &ColorPartition,
) -> Result<MatchingEvaluator> {
    if c.num_vars() != g.num_colors() {
        return Err(Error::Input(format!(
            "partition covers {} variables, graph has {} colors",
            c.num_vars(),
            g.num_colors()
        )));
    }
    let entries = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let (from, to) = orientation.direction(i);
            (from - 1, to - 1, c.class_of(e.color - 1))
        })
        .collect();
    Ok(MatchingEvaluator {
        n: g.n(),
        entries,
        k: c.k(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::bareiss_det;
    use crate::corpus::{cycle_graph, grid_graph};
    use crate::oracle::enum_perfect_matchings;
    use num_traits::Signed;

    const C4: &str = "p planar 4 4\ne 1 2 1\ne 2 3 1\ne 3 4 1\ne 4 1 1\nr 1 2 1 4\nr 2 2 2 1\nr 3 2 3 2\nr 4 2 4 3\n";

    #[test]
    fn four_cycle_faces() {
        let g = PlanarEmbeddedGraph::parse(C4).unwrap();
        assert_eq!(g.faces().len(), 2);
        assert_eq!(PlanarEmbeddedGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn k4_has_four_faces() {
        // K4 drawn with vertex 4 inside triangle 1-2-3, rotations counterclockwise
        let text = "p planar 4 6\n\
            e 1 2 1\ne 2 3 1\ne 3 1 1\ne 1 4 1\ne 2 4 1\ne 3 4 1\n\
            r 1 3 1 4 3\nr 2 3 2 5 1\nr 3 3 3 6 2\nr 4 3 6 4 5\n";
        let g = PlanarEmbeddedGraph::parse(text).unwrap();
        assert_eq!(g.faces().len(), 4);
        assert!(g.faces().iter().all(|f| f.len() == 3));
    }

    #[test]
    fn k5_fails_euler() {
        let mut edges = vec![];
        for u in 1..=5 {
            for v in u + 1..=5 {
                edges.push(Edge { u, v, color: 1 });
            }
        }
        let rotation: Vec<Vec<usize>> = (1..=5)
            .map(|v| {
                (0..edges.len())
                    .filter(|&i| edges[i].u == v || edges[i].v == v)
                    .collect()
            })
            .collect();
        assert!(matches!(
            PlanarEmbeddedGraph::new(5, edges, rotation),
            Err(Error::NotPlanar(_))
        ));
    }

    #[test]
    fn bad_rotations_are_parse_errors() {
        let missing = "p planar 2 1\ne 1 2 1\nr 1 1 1\n";
        assert!(matches!(
            PlanarEmbeddedGraph::parse(missing),
            Err(Error::Parse { .. })
        ));
        let dup = "p planar 2 1\ne 1 2 1\nr 1 1 1\nr 1 1 1\nr 2 1 1\n";
        assert!(matches!(
            PlanarEmbeddedGraph::parse(dup),
            Err(Error::Parse { line: 4, .. })
        ));
        let wrong = "p planar 3 2\ne 1 2 1\ne 2 3 1\nr 1 1 2\nr 2 2 1 2\nr 3 1 2\n";
        assert!(matches!(
            PlanarEmbeddedGraph::parse(wrong),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn single_edge_orientation() {
        let g = PlanarEmbeddedGraph::parse("p planar 2 1\ne 1 2 1\nr 1 1 1\nr 2 1 1\n").unwrap();
        let o = kasteleyn_orient(&g).unwrap();
        assert!(o.is_kasteleyn(&g));
        let c = ColorPartition::identity(1);
        let e = build_matching_evaluator(&g, &o, &c).unwrap();
        assert_eq!(e.evaluate_zeroed(0).unwrap().abs(), BigInt::from(1));
    }

    #[test]
    fn four_cycle_orientation_and_matchings() {
        let g = PlanarEmbeddedGraph::parse(C4).unwrap();
        let o = kasteleyn_orient(&g).unwrap();
        let counts = o.clockwise_counts(&g);
        let outer = g.outer_face().unwrap();
        assert_eq!(
            counts
                .iter()
                .enumerate()
                .filter(|&(i, c)| i != outer && c % 2 == 1)
                .count(),
            1
        );
        let e = build_matching_evaluator(&g, &o, &ColorPartition::identity(1)).unwrap();
        assert_eq!(e.evaluate_zeroed(0).unwrap().abs(), BigInt::from(2));
        assert_eq!(e.evaluate_zeroed(1).unwrap(), BigInt::from(0));
    }

    #[test]
    fn disconnected_rejected() {
        let g = PlanarEmbeddedGraph::parse(
            "p planar 4 2\ne 1 2 1\ne 3 4 1\nr 1 1 1\nr 2 1 1\nr 3 1 2\nr 4 1 2\n",
        )
        .unwrap();
        assert_eq!(kasteleyn_orient(&g), Err(Error::Disconnected));
    }

    #[test]
    fn cycles_and_grids_count_matchings() {
        let mut graphs = vec![];
        for n in 3..=10 {
            graphs.push(cycle_graph(n));
        }
        for r in 1..=4 {
            for c in 1..=4 {
                if r * c > 1 {
                    graphs.push(grid_graph(r, c));
                }
            }
        }
        for g in graphs {
            let o = kasteleyn_orient(&g).unwrap();
            assert!(o.is_kasteleyn(&g));
            let e = build_matching_evaluator(&g, &o, &ColorPartition::identity(g.num_colors()))
                .unwrap();
            let pf = e.evaluate_zeroed(0).unwrap();
            let count = enum_perfect_matchings(&g).unwrap().count();
            assert_eq!(pf.abs(), BigInt::from(count), "{}", g.to_text());
            if g.n() % 2 == 0 {
                let m = e.matrix(0);
                assert_eq!(bareiss_det(m.matrix()), &pf * &pf);
            }
        }
    }
}
