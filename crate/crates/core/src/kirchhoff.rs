//! Out-branching polynomials as black-box evaluators.
//!
//! The Kirchhoff matrix of a multigraph has `K[j][j] = Σ x_a` over arcs `a`
//! entering `j` and `K[i][j] = -Σ x_a` over arcs `a = (i, j)`. The minor
//! with the root's row and column removed has determinant equal to the sum,
//! over out-branchings rooted there, of the product of their arc variables.
//! Arc variables are substituted by the value of a color class, so the
//! determinant is evaluated directly and the polynomial is never expanded.

use num_bigint::BigInt;

use crate::algebra::{bareiss_det, IntMatrix};
use crate::error::{Error, Result};
use crate::graph::ArcColoredDigraph;
use crate::partition::ColorPartition;
use crate::sieve::SievedEvaluator;

/// Kirchhoff minor evaluator where every arc carries the class of some variable.
#[derive(Debug, Clone)]
pub struct KirchhoffEvaluator {
    /// Minor dimension (`n - 1`).
    dim: usize,
    root: usize,
    /// `(row of tail, column of head, class)` in minor coordinates; `None`
    /// stands for the root, whose row and column are deleted.
    arcs: Vec<(Option<usize>, Option<usize>, Option<usize>)>,
    k: usize,
}

impl KirchhoffEvaluator {
    fn build(
        d: &ArcColoredDigraph,
        root: usize,
        k: usize,
        class_of_arc: impl Fn(usize) -> Option<usize>,
    ) -> Result<Self> {
        if root == 0 || root > d.n() {
            return Err(Error::Input(format!("root {root} outside 1..={}", d.n())));
        }
        // vertices renumbered contiguously after deleting the root
        let index = |v: usize| -> Option<usize> {
            match v.cmp(&root) {
                std::cmp::Ordering::Less => Some(v - 1),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(v - 2),
            }
        };
        let arcs = d
            .arcs()
            .iter()
            .enumerate()
            .map(|(i, a)| (index(a.tail), index(a.head), class_of_arc(i)))
            .collect();
        Ok(Self {
            dim: d.n() - 1,
            root,
            arcs,
            k,
        })
    }

    pub fn root(&self) -> usize {
        self.root
    }

    /// Minor with every class in `zeroed` set to 0 and the rest to 1.
    pub fn minor(&self, zeroed: u64) -> IntMatrix {
        let mut acc = vec![0i64; self.dim * self.dim];
        for &(tail, head, class) in &self.arcs {
            let on = class.map(|c| zeroed >> c & 1 == 0).unwrap_or(true);
            if !on {
                continue;
            }
            if let Some(h) = head {
                acc[h * self.dim + h] += 1;
                if let Some(t) = tail {
                    acc[t * self.dim + h] -= 1;
                }
            }
        }
        let mut m = IntMatrix::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                m.set(i, j, acc[i * self.dim + j]);
            }
        }
        m
    }
}

impl SievedEvaluator for KirchhoffEvaluator {
    fn num_classes(&self) -> usize {
        self.k
    }

    fn evaluate_mask(&self, zeroed: u64) -> BigInt {
        bareiss_det(&self.minor(zeroed))
    }
}

/// Vertex-variable evaluator: each arc `(i, j)` takes the class of its tail `i`,
/// so monomials record the internal vertices of each out-branching.
pub fn build_kirchhoff_evaluator(
    d: &ArcColoredDigraph,
    root: usize,
    c: &ColorPartition,
) -> Result<KirchhoffEvaluator> {
    if c.num_vars() != d.n() {
        return Err(Error::Input(format!(
            "partition covers {} variables, digraph has {} vertices",
            c.num_vars(),
            d.n()
        )));
    }
    KirchhoffEvaluator::build(d, root, c.k(), |i| c.class_of(d.arc(i).tail - 1))
}

/// Arc-color evaluator: each arc takes the class of its color.
pub fn build_color_evaluator(
    d: &ArcColoredDigraph,
    root: usize,
    c: &ColorPartition,
) -> Result<KirchhoffEvaluator> {
    if !d.is_colored() && d.num_arcs() > 0 {
        return Err(Error::Input(
            "color evaluator needs a colored digraph".into(),
        ));
    }
    if c.num_vars() != d.num_colors() {
        return Err(Error::Input(format!(
            "partition covers {} variables, digraph has {} colors",
            c.num_vars(),
            d.num_colors()
        )));
    }
    KirchhoffEvaluator::build(d, root, c.k(), |i| {
        c.class_of(d.arc(i).color.expect("colored") - 1)
    })
}
