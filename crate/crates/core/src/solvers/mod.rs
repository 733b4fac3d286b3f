//! Decision procedures for k-Internal Out-Branching, k-Colorful
//! Out-Branching and planar k-Colorful Perfect Matching.
//!
//! Each solver walks a deterministic sequence of colorings. In polynomial
//! space every coloring comes from a perfect hash family and is checked with
//! [`sieve_full`]; in exponential space colorings come from a greedy
//! splitter with `⌈α*k⌉` colors and are checked with [`sieve_shared`].

mod colorful;
mod kiob;

use std::str::FromStr;
use std::time::{Duration, Instant};

use num_traits::Zero;

pub use colorful::{solve_colorful_ob, solve_colorful_ob_exact, solve_colorful_pm};
pub use kiob::{recover_kiob_witness, solve_kiob};

use crate::error::{Error, Result};
use crate::graph::{ArcColoredDigraph, OutBranching};
use crate::sieve::{shared_table_bytes, sieve_full, sieve_shared, SievedEvaluator};

/// Splitter stretch for exponential-space mode.
pub const ALPHA_STAR: f64 = 1.302017;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpaceMode {
    #[default]
    Poly,
    Exp,
}

impl FromStr for SpaceMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "poly" => Ok(Self::Poly),
            "exp" => Ok(Self::Exp),
            other => Err(Error::Input(format!(
                "unknown space mode `{other}` (expected poly or exp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub k: usize,
    pub space_mode: SpaceMode,
    pub alpha_star: f64,
    /// Bytes available to one exponential-space sieve table.
    pub memory_budget: u64,
    /// Worker threads; 0 uses the rayon default.
    pub parallelism: usize,
    /// Attach a witness to yes answers where supported.
    pub recover: bool,
}

impl SolveConfig {
    pub fn new(k: usize) -> Self {
        Self {
            k,
            space_mode: SpaceMode::Poly,
            alpha_star: ALPHA_STAR,
            memory_budget: 256 << 20,
            parallelism: 0,
            recover: false,
        }
    }

    pub fn with_mode(mut self, mode: SpaceMode) -> Self {
        self.space_mode = mode;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.parallelism = threads;
        self
    }

    pub fn with_recover(mut self, recover: bool) -> Self {
        self.recover = recover;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::Input("k must be at least 1".into()));
        }
        if self.alpha_star.is_nan() || self.alpha_star <= 1.0 {
            return Err(Error::Input(format!(
                "alpha_star must exceed 1, got {}",
                self.alpha_star
            )));
        }
        Ok(())
    }

    /// Runs `f` on a pool with the configured worker count.
    fn install<T: Send>(&self, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        self.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.parallelism)
            .build()
            .map_err(|e| Error::Input(format!("cannot start worker pool: {e}")))?;
        pool.install(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SolveStats {
    /// Sieve invocations, one per (root, guide, coloring).
    pub colorings: u64,
    /// Evaluator calls across all sieves.
    pub evals: u64,
    pub elapsed: Duration,
    /// Largest exponential-space table, in bytes.
    pub peak_table_bytes: u128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    OutBranching(OutBranching),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub answer: bool,
    pub witness: Option<Witness>,
    pub stats: SolveStats,
    /// Why the answer was decided without sieving, if it was.
    pub reason: Option<String>,
}

impl SolveReport {
    fn no(reason: impl Into<String>, started: Instant) -> Self {
        Self {
            answer: false,
            witness: None,
            stats: SolveStats {
                elapsed: started.elapsed(),
                ..Default::default()
            },
            reason: Some(reason.into()),
        }
    }
}

/// One sieve over a coloring: all `k` classes in poly mode, or the
/// mandatory classes plus `extra` more in exp mode.
fn run_sieve<E: SievedEvaluator>(
    e: &E,
    mode: SpaceMode,
    mandatory: u64,
    extra: usize,
    cfg: &SolveConfig,
    stats: &mut SolveStats,
) -> Result<bool> {
    let t = e.num_classes();
    stats.colorings += 1;
    stats.evals += 1u64 << t;
    match mode {
        SpaceMode::Poly => Ok(!sieve_full(e)?.is_zero()),
        SpaceMode::Exp => {
            stats.peak_table_bytes = stats.peak_table_bytes.max(shared_table_bytes(t));
            Ok(sieve_shared(e, extra, mandatory, cfg.memory_budget)?.is_some())
        }
    }
}

/// Self-reduction: drops every arc whose removal keeps the instance
/// positive. A minimal positive instance is exactly one out-branching.
fn reduce_to_branching(
    d: &ArcColoredDigraph,
    positive: impl Fn(&ArcColoredDigraph) -> Result<bool>,
) -> Result<OutBranching> {
    let mut kept: Vec<usize> = (0..d.num_arcs()).collect();
    for a in 0..d.num_arcs() {
        let trial: Vec<usize> = kept.iter().copied().filter(|&x| x != a).collect();
        if positive(&subgraph(d, &trial))? {
            kept = trial;
        }
    }
    OutBranching::from_arcs(d, &kept)
}

/// The digraph on the same vertices with only the listed arcs.
fn subgraph(d: &ArcColoredDigraph, arcs: &[usize]) -> ArcColoredDigraph {
    ArcColoredDigraph::new(d.n(), arcs.iter().map(|&a| d.arc(a)).collect())
        .expect("arcs of a valid digraph")
}
