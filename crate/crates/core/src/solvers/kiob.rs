use std::collections::HashMap;
use std::time::Instant;

use super::{
    reduce_to_branching, run_sieve, SolveConfig, SolveReport, SolveStats, SpaceMode, Witness,
};
use crate::error::{Error, Result};
use crate::graph::{
    exchange_out_branching, has_out_branching, maximum_matching, ArcColoredDigraph, OutBranching,
};
use crate::kirchhoff::build_kirchhoff_evaluator;
use crate::oracle::KSubsets;
use crate::partition::{ClassSource, ColorPartition};
use crate::splitters::{greedy_splitter, perfect_hash_family, IndexedSplitter};

struct Decision {
    answer: bool,
    stats: SolveStats,
    reason: Option<String>,
    /// Constructed directly when the matching alone certifies the answer.
    direct: Option<OutBranching>,
}

/// Decides whether `d` has an out-branching with at least `cfg.k` internal
/// vertices.
pub fn solve_kiob(d: &ArcColoredDigraph, cfg: &SolveConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.install(|| {
        let decision = decide(d, cfg)?;
        let witness = if decision.answer && cfg.recover {
            Some(Witness::OutBranching(recover(d, cfg, decision.direct)?))
        } else {
            None
        };
        let mut stats = decision.stats;
        stats.elapsed = started.elapsed();
        Ok(SolveReport {
            answer: decision.answer,
            witness,
            stats,
            reason: decision.reason,
        })
    })
}

/// Out-branching of `d` with at least `k` internal vertices, found by
/// deleting arcs while the instance stays positive.
pub fn recover_kiob_witness(
    d: &ArcColoredDigraph,
    k: usize,
    cfg: &SolveConfig,
) -> Result<OutBranching> {
    let cfg = SolveConfig { k, ..cfg.clone() };
    cfg.install(|| {
        let decision = decide(d, &cfg)?;
        if !decision.answer {
            return Err(Error::NoOutBranching(format!(
                "no out-branching with {k} internal vertices"
            )));
        }
        recover(d, &cfg, decision.direct)
    })
}

fn recover(
    d: &ArcColoredDigraph,
    cfg: &SolveConfig,
    direct: Option<OutBranching>,
) -> Result<OutBranching> {
    let b = match direct {
        Some(b) => b,
        None => reduce_to_branching(d, |sub| Ok(decide(sub, cfg)?.answer))?,
    };
    b.validate(d)?;
    if b.num_internal(d) < cfg.k {
        return Err(Error::Invariant(format!(
            "recovered branching has {} internal vertices, expected at least {}",
            b.num_internal(d),
            cfg.k
        )));
    }
    Ok(b)
}

fn decide(d: &ArcColoredDigraph, cfg: &SolveConfig) -> Result<Decision> {
    let k = cfg.k;
    let mut stats = SolveStats::default();
    let roots = has_out_branching(d);
    if roots.is_empty() {
        return Ok(Decision {
            answer: false,
            stats,
            reason: Some("digraph has no out-branching".into()),
            direct: None,
        });
    }
    let m = maximum_matching(d);
    let t = m.len();
    if t > k {
        // every matching arc keeps an internal endpoint after the exchange
        let b = exchange_out_branching(d, &m)?;
        let reason = format!("maximum matching of size {t} exceeds k");
        return Ok(Decision {
            answer: true,
            stats,
            reason: Some(reason),
            direct: Some(b),
        });
    }
    let matched = m.vertices(d);
    let free: Vec<usize> = (1..=d.n())
        .filter(|v| matched.binary_search(v).is_err())
        .collect();
    let mut families: HashMap<usize, Box<dyn IndexedSplitter>> = HashMap::new();

    for &root in &roots {
        for c in 0..=t.min(k - t) {
            let hashed = k - t - c;
            if hashed > free.len() {
                continue;
            }
            if hashed > 0 && !families.contains_key(&hashed) {
                let family: Box<dyn IndexedSplitter> = match cfg.space_mode {
                    SpaceMode::Poly => Box::new(perfect_hash_family(free.len(), hashed)?),
                    SpaceMode::Exp => {
                        Box::new(greedy_splitter(free.len(), hashed, cfg.alpha_star)?)
                    }
                };
                families.insert(hashed, family);
            }
            for chosen in KSubsets::new(t, c) {
                let (mut class_of, guide) = guide_classes(d, m.arcs(), &chosen);
                let mandatory = (1u64 << guide) - 1;
                let Some(family) = families.get(&hashed) else {
                    let partition = ColorPartition::new(class_of, vec![ClassSource::Guide; guide])?;
                    let e = build_kirchhoff_evaluator(d, root, &partition)?;
                    if run_sieve(&e, cfg.space_mode, mandatory, 0, cfg, &mut stats)? {
                        return Ok(Decision {
                            answer: true,
                            stats,
                            reason: None,
                            direct: None,
                        });
                    }
                    continue;
                };
                let colors = family.spec().t;
                let mut sources = vec![ClassSource::Guide; guide];
                sources.extend(std::iter::repeat_n(ClassSource::Hashed, colors));
                let mut vector = vec![0u32; free.len()];
                for i in 0..family.size() {
                    family.query_into(i, &mut vector);
                    for (&v, &col) in free.iter().zip(&vector) {
                        class_of[v - 1] = Some(guide + col as usize - 1);
                    }
                    let partition = ColorPartition::new(class_of.clone(), sources.clone())?;
                    let e = build_kirchhoff_evaluator(d, root, &partition)?;
                    if run_sieve(&e, cfg.space_mode, mandatory, hashed, cfg, &mut stats)? {
                        return Ok(Decision {
                            answer: true,
                            stats,
                            reason: None,
                            direct: None,
                        });
                    }
                }
            }
        }
    }
    Ok(Decision {
        answer: false,
        stats,
        reason: None,
        direct: None,
    })
}

/// Guide classes for the matching `arcs` with the arcs at positions `chosen`
/// marked doubly internal: one singleton class per endpoint of a chosen arc,
/// then one shared class per remaining arc. Returns the per-vertex classes
/// and the number of guide classes.
fn guide_classes(
    d: &ArcColoredDigraph,
    arcs: &[usize],
    chosen: &[usize],
) -> (Vec<Option<usize>>, usize) {
    let mut class_of = vec![None; d.n()];
    let mut next = 0;
    for &pos in chosen {
        let a = d.arc(arcs[pos]);
        class_of[a.tail - 1] = Some(next);
        class_of[a.head - 1] = Some(next + 1);
        next += 2;
    }
    for (pos, &idx) in arcs.iter().enumerate() {
        if chosen.binary_search(&pos).is_err() {
            let a = d.arc(idx);
            class_of[a.tail - 1] = Some(next);
            class_of[a.head - 1] = Some(next);
            next += 1;
        }
    }
    (class_of, next)
}
