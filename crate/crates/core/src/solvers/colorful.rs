use std::time::Instant;

use super::{
    reduce_to_branching, run_sieve, SolveConfig, SolveReport, SolveStats, SpaceMode, Witness,
};
use crate::error::{Error, Result};
use crate::graph::{has_out_branching, ArcColoredDigraph};
use crate::kirchhoff::build_color_evaluator;
use crate::partition::ColorPartition;
use crate::planar::{build_matching_evaluator, kasteleyn_orient, PlanarEmbeddedGraph};
use crate::splitters::{greedy_splitter, perfect_hash_family, IndexedSplitter};

/// Hash family over `colors` color values for the configured space mode.
fn color_family(colors: usize, cfg: &SolveConfig) -> Result<Box<dyn IndexedSplitter>> {
    Ok(match cfg.space_mode {
        SpaceMode::Poly => Box::new(perfect_hash_family(colors, cfg.k)?),
        SpaceMode::Exp => Box::new(greedy_splitter(colors, cfg.k, cfg.alpha_star)?),
    })
}

fn check_colored(d: &ArcColoredDigraph) -> Result<()> {
    if d.num_arcs() > 0 && !d.is_colored() {
        return Err(Error::Input(
            "colorful out-branching needs every arc colored".into(),
        ));
    }
    Ok(())
}

/// Decides whether `d` has an out-branching whose arcs carry at least
/// `cfg.k` distinct colors.
pub fn solve_colorful_ob(d: &ArcColoredDigraph, cfg: &SolveConfig) -> Result<SolveReport> {
    let started = Instant::now();
    check_colored(d)?;
    cfg.install(|| {
        let (answer, mut stats, reason) = decide_ob(d, cfg)?;
        let witness = if answer && cfg.recover {
            let b = reduce_to_branching(d, |sub| Ok(decide_ob(sub, cfg)?.0))?;
            b.validate(d)?;
            if b.num_colors(d) < cfg.k {
                return Err(Error::Invariant(
                    "recovered branching is not colorful enough".into(),
                ));
            }
            Some(Witness::OutBranching(b))
        } else {
            None
        };
        stats.elapsed = started.elapsed();
        Ok(SolveReport {
            answer,
            witness,
            stats,
            reason,
        })
    })
}

fn decide_ob(
    d: &ArcColoredDigraph,
    cfg: &SolveConfig,
) -> Result<(bool, SolveStats, Option<String>)> {
    let mut stats = SolveStats::default();
    let colors = d.num_colors();
    if colors < cfg.k {
        return Ok((false, stats, Some(format!("only {colors} colors present"))));
    }
    let roots = has_out_branching(d);
    if roots.is_empty() {
        return Ok((false, stats, Some("digraph has no out-branching".into())));
    }
    let family = color_family(colors, cfg)?;
    let mut vector = vec![0u32; colors];
    for &root in &roots {
        for i in 0..family.size() {
            family.query_into(i, &mut vector);
            let partition = ColorPartition::from_vector(&vector, family.spec().t)?;
            let e = build_color_evaluator(d, root, &partition)?;
            if run_sieve(&e, cfg.space_mode, 0, cfg.k, cfg, &mut stats)? {
                return Ok((true, stats, None));
            }
        }
    }
    Ok((false, stats, None))
}

/// Colorful out-branching on a digraph with exactly `cfg.k` colors: every
/// color is its own class, so one sieve per root decides the instance.
pub fn solve_colorful_ob_exact(d: &ArcColoredDigraph, cfg: &SolveConfig) -> Result<SolveReport> {
    let started = Instant::now();
    check_colored(d)?;
    if d.num_colors() != cfg.k {
        return Err(Error::Input(format!(
            "digraph has {} colors but k = {}; use the general colorful out-branching solver",
            d.num_colors(),
            cfg.k
        )));
    }
    cfg.install(|| {
        let mut stats = SolveStats::default();
        let roots = has_out_branching(d);
        if roots.is_empty() {
            return Ok(SolveReport::no("digraph has no out-branching", started));
        }
        let partition = ColorPartition::identity(cfg.k);
        let mut answer = false;
        for &root in &roots {
            let e = build_color_evaluator(d, root, &partition)?;
            if run_sieve(&e, SpaceMode::Poly, 0, cfg.k, cfg, &mut stats)? {
                answer = true;
                break;
            }
        }
        let witness = if answer && cfg.recover {
            let general = SolveConfig {
                recover: false,
                ..cfg.clone()
            };
            let b = reduce_to_branching(d, |sub| Ok(decide_ob(sub, &general)?.0))?;
            b.validate(d)?;
            Some(Witness::OutBranching(b))
        } else {
            None
        };
        stats.elapsed = started.elapsed();
        Ok(SolveReport {
            answer,
            witness,
            stats,
            reason: None,
        })
    })
}

/// Decides whether the planar graph `g` has a perfect matching whose edges
/// carry at least `cfg.k` distinct colors.
pub fn solve_colorful_pm(g: &PlanarEmbeddedGraph, cfg: &SolveConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.install(|| {
        if g.n() % 2 == 1 {
            return Ok(SolveReport::no("odd number of vertices", started));
        }
        let colors = g.num_colors();
        if colors < cfg.k {
            return Ok(SolveReport::no(
                format!("only {colors} colors present"),
                started,
            ));
        }
        let comp = g.components();
        let count = comp.iter().max().map_or(0, |&c| c + 1);
        let mut sizes = vec![0usize; count];
        comp.iter().for_each(|&c| sizes[c] += 1);
        if sizes.iter().any(|s| s % 2 == 1) {
            return Ok(SolveReport::no(
                "a connected component has an odd number of vertices",
                started,
            ));
        }
        let orientation = kasteleyn_orient(g)?;
        let family = color_family(colors, cfg)?;
        let mut stats = SolveStats::default();
        let mut vector = vec![0u32; colors];
        let mut answer = false;
        for i in 0..family.size() {
            family.query_into(i, &mut vector);
            let partition = ColorPartition::from_vector(&vector, family.spec().t)?;
            let e = build_matching_evaluator(g, &orientation, &partition)?;
            if run_sieve(&e, cfg.space_mode, 0, cfg.k, cfg, &mut stats)? {
                answer = true;
                break;
            }
        }
        stats.elapsed = started.elapsed();
        Ok(SolveReport {
            answer,
            witness: None,
            stats,
            reason: None,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{cycle_graph, grid_graph, random_digraph, recolor};
    use crate::oracle::{max_colors, max_matching_colors};
    use rand::{Rng, SeedableRng};

    fn colored_path(c1: usize, c2: usize) -> ArcColoredDigraph {
        ArcColoredDigraph::from_colored(3, &[(1, 2, c1), (2, 3, c2)]).unwrap()
    }

    #[test]
    fn path_examples() {
        for mode in [SpaceMode::Poly, SpaceMode::Exp] {
            let cfg = SolveConfig::new(2).with_mode(mode);
            assert!(solve_colorful_ob(&colored_path(1, 2), &cfg).unwrap().answer);
            assert!(!solve_colorful_ob(&colored_path(1, 1), &cfg).unwrap().answer);
        }
    }

    #[test]
    fn exact_path_uses_four_evaluations() {
        let r = solve_colorful_ob_exact(&colored_path(1, 2), &SolveConfig::new(2)).unwrap();
        assert!(r.answer);
        assert_eq!(r.stats.evals, 4);
        assert!(solve_colorful_ob_exact(&colored_path(1, 2), &SolveConfig::new(3)).is_err());
    }

    #[test]
    fn exact_instance_missing_a_color() {
        // color 3 sits only on an arc that would close a cycle
        let d = ArcColoredDigraph::from_colored(4, &[(1, 2, 1), (2, 3, 2), (1, 4, 1), (3, 2, 3)])
            .unwrap();
        assert_eq!(max_colors(&d).unwrap(), Some(2));
        assert!(
            !solve_colorful_ob_exact(&d, &SolveConfig::new(3))
                .unwrap()
                .answer
        );
        assert!(!solve_colorful_ob(&d, &SolveConfig::new(3)).unwrap().answer);
    }

    #[test]
    fn uncolored_input_is_rejected() {
        let d = ArcColoredDigraph::from_pairs(2, &[(1, 2)]).unwrap();
        assert!(matches!(
            solve_colorful_ob(&d, &SolveConfig::new(1)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn colorful_ob_agrees_with_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..25 {
            let n = rng.gen_range(2..=6);
            let d = random_digraph(&mut rng, n, 0.45, Some(5));
            if d.num_arcs() == 0 {
                continue;
            }
            let best = max_colors(&d).unwrap();
            for k in 1..=4 {
                let expected = best.is_some_and(|b| b >= k);
                for mode in [SpaceMode::Poly, SpaceMode::Exp] {
                    let cfg = SolveConfig::new(k).with_mode(mode).with_recover(true);
                    let r = solve_colorful_ob(&d, &cfg).unwrap();
                    assert_eq!(r.answer, expected, "k={k} {mode:?}\n{}", d.to_text());
                    if let Some(Witness::OutBranching(b)) = r.witness {
                        assert!(b.num_colors(&d) >= k);
                    }
                }
                if d.num_colors() == k {
                    assert_eq!(
                        solve_colorful_ob_exact(&d, &SolveConfig::new(k))
                            .unwrap()
                            .answer,
                        expected
                    );
                }
            }
        }
    }

    #[test]
    fn four_cycle_examples() {
        let alternating = recolor(&cycle_graph(4), &[1, 2, 1, 2]);
        let lopsided = recolor(&cycle_graph(4), &[1, 2, 2, 2]);
        for mode in [SpaceMode::Poly, SpaceMode::Exp] {
            let cfg = SolveConfig::new(2).with_mode(mode);
            assert!(!solve_colorful_pm(&alternating, &cfg).unwrap().answer);
            assert!(solve_colorful_pm(&lopsided, &cfg).unwrap().answer);
        }
    }

    #[test]
    fn odd_graph_is_no() {
        let r = solve_colorful_pm(&cycle_graph(5), &SolveConfig::new(1)).unwrap();
        assert!(!r.answer && r.reason.is_some());
    }

    #[test]
    fn grids_agree_with_oracle() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        for (rows, cols) in [(2, 2), (2, 3), (3, 4), (4, 4)] {
            let g = grid_graph(rows, cols);
            let colors: Vec<usize> = (0..g.edges().len()).map(|_| rng.gen_range(1..=4)).collect();
            let g = recolor(&g, &colors);
            let best = max_matching_colors(&g).unwrap();
            for k in 1..=4 {
                let expected = best.is_some_and(|b| b >= k);
                for mode in [SpaceMode::Poly, SpaceMode::Exp] {
                    let r = solve_colorful_pm(&g, &SolveConfig::new(k).with_mode(mode)).unwrap();
                    assert_eq!(r.answer, expected, "{rows}x{cols} k={k} {mode:?}");
                }
            }
        }
    }
}
