//! Command-line front end.
//!
//! Every command prints `YES` or `NO` first and a `stats` line last, and
//! exits with 0 (yes), 1 (no) or 2 (error).

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::graph::ArcColoredDigraph;
use crate::oracle::{enum_out_branchings, enum_perfect_matchings, max_internal, verify_splitter};
use crate::planar::PlanarEmbeddedGraph;
use crate::solvers::{
    solve_colorful_ob, solve_colorful_ob_exact, solve_colorful_pm, solve_kiob, SolveConfig,
    SolveReport, SpaceMode, Witness,
};
use crate::splitters::{enumerate_range, splitter, IndexedSplitter};

#[derive(Parser, Debug)]
#[command(
    name = "colorsieve",
    version,
    about = "Deterministic color-coding solvers and splitter tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// k-Internal Out-Branching on an uncolored digraph.
    Iob {
        #[command(flatten)]
        solve: SolveArgs,
        /// Print the arcs of a witnessing out-branching.
        #[arg(long)]
        recover: bool,
    },
    /// k-Colorful Out-Branching on an arc-colored digraph.
    ColorfulOb {
        #[command(flatten)]
        solve: SolveArgs,
        /// The digraph uses exactly k colors; skip hashing.
        #[arg(long)]
        exact_k: bool,
        #[arg(long)]
        recover: bool,
    },
    /// k-Colorful Perfect Matching on an embedded planar graph.
    ColorfulPm {
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Build a polynomial-space (n, k, t)-splitter.
    Splitter {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Color count; defaults to k (a perfect hash family).
        #[arg(long)]
        t: Option<usize>,
        /// Stream at most this many members.
        #[arg(long)]
        limit: Option<u128>,
        /// Check the splitting property exhaustively.
        #[arg(long)]
        verify: bool,
        /// Print members as `v <colors...>`.
        #[arg(long)]
        enumerate: bool,
    },
    /// Brute-force answers for fixture generation.
    Oracle {
        #[arg(value_enum)]
        query: OracleQuery,
        #[arg(long)]
        input: PathBuf,
        /// Threshold for the `iob` query.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value_t = Space::Poly)]
    space: Space,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Space {
    Poly,
    Exp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OracleQuery {
    Iob,
    ObCount,
    PmEnum,
    MaxInternal,
}

impl SolveArgs {
    fn config(&self, recover: bool) -> SolveConfig {
        let mode = match self.space {
            Space::Poly => SpaceMode::Poly,
            Space::Exp => SpaceMode::Exp,
        };
        SolveConfig::new(self.k)
            .with_mode(mode)
            .with_threads(self.threads)
            .with_recover(recover)
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    match execute(cli.command, &mut buf) {
        Ok(yes) => {
            let _ = out.write_all(&buf);
            if yes {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn verdict(out: &mut Vec<u8>, yes: bool) {
    out.extend_from_slice(if yes { b"YES\n" } else { b"NO\n" });
}

fn stats_line(out: &mut Vec<u8>, colorings: impl std::fmt::Display, evals: u64, started: Instant) {
    let ms = started.elapsed().as_millis();
    out.extend_from_slice(
        format!("stats colorings={colorings} evals={evals} ms={ms}\n").as_bytes(),
    );
}

fn report(
    out: &mut Vec<u8>,
    d: Option<&ArcColoredDigraph>,
    r: &SolveReport,
    started: Instant,
) -> bool {
    verdict(out, r.answer);
    if let (Some(d), Some(Witness::OutBranching(b))) = (d, &r.witness) {
        let mut arcs = b.arcs();
        arcs.sort_unstable();
        for a in arcs {
            let arc = d.arc(a);
            out.extend_from_slice(format!("w {} {}\n", arc.tail, arc.head).as_bytes());
        }
    }
    stats_line(out, r.stats.colorings, r.stats.evals, started);
    r.answer
}

fn execute(command: Command, out: &mut Vec<u8>) -> Result<bool> {
    let started = Instant::now();
    match command {
        Command::Iob { solve, recover } => {
            let d = ArcColoredDigraph::parse(&read(&solve.input)?)?;
            if d.is_colored() {
                return Err(Error::Input(
                    "k-internal out-branching expects an uncolored digraph".into(),
                ));
            }
            let r = solve_kiob(&d, &solve.config(recover))?;
            Ok(report(out, Some(&d), &r, started))
        }
        Command::ColorfulOb {
            solve,
            exact_k,
            recover,
        } => {
            let d = ArcColoredDigraph::parse(&read(&solve.input)?)?;
            let cfg = solve.config(recover);
            let r = if exact_k {
                solve_colorful_ob_exact(&d, &cfg)?
            } else {
                solve_colorful_ob(&d, &cfg)?
            };
            Ok(report(out, Some(&d), &r, started))
        }
        Command::ColorfulPm { solve } => {
            let g = PlanarEmbeddedGraph::parse(&read(&solve.input)?)?;
            let r = solve_colorful_pm(&g, &solve.config(false))?;
            Ok(report(out, None, &r, started))
        }
        Command::Splitter {
            n,
            k,
            t,
            limit,
            verify,
            enumerate,
        } => {
            let s = splitter(n, k, t.unwrap_or(k))?;
            let end = limit.unwrap_or(u128::MAX).min(s.size());
            let mut body = Vec::new();
            let mut yes = true;
            if verify {
                let cov = verify_splitter(enumerate_range(&s, 0, end), s.spec())?;
                yes = cov.covered;
                if let Some(subset) = cov.first_uncovered {
                    let line: Vec<String> = subset.iter().map(|x| x.to_string()).collect();
                    body.extend_from_slice(format!("uncovered {}\n", line.join(" ")).as_bytes());
                }
            }
            if enumerate {
                for v in enumerate_range(&s, 0, end) {
                    let line: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                    body.extend_from_slice(format!("v {}\n", line.join(" ")).as_bytes());
                }
            }
            verdict(out, yes);
            out.extend_from_slice(format!("size {}\n", s.size()).as_bytes());
            out.extend_from_slice(&body);
            stats_line(out, s.size(), 0, started);
            Ok(yes)
        }
        Command::Oracle { query, input, k } => {
            let text = read(&input)?;
            let yes = match query {
                OracleQuery::Iob => {
                    let k = k.ok_or_else(|| Error::Input("oracle iob needs --k".into()))?;
                    let d = ArcColoredDigraph::parse(&text)?;
                    let best = max_internal(&d)?;
                    let yes = best.is_some_and(|b| b >= k);
                    verdict(out, yes);
                    yes
                }
                OracleQuery::MaxInternal => {
                    let d = ArcColoredDigraph::parse(&text)?;
                    let best = max_internal(&d)?;
                    verdict(out, best.is_some());
                    if let Some(b) = best {
                        out.extend_from_slice(format!("max_internal {b}\n").as_bytes());
                    }
                    best.is_some()
                }
                OracleQuery::ObCount => {
                    let d = ArcColoredDigraph::parse(&text)?;
                    let mut total = 0u128;
                    let mut lines = Vec::new();
                    for r in 1..=d.n() {
                        let count = enum_out_branchings(&d, r)?.count() as u128;
                        lines.extend_from_slice(format!("root {r} {count}\n").as_bytes());
                        total += count;
                    }
                    verdict(out, total > 0);
                    out.extend_from_slice(&lines);
                    out.extend_from_slice(format!("count {total}\n").as_bytes());
                    total > 0
                }
                OracleQuery::PmEnum => {
                    let g = PlanarEmbeddedGraph::parse(&text)?;
                    let matchings: Vec<Vec<usize>> = enum_perfect_matchings(&g)?.collect();
                    verdict(out, !matchings.is_empty());
                    for m in &matchings {
                        let ids: Vec<String> = m.iter().map(|e| (e + 1).to_string()).collect();
                        out.extend_from_slice(format!("m {}\n", ids.join(" ")).as_bytes());
                    }
                    out.extend_from_slice(format!("count {}\n", matchings.len()).as_bytes());
                    !matchings.is_empty()
                }
            };
            stats_line(out, 0, 0, started);
            Ok(yes)
        }
    }
}
