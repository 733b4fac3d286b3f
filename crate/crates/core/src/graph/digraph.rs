use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One arc `tail -> head`, optionally carrying a color in `1..=t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub color: Option<usize>,
}

/// Directed multigraph on vertices `1..=n` with optional arc colors.
///
/// Colors are normalized on construction to the contiguous range `1..=t`,
/// numbered in order of first occurrence. Either every arc is colored or
/// none is. The arc order given at construction is the canonical iteration
/// order used everywhere.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcColoredDigraph {
    n: usize,
    arcs: Vec<Arc>,
    colors: usize,
}

impl ArcColoredDigraph {
    pub fn new(n: usize, arcs: Vec<Arc>) -> Result<Self> {
        let colored = arcs.first().map(|a| a.color.is_some()).unwrap_or(false);
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut out = Vec::with_capacity(arcs.len());
        for (idx, a) in arcs.iter().enumerate() {
            if a.tail == 0 || a.tail > n || a.head == 0 || a.head > n {
                return Err(Error::Invariant(format!(
                    "arc {} ({} -> {}) has an endpoint outside 1..={}",
                    idx + 1,
                    a.tail,
                    a.head,
                    n
                )));
            }
            if a.tail == a.head {
                return Err(Error::Invariant(format!(
                    "arc {} is a self-loop at {}",
                    idx + 1,
                    a.tail
                )));
            }
            if a.color.is_some() != colored {
                return Err(Error::Invariant("mixed colored and uncolored arcs".into()));
            }
            let color = match a.color {
                Some(0) => return Err(Error::Invariant(format!("arc {} has color 0", idx + 1))),
                Some(c) => {
                    let next = remap.len() + 1;
                    Some(*remap.entry(c).or_insert(next))
                }
                None => None,
            };
            out.push(Arc {
                tail: a.tail,
                head: a.head,
                color,
            });
        }
        Ok(Self {
            n,
            arcs: out,
            colors: remap.len(),
        })
    }

    /// Uncolored digraph from `(tail, head)` pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Self::new(
            n,
            pairs
                .iter()
                .map(|&(tail, head)| Arc {
                    tail,
                    head,
                    color: None,
                })
                .collect(),
        )
    }

    /// Colored digraph from `(tail, head, color)` triples.
    pub fn from_colored(n: usize, triples: &[(usize, usize, usize)]) -> Result<Self> {
        Self::new(
            n,
            triples
                .iter()
                .map(|&(tail, head, c)| Arc {
                    tail,
                    head,
                    color: Some(c),
                })
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, idx: usize) -> Arc {
        self.arcs[idx]
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    /// Number of distinct colors `t` (0 for an uncolored digraph).
    pub fn num_colors(&self) -> usize {
        self.colors
    }

    pub fn is_colored(&self) -> bool {
        self.arcs
            .first()
            .map(|a| a.color.is_some())
            .unwrap_or(false)
    }

    /// Copy of the digraph without arc `idx`. Colors are renormalized.
    pub fn without_arc(&self, idx: usize) -> Self {
        let arcs = self
            .arcs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, a)| *a)
            .collect();
        Self::new(self.n, arcs).expect("removing an arc keeps the digraph valid")
    }

    /// Indices of arcs entering each vertex, indexed by `vertex - 1`.
    pub fn in_arcs(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for (i, a) in self.arcs.iter().enumerate() {
            lists[a.head - 1].push(i);
        }
        lists
    }

    /// Indices of arcs leaving each vertex, indexed by `vertex - 1`.
    pub fn out_arcs(&self) -> Vec<Vec<usize>> {
        let mut lists = vec![Vec::new(); self.n];
        for (i, a) in self.arcs.iter().enumerate() {
            lists[a.tail - 1].push(i);
        }
        lists
    }

    /// Parses the line-oriented digraph format:
    ///
    /// ```text
    /// p digraph <n> <m>
    /// a <tail> <head> [<color>]
    /// ```
    ///
    /// `#` starts a comment; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut arcs = Vec::new();
        let mut colored: Option<bool> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let fields: Vec<&str> = content.split_whitespace().collect();
            let err = |msg: &str| Error::Parse {
                line,
                msg: msg.to_string(),
            };
            match fields[0] {
                "p" => {
                    if header.is_some() {
                        return Err(err("duplicate header"));
                    }
                    if fields.len() != 4 || fields[1] != "digraph" {
                        return Err(err("expected `p digraph <n> <m>`"));
                    }
                    let n = parse_num(fields[2], line)?;
                    let m = parse_num(fields[3], line)?;
                    header = Some((n, m));
                }
                "a" => {
                    let (n, _) = header.ok_or_else(|| err("arc before header"))?;
                    if fields.len() != 3 && fields.len() != 4 {
                        return Err(err("expected `a <tail> <head> [<color>]`"));
                    }
                    let tail = parse_num(fields[1], line)?;
                    let head = parse_num(fields[2], line)?;
                    if tail == 0 || tail > n || head == 0 || head > n {
                        return Err(err(&format!("vertex id out of range 1..={n}")));
                    }
                    if tail == head {
                        return Err(err("self-loop"));
                    }
                    let color = if fields.len() == 4 {
                        let c = parse_num(fields[3], line)?;
                        if c == 0 {
                            return Err(err("colors must be positive"));
                        }
                        Some(c)
                    } else {
                        None
                    };
                    match colored {
                        None => colored = Some(color.is_some()),
                        Some(prev) if prev != color.is_some() => {
                            return Err(err("mixed colored and uncolored arcs"));
                        }
                        _ => {}
                    }
                    arcs.push(Arc { tail, head, color });
                }
                other => return Err(err(&format!("unknown line type `{other}`"))),
            }
        }
        let (n, m) = header.ok_or(Error::Parse {
            line: 0,
            msg: "missing header".into(),
        })?;
        if arcs.len() != m {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("header declares {m} arcs, found {}", arcs.len()),
            });
        }
        Self::new(n, arcs)
    }

    /// Serializes in the format accepted by [`ArcColoredDigraph::parse`].
    pub fn to_text(&self) -> String {
        let mut s = format!("p digraph {} {}\n", self.n, self.arcs.len());
        for a in &self.arcs {
            match a.color {
                Some(c) => writeln!(s, "a {} {} {}", a.tail, a.head, c),
                None => writeln!(s, "a {} {}", a.tail, a.head),
            }
            .unwrap();
        }
        s
    }
}

pub(crate) fn parse_num(field: &str, line: usize) -> Result<usize> {
    field.parse::<usize>().map_err(|_| Error::Parse {
        line,
        msg: format!("expected a nonnegative integer, got `{field}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_graph() {
        let d = ArcColoredDigraph::parse("p digraph 2 1\na 1 2").unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(
            d.arcs(),
            &[Arc {
                tail: 1,
                head: 2,
                color: None
            }]
        );
        assert!(!d.is_colored());
    }

    #[test]
    fn colors_remapped_in_first_occurrence_order() {
        let d = ArcColoredDigraph::parse("p digraph 3 3\na 1 2 7\na 2 3 7\na 1 3 9").unwrap();
        let colors: Vec<_> = d.arcs().iter().map(|a| a.color.unwrap()).collect();
        assert_eq!(colors, vec![1, 1, 2]);
        assert_eq!(d.num_colors(), 2);
    }

    #[test]
    fn self_loop_rejected_with_line() {
        let e = ArcColoredDigraph::parse("p digraph 2 1\na 1 1").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 2,
                msg: "self-loop".into()
            }
        );
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            ("p digraph 2 1\na 1 3", 2),
            ("p digraph 3 2\na 1 2 1\na 2 3", 3),
            ("p digraph 2 1\nb 1 2", 2),
            ("a 1 2\np digraph 2 1", 1),
            ("p digraph 2 1\na 1 x", 2),
        ] {
            match ArcColoredDigraph::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("expected parse error for {text:?}, got {other:?}"),
            }
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let d = ArcColoredDigraph::parse("# demo\np digraph 3 2 # header\n\na 1 2\na 2 3 # tail\n")
            .unwrap();
        assert_eq!(d.num_arcs(), 2);
    }

    #[test]
    fn arc_count_mismatch() {
        assert!(ArcColoredDigraph::parse("p digraph 3 3\na 1 2\na 2 3").is_err());
    }
}
