use std::time::{Duration, Instant};

use super::{binomial_u128, IndexedSplitter, SplitterProfile, SplitterSpec};
use crate::error::{Error, Result};

/// Interval splitter: member `i` is the `i`-th nondecreasing tuple of `t - 1`
/// cut positions `c_1 <= ... <= c_{t-1}` in `[n]` (lexicographic order), and
/// assigns position `x` the color `1 + #{j : c_j <= x}`, so color `j` covers
/// the `j`-th interval. Nondecreasing cuts allow empty intervals, which makes
/// every block-size pattern whose last block is nonempty reachable.
#[derive(Debug, Clone)]
pub struct IntervalSplitter {
    spec: SplitterSpec,
    size: u128,
    init: Duration,
}

/// Builds the interval family over `[n]` with `t` colors.
pub fn interval_splitter(n: usize, k: usize, t: usize) -> Result<IntervalSplitter> {
    let start = Instant::now();
    let spec = SplitterSpec::new(n, k, t)?;
    if t > n {
        return Err(Error::Spec(format!(
            "interval splitter needs t <= n, got t={t}, n={n}"
        )));
    }
    // nondecreasing (t-1)-tuples over [n] <-> (t-1)-subsets of [n + t - 2]
    let size = binomial_u128((n + t - 2) as u128, (t - 1) as u128)
        .ok_or_else(|| Error::Spec("interval family size overflows".into()))?;
    Ok(IntervalSplitter {
        spec,
        size,
        init: start.elapsed(),
    })
}

impl IntervalSplitter {
    /// Cut positions of member `i`.
    pub fn cuts(&self, mut i: u128) -> Vec<usize> {
        let r = self.spec.t - 1;
        let universe = (self.spec.n + self.spec.t - 2) as u128;
        let mut cuts = Vec::with_capacity(r);
        let mut low: u128 = 1;
        for j in 0..r {
            let rest = (r - j - 1) as u128;
            let mut v = low;
            loop {
                let block =
                    binomial_u128(universe - v, rest).expect("fits: bounded by the family size");
                if i < block {
                    break;
                }
                i -= block;
                v += 1;
            }
            // strictly increasing d_j back to nondecreasing c_j = d_j - j
            cuts.push((v - j as u128) as usize);
            low = v + 1;
        }
        cuts
    }
}

impl IndexedSplitter for IntervalSplitter {
    fn spec(&self) -> SplitterSpec {
        self.spec
    }

    fn size(&self) -> u128 {
        self.size
    }

    fn query_into(&self, i: u128, out: &mut [u32]) {
        let cuts = self.cuts(i);
        let mut color = 1u32;
        let mut next = 0;
        for (x, slot) in out.iter_mut().enumerate() {
            while next < cuts.len() && cuts[next] <= x + 1 {
                color += 1;
                next += 1;
            }
            *slot = color;
        }
    }

    fn profile(&self) -> SplitterProfile {
        SplitterProfile {
            m: self.size,
            t_in: "O(t log n)".into(),
            s_in: "O(t log n)".into(),
            t_qr: "O(n t log n)".into(),
            s_qr: "O(t log n)".into(),
            measured_init: self.init,
            measured_init_bytes: std::mem::size_of::<Self>(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_splitter;
    use crate::splitters::enumerate;

    #[test]
    fn four_two_two() {
        let s = interval_splitter(4, 2, 2).unwrap();
        assert_eq!(s.size(), 4);
        let all: Vec<Vec<u32>> = enumerate(&s).collect();
        assert_eq!(
            all,
            vec![
                vec![2, 2, 2, 2],
                vec![1, 2, 2, 2],
                vec![1, 1, 2, 2],
                vec![1, 1, 1, 2]
            ]
        );
        assert!(verify_splitter(all, s.spec()).unwrap().covered);
    }

    #[test]
    fn one_color_is_all_ones() {
        let s = interval_splitter(5, 3, 1).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.query(0), vec![1; 5]);
    }

    #[test]
    fn staircase_present_when_n_equals_t() {
        let s = interval_splitter(4, 4, 4).unwrap();
        assert!(enumerate(&s).any(|v| v == vec![1, 2, 3, 4]));
        assert!(verify_splitter(enumerate(&s), s.spec()).unwrap().covered);
    }

    #[test]
    fn tuples_are_distinct_and_nondecreasing() {
        let s = interval_splitter(5, 2, 4).unwrap();
        let mut seen = std::collections::HashSet::new();
        for i in 0..s.size() {
            let c = s.cuts(i);
            assert!(c.windows(2).all(|w| w[0] <= w[1]));
            assert!(c.iter().all(|&x| (1..=5).contains(&x)));
            assert!(seen.insert(c));
        }
    }

    #[test]
    fn covers_small_parameter_grid() {
        for n in 1..=8 {
            for k in 1..=n.min(4) {
                for t in 1..=n.min(5) {
                    let s = interval_splitter(n, k, t).unwrap();
                    let cov = verify_splitter(enumerate(&s), s.spec()).unwrap();
                    assert!(cov.covered, "n={n} k={k} t={t}: {:?}", cov.first_uncovered);
                }
            }
        }
    }

    #[test]
    fn rejects_too_many_colors() {
        assert!(interval_splitter(3, 2, 4).is_err());
    }
}
