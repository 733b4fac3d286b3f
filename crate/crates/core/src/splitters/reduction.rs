use std::time::{Duration, Instant};

use super::{prime_at_least, IndexedSplitter, SplitterProfile, SplitterSpec};
use crate::error::Result;

/// `{x ↦ ((a·x mod p) mod k²) + 1 : a ∈ [p-1]}` for the smallest prime
/// `p > n`: an `(n, k, k²)` family injective on every k-subset under some `a`.
#[derive(Debug, Clone)]
pub struct ReductionFamily {
    spec: SplitterSpec,
    p: u64,
    init: Duration,
}

pub fn reduction_family(n: usize, k: usize) -> Result<ReductionFamily> {
    let start = Instant::now();
    let spec = SplitterSpec::new(n, k, k * k)?;
    let p = prime_at_least(n as u64 + 1);
    Ok(ReductionFamily {
        spec,
        p,
        init: start.elapsed(),
    })
}

impl ReductionFamily {
    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Color of element `x` (0-based) under member `i`.
    pub fn color(&self, i: u128, x: usize) -> u32 {
        let a = i as u64 + 1;
        let m = (self.spec.k * self.spec.k) as u64;
        ((a * (x as u64 + 1) % self.p) % m) as u32 + 1
    }
}

impl IndexedSplitter for ReductionFamily {
    fn spec(&self) -> SplitterSpec {
        self.spec
    }

    fn size(&self) -> u128 {
        (self.p - 1) as u128
    }

    fn query_into(&self, i: u128, out: &mut [u32]) {
        for (x, slot) in out.iter_mut().enumerate() {
            *slot = self.color(i, x);
        }
    }

    fn profile(&self) -> SplitterProfile {
        SplitterProfile {
            m: self.size(),
            t_in: "O(n^1.5)".into(),
            s_in: "O(log n)".into(),
            t_qr: "O(n)".into(),
            s_qr: "O(log n)".into(),
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
    fn pairs_over_eight() {
        let s = reduction_family(8, 2).unwrap();
        assert!(verify_splitter(enumerate(&s), s.spec()).unwrap().covered);
    }

    #[test]
    fn triples_over_ten() {
        let s = reduction_family(10, 3).unwrap();
        assert_eq!(s.prime(), 11);
        assert_eq!(s.size(), 10);
        let cov = verify_splitter(enumerate(&s), s.spec()).unwrap();
        assert!(cov.covered);
    }

    #[test]
    fn k_one_has_valid_colors() {
        let s = reduction_family(5, 1).unwrap();
        assert!(enumerate(&s).all(|v| v.iter().all(|&c| c == 1)));
    }

    #[test]
    fn injective_for_larger_parameters() {
        for (n, k) in [(20, 3), (30, 4)] {
            let s = reduction_family(n, k).unwrap();
            assert!(
                verify_splitter(enumerate(&s), s.spec()).unwrap().covered,
                "n={n} k={k}"
            );
        }
    }
}
