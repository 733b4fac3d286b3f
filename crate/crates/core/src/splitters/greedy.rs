use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;

use super::joffe::joffe_space;
use super::{binomial_u128, prime_at_least, IndexedSplitter, SplitterProfile, SplitterSpec};
use crate::error::{Error, Result};
use crate::oracle::KSubsets;

/// Materialized `(n, k, t)`-splitter selected greedily from a Joffe space.
/// Every k-subset receives k distinct colors from some member.
#[derive(Debug, Clone)]
pub struct GreedySplitter {
    spec: SplitterSpec,
    family: Arc<Vec<u32>>,
    prime: u64,
    init: Duration,
}

/// Built families by `(n, k, t)`, with their primes.
type Cache = Mutex<HashMap<(usize, usize, usize), (Arc<Vec<u32>>, u64)>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Greedy splitter with `t = ⌈αk⌉` colors.
pub fn greedy_splitter(n: usize, k: usize, alpha: f64) -> Result<GreedySplitter> {
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(Error::Spec(format!("need alpha >= 1, got {alpha}")));
    }
    let t = (alpha * k as f64 - 1e-9).ceil().max(k as f64) as usize;
    greedy_splitter_with_colors(n, k, t)
}

/// Greedy splitter with an explicit color count `t >= k`.
pub fn greedy_splitter_with_colors(n: usize, k: usize, t: usize) -> Result<GreedySplitter> {
    let start = Instant::now();
    let spec = SplitterSpec::new(n, k, t)?;
    if t < k {
        return Err(Error::Spec(format!(
            "greedy splitter needs t >= k, got t={t}, k={k}"
        )));
    }
    let key = (n, k, t);
    if let Some((family, prime)) = cache().lock().unwrap().get(&key).cloned() {
        return Ok(GreedySplitter {
            spec,
            family,
            prime,
            init: start.elapsed(),
        });
    }
    let (family, prime) = build(n, k, t)?;
    let family = Arc::new(family);
    cache().lock().unwrap().insert(key, (family.clone(), prime));
    Ok(GreedySplitter {
        spec,
        family,
        prime,
        init: start.elapsed(),
    })
}

fn build(n: usize, k: usize, t: usize) -> Result<(Vec<u32>, u64)> {
    let p = prime_at_least(n.max(t + 1) as u64);
    if k == 1 {
        return Ok((vec![1; n], p));
    }
    let space = joffe_space(p, k, t)?;
    let total = binomial_u128(n as u128, k as u128).unwrap_or(u128::MAX);
    if total > crate::oracle::MAX_COVERAGE_SUBSETS {
        return Err(Error::Guard(format!(
            "greedy splitter would track {total} subsets"
        )));
    }
    let mut uncovered: Vec<u16> = KSubsets::new(n, k)
        .flat_map(|s| s.into_iter().map(|x| x as u16))
        .collect();

    // A uniformly random member rainbow-colors a fixed k-set with
    // probability at least num/den; some member always reaches that share.
    let num = BigUint::from(p - t as u64).pow(k as u32)
        * BigUint::from(binomial_u128(t as u128, k as u128).unwrap())
        * (1..=k as u64).product::<BigUint>();
    let den = BigUint::from(p).pow(k as u32) * BigUint::from(t as u64).pow(k as u32);
    let required = |remaining: usize| -> usize {
        let (q, r) = (&num * BigUint::from(remaining)).div_rem(&den);
        let q: usize = q.try_into().expect("bounded by remaining");
        q + usize::from(r != BigUint::ZERO)
    };

    let mut family = Vec::new();
    let mut relaxed = false;
    loop {
        let mut added = false;
        for v in space.iter_prefix(n) {
            if uncovered.is_empty() {
                break;
            }
            let gain = uncovered.chunks_exact(k).filter(|s| rainbow(&v, s)).count();
            let need = if relaxed {
                1
            } else {
                required(uncovered.len() / k).max(1)
            };
            if gain >= need {
                retain_uncovered(&mut uncovered, k, &v);
                family.extend_from_slice(&v);
                added = true;
            }
        }
        if uncovered.is_empty() {
            break;
        }
        if !added {
            if relaxed {
                return Err(Error::Invariant(
                    "Joffe space failed to cover every subset".into(),
                ));
            }
            relaxed = true;
        }
    }
    Ok((family, p))
}

fn rainbow(v: &[u32], subset: &[u16]) -> bool {
    for (a, &x) in subset.iter().enumerate() {
        for &y in &subset[a + 1..] {
            if v[x as usize] == v[y as usize] {
                return false;
            }
        }
    }
    true
}

fn retain_uncovered(uncovered: &mut Vec<u16>, k: usize, v: &[u32]) {
    let mut write = 0;
    for read in 0..uncovered.len() / k {
        let s = read * k;
        if !rainbow(v, &uncovered[s..s + k]) {
            uncovered.copy_within(s..s + k, write);
            write += k;
        }
    }
    uncovered.truncate(write);
}

/// `⌈e^{2tk/n} · t^k / (C(t,k) k!) · k ln(2n)⌉`, the size guarantee of the
/// greedy construction with `t` colors.
pub fn greedy_size_bound(n: usize, k: usize, t: usize) -> u128 {
    let (nf, kf, tf) = (n as f64, k as f64, t as f64);
    let binom = binomial_u128(t as u128, k as u128).unwrap() as f64;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let x = (2.0 * tf * kf / nf).exp() * tf.powi(k as i32) / (binom * fact);
    (x * kf * (2.0 * nf).ln()).ceil() as u128
}

impl GreedySplitter {
    /// Prime `p` of the underlying Joffe space.
    pub fn prime(&self) -> u64 {
        self.prime
    }
}

impl IndexedSplitter for GreedySplitter {
    fn spec(&self) -> SplitterSpec {
        self.spec
    }

    fn size(&self) -> u128 {
        (self.family.len() / self.spec.n) as u128
    }

    fn query_into(&self, i: u128, out: &mut [u32]) {
        let n = self.spec.n;
        let s = i as usize * n;
        out.copy_from_slice(&self.family[s..s + n]);
    }

    fn profile(&self) -> SplitterProfile {
        SplitterProfile {
            m: self.size(),
            t_in: "O(m k^2 C(n,k) p^k)".into(),
            s_in: "O(m n + C(n,k) k)".into(),
            t_qr: "O(n)".into(),
            s_qr: "O(n)".into(),
            measured_init: self.init,
            measured_init_bytes: self.family.len() * std::mem::size_of::<u32>(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_splitter;
    use crate::splitters::enumerate;

    #[test]
    fn six_two_one() {
        let s = greedy_splitter(6, 2, 1.0).unwrap();
        assert_eq!(s.spec().t, 2);
        assert!(verify_splitter(enumerate(&s), s.spec()).unwrap().covered);
    }

    #[test]
    fn k_one_is_a_single_constant() {
        let s = greedy_splitter(7, 1, 1.302017).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.query(0), vec![1; 7]);
    }

    #[test]
    fn nine_two_one_within_bound() {
        let s = greedy_splitter(9, 2, 1.0).unwrap();
        assert!(s.size() <= greedy_size_bound(9, 2, 2));
        assert!(verify_splitter(enumerate(&s), s.spec()).unwrap().covered);
    }

    #[test]
    fn stretched_colors_cover() {
        for (n, k) in [(5, 2), (8, 3), (10, 3), (7, 4)] {
            let s = greedy_splitter(n, k, 1.302017).unwrap();
            assert_eq!(s.spec().t, (1.302017 * k as f64).ceil() as usize);
            assert!(
                verify_splitter(enumerate(&s), s.spec()).unwrap().covered,
                "n={n} k={k}"
            );
        }
    }

    #[test]
    fn universe_smaller_than_colors() {
        let s = greedy_splitter_with_colors(3, 3, 5).unwrap();
        assert!(verify_splitter(enumerate(&s), s.spec()).unwrap().covered);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(greedy_splitter(3, 4, 1.0).is_err());
        assert!(greedy_splitter(5, 2, 0.5).is_err());
        assert!(greedy_splitter_with_colors(5, 3, 2).is_err());
    }
}
