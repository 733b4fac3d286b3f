use super::is_prime;
use crate::error::{Error, Result};

/// Joffe's k-wise independent sample space over `p` coordinates: one vector
/// per coefficient assignment `(X_1, ..., X_k) ∈ Z_p^k`, with coordinate `i`
/// (1-based) equal to `((X_1 + i X_2 + ... + i^{k-1} X_k) mod p) mod t + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JoffeSpace {
    p: u64,
    k: usize,
    t: usize,
}

pub fn joffe_space(p: u64, k: usize, t: usize) -> Result<JoffeSpace> {
    if !is_prime(p) {
        return Err(Error::Spec(format!("{p} is not prime")));
    }
    if k == 0 || k > t || t as u64 >= p {
        return Err(Error::Spec(format!(
            "need 1 <= k <= t < p, got k={k}, t={t}, p={p}"
        )));
    }
    Ok(JoffeSpace { p, k, t })
}

impl JoffeSpace {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Number of vectors, `p^k`.
    pub fn len(&self) -> u128 {
        (self.p as u128).pow(self.k as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn coefficients(&self, index: u128) -> Vec<u64> {
        let mut coeffs = Vec::with_capacity(self.k);
        let mut rest = index;
        for _ in 0..self.k {
            coeffs.push((rest % self.p as u128) as u64);
            rest /= self.p as u128;
        }
        coeffs
    }

    /// Writes the first `out.len()` coordinates of the vector whose
    /// coefficients are the base-`p` digits of `index`.
    pub fn vector_into(&self, index: u128, out: &mut [u32]) {
        self.fill(&self.coefficients(index), out);
    }

    /// Coordinates `Y_1..Y_p` of vector `index` before the reduction to
    /// `[t]`, as values in `Z_p`.
    pub fn raw_values(&self, index: u128) -> Vec<u64> {
        let coeffs = self.coefficients(index);
        (1..=self.p).map(|i| self.evaluate(&coeffs, i)).collect()
    }

    fn evaluate(&self, coeffs: &[u64], i: u64) -> u64 {
        // Horner from the highest coefficient
        coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &x| (acc * (i % self.p) + x) % self.p)
    }

    fn fill(&self, coeffs: &[u64], out: &mut [u32]) {
        for (slot, i) in out.iter_mut().zip(1u64..) {
            *slot = (self.evaluate(coeffs, i) % self.t as u64) as u32 + 1;
        }
    }

    /// Streams all `p^k` vectors of length `p` in index order.
    pub fn iter(&self) -> JoffeIter {
        self.iter_prefix(self.p as usize)
    }

    /// Streams all vectors truncated to their first `n` coordinates.
    pub fn iter_prefix(&self, n: usize) -> JoffeIter {
        JoffeIter {
            space: *self,
            coeffs: vec![0; self.k],
            n,
            done: false,
        }
    }
}

/// Odometer over coefficient assignments; holds only the current digits.
pub struct JoffeIter {
    space: JoffeSpace,
    coeffs: Vec<u64>,
    n: usize,
    done: bool,
}

impl Iterator for JoffeIter {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.done {
            return None;
        }
        let mut out = vec![0; self.n];
        self.space.fill(&self.coeffs, &mut out);
        self.done = true;
        for c in self.coeffs.iter_mut() {
            *c += 1;
            if *c < self.space.p {
                self.done = false;
                break;
            }
            *c = 0;
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashMap;

    /// Exhaustive joint tally of the raw values `Y_i ∈ Z_p` over every
    /// k-tuple of coordinates: k-wise independence means each joint outcome
    /// appears exactly once per `p^k` assignments.
    fn assert_k_wise_independent(p: u64, k: usize) {
        let space = joffe_space(p, k, k).unwrap();
        let raw: Vec<Vec<u64>> = (0..space.len()).map(|idx| space.raw_values(idx)).collect();
        for coords in crate::oracle::KSubsets::new(p as usize, k) {
            let mut tally: HashMap<Vec<u64>, usize> = HashMap::new();
            for y in &raw {
                *tally
                    .entry(coords.iter().map(|&c| y[c]).collect())
                    .or_default() += 1;
            }
            assert_eq!(tally.len(), (p as usize).pow(k as u32));
            assert!(tally.values().all(|&c| c == 1));
        }
    }

    #[test]
    fn independence() {
        assert_k_wise_independent(5, 2);
        assert_k_wise_independent(7, 2);
        assert_k_wise_independent(7, 3);
    }

    #[test]
    fn constant_vectors_when_k_is_one() {
        let s = joffe_space(5, 1, 3).unwrap();
        let all: Vec<_> = s.iter().collect();
        assert_eq!(all.len(), 5);
        for v in &all {
            assert!(v.iter().all(|&c| c == v[0]));
        }
    }

    #[test]
    fn marginals_are_almost_uniform() {
        let s = joffe_space(7, 2, 3).unwrap();
        let all: Vec<_> = s.iter().collect();
        let total = all.len() as f64;
        for i in 0..7 {
            for r in 1..=3u32 {
                let freq = all.iter().filter(|v| v[i] == r).count() as f64 / total;
                assert!((freq - 1.0 / 3.0).abs() <= 1.0 / 7.0 + 1e-12);
            }
        }
    }

    #[test]
    fn random_access_matches_stream() {
        let s = joffe_space(7, 3, 4).unwrap();
        for (idx, v) in s.iter_prefix(5).enumerate() {
            let mut w = vec![0; 5];
            s.vector_into(idx as u128, &mut w);
            assert_eq!(v, w);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(joffe_space(6, 2, 3).is_err());
        assert!(joffe_space(7, 3, 2).is_err());
        assert!(joffe_space(7, 2, 7).is_err());
    }
}
