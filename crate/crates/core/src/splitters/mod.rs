//! Splitters and perfect hash families as indexed data structures.
//!
//! An `(n, k, t)`-splitter is a family of vectors in `[t]^n` such that every
//! k-subset of `[n]` is partitioned almost equally by some member; with
//! `t = k` it is an `(n, k)`-perfect hash family. An *indexed* splitter
//! answers "give me vector `i`" without materializing the family, so members
//! can be enumerated with polynomial delay. Colors are 1-based throughout.
//! Query indices are 0-based.

mod compose;
mod greedy;
mod interval;
mod joffe;
mod reduction;

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Duration;

pub use compose::{
    compose, perfect_hash_family, splitter, splitter_with_threshold, ComposedSplitter,
    InnerFamilies, TWO_LEVEL_THRESHOLD,
};
pub use greedy::{greedy_size_bound, greedy_splitter, greedy_splitter_with_colors, GreedySplitter};
pub use interval::{interval_splitter, IntervalSplitter};
pub use joffe::{joffe_space, JoffeSpace};
pub use reduction::{reduction_family, ReductionFamily};

use crate::error::{Error, Result};

/// Parameters of an `(n, k, t)`-splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SplitterSpec {
    pub n: usize,
    pub k: usize,
    pub t: usize,
}

impl SplitterSpec {
    pub fn new(n: usize, k: usize, t: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Spec(format!("need 1 <= k <= n, got n={n}, k={k}")));
        }
        if t == 0 {
            return Err(Error::Spec("need t >= 1".into()));
        }
        Ok(Self { n, k, t })
    }
}

/// Size and resource profile of an indexed splitter: the declared asymptotic
/// classes plus what was measured while building it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitterProfile {
    pub m: u128,
    pub t_in: String,
    pub s_in: String,
    pub t_qr: String,
    pub s_qr: String,
    pub measured_init: Duration,
    /// Bytes held by the structure after initialization.
    pub measured_init_bytes: usize,
}

/// A splitter presented as a random-access data structure.
pub trait IndexedSplitter: Send + Sync {
    fn spec(&self) -> SplitterSpec;

    /// Family size `m`.
    fn size(&self) -> u128;

    /// Writes vector `i` (`0 <= i < size`) into `out`, which has length `n`.
    fn query_into(&self, i: u128, out: &mut [u32]);

    fn profile(&self) -> SplitterProfile;

    fn query(&self, i: u128) -> Vec<u32> {
        let mut out = vec![0; self.spec().n];
        self.query_into(i, &mut out);
        out
    }
}

/// Deterministic stream `query(0), query(1), ...` over an indexed splitter.
pub struct Enumerate<'a, S: IndexedSplitter + ?Sized> {
    splitter: &'a S,
    next: u128,
    end: u128,
}

/// Streams every member in index order.
pub fn enumerate<S: IndexedSplitter + ?Sized>(s: &S) -> Enumerate<'_, S> {
    Enumerate {
        splitter: s,
        next: 0,
        end: s.size(),
    }
}

/// Streams the members with index in `start..end`.
pub fn enumerate_range<S: IndexedSplitter + ?Sized>(
    s: &S,
    start: u128,
    end: u128,
) -> Enumerate<'_, S> {
    Enumerate {
        splitter: s,
        next: start,
        end: end.min(s.size()),
    }
}

impl<S: IndexedSplitter + ?Sized> Iterator for Enumerate<'_, S> {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        if self.next >= self.end {
            return None;
        }
        let v = self.splitter.query(self.next);
        self.next += 1;
        Some(v)
    }
}

/// Hands out member indices to concurrent workers; every index is claimed once.
pub struct SharedCursor<'a, S: IndexedSplitter + ?Sized> {
    splitter: &'a S,
    next: AtomicU64,
    end: u64,
}

impl<'a, S: IndexedSplitter + ?Sized> SharedCursor<'a, S> {
    pub fn new(splitter: &'a S) -> Result<Self> {
        let end = u64::try_from(splitter.size())
            .map_err(|_| Error::Spec("family too large to share".into()))?;
        Ok(Self {
            splitter,
            next: AtomicU64::new(0),
            end,
        })
    }

    /// Claims the next index and returns it with its vector.
    pub fn claim(&self) -> Option<(u64, Vec<u32>)> {
        let i = self.next.fetch_add(1, Ordering::Relaxed);
        (i < self.end).then(|| (i, self.splitter.query(i as u128)))
    }
}

/// Single all-ones vector: an `(n, 1, t)`-splitter.
#[derive(Debug, Clone)]
pub struct ConstantSplitter {
    spec: SplitterSpec,
}

impl ConstantSplitter {
    pub fn new(n: usize, t: usize) -> Result<Self> {
        Ok(Self {
            spec: SplitterSpec::new(n, 1, t)?,
        })
    }
}

impl IndexedSplitter for ConstantSplitter {
    fn spec(&self) -> SplitterSpec {
        self.spec
    }
    fn size(&self) -> u128 {
        1
    }
    fn query_into(&self, _i: u128, out: &mut [u32]) {
        out.fill(1);
    }
    fn profile(&self) -> SplitterProfile {
        SplitterProfile {
            m: 1,
            t_in: "O(1)".into(),
            s_in: "O(1)".into(),
            t_qr: "O(n)".into(),
            s_qr: "O(1)".into(),
            measured_init: Duration::ZERO,
            measured_init_bytes: 0,
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Smallest prime `>= x`.
pub fn prime_at_least(x: u64) -> u64 {
    (x.max(2)..)
        .find(|&p| is_prime(p))
        .expect("primes are unbounded")
}

pub(crate) fn binomial_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}
