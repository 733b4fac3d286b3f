use std::sync::Arc;
use std::time::{Duration, Instant};

use super::greedy::greedy_splitter_with_colors;
use super::interval::{interval_splitter, IntervalSplitter};
use super::reduction::{reduction_family, ReductionFamily};
use super::{binomial_u128, prime_at_least, IndexedSplitter, SplitterProfile, SplitterSpec};
use crate::error::{Error, Result};

/// Smallest `k` for which perfect hash families use two composition levels.
pub const TWO_LEVEL_THRESHOLD: usize = 16;

/// Largest `C(u,k)·p^k` work estimate accepted for one greedy inner family.
const GREEDY_BUDGET: u128 = 400_000_000;

/// The rounded collection of inner splitters a composition draws from,
/// looked up by their exact `(u, k_p, t_p)` spec.
#[derive(Clone, Default)]
pub struct InnerFamilies {
    members: Vec<Arc<dyn IndexedSplitter>>,
}

impl InnerFamilies {
    pub fn new(members: Vec<Arc<dyn IndexedSplitter>>) -> Self {
        Self { members }
    }

    /// Builds one family per distinct slot shape of an `(n, k, t)` composition
    /// with `ell` blocks.
    pub fn build<F>(n: usize, k: usize, t: usize, ell: usize, mut make: F) -> Result<Self>
    where
        F: FnMut(SplitterSpec) -> Result<Arc<dyn IndexedSplitter>>,
    {
        let u = universe(n, k);
        let mut members: Vec<Arc<dyn IndexedSplitter>> = Vec::new();
        for (kp, tp) in slot_shapes(k, t, ell)? {
            let spec = SplitterSpec::new(u, kp, tp)?;
            if !members.iter().any(|m| m.spec() == spec) {
                members.push(make(spec)?);
            }
        }
        Ok(Self { members })
    }

    fn find(&self, spec: SplitterSpec) -> Result<Arc<dyn IndexedSplitter>> {
        self.members
            .iter()
            .find(|m| m.spec() == spec)
            .cloned()
            .ok_or_else(|| Error::Composition(format!("no inner family with spec {spec:?}")))
    }
}

fn universe(n: usize, k: usize) -> usize {
    if k == 1 {
        1
    } else {
        n.min(k * k)
    }
}

/// `(k_p, t_p)` per slot: `⌊k/ℓ⌋` on the first `ℓ - (k mod ℓ)` slots and
/// `⌈k/ℓ⌉` after, likewise for `t`.
fn slot_shapes(k: usize, t: usize, ell: usize) -> Result<Vec<(usize, usize)>> {
    if ell == 0 || ell > k {
        return Err(Error::Composition(format!(
            "need 1 <= ell <= k, got ell={ell}, k={k}"
        )));
    }
    if t < k {
        return Err(Error::Composition(format!("need t >= k, got t={t}, k={k}")));
    }
    let j = ell - k % ell;
    let h = ell - t % ell;
    Ok((0..ell)
        .map(|p| {
            let kp = if p < j { k / ell } else { k.div_ceil(ell) };
            let tp = if p < h { t / ell } else { t.div_ceil(ell) };
            (kp, tp)
        })
        .collect())
}

#[derive(Debug, Clone)]
enum Reducer {
    /// `n <= k²`: elements keep their own index.
    Identity,
    /// `k = 1`: everything maps to the single value 1.
    Collapse,
    Modular(ReductionFamily),
}

/// Composed `(n, k, t)`-splitter: a reduction to `[u]` with `u <= k²`, an
/// interval partition of `[u]` into `ℓ` blocks, and one inner vector per
/// block whose colors are shifted into disjoint ranges.
#[derive(Clone)]
pub struct ComposedSplitter {
    spec: SplitterSpec,
    u: usize,
    reducer: Reducer,
    blocks: IntervalSplitter,
    slots: Vec<Arc<dyn IndexedSplitter>>,
    offsets: Vec<u32>,
    size: u128,
    init: Duration,
}

pub fn compose(
    inner: &InnerFamilies,
    n: usize,
    k: usize,
    t: usize,
    ell: usize,
) -> Result<ComposedSplitter> {
    let start = Instant::now();
    let spec = SplitterSpec::new(n, k, t)?;
    let shapes = slot_shapes(k, t, ell)?;
    let u = universe(n, k);
    let reducer = if k == 1 {
        Reducer::Collapse
    } else if n <= k * k {
        Reducer::Identity
    } else {
        Reducer::Modular(reduction_family(n, k)?)
    };
    let blocks = interval_splitter(u, k, ell)?;
    let mut slots = Vec::with_capacity(ell);
    let mut offsets = Vec::with_capacity(ell);
    let mut offset = 0u32;
    for &(kp, tp) in &shapes {
        slots.push(inner.find(SplitterSpec::new(u, kp, tp)?)?);
        offsets.push(offset);
        offset += tp as u32;
    }
    let reducer_size = match &reducer {
        Reducer::Modular(a) => a.size(),
        _ => 1,
    };
    let size = slots
        .iter()
        .try_fold(reducer_size.checked_mul(blocks.size()), |acc, s| {
            Some(acc?.checked_mul(s.size()))
        })
        .flatten()
        .ok_or_else(|| {
            Error::Spec(format!(
                "family size for n={n}, k={k}, t={t} overflows u128"
            ))
        })?;
    Ok(ComposedSplitter {
        spec,
        u,
        reducer,
        blocks,
        slots,
        offsets,
        size,
        init: start.elapsed(),
    })
}

impl ComposedSplitter {
    pub fn num_blocks(&self) -> usize {
        self.slots.len()
    }

    pub fn inner(&self) -> &[Arc<dyn IndexedSplitter>] {
        &self.slots
    }
}

impl IndexedSplitter for ComposedSplitter {
    fn spec(&self) -> SplitterSpec {
        self.spec
    }

    fn size(&self) -> u128 {
        self.size
    }

    fn query_into(&self, i: u128, out: &mut [u32]) {
        let mut rest = i;
        let mut digit = |radix: u128| {
            let d = rest % radix;
            rest /= radix;
            d
        };
        match &self.reducer {
            Reducer::Identity => out.iter_mut().zip(1u32..).for_each(|(o, x)| *o = x),
            Reducer::Collapse => out.fill(1),
            Reducer::Modular(a) => a.query_into(digit(a.size()), out),
        }
        let u = self.u;
        let mut block_of = vec![0u32; u];
        self.blocks
            .query_into(digit(self.blocks.size()), &mut block_of);
        let mut inner = vec![0u32; u * self.slots.len()];
        for (s, chunk) in self.slots.iter().zip(inner.chunks_exact_mut(u)) {
            s.query_into(digit(s.size()), chunk);
        }
        for o in out.iter_mut() {
            let a = *o as usize - 1;
            let p = block_of[a] as usize - 1;
            *o = inner[p * u + a] + self.offsets[p];
        }
    }

    fn profile(&self) -> SplitterProfile {
        let inner = self.slots.iter().map(|s| s.profile()).collect::<Vec<_>>();
        SplitterProfile {
            m: self.size,
            t_in: "k^O(1) n log n + t_in(inner)".into(),
            s_in: "k^O(1) n log n + s_in(inner)".into(),
            t_qr: "O(ell t_qr(inner) + n)".into(),
            s_qr: "O(ell s_qr(inner) + ell k^2 + log n)".into(),
            measured_init: self.init + inner.iter().map(|p| p.measured_init).sum::<Duration>(),
            measured_init_bytes: std::mem::size_of::<Self>()
                + inner.iter().map(|p| p.measured_init_bytes).sum::<usize>(),
        }
    }
}

fn greedy_cost(u: usize, kp: usize) -> u128 {
    let p = prime_at_least(u as u64 + 1) as u128;
    binomial_u128(u as u128, kp as u128)
        .and_then(|b| b.checked_mul(p.checked_pow(kp as u32)?))
        .unwrap_or(u128::MAX)
}

/// Fewest blocks whose greedy inner families all fit the construction budget.
fn single_level_blocks(n: usize, k: usize, t: usize) -> usize {
    let u = universe(n, k);
    (1..=k)
        .find(|&ell| {
            slot_shapes(k, t, ell).is_ok_and(|shapes| {
                shapes
                    .iter()
                    .all(|&(kp, _)| greedy_cost(u, kp) <= GREEDY_BUDGET)
            })
        })
        .unwrap_or(k)
}

fn greedy_inner(spec: SplitterSpec) -> Result<Arc<dyn IndexedSplitter>> {
    Ok(Arc::new(greedy_splitter_with_colors(
        spec.n, spec.k, spec.t,
    )?))
}

fn single_level(n: usize, k: usize, t: usize) -> Result<ComposedSplitter> {
    let ell = single_level_blocks(n, k, t);
    compose(
        &InnerFamilies::build(n, k, t, ell, greedy_inner)?,
        n,
        k,
        t,
        ell,
    )
}

fn ceil_log2(k: usize) -> usize {
    (usize::BITS - (k.max(2) - 1).leading_zeros()) as usize
}

/// `(n, k, t)`-splitter with `t >= k`, using two composition levels once
/// `k >= two_level_from`.
pub fn splitter_with_threshold(
    n: usize,
    k: usize,
    t: usize,
    two_level_from: usize,
) -> Result<ComposedSplitter> {
    SplitterSpec::new(n, k, t)?;
    if t < k {
        return Err(Error::Spec(format!("need t >= k, got t={t}, k={k}")));
    }
    if k < two_level_from.max(2) {
        return single_level(n, k, t);
    }
    let lg = ceil_log2(k);
    let outer = lg.clamp(1, k);
    let inner_blocks = k.div_ceil(lg * lg);
    let inner = InnerFamilies::build(n, k, t, outer, |spec| {
        let ell = inner_blocks.clamp(1, spec.k);
        let families = InnerFamilies::build(spec.n, spec.k, spec.t, ell, greedy_inner)?;
        Ok(Arc::new(compose(&families, spec.n, spec.k, spec.t, ell)?) as Arc<dyn IndexedSplitter>)
    })?;
    compose(&inner, n, k, t, outer)
}

/// Polynomial-space `(n, k, t)`-splitter.
pub fn splitter(n: usize, k: usize, t: usize) -> Result<ComposedSplitter> {
    splitter_with_threshold(n, k, t, TWO_LEVEL_THRESHOLD)
}

/// Polynomial-space `(n, k)`-perfect hash family.
pub fn perfect_hash_family(n: usize, k: usize) -> Result<ComposedSplitter> {
    splitter(n, k, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::verify_splitter;
    use crate::splitters::{enumerate, interval_splitter};

    fn covered<S: IndexedSplitter>(s: &S) -> bool {
        verify_splitter(enumerate(s), s.spec()).unwrap().covered
    }

    #[test]
    fn shapes_sum_up() {
        for k in 1..10 {
            for t in k..14 {
                for ell in 1..=k {
                    let shapes = slot_shapes(k, t, ell).unwrap();
                    assert_eq!(shapes.iter().map(|s| s.0).sum::<usize>(), k);
                    assert_eq!(shapes.iter().map(|s| s.1).sum::<usize>(), t);
                    assert!(shapes.iter().all(|&(kp, tp)| kp <= tp && kp >= 1));
                }
            }
        }
    }

    #[test]
    fn one_block_over_eight() {
        let inner = InnerFamilies::build(8, 2, 2, 1, greedy_inner).unwrap();
        let s = compose(&inner, 8, 2, 2, 1).unwrap();
        assert!(covered(&s));
    }

    #[test]
    fn twelve_three_three() {
        let inner = InnerFamilies::build(12, 3, 3, 1, greedy_inner).unwrap();
        let s = compose(&inner, 12, 3, 3, 1).unwrap();
        assert!(covered(&s));
    }

    #[test]
    fn k_one_is_a_single_constant() {
        let s = perfect_hash_family(6, 1).unwrap();
        assert_eq!(s.size(), 1);
        assert_eq!(s.query(0), vec![1; 6]);
    }

    #[test]
    fn several_blocks_cover() {
        for (n, k, t, ell) in [(12, 3, 3, 2), (12, 4, 4, 2), (10, 3, 4, 3), (20, 4, 5, 2)] {
            let inner = InnerFamilies::build(n, k, t, ell, greedy_inner).unwrap();
            let s = compose(&inner, n, k, t, ell).unwrap();
            assert_eq!(s.num_blocks(), ell);
            assert!(covered(&s), "n={n} k={k} t={t} ell={ell}");
        }
    }

    #[test]
    fn reduction_layer_covers() {
        let s = perfect_hash_family(30, 3).unwrap();
        assert!(covered(&s));
    }

    #[test]
    fn two_levels_cover_at_small_k() {
        let s = splitter_with_threshold(12, 4, 4, 4).unwrap();
        assert!(s.inner().iter().all(|i| i.spec().n == 12));
        assert!(covered(&s));
        let s = splitter_with_threshold(10, 3, 4, 3).unwrap();
        assert!(covered(&s));
    }

    #[test]
    fn mismatched_inner_is_rejected() {
        let wrong: Arc<dyn IndexedSplitter> = Arc::new(interval_splitter(9, 2, 2).unwrap());
        let inner = InnerFamilies::new(vec![wrong]);
        assert!(matches!(
            compose(&inner, 8, 2, 2, 1),
            Err(Error::Composition(_))
        ));
        assert!(matches!(
            compose(&inner, 8, 2, 2, 3),
            Err(Error::Composition(_))
        ));
        assert!(matches!(
            compose(&inner, 8, 3, 2, 1),
            Err(Error::Composition(_))
        ));
    }

    #[test]
    fn all_small_perfect_hash_families() {
        for n in 1..=12 {
            for k in 1..=n.min(4) {
                let s = perfect_hash_family(n, k).unwrap();
                assert!(covered(&s), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn query_values_in_range() {
        let s = splitter(15, 3, 5).unwrap();
        for i in (0..s.size()).step_by(7) {
            assert!(s.query(i).iter().all(|&c| (1..=5).contains(&c)));
        }
    }
}
