//! Inclusion–exclusion monomial sieving over black-box evaluators.
//!
//! For a polynomial `P` over class variables `y_1..y_k` and a class set `J`,
//! `Q_J(1..1) = sum_{I ⊆ J} (-1)^{|I|} P_{-I}(1..1)` is the coefficient mass
//! of monomials divisible by every `y_j`, `j ∈ J`, where `P_{-I}` sets the
//! classes in `I` to zero and all others to one.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest class count a sieve accepts (subsets are machine-word bitmasks).
pub const MAX_CLASSES: usize = 62;

/// A polynomial over `k` color classes, available only as a black box that
/// evaluates it with a given class set zeroed and every other class at one.
pub trait SievedEvaluator: Sync {
    fn num_classes(&self) -> usize;

    /// Value with the classes in bitmask `zeroed` set to 0 and the rest to 1.
    fn evaluate_mask(&self, zeroed: u64) -> BigInt;

    /// Checked variant of [`SievedEvaluator::evaluate_mask`].
    fn evaluate_zeroed(&self, zeroed: u64) -> Result<BigInt> {
        let k = self.num_classes();
        if k < 64 && zeroed >> k != 0 {
            let index = 63 - zeroed.leading_zeros() as usize;
            return Err(Error::ClassOutOfRange { index, classes: k });
        }
        Ok(self.evaluate_mask(zeroed))
    }
}

/// Bitmask of a class list; fails when a class is not below `k`.
pub fn class_mask(classes: &[usize], k: usize) -> Result<u64> {
    classes.iter().try_fold(0u64, |m, &c| {
        if c >= k || c >= 64 {
            Err(Error::ClassOutOfRange {
                index: c,
                classes: k,
            })
        } else {
            Ok(m | 1 << c)
        }
    })
}

fn signed(value: BigInt, mask: u64) -> BigInt {
    if mask.count_ones() % 2 == 1 {
        -value
    } else {
        value
    }
}

/// Polynomial-space sieve over all `k` classes: returns `Q_[k](1..1)`.
///
/// Performs exactly `2^k` evaluations; nothing is stored. Evaluations run on
/// the current rayon pool and are summed exactly, so the result does not
/// depend on the thread count.
pub fn sieve_full<E: SievedEvaluator + ?Sized>(e: &E) -> Result<BigInt> {
    let k = e.num_classes();
    if k > MAX_CLASSES {
        return Err(Error::Invariant(format!(
            "sieve over {k} classes exceeds the limit of {MAX_CLASSES}"
        )));
    }
    let total = (0..1u64 << k)
        .into_par_iter()
        .map(|mask| signed(e.evaluate_mask(mask), mask))
        .reduce(BigInt::zero, |a, b| a + b);
    Ok(total)
}

/// Estimated bytes for a table of `2^t` evaluator values.
pub fn shared_table_bytes(t: usize) -> u128 {
    (1u128 << t) * (std::mem::size_of::<BigInt>() as u128 + 16)
}

/// Exponential-space sieve sharing evaluations across target class sets.
///
/// Evaluates every `P_{-I}`, `I ⊆ [t]`, exactly once, then computes all
/// `Q_J` at once with a signed subset-sum transform. Returns the smallest
/// (as a bitmask) `J` with `J ⊇ mandatory`, exactly `extra` classes of `J`
/// outside `mandatory`, and `Q_J(1..1) ≠ 0`; `None` if there is none.
pub fn sieve_shared<E: SievedEvaluator + ?Sized>(
    e: &E,
    extra: usize,
    mandatory: u64,
    memory_budget: u64,
) -> Result<Option<u64>> {
    let t = e.num_classes();
    if t > MAX_CLASSES {
        return Err(Error::Invariant(format!(
            "sieve over {t} classes exceeds the limit of {MAX_CLASSES}"
        )));
    }
    let needed = shared_table_bytes(t);
    if needed > memory_budget as u128 {
        return Err(Error::Capacity {
            needed,
            budget: memory_budget,
        });
    }
    let all = (1u64 << t) - 1;
    if mandatory & !all != 0 {
        return Err(Error::ClassOutOfRange {
            index: 63 - mandatory.leading_zeros() as usize,
            classes: t,
        });
    }
    let mut table: Vec<BigInt> = (0..1u64 << t)
        .into_par_iter()
        .map(|mask| signed(e.evaluate_mask(mask), mask))
        .collect();
    for bit in 0..t {
        let b = 1usize << bit;
        for mask in 0..table.len() {
            if mask & b != 0 {
                let (lo, hi) = table.split_at_mut(mask);
                hi[0] += &lo[mask ^ b];
            }
        }
    }
    let witness = (0..=all).find(|&j| {
        j & mandatory == mandatory
            && (j & !mandatory).count_ones() as usize == extra
            && !table[j as usize].is_zero()
    });
    Ok(witness)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use std::sync::atomic::{AtomicUsize, Ordering};

    /// Polynomial given by an explicit monomial list: each monomial is a
    /// coefficient and the bitmask of classes it contains.
    pub(crate) struct ToyEvaluator {
        pub k: usize,
        pub monomials: Vec<(i64, u64)>,
        pub calls: AtomicUsize,
    }

    impl ToyEvaluator {
        pub fn new(k: usize, monomials: Vec<(i64, u64)>) -> Self {
            Self {
                k,
                monomials,
                calls: AtomicUsize::new(0),
            }
        }
    }

    impl SievedEvaluator for ToyEvaluator {
        fn num_classes(&self) -> usize {
            self.k
        }
        fn evaluate_mask(&self, zeroed: u64) -> BigInt {
            self.calls.fetch_add(1, Ordering::Relaxed);
            self.monomials
                .iter()
                .filter(|&&(_, vars)| vars & zeroed == 0)
                .map(|&(c, _)| BigInt::from(c))
                .sum()
        }
    }

    fn colorful_mass(monomials: &[(i64, u64)], j: u64) -> i64 {
        monomials
            .iter()
            .filter(|&&(_, v)| v & j == j)
            .map(|&(c, _)| c)
            .sum()
    }

    #[test]
    fn hand_expansion() {
        // P = x1 x2 + x1
        let e = ToyEvaluator::new(2, vec![(1, 0b11), (1, 0b01)]);
        assert_eq!(sieve_full(&e).unwrap(), BigInt::from(1));
        assert_eq!(e.calls.load(Ordering::Relaxed), 4);
    }

    #[test]
    fn constant_polynomial_cancels() {
        let e = ToyEvaluator::new(3, vec![(5, 0)]);
        assert!(sieve_full(&e).unwrap().is_zero());
        assert_eq!(e.calls.load(Ordering::Relaxed), 8);
    }

    #[test]
    fn out_of_range_zero_set() {
        let e = ToyEvaluator::new(2, vec![]);
        assert_eq!(
            e.evaluate_zeroed(0b100),
            Err(Error::ClassOutOfRange {
                index: 2,
                classes: 2
            })
        );
        assert_eq!(
            class_mask(&[0, 3], 2),
            Err(Error::ClassOutOfRange {
                index: 3,
                classes: 2
            })
        );
        assert_eq!(class_mask(&[0, 1], 2), Ok(0b11));
    }

    #[test]
    fn shared_finds_unique_witness() {
        // one monomial on classes {1,3} (bits 0 and 2) among t = 3 classes
        let e = ToyEvaluator::new(3, vec![(1, 0b101)]);
        assert_eq!(sieve_shared(&e, 2, 0, u64::MAX).unwrap(), Some(0b101));
        assert_eq!(e.calls.load(Ordering::Relaxed), 8);
        let zero = ToyEvaluator::new(3, vec![]);
        assert_eq!(sieve_shared(&zero, 2, 0, u64::MAX).unwrap(), None);
    }

    #[test]
    fn shared_respects_mandatory_classes() {
        let e = ToyEvaluator::new(4, vec![(2, 0b0110), (1, 0b1001)]);
        assert_eq!(sieve_shared(&e, 1, 0b0001, u64::MAX).unwrap(), Some(0b1001));
        assert_eq!(sieve_shared(&e, 1, 0b0100, u64::MAX).unwrap(), Some(0b0110));
        assert_eq!(sieve_shared(&e, 2, 0b0001, u64::MAX).unwrap(), None);
    }

    #[test]
    fn capacity_error() {
        let e = ToyEvaluator::new(20, vec![]);
        assert!(matches!(
            sieve_shared(&e, 1, 0, 1024),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn random_toys_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..200 {
            let k = rng.gen_range(1..=6);
            let monomials: Vec<(i64, u64)> = (0..rng.gen_range(0..8))
                .map(|_| (rng.gen_range(-3..=5), rng.gen_range(0..1u64 << k)))
                .collect();
            let e = ToyEvaluator::new(k, monomials.clone());
            let full = (1u64 << k) - 1;
            assert_eq!(
                sieve_full(&e).unwrap(),
                BigInt::from(colorful_mass(&monomials, full))
            );
            // shared: per-J resummation for every target size
            for extra in 0..=k {
                let expected = (0..=full).find(|&j| {
                    j.count_ones() as usize == extra && colorful_mass(&monomials, j) != 0
                });
                assert_eq!(sieve_shared(&e, extra, 0, u64::MAX).unwrap(), expected);
            }
        }
    }

    #[test]
    fn shared_with_alpha_one_agrees_with_full() {
        let e = ToyEvaluator::new(3, vec![(1, 0b111), (4, 0b011)]);
        let full = !sieve_full(&e).unwrap().is_zero();
        assert_eq!(sieve_shared(&e, 3, 0, u64::MAX).unwrap().is_some(), full);
    }
}
