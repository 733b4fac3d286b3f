//! Exact integer linear algebra: fraction-free determinants and signed
//! Pfaffians over arbitrary-precision integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Square matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::Invariant("matrix is not square".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.dim + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: impl Into<BigInt>) {
        self.entries[i * self.dim + j] = v.into();
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.dim {
            self.entries.swap(a * self.dim + j, b * self.dim + j);
        }
    }
}

/// Skew-symmetric integer matrix of even dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMatrix(IntMatrix);

impl SkewMatrix {
    pub fn new(m: IntMatrix) -> Result<Self> {
        if !m.dim().is_multiple_of(2) {
            return Err(Error::Invariant(format!(
                "skew matrix has odd dimension {}",
                m.dim()
            )));
        }
        for i in 0..m.dim() {
            for j in 0..=i {
                if *m.get(i, j) != -m.get(j, i) {
                    return Err(Error::Invariant(format!(
                        "entries ({i},{j}) and ({j},{i}) are not negatives"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }
}

/// Determinant by Bareiss fraction-free elimination. Every intermediate value
/// is an integer and every division is exact.
pub fn bareiss_det(a: &IntMatrix) -> BigInt {
    let n = a.dim();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            match (k + 1..n).find(|&r| !m.get(r, k).is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let pivot = m.get(k, k).clone();
        for i in k + 1..n {
            let lead = m.get(i, k).clone();
            for j in k + 1..n {
                let v = (&pivot * m.get(i, j) - &lead * m.get(k, j)) / &prev;
                m.set(i, j, v);
            }
            m.set(i, k, 0);
        }
        prev = pivot;
    }
    let det = m.get(n - 1, n - 1).clone();
    if sign {
        -det
    } else {
        det
    }
}

/// Signed Pfaffian by skew-symmetric elimination over the rationals.
///
/// Each step pivots a nonzero entry into position (0, 1) with a simultaneous
/// row-and-column swap (each swap flips the sign), then reduces to the
/// Schur complement `B_ij = A_ij + (A_i0 A_1j - A_i1 A_0j) / A_01`, which is
/// again skew-symmetric with `pf(A) = A_01 * pf(B)`.
pub fn signed_pfaffian(m: &SkewMatrix) -> BigInt {
    let n = m.dim();
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| BigRational::from_integer(m.matrix().get(i, j).clone()))
                .collect()
        })
        .collect();
    let mut result = BigRational::one();
    let mut size = n;
    while size > 0 {
        // pick the first nonzero in row 0
        let Some(p) = (1..size).find(|&j| !a[0][j].is_zero()) else {
            return BigInt::zero();
        };
        if p != 1 {
            a.swap(1, p);
            for row in a.iter_mut() {
                row.swap(1, p);
            }
            result = -result;
        }
        let pivot = a[0][1].clone();
        result *= &pivot;
        let mut next = vec![vec![BigRational::zero(); size - 2]; size - 2];
        for i in 2..size {
            for j in i + 1..size {
                let v = &a[i][j] + (&a[i][0] * &a[1][j] - &a[i][1] * &a[0][j]) / &pivot;
                next[j - 2][i - 2] = -v.clone();
                next[i - 2][j - 2] = v;
            }
        }
        a = next;
        size -= 2;
    }
    debug_assert!(result.is_integer());
    result.to_integer()
}

/// Integer square root `floor(sqrt(x))`.
pub fn integer_sqrt(x: &BigInt) -> Result<BigInt> {
    if x.is_negative() {
        return Err(Error::Invariant("square root of a negative integer".into()));
    }
    Ok(x.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for c in 0..n {
            if m[0][c] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != c)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = BigInt::from(m[0][c]) * cofactor_det(&minor);
            if c % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    /// Signed sum over all pair-partitions, sign from the permutation
    /// (i1 j1 i2 j2 ...) counted by inversions.
    fn pfaffian_by_partitions(m: &[Vec<i64>]) -> BigInt {
        fn rec(
            m: &[Vec<i64>],
            remaining: &mut Vec<usize>,
            perm: &mut Vec<usize>,
            acc: &mut BigInt,
        ) {
            if remaining.is_empty() {
                let mut inv = 0;
                for x in 0..perm.len() {
                    for y in x + 1..perm.len() {
                        if perm[x] > perm[y] {
                            inv += 1;
                        }
                    }
                }
                let mut prod = BigInt::one();
                for pair in perm.chunks(2) {
                    prod *= m[pair[0]][pair[1]];
                }
                if inv % 2 == 0 {
                    *acc += prod;
                } else {
                    *acc -= prod;
                }
                return;
            }
            let i = remaining.remove(0);
            for idx in 0..remaining.len() {
                let j = remaining.remove(idx);
                perm.push(i);
                perm.push(j);
                rec(m, remaining, perm, acc);
                perm.pop();
                perm.pop();
                remaining.insert(idx, j);
            }
            remaining.insert(0, i);
        }
        let mut acc = BigInt::zero();
        rec(m, &mut (0..m.len()).collect(), &mut vec![], &mut acc);
        acc
    }

    #[allow(clippy::needless_range_loop)]
    fn random_skew(rng: &mut impl Rng, n: usize, density: f64) -> Vec<Vec<i64>> {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen_bool(density) {
                    let v = rng.gen_range(-5..=5);
                    m[i][j] = v;
                    m[j][i] = -v;
                }
            }
        }
        m
    }

    #[test]
    fn small_determinants() {
        let m = IntMatrix::from_rows(&[vec![2, 1], vec![1, 2]]).unwrap();
        assert_eq!(bareiss_det(&m), BigInt::from(3));
        for d in 0..6 {
            assert_eq!(bareiss_det(&IntMatrix::identity(d)), BigInt::one());
        }
        let singular = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(bareiss_det(&singular).is_zero());
        let needs_pivot = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(bareiss_det(&needs_pivot), BigInt::from(-1));
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..=6);
            let rows: Vec<Vec<i64>> = (0..n)
                .map(|_| {
                    (0..n)
                        .map(|_| {
                            if rng.gen_bool(0.2) {
                                0
                            } else {
                                rng.gen_range(-9..=9)
                            }
                        })
                        .collect()
                })
                .collect();
            let m = IntMatrix::from_rows(&rows).unwrap();
            assert_eq!(bareiss_det(&m), cofactor_det(&rows), "{rows:?}");
        }
    }

    #[test]
    fn determinant_row_swap_and_block_product() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let a: Vec<Vec<i64>> = (0..3)
                .map(|_| (0..3).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let b: Vec<Vec<i64>> = (0..2)
                .map(|_| (0..2).map(|_| rng.gen_range(-4..=4)).collect())
                .collect();
            let mut block = vec![vec![0i64; 5]; 5];
            for i in 0..3 {
                block[i][..3].copy_from_slice(&a[i]);
            }
            for i in 0..2 {
                block[3 + i][3..].copy_from_slice(&b[i]);
            }
            let da = bareiss_det(&IntMatrix::from_rows(&a).unwrap());
            let db = bareiss_det(&IntMatrix::from_rows(&b).unwrap());
            let mut bm = IntMatrix::from_rows(&block).unwrap();
            assert_eq!(bareiss_det(&bm), &da * &db);
            bm.swap_rows(0, 4);
            assert_eq!(bareiss_det(&bm), -(da * db));
        }
    }

    #[test]
    fn pfaffian_examples() {
        let two =
            SkewMatrix::new(IntMatrix::from_rows(&[vec![0, 5], vec![-5, 0]]).unwrap()).unwrap();
        assert_eq!(signed_pfaffian(&two), BigInt::from(5));
        let four = SkewMatrix::new(
            IntMatrix::from_rows(&[
                vec![0, 1, 2, 3],
                vec![-1, 0, 4, 5],
                vec![-2, -4, 0, 6],
                vec![-3, -5, -6, 0],
            ])
            .unwrap(),
        )
        .unwrap();
        assert_eq!(signed_pfaffian(&four), BigInt::from(8));
        let zero = SkewMatrix::new(IntMatrix::zeros(4)).unwrap();
        assert!(signed_pfaffian(&zero).is_zero());
        assert_eq!(
            signed_pfaffian(&SkewMatrix::new(IntMatrix::zeros(0)).unwrap()),
            BigInt::one()
        );
    }

    #[test]
    fn skew_invariants_enforced() {
        assert!(SkewMatrix::new(IntMatrix::zeros(3)).is_err());
        assert!(SkewMatrix::new(IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap()).is_err());
        assert!(
            SkewMatrix::new(IntMatrix::from_rows(&[vec![1, 1], vec![-1, 0]]).unwrap()).is_err()
        );
    }

    #[test]
    fn pfaffian_matches_partition_sum_and_squares_to_det() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..150 {
            let n = 2 * rng.gen_range(1..=4);
            let rows = random_skew(&mut rng, n, 0.6);
            let skew = SkewMatrix::new(IntMatrix::from_rows(&rows).unwrap()).unwrap();
            let pf = signed_pfaffian(&skew);
            assert_eq!(pf, pfaffian_by_partitions(&rows), "{rows:?}");
            let det = bareiss_det(skew.matrix());
            assert_eq!(det, &pf * &pf);
            assert_eq!(integer_sqrt(&det).unwrap(), pf.abs());
        }
    }

    #[test]
    fn single_partition_pfaffian() {
        // only the pairing {0,3},{1,2} survives: sign of (0 3 1 2) is +1
        let mut rows = vec![vec![0i64; 4]; 4];
        rows[0][3] = 7;
        rows[3][0] = -7;
        rows[1][2] = -2;
        rows[2][1] = 2;
        let skew = SkewMatrix::new(IntMatrix::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(signed_pfaffian(&skew), BigInt::from(-14));
        assert_eq!(pfaffian_by_partitions(&rows), BigInt::from(-14));
    }

    #[test]
    fn integer_sqrt_cases() {
        assert_eq!(integer_sqrt(&BigInt::from(64)).unwrap(), BigInt::from(8));
        assert_eq!(integer_sqrt(&BigInt::from(0)).unwrap(), BigInt::from(0));
        assert_eq!(integer_sqrt(&BigInt::from(65)).unwrap(), BigInt::from(8));
        assert!(integer_sqrt(&BigInt::from(-1)).is_err());
    }
}
