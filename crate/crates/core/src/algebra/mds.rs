use alloc::vec::Vec;

use super::{is_prime, AlgebraError, Matrix, PrimeFieldElement};
use crate::radix::Combinations;

/// Builds an `r × k` generator `[I_r | C]` over `F_q` in which every `r × r`
/// column selection is invertible.
///
/// `C` is the Cauchy matrix `c_{i,j} = 1 / (x_i - y_j)` with `x_i = i` and
/// `y_j = r + j`, so the construction needs `k` distinct field points.
/// Every square submatrix of a Cauchy matrix is nonsingular, which makes the
/// whole systematic generator MDS.
pub fn build_mds_generator(k: usize, r: usize, q: u64) -> Result<Matrix, AlgebraError> {
    if r == 0 || k <= r {
        return Err(AlgebraError::InvalidShape { k, r });
    }
    if !is_prime(q) {
        return Err(AlgebraError::NotPrime(q));
    }
    if q < k as u64 {
        return Err(AlgebraError::FieldTooSmall { q, k });
    }
    let mut m = Matrix::zeros(r, k, q)?;
    for i in 0..r {
        m.set(i, i, 1);
        let x = PrimeFieldElement::new(i as u64, q)?;
        for j in 0..k - r {
            let y = PrimeFieldElement::new((r + j) as u64, q)?;
            let c = (x - y).inverse().expect("Cauchy points are distinct");
            m.set(i, r + j, c.value());
        }
    }
    Ok(m)
}

/// True iff every `rows × rows` column selection of `m` is invertible over
/// the prime field given by its modulus.
pub fn verify_mds(m: &Matrix) -> Result<bool, AlgebraError> {
    if !is_prime(m.modulus()) {
        return Err(AlgebraError::NotPrime(m.modulus()));
    }
    if m.rows() > m.cols() {
        return Err(AlgebraError::TooManyRows {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    for cols in Combinations::new(m.cols(), m.rows()) {
        if m.select_columns(&cols).determinant()?.value() == 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Column selections of a generator that are singular; empty for MDS.
pub fn singular_selections(m: &Matrix) -> Result<Vec<Vec<usize>>, AlgebraError> {
    let mut out = Vec::new();
    for cols in Combinations::new(m.cols(), m.rows()) {
        if m.select_columns(&cols).determinant()?.value() == 0 {
            out.push(cols);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Rank over F_q by plain Gaussian elimination with field inverses.
    fn rank(m: &Matrix) -> usize {
        let q = m.modulus();
        let mut a: Vec<Vec<u64>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        for col in 0..m.cols() {
            let Some(p) = (rank..a.len()).find(|&i| a[i][col] != 0) else {
                continue;
            };
            a.swap(rank, p);
            let inv = (1..q).find(|&x| x * a[rank][col] % q == 1).unwrap();
            for j in 0..m.cols() {
                a[rank][j] = a[rank][j] * inv % q;
            }
            for i in 0..a.len() {
                if i != rank && a[i][col] != 0 {
                    let f = a[i][col];
                    for j in 0..m.cols() {
                        a[i][j] = (a[i][j] + q * q - f * a[rank][j] % q) % q;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn brute_force_mds(m: &Matrix) -> bool {
        Combinations::new(m.cols(), m.rows()).all(|c| rank(&m.select_columns(&c)) == m.rows())
    }

    #[test]
    fn smallest_generator() {
        let m = build_mds_generator(2, 1, 2).unwrap();
        assert_eq!(m.entries(), &[1, 1]);
        assert!(verify_mds(&m).unwrap());
    }

    #[test]
    fn generator_k4_r2_q7() {
        let m = build_mds_generator(4, 2, 7).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 4));
        assert_eq!(&m.entries()[..2], &[1, 0]);
        assert_eq!(&m.entries()[4..6], &[0, 1]);
        assert_eq!(Combinations::new(4, 2).count(), 6);
        assert!(brute_force_mds(&m));
        assert!(verify_mds(&m).unwrap());
        assert!(singular_selections(&m).unwrap().is_empty());
    }

    #[test]
    fn precondition_errors() {
        assert_eq!(
            build_mds_generator(3, 2, 2),
            Err(AlgebraError::FieldTooSmall { q: 2, k: 3 })
        );
        assert_eq!(build_mds_generator(3, 2, 4), Err(AlgebraError::NotPrime(4)));
        assert_eq!(
            build_mds_generator(2, 2, 5),
            Err(AlgebraError::InvalidShape { k: 2, r: 2 })
        );
        let m = Matrix::new(1, 2, 6, vec![1, 1]).unwrap();
        assert_eq!(verify_mds(&m), Err(AlgebraError::NotPrime(6)));
    }

    #[test]
    fn verify_examples() {
        assert!(verify_mds(&Matrix::identity(2, 3).unwrap()).unwrap());
        let dup = Matrix::new(2, 3, 3, vec![1, 1, 0, 2, 2, 1]).unwrap();
        assert!(!verify_mds(&dup).unwrap());
        assert_eq!(singular_selections(&dup).unwrap(), vec![vec![0, 1]]);
    }

    #[test]
    fn every_small_generator_is_mds() {
        for q in [2u64, 3, 5, 7, 11] {
            for k in 2..=8usize.min(q as usize) {
                for r in 1..k {
                    let m = build_mds_generator(k, r, q).unwrap();
                    assert!(verify_mds(&m).unwrap(), "k={k} r={r} q={q}");
                    for i in 0..r {
                        for j in 0..r {
                            assert_eq!(m.get(i, j), (i == j) as u64);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn verify_agrees_with_rank_on_random_matrices() {
        // Deterministic LCG sweep over 2x4 matrices in F_5.
        let mut state = 0x2545_f491_u64;
        for _ in 0..2000 {
            let entries: Vec<u64> = (0..8)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    (state >> 33) % 5
                })
                .collect();
            let m = Matrix::new(2, 4, 5, entries).unwrap();
            assert_eq!(verify_mds(&m).unwrap(), brute_force_mds(&m));
        }
    }
}
