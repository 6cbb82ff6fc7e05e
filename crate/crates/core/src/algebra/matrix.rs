use alloc::vec::Vec;

use super::{AlgebraError, RingElement};

/// Dense row-major matrix over `Z_d`; every entry shares one modulus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    modulus: u64,
    entries: Vec<u64>,
}

impl Matrix {
    pub fn new(
        rows: usize,
        cols: usize,
        modulus: u64,
        entries: Vec<u64>,
    ) -> Result<Self, AlgebraError> {
        if modulus < 2 {
            return Err(AlgebraError::InvalidModulus(modulus));
        }
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        if let Some(&value) = entries.iter().find(|&&v| v >= modulus) {
            return Err(AlgebraError::EntryOutOfRange { value, modulus });
        }
        Ok(Matrix {
            rows,
            cols,
            modulus,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize, modulus: u64) -> Result<Self, AlgebraError> {
        Self::new(rows, cols, modulus, alloc::vec![0; rows * cols])
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self, AlgebraError> {
        let mut m = Self::zeros(n, n, modulus)?;
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.cols + col]
    }

    pub fn element(&self, row: usize, col: usize) -> RingElement {
        RingElement::new(self.get(row, col), self.modulus).expect("modulus checked on construction")
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: u64) {
        self.entries[row * self.cols + col] = value % self.modulus;
    }

    /// The submatrix keeping every row and the listed columns, in order.
    pub fn select_columns(&self, columns: &[usize]) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * columns.len());
        for i in 0..self.rows {
            entries.extend(columns.iter().map(|&j| self.get(i, j)));
        }
        Matrix {
            rows: self.rows,
            cols: columns.len(),
            modulus: self.modulus,
            entries,
        }
    }

    /// Determinant reduced mod the modulus.
    ///
    /// Computed by Bareiss fraction-free elimination on the integer
    /// representatives, so it is exact over any `Z_d`, prime or not.
    pub fn determinant(&self) -> Result<RingElement, AlgebraError> {
        if self.rows != self.cols {
            return Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return RingElement::one(self.modulus);
        }
        let mut a: Vec<i128> = self.entries.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(p) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return RingElement::zero(self.modulus);
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = a[i * n + j].checked_mul(pivot).ok_or(AlgebraError::Overflow)?;
                    let rhs = a[i * n + k]
                        .checked_mul(a[k * n + j])
                        .ok_or(AlgebraError::Overflow)?;
                    a[i * n + j] = (lhs - rhs) / prev;
                }
                a[i * n + k] = 0;
            }
            prev = pivot;
        }
        RingElement::from_i64(
            (sign * a[n * n - 1]).rem_euclid(self.modulus as i128) as i64,
            self.modulus,
        )
    }

    /// Invertible over `Z_d` iff the determinant is a unit.
    pub fn is_invertible(&self) -> Result<bool, AlgebraError> {
        Ok(self.determinant()?.is_unit())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Leibniz expansion over all permutations; independent of Bareiss.
    fn leibniz(m: &Matrix) -> u64 {
        let n = m.rows();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut total: i128 = 0;
        permute(&mut perm, 0, &mut |p| {
            let inversions = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            let prod: i128 = (0..n).map(|i| m.get(i, p[i]) as i128).product();
            total += if inversions % 2 == 0 { prod } else { -prod };
        });
        total.rem_euclid(m.modulus() as i128) as u64
    }

    fn permute(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == p.len() {
            f(p);
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            permute(p, k + 1, f);
            p.swap(k, i);
        }
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Matrix::new(2, 2, 5, vec![1, 2, 3]),
            Err(AlgebraError::DimensionMismatch { expected: 4, found: 3 })
        );
        assert_eq!(
            Matrix::new(1, 2, 5, vec![1, 5]),
            Err(AlgebraError::EntryOutOfRange { value: 5, modulus: 5 })
        );
        let m = Matrix::new(2, 3, 5, vec![0; 6]).unwrap();
        assert!(matches!(m.determinant(), Err(AlgebraError::NotSquare { .. })));
    }

    #[test]
    fn determinant_matches_leibniz_on_every_3x3_pattern_mod_3() {
        // 3^9 matrices: every 3x3 over Z_3.
        let mut entries = [0u64; 9];
        for idx in 0..3usize.pow(9) {
            let mut x = idx;
            for e in entries.iter_mut() {
                *e = (x % 3) as u64;
                x /= 3;
            }
            let m = Matrix::new(3, 3, 3, entries.to_vec()).unwrap();
            assert_eq!(m.determinant().unwrap().value(), leibniz(&m));
        }
    }

    #[test]
    fn determinant_over_composite_modulus() {
        let m = Matrix::new(2, 2, 6, vec![2, 0, 0, 3]).unwrap();
        assert_eq!(m.determinant().unwrap().value(), 0);
        assert!(!m.is_invertible().unwrap());
        let m = Matrix::new(2, 2, 6, vec![1, 2, 3, 1]).unwrap();
        // 1 - 6 = -5 ≡ 1
        assert_eq!(m.determinant().unwrap().value(), 1);
        assert!(m.is_invertible().unwrap());
        let big = Matrix::new(4, 4, 7, vec![3, 1, 4, 1, 5, 2, 6, 5, 3, 5, 0, 2, 6, 4, 3, 3]).unwrap();
        assert_eq!(big.determinant().unwrap().value(), leibniz(&big));
    }

    #[test]
    fn select_columns_keeps_order() {
        let m = Matrix::new(2, 3, 7, vec![1, 2, 3, 4, 5, 6]).unwrap();
        let s = m.select_columns(&[2, 0]);
        assert_eq!(s.entries(), &[3, 1, 6, 4]);
        assert_eq!(Matrix::identity(2, 3).unwrap().determinant().unwrap().value(), 1);
    }
}
