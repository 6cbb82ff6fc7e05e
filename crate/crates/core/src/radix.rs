//! Mixed-radix helpers shared by the table-driven code representation.

/// `base^exp` as a table length.
pub(crate) fn pow(base: u32, exp: usize) -> usize {
    (base as usize).pow(exp as u32)
}

/// Packs `digits` (most significant first) into a single index.
pub(crate) fn pack(digits: &[u32], base: u32) -> usize {
    digits
        .iter()
        .fold(0usize, |acc, &x| acc * base as usize + x as usize)
}

/// Inverse of [`pack`]; fills `out` with the digits of `index`.
pub(crate) fn unpack(mut index: usize, base: u32, out: &mut [u32]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % base as usize) as u32;
        index /= base as usize;
    }
}

/// Lexicographic iterator over the `r`-element subsets of `0..n`.
pub(crate) struct Combinations {
    n: usize,
    current: Option<alloc::vec::Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, r: usize) -> Self {
        let current = (r <= n).then(|| (0..r).collect());
        Combinations { n, current }
    }
}

impl Iterator for Combinations {
    type Item = alloc::vec::Vec<usize>;

    fn next(&mut self) -> Option<Self::Item> {
        let out = self.current.clone()?;
        let r = out.len();
        let mut next = out.clone();
        let mut i = r;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Binomial coefficient, exact for the small arguments used here.
pub(crate) fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pack_unpack_roundtrip() {
        let mut buf = [0u32; 3];
        for i in 0..pow(4, 3) {
            unpack(i, 4, &mut buf);
            assert_eq!(pack(&buf, 4), i);
        }
        assert_eq!(pack(&[1, 0, 2], 3), 11);
    }

    #[test]
    fn combinations_count_and_order() {
        let all: alloc::vec::Vec<_> = Combinations::new(4, 2).collect();
        assert_eq!(all.len(), binomial(4, 2));
        assert_eq!(all[0], [0, 1]);
        assert_eq!(all[5], [2, 3]);
        assert_eq!(Combinations::new(3, 0).count(), 1);
        assert_eq!(Combinations::new(2, 3).count(), 0);
        assert_eq!(binomial(7, 3), 35);
    }
}
