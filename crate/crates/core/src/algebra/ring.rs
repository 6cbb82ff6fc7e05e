use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::AlgebraError;

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Returns `(g, x)` with `a*x ≡ g (mod m)` and `g = gcd(a, m)`.
fn extended_gcd(a: u64, m: u64) -> (u64, u64) {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    let x = old_s.rem_euclid(m as i128) as u64;
    (old_r as u64, x)
}

/// A residue in the quotient ring `Z_d`.
///
/// The value is always canonical (`value < modulus`). Binary operators panic
/// when the moduli differ; the `checked_*` methods report the mismatch
/// instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    value: u64,
    modulus: u64,
}

impl RingElement {
    pub fn new(value: u64, modulus: u64) -> Result<Self, AlgebraError> {
        if modulus < 2 {
            return Err(AlgebraError::InvalidModulus(modulus));
        }
        Ok(RingElement {
            value: value % modulus,
            modulus,
        })
    }

    pub fn from_i64(value: i64, modulus: u64) -> Result<Self, AlgebraError> {
        if modulus < 2 {
            return Err(AlgebraError::InvalidModulus(modulus));
        }
        let value = (value as i128).rem_euclid(modulus as i128) as u64;
        Ok(RingElement { value, modulus })
    }

    pub fn zero(modulus: u64) -> Result<Self, AlgebraError> {
        Self::new(0, modulus)
    }

    pub fn one(modulus: u64) -> Result<Self, AlgebraError> {
        Self::new(1, modulus)
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    fn same_ring(self, rhs: Self) -> Result<(), AlgebraError> {
        if self.modulus == rhs.modulus {
            Ok(())
        } else {
            Err(AlgebraError::ModulusMismatch {
                left: self.modulus,
                right: rhs.modulus,
            })
        }
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.same_ring(rhs)?;
        let v = (self.value as u128 + rhs.value as u128) % self.modulus as u128;
        Ok(RingElement {
            value: v as u64,
            modulus: self.modulus,
        })
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.same_ring(rhs)?;
        self.checked_add(-rhs)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.same_ring(rhs)?;
        let v = (self.value as u128 * rhs.value as u128) % self.modulus as u128;
        Ok(RingElement {
            value: v as u64,
            modulus: self.modulus,
        })
    }

    /// Multiplicative inverse, or `None` when `gcd(value, modulus) > 1`.
    pub fn invert(self) -> Option<Self> {
        let (g, x) = extended_gcd(self.value, self.modulus);
        (g == 1).then_some(RingElement {
            value: x,
            modulus: self.modulus,
        })
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }
}

impl Add for RingElement {
    type Output = RingElement;

    fn add(self, rhs: Self) -> Self {
        self.checked_add(rhs).expect("ring elements with different moduli")
    }
}

impl Sub for RingElement {
    type Output = RingElement;

    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(rhs).expect("ring elements with different moduli")
    }
}

impl Mul for RingElement {
    type Output = RingElement;

    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(rhs).expect("ring elements with different moduli")
    }
}

impl Neg for RingElement {
    type Output = RingElement;

    fn neg(self) -> Self {
        let value = if self.value == 0 {
            0
        } else {
            self.modulus - self.value
        };
        RingElement {
            value,
            modulus: self.modulus,
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

/// An element of the prime field `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeFieldElement(RingElement);

impl PrimeFieldElement {
    pub fn new(value: u64, q: u64) -> Result<Self, AlgebraError> {
        if !is_prime(q) {
            return Err(AlgebraError::NotPrime(q));
        }
        RingElement::new(value, q).map(PrimeFieldElement)
    }

    pub fn value(self) -> u64 {
        self.0.value
    }

    pub fn modulus(self) -> u64 {
        self.0.modulus
    }

    pub fn as_ring(self) -> RingElement {
        self.0
    }

    /// `None` only for zero.
    pub fn inverse(self) -> Option<Self> {
        self.0.invert().map(PrimeFieldElement)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.0.checked_add(rhs.0).map(PrimeFieldElement)
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.0.checked_sub(rhs.0).map(PrimeFieldElement)
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self, AlgebraError> {
        self.0.checked_mul(rhs.0).map(PrimeFieldElement)
    }
}

impl Add for PrimeFieldElement {
    type Output = PrimeFieldElement;

    fn add(self, rhs: Self) -> Self {
        PrimeFieldElement(self.0 + rhs.0)
    }
}

impl Sub for PrimeFieldElement {
    type Output = PrimeFieldElement;

    fn sub(self, rhs: Self) -> Self {
        PrimeFieldElement(self.0 - rhs.0)
    }
}

impl Mul for PrimeFieldElement {
    type Output = PrimeFieldElement;

    fn mul(self, rhs: Self) -> Self {
        PrimeFieldElement(self.0 * rhs.0)
    }
}

impl Neg for PrimeFieldElement {
    type Output = PrimeFieldElement;

    fn neg(self) -> Self {
        PrimeFieldElement(-self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: u64, m: u64) -> RingElement {
        RingElement::new(v, m).unwrap()
    }

    #[test]
    fn ring_examples() {
        assert_eq!((r(1, 2) + r(1, 2)).value(), 0);
        assert_eq!((r(2, 6) * r(3, 6)).value(), 0);
        assert_eq!((r(0, 5) - r(1, 5)).value(), 4);
        assert_eq!((-r(0, 5)).value(), 0);
        assert_eq!(RingElement::from_i64(-7, 5).unwrap().value(), 3);
    }

    #[test]
    fn mismatch_and_bad_modulus() {
        assert_eq!(
            r(1, 3).checked_add(r(1, 4)),
            Err(AlgebraError::ModulusMismatch { left: 3, right: 4 })
        );
        assert_eq!(RingElement::new(0, 1), Err(AlgebraError::InvalidModulus(1)));
        assert_eq!(PrimeFieldElement::new(1, 6), Err(AlgebraError::NotPrime(6)));
    }

    #[test]
    fn inversion_examples() {
        for d in 2..10 {
            assert_eq!(r(1, d).invert(), Some(r(1, d)));
        }
        assert_eq!(r(2, 6).invert(), None);
        assert_eq!(r(3, 7).invert(), Some(r(5, 7)));
        // Exhaustive residue scan as an independent check of 3^{-1} mod 7.
        let scan: alloc::vec::Vec<u64> = (0..7).filter(|b| 3 * b % 7 == 1).collect();
        assert_eq!(scan, [5]);
    }

    #[test]
    fn inversion_matches_gcd_everywhere() {
        for d in 2..40u64 {
            for a in 0..d {
                let x = r(a, d);
                match x.invert() {
                    Some(inv) => {
                        assert_eq!(gcd(a, d), 1);
                        assert_eq!((x * inv).value(), 1);
                    }
                    None => assert_ne!(gcd(a, d), 1),
                }
                assert_eq!(x.is_unit(), gcd(a, d) == 1);
            }
        }
    }

    #[test]
    fn primes() {
        let small: alloc::vec::Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        let z = PrimeFieldElement::new(0, 11).unwrap();
        assert_eq!(z.inverse(), None);
        let two = PrimeFieldElement::new(2, 11).unwrap();
        assert_eq!((two * two.inverse().unwrap()).value(), 1);
    }
}
