//! Exact residue arithmetic over `Z_d` and prime fields `F_q`, matrices over
//! them, and a systematic MDS generator.

mod matrix;
mod mds;
mod ring;

pub use matrix::Matrix;
pub use mds::{build_mds_generator, singular_selections, verify_mds};
pub use ring::{gcd, is_prime, PrimeFieldElement, RingElement};

use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    /// Moduli below 2 do not define a ring we can use.
    InvalidModulus(u64),
    ModulusMismatch { left: u64, right: u64 },
    /// A prime field was requested over a composite modulus.
    NotPrime(u64),
    DimensionMismatch { expected: usize, found: usize },
    EntryOutOfRange { value: u64, modulus: u64 },
    NotSquare { rows: usize, cols: usize },
    /// `verify_mds` needs at least as many columns as rows.
    TooManyRows { rows: usize, cols: usize },
    /// The MDS construction needs `k > r >= 1`.
    InvalidShape { k: usize, r: usize },
    /// The Cauchy block needs `k` distinct field points.
    FieldTooSmall { q: u64, k: usize },
    Overflow,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::InvalidModulus(m) => write!(f, "modulus {m} is below 2"),
            AlgebraError::ModulusMismatch { left, right } => {
                write!(f, "modulus mismatch: {left} vs {right}")
            }
            AlgebraError::NotPrime(q) => write!(f, "{q} is not prime"),
            AlgebraError::DimensionMismatch { expected, found } => {
                write!(f, "expected {expected} entries, found {found}")
            }
            AlgebraError::EntryOutOfRange { value, modulus } => {
                write!(f, "entry {value} is not a residue mod {modulus}")
            }
            AlgebraError::NotSquare { rows, cols } => {
                write!(f, "{rows}x{cols} matrix is not square")
            }
            AlgebraError::TooManyRows { rows, cols } => {
                write!(f, "{rows}x{cols} matrix has more rows than columns")
            }
            AlgebraError::InvalidShape { k, r } => {
                write!(f, "need k > r >= 1, got k={k}, r={r}")
            }
            AlgebraError::FieldTooSmall { q, k } => {
                write!(f, "field size {q} is smaller than k={k}")
            }
            AlgebraError::Overflow => write!(f, "integer overflow in exact elimination"),
        }
    }
}

impl core::error::Error for AlgebraError {}
