//! Joint distributions over named finite variables with exact rational
//! probabilities.
//!
//! Weights are stored as positive integers over a common denominator, so every
//! probability is an exact rational. Support questions (independence,
//! functional dependence) are answered with integer arithmetic; entropies are
//! reported in bits as `f64`, computed from the exact weights with a single
//! `log2(total)` term so that cancellations stay small.

mod han;

pub use han::{check_han_collection, check_han_subsets, HanReport};

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::gcd;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfoError {
    UnknownVariable(String),
    DuplicateVariable(String),
    EmptyAlphabet(String),
    /// A row tuple has the wrong number of coordinates.
    Arity { expected: usize, found: usize },
    ValueOutOfRange { variable: String, value: u32, alphabet: u32 },
    ZeroDenominator,
    /// Rational rows that do not sum to exactly one.
    NotNormalized { numerator: u128, denominator: u128 },
    /// All weights are zero.
    NoMass,
    /// The product of the alphabet sizes does not fit in 64 bits.
    TooLarge,
    Overflow,
    Overlap(String),
    /// A Han collection whose members do not cover every index `h` times.
    CoverCount { element: usize, count: usize, expected: usize },
    IndexOutOfRange { index: usize, k: usize },
    SubsetSize { r: usize, k: usize },
}

impl fmt::Display for InfoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InfoError::UnknownVariable(v) => write!(f, "unknown variable `{v}`"),
            InfoError::DuplicateVariable(v) => write!(f, "variable `{v}` declared twice"),
            InfoError::EmptyAlphabet(v) => write!(f, "variable `{v}` has an empty alphabet"),
            InfoError::Arity { expected, found } => {
                write!(f, "row has {found} values, expected {expected}")
            }
            InfoError::ValueOutOfRange {
                variable,
                value,
                alphabet,
            } => write!(f, "value {value} of `{variable}` outside alphabet of size {alphabet}"),
            InfoError::ZeroDenominator => write!(f, "zero denominator"),
            InfoError::NotNormalized {
                numerator,
                denominator,
            } => write!(f, "probabilities sum to {numerator}/{denominator}, not 1"),
            InfoError::NoMass => write!(f, "distribution has no positive weight"),
            InfoError::TooLarge => write!(f, "joint alphabet does not fit in 64 bits"),
            InfoError::Overflow => write!(f, "integer overflow"),
            InfoError::Overlap(v) => write!(f, "variable `{v}` appears on both sides"),
            InfoError::CoverCount {
                element,
                count,
                expected,
            } => write!(
                f,
                "index {element} is covered {count} times, expected exactly {expected}"
            ),
            InfoError::IndexOutOfRange { index, k } => {
                write!(f, "index {index} outside 0..{k}")
            }
            InfoError::SubsetSize { r, k } => write!(f, "subset size {r} outside 1..={k}"),
        }
    }
}

impl core::error::Error for InfoError {}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Variable {
    pub name: String,
    pub alphabet: u32,
}

impl Variable {
    pub fn new(name: impl Into<String>, alphabet: u32) -> Self {
        Variable {
            name: name.into(),
            alphabet,
        }
    }
}

/// Exact joint law of a list of named finite variables.
///
/// Invariants: rows are sorted and unique, every weight is positive, the
/// weights share no common factor and `total` is their sum. Two equal
/// distributions therefore compare equal structurally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDistribution {
    vars: Vec<Variable>,
    rows: Vec<(Vec<u32>, u64)>,
    total: u64,
}

impl JointDistribution {
    /// Builds a distribution from nonnegative integer weights.
    ///
    /// Repeated tuples are merged, zero weights are dropped and the result is
    /// normalized.
    pub fn from_weights<I>(vars: Vec<Variable>, rows: I) -> Result<Self, InfoError>
    where
        I: IntoIterator<Item = (Vec<u32>, u64)>,
    {
        validate_vars(&vars)?;
        let mut merged: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (tuple, w) in rows {
            check_tuple(&vars, &tuple)?;
            if w == 0 {
                continue;
            }
            let slot = merged.entry(tuple).or_insert(0);
            *slot = slot.checked_add(w).ok_or(InfoError::Overflow)?;
        }
        let mut rows: Vec<(Vec<u32>, u64)> = merged.into_iter().collect();
        let g = rows.iter().fold(0, |g, (_, w)| gcd(g, *w));
        if g == 0 {
            return Err(InfoError::NoMass);
        }
        let mut total = 0u64;
        for (_, w) in rows.iter_mut() {
            *w /= g;
            total = total.checked_add(*w).ok_or(InfoError::Overflow)?;
        }
        Ok(JointDistribution { vars, rows, total })
    }

    /// Each listed outcome counts with weight one.
    pub fn from_outcomes<I>(vars: Vec<Variable>, outcomes: I) -> Result<Self, InfoError>
    where
        I: IntoIterator<Item = Vec<u32>>,
    {
        Self::from_weights(vars, outcomes.into_iter().map(|t| (t, 1)))
    }

    /// Builds a distribution from `(tuple, numerator, denominator)` rows that
    /// must sum to exactly one.
    pub fn from_rationals<I>(vars: Vec<Variable>, rows: I) -> Result<Self, InfoError>
    where
        I: IntoIterator<Item = (Vec<u32>, u64, u64)>,
    {
        let rows: Vec<(Vec<u32>, u64, u64)> = rows.into_iter().collect();
        let mut lcm: u128 = 1;
        for (_, _, den) in &rows {
            if *den == 0 {
                return Err(InfoError::ZeroDenominator);
            }
            let den = *den as u128;
            let g = gcd128(lcm, den);
            lcm = (lcm / g).checked_mul(den).ok_or(InfoError::Overflow)?;
        }
        let mut sum: u128 = 0;
        let mut scaled = Vec::with_capacity(rows.len());
        for (tuple, num, den) in rows {
            let w = (num as u128)
                .checked_mul(lcm / den as u128)
                .ok_or(InfoError::Overflow)?;
            sum = sum.checked_add(w).ok_or(InfoError::Overflow)?;
            scaled.push((tuple, w));
        }
        if sum != lcm {
            let g = gcd128(sum, lcm).max(1);
            return Err(InfoError::NotNormalized {
                numerator: sum / g,
                denominator: lcm / g,
            });
        }
        let g = scaled.iter().fold(0u128, |g, (_, w)| gcd128(g, *w)).max(1);
        let rows = scaled
            .into_iter()
            .map(|(t, w)| u64::try_from(w / g).map(|w| (t, w)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| InfoError::Overflow)?;
        Self::from_weights(vars, rows)
    }

    /// Uniform law over the full product of the declared alphabets.
    pub fn uniform(vars: Vec<Variable>) -> Result<Self, InfoError> {
        validate_vars(&vars)?;
        let size = joint_size(&vars)?;
        let mut tuple = alloc::vec![0u32; vars.len()];
        let rows = (0..size).map(|idx| {
            let mut x = idx;
            for (slot, v) in tuple.iter_mut().zip(&vars).rev() {
                *slot = (x % v.alphabet as u64) as u32;
                x /= v.alphabet as u64;
            }
            (tuple.clone(), 1)
        });
        let rows: Vec<_> = rows.collect();
        Self::from_weights(vars, rows)
    }

    /// The law of independent `self` and `other` side by side.
    pub fn product(&self, other: &JointDistribution) -> Result<Self, InfoError> {
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        let mut rows = Vec::with_capacity(self.rows.len() * other.rows.len());
        for (a, wa) in &self.rows {
            for (b, wb) in &other.rows {
                let mut t = a.clone();
                t.extend_from_slice(b);
                rows.push((t, wa.checked_mul(*wb).ok_or(InfoError::Overflow)?));
            }
        }
        Self::from_weights(vars, rows)
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    /// Common denominator of all probabilities.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Support rows with their integer weights over [`total`](Self::total).
    pub fn rows(&self) -> impl Iterator<Item = (&[u32], u64)> + '_ {
        self.rows.iter().map(|(t, w)| (t.as_slice(), *w))
    }

    /// Support rows as reduced `(tuple, numerator, denominator)` triples.
    pub fn rational_rows(&self) -> impl Iterator<Item = (&[u32], u64, u64)> + '_ {
        self.rows.iter().map(|(t, w)| {
            let g = gcd(*w, self.total);
            (t.as_slice(), w / g, self.total / g)
        })
    }

    /// Reduced probability of `tuple`; `(0, 1)` outside the support.
    pub fn probability(&self, tuple: &[u32]) -> (u64, u64) {
        match self.rows.binary_search_by(|(t, _)| t.as_slice().cmp(tuple)) {
            Ok(i) => {
                let w = self.rows[i].1;
                let g = gcd(w, self.total);
                (w / g, self.total / g)
            }
            Err(_) => (0, 1),
        }
    }

    pub fn support_size(&self) -> usize {
        self.rows.len()
    }

    /// Positions of the named variables in declaration order, deduplicated.
    fn indices(&self, names: &[&str]) -> Result<Vec<usize>, InfoError> {
        let mut idx = Vec::with_capacity(names.len());
        for name in names {
            let i = self
                .vars
                .iter()
                .position(|v| v.name == *name)
                .ok_or_else(|| InfoError::UnknownVariable(name.to_string()))?;
            idx.push(i);
        }
        idx.sort_unstable();
        idx.dedup();
        Ok(idx)
    }

    fn key(&self, tuple: &[u32], idx: &[usize]) -> u64 {
        idx.iter()
            .fold(0u64, |k, &i| k * self.vars[i].alphabet as u64 + tuple[i] as u64)
    }

    /// Sorted `(key, weight)` groups of the projection onto `idx`.
    fn grouped(&self, idx: &[usize]) -> Vec<(u64, u64)> {
        let mut keyed: Vec<(u64, u64)> = self
            .rows
            .iter()
            .map(|(t, w)| (self.key(t, idx), *w))
            .collect();
        keyed.sort_unstable_by_key(|&(k, _)| k);
        let mut out: Vec<(u64, u64)> = Vec::with_capacity(keyed.len());
        for (k, w) in keyed {
            match out.last_mut() {
                Some((lk, lw)) if *lk == k => *lw += w,
                _ => out.push((k, w)),
            }
        }
        out
    }

    /// Exact marginal on the named variables (kept in declaration order).
    pub fn marginal(&self, names: &[&str]) -> Result<JointDistribution, InfoError> {
        let idx = self.indices(names)?;
        let vars: Vec<Variable> = idx.iter().map(|&i| self.vars[i].clone()).collect();
        let rows: Vec<(Vec<u32>, u64)> = self
            .rows
            .iter()
            .map(|(t, w)| (idx.iter().map(|&i| t[i]).collect(), *w))
            .collect();
        Self::from_weights(vars, rows)
    }

    /// `Σ w log2 w` over the projection onto `idx`.
    fn weighted_log_sum(&self, idx: &[usize]) -> f64 {
        self.grouped(idx)
            .iter()
            .map(|&(_, w)| w as f64 * libm::log2(w as f64))
            .sum()
    }

    fn entropy_of(&self, idx: &[usize]) -> f64 {
        if idx.is_empty() {
            return 0.0;
        }
        let total = self.total as f64;
        let h = libm::log2(total) - self.weighted_log_sum(idx) / total;
        h.max(0.0)
    }

    /// Shannon entropy in bits of the named variables.
    pub fn entropy(&self, names: &[&str]) -> Result<f64, InfoError> {
        let idx = self.indices(names)?;
        Ok(self.entropy_of(&idx))
    }

    /// `H(target | given) = H(target ∪ given) - H(given)`; exactly zero when
    /// `target` is a function of `given`.
    pub fn conditional_entropy(&self, target: &[&str], given: &[&str]) -> Result<f64, InfoError> {
        if self.is_function_of(target, given)? {
            return Ok(0.0);
        }
        let mut all: Vec<&str> = target.to_vec();
        all.extend_from_slice(given);
        let joint = self.indices(&all)?;
        let cond = self.indices(given)?;
        Ok((self.entropy_of(&joint) - self.entropy_of(&cond)).max(0.0))
    }

    /// Mutual information in bits between two disjoint variable sets.
    ///
    /// Returns exactly `0.0` whenever the sets are independent under the exact
    /// law.
    pub fn mutual_information(&self, a: &[&str], b: &[&str]) -> Result<f64, InfoError> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        disjoint(&self.vars, &ia, &ib)?;
        if self.independent_idx(&ia, &ib) {
            return Ok(0.0);
        }
        let mut iab = ia.clone();
        iab.extend_from_slice(&ib);
        iab.sort_unstable();
        let total = self.total as f64;
        let sum = self.weighted_log_sum(&iab) - self.weighted_log_sum(&ia) - self.weighted_log_sum(&ib);
        Ok((libm::log2(total) + sum / total).max(0.0))
    }

    /// Exact test of `P(a, b) = P(a) P(b)` on the full product of supports.
    pub fn is_independent(&self, a: &[&str], b: &[&str]) -> Result<bool, InfoError> {
        let ia = self.indices(a)?;
        let ib = self.indices(b)?;
        disjoint(&self.vars, &ia, &ib)?;
        Ok(self.independent_idx(&ia, &ib))
    }

    fn independent_idx(&self, ia: &[usize], ib: &[usize]) -> bool {
        let wa: BTreeMap<u64, u64> = self.grouped(ia).into_iter().collect();
        let wb: BTreeMap<u64, u64> = self.grouped(ib).into_iter().collect();
        let mut joint: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for (t, w) in &self.rows {
            *joint.entry((self.key(t, ia), self.key(t, ib))).or_insert(0) += w;
        }
        if joint.len() != wa.len() * wb.len() {
            return false;
        }
        let total = self.total as u128;
        joint
            .iter()
            .all(|((ka, kb), &w)| w as u128 * total == wa[ka] as u128 * wb[kb] as u128)
    }

    /// True iff some deterministic function of `given` equals `target` on the
    /// support.
    pub fn is_function_of(&self, target: &[&str], given: &[&str]) -> Result<bool, InfoError> {
        let it = self.indices(target)?;
        let ig = self.indices(given)?;
        let mut seen: BTreeMap<u64, u64> = BTreeMap::new();
        for (t, _) in &self.rows {
            let kt = self.key(t, &it);
            match seen.entry(self.key(t, &ig)) {
                alloc::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(kt);
                }
                alloc::collections::btree_map::Entry::Occupied(e) => {
                    if *e.get() != kt {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

fn gcd128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn validate_vars(vars: &[Variable]) -> Result<(), InfoError> {
    for (i, v) in vars.iter().enumerate() {
        if v.alphabet == 0 {
            return Err(InfoError::EmptyAlphabet(v.name.clone()));
        }
        if vars[..i].iter().any(|u| u.name == v.name) {
            return Err(InfoError::DuplicateVariable(v.name.clone()));
        }
    }
    joint_size(vars).map(|_| ())
}

fn joint_size(vars: &[Variable]) -> Result<u64, InfoError> {
    vars.iter().try_fold(1u64, |acc, v| {
        acc.checked_mul(v.alphabet as u64).ok_or(InfoError::TooLarge)
    })
}

fn check_tuple(vars: &[Variable], tuple: &[u32]) -> Result<(), InfoError> {
    if tuple.len() != vars.len() {
        return Err(InfoError::Arity {
            expected: vars.len(),
            found: tuple.len(),
        });
    }
    for (v, &x) in vars.iter().zip(tuple) {
        if x >= v.alphabet {
            return Err(InfoError::ValueOutOfRange {
                variable: v.name.clone(),
                value: x,
                alphabet: v.alphabet,
            });
        }
    }
    Ok(())
}

fn disjoint(vars: &[Variable], a: &[usize], b: &[usize]) -> Result<(), InfoError> {
    match a.iter().find(|i| b.contains(i)) {
        Some(&i) => Err(InfoError::Overlap(vars[i].name.clone())),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn bit(name: &str) -> Variable {
        Variable::new(name, 2)
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn marginal_examples() {
        let pair = JointDistribution::uniform(vec![bit("A"), bit("B")]).unwrap();
        let a = pair.marginal(&["A"]).unwrap();
        assert_eq!(a, JointDistribution::uniform(vec![bit("A")]).unwrap());

        let point = JointDistribution::from_weights(vec![bit("A"), bit("B")], [(vec![1, 0], 5)]).unwrap();
        let pa = point.marginal(&["B"]).unwrap();
        assert_eq!(pa.support_size(), 1);
        assert_eq!(pa.probability(&[0]), (1, 1));

        let diag = JointDistribution::from_rationals(
            vec![bit("A"), bit("B")],
            [(vec![0, 0], 1, 2), (vec![1, 1], 1, 2)],
        )
        .unwrap();
        assert_eq!(
            diag.marginal(&["B"]).unwrap(),
            JointDistribution::uniform(vec![bit("B")]).unwrap()
        );
        assert_eq!(
            diag.marginal(&["C"]),
            Err(InfoError::UnknownVariable("C".into()))
        );
    }

    #[test]
    fn entropy_examples() {
        let u = JointDistribution::uniform(vec![bit("A")]).unwrap();
        assert_eq!(u.entropy(&["A"]).unwrap(), 1.0);
        let point = JointDistribution::from_weights(vec![bit("A")], [(vec![1], 1)]).unwrap();
        assert_eq!(point.entropy(&["A"]).unwrap(), 0.0);
        let z3 = JointDistribution::uniform(vec![Variable::new("A", 3)]).unwrap();
        assert!(close(z3.entropy(&["A"]).unwrap(), libm::log2(3.0)));
        assert!((z3.entropy(&["A"]).unwrap() - 1.58496).abs() < 1e-5);
    }

    #[test]
    fn mutual_information_examples() {
        let ind = JointDistribution::uniform(vec![bit("A"), bit("B")]).unwrap();
        assert_eq!(ind.mutual_information(&["A"], &["B"]).unwrap(), 0.0);
        let copy = JointDistribution::from_outcomes(vec![bit("A"), bit("B")], [vec![0, 0], vec![1, 1]]).unwrap();
        assert!(close(copy.mutual_information(&["A"], &["B"]).unwrap(), 1.0));
        assert_eq!(
            copy.mutual_information(&["A"], &["A", "B"]),
            Err(InfoError::Overlap("A".into()))
        );
    }

    #[test]
    fn function_of_examples() {
        let copy = JointDistribution::from_outcomes(vec![bit("A"), bit("B")], [vec![0, 0], vec![1, 1]]).unwrap();
        assert!(copy.is_function_of(&["B"], &["A"]).unwrap());
        let ind = JointDistribution::uniform(vec![bit("A"), bit("B")]).unwrap();
        assert!(!ind.is_function_of(&["B"], &["A"]).unwrap());
        // Anything is a function of itself, and constants of anything.
        assert!(ind.is_function_of(&["A"], &["A", "B"]).unwrap());
        assert_eq!(ind.conditional_entropy(&["A"], &["A"]).unwrap(), 0.0);
    }

    #[test]
    fn rational_construction() {
        let err = JointDistribution::from_rationals(vec![bit("A")], [(vec![0], 1, 3), (vec![1], 1, 3)]);
        assert_eq!(
            err,
            Err(InfoError::NotNormalized {
                numerator: 2,
                denominator: 3
            })
        );
        let d = JointDistribution::from_rationals(
            vec![Variable::new("A", 3)],
            [(vec![0], 1, 6), (vec![1], 1, 3), (vec![2], 1, 2), (vec![2], 0, 7)],
        )
        .unwrap();
        assert_eq!(d.total(), 6);
        let rows: Vec<_> = d.rational_rows().map(|(t, n, m)| (t.to_vec(), n, m)).collect();
        assert_eq!(rows, vec![(vec![0], 1, 6), (vec![1], 1, 3), (vec![2], 1, 2)]);
        assert!(matches!(
            JointDistribution::from_weights(vec![bit("A")], [(vec![2], 1)]),
            Err(InfoError::ValueOutOfRange { .. })
        ));
        assert_eq!(
            JointDistribution::from_weights(vec![bit("A")], [(vec![0], 0)]),
            Err(InfoError::NoMass)
        );
        assert_eq!(
            JointDistribution::from_weights(vec![bit("A"), bit("A")], [(vec![0, 0], 1)]),
            Err(InfoError::DuplicateVariable("A".into()))
        );
    }

    #[test]
    fn product_is_independent() {
        let a = JointDistribution::from_weights(vec![Variable::new("A", 3)], [(vec![0], 1), (vec![2], 4)]).unwrap();
        let b = JointDistribution::from_weights(vec![bit("B")], [(vec![0], 2), (vec![1], 3)]).unwrap();
        let ab = a.product(&b).unwrap();
        assert!(ab.is_independent(&["A"], &["B"]).unwrap());
        assert_eq!(ab.mutual_information(&["A"], &["B"]).unwrap(), 0.0);
        assert_eq!(ab.mutual_information(&["B"], &["A"]).unwrap(), 0.0);
    }
}
