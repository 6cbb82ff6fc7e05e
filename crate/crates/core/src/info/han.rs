//! Han-type inequalities for conditional entropies of variable blocks.
//!
//! With blocks `Y_1..Y_k` and conditioning set `X`, a collection of index
//! subsets that covers every index exactly `h` times satisfies
//! `Σ_S H(Y_S | X) >= h · H(Y_[k] | X)`. Taking all `r`-subsets gives the
//! classical Han inequality with `h = C(k-1, r-1)`.

use alloc::vec::Vec;

use super::{InfoError, JointDistribution};
use crate::radix::{binomial, Combinations};

/// Slack below this is treated as floating-point noise rather than a
/// violation.
const SLACK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HanReport {
    pub holds: bool,
    /// `lhs - rhs`, in bits.
    pub slack: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub h: usize,
}

/// Checks `Σ_{S ∈ collection} H(Y_S | X) >= h · H(Y_[k] | X)`.
///
/// `blocks[i]` lists the variables of `Y_i` (indices are zero-based) and
/// `given` lists `X`. Every index in `0..blocks.len()` must lie in exactly
/// `h` members of `collection`.
pub fn check_han_collection(
    dist: &JointDistribution,
    given: &[&str],
    blocks: &[Vec<&str>],
    collection: &[Vec<usize>],
    h: usize,
) -> Result<HanReport, InfoError> {
    let k = blocks.len();
    let mut cover = alloc::vec![0usize; k];
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(collection.len());
    for member in collection {
        let mut m = member.clone();
        m.sort_unstable();
        m.dedup();
        for &i in &m {
            if i >= k {
                return Err(InfoError::IndexOutOfRange { index: i, k });
            }
            cover[i] += 1;
        }
        members.push(m);
    }
    if let Some((element, &count)) = cover.iter().enumerate().find(|(_, &c)| c != h) {
        return Err(InfoError::CoverCount {
            element,
            count,
            expected: h,
        });
    }

    let block_entropy = |subset: &[usize]| -> Result<f64, InfoError> {
        let names: Vec<&str> = subset.iter().flat_map(|&i| blocks[i].iter().copied()).collect();
        dist.conditional_entropy(&names, given)
    };
    let all: Vec<usize> = (0..k).collect();
    let full = block_entropy(&all)?;
    let mut lhs = 0.0;
    for m in &members {
        lhs += block_entropy(m)?;
    }
    let rhs = h as f64 * full;
    let slack = lhs - rhs;
    Ok(HanReport {
        holds: slack >= -SLACK_TOLERANCE,
        slack,
        lhs,
        rhs,
        h,
    })
}

/// Checks `Σ_{|S| = r} H(Y_S | X) >= C(k-1, r-1) · H(Y_[k] | X)` by handing
/// the collection of all `r`-subsets to [`check_han_collection`].
pub fn check_han_subsets(
    dist: &JointDistribution,
    given: &[&str],
    blocks: &[Vec<&str>],
    r: usize,
) -> Result<HanReport, InfoError> {
    let k = blocks.len();
    if r == 0 || r > k {
        return Err(InfoError::SubsetSize { r, k });
    }
    let collection: Vec<Vec<usize>> = Combinations::new(k, r).collect();
    check_han_collection(dist, given, blocks, &collection, binomial(k - 1, r - 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::info::Variable;
    use alloc::vec;

    fn blocks(names: &[&'static str]) -> Vec<Vec<&'static str>> {
        names.iter().map(|n| vec![*n]).collect()
    }

    #[test]
    fn single_member_collection_has_zero_slack() {
        let d = JointDistribution::from_weights(
            vec![Variable::new("Y1", 2), Variable::new("Y2", 3)],
            [(vec![0, 0], 3), (vec![1, 2], 1), (vec![0, 1], 2)],
        )
        .unwrap();
        let r = check_han_collection(&d, &[], &blocks(&["Y1", "Y2"]), &[vec![0, 1]], 1).unwrap();
        assert!(r.holds);
        assert_eq!(r.slack, 0.0);
        let r = check_han_subsets(&d, &[], &blocks(&["Y1", "Y2"]), 2).unwrap();
        assert_eq!(r.slack, 0.0);
    }

    #[test]
    fn copied_bit_has_one_bit_slack() {
        // Y1 = Y2 uniform: H(Y1) + H(Y2) - H(Y1,Y2) = 1 + 1 - 1.
        let d = JointDistribution::from_outcomes(
            vec![Variable::new("Y1", 2), Variable::new("Y2", 2)],
            [vec![0, 0], vec![1, 1]],
        )
        .unwrap();
        let r = check_han_collection(&d, &[], &blocks(&["Y1", "Y2"]), &[vec![0], vec![1]], 1).unwrap();
        assert!(r.holds);
        assert!((r.slack - 1.0).abs() < 1e-12);
    }

    #[test]
    fn independent_uniform_bits_are_tight_at_r1() {
        let d = JointDistribution::uniform(vec![
            Variable::new("Y1", 2),
            Variable::new("Y2", 2),
            Variable::new("Y3", 2),
        ])
        .unwrap();
        let r = check_han_subsets(&d, &[], &blocks(&["Y1", "Y2", "Y3"]), 1).unwrap();
        assert!((r.lhs - 3.0).abs() < 1e-12);
        assert!((r.rhs - 3.0).abs() < 1e-12);
        assert!(r.slack.abs() < 1e-12);
    }

    #[test]
    fn precondition_errors() {
        let d = JointDistribution::uniform(vec![Variable::new("Y1", 2), Variable::new("Y2", 2)]).unwrap();
        let b = blocks(&["Y1", "Y2"]);
        assert_eq!(
            check_han_collection(&d, &[], &b, &[vec![0], vec![0, 1]], 1),
            Err(InfoError::CoverCount {
                element: 0,
                count: 2,
                expected: 1
            })
        );
        assert_eq!(
            check_han_collection(&d, &[], &b, &[vec![2]], 1),
            Err(InfoError::IndexOutOfRange { index: 2, k: 2 })
        );
        assert_eq!(check_han_subsets(&d, &[], &b, 0), Err(InfoError::SubsetSize { r: 0, k: 2 }));
        assert_eq!(check_han_subsets(&d, &[], &b, 3), Err(InfoError::SubsetSize { r: 3, k: 2 }));
    }

    #[test]
    fn conditioning_variable_is_respected() {
        // Y1 = Y2 = X: everything is determined by X, so both sides vanish.
        let d = JointDistribution::from_outcomes(
            vec![Variable::new("X", 2), Variable::new("Y1", 2), Variable::new("Y2", 2)],
            [vec![0, 0, 0], vec![1, 1, 1]],
        )
        .unwrap();
        let r = check_han_subsets(&d, &["X"], &blocks(&["Y1", "Y2"]), 1).unwrap();
        assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
    }
}
