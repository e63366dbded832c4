use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::mass::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{same_frame, Rational, Subset};

/// Outcome of a normalized combination.
///
/// `conflict_mass` is the unnormalized mass that fell on the empty set and
/// `normalization_constant` is `1 - conflict_mass`; the result's masses were
/// divided by it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CombinationReport {
    pub result: MassFunction,
    pub conflict_mass: Rational,
    pub normalization_constant: Rational,
}

impl CombinationReport {
    /// A report for a mass function that needed no renormalization.
    pub fn identity(result: MassFunction) -> Self {
        CombinationReport { result, conflict_mass: Rational::zero(), normalization_constant: Rational::one() }
    }

    pub(crate) fn with_constant(result: MassFunction, normalization_constant: Rational) -> Self {
        let conflict_mass = Rational::one() - &normalization_constant;
        CombinationReport { result, conflict_mass, normalization_constant }
    }

    /// Combines this result with another report, multiplying the constants so
    /// that the final constant is the overall probability of non-conflict.
    pub fn and_then(self, other: &CombinationReport, limit: Option<usize>) -> Result<CombinationReport> {
        let step = combine_bounded(&self.result, &other.result, limit)?;
        let k = self.normalization_constant * &other.normalization_constant * step.normalization_constant;
        Ok(CombinationReport::with_constant(step.result, k))
    }
}

/// Dempster's rule: intersect focal sets pairwise, multiply masses, drop
/// the mass on the empty set and renormalize.
pub fn combine(a: &MassFunction, b: &MassFunction) -> Result<CombinationReport> {
    combine_bounded(a, b, None)
}

/// [`combine`] that fails once the result would exceed `limit` focal sets.
pub fn combine_bounded(a: &MassFunction, b: &MassFunction, limit: Option<usize>) -> Result<CombinationReport> {
    same_frame(a.frame(), b.frame())?;
    let mut acc: BTreeMap<Subset, Rational> = BTreeMap::new();
    let mut conflict = Rational::zero();
    for (fa, ma) in a.focal_sets() {
        for (fb, mb) in b.focal_sets() {
            let product = ma * mb;
            let meet = fa.intersection(fb);
            if meet.is_empty() {
                conflict += product;
            } else {
                *acc.entry(meet).or_insert_with(Rational::zero) += product;
                if let Some(max) = limit {
                    if acc.len() > max {
                        return Err(Error::FocalLimitExceeded(max));
                    }
                }
            }
        }
    }
    let k = Rational::one() - &conflict;
    if k.is_zero() {
        return Err(Error::IncompatibleEvidence);
    }
    for mass in acc.values_mut() {
        *mass /= &k;
    }
    Ok(CombinationReport {
        result: MassFunction::from_parts(a.frame(), acc),
        conflict_mass: conflict,
        normalization_constant: k,
    })
}

/// `m ⊕ m ⊕ ... ⊕ m` with `k` copies, folded left to right. The reported
/// constant is the product of the per-step constants.
pub fn combine_power(m: &MassFunction, k: u32) -> Result<CombinationReport> {
    combine_power_bounded(m, k, None)
}

pub fn combine_power_bounded(m: &MassFunction, k: u32, limit: Option<usize>) -> Result<CombinationReport> {
    if k == 0 {
        return Err(Error::InvalidArgument("combination power must be at least 1".into()));
    }
    let unit = CombinationReport::identity(m.clone());
    let mut acc = unit.clone();
    for _ in 1..k {
        acc = acc.and_then(&unit, limit)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::rational::ratio;
    use crate::frames::{Frame, Hypothesis};
    use std::sync::Arc;

    fn nested_white(frame: &Arc<Frame>, n: i64) -> MassFunction {
        MassFunction::from_labels(frame, (1..=n).map(|w| ((w..=n).collect(), ratio(1, n)))).unwrap()
    }

    #[test]
    fn two_simple_supports() {
        let f = Frame::new(vec![0, 1]).unwrap();
        let m1 = MassFunction::from_labels(&f, [(vec![0], ratio(1, 2)), (vec![0, 1], ratio(1, 2))]).unwrap();
        let m2 = MassFunction::from_labels(&f, [(vec![1], ratio(1, 2)), (vec![0, 1], ratio(1, 2))]).unwrap();
        let r = combine(&m1, &m2).unwrap();
        let expected = MassFunction::from_labels(
            &f,
            [(vec![0], ratio(1, 3)), (vec![1], ratio(1, 3)), (vec![0, 1], ratio(1, 3))],
        )
        .unwrap();
        assert_eq!(r.result, expected);
        assert_eq!(r.conflict_mass, ratio(1, 4));
        assert_eq!(r.normalization_constant, ratio(3, 4));
    }

    #[test]
    fn vacuous_is_neutral() {
        let f = Frame::range(0, 4).unwrap();
        let m = nested_white(&f, 4);
        let r = combine(&m, &MassFunction::vacuous(&f)).unwrap();
        assert_eq!(r.result, m);
        assert_eq!(r.conflict_mass, ratio(0, 1));
    }

    #[test]
    fn nested_white_squared() {
        let f = Frame::range(0, 4).unwrap();
        let m = nested_white(&f, 4);
        let r = combine(&m, &m).unwrap();
        for (lo, mass) in [(1, ratio(1, 16)), (2, ratio(3, 16)), (3, ratio(5, 16)), (4, ratio(7, 16))] {
            assert_eq!(r.result.mass_of_labels(lo..=4).unwrap(), mass);
        }
        assert_eq!(r.result.belief(&Hypothesis::singleton(&f, 4).unwrap()).unwrap(), ratio(7, 16));
    }

    #[test]
    fn power_matches_cube_law() {
        let f = Frame::range(0, 4).unwrap();
        let r = combine_power(&nested_white(&f, 4), 3).unwrap();
        for i in 1..=4i64 {
            let expected = ratio(i.pow(3) - (i - 1).pow(3), 64);
            assert_eq!(r.result.mass_of_labels(i..=4).unwrap(), expected);
        }
        let once = combine_power(&nested_white(&f, 4), 1).unwrap();
        assert_eq!(once.result, nested_white(&f, 4));
        assert_eq!(once.conflict_mass, ratio(0, 1));
        assert!(combine_power(&nested_white(&f, 4), 0).is_err());
    }

    #[test]
    fn total_conflict_is_reported() {
        let f = Frame::new(vec![0, 1]).unwrap();
        let a = MassFunction::from_labels(&f, [(vec![0], ratio(1, 1))]).unwrap();
        let b = MassFunction::from_labels(&f, [(vec![1], ratio(1, 1))]).unwrap();
        let err = combine(&a, &b).unwrap_err();
        assert_eq!(err, Error::IncompatibleEvidence);
        assert!(err.to_string().contains("incompatible evidence"));
    }

    #[test]
    fn focal_limit() {
        let f = Frame::range(0, 4).unwrap();
        let m = nested_white(&f, 4);
        assert_eq!(combine_bounded(&m, &m, Some(2)).unwrap_err(), Error::FocalLimitExceeded(2));
        assert!(combine_bounded(&m, &m, Some(4)).is_ok());
    }

    #[test]
    fn frame_mismatch() {
        let a = MassFunction::vacuous(&Frame::range(0, 3).unwrap());
        let b = MassFunction::vacuous(&Frame::range(0, 4).unwrap());
        assert_eq!(combine(&a, &b).unwrap_err(), Error::FrameMismatch);
    }
}
