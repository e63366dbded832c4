//! Weights of evidence.
//!
//! For simple hypotheses the weight is the likelihood ratio. For arbitrary
//! hypotheses it is the ratio of plausibilities under the belief function
//! the observations induce, which agrees with the likelihood ratio on
//! singletons because plausibility there is proportional to likelihood.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::belief::MassFunction;
use crate::error::{Error, Result};
use crate::frames::{same_frame, Hypothesis, LogWeight, Rational};
use crate::gfm::{GeneralizedFunctionalModel, Likelihoods, ObservationTally};

/// Whether observing `outcome` favours `theta` over `theta2`, i.e. whether
/// `l_x(θ) / l_x(θ') > 1`.
pub fn supports(model: &GeneralizedFunctionalModel, outcome: &str, theta: i64, theta2: i64) -> Result<bool> {
    let tally = ObservationTally::single(outcome);
    let num = model.likelihood(&tally, theta)?;
    let den = model.likelihood(&tally, theta2)?;
    if den.is_zero() {
        return Err(Error::UndefinedSupportRatio);
    }
    Ok(num > den)
}

/// Likelihood ratio `l(θ) / l(θ')`.
pub fn weight_simple(model: &GeneralizedFunctionalModel, tally: &ObservationTally, theta: i64, theta2: i64) -> Result<LogWeight> {
    let num = model.likelihood(tally, theta)?;
    let den = model.likelihood(tally, theta2)?;
    LogWeight::from_ratio(&num, &den).ok_or(Error::WeightUndefined)
}

/// `Pl(H) / Pl(H')` under the belief function of the whole tally.
pub fn weight(model: &GeneralizedFunctionalModel, tally: &ObservationTally, h: &Hypothesis, h2: &Hypothesis) -> Result<LogWeight> {
    weight_bounded(model, tally, h, h2, None)
}

pub fn weight_bounded(
    model: &GeneralizedFunctionalModel,
    tally: &ObservationTally,
    h: &Hypothesis,
    h2: &Hypothesis,
    limit: Option<usize>,
) -> Result<LogWeight> {
    same_frame(model.theta(), h.frame())?;
    same_frame(model.theta(), h2.frame())?;
    check_non_empty(h, h2)?;
    let combined = model.observe_tally_bounded(tally, limit)?;
    weight_from_mass(&combined.result, h, h2)
}

/// Plausibility ratio under an already combined mass function.
pub fn weight_from_mass(m: &MassFunction, h: &Hypothesis, h2: &Hypothesis) -> Result<LogWeight> {
    check_non_empty(h, h2)?;
    let num = m.plausibility(h)?;
    let den = m.plausibility(h2)?;
    LogWeight::from_ratio(&num, &den).ok_or(Error::WeightUndefined)
}

/// Sum rule, valid when the combined belief function is precise.
pub fn weight_precise(likelihoods: &Likelihoods, h: &Hypothesis, h2: &Hypothesis) -> Result<LogWeight> {
    let sum = |hyp: &Hypothesis| -> Result<Rational> {
        same_frame(&likelihoods.frame, hyp.frame())?;
        Ok(hyp.members().iter().map(|t| &likelihoods.values[t]).sum())
    };
    LogWeight::from_ratio(&sum(h)?, &sum(h2)?).ok_or(Error::WeightUndefined)
}

/// Max rule, valid when the combined belief function is consonant.
pub fn weight_consonant(likelihoods: &Likelihoods, h: &Hypothesis, h2: &Hypothesis) -> Result<LogWeight> {
    let max = |hyp: &Hypothesis| -> Result<Rational> {
        same_frame(&likelihoods.frame, hyp.frame())?;
        Ok(hyp.members().iter().map(|t| &likelihoods.values[t]).max().cloned().unwrap_or_else(Rational::zero))
    };
    LogWeight::from_ratio(&max(h)?, &max(h2)?).ok_or(Error::WeightUndefined)
}

fn check_non_empty(h: &Hypothesis, h2: &Hypothesis) -> Result<()> {
    if h.is_empty() || h2.is_empty() {
        Err(Error::EmptyHypothesis)
    } else {
        Ok(())
    }
}

/// Number `k` of consecutive white draws from a two-ball urn for which the
/// weight of "both white" over "one white, one black", namely `2^k`, is
/// closest to `w` on a log scale. An exact half-way tie rounds down.
pub fn interpret_as_urn_draws(w: &LogWeight) -> Result<u64> {
    let w = match w {
        LogWeight::Finite(q) if *q > Rational::one() => q,
        _ => return Err(Error::NoSupportingInterpretation),
    };
    let (p, q) = (w.numer(), w.denom());
    // floor(log2 w), starting from the bit-length estimate
    let mut k = p.bits() as i64 - q.bits() as i64;
    let scaled = |k: i64| -> BigInt { q << k.max(0) as u64 };
    while k > 0 && scaled(k) > *p {
        k -= 1;
    }
    while scaled(k + 1) <= *p {
        k += 1;
    }
    // log2 w - k < 1/2  <=>  p² < 2^(2k+1) q²
    let lhs = p * p;
    let rhs = (q * q) << (2 * k as u64 + 1);
    Ok(if lhs <= rhs { k as u64 } else { k as u64 + 1 })
}

/// [`interpret_as_urn_draws`] for a weight known only by its log₁₀.
pub fn interpret_log10_as_urn_draws(log10_w: f64) -> Result<u64> {
    if !log10_w.is_finite() || log10_w <= 0.0 {
        return Err(Error::NoSupportingInterpretation);
    }
    let log2_w = log10_w * std::f64::consts::LOG2_10;
    let down = log2_w.floor();
    Ok(if log2_w - down <= 0.5 { down as u64 } else { down as u64 + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::rational::{integer, pow, ratio};
    use crate::frames::Frame;

    fn ordered_urn() -> GeneralizedFunctionalModel {
        GeneralizedFunctionalModel::from_fn(
            Frame::range(0, 4).unwrap(),
            (1..=4).map(|w| w.to_string()).collect(),
            vec!["white".into(), "black".into()],
            vec![ratio(1, 4); 4],
            |t, w| if (w as i64 + 1) <= t { 0 } else { 1 },
        )
        .unwrap()
    }

    #[test]
    fn support_relation() {
        let m = ordered_urn();
        assert!(supports(&m, "white", 3, 1).unwrap());
        assert!(!supports(&m, "white", 2, 2).unwrap());
        assert_eq!(supports(&m, "white", 2, 0).unwrap_err(), Error::UndefinedSupportRatio);
    }

    #[test]
    fn simple_weights() {
        let m = ordered_urn();
        for k in 1..=5u32 {
            let t = ObservationTally::new([("white", k)]).unwrap();
            assert_eq!(weight_simple(&m, &t, 4, 2).unwrap(), LogWeight::Finite(pow(&integer(2), k)));
            assert_eq!(weight_simple(&m, &t, 3, 3).unwrap(), LogWeight::Finite(integer(1)));
        }
        let t = ObservationTally::single("white");
        assert_eq!(weight_simple(&m, &t, 1, 0).unwrap(), LogWeight::Infinite);
        assert_eq!(weight_simple(&m, &t, 0, 0).unwrap_err(), Error::WeightUndefined);
    }

    #[test]
    fn general_weight_reduces_to_simple_on_singletons() {
        let m = ordered_urn();
        let f = m.theta().clone();
        let t = ObservationTally::new([("white", 2), ("black", 1)]).unwrap();
        for a in 1..=3 {
            for b in 1..=3 {
                let h = Hypothesis::singleton(&f, a).unwrap();
                let h2 = Hypothesis::singleton(&f, b).unwrap();
                assert_eq!(weight(&m, &t, &h, &h2).unwrap(), weight_simple(&m, &t, a, b).unwrap());
            }
        }
    }

    #[test]
    fn weight_errors() {
        let m = ordered_urn();
        let f = m.theta().clone();
        let t = ObservationTally::single("white");
        let zero = Hypothesis::singleton(&f, 0).unwrap();
        assert_eq!(weight(&m, &t, &zero, &zero).unwrap_err(), Error::WeightUndefined);
        let empty = Hypothesis::empty(&f);
        assert_eq!(weight(&m, &t, &empty, &zero).unwrap_err(), Error::EmptyHypothesis);
        let other = Hypothesis::whole(&Frame::range(0, 5).unwrap());
        assert_eq!(weight(&m, &t, &other, &zero).unwrap_err(), Error::FrameMismatch);
        let whole = Hypothesis::whole(&f);
        assert_eq!(weight(&m, &t, &whole, &whole).unwrap(), LogWeight::Finite(integer(1)));
    }

    #[test]
    fn precise_rule() {
        let f = Frame::new(vec![1, 2]).unwrap();
        let l = Likelihoods::new(&f, vec![ratio(1, 4), ratio(3, 4)]).unwrap();
        let both = Hypothesis::whole(&f);
        let one = Hypothesis::singleton(&f, 1).unwrap();
        assert_eq!(weight_precise(&l, &both, &one).unwrap(), LogWeight::Finite(integer(4)));
        assert_eq!(weight_precise(&l, &one, &one).unwrap(), LogWeight::Finite(integer(1)));
        let zero = Likelihoods::new(&f, vec![ratio(0, 1), ratio(0, 1)]).unwrap();
        assert_eq!(weight_precise(&zero, &one, &both).unwrap_err(), Error::WeightUndefined);
    }

    #[test]
    fn consonant_rule() {
        let m = ordered_urn();
        let f = m.theta().clone();
        for k in 1..=4u32 {
            let t = ObservationTally::new([("white", k)]).unwrap();
            let l = m.likelihood_function(&t).unwrap();
            let h = Hypothesis::from_labels(&f, [2, 3]).unwrap();
            let h2 = Hypothesis::from_labels(&f, [1, 2]).unwrap();
            let expected = LogWeight::Finite(pow(&ratio(3, 2), k));
            assert_eq!(weight_consonant(&l, &h, &h2).unwrap(), expected);
            assert_eq!(weight(&m, &t, &h, &h2).unwrap(), expected);
        }
    }

    #[test]
    fn urn_draw_interpretation() {
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(integer(2))).unwrap(), 1);
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(integer(1024))).unwrap(), 10);
        let five_e25 = integer(5) * pow(&integer(10), 25);
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(five_e25)).unwrap(), 85);
        // 2^10.4 rounds down, 2^10.6 rounds up
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(integer(1351))).unwrap(), 10);
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(integer(1552))).unwrap(), 11);
        assert_eq!(interpret_as_urn_draws(&LogWeight::Finite(ratio(5, 4))).unwrap(), 0);
        for bad in [LogWeight::Finite(integer(1)), LogWeight::Finite(ratio(1, 2)), LogWeight::Infinite] {
            assert_eq!(interpret_as_urn_draws(&bad).unwrap_err(), Error::NoSupportingInterpretation);
        }
        assert_eq!(interpret_log10_as_urn_draws(25.7).unwrap(), 85);
        assert_eq!(interpret_log10_as_urn_draws(2f64.log10()).unwrap(), 1);
        // log2 = 0.5 exactly: tie rounds down
        assert_eq!(interpret_log10_as_urn_draws(0.5 * std::f64::consts::LOG10_2).unwrap(), 0);
        assert!(interpret_log10_as_urn_draws(-1.0).is_err());
    }
}
