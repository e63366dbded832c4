//! Generalized functional models.
//!
//! A model is a pair `(f, P)`: a known distribution `P` over disturbances
//! `ω ∈ Ω` and a function `f(θ, ω)` giving the outcome that must be observed
//! when `θ` is the true parameter. Observing `x` rules out every `θ` with
//! `f(θ, ω) != x`, which turns `P` into a mass function on the parameter
//! frame. Independent observations are combined with Dempster's rule.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::belief::{CombinationReport, MassFunction};
use crate::error::{Error, Result};
use crate::frames::rational::pow;
use crate::frames::{format_rational, Frame, Rational, Subset};

/// Finite tables `(Θ, Ω, X, P, f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedFunctionalModel {
    theta: Arc<Frame>,
    omega: Vec<String>,
    outcomes: Vec<String>,
    p_omega: Vec<Rational>,
    /// `f[t * |Ω| + w]` is the outcome index for parameter index `t` and
    /// disturbance index `w`.
    f_table: Vec<usize>,
}

impl GeneralizedFunctionalModel {
    /// `f_table[t][w]` is the outcome index forced by parameter index `t`
    /// and disturbance index `w`.
    pub fn new(
        theta: Arc<Frame>,
        omega: Vec<String>,
        outcomes: Vec<String>,
        p_omega: Vec<Rational>,
        f_table: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidModel(msg));
        if omega.is_empty() {
            return invalid("Ω must not be empty".into());
        }
        if outcomes.is_empty() {
            return invalid("outcome set must not be empty".into());
        }
        check_distinct("Ω", &omega)?;
        check_distinct("outcome", &outcomes)?;
        if p_omega.len() != omega.len() {
            return invalid(format!("P has {} entries for {} disturbances", p_omega.len(), omega.len()));
        }
        if let Some((w, p)) = p_omega.iter().enumerate().find(|(_, p)| !p.is_positive()) {
            return invalid(format!("P({}) = {} is not positive", omega[w], format_rational(p)));
        }
        let total: Rational = p_omega.iter().sum();
        if !total.is_one() {
            return invalid(format!("P sums to {}, not 1", format_rational(&total)));
        }
        if f_table.len() != theta.len() {
            return invalid(format!("f has {} rows for {} parameter values", f_table.len(), theta.len()));
        }
        let mut flat = Vec::with_capacity(theta.len() * omega.len());
        for (t, row) in f_table.iter().enumerate() {
            if row.len() != omega.len() {
                return invalid(format!("f is not total at θ = {}", theta.label(t)));
            }
            for (w, &x) in row.iter().enumerate() {
                if x >= outcomes.len() {
                    return invalid(format!("f({}, {}) is not a known outcome", theta.label(t), omega[w]));
                }
                flat.push(x);
            }
        }
        Ok(GeneralizedFunctionalModel { theta, omega, outcomes, p_omega, f_table: flat })
    }

    /// Builds `f` from a closure over `(θ label, ω index)` returning an
    /// outcome index.
    pub fn from_fn(
        theta: Arc<Frame>,
        omega: Vec<String>,
        outcomes: Vec<String>,
        p_omega: Vec<Rational>,
        f: impl Fn(i64, usize) -> usize,
    ) -> Result<Self> {
        let table = theta.labels().iter().map(|&t| (0..omega.len()).map(|w| f(t, w)).collect()).collect();
        Self::new(theta, omega, outcomes, p_omega, table)
    }

    pub fn theta(&self) -> &Arc<Frame> {
        &self.theta
    }

    pub fn omega(&self) -> &[String] {
        &self.omega
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn p_omega(&self) -> &[Rational] {
        &self.p_omega
    }

    /// Outcome index of `f(θ, ω)` by indices.
    pub fn f_index(&self, theta_index: usize, omega_index: usize) -> usize {
        self.f_table[theta_index * self.omega.len() + omega_index]
    }

    pub fn f(&self, theta: i64, omega: &str) -> Result<&str> {
        let t = self.theta.require_index(theta)?;
        let w = self
            .omega
            .iter()
            .position(|o| o == omega)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown disturbance {omega:?}")))?;
        Ok(&self.outcomes[self.f_index(t, w)])
    }

    pub fn outcome_index(&self, outcome: &str) -> Result<usize> {
        self.outcomes.iter().position(|o| o == outcome).ok_or_else(|| Error::UnknownOutcome(outcome.to_string()))
    }

    /// `Γ_x(ω) = {θ : f(θ, ω) = x}` for each disturbance, in Ω order.
    pub fn gamma(&self, outcome: usize) -> Vec<Subset> {
        (0..self.omega.len())
            .map(|w| Subset::from_indices(self.theta.len(), (0..self.theta.len()).filter(|&t| self.f_index(t, w) == outcome)))
            .collect()
    }

    /// The mass function induced by one observation of `outcome`.
    ///
    /// Disturbances that cannot produce the outcome for any parameter are
    /// reported as conflict; the normalization constant is the probability
    /// of the disturbances that can.
    pub fn observe_one(&self, outcome: &str) -> Result<CombinationReport> {
        let x = self.outcome_index(outcome)?;
        let mut focal: BTreeMap<Subset, Rational> = BTreeMap::new();
        let mut possible = Rational::zero();
        for (set, p) in self.gamma(x).into_iter().zip(&self.p_omega) {
            if !set.is_empty() {
                possible += p;
                *focal.entry(set).or_insert_with(Rational::zero) += p;
            }
        }
        if possible.is_zero() {
            return Err(Error::ObservationImpossible(outcome.to_string()));
        }
        for mass in focal.values_mut() {
            *mass /= &possible;
        }
        Ok(CombinationReport::with_constant(MassFunction::from_parts(&self.theta, focal), possible))
    }

    /// Combines single observations in the given order.
    ///
    /// The report's normalization constant is the product of every
    /// per-observation and per-combination constant, i.e. the probability
    /// that the drawn disturbances are jointly consistent.
    pub fn observe_sequence(&self, sequence: &[&str], limit: Option<usize>) -> Result<CombinationReport> {
        let (first, rest) = sequence.split_first().ok_or(Error::EmptyTally)?;
        let single = |x: &str| -> Result<CombinationReport> {
            let r = self.observe_one(x)?;
            check_limit(&r, limit)?;
            Ok(r)
        };
        let mut acc = single(first)?;
        for x in rest {
            acc = acc.and_then(&single(x)?, limit)?;
        }
        Ok(acc)
    }

    /// Dempster combination of every observation in the tally: each
    /// outcome's single-observation mass function raised to its count, then
    /// the per-outcome results combined in outcome order.
    pub fn observe_tally(&self, tally: &ObservationTally) -> Result<CombinationReport> {
        self.observe_tally_bounded(tally, None)
    }

    pub fn observe_tally_bounded(&self, tally: &ObservationTally, limit: Option<usize>) -> Result<CombinationReport> {
        let counts = self.tally_counts(tally)?;
        let mut acc: Option<CombinationReport> = None;
        for (x, &count) in counts.iter().enumerate() {
            if count == 0 {
                continue;
            }
            let single = self.observe_one(&self.outcomes[x])?;
            check_limit(&single, limit)?;
            let mut power = single.clone();
            for _ in 1..count {
                power = power.and_then(&single, limit)?;
            }
            acc = Some(match acc {
                None => power,
                Some(prev) => prev.and_then(&power, limit)?,
            });
        }
        acc.ok_or(Error::EmptyTally)
    }

    /// `P_θ(x) = P({ω : f(θ, ω) = x})` for every outcome.
    pub fn induced_distribution(&self, theta: i64) -> Result<BTreeMap<String, Rational>> {
        let t = self.theta.require_index(theta)?;
        Ok(self.outcomes.iter().cloned().zip(self.induced_row(t)).collect())
    }

    /// Induced distribution at parameter index `t`, in outcome order.
    pub fn induced_row(&self, t: usize) -> Vec<Rational> {
        let mut row = vec![Rational::zero(); self.outcomes.len()];
        for (w, p) in self.p_omega.iter().enumerate() {
            row[self.f_index(t, w)] += p;
        }
        row
    }

    /// `∏_x P_θ(x)^count(x)`.
    pub fn likelihood(&self, tally: &ObservationTally, theta: i64) -> Result<Rational> {
        let t = self.theta.require_index(theta)?;
        let counts = self.tally_counts(tally)?;
        Ok(self.likelihood_at(&counts, t))
    }

    fn likelihood_at(&self, counts: &[u32], t: usize) -> Rational {
        self.induced_row(t).iter().zip(counts).map(|(p, &c)| pow(p, c)).product()
    }

    /// The likelihood of every parameter value under the tally.
    pub fn likelihood_function(&self, tally: &ObservationTally) -> Result<Likelihoods> {
        let counts = self.tally_counts(tally)?;
        let values = (0..self.theta.len()).map(|t| self.likelihood_at(&counts, t)).collect();
        Ok(Likelihoods { frame: Arc::clone(&self.theta), values })
    }

    /// The constant `c` with `Pl(θ) = c · l(θ)` on the whole frame.
    ///
    /// The relation is checked at every parameter value; a failure means the
    /// combination engine is broken, not that the input is bad.
    pub fn proportionality_constant(&self, tally: &ObservationTally) -> Result<Rational> {
        let contour = self.observe_tally(tally)?.result.contour();
        let likelihood = self.likelihood_function(tally)?;
        proportionality_constant_of(&contour, &likelihood)
    }

    fn tally_counts(&self, tally: &ObservationTally) -> Result<Vec<u32>> {
        let mut counts = vec![0; self.outcomes.len()];
        for (x, &c) in &tally.counts {
            counts[self.outcome_index(x)?] += c;
        }
        Ok(counts)
    }
}

/// Checks `contour[t] == c · likelihood[t]` for a single `c > 0`.
pub fn proportionality_constant_of(contour: &[Rational], likelihood: &Likelihoods) -> Result<Rational> {
    let frame = &likelihood.frame;
    let (pivot, l_pivot) = likelihood
        .values
        .iter()
        .enumerate()
        .find(|(_, l)| !l.is_zero())
        .ok_or_else(|| Error::InvalidArgument("every parameter value has zero likelihood".into()))?;
    let c = &contour[pivot] / l_pivot;
    if !c.is_positive() {
        return Err(Error::ProportionalityViolated(frame.label(pivot)));
    }
    for (t, (pl, l)) in contour.iter().zip(&likelihood.values).enumerate() {
        if *pl != &c * l {
            return Err(Error::ProportionalityViolated(frame.label(t)));
        }
    }
    Ok(c)
}

fn check_distinct(what: &str, labels: &[String]) -> Result<()> {
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::InvalidModel(format!("duplicate {what} label {l:?}")));
        }
    }
    Ok(())
}

fn check_limit(report: &CombinationReport, limit: Option<usize>) -> Result<()> {
    match limit {
        Some(max) if report.result.focal_count() > max => Err(Error::FocalLimitExceeded(max)),
        _ => Ok(()),
    }
}

/// Counts of independent observations per outcome label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservationTally {
    counts: BTreeMap<String, u32>,
}

impl ObservationTally {
    /// Zero counts are dropped; at least one count must be positive.
    pub fn new<S: Into<String>>(counts: impl IntoIterator<Item = (S, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (label, count) in counts {
            if count > 0 {
                *map.entry(label.into()).or_insert(0) += count;
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyTally);
        }
        Ok(ObservationTally { counts: map })
    }

    pub fn single(outcome: &str) -> Self {
        Self::new([(outcome, 1)]).expect("count is positive")
    }

    pub fn count(&self, outcome: &str) -> u32 {
        self.counts.get(outcome).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<String, u32> {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.values().map(|&c| c as u64).sum()
    }

    /// The observations one at a time, grouped by outcome.
    pub fn sequence(&self) -> Vec<&str> {
        self.counts.iter().flat_map(|(x, &c)| std::iter::repeat_n(x.as_str(), c as usize)).collect()
    }
}

/// Likelihood of every parameter value, in frame order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Likelihoods {
    pub frame: Arc<Frame>,
    pub values: Vec<Rational>,
}

impl Likelihoods {
    pub fn new(frame: &Arc<Frame>, values: Vec<Rational>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::InvalidArgument(format!("{} likelihoods for a frame of {}", values.len(), frame.len())));
        }
        Ok(Likelihoods { frame: Arc::clone(frame), values })
    }

    pub fn get(&self, theta: i64) -> Result<&Rational> {
        Ok(&self.values[self.frame.require_index(theta)?])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::belief::Classification;
    use crate::frames::rational::ratio;
    use crate::frames::Hypothesis;

    fn labels(n: usize, prefix: &str) -> Vec<String> {
        (1..=n).map(|i| format!("{prefix}{i}")).collect()
    }

    /// Θ = {0..4}, Ω = {1..4} uniform, white iff ω <= θ.
    fn ordered_urn() -> GeneralizedFunctionalModel {
        GeneralizedFunctionalModel::from_fn(
            Frame::range(0, 4).unwrap(),
            labels(4, ""),
            vec!["white".into(), "black".into()],
            vec![ratio(1, 4); 4],
            |t, w| if (w as i64 + 1) <= t { 0 } else { 1 },
        )
        .unwrap()
    }

    #[test]
    fn validation() {
        let f = Frame::range(0, 1).unwrap();
        let out = vec!["a".to_string(), "b".to_string()];
        let bad_sum = GeneralizedFunctionalModel::from_fn(f.clone(), labels(2, "w"), out.clone(), vec![ratio(1, 2), ratio(1, 3)], |_, _| 0);
        assert!(matches!(bad_sum, Err(Error::InvalidModel(_))));
        let zero_p = GeneralizedFunctionalModel::from_fn(f.clone(), labels(2, "w"), out.clone(), vec![ratio(1, 1), ratio(0, 1)], |_, _| 0);
        assert!(zero_p.is_err());
        let partial = GeneralizedFunctionalModel::new(f.clone(), labels(2, "w"), out.clone(), vec![ratio(1, 2); 2], vec![vec![0, 1], vec![0]]);
        assert!(matches!(partial, Err(Error::InvalidModel(m)) if m.contains("not total")));
        let bad_outcome = GeneralizedFunctionalModel::from_fn(f, labels(2, "w"), out, vec![ratio(1, 2); 2], |_, _| 5);
        assert!(bad_outcome.is_err());
    }

    #[test]
    fn single_white_is_nested() {
        let m = ordered_urn();
        let r = m.observe_one("white").unwrap();
        assert_eq!(r.result.focal_count(), 4);
        for w in 1..=4 {
            assert_eq!(r.result.mass_of_labels(w..=4).unwrap(), ratio(1, 4));
        }
        assert_eq!(r.normalization_constant, ratio(1, 1));
        assert_eq!(r.result.classify(), Classification::Consonant);
    }

    #[test]
    fn constant_model_gives_vacuous_belief() {
        let m = GeneralizedFunctionalModel::from_fn(
            Frame::range(0, 3).unwrap(),
            labels(3, "w"),
            vec!["x".into(), "y".into()],
            vec![ratio(1, 3); 3],
            |_, _| 0,
        )
        .unwrap();
        let r = m.observe_one("x").unwrap();
        assert_eq!(r.result, MassFunction::vacuous(m.theta()));
        assert_eq!(m.observe_one("y").unwrap_err(), Error::ObservationImpossible("y".into()));
        assert!(m.observe_one("y").unwrap_err().to_string().contains("observation impossible under model"));
        assert_eq!(m.observe_one("z").unwrap_err(), Error::UnknownOutcome("z".into()));
    }

    #[test]
    fn partially_possible_observation_reports_conflict() {
        // ω2 can never yield "x", so a third of P is conflict.
        let m = GeneralizedFunctionalModel::from_fn(
            Frame::range(0, 1).unwrap(),
            labels(3, "w"),
            vec!["x".into(), "y".into()],
            vec![ratio(1, 3); 3],
            |t, w| if w == 1 || (w == 2 && t == 0) { 1 } else { 0 },
        )
        .unwrap();
        let r = m.observe_one("x").unwrap();
        assert_eq!(r.conflict_mass, ratio(1, 3));
        assert_eq!(r.result.mass_of_labels([0, 1]).unwrap(), ratio(1, 2));
        assert_eq!(r.result.mass_of_labels([1]).unwrap(), ratio(1, 2));
    }

    #[test]
    fn tally_of_one_equals_single_observation() {
        let m = ordered_urn();
        let t = ObservationTally::single("black");
        assert_eq!(m.observe_tally(&t).unwrap(), m.observe_one("black").unwrap());
    }

    #[test]
    fn white_power_contour() {
        let m = ordered_urn();
        for k in 1..=4u32 {
            let r = m.observe_tally(&ObservationTally::new([("white", k)]).unwrap()).unwrap();
            assert_eq!(r.result.classify(), Classification::Consonant);
            let contour = r.result.contour();
            for t in 0..=4 {
                assert_eq!(contour[t as usize], pow(&ratio(t, 4), k));
            }
        }
    }

    #[test]
    fn mixed_tally_normalization() {
        let m = ordered_urn();
        let tally = ObservationTally::new([("white", 1), ("black", 1)]).unwrap();
        let r = m.observe_tally(&tally).unwrap();
        // 10 of the 16 (ω, ω') pairs have ω >= ω' and conflict.
        assert_eq!(r.normalization_constant, ratio(3, 8));
        let c = m.proportionality_constant(&tally).unwrap();
        assert_eq!(c, ratio(8, 3));
        assert_eq!(c, Rational::one() / &r.normalization_constant);
    }

    #[test]
    fn sequence_order_does_not_matter() {
        let m = ordered_urn();
        let a = m.observe_sequence(&["white", "black", "white"], None).unwrap();
        let b = m.observe_sequence(&["black", "white", "white"], None).unwrap();
        let c = m.observe_tally(&ObservationTally::new([("white", 2), ("black", 1)]).unwrap()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, c);
    }

    #[test]
    fn induced_distribution_and_likelihood() {
        let m = ordered_urn();
        let d = m.induced_distribution(3).unwrap();
        assert_eq!(d["white"], ratio(3, 4));
        assert_eq!(d["black"], ratio(1, 4));
        let d0 = m.induced_distribution(0).unwrap();
        assert_eq!(d0["white"], ratio(0, 1));
        assert_eq!(d0["black"], ratio(1, 1));
        assert_eq!(m.induced_distribution(7).unwrap_err(), Error::UnknownLabel(7));

        let tally = ObservationTally::new([("white", 3)]).unwrap();
        for t in 0..=4 {
            assert_eq!(m.likelihood(&tally, t).unwrap(), pow(&ratio(t, 4), 3));
        }
        let single = ObservationTally::single("black");
        assert_eq!(m.likelihood(&single, 1).unwrap(), ratio(3, 4));
    }

    #[test]
    fn proportionality_violation_is_detected() {
        let frame = Frame::range(0, 2).unwrap();
        let l = Likelihoods::new(&frame, vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)]).unwrap();
        let good = vec![ratio(0, 1), ratio(1, 4), ratio(1, 2)];
        assert_eq!(proportionality_constant_of(&good, &l).unwrap(), ratio(1, 2));
        let bad = vec![ratio(0, 1), ratio(1, 4), ratio(1, 3)];
        assert_eq!(proportionality_constant_of(&bad, &l).unwrap_err(), Error::ProportionalityViolated(2));
    }

    #[test]
    fn tally_validation() {
        assert_eq!(ObservationTally::new([("white", 0)]).unwrap_err(), Error::EmptyTally);
        let m = ordered_urn();
        let t = ObservationTally::new([("green", 1)]).unwrap();
        assert_eq!(m.observe_tally(&t).unwrap_err(), Error::UnknownOutcome("green".into()));
        let hyp = Hypothesis::singleton(m.theta(), 2).unwrap();
        assert!(hyp.is_simple());
    }

    #[test]
    fn focal_limit_applies_to_tallies() {
        let m = ordered_urn();
        let t = ObservationTally::new([("white", 1), ("black", 1)]).unwrap();
        assert_eq!(m.observe_tally_bounded(&t, Some(3)).unwrap_err(), Error::FocalLimitExceeded(3));
        assert!(m.observe_tally_bounded(&t, Some(100)).is_ok());
    }
}
