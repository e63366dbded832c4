//! Survival-rate model: Θ = {0..N} surviving members of a population of N,
//! members numbered survivors-first, one uniformly drawn member observed per
//! trial.
//!
//! Generic Dempster combination over `N` focal sets raised to the 40th
//! power is out of reach, so everything here uses closed forms for the mass
//! functions and plausibilities. Integer numerators are kept separate from
//! the shared normalizing constant `K` so that weights never divide by it.
//!
//! With `d(i, m) = i^m - (i-1)^m`:
//! * `m` lives: mass `d(i, m) / N^m` on `[i..N]`
//! * `n` deaths: mass `d(i, n) / N^n` on `[0..N-i]`
//! * both: mass `d(i, m) d(j, n) / K` on `[i..N-j]` for `i + j <= N`, where
//!   `K = Σ_l d(l, n) (N-l)^m`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::urn::ordered_numbering;
use crate::belief::{Classification, MassFunction};
use crate::error::{Error, Result};
use crate::frames::{same_frame, Frame, Hypothesis, LogWeight, Rational, Subset};
use crate::gfm::GeneralizedFunctionalModel;

pub const LIVE: &str = "live";
pub const DIE: &str = "die";

/// Θ = {0..N}, Ω = {1..N} uniform, "live" iff `ω <= θ`.
pub fn build_survival_gfm(n: u32) -> Result<GeneralizedFunctionalModel> {
    if n == 0 {
        return Err(Error::InvalidArgument("population size must be at least 1".into()));
    }
    Ok(ordered_numbering(n as i64, LIVE, DIE))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivalModel {
    population_size: u32,
    frame: Arc<Frame>,
}

fn big_pow(base: u32, exp: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), exp as usize)
}

/// `i^m - (i-1)^m`
fn increment(i: u32, m: u32) -> BigInt {
    big_pow(i, m) - big_pow(i - 1, m)
}

impl SurvivalModel {
    pub fn new(population_size: u32) -> Result<Self> {
        if population_size == 0 {
            return Err(Error::InvalidArgument("population size must be at least 1".into()));
        }
        Ok(SurvivalModel { population_size, frame: Frame::range(0, population_size as i64)? })
    }

    pub fn population_size(&self) -> u32 {
        self.population_size
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn gfm(&self) -> GeneralizedFunctionalModel {
        ordered_numbering(self.population_size as i64, LIVE, DIE)
    }

    fn interval(&self, lo: u32, hi: u32) -> Subset {
        Subset::range(self.frame.len(), lo as usize, hi as usize)
    }

    /// Mass function after `m >= 1` observed survivals and no deaths.
    pub fn mass_all_live(&self, m: u32) -> Result<MassFunction> {
        require_positive("live count", m)?;
        let n = self.population_size;
        let den = big_pow(n, m);
        let focal = (1..=n).map(|i| (self.interval(i, n), Rational::new(increment(i, m), den.clone())));
        Ok(MassFunction::from_parts(&self.frame, focal.collect()))
    }

    /// Mass function after `n >= 1` observed deaths and no survivals.
    pub fn mass_all_die(&self, n: u32) -> Result<MassFunction> {
        require_positive("death count", n)?;
        let size = self.population_size;
        let den = big_pow(size, n);
        let focal = (1..=size).map(|i| (self.interval(0, size - i), Rational::new(increment(i, n), den.clone())));
        Ok(MassFunction::from_parts(&self.frame, focal.collect()))
    }

    /// `K = Σ_{l=1}^{N} d(l, n) (N-l)^m`.
    pub fn normalization(&self, m: u32, n: u32) -> BigInt {
        let size = self.population_size;
        (1..=size).map(|l| increment(l, n) * big_pow(size - l, m)).sum()
    }

    /// The same constant summed the other way: `Σ_l d(l, m) (N-l)^n`.
    pub fn normalization_swapped(&self, m: u32, n: u32) -> BigInt {
        self.normalization(n, m)
    }

    /// Mass function after `m >= 1` survivals and `n >= 1` deaths.
    pub fn mass_mixed(&self, m: u32, n: u32) -> Result<MassFunction> {
        require_positive("live count", m)?;
        require_positive("death count", n)?;
        let size = self.population_size;
        let k = self.normalization(m, n);
        if k.is_zero() {
            return Err(Error::IncompatibleEvidence);
        }
        let dn: Vec<BigInt> = (1..=size).map(|j| increment(j, n)).collect();
        let mut focal = BTreeMap::new();
        for i in 1..size {
            let di = increment(i, m);
            for j in 1..=size - i {
                let mass = Rational::new(&di * &dn[j as usize - 1], k.clone());
                focal.insert(self.interval(i, size - j), mass);
            }
        }
        Ok(MassFunction::from_parts(&self.frame, focal))
    }

    /// Closed-form mass function for any tally with `m + n >= 1`.
    pub fn mass(&self, m: u32, n: u32) -> Result<MassFunction> {
        match (m, n) {
            (0, 0) => Err(Error::EmptyTally),
            (_, 0) => self.mass_all_live(m),
            (0, _) => self.mass_all_die(n),
            _ => self.mass_mixed(m, n),
        }
    }

    /// Class of the combined belief function, read off the focal-set shapes
    /// without building them.
    pub fn classification(&self, m: u32, n: u32) -> Result<Classification> {
        let size = self.population_size;
        match (m, n) {
            (0, 0) => Err(Error::EmptyTally),
            _ if m > 0 && n > 0 && size < 2 => Err(Error::IncompatibleEvidence),
            // only [1..1] survives at N = 2
            _ if m > 0 && n > 0 => Ok(if size == 2 { Classification::Precise } else { Classification::General }),
            _ => Ok(if size == 1 { Classification::Precise } else { Classification::Consonant }),
        }
    }

    /// Point mass on `{N}`, the absorbing state of repeated survivals.
    pub fn limit_mass_all_live(&self) -> MassFunction {
        let n = self.population_size;
        let mut focal = BTreeMap::new();
        focal.insert(self.interval(n, n), Rational::one());
        MassFunction::from_parts(&self.frame, focal)
    }

    /// `K · Pl([1..r])`
    fn prefix_scaled(&self, m: u32, n: u32, r: u32) -> BigInt {
        let size = self.population_size;
        (1..=r.min(size)).map(|l| increment(l, m) * big_pow(size - l, n)).sum()
    }

    /// `K · Pl([r..N])`
    fn suffix_scaled(&self, m: u32, n: u32, r: u32) -> BigInt {
        let size = self.population_size;
        (1..=size.saturating_sub(r)).map(|l| increment(l, n) * big_pow(size - l, m)).sum()
    }

    /// `K · Pl([r..s])` from the prefix and suffix sums:
    /// `Pl([r..s]) = Pl([1..s]) + Pl([r..N]) - 1`.
    fn interval_scaled(&self, m: u32, n: u32, r: u32, s: u32, k: &BigInt) -> BigInt {
        self.prefix_scaled(m, n, s) + self.suffix_scaled(m, n, r) - k
    }

    /// Exact plausibility of `[r..s]` for `m, n >= 1` and `0 <= r <= s <= N`.
    pub fn plausibility_interval(&self, m: u32, n: u32, r: i64, s: i64) -> Result<Rational> {
        require_positive("live count", m)?;
        require_positive("death count", n)?;
        let size = self.population_size as i64;
        for bound in [r, s] {
            if !(0..=size).contains(&bound) {
                return Err(Error::BoundOutsideFrame(bound));
            }
        }
        if r > s {
            return Err(Error::InvalidArgument(format!("empty interval [{r}..{s}]")));
        }
        let k = self.normalization(m, n);
        if k.is_zero() {
            return Err(Error::IncompatibleEvidence);
        }
        Ok(Rational::new(self.interval_scaled(m, n, r as u32, s as u32, &k), k))
    }

    /// `K · Pl(H)` for an arbitrary hypothesis under a mixed tally.
    ///
    /// `[i..N-j]` meets `H` iff the least member of `H` at or above `i`
    /// lies at or below `N - j`, so each `i` contributes `d(i, m)` times
    /// the total `j`-weight `(N - next(i))^n`.
    fn general_scaled(&self, m: u32, n: u32, h: &Hypothesis) -> BigInt {
        let size = self.population_size;
        let mut next: Option<u32> = None;
        let mut total = BigInt::zero();
        for i in (1..=size).rev() {
            if h.members().contains(i as usize) {
                next = Some(i);
            }
            if let Some(t) = next {
                total += increment(i, m) * big_pow(size - t, n);
            }
        }
        total
    }

    /// Plausibility numerator with a denominator shared by every hypothesis
    /// under the same tally, so ratios of numerators are weights.
    fn scaled_plausibility(&self, m: u32, n: u32, h: &Hypothesis) -> Result<BigInt> {
        same_frame(&self.frame, h.frame())?;
        let size = self.population_size;
        let labels = h.members().iter().map(|i| i as u32);
        Ok(match (m, n) {
            (0, 0) => return Err(Error::EmptyTally),
            // Pl(θ) = (θ/N)^m, consonant: max over H
            (_, 0) => labels.map(|t| big_pow(t, m)).max().unwrap_or_default(),
            // Pl(θ) = (1 - θ/N)^n
            (0, _) => labels.map(|t| big_pow(size - t, n)).max().unwrap_or_default(),
            _ => {
                let k = self.normalization(m, n);
                if k.is_zero() {
                    return Err(Error::IncompatibleEvidence);
                }
                match (h.members().first(), h.members().last()) {
                    (Some(lo), Some(hi)) if h.members().is_contiguous() => {
                        self.interval_scaled(m, n, lo as u32, hi as u32, &k)
                    }
                    (None, _) => BigInt::zero(),
                    _ => self.general_scaled(m, n, h),
                }
            }
        })
    }

    /// Exact `Pl(H)` after `m` survivals and `n` deaths.
    pub fn plausibility(&self, m: u32, n: u32, h: &Hypothesis) -> Result<Rational> {
        let scaled = self.scaled_plausibility(m, n, h)?;
        let size = self.population_size;
        let den = match (m, n) {
            (_, 0) => big_pow(size, m),
            (0, _) => big_pow(size, n),
            _ => self.normalization(m, n),
        };
        Ok(Rational::new(scaled, den))
    }

    /// `Pl(H) / Pl(H')` by closed forms.
    pub fn weight(&self, m: u32, n: u32, h: &Hypothesis, h2: &Hypothesis) -> Result<LogWeight> {
        if h.is_empty() || h2.is_empty() {
            return Err(Error::EmptyHypothesis);
        }
        let num = Rational::from_integer(self.scaled_plausibility(m, n, h)?);
        let den = Rational::from_integer(self.scaled_plausibility(m, n, h2)?);
        LogWeight::from_ratio(&num, &den).ok_or(Error::WeightUndefined)
    }
}

fn require_positive(what: &str, count: u32) -> Result<()> {
    if count == 0 {
        Err(Error::InvalidArgument(format!("{what} must be at least 1")))
    } else {
        Ok(())
    }
}
