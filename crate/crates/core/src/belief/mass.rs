use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::frames::{format_rational, render_labels, same_frame, Frame, Hypothesis, Rational, Subset};

/// A normalized basic probability assignment on a frame.
///
/// Every focal set is non-empty and carries a strictly positive mass; the
/// masses add up to exactly one. Focal sets are kept in canonical order, so
/// two mass functions are equal iff they assign the same masses.
#[derive(Clone, PartialEq, Eq)]
pub struct MassFunction {
    frame: Arc<Frame>,
    focal: BTreeMap<Subset, Rational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    /// Every focal set is a singleton.
    Precise,
    /// Focal sets form a chain under inclusion (and are not all singletons).
    Consonant,
    General,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Precise => "precise",
            Classification::Consonant => "consonant",
            Classification::General => "general",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl MassFunction {
    /// Builds a mass function, merging repeated focal sets.
    pub fn new(frame: &Arc<Frame>, entries: impl IntoIterator<Item = (Subset, Rational)>) -> Result<Self> {
        let mut focal: BTreeMap<Subset, Rational> = BTreeMap::new();
        for (set, mass) in entries {
            if set.universe() != frame.len() {
                return Err(Error::InvalidMass("focal set built for a different frame size".into()));
            }
            if set.is_empty() {
                return Err(Error::InvalidMass("empty focal set".into()));
            }
            if !mass.is_positive() {
                return Err(Error::InvalidMass(format!("non-positive mass {}", format_rational(&mass))));
            }
            *focal.entry(set).or_insert_with(Rational::zero) += mass;
        }
        let total: Rational = focal.values().sum();
        if !total.is_one() {
            return Err(Error::InvalidMass(format!("masses sum to {}, not 1", format_rational(&total))));
        }
        Ok(MassFunction { frame: Arc::clone(frame), focal })
    }

    /// Same as [`MassFunction::new`] with focal sets given as label lists.
    pub fn from_labels(frame: &Arc<Frame>, entries: impl IntoIterator<Item = (Vec<i64>, Rational)>) -> Result<Self> {
        let entries = entries
            .into_iter()
            .map(|(labels, mass)| {
                let h = Hypothesis::from_labels(frame, labels)?;
                Ok((h.members().clone(), mass))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(frame, entries)
    }

    /// All mass on the whole frame: total ignorance.
    pub fn vacuous(frame: &Arc<Frame>) -> Self {
        let mut focal = BTreeMap::new();
        focal.insert(Subset::full(frame.len()), Rational::one());
        MassFunction { frame: Arc::clone(frame), focal }
    }

    /// Caller guarantees the invariants.
    pub(crate) fn from_parts(frame: &Arc<Frame>, focal: BTreeMap<Subset, Rational>) -> Self {
        debug_assert!(focal.keys().all(|s| !s.is_empty()));
        debug_assert!(focal.values().all(|m| m.is_positive()));
        debug_assert!(focal.values().sum::<Rational>().is_one());
        MassFunction { frame: Arc::clone(frame), focal }
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn focal_sets(&self) -> impl Iterator<Item = (&Subset, &Rational)> {
        self.focal.iter()
    }

    pub fn focal_count(&self) -> usize {
        self.focal.len()
    }

    /// Mass of one focal set (zero if it is not focal).
    pub fn mass_of(&self, set: &Subset) -> Rational {
        self.focal.get(set).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn mass_of_labels(&self, labels: impl IntoIterator<Item = i64>) -> Result<Rational> {
        let h = Hypothesis::from_labels(&self.frame, labels)?;
        Ok(self.mass_of(h.members()))
    }

    /// Total mass of focal sets contained in `h`.
    pub fn belief(&self, h: &Hypothesis) -> Result<Rational> {
        same_frame(&self.frame, h.frame())?;
        Ok(self.focal.iter().filter(|(s, _)| s.is_subset(h.members())).map(|(_, m)| m).sum())
    }

    /// Total mass of focal sets meeting `h`.
    pub fn plausibility(&self, h: &Hypothesis) -> Result<Rational> {
        same_frame(&self.frame, h.frame())?;
        Ok(self.focal.iter().filter(|(s, _)| s.intersects(h.members())).map(|(_, m)| m).sum())
    }

    /// Plausibility of every singleton, in frame order.
    pub fn contour(&self) -> Vec<Rational> {
        let mut pl = vec![Rational::zero(); self.frame.len()];
        for (set, mass) in &self.focal {
            for i in set.iter() {
                pl[i] += mass;
            }
        }
        pl
    }

    pub fn classify(&self) -> Classification {
        if self.focal.keys().all(|s| s.len() == 1) {
            return Classification::Precise;
        }
        let mut chain: Vec<&Subset> = self.focal.keys().collect();
        chain.sort_by_key(|s| s.len());
        if chain.windows(2).all(|w| w[0].is_subset(w[1])) {
            Classification::Consonant
        } else {
            Classification::General
        }
    }
}

impl fmt::Debug for MassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut map = f.debug_map();
        for (set, mass) in &self.focal {
            let labels: Vec<i64> = set.iter().map(|i| self.frame.label(i)).collect();
            map.entry(&format_args!("{}", render_labels(&labels)), &format_args!("{}", format_rational(mass)));
        }
        map.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::rational::ratio;

    fn urn_frame() -> Arc<Frame> {
        Frame::range(0, 4).unwrap()
    }

    /// The single-white-ball mass function of the ordered-numbering urn.
    fn nested_white() -> MassFunction {
        let f = urn_frame();
        MassFunction::from_labels(&f, (1..=4).map(|w| ((w..=4).collect(), ratio(1, 4)))).unwrap()
    }

    #[test]
    fn rejects_invalid_assignments() {
        let f = urn_frame();
        assert!(MassFunction::from_labels(&f, [(vec![1], ratio(1, 2))]).is_err());
        assert!(MassFunction::from_labels(&f, [(vec![], ratio(1, 1))]).is_err());
        assert!(MassFunction::from_labels(&f, [(vec![1], ratio(3, 2)), (vec![2], ratio(-1, 2))]).is_err());
        assert!(matches!(MassFunction::from_labels(&f, [(vec![9], ratio(1, 1))]), Err(Error::UnknownLabel(9))));
    }

    #[test]
    fn merges_repeated_focal_sets() {
        let f = urn_frame();
        let m = MassFunction::from_labels(&f, [(vec![2, 1], ratio(1, 2)), (vec![1, 2], ratio(1, 2))]).unwrap();
        assert_eq!(m.focal_count(), 1);
        assert_eq!(m.mass_of_labels([1, 2]).unwrap(), ratio(1, 1));
    }

    #[test]
    fn belief_edge_cases() {
        let f = urn_frame();
        let vac = MassFunction::vacuous(&f);
        let h = Hypothesis::from_labels(&f, [0, 1, 2, 3]).unwrap();
        assert_eq!(vac.belief(&h).unwrap(), ratio(0, 1));
        assert_eq!(vac.belief(&Hypothesis::whole(&f)).unwrap(), ratio(1, 1));
        assert_eq!(nested_white().belief(&Hypothesis::whole(&f)).unwrap(), ratio(1, 1));
    }

    #[test]
    fn plausibility_edge_cases() {
        let f = urn_frame();
        let m = nested_white();
        assert_eq!(m.plausibility(&Hypothesis::singleton(&f, 2).unwrap()).unwrap(), ratio(1, 2));
        assert_eq!(m.plausibility(&Hypothesis::empty(&f)).unwrap(), ratio(0, 1));
        let other = Frame::range(0, 3).unwrap();
        assert_eq!(m.plausibility(&Hypothesis::whole(&other)), Err(Error::FrameMismatch));
    }

    #[test]
    fn contour_matches_singleton_plausibility() {
        let f = urn_frame();
        let m = nested_white();
        let contour = m.contour();
        for label in 0..=4 {
            let h = Hypothesis::singleton(&f, label).unwrap();
            assert_eq!(contour[label as usize], m.plausibility(&h).unwrap());
        }
    }

    #[test]
    fn classification() {
        let f = urn_frame();
        assert_eq!(nested_white().classify(), Classification::Consonant);
        let precise = MassFunction::from_labels(&f, [(vec![1], ratio(1, 4)), (vec![3], ratio(3, 4))]).unwrap();
        assert_eq!(precise.classify(), Classification::Precise);
        let point = MassFunction::from_labels(&f, [(vec![2], ratio(1, 1))]).unwrap();
        assert_eq!(point.classify(), Classification::Precise);
        assert_eq!(MassFunction::vacuous(&f).classify(), Classification::Consonant);
        let general = MassFunction::from_labels(&f, [(vec![1, 2], ratio(1, 2)), (vec![2, 3], ratio(1, 2))]).unwrap();
        assert_eq!(general.classify(), Classification::General);
    }
}
