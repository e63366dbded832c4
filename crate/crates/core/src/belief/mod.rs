//! Mass functions, belief and plausibility, Dempster's rule.
//!
//! Combination here is the exact generic engine: cost grows with the product
//! of the focal-set counts and nothing is pruned. The closed forms in
//! [`crate::models`] exist for the sizes where that is too slow.

mod combine;
mod mass;

pub use combine::{combine, combine_bounded, combine_power, combine_power_bounded, CombinationReport};
pub use mass::{Classification, MassFunction};

use crate::error::Result;
use crate::frames::{Hypothesis, Rational};

pub fn belief(m: &MassFunction, h: &Hypothesis) -> Result<Rational> {
    m.belief(h)
}

pub fn plausibility(m: &MassFunction, h: &Hypothesis) -> Result<Rational> {
    m.plausibility(h)
}

pub fn classify(m: &MassFunction) -> Classification {
    m.classify()
}
