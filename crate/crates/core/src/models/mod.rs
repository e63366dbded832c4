//! The built-in models: two four-ball urn models and the survival-rate
//! model with its closed forms and Markov-chain machinery.

pub mod markov;
pub mod matrix;
pub mod survival;
pub mod urn;

use std::fmt;
use std::str::FromStr;

pub use markov::{build_transition_matrix, eigenvalue_matrix, eigenvector_matrix, jordan_power, TransitionMatrix};
pub use matrix::RationalMatrix;
pub use survival::{build_survival_gfm, SurvivalModel};
pub use urn::{build_urn_gfm1, build_urn_gfm2};

use crate::error::{Error, Result};
use crate::gfm::GeneralizedFunctionalModel;

/// A built-in model addressed by name: `urn-gfm1`, `urn-gfm2` or
/// `survival:N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinModel {
    UrnGfm1,
    UrnGfm2,
    Survival(u32),
}

impl BuiltinModel {
    pub fn gfm(&self) -> GeneralizedFunctionalModel {
        match *self {
            BuiltinModel::UrnGfm1 => build_urn_gfm1(),
            BuiltinModel::UrnGfm2 => build_urn_gfm2(),
            BuiltinModel::Survival(n) => build_survival_gfm(n).expect("validated at parse time"),
        }
    }
}

impl FromStr for BuiltinModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "urn-gfm1" => Ok(BuiltinModel::UrnGfm1),
            "urn-gfm2" => Ok(BuiltinModel::UrnGfm2),
            _ => {
                let n = s
                    .strip_prefix("survival:")
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown built-in model {s:?}")))?;
                match n.parse::<u32>() {
                    Ok(n) if n >= 1 => Ok(BuiltinModel::Survival(n)),
                    _ => Err(Error::InvalidArgument(format!("bad population size in {s:?}"))),
                }
            }
        }
    }
}

impl fmt::Display for BuiltinModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BuiltinModel::UrnGfm1 => f.write_str("urn-gfm1"),
            BuiltinModel::UrnGfm2 => f.write_str("urn-gfm2"),
            BuiltinModel::Survival(n) => write!(f, "survival:{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for m in [BuiltinModel::UrnGfm1, BuiltinModel::UrnGfm2, BuiltinModel::Survival(250)] {
            assert_eq!(m.to_string().parse::<BuiltinModel>().unwrap(), m);
        }
        for bad in ["urn", "survival:", "survival:0", "survival:-3", "survival:x"] {
            assert!(bad.parse::<BuiltinModel>().is_err(), "{bad}");
        }
    }
}
