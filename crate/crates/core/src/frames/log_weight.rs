use std::fmt;

use num_traits::{Signed, Zero};

use super::rational::{format_rational, log10_rational, Rational};

/// A non-negative weight of evidence, exact, with a log₁₀ view for display.
///
/// `Infinite` arises when the alternative hypothesis has zero plausibility
/// while the favoured one does not.
#[derive(Clone, PartialEq, Eq)]
pub enum LogWeight {
    Finite(Rational),
    Infinite,
}

impl LogWeight {
    /// Exact ratio `num / den`; `None` when both are zero.
    pub fn from_ratio(num: &Rational, den: &Rational) -> Option<LogWeight> {
        debug_assert!(!num.is_negative() && !den.is_negative());
        match (num.is_zero(), den.is_zero()) {
            (true, true) => None,
            (false, true) => Some(LogWeight::Infinite),
            _ => Some(LogWeight::Finite(num / den)),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            LogWeight::Finite(q) => Some(q),
            LogWeight::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, LogWeight::Infinite)
    }

    /// `None` for +∞ and for zero.
    pub fn log10(&self) -> Option<f64> {
        self.exact().and_then(log10_rational)
    }

    /// Exact text: `"num/den"`, or `"inf"`.
    pub fn to_exact_string(&self) -> String {
        match self {
            LogWeight::Finite(q) => format_rational(q),
            LogWeight::Infinite => "inf".to_string(),
        }
    }
}

impl fmt::Debug for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LogWeight({})", self.to_exact_string())
    }
}

impl fmt::Display for LogWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_exact_string())
    }
}
