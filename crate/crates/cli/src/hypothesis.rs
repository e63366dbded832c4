//! Hypothesis expressions: `{a,b,...}`, `[lo..hi]`, `>=p/q` and `=p/q`.
//!
//! Spaces are allowed inside braces around elements and commas, nowhere
//! else. Labels are `-?digits` fitting in an `i64`; rates use the rational
//! syntax `-?digits[/digits]` with a non-zero denominator. Range checks
//! (labels in the frame, rates in `[0, 1]`) happen when the expression is
//! resolved against a frame, not while parsing.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use evweight::frames::{
    format_rational, make_interval_hypothesis, make_rate_hypothesis, parse_rational, rate_alignment, Frame,
    Hypothesis, RateDirection, Rational,
};
use evweight::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HypothesisExpr {
    Set(Vec<i64>),
    Interval(i64, i64),
    AtLeast(Rational),
    Exactly(Rational),
}

impl HypothesisExpr {
    pub fn resolve(&self, frame: &Arc<Frame>) -> Result<Hypothesis> {
        match self {
            HypothesisExpr::Set(labels) => Hypothesis::from_labels(frame, labels.iter().copied()),
            HypothesisExpr::Interval(lo, hi) => make_interval_hypothesis(frame, *lo, *hi),
            HypothesisExpr::AtLeast(rate) => make_rate_hypothesis(frame, rate, RateDirection::AtLeast),
            HypothesisExpr::Exactly(rate) => make_rate_hypothesis(frame, rate, RateDirection::Exactly),
        }
    }

    /// Denominator of the rate when it does not divide the population size.
    pub fn misaligned_with(&self, population: u32) -> Option<i64> {
        match self {
            HypothesisExpr::AtLeast(rate) | HypothesisExpr::Exactly(rate) => {
                let den = rate_alignment(rate);
                (i64::from(population) % den != 0).then_some(den)
            }
            _ => None,
        }
    }
}

impl fmt::Display for HypothesisExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisExpr::Set(labels) => {
                let items: Vec<String> = labels.iter().map(i64::to_string).collect();
                write!(f, "{{{}}}", items.join(","))
            }
            HypothesisExpr::Interval(lo, hi) => write!(f, "[{lo}..{hi}]"),
            HypothesisExpr::AtLeast(rate) => write!(f, ">={}", format_rational(rate)),
            HypothesisExpr::Exactly(rate) => write!(f, "={}", format_rational(rate)),
        }
    }
}

impl FromStr for HypothesisExpr {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let bad = |why: &str| {
            Error::InvalidArgument(format!(
                "invalid hypothesis expression {text:?}: {why}; expected {{a,b,...}}, [lo..hi], >=p/q or =p/q"
            ))
        };
        if let Some(rest) = text.strip_prefix(">=") {
            return parse_rational(rest).map(HypothesisExpr::AtLeast).map_err(|_| bad("bad rate"));
        }
        if let Some(rest) = text.strip_prefix('=') {
            return parse_rational(rest).map(HypothesisExpr::Exactly).map_err(|_| bad("bad rate"));
        }
        if let Some(body) = text.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let body = body.trim_matches(' ');
            if body.is_empty() {
                return Ok(HypothesisExpr::Set(Vec::new()));
            }
            return body
                .split(',')
                .map(|item| parse_label(item.trim_matches(' ')).ok_or_else(|| bad("bad label")))
                .collect::<Result<Vec<_>>>()
                .map(HypothesisExpr::Set);
        }
        if let Some(body) = text.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            let (lo, hi) = body.split_once("..").ok_or_else(|| bad("missing \"..\""))?;
            let lo = parse_label(lo).ok_or_else(|| bad("bad lower bound"))?;
            let hi = parse_label(hi).ok_or_else(|| bad("bad upper bound"))?;
            return Ok(HypothesisExpr::Interval(lo, hi));
        }
        Err(bad("unrecognized form"))
    }
}

fn parse_label(text: &str) -> Option<i64> {
    let digits = text.strip_prefix('-').unwrap_or(text);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    text.parse().ok()
}
