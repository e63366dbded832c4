//! Frames, hypotheses and the exact scalars everything else is built on.

mod frame;
mod log_weight;
pub mod rational;
mod subset;

pub use frame::{
    make_interval_hypothesis, make_rate_hypothesis, rate_alignment, render_labels, Frame, Hypothesis,
    RateDirection,
};
pub(crate) use frame::same_frame;
pub use log_weight::LogWeight;
pub use rational::{format_rational, parse_rational, Rational};
pub use subset::Subset;
