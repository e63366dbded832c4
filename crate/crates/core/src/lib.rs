//! Exact weights of evidence for simple and composite hypotheses.
//!
//! A generalized functional model `(f, P)` turns each observation into a
//! Dempster-Shafer belief function on the parameter frame. Combining the
//! observations with Dempster's rule and taking `Pl(H) / Pl(H')` gives a
//! weight of evidence that is defined for any pair of hypotheses and equals
//! the likelihood ratio when both are singletons.
//!
//! All arithmetic is exact (`BigRational`); `f64` only appears in log₁₀
//! views for display.
//!
//! ```
//! use evweight::frames::{Hypothesis, LogWeight};
//! use evweight::gfm::ObservationTally;
//! use evweight::models::build_urn_gfm2;
//!
//! let urn = build_urn_gfm2();
//! let tally = ObservationTally::new([("white", 3)]).unwrap();
//! let h = Hypothesis::from_labels(urn.theta(), [2, 3]).unwrap();
//! let h2 = Hypothesis::from_labels(urn.theta(), [1, 2]).unwrap();
//! let w = evweight::evidence::weight(&urn, &tally, &h, &h2).unwrap();
//! assert_eq!(w.to_string(), "27/8");
//! ```

pub mod belief;
pub mod error;
pub mod evidence;
pub mod frames;
pub mod gfm;
pub mod io;
pub mod models;
pub mod verify;

pub use error::{Error, Result};
