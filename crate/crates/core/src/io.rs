//! JSON documents for mass functions and models.
//!
//! Rationals are written as `"num/den"` strings; readers also take plain
//! JSON integers.
//!
//! ```json
//! {"frame": [0, 1, 2], "focal": [{"set": [1, 2], "mass": "1/2"}, {"set": [0, 1, 2], "mass": "1/2"}]}
//! ```
//!
//! ```json
//! {"theta": [0, 1], "omega": ["a", "b"], "outcomes": ["x", "y"],
//!  "p_omega": {"a": "1/2", "b": "1/2"},
//!  "f": {"0,a": "y", "0,b": "y", "1,a": "x", "1,b": "y"}}
//! ```

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::belief::MassFunction;
use crate::error::{Error, Result};
use crate::frames::rational::serde_str;
use crate::frames::{Frame, Rational};
use crate::gfm::GeneralizedFunctionalModel;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MassDoc {
    frame: Vec<i64>,
    focal: Vec<FocalDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FocalDoc {
    set: Vec<i64>,
    #[serde(with = "serde_str")]
    mass: Rational,
}

pub fn mass_function_from_json(text: &str) -> Result<MassFunction> {
    let doc: MassDoc = serde_json::from_str(text).map_err(|e| Error::InvalidMass(e.to_string()))?;
    let frame = Frame::new(doc.frame)?;
    MassFunction::from_labels(&frame, doc.focal.into_iter().map(|f| (f.set, f.mass)))
}

pub fn mass_function_to_json(m: &MassFunction) -> String {
    let frame = m.frame();
    let doc = MassDoc {
        frame: frame.labels().to_vec(),
        focal: m
            .focal_sets()
            .map(|(set, mass)| FocalDoc { set: set.iter().map(|i| frame.label(i)).collect(), mass: mass.clone() })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Ω and outcome labels may be written as strings or integers.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum Label {
    Text(String),
    Int(i64),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Text(s) => f.write_str(s),
            Label::Int(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    theta: Vec<i64>,
    omega: Vec<Label>,
    outcomes: Vec<Label>,
    p_omega: BTreeMap<String, RationalText>,
    f: BTreeMap<String, Label>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(transparent)]
struct RationalText(#[serde(with = "serde_str")] Rational);

pub fn model_from_json(text: &str) -> Result<GeneralizedFunctionalModel> {
    let invalid = |msg: String| Error::InvalidModel(msg);
    let mut doc: ModelDoc = serde_json::from_str(text).map_err(|e| invalid(e.to_string()))?;
    let theta = Frame::new(doc.theta)?;
    let omega: Vec<String> = doc.omega.iter().map(Label::to_string).collect();
    let outcomes: Vec<String> = doc.outcomes.iter().map(Label::to_string).collect();

    let mut p_omega = Vec::with_capacity(omega.len());
    for w in &omega {
        let p = doc.p_omega.remove(w).ok_or_else(|| invalid(format!("p_omega has no entry for {w:?}")))?;
        p_omega.push(p.0);
    }
    if let Some(extra) = doc.p_omega.keys().next() {
        return Err(invalid(format!("p_omega names unknown disturbance {extra:?}")));
    }

    let mut table = vec![vec![usize::MAX; omega.len()]; theta.len()];
    for (key, outcome) in &doc.f {
        let (t, w) = key.split_once(',').ok_or_else(|| invalid(format!("f key {key:?} is not \"θ,ω\"")))?;
        let t: i64 = t.trim().parse().map_err(|_| invalid(format!("f key {key:?} has a non-integer θ")))?;
        let t = theta.require_index(t)?;
        let w = omega
            .iter()
            .position(|o| o == w.trim())
            .ok_or_else(|| invalid(format!("f key {key:?} names an unknown disturbance")))?;
        let outcome = outcome.to_string();
        let x = outcomes.iter().position(|o| *o == outcome).ok_or(Error::UnknownOutcome(outcome))?;
        table[t][w] = x;
    }
    for (t, row) in table.iter().enumerate() {
        if let Some(w) = row.iter().position(|&x| x == usize::MAX) {
            return Err(invalid(format!("f is not total: no entry for \"{},{}\"", theta.label(t), omega[w])));
        }
    }
    GeneralizedFunctionalModel::new(theta, omega, outcomes, p_omega, table)
}

pub fn model_to_json(model: &GeneralizedFunctionalModel) -> String {
    let theta = model.theta();
    let mut f = BTreeMap::new();
    for (t, &label) in theta.labels().iter().enumerate() {
        for (w, omega) in model.omega().iter().enumerate() {
            f.insert(format!("{label},{omega}"), Label::Text(model.outcomes()[model.f_index(t, w)].clone()));
        }
    }
    let doc = ModelDoc {
        theta: theta.labels().to_vec(),
        omega: model.omega().iter().cloned().map(Label::Text).collect(),
        outcomes: model.outcomes().iter().cloned().map(Label::Text).collect(),
        p_omega: model.omega().iter().cloned().zip(model.p_omega().iter().cloned().map(RationalText)).collect(),
        f,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}
