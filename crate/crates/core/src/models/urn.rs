//! Two models of a four-ball urn that share the distributional model
//! `P_θ(white) = θ/4` but induce different belief functions.

use crate::frames::rational::ratio;
use crate::frames::Frame;
use crate::gfm::GeneralizedFunctionalModel;

pub const WHITE: &str = "white";
pub const BLACK: &str = "black";

/// The eight relation sets of the conditional-embedding model and their
/// probabilities, in the order φ₁ … φ₈ (numerators over 32).
pub const RELATION_SETS: [(&[i64], i64); 8] = [
    (&[4], 3),
    (&[1, 4], 1),
    (&[2, 4], 3),
    (&[3, 4], 9),
    (&[1, 2, 4], 1),
    (&[1, 3, 4], 3),
    (&[2, 3, 4], 9),
    (&[1, 2, 3, 4], 3),
];

/// Conditional-embedding model: Ω is a set of eight indicator relations
/// `φᵢ` between Θ = {0..4} and the colour, and `f(θ, φᵢ) = φᵢ(θ)`.
pub fn build_urn_gfm1() -> GeneralizedFunctionalModel {
    let omega = (1..=8).map(|i| format!("phi{i}")).collect();
    let p = RELATION_SETS.iter().map(|&(_, num)| ratio(num, 32)).collect();
    GeneralizedFunctionalModel::from_fn(
        Frame::range(0, 4).expect("static frame"),
        omega,
        vec![WHITE.into(), BLACK.into()],
        p,
        |theta, w| if RELATION_SETS[w].0.contains(&theta) { 0 } else { 1 },
    )
    .expect("static model is valid")
}

/// Ordered-numbering model: balls 1..θ are white, a uniform ball number ω
/// is drawn and the ball is white iff `ω <= θ`.
pub fn build_urn_gfm2() -> GeneralizedFunctionalModel {
    ordered_numbering(4, WHITE, BLACK)
}

/// Θ = {0..n}, Ω = {1..n} uniform, first outcome iff `ω <= θ`.
pub(crate) fn ordered_numbering(n: i64, first: &str, second: &str) -> GeneralizedFunctionalModel {
    GeneralizedFunctionalModel::from_fn(
        Frame::range(0, n).expect("n >= 1"),
        (1..=n).map(|w| w.to_string()).collect(),
        vec![first.into(), second.into()],
        vec![ratio(1, n); n as usize],
        |theta, w| if (w as i64 + 1) <= theta { 0 } else { 1 },
    )
    .expect("ordered-numbering model is valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frames::rational::{pow, ratio};
    use crate::frames::{Hypothesis, Rational};
    use crate::gfm::ObservationTally;

    #[test]
    fn gfm1_tables() {
        let m = build_urn_gfm1();
        assert_eq!(m.p_omega()[3], ratio(9, 32));
        assert_eq!(m.f(2, "phi3").unwrap(), WHITE);
        assert_eq!(m.f(0, "phi8").unwrap(), BLACK);
        for theta in 0..=4 {
            let d = m.induced_distribution(theta).unwrap();
            assert_eq!(d[WHITE], ratio(theta, 4), "θ = {theta}");
            assert_eq!(d[BLACK], ratio(4 - theta, 4));
        }
    }

    #[test]
    fn gfm1_single_white_masses_are_the_relation_probabilities() {
        let m = build_urn_gfm1();
        let r = m.observe_one(WHITE).unwrap();
        assert_eq!(r.result.focal_count(), 8);
        for (set, num) in RELATION_SETS {
            assert_eq!(r.result.mass_of_labels(set.iter().copied()).unwrap(), ratio(num, 32));
        }
    }

    #[test]
    fn gfm1_induced_at_two_sums_relations_containing_two() {
        // φ3, φ5, φ7, φ8 contain 2: (3 + 1 + 9 + 3)/32 = 1/2
        let d = build_urn_gfm1().induced_distribution(2).unwrap();
        assert_eq!(d[WHITE], ratio(1, 2));
        assert_eq!(d[BLACK], ratio(1, 2));
    }

    #[test]
    fn gfm2_tables() {
        let m = build_urn_gfm2();
        for theta in 0..=4 {
            assert_eq!(m.induced_distribution(theta).unwrap()[WHITE], ratio(theta, 4));
        }
        let black = m.observe_one(BLACK).unwrap();
        for w in 1..=4 {
            assert_eq!(black.result.mass_of_labels(0..w).unwrap(), ratio(1, 4));
        }
    }

    #[test]
    fn pure_white_plausibilities_of_pairs() {
        let g1 = build_urn_gfm1();
        let g2 = build_urn_gfm2();
        let f = g1.theta().clone();
        let pair = |a, b| Hypothesis::from_labels(&f, [a, b]).unwrap();
        let q = |n, d| ratio(n, d);
        for k in 1..=4u32 {
            let t = ObservationTally::new([(WHITE, k)]).unwrap();
            let m1 = g1.observe_tally(&t).unwrap().result;
            let m2 = g2.observe_tally(&t).unwrap().result;
            let p = |a: Rational| pow(&a, k);
            assert_eq!(m1.plausibility(&pair(1, 2)).unwrap(), p(q(1, 4)) + p(q(1, 2)) - p(q(1, 8)));
            assert_eq!(m1.plausibility(&pair(2, 3)).unwrap(), p(q(3, 4)) + p(q(1, 2)) - p(q(3, 8)));
            assert_eq!(m1.plausibility(&pair(1, 3)).unwrap(), p(q(3, 4)) + p(q(1, 4)) - p(q(3, 16)));
            assert_eq!(m2.plausibility(&pair(1, 2)).unwrap(), p(q(1, 2)));
            assert_eq!(m2.plausibility(&pair(2, 3)).unwrap(), p(q(3, 4)));
            assert_eq!(m2.plausibility(&pair(1, 3)).unwrap(), p(q(3, 4)));
        }
    }
}
