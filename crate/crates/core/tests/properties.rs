use proptest::prelude::*;

use evweight::belief::combine;
use evweight::frames::{Frame, Hypothesis, Subset};
use evweight::gfm::ObservationTally;
use evweight::models::{build_urn_gfm1, SurvivalModel};
use evweight::belief::MassFunction;
use evweight::frames::rational::integer;
use evweight::frames::Rational;

fn mass_strategy(size: usize) -> impl Strategy<Value = MassFunction> {
    proptest::collection::vec((1u32..(1 << size), 1i64..10), 1..5).prop_map(move |entries| {
        let frame = Frame::range(0, size as i64 - 1).unwrap();
        let total: i64 = entries.iter().map(|(_, w)| w).sum();
        MassFunction::new(
            &frame,
            entries.into_iter().map(|(bits, w)| {
                (Subset::from_indices(size, (0..size).filter(|i| bits & (1 << i) != 0)), integer(w) / integer(total))
            }),
        )
        .unwrap()
    })
}

proptest! {
    #[test]
    fn belief_below_plausibility(m in mass_strategy(4), bits in 0u32..16) {
        let h = Hypothesis::from_subset(m.frame(), Subset::from_indices(4, (0..4).filter(|i| bits & (1 << i) != 0)));
        prop_assert!(m.belief(&h).unwrap() <= m.plausibility(&h).unwrap());
    }

    #[test]
    fn combination_commutes(a in mass_strategy(4), b in mass_strategy(4)) {
        let ab = combine(&a, &b).map(|r| (r.result, r.conflict_mass));
        let ba = combine(&b, &a).map(|r| (r.result, r.conflict_mass));
        prop_assert_eq!(ab, ba);
    }

    #[test]
    fn observation_order_is_irrelevant(seq in proptest::collection::vec(prop::bool::ANY, 1..5)) {
        let urn = build_urn_gfm1();
        let labels: Vec<&str> = seq.iter().map(|&w| if w { "white" } else { "black" }).collect();
        let mut reversed = labels.clone();
        reversed.reverse();
        let forward = urn.observe_sequence(&labels, None).map(|r| r.result);
        let backward = urn.observe_sequence(&reversed, None).map(|r| r.result);
        prop_assert_eq!(forward, backward);
    }

    #[test]
    fn survival_contour_sums_are_bounded(size in 2u32..8, m in 1u32..4, n in 1u32..4) {
        let sm = SurvivalModel::new(size).unwrap();
        let tally = ObservationTally::new([("live", m), ("die", n)]).unwrap();
        let mass = sm.gfm().observe_tally(&tally).unwrap().result;
        let whole = Hypothesis::whole(sm.frame());
        prop_assert_eq!(mass.plausibility(&whole).unwrap(), Rational::from_integer(1.into()));
    }
}
