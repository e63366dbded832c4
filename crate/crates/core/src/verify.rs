//! Invariant suites for every module, runnable on a small or a full grid.
//!
//! Each suite counts passed and failed checks and keeps the first
//! counterexample. The urn models are passed in through [`ModelSet`] so that
//! a deliberately altered model can be checked against the built-in claims.

use std::fmt::Debug;

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::belief::{combine, Classification, MassFunction};
use crate::error::{Error, Result};
use crate::evidence::{weight_consonant, weight_from_mass, weight_precise, weight_simple};
use crate::frames::rational::{integer, pow, ratio};
use crate::frames::{
    format_rational, make_interval_hypothesis, parse_rational, Frame, Hypothesis, LogWeight, Rational, Subset,
};
use crate::gfm::{GeneralizedFunctionalModel, ObservationTally};
use crate::models::urn::{BLACK, WHITE};
use crate::models::{
    build_survival_gfm, build_transition_matrix, build_urn_gfm1, build_urn_gfm2, jordan_power, SurvivalModel,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grid {
    Small,
    Full,
}

struct Bounds {
    random_instances: usize,
    /// Tallies with m + n <= this for proportionality
    tally_total: u32,
    /// m, n <= this for evidence and printed-formula checks
    tally_each: u32,
    closed_n: u32,
    closed_m: u32,
    closed_d: u32,
    markov_n: u32,
    markov_k: u32,
    k_forms: u32,
}

impl Grid {
    fn bounds(self) -> Bounds {
        match self {
            Grid::Small => Bounds {
                random_instances: 200,
                tally_total: 4,
                tally_each: 3,
                closed_n: 5,
                closed_m: 4,
                closed_d: 3,
                markov_n: 12,
                markov_k: 6,
                k_forms: 5,
            },
            Grid::Full => Bounds {
                random_instances: 1000,
                tally_total: 6,
                tally_each: 4,
                closed_n: 7,
                closed_m: 5,
                closed_d: 4,
                markov_n: 16,
                markov_k: 8,
                k_forms: 7,
            },
        }
    }
}

/// Models whose published properties the suites check.
#[derive(Debug, Clone)]
pub struct ModelSet {
    pub urn_gfm1: GeneralizedFunctionalModel,
    pub urn_gfm2: GeneralizedFunctionalModel,
}

impl Default for ModelSet {
    fn default() -> Self {
        ModelSet { urn_gfm1: build_urn_gfm1(), urn_gfm2: build_urn_gfm2() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub passed: usize,
    pub failed: usize,
    pub first_failure: Option<String>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

struct Suite(SuiteReport);

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite(SuiteReport { name, passed: 0, failed: 0, first_failure: None })
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.0.passed += 1;
        } else {
            self.0.failed += 1;
            if self.0.first_failure.is_none() {
                self.0.first_failure = Some(what());
            }
        }
    }

    fn check_eq<T: PartialEq + Debug>(&mut self, got: &T, want: &T, what: impl FnOnce() -> String) {
        self.check(got == want, || format!("{}: got {got:?}, expected {want:?}", what()));
    }

    fn require<T>(&mut self, r: Result<T>, what: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.check(false, || format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self) -> SuiteReport {
        self.0
    }
}

/// Runs every suite, one thread each; reports come back in a fixed order.
pub fn run(grid: Grid, models: &ModelSet) -> Vec<SuiteReport> {
    let b = grid.bounds();
    let b = &b;
    std::thread::scope(|s| {
        let handles = [
            s.spawn(move || frames_suite(b)),
            s.spawn(move || belief_suite(b)),
            s.spawn(move || gfm_suite(b, models)),
            s.spawn(move || evidence_suite(b, models)),
            s.spawn(move || canned_suite(b, models)),
            s.spawn(move || markov_suite(b)),
        ];
        handles.into_iter().map(|h| h.join().expect("suite panicked")).collect()
    })
}

/// Random mass function on a frame of `1..=max_frame` labels with
/// `1..=max_focal` focal sets and small integer weights.
pub fn random_mass_function(rng: &mut impl Rng, frame: &std::sync::Arc<Frame>, max_focal: usize) -> MassFunction {
    let size = frame.len();
    let count = rng.gen_range(1..=max_focal);
    let mut entries = Vec::with_capacity(count);
    for _ in 0..count {
        let mut set = Subset::empty(size);
        while set.is_empty() {
            set = Subset::from_indices(size, (0..size).filter(|_| rng.gen_bool(0.5)));
        }
        entries.push((set, integer(rng.gen_range(1..=9))));
    }
    let total: Rational = entries.iter().map(|(_, w)| w).sum();
    MassFunction::new(frame, entries.into_iter().map(|(s, w)| (s, w / &total))).expect("normalized by construction")
}

/// Every non-empty subset of the frame as a hypothesis.
pub fn all_hypotheses(frame: &std::sync::Arc<Frame>) -> Vec<Hypothesis> {
    let n = frame.len();
    assert!(n <= 16, "enumeration is exponential in the frame size");
    (1u32..(1 << n))
        .map(|bits| Hypothesis::from_subset(frame, Subset::from_indices(n, (0..n).filter(|i| bits & (1 << i) != 0))))
        .collect()
}

fn tallies(max_each: u32, max_total: u32, first: &str, second: &str) -> Vec<(u32, u32, ObservationTally)> {
    let mut out = Vec::new();
    for m in 0..=max_each {
        for n in 0..=max_each {
            if m + n == 0 || m + n > max_total {
                continue;
            }
            out.push((m, n, ObservationTally::new([(first, m), (second, n)]).expect("non-empty")));
        }
    }
    out
}

/// Small built-in models with their outcome names.
fn evidence_models(models: &ModelSet) -> Vec<(String, GeneralizedFunctionalModel, &'static str, &'static str)> {
    let mut v = vec![
        ("urn-gfm1".to_string(), models.urn_gfm1.clone(), WHITE, BLACK),
        ("urn-gfm2".to_string(), models.urn_gfm2.clone(), WHITE, BLACK),
    ];
    for n in 4..=6 {
        v.push((format!("survival:{n}"), build_survival_gfm(n).expect("n >= 1"), "live", "die"));
    }
    v
}

/// Θ = Ω = {1, 2}, uniform, outcome "1" iff θ = ω. Every observation
/// yields singleton focal sets.
pub fn toy_precise_model() -> GeneralizedFunctionalModel {
    GeneralizedFunctionalModel::from_fn(
        Frame::new(vec![1, 2]).expect("static"),
        vec!["1".into(), "2".into()],
        vec!["1".into(), "0".into()],
        vec![ratio(1, 2), ratio(1, 2)],
        |theta, w| if theta == w as i64 + 1 { 0 } else { 1 },
    )
    .expect("static model")
}

fn frames_suite(b: &Bounds) -> SuiteReport {
    let mut s = Suite::new("frames");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut corpus = vec![integer(0), integer(-7), ratio(3, 32), pow(&integer(250), 40), pow(&ratio(-4, 5), 39)];
    corpus.extend((0..b.random_instances).map(|_| ratio(rng.gen_range(-1000..1000), rng.gen_range(1..1000))));
    for q in &corpus {
        let text = format_rational(q);
        s.check(parse_rational(&text).as_ref() == Ok(q), || format!("rational {text} does not round-trip"));
    }
    for _ in 0..b.random_instances {
        let size = rng.gen_range(1..=8);
        let frame = Frame::range(0, size - 1).expect("non-empty");
        let h = Hypothesis::from_subset(&frame, Subset::from_indices(size as usize, (0..size as usize).filter(|_| rng.gen_bool(0.5))));
        s.check(h.complement().complement() == h, || format!("complement twice changed {h:?}"));
        let lo = rng.gen_range(0..size);
        let hi = rng.gen_range(lo..size);
        if let Some(iv) = s.require(make_interval_hypothesis(&frame, lo, hi), || format!("interval [{lo}..{hi}]")) {
            s.check_eq(&iv.labels(), &(lo..=hi).collect(), || format!("members of [{lo}..{hi}]"));
        }
    }
    s.finish()
}

fn belief_suite(b: &Bounds) -> SuiteReport {
    let mut s = Suite::new("belief-core");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..b.random_instances {
        let size = rng.gen_range(1..=6);
        let frame = Frame::range(0, size - 1).expect("non-empty");
        let [x, y, z] = [(); 3].map(|_| random_mass_function(&mut rng, &frame, 5));
        for h in all_hypotheses(&frame).iter().chain([Hypothesis::empty(&frame)].iter()) {
            let bel = x.belief(h).expect("same frame");
            let pl = x.plausibility(h).expect("same frame");
            let dual = Rational::one() - x.belief(&h.complement()).expect("same frame");
            s.check(bel <= pl, || format!("case {case}: Bel > Pl on {h:?} for {x:?}"));
            s.check_eq(&pl, &dual, || format!("case {case}: Pl != 1 - Bel(complement) on {h:?}"));
        }
        let xy = combine(&x, &y).map(|r| r.result);
        let yx = combine(&y, &x).map(|r| r.result);
        s.check_eq(&xy, &yx, || format!("case {case}: combination is not commutative for {x:?}, {y:?}"));
        let left = xy.and_then(|xy| combine(&xy, &z).map(|r| r.result));
        let right = combine(&y, &z).and_then(|yz| combine(&x, &yz.result).map(|r| r.result));
        let both_conflict = matches!((&left, &right), (Err(Error::IncompatibleEvidence), Err(Error::IncompatibleEvidence)));
        s.check(both_conflict || left == right, || format!("case {case}: combination is not associative for {x:?}, {y:?}, {z:?}"));
        if let Ok(r) = &left {
            let total: Rational = r.focal_sets().map(|(_, m)| m).sum();
            s.check(total.is_one(), || format!("case {case}: combined masses sum to {}", format_rational(&total)));
        }
        let with_vacuous = combine(&x, &MassFunction::vacuous(&frame)).map(|r| (r.result, r.conflict_mass));
        s.check_eq(&with_vacuous, &Ok((x.clone(), Rational::zero())), || format!("case {case}: vacuous is not neutral"));
        let class = x.classify();
        if class != Classification::General {
            let contour = x.contour();
            for h in all_hypotheses(&frame) {
                let values = h.members().iter().map(|t| contour[t].clone());
                let want = match class {
                    Classification::Precise => values.sum(),
                    _ => values.max().expect("non-empty"),
                };
                s.check_eq(&x.plausibility(&h).expect("same frame"), &want, || format!("case {case}: {class} rule on {h:?}"));
            }
        }
    }
    s.finish()
}

fn gfm_suite(b: &Bounds, models: &ModelSet) -> SuiteReport {
    let mut s = Suite::new("gfm");
    for (name, model, first, second) in evidence_models(models) {
        for (m, n, tally) in tallies(b.tally_total, b.tally_total, first, second) {
            let Some(report) = s.require(model.observe_tally(&tally), || format!("{name} {tally:?}")) else { continue };
            let c = s.require(model.proportionality_constant(&tally), || format!("{name} (m={m}, n={n})"));
            if let Some(c) = c {
                let expected = Rational::one() / &report.normalization_constant;
                s.check_eq(&c, &expected, || format!("{name} (m={m}, n={n}): c is not 1/K"));
            }
        }
        for t in model.theta().labels() {
            let d = model.induced_distribution(*t).expect("label from frame");
            let total: Rational = d.values().sum();
            s.check(total.is_one(), || format!("{name}: induced distribution at θ={t} sums to {}", format_rational(&total)));
        }
        let forward = model.observe_sequence(&[first, second, first, first], None);
        let backward = model.observe_sequence(&[first, first, second, first], None);
        s.check_eq(&forward, &backward, || format!("{name}: observation order changes the result"));
    }
    for (name, model) in [("urn-gfm1", &models.urn_gfm1), ("urn-gfm2", &models.urn_gfm2)] {
        for t in 0..=4 {
            let d = s.require(model.induced_distribution(t), || format!("{name}: θ={t}"));
            if let Some(d) = d {
                let white = d.get(WHITE).cloned().unwrap_or_default();
                s.check_eq(&white, &ratio(t, 4), || format!("{name}: P_θ(white) at θ={t}"));
            }
        }
    }
    s.finish()
}

fn evidence_suite(b: &Bounds, models: &ModelSet) -> SuiteReport {
    let mut s = Suite::new("evidence");
    let toy = toy_precise_model();
    let mut cases = evidence_models(models);
    cases.retain(|(name, ..)| name != "survival:6");
    cases.push(("toy-precise".into(), toy, "1", "0"));
    for (name, model, first, second) in cases {
        let frame = model.theta().clone();
        let hyps = all_hypotheses(&frame);
        for (m, n, tally) in tallies(b.tally_each, 2 * b.tally_each, first, second) {
            let label = || format!("{name} (m={m}, n={n})");
            let Some(report) = s.require(model.observe_tally(&tally), label) else { continue };
            let mass = report.result;
            let likelihoods = model.likelihood_function(&tally).expect("valid tally");
            for &a in frame.labels() {
                for &c in frame.labels() {
                    let simple = weight_simple(&model, &tally, a, c);
                    let h = Hypothesis::singleton(&frame, a).expect("label");
                    let h2 = Hypothesis::singleton(&frame, c).expect("label");
                    s.check_eq(&weight_from_mass(&mass, &h, &h2), &simple, || format!("{} singletons {a} vs {c}", label()));
                }
            }
            let class = mass.classify();
            let pl: Vec<Rational> = hyps.iter().map(|h| mass.plausibility(h).expect("same frame")).collect();
            for (i, h) in hyps.iter().enumerate() {
                for (j, h2) in hyps.iter().enumerate() {
                    let general = LogWeight::from_ratio(&pl[i], &pl[j]).ok_or(Error::WeightUndefined);
                    match class {
                        Classification::Precise => {
                            let rule = weight_precise(&likelihoods, h, h2);
                            s.check_eq(&general, &rule, || format!("{} precise sum rule {h:?} vs {h2:?}", label()));
                        }
                        Classification::Consonant => {
                            let rule = weight_consonant(&likelihoods, h, h2);
                            s.check_eq(&general, &rule, || format!("{} consonant max rule {h:?} vs {h2:?}", label()));
                        }
                        Classification::General => {}
                    }
                    if !pl[i].is_zero() && !pl[j].is_zero() {
                        let product = (&pl[i] / &pl[j]) * (&pl[j] / &pl[i]);
                        s.check(product.is_one(), || format!("{} antisymmetry {h:?} vs {h2:?}", label()));
                    }
                    if h.members().is_subset(h2.members()) {
                        s.check(pl[i] <= pl[j], || format!("{} Pl not monotone: {h:?} within {h2:?}", label()));
                    }
                }
            }
        }
    }
    s.finish()
}

/// `(1/4)^m(3/4)^n - (1/8)^m(3/8)^n + (1/2)^(m+n)` and its two siblings.
pub fn urn_gfm1_numerators(m: u32, n: u32) -> [Rational; 3] {
    let p = |a: i64, b: i64, e: u32| pow(&ratio(a, b), e);
    let r = m + n;
    [
        p(1, 4, m) * p(3, 4, n) - p(1, 8, m) * p(3, 8, n) + p(1, 2, r),
        p(1, 4, n) * p(3, 4, m) - p(1, 8, n) * p(3, 8, m) + p(1, 2, r),
        p(1, 4, n) * p(3, 4, m) + p(1, 4, m) * p(3, 4, n) - p(3, 16, r),
    ]
}

/// `N₁₂, N₂₃, N₁₃` for the ordered-numbering urn.
pub fn urn_gfm2_numerators(m: u32, n: u32) -> [Rational; 3] {
    let p = |a: i64, b: i64, e: u32| pow(&ratio(a, b), e);
    [
        p(1, 4, m) * p(3, 4, n) + p(1, 2, n) * (p(1, 2, m) - p(1, 4, m)),
        p(1, 4, n) * p(3, 4, m) + p(1, 2, m) * (p(1, 2, n) - p(1, 4, n)),
        p(1, 4, m) * p(3, 4, n) + p(1, 4, n) * (p(3, 4, m) - p(1, 4, m)),
    ]
}

fn canned_suite(b: &Bounds, models: &ModelSet) -> SuiteReport {
    let mut s = Suite::new("canned-models");

    // closed forms against the generic engine
    for size in 1..=b.closed_n {
        let sm = SurvivalModel::new(size).expect("size >= 1");
        let gfm = sm.gfm();
        for m in 0..=b.closed_m {
            for n in 0..=b.closed_d {
                if m + n == 0 {
                    continue;
                }
                let tally = ObservationTally::new([("live", m), ("die", n)]).expect("non-empty");
                let oracle = gfm.observe_tally(&tally).map(|r| r.result);
                let class = oracle.as_ref().map(|r| r.classify()).map_err(Clone::clone);
                s.check_eq(&sm.classification(m, n), &class, || format!("classification at N={size}, m={m}, n={n}"));
                let closed = sm.mass(m, n);
                s.check_eq(&closed, &oracle, || format!("closed form vs engine at N={size}, m={m}, n={n}"));
            }
        }
    }

    // the two urn models agree on P_θ but not on Pl({1,2})
    let pair = |model: &GeneralizedFunctionalModel, a, c| Hypothesis::from_labels(model.theta(), [a, c]).expect("labels");
    for m in 1..=5u32 {
        let t = ObservationTally::new([(WHITE, m)]).expect("non-empty");
        let pl1 = models.urn_gfm1.observe_tally(&t).and_then(|r| r.result.plausibility(&pair(&models.urn_gfm1, 1, 2)));
        let pl2 = models.urn_gfm2.observe_tally(&t).and_then(|r| r.result.plausibility(&pair(&models.urn_gfm2, 1, 2)));
        let want1 = pow(&ratio(1, 4), m) + pow(&ratio(1, 2), m) - pow(&ratio(1, 8), m);
        let want2 = pow(&ratio(1, 2), m);
        s.check_eq(&pl1, &Ok(want1), || format!("urn-gfm1 Pl({{1,2}}) after {m} white"));
        s.check_eq(&pl2, &Ok(want2), || format!("urn-gfm2 Pl({{1,2}}) after {m} white"));
        s.check(pl1 != pl2, || format!("urn models agree on Pl({{1,2}}) after {m} white"));
    }

    // printed pair plausibilities, up to one constant per tally
    for (name, model, numerators) in [
        ("urn-gfm1", &models.urn_gfm1, urn_gfm1_numerators as fn(u32, u32) -> [Rational; 3]),
        ("urn-gfm2", &models.urn_gfm2, urn_gfm2_numerators),
    ] {
        for (m, n, tally) in tallies(b.tally_each, 2 * b.tally_each, WHITE, BLACK) {
            let Some(report) = s.require(model.observe_tally(&tally), || format!("{name} m={m} n={n}")) else { continue };
            let hyps = [pair(model, 1, 2), pair(model, 2, 3), pair(model, 1, 3)];
            let ratios: Vec<Rational> = hyps
                .iter()
                .zip(numerators(m, n))
                .map(|(h, num)| report.result.plausibility(h).expect("same frame") / num)
                .collect();
            s.check(ratios.windows(2).all(|w| w[0] == w[1]), || {
                format!("{name} m={m} n={n}: Pl/printed numerator not constant: {ratios:?}")
            });
        }
    }

    // both expressions for K
    for size in 1..=b.k_forms + 7 {
        let sm = SurvivalModel::new(size).expect("size >= 1");
        for m in 1..=b.k_forms {
            for n in 1..=b.k_forms {
                s.check_eq(&sm.normalization(m, n), &sm.normalization_swapped(m, n), || format!("K forms at N={size}, m={m}, n={n}"));
            }
        }
    }

    // interval identity and boundary equalities
    for size in 2..=6u32 {
        let sm = SurvivalModel::new(size).expect("size >= 1");
        let gfm = sm.gfm();
        for m in 1..=3 {
            for n in 1..=3 {
                let tally = ObservationTally::new([("live", m), ("die", n)]).expect("non-empty");
                let Some(oracle) = s.require(gfm.observe_tally(&tally), || format!("survival:{size} m={m} n={n}")) else { continue };
                let pl = |r: i64, q: i64| sm.plausibility_interval(m, n, r, q).expect("bounds in range");
                for r in 0..=size as i64 {
                    for q in r..=size as i64 {
                        let h = make_interval_hypothesis(sm.frame(), r, q).expect("bounds in range");
                        s.check_eq(&pl(r, q), &oracle.result.plausibility(&h).expect("same frame"), || {
                            format!("Pl([{r}..{q}]) at N={size}, m={m}, n={n}")
                        });
                    }
                    if r >= 1 {
                        s.check_eq(&pl(0, r), &pl(1, r), || format!("Pl([0..{r}]) != Pl([1..{r}]) at N={size}"));
                    }
                    if r < size as i64 {
                        s.check_eq(&pl(r, size as i64), &pl(r, size as i64 - 1), || format!("Pl([{r}..N]) != Pl([{r}..N-1]) at N={size}"));
                    }
                }
            }
        }
    }

    // closed-form weights against the generic engine, every hypothesis pair
    let sm = SurvivalModel::new(5).expect("size >= 1");
    let gfm = sm.gfm();
    let hyps = all_hypotheses(sm.frame());
    for (m, n) in [(2, 1), (3, 0), (0, 2), (1, 2)] {
        let tally = ObservationTally::new([("live", m), ("die", n)]).expect("non-empty");
        let Some(oracle) = s.require(gfm.observe_tally(&tally), || format!("survival:5 m={m} n={n}")) else { continue };
        for h in &hyps {
            for h2 in &hyps {
                let closed = sm.weight(m, n, h, h2);
                let generic = weight_from_mass(&oracle.result, h, h2);
                s.check_eq(&closed, &generic, || format!("survival weight m={m}, n={n}, {h:?} vs {h2:?}"));
            }
        }
    }
    s.finish()
}

fn markov_suite(b: &Bounds) -> SuiteReport {
    let mut s = Suite::new("markov");
    for size in 1..=b.markov_n {
        let t = build_transition_matrix(size).expect("size >= 1");
        s.check(t.is_stochastic(), || format!("T is not stochastic at N={size}"));
        let sm = SurvivalModel::new(size).expect("size >= 1");
        for m in 1..=b.markov_k {
            let chain = t.evolve(m).expect("m >= 1");
            let closed = sm.mass_all_live(m).expect("m >= 1");
            let closed_vec: Vec<Rational> = (1..=size as i64)
                .map(|i| closed.mass_of_labels(i..=size as i64).expect("labels in frame"))
                .collect();
            s.check_eq(&chain, &closed_vec, || format!("T^(m-1) m1 != closed form at N={size}, m={m}"));
            let via_jordan = jordan_power(size, m - 1).expect("size >= 1").mul_vec(&t.initial());
            s.check_eq(&via_jordan, &closed_vec, || format!("M L^(m-1) M^-1 m1 != closed form at N={size}, m={m}"));
            let die = sm.mass_all_die(m).expect("n >= 1");
            let die_vec: Vec<Rational> = (1..=size as i64)
                .map(|i| die.mass_of_labels(0..=size as i64 - i).expect("labels in frame"))
                .collect();
            s.check_eq(&chain, &die_vec, || format!("death chain differs at N={size}, n={m}"));
        }
        for k in 0..=b.markov_k {
            let jordan = jordan_power(size, k).expect("size >= 1");
            s.check_eq(&jordan, &t.entries().pow(k), || format!("M L^k M^-1 != T^k at N={size}, k={k}"));
        }
    }
    s.finish()
}

/// Shuffled observation order for an arbitrary tally; used by tests.
pub fn shuffled_sequence<'a>(tally: &'a ObservationTally, rng: &mut impl Rng) -> Vec<&'a str> {
    let mut seq = tally.sequence();
    seq.shuffle(rng);
    seq
}
