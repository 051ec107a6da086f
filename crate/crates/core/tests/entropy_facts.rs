mod common;

use common::{bernoulli, close, random_cylinder_algebra, random_interval_algebra, rng};
use ergoalg::entropy::{
    entropy, entropy_with, h_sequence, is_transformally_definable_upto, is_transformally_independent_upto,
    pull_algebra, DefinabilityPath, EntropyOptions,
};
use ergoalg::measure::CylinderEvent;
use ergoalg::{q, Carrier, Event, FiniteAlgebra, Rational, System, Transformation};
use proptest::prelude::*;

const LN2: f64 = std::f64::consts::LN_2;

fn halves() -> FiniteAlgebra {
    FiniteAlgebra::generated(&Carrier::Interval, &[Event::interval(q!(0), q!(1, 2)).unwrap()]).unwrap()
}

fn generator(probs: &[Rational]) -> (System, FiniteAlgebra) {
    let p = bernoulli(probs);
    let events: Vec<Event> = (0..probs.len())
        .map(|s| Event::Cylinder(CylinderEvent::symbol_at(p.clone(), 0, s).unwrap()))
        .collect();
    let alg = FiniteAlgebra::new(events).unwrap();
    let sys = System::new(Transformation::shift(probs.to_vec()).unwrap()).unwrap();
    (sys, alg)
}

fn odometer(p: u64) -> System {
    System::new(Transformation::odometer(p).unwrap()).unwrap()
}

#[test]
fn closed_forms() {
    let triv = FiniteAlgebra::trivial(&Carrier::Interval);
    assert!(close(entropy(&halves(), &triv).unwrap().value, LN2, 1e-15));
    assert_eq!(entropy(&halves(), &halves()).unwrap().value, 0.0);
    let quarters = FiniteAlgebra::generated(
        &Carrier::Interval,
        &[
            Event::interval(q!(0), q!(1, 2)).unwrap(),
            Event::intervals([(q!(0), q!(1, 4)), (q!(1, 2), q!(3, 4))]).unwrap(),
        ],
    )
    .unwrap();
    assert!(close(entropy(&quarters, &triv).unwrap().value, 2.0 * LN2, 1e-15));
}

#[test]
fn reduced_precision_rounds() {
    let triv = FiniteAlgebra::trivial(&Carrier::Interval);
    let coarse = entropy_with(&halves(), &triv, EntropyOptions::with_precision(8).unwrap()).unwrap();
    assert!(close(coarse.value, LN2, 1.0 / 256.0));
    assert!(EntropyOptions::with_precision(0).is_err());
    assert!(EntropyOptions::with_precision(54).is_err());
}

#[test]
fn sequence_examples() {
    let (sys, gen) = generator(&[q!(1, 2), q!(1, 2)]);
    for row in h_sequence(&sys, &gen, 4).unwrap() {
        assert!(close(row.conditional.value, LN2, 1e-12));
        assert!(close(row.cesaro.value, LN2, 1e-12));
    }
    for row in h_sequence(&odometer(2), &halves(), 2).unwrap() {
        assert_eq!(row.conditional.value, 0.0);
    }
    let id = System::new(Transformation::identity()).unwrap();
    for row in h_sequence(&id, &halves(), 3).unwrap() {
        assert_eq!(row.conditional.value, 0.0);
    }
}

#[test]
fn transformal_examples() {
    let (sys, gen) = generator(&[q!(1, 2), q!(1, 2)]);
    assert!(is_transformally_independent_upto(&sys, &gen, 5).unwrap());
    assert!(!is_transformally_independent_upto(&odometer(2), &halves(), 1).unwrap());
    let id = System::new(Transformation::identity()).unwrap();
    assert!(!is_transformally_independent_upto(&id, &halves(), 1).unwrap());

    let d = is_transformally_definable_upto(&odometer(2), &halves(), 1, 0.0).unwrap();
    assert!(d.definable);
    assert_eq!(d.path, DefinabilityPath::Exact);
    let d = is_transformally_definable_upto(&sys, &gen, 8, 1e-9).unwrap();
    assert!(!d.definable);
    assert_eq!(d.path, DefinabilityPath::Numeric);
    assert!(is_transformally_definable_upto(&id, &halves(), 1, 0.0).unwrap().definable);
}

#[test]
fn product_factor_lifts() {
    let (shift, gen) = generator(&[q!(1, 2), q!(1, 2)]);
    let prod = odometer(2).product(&shift).unwrap();
    let right = Carrier::Cylinder(bernoulli(&[q!(1, 2), q!(1, 2)]));
    let lifted_left = FiniteAlgebra::new(
        halves()
            .atoms()
            .iter()
            .map(|a| Event::rectangle(a.clone(), Event::full(&right)).unwrap())
            .collect(),
    )
    .unwrap();
    for row in h_sequence(&prod, &lifted_left, 3).unwrap() {
        assert_eq!(row.conditional.value, 0.0);
    }
    let lifted_right = FiniteAlgebra::new(
        gen.atoms()
            .iter()
            .map(|a| Event::rectangle(Event::full(&Carrier::Interval), a.clone()).unwrap())
            .collect(),
    )
    .unwrap();
    for row in h_sequence(&prod, &lifted_right, 3).unwrap() {
        assert!(close(row.conditional.value, LN2, 1e-12));
    }
    // Conditioning additionally on the left factor changes nothing.
    let past = ergoalg::entropy::pasts(&prod, &lifted_right, 2).unwrap().pop().unwrap();
    let with_left = past.join(&lifted_left).unwrap();
    let h = entropy(&lifted_right, &with_left).unwrap().value;
    assert!(close(h, LN2, 1e-12));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn conditional_sequence_is_monotone(seed in any::<u64>()) {
        let mut r = rng(seed);
        let sys = System::new(Transformation::Iet(common::random_iet(&mut r, 4, 12))).unwrap();
        let a = random_interval_algebra(&mut r, 3, 6);
        let rows = h_sequence(&sys, &a, 5).unwrap();
        let h_a = entropy(&a, &FiniteAlgebra::trivial(&Carrier::Interval)).unwrap().value;
        for w in rows.windows(2) {
            prop_assert!(w[1].conditional.value <= w[0].conditional.value + 1e-12);
        }
        for row in &rows {
            prop_assert!(row.cesaro.value <= h_a + 1e-12);
        }
    }

    #[test]
    fn entropy_is_invariant_under_pullback(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = bernoulli(&[q!(1, 4), q!(3, 4)]);
        let a = random_cylinder_algebra(&mut r, &p, 0, 2, 2);
        let d = random_cylinder_algebra(&mut r, &p, 1, 2, 1);
        let sys = System::new(Transformation::shift(vec![q!(1, 4), q!(3, 4)]).unwrap()).unwrap();
        let base = entropy(&a, &d).unwrap().value;
        let pulled = entropy(&pull_algebra(&sys, &a, 1).unwrap(), &pull_algebra(&sys, &d, 1).unwrap()).unwrap();
        prop_assert!(close(base, pulled.value, 1e-12));
    }
}
