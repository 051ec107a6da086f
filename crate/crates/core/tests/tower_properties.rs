mod common;

use common::{random_cycle, random_iet, random_interval_event, rng};
use ergoalg::measure::IntervalEvent;
use ergoalg::towers::{
    aperiodicity_witness, approximate_conjugation, conjugacy_with_parameters, conjugate_cycles, cycle_approximation,
    periodic_decomposition, rokhlin_tower, Tower,
};
use ergoalg::transform::{rho_maps, FiniteIET};
use ergoalg::{q, Direction, Error, Event, Rational, System, Transformation};
use proptest::prelude::*;
use rand::Rng;

fn system(t: Transformation) -> System {
    System::new(t).unwrap()
}

fn check_tower(sys: &System, tower: &Tower, n: usize, eps: &Rational) {
    assert_eq!(tower.height, n);
    assert_eq!(tower.levels.len(), n);
    for (i, level) in tower.levels.iter().enumerate() {
        assert_eq!(level, &sys.map().iterate_image(i as i64, &tower.base).unwrap());
        for other in &tower.levels[i + 1..] {
            assert!(level.is_disjoint(other).unwrap());
        }
    }
    let covered = tower.covered().unwrap();
    assert_eq!(covered.complement().measure(), tower.residual);
    assert!(tower.residual < *eps);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn odometer_towers(p in 2u64..6, n in 1usize..12, e in 2i64..40) {
        let sys = system(Transformation::odometer(p).unwrap());
        let eps = q!(1, e);
        let tower = rokhlin_tower(&sys, n, &eps).unwrap();
        check_tower(&sys, &tower, n, &eps);
    }

    #[test]
    fn conjugated_odometer_towers(seed in any::<u64>(), n in 1usize..7) {
        let mut r = rng(seed);
        let pieces = r.gen_range(1..5);
        let by = Transformation::Iet(random_iet(&mut r, pieces, 10));
        let t = Transformation::conjugate(Transformation::odometer(2).unwrap(), by).unwrap();
        let sys = system(t);
        let eps = q!(1, 8);
        let tower = rokhlin_tower(&sys, n, &eps).unwrap();
        check_tower(&sys, &tower, n, &eps);
    }

    #[test]
    fn decomposition_of_random_iets(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pieces = r.gen_range(1..6);
        let f = random_iet(&mut r, pieces, 12);
        let t = Transformation::Iet(f.clone());
        let d = periodic_decomposition(&t).unwrap();
        // Grid IETs are periodic everywhere.
        prop_assert!(d.aperiodic_part.is_empty());
        let mut total = q!(0);
        let mut seen = Event::empty(&ergoalg::Carrier::Interval);
        for (&k, part) in &d.periodic_parts {
            prop_assert!(!part.is_empty());
            prop_assert_eq!(&t.map_event(part, Direction::Forward).unwrap(), part);
            prop_assert!(seen.is_disjoint(part).unwrap());
            // Every point of the part has least period exactly k.
            let iv = part.as_interval().unwrap();
            prop_assert_eq!(&f.power(k as i64).fixed_set().intersection(iv), iv);
            for j in 1..k {
                prop_assert!(f.power(j as i64).fixed_set().intersection(iv).is_empty());
            }
            total += part.measure();
            seen = seen.union(part).unwrap();
        }
        prop_assert_eq!(total, q!(1));
    }

    #[test]
    fn random_cycles_conjugate(seed in any::<u64>(), period in 1usize..7) {
        let mut r = rng(seed);
        let c1 = random_cycle(&mut r, period);
        let c2 = random_cycle(&mut r, period);
        let g = conjugate_cycles(&c1, &c2).unwrap();
        prop_assert!(g.validate().is_ok());
        prop_assert_eq!(g.compose(&c1.cycle), c2.cycle.compose(&g));
        prop_assert_eq!(Event::Interval(g.map_event(c1.base.as_interval().unwrap())), c2.base.clone());
    }

    #[test]
    fn parameters_transported(seed in any::<u64>(), period in 1usize..5) {
        let mut r = rng(seed);
        let c1 = random_cycle(&mut r, period);
        let pieces = r.gen_range(1..5);
        let psi = random_iet(&mut r, pieces, 8);
        let c2 = ergoalg::towers::CycleCertificate::new(
            psi.compose(&c1.cycle).compose(&psi.inverse()),
            period,
            Event::Interval(psi.map_event(c1.base.as_interval().unwrap())),
        )
        .unwrap();
        let b: Vec<Event> = (0..2).map(|_| random_interval_event(&mut r, 8)).collect();
        let d: Vec<Event> = b.iter().map(|e| Event::Interval(psi.map_event(e.as_interval().unwrap()))).collect();
        let g = conjugacy_with_parameters(&c1, &c2, &b, &d).unwrap();
        prop_assert_eq!(g.compose(&c1.cycle), c2.cycle.compose(&g));
        for (x, y) in b.iter().zip(&d) {
            prop_assert_eq!(&Event::Interval(g.map_event(x.as_interval().unwrap())), y);
        }
    }
}

#[test]
fn bernoulli_towers() {
    let sys = system(Transformation::shift(vec![q!(1, 3), q!(2, 3)]).unwrap());
    for n in 1..=4 {
        let eps = q!(1, 4);
        let tower = rokhlin_tower(&sys, n, &eps).unwrap();
        check_tower(&sys, &tower, n, &eps);
    }
}

#[test]
fn cycle_approximations_are_certified() {
    for p in [2u64, 3, 5] {
        let sys = system(Transformation::odometer(p).unwrap());
        for n in [2usize, 3, 4, 6, 9] {
            let c = cycle_approximation(&sys, n).unwrap();
            c.validate().unwrap();
            assert_eq!(c.period, n);
            let bound = c.bound.clone().unwrap();
            assert!(bound <= q!(2, n as i64));
            let rho = c.rho.clone().unwrap();
            assert!(rho.hi <= bound);
            assert!(c.cycle.power(n as i64).is_identity());
            let levels: Vec<IntervalEvent> = c.levels().unwrap();
            let total: Rational = levels.iter().map(IntervalEvent::measure).sum();
            assert_eq!(total, q!(1));
        }
    }
}

#[test]
fn approximate_conjugations_are_sound() {
    let odo2 = system(Transformation::odometer(2).unwrap());
    let odo3 = system(Transformation::odometer(3).unwrap());
    let rot = Transformation::rotation(&q!(1, 2)).unwrap();
    let conj = system(Transformation::conjugate(Transformation::odometer(2).unwrap(), rot).unwrap());
    for (a, b, eps) in [(&odo2, &conj, q!(1, 2)), (&odo2, &odo3, q!(1, 2)), (&odo3, &conj, q!(1, 3))] {
        let res = approximate_conjugation(a, b, &eps).unwrap();
        assert!(res.certificate < eps);
        let real = rho_maps(a.map(), &res.map, &q!(1, 256)).unwrap();
        assert!(real.lo <= res.certificate, "{} > {}", real.lo, res.certificate);
    }
    let same = approximate_conjugation(&odo2, &odo2, &q!(1, 10)).unwrap();
    assert_eq!(same.certificate, q!(0));
    assert!(same.conjugator.is_identity());
}

#[test]
fn periodic_systems_are_rejected() {
    let rot = system(Transformation::rotation(&q!(1, 3)).unwrap());
    assert!(matches!(rokhlin_tower(&rot, 2, &q!(1, 4)), Err(Error::PeriodicPart(_))));
    assert!(matches!(cycle_approximation(&rot, 2), Err(Error::PeriodicPart(_))));
    let id = system(Transformation::Iet(FiniteIET::identity()));
    assert!(aperiodicity_witness(&id, 2, &q!(1, 4)).is_err());
}

#[test]
fn witnesses_are_disjoint_from_their_image() {
    let sys = system(Transformation::shift(vec![q!(1, 2), q!(1, 2)]).unwrap());
    for n in 1..=5 {
        let w = aperiodicity_witness(&sys, n, &q!(1, 16)).unwrap();
        let image = sys.map().iterate_image(n as i64, &w.event).unwrap();
        let overlap = w.event.intersection(&image).unwrap().measure();
        assert_eq!(overlap, w.overlap);
        assert!(overlap <= q!(1, 16));
        assert!((w.event.measure() - q!(1, 2)).abs() <= q!(1, 16));
    }
}
