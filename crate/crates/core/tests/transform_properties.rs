mod common;

use common::{random_iet, random_interval_event, rng};
use ergoalg::transform::{odometer, rho_maps, FiniteIET};
use ergoalg::{q, Direction, Event, Rational, Transformation};
use proptest::prelude::*;
use rand::Rng;

/// An interval map drawn from the backends and their combinators.
fn interval_map(seed: u64) -> Transformation {
    let mut r = rng(seed);
    let iet = |r: &mut rand_chacha::ChaCha8Rng| {
        let pieces = r.gen_range(1..5);
        Transformation::Iet(random_iet(r, pieces, 12))
    };
    match r.gen_range(0..6) {
        0 => iet(&mut r),
        1 => Transformation::odometer(r.gen_range(2..5)).unwrap(),
        2 => Transformation::odometer(2).unwrap().inverse(),
        3 => Transformation::conjugate(Transformation::odometer(3).unwrap(), iet(&mut r)).unwrap(),
        4 => Transformation::compose(iet(&mut r), Transformation::odometer(2).unwrap()).unwrap(),
        _ => Transformation::rotation(&q!(r.gen_range(0..12), 12)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn measure_preserved(seed in any::<u64>()) {
        let t = interval_map(seed);
        let mut r = rng(seed ^ 1);
        let a = random_interval_event(&mut r, 16);
        let image = t.map_event(&a, Direction::Forward).unwrap();
        prop_assert_eq!(image.measure(), a.measure());
        let pre = t.map_event(&a, Direction::Inverse).unwrap();
        prop_assert_eq!(pre.measure(), a.measure());
    }

    #[test]
    fn images_commute_with_boolean_ops(seed in any::<u64>()) {
        let t = interval_map(seed);
        let mut r = rng(seed ^ 2);
        let a = random_interval_event(&mut r, 16);
        let b = random_interval_event(&mut r, 8);
        let f = |e: &Event| t.map_event(e, Direction::Forward).unwrap();
        prop_assert_eq!(f(&a.union(&b).unwrap()), f(&a).union(&f(&b)).unwrap());
        prop_assert_eq!(f(&a.intersection(&b).unwrap()), f(&a).intersection(&f(&b)).unwrap());
        prop_assert_eq!(f(&a.complement()), f(&a).complement());
    }

    #[test]
    fn inverse_undoes_image(seed in any::<u64>()) {
        let t = interval_map(seed);
        let mut r = rng(seed ^ 3);
        let a = random_interval_event(&mut r, 16);
        let there = t.map_event(&a, Direction::Forward).unwrap();
        prop_assert_eq!(t.map_event(&there, Direction::Inverse).unwrap(), a.clone());
        prop_assert_eq!(t.iterate_image(-2, &t.iterate_image(2, &a).unwrap()).unwrap(), a);
    }

    #[test]
    fn point_images_land_in_event_images(seed in any::<u64>(), k in 0i64..64) {
        let t = interval_map(seed);
        let x = q!(k, 64) + q!(1, 1000);
        let mut r = rng(seed ^ 4);
        let a = random_interval_event(&mut r, 8);
        let y = t.apply_point(&x).unwrap();
        let image = t.map_event(&a, Direction::Forward).unwrap();
        let inside = a.as_interval().unwrap().contains_point(&x);
        prop_assert_eq!(image.as_interval().unwrap().contains_point(&y), inside);
    }

    #[test]
    fn iet_validity_survives_algebra(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = random_iet(&mut r, 4, 10);
        let g = random_iet(&mut r, 3, 6);
        prop_assert!(f.compose(&g).validate().is_ok());
        prop_assert!(f.inverse().validate().is_ok());
        prop_assert!(f.compose(&f.inverse()).is_identity());
        prop_assert_eq!(f.power(3), f.compose(&f).compose(&f));
    }

    #[test]
    fn rho_maps_symmetric_and_triangular(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let (a, b, c) = (interval_map(s1), interval_map(s2), interval_map(s3));
        let gap = q!(1, 64);
        let ab = rho_maps(&a, &b, &gap).unwrap();
        let ba = rho_maps(&b, &a, &gap).unwrap();
        prop_assert!(ab.lo <= ba.hi && ba.lo <= ab.hi);
        let bc = rho_maps(&b, &c, &gap).unwrap();
        let ac = rho_maps(&a, &c, &gap).unwrap();
        prop_assert!(ac.lo <= ab.hi + bc.hi);
    }
}

/// Fraction of grid cells `[k/d, (k+1)/d)` whose left endpoints are moved differently.
/// Exact for maps that are translations on each cell.
fn sampled_rho(a: &Transformation, b: &Transformation, d: i64) -> Rational {
    let differ = (0..d)
        .filter(|&k| {
            let x = q!(k, d);
            a.apply_point(&x) != b.apply_point(&x)
        })
        .count();
    q!(differ as i64, d)
}

#[test]
fn rho_of_grid_iets_matches_sampling() {
    let mut r = rng(11);
    for _ in 0..200 {
        let f = Transformation::Iet(random_iet(&mut r, 4, 12));
        let g = Transformation::Iet(random_iet(&mut r, 3, 12));
        let exact = rho_maps(&f, &g, &q!(1, 100)).unwrap();
        assert!(exact.is_exact());
        assert_eq!(exact.lo, sampled_rho(&f, &g, 12));
    }
}

#[test]
fn rho_of_odometer_truncations_matches_sampling() {
    for (p, k) in [(2u64, 1u32), (2, 3), (3, 2), (5, 1)] {
        let odo = Transformation::odometer(p).unwrap();
        let cyc = Transformation::Iet(odometer::truncation(p, k));
        let exact = rho_maps(&odo, &cyc, &q!(1, 1000)).unwrap();
        let cells = (p as i64).pow(k + 3);
        assert_eq!(exact.lo, sampled_rho(&odo, &cyc, cells));
        assert_eq!(exact.lo, Rational::inv_power(p, k));
    }
}

#[test]
fn rearrangement_sends_event_onto_target() {
    let mut r = rng(5);
    for _ in 0..100 {
        let a = random_interval_event(&mut r, 12);
        let b_raw = random_iet(&mut r, 4, 12).map_event(a.as_interval().unwrap());
        let f = FiniteIET::rearrangement(a.as_interval().unwrap(), &b_raw).unwrap();
        assert_eq!(f.map_event(a.as_interval().unwrap()), b_raw);
    }
    let half = Event::interval(q!(0), q!(1, 2)).unwrap();
    let quarter = Event::interval(q!(0), q!(1, 4)).unwrap();
    assert!(FiniteIET::rearrangement(half.as_interval().unwrap(), quarter.as_interval().unwrap()).is_err());
}

#[test]
fn fixed_sets_of_rotations() {
    let rot = Transformation::rotation(&q!(1, 3)).unwrap();
    assert!(rot.fixed_set(1).unwrap().is_empty());
    assert_eq!(rot.fixed_set(3).unwrap().measure(), q!(1));
    let odo = Transformation::odometer(2).unwrap();
    assert!(odo.fixed_set(4).unwrap().is_empty());
}
