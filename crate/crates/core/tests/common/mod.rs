//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

pub mod flow;

use std::sync::Arc;

use ergoalg::measure::CylinderEvent;
use ergoalg::towers::CycleCertificate;
use ergoalg::transform::FiniteIET;
use ergoalg::{q, Carrier, Event, FiniteAlgebra, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Cuts `[0,1)` into `denom` cells and labels each with one of `parts` parts.
/// Parts may come out empty.
pub fn random_partition(rng: &mut impl Rng, parts: usize, denom: i64) -> Vec<Event> {
    let mut cells: Vec<Vec<(Rational, Rational)>> = vec![Vec::new(); parts];
    for k in 0..denom {
        let label = rng.gen_range(0..parts);
        cells[label].push((q!(k, denom), q!(k + 1, denom)));
    }
    cells
        .into_iter()
        .map(|c| Event::intervals(c).expect("grid cells are valid"))
        .collect()
}

/// A random interval event on the grid `1/denom`.
pub fn random_interval_event(rng: &mut impl Rng, denom: i64) -> Event {
    random_partition(rng, 2, denom).swap_remove(0)
}

pub fn random_interval_algebra(rng: &mut impl Rng, max_parts: usize, denom: i64) -> FiniteAlgebra {
    let parts = rng.gen_range(1..=max_parts);
    let events = random_partition(rng, parts, denom);
    FiniteAlgebra::generated(&Carrier::Interval, &events).expect("valid algebra")
}

pub fn bernoulli(probs: &[Rational]) -> Arc<[Rational]> {
    Arc::from(probs.to_vec())
}

/// A random union of words over the coordinates `lo..lo+len`.
pub fn random_cylinder_event(rng: &mut impl Rng, probs: &Arc<[Rational]>, lo: i64, len: usize) -> Event {
    let arity = probs.len();
    let total = arity.pow(len as u32);
    let mut patterns = Vec::new();
    for code in 0..total {
        if rng.gen_bool(0.5) {
            let mut c = code;
            let word: Vec<Option<usize>> = (0..len)
                .map(|_| {
                    let s = c % arity;
                    c /= arity;
                    Some(s)
                })
                .collect();
            patterns.push(word);
        }
    }
    let e = if patterns.is_empty() {
        CylinderEvent::empty(probs.clone())
    } else {
        CylinderEvent::from_patterns(probs.clone(), lo, &patterns).expect("valid patterns")
    };
    Event::Cylinder(e)
}

pub fn random_cylinder_algebra(
    rng: &mut impl Rng,
    probs: &Arc<[Rational]>,
    lo: i64,
    len: usize,
    generators: usize,
) -> FiniteAlgebra {
    let carrier = Carrier::Cylinder(probs.clone());
    let events: Vec<Event> = (0..generators)
        .map(|_| random_cylinder_event(rng, probs, lo, len))
        .collect();
    FiniteAlgebra::generated(&carrier, &events).expect("valid algebra")
}

/// A random rearrangement of `pieces` grid intervals.
pub fn random_iet(rng: &mut impl Rng, pieces: usize, denom: i64) -> FiniteIET {
    let mut cuts: Vec<i64> = (1..denom).collect();
    cuts.shuffle(rng);
    cuts.truncate(pieces.saturating_sub(1).min((denom - 1) as usize));
    cuts.push(0);
    cuts.push(denom);
    cuts.sort();
    let spans: Vec<(i64, i64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    let mut order: Vec<usize> = (0..spans.len()).collect();
    order.shuffle(rng);
    let mut cursor = 0;
    let mut raw = Vec::with_capacity(spans.len());
    for &i in &order {
        let (lo, hi) = spans[i];
        raw.push(((q!(lo, denom), q!(hi, denom)), q!(cursor - lo, denom)));
        cursor += hi - lo;
    }
    FiniteIET::new(raw).expect("rearranged grid pieces tile")
}

/// `γ⁻¹ ∘ R ∘ γ` for the rotation `R` by `1/period` and a random IET `γ`.
pub fn random_cycle(rng: &mut impl Rng, period: usize) -> CycleCertificate {
    let pieces = rng.gen_range(1..6);
    let gamma = random_iet(rng, pieces, 4 * period as i64);
    let rot = FiniteIET::rotation(&q!(1, period)).expect("rotation");
    let cycle = gamma.inverse().compose(&rot).compose(&gamma);
    let base = gamma.preimage(
        Event::interval(q!(0), q!(1, period))
            .expect("interval")
            .as_interval()
            .expect("interval"),
    );
    CycleCertificate::new(cycle, period, Event::Interval(base)).expect("conjugate of a cycle")
}

/// Whether `x` and `y` are within `tol`.
pub fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}
