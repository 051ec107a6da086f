//! Rokhlin towers, aperiodicity witnesses, cycle approximations and conjugations,
//! and the decomposition of a map into periodic parts.

mod bernoulli;
pub mod cycles;
pub mod periodic;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Carrier, Event, IntervalEvent, RectEvent};
use crate::rational::Rational;
use crate::transform::{odometer, Direction, System, Transformation};

pub use cycles::{
    approximate_conjugation, conjugacy_with_parameters, conjugate_cycles, cycle_approximation,
    ApproximateConjugation, CycleCertificate,
};
pub use periodic::{
    independent_periodic_partition, partition_for_periodic, periodic_decomposition, AtomicPart,
    Decomposition,
};

/// Upper limit on the number of odometer cells a construction may enumerate.
pub const MAX_CELLS: u64 = 1 << 20;

/// Disjoint levels `E, τE, …, τ^{n−1}E` and the measure they leave uncovered.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tower {
    pub base: Event,
    pub height: usize,
    pub levels: Vec<Event>,
    pub residual: Rational,
}

impl Tower {
    /// Builds the levels over `base` and checks that they are pairwise disjoint.
    pub fn from_base(system: &System, base: Event, height: usize) -> Result<Self> {
        if height == 0 {
            return Err(Error::Precondition("tower height must be positive".into()));
        }
        system.carrier().expect(&base.carrier())?;
        let mut levels = vec![base.clone()];
        for _ in 1..height {
            let next = system.map().iterate_image(1, levels.last().expect("nonempty"))?;
            levels.push(next);
        }
        // τ^i E ∩ τ^j E = τ^i(E ∩ τ^{j−i} E), so checking against the base suffices.
        for (d, level) in levels.iter().enumerate().skip(1) {
            if base.intersects(level)? {
                return Err(Error::Precondition(format!("base meets level {d}")));
            }
        }
        let residual = Rational::one() - base.measure() * Rational::from_integer(height as i64);
        Ok(Tower {
            base,
            height,
            levels,
            residual,
        })
    }

    /// Union of the levels.
    pub fn covered(&self) -> Result<Event> {
        Event::union_all(&self.base.carrier(), &self.levels)
    }
}

/// A tower of height `n` whose levels cover all but less than `eps`.
pub fn rokhlin_tower(system: &System, n: usize, eps: &Rational) -> Result<Tower> {
    if n == 0 {
        return Err(Error::Precondition("tower height must be positive".into()));
    }
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("ε = {eps} must be positive")));
    }
    let base = tower_base(system.map(), n, eps)?;
    let tower = Tower::from_base(system, base, n)?;
    if tower.residual >= *eps {
        return Err(Error::BudgetExceeded(format!(
            "tower residual {} not below {eps}",
            tower.residual
        )));
    }
    Ok(tower)
}

fn tower_base(map: &Transformation, n: usize, eps: &Rational) -> Result<Event> {
    let carrier = map.carrier()?;
    if n == 1 {
        return Ok(Event::full(&carrier));
    }
    match map {
        Transformation::Odometer { base } => odometer_base(*base, n, eps).map(Event::Interval),
        Transformation::Shift { probs } => bernoulli::bernoulli_base(probs, n, eps).map(Event::Cylinder),
        // The top level of a tower for τ is a base for τ⁻¹.
        Transformation::Inverse(t) => {
            let e = tower_base(t, n, eps)?;
            t.iterate_image(n as i64 - 1, &e)
        }
        Transformation::Conjugate { inner, by } => {
            let e = tower_base(inner, n, eps)?;
            by.map_event(&e, Direction::Inverse)
        }
        Transformation::Product(a, b) => {
            let (ca, cb) = (a.carrier()?, b.carrier()?);
            if a.is_certified_aperiodic() {
                let e = tower_base(a, n, eps)?;
                Ok(Event::Rect(RectEvent::rectangle(e, Event::full(&cb))?))
            } else if b.is_certified_aperiodic() {
                let e = tower_base(b, n, eps)?;
                Ok(Event::Rect(RectEvent::rectangle(Event::full(&ca), e)?))
            } else {
                Err(Error::PeriodicPart(
                    "neither factor of the product is certified aperiodic".into(),
                ))
            }
        }
        _ if map.as_iet().is_some() => Err(Error::PeriodicPart(
            "an interval exchange with rational data is periodic".into(),
        )),
        _ => Err(Error::Irreducible(format!(
            "no tower construction for this {} map",
            carrier.name()
        ))),
    }
}

/// `Some(k)` when `n = p^k`.
pub(crate) fn exact_power(p: u64, n: u64) -> Option<u32> {
    let mut k = 0;
    let mut v = 1u64;
    while v < n {
        v = v.checked_mul(p)?;
        k += 1;
    }
    (v == n).then_some(k)
}

/// Smallest `K` with `p^K ≥ target`, within the cell budget.
pub(crate) fn depth_at_least(p: u64, target: u64) -> Result<u32> {
    let mut k = 0;
    let mut v = 1u64;
    while v < target {
        v = v.saturating_mul(p);
        k += 1;
        if v > MAX_CELLS {
            return Err(Error::BudgetExceeded(format!(
                "needs {p}^{k} odometer cells, above {MAX_CELLS}"
            )));
        }
    }
    Ok(k)
}

/// Exact when `n` is a power of `p`. Otherwise the height-`H` tower over
/// `[0, p^{−K})`, `H = p^K ≥ n⌈1/ε⌉`, is cut into blocks of `n` levels and the base
/// collects every `n`-th level; at most `n − 1` of the `H` levels are left over.
fn odometer_base(p: u64, n: usize, eps: &Rational) -> Result<IntervalEvent> {
    let n = n as u64;
    if let Some(k) = exact_power(p, n) {
        return IntervalEvent::interval(Rational::zero(), Rational::inv_power(p, k));
    }
    let inv = u64::try_from(eps.recip().ceil()).unwrap_or(u64::MAX);
    let k = depth_at_least(p, n.saturating_mul(inv))?;
    let height = p.pow(k);
    let cells = (0..height / n).map(|j| odometer::cell(p, k, j * n));
    IntervalEvent::normalize(cells)
}

/// `b` with `m(b ∩ τ^n b) ≤ ε` and `|m(b) − 1/2| ≤ ε`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub event: Event,
    pub overlap: Rational,
    pub measure: Rational,
}

pub fn aperiodicity_witness(system: &System, n: usize, eps: &Rational) -> Result<Witness> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    if eps.is_negative() {
        return Err(Error::Precondition(format!("ε = {eps} must be nonnegative")));
    }
    let event = match exact_witness(system.map(), n)? {
        Some(b) => b,
        None if eps.is_zero() => {
            return Err(Error::Unattainable(
                "an exact witness needs an odometer of even base; otherwise τ^{2n} \
                 would fix a set of measure 1/2 in an ergodic factor"
                    .into(),
            ))
        }
        None => {
            let two = Rational::from_integer(2);
            let tower = rokhlin_tower(system, 2 * n, &(eps * &two))?;
            Event::union_all(system.carrier(), &tower.levels[..n])?
        }
    };
    let moved = system.map().iterate_image(n as i64, &event)?;
    let overlap = event.intersection(&moved)?.measure();
    let measure = event.measure();
    let off = (&measure - &Rational::frac(1, 2)).abs();
    if overlap > *eps || off > *eps {
        return Err(Error::Unattainable(format!(
            "witness has overlap {overlap} and measure {measure}"
        )));
    }
    Ok(Witness {
        event,
        overlap,
        measure,
    })
}

/// For `n = 2^s u` with `u` odd, adding `n` flips bit `s` of `x mod 2^{s+1}`, so
/// `{x mod 2^{s+1} < 2^s}` is sent onto its complement. This needs `2 | p`.
fn exact_witness(map: &Transformation, n: usize) -> Result<Option<Event>> {
    Ok(match map {
        Transformation::Odometer { base } if base % 2 == 0 => {
            let p = *base;
            let s = n.trailing_zeros();
            let modulus = 1u64 << (s + 1);
            let twos = p.trailing_zeros();
            let k = (s + 1).div_ceil(twos);
            let cells = p
                .checked_pow(k)
                .filter(|c| *c <= MAX_CELLS)
                .ok_or_else(|| Error::BudgetExceeded(format!("needs {p}^{k} odometer cells")))?;
            let chosen = (0..cells)
                .filter(|m| m % modulus < modulus / 2)
                .map(|m| odometer::cell(p, k, m));
            Some(Event::Interval(IntervalEvent::normalize(chosen)?))
        }
        Transformation::Inverse(t) => exact_witness(t, n)?,
        Transformation::Conjugate { inner, by } => match exact_witness(inner, n)? {
            Some(b) => Some(by.map_event(&b, Direction::Inverse)?),
            None => None,
        },
        Transformation::Product(a, b) => {
            if let Some(e) = exact_witness(a, n)? {
                Some(Event::Rect(RectEvent::rectangle(e, Event::full(&b.carrier()?))?))
            } else if let Some(e) = exact_witness(b, n)? {
                Some(Event::Rect(RectEvent::rectangle(Event::full(&a.carrier()?), e)?))
            } else {
                None
            }
        }
        _ => None,
    })
}

/// The product system; its carrier nesting is capped.
pub fn product_system(left: &System, right: &System) -> Result<System> {
    left.product(right)
}

/// Whether the carrier is the unit interval.
pub(crate) fn expect_interval(c: &Carrier, what: &str) -> Result<()> {
    match c {
        Carrier::Interval => Ok(()),
        other => Err(Error::Precondition(format!(
            "{what} needs an interval map, got one on {}",
            other.name()
        ))),
    }
}
