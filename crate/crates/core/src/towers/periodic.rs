//! Periodic interval exchanges: partitions into orbit representatives and the
//! decomposition of a map by exact period.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Event, IntervalEvent, RectEvent};
use crate::rational::Rational;
use crate::transform::{FiniteIET, Transformation};

/// Cap on the number of orbit points and on the periods searched.
pub const MAX_ORBIT_POINTS: usize = 1 << 16;

type OrbitCells = (Vec<(Rational, Rational)>, Vec<usize>);

/// Elementary intervals cut by the breakpoints of `f`, the endpoints of `extra` and
/// all their images; `f` permutes them by translation. Returns the cells and the
/// permutation.
fn orbit_cells(f: &FiniteIET, extra: &[&IntervalEvent]) -> Result<OrbitCells> {
    let mut points: BTreeSet<Rational> = BTreeSet::new();
    let mut queue: VecDeque<Rational> = VecDeque::new();
    let seeds = f
        .breakpoints()
        .into_iter()
        .chain(extra.iter().flat_map(|e| e.endpoints().cloned()))
        .chain([Rational::zero()]);
    for x in seeds {
        if points.insert(x.clone()) {
            queue.push_back(x);
        }
    }
    while let Some(x) = queue.pop_front() {
        if let Some(y) = f.apply(&x) {
            if points.insert(y.clone()) {
                queue.push_back(y);
            }
        }
        if points.len() > MAX_ORBIT_POINTS {
            return Err(Error::BudgetExceeded(format!(
                "more than {MAX_ORBIT_POINTS} orbit points"
            )));
        }
    }
    points.insert(Rational::one());
    let pts: Vec<Rational> = points.into_iter().collect();
    let cells: Vec<(Rational, Rational)> = pts.windows(2).map(|w| (w[0].clone(), w[1].clone())).collect();
    let perm = cells
        .iter()
        .map(|(lo, _)| {
            let y = f.apply(lo).expect("cell start lies in [0,1)");
            cells.partition_point(|(l, _)| *l < y)
        })
        .collect();
    Ok((cells, perm))
}

fn orbits(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            orbit.push(i);
            i = perm[i];
        }
        out.push(orbit);
    }
    out
}

fn periodic_iet(t: &Transformation, n: usize) -> Result<FiniteIET> {
    let f = t
        .as_iet()
        .ok_or_else(|| Error::Irreducible("the map does not reduce to a finite IET".into()))?;
    if !f.power(n as i64 + 1).is_identity() {
        return Err(Error::Precondition(format!("τ^{} is not the identity", n + 1)));
    }
    let mut g = f.clone();
    for j in 1..=n {
        if !g.fixed_set().is_empty() {
            return Err(Error::Precondition(format!("τ^{j} fixes a set of positive measure")));
        }
        g = g.compose(&f);
    }
    Ok(f)
}

/// `A` with `A, τA, …, τ^n A` a partition, for `τ^{n+1} = id` without shorter periods.
pub fn partition_for_periodic(t: &Transformation, n: usize) -> Result<Event> {
    let f = periodic_iet(t, n)?;
    let (cells, perm) = orbit_cells(&f, &[])?;
    let reps = orbits(&perm).into_iter().map(|o| cells[o[0]].clone());
    Ok(Event::Interval(IntervalEvent::normalize(reps)?))
}

/// As [`partition_for_periodic`], with `A` independent of the algebra generated by
/// the orbits of `params`: every elementary cell orbit `I, τI, …, τ^n I` contributes
/// `τ^k` of the `k`-th of `n + 1` equal slices of `I`, so `A` holds the fraction
/// `1/(n+1)` of each cell.
pub fn independent_periodic_partition(t: &Transformation, n: usize, params: &[Event]) -> Result<Event> {
    if params.is_empty() {
        return partition_for_periodic(t, n);
    }
    let f = periodic_iet(t, n)?;
    let extra: Vec<&IntervalEvent> = params
        .iter()
        .map(|b| {
            b.as_interval()
                .ok_or_else(|| Error::Precondition("parameters must be interval events".into()))
        })
        .collect::<Result<_>>()?;
    let (cells, perm) = orbit_cells(&f, &extra)?;
    let slices = Rational::from_integer(n as i64 + 1);
    let mut out = Vec::new();
    for orbit in orbits(&perm) {
        let (lo, hi) = &cells[orbit[0]];
        let width = (hi - lo) / &slices;
        for (k, &cell) in orbit.iter().enumerate() {
            let shift = &cells[cell].0 - lo;
            let start = lo + &(&width * &Rational::from_integer(k as i64)) + &shift;
            let end = &start + &width;
            out.push((start, end));
        }
    }
    Ok(Event::Interval(IntervalEvent::normalize(out)?))
}

/// Sets of exact period `i`, and the remainder where no finite period occurs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub periodic_parts: BTreeMap<u64, Event>,
    pub aperiodic_part: Event,
}

/// Splits the space by exact period: `z_i = Fix(τ^i) ∖ ⋃_{j<i} z_j`.
pub fn periodic_decomposition(t: &Transformation) -> Result<Decomposition> {
    let carrier = t.carrier()?;
    if let Some(f) = t.as_iet() {
        return iet_decomposition(&f);
    }
    if let Some(k) = t.shift_power() {
        let mut parts = BTreeMap::new();
        if k == 0 {
            parts.insert(1, Event::full(&carrier));
            return Ok(Decomposition {
                periodic_parts: parts,
                aperiodic_part: Event::empty(&carrier),
            });
        }
        return Ok(Decomposition {
            periodic_parts: parts,
            aperiodic_part: Event::full(&carrier),
        });
    }
    if let Some((a, b)) = t.as_product() {
        if !t.is_certified_aperiodic() {
            let (da, db) = (periodic_decomposition(&a)?, periodic_decomposition(&b)?);
            return product_decomposition(&da, &db);
        }
    }
    if t.is_certified_aperiodic() {
        return Ok(Decomposition {
            periodic_parts: BTreeMap::new(),
            aperiodic_part: Event::full(&carrier),
        });
    }
    Err(Error::Irreducible(
        "decomposition needs an IET-reducible or certified-aperiodic map".into(),
    ))
}

fn iet_decomposition(f: &FiniteIET) -> Result<Decomposition> {
    let mut parts = BTreeMap::new();
    let mut covered = IntervalEvent::empty();
    let mut power = f.clone();
    for i in 1..=MAX_ORBIT_POINTS as u64 {
        let fixed = power.fixed_set().difference(&covered);
        if !fixed.is_empty() {
            covered = covered.union(&fixed);
            parts.insert(i, Event::Interval(fixed));
            if covered.measure().is_one() {
                return Ok(Decomposition {
                    periodic_parts: parts,
                    aperiodic_part: Event::Interval(IntervalEvent::empty()),
                });
            }
        }
        power = power.compose(f);
    }
    Err(Error::BudgetExceeded(format!(
        "periods beyond {MAX_ORBIT_POINTS} not searched"
    )))
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A point of period `i` times one of period `j` has period `lcm(i, j)`.
fn product_decomposition(a: &Decomposition, b: &Decomposition) -> Result<Decomposition> {
    let mut parts: BTreeMap<u64, Vec<Event>> = BTreeMap::new();
    for (i, za) in &a.periodic_parts {
        for (j, zb) in &b.periodic_parts {
            let lcm = i / gcd(*i, *j) * j;
            parts
                .entry(lcm)
                .or_default()
                .push(Event::Rect(RectEvent::rectangle(za.clone(), zb.clone())?));
        }
    }
    let left = a.aperiodic_part.carrier();
    let right = b.aperiodic_part.carrier();
    let carrier = crate::measure::Carrier::product(left.clone(), right.clone())?;
    let aperiodic = Event::union_all(
        &carrier,
        &[
            Event::Rect(RectEvent::rectangle(a.aperiodic_part.clone(), Event::full(&right))?),
            Event::Rect(RectEvent::rectangle(Event::full(&left), b.aperiodic_part.clone())?),
        ],
    )?;
    let periodic_parts = parts
        .into_iter()
        .map(|(k, v)| Ok((k, Event::union_all(&carrier, &v)?)))
        .collect::<Result<_>>()?;
    Ok(Decomposition {
        periodic_parts,
        aperiodic_part: aperiodic,
    })
}

/// A finite measure-preserving permutation of weighted atoms, summarised by its
/// cycles: `(atom weight, cycle length)`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomicPart {
    cycles: Vec<(Rational, usize)>,
}

impl AtomicPart {
    pub fn new(weights: &[Rational], perm: &[usize]) -> Result<Self> {
        if weights.len() != perm.len() {
            return Err(Error::LengthMismatch(weights.len(), perm.len()));
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Precondition(format!("{perm:?} is not a permutation")));
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::Precondition(format!("atom weight {w} must be positive")));
        }
        let mut cycles = Vec::new();
        for orbit in orbits(perm) {
            let w = &weights[orbit[0]];
            if orbit.iter().any(|&i| weights[i] != *w) {
                return Err(Error::Precondition(
                    "the permutation moves atoms between different weights".into(),
                ));
            }
            cycles.push((w.clone(), orbit.len()));
        }
        cycles.sort();
        Ok(AtomicPart { cycles })
    }

    pub fn cycles(&self) -> &[(Rational, usize)] {
        &self.cycles
    }

    /// Isomorphic parts have the same multiset of weighted cycles.
    pub fn is_isomorphic(&self, other: &AtomicPart) -> bool {
        self.cycles == other.cycles
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    fn iv(a: i64, b: i64, c: i64, d: i64) -> Event {
        Event::interval(q!(a, b), q!(c, d)).unwrap()
    }

    fn glued_swap() -> Transformation {
        Transformation::Iet(
            FiniteIET::new([
                ((q!(0), q!(1, 3)), q!(0)),
                ((q!(1, 3), q!(2, 3)), q!(1, 3)),
                ((q!(2, 3), q!(1)), q!(-1, 3)),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn rotation_partition() {
        let rot = Transformation::rotation(&q!(1, 3)).unwrap();
        assert_eq!(partition_for_periodic(&rot, 2).unwrap(), iv(0, 1, 1, 3));
        assert!(matches!(partition_for_periodic(&rot, 1), Err(Error::Precondition(_))));
        assert!(matches!(
            partition_for_periodic(&Transformation::odometer(2).unwrap(), 1),
            Err(Error::Irreducible(_))
        ));
    }

    #[test]
    fn independent_partition_of_swap() {
        let swap = Transformation::rotation(&q!(1, 2)).unwrap();
        let a = independent_periodic_partition(&swap, 1, &[iv(0, 1, 1, 2)]).unwrap();
        assert_eq!(a, Event::intervals([(q!(0), q!(1, 4)), (q!(3, 4), q!(1))]).unwrap());
        let image = swap.map_event(&a, crate::transform::Direction::Forward).unwrap();
        assert_eq!(image, a.complement());
    }

    #[test]
    fn decomposition_examples() {
        let d = periodic_decomposition(&glued_swap()).unwrap();
        assert_eq!(d.periodic_parts[&1], iv(0, 1, 1, 3));
        assert_eq!(d.periodic_parts[&2], iv(1, 3, 1, 1));
        assert!(d.aperiodic_part.is_empty());
        let d = periodic_decomposition(&Transformation::odometer(2).unwrap()).unwrap();
        assert!(d.periodic_parts.is_empty());
        assert_eq!(d.aperiodic_part, iv(0, 1, 1, 1));
    }

    #[test]
    fn product_decomposition_uses_lcm() {
        let prod = Transformation::product(glued_swap(), Transformation::rotation(&q!(1, 3)).unwrap()).unwrap();
        let d = periodic_decomposition(&prod).unwrap();
        assert_eq!(d.periodic_parts.keys().copied().collect::<Vec<_>>(), vec![3, 6]);
        assert_eq!(d.periodic_parts[&3].measure(), q!(1, 3));
        assert!(d.aperiodic_part.is_empty());
    }

    #[test]
    fn atomic_parts() {
        let a = AtomicPart::new(&[q!(1, 4), q!(1, 4), q!(1, 2)], &[1, 0, 2]).unwrap();
        let b = AtomicPart::new(&[q!(1, 2), q!(1, 4), q!(1, 4)], &[0, 2, 1]).unwrap();
        assert!(a.is_isomorphic(&b));
        let c = AtomicPart::new(&[q!(1, 4), q!(1, 4), q!(1, 2)], &[0, 1, 2]).unwrap();
        assert!(!a.is_isomorphic(&c));
        assert!(AtomicPart::new(&[q!(1, 4), q!(3, 4)], &[1, 0]).is_err());
    }
}
