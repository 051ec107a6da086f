//! Conditional probabilities over finite algebras, types and their distance,
//! independence, canonical bases and grid approximants.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{Carrier, Event, FiniteAlgebra, IntervalEvent};
use crate::rational::Rational;
use crate::transform::{Direction, System, Transformation};

/// Largest tuple handled by sign-pattern enumeration.
pub const MAX_TUPLE: usize = 12;

/// One rational value per atom of a finite algebra.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct StepFunction {
    algebra: FiniteAlgebra,
    values: Vec<Rational>,
}

impl StepFunction {
    pub fn new(algebra: FiniteAlgebra, values: Vec<Rational>) -> Result<Self> {
        if values.len() != algebra.len() {
            return Err(Error::LengthMismatch(algebra.len(), values.len()));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative() || **v > Rational::one()) {
            return Err(Error::Precondition(format!("value {v} outside [0, 1]")));
        }
        Ok(StepFunction { algebra, values })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `∫_{∪ atoms} g dP`.
    pub fn integrate(&self, atoms: &[usize]) -> Rational {
        atoms
            .iter()
            .map(|&i| &self.values[i] * &self.algebra.atoms()[i].measure())
            .sum()
    }

    /// The same function on a finer algebra.
    pub fn refine_to(&self, finer: &FiniteAlgebra) -> Result<StepFunction> {
        let owner = owners(finer, &self.algebra)?;
        Ok(StepFunction {
            algebra: finer.clone(),
            values: owner.iter().map(|&i| self.values[i].clone()).collect(),
        })
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }
}

/// For each atom of `finer`, the index of the atom of `coarse` containing it.
fn owners(finer: &FiniteAlgebra, coarse: &FiniteAlgebra) -> Result<Vec<usize>> {
    finer.carrier().expect(coarse.carrier())?;
    let mut out = Vec::with_capacity(finer.len());
    for f in finer.atoms() {
        let mut found = None;
        for (i, c) in coarse.atoms().iter().enumerate() {
            if c.contains(f)? {
                found = Some(i);
                break;
            }
        }
        out.push(found.ok_or_else(|| {
            Error::Precondition(format!("atom {f} is not inside a single coarser atom"))
        })?);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepDesc {
    atoms: Vec<Event>,
    values: Vec<Rational>,
}

impl Serialize for StepFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StepDesc {
            atoms: self.algebra.atoms().to_vec(),
            values: self.values.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for StepFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = StepDesc::deserialize(d)?;
        // Atoms are re-sorted; carry the values along.
        let mut pairs: Vec<(Event, Rational)> = desc.atoms.into_iter().zip(desc.values).collect();
        pairs.sort();
        let (atoms, values): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let alg = FiniteAlgebra::new(atoms).map_err(serde::de::Error::custom)?;
        StepFunction::new(alg, values).map_err(serde::de::Error::custom)
    }
}

/// `P(a | C)`.
pub fn conditional_probability(a: &Event, c: &FiniteAlgebra) -> Result<StepFunction> {
    c.carrier().expect(&a.carrier())?;
    let values = c
        .atoms()
        .iter()
        .map(|atom| Ok(atom.intersection(a)?.measure() / atom.measure()))
        .collect::<Result<Vec<_>>>()?;
    Ok(StepFunction {
        algebra: c.clone(),
        values,
    })
}

/// Sign strings `+`/`-` of length `n` in lexicographic order (`+` first).
pub fn sign_patterns(n: usize) -> Vec<String> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> (n - 1 - i) & 1 == 0 { '+' } else { '-' })
                .collect()
        })
        .collect()
}

/// `a_1^{s_1} ∧ … ∧ a_n^{s_n}` for a sign string.
pub fn combination(tuple: &[Event], signs: &str, carrier: &Carrier) -> Result<Event> {
    let mut acc = Event::full(carrier);
    for (e, s) in tuple.iter().zip(signs.chars()) {
        acc = match s {
            '+' => acc.intersection(e)?,
            '-' => acc.difference(e)?,
            other => return Err(Error::Parse(format!("sign {other:?}"))),
        };
    }
    Ok(acc)
}

fn check_tuple(tuple: &[Event], carrier: &Carrier) -> Result<()> {
    if tuple.len() > MAX_TUPLE {
        return Err(Error::Precondition(format!(
            "tuple of length {} exceeds {MAX_TUPLE}",
            tuple.len()
        )));
    }
    for e in tuple {
        carrier.expect(&e.carrier())?;
    }
    Ok(())
}

/// The conditional probabilities of every sign combination of `tuple` over `c`.
pub type TypeDatum = BTreeMap<String, StepFunction>;

pub fn type_datum(tuple: &[Event], c: &FiniteAlgebra) -> Result<TypeDatum> {
    check_tuple(tuple, c.carrier())?;
    sign_patterns(tuple.len())
        .into_iter()
        .map(|s| {
            let e = combination(tuple, &s, c.carrier())?;
            Ok((s, conditional_probability(&e, c)?))
        })
        .collect()
}

pub fn types_equal(a: &[Event], b: &[Event], c: &FiniteAlgebra) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    Ok(type_datum(a, c)? == type_datum(b, c)?)
}

/// Checks that the events are pairwise disjoint and cover the space.
pub fn check_partition(parts: &[Event], carrier: &Carrier) -> Result<()> {
    let mut seen = Event::empty(carrier);
    for p in parts {
        carrier.expect(&p.carrier())?;
        if seen.intersects(p)? {
            return Err(Error::NotPartition(format!("{p} overlaps an earlier part")));
        }
        seen = seen.union(p)?;
    }
    if !seen.measure().is_one() {
        return Err(Error::NotPartition(format!("parts cover measure {}", seen.measure())));
    }
    Ok(())
}

/// `max_i ‖P(a_i | C) − P(b_i | C)‖₁`, for partitions `a` and `b`.
pub fn type_distance(a: &[Event], b: &[Event], c: &FiniteAlgebra) -> Result<Rational> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    check_partition(a, c.carrier())?;
    check_partition(b, c.carrier())?;
    let mut best = Rational::zero();
    for (x, y) in a.iter().zip(b) {
        let (px, py) = (conditional_probability(x, c)?, conditional_probability(y, c)?);
        let norm: Rational = px
            .values
            .iter()
            .zip(&py.values)
            .zip(c.atoms())
            .map(|((u, v), atom)| (u - v).abs() * atom.measure())
            .sum();
        best = best.max(norm);
    }
    Ok(best)
}

/// Rearranged partitions realizing the distance over the trivial algebra.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Realization {
    pub left: Vec<Event>,
    pub right: Vec<Event>,
    pub distance: Rational,
}

/// Lays `a` out as consecutive intervals in index order and places `b′ ≡ b` so that
/// each `b′_i` overlaps `a′_i` as much as possible.
pub fn realize_distance(a: &[Event], b: &[Event]) -> Result<Realization> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    check_partition(a, &Carrier::Interval)?;
    check_partition(b, &Carrier::Interval)?;
    let alpha: Vec<Rational> = a.iter().map(Event::measure).collect();
    let beta: Vec<Rational> = b.iter().map(Event::measure).collect();
    let mut left = Vec::with_capacity(a.len());
    let mut cores = Vec::with_capacity(a.len());
    let mut cursor = Rational::zero();
    for (x, y) in alpha.iter().zip(&beta) {
        let end = &cursor + x;
        let piece = IntervalEvent::from_valid(vec![(cursor.clone(), end.clone())]);
        cores.push(piece.leftmost(&x.clone().min(y.clone())));
        left.push(piece);
        cursor = end;
    }
    let used = cores
        .iter()
        .fold(IntervalEvent::empty(), |acc, c| acc.union(c));
    let pool = used.complement();
    let extras: Vec<Rational> = alpha
        .iter()
        .zip(&beta)
        .map(|(x, y)| if y > x { y - x } else { Rational::zero() })
        .collect();
    let extra_parts = pool.split_measures(&extras);
    let right: Vec<Event> = cores
        .into_iter()
        .zip(extra_parts)
        .map(|(c, e)| Event::Interval(c.union(&e)))
        .collect();
    let left: Vec<Event> = left.into_iter().map(Event::Interval).collect();
    let mut distance = Rational::zero();
    for (x, y) in left.iter().zip(&right) {
        distance = distance.max(x.rho(y)?);
    }
    Ok(Realization {
        left,
        right,
        distance,
    })
}

/// Whether `P(∧ a^{±} | C ∨ B) = P(∧ a^{±} | C)` for every sign pattern.
pub fn is_independent(tuple: &[Event], c: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<bool> {
    let joined = c.join(b)?;
    let owner = owners(&joined, c)?;
    for s in sign_patterns(tuple.len()) {
        let e = combination(tuple, &s, c.carrier())?;
        let over_c = conditional_probability(&e, c)?;
        let over_j = conditional_probability(&e, &joined)?;
        if over_j.values.iter().zip(&owner).any(|(v, &i)| *v != over_c.values[i]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The algebra generated by the level sets of the type datum: atoms of `c` with equal
/// value vectors are merged.
pub fn canonical_base(tuple: &[Event], c: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let datum = type_datum(tuple, c)?;
    let mut groups: BTreeMap<Vec<&Rational>, Vec<usize>> = BTreeMap::new();
    for i in 0..c.len() {
        let key: Vec<&Rational> = datum.values().map(|f| &f.values[i]).collect();
        groups.entry(key).or_default().push(i);
    }
    let atoms = groups.values().map(|idx| c.union_of(idx)).collect();
    FiniteAlgebra::new(atoms)
}

/// Whether `a` is a union of atoms of `c`.
pub fn dcl_membership(a: &Event, c: &FiniteAlgebra) -> Result<bool> {
    Ok(c.decompose(a)?.is_some())
}

/// Output of [`approximate_m_step`].
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct MStepApprox {
    pub event: Event,
    /// Exact `ρ(a, a′)`.
    pub bound: Rational,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct MStepOptions {
    /// Adjust the last atom so that `m(a′) = m(a)`.
    pub preserve_total: bool,
}

fn grid_denominator(grid: &Rational) -> Result<BigInt> {
    if !grid.is_positive() || !grid.numer().is_one() {
        return Err(Error::InvalidGrid(Box::new(grid.clone())));
    }
    Ok(grid.denom().clone())
}

/// Every atom of `c` must map into the span of `c`.
fn check_compatible(map: &Transformation, c: &FiniteAlgebra) -> Result<()> {
    for atom in c.atoms() {
        let image = map.map_event(atom, Direction::Forward)?;
        if c.decompose(&image)?.is_none() {
            return Err(Error::NotCompatible(format!(
                "image of atom {atom} is not a union of atoms"
            )));
        }
    }
    Ok(())
}

/// Nearest multiple of `1/q`, ties towards the smaller value.
fn round_to_grid(v: &Rational, q: &BigInt) -> Rational {
    let scaled = v * &Rational::from_integer(q.clone());
    let down = scaled.floor();
    let frac = &scaled - &Rational::from_integer(down.clone());
    let k = if frac > Rational::frac(1, 2) { down + 1 } else { down };
    Rational::new(k, q.clone()).expect("positive grid")
}

/// An event `a′` close to `a` whose `m`-step Boolean combinations have conditional
/// probabilities over `c` on the grid `1/q`.
///
/// For `m = 0` each atom is rounded to the nearest grid value by adding or removing
/// leftmost mass. For `m ≥ 1` the event is rebuilt from a cell partition that the map
/// permutes and in which every atom of `c` consists of a divisor of `q` cells; this
/// exists for rational IETs and odometers when the atom sizes allow it.
pub fn approximate_m_step(
    a: &Event,
    system: &System,
    c: &FiniteAlgebra,
    m: u32,
    grid: &Rational,
    options: MStepOptions,
) -> Result<MStepApprox> {
    let q = grid_denominator(grid)?;
    system.carrier().expect(&a.carrier())?;
    system.carrier().expect(c.carrier())?;
    let Event::Interval(av) = a else {
        return Err(Error::Unattainable("grid approximation needs the interval carrier".into()));
    };
    check_compatible(system.map(), c)?;
    let event = if m == 0 {
        round_atoms(av, c, &q, options)?
    } else {
        let cells = invariant_cells(system.map(), c, &q)?;
        let mut pieces = Vec::new();
        for (lo, hi) in cells {
            let cell = IntervalEvent::from_valid(vec![(lo.clone(), hi.clone())]);
            let inside = cell.intersection(av).measure();
            if inside * Rational::from_integer(2) > &hi - &lo {
                pieces.push((lo, hi));
            }
        }
        IntervalEvent::from_valid(pieces)
    };
    let event = Event::Interval(event);
    let bound = a.rho(&event)?;
    Ok(MStepApprox { event, bound })
}

fn round_atoms(a: &IntervalEvent, c: &FiniteAlgebra, q: &BigInt, options: MStepOptions) -> Result<IntervalEvent> {
    let mut out = IntervalEvent::empty();
    let n = c.len();
    let mut placed = Rational::zero();
    let total = a.measure();
    for (i, atom) in c.atoms().iter().enumerate() {
        let atom = atom.as_interval().expect("interval carrier");
        let inside = atom.intersection(a);
        let mass = atom.measure();
        let value = inside.measure() / &mass;
        let target = if options.preserve_total && i + 1 == n {
            let t = (&total - &placed) / &mass;
            if t.is_negative() || t > Rational::one() {
                return Err(Error::Unattainable(format!(
                    "compensating value {t} on the last atom is outside [0, 1]"
                )));
            }
            t
        } else {
            round_to_grid(&value, q)
        };
        let part = if target <= value {
            inside.leftmost(&(&target * &mass))
        } else {
            let extra = atom.difference(a).leftmost(&((&target - &value) * &mass));
            inside.union(&extra)
        };
        placed += &target * &mass;
        out = out.union(&part);
    }
    Ok(out)
}

const MAX_CELLS: u64 = 1 << 16;

/// Endpoints of a cell partition permuted by `map`, in which every atom of `c` has a
/// number of cells dividing `q`.
fn invariant_cells(map: &Transformation, c: &FiniteAlgebra, q: &BigInt) -> Result<Vec<(Rational, Rational)>> {
    let atom_den = Rational::common_denominator(
        c.atoms()
            .iter()
            .flat_map(|e| e.as_interval().expect("interval carrier").endpoints()),
    );
    let sizes = |l: &BigInt| -> Vec<BigInt> {
        c.atoms()
            .iter()
            .map(|e| (e.measure() * Rational::from_integer(l.clone())).numer().clone())
            .collect()
    };
    let divides_q = |l: &BigInt| sizes(l).iter().all(|u| (q % u).is_zero());
    let count = if let Some(f) = map.as_iet() {
        let mut data: Vec<Rational> = f.breakpoints();
        data.extend(f.pieces().iter().map(|p| p.offset.clone()));
        let base = atom_den.lcm(&Rational::common_denominator(data.iter()));
        if !divides_q(&base) {
            return Err(Error::Unattainable(format!(
                "atoms of the {base}-cell partition do not have sizes dividing {q}"
            )));
        }
        let lcm = sizes(&base).iter().fold(BigInt::one(), |acc, u| acc.lcm(u));
        base * (q / lcm)
    } else if let Some(p) = base_odometer(map) {
        let pb = BigInt::from(p);
        let mut cells = pb.clone();
        while !(&cells % &atom_den).is_zero() {
            cells *= &pb;
            if cells > BigInt::from(MAX_CELLS) {
                return Err(Error::Unattainable("atoms are not p-adic intervals".into()));
            }
        }
        if !divides_q(&cells) {
            return Err(Error::Unattainable(format!(
                "atoms of the {cells}-cell partition do not have sizes dividing {q}"
            )));
        }
        while divides_q(&(&cells * &pb)) && &cells * &pb <= BigInt::from(MAX_CELLS) {
            cells *= &pb;
        }
        cells
    } else {
        return Err(Error::Unattainable(
            "no invariant cell partition known for this map".into(),
        ));
    };
    let n = count
        .to_u64()
        .filter(|&n| n <= MAX_CELLS)
        .ok_or_else(|| Error::BudgetExceeded(format!("{count} cells")))?;
    Ok((0..n)
        .map(|j| {
            (
                Rational::new(j, n).expect("n > 0"),
                Rational::new(j + 1, n).expect("n > 0"),
            )
        })
        .collect())
}

/// The odometer base when the map is an odometer or its inverse.
fn base_odometer(map: &Transformation) -> Option<u64> {
    match map {
        Transformation::Odometer { base } => Some(*base),
        Transformation::Inverse(t) => base_odometer(t),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;
    use crate::transform::odometer;

    fn iv(a: i64, b: i64, c: i64, d: i64) -> Event {
        Event::interval(q!(a, b), q!(c, d)).unwrap()
    }

    fn alg(cuts: &[(i64, i64)]) -> FiniteAlgebra {
        let mut pts = vec![q!(0)];
        pts.extend(cuts.iter().map(|&(a, b)| q!(a, b)));
        pts.push(q!(1));
        FiniteAlgebra::new(
            pts.windows(2)
                .map(|w| Event::interval(w[0].clone(), w[1].clone()).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn odometer_cells_permuted(p: u64, depth: u32) -> bool {
        let t = odometer::truncation(p, depth);
        let n = num_traits::pow(p, depth as usize) as i64;
        (0..n).all(|j| {
            let x = Rational::frac(j, n);
            let y = t.apply(&x).expect("in range");
            (&y * &Rational::from_integer(n)).denom().is_one()
        })
    }

    fn trivial() -> FiniteAlgebra {
        FiniteAlgebra::trivial(&Carrier::Interval)
    }

    #[test]
    fn conditional_examples() {
        let c = alg(&[(1, 4)]);
        let g = conditional_probability(&iv(0, 1, 1, 2), &c).unwrap();
        assert_eq!(g.values(), &[q!(1), q!(1, 3)]);
        assert_eq!(g.integrate(&[0, 1]), q!(1, 2));
        let all = conditional_probability(&iv(0, 1, 1, 1), &c).unwrap();
        assert!(all.values().iter().all(|v| v.is_one()));
        let t = conditional_probability(&iv(0, 1, 1, 2), &trivial()).unwrap();
        assert_eq!(t.values(), &[q!(1, 2)]);
    }

    #[test]
    fn types_examples() {
        assert!(types_equal(&[iv(0, 1, 1, 2)], &[iv(1, 4, 3, 4)], &trivial()).unwrap());
        let halves = alg(&[(1, 2)]);
        assert!(types_equal(&[iv(0, 1, 1, 2)], &[iv(0, 1, 1, 2)], &halves).unwrap());
        assert!(!types_equal(&[iv(0, 1, 1, 2)], &[iv(1, 4, 3, 4)], &halves).unwrap());
        assert!(types_equal(&[iv(0, 1, 1, 2)], &[], &halves).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = [iv(0, 1, 1, 2), iv(1, 2, 1, 1)];
        let b = [iv(0, 1, 1, 4), iv(1, 4, 1, 1)];
        assert_eq!(type_distance(&a, &b, &trivial()).unwrap(), q!(1, 4));
        assert_eq!(type_distance(&a, &a, &trivial()).unwrap(), q!(0));
        let e = Event::empty(&Carrier::Interval);
        let x = Event::full(&Carrier::Interval);
        assert_eq!(
            type_distance(&[x.clone(), e.clone()], &[e, x], &trivial()).unwrap(),
            q!(1)
        );
        assert!(type_distance(&[iv(0, 1, 1, 2)], &[iv(0, 1, 1, 1)], &trivial()).is_err());
    }

    #[test]
    fn realize_example() {
        let a = [iv(1, 2, 1, 1), iv(0, 1, 1, 2)];
        let b = [iv(3, 4, 1, 1), iv(0, 1, 3, 4)];
        let r = realize_distance(&a, &b).unwrap();
        assert_eq!(r.left, vec![iv(0, 1, 1, 2), iv(1, 2, 1, 1)]);
        assert_eq!(r.right, vec![iv(0, 1, 1, 4), iv(1, 4, 1, 1)]);
        assert_eq!(r.distance, q!(1, 4));
        assert!(types_equal(&r.right, &b, &trivial()).unwrap());
    }

    #[test]
    fn independence_examples() {
        let a = [iv(0, 1, 1, 2)];
        assert!(is_independent(&a, &trivial(), &FiniteAlgebra::generated(&Carrier::Interval, &[iv(1, 4, 3, 4)]).unwrap()).unwrap());
        assert!(!is_independent(&a, &trivial(), &alg(&[(1, 2)])).unwrap());
    }

    #[test]
    fn canonical_base_examples() {
        let quarters = alg(&[(1, 4), (1, 2), (3, 4)]);
        let cb = canonical_base(&[iv(0, 1, 1, 2)], &quarters).unwrap();
        assert_eq!(cb, alg(&[(1, 2)]));
        let halves = alg(&[(1, 2)]);
        let cb = canonical_base(&[iv(0, 1, 1, 4)], &halves).unwrap();
        assert_eq!(cb, halves);
        let indep = canonical_base(&[iv(1, 4, 3, 4)], &halves).unwrap();
        assert!(indep.is_trivial());
    }

    #[test]
    fn dcl_examples() {
        let quarters = alg(&[(1, 4), (1, 2), (3, 4)]);
        assert!(dcl_membership(&iv(0, 1, 1, 4), &quarters).unwrap());
        assert!(!dcl_membership(&iv(0, 1, 1, 3), &alg(&[(1, 2)])).unwrap());
        assert!(dcl_membership(&Event::empty(&Carrier::Interval), &quarters).unwrap());
    }

    #[test]
    fn m_step_examples() {
        let sys = System::new(Transformation::odometer(2).unwrap()).unwrap();
        let a = iv(0, 1, 1, 3);
        let r = approximate_m_step(&a, &sys, &trivial(), 0, &q!(1, 4), MStepOptions::default()).unwrap();
        assert_eq!(r.event, iv(0, 1, 1, 4));
        assert_eq!(r.bound, q!(1, 12));
        let r = approximate_m_step(&a, &sys, &trivial(), 0, &q!(1, 6), MStepOptions::default()).unwrap();
        assert_eq!(r.event, a);
        assert_eq!(r.bound, q!(0));
        assert!(matches!(
            approximate_m_step(&a, &sys, &trivial(), 0, &q!(2, 5), MStepOptions::default()),
            Err(Error::InvalidGrid(_))
        ));
        assert!(matches!(
            approximate_m_step(&a, &sys, &alg(&[(1, 3)]), 0, &q!(1, 4), MStepOptions::default()),
            Err(Error::NotCompatible(_))
        ));
    }

    #[test]
    fn m_step_with_cells() {
        let sys = System::new(Transformation::odometer(2).unwrap()).unwrap();
        let a = iv(0, 1, 1, 3);
        let r = approximate_m_step(&a, &sys, &trivial(), 2, &q!(1, 8), MStepOptions::default()).unwrap();
        let ev = r.event.clone();
        let mut gens = vec![ev.clone()];
        for i in 1..=2 {
            gens.push(sys.map().iterate_image(i, &ev).unwrap());
        }
        for s in sign_patterns(3) {
            let comb = combination(&gens, &s, &Carrier::Interval).unwrap();
            let v = comb.measure() * q!(8);
            assert!(v.denom().is_one(), "{s}: {}", comb.measure());
        }
        assert!(r.bound <= q!(1, 8));
        assert!(odometer_cells_permuted(3, 2));
    }
}
