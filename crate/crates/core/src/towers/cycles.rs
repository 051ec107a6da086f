//! Cycles of period `N` close to an aperiodic interval map, and conjugations
//! between cycles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{depth_at_least, exact_power, expect_interval};
use crate::error::{Error, Result};
use crate::measure::{Event, IntervalEvent};
use crate::rational::Rational;
use crate::transform::iet::{compose_pieces, match_mass, restrict_pieces};
use crate::transform::{odometer, rho_maps, Enclosure, FiniteIET, Piece, System, Transformation};

/// An IET `η` with `η^period = id` and a base whose first `period` images
/// partition `[0, 1)`. Approximations also carry `ρ(τ, η)` and the bound it meets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub cycle: FiniteIET,
    pub period: usize,
    pub base: Event,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<Enclosure>,
}

impl CycleCertificate {
    /// Checks the cycle and base.
    pub fn new(cycle: FiniteIET, period: usize, base: Event) -> Result<Self> {
        let cert = CycleCertificate {
            cycle,
            period,
            base,
            bound: None,
            rho: None,
        };
        cert.validate()?;
        Ok(cert)
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::Precondition("cycle period must be positive".into()));
        }
        let base = self.interval_base()?;
        if !self.cycle.power(self.period as i64).is_identity() {
            return Err(Error::Precondition(format!(
                "the cycle to the power {} is not the identity",
                self.period
            )));
        }
        if base.measure() * Rational::from_integer(self.period as i64) != Rational::one() {
            return Err(Error::NotPartition(format!(
                "base of measure {} cannot have {} disjoint images covering [0,1)",
                base.measure(),
                self.period
            )));
        }
        let mut level = base.clone();
        for d in 1..self.period {
            level = self.cycle.map_event(&level);
            if !base.intersection(&level).is_empty() {
                return Err(Error::NotPartition(format!("base meets its image {d}")));
            }
        }
        Ok(())
    }

    fn interval_base(&self) -> Result<&IntervalEvent> {
        self.base
            .as_interval()
            .ok_or_else(|| Error::Precondition("cycle bases live on the interval carrier".into()))
    }

    /// `η^i(base)` for `i < period`.
    pub fn levels(&self) -> Result<Vec<IntervalEvent>> {
        let mut out = vec![self.interval_base()?.clone()];
        for _ in 1..self.period {
            let next = self.cycle.map_event(out.last().expect("nonempty"));
            out.push(next);
        }
        Ok(out)
    }
}

/// A cycle of period `n` within `ρ ≤ 2/n` of the map.
pub fn cycle_approximation(system: &System, n: usize) -> Result<CycleCertificate> {
    if n < 2 {
        return Err(Error::Precondition(format!("cycle period {n} must be at least 2")));
    }
    expect_interval(system.carrier(), "a cycle approximation")?;
    let (cycle, base) = cycle_for(system.map(), n)?;
    let mut cert = CycleCertificate::new(cycle, n, Event::Interval(base))?;
    let bound = Rational::frac(2, n as i64);
    let gap = Rational::frac(1, 4 * n as i64);
    let rho = rho_maps(system.map(), &Transformation::Iet(cert.cycle.clone()), &gap)?;
    if rho.hi > bound {
        return Err(Error::BudgetExceeded(format!(
            "cycle of period {n} is only certified within {}",
            rho.hi
        )));
    }
    cert.bound = Some(bound);
    cert.rho = Some(rho);
    Ok(cert)
}

fn cycle_for(map: &Transformation, n: usize) -> Result<(FiniteIET, IntervalEvent)> {
    match map {
        Transformation::Odometer { base } => odometer_cycle(*base, n),
        // The same base works for η⁻¹: η^{−i} B = η^{n−i} B.
        Transformation::Inverse(t) => {
            let (c, b) = cycle_for(t, n)?;
            Ok((c.inverse(), b))
        }
        Transformation::Conjugate { inner, by } => {
            let g = by
                .as_iet()
                .ok_or_else(|| Error::Irreducible("conjugating map is not an IET".into()))?;
            let (c, b) = cycle_for(inner, n)?;
            Ok((g.inverse().compose(&c).compose(&g), g.preimage(&b)))
        }
        _ if map.as_iet().is_some() => Err(Error::PeriodicPart(
            "an interval exchange with rational data is periodic".into(),
        )),
        _ => Err(Error::Irreducible("no cycle construction for this map".into())),
    }
}

/// For `n = p^k` the truncation itself. Otherwise the `H = p^K ≥ n²` levels over
/// `[0, p^{−K})` are grouped in blocks of `n`, each closed into a cycle, and the
/// fewer than `n` leftover levels are cut into `n` equal parts rotated among
/// themselves. The cycle differs from the odometer on the block tops and the
/// leftover part, `ρ ≤ 1/n + n/H ≤ 2/n`.
fn odometer_cycle(p: u64, n: usize) -> Result<(FiniteIET, IntervalEvent)> {
    let nn = n as u64;
    if let Some(k) = exact_power(p, nn) {
        let base = IntervalEvent::interval(Rational::zero(), Rational::inv_power(p, k))?;
        return Ok((odometer::truncation(p, k), base));
    }
    let k = depth_at_least(p, nn.saturating_mul(nn))?;
    let height = p.pow(k);
    let blocks = height / nn;
    let cell = |m: u64| odometer::cell(p, k, m);
    let mut pieces = Vec::with_capacity(height as usize + 2 * n);
    let mut base = Vec::with_capacity(blocks as usize + 1);
    for j in 0..blocks {
        let first = cell(j * nn);
        for t in 0..nn {
            let m = j * nn + t;
            let (lo, hi) = cell(m);
            let target = if t + 1 < nn { cell(m + 1).0 } else { first.0.clone() };
            pieces.push(Piece {
                offset: target - &lo,
                lo,
                hi,
            });
        }
        base.push(first);
    }
    let rest = IntervalEvent::normalize((blocks * nn..height).map(cell))?;
    if !rest.is_empty() {
        let share = rest.measure() / Rational::from_integer(nn as i64);
        let parts = rest.split_measures(&vec![share; n]);
        for i in 0..n {
            pieces.extend(match_mass(&parts[i], &parts[(i + 1) % n]));
        }
        base.extend(parts[0].intervals().iter().cloned());
    }
    Ok((FiniteIET::from_pieces(pieces)?, IntervalEvent::normalize(base)?))
}

/// Sign pattern of a point: for each `i < period` and each parameter `j`, whether
/// the point lies in `η^i(b_j)`. Index `i * width + j`.
type Label = Vec<bool>;

/// Atoms of the algebra generated by the orbit of the parameters, by label.
fn labelled_atoms(levels_of: &[Vec<IntervalEvent>]) -> BTreeMap<Label, IntervalEvent> {
    let period = levels_of.first().map_or(0, Vec::len);
    let mut atoms: Vec<(Label, IntervalEvent)> = vec![(Vec::new(), IntervalEvent::full())];
    for i in 0..period {
        for images in levels_of {
            let set = &images[i];
            let mut next = Vec::with_capacity(atoms.len() * 2);
            for (label, atom) in atoms {
                let inside = atom.intersection(set);
                let outside = atom.difference(set);
                if !inside.is_empty() {
                    let mut l = label.clone();
                    l.push(true);
                    next.push((l, inside));
                }
                if !outside.is_empty() {
                    let mut l = label;
                    l.push(false);
                    next.push((l, outside));
                }
            }
            atoms = next;
        }
    }
    atoms.into_iter().collect()
}

/// The label of `η(x)` given the label of `x`.
fn rotate(label: &[bool], width: usize) -> Label {
    let n = label.len();
    (0..n).map(|idx| label[(idx + n - width) % n]).collect()
}

fn describe(label: &[bool], width: usize) -> String {
    label
        .iter()
        .enumerate()
        .map(|(idx, &inside)| {
            let (i, j) = (idx / width, idx % width + 1);
            let term = match i {
                0 => format!("b{j}"),
                1 => format!("η(b{j})"),
                _ => format!("η^{i}(b{j})"),
            };
            if inside {
                term
            } else {
                format!("¬{term}")
            }
        })
        .collect::<Vec<_>>()
        .join(" ∧ ")
}

fn images(cert: &CycleCertificate, params: &[Event]) -> Result<Vec<Vec<IntervalEvent>>> {
    params
        .iter()
        .map(|b| {
            let mut cur = b
                .as_interval()
                .ok_or_else(|| Error::Precondition("parameters must be interval events".into()))?
                .clone();
            let mut out = Vec::with_capacity(cert.period);
            for _ in 0..cert.period {
                let next = cert.cycle.map_event(&cur);
                out.push(cur);
                cur = next;
            }
            Ok(out)
        })
        .collect()
}

/// `γ` with `γ ∘ η₁ = η₂ ∘ γ` and `γ(b_j) = d_j`, provided the two parameter tuples
/// have the same measures on every Boolean combination of their orbits.
pub fn conjugacy_with_parameters(
    first: &CycleCertificate,
    second: &CycleCertificate,
    b: &[Event],
    d: &[Event],
) -> Result<FiniteIET> {
    first.validate()?;
    second.validate()?;
    if first.period != second.period {
        return Err(Error::PeriodMismatch(first.period, second.period));
    }
    if b.len() != d.len() {
        return Err(Error::LengthMismatch(b.len(), d.len()));
    }
    let period = first.period;
    let width = b.len();
    let atoms1 = labelled_atoms(&images(first, b)?);
    let atoms2 = labelled_atoms(&images(second, d)?);
    let mut labels: Vec<&Label> = atoms1.keys().chain(atoms2.keys()).collect();
    labels.sort();
    labels.dedup();
    for label in labels {
        let m1 = atoms1.get(label).map_or_else(Rational::zero, IntervalEvent::measure);
        let m2 = atoms2.get(label).map_or_else(Rational::zero, IntervalEvent::measure);
        if m1 != m2 {
            return Err(Error::QfTypeMismatch {
                combination: describe(label, width),
                left: Box::new(m1),
                right: Box::new(m2),
            });
        }
    }
    let levels1 = first.levels()?;
    let levels2 = second.levels()?;
    let inv1 = first.cycle.inverse();
    let mut pieces = Vec::new();
    for label in atoms1.keys() {
        // One representative label per rotation class; the class has `shift` labels.
        let mut shift = 1;
        let mut rot = rotate(label, width);
        let mut is_least = true;
        while rot != *label {
            if rot < *label {
                is_least = false;
                break;
            }
            rot = rotate(&rot, width);
            shift += 1;
        }
        if !is_least {
            continue;
        }
        // Points with this label that come first in their orbit, counted from the
        // base; their first `period` images cover the whole class exactly once.
        let first_of = |atom: &IntervalEvent, levels: &[IntervalEvent]| {
            levels[..shift]
                .iter()
                .fold(IntervalEvent::empty(), |acc, l| acc.union(&atom.intersection(l)))
        };
        let start1 = first_of(&atoms1[label], &levels1);
        let start2 = first_of(&atoms2[label], &levels2);
        let mut step = match_mass(&start1, &start2);
        let mut source = start1;
        for i in 0..period {
            pieces.extend(step.iter().cloned());
            if i + 1 == period {
                break;
            }
            let next = first.cycle.map_event(&source);
            let back = restrict_pieces(inv1.pieces(), &next);
            step = compose_pieces(second.cycle.pieces(), &compose_pieces(&step, &back));
            source = next;
        }
    }
    let gamma = FiniteIET::from_pieces(pieces)?;
    debug_assert_eq!(gamma.compose(&first.cycle), second.cycle.compose(&gamma));
    Ok(gamma)
}

/// `γ` with `γ ∘ η₁ = η₂ ∘ γ` and `γ(base₁) = base₂`.
pub fn conjugate_cycles(first: &CycleCertificate, second: &CycleCertificate) -> Result<FiniteIET> {
    conjugacy_with_parameters(first, second, std::slice::from_ref(&first.base), std::slice::from_ref(&second.base))
}

/// `γ⁻¹ ∘ τ₂ ∘ γ` within `certificate` of `τ₁`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApproximateConjugation {
    pub map: Transformation,
    pub conjugator: FiniteIET,
    pub certificate: Rational,
}

/// Conjugates `τ₂` into the `ε`-neighbourhood of `τ₁` through cycles of period `N`,
/// the least power of two with `4/N < ε`: with `γη₁ = η₂γ`,
/// `ρ(τ₁, γ⁻¹τ₂γ) ≤ ρ(τ₁, η₁) + ρ(η₂, τ₂)`.
pub fn approximate_conjugation(
    first: &System,
    second: &System,
    eps: &Rational,
) -> Result<ApproximateConjugation> {
    if !eps.is_positive() {
        return Err(Error::Precondition(format!("ε = {eps} must be positive")));
    }
    expect_interval(first.carrier(), "an approximate conjugation")?;
    expect_interval(second.carrier(), "an approximate conjugation")?;
    if first.map() == second.map() {
        let id = FiniteIET::identity();
        return Ok(ApproximateConjugation {
            map: Transformation::conjugate(second.map().clone(), Transformation::Iet(id.clone()))?,
            conjugator: id,
            certificate: Rational::zero(),
        });
    }
    let four = Rational::from_integer(4);
    let mut n: usize = 2;
    while Rational::from_integer(n as i64) * eps <= four {
        n = n
            .checked_mul(2)
            .ok_or_else(|| Error::BudgetExceeded(format!("ε = {eps} is too small")))?;
    }
    let c1 = cycle_approximation(first, n)?;
    let c2 = cycle_approximation(second, n)?;
    let gamma = conjugate_cycles(&c1, &c2)?;
    let hi = |c: &CycleCertificate| c.rho.as_ref().map(|r| r.hi.clone()).expect("approximation carries ρ");
    let certificate = hi(&c1) + hi(&c2);
    if certificate >= *eps {
        return Err(Error::BudgetExceeded(format!(
            "certificate {certificate} not below {eps}"
        )));
    }
    Ok(ApproximateConjugation {
        map: Transformation::conjugate(second.map().clone(), Transformation::Iet(gamma.clone()))?,
        conjugator: gamma,
        certificate,
    })
}
