use super::{Carrier, Event};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite partition into positive-measure atoms, kept in sorted order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteAlgebra {
    carrier: Carrier,
    atoms: Vec<Event>,
}

impl FiniteAlgebra {
    /// Validates that `atoms` partition the space.
    pub fn new(atoms: Vec<Event>) -> Result<Self> {
        let first = atoms
            .first()
            .ok_or_else(|| Error::InvalidAlgebra("no atoms".into()))?;
        let carrier = first.carrier();
        for a in &atoms {
            a.same_carrier(first)?;
            if a.is_empty() {
                return Err(Error::InvalidAlgebra(format!("atom {a} is null")));
            }
        }
        for (i, a) in atoms.iter().enumerate() {
            for b in &atoms[i + 1..] {
                if a.intersects(b)? {
                    return Err(Error::InvalidAlgebra(format!("atoms {a} and {b} overlap")));
                }
            }
        }
        let total: Rational = atoms.iter().map(Event::measure).sum();
        if !total.is_one() {
            return Err(Error::InvalidAlgebra(format!("atoms cover measure {total}")));
        }
        Ok(Self::from_atoms(carrier, atoms))
    }

    pub(crate) fn from_atoms(carrier: Carrier, mut atoms: Vec<Event>) -> Self {
        atoms.sort();
        FiniteAlgebra { carrier, atoms }
    }

    pub fn trivial(carrier: &Carrier) -> Self {
        FiniteAlgebra {
            carrier: carrier.clone(),
            atoms: vec![Event::full(carrier)],
        }
    }

    /// The algebra generated by `events`: nonempty Boolean combinations `∩ e_i^{±1}`.
    pub fn generated(carrier: &Carrier, events: &[Event]) -> Result<Self> {
        let mut alg = Self::trivial(carrier);
        for e in events {
            carrier.expect(&e.carrier())?;
            alg = alg.refine_by(e)?;
        }
        Ok(alg)
    }

    /// Splits every atom along `e`.
    pub fn refine_by(&self, e: &Event) -> Result<Self> {
        let mut atoms = Vec::with_capacity(self.atoms.len() * 2);
        for a in &self.atoms {
            let inside = a.intersection(e)?;
            let outside = a.difference(e)?;
            for part in [inside, outside] {
                if !part.is_empty() {
                    atoms.push(part);
                }
            }
        }
        Ok(Self::from_atoms(self.carrier.clone(), atoms))
    }

    /// Coarsest common refinement.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.carrier.expect(&other.carrier)?;
        let mut atoms = Vec::new();
        for a in &self.atoms {
            for b in &other.atoms {
                if a.intersects(b)? {
                    atoms.push(a.intersection(b)?);
                }
            }
        }
        Ok(Self::from_atoms(self.carrier.clone(), atoms))
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn atoms(&self) -> &[Event] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn measures(&self) -> Vec<Rational> {
        self.atoms.iter().map(Event::measure).collect()
    }

    /// Indices of atoms whose union is `e`, or `None` when `e` is not such a union.
    pub fn decompose(&self, e: &Event) -> Result<Option<Vec<usize>>> {
        self.carrier.expect(&e.carrier())?;
        let mut inside = Vec::new();
        for (i, a) in self.atoms.iter().enumerate() {
            let common = a.intersection(e)?;
            if common.is_empty() {
                continue;
            }
            if &common != a {
                return Ok(None);
            }
            inside.push(i);
        }
        Ok(Some(inside))
    }

    /// Every atom of `self` lies inside an atom of `coarser`.
    pub fn refines(&self, coarser: &Self) -> Result<bool> {
        for e in coarser.atoms() {
            if self.decompose(e)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Union of the atoms with the given indices.
    pub fn union_of(&self, indices: &[usize]) -> Event {
        Event::union_all(&self.carrier, indices.iter().map(|&i| &self.atoms[i])).expect("same carrier")
    }
}
