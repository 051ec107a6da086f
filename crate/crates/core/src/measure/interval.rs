//! Finite unions of half-open rational intervals in `[0, 1)`.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Canonical interval union: sorted, pairwise separated (`hi_k < lo_{k+1}`), no empty pieces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct IntervalEvent {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalEvent {
    pub fn empty() -> Self {
        IntervalEvent::default()
    }

    pub fn full() -> Self {
        IntervalEvent {
            intervals: vec![(Rational::zero(), Rational::one())],
        }
    }

    /// Validates endpoints and builds the canonical representative.
    ///
    /// `lo == hi` is an empty piece and is dropped; `lo > hi` is an error.
    pub fn normalize(raw: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut pieces = Vec::new();
        for (lo, hi) in raw {
            for e in [&lo, &hi] {
                if e.is_negative() || *e > Rational::one() {
                    return Err(Error::EndpointOutOfRange(Box::new(e.clone())));
                }
            }
            if lo > hi {
                return Err(Error::ReversedInterval(Box::new(lo), Box::new(hi)));
            }
            if lo < hi {
                pieces.push((lo, hi));
            }
        }
        Ok(Self::from_valid(pieces))
    }

    /// Canonicalizes pieces already known to satisfy `0 <= lo <= hi <= 1`.
    pub(crate) fn from_valid(mut pieces: Vec<(Rational, Rational)>) -> Self {
        pieces.retain(|(lo, hi)| lo < hi);
        pieces.sort();
        let mut out: Vec<(Rational, Rational)> = Vec::with_capacity(pieces.len());
        for (lo, hi) in pieces {
            match out.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => out.push((lo, hi)),
            }
        }
        IntervalEvent { intervals: out }
    }

    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        Self::normalize([(lo, hi)])
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.intervals.iter().map(|(lo, hi)| hi - lo).sum()
    }

    pub fn complement(&self) -> Self {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = Rational::zero();
        for (lo, hi) in &self.intervals {
            if *lo > cursor {
                out.push((cursor.clone(), lo.clone()));
            }
            cursor = hi.clone();
        }
        if cursor < Rational::one() {
            out.push((cursor, Rational::one()));
        }
        IntervalEvent { intervals: out }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::from_valid(
            self.intervals
                .iter()
                .chain(other.intervals.iter())
                .cloned()
                .collect(),
        )
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let (a, b) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if a[i].0 > b[j].0 { &a[i].0 } else { &b[j].0 };
            let hi = if a[i].1 < b[j].1 { &a[i].1 } else { &b[j].1 };
            if lo < hi {
                out.push((lo.clone(), hi.clone()));
            }
            if a[i].1 < b[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        // Pieces of two canonical unions intersect into separated pieces.
        IntervalEvent { intervals: out }
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.intersection(&other.complement())
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.difference(other).union(&other.difference(self))
    }

    pub fn contains(&self, other: &Self) -> bool {
        other.difference(self).is_empty()
    }

    pub fn contains_point(&self, x: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= x && x < hi)
    }

    /// The leftmost sub-event of measure `amount` (clamped to the whole event).
    pub fn leftmost(&self, amount: &Rational) -> Self {
        let mut left = amount.clone();
        let mut out = Vec::new();
        for (lo, hi) in &self.intervals {
            if !left.is_positive() {
                break;
            }
            let len = hi - lo;
            if len <= left {
                out.push((lo.clone(), hi.clone()));
                left -= &len;
            } else {
                out.push((lo.clone(), lo + &left));
                left = Rational::zero();
            }
        }
        IntervalEvent { intervals: out }
    }

    /// Splits into consecutive pieces with the given measures, in left-to-right order.
    /// The measures must sum to at most the measure of `self`.
    pub fn split_measures(&self, amounts: &[Rational]) -> Vec<Self> {
        let mut rest = self.clone();
        let mut out = Vec::with_capacity(amounts.len());
        for amount in amounts {
            let piece = rest.leftmost(amount);
            rest = rest.difference(&piece);
            out.push(piece);
        }
        out
    }

    /// All endpoints, in order.
    pub fn endpoints(&self) -> impl Iterator<Item = &Rational> {
        self.intervals.iter().flat_map(|(lo, hi)| [lo, hi])
    }
}
