//! Finite unions of product rectangles.

use std::collections::BTreeMap;

use super::{BoolOp, Carrier, Event};
use crate::error::{Error, Result};
use crate::rational::Rational;

/// Canonical form: left components pairwise disjoint and nonempty, right components
/// nonempty and pairwise distinct, sorted. Equivalently the nonempty level sets of the
/// section map `x ↦ {y : (x, y) ∈ E}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct RectEvent {
    left: Carrier,
    right: Carrier,
    rects: Vec<(Event, Event)>,
}

impl RectEvent {
    pub fn empty(left: Carrier, right: Carrier) -> Self {
        RectEvent {
            left,
            right,
            rects: Vec::new(),
        }
    }

    pub fn full(left: Carrier, right: Carrier) -> Self {
        let rects = vec![(Event::full(&left), Event::full(&right))];
        RectEvent { left, right, rects }
    }

    pub fn rectangle(l: Event, r: Event) -> Result<Self> {
        let (left, right) = (l.carrier(), r.carrier());
        Carrier::product(left.clone(), right.clone())?;
        let rects = if l.is_empty() || r.is_empty() {
            vec![]
        } else {
            vec![(l, r)]
        };
        Ok(RectEvent { left, right, rects })
    }

    /// Union of arbitrary (possibly overlapping) rectangles.
    pub fn normalize(left: Carrier, right: Carrier, raw: Vec<(Event, Event)>) -> Result<Self> {
        Carrier::product(left.clone(), right.clone())?;
        let mut acc = RectEvent::empty(left.clone(), right.clone());
        for (l, r) in raw {
            left.expect(&l.carrier())?;
            right.expect(&r.carrier())?;
            let piece = RectEvent::rectangle(l, r)?;
            acc = acc.combine(&piece, BoolOp::Union);
        }
        Ok(acc)
    }

    /// Groups sections with disjoint lefts into canonical form.
    pub(crate) fn from_sections(left: Carrier, right: Carrier, sections: Vec<(Event, Event)>) -> Self {
        let mut groups: BTreeMap<Event, Vec<Event>> = BTreeMap::new();
        for (l, r) in sections {
            if l.is_empty() || r.is_empty() {
                continue;
            }
            groups.entry(r).or_default().push(l);
        }
        let mut rects: Vec<(Event, Event)> = groups
            .into_iter()
            .map(|(r, ls)| {
                let l = Event::union_all(&left, ls.iter()).expect("same carrier");
                (l, r)
            })
            .collect();
        rects.sort();
        RectEvent { left, right, rects }
    }

    pub fn left(&self) -> &Carrier {
        &self.left
    }

    pub fn right(&self) -> &Carrier {
        &self.right
    }

    pub fn rectangles(&self) -> &[(Event, Event)] {
        &self.rects
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn measure(&self) -> Rational {
        self.rects
            .iter()
            .map(|(l, r)| l.measure() * r.measure())
            .sum()
    }

    /// Union of the left components.
    pub fn left_support(&self) -> Event {
        Event::union_all(&self.left, self.rects.iter().map(|(l, _)| l)).expect("same carrier")
    }

    pub fn complement(&self) -> Self {
        let mut sections: Vec<(Event, Event)> = self
            .rects
            .iter()
            .map(|(l, r)| (l.clone(), r.complement()))
            .collect();
        sections.push((self.left_support().complement(), Event::full(&self.right)));
        Self::from_sections(self.left.clone(), self.right.clone(), sections)
    }

    /// Refines both left partitions to a common one and applies `op` section-wise.
    pub(crate) fn combine(&self, other: &Self, op: BoolOp) -> Self {
        let empty_r = Event::empty(&self.right);
        let apply = |a: &Event, b: &Event| -> Event {
            match op {
                BoolOp::Union => a.union(b),
                BoolOp::Intersection => a.intersection(b),
                BoolOp::Difference => a.difference(b),
                BoolOp::SymmetricDifference => a.symmetric_difference(b),
                BoolOp::Complement => unreachable!("unary"),
            }
            .expect("same carrier")
        };
        let mut sections = Vec::new();
        let self_support = self.left_support();
        let other_support = other.left_support();
        for (la, ra) in &self.rects {
            for (lb, rb) in &other.rects {
                let l = la.intersection(lb).expect("same carrier");
                if !l.is_empty() {
                    sections.push((l, apply(ra, rb)));
                }
            }
            let only = la.difference(&other_support).expect("same carrier");
            if !only.is_empty() {
                sections.push((only, apply(ra, &empty_r)));
            }
        }
        for (lb, rb) in &other.rects {
            let only = lb.difference(&self_support).expect("same carrier");
            if !only.is_empty() {
                sections.push((only, apply(&empty_r, rb)));
            }
        }
        Self::from_sections(self.left.clone(), self.right.clone(), sections)
    }

    /// Applies maps to each factor. The maps must be bijective on events, so the
    /// images of a canonical form only need re-sorting.
    pub(crate) fn map_components(
        &self,
        mut f: impl FnMut(&Event) -> Result<Event>,
        mut g: impl FnMut(&Event) -> Result<Event>,
    ) -> Result<Self> {
        let mut rects = Vec::with_capacity(self.rects.len());
        for (l, r) in &self.rects {
            rects.push((f(l)?, g(r)?));
        }
        rects.sort();
        Ok(RectEvent {
            left: self.left.clone(),
            right: self.right.clone(),
            rects,
        })
    }

    pub(crate) fn check_carriers(&self, left: &Carrier, right: &Carrier) -> Result<()> {
        if &self.left == left && &self.right == right {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(
                format!("rect({}, {})", self.left, self.right),
                format!("rect({left}, {right})"),
            ))
        }
    }
}
