//! Events as canonical measure classes on three carriers, and finite algebras of them.

mod algebra;
mod cylinder;
mod interval;
mod rect;
mod wire;

use std::fmt;
use std::sync::Arc;

pub use algebra::FiniteAlgebra;
pub use cylinder::{char_symbol, check_probs, symbol_char, CylinderEvent, MAX_ALPHABET};
pub(crate) use cylinder::Step;
pub use interval::IntervalEvent;
pub use rect::RectEvent;
pub use wire::{CarrierDesc, EventDesc};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Maximum nesting of product carriers.
pub const MAX_PRODUCT_DEPTH: usize = 2;

/// The underlying probability space of an event.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Carrier {
    /// `[0, 1)` with Lebesgue measure.
    Interval,
    /// `A^ℤ` with the Bernoulli product of `probs`.
    Cylinder(Arc<[Rational]>),
    /// Product of two carriers.
    Rect(Box<Carrier>, Box<Carrier>),
}

impl Carrier {
    pub fn bernoulli(probs: Vec<Rational>) -> Result<Self> {
        check_probs(&probs)?;
        Ok(Carrier::Cylinder(Arc::from(probs)))
    }

    pub fn product(left: Carrier, right: Carrier) -> Result<Self> {
        let depth = 1 + left.product_depth().max(right.product_depth());
        if depth > MAX_PRODUCT_DEPTH {
            return Err(Error::Precondition(format!(
                "product nesting {depth} exceeds {MAX_PRODUCT_DEPTH}"
            )));
        }
        Ok(Carrier::Rect(Box::new(left), Box::new(right)))
    }

    pub fn product_depth(&self) -> usize {
        match self {
            Carrier::Rect(l, r) => 1 + l.product_depth().max(r.product_depth()),
            _ => 0,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Carrier::Interval => "interval".into(),
            Carrier::Cylinder(p) => {
                let ps: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                format!("cylinder({})", ps.join(","))
            }
            Carrier::Rect(l, r) => format!("rect({}, {})", l.name(), r.name()),
        }
    }

    pub(crate) fn expect(&self, other: &Carrier) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(self.name(), other.name()))
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Event {
    Interval(IntervalEvent),
    Cylinder(CylinderEvent),
    Rect(RectEvent),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoolOp {
    Union,
    Intersection,
    Difference,
    SymmetricDifference,
    Complement,
}

impl Event {
    pub fn empty(carrier: &Carrier) -> Self {
        match carrier {
            Carrier::Interval => Event::Interval(IntervalEvent::empty()),
            Carrier::Cylinder(p) => Event::Cylinder(CylinderEvent::empty(p.clone())),
            Carrier::Rect(l, r) => Event::Rect(RectEvent::empty((**l).clone(), (**r).clone())),
        }
    }

    pub fn full(carrier: &Carrier) -> Self {
        match carrier {
            Carrier::Interval => Event::Interval(IntervalEvent::full()),
            Carrier::Cylinder(p) => Event::Cylinder(CylinderEvent::full(p.clone())),
            Carrier::Rect(l, r) => Event::Rect(RectEvent::full((**l).clone(), (**r).clone())),
        }
    }

    /// Interval event from raw pieces.
    pub fn intervals(raw: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        IntervalEvent::normalize(raw).map(Event::Interval)
    }

    /// Single interval `[lo, hi)`.
    pub fn interval(lo: Rational, hi: Rational) -> Result<Self> {
        IntervalEvent::interval(lo, hi).map(Event::Interval)
    }

    /// The product rectangle `left × right`.
    pub fn rectangle(left: Event, right: Event) -> Result<Self> {
        RectEvent::rectangle(left, right).map(Event::Rect)
    }

    pub fn carrier(&self) -> Carrier {
        match self {
            Event::Interval(_) => Carrier::Interval,
            Event::Cylinder(c) => Carrier::Cylinder(c.probs().clone()),
            Event::Rect(r) => Carrier::Rect(Box::new(r.left().clone()), Box::new(r.right().clone())),
        }
    }

    pub fn same_carrier(&self, other: &Event) -> Result<()> {
        let ok = match (self, other) {
            (Event::Interval(_), Event::Interval(_)) => true,
            (Event::Cylinder(a), Event::Cylinder(b)) => a.probs() == b.probs(),
            (Event::Rect(a), Event::Rect(b)) => a.left() == b.left() && a.right() == b.right(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(self.carrier().name(), other.carrier().name()))
        }
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Event::Interval(e) => e.is_empty(),
            Event::Cylinder(e) => e.is_empty(),
            Event::Rect(e) => e.is_empty(),
        }
    }

    pub fn measure(&self) -> Rational {
        match self {
            Event::Interval(e) => e.measure(),
            Event::Cylinder(e) => e.measure(),
            Event::Rect(e) => e.measure(),
        }
    }

    pub fn complement(&self) -> Self {
        match self {
            Event::Interval(e) => Event::Interval(e.complement()),
            Event::Cylinder(e) => Event::Cylinder(e.complement()),
            Event::Rect(e) => Event::Rect(e.complement()),
        }
    }

    fn binary(&self, other: &Event, op: BoolOp) -> Result<Self> {
        self.same_carrier(other)?;
        Ok(match (self, other) {
            (Event::Interval(a), Event::Interval(b)) => Event::Interval(match op {
                BoolOp::Union => a.union(b),
                BoolOp::Intersection => a.intersection(b),
                BoolOp::Difference => a.difference(b),
                BoolOp::SymmetricDifference => a.symmetric_difference(b),
                BoolOp::Complement => unreachable!("unary"),
            }),
            (Event::Cylinder(a), Event::Cylinder(b)) => Event::Cylinder(match op {
                BoolOp::Union => a.union(b),
                BoolOp::Intersection => a.intersection(b),
                BoolOp::Difference => a.difference(b),
                BoolOp::SymmetricDifference => a.symmetric_difference(b),
                BoolOp::Complement => unreachable!("unary"),
            }),
            (Event::Rect(a), Event::Rect(b)) => Event::Rect(a.combine(b, op)),
            _ => unreachable!("carriers checked"),
        })
    }

    pub fn union(&self, other: &Event) -> Result<Self> {
        self.binary(other, BoolOp::Union)
    }

    pub fn intersection(&self, other: &Event) -> Result<Self> {
        self.binary(other, BoolOp::Intersection)
    }

    pub fn difference(&self, other: &Event) -> Result<Self> {
        self.binary(other, BoolOp::Difference)
    }

    pub fn symmetric_difference(&self, other: &Event) -> Result<Self> {
        self.binary(other, BoolOp::SymmetricDifference)
    }

    /// Dispatches a Boolean operation; `Complement` ignores `other`, the rest require it.
    pub fn boolean_op(op: BoolOp, a: &Event, b: Option<&Event>) -> Result<Self> {
        match (op, b) {
            (BoolOp::Complement, _) => Ok(a.complement()),
            (_, Some(b)) => a.binary(b, op),
            (_, None) => Err(Error::Precondition(format!("{op:?} needs two events"))),
        }
    }

    /// `P(a △ b)`.
    pub fn rho(&self, other: &Event) -> Result<Rational> {
        Ok(self.symmetric_difference(other)?.measure())
    }

    pub fn intersects(&self, other: &Event) -> Result<bool> {
        self.same_carrier(other)?;
        Ok(match (self, other) {
            (Event::Cylinder(a), Event::Cylinder(b)) => a.intersects(b),
            _ => !self.intersection(other)?.is_empty(),
        })
    }

    pub fn is_disjoint(&self, other: &Event) -> Result<bool> {
        Ok(!self.intersects(other)?)
    }

    pub fn contains(&self, other: &Event) -> Result<bool> {
        Ok(other.difference(self)?.is_empty())
    }

    pub fn as_interval(&self) -> Option<&IntervalEvent> {
        match self {
            Event::Interval(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_cylinder(&self) -> Option<&CylinderEvent> {
        match self {
            Event::Cylinder(e) => Some(e),
            _ => None,
        }
    }

    pub fn as_rect(&self) -> Option<&RectEvent> {
        match self {
            Event::Rect(e) => Some(e),
            _ => None,
        }
    }

    /// Union of many events on `carrier`.
    pub fn union_all<'a>(carrier: &Carrier, events: impl IntoIterator<Item = &'a Event>) -> Result<Self> {
        let events: Vec<&Event> = events.into_iter().collect();
        if let Carrier::Interval = carrier {
            let mut pieces = Vec::new();
            for e in &events {
                let iv = e
                    .as_interval()
                    .ok_or_else(|| Error::CarrierMismatch(carrier.name(), e.carrier().name()))?;
                pieces.extend(iv.intervals().iter().cloned());
            }
            return Ok(Event::Interval(IntervalEvent::from_valid(pieces)));
        }
        let mut acc = Event::empty(carrier);
        for e in events {
            acc = acc.union(e)?;
        }
        Ok(acc)
    }
}

impl From<IntervalEvent> for Event {
    fn from(e: IntervalEvent) -> Self {
        Event::Interval(e)
    }
}

impl From<CylinderEvent> for Event {
    fn from(e: CylinderEvent) -> Self {
        Event::Cylinder(e)
    }
}

impl From<RectEvent> for Event {
    fn from(e: RectEvent) -> Self {
        Event::Rect(e)
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Interval(e) => {
                if e.is_empty() {
                    return f.write_str("∅");
                }
                let parts: Vec<String> = e
                    .intervals()
                    .iter()
                    .map(|(lo, hi)| format!("[{lo},{hi})"))
                    .collect();
                f.write_str(&parts.join("∪"))
            }
            Event::Cylinder(c) => match (c.window(), c.patterns(16)) {
                (None, _) if c.is_full() => f.write_str("X"),
                (None, _) => f.write_str("∅"),
                (Some((lo, hi)), Some(words)) => write!(f, "[{lo},{hi}]{{{}}}", words.join(",")),
                (Some((lo, hi)), None) => write!(f, "[{lo},{hi}]<{} nodes>", c.node_count()),
            },
            Event::Rect(r) => {
                if r.is_empty() {
                    return f.write_str("∅");
                }
                let parts: Vec<String> = r
                    .rectangles()
                    .iter()
                    .map(|(l, rr)| format!("({l})×({rr})"))
                    .collect();
                f.write_str(&parts.join(" ∪ "))
            }
        }
    }
}
