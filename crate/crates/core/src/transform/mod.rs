//! Measure-preserving automorphisms and their action on events.

pub mod iet;
pub mod odometer;
mod rho;

use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub use iet::{FiniteIET, Piece};
pub use rho::{rho_maps, Enclosure};

use crate::error::{Error, Result};
use crate::measure::{check_probs, Carrier, Event, RectEvent};
use crate::rational::Rational;

/// Default limit on the number of nodes of a symbolic map.
pub const DEFAULT_DEPTH_BUDGET: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Transformation {
    Iet(FiniteIET),
    Odometer { base: u64 },
    /// Left shift on `A^ℤ`: the image of `[x_0 = s]` is `[x_1 = s]`.
    Shift { probs: Arc<[Rational]> },
    Product(Box<Transformation>, Box<Transformation>),
    Inverse(Box<Transformation>),
    /// `outer ∘ inner`.
    Compose(Box<Transformation>, Box<Transformation>),
    /// `by⁻¹ ∘ inner ∘ by`.
    Conjugate { inner: Box<Transformation>, by: Box<Transformation> },
}

impl Transformation {
    pub fn identity() -> Self {
        Transformation::Iet(FiniteIET::identity())
    }

    pub fn rotation(alpha: &Rational) -> Result<Self> {
        FiniteIET::rotation(alpha).map(Transformation::Iet)
    }

    pub fn odometer(base: u64) -> Result<Self> {
        if base < 2 {
            return Err(Error::Precondition(format!("odometer base {base} < 2")));
        }
        Ok(Transformation::Odometer { base })
    }

    pub fn shift(probs: Vec<Rational>) -> Result<Self> {
        check_probs(&probs)?;
        Ok(Transformation::Shift {
            probs: Arc::from(probs),
        })
    }

    pub fn product(left: Transformation, right: Transformation) -> Result<Self> {
        let t = Transformation::Product(Box::new(left), Box::new(right));
        t.carrier()?;
        Ok(t)
    }

    pub fn inverse(&self) -> Self {
        match self {
            Transformation::Inverse(t) => (**t).clone(),
            t => Transformation::Inverse(Box::new(t.clone())),
        }
    }

    pub fn compose(outer: Transformation, inner: Transformation) -> Result<Self> {
        outer.carrier()?.expect(&inner.carrier()?)?;
        Ok(Transformation::Compose(Box::new(outer), Box::new(inner)))
    }

    pub fn conjugate(inner: Transformation, by: Transformation) -> Result<Self> {
        inner.carrier()?.expect(&by.carrier()?)?;
        Ok(Transformation::Conjugate {
            inner: Box::new(inner),
            by: Box::new(by),
        })
    }

    /// The carrier, checking that every composition stays on one carrier.
    pub fn carrier(&self) -> Result<Carrier> {
        match self {
            Transformation::Iet(_) | Transformation::Odometer { .. } => Ok(Carrier::Interval),
            Transformation::Shift { probs } => Ok(Carrier::Cylinder(probs.clone())),
            Transformation::Product(a, b) => Carrier::product(a.carrier()?, b.carrier()?),
            Transformation::Inverse(t) => t.carrier(),
            Transformation::Compose(f, g) => {
                let c = f.carrier()?;
                c.expect(&g.carrier()?)?;
                Ok(c)
            }
            Transformation::Conjugate { inner, by } => {
                let c = inner.carrier()?;
                c.expect(&by.carrier()?)?;
                Ok(c)
            }
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Transformation::Iet(_) | Transformation::Odometer { .. } | Transformation::Shift { .. } => 1,
            Transformation::Inverse(t) => 1 + t.node_count(),
            Transformation::Product(a, b) | Transformation::Compose(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Transformation::Conjugate { inner, by } => 1 + inner.node_count() + by.node_count(),
        }
    }

    pub fn check_depth(&self, budget: usize) -> Result<()> {
        let nodes = self.node_count();
        if nodes > budget {
            Err(Error::DepthExceeded { nodes, budget })
        } else {
            Ok(())
        }
    }

    /// Image (`Forward`) or preimage (`Inverse`) of an event.
    pub fn map_event(&self, a: &Event, dir: Direction) -> Result<Event> {
        match (self, a) {
            (Transformation::Iet(f), Event::Interval(e)) => Ok(Event::Interval(match dir {
                Direction::Forward => f.map_event(e),
                Direction::Inverse => f.preimage(e),
            })),
            (Transformation::Odometer { base }, Event::Interval(e)) => Ok(Event::Interval(match dir {
                Direction::Forward => odometer::forward(*base, e),
                Direction::Inverse => odometer::backward(*base, e),
            })),
            (Transformation::Shift { probs }, Event::Cylinder(c)) if c.probs() == probs => {
                Ok(Event::Cylinder(c.shift(match dir {
                    Direction::Forward => 1,
                    Direction::Inverse => -1,
                })))
            }
            (Transformation::Product(f, g), Event::Rect(r)) => {
                r.check_carriers(&f.carrier()?, &g.carrier()?)?;
                Ok(Event::Rect(r.map_components(
                    |l| f.map_event(l, dir),
                    |x| g.map_event(x, dir),
                )?))
            }
            (Transformation::Inverse(t), _) => t.map_event(a, dir.flip()),
            (Transformation::Compose(f, g), _) => match dir {
                Direction::Forward => f.map_event(&g.map_event(a, dir)?, dir),
                Direction::Inverse => g.map_event(&f.map_event(a, dir)?, dir),
            },
            (Transformation::Conjugate { inner, by }, _) => {
                let by_inv = by.inverse();
                let step = by.map_event(a, Direction::Forward)?;
                let step = inner.map_event(&step, dir)?;
                by_inv.map_event(&step, Direction::Forward)
            }
            _ => Err(Error::CarrierMismatch(
                self.carrier().map(|c| c.name()).unwrap_or_else(|e| e.to_string()),
                a.carrier().name(),
            )),
        }
    }

    /// `τ^k(a)`; negative `k` iterates the inverse.
    pub fn iterate_image(&self, k: i64, a: &Event) -> Result<Event> {
        if let (Some(s), Event::Cylinder(c)) = (self.shift_power(), a) {
            self.carrier()?.expect(&a.carrier())?;
            return Ok(Event::Cylinder(c.shift(s * k)));
        }
        let dir = if k < 0 { Direction::Inverse } else { Direction::Forward };
        let mut cur = a.clone();
        for _ in 0..k.unsigned_abs() {
            cur = self.map_event(&cur, dir)?;
        }
        Ok(cur)
    }

    /// The equivalent finite IET, when the tree is built from IETs only.
    pub fn as_iet(&self) -> Option<FiniteIET> {
        match self {
            Transformation::Iet(f) => Some(f.clone()),
            Transformation::Inverse(t) => t.as_iet().map(|f| f.inverse()),
            Transformation::Compose(f, g) => Some(f.as_iet()?.compose(&g.as_iet()?)),
            Transformation::Conjugate { inner, by } => {
                let b = by.as_iet()?;
                Some(b.inverse().compose(&inner.as_iet()?).compose(&b))
            }
            _ => None,
        }
    }

    /// For maps on a cylinder carrier: the power `k` with `self = shift^k`.
    pub fn shift_power(&self) -> Option<i64> {
        match self {
            Transformation::Shift { .. } => Some(1),
            Transformation::Inverse(t) => t.shift_power().map(|k| -k),
            Transformation::Compose(f, g) => Some(f.shift_power()? + g.shift_power()?),
            Transformation::Conjugate { inner, by } => {
                by.shift_power()?;
                inner.shift_power()
            }
            _ => None,
        }
    }

    /// Splits a map on a product carrier into its factors.
    pub fn as_product(&self) -> Option<(Transformation, Transformation)> {
        match self {
            Transformation::Product(a, b) => Some(((**a).clone(), (**b).clone())),
            Transformation::Inverse(t) => {
                let (a, b) = t.as_product()?;
                Some((a.inverse(), b.inverse()))
            }
            Transformation::Compose(f, g) => {
                let (fa, fb) = f.as_product()?;
                let (ga, gb) = g.as_product()?;
                Some((
                    Transformation::Compose(Box::new(fa), Box::new(ga)),
                    Transformation::Compose(Box::new(fb), Box::new(gb)),
                ))
            }
            Transformation::Conjugate { inner, by } => {
                let (ia, ib) = inner.as_product()?;
                let (ba, bb) = by.as_product()?;
                Some((
                    Transformation::Conjugate {
                        inner: Box::new(ia),
                        by: Box::new(ba),
                    },
                    Transformation::Conjugate {
                        inner: Box::new(ib),
                        by: Box::new(bb),
                    },
                ))
            }
            _ => None,
        }
    }

    /// Whether the map is known to be aperiodic: odometers, shifts, their inverses and
    /// conjugates, and products with an aperiodic factor.
    pub fn is_certified_aperiodic(&self) -> bool {
        match self {
            Transformation::Odometer { .. } | Transformation::Shift { .. } => true,
            Transformation::Inverse(t) => t.is_certified_aperiodic(),
            Transformation::Conjugate { inner, .. } => inner.is_certified_aperiodic(),
            Transformation::Product(a, b) => a.is_certified_aperiodic() || b.is_certified_aperiodic(),
            Transformation::Compose(..) => self.shift_power().is_some_and(|k| k != 0),
            Transformation::Iet(_) => false,
        }
    }

    /// `{x : τ^i(x) = x}` for `i ≥ 1`.
    pub fn fixed_set(&self, i: u64) -> Result<Event> {
        if i == 0 {
            return Err(Error::Precondition("fixed_set needs i ≥ 1".into()));
        }
        let carrier = self.carrier()?;
        if let Some(f) = self.as_iet() {
            return Ok(Event::Interval(f.power(i as i64).fixed_set()));
        }
        if let Some(k) = self.shift_power() {
            return Ok(if k == 0 {
                Event::full(&carrier)
            } else {
                Event::empty(&carrier)
            });
        }
        if let Some((a, b)) = self.as_product() {
            let (fa, fb) = (a.fixed_set(i)?, b.fixed_set(i)?);
            return Ok(Event::Rect(RectEvent::rectangle(fa, fb)?));
        }
        if self.is_certified_aperiodic() {
            return Ok(Event::empty(&carrier));
        }
        Err(Error::Irreducible(
            "fixed set needs an IET-reducible or certified-aperiodic map".into(),
        ))
    }

    /// Point image for interval maps; `None` off the domain or on other carriers.
    pub fn apply_point(&self, x: &Rational) -> Option<Rational> {
        self.point(x, Direction::Forward)
    }

    fn point(&self, x: &Rational, dir: Direction) -> Option<Rational> {
        match (self, dir) {
            (Transformation::Iet(f), Direction::Forward) => f.apply(x),
            (Transformation::Iet(f), Direction::Inverse) => f.inverse().apply(x),
            (Transformation::Odometer { base }, Direction::Forward) => Some(odometer::apply(*base, x)),
            (Transformation::Odometer { base }, Direction::Inverse) => odometer_inverse_point(*base, x),
            (Transformation::Inverse(t), _) => t.point(x, dir.flip()),
            (Transformation::Compose(f, g), Direction::Forward) => f.point(&g.point(x, dir)?, dir),
            (Transformation::Compose(f, g), Direction::Inverse) => g.point(&f.point(x, dir)?, dir),
            (Transformation::Conjugate { inner, by }, _) => {
                let y = by.point(x, Direction::Forward)?;
                let z = inner.point(&y, dir)?;
                by.point(&z, Direction::Inverse)
            }
            _ => None,
        }
    }
}

fn odometer_inverse_point(p: u64, x: &Rational) -> Option<Rational> {
    // Piece k has image [p^{-k}, p^{1-k}); 0 only has the null tail as preimage.
    if !x.is_positive() {
        return None;
    }
    let mut k = 1;
    loop {
        let pc = odometer::piece(p, k);
        if *x >= pc.image().0 {
            return Some(x - &pc.offset);
        }
        k += 1;
    }
}

/// A carrier with an automorphism acting on it.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct System {
    carrier: Carrier,
    map: Transformation,
}

impl System {
    pub fn new(map: Transformation) -> Result<Self> {
        Ok(System {
            carrier: map.carrier()?,
            map,
        })
    }

    pub fn carrier(&self) -> &Carrier {
        &self.carrier
    }

    pub fn map(&self) -> &Transformation {
        &self.map
    }

    /// Product system on the rectangle carrier.
    pub fn product(&self, other: &System) -> Result<System> {
        System::new(Transformation::product(self.map.clone(), other.map.clone())?)
    }

    /// Preimage `τ^{-k}(a)`.
    pub fn pull(&self, k: i64, a: &Event) -> Result<Event> {
        self.map.iterate_image(-k, a)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum TransformDesc {
    Iet(FiniteIET),
    Odometer { base: u64 },
    Shift { probs: Vec<Rational> },
    /// Input shorthand for a rotation IET.
    Rotation(Rational),
    Product { left: Box<TransformDesc>, right: Box<TransformDesc> },
    Inverse(Box<TransformDesc>),
    Compose { outer: Box<TransformDesc>, inner: Box<TransformDesc> },
    Conjugate { inner: Box<TransformDesc>, by: Box<TransformDesc> },
}

impl TransformDesc {
    pub fn to_transformation(&self) -> Result<Transformation> {
        Ok(match self {
            TransformDesc::Iet(f) => Transformation::Iet(f.clone()),
            TransformDesc::Odometer { base } => Transformation::odometer(*base)?,
            TransformDesc::Shift { probs } => Transformation::shift(probs.clone())?,
            TransformDesc::Rotation(a) => Transformation::rotation(a)?,
            TransformDesc::Product { left, right } => {
                Transformation::product(left.to_transformation()?, right.to_transformation()?)?
            }
            TransformDesc::Inverse(t) => Transformation::Inverse(Box::new(t.to_transformation()?)),
            TransformDesc::Compose { outer, inner } => {
                Transformation::compose(outer.to_transformation()?, inner.to_transformation()?)?
            }
            TransformDesc::Conjugate { inner, by } => {
                Transformation::conjugate(inner.to_transformation()?, by.to_transformation()?)?
            }
        })
    }

    pub fn from_transformation(t: &Transformation) -> Self {
        let b = |t: &Transformation| Box::new(Self::from_transformation(t));
        match t {
            Transformation::Iet(f) => TransformDesc::Iet(f.clone()),
            Transformation::Odometer { base } => TransformDesc::Odometer { base: *base },
            Transformation::Shift { probs } => TransformDesc::Shift {
                probs: probs.to_vec(),
            },
            Transformation::Product(l, r) => TransformDesc::Product {
                left: b(l),
                right: b(r),
            },
            Transformation::Inverse(x) => TransformDesc::Inverse(b(x)),
            Transformation::Compose(f, g) => TransformDesc::Compose {
                outer: b(f),
                inner: b(g),
            },
            Transformation::Conjugate { inner, by } => TransformDesc::Conjugate {
                inner: b(inner),
                by: b(by),
            },
        }
    }

    /// Nesting depth of the description, checked before building.
    pub fn nodes(&self) -> usize {
        match self {
            TransformDesc::Iet(_)
            | TransformDesc::Odometer { .. }
            | TransformDesc::Shift { .. }
            | TransformDesc::Rotation(_) => 1,
            TransformDesc::Inverse(t) => 1 + t.nodes(),
            TransformDesc::Product { left: a, right: b }
            | TransformDesc::Compose { outer: a, inner: b }
            | TransformDesc::Conjugate { inner: a, by: b } => 1 + a.nodes() + b.nodes(),
        }
    }
}

impl Serialize for Transformation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TransformDesc::from_transformation(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Transformation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        TransformDesc::deserialize(d)?
            .to_transformation()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SystemDesc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    carrier: Option<Carrier>,
    transformation: Transformation,
}

impl Serialize for System {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemDesc {
            carrier: Some(self.carrier.clone()),
            transformation: self.map.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for System {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = SystemDesc::deserialize(d)?;
        let sys = System::new(desc.transformation).map_err(serde::de::Error::custom)?;
        if let Some(c) = desc.carrier {
            c.expect(&sys.carrier).map_err(serde::de::Error::custom)?;
        }
        Ok(sys)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::CylinderEvent;
    use crate::q;

    fn iv(a: i64, b: i64, c: i64, d: i64) -> Event {
        Event::interval(q!(a, b), q!(c, d)).unwrap()
    }

    #[test]
    fn map_event_examples() {
        let odo = Transformation::odometer(2).unwrap();
        assert_eq!(odo.map_event(&iv(0, 1, 1, 2), Direction::Forward).unwrap(), iv(1, 2, 1, 1));
        let rot = Transformation::rotation(&q!(1, 2)).unwrap();
        assert_eq!(rot.map_event(&iv(0, 1, 1, 4), Direction::Forward).unwrap(), iv(1, 2, 3, 4));
        let probs = vec![q!(1, 2), q!(1, 2)];
        let shift = Transformation::shift(probs.clone()).unwrap();
        let p: Arc<[Rational]> = Arc::from(probs);
        let x0 = Event::Cylinder(CylinderEvent::symbol_at(p.clone(), 0, 0).unwrap());
        let x1 = Event::Cylinder(CylinderEvent::symbol_at(p, 1, 0).unwrap());
        assert_eq!(shift.map_event(&x0, Direction::Forward).unwrap(), x1);
    }

    #[test]
    fn iterate_examples() {
        let odo = Transformation::odometer(2).unwrap();
        let zero = Event::intervals([(q!(0), q!(1, 4)), (q!(1, 2), q!(3, 4))]).unwrap();
        assert_eq!(odo.iterate_image(2, &zero).unwrap(), zero.complement());
        assert_eq!(odo.iterate_image(0, &zero).unwrap(), zero);
        let third = Transformation::rotation(&q!(1, 3)).unwrap();
        assert_eq!(third.iterate_image(3, &iv(0, 1, 1, 3)).unwrap(), iv(0, 1, 1, 3));
        assert_eq!(odo.iterate_image(-2, &zero.complement()).unwrap(), zero);
    }

    #[test]
    fn conjugate_acts_as_composition() {
        let odo = Transformation::odometer(2).unwrap();
        let rot = Transformation::rotation(&q!(1, 2)).unwrap();
        let conj = Transformation::conjugate(odo.clone(), rot.clone()).unwrap();
        let a = iv(1, 8, 5, 8);
        let direct = rot
            .inverse()
            .map_event(&odo.map_event(&rot.map_event(&a, Direction::Forward).unwrap(), Direction::Forward).unwrap(), Direction::Forward)
            .unwrap();
        assert_eq!(conj.map_event(&a, Direction::Forward).unwrap(), direct);
        let back = conj.map_event(&direct, Direction::Inverse).unwrap();
        assert_eq!(back, a);
        for k in 0..16 {
            let x = q!(2 * k + 1, 32);
            let y = conj.apply_point(&x).unwrap();
            assert_eq!(conj.inverse().apply_point(&y).unwrap(), x);
        }
    }

    #[test]
    fn fixed_sets() {
        let glued = Transformation::Iet(
            FiniteIET::new([
                ((q!(0), q!(1, 3)), q!(0)),
                ((q!(1, 3), q!(2, 3)), q!(1, 3)),
                ((q!(2, 3), q!(1)), q!(-1, 3)),
            ])
            .unwrap(),
        );
        assert_eq!(glued.fixed_set(2).unwrap(), iv(0, 1, 1, 1));
        assert_eq!(Transformation::identity().fixed_set(1).unwrap(), iv(0, 1, 1, 1));
        assert!(Transformation::rotation(&q!(1, 2)).unwrap().fixed_set(1).unwrap().is_empty());
        assert!(Transformation::odometer(3).unwrap().fixed_set(9).unwrap().is_empty());
    }

    #[test]
    fn json_forms() {
        let t: Transformation = serde_json::from_str(r#"{"odometer":{"base":2}}"#).unwrap();
        assert_eq!(t, Transformation::odometer(2).unwrap());
        let c: Transformation = serde_json::from_str(
            r#"{"conjugate":{"inner":{"odometer":{"base":2}},"by":{"rotation":"1/2"}}}"#,
        )
        .unwrap();
        assert_eq!(c.node_count(), 3);
        let text = serde_json::to_string(&c).unwrap();
        let back: Transformation = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        let bad: std::result::Result<Transformation, _> = serde_json::from_str(
            r#"{"compose":{"outer":{"odometer":{"base":2}},"inner":{"shift":{"probs":["1/2","1/2"]}}}}"#,
        );
        assert!(bad.is_err());
        assert!(serde_json::from_str::<Transformation>(r#"{"odometer":{"base":1}}"#).is_err());
    }
}
