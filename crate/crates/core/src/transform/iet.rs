//! Interval exchange transformations with rational data.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::IntervalEvent;
use crate::rational::Rational;

/// `[lo, hi)` translated by `offset`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Piece {
    pub lo: Rational,
    pub hi: Rational,
    pub offset: Rational,
}

impl Piece {
    pub fn image(&self) -> (Rational, Rational) {
        (&self.lo + &self.offset, &self.hi + &self.offset)
    }

    pub fn len(&self) -> Rational {
        &self.hi - &self.lo
    }
}

/// A piecewise translation whose sources and images both tile `[0, 1)`.
///
/// Pieces are sorted and maximal: neighbouring pieces with equal offsets are merged,
/// so two IETs are equal as maps (mod null sets) exactly when they are equal as values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FiniteIET {
    pieces: Vec<Piece>,
}

/// Sorts and merges adjacent equal-offset pieces.
pub(crate) fn merge_pieces(mut pieces: Vec<Piece>) -> Vec<Piece> {
    pieces.retain(|p| p.lo < p.hi);
    pieces.sort();
    let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
    for p in pieces {
        match out.last_mut() {
            Some(last) if last.hi == p.lo && last.offset == p.offset => last.hi = p.hi,
            _ => out.push(p),
        }
    }
    out
}

fn check_tiling(mut spans: Vec<(Rational, Rational)>, what: &str) -> Result<()> {
    spans.sort();
    let mut cursor = Rational::zero();
    for (lo, hi) in spans {
        if lo != cursor {
            return Err(Error::InvalidIet(format!(
                "{what} do not tile [0,1): expected a piece at {cursor}, found {lo}"
            )));
        }
        cursor = hi;
    }
    if !cursor.is_one() {
        return Err(Error::InvalidIet(format!("{what} end at {cursor}, not 1")));
    }
    Ok(())
}

impl FiniteIET {
    pub fn new(raw: impl IntoIterator<Item = ((Rational, Rational), Rational)>) -> Result<Self> {
        let pieces: Vec<Piece> = raw
            .into_iter()
            .map(|((lo, hi), offset)| Piece { lo, hi, offset })
            .collect();
        if pieces.is_empty() {
            return Err(Error::InvalidIet("no pieces".into()));
        }
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::InvalidIet(format!("empty or reversed piece [{}, {})", p.lo, p.hi)));
            }
        }
        check_tiling(pieces.iter().map(|p| (p.lo.clone(), p.hi.clone())).collect(), "sources")?;
        check_tiling(pieces.iter().map(Piece::image).collect(), "images")?;
        Ok(FiniteIET {
            pieces: merge_pieces(pieces),
        })
    }

    /// For pieces produced by exact composition of valid IETs.
    pub(crate) fn from_valid(pieces: Vec<Piece>) -> Self {
        let iet = FiniteIET {
            pieces: merge_pieces(pieces),
        };
        debug_assert!(iet.validate().is_ok(), "invalid IET {iet:?}");
        iet
    }

    /// Validating constructor for assembled piece lists.
    pub(crate) fn from_pieces(pieces: Vec<Piece>) -> Result<Self> {
        let iet = FiniteIET {
            pieces: merge_pieces(pieces),
        };
        iet.validate()?;
        Ok(iet)
    }

    pub fn validate(&self) -> Result<()> {
        check_tiling(self.pieces.iter().map(|p| (p.lo.clone(), p.hi.clone())).collect(), "sources")?;
        check_tiling(self.pieces.iter().map(Piece::image).collect(), "images")
    }

    pub fn identity() -> Self {
        FiniteIET {
            pieces: vec![Piece {
                lo: Rational::zero(),
                hi: Rational::one(),
                offset: Rational::zero(),
            }],
        }
    }

    /// `x ↦ x + alpha mod 1`.
    pub fn rotation(alpha: &Rational) -> Result<Self> {
        let a = alpha - &Rational::from_integer(alpha.floor());
        if a.is_zero() {
            return Ok(Self::identity());
        }
        let cut = Rational::one() - &a;
        Ok(FiniteIET::from_valid(vec![
            Piece {
                lo: Rational::zero(),
                hi: cut.clone(),
                offset: a.clone(),
            },
            Piece {
                lo: cut,
                hi: Rational::one(),
                offset: a - Rational::one(),
            },
        ]))
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn is_identity(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].offset.is_zero()
    }

    pub fn apply(&self, x: &Rational) -> Option<Rational> {
        let i = self.pieces.partition_point(|p| p.hi <= *x);
        let p = self.pieces.get(i)?;
        (p.lo <= *x).then(|| x + &p.offset)
    }

    pub fn inverse(&self) -> Self {
        FiniteIET::from_valid(
            self.pieces
                .iter()
                .map(|p| {
                    let (lo, hi) = p.image();
                    Piece {
                        lo,
                        hi,
                        offset: -&p.offset,
                    }
                })
                .collect(),
        )
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &FiniteIET) -> Self {
        FiniteIET::from_valid(compose_pieces(&self.pieces, &inner.pieces))
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::identity();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&sq);
            }
            e >>= 1;
            if e > 0 {
                sq = sq.compose(&sq);
            }
        }
        acc
    }

    /// Union of the pieces with zero offset.
    pub fn fixed_set(&self) -> IntervalEvent {
        IntervalEvent::from_valid(
            self.pieces
                .iter()
                .filter(|p| p.offset.is_zero())
                .map(|p| (p.lo.clone(), p.hi.clone()))
                .collect(),
        )
    }

    /// Forward image of an event.
    pub fn map_event(&self, a: &IntervalEvent) -> IntervalEvent {
        translate_pieces(&self.pieces, a)
    }

    pub fn preimage(&self, a: &IntervalEvent) -> IntervalEvent {
        self.inverse().map_event(a)
    }

    /// Measure of `{x : self(x) ≠ other(x)}`.
    pub fn rho(&self, other: &FiniteIET) -> Rational {
        overlay(&self.pieces, &other.pieces).1
    }

    /// All piece endpoints of sources and images.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self
            .pieces
            .iter()
            .flat_map(|p| {
                let (a, b) = p.image();
                [p.lo.clone(), p.hi.clone(), a, b]
            })
            .collect();
        v.sort();
        v.dedup();
        v
    }
}

/// Order-preserving map of `a` onto `b` by consecutive mass, for `m(a) = m(b)`.
pub(crate) fn match_mass(a: &IntervalEvent, b: &IntervalEvent) -> Vec<Piece> {
    let (xs, ys) = (a.intervals(), b.intervals());
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    let mut pa = xs.first().map(|x| x.0.clone());
    let mut pb = ys.first().map(|y| y.0.clone());
    while let (Some(x), Some(y)) = (pa.clone(), pb.clone()) {
        let len = (&xs[i].1 - &x).min(&ys[j].1 - &y);
        let offset = &y - &x;
        let hi = &x + &len;
        out.push(Piece {
            lo: x,
            hi: hi.clone(),
            offset,
        });
        let yhi = &y + &len;
        pa = if hi == xs[i].1 {
            i += 1;
            xs.get(i).map(|v| v.0.clone())
        } else {
            Some(hi)
        };
        pb = if yhi == ys[j].1 {
            j += 1;
            ys.get(j).map(|v| v.0.clone())
        } else {
            Some(yhi)
        };
    }
    out
}

impl FiniteIET {
    /// An IET sending `a` onto `b` and the complement onto the complement, each
    /// in order of position (leftmost mass to leftmost mass).
    pub fn rearrangement(a: &IntervalEvent, b: &IntervalEvent) -> Result<Self> {
        let (ma, mb) = (a.measure(), b.measure());
        if ma != mb {
            return Err(Error::MeasureMismatch(Box::new(ma), Box::new(mb)));
        }
        let mut pieces = match_mass(a, b);
        pieces.extend(match_mass(&a.complement(), &b.complement()));
        Ok(FiniteIET::from_valid(pieces))
    }
}

/// Composition `outer ∘ inner` of piece lists with disjoint sources and images.
/// Parts of `inner`'s images not covered by `outer` are dropped.
pub(crate) fn compose_pieces(outer: &[Piece], inner: &[Piece]) -> Vec<Piece> {
    let mut out = Vec::with_capacity(outer.len() + inner.len());
    for g in inner {
        let (ilo, ihi) = g.image();
        let mut i = outer.partition_point(|p| p.hi <= ilo);
        while let Some(f) = outer.get(i) {
            if f.lo >= ihi {
                break;
            }
            let lo = if f.lo > ilo { &f.lo } else { &ilo };
            let hi = if f.hi < ihi { &f.hi } else { &ihi };
            if lo < hi {
                out.push(Piece {
                    lo: lo - &g.offset,
                    hi: hi - &g.offset,
                    offset: &g.offset + &f.offset,
                });
            }
            i += 1;
        }
    }
    out
}

/// The pieces with sources clipped to `a`.
pub(crate) fn restrict_pieces(pieces: &[Piece], a: &IntervalEvent) -> Vec<Piece> {
    let ivs = a.intervals();
    let mut out = Vec::new();
    for p in pieces {
        let mut j = ivs.partition_point(|(_, hi)| *hi <= p.lo);
        while let Some((lo, hi)) = ivs.get(j) {
            if *lo >= p.hi {
                break;
            }
            let l = if *lo > p.lo { lo } else { &p.lo };
            let h = if *hi < p.hi { hi } else { &p.hi };
            if l < h {
                out.push(Piece {
                    lo: l.clone(),
                    hi: h.clone(),
                    offset: p.offset.clone(),
                });
            }
            j += 1;
        }
    }
    out
}

/// Image of `a` under the pieces (parts outside every source are dropped).
pub(crate) fn translate_pieces(pieces: &[Piece], a: &IntervalEvent) -> IntervalEvent {
    let ivs = a.intervals();
    let mut out = Vec::new();
    for p in pieces {
        let mut j = ivs.partition_point(|(_, hi)| *hi <= p.lo);
        while let Some((lo, hi)) = ivs.get(j) {
            if *lo >= p.hi {
                break;
            }
            let l = if *lo > p.lo { lo } else { &p.lo };
            let h = if *hi < p.hi { hi } else { &p.hi };
            if l < h {
                out.push((l + &p.offset, h + &p.offset));
            }
            j += 1;
        }
    }
    IntervalEvent::from_valid(out)
}

/// Sweeps two sorted piece lists and returns `(agree, disagree)`: the measure of
/// common source where offsets coincide and where they differ.
pub(crate) fn overlay(a: &[Piece], b: &[Piece]) -> (Rational, Rational) {
    let (mut i, mut j) = (0, 0);
    let mut agree = Rational::zero();
    let mut disagree = Rational::zero();
    while i < a.len() && j < b.len() {
        let lo = if a[i].lo > b[j].lo { &a[i].lo } else { &b[j].lo };
        let hi = if a[i].hi < b[j].hi { &a[i].hi } else { &b[j].hi };
        if lo < hi {
            let len = hi - lo;
            if a[i].offset == b[j].offset {
                agree += len;
            } else {
                disagree += len;
            }
        }
        if a[i].hi < b[j].hi {
            i += 1;
        } else {
            j += 1;
        }
    }
    (agree, disagree)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IetDesc {
    pieces: Vec<((Rational, Rational), Rational)>,
}

impl Serialize for FiniteIET {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        IetDesc {
            pieces: self
                .pieces
                .iter()
                .map(|p| ((p.lo.clone(), p.hi.clone()), p.offset.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteIET {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = IetDesc::deserialize(d)?;
        FiniteIET::new(desc.pieces).map_err(serde::de::Error::custom)
    }
}
