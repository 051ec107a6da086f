//! The uniform distance `ρ(τ, η) = m{x : τx ≠ ηx}` between maps.
//!
//! Exact whenever both maps reduce to finite IETs, or one of them does and the other
//! is built around a single odometer (the odometer agrees with a translation by `c`
//! only on the piece whose offset is `c`). Other interval pairs are expanded into
//! partial piecewise translations at doubling depth until the undetermined part is
//! no larger than the requested gap.

use serde::{Deserialize, Serialize};

use super::iet::{compose_pieces, merge_pieces, overlay, FiniteIET, Piece};
use super::{odometer, Transformation};
use crate::error::{Error, Result};
use crate::measure::Carrier;
use crate::rational::Rational;

const MAX_EXPANSION_DEPTH: u32 = 4096;

/// Certified bounds `lo ≤ ρ ≤ hi`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn exact(v: Rational) -> Self {
        Enclosure { lo: v.clone(), hi: v }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lo <= *v && *v <= self.hi
    }
}

/// Encloses `ρ(a, b)` within `gap`.
pub fn rho_maps(a: &Transformation, b: &Transformation, gap: &Rational) -> Result<Enclosure> {
    if !gap.is_positive() {
        return Err(Error::Precondition(format!("gap {gap} must be positive")));
    }
    let carrier = a.carrier()?;
    carrier.expect(&b.carrier()?)?;
    if a == b {
        return Ok(Enclosure::exact(Rational::zero()));
    }
    match carrier {
        Carrier::Interval => interval_rho(a, b, gap),
        Carrier::Cylinder(_) => {
            let (sa, sb) = (a.shift_power(), b.shift_power());
            match (sa, sb) {
                // A nonzero shift power fixes only periodic points, a null set.
                (Some(x), Some(y)) => Ok(Enclosure::exact(if x == y {
                    Rational::zero()
                } else {
                    Rational::one()
                })),
                _ => Err(Error::Irreducible("cylinder map is not a shift power".into())),
            }
        }
        Carrier::Rect(..) => {
            let (a1, a2) = a
                .as_product()
                .ok_or_else(|| Error::Irreducible("map on a product carrier is not a product".into()))?;
            let (b1, b2) = b
                .as_product()
                .ok_or_else(|| Error::Irreducible("map on a product carrier is not a product".into()))?;
            let half = gap / &Rational::from_integer(2);
            let e1 = rho_maps(&a1, &b1, &half)?;
            let e2 = rho_maps(&a2, &b2, &half)?;
            // The maps agree where both factors agree.
            let one = Rational::one();
            let combine = |x: &Rational, y: &Rational| &one - &((&one - x) * (&one - y));
            Ok(Enclosure {
                lo: combine(&e1.lo, &e2.lo),
                hi: combine(&e1.hi, &e2.hi),
            })
        }
    }
}

fn interval_rho(a: &Transformation, b: &Transformation, gap: &Rational) -> Result<Enclosure> {
    match (a.as_iet(), b.as_iet()) {
        (Some(f), Some(g)) => return Ok(Enclosure::exact(f.rho(&g))),
        (None, Some(g)) => {
            if let Some(v) = exact_against_iet(a, g) {
                return Ok(Enclosure::exact(v));
            }
        }
        (Some(f), None) => {
            if let Some(v) = exact_against_iet(b, f) {
                return Ok(Enclosure::exact(v));
            }
        }
        (None, None) => {}
    }
    let mut depth = 8;
    loop {
        let pa = expand(a, depth)?;
        let pb = expand(b, depth)?;
        let (agree, disagree) = overlay(&pa, &pb);
        let enc = Enclosure {
            lo: disagree,
            hi: Rational::one() - agree,
        };
        if enc.width() <= *gap {
            return Ok(enc);
        }
        if depth >= MAX_EXPANSION_DEPTH {
            return Err(Error::BudgetExceeded(format!(
                "ρ enclosure width {} above gap {gap} at expansion depth {depth}",
                enc.width()
            )));
        }
        depth *= 2;
    }
}

/// `ρ(t, g)` for an IET `g`, if `t` reduces to a single odometer by moving IET
/// factors across.
fn exact_against_iet(t: &Transformation, g: FiniteIET) -> Option<Rational> {
    match t {
        Transformation::Odometer { base } => Some(odometer_vs_iet(*base, &g)),
        // m{τ⁻¹x ≠ gx} = m{y ≠ gτy} = m{g⁻¹y ≠ τy}
        Transformation::Inverse(inner) => exact_against_iet(inner, g.inverse()),
        // m{b⁻¹τbx ≠ gx} = m{τy ≠ b g b⁻¹ y}
        Transformation::Conjugate { inner, by } => {
            let b = by.as_iet()?;
            exact_against_iet(inner, b.compose(&g).compose(&b.inverse()))
        }
        Transformation::Compose(f, h) => {
            if let Some(fi) = f.as_iet() {
                // m{f h x ≠ g x} = m{h x ≠ f⁻¹ g x}
                exact_against_iet(h, fi.inverse().compose(&g))
            } else {
                // m{f h x ≠ g x} = m{f y ≠ g h⁻¹ y}
                let hi = h.as_iet()?;
                exact_against_iet(f, g.compose(&hi.inverse()))
            }
        }
        _ => None,
    }
}

fn odometer_vs_iet(p: u64, g: &FiniteIET) -> Rational {
    let mut agree = Rational::zero();
    for pc in g.pieces() {
        if let Some(k) = odometer::piece_with_offset(p, &pc.offset) {
            let src = odometer::piece(p, k);
            let lo = pc.lo.clone().max(src.lo);
            let hi = pc.hi.clone().min(src.hi);
            if lo < hi {
                agree += hi - lo;
            }
        }
    }
    Rational::one() - agree
}

/// A partial piecewise translation: disjoint sorted sources with disjoint images.
fn expand(t: &Transformation, depth: u32) -> Result<Vec<Piece>> {
    Ok(match t {
        Transformation::Iet(f) => f.pieces().to_vec(),
        Transformation::Odometer { base } => odometer::pieces(*base, depth),
        Transformation::Inverse(inner) => invert(&expand(inner, depth)?),
        Transformation::Compose(f, g) => {
            merge_pieces(compose_pieces(&expand(f, depth)?, &expand(g, depth)?))
        }
        Transformation::Conjugate { inner, by } => {
            let b = expand(by, depth)?;
            let step = merge_pieces(compose_pieces(&expand(inner, depth)?, &b));
            merge_pieces(compose_pieces(&invert(&b), &step))
        }
        Transformation::Shift { .. } | Transformation::Product(..) => {
            return Err(Error::Irreducible("not an interval map".into()))
        }
    })
}

fn invert(pieces: &[Piece]) -> Vec<Piece> {
    merge_pieces(
        pieces
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
