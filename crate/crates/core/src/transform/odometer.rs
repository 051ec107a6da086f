//! The base-`p` odometer: add one with carry to the digit expansion of `x`.
//!
//! Piece `k ≥ 1` is the set where the first `k − 1` digits are `p − 1` and digit `k`
//! is smaller, `[1 − p^{1−k}, 1 − p^{−k})`. It is translated onto `[p^{−k}, p^{1−k})`.
//! Beyond a chosen depth `K` the tail `[1 − p^{−K}, 1)` is handled as one block,
//! which the map sends onto `[0, p^{−K})`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::iet::{FiniteIET, Piece};
use crate::measure::IntervalEvent;
use crate::rational::Rational;

/// Source and offset of piece `k ≥ 1`.
pub fn piece(p: u64, k: u32) -> Piece {
    let small = Rational::inv_power(p, k);
    let big = &small * &Rational::from_integer(p);
    Piece {
        lo: Rational::one() - &big,
        hi: Rational::one() - &small,
        offset: &small + &big - Rational::one(),
    }
}

/// Offset `(p+1)p^{-k} - 1` of piece `k`; returns the `k` with this offset, if any.
pub fn piece_with_offset(p: u64, offset: &Rational) -> Option<u32> {
    let r = (offset + &Rational::one()) / Rational::from_integer(p + 1);
    if !r.numer().is_one() {
        return None;
    }
    let mut d = r.denom().clone();
    let base = BigInt::from(p);
    let mut k = 0u32;
    while !d.is_one() {
        if !(&d % &base).is_zero() {
            return None;
        }
        d /= &base;
        k += 1;
    }
    (k >= 1).then_some(k)
}

/// Smallest `K ≥ 1` with `p^{−K} ≤ gap`.
fn depth_for(p: u64, gap: &Rational) -> u32 {
    let mut k = 1;
    let mut scale = Rational::inv_power(p, 1);
    let step = Rational::inv_power(p, 1);
    while scale > *gap {
        scale = &scale * &step;
        k += 1;
    }
    k
}

/// The first `depth` pieces.
pub fn pieces(p: u64, depth: u32) -> Vec<Piece> {
    let mut v: Vec<Piece> = (1..=depth).map(|k| piece(p, k)).collect();
    v.sort();
    v
}

/// The depth-`k` truncation: pieces `1..=k` and the tail sent onto `[0, p^{−k})`.
/// It is a cycle of period `p^k`.
pub fn truncation(p: u64, k: u32) -> FiniteIET {
    let mut v = pieces(p, k);
    let small = Rational::inv_power(p, k);
    v.push(Piece {
        lo: Rational::one() - &small,
        hi: Rational::one(),
        offset: small - Rational::one(),
    });
    FiniteIET::from_valid(v)
}

/// Level `m` of the depth-`k` tower over `[0, p^{−k})`: the cell whose digits, read
/// from the first, spell `m` in base `p` from the least significant end.
pub fn cell(p: u64, k: u32, m: u64) -> (Rational, Rational) {
    let mut x = BigInt::zero();
    let mut rest = m;
    for _ in 0..k {
        x = x * BigInt::from(p) + BigInt::from(rest % p);
        rest /= p;
    }
    let width = Rational::inv_power(p, k);
    let lo = Rational::from_integer(x) * &width;
    let hi = &lo + &width;
    (lo, hi)
}

/// Image of `a` under the odometer.
pub fn forward(p: u64, a: &IntervalEvent) -> IntervalEvent {
    let gap = a
        .endpoints()
        .filter(|e| !e.is_one())
        .map(|e| Rational::one() - e)
        .min();
    match gap {
        Some(gap) if !a.is_empty() => truncation(p, depth_for(p, &gap)).map_event(a),
        _ => a.clone(),
    }
}

/// Preimage of `a` under the odometer.
pub fn backward(p: u64, a: &IntervalEvent) -> IntervalEvent {
    let gap = a.endpoints().filter(|e| e.is_positive()).min().cloned();
    match gap {
        Some(gap) if !a.is_empty() => truncation(p, depth_for(p, &gap)).preimage(a),
        _ => a.clone(),
    }
}

/// Point evaluation: the image of a rational `x` in `[0, 1)`.
pub fn apply(p: u64, x: &Rational) -> Rational {
    let mut k = 1;
    loop {
        let pc = piece(p, k);
        if *x < pc.hi {
            return x + &pc.offset;
        }
        k += 1;
    }
}
