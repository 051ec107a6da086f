//! Marker-word towers for Bernoulli shifts.
//!
//! With `f(x)` the first coordinate `j ≥ 0` where the marker `w` starts, the base is
//! `{f ≡ 0 mod n, f < J, no occurrence of w starting in −(n−1)..−1}`. Shifting moves
//! occurrences right, so a point of `T^d E` with `0 < d < n` has its first occurrence
//! at `f + d`, which is not a multiple of `n`: the `n` levels are disjoint.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::measure::{CylinderEvent, Step};
use crate::rational::Rational;

const MAX_WINDOW: i64 = 1 << 15;
const MAX_MARKER: usize = 64;

/// Lexicographically least word of minimal probability among words of length `len`.
fn least_rare_word(probs: &[Rational], len: usize) -> Vec<usize> {
    let min = probs.iter().min().expect("nonempty");
    let sym = probs.iter().position(|p| p == min).expect("present");
    vec![sym; len]
}

/// Shortest marker with probability below `eps / (2n)`.
pub(crate) fn marker_word(probs: &[Rational], n: usize, eps: &Rational) -> Result<(Vec<usize>, Rational)> {
    let target = eps / &Rational::from_integer(2 * n as i64);
    let min = probs.iter().min().expect("nonempty").clone();
    let mut p = min.clone();
    for len in 1..=MAX_MARKER {
        if p < target {
            return Ok((least_rare_word(probs, len), p));
        }
        p = &p * &min;
    }
    Err(Error::BudgetExceeded(format!(
        "no marker of length ≤ {MAX_MARKER} below probability {target}"
    )))
}

/// Transition table of the string-matching automaton for `w`.
fn matcher(w: &[usize], arity: usize) -> Vec<Vec<usize>> {
    let len = w.len();
    let mut fail = vec![0usize; len + 1];
    let mut k = 0;
    for i in 1..len {
        while k > 0 && w[i] != w[k] {
            k = fail[k];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i + 1] = k;
    }
    let mut delta = vec![vec![0usize; arity]; len];
    #[allow(clippy::needless_range_loop)]
    for state in 0..len {
        for sym in 0..arity {
            delta[state][sym] = if w[state] == sym {
                state + 1
            } else if state == 0 {
                0
            } else {
                delta[fail[state]][sym]
            };
        }
    }
    delta
}

fn base_event(probs: &Arc<[Rational]>, w: &[usize], n: usize, span: i64) -> CylinderEvent {
    let delta = matcher(w, probs.len());
    let len = w.len() as i64;
    let n = n as i64;
    CylinderEvent::from_automaton(
        probs.clone(),
        -(n - 1),
        span + len - 2,
        0usize,
        |pos, &state, sym| {
            let next = delta[state][sym];
            if next < w.len() {
                return Step::Go(next);
            }
            let start = pos - len + 1;
            if start >= 0 && start < span && start % n == 0 {
                Step::Accept
            } else {
                Step::Reject
            }
        },
        |_| false,
    )
}

/// A base whose `n` shifts are disjoint and cover all but less than `eps`.
pub(crate) fn bernoulli_base(probs: &Arc<[Rational]>, n: usize, eps: &Rational) -> Result<CylinderEvent> {
    let (w, pw) = marker_word(probs, n, eps)?;
    let nn = n as i64;
    let start = {
        let inv = pw.recip().ceil();
        let inv = i64::try_from(inv).unwrap_or(MAX_WINDOW);
        (inv.max(1) + nn - 1) / nn * nn
    };
    let mut span = start;
    loop {
        let base = base_event(probs, &w, n, span);
        let covered = base.measure() * Rational::from_integer(nn);
        if Rational::one() - covered < *eps {
            return Ok(base);
        }
        span *= 2;
        if span > MAX_WINDOW {
            return Err(Error::BudgetExceeded(format!(
                "marker tower of height {n} needs a window beyond {MAX_WINDOW} coordinates"
            )));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q;

    #[test]
    fn matcher_handles_overlaps() {
        let d = matcher(&[0, 0, 1], 2);
        assert_eq!(d[2][0], 2);
        assert_eq!(d[2][1], 3);
        assert_eq!(d[1][1], 0);
    }

    #[test]
    fn marker_choice() {
        let (w, p) = marker_word(&[q!(1, 3), q!(2, 3)], 2, &q!(1, 4)).unwrap();
        assert_eq!(w, vec![0, 0, 0]);
        assert_eq!(p, q!(1, 27));
        let (w, _) = marker_word(&[q!(1, 2), q!(1, 2)], 2, &q!(1, 4)).unwrap();
        assert_eq!(w.len(), 5);
    }

    #[test]
    fn levels_disjoint() {
        let probs: Arc<[Rational]> = Arc::from(vec![q!(1, 2), q!(1, 2)]);
        let base = bernoulli_base(&probs, 3, &q!(1, 4)).unwrap();
        for d in 1..3 {
            assert!(!base.intersects(&base.shift(d)));
        }
        assert!(Rational::one() - base.measure() * q!(3) < q!(1, 4));
    }
}
