//! Conditional entropy of finite algebras and entropy sequences of a transformation.
//!
//! Cell probabilities are exact. Only the final `p·ln(p/c)` terms are evaluated in
//! floating point, with the ratio reduced before the logarithm.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::measure::{Event, FiniteAlgebra};
use crate::rational::Rational;
use crate::transform::System;

#[derive(Clone, Copy, Debug)]
pub struct EntropyOptions {
    /// Mantissa bits kept in reported values, `1..=53`.
    pub precision: u32,
}

impl Default for EntropyOptions {
    fn default() -> Self {
        EntropyOptions { precision: 53 }
    }
}

impl EntropyOptions {
    pub fn with_precision(precision: u32) -> Result<Self> {
        if !(1..=53).contains(&precision) {
            return Err(Error::Precondition(format!(
                "precision {precision} outside 1..=53 bits"
            )));
        }
        Ok(EntropyOptions { precision })
    }
}

/// `H(A/C)` with the exact probabilities it was computed from.
#[derive(Clone, PartialEq, Debug)]
pub struct EntropyValue {
    pub value: f64,
    /// `m(A_i ∩ C_j)` for every nonempty cell.
    pub exact_probs: Vec<Rational>,
    /// `m(C_j)` for the conditioning atom of each cell.
    pub condition_probs: Vec<Rational>,
}

impl EntropyValue {
    pub fn cell_count(&self) -> usize {
        self.exact_probs.len()
    }

    fn from_cells(cells: Vec<(Rational, Rational)>, options: EntropyOptions) -> Self {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (p, c) in &cells {
            if p == c {
                continue;
            }
            let term = -p.to_f64() * (p / c).ln();
            // Neumaier summation.
            let t = sum + term;
            if sum.abs() >= term.abs() {
                comp += (sum - t) + term;
            } else {
                comp += (term - t) + sum;
            }
            sum = t;
        }
        let value = round_mantissa((sum + comp).max(0.0), options.precision);
        let (exact_probs, condition_probs) = cells.into_iter().unzip();
        EntropyValue {
            value,
            exact_probs,
            condition_probs,
        }
    }
}

fn round_mantissa(x: f64, bits: u32) -> f64 {
    if bits >= 53 || x == 0.0 || !x.is_finite() {
        return x;
    }
    let e = x.abs().log2().floor() as i32;
    let scale = 2f64.powi(bits as i32 - 1 - e);
    (x * scale).round() / scale
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EntropyDesc {
    value: String,
    exact_probs: Vec<Rational>,
    condition_probs: Vec<Rational>,
}

impl Serialize for EntropyValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EntropyDesc {
            value: format!("{}", self.value),
            exact_probs: self.exact_probs.clone(),
            condition_probs: self.condition_probs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EntropyValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = EntropyDesc::deserialize(d)?;
        let value = desc.value.parse().map_err(serde::de::Error::custom)?;
        if desc.exact_probs.len() != desc.condition_probs.len() {
            return Err(serde::de::Error::custom("probability vectors differ in length"));
        }
        Ok(EntropyValue {
            value,
            exact_probs: desc.exact_probs,
            condition_probs: desc.condition_probs,
        })
    }
}

/// Nonempty cells `(m(a ∩ c), m(c))`.
fn cells(a: &FiniteAlgebra, c: &FiniteAlgebra) -> Result<Vec<(Rational, Rational)>> {
    a.carrier().expect(c.carrier())?;
    let mut out = Vec::new();
    for cj in c.atoms() {
        let mc = cj.measure();
        for ai in a.atoms() {
            let p = ai.intersection(cj)?.measure();
            if p.is_positive() {
                out.push((p, mc.clone()));
            }
        }
    }
    Ok(out)
}

/// `H(A/C) = −Σ m(A_i ∩ C_j) ln(m(A_i ∩ C_j)/m(C_j))`.
pub fn entropy(a: &FiniteAlgebra, c: &FiniteAlgebra) -> Result<EntropyValue> {
    entropy_with(a, c, EntropyOptions::default())
}

pub fn entropy_with(a: &FiniteAlgebra, c: &FiniteAlgebra, options: EntropyOptions) -> Result<EntropyValue> {
    Ok(EntropyValue::from_cells(cells(a, c)?, options))
}

/// `τ^{-k}(A)`.
pub fn pull_algebra(system: &System, a: &FiniteAlgebra, k: i64) -> Result<FiniteAlgebra> {
    system.carrier().expect(a.carrier())?;
    let atoms = a
        .atoms()
        .iter()
        .map(|e| system.pull(k, e))
        .collect::<Result<Vec<Event>>>()?;
    Ok(FiniteAlgebra::from_atoms(a.carrier().clone(), atoms))
}

/// `⋁_{i=1..k} τ^{-i}(A)` for `k = 1..=n`.
pub fn pasts(system: &System, a: &FiniteAlgebra, n: usize) -> Result<Vec<FiniteAlgebra>> {
    let mut out = Vec::with_capacity(n);
    let mut past = FiniteAlgebra::trivial(a.carrier());
    for k in 1..=n {
        past = past.join(&pull_algebra(system, a, k as i64)?)?;
        out.push(past.clone());
    }
    Ok(out)
}

/// One row of an entropy sequence.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct HRow {
    pub k: usize,
    /// `(1/k) H(⋁_{i<k} τ^{-i}A)`.
    pub cesaro: EntropyValue,
    /// `H(A | ⋁_{i=1..k} τ^{-i}A)`.
    pub conditional: EntropyValue,
}

pub fn h_sequence(system: &System, a: &FiniteAlgebra, n: usize) -> Result<Vec<HRow>> {
    h_sequence_with(system, a, n, EntropyOptions::default())
}

pub fn h_sequence_with(
    system: &System,
    a: &FiniteAlgebra,
    n: usize,
    options: EntropyOptions,
) -> Result<Vec<HRow>> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let trivial = FiniteAlgebra::trivial(a.carrier());
    let pasts = pasts(system, a, n)?;
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        let joined = if k == 1 { a.clone() } else { a.join(&pasts[k - 2])? };
        let mut cesaro = entropy_with(&joined, &trivial, options)?;
        cesaro.value /= k as f64;
        let conditional = entropy_with(a, &pasts[k - 1], options)?;
        rows.push(HRow {
            k,
            cesaro,
            conditional,
        });
    }
    Ok(rows)
}

/// Whether `A` is independent of `⋁_{i=1..k} τ^{-i}A` for every `k ≤ n`, by the exact
/// product formula on all cells.
pub fn is_transformally_independent_upto(system: &System, a: &FiniteAlgebra, n: usize) -> Result<bool> {
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    for past in pasts(system, a, n)? {
        for x in a.atoms() {
            let mx = x.measure();
            for y in past.atoms() {
                if x.intersection(y)?.measure() != &mx * &y.measure() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DefinabilityPath {
    /// Every atom is a union of atoms of the past.
    Exact,
    /// `H(A | past) ≤ tol`.
    Numeric,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct Definability {
    pub definable: bool,
    pub path: DefinabilityPath,
    /// Conditional entropy, computed on the numeric path.
    pub value: Option<f64>,
}

pub fn is_transformally_definable_upto(
    system: &System,
    a: &FiniteAlgebra,
    m: usize,
    tol: f64,
) -> Result<Definability> {
    if m == 0 {
        return Err(Error::Precondition("m must be at least 1".into()));
    }
    if tol.is_nan() || tol < 0.0 {
        return Err(Error::Precondition(format!("tolerance {tol} must be ≥ 0")));
    }
    let past = pasts(system, a, m)?.pop().expect("m ≥ 1");
    if tol == 0.0 {
        let mut definable = true;
        for x in a.atoms() {
            if past.decompose(x)?.is_none() {
                definable = false;
                break;
            }
        }
        return Ok(Definability {
            definable,
            path: DefinabilityPath::Exact,
            value: None,
        });
    }
    let h = entropy(a, &past)?.value;
    Ok(Definability {
        definable: h <= tol,
        path: DefinabilityPath::Numeric,
        value: Some(h),
    })
}
