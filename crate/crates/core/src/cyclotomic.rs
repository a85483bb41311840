//! Exact arithmetic in `Z[ζ_n]` for prime-power orders `n = p^s`.
//!
//! Every character value and every character sum in this crate is a
//! [`CycInt`]. Values are kept in canonical form: the coefficient vector is
//! the remainder modulo the cyclotomic polynomial
//! `Φ_{p^s}(x) = Σ_{j<p} x^{j·p^{s-1}}`. Because `Φ_{p^s}` is monic with 0/1
//! coefficients the remainder stays integral, and two values are equal
//! exactly when their canonical coefficient vectors are equal.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Returns the prime `p` with `n = p^s`, if any.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > n {
        p = n;
    }
    let mut rest = n;
    while rest.is_multiple_of(p) {
        rest /= p;
    }
    (rest == 1).then_some(p)
}

/// An element of `Z[ζ_n]`, `n` a prime power, in canonical form.
///
/// `coeffs[k]` is the coefficient of `ζ_n^k`; canonical vectors have zeros
/// at every `k ≥ n − n/p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawCycInt")]
pub struct CycInt {
    order: u32,
    coeffs: Vec<i64>,
}

#[derive(Deserialize)]
struct RawCycInt {
    order: u32,
    coeffs: Vec<i64>,
}

impl TryFrom<RawCycInt> for CycInt {
    type Error = Error;

    fn try_from(raw: RawCycInt) -> Result<Self> {
        let value = CycInt::from_coeffs(raw.order, raw.coeffs.clone())?;
        if value.coeffs != raw.coeffs {
            return Err(Error::Malformed(format!(
                "cyclotomic coefficients {:?} are not canonical for order {}",
                raw.coeffs, raw.order
            )));
        }
        Ok(value)
    }
}

fn check_order(n: u32) -> Result<u32> {
    prime_power_base(n as u64)
        .map(|p| p as u32)
        .ok_or(Error::NotPrimePower(n as u64))
}

fn checked(v: Option<i64>) -> i64 {
    v.expect("cyclotomic coefficient overflowed i64")
}

impl CycInt {
    /// The zero of `Z[ζ_n]`.
    pub fn zero(n: u32) -> Result<Self> {
        check_order(n)?;
        Ok(Self {
            order: n,
            coeffs: vec![0; n as usize],
        })
    }

    pub fn from_integer(n: u32, value: i64) -> Result<Self> {
        let mut z = Self::zero(n)?;
        z.coeffs[0] = value;
        Ok(z)
    }

    /// `ζ_n^k`, with `k` taken modulo `n`.
    pub fn root(n: u32, k: i64) -> Result<Self> {
        let p = check_order(n)?;
        let mut coeffs = vec![0; n as usize];
        coeffs[k.rem_euclid(n as i64) as usize] = 1;
        Ok(Self::canonical(n, p, coeffs))
    }

    /// Canonicalizes an arbitrary coefficient vector (indices taken modulo `n`).
    pub fn from_coeffs(n: u32, raw: Vec<i64>) -> Result<Self> {
        let p = check_order(n)?;
        let mut coeffs = vec![0i64; n as usize];
        for (k, c) in raw.into_iter().enumerate() {
            let slot = &mut coeffs[k % n as usize];
            *slot = checked(slot.checked_add(c));
        }
        Ok(Self::canonical(n, p, coeffs))
    }

    /// Builds `Σ_k counts[k]·ζ_n^k`, the form every character sum arrives in.
    pub fn from_exponent_counts(n: u32, counts: &[u64]) -> Result<Self> {
        if counts.len() != n as usize {
            return Err(Error::Dimension(format!(
                "{} exponent counts for order {n}",
                counts.len()
            )));
        }
        let raw = counts
            .iter()
            .map(|&c| i64::try_from(c).expect("character-sum count exceeds i64"))
            .collect();
        Self::from_coeffs(n, raw)
    }

    fn canonical(n: u32, p: u32, mut coeffs: Vec<i64>) -> Self {
        let n = n as usize;
        let step = n / p as usize;
        let top = n - step;
        // x^k with k >= (p-1)·step is rewritten via x^{(p-1)step} = -Σ_{j<p-1} x^{j·step}.
        for k in (top..n).rev() {
            let c = coeffs[k];
            if c == 0 {
                continue;
            }
            let base = k - top;
            for j in 0..p as usize {
                let idx = base + j * step;
                coeffs[idx] = checked(coeffs[idx].checked_sub(c));
            }
        }
        Self {
            order: n as u32,
            coeffs,
        }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order == other.order {
            Ok(())
        } else {
            Err(Error::MixedOrder(self.order, other.order))
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| checked(a.checked_add(*b)))
            .collect();
        Ok(Self {
            order: self.order,
            coeffs,
        })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(-1)
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| checked(c.checked_mul(k)))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.order as usize;
        let mut raw = vec![0i64; n];
        for (i, a) in self.coeffs.iter().enumerate().filter(|(_, a)| **a != 0) {
            for (j, b) in other.coeffs.iter().enumerate().filter(|(_, b)| **b != 0) {
                let slot = &mut raw[(i + j) % n];
                *slot = checked(slot.checked_add(checked(a.checked_mul(*b))));
            }
        }
        Self::from_coeffs(self.order, raw)
    }

    /// Sums a non-empty list of values of one order.
    pub fn sum<'a, I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = &'a CycInt>,
    {
        let mut iter = terms.into_iter();
        let first = iter
            .next()
            .ok_or_else(|| Error::Dimension("empty cyclotomic sum has no order".into()))?
            .clone();
        iter.try_fold(first, |acc, t| acc.try_add(t))
    }

    /// Complex conjugation, `ζ^k ↦ ζ^{-k}`.
    pub fn conj(&self) -> Self {
        let n = self.order as usize;
        let mut raw = vec![0i64; n];
        for (k, c) in self.coeffs.iter().enumerate() {
            raw[(n - k) % n] = *c;
        }
        Self::from_coeffs(self.order, raw).expect("order already validated")
    }

    /// The value as an integer, when every non-constant coefficient vanishes.
    pub fn as_integer(&self) -> Option<i64> {
        self.coeffs[1..]
            .iter()
            .all(|c| *c == 0)
            .then_some(self.coeffs[0])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == 0)
    }
}

impl fmt::Debug for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycInt({self})")
    }
}

impl fmt::Display for CycInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().filter(|(_, c)| **c != 0) {
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.unsigned_abs();
            match (k, mag) {
                (0, _) => write!(f, "{mag}")?,
                (_, 1) => write!(f, "z{}^{k}", self.order)?,
                _ => write!(f, "{mag}*z{}^{k}", self.order)?,
            }
        }
        Ok(())
    }
}
