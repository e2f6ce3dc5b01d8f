//! Truncated power series in `x = q^-1`, the working currency of every head
//! computation. A [`QSeries`] carries its own length; binary operations keep
//! the shorter of the two, so nothing past the retained depth is ever trusted.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::Q_STEP;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", v.join(", "))
    }
}

impl QSeries {
    pub fn zero(len: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); len],
        }
    }

    pub fn constant(c: impl Into<BigInt>, len: usize) -> Self {
        let mut s = Self::zero(len);
        if len > 0 {
            s.coeffs[0] = c.into();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// A finite polynomial in `x`, padded or cut to `len`.
    pub fn from_poly(coeffs: &[i64], len: usize) -> Self {
        let mut s = Self::from_i64(coeffs);
        s.coeffs.resize(len, BigInt::zero());
        s
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn get(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn first_nonzero(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(len);
        Self { coeffs: c }
    }

    /// Zero-padded or cut to exactly `len`; padding asserts nothing about
    /// the missing coefficients, so use only on finite objects.
    pub fn resized(&self, len: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.resize(len, BigInt::zero());
        Self { coeffs: c }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        Self {
            coeffs: (0..n).map(|i| &self.coeffs[i] - &other.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add_assign_shifted(&mut self, other: &Self, offset: usize) {
        for (i, c) in other.coeffs.iter().enumerate() {
            let j = i + offset;
            if j >= self.coeffs.len() {
                break;
            }
            self.coeffs[j] += c;
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.len().min(other.len());
        let mut out = vec![BigInt::zero(); n];
        for (i, a) in self.coeffs.iter().take(n).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(n - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn inv(&self) -> Result<Self> {
        let lead = self.coeffs.first().ok_or(Error::AllZero)?;
        if !lead.abs().is_one() {
            return Err(if lead.is_zero() {
                Error::AllZero
            } else {
                Error::NonUnitLeading
            });
        }
        let n = self.len();
        let mut out: Vec<BigInt> = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = if i == 0 { BigInt::one() } else { BigInt::zero() };
            for j in 1..=i {
                if !self.coeffs[j].is_zero() {
                    acc -= &self.coeffs[j] * &out[i - j];
                }
            }
            out.push(acc * lead);
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplies by `x^s`, keeping the length.
    pub fn shift(&self, s: usize) -> Self {
        let n = self.len();
        let mut out = vec![BigInt::zero(); n];
        if s < n {
            out[s..].clone_from_slice(&self.coeffs[..n - s]);
        }
        Self { coeffs: out }
    }

    /// Multiplies by `(1 - x^k)^m`; negative `m` divides.
    pub fn mul_one_minus_xk_pow(&self, k: usize, m: i64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        if k == 0 {
            return Self::zero(n);
        }
        for _ in 0..m.max(0) {
            for i in (k..n).rev() {
                let sub = c[i - k].clone();
                c[i] -= sub;
            }
        }
        for _ in 0..(-m).max(0) {
            for i in k..n {
                let add = c[i - k].clone();
                c[i] += add;
            }
        }
        Self { coeffs: c }
    }

    /// `1/(1 - x^k)` to length `len`.
    pub fn geometric(k: usize, len: usize) -> Self {
        Self::constant(1, len).mul_one_minus_xk_pow(k, -1)
    }

    pub fn halve(&self) -> Result<Self> {
        let two = BigInt::from(2);
        self.coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(&two);
                if r.is_zero() {
                    Ok(q)
                } else {
                    Err(Error::NonExactDivision)
                }
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::from_coeffs)
    }

    /// Strips leading zeros and reports how many were removed.
    pub fn left_justify(&self) -> Result<(Self, usize)> {
        let k = self.first_nonzero().ok_or(Error::AllZero)?;
        Ok((
            Self {
                coeffs: self.coeffs[k..].to_vec(),
            },
            k,
        ))
    }
}

/// Length of the common prefix of two coefficient vectors.
pub fn agreement(a: &[BigInt], b: &[BigInt]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// `A^lead · s(A^4)`: a quantity read from its lowest `A`-exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopSeries {
    pub lead: i64,
    pub series: QSeries,
}

impl TopSeries {
    pub fn new(lead: i64, series: QSeries) -> Self {
        Self { lead, series }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            lead: self.lead + other.lead,
            series: self.series.mul(&other.series),
        }
    }

    /// Re-expresses the series relative to `A^base`, cut to `len`.
    /// Returns `None` if the exponent offset is not a whole number of
    /// `q`-units.
    pub fn aligned(&self, base: i64, len: usize) -> Option<QSeries> {
        let off = self.lead - base;
        assert!(off >= 0, "series starts below the alignment base");
        if off % Q_STEP != 0 {
            return None;
        }
        let off = (off / Q_STEP) as usize;
        let mut out = QSeries::zero(len);
        out.add_assign_shifted(&self.series, off);
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[i64]) -> QSeries {
        QSeries::from_i64(v)
    }

    #[test]
    fn invert_geometric() {
        let inv = s(&[1, -1, 0, 0, 0]).inv().unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1]));
        assert_eq!(QSeries::geometric(1, 5), inv);
        assert_eq!(s(&[2, 1]).inv(), Err(Error::NonUnitLeading));
        assert_eq!(s(&[-1, 1, 0]).inv().unwrap(), s(&[-1, -1, -1]));
    }

    #[test]
    fn shift_moves_first_nonzero() {
        let sh = s(&[4, -1, 0, 0]).shift(2);
        assert_eq!(sh.first_nonzero(), Some(2));
        assert_eq!(sh, s(&[0, 0, 4, -1]));
    }

    #[test]
    fn left_justify_examples() {
        assert_eq!(s(&[0, 0, 4, -4, 3]).left_justify().unwrap(), (s(&[4, -4, 3]), 2));
        assert_eq!(s(&[1]).left_justify().unwrap(), (s(&[1]), 0));
        assert_eq!(s(&[0, 0, 0, 0]).left_justify(), Err(Error::AllZero));
    }

    #[test]
    fn halving() {
        assert_eq!(s(&[2, -4, 0]).halve().unwrap(), s(&[1, -2, 0]));
        assert_eq!(s(&[1]).halve(), Err(Error::NonExactDivision));
    }

    fn series(len: usize) -> impl Strategy<Value = QSeries> {
        prop::collection::vec(-20i64..20, len).prop_map(|v| QSeries::from_i64(&v))
    }

    proptest! {
        #[test]
        fn one_minus_xk_round_trip(a in series(12), k in 1usize..5, m in 0i64..3) {
            let there = a.mul_one_minus_xk_pow(k, m);
            prop_assert_eq!(there.mul_one_minus_xk_pow(k, -m), a);
        }

        #[test]
        fn unit_inverse(mut a in series(10)) {
            a = a.sub(&a.truncate(1).resized(10)).add(&QSeries::constant(1, 10));
            let inv = a.inv().unwrap();
            prop_assert_eq!(a.mul(&inv), QSeries::constant(1, 10));
        }

        #[test]
        fn mul_matches_binomial_factor(a in series(9), k in 1usize..4) {
            let mut f = vec![0i64; 9];
            f[0] = 1;
            f[k] = -1;
            prop_assert_eq!(a.mul(&QSeries::from_i64(&f)), a.mul_one_minus_xk_pow(k, 1));
        }
    }
}
