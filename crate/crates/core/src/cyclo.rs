//! Cyclotomic bookkeeping in `x = A^4`.
//!
//! Every quantum integer factors as `[k] = A^{-2(k-1)} ∏_{d|k, d>1} Φ_d(x)`, so a
//! quotient of quantum factorials is a Laurent polynomial exactly when no
//! cyclotomic multiplicity is negative. Expansion goes through the Möbius
//! form `Φ_d = ∏_{e|d} (x^e - 1)^{μ(d/e)}`, which turns the whole product into
//! multiplications and exact divisions by binomials `x^k - 1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{LaurentPoly, Q_STEP};

pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

pub fn mobius(n: u32) -> i32 {
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Exponents `a_k` with `∏ Φ_d^{μ_d} = ∏ (x^k - 1)^{a_k}`.
pub fn binomial_exponents(factors: &BTreeMap<u32, i32>) -> BTreeMap<u32, i32> {
    let mut out: BTreeMap<u32, i32> = BTreeMap::new();
    for (&d, &m) in factors {
        for e in divisors(d) {
            let mu = mobius(d / e);
            if mu != 0 {
                *out.entry(e).or_insert(0) += mu * m;
            }
        }
    }
    out.retain(|_, a| *a != 0);
    out
}

/// Dense coefficients of `Φ_d(x)`.
pub fn cyclotomic_poly(d: u32) -> Vec<BigInt> {
    let mut f = BTreeMap::new();
    f.insert(d, 1);
    expand_binomials(&binomial_exponents(&f)).expect("cyclotomic polynomials are polynomials")
}

/// `p · (x^k - 1)` in place, growing `p`.
pub(crate) fn mul_binomial(p: &mut Vec<BigInt>, k: usize) {
    let n = p.len();
    p.resize(n + k, BigInt::zero());
    for i in (0..n + k).rev() {
        let lower = if i >= k { p[i - k].clone() } else { BigInt::zero() };
        let cur = if i < n { std::mem::take(&mut p[i]) } else { BigInt::zero() };
        p[i] = lower - cur;
    }
}

/// `p / (x^k - 1)`, or `None` if the division leaves a remainder.
pub(crate) fn div_binomial(p: &[BigInt], k: usize) -> Option<Vec<BigInt>> {
    if p.len() < k + 1 {
        return if p.iter().all(|c| c.is_zero()) { Some(vec![]) } else { None };
    }
    let qlen = p.len() - k;
    // p[i] = q[i-k] - q[i]
    let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
    for i in 0..qlen {
        let prev = if i >= k { q[i - k].clone() } else { BigInt::zero() };
        q.push(prev - &p[i]);
    }
    for (i, pi) in p.iter().enumerate().skip(qlen) {
        let ok = if i >= k { q[i - k] == *pi } else { pi.is_zero() };
        if !ok {
            return None;
        }
    }
    Some(q)
}

fn expand_binomials(exps: &BTreeMap<u32, i32>) -> Result<Vec<BigInt>> {
    let mut p = vec![BigInt::from(1)];
    for (&k, &a) in exps {
        for _ in 0..a.max(0) {
            mul_binomial(&mut p, k as usize);
        }
    }
    for (&k, &a) in exps {
        for _ in 0..(-a).max(0) {
            p = div_binomial(&p, k as usize).ok_or(Error::NonExactDivision)?;
        }
    }
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    Ok(p)
}

/// `± A^exponent · ∏ Φ_d(A^4)^{μ_d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloScalar {
    pub negative: bool,
    pub exponent: i64,
    pub factors: BTreeMap<u32, i32>,
}

impl CycloScalar {
    pub fn one() -> Self {
        Self {
            negative: false,
            exponent: 0,
            factors: BTreeMap::new(),
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.factors.values().all(|m| *m >= 0)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.negative ^= other.negative;
        out.exponent += other.exponent;
        for (d, m) in &other.factors {
            *out.factors.entry(*d).or_insert(0) += m;
        }
        out.factors.retain(|_, m| *m != 0);
        out
    }

    /// Splits into `(numerator, denominator)` with nonnegative multiplicities;
    /// sign and monomial stay in the numerator.
    pub fn split(&self) -> (Self, Self) {
        let mut num = Self {
            factors: BTreeMap::new(),
            ..self.clone()
        };
        let mut den = Self::one();
        for (&d, &m) in &self.factors {
            if m > 0 {
                num.factors.insert(d, m);
            } else {
                den.factors.insert(d, -m);
            }
        }
        (num, den)
    }

    /// Dense coefficients in `x` of the cyclotomic part, ignoring sign and
    /// monomial.
    pub fn dense_in_x(&self) -> Result<Vec<BigInt>> {
        expand_binomials(&binomial_exponents(&self.factors))
    }

    pub fn expand(&self) -> Result<LaurentPoly> {
        if !self.is_polynomial() {
            return Err(Error::NonExactDivision);
        }
        let mut dense = self.dense_in_x()?;
        if self.negative {
            for c in dense.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        Ok(LaurentPoly::from_dense(self.exponent, Q_STEP, dense))
    }
}

/// `p / c` for a polynomial cyclotomic scalar `c`, by binomial steps on the
/// dense `x`-grid of `p`.
pub fn div_exact(p: &LaurentPoly, c: &CycloScalar) -> Result<LaurentPoly> {
    if !c.is_polynomial() {
        return Err(Error::NonExactDivision);
    }
    let Some(base) = p.min_exponent() else {
        return Ok(LaurentPoly::zero());
    };
    if p.exponent_gcd() % Q_STEP != 0 {
        return p.exact_div(&c.expand()?);
    }
    let top = p.max_exponent().unwrap();
    let mut dense = vec![BigInt::zero(); ((top - base) / Q_STEP) as usize + 1];
    for (e, v) in p.terms() {
        dense[((e - base) / Q_STEP) as usize] = if c.negative { -v } else { v.clone() };
    }
    let exps = binomial_exponents(&c.factors);
    for (&k, &a) in &exps {
        for _ in 0..(-a).max(0) {
            mul_binomial(&mut dense, k as usize);
        }
    }
    for (&k, &a) in &exps {
        for _ in 0..a.max(0) {
            dense = div_binomial(&dense, k as usize).ok_or(Error::NonExactDivision)?;
        }
    }
    Ok(LaurentPoly::from_dense(base - c.exponent, Q_STEP, dense))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&c| BigInt::from(c)).collect()
    }

    #[test]
    fn divisors_and_mobius() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(49), vec![1, 7, 49]);
        let mu: Vec<i32> = (1..=10).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic_poly(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_poly(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_poly(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_poly(12), ints(&[1, 0, -1, 0, 1]));
        // Φ_105 is the first with a coefficient of absolute value 2
        assert!(cyclotomic_poly(105).iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn product_over_divisors_is_binomial() {
        for n in 1..40u32 {
            let mut p = vec![BigInt::from(1)];
            for d in divisors(n) {
                let f = cyclotomic_poly(d);
                let mut out = vec![BigInt::zero(); p.len() + f.len() - 1];
                for (i, a) in p.iter().enumerate() {
                    for (j, b) in f.iter().enumerate() {
                        out[i + j] += a * b;
                    }
                }
                p = out;
            }
            let mut want = vec![BigInt::zero(); n as usize + 1];
            want[0] = BigInt::from(-1);
            want[n as usize] = BigInt::from(1);
            assert_eq!(p, want, "n = {n}");
        }
    }

    #[test]
    fn cyclotomic_division() {
        let mut f = BTreeMap::new();
        f.insert(3, 2);
        f.insert(4, 1);
        f.insert(1, 1);
        let c = CycloScalar { negative: true, exponent: -6, factors: f };
        let p = LaurentPoly::from_terms([(-3, 5), (1, -2), (9, 7), (13, 1)]);
        let prod = &p * &c.expand().unwrap();
        assert_eq!(div_exact(&prod, &c).unwrap(), p);
        assert_eq!(div_exact(&p, &c), Err(Error::NonExactDivision));
    }

    #[test]
    fn binomial_division_detects_remainder() {
        let mut p = ints(&[1, 2, 3]);
        mul_binomial(&mut p, 2);
        assert_eq!(div_binomial(&p, 2).unwrap(), ints(&[1, 2, 3]));
        assert!(div_binomial(&ints(&[1, 2, 3]), 2).is_none());
    }
}
