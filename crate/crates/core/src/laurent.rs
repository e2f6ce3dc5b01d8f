//! Exact Laurent polynomials in the skein variable `A` (with `q = A^-4`) and
//! quantum scalars kept in factored form.
//!
//! Everything downstream is built on two types:
//!
//! - [`LaurentPoly`]: a sparse map from integer `A`-exponents to
//!   arbitrary-precision coefficients, stored sorted by exponent with no zero
//!   coefficients.
//! - [`FactoredScalar`]: `± A^e · {1}^u · ∏ [k]^m_k`, the shape taken by every
//!   product or quotient of quantum factorials. Multiplication is bookkeeping
//!   on exponents, so ratios such as `Δ_{2j} / θ(N, N, 2j)` cancel before any
//!   polynomial is formed.
//!
//! Orientation: "highest degree" always means highest power of `q`, which is
//! the *lowest* power of `A`. [`canonicalize`] reads coefficients from that end.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::cyclo;
use crate::error::{Error, Result};
use crate::series::{QSeries, TopSeries};

/// A-exponent spacing of one power of `q`.
pub const Q_STEP: i64 = 4;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(i64, BigInt)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, BigInt::one())
    }

    pub fn monomial(exponent: i64, coefficient: impl Into<BigInt>) -> Self {
        let c = coefficient.into();
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: vec![(exponent, c)],
        }
    }

    /// Builds a polynomial from arbitrary `(exponent, coefficient)` pairs,
    /// combining repeats and dropping zeros.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        Self::from_sorted_map(map)
    }

    fn from_sorted_map(map: BTreeMap<i64, BigInt>) -> Self {
        Self {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Dense coefficients `coeffs[t]` of `A^(base + step*t)`.
    pub fn from_dense(base: i64, step: i64, coeffs: Vec<BigInt>) -> Self {
        Self {
            terms: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(t, c)| (base + step * t as i64, c))
                .collect(),
        }
    }

    pub fn terms(&self) -> &[(i64, BigInt)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.first().map(|t| t.0)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.last().map(|t| t.0)
    }

    pub fn coefficient(&self, exponent: i64) -> BigInt {
        match self.terms.binary_search_by_key(&exponent, |t| t.0) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    /// Value at `A = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.iter().map(|t| &t.1).sum()
    }

    /// gcd of the pairwise exponent differences; 0 for fewer than two terms.
    pub fn exponent_gcd(&self) -> i64 {
        let Some(base) = self.min_exponent() else {
            return 0;
        };
        self.terms
            .iter()
            .fold(0i64, |g, (e, _)| g.gcd(&(e - base)))
    }

    /// Multiplies by `A^e`.
    pub fn shift(&self, e: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Substitutes `A -> A^-1`.
    pub fn mirror(&self) -> Self {
        let mut terms: Vec<_> = self.terms.iter().map(|(e, c)| (-e, c.clone())).collect();
        terms.reverse();
        Self { terms }
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() || j < b.len() {
            let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                let c = if negate_other { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            } else {
                let c = if negate_other {
                    &a[i].1 - &b[j].1
                } else {
                    &a[i].1 + &b[j].1
                };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
        Self { terms: out }
    }

    fn mul_impl(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 || other.terms.len() == 1 {
            let (mono, poly) = if self.terms.len() == 1 {
                (&self.terms[0], other)
            } else {
                (&other.terms[0], self)
            };
            return Self {
                terms: poly
                    .terms
                    .iter()
                    .map(|(e, c)| (e + mono.0, c * &mono.1))
                    .collect(),
            };
        }
        let step = self.exponent_gcd().gcd(&other.exponent_gcd()).max(1);
        let lo = self.terms[0].0 + other.terms[0].0;
        let hi = self.terms.last().unwrap().0 + other.terms.last().unwrap().0;
        let width = ((hi - lo) / step + 1) as usize;
        let pairs = self.terms.len() * other.terms.len();
        if width <= 4 * pairs + 64 {
            let mut dense = vec![BigInt::zero(); width];
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    dense[((ea + eb - lo) / step) as usize] += ca * cb;
                }
            }
            Self::from_dense(lo, step, dense)
        } else {
            let mut map: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (ea, ca) in &self.terms {
                for (eb, cb) in &other.terms {
                    *map.entry(ea + eb).or_default() += ca * cb;
                }
            }
            Self::from_sorted_map(map)
        }
    }

    /// Returns `r` with `r * den == self`, or [`Error::NonExactDivision`].
    pub fn exact_div(&self, den: &Self) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let (nmin, nmax) = (self.terms[0].0, self.terms.last().unwrap().0);
        let (dmin, dmax) = (den.terms[0].0, den.terms.last().unwrap().0);
        let qmin = nmin - dmin;
        let qmax = nmax - dmax;
        if qmax < qmin {
            return Err(Error::NonExactDivision);
        }
        let step = self
            .exponent_gcd()
            .gcd(&den.exponent_gcd())
            .gcd(&(qmax - qmin))
            .max(1);
        if den.terms.len() == 1 {
            let d = &den.terms[0].1;
            let mut out = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                let (q, r) = c.div_rem(d);
                if !r.is_zero() {
                    return Err(Error::NonExactDivision);
                }
                out.push((e - dmin, q));
            }
            return Ok(Self { terms: out });
        }
        let dlen = ((dmax - dmin) / step) as usize;
        let mut dvec = vec![BigInt::zero(); dlen + 1];
        for (e, c) in &den.terms {
            if (e - dmin) % step != 0 {
                return Err(Error::NonExactDivision);
            }
            dvec[((e - dmin) / step) as usize] = c.clone();
        }
        let qlen = ((qmax - qmin) / step) as usize + 1;
        let mut rem = vec![BigInt::zero(); qlen + dlen];
        for (e, c) in &self.terms {
            if (e - nmin) % step != 0 {
                return Err(Error::NonExactDivision);
            }
            rem[((e - nmin) / step) as usize] = c.clone();
        }
        let lead = &dvec[dlen];
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let c = std::mem::take(&mut rem[i + dlen]);
            if c.is_zero() {
                continue;
            }
            let (qc, r) = c.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::NonExactDivision);
            }
            for (k, dk) in dvec.iter().enumerate().take(dlen) {
                if !dk.is_zero() {
                    rem[i + k] -= &qc * dk;
                }
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NonExactDivision);
        }
        Ok(Self::from_dense(qmin, step, quot))
    }

    /// Coefficients from the lowest `A`-exponent upward in steps of one
    /// `q`-unit, padded with zeros to `len`. Fails if a term is off that grid.
    pub fn top_series(&self, len: usize) -> Result<TopSeries> {
        let lead = self.min_exponent().ok_or(Error::ZeroPolynomial)?;
        let mut coeffs = vec![BigInt::zero(); len];
        for (e, c) in &self.terms {
            let off = e - lead;
            if off % Q_STEP != 0 {
                return Err(Error::OffGrid);
            }
            let idx = (off / Q_STEP) as usize;
            if idx < len {
                coeffs[idx] = c.clone();
            }
        }
        Ok(TopSeries::new(lead, QSeries::from_coeffs(coeffs)))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            match (*e, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (e, true) => write!(f, "A^{e}")?,
                (e, false) => write!(f, "{a}*A^{e}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                let f: fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly = $body;
                f(self, rhs)
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_impl(b, false));
forward_binop!(Sub, sub, |a, b| a.add_impl(b, true));
forward_binop!(Mul, mul, |a, b| a.mul_impl(b));

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |a, b| a + b)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentJson {
    variable: String,
    terms: Vec<(i64, String)>,
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentJson {
            variable: "A".into(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_string()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LaurentJson::deserialize(d)?;
        if raw.variable != "A" {
            return Err(de::Error::custom(format!(
                "unsupported variable {:?}",
                raw.variable
            )));
        }
        let mut terms = Vec::with_capacity(raw.terms.len());
        for (e, c) in raw.terms {
            let c: BigInt = c.parse().map_err(de::Error::custom)?;
            terms.push((e, c));
        }
        Ok(LaurentPoly::from_terms(terms))
    }
}

/// `[k]` written out: `Σ_{t=0}^{k-1} A^{2k-2-4t}`.
pub(crate) fn bracket_poly(k: u32) -> LaurentPoly {
    let k = k as i64;
    LaurentPoly::from_terms((0..k).map(|t| (2 * k - 2 - 4 * t, 1)))
}

/// `± A^e · {1}^u · ∏ [k]^m_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredScalar {
    negative: bool,
    monomial: i64,
    unit_brace: i32,
    brackets: BTreeMap<u32, i32>,
}

impl Default for FactoredScalar {
    fn default() -> Self {
        Self::one()
    }
}

impl FactoredScalar {
    pub fn one() -> Self {
        Self {
            negative: false,
            monomial: 0,
            unit_brace: 0,
            brackets: BTreeMap::new(),
        }
    }

    pub fn new(sign: i8, monomial: i64, brackets: impl IntoIterator<Item = (u32, i32)>) -> Self {
        let mut s = Self::one();
        s.negative = sign < 0;
        s.monomial = monomial;
        for (k, m) in brackets {
            s.mul_bracket(k, m);
        }
        s
    }

    pub fn sign_of(negative: bool) -> Self {
        Self {
            negative,
            ..Self::one()
        }
    }

    pub fn monomial(e: i64) -> Self {
        Self {
            monomial: e,
            ..Self::one()
        }
    }

    /// `[k]^m`.
    pub fn bracket(k: u32, m: i32) -> Self {
        let mut s = Self::one();
        s.mul_bracket(k, m);
        s
    }

    /// `{n}^m = ([n]{1})^m`; `{0} = 0` has no factored form.
    pub fn brace(n: u32, m: i32) -> Self {
        assert!(n > 0, "{{0}} vanishes");
        let mut s = Self::bracket(n, m);
        s.unit_brace = m;
        s
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn monomial_exponent(&self) -> i64 {
        self.monomial
    }

    pub fn unit_brace_power(&self) -> i32 {
        self.unit_brace
    }

    pub fn bracket_powers(&self) -> &BTreeMap<u32, i32> {
        &self.brackets
    }

    fn mul_bracket(&mut self, k: u32, m: i32) {
        assert!(k > 0, "[0] vanishes");
        if k == 1 || m == 0 {
            return;
        }
        let e = self.brackets.entry(k).or_insert(0);
        *e += m;
        if *e == 0 {
            self.brackets.remove(&k);
        }
    }

    pub fn negate(mut self) -> Self {
        self.negative = !self.negative;
        self
    }

    pub fn times_sign(self, negative: bool) -> Self {
        if negative {
            self.negate()
        } else {
            self
        }
    }

    pub fn inv(&self) -> Self {
        Self {
            negative: self.negative,
            monomial: -self.monomial,
            unit_brace: -self.unit_brace,
            brackets: self.brackets.iter().map(|(k, m)| (*k, -m)).collect(),
        }
    }

    pub fn pow(&self, n: i32) -> Self {
        if n < 0 {
            return self.inv().pow(-n);
        }
        Self {
            negative: self.negative && n % 2 == 1,
            monomial: self.monomial * n as i64,
            unit_brace: self.unit_brace * n,
            brackets: self
                .brackets
                .iter()
                .filter(|_| n != 0)
                .map(|(k, m)| (*k, m * n))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.negative ^= other.negative;
        out.monomial += other.monomial;
        out.unit_brace += other.unit_brace;
        for (k, m) in &other.brackets {
            out.mul_bracket(*k, *m);
        }
        out
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    /// Lowest `A`-exponent of the value (its leading term from the `q` side),
    /// valid even when the value is only a rational function.
    pub fn valuation(&self) -> i64 {
        self.monomial
            - 2 * self.unit_brace as i64
            - self
                .brackets
                .iter()
                .map(|(k, m)| 2 * (*k as i64 - 1) * *m as i64)
                .sum::<i64>()
    }

    /// The value as `sign · A^e · ∏ Φ_d(A^4)^μ_d`.
    pub fn cyclotomic(&self) -> cyclo::CycloScalar {
        let mut out = cyclo::CycloScalar {
            negative: self.negative,
            exponent: self.monomial - 2 * self.unit_brace as i64,
            factors: BTreeMap::new(),
        };
        if self.unit_brace != 0 {
            out.factors.insert(1, self.unit_brace);
        }
        for (k, m) in &self.brackets {
            out.exponent -= 2 * (*k as i64 - 1) * *m as i64;
            for d in cyclo::divisors(*k) {
                if d > 1 {
                    *out.factors.entry(d).or_insert(0) += m;
                }
            }
        }
        out.factors.retain(|_, m| *m != 0);
        out
    }

    /// Multiplies everything out. Brackets are first reduced to cyclotomic
    /// factors so cancellation is exact; a factor left with negative
    /// multiplicity means the value is not a Laurent polynomial.
    pub fn expand(&self) -> Result<LaurentPoly> {
        self.cyclotomic().expand()
    }

    /// Power series from the lowest `A`-exponent: `[k] = A^{-2(k-1)}(1-x^k)/(1-x)`
    /// and `{1} = -A^{-2}(1-x)` with `x = A^4 = q^-1`.
    pub fn top_series(&self, len: usize) -> TopSeries {
        let mut s = QSeries::constant(if self.negative { -1 } else { 1 }, len);
        if self.unit_brace % 2 != 0 {
            s = s.neg();
        }
        let mut one_minus_x = self.unit_brace as i64;
        for (k, m) in &self.brackets {
            s = s.mul_one_minus_xk_pow(*k as usize, *m as i64);
            one_minus_x -= *m as i64;
        }
        s = s.mul_one_minus_xk_pow(1, one_minus_x);
        TopSeries::new(self.valuation(), s)
    }
}

/// Sign/shift normal form of a nonzero polynomial: `p = sign · A^shift ·
/// Σ_t coefficients[t] · A^(step·t)`, reading from the highest power of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalSeries {
    pub coefficients: Vec<BigInt>,
    pub shift: i64,
    pub sign: i8,
    pub step: i64,
}

impl CanonicalSeries {
    pub fn depth(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficients padded with zeros (or cut) to `n` entries.
    pub fn prefix(&self, n: usize) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = self.coefficients.iter().take(n).cloned().collect();
        v.resize(n, BigInt::zero());
        v
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let p = LaurentPoly::from_dense(self.shift, self.step, self.coefficients.clone());
        if self.sign < 0 {
            -p
        } else {
            p
        }
    }
}

#[derive(Serialize, Deserialize)]
struct CanonicalJson {
    coefficients: Vec<String>,
    shift: i64,
    sign: i8,
    step: i64,
}

impl Serialize for CanonicalSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CanonicalJson {
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
            shift: self.shift,
            sign: self.sign,
            step: self.step,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CanonicalSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CanonicalJson::deserialize(d)?;
        let coefficients = raw
            .coefficients
            .iter()
            .map(|c| c.parse::<BigInt>().map_err(de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(CanonicalSeries {
            coefficients,
            shift: raw.shift,
            sign: raw.sign,
            step: raw.step,
        })
    }
}

/// Normal form with the grid step taken from the exponents themselves
/// (one `q`-unit for a single term).
pub fn canonicalize(p: &LaurentPoly) -> Result<CanonicalSeries> {
    let g = p.exponent_gcd();
    canonicalize_on(p, if g == 0 { Q_STEP } else { g })
}

/// Normal form on a caller-chosen grid; every exponent difference must be a
/// multiple of `step`.
pub fn canonicalize_on(p: &LaurentPoly, step: i64) -> Result<CanonicalSeries> {
    let shift = p.min_exponent().ok_or(Error::ZeroPolynomial)?;
    let top = p.max_exponent().unwrap();
    if (top - shift) % step != 0 || p.exponent_gcd() % step != 0 {
        return Err(Error::OffGrid);
    }
    let negative = p.terms[0].1.is_negative();
    let mut coefficients = vec![BigInt::zero(); ((top - shift) / step) as usize + 1];
    for (e, c) in &p.terms {
        coefficients[((e - shift) / step) as usize] = if negative { -c } else { c.clone() };
    }
    Ok(CanonicalSeries {
        coefficients,
        shift,
        sign: if negative { -1 } else { 1 },
        step,
    })
}
