//! Laurent polynomials over a cyclotomic denominator. θ, tet and individual
//! state-sum summands live here; only totals are promised to be polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::CycloScalar;
use crate::error::{Error, Result};
use crate::laurent::{FactoredScalar, LaurentPoly};
use crate::series::{QSeries, TopSeries};

/// `num / ∏ Φ_d(A^4)^{den_d}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFn {
    pub num: LaurentPoly,
    pub den: BTreeMap<u32, i32>,
}

impl RationalFn {
    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: BTreeMap::new(),
        }
    }

    /// `s · p`, with the negative part of `s` left as the denominator.
    pub fn from_scalar(s: &FactoredScalar, p: &LaurentPoly) -> Result<Self> {
        let (num, den) = s.cyclotomic().split();
        Ok(Self {
            num: &num.expand()? * p,
            den: den.factors,
        })
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    fn den_scalar(&self) -> CycloScalar {
        CycloScalar {
            negative: false,
            exponent: 0,
            factors: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut den = self.den.clone();
        for (d, m) in &other.den {
            *den.entry(*d).or_insert(0) += m;
        }
        Self {
            num: &self.num * &other.num,
            den,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut den = self.den.clone();
        for (d, m) in &other.den {
            let e = den.entry(*d).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |r: &Self| -> Result<LaurentPoly> {
            let mut f = BTreeMap::new();
            for (d, m) in &den {
                let have = r.den.get(d).copied().unwrap_or(0);
                if *m > have {
                    f.insert(*d, *m - have);
                }
            }
            let c = CycloScalar {
                factors: f,
                ..CycloScalar::one()
            };
            Ok(&r.num * &c.expand()?)
        };
        Ok(Self {
            num: &lift(self)? + &lift(other)?,
            den,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    /// Cancels every denominator factor that divides the numerator.
    pub fn reduce(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        for (&d, m) in den.iter_mut() {
            let mut f = BTreeMap::new();
            f.insert(d, 1);
            let phi = CycloScalar {
                factors: f,
                ..CycloScalar::one()
            }
            .expand()
            .expect("cyclotomic factor");
            while *m > 0 {
                match num.exact_div(&phi) {
                    Ok(q) => {
                        num = q;
                        *m -= 1;
                    }
                    Err(_) => break,
                }
            }
        }
        den.retain(|_, m| *m != 0);
        if num.is_zero() {
            den.clear();
        }
        Self { num, den }
    }

    pub fn into_poly(self) -> Result<LaurentPoly> {
        if self.den.is_empty() {
            return Ok(self.num);
        }
        self.num.exact_div(&self.den_scalar().expand()?)
    }

    /// Series from the lowest `A`-exponent. The denominator is a product of
    /// `Φ_d(x)`, each with unit constant term.
    pub fn top_series(&self, len: usize) -> Result<TopSeries> {
        let num = self.num.top_series(len)?;
        if self.den.is_empty() {
            return Ok(num);
        }
        let dense = self.den_scalar().dense_in_x()?;
        let mut d = QSeries::from_coeffs(dense);
        d = d.resized(len);
        Ok(TopSeries::new(num.lead, num.series.mul(&d.inv()?)))
    }

    /// Value at `A = 1` as a float, for classical cross-checks.
    pub fn eval_at_one_f64(&self) -> Result<f64> {
        let mut d = 1f64;
        for (k, m) in &self.den {
            let v: BigInt = crate::cyclo::cyclotomic_poly(*k).iter().sum();
            if v.is_zero() {
                return Err(Error::NonExactDivision);
            }
            d *= v.to_f64().unwrap().powi(*m);
        }
        Ok(self.num.eval_at_one().to_f64().unwrap_or(f64::NAN) / d)
    }
}
