//! Closed-form series in `x = q^-1` and the truncated right-hand sides of the
//! factorial and summand identities, each paired with the exact quantity it
//! approximates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::laurent::FactoredScalar;
use crate::qcalc::{qfact, FactKind};
use crate::series::QSeries;
use crate::stability::approx_eq_series;
use crate::statesum::{
    normalized_summand, state_sum_top, PretzelSpec, SumOptions, SummandIndex,
};

/// Extra coefficients carried through every truncated construction.
pub const GUARD: usize = 4;

/// `∏_{i≥1} (1 - x^i)` to `depth` coefficients.
pub fn euler_product(depth: usize) -> QSeries {
    let mut s = QSeries::constant(1, depth);
    for i in 1..depth.max(1) {
        s = s.mul_one_minus_xk_pow(i, 1);
    }
    s
}

/// `∏(1 - x^i) (1 + 3/(1 - x))`.
pub fn one_head_935(depth: usize) -> QSeries {
    let w = depth + GUARD;
    let bracket = QSeries::constant(1, w).add(&QSeries::geometric(1, w).scale(&BigInt::from(3)));
    euler_product(w).mul(&bracket).truncate(depth)
}

/// Counts of twist regions with exactly two (`n`) and at least three (`m`)
/// half-twists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TwoHeadCase {
    pub n: usize,
    pub m: usize,
}

impl TwoHeadCase {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n + m > 3 {
            return Err(Error::InvalidArgument(format!("n + m = {} exceeds 3", n + m)));
        }
        Ok(Self { n, m })
    }

    pub fn of(spec: &PretzelSpec) -> Self {
        Self {
            n: spec.n(),
            m: spec.m(),
        }
    }
}

/// The correction polynomial, keyed on `n + m`.
pub fn f_poly(case: TwoHeadCase) -> Vec<i64> {
    match case.n + case.m {
        0 => vec![0],
        1 => vec![1, -3, -1, 2],
        2 => vec![2, -6, -3, 3],
        _ => vec![3, -9, -6, 3],
    }
}

/// `x(1-x)(1-x²) + n(1-x²) - f`, the numerator over `(1-x)(1-x²)`.
pub fn two_head_numerator(case: TwoHeadCase) -> Vec<i64> {
    let mut num = vec![0i64, 1, -1, -1, 1];
    num[0] += case.n as i64;
    num[2] -= case.n as i64;
    for (i, c) in f_poly(case).into_iter().enumerate() {
        num[i] -= c;
    }
    num
}

/// `∏(1-x^i) (x + n/(1-x) - f/((1-x)(1-x²)))` as written, leading zeros
/// included.
pub fn two_head_raw(case: TwoHeadCase, depth: usize) -> QSeries {
    let w = depth + GUARD;
    let n = BigInt::from(case.n);
    let f = QSeries::from_poly(&f_poly(case), w)
        .mul_one_minus_xk_pow(1, -1)
        .mul_one_minus_xk_pow(2, -1);
    let inner = QSeries::from_poly(&[0, 1], w)
        .add(&QSeries::geometric(1, w).scale(&n))
        .sub(&f);
    euler_product(w).mul(&inner).truncate(depth)
}

/// The predicted 2-head, left-justified to `depth` coefficients.
pub fn two_head(spec: &PretzelSpec, depth: usize) -> QSeries {
    two_head_case(TwoHeadCase::of(spec), depth)
}

pub fn two_head_case(case: TwoHeadCase, depth: usize) -> QSeries {
    let raw = two_head_raw(case, depth + GUARD);
    let k = raw.first_nonzero().expect("two-head is nonzero");
    QSeries::from_coeffs(raw.coeffs()[k..].to_vec()).truncate(depth)
}

/// `∏(1-x^i) · p(x) / ((1-x)(1-x²))` for an explicit numerator.
pub fn euler_over_quadratic(numerator: &[i64], depth: usize) -> QSeries {
    let w = depth + GUARD;
    let q = QSeries::from_poly(numerator, w)
        .mul_one_minus_xk_pow(1, -1)
        .mul_one_minus_xk_pow(2, -1);
    euler_product(w).mul(&q).truncate(depth)
}

/// The truncated identities checked by the verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    /// `J_{N+1} ≐_{3N+1} {3N+1}!{N}!³/({2N}!³{1})` on spec (3,3,3).
    JonesTop,
    /// `(-1)^N {N}! ≐_∞ ∏_{i≤N}(1 - x^i)`.
    BraceFactorial,
    /// `{2N}!` against `{N}!` times the pair-expansion bracket.
    DoubleFactorial,
    /// `{2N}!²` against `{N}!²` times the squared bracket.
    DoubleFactorialSquared,
    /// `{3N+1}! ≐ {2N}! (1 - x^{2N+1}/(1-x))`.
    TripleFactorialPlusOne,
    /// `{3N}! ≐ {2N}! (1 - x^{2N+1}/(1-x))`.
    TripleFactorial,
    /// `S̄_{N-1,N,N}` to depth `2N`, with the infinite product.
    SummandDropOne,
    /// The same bracket over the finite product `∏_{i≤N}(1 - x^i)`.
    SummandDropOneFinite,
    /// `S̄_{N-2,N,N}` to depth `N`.
    SummandDropTwo,
    /// `S̄_{N-3,N,N}` to depth `N`.
    SummandDropThree,
    /// `S̄_{N,N-1,N-1}` to depth `N`.
    SummandDropPair,
    /// `J'_{N+1} ≐_{3N+1} {3N+1}!{N}!³/({2N}!³{N+1})` on spec (3,3,3).
    NormalizedTop,
}

impl Identity {
    pub const ALL: [Identity; 12] = [
        Identity::BraceFactorial,
        Identity::DoubleFactorial,
        Identity::DoubleFactorialSquared,
        Identity::TripleFactorialPlusOne,
        Identity::TripleFactorial,
        Identity::JonesTop,
        Identity::NormalizedTop,
        Identity::SummandDropOne,
        Identity::SummandDropOneFinite,
        Identity::SummandDropTwo,
        Identity::SummandDropThree,
        Identity::SummandDropPair,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::JonesTop => "jones-top",
            Identity::BraceFactorial => "brace-factorial",
            Identity::DoubleFactorial => "double-factorial",
            Identity::DoubleFactorialSquared => "double-factorial-squared",
            Identity::TripleFactorialPlusOne => "triple-factorial-plus-one",
            Identity::TripleFactorial => "triple-factorial",
            Identity::SummandDropOne => "summand-drop-one",
            Identity::SummandDropOneFinite => "summand-drop-one-finite",
            Identity::SummandDropTwo => "summand-drop-two",
            Identity::SummandDropThree => "summand-drop-three",
            Identity::SummandDropPair => "summand-drop-pair",
            Identity::NormalizedTop => "normalized-top",
        }
    }

    /// Number of leading coefficients the identity asserts.
    pub fn depth(self, n: u32) -> usize {
        let n = n as usize;
        match self {
            Identity::SummandDropOne | Identity::SummandDropOneFinite => 2 * n,
            Identity::SummandDropTwo | Identity::SummandDropThree | Identity::SummandDropPair => n,
            // exact identity: the whole polynomial
            Identity::BraceFactorial => (3 * n + 1).max(n * (n + 1) / 2 + 1),
            _ => 3 * n + 1,
        }
    }

    /// Smallest `N` for which every index in the identity is meaningful.
    pub fn min_n(self) -> u32 {
        match self {
            Identity::SummandDropOne | Identity::SummandDropOneFinite => 1,
            Identity::SummandDropTwo | Identity::SummandDropPair => 2,
            Identity::SummandDropThree => 3,
            Identity::BraceFactorial
            | Identity::DoubleFactorial
            | Identity::DoubleFactorialSquared
            | Identity::TripleFactorialPlusOne
            | Identity::TripleFactorial => 1,
            Identity::JonesTop | Identity::NormalizedTop => 1,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|i| i.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown identity {s:?}")))
    }
}

fn brace_fact(n: u32) -> FactoredScalar {
    qfact(n, FactKind::Brace)
}

fn scalar_series(s: &FactoredScalar, len: usize) -> QSeries {
    s.top_series(len).series
}

/// `(x^{N+1} - x^{2N+1})/(1-x)`.
fn single_run(n: usize, w: usize) -> QSeries {
    let mut p = vec![0i64; 2 * n + 2];
    p[n + 1] = 1;
    p[2 * n + 1] = -1;
    QSeries::from_poly(&p, w).mul_one_minus_xk_pow(1, -1)
}

/// `∏_{i≤n}(1 - x^i)`.
fn finite_euler(n: usize, w: usize) -> QSeries {
    (1..=n).fold(QSeries::constant(1, w), |s, i| s.mul_one_minus_xk_pow(i, 1))
}

fn monomial(k: usize, c: i64, w: usize) -> QSeries {
    let mut p = vec![0i64; k + 1];
    p[k] = c;
    QSeries::from_poly(&p, w)
}

/// Right-hand side of `id` at `N`, from the top, to `depth + GUARD` terms.
pub fn identity_rhs(id: Identity, n: u32) -> Result<QSeries> {
    if n < id.min_n() {
        return Err(Error::IndexOutOfRange(format!("{id} needs N ≥ {}", id.min_n())));
    }
    let w = id.depth(n) + GUARD;
    let nn = n as usize;
    let euler = || euler_product(w);
    Ok(match id {
        Identity::JonesTop => scalar_series(
            &brace_fact(3 * n + 1)
                .mul(&brace_fact(n).pow(3))
                .div(&brace_fact(2 * n).pow(3))
                .div(&FactoredScalar::brace(1, 1)),
            w,
        ),
        Identity::NormalizedTop => scalar_series(
            &brace_fact(3 * n + 1)
                .mul(&brace_fact(n).pow(3))
                .div(&brace_fact(2 * n).pow(3))
                .div(&FactoredScalar::brace(n + 1, 1)),
            w,
        ),
        Identity::BraceFactorial => finite_euler(nn, w),
        Identity::DoubleFactorial => {
            // twice the bracket, halved once everything is integral
            let tail = monomial(2 * nn + 2, 1, w);
            let twice = QSeries::constant(2, w)
                .sub(&single_run(nn, w).scale(&BigInt::from(2)))
                .add(&tail.mul_one_minus_xk_pow(1, -2))
                .sub(&tail.mul_one_minus_xk_pow(2, -1));
            scalar_series(&brace_fact(n), w).mul(&twice.halve()?)
        }
        Identity::DoubleFactorialSquared => {
            let tail = monomial(2 * nn + 2, 1, w);
            let bracket = QSeries::constant(1, w)
                .sub(&single_run(nn, w).scale(&BigInt::from(2)))
                .add(&tail.mul_one_minus_xk_pow(1, -2).scale(&BigInt::from(2)))
                .sub(&tail.mul_one_minus_xk_pow(2, -1));
            scalar_series(&brace_fact(n).pow(2), w).mul(&bracket)
        }
        Identity::TripleFactorialPlusOne | Identity::TripleFactorial => {
            let bracket = QSeries::constant(1, w)
                .sub(&monomial(2 * nn + 1, 1, w).mul_one_minus_xk_pow(1, -1));
            scalar_series(&brace_fact(2 * n), w).mul(&bracket)
        }
        Identity::SummandDropOne | Identity::SummandDropOneFinite => {
            let bracket = QSeries::constant(1, w)
                .add(&monomial(nn + 1, 2, w).mul_one_minus_xk_pow(1, -1))
                .sub(&monomial(2 * nn - 1, 1, w).mul_one_minus_xk_pow(1, -1));
            let product = if id == Identity::SummandDropOne {
                euler()
            } else {
                finite_euler(nn, w)
            };
            product.mul_one_minus_xk_pow(1, -1).mul(&bracket).neg()
        }
        Identity::SummandDropTwo => euler()
            .mul_one_minus_xk_pow(2, -1)
            .mul_one_minus_xk_pow(1, -1),
        Identity::SummandDropThree => euler()
            .mul_one_minus_xk_pow(3, -1)
            .mul_one_minus_xk_pow(2, -1)
            .mul_one_minus_xk_pow(1, -1)
            .neg(),
        Identity::SummandDropPair => euler()
            .mul_one_minus_xk_pow(nn - 1, 1)
            .mul_one_minus_xk_pow(1, -2),
    })
}

/// The exact quantity on the left of `id`, from the top, to `depth + GUARD`
/// terms.
pub fn identity_lhs(id: Identity, n: u32) -> Result<QSeries> {
    if n < id.min_n() {
        return Err(Error::IndexOutOfRange(format!("{id} needs N ≥ {}", id.min_n())));
    }
    let w = id.depth(n) + GUARD;
    let spec = PretzelSpec::new(3, 3, 3).expect("valid");
    let summand_top = |j: [u32; 3]| -> Result<QSeries> {
        let idx = SummandIndex::new(n, j[0], j[1], j[2])?;
        let full = normalized_summand(&idx, &spec)?;
        Ok(full.top_series(w)?.series)
    };
    Ok(match id {
        Identity::JonesTop | Identity::NormalizedTop => {
            let opts = SumOptions {
                normalized: id == Identity::NormalizedTop,
                ..SumOptions::default()
            };
            state_sum_top(n + 1, &spec, w, opts)?.series
        }
        Identity::BraceFactorial => scalar_series(&brace_fact(n), w),
        Identity::DoubleFactorial => scalar_series(&brace_fact(2 * n), w),
        Identity::DoubleFactorialSquared => scalar_series(&brace_fact(2 * n).pow(2), w),
        Identity::TripleFactorialPlusOne => scalar_series(&brace_fact(3 * n + 1), w),
        Identity::TripleFactorial => scalar_series(&brace_fact(3 * n), w),
        Identity::SummandDropOne | Identity::SummandDropOneFinite => summand_top([n - 1, n, n])?,
        Identity::SummandDropTwo => summand_top([n - 2, n, n])?,
        Identity::SummandDropThree => summand_top([n - 3, n, n])?,
        Identity::SummandDropPair => summand_top([n, n - 1, n - 1])?,
    })
}

#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub n: u32,
    pub depth: usize,
    pub lhs: QSeries,
    pub rhs: QSeries,
    pub holds: bool,
}

/// Compares both sides under `≐_depth`.
pub fn check_identity(id: Identity, n: u32) -> Result<IdentityCheck> {
    let lhs = identity_lhs(id, n)?;
    let rhs = identity_rhs(id, n)?;
    let depth = id.depth(n);
    let holds = approx_eq_series(lhs.coeffs(), rhs.coeffs(), depth);
    Ok(IdentityCheck {
        identity: id,
        n,
        depth,
        lhs,
        rhs,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[i64]) -> QSeries {
        QSeries::from_i64(v)
    }

    #[test]
    fn euler_small() {
        assert_eq!(euler_product(1), s(&[1]));
        assert_eq!(euler_product(6), s(&[1, -1, -1, 0, 0, 1]));
    }

    #[test]
    fn pentagonal_support() {
        let e = euler_product(100);
        let mut expected = vec![0i64; 100];
        for k in 0i64..10 {
            for g in [k * (3 * k - 1) / 2, k * (3 * k + 1) / 2] {
                if (g as usize) < 100 {
                    expected[g as usize] = if k % 2 == 0 { 1 } else { -1 };
                }
            }
        }
        assert_eq!(e, s(&expected));
    }

    #[test]
    fn f_branches() {
        let f = |n, m| f_poly(TwoHeadCase::new(n, m).unwrap());
        assert_eq!(f(0, 0), vec![0]);
        assert_eq!(f(1, 0), vec![1, -3, -1, 2]);
        assert_eq!(f(0, 3), vec![3, -9, -6, 3]);
        assert!(TwoHeadCase::new(2, 2).is_err());
    }

    #[test]
    fn one_head_constant_term() {
        assert_eq!(one_head_935(1), s(&[4]));
    }

    #[test]
    fn same_total_cases_differ_by_geometric_euler() {
        for total in 1..=3usize {
            for n in 1..=total {
                let a = two_head_raw(TwoHeadCase::new(n, total - n).unwrap(), 20);
                let b = two_head_raw(TwoHeadCase::new(n - 1, total - n + 1).unwrap(), 20);
                let diff = euler_product(24).mul_one_minus_xk_pow(1, -1).truncate(20);
                assert_eq!(a.sub(&b), diff);
            }
        }
    }

    #[test]
    fn factorial_identities_at_six() {
        for id in [
            Identity::BraceFactorial,
            Identity::DoubleFactorial,
            Identity::DoubleFactorialSquared,
            Identity::TripleFactorialPlusOne,
            Identity::TripleFactorial,
        ] {
            assert!(check_identity(id, 6).unwrap().holds, "{id}");
        }
    }

    #[test]
    fn jones_top_matches_exact_route() {
        let spec = PretzelSpec::new(3, 3, 3).unwrap();
        for n in 2..=4u32 {
            let exact = crate::statesum::colored_jones(n + 1, &spec).unwrap();
            let c = crate::laurent::canonicalize(&exact).unwrap();
            let lhs = identity_lhs(Identity::JonesTop, n).unwrap();
            let d = Identity::JonesTop.depth(n);
            assert!(approx_eq_series(&c.coefficients, lhs.coeffs(), d));
            assert!(check_identity(Identity::JonesTop, n).unwrap().holds);
        }
    }

    #[test]
    fn summand_drop_one_holds_only_past_the_finite_product() {
        // the infinite product differs from ∏_{i≤N} from x^{N+1} on
        let c = check_identity(Identity::SummandDropOne, 6).unwrap();
        assert!(!c.holds);
        assert!(approx_eq_series(c.lhs.coeffs(), c.rhs.coeffs(), 7));
        assert!(!approx_eq_series(c.lhs.coeffs(), c.rhs.coeffs(), 8));
        assert!(check_identity(Identity::SummandDropOneFinite, 6).unwrap().holds);
    }

    #[test]
    fn summand_identities_at_five() {
        for id in [
            Identity::SummandDropTwo,
            Identity::SummandDropThree,
            Identity::SummandDropPair,
        ] {
            assert!(check_identity(id, 5).unwrap().holds, "{id}");
        }
    }

    #[test]
    fn small_index_rejected() {
        assert!(matches!(
            identity_rhs(Identity::SummandDropThree, 2),
            Err(Error::IndexOutOfRange(_))
        ));
    }

    #[test]
    fn identity_names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }
}
