//! Fusion state sum for pretzel knots with three negative twist regions.
//!
//! Fusing the two `N`-colored strands of twist region `i` into a single edge
//! of color `2j_i` turns each of its `m_i` half-twists into the eigenvalue
//! `γ(N, N, 2j_i)` and leaves a prism network: two `N`-colored triangles
//! joined by rungs `2j_1, 2j_2, 2j_3`. So
//!
//! `J_{N+1} = Σ_j ∏_i γ(N,N,2j_i)^{m_i} Δ_{2j_i}/θ(N,N,2j_i) · Γ_j`,
//! `Γ_j = Tet_j² / θ(2j_1, 2j_2, 2j_3)`,
//!
//! where `Tet_j` has triangle edges `N` and apex legs `2j_i` (each triangle
//! collapses to `Tet/θ` times a vertex). A summand is `F_j · P_j²` with `F_j`
//! a factored scalar and `P_j` the Kauffman–Lins tet sum.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::cyclo::{self, CycloScalar};
use crate::error::{Error, Result};
use crate::exec::{self, Strategy};
use crate::laurent::{FactoredScalar, LaurentPoly, Q_STEP};
use crate::qcalc::{
    self, delta_scalar, fact_valuation, gamma_scalar, tet_eval, theta_of, AdmissibleTriple,
    TetColors,
};
use crate::rational::RationalFn;
use crate::series::{QSeries, TopSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PretzelSpec {
    half_twists: [u32; 3],
}

impl PretzelSpec {
    pub fn new(m1: u32, m2: u32, m3: u32) -> Result<Self> {
        if m1 == 0 || m2 == 0 || m3 == 0 {
            return Err(Error::InvalidSpec(format!(
                "every region needs at least one half-twist, got ({m1},{m2},{m3})"
            )));
        }
        Ok(Self {
            half_twists: [m1, m2, m3],
        })
    }

    pub fn half_twists(&self) -> [u32; 3] {
        self.half_twists
    }

    /// Regions with exactly two half-twists.
    pub fn n(&self) -> usize {
        self.half_twists.iter().filter(|&&m| m == 2).count()
    }

    /// Regions with at least three half-twists.
    pub fn m(&self) -> usize {
        self.half_twists.iter().filter(|&&m| m >= 3).count()
    }

    pub fn ones(&self) -> usize {
        3 - self.n() - self.m()
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        let odd = self.half_twists.iter().filter(|&&m| m % 2 == 1).count();
        if odd == 3 || odd == 2 {
            1
        } else if odd == 1 {
            2
        } else {
            3
        }
    }
}

impl fmt::Display for PretzelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.half_twists;
        write!(f, "{a},{b},{c}")
    }
}

impl FromStr for PretzelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::InvalidSpec(format!("expected m1,m2,m3, got {s:?}")));
        }
        let mut v = [0u32; 3];
        for (slot, p) in v.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("not a count: {p:?}")))?;
        }
        Self::new(v[0], v[1], v[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SummandIndex {
    pub n: u32,
    pub j: [u32; 3],
}

impl SummandIndex {
    pub fn new(n: u32, j1: u32, j2: u32, j3: u32) -> Result<Self> {
        if j1 > n || j2 > n || j3 > n {
            return Err(Error::IndexOutOfRange(format!(
                "fusion indices ({j1},{j2},{j3}) exceed N = {n}"
            )));
        }
        Ok(Self { n, j: [j1, j2, j3] })
    }

    fn rungs_admissible(&self) -> bool {
        let [a, b, c] = self.j.map(|x| 2 * x as i64);
        AdmissibleTriple::is_admissible(a, b, c)
    }

    fn tet_colors(&self) -> TetColors {
        let n = self.n;
        let [a, b, c] = self.j.map(|x| 2 * x);
        TetColors::new(a, b, c, n, n, n)
    }

    /// All indices of the sum at this `N`, lexicographic, with inadmissible
    /// rung triples dropped.
    pub fn all(n: u32) -> Vec<Self> {
        let mut out = Vec::with_capacity(((n + 1) * (n + 1) * (n + 1)) as usize);
        for j1 in 0..=n {
            for j2 in 0..=n {
                for j3 in 0..=n {
                    let idx = Self { n, j: [j1, j2, j3] };
                    if idx.rungs_admissible() {
                        out.push(idx);
                    }
                }
            }
        }
        out
    }
}

/// `(-1)^N {1}/{N+1} = 1/Δ_N`.
pub fn normalization(n: u32) -> FactoredScalar {
    delta_scalar(n).inv()
}

/// The summand as `scalar · poly²`.
#[derive(Clone, Debug)]
pub struct SummandParts {
    pub scalar: FactoredScalar,
    pub tet_terms: Vec<FactoredScalar>,
}

impl SummandParts {
    pub fn tet_sum(&self) -> LaurentPoly {
        self.tet_terms
            .iter()
            .map(|t| t.expand().expect("tet terms are polynomials"))
            .sum()
    }

    pub fn value(&self) -> Result<RationalFn> {
        let p = self.tet_sum();
        RationalFn::from_scalar(&self.scalar, &(&p * &p))
    }
}

fn twist_factor(idx: &SummandIndex, spec: &PretzelSpec) -> Result<FactoredScalar> {
    let n = idx.n as i64;
    let mut f = FactoredScalar::one();
    for (ji, mi) in idx.j.iter().zip(spec.half_twists) {
        let c = 2 * *ji as i64;
        f = f
            .mul(&gamma_scalar(n, n, c)?.pow(mi as i32))
            .mul(&delta_scalar(2 * ji))
            .div(&theta_of(n, n, c)?);
    }
    Ok(f)
}

pub fn summand_parts(idx: &SummandIndex, spec: &PretzelSpec) -> Result<SummandParts> {
    let [a, b, c] = idx.j.map(|x| 2 * x as i64);
    let rung_theta = theta_of(a, b, c)?;
    let tet = tet_eval(&idx.tet_colors())?;
    let scalar = twist_factor(idx, spec)?
        .mul(&tet.prefactor.pow(2))
        .div(&rung_theta);
    Ok(SummandParts {
        scalar,
        tet_terms: tet.terms,
    })
}

/// `Γ_{N,j} = Tet² / θ(2j_1, 2j_2, 2j_3)`.
pub fn prism_gamma(n: u32, j1: u32, j2: u32, j3: u32) -> Result<RationalFn> {
    let idx = SummandIndex::new(n, j1, j2, j3)?;
    let [a, b, c] = idx.j.map(|x| 2 * x as i64);
    let rung_theta = theta_of(a, b, c)?;
    let tet = tet_eval(&idx.tet_colors())?;
    let p = tet.sum();
    RationalFn::from_scalar(&tet.prefactor.pow(2).div(&rung_theta), &(&p * &p))
}

pub fn summand(idx: &SummandIndex, spec: &PretzelSpec) -> Result<RationalFn> {
    summand_parts(idx, spec)?.value()
}

/// `S̄_j = S_j · (-1)^N {1}/{N+1}`.
pub fn normalized_summand(idx: &SummandIndex, spec: &PretzelSpec) -> Result<RationalFn> {
    let mut parts = summand_parts(idx, spec)?;
    parts.scalar = parts.scalar.mul(&normalization(idx.n));
    parts.value()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[derive(Default)]
pub struct SumOptions {
    pub normalized: bool,
    pub strategy: Strategy,
}


fn color_to_n(color: u32) -> Result<u32> {
    color
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidArgument("color must be at least 1".into()))
}

/// Exact state sum. Summands are rational; all of them are multiplied by the
/// least common cyclotomic denominator, summed as polynomials, and the total
/// is divided back exactly.
pub fn state_sum(color: u32, spec: &PretzelSpec, opts: SumOptions) -> Result<LaurentPoly> {
    let n = color_to_n(color)?;
    let indices = SummandIndex::all(n);
    let norm = if opts.normalized {
        normalization(n)
    } else {
        FactoredScalar::one()
    };
    let parts = exec::try_map(opts.strategy, &indices, |idx| {
        let p = summand_parts(idx, spec)?;
        Ok::<_, Error>((p.scalar.mul(&norm).cyclotomic(), p.tet_sum()))
    })?;
    let mut lcm: BTreeMap<u32, i32> = BTreeMap::new();
    for (c, _) in &parts {
        for (&d, &m) in &c.factors {
            if m < 0 {
                let e = lcm.entry(d).or_insert(0);
                *e = (*e).max(-m);
            }
        }
    }
    let denom = CycloScalar {
        factors: lcm,
        ..CycloScalar::one()
    };
    let lifted = exec::try_map(opts.strategy, &parts, |(c, p)| {
        let k = c.mul(&denom).expand()?;
        Ok::<_, Error>(&k * &(p * p))
    })?;
    let total: LaurentPoly = lifted.into_iter().sum();
    cyclo::div_exact(&total, &denom)
}

/// `J_{color}` (unnormalized).
pub fn colored_jones(color: u32, spec: &PretzelSpec) -> Result<LaurentPoly> {
    state_sum(color, spec, SumOptions::default())
}

/// `J'_{color} = J_{color} · (-1)^N {1}/{N+1}`, so the unknot is 1.
pub fn normalized_colored_jones(color: u32, spec: &PretzelSpec) -> Result<LaurentPoly> {
    state_sum(
        color,
        spec,
        SumOptions {
            normalized: true,
            ..SumOptions::default()
        },
    )
}

/// Lowest `A`-exponent bound of a summand, without building it.
fn summand_valuation_bound(idx: &SummandIndex, spec: &PretzelSpec, norm_val: i64) -> i64 {
    let n = idx.n as i64;
    let t = idx.tet_colors();
    let mut v = norm_val + 2 * qcalc::tet_prefactor_valuation(&t) + 2 * qcalc::tet_sum_valuation_bound(&t);
    let [a, b, c] = idx.j.map(|x| 2 * x as i64);
    v -= theta_valuation(a, b, c);
    for (ji, mi) in idx.j.iter().zip(spec.half_twists) {
        let c = 2 * *ji as i64;
        v += mi as i64 * (2 * n - c + (2 * n * n - c * c) / 2);
        v -= 2 * c;
        v -= theta_valuation(n, n, c);
    }
    v
}

fn theta_valuation(a: i64, b: i64, c: i64) -> i64 {
    let (i, j, k) = ((b + c - a) / 2, (a + c - b) / 2, (a + b - c) / 2);
    fact_valuation(i + j + k + 1) + fact_valuation(i) + fact_valuation(j) + fact_valuation(k)
        - fact_valuation(i + j)
        - fact_valuation(j + k)
        - fact_valuation(i + k)
}

/// Leading coefficients of the state sum from the highest power of `q`
/// (lowest power of `A`), computed on truncated series. Summands that cannot
/// reach the first `len` coefficients are skipped by a valuation bound; if
/// the leading terms cancel the window is widened and the sum redone.
pub fn state_sum_top(
    color: u32,
    spec: &PretzelSpec,
    len: usize,
    opts: SumOptions,
) -> Result<TopSeries> {
    let n = color_to_n(color)?;
    let norm = if opts.normalized {
        normalization(n)
    } else {
        FactoredScalar::one()
    };
    let norm_val = norm.valuation();
    let indices = SummandIndex::all(n);
    let bounds = exec::map(opts.strategy, &indices, |idx| {
        summand_valuation_bound(idx, spec, norm_val)
    });
    let base = *bounds.iter().min().expect("j = (0,0,0) is always present");
    let mut window = len + 4;
    loop {
        let reach = Q_STEP * window as i64;
        let live: Vec<SummandIndex> = indices
            .iter()
            .zip(&bounds)
            .filter(|(_, b)| **b - base < reach)
            .map(|(i, _)| *i)
            .collect();
        let series = exec::try_map(opts.strategy, &live, |idx| {
            summand_top(idx, spec, &norm, base, window)
        })?;
        let mut classes: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (residue, s) in series {
            let acc = classes
                .entry(residue)
                .or_insert_with(|| QSeries::zero(window));
            *acc = acc.add(&s);
        }
        classes.retain(|_, s| !s.is_zero());
        if classes.len() > 1 {
            return Err(Error::OffGrid);
        }
        let Some((residue, total)) = classes.into_iter().next() else {
            window *= 2;
            if window > 64 * (len + 4) {
                return Err(Error::AllZero);
            }
            continue;
        };
        let lead = total.first_nonzero().unwrap();
        if window - lead < len {
            window = lead + len + 4;
            continue;
        }
        let coeffs = total.coeffs()[lead..lead + len].to_vec();
        return Ok(TopSeries::new(
            base + residue + Q_STEP * lead as i64,
            QSeries::from_coeffs(coeffs),
        ));
    }
}

/// `(residue, series)` of one summand relative to `A^{base + residue}`.
fn summand_top(
    idx: &SummandIndex,
    spec: &PretzelSpec,
    norm: &FactoredScalar,
    base: i64,
    window: usize,
) -> Result<(i64, QSeries)> {
    let parts = summand_parts(idx, spec)?;
    let scalar = parts.scalar.mul(norm).top_series(window);
    let t = idx.tet_colors();
    let pbase = qcalc::tet_sum_valuation_bound(&t);
    let mut p = QSeries::zero(window);
    for term in &parts.tet_terms {
        let ts = term.top_series(window);
        let aligned = ts.aligned(pbase, window).ok_or(Error::OffGrid)?;
        p = p.add(&aligned);
    }
    let prod = TopSeries::new(2 * pbase, p.mul(&p)).mul(&scalar);
    let residue = (prod.lead - base).rem_euclid(Q_STEP);
    let s = prod.aligned(base + residue, window).expect("residue removed");
    Ok((residue, s))
}
