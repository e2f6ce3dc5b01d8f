//! Quantum integers, factorials and the small trivalent networks (loop,
//! theta, tetrahedron) in Kauffman–Lins normalization.

use crate::error::{Error, Result};
use crate::laurent::{bracket_poly, FactoredScalar, LaurentPoly};
use crate::rational::RationalFn;

/// Edge colors `(a, b, c)` meeting at an admissible trivalent vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct AdmissibleTriple {
    a: u32,
    b: u32,
    c: u32,
}

impl AdmissibleTriple {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        let bad = Error::InadmissibleTriple(a, b, c);
        if a < 0 || b < 0 || c < 0 || (a + b + c) % 2 != 0 {
            return Err(bad);
        }
        if c > a + b || a > b + c || b > a + c {
            return Err(bad);
        }
        Ok(Self {
            a: a as u32,
            b: b as u32,
            c: c as u32,
        })
    }

    pub fn is_admissible(a: i64, b: i64, c: i64) -> bool {
        Self::new(a, b, c).is_ok()
    }

    pub fn colors(&self) -> (u32, u32, u32) {
        (self.a, self.b, self.c)
    }

    /// Internal strand counts `(i, j, k) = ((b+c-a)/2, (a+c-b)/2, (a+b-c)/2)`.
    pub fn internal(&self) -> (u32, u32, u32) {
        let (a, b, c) = (self.a, self.b, self.c);
        ((b + c - a) / 2, (a + c - b) / 2, (a + b - c) / 2)
    }
}

/// `[n]`; `[0] = 0`.
pub fn qbracket(n: u32) -> LaurentPoly {
    bracket_poly(n)
}

/// `{n} = A^{2n} - A^{-2n}`.
pub fn qbrace(n: i64) -> LaurentPoly {
    LaurentPoly::from_terms([(2 * n, 1), (-2 * n, -1)])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactKind {
    Bracket,
    Brace,
    Delta,
}

/// `[n]!`, `{n}!` or `Δ_n! = Δ_n ⋯ Δ_1` in factored form.
pub fn qfact(n: u32, kind: FactKind) -> FactoredScalar {
    match kind {
        FactKind::Bracket => bracket_factorial(n),
        FactKind::Brace => bracket_factorial(n).mul(&FactoredScalar::brace(1, n as i32)),
        FactKind::Delta => {
            let n64 = n as u64;
            bracket_factorial(n + 1).times_sign((n64 * (n64 + 1) / 2) % 2 == 1)
        }
    }
}

pub(crate) fn bracket_factorial(n: u32) -> FactoredScalar {
    FactoredScalar::new(1, 0, (2..=n).map(|k| (k, 1)))
}

/// `Δ_n = (-1)^n [n+1]` as a scalar.
pub fn delta_scalar(n: u32) -> FactoredScalar {
    FactoredScalar::bracket(n + 1, 1).times_sign(n % 2 == 1)
}

pub fn delta(n: u32) -> LaurentPoly {
    delta_scalar(n).expand().expect("brackets expand")
}

/// `θ(a,b,c) = (-1)^{i+j+k} [i+j+k+1]! [i]! [j]! [k]! / ([i+j]! [j+k]! [i+k]!)`.
pub fn theta(t: AdmissibleTriple) -> FactoredScalar {
    let (i, j, k) = t.internal();
    bracket_factorial(i + j + k + 1)
        .mul(&bracket_factorial(i))
        .mul(&bracket_factorial(j))
        .mul(&bracket_factorial(k))
        .div(&bracket_factorial(i + j))
        .div(&bracket_factorial(j + k))
        .div(&bracket_factorial(i + k))
        .times_sign((i + j + k) % 2 == 1)
}

pub fn theta_of(a: i64, b: i64, c: i64) -> Result<FactoredScalar> {
    Ok(theta(AdmissibleTriple::new(a, b, c)?))
}

/// Half-twist eigenvalue `(-1)^{(a+b-c)/2} A^{a+b-c+(a²+b²-c²)/2}`.
pub fn gamma_scalar(a: i64, b: i64, c: i64) -> Result<FactoredScalar> {
    AdmissibleTriple::new(a, b, c)?;
    let sq = a * a + b * b - c * c;
    if sq % 2 != 0 {
        return Err(Error::NonIntegerExponent);
    }
    let e = a + b - c + sq / 2;
    Ok(FactoredScalar::monomial(e).times_sign(((a + b - c) / 2) % 2 != 0))
}

pub fn gamma_twist(a: i64, b: i64, c: i64) -> Result<LaurentPoly> {
    Ok(gamma_scalar(a, b, c)?.expand().expect("monomial"))
}

/// Edge colors of a tetrahedral net, indexed by the vertex pair each edge
/// joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TetColors {
    pub e01: u32,
    pub e02: u32,
    pub e03: u32,
    pub e12: u32,
    pub e13: u32,
    pub e23: u32,
}

impl TetColors {
    pub fn new(e01: u32, e02: u32, e03: u32, e12: u32, e13: u32, e23: u32) -> Self {
        Self {
            e01,
            e02,
            e03,
            e12,
            e13,
            e23,
        }
    }

    pub fn vertex_triples(&self) -> [[u32; 3]; 4] {
        [
            [self.e01, self.e02, self.e03],
            [self.e01, self.e12, self.e13],
            [self.e02, self.e12, self.e23],
            [self.e03, self.e13, self.e23],
        ]
    }

    pub fn check(&self) -> Result<()> {
        for [a, b, c] in self.vertex_triples() {
            AdmissibleTriple::new(a as i64, b as i64, c as i64)?;
        }
        Ok(())
    }

    fn edges(&self) -> [u32; 6] {
        [self.e01, self.e02, self.e03, self.e12, self.e13, self.e23]
    }

    /// Vertex half-sums `a_i` and four-cycle half-sums `b_j`.
    fn ranges(&self) -> ([i64; 4], [i64; 3]) {
        let a = self
            .vertex_triples()
            .map(|t| t.iter().map(|&x| x as i64).sum::<i64>() / 2);
        let total: i64 = self.edges().iter().map(|&x| x as i64).sum();
        let b = [
            (total - (self.e01 + self.e23) as i64) / 2,
            (total - (self.e02 + self.e13) as i64) / 2,
            (total - (self.e03 + self.e12) as i64) / 2,
        ];
        (a, b)
    }

    /// Relabels vertices by `perm` (vertex `v` becomes `perm[v]`).
    pub fn permuted(&self, perm: [usize; 4]) -> Self {
        let get = |u: usize, v: usize| -> u32 {
            let (u, v) = (u.min(v), u.max(v));
            match (u, v) {
                (0, 1) => self.e01,
                (0, 2) => self.e02,
                (0, 3) => self.e03,
                (1, 2) => self.e12,
                (1, 3) => self.e13,
                _ => self.e23,
            }
        };
        let mut inv = [0usize; 4];
        for (v, &p) in perm.iter().enumerate() {
            inv[p] = v;
        }
        Self::new(
            get(inv[0], inv[1]),
            get(inv[0], inv[2]),
            get(inv[0], inv[3]),
            get(inv[1], inv[2]),
            get(inv[1], inv[3]),
            get(inv[2], inv[3]),
        )
    }
}

/// `Tet = prefactor · Σ_s term_s`, kept apart because only the sum is a
/// polynomial in general and the prefactor usually cancels against θ's.
#[derive(Clone, Debug)]
pub struct TetEval {
    pub prefactor: FactoredScalar,
    pub terms: Vec<FactoredScalar>,
}

impl TetEval {
    pub fn sum(&self) -> LaurentPoly {
        self.terms
            .iter()
            .map(|t| t.expand().expect("tet summands are polynomials"))
            .sum()
    }

    pub fn value(&self) -> Result<RationalFn> {
        RationalFn::from_scalar(&self.prefactor, &self.sum())
    }
}

/// Kauffman–Lins evaluation:
/// `Tet = (I!/E!) Σ_{max a ≤ s ≤ min b} (-1)^s [s+1]! / (∏[s-a_i]! ∏[b_j-s]!)`
/// with `I! = ∏_{i,j} [b_j - a_i]!` and `E!` the product of edge factorials.
pub fn tet_eval(t: &TetColors) -> Result<TetEval> {
    t.check()?;
    let (a, b) = t.ranges();
    let mut prefactor = FactoredScalar::one();
    for bj in b {
        for ai in a {
            prefactor = prefactor.mul(&bracket_factorial((bj - ai) as u32));
        }
    }
    for e in t.edges() {
        prefactor = prefactor.div(&bracket_factorial(e));
    }
    let lo = *a.iter().max().unwrap();
    let hi = *b.iter().min().unwrap();
    let terms = (lo..=hi)
        .map(|s| {
            let mut term = bracket_factorial((s + 1) as u32).times_sign(s % 2 == 1);
            for ai in a {
                term = term.div(&bracket_factorial((s - ai) as u32));
            }
            for bj in b {
                term = term.div(&bracket_factorial((bj - s) as u32));
            }
            term
        })
        .collect();
    Ok(TetEval { prefactor, terms })
}

pub fn tet(t: &TetColors) -> Result<RationalFn> {
    tet_eval(t)?.value()
}

/// Lowest `A`-exponent of `[n]!`.
pub(crate) fn fact_valuation(n: i64) -> i64 {
    -n * (n - 1)
}

/// Lower bound on the lowest `A`-exponent of the Kauffman–Lins sum (without
/// the prefactor), from the individual terms.
pub(crate) fn tet_sum_valuation_bound(t: &TetColors) -> i64 {
    let (a, b) = t.ranges();
    let lo = *a.iter().max().unwrap();
    let hi = *b.iter().min().unwrap();
    (lo..=hi)
        .map(|s| {
            fact_valuation(s + 1)
                - a.iter().map(|ai| fact_valuation(s - ai)).sum::<i64>()
                - b.iter().map(|bj| fact_valuation(bj - s)).sum::<i64>()
        })
        .min()
        .expect("nonempty summation range")
}

pub(crate) fn tet_prefactor_valuation(t: &TetColors) -> i64 {
    let (a, b) = t.ranges();
    let mut v = 0;
    for bj in b {
        for ai in a {
            v += fact_valuation(bj - ai);
        }
    }
    v - t.edges().iter().map(|&e| fact_valuation(e as i64)).sum::<i64>()
}
