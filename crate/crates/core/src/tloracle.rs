//! Brute-force colored bracket of the cabled pretzel diagram.
//!
//! The diagram is the closure of the 6-strand braid `σ_0^{m1} σ_2^{m2} σ_4^{m3}`
//! under the cups/caps `(0,5), (1,2), (3,4)`. Each strand is replaced by `N`
//! parallel strands carrying a Jones–Wenzl projector, and the bracket is swept
//! bottom to top over cup diagrams on `6N` points.

use std::collections::BTreeMap;
use std::fmt;

use crate::cyclo::div_exact;
use crate::error::{Error, Result};
use crate::laurent::{FactoredScalar, LaurentPoly};
use crate::qcalc::qbracket;
use crate::rational::RationalFn;
use crate::statesum::PretzelSpec;

/// Loop value `δ = -A² - A^{-2}`.
pub fn loop_value() -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)])
}

/// A noncrossing perfect matching of the `2n` boundary points of a TL_n
/// diagram. Points `0..n` are the bottom and `n..2n` the top, both read
/// left to right.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanarMatching {
    partner: Vec<usize>,
}

impl PlanarMatching {
    pub fn new(partner: Vec<usize>) -> Result<Self> {
        let len = partner.len();
        if !len.is_multiple_of(2) {
            return Err(Error::InvalidArgument("odd number of boundary points".into()));
        }
        for (i, &p) in partner.iter().enumerate() {
            if p >= len || p == i || partner[p] != i {
                return Err(Error::InvalidArgument(format!("{partner:?} is not a pairing")));
            }
        }
        let m = Self { partner };
        if !m.is_planar() {
            return Err(Error::InvalidArgument(format!("{:?} crosses", m.partner)));
        }
        Ok(m)
    }

    pub fn identity(n: usize) -> Self {
        let partner = (0..2 * n).map(|i| if i < n { i + n } else { i - n }).collect();
        Self { partner }
    }

    /// The cap-cup generator `e_k` joining strands `k` and `k+1`, `0 ≤ k < n-1`.
    pub fn generator(n: usize, k: usize) -> Result<Self> {
        if k + 1 >= n {
            return Err(Error::IndexOutOfRange(format!("e_{k} in TL_{n}")));
        }
        let mut m = Self::identity(n);
        m.partner[k] = k + 1;
        m.partner[k + 1] = k;
        m.partner[n + k] = n + k + 1;
        m.partner[n + k + 1] = n + k;
        Ok(m)
    }

    pub fn strands(&self) -> usize {
        self.partner.len() / 2
    }

    pub fn partner(&self, i: usize) -> usize {
        self.partner[i]
    }

    // position around the boundary circle: bottom left to right, then top right to left
    fn is_planar(&self) -> bool {
        let n = self.strands();
        let pos = |i: usize| if i < n { i } else { 3 * n - 1 - i };
        let chords: Vec<(usize, usize)> = (0..2 * n)
            .filter(|&i| i < self.partner[i])
            .map(|i| {
                let (a, b) = (pos(i), pos(self.partner[i]));
                (a.min(b), a.max(b))
            })
            .collect();
        chords.iter().all(|&(a, b)| {
            chords
                .iter()
                .all(|&(c, d)| !((a < c && c < b && b < d) || (c < a && a < d && d < b)))
        })
    }

    /// `self` stacked on top of `below`, and the number of closed loops.
    pub fn compose(&self, below: &Self) -> Result<(Self, usize)> {
        let n = self.strands();
        if below.strands() != n {
            return Err(Error::ArityMismatch(n, below.strands()));
        }
        // nodes: 0..n bottom of `below`, n..2n middle, 2n..3n top of `self`
        let mut partner = vec![usize::MAX; 2 * n];
        for start in (0..n).chain(2 * n..3 * n) {
            let local = if start < n { start } else { start - n };
            if partner[local] != usize::MAX {
                continue;
            }
            let end = walk(self, below, start);
            let end_local = if end < n { end } else { end - n };
            partner[local] = end_local;
            partner[end_local] = local;
        }
        let loops = count_middle_loops(self, below);
        Ok((Self { partner }, loops))
    }
}

/// Follows the path from a boundary node of the stack to the other end.
fn walk(upper: &PlanarMatching, lower: &PlanarMatching, start: usize) -> usize {
    let n = upper.strands();
    // state: (node in global numbering, layer we are about to traverse)
    let (mut node, mut in_lower) = if start < n { (start, true) } else { (start, false) };
    loop {
        if in_lower {
            let p = lower.partner[node];
            if p < n {
                return p;
            }
            node = p; // middle, global n..2n
            in_lower = false;
        } else {
            let local = node - n;
            let p = upper.partner[local];
            if p >= n {
                return p + n;
            }
            node = p + n; // middle
            in_lower = true;
        }
    }
}

fn count_middle_loops(upper: &PlanarMatching, lower: &PlanarMatching) -> usize {
    let n = upper.strands();
    let mut seen = vec![false; n];
    // mark middle points on open paths
    for start in (0..n).chain(2 * n..3 * n) {
        let (mut node, mut in_lower) = if start < n { (start, true) } else { (start, false) };
        loop {
            if in_lower {
                let p = lower.partner[node];
                if p < n {
                    break;
                }
                seen[p - n] = true;
                node = p;
                in_lower = false;
            } else {
                let p = upper.partner[node - n];
                if p >= n {
                    break;
                }
                seen[p] = true;
                node = p + n;
                in_lower = true;
            }
        }
    }
    let mut loops = 0;
    for m in 0..n {
        if seen[m] {
            continue;
        }
        loops += 1;
        let mut cur = m;
        loop {
            seen[cur] = true;
            let up = upper.partner[cur];
            seen[up] = true;
            let down = lower.partner[up + n] - n;
            if down == m {
                break;
            }
            cur = down;
        }
    }
    loops
}

impl fmt::Debug for PlanarMatching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.partner)
    }
}

/// A formal combination of TL_n diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TLElement {
    strands: usize,
    terms: BTreeMap<PlanarMatching, RationalFn>,
}

impl TLElement {
    pub fn zero(n: usize) -> Self {
        Self {
            strands: n,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::basis(PlanarMatching::identity(n))
    }

    pub fn basis(m: PlanarMatching) -> Self {
        let mut t = Self::zero(m.strands());
        t.terms.insert(m, RationalFn::from_poly(LaurentPoly::one()));
        t
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn terms(&self) -> &BTreeMap<PlanarMatching, RationalFn> {
        &self.terms
    }

    pub fn coefficient(&self, m: &PlanarMatching) -> Option<&RationalFn> {
        self.terms.get(m)
    }

    fn insert(&mut self, m: PlanarMatching, c: RationalFn) -> Result<()> {
        let sum = match self.terms.remove(&m) {
            Some(old) => old.add(&c)?.reduce(),
            None => c.reduce(),
        };
        if !sum.num.is_zero() {
            self.terms.insert(m, sum);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::ArityMismatch(self.strands, other.strands));
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &RationalFn) -> Result<Self> {
        let mut out = Self::zero(self.strands);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.mul(c))?;
        }
        Ok(out)
    }

    /// Closing each top point `i` onto bottom point `i`.
    pub fn closure_trace(&self) -> Result<RationalFn> {
        let n = self.strands;
        let delta = loop_value();
        let mut total = RationalFn::from_poly(LaurentPoly::zero());
        for (m, c) in &self.terms {
            let mut seen = vec![false; 2 * n];
            let mut loops = 0u32;
            for s in 0..2 * n {
                if seen[s] {
                    continue;
                }
                loops += 1;
                let mut cur = s;
                loop {
                    seen[cur] = true;
                    let p = m.partner(cur);
                    seen[p] = true;
                    cur = if p < n { p + n } else { p - n };
                    if cur == s {
                        break;
                    }
                }
            }
            let term = c.mul(&RationalFn::from_poly(delta.pow(loops)));
            total = total.add(&term)?;
        }
        Ok(total.reduce())
    }
}

/// `x ∘ y`: `y` below, `x` on top; every closed loop contributes `δ`.
pub fn tl_compose(x: &TLElement, y: &TLElement) -> Result<TLElement> {
    if x.strands != y.strands {
        return Err(Error::ArityMismatch(x.strands, y.strands));
    }
    let delta = loop_value();
    let mut out = TLElement::zero(x.strands);
    for (a, ca) in &x.terms {
        for (b, cb) in &y.terms {
            let (m, loops) = a.compose(b)?;
            let c = ca.mul(cb).mul(&RationalFn::from_poly(delta.pow(loops as u32)));
            out.insert(m, c)?;
        }
    }
    Ok(out)
}

/// `f_n = f_{n-1} + ([n-1]/[n]) f_{n-1} e_{n-1} f_{n-1}`.
pub fn jw_idempotent(n: usize) -> Result<TLElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("projector on zero strands".into()));
    }
    let mut f = TLElement::identity(1);
    for k in 2..=n {
        let prev = embed(&f, k);
        let e = TLElement::basis(PlanarMatching::generator(k, k - 2)?);
        let ratio = RationalFn::from_scalar(
            &FactoredScalar::bracket((k - 1) as u32, 1).div(&FactoredScalar::bracket(k as u32, 1)),
            &LaurentPoly::one(),
        )?;
        let sandwich = tl_compose(&prev, &tl_compose(&e, &prev)?)?;
        f = prev.add(&sandwich.scale(&ratio)?)?;
    }
    Ok(f)
}

/// `x ⊗ 1` on `n` strands.
fn embed(x: &TLElement, n: usize) -> TLElement {
    let k = x.strands;
    let mut out = TLElement::zero(n);
    for (m, c) in &x.terms {
        let mut partner = vec![0; 2 * n];
        for i in 0..2 * k {
            let p = m.partner(i);
            let gi = if i < k { i } else { i - k + n };
            let gp = if p < k { p } else { p - k + n };
            partner[gi] = gp;
        }
        for i in k..n {
            partner[i] = i + n;
            partner[i + n] = i;
        }
        out.terms.insert(PlanarMatching { partner }, c.clone());
    }
    out
}

/// Default cap on the number of cup diagrams a sweep may touch.
pub const DEFAULT_BUDGET: u64 = 300_000;

/// Cup diagrams on `2k` points: the Catalan number.
fn catalan(k: u64) -> u64 {
    let mut c: u64 = 1;
    for i in 0..k {
        c = c.saturating_mul(2 * (2 * i + 1)) / (i + 2);
    }
    c
}

type CupState = BTreeMap<Vec<u16>, LaurentPoly>;

fn add_into(state: &mut CupState, key: Vec<u16>, c: LaurentPoly) {
    let sum = match state.remove(&key) {
        Some(old) => old + c,
        None => c,
    };
    if !sum.is_zero() {
        state.insert(key, sum);
    }
}

/// `e_k` on a cup diagram: the new cup `(k, k+1)` and a joined arc, or a loop.
fn apply_e(state: &CupState, k: usize, delta: &LaurentPoly) -> CupState {
    let mut out = CupState::new();
    for (p, c) in state {
        let (a, b) = (p[k] as usize, p[k + 1] as usize);
        if a == k + 1 {
            add_into(&mut out, p.clone(), c * delta);
        } else {
            let mut q = p.clone();
            q[k] = (k + 1) as u16;
            q[k + 1] = k as u16;
            q[a] = b as u16;
            q[b] = a as u16;
            add_into(&mut out, q, c.clone());
        }
    }
    out
}

fn combine(x: CupState, cx: &LaurentPoly, y: CupState, cy: &LaurentPoly) -> CupState {
    let mut out = CupState::new();
    for (p, c) in x {
        add_into(&mut out, p, &c * cx);
    }
    for (p, c) in y {
        add_into(&mut out, p, &c * cy);
    }
    out
}

/// Scale making the projector integral: `c_1 = 1`, `c_n = [n] c_{n-1}²`.
fn jw_scale(n: u32) -> FactoredScalar {
    (2..=n).fold(FactoredScalar::one(), |c, k| {
        c.pow(2).mul(&FactoredScalar::bracket(k, 1))
    })
}

/// `g_n = c_n f_n` on strands `base..base+n`, via
/// `g_n = [n] c_{n-1} g_{n-1} + [n-1] g_{n-1} e_{n-1} g_{n-1}`.
fn apply_scaled_jw(state: CupState, base: usize, n: u32, delta: &LaurentPoly) -> Result<CupState> {
    if n <= 1 {
        return Ok(state);
    }
    let inner = apply_scaled_jw(state, base, n - 1, delta)?;
    let side = apply_e(&inner, base + n as usize - 2, delta);
    let side = apply_scaled_jw(side, base, n - 1, delta)?;
    let keep = &qbracket(n) * &jw_scale(n - 1).expand()?;
    Ok(combine(inner, &keep, side, &qbracket(n - 1)))
}

/// Elementary crossing between strands `k` and `k+1` of a negative twist.
fn apply_crossing(state: &CupState, k: usize, delta: &LaurentPoly) -> CupState {
    let smooth = apply_e(state, k, delta);
    combine(
        state.clone(),
        &LaurentPoly::monomial(-1, 1),
        smooth,
        &LaurentPoly::monomial(1, 1),
    )
}

/// The six cable ends joined in pairs `(0,5), (1,2), (3,4)`, nested.
fn cabled_pairing(cable: usize) -> Vec<u16> {
    let mut p = vec![0u16; 6 * cable];
    for (a, b) in [(0, 5), (1, 2), (3, 4)] {
        for k in 0..cable {
            let x = a * cable + k;
            let y = b * cable + cable - 1 - k;
            p[x] = y as u16;
            p[y] = x as u16;
        }
    }
    p
}

/// Loops formed by closing two cup diagrams against each other.
fn pairing_loops(p: &[u16], q: &[u16]) -> u32 {
    let mut seen = vec![false; p.len()];
    let mut loops = 0;
    for s in 0..p.len() {
        if seen[s] {
            continue;
        }
        loops += 1;
        let mut cur = s;
        loop {
            seen[cur] = true;
            let a = p[cur] as usize;
            seen[a] = true;
            cur = q[a] as usize;
            if cur == s {
                break;
            }
        }
    }
    loops
}

/// The bracket of the `(color-1)`-cabled pretzel diagram with one projector
/// per cable, in blackboard framing.
pub fn bracket_eval(spec: &PretzelSpec, color: u32, budget: u64) -> Result<LaurentPoly> {
    if color == 0 {
        return Err(Error::InvalidArgument("color must be at least 1".into()));
    }
    let n = (color - 1) as usize;
    if n == 0 {
        return Ok(LaurentPoly::one());
    }
    let estimated = catalan(3 * n as u64);
    if estimated > budget {
        return Err(Error::ResourceLimit { estimated, budget });
    }
    let delta = loop_value();
    let cups = cabled_pairing(n);
    let mut state = CupState::new();
    state.insert(cups.clone(), LaurentPoly::one());
    for cable in 0..6 {
        state = apply_scaled_jw(state, cable * n, n as u32, &delta)?;
    }
    for (region, &twists) in spec.half_twists().iter().enumerate() {
        let base = 2 * region * n;
        for _ in 0..twists {
            for i in (0..n).rev() {
                for j in 0..n {
                    state = apply_crossing(&state, base + i + j, &delta);
                }
            }
        }
    }
    let total: LaurentPoly = state
        .iter()
        .map(|(p, c)| c * &delta.pow(pairing_loops(p, &cups)))
        .sum();
    div_exact(&total, &jw_scale(n as u32).pow(6).cyclotomic())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{canonicalize, canonicalize_on};
    use crate::qcalc::delta;
    use num_bigint::BigInt;

    fn el(m: PlanarMatching) -> TLElement {
        TLElement::basis(m)
    }

    #[test]
    fn matching_validation() {
        assert!(PlanarMatching::new(vec![1, 0]).is_ok());
        assert!(PlanarMatching::new(vec![0, 1]).is_err());
        // 0-2 and 1-3 cross around the boundary of TL_2
        assert!(PlanarMatching::new(vec![3, 2, 1, 0]).is_err());
        assert!(PlanarMatching::new(vec![2, 3, 0, 1]).is_ok());
    }

    #[test]
    fn generator_squares_to_loop() {
        let e = el(PlanarMatching::generator(2, 0).unwrap());
        let ee = tl_compose(&e, &e).unwrap();
        let want = e.scale(&RationalFn::from_poly(loop_value())).unwrap();
        assert_eq!(ee, want);
    }

    #[test]
    fn generator_braid_relation() {
        let e1 = el(PlanarMatching::generator(3, 0).unwrap());
        let e2 = el(PlanarMatching::generator(3, 1).unwrap());
        let x = tl_compose(&e1, &tl_compose(&e2, &e1).unwrap()).unwrap();
        assert_eq!(x, e1);
    }

    #[test]
    fn identity_is_neutral() {
        let x = el(PlanarMatching::generator(4, 1).unwrap())
            .add(&el(PlanarMatching::generator(4, 2).unwrap()))
            .unwrap();
        let id = TLElement::identity(4);
        assert_eq!(tl_compose(&id, &x).unwrap(), x);
        assert_eq!(tl_compose(&x, &id).unwrap(), x);
    }

    #[test]
    fn arity_mismatch() {
        let r = tl_compose(&TLElement::identity(2), &TLElement::identity(3));
        assert_eq!(r, Err(Error::ArityMismatch(2, 3)));
    }

    #[test]
    fn projector_two() {
        let f = jw_idempotent(2).unwrap();
        let e = PlanarMatching::generator(2, 0).unwrap();
        let inv2 = RationalFn::from_scalar(&FactoredScalar::bracket(2, -1), &LaurentPoly::one())
            .unwrap();
        assert_eq!(f.coefficient(&e), Some(&inv2));
        assert_eq!(jw_idempotent(1).unwrap(), TLElement::identity(1));
    }

    #[test]
    fn projectors_are_idempotent_and_killed_by_caps() {
        for n in 1..=4 {
            let f = jw_idempotent(n).unwrap();
            assert_eq!(tl_compose(&f, &f).unwrap(), f, "n = {n}");
            for k in 0..n.saturating_sub(1) {
                let e = el(PlanarMatching::generator(n, k).unwrap());
                assert!(tl_compose(&e, &f).unwrap().terms().is_empty());
                assert!(tl_compose(&f, &e).unwrap().terms().is_empty());
            }
        }
    }

    #[test]
    fn projector_trace_is_delta() {
        for n in 1..=4u32 {
            let t = jw_idempotent(n as usize).unwrap().closure_trace().unwrap();
            assert_eq!(t.into_poly().unwrap(), delta(n));
        }
    }

    #[test]
    fn scaled_projector_on_a_cup_state() {
        // a cup on the first two strands is killed by the projector
        let mut s = CupState::new();
        s.insert(vec![1, 0, 3, 2], LaurentPoly::one());
        let out = apply_scaled_jw(s, 0, 2, &loop_value()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn unknotted_cables() {
        assert_eq!(
            bracket_eval(&PretzelSpec::new(1, 1, 1).unwrap(), 1, DEFAULT_BUDGET).unwrap(),
            LaurentPoly::one()
        );
    }

    #[test]
    fn trefoil_and_figure_eight() {
        // unnormalized: V · (q^{1/2} + q^{-1/2}), with V(3_1) = q + q³ - q⁴ up to
        // mirror, and V(4_1)·[2] = q^{5/2} + q^{-5/2}
        let q = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        let t = bracket_eval(&PretzelSpec::new(1, 1, 1).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        let c = canonicalize(&t).unwrap().coefficients;
        assert!(c == q(&[1, 1, 1, 0, -1]) || c == q(&[1, 0, -1, -1, -1]), "{c:?}");
        let f = bracket_eval(&PretzelSpec::new(2, 1, 1).unwrap(), 2, DEFAULT_BUDGET).unwrap();
        let c = canonicalize_on(&f, crate::laurent::Q_STEP).unwrap();
        assert_eq!(c.coefficients, q(&[1, 0, 0, 0, 0, 1]));
    }

    #[test]
    fn budget_is_enforced() {
        let r = bracket_eval(&PretzelSpec::new(1, 1, 1).unwrap(), 4, 100);
        assert!(matches!(r, Err(Error::ResourceLimit { .. })));
    }
}
