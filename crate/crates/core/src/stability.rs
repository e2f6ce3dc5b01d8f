//! The subtract-and-left-justify pipeline.
//!
//! Row 0 at color `c` is the canonical top of `J'_c`. Row `k` is row `k-1`
//! minus the order-`(k-1)` head, with its leading zeros stripped. The order-`k`
//! head is the prefix on which consecutive rows agree. Every lower head a row
//! needs is extracted the same way, at whatever colors its depth demands, and
//! memoized.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::laurent::{canonicalize, LaurentPoly};
use crate::series::agreement;
use crate::statesum::{state_sum_top, PretzelSpec, SumOptions};

/// `f ≐_n g`: the first `n` canonical coefficients agree, missing entries
/// counting as zero.
pub fn approx_eq(f: &LaurentPoly, g: &LaurentPoly, n: usize) -> Result<bool> {
    let a = canonicalize(f)?;
    let b = canonicalize(g)?;
    Ok(a.prefix(n) == b.prefix(n))
}

/// Same comparison on coefficient vectors already read from the top:
/// leading zeros are stripped from both, then signs are normalized.
pub fn approx_eq_series(a: &[BigInt], b: &[BigInt], n: usize) -> bool {
    let norm = |v: &[BigInt]| -> Vec<BigInt> {
        let k = v.iter().position(|c| !c.is_zero()).unwrap_or(v.len());
        let neg = v.get(k).is_some_and(|c| c.is_negative());
        let mut out: Vec<BigInt> = v[k..]
            .iter()
            .take(n)
            .map(|c| if neg { -c } else { c.clone() })
            .collect();
        out.resize(n, BigInt::zero());
        out
    };
    norm(a) == norm(b)
}

pub fn left_justify(s: &[BigInt]) -> Result<(Vec<BigInt>, usize)> {
    let k = s.iter().position(|c| !c.is_zero()).ok_or(Error::AllZero)?;
    Ok((s[k..].to_vec(), k))
}

#[derive(Clone, Debug)]
struct Row {
    coeffs: Vec<BigInt>,
    shift: usize,
}

/// Memoized rows and heads for one spec.
pub struct HeadPipeline {
    spec: PretzelSpec,
    strategy: Strategy,
    rows: HashMap<(usize, u32), Row>,
    heads: HashMap<usize, Vec<BigInt>>,
    max_color: u32,
}

impl HeadPipeline {
    pub fn new(spec: PretzelSpec) -> Self {
        Self {
            spec,
            strategy: Strategy::default(),
            rows: HashMap::new(),
            heads: HashMap::new(),
            max_color: 400,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Highest color the pipeline may reach for while deepening.
    pub fn with_max_color(mut self, c: u32) -> Self {
        self.max_color = c;
        self
    }

    pub fn spec(&self) -> PretzelSpec {
        self.spec
    }

    fn top(&self, color: u32, len: usize) -> Result<Vec<BigInt>> {
        let opts = SumOptions {
            normalized: true,
            strategy: self.strategy,
        };
        let t = state_sum_top(color, &self.spec, len, opts)?;
        let mut v = t.series.into_coeffs();
        if v[0].is_negative() {
            v.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        Ok(v)
    }

    /// Row `order` at `color`, `len` coefficients, plus the number of zeros
    /// stripped at this stage.
    pub fn row(&mut self, order: usize, color: u32, len: usize) -> Result<(Vec<BigInt>, usize)> {
        if let Some(r) = self.rows.get(&(order, color)) {
            if r.coeffs.len() >= len {
                return Ok((r.coeffs[..len].to_vec(), r.shift));
            }
        }
        let row = if order == 0 {
            Row {
                coeffs: self.top(color, len)?,
                shift: 0,
            }
        } else {
            self.deeper_row(order, color, len)?
        };
        let out = (row.coeffs[..len].to_vec(), row.shift);
        self.rows.insert((order, color), row);
        Ok(out)
    }

    fn deeper_row(&mut self, order: usize, color: u32, len: usize) -> Result<Row> {
        let mut extra = color as usize + 4;
        let limit = 64 * (len + color as usize + 8);
        loop {
            let l = len + extra;
            let (prev, _) = self.row(order - 1, color, l)?;
            let head = self.head(order - 1, l)?;
            let diff: Vec<BigInt> = prev.iter().zip(&head).map(|(a, b)| a - b).collect();
            match diff.iter().position(|c| !c.is_zero()) {
                Some(s) if l - s >= len => {
                    return Ok(Row {
                        coeffs: diff[s..].to_vec(),
                        shift: s,
                    })
                }
                Some(s) => extra = s + 4,
                None => extra *= 2,
            }
            if extra > limit {
                return Err(Error::NotStabilized {
                    order,
                    color,
                    agreement: l,
                    required: len,
                });
            }
        }
    }

    /// The order-`order` head to `len` coefficients: the prefix shared by
    /// three consecutive rows, taken where every row is within its stable
    /// range (color ≥ len + 1).
    pub fn head(&mut self, order: usize, len: usize) -> Result<Vec<BigInt>> {
        if let Some(h) = self.heads.get(&order) {
            if h.len() >= len {
                return Ok(h[..len].to_vec());
            }
        }
        let mut c = (len as u32 + 1).max(2);
        loop {
            if c + 2 > self.max_color {
                return Err(Error::NotStabilized {
                    order,
                    color: c,
                    agreement: 0,
                    required: len,
                });
            }
            let (r0, _) = self.row(order, c, len)?;
            let (r1, _) = self.row(order, c + 1, len)?;
            let (r2, _) = self.row(order, c + 2, len)?;
            if agreement(&r0, &r1) >= len && agreement(&r1, &r2) >= len {
                self.heads.insert(order, r1.clone());
                return Ok(r1);
            }
            c += 1;
        }
    }

    /// The table for `colors` at `order`, and the head read off its last two
    /// rows.
    pub fn extract(&mut self, order: usize, colors: std::ops::RangeInclusive<u32>, depth: usize) -> Result<HeadReport> {
        if order > 2 {
            return Err(Error::InvalidArgument(format!("order {order} exceeds 2")));
        }
        let (lo, hi) = (*colors.start(), *colors.end());
        if lo < 2 || hi <= lo || depth == 0 {
            return Err(Error::InvalidArgument(format!(
                "need at least two colors from 2 upward and depth ≥ 1, got {lo}..{hi}, depth {depth}"
            )));
        }
        let width = depth.max(hi as usize + 2);
        let mut rows = Vec::new();
        let mut shifts = Vec::new();
        let mut totals = Vec::new();
        for c in lo..=hi {
            let (r, s) = self.row(order, c, width)?;
            totals.push(self.total_shift(order, c)?);
            rows.push(r);
            shifts.push(s);
        }
        let mut agreements = Vec::new();
        for (i, pair) in rows.windows(2).enumerate() {
            let a = agreement(&pair[0], &pair[1]);
            let c = lo + i as u32 + 1;
            let required = (c as usize).saturating_sub(2).min(width);
            if a < required {
                return Err(Error::NotStabilized {
                    order,
                    color: c,
                    agreement: a,
                    required,
                });
            }
            agreements.push(a);
        }
        let last = *agreements.last().unwrap();
        if last < depth {
            return Err(Error::NotStabilized {
                order,
                color: hi,
                agreement: last,
                required: depth,
            });
        }
        let coefficients = rows.last().unwrap()[..depth].to_vec();
        Ok(HeadReport {
            spec: self.spec,
            order,
            coefficients,
            colors: (lo..=hi).collect(),
            rows,
            shifts,
            total_shifts: totals,
            agreements,
        })
    }

    /// Zeros stripped across all stages up to `order` at `color`.
    pub fn total_shift(&mut self, order: usize, color: u32) -> Result<usize> {
        let mut t = 0;
        for k in 1..=order {
            t += self.row(k, color, 1)?.1;
        }
        Ok(t)
    }

    /// Row `order - 1` minus the order-`(order-1)` head, before
    /// left-justification (the layout of the second table).
    pub fn residual(&mut self, order: usize, color: u32, len: usize) -> Result<Vec<BigInt>> {
        if order == 0 {
            return Ok(self.row(0, color, len)?.0);
        }
        let (prev, _) = self.row(order - 1, color, len)?;
        let head = self.head(order - 1, len)?;
        Ok(prev.iter().zip(&head).map(|(a, b)| a - b).collect())
    }
}

/// Convenience wrapper over a fresh [`HeadPipeline`].
pub fn extract_khead(
    spec: &PretzelSpec,
    order: usize,
    colors: std::ops::RangeInclusive<u32>,
    depth: usize,
) -> Result<HeadReport> {
    HeadPipeline::new(*spec).extract(order, colors, depth)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadReport {
    pub spec: PretzelSpec,
    pub order: usize,
    pub coefficients: Vec<BigInt>,
    pub colors: Vec<u32>,
    pub rows: Vec<Vec<BigInt>>,
    /// Zeros stripped at the last stage, per color.
    pub shifts: Vec<usize>,
    /// Zeros stripped over all stages, per color.
    pub total_shifts: Vec<usize>,
    /// Common-prefix length of each consecutive pair of rows.
    pub agreements: Vec<usize>,
}

#[derive(Serialize)]
struct HeadReportJson<'a> {
    spec: String,
    order: usize,
    coefficients: Vec<String>,
    shifts: &'a [usize],
    total_shifts: &'a [usize],
    agreements: &'a [usize],
    colors: &'a [u32],
    rows: Vec<Vec<String>>,
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

impl HeadReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(HeadReportJson {
            spec: self.spec.to_string(),
            order: self.order,
            coefficients: strings(&self.coefficients),
            shifts: &self.shifts,
            total_shifts: &self.total_shifts,
            agreements: &self.agreements,
            colors: &self.colors,
            rows: self.rows.iter().map(|r| strings(r)).collect(),
        })
        .expect("plain data serializes")
    }

    /// Header row `H` with the head, then one row per color, `width` columns.
    pub fn to_csv(&self, width: usize) -> String {
        let mut out = String::new();
        let cells = |v: &[BigInt]| -> String {
            (0..width)
                .map(|i| v.get(i).map(|c| c.to_string()).unwrap_or_default())
                .collect::<Vec<_>>()
                .join(",")
        };
        let _ = writeln!(out, "H{},{}", self.order, cells(&self.coefficients));
        for (c, r) in self.colors.iter().zip(&self.rows) {
            let _ = writeln!(out, "N={c},{}", cells(r));
        }
        out
    }
}
