//! Two-mode Fock-coefficient representation.
//!
//! A phase-space function is stored as `f = sum c[m1 n1 m2 n2] wt_{m1 n1}(a) wt_{m2 n2}(b)`
//! over the matrix units `wt_{mn} = 2 w_{mn}`. With this normalization the
//! star product is plain matrix composition in each mode and the integral
//! over phase space is `h^2` times the trace.
//!
//! The coefficients live in an `N^2 x N^2` matrix whose row index is
//! `m1 * N + m2` and column index `n1 * N + n2`.

use std::ops::{Add, Mul, Neg, Sub};

use ndarray::{Array2, Axis};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::word::{Gen, StarPolynomial};
use crate::error::{Error, Result};
use crate::params::{to_mode_coords, PhasePoint, PhysParams};
use crate::specfun::{laguerre, log_factorial};

pub const DEFAULT_CUTOFF: usize = 32;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockRep {
    cutoff: usize,
    mat: Array2<C64>,
    // largest magnitude dropped by a creation step at the cutoff
    dropped: f64,
    // probability weight of the state lost to truncation, if known
    tail_weight: f64,
}

impl FockRep {
    pub fn zeros(cutoff: usize) -> Self {
        assert!(cutoff > 0, "cutoff must be positive");
        let d = cutoff * cutoff;
        Self { cutoff, mat: Array2::zeros((d, d)), dropped: 0.0, tail_weight: 0.0 }
    }

    /// The constant function 1, truncated to the cutoff.
    pub fn identity(cutoff: usize) -> Self {
        let mut out = Self::zeros(cutoff);
        for i in 0..cutoff * cutoff {
            out.mat[[i, i]] = C64::new(1.0, 0.0);
        }
        out
    }

    /// Single matrix unit `wt_{m1 n1} (x) wt_{m2 n2}`.
    pub fn matrix_unit(m1: usize, n1: usize, m2: usize, n2: usize, cutoff: usize) -> Result<Self> {
        if [m1, n1, m2, n2].iter().any(|&i| i >= cutoff) {
            return Err(Error::IndexOutOfRange(format!(
                "matrix unit ({m1},{n1},{m2},{n2}) needs every index below cutoff {cutoff}"
            )));
        }
        let mut out = Self::zeros(cutoff);
        out.set(m1, n1, m2, n2, C64::new(1.0, 0.0));
        Ok(out)
    }

    /// `c[m1 n1 m2 n2] = ma[m1, n1] * mb[m2, n2]`.
    pub fn from_mode_product(ma: &Array2<C64>, mb: &Array2<C64>) -> Self {
        let n = ma.nrows();
        assert_eq!(ma.dim(), (n, n));
        assert_eq!(mb.dim(), (n, n));
        let mut out = Self::zeros(n);
        for m1 in 0..n {
            for n1 in 0..n {
                let x = ma[[m1, n1]];
                if x == ZERO {
                    continue;
                }
                for m2 in 0..n {
                    for n2 in 0..n {
                        out.mat[[m1 * n + m2, n1 * n + n2]] = x * mb[[m2, n2]];
                    }
                }
            }
        }
        out
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Coefficients as the `N^2 x N^2` operator matrix.
    pub fn matrix(&self) -> &Array2<C64> {
        &self.mat
    }

    #[inline]
    fn idx(&self, m1: usize, m2: usize) -> usize {
        m1 * self.cutoff + m2
    }

    pub fn coeff(&self, m1: usize, n1: usize, m2: usize, n2: usize) -> C64 {
        self.mat[[self.idx(m1, m2), self.idx(n1, n2)]]
    }

    pub fn set(&mut self, m1: usize, n1: usize, m2: usize, n2: usize, value: C64) {
        let (r, c) = (self.idx(m1, m2), self.idx(n1, n2));
        self.mat[[r, c]] = value;
    }

    /// Non-zero entries in lexicographic `(m1, n1, m2, n2)` order.
    pub fn entries(&self) -> Vec<([usize; 4], C64)> {
        let n = self.cutoff;
        let mut out = Vec::new();
        for m1 in 0..n {
            for n1 in 0..n {
                for m2 in 0..n {
                    for n2 in 0..n {
                        let v = self.coeff(m1, n1, m2, n2);
                        if v != ZERO {
                            out.push(([m1, n1, m2, n2], v));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.mat.iter().filter(|v| **v != ZERO).count()
    }

    /// True if a creation step at the cutoff discarded a non-zero coefficient.
    pub fn overflowed(&self) -> bool {
        self.dropped > 0.0
    }

    pub fn dropped_magnitude(&self) -> f64 {
        self.dropped
    }

    pub fn tail_weight(&self) -> f64 {
        self.tail_weight
    }

    /// True if the truncated state misses more than `1e-12` of its weight.
    pub fn tail_warning(&self) -> bool {
        self.tail_weight > 1e-12
    }

    pub(crate) fn with_tail_weight(mut self, w: f64) -> Self {
        self.tail_weight = w;
        self
    }

    fn merge_flags(&mut self, other: &FockRep) {
        self.dropped = self.dropped.max(other.dropped);
        self.tail_weight = self.tail_weight.max(other.tail_weight);
    }

    /// Complex conjugate function: swaps the matrix-unit indices.
    pub fn conj(&self) -> Self {
        let mut out = self.clone();
        out.mat = self.mat.t().mapv(|v| v.conj());
        out
    }

    /// Largest deviation from the reality condition `c[m1 n1 m2 n2] = conj(c[n1 m1 n2 m2])`.
    pub fn reality_defect(&self) -> f64 {
        let d = self.mat.nrows();
        let mut worst: f64 = 0.0;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.mat[[r, c]] - self.mat[[c, r]].conj()).norm());
            }
        }
        worst
    }

    pub fn is_real(&self) -> bool {
        self.reality_defect() == 0.0
    }

    fn check_cutoff(&self, other: &FockRep) -> Result<()> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch { left: self.cutoff, right: other.cutoff });
        }
        Ok(())
    }

    /// Star product: matrix composition in each mode.
    pub fn star(&self, rhs: &FockRep) -> Result<FockRep> {
        self.check_cutoff(rhs)?;
        let d = self.mat.nrows();
        let nnz = self.nnz();
        let mat = if nnz * 16 <= d * d {
            let mut out = Array2::<C64>::zeros((d, d));
            for r in 0..d {
                for k in 0..d {
                    let x = self.mat[[r, k]];
                    if x == ZERO {
                        continue;
                    }
                    let src = rhs.mat.row(k);
                    let mut dst = out.row_mut(r);
                    dst.zip_mut_with(&src, |o, s| *o += x * s);
                }
            }
            out
        } else {
            self.mat.dot(&rhs.mat)
        };
        let mut out = FockRep { cutoff: self.cutoff, mat, dropped: 0.0, tail_weight: 0.0 };
        out.merge_flags(self);
        out.merge_flags(rhs);
        Ok(out)
    }

    /// Normalized trace `sum c[m m l l]`, i.e. the phase-space integral divided by `h^2`.
    pub fn trace(&self) -> C64 {
        self.mat.diag().iter().copied().fold(ZERO, |a, b| a + b)
    }

    /// `\int f dV = h^2 sum c[m m l l]`.
    pub fn integrate(&self, params: &PhysParams) -> C64 {
        self.trace() * params.planck_h().powi(2)
    }

    pub fn max_abs_diff(&self, other: &FockRep) -> f64 {
        assert_eq!(self.cutoff, other.cutoff);
        self.mat
            .iter()
            .zip(other.mat.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.mat.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `(ua (x) ub) f (ua (x) ub)^dagger`, contracted one mode at a time.
    pub fn conjugate_by_modes(&self, ua: &Array2<C64>, ub: &Array2<C64>) -> FockRep {
        let n = self.cutoff;
        assert_eq!(ua.dim(), (n, n));
        assert_eq!(ub.dim(), (n, n));
        // t[m1, m2, n1, n2]
        let t = self
            .mat
            .clone()
            .into_shape_with_order((n, n, n, n))
            .expect("square coefficient matrix");
        let ua_c = ua.mapv(|v| v.conj());
        let ub_c = ub.mapv(|v| v.conj());
        let t = contract_axis(&t, ua, 0);
        let t = contract_axis(&t, ub, 1);
        let t = contract_axis(&t, &ua_c, 2);
        let t = contract_axis(&t, &ub_c, 3);
        let mat = t.into_shape_with_order((n * n, n * n)).expect("reshape back");
        FockRep { cutoff: n, mat, dropped: self.dropped, tail_weight: self.tail_weight }
    }

    /// Star product with one generator on the given side.
    pub fn apply_generator(&self, gen: Gen, side: Side) -> FockRep {
        let n = self.cutoff;
        let mut out = FockRep { cutoff: n, mat: Array2::zeros(self.mat.dim()), dropped: self.dropped, tail_weight: self.tail_weight };
        let mode_b = matches!(gen, Gen::B | Gen::BBar);
        // Lowering on rows (left) or columns (right) moves index k to k-1 with
        // factor sqrt(k); raising moves k to k+1 with sqrt(k+1).
        let raising = match (side, gen) {
            (Side::Left, Gen::ABar | Gen::BBar) => true,
            (Side::Left, Gen::A | Gen::B) => false,
            (Side::Right, Gen::A | Gen::B) => true,
            (Side::Right, Gen::ABar | Gen::BBar) => false,
        };
        let d = n * n;
        let mut dropped: f64 = 0.0;
        for src in 0..d {
            let (k1, k2) = (src / n, src % n);
            let k = if mode_b { k2 } else { k1 };
            let (target, factor) = if raising {
                if k + 1 == n {
                    let line = match side {
                        Side::Left => self.mat.row(src),
                        Side::Right => self.mat.column(src),
                    };
                    dropped = dropped.max(line.iter().map(|v| v.norm()).fold(0.0, f64::max));
                    continue;
                }
                (k + 1, ((k + 1) as f64).sqrt())
            } else {
                if k == 0 {
                    continue;
                }
                (k - 1, (k as f64).sqrt())
            };
            let dst = if mode_b { k1 * n + target } else { target * n + k2 };
            match side {
                Side::Left => {
                    let s = self.mat.row(src).to_owned();
                    out.mat.row_mut(dst).zip_mut_with(&s, |o, v| *o += v * factor);
                }
                Side::Right => {
                    let s = self.mat.column(src).to_owned();
                    out.mat.column_mut(dst).zip_mut_with(&s, |o, v| *o += v * factor);
                }
            }
        }
        out.dropped = out.dropped.max(dropped);
        out
    }

    pub fn left_star_generator(&self, gen: Gen) -> FockRep {
        self.apply_generator(gen, Side::Left)
    }

    pub fn right_star_generator(&self, gen: Gen) -> FockRep {
        self.apply_generator(gen, Side::Right)
    }

    /// `P * f` (left) or `f * P` (right) for a star polynomial `P`.
    pub fn apply_star_polynomial(&self, poly: &StarPolynomial, side: Side) -> FockRep {
        let mut acc = FockRep::zeros(self.cutoff);
        acc.merge_flags(self);
        for (c, word) in poly.terms() {
            let mut cur = self.clone();
            match side {
                Side::Left => {
                    for &g in word.iter().rev() {
                        cur = cur.apply_generator(g, Side::Left);
                    }
                }
                Side::Right => {
                    for &g in word.iter() {
                        cur = cur.apply_generator(g, Side::Right);
                    }
                }
            }
            acc.mat.scaled_add(*c, &cur.mat);
            acc.merge_flags(&cur);
        }
        acc
    }

    /// Pointwise value at a phase-space point.
    pub fn eval(&self, pt: &PhasePoint, params: &PhysParams) -> C64 {
        let mc = to_mode_coords(pt, params);
        let entries = self.entries();
        let top = entries.iter().flat_map(|(i, _)| i.iter().copied()).max().map_or(0, |m| m + 1);
        let ta = matrix_unit_table(mc.a, top);
        let tb = matrix_unit_table(mc.b, top);
        entries
            .iter()
            .map(|([m1, n1, m2, n2], c)| c * ta[[*m1, *n1]] * tb[[*m2, *n2]])
            .fold(ZERO, |a, b| a + b)
    }

    pub fn to_json(&self) -> String {
        let doc = FockJson {
            cutoff: self.cutoff,
            entries: self
                .entries()
                .into_iter()
                .map(|([m1, n1, m2, n2], v)| (m1, n1, m2, n2, v.re, v.im))
                .collect(),
        };
        let mut s = serde_json::to_string(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<FockRep> {
        let doc: FockJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(e.to_string()))?;
        if doc.cutoff == 0 {
            return Err(Error::Parse("cutoff must be positive".into()));
        }
        let mut out = FockRep::zeros(doc.cutoff);
        for (pos, &(m1, n1, m2, n2, re, im)) in doc.entries.iter().enumerate() {
            if [m1, n1, m2, n2].iter().any(|&i| i >= doc.cutoff) {
                return Err(Error::Parse(format!("entry {pos}: index exceeds cutoff {}", doc.cutoff)));
            }
            if !(re.is_finite() && im.is_finite()) {
                return Err(Error::Parse(format!("entry {pos}: non-finite coefficient")));
            }
            if out.coeff(m1, n1, m2, n2) != ZERO {
                return Err(Error::Parse(format!("entry {pos}: duplicate index")));
            }
            out.set(m1, n1, m2, n2, C64::new(re, im));
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockJson {
    cutoff: usize,
    entries: Vec<(usize, usize, usize, usize, f64, f64)>,
}

// out[.., i, ..] = sum_k m[i, k] t[.., k, ..] along `axis`
fn contract_axis(t: &ndarray::Array4<C64>, m: &Array2<C64>, axis: usize) -> ndarray::Array4<C64> {
    let mut out = ndarray::Array4::<C64>::zeros(t.dim());
    let n = m.nrows();
    for i in 0..n {
        let mut dst = out.index_axis_mut(Axis(axis), i);
        for k in 0..n {
            let c = m[[i, k]];
            if c == ZERO {
                continue;
            }
            let src = t.index_axis(Axis(axis), k);
            dst.zip_mut_with(&src, |o, s| *o += c * s);
        }
    }
    out
}

/// Value of the matrix unit `wt_{mn}` at mode coordinate `a`:
/// `2 e^{-2|a|^2} (-1)^n sqrt(n!/m!) (2 abar)^{m-n} L_n^{m-n}(4|a|^2)` for `m >= n`,
/// and the complex conjugate of `wt_{nm}` otherwise.
pub fn matrix_unit_eval(m: usize, n: usize, a: C64) -> C64 {
    if m < n {
        return matrix_unit_eval(n, m, a).conj();
    }
    let x = 4.0 * a.norm_sqr();
    let lag = laguerre(n, (m - n) as i64, x).expect("degree within cap");
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let norm = (0.5 * (log_factorial(n) - log_factorial(m))).exp();
    (2.0 * a.conj()).powu((m - n) as u32) * (2.0 * (-0.5 * x).exp() * sign * norm * lag)
}

/// Table `t[m, n] = wt_{mn}(a)` for `m, n < size`.
pub fn matrix_unit_table(a: C64, size: usize) -> Array2<C64> {
    let mut t = Array2::zeros((size, size));
    for m in 0..size {
        for n in 0..=m {
            let v = matrix_unit_eval(m, n, a);
            t[[m, n]] = v;
            t[[n, m]] = v.conj();
        }
    }
    t
}

impl Add for &FockRep {
    type Output = FockRep;
    fn add(self, rhs: &FockRep) -> FockRep {
        assert_eq!(self.cutoff, rhs.cutoff, "cutoff mismatch");
        let mut out = self.clone();
        out.mat += &rhs.mat;
        out.merge_flags(rhs);
        out
    }
}

impl Sub for &FockRep {
    type Output = FockRep;
    fn sub(self, rhs: &FockRep) -> FockRep {
        assert_eq!(self.cutoff, rhs.cutoff, "cutoff mismatch");
        let mut out = self.clone();
        out.mat -= &rhs.mat;
        out.merge_flags(rhs);
        out
    }
}

impl Neg for &FockRep {
    type Output = FockRep;
    fn neg(self) -> FockRep {
        let mut out = self.clone();
        out.mat.mapv_inplace(|v| -v);
        out
    }
}

impl Mul<C64> for &FockRep {
    type Output = FockRep;
    fn mul(self, rhs: C64) -> FockRep {
        let mut out = self.clone();
        out.mat.mapv_inplace(|v| v * rhs);
        out
    }
}

impl Mul<f64> for &FockRep {
    type Output = FockRep;
    fn mul(self, rhs: f64) -> FockRep {
        self * C64::new(rhs, 0.0)
    }
}
