//! Expectation values, the phase-space inner product, variances and the
//! uncertainty relations for states given in the matrix-unit representation.

use std::collections::HashMap;
use std::sync::Mutex;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::marginals::{marginal_shape, MarginalAxis, MAX_MARGINAL_LABEL};
use crate::params::PhysParams;
use crate::quadrature::{default_order, gauss_hermite, integrate_1d};
use crate::star::{anti_bracket, moyal_bracket, FockRep, Side, StarPolynomial, Word};
use crate::states::{coherent_fock, CoherentLabel, GeneralizedCoherentLabel, WignerLabel};

/// Tolerance on `|trace - 1|` accepted for a state.
pub const NORMALIZATION_TOL: f64 = 1e-9;

/// Largest coordinate moment order.
pub const MAX_MOMENT: usize = 8;

/// `s(f) = (1/h^2) \int f * W dV` for a normalized state `W`.
///
/// Word expectations are cached, so repeated queries against a large state
/// only pay for each distinct word once.
#[derive(Debug)]
pub struct StateFunctional {
    state: FockRep,
    params: PhysParams,
    cache: Mutex<HashMap<Word, (C64, bool)>>,
}

impl Clone for StateFunctional {
    fn clone(&self) -> Self {
        Self { state: self.state.clone(), params: self.params, cache: Mutex::new(HashMap::new()) }
    }
}

impl StateFunctional {
    pub fn new(state: FockRep, params: PhysParams) -> Result<Self> {
        let tr = state.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > NORMALIZATION_TOL {
            return Err(Error::NotNormalized { trace: tr.re });
        }
        Ok(Self { state, params, cache: Mutex::new(HashMap::new()) })
    }

    pub fn state(&self) -> &FockRep {
        &self.state
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// `<f>` together with the cutoff-overflow flag of the computation.
    pub fn expectation_flagged(&self, f: &StarPolynomial) -> (C64, bool) {
        let mut total = C64::new(0.0, 0.0);
        let mut overflowed = self.state.overflowed();
        for (c, w) in f.terms() {
            let (v, o) = self.word_expectation(w);
            total += c * v;
            overflowed |= o;
        }
        (total, overflowed)
    }

    fn word_expectation(&self, w: &Word) -> (C64, bool) {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(w) {
            return *hit;
        }
        let r = self.state.apply_star_polynomial(&StarPolynomial::word(C64::new(1.0, 0.0), w.clone()), Side::Left);
        let v = (r.trace(), r.overflowed());
        self.cache.lock().expect("cache lock").insert(w.clone(), v);
        v
    }

    pub fn expectation(&self, f: &StarPolynomial) -> C64 {
        self.expectation_flagged(f).0
    }

    /// `<f|g> = s(conj(f) * g)`.
    pub fn inner_product(&self, f: &StarPolynomial, g: &StarPolynomial) -> C64 {
        self.expectation(&f.conj().star(g))
    }

    /// `(Delta f)^2 = <f|f> - <f><conj f>`.
    pub fn variance(&self, f: &StarPolynomial) -> f64 {
        let ff = self.inner_product(f, f);
        let m = self.expectation(f);
        let mc = self.expectation(&f.conj());
        (ff - m * mc).re
    }

    pub fn moment_report(&self, name: &str, f: &StarPolynomial) -> MomentReport {
        MomentReport { observable: name.to_string(), mean: self.expectation(f), variance: self.variance(f) }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentReport {
    pub observable: String,
    pub mean: C64,
    pub variance: f64,
}

impl MomentReport {
    pub fn std_dev(&self) -> f64 {
        self.variance.max(0.0).sqrt()
    }
}

pub fn expectation(f: &StarPolynomial, s: &StateFunctional) -> C64 {
    s.expectation(f)
}

pub fn inner_product(f: &StarPolynomial, g: &StarPolynomial, s: &StateFunctional) -> C64 {
    s.inner_product(f, g)
}

/// `<x^k>_{nl} = (1/h^2) \int x^k P_nl(x) dx`; odd orders vanish by parity.
pub fn coordinate_moment(axis: MarginalAxis, k: usize, label: WignerLabel, params: &PhysParams) -> Result<f64> {
    if k == 0 || k > MAX_MOMENT {
        return Err(Error::MomentOrder(k));
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let (n, l) = (label.n, label.l);
    let rule = gauss_hermite(default_order(n, l))?;
    if n.max(l) > MAX_MARGINAL_LABEL {
        return Err(Error::DegreeOverflow { degree: n.max(l), max: MAX_MARGINAL_LABEL });
    }
    // P(x) = N f(x / scale)
    let integral: f64 = integrate_1d(|u: f64| u.powi(k as i32) * marginal_shape(n, l, u).expect("label checked"), 1.0, &rule);
    let scale = axis.scale(params);
    Ok(axis.norm(params) * scale.powi(k as i32 + 1) * integral / params.planck_h().powi(2))
}

/// `(Delta q_j)(Delta p_j)` in `W_nl` from the second moments of the marginals.
pub fn uncertainty_product(label: WignerLabel, pair: usize, params: &PhysParams) -> Result<f64> {
    let (q, p) = match pair {
        1 => (MarginalAxis::Q1, MarginalAxis::P1),
        2 => (MarginalAxis::Q2, MarginalAxis::P2),
        _ => return Err(Error::IndexOutOfRange(format!("canonical pair {pair} is not 1 or 2"))),
    };
    let var = |axis| -> Result<f64> {
        let m1 = coordinate_moment(axis, 1, label, params)?;
        Ok(coordinate_moment(axis, 2, label, params)? - m1 * m1)
    };
    Ok((var(q)? * var(p)?).sqrt())
}

/// Pieces of the Robertson–Schrödinger inequality
/// `(Df)^2 (Dg)^2 >= -1/4 <{f,g}_M>^2 + 1/4 <{df,dg}_+M>^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobertsonSchrodinger {
    pub var_f: f64,
    pub var_g: f64,
    pub bracket_term: f64,
    pub anti_bracket_term: f64,
    /// Imaginary part of `<{df,dg}_+M>`, zero up to rounding.
    pub anti_bracket_imag: f64,
}

impl RobertsonSchrodinger {
    pub fn slack(&self) -> f64 {
        self.var_f * self.var_g - (self.bracket_term + self.anti_bracket_term)
    }
}

fn check_real(f: &StarPolynomial) -> Result<()> {
    let scale = f.terms().iter().map(|(c, _)| c.norm()).fold(1.0, f64::max);
    if f.reality_defect() > 1e-12 * scale {
        return Err(Error::NonRealObservable);
    }
    Ok(())
}

pub fn robertson_schrodinger(f: &StarPolynomial, g: &StarPolynomial, s: &StateFunctional) -> Result<RobertsonSchrodinger> {
    check_real(f)?;
    check_real(g)?;
    let mf = s.expectation(f);
    let mg = s.expectation(g);
    let df = f.add_constant(-mf);
    let dg = g.add_constant(-mg);
    let br = s.expectation(&moyal_bracket(f, g)?);
    let anti = s.expectation(&anti_bracket(&df, &dg)?);
    Ok(RobertsonSchrodinger {
        var_f: s.variance(f),
        var_g: s.variance(g),
        bracket_term: -0.25 * (br * br).re,
        anti_bracket_term: 0.25 * anti.re * anti.re,
        anti_bracket_imag: anti.im,
    })
}

pub fn robertson_schrodinger_slack(f: &StarPolynomial, g: &StarPolynomial, s: &StateFunctional) -> Result<f64> {
    Ok(robertson_schrodinger(f, g, s)?.slack())
}

/// Moments of the four canonical coordinates in a coherent state.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherentReport {
    pub q1: MomentReport,
    pub p1: MomentReport,
    pub q2: MomentReport,
    pub p2: MomentReport,
    /// `<q1^2>`.
    pub q1_second_moment: f64,
    pub tail_warning: bool,
}

impl CoherentReport {
    pub fn product(&self, pair: usize) -> f64 {
        match pair {
            1 => self.q1.std_dev() * self.p1.std_dev(),
            _ => self.q2.std_dev() * self.p2.std_dev(),
        }
    }
}

/// Closed-form means `(<q1>, <p1>, <q2>, <p2>)` in the coherent state.
pub fn coherent_means(label: CoherentLabel, params: &PhysParams) -> [f64; 4] {
    let g = params.gamma();
    let k = 0.5 * params.m_gamma_omega();
    let (a1, a2) = (label.alpha1, label.alpha2);
    [-g * (a1.im - a2.im), k * (a1.re - a2.re), g * (a1.re + a2.re), k * (a1.im + a2.im)]
}

/// Means and variances computed from the matrix-unit state.
pub fn coherent_uncertainties(label: CoherentLabel, params: &PhysParams, cutoff: usize) -> Result<CoherentReport> {
    let state = coherent_fock(label, cutoff);
    let tail_warning = state.tail_warning();
    let s = StateFunctional::new(state, *params)?;
    let q1 = StarPolynomial::q1(params);
    let q1_second_moment = s.expectation(&q1.star(&q1)).re;
    Ok(CoherentReport {
        q1: s.moment_report("q1", &q1),
        p1: s.moment_report("p1", &StarPolynomial::p1(params)),
        q2: s.moment_report("q2", &StarPolynomial::q2(params)),
        p2: s.moment_report("p2", &StarPolynomial::p2(params)),
        q1_second_moment,
        tail_warning,
    })
}

/// `|<f^k>_g - <f'^k>_nl|` with `f'` the displaced polynomial.
pub fn generalized_expectation_theorem_check(
    f: &StarPolynomial,
    k: usize,
    label: GeneralizedCoherentLabel,
    params: &PhysParams,
    cutoff: usize,
) -> Result<f64> {
    if k > 3 {
        return Err(Error::IndexOutOfRange(format!("star power {k} above 3")));
    }
    let g = crate::states::generalized_coherent_fock(label, cutoff)?;
    let w = crate::states::wigner_fock(label.base, cutoff)?;
    let sg = StateFunctional::new(g, *params)?;
    let sw = StateFunctional::new(w, *params)?;
    let lhs = sg.expectation(&f.star_pow(k));
    let shifted = crate::states::displaced_polynomial(f, label.alpha1, label.alpha2);
    let rhs = sw.expectation(&shifted.star_pow(k));
    Ok((lhs - rhs).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::star::Gen;
    use crate::states::wigner_fock;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn wigner_state(n: usize, l: usize, cutoff: usize, p: &PhysParams) -> StateFunctional {
        StateFunctional::new(wigner_fock(WignerLabel::new(n, l), cutoff).unwrap(), *p).unwrap()
    }

    #[test]
    fn simple_expectations() {
        let p = PhysParams::new(1.3, 0.8, 2.1).unwrap();
        let s = wigner_state(3, 1, 10, &p);
        let e = s.expectation(&StarPolynomial::hamiltonian(&p));
        assert!((e - c(1.3 * 2.1 * 3.5, 0.0)).norm() < 1e-13);
        assert_eq!(s.expectation(&StarPolynomial::one()), c(1.0, 0.0));
        let a = StarPolynomial::generator(Gen::A);
        assert!((s.inner_product(&a, &a) - c(3.0, 0.0)).norm() < 1e-13);
        assert!(StateFunctional::new(FockRep::zeros(4), p).is_err());
    }

    #[test]
    fn coordinate_moments() {
        let p = PhysParams::new(0.6, 1.7, 0.9).unwrap();
        let g = p.gamma();
        for (n, l) in [(0, 0), (2, 1), (4, 4)] {
            let lab = WignerLabel::new(n, l);
            let q2 = coordinate_moment(MarginalAxis::Q1, 2, lab, &p).unwrap();
            assert!((q2 - g * g * (n + l + 1) as f64 / 2.0).abs() < 1e-12 * q2);
            let p2 = coordinate_moment(MarginalAxis::P1, 2, lab, &p).unwrap();
            let s = p.momentum_scale();
            assert!((p2 - s * s * (n + l + 1) as f64 / 2.0).abs() < 1e-12 * p2);
            assert_eq!(coordinate_moment(MarginalAxis::Q1, 1, lab, &p).unwrap(), 0.0);
            // the star-trace route agrees
            let st = wigner_state(n, l, 12, &p);
            let q = StarPolynomial::q1(&p);
            let via = st.expectation(&q.star(&q).star(&q).star(&q)).re;
            let m4 = coordinate_moment(MarginalAxis::Q1, 4, lab, &p).unwrap();
            assert!((via - m4).abs() < 1e-9 * m4);
        }
        assert!(coordinate_moment(MarginalAxis::Q1, 9, WignerLabel::new(0, 0), &p).is_err());
    }

    #[test]
    fn products() {
        let p = PhysParams::new(0.5, 1.0, 1.0).unwrap();
        assert!((uncertainty_product(WignerLabel::new(0, 0), 1, &p).unwrap() - 0.25).abs() < 1e-14);
        assert!((uncertainty_product(WignerLabel::new(1, 2), 2, &p).unwrap() - 1.0).abs() < 1e-13);
        let a = uncertainty_product(WignerLabel::new(5, 2), 1, &p).unwrap();
        let b = uncertainty_product(WignerLabel::new(2, 5), 1, &p).unwrap();
        assert!((a - b).abs() < 1e-14);
    }

    #[test]
    fn robertson_schrodinger_cases() {
        let p = PhysParams::new(0.8, 1.0, 1.5).unwrap();
        let (q1, p1) = (StarPolynomial::q1(&p), StarPolynomial::p1(&p));
        let ground = wigner_state(0, 0, 8, &p);
        assert!(robertson_schrodinger_slack(&q1, &p1, &ground).unwrap().abs() < 1e-10);
        let excited = wigner_state(1, 1, 8, &p);
        let rs = robertson_schrodinger(&q1, &p1, &excited).unwrap();
        assert!((rs.slack() - 2.0 * 0.64).abs() < 1e-12, "{rs:?}");
        assert!(rs.anti_bracket_term.abs() < 1e-24 && rs.anti_bracket_imag.abs() < 1e-12);
        let same = robertson_schrodinger(&q1, &q1, &excited).unwrap();
        assert!(same.slack().abs() < 1e-12);
        let complex = StarPolynomial::generator(Gen::A);
        assert_eq!(robertson_schrodinger_slack(&complex, &q1, &ground), Err(Error::NonRealObservable));
    }

    #[test]
    fn coherent_state_moments() {
        let p = PhysParams::default();
        let lab = CoherentLabel::new(c(0.0, 1.0), c(0.0, 0.0));
        let r = coherent_uncertainties(lab, &p, 20).unwrap();
        assert!((r.q1.mean.re + 2f64.sqrt()).abs() < 1e-10);
        assert!((r.product(1) - 0.5).abs() < 1e-10 && (r.product(2) - 0.5).abs() < 1e-10);
        let means = coherent_means(lab, &p);
        assert!((r.q1_second_moment - (p.gamma().powi(2) / 2.0 + means[0].powi(2))).abs() < 1e-10);
    }

    #[test]
    fn generalized_theorem() {
        let p = PhysParams::default();
        let lab = GeneralizedCoherentLabel { base: WignerLabel::new(2, 1), alpha1: c(0.5, 0.0), alpha2: c(0.0, -0.3) };
        let a = StarPolynomial::generator(Gen::A);
        assert!(generalized_expectation_theorem_check(&a, 1, lab, &p, 24).unwrap() < 1e-10);
        let n = StarPolynomial::number_a();
        assert!(generalized_expectation_theorem_check(&n, 1, lab, &p, 24).unwrap() < 1e-9);
        let k = StarPolynomial::constant(c(2.0, -1.0));
        assert!(generalized_expectation_theorem_check(&k, 2, lab, &p, 24).unwrap() < 1e-12);
    }
}
