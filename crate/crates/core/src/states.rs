//! Wigner functions of the Landau levels, generating functions, displacement
//! functions and coherent states, both pointwise and in the matrix-unit
//! representation.

use std::fmt;
use std::str::FromStr;

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::params::{to_mode_coords, PhasePoint, PhysParams};
use crate::specfun::laguerre;
use crate::star::ladder::{column_tail_weight, displacement_matrix};
use crate::star::{FockRep, StarPolynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WignerLabel {
    pub n: usize,
    pub l: usize,
}

impl WignerLabel {
    pub fn new(n: usize, l: usize) -> Self {
        Self { n, l }
    }

    /// `E_n = hbar omega (n + 1/2)`.
    pub fn energy(&self, params: &PhysParams) -> f64 {
        params.hbar() * params.omega() * (self.n as f64 + 0.5)
    }

    /// `J = hbar (l - n)`.
    pub fn angular_momentum(&self, params: &PhysParams) -> f64 {
        params.hbar() * (self.l as f64 - self.n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentLabel {
    pub alpha1: C64,
    pub alpha2: C64,
}

impl CoherentLabel {
    pub fn new(alpha1: C64, alpha2: C64) -> Self {
        Self { alpha1, alpha2 }
    }

    pub fn is_finite(&self) -> bool {
        [self.alpha1, self.alpha2].iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedCoherentLabel {
    pub base: WignerLabel,
    pub alpha1: C64,
    pub alpha2: C64,
}

/// `(-1)^{n+l} L_n(4|a|^2) L_l(4|b|^2) 4 e^{-2(|a|^2 + |b|^2)}`.
pub fn wigner_eval(label: WignerLabel, pt: &PhasePoint, params: &PhysParams) -> f64 {
    let mc = to_mode_coords(pt, params);
    let xa = 4.0 * mc.a.norm_sqr();
    let xb = 4.0 * mc.b.norm_sqr();
    let sign = if (label.n + label.l).is_multiple_of(2) { 1.0 } else { -1.0 };
    let la = laguerre(label.n, 0, xa).expect("degree within cap");
    let lb = laguerre(label.l, 0, xb).expect("degree within cap");
    sign * la * lb * 4.0 * (-0.5 * (xa + xb)).exp()
}

pub fn wigner_fock(label: WignerLabel, cutoff: usize) -> Result<FockRep> {
    if label.n >= cutoff || label.l >= cutoff {
        return Err(Error::LabelExceedsCutoff { n: label.n, l: label.l, cutoff });
    }
    FockRep::matrix_unit(label.n, label.n, label.l, label.l, cutoff)
}

/// Generating function with all four mode variables independent:
/// `exp(-alpha1 beta1 - alpha2 beta2 + 2(alpha1 abar + beta1 a + alpha2 bbar + beta2 b) - 2(a abar + b bbar))`.
pub fn generating_g_vars(alpha1: C64, beta1: C64, alpha2: C64, beta2: C64, vars: [C64; 4]) -> C64 {
    let [a, abar, b, bbar] = vars;
    let expo = -alpha1 * beta1 - alpha2 * beta2 + 2.0 * (alpha1 * abar + beta1 * a + alpha2 * bbar + beta2 * b)
        - 2.0 * (a * abar + b * bbar);
    expo.exp()
}

pub fn generating_g(alpha1: C64, beta1: C64, alpha2: C64, beta2: C64, pt: &PhasePoint, params: &PhysParams) -> C64 {
    let mc = to_mode_coords(pt, params);
    generating_g_vars(alpha1, beta1, alpha2, beta2, [mc.a, mc.a_bar(), mc.b, mc.b_bar()])
}

/// `G_s = D * W_0 * Dbar = 4 e^{-2|a - alpha1|^2 - 2|b - alpha2|^2}`.
///
/// In terms of the generating function at `beta = conj(alpha)`,
/// `G_s = 4 e^{-|alpha1|^2 - |alpha2|^2} G(alpha, conj(alpha))`.
pub fn coherent_eval(label: CoherentLabel, pt: &PhasePoint, params: &PhysParams) -> f64 {
    let mc = to_mode_coords(pt, params);
    4.0 * (-2.0 * ((mc.a - label.alpha1).norm_sqr() + (mc.b - label.alpha2).norm_sqr())).exp()
}

/// Per-mode displacement matrices `(D_a, D_b)` at the given cutoff.
pub fn displacement_fock(alpha1: C64, alpha2: C64, cutoff: usize) -> (Array2<C64>, Array2<C64>) {
    (displacement_matrix(alpha1, cutoff), displacement_matrix(alpha2, cutoff))
}

// Projector |u><u| onto column k of a displacement matrix.
fn column_projector(d: &Array2<C64>, k: usize) -> Array2<C64> {
    let n = d.nrows();
    Array2::from_shape_fn((n, n), |(i, j)| d[[i, k]] * d[[j, k]].conj())
}

fn displaced_projector(n: usize, l: usize, alpha1: C64, alpha2: C64, cutoff: usize) -> Result<FockRep> {
    if n >= cutoff || l >= cutoff {
        return Err(Error::LabelExceedsCutoff { n, l, cutoff });
    }
    let (da, db) = displacement_fock(alpha1, alpha2, cutoff);
    let rep = FockRep::from_mode_product(&column_projector(&da, n), &column_projector(&db, l));
    let ta = column_tail_weight(alpha1, n, cutoff);
    let tb = column_tail_weight(alpha2, l, cutoff);
    Ok(rep.with_tail_weight(ta + tb - ta * tb))
}

/// `D * W_0 * Dbar`; the tail weight records what the cutoff discards.
pub fn coherent_fock(label: CoherentLabel, cutoff: usize) -> FockRep {
    displaced_projector(0, 0, label.alpha1, label.alpha2, cutoff).expect("cutoff is positive")
}

/// `D * W_{nl} * Dbar`.
pub fn generalized_coherent_fock(label: GeneralizedCoherentLabel, cutoff: usize) -> Result<FockRep> {
    displaced_projector(label.base.n, label.base.l, label.alpha1, label.alpha2, cutoff)
}

/// `f(a + alpha1, abar + conj(alpha1), b + alpha2, bbar + conj(alpha2))`.
pub fn displaced_polynomial(p: &StarPolynomial, alpha1: C64, alpha2: C64) -> StarPolynomial {
    p.displaced(alpha1, alpha2)
}

/// A state addressed by the label grammar `wigner:n,l`,
/// `coherent:re1,im1,re2,im2` or `gencoherent:n,l:re1,im1,re2,im2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateLabel {
    Wigner(WignerLabel),
    Coherent(CoherentLabel),
    GenCoherent(GeneralizedCoherentLabel),
}

impl StateLabel {
    /// Largest quantum number the state references directly.
    pub fn max_quantum_number(&self) -> usize {
        match self {
            StateLabel::Wigner(w) => w.n.max(w.l),
            StateLabel::Coherent(_) => 0,
            StateLabel::GenCoherent(g) => g.base.n.max(g.base.l),
        }
    }

    pub fn fock(&self, cutoff: usize) -> Result<FockRep> {
        match self {
            StateLabel::Wigner(w) => wigner_fock(*w, cutoff),
            StateLabel::Coherent(c) => Ok(coherent_fock(*c, cutoff)),
            StateLabel::GenCoherent(g) => generalized_coherent_fock(*g, cutoff),
        }
    }

    pub fn wigner_label(&self) -> Option<WignerLabel> {
        match self {
            StateLabel::Wigner(w) => Some(*w),
            _ => None,
        }
    }
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| Error::Parse(format!("invalid {what} '{s}'")))
}

fn parse_f64(s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| Error::Parse(format!("invalid number '{s}'")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!("non-finite number '{s}'")));
    }
    Ok(v)
}

fn parse_pair(s: &str) -> Result<WignerLabel> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Error::Parse(format!("expected 'n,l', got '{s}'")));
    }
    Ok(WignerLabel::new(parse_usize(parts[0], "n")?, parse_usize(parts[1], "l")?))
}

fn parse_alphas(s: &str) -> Result<(C64, C64)> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Parse(format!("expected 're1,im1,re2,im2', got '{s}'")));
    }
    let v: Vec<f64> = parts.iter().map(|p| parse_f64(p)).collect::<Result<_>>()?;
    Ok((C64::new(v[0], v[1]), C64::new(v[2], v[3])))
}

impl FromStr for StateLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').ok_or_else(|| Error::Parse(format!("state label '{s}' lacks a kind")))?;
        match kind {
            "wigner" => Ok(StateLabel::Wigner(parse_pair(rest)?)),
            "coherent" => {
                let (alpha1, alpha2) = parse_alphas(rest)?;
                Ok(StateLabel::Coherent(CoherentLabel { alpha1, alpha2 }))
            }
            "gencoherent" => {
                let (nl, alphas) = rest
                    .split_once(':')
                    .ok_or_else(|| Error::Parse(format!("expected 'gencoherent:n,l:re1,im1,re2,im2', got '{s}'")))?;
                let base = parse_pair(nl)?;
                let (alpha1, alpha2) = parse_alphas(alphas)?;
                Ok(StateLabel::GenCoherent(GeneralizedCoherentLabel { base, alpha1, alpha2 }))
            }
            other => Err(Error::Parse(format!("unknown state kind '{other}'"))),
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Wigner(w) => write!(f, "wigner:{},{}", w.n, w.l),
            StateLabel::Coherent(c) => {
                write!(f, "coherent:{},{},{},{}", c.alpha1.re, c.alpha1.im, c.alpha2.re, c.alpha2.im)
            }
            StateLabel::GenCoherent(g) => write!(
                f,
                "gencoherent:{},{}:{},{},{},{}",
                g.base.n, g.base.l, g.alpha1.re, g.alpha1.im, g.alpha2.re, g.alpha2.im
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::{complex_derivative, taylor_coefficient};
    use crate::params::from_mode_coords;
    use crate::params::ModeCoords;
    use crate::specfun::log_factorial;
    use crate::star::{Gen, Side};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_point(rng: &mut ChaCha8Rng, r: f64) -> PhasePoint {
        PhasePoint::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r))
    }

    #[test]
    fn wigner_values() {
        let p = PhysParams::default();
        assert_eq!(wigner_eval(WignerLabel::new(0, 0), &PhasePoint::ORIGIN, &p), 4.0);
        for (n, l) in [(1, 0), (2, 3), (4, 1)] {
            let v = wigner_eval(WignerLabel::new(n, l), &PhasePoint::ORIGIN, &p);
            assert_eq!(v, 4.0 * if (n + l) % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert!(wigner_fock(WignerLabel::new(4, 0), 4).is_err());
    }

    #[test]
    fn fock_and_closed_form_agree() {
        let p = PhysParams::new(0.8, 1.3, 0.6).unwrap();
        let w = wigner_fock(WignerLabel::new(2, 1), 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let pt = random_point(&mut rng, 2.0);
            let direct = wigner_eval(WignerLabel::new(2, 1), &pt, &p);
            let via = w.eval(&pt, &p);
            assert!((via - c(direct, 0.0)).norm() < 1e-11, "{direct} vs {via}");
        }
    }

    #[test]
    fn energy_eigenvalue() {
        let p = PhysParams::new(1.2, 0.7, 2.0).unwrap();
        let w = wigner_fock(WignerLabel::new(2, 4), 10).unwrap();
        let hw = w.apply_star_polynomial(&StarPolynomial::hamiltonian(&p), Side::Left);
        let expect = &w * (2.5 * 1.2 * 2.0);
        assert!(hw.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn generating_function_produces_wigner_functions() {
        // d^n_alpha1 d^n_beta1 d^l_alpha2 d^l_beta2 G at 0 times 4/(n! l!) is W_nl;
        // extracted as Taylor coefficients times (n!)^2 (l!)^2.
        let p = PhysParams::default();
        let zero = [c(0.0, 0.0); 4];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let labels = (0..=2usize).flat_map(|n| (0..=2usize).map(move |l| (n, l)));
        for (n, l) in labels {
            for _ in 0..10 {
                let pt = random_point(&mut rng, 1.0);
                let f = |z: &[C64]| generating_g(z[0], z[1], z[2], z[3], &pt, &p);
                let coef = taylor_coefficient(f, &zero, &[n, n, l, l], 0.8, 20);
                let fac = 2.0 * (log_factorial(n) + log_factorial(l));
                let value = coef * fac.exp() * 4.0 / (log_factorial(n) + log_factorial(l)).exp();
                let w = wigner_eval(WignerLabel::new(n, l), &pt, &p);
                assert!((value - c(w, 0.0)).norm() < 1e-10, "({n},{l}): {value} vs {w}");
            }
        }
    }

    #[test]
    fn generating_function_is_left_eigenfunction() {
        // (a + 1/2 d_abar) G = alpha1 G, with abar varied independently
        let (al1, be1, al2, be2) = (c(0.4, -0.3), c(0.1, 0.9), c(-0.5, 0.2), c(0.3, 0.3));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let a = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let b = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let g = |abar: C64| generating_g_vars(al1, be1, al2, be2, [a, abar, b, b.conj()]);
            let d = complex_derivative(g, a.conj());
            let lhs = a * g(a.conj()) + 0.5 * d;
            assert!((lhs - al1 * g(a.conj())).norm() < 1e-12 * g(a.conj()).norm().max(1.0));
        }
        let zero = c(0.0, 0.0);
        let pt = PhasePoint::new(0.3, -0.2, 0.5, 1.0);
        let p = PhysParams::default();
        let w0 = wigner_eval(WignerLabel::new(0, 0), &pt, &p);
        assert!((generating_g(zero, zero, zero, zero, &pt, &p) - c(w0 / 4.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn coherent_normalization_convention() {
        // G_s = 4 e^{-|alpha|^2} G(alpha, conj alpha), frozen against the explicit Gaussian.
        let p = PhysParams::new(1.1, 0.9, 1.4).unwrap();
        let lab = CoherentLabel::new(c(0.7, -0.4), c(-0.2, 1.1));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pt = random_point(&mut rng, 2.0);
            let g = generating_g(lab.alpha1, lab.alpha1.conj(), lab.alpha2, lab.alpha2.conj(), &pt, &p);
            let norm = lab.alpha1.norm_sqr() + lab.alpha2.norm_sqr();
            let gs = coherent_eval(lab, &pt, &p);
            assert!((g * 4.0 * (-norm).exp() - c(gs, 0.0)).norm() < 1e-13 * gs.max(1e-300).max(1.0));
        }
        let pt = from_mode_coords(&ModeCoords { a: lab.alpha1, b: lab.alpha2 }, &p);
        assert!((coherent_eval(lab, &pt, &p) - 4.0).abs() < 1e-13);
    }

    #[test]
    fn coherent_fock_matches_pointwise() {
        let p = PhysParams::default();
        let lab = CoherentLabel::new(c(0.9, 0.6), c(-0.5, -0.8));
        let g = coherent_fock(lab, 32);
        assert!(!g.tail_warning());
        assert!(g.reality_defect() < 1e-15);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let pt = random_point(&mut rng, 1.5);
            let direct = coherent_eval(lab, &pt, &p);
            assert!((g.eval(&pt, &p) - c(direct, 0.0)).norm() < 1e-9);
        }
        let g0 = coherent_fock(CoherentLabel::new(c(0.0, 0.0), c(0.0, 0.0)), 6);
        assert_eq!(g0, wigner_fock(WignerLabel::new(0, 0), 6).unwrap());
    }

    #[test]
    fn coherent_state_is_annihilation_eigenfunction() {
        let lab = CoherentLabel::new(c(0.6, -0.3), c(0.2, 0.4));
        let g = coherent_fock(lab, 24);
        let ag = g.left_star_generator(Gen::A);
        assert!(ag.max_abs_diff(&(&g * lab.alpha1)) < 1e-9);
        let bg = g.left_star_generator(Gen::B);
        assert!(bg.max_abs_diff(&(&g * lab.alpha2)) < 1e-9);
        // excited Wigner functions are not
        let w = wigner_fock(WignerLabel::new(1, 0), 8).unwrap();
        let aw = w.left_star_generator(Gen::A);
        assert!(aw.coeff(0, 1, 0, 0).norm() > 0.5 && aw.coeff(1, 1, 0, 0).norm() == 0.0);
    }

    #[test]
    fn generalized_coherent_trace_and_projection() {
        let lab = GeneralizedCoherentLabel { base: WignerLabel::new(2, 1), alpha1: c(0.5, 0.0), alpha2: c(0.0, -0.3) };
        let g = generalized_coherent_fock(lab, 20).unwrap();
        assert!((g.trace() - c(1.0, 0.0)).norm() < 1e-10);
        assert!(g.star(&g).unwrap().max_abs_diff(&g) < 1e-10);
        let zero = GeneralizedCoherentLabel { alpha1: c(0.0, 0.0), alpha2: c(0.0, 0.0), ..lab };
        assert_eq!(generalized_coherent_fock(zero, 6).unwrap(), wigner_fock(WignerLabel::new(2, 1), 6).unwrap());
    }

    #[test]
    fn labels_round_trip() {
        for s in ["wigner:2,1", "coherent:1,0,-0.5,0.25", "gencoherent:1,3:0.5,-1,0,2"] {
            let lab: StateLabel = s.parse().unwrap();
            assert_eq!(lab.to_string(), s);
        }
        for bad in ["wigner:2", "wigner:a,1", "coherent:1,2,3", "gencoherent:1,1", "squeezed:1", "wigner", "coherent:1,NaN,0,0"] {
            assert!(bad.parse::<StateLabel>().is_err(), "{bad}");
        }
    }
}
