//! The verification suite: named numerical checks, each with a measured
//! residual and a tolerance, reported in a fixed order.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::marginals::{marginal_1d, marginal_2d, verify_integral_equality, MarginalAxis, Plane2D};
use crate::params::{to_mode_coords, PhasePoint, PhysParams};
use crate::quadrature::{default_order, gauss_hermite, integrate_1d, integrate_nd};
use crate::star::{oracle_star_polygauss, polygauss, FockRep, Gen, Side, StarPolynomial};
use crate::states::{
    coherent_eval, coherent_fock, displaced_polynomial, displacement_fock, generalized_coherent_fock,
    wigner_eval, wigner_fock, CoherentLabel, GeneralizedCoherentLabel, WignerLabel,
};
use crate::uncertainty::{
    coherent_means, coherent_uncertainties, coordinate_moment, generalized_expectation_theorem_check,
    robertson_schrodinger_slack, uncertainty_product, StateFunctional,
};

const SEED: u64 = 0x5eed_1a4d;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    /// Passes when `residual <= tolerance`; NaN never passes.
    pub fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self { name: name.into(), residual, tolerance, pass: residual <= tolerance }
    }

    fn failed(name: impl Into<String>, err: &Error) -> Self {
        Self { name: format!("{} ({err})", name.into()), residual: f64::INFINITY, tolerance: 0.0, pass: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Star,
    Marginals,
    Uncertainty,
    Coherent,
}

impl Suite {
    fn parts(self) -> &'static [Suite] {
        match self {
            Suite::All => &[Suite::Star, Suite::Marginals, Suite::Uncertainty, Suite::Coherent],
            Suite::Star => &[Suite::Star],
            Suite::Marginals => &[Suite::Marginals],
            Suite::Uncertainty => &[Suite::Uncertainty],
            Suite::Coherent => &[Suite::Coherent],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Suite::All),
            "star" => Ok(Suite::Star),
            "marginals" => Ok(Suite::Marginals),
            "uncertainty" => Ok(Suite::Uncertainty),
            "coherent" => Ok(Suite::Coherent),
            _ => Err(Error::Parse(format!("unknown suite '{s}'"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::All => "all",
            Suite::Star => "star",
            Suite::Marginals => "marginals",
            Suite::Uncertainty => "uncertainty",
            Suite::Coherent => "coherent",
        })
    }
}

type Job = fn(&PhysParams) -> Vec<Check>;

fn jobs(suite: Suite) -> Vec<Job> {
    match suite {
        Suite::Star => vec![
            projection,
            associativity,
            hermitian_involution,
            trace_property,
            oracle_equivalence,
            ladder_consistency,
            spectrum,
            state_reality,
        ],
        Suite::Marginals => vec![
            wigner_normalization,
            marginal_normalization,
            marginal_consistency,
            marginal_2d_consistency,
            evenness_positivity,
            integral_equalities,
        ],
        Suite::Uncertainty => vec![
            uncertainty_table,
            moment_routes,
            semidefiniteness,
            degenerate_kernel,
            cauchy_schwarz,
            robertson_schrodinger_random,
        ],
        Suite::Coherent => vec![
            coherent_states,
            coherent_variance_independence,
            displacement_algebra,
            displaced_polynomials,
            generalized_theorem,
            displacement_invariance,
        ],
        Suite::All => Suite::All.parts().iter().flat_map(|s| jobs(*s)).collect(),
    }
}

/// Runs every check of `suite`; jobs run concurrently and results are
/// assembled in declaration order.
pub fn run_suite(suite: Suite, params: &PhysParams) -> Vec<Check> {
    jobs(suite).par_iter().map(|job| job(params)).collect::<Vec<_>>().into_iter().flatten().collect()
}

pub fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn unit_disk(rng: &mut impl Rng) -> C64 {
    loop {
        let z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        if z.norm_sqr() <= 1.0 {
            return z;
        }
    }
}

/// Dense random FockRep with coefficients in the disk of radius `1/cutoff`,
/// which keeps products of a few factors of order one.
pub fn random_fock(rng: &mut impl Rng, cutoff: usize) -> FockRep {
    let mut f = FockRep::zeros(cutoff);
    let s = 1.0 / cutoff as f64;
    for m1 in 0..cutoff {
        for n1 in 0..cutoff {
            for m2 in 0..cutoff {
                for n2 in 0..cutoff {
                    f.set(m1, n1, m2, n2, unit_disk(rng) * s);
                }
            }
        }
    }
    f
}

/// Random star polynomial with `terms` words of length up to `max_len`.
pub fn random_star_polynomial(rng: &mut impl Rng, terms: usize, max_len: usize) -> StarPolynomial {
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        let len = rng.gen_range(0..=max_len);
        let word = (0..len).map(|_| Gen::ALL[rng.gen_range(0..4)]).collect();
        out.push((unit_disk(rng), word));
    }
    StarPolynomial::from_terms(out).simplified()
}

/// `P + conj(P)` for a random `P`, real as a phase-space function.
pub fn random_real_observable(rng: &mut impl Rng, terms: usize, max_len: usize) -> StarPolynomial {
    let p = random_star_polynomial(rng, terms, max_len);
    p.add(&p.conj()).simplified()
}

fn labels(max: usize) -> impl Iterator<Item = WignerLabel> {
    (0..=max).flat_map(move |n| (0..=max).map(move |l| WignerLabel::new(n, l)))
}

fn guard(name: &str, f: impl FnOnce() -> Result<Vec<Check>>) -> Vec<Check> {
    f().unwrap_or_else(|e| vec![Check::failed(name, &e)])
}

// ---- star algebra ----

fn projection(_: &PhysParams) -> Vec<Check> {
    guard("projection W⋆W=W", || {
        let cutoff = 8;
        let reps: Vec<(WignerLabel, FockRep)> =
            labels(6).map(|w| wigner_fock(w, cutoff).map(|r| (w, r))).collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for (w1, f) in &reps {
            for (w2, g) in &reps {
                let prod = f.star(g)?;
                let r = if w1 == w2 { prod.max_abs_diff(f) } else { prod.max_abs() };
                worst = worst.max(r);
            }
        }
        Ok(vec![Check::new("projection W⋆W=W", worst, 1e-12)])
    })
}

fn associativity(_: &PhysParams) -> Vec<Check> {
    guard("associativity", || {
        let mut r = rng(1);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let (f, g, h) = (random_fock(&mut r, 12), random_fock(&mut r, 12), random_fock(&mut r, 12));
            let left = f.star(&g)?.star(&h)?;
            let right = f.star(&g.star(&h)?)?;
            worst = worst.max(left.max_abs_diff(&right));
        }
        Ok(vec![Check::new("associativity", worst, 1e-13)])
    })
}

fn hermitian_involution(_: &PhysParams) -> Vec<Check> {
    guard("hermitian involution", || {
        let mut r = rng(2);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let (f, g) = (random_fock(&mut r, 12), random_fock(&mut r, 12));
            let lhs = f.star(&g)?.conj();
            let rhs = g.conj().star(&f.conj())?;
            worst = worst.max(lhs.max_abs_diff(&rhs));
        }
        Ok(vec![Check::new("hermitian involution", worst, 1e-13)])
    })
}

fn trace_property(params: &PhysParams) -> Vec<Check> {
    guard("trace property", || {
        let mut r = rng(3);
        let rule = gauss_hermite(12)?;
        let q = params.gamma() / 2f64.sqrt();
        let p = params.momentum_scale() / 2f64.sqrt();
        let mut worst: f64 = 0.0;
        for _ in 0..6 {
            let (f, g) = (random_fock(&mut r, 3), random_fock(&mut r, 3));
            let lhs = f.star(&g)?.integrate(params);
            let rhs: C64 = integrate_nd(
                |x: &[f64]| {
                    let pt = PhasePoint::from_array([x[0], x[1], x[2], x[3]]);
                    f.eval(&pt, params) * g.eval(&pt, params)
                },
                &[q, q, p, p],
                &rule,
            );
            worst = worst.max((lhs - rhs).norm() / rhs.norm().max(lhs.norm()));
        }
        Ok(vec![Check::new("trace property", worst, 1e-9)])
    })
}

fn oracle_equivalence(params: &PhysParams) -> Vec<Check> {
    guard("oracle-equivalence", || {
        let mut r = rng(4);
        let pts: Vec<PhasePoint> = (0..25)
            .map(|_| PhasePoint::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0)))
            .collect();
        let words: Vec<_> = (1..=4).flat_map(StarPolynomial::all_words).collect();
        let mut worst: f64 = 0.0;
        for w in labels(3) {
            let rep = wigner_fock(w, 8)?;
            let sym = polygauss::wigner_symbol(w.n, w.l);
            let sym_vals: Vec<f64> = pts.iter().map(|pt| sym.eval(&to_mode_coords(pt, params)).norm()).collect();
            for word in &words {
                let poly = StarPolynomial::word(C64::new(1.0, 0.0), word.clone());
                let fock = rep.apply_star_polynomial(&poly, Side::Left);
                let oracle = oracle_star_polygauss(&polygauss::polynomial_of(&poly)?, &sym, word.len() as u32)?;
                let vals: Vec<(C64, C64)> =
                    pts.iter().map(|pt| (fock.eval(pt, params), oracle.eval(&to_mode_coords(pt, params)))).collect();
                // relative to the largest magnitude over the sample points
                let scale = vals.iter().map(|(_, o)| o.norm()).chain(sym_vals.iter().copied()).fold(f64::MIN_POSITIVE, f64::max);
                for (a, b) in vals {
                    worst = worst.max((a - b).norm() / scale);
                }
            }
        }
        Ok(vec![Check::new("oracle-equivalence", worst, 1e-10)])
    })
}

fn ladder_consistency(_: &PhysParams) -> Vec<Check> {
    guard("ladder consistency", || {
        let a = StarPolynomial::generator(Gen::A);
        let mut worst: f64 = 0.0;
        for n in 1..=6 {
            for l in 0..=6 {
                let w = wigner_fock(WignerLabel::new(n, l), 10)?;
                let lower = wigner_fock(WignerLabel::new(n - 1, l), 10)?;
                let d = w.apply_star_polynomial(&a, Side::Left).max_abs_diff(&lower.apply_star_polynomial(&a, Side::Right));
                worst = worst.max(d);
            }
        }
        Ok(vec![Check::new("ladder consistency", worst, 1e-12)])
    })
}

fn spectrum(params: &PhysParams) -> Vec<Check> {
    guard("spectrum", || {
        let h = StarPolynomial::hamiltonian(params);
        let j = StarPolynomial::angular_momentum(params);
        let (mut worst_h, mut worst_j): (f64, f64) = (0.0, 0.0);
        for w in labels(6) {
            let rep = wigner_fock(w, 10)?;
            let eh = &rep * w.energy(params);
            let ej = &rep * w.angular_momentum(params);
            for side in [Side::Left, Side::Right] {
                worst_h = worst_h.max(rep.apply_star_polynomial(&h, side).max_abs_diff(&eh));
                worst_j = worst_j.max(rep.apply_star_polynomial(&j, side).max_abs_diff(&ej));
            }
        }
        Ok(vec![Check::new("spectrum hamiltonian", worst_h, 1e-12), Check::new("spectrum angular momentum", worst_j, 1e-12)])
    })
}

fn state_reality(_: &PhysParams) -> Vec<Check> {
    guard("state reality", || {
        let mut worst: f64 = 0.0;
        for w in labels(4) {
            worst = worst.max(wigner_fock(w, 8)?.reality_defect());
        }
        let g = coherent_fock(CoherentLabel::new(C64::new(0.7, -0.4), C64::new(-0.2, 0.5)), 16);
        worst = worst.max(g.reality_defect());
        Ok(vec![Check::new("state reality", worst, 0.0)])
    })
}

// ---- marginals ----

fn wigner_normalization(params: &PhysParams) -> Vec<Check> {
    guard("normalization wigner", || {
        let h2 = params.planck_h().powi(2);
        let (q, p) = (params.gamma(), params.momentum_scale());
        let mut worst: f64 = 0.0;
        for w in labels(6) {
            let rule = gauss_hermite(default_order(w.n, w.l))?;
            let total: f64 =
                integrate_nd(|x: &[f64]| wigner_eval(w, &PhasePoint::from_array([x[0], x[1], x[2], x[3]]), params), &[q, q, p, p], &rule);
            worst = worst.max((total - h2).abs() / h2);
        }
        Ok(vec![Check::new("normalization wigner", worst, 1e-10)])
    })
}

fn marginal_normalization(params: &PhysParams) -> Vec<Check> {
    let h2 = params.planck_h().powi(2);
    MarginalAxis::ALL
        .iter()
        .map(|&axis| {
            let name = format!("normalization {axis}");
            let res = (|| -> Result<f64> {
                let mut worst: f64 = 0.0;
                for w in labels(6) {
                    let rule = gauss_hermite(default_order(w.n, w.l))?;
                    marginal_1d(w.n, w.l, axis, 0.0, params)?;
                    let total: f64 = integrate_1d(
                        |x: f64| marginal_1d(w.n, w.l, axis, x, params).expect("label checked"),
                        axis.scale(params),
                        &rule,
                    );
                    worst = worst.max((total - h2).abs() / h2);
                }
                Ok(worst)
            })();
            match res {
                Ok(r) => Check::new(name, r, 1e-10),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn marginal_consistency(params: &PhysParams) -> Vec<Check> {
    [MarginalAxis::Q1, MarginalAxis::P2]
        .iter()
        .map(|&axis| {
            let name = format!("consistency {axis} vs wigner quadrature");
            let res = (|| -> Result<f64> {
                let s = axis.scale(params);
                let others: Vec<MarginalAxis> = MarginalAxis::ALL.iter().copied().filter(|a| *a != axis).collect();
                let scales: Vec<f64> = others.iter().map(|a| a.scale(params)).collect();
                let mut worst: f64 = 0.0;
                for w in labels(4) {
                    let rule = gauss_hermite(default_order(w.n, w.l))?;
                    for i in 0..11 {
                        let x = s * (-2.5 + 0.5 * i as f64);
                        let quad: f64 = integrate_nd(
                            |y: &[f64]| {
                                let mut c = [0.0; 4];
                                c[axis.index()] = x;
                                for (k, a) in others.iter().enumerate() {
                                    c[a.index()] = y[k];
                                }
                                wigner_eval(w, &PhasePoint::from_array(c), params)
                            },
                            &scales,
                            &rule,
                        );
                        let closed = marginal_1d(w.n, w.l, axis, x, params)?;
                        worst = worst.max((quad - closed).abs() / axis.norm(params));
                    }
                }
                Ok(worst)
            })();
            match res {
                Ok(r) => Check::new(name, r, 1e-8),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn marginal_2d_consistency(params: &PhysParams) -> Vec<Check> {
    [Plane2D::Q1Q2, Plane2D::Q1P2]
        .iter()
        .map(|&plane| {
            let name = format!("consistency {}{} plane vs {}", plane.axes().0, plane.axes().1, plane.axes().0);
            let res = (|| -> Result<f64> {
                let (xa, ya) = plane.axes();
                let mut worst: f64 = 0.0;
                for w in labels(3) {
                    let rule = gauss_hermite(default_order(w.n, w.l))?;
                    for x in [0.0, 0.4, 1.3] {
                        let x = x * xa.scale(params);
                        let at = |y: f64| {
                            let mut c = [0.0; 4];
                            c[xa.index()] = x;
                            c[ya.index()] = y;
                            marginal_2d(w.n, w.l, plane, &PhasePoint::from_array(c), params)
                        };
                        at(0.0)?;
                        let integral: f64 = integrate_1d(|y: f64| at(y).expect("label checked"), ya.scale(params), &rule);
                        let direct = marginal_1d(w.n, w.l, xa, x, params)?;
                        worst = worst.max((integral - direct).abs() / xa.norm(params));
                    }
                }
                Ok(worst)
            })();
            match res {
                Ok(r) => Check::new(name, r, 1e-10),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn evenness_positivity(params: &PhysParams) -> Vec<Check> {
    guard("evenness and positivity", || {
        let mut asym: f64 = 0.0;
        let mut min_ratio = f64::INFINITY;
        for &axis in &MarginalAxis::ALL {
            for w in labels(6) {
                for i in 0..=60 {
                    let x = axis.scale(params) * 0.1 * i as f64;
                    let plus = marginal_1d(w.n, w.l, axis, x, params)?;
                    let minus = marginal_1d(w.n, w.l, axis, -x, params)?;
                    asym = asym.max((plus - minus).abs());
                    min_ratio = min_ratio.min(plus / axis.norm(params));
                }
            }
        }
        Ok(vec![
            Check::new("marginal evenness", asym, 0.0),
            Check::new("marginal positivity", if min_ratio > 0.0 { 0.0 } else { -min_ratio }, 0.0),
        ])
    })
}

fn integral_equalities(params: &PhysParams) -> Vec<Check> {
    let mut out = Vec::new();
    for (n, l) in [(1, 0), (2, 1), (3, 3), (2, 2)] {
        let samples = [0.0, 0.7, 1.6];
        match verify_integral_equality(n, l, &samples, params) {
            Ok(rs) => {
                for r in rs {
                    out.push(Check::new(format!("integral-equality n={n} l={l} q1={}", r.q1), r.max_residual(), 1e-8));
                }
            }
            Err(e) => out.push(Check::failed(format!("integral-equality n={n} l={l}"), &e)),
        }
    }
    out
}

// ---- uncertainty ----

fn uncertainty_table(params: &PhysParams) -> Vec<Check> {
    let hbar = params.hbar();
    let mut out = Vec::new();
    let mut floor = f64::INFINITY;
    for w in labels(6) {
        let name = format!("uncertainty n={} l={}", w.n, w.l);
        let expect = 0.5 * hbar * (w.n + w.l + 1) as f64;
        let res = (|| -> Result<f64> {
            let mut worst: f64 = 0.0;
            for pair in [1, 2] {
                let v = uncertainty_product(w, pair, params)?;
                floor = floor.min(v);
                worst = worst.max((v - expect).abs() / expect);
            }
            Ok(worst)
        })();
        out.push(match res {
            Ok(r) => Check::new(name, r, 1e-10),
            Err(e) => Check::failed(name, &e),
        });
    }
    out.push(Check::new("uncertainty lower bound", (0.5 * hbar - floor).max(0.0), 1e-12));
    out
}

fn moment_routes(params: &PhysParams) -> Vec<Check> {
    guard("moments marginal vs trace", || {
        let coords = [
            (MarginalAxis::Q1, StarPolynomial::q1(params)),
            (MarginalAxis::Q2, StarPolynomial::q2(params)),
            (MarginalAxis::P1, StarPolynomial::p1(params)),
            (MarginalAxis::P2, StarPolynomial::p2(params)),
        ];
        let mut worst: f64 = 0.0;
        for w in labels(3) {
            let s = StateFunctional::new(wigner_fock(w, 12)?, *params)?;
            for (axis, x) in &coords {
                for k in [2, 4] {
                    let via_trace = s.expectation(&x.star_pow(k)).re;
                    let via_marginal = coordinate_moment(*axis, k, w, params)?;
                    worst = worst.max((via_trace - via_marginal).abs() / via_marginal.abs());
                }
            }
        }
        Ok(vec![Check::new("moments marginal vs trace", worst, 1e-9)])
    })
}

fn semidefiniteness(params: &PhysParams) -> Vec<Check> {
    guard("semidefiniteness", || {
        let mut r = rng(5);
        let states: Vec<StateFunctional> =
            labels(4).map(|w| StateFunctional::new(wigner_fock(w, 12)?, *params)).collect::<Result<_>>()?;
        let mut worst: f64 = 0.0;
        for i in 0..200 {
            let s = &states[i % states.len()];
            let f = random_star_polynomial(&mut r, 4, 3);
            let v = s.inner_product(&f, &f).re;
            worst = worst.max(-v);
        }
        Ok(vec![Check::new("semidefiniteness", worst.max(0.0), 1e-12)])
    })
}

fn degenerate_kernel(params: &PhysParams) -> Vec<Check> {
    guard("degenerate kernel", || {
        // a annihilates W_{0l} from the left, so <a|a> vanishes although a != 0
        let a = StarPolynomial::generator(Gen::A);
        let mut worst: f64 = 0.0;
        for l in 0..=4 {
            let s = StateFunctional::new(wigner_fock(WignerLabel::new(0, l), 8)?, *params)?;
            worst = worst.max(s.inner_product(&a, &a).norm());
        }
        Ok(vec![Check::new("degenerate kernel", worst, 1e-12)])
    })
}

fn cauchy_schwarz(params: &PhysParams) -> Vec<Check> {
    guard("cauchy-schwarz", || {
        let mut r = rng(6);
        let states: Vec<StateFunctional> =
            labels(3).map(|w| StateFunctional::new(wigner_fock(w, 12)?, *params)).collect::<Result<_>>()?;
        let (mut slack_violation, mut symmetry): (f64, f64) = (0.0, 0.0);
        for i in 0..100 {
            let s = &states[i % states.len()];
            let f = random_star_polynomial(&mut r, 3, 3);
            let g = random_star_polynomial(&mut r, 3, 3);
            let fg = s.inner_product(&f, &g);
            let slack = s.inner_product(&f, &f).re * s.inner_product(&g, &g).re - fg.norm_sqr();
            slack_violation = slack_violation.max(-slack);
            symmetry = symmetry.max((fg.conj() - s.inner_product(&g, &f)).norm());
        }
        Ok(vec![
            Check::new("cauchy-schwarz", slack_violation.max(0.0), 1e-10),
            Check::new("conjugate symmetry", symmetry, 1e-12),
        ])
    })
}

fn robertson_schrodinger_random(params: &PhysParams) -> Vec<Check> {
    let states: [(&str, Box<dyn Fn() -> Result<FockRep> + Sync>); 3] = [
        ("robertson-schrodinger W00", Box::new(|| wigner_fock(WignerLabel::new(0, 0), 12))),
        ("robertson-schrodinger W21", Box::new(|| wigner_fock(WignerLabel::new(2, 1), 12))),
        (
            "robertson-schrodinger coherent",
            Box::new(|| Ok(coherent_fock(CoherentLabel::new(C64::new(1.0, 1.0), C64::new(-0.5, 0.0)), 24))),
        ),
    ];
    states
        .iter()
        .enumerate()
        .map(|(k, (name, build))| {
            let res = (|| -> Result<f64> {
                let s = StateFunctional::new(build()?, *params)?;
                let mut r = rng(10 + k as u64);
                let mut worst: f64 = 0.0;
                for _ in 0..100 {
                    let f = random_real_observable(&mut r, 2, 2);
                    let g = random_real_observable(&mut r, 2, 2);
                    worst = worst.max(-robertson_schrodinger_slack(&f, &g, &s)?);
                }
                Ok(worst.max(0.0))
            })();
            match res {
                Ok(v) => Check::new(*name, v, 1e-10),
                Err(e) => Check::failed(*name, &e),
            }
        })
        .collect()
}

// ---- coherent states ----

/// Sampled displacement pairs with `|alpha_i| <= 2`.
pub const COHERENT_SAMPLES: [(f64, f64, f64, f64); 8] = [
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 1.0, 0.0, 0.0),
    (1.0, 0.0, 0.0, 0.0),
    (1.0, 1.0, -0.5, 0.0),
    (0.0, -2.0, 0.3, 0.4),
    (-1.2, 0.7, 1.1, -0.9),
    (1.4, -1.4, -0.6, 1.8),
    (0.25, 0.5, -2.0, 0.0),
];

const COHERENT_CUTOFF: usize = 32;

fn coherent_states(params: &PhysParams) -> Vec<Check> {
    let rows: Vec<Result<[f64; 6]>> = COHERENT_SAMPLES
        .par_iter()
        .map(|&(r1, i1, r2, i2)| {
            let label = CoherentLabel::new(C64::new(r1, i1), C64::new(r2, i2));
            let report = coherent_uncertainties(label, params, COHERENT_CUTOFF)?;
            let half = 0.5 * params.hbar();
            let product = (report.product(1) - half).abs().max((report.product(2) - half).abs());
            let means = coherent_means(label, params);
            let got = [report.q1.mean, report.p1.mean, report.q2.mean, report.p2.mean];
            let mean_err = got.iter().zip(means).map(|(g, m)| (g - C64::new(m, 0.0)).norm()).fold(0.0, f64::max);
            let g2 = params.gamma().powi(2);
            let second = (report.q1_second_moment - (0.5 * g2 + means[0].powi(2))).abs();
            let state = coherent_fock(label, COHERENT_CUTOFF);
            let idem = state.star(&state)?.max_abs_diff(&state);
            let h2 = params.planck_h().powi(2);
            let norm = (state.integrate(params).re - h2).abs() / h2;
            // pointwise agreement with the closed-form Gaussian at the mean point
            let centre = PhasePoint::new(means[0], means[2], means[1], means[3]);
            let point = (state.eval(&centre, params).re - coherent_eval(label, &centre, params)).abs();
            Ok([product, mean_err, second, idem, norm, point])
        })
        .collect();
    let names = [
        ("coherent uncertainty products", 1e-9),
        ("coherent first moments", 1e-9),
        ("coherent second moment q1", 1e-9),
        ("coherent idempotence G⋆G=G", 1e-10),
        ("coherent normalization", 1e-9),
        ("coherent pointwise", 1e-9),
    ];
    let mut worst = [0.0f64; 6];
    for row in &rows {
        match row {
            Ok(v) => {
                for (w, x) in worst.iter_mut().zip(v) {
                    *w = w.max(*x);
                }
            }
            Err(e) => return vec![Check::failed("coherent states", e)],
        }
    }
    names.iter().zip(worst).map(|((n, t), w)| Check::new(*n, w, *t)).collect()
}

fn coherent_variance_independence(params: &PhysParams) -> Vec<Check> {
    guard("coherent variance independence", || {
        let alphas = [C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(1.0, 1.0), C64::new(0.0, -2.0)];
        let vars: Vec<f64> = alphas
            .iter()
            .map(|&a| Ok(coherent_uncertainties(CoherentLabel::new(a, C64::new(0.0, 0.0)), params, COHERENT_CUTOFF)?.q1.variance))
            .collect::<Result<_>>()?;
        let spread = vars.iter().map(|v| (v - vars[0]).abs()).fold(0.0, f64::max);
        let expect = (vars[0] - 0.5 * params.gamma().powi(2)).abs();
        Ok(vec![Check::new("coherent variance independence", spread.max(expect), 1e-10)])
    })
}

fn displacement_algebra(_: &PhysParams) -> Vec<Check> {
    guard("displacement algebra", || {
        let cutoff = 28;
        let block = 6;
        let (a1, a2) = (C64::new(0.6, -0.4), C64::new(0.0, 0.5));
        let (da, db) = displacement_fock(a1, a2, cutoff);
        let d = FockRep::from_mode_product(&da, &db);
        let dbar = d.conj();
        let one = FockRep::identity(cutoff);
        let unit = d.star(&dbar)?;
        let a_rep = one.left_star_generator(Gen::A);
        let shifted = dbar.star(&a_rep)?.star(&d)?;
        let expect = &a_rep + &(&one * a1);
        let (mut e1, mut e2): (f64, f64) = (0.0, 0.0);
        for m1 in 0..block {
            for n1 in 0..block {
                for m2 in 0..block {
                    for n2 in 0..block {
                        e1 = e1.max((unit.coeff(m1, n1, m2, n2) - one.coeff(m1, n1, m2, n2)).norm());
                        e2 = e2.max((shifted.coeff(m1, n1, m2, n2) - expect.coeff(m1, n1, m2, n2)).norm());
                    }
                }
            }
        }
        Ok(vec![Check::new("displacement D⋆D̄=1", e1, 1e-10), Check::new("displacement D̄⋆a⋆D=a+α", e2, 1e-10)])
    })
}

fn displaced_polynomials(_: &PhysParams) -> Vec<Check> {
    guard("displaced polynomial", || {
        let cutoff = 28;
        let block = 6;
        let (a1, a2) = (C64::new(-0.3, 0.5), C64::new(0.4, 0.2));
        let (da, db) = displacement_fock(a1, a2, cutoff);
        let d = FockRep::from_mode_product(&da, &db);
        let dbar = d.conj();
        let one = FockRep::identity(cutoff);
        let polys = [
            StarPolynomial::generator(Gen::A),
            StarPolynomial::number_a(),
            StarPolynomial::generator(Gen::BBar).star(&StarPolynomial::generator(Gen::A)),
            StarPolynomial::generator(Gen::A).star(&StarPolynomial::generator(Gen::B)),
        ];
        let mut worst: f64 = 0.0;
        for f in &polys {
            let f_rep = one.apply_star_polynomial(f, Side::Left);
            let conj = dbar.star(&f_rep)?.star(&d)?;
            let direct = one.apply_star_polynomial(&displaced_polynomial(f, a1, a2), Side::Left);
            for m1 in 0..block {
                for n1 in 0..block {
                    for m2 in 0..block {
                        for n2 in 0..block {
                            worst = worst.max((conj.coeff(m1, n1, m2, n2) - direct.coeff(m1, n1, m2, n2)).norm());
                        }
                    }
                }
            }
        }
        Ok(vec![Check::new("displaced polynomial vs conjugation", worst, 1e-10)])
    })
}

const GENERALIZED_ALPHAS: [(f64, f64, f64, f64); 2] = [(0.5, 0.0, 0.0, -0.3), (-0.4, 0.2, 0.3, 0.0)];

fn generalized_theorem(params: &PhysParams) -> Vec<Check> {
    let fs = [
        ("a", StarPolynomial::generator(Gen::A)),
        ("abar⋆a", StarPolynomial::number_a()),
        ("bbar⋆a", StarPolynomial::generator(Gen::BBar).star(&StarPolynomial::generator(Gen::A))),
    ];
    fs.iter()
        .map(|(fname, f)| {
            let name = format!("generalized coherent f={fname}");
            let res = (|| -> Result<f64> {
                let mut worst: f64 = 0.0;
                for base in labels(2) {
                    for &(r1, i1, r2, i2) in &GENERALIZED_ALPHAS {
                        let label = GeneralizedCoherentLabel { base, alpha1: C64::new(r1, i1), alpha2: C64::new(r2, i2) };
                        for k in 1..=3 {
                            worst = worst.max(generalized_expectation_theorem_check(f, k, label, params, 20)?);
                        }
                    }
                }
                Ok(worst)
            })();
            match res {
                Ok(r) => Check::new(name, r, 1e-9),
                Err(e) => Check::failed(name, &e),
            }
        })
        .collect()
}

fn displacement_invariance(params: &PhysParams) -> Vec<Check> {
    guard("displacement invariance", || {
        let q1 = StarPolynomial::q1(params);
        let mut worst: f64 = 0.0;
        for base in labels(2) {
            let reference = StateFunctional::new(wigner_fock(base, 20)?, *params)?.variance(&q1);
            for &(r1, i1, r2, i2) in &GENERALIZED_ALPHAS {
                let label = GeneralizedCoherentLabel { base, alpha1: C64::new(r1, i1), alpha2: C64::new(r2, i2) };
                let s = StateFunctional::new(generalized_coherent_fock(label, 20)?, *params)?;
                worst = worst.max((s.variance(&q1) - reference).abs());
            }
        }
        Ok(vec![Check::new("displacement invariance of variance", worst, 1e-9)])
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in [Suite::All, Suite::Star, Suite::Marginals, Suite::Uncertainty, Suite::Coherent] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("stars".parse::<Suite>().is_err());
    }

    #[test]
    fn check_rejects_nan() {
        assert!(!Check::new("x", f64::NAN, 1.0).pass);
        assert!(Check::new("x", 0.0, 0.0).pass);
    }

    #[test]
    fn random_observables_are_real() {
        let mut r = rng(99);
        for _ in 0..20 {
            assert!(random_real_observable(&mut r, 3, 3).is_real(1e-14));
        }
    }
}
