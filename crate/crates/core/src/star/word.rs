//! Star polynomials: formal linear combinations of ordered star words in the
//! generators `a, abar, b, bbar`.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64 as C64;

use crate::params::PhysParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    A,
    ABar,
    B,
    BBar,
}

impl Gen {
    pub const ALL: [Gen; 4] = [Gen::A, Gen::ABar, Gen::B, Gen::BBar];

    pub fn conj(self) -> Gen {
        match self {
            Gen::A => Gen::ABar,
            Gen::ABar => Gen::A,
            Gen::B => Gen::BBar,
            Gen::BBar => Gen::B,
        }
    }
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Gen::A => "a",
            Gen::ABar => "abar",
            Gen::B => "b",
            Gen::BBar => "bbar",
        })
    }
}

pub type Word = Vec<Gen>;

/// Normal-ordered form `sum c abar^i a^j bbar^k b^l`, keyed by `[i, j, k, l]`.
/// Two star polynomials are equal as phase-space functions iff their normal
/// forms agree.
pub type NormalForm = BTreeMap<[u32; 4], C64>;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StarPolynomial {
    terms: Vec<(C64, Word)>,
}

impl StarPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: C64) -> Self {
        Self { terms: vec![(c, Vec::new())] }
    }

    pub fn one() -> Self {
        Self::constant(C64::new(1.0, 0.0))
    }

    pub fn generator(g: Gen) -> Self {
        Self::word(C64::new(1.0, 0.0), vec![g])
    }

    pub fn word(c: C64, w: Word) -> Self {
        Self { terms: vec![(c, w)] }
    }

    pub fn from_terms(terms: Vec<(C64, Word)>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[(C64, Word)] {
        &self.terms
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|(_, w)| w.len()).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Self { terms }.simplified()
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { terms: self.terms.iter().map(|(k, w)| (k * c, w.clone())).collect() }
    }

    pub fn add_constant(&self, c: C64) -> Self {
        self.add(&Self::constant(c))
    }

    /// Star product: concatenation of words.
    pub fn star(&self, other: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c1, w1) in &self.terms {
            for (c2, w2) in &other.terms {
                let mut w = w1.clone();
                w.extend_from_slice(w2);
                terms.push((c1 * c2, w));
            }
        }
        Self { terms }.simplified()
    }

    /// k-th star power; the zeroth power is 1.
    pub fn star_pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.star(self))
    }

    /// Formal complex conjugate: conjugated coefficients, conjugated letters,
    /// reversed word order.
    pub fn conj(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.conj(), w.iter().rev().map(|g| g.conj()).collect()))
                .collect(),
        }
    }

    /// Merges identical words and drops zero coefficients.
    pub fn simplified(&self) -> Self {
        let mut merged: BTreeMap<Word, C64> = BTreeMap::new();
        for (c, w) in &self.terms {
            *merged.entry(w.clone()).or_insert(C64::new(0.0, 0.0)) += c;
        }
        Self { terms: merged.into_iter().filter(|(_, c)| *c != C64::new(0.0, 0.0)).map(|(w, c)| (c, w)).collect() }
    }

    pub fn normal_form(&self) -> NormalForm {
        let mut out = NormalForm::new();
        for (c, w) in &self.terms {
            let mut nf: NormalForm = BTreeMap::from([([0, 0, 0, 0], *c)]);
            for &g in w {
                nf = times_generator(&nf, g);
            }
            for (k, v) in nf {
                *out.entry(k).or_insert(C64::new(0.0, 0.0)) += v;
            }
        }
        out.retain(|_, v| *v != C64::new(0.0, 0.0));
        out
    }

    /// Largest coefficient difference between the normal forms.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.normal_form();
        let b = other.normal_form();
        let zero = C64::new(0.0, 0.0);
        a.keys()
            .chain(b.keys())
            .map(|k| (a.get(k).unwrap_or(&zero) - b.get(k).unwrap_or(&zero)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary defect `|f - conj(f)| / 2` over normal-form coefficients.
    pub fn reality_defect(&self) -> f64 {
        0.5 * self.distance(&self.conj())
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.reality_defect() <= tol
    }

    /// Substitutes `a -> a + alpha1`, `abar -> abar + conj(alpha1)` and the
    /// same for `b` with `alpha2`, expanding while preserving letter order.
    pub fn displaced(&self, alpha1: C64, alpha2: C64) -> Self {
        let shift = |g: Gen| match g {
            Gen::A => alpha1,
            Gen::ABar => alpha1.conj(),
            Gen::B => alpha2,
            Gen::BBar => alpha2.conj(),
        };
        let mut terms = Vec::new();
        for (c, w) in &self.terms {
            let mut partial: Vec<(C64, Word)> = vec![(*c, Vec::new())];
            for &g in w {
                let s = shift(g);
                let mut next = Vec::with_capacity(partial.len() * 2);
                for (k, pw) in partial {
                    let mut with = pw.clone();
                    with.push(g);
                    next.push((k, with));
                    if s != C64::new(0.0, 0.0) {
                        next.push((k * s, pw));
                    }
                }
                partial = next;
            }
            terms.extend(partial);
        }
        Self { terms }.simplified()
    }

    /// `n_a = abar * a`.
    pub fn number_a() -> Self {
        Self::word(C64::new(1.0, 0.0), vec![Gen::ABar, Gen::A])
    }

    pub fn number_b() -> Self {
        Self::word(C64::new(1.0, 0.0), vec![Gen::BBar, Gen::B])
    }

    /// `H = hbar omega (n_a + 1/2)`.
    pub fn hamiltonian(params: &PhysParams) -> Self {
        let e = params.hbar() * params.omega();
        Self::number_a().add_constant(C64::new(0.5, 0.0)).scale(C64::new(e, 0.0))
    }

    /// `J = hbar (n_b - n_a)`.
    pub fn angular_momentum(params: &PhysParams) -> Self {
        Self::number_b().sub(&Self::number_a()).scale(C64::new(params.hbar(), 0.0))
    }

    fn linear(ca: C64, cabar: C64, cb: C64, cbbar: C64) -> Self {
        Self::from_terms(vec![
            (ca, vec![Gen::A]),
            (cabar, vec![Gen::ABar]),
            (cb, vec![Gen::B]),
            (cbbar, vec![Gen::BBar]),
        ])
        .simplified()
    }

    /// `q1 = i gamma/2 [(a - b) - (abar - bbar)]`.
    pub fn q1(params: &PhysParams) -> Self {
        let c = C64::new(0.0, 0.5 * params.gamma());
        Self::linear(c, -c, -c, c)
    }

    /// `p1 = (m gamma omega / 4) [(a - b) + (abar - bbar)]`.
    pub fn p1(params: &PhysParams) -> Self {
        let c = C64::new(0.25 * params.m_gamma_omega(), 0.0);
        Self::linear(c, c, -c, -c)
    }

    /// `q2 = gamma/2 [(a + b) + (abar + bbar)]`.
    pub fn q2(params: &PhysParams) -> Self {
        let c = C64::new(0.5 * params.gamma(), 0.0);
        Self::linear(c, c, c, c)
    }

    /// `p2 = -i (m gamma omega / 4) [(a + b) - (abar + bbar)]`.
    pub fn p2(params: &PhysParams) -> Self {
        let c = C64::new(0.0, -0.25 * params.m_gamma_omega());
        Self::linear(c, -c, c, -c)
    }

    /// Every word of length `len` over the four generators.
    pub fn all_words(len: usize) -> Vec<Word> {
        let mut out: Vec<Word> = vec![Vec::new()];
        for _ in 0..len {
            out = out
                .into_iter()
                .flat_map(|w| {
                    Gen::ALL.iter().map(move |&g| {
                        let mut w2 = w.clone();
                        w2.push(g);
                        w2
                    })
                })
                .collect();
        }
        out
    }
}

// Right-multiplies a normal form by one generator using [a, abar] = 1.
fn times_generator(nf: &NormalForm, g: Gen) -> NormalForm {
    let mut out = NormalForm::new();
    let mut push = |k: [u32; 4], v: C64| *out.entry(k).or_insert(C64::new(0.0, 0.0)) += v;
    for (&[i, j, k, l], &c) in nf {
        match g {
            Gen::A => push([i, j + 1, k, l], c),
            Gen::B => push([i, j, k, l + 1], c),
            Gen::ABar => {
                push([i + 1, j, k, l], c);
                if j > 0 {
                    push([i, j - 1, k, l], c * j as f64);
                }
            }
            Gen::BBar => {
                push([i, j, k + 1, l], c);
                if l > 0 {
                    push([i, j, k, l - 1], c * l as f64);
                }
            }
        }
    }
    out
}

impl fmt::Display for StarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (c, w)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            for g in w {
                write!(f, "*{g}")?;
            }
        }
        Ok(())
    }
}
