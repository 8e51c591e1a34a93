//! The Moyal star product in the matrix-unit representation, on formal star
//! polynomials, on canonical polynomials, and as a bidifferential series on
//! polynomial-Gaussian symbols.

pub mod canonical;
pub mod fock;
pub mod ladder;
pub mod polygauss;
pub mod word;

pub use canonical::CanonicalPoly;
pub use fock::{matrix_unit_eval, FockRep, Side, DEFAULT_CUTOFF};
pub use ladder::{displacement_closed_form, displacement_matrix};
pub use polygauss::{oracle_star_polygauss, GaussianFlag, PolyGauss};
pub use word::{Gen, StarPolynomial, Word};

use crate::error::Result;

/// Types closed under the star product.
pub trait StarProduct: Sized {
    fn star_with(&self, other: &Self) -> Result<Self>;
    fn difference(&self, other: &Self) -> Self;
    fn sum(&self, other: &Self) -> Self;
}

impl StarProduct for FockRep {
    fn star_with(&self, other: &Self) -> Result<Self> {
        self.star(other)
    }
    fn difference(&self, other: &Self) -> Self {
        self - other
    }
    fn sum(&self, other: &Self) -> Self {
        self + other
    }
}

impl StarProduct for StarPolynomial {
    fn star_with(&self, other: &Self) -> Result<Self> {
        Ok(self.star(other))
    }
    fn difference(&self, other: &Self) -> Self {
        self.sub(other)
    }
    fn sum(&self, other: &Self) -> Self {
        self.add(other)
    }
}

/// `{f, g}_M = f * g - g * f`.
pub fn moyal_bracket<T: StarProduct>(f: &T, g: &T) -> Result<T> {
    Ok(f.star_with(g)?.difference(&g.star_with(f)?))
}

/// `{f, g}_+M = f * g + g * f`.
pub fn anti_bracket<T: StarProduct>(f: &T, g: &T) -> Result<T> {
    Ok(f.star_with(g)?.sum(&g.star_with(f)?))
}
