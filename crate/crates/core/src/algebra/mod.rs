//! Exact and certified arithmetic: rationals, Gaussian rationals, complex
//! balls, dense univariate polynomials, sparse trivariate polynomials and
//! certified root isolation.

mod ball;
mod coeff;
mod gauss;
mod mpoly;
mod poly;
pub mod rat;
mod roots;

pub use ball::CBall;
pub use coeff::{simplest_gauss, Coeff, ZeroStatus};
pub use gauss::GaussRat;
pub use mpoly::{MPoly, Mono, Var};
pub use poly::{bareiss_det, Lex, Poly, TPoly};
pub use rat::Rat;
pub use roots::{
    gaussian_rational_roots, isolate_squarefree, roots_certified, roots_exact, CertifiedRoot,
    DEFAULT_PRECISION, MAX_PRECISION,
};

use std::fmt::Debug;

/// Commutative ring with identity.
///
/// Method names deliberately avoid the `std::ops` traits so that generic code
/// never hits method-resolution ambiguity.
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_int(n: i64) -> Self;

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Integral domain with exact division (`self / other` when it is known to
/// be exact).
pub trait Domain: Ring {
    fn div_exact(&self, other: &Self) -> Self;
}

/// Domain with a gcd, unique up to units. `normalize` picks the canonical
/// associate.
pub trait GcdDomain: Domain {
    fn gcd(&self, other: &Self) -> Self;
    /// Canonical associate of `self`; returns the normalized value and the
    /// unit `u` with `self = u * normalized`.
    fn normalize(&self) -> (Self, Self);
}

pub trait Field: Ring {
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }
}
