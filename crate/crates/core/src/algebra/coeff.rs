use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ball::CBall;
use super::gauss::GaussRat;
use super::rat::Rat;
use super::{Field, Ring, DEFAULT_PRECISION};

/// A coefficient: exact Gaussian rational or a certified complex ball.
///
/// Mixed arithmetic promotes to `Ball`; an exact value is only degraded by
/// an explicit operation involving a ball.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "lowercase")]
pub enum Coeff {
    Exact(GaussRat),
    Ball(CBall),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroStatus {
    Zero,
    NonZero,
    /// A ball that contains zero but is too wide to be treated as zero.
    Ambiguous,
}

impl Coeff {
    pub fn exact(z: GaussRat) -> Self {
        Coeff::Exact(z)
    }

    pub fn rat(r: Rat) -> Self {
        Coeff::Exact(GaussRat::real(r))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&GaussRat> {
        match self {
            Coeff::Exact(z) => Some(z),
            Coeff::Ball(_) => None,
        }
    }

    pub fn to_ball(&self, prec: u32) -> CBall {
        match self {
            Coeff::Exact(z) => CBall::from_exact(z, prec),
            Coeff::Ball(b) => b.clone(),
        }
    }

    pub fn precision(&self) -> Option<u32> {
        match self {
            Coeff::Exact(_) => None,
            Coeff::Ball(b) => Some(b.precision_bits),
        }
    }

    pub fn zero_status(&self) -> ZeroStatus {
        match self {
            Coeff::Exact(z) => {
                if z.is_zero() {
                    ZeroStatus::Zero
                } else {
                    ZeroStatus::NonZero
                }
            }
            Coeff::Ball(b) => {
                if b.is_negligible() {
                    ZeroStatus::Zero
                } else if b.contains_zero() {
                    ZeroStatus::Ambiguous
                } else {
                    ZeroStatus::NonZero
                }
            }
        }
    }

    /// Semantic equality: exact on exact values, overlap-based otherwise.
    pub fn approx_eq(&self, o: &Coeff) -> bool {
        match (self, o) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a == b,
            _ => self.sub(o).zero_status() != ZeroStatus::NonZero,
        }
    }

    /// Whether the coefficient could equal the exact value `z`.
    pub fn may_equal(&self, z: &GaussRat) -> bool {
        match self {
            Coeff::Exact(a) => a == z,
            Coeff::Ball(b) => b.contains(z),
        }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        match self {
            Coeff::Exact(z) => (super::rat::to_f64(&z.re), super::rat::to_f64(&z.im)),
            Coeff::Ball(b) => b.to_f64(),
        }
    }

    /// Deterministic total order used for sorting outputs.
    pub fn sort_cmp(&self, o: &Coeff) -> Ordering {
        match (self, o) {
            (Coeff::Exact(a), Coeff::Exact(b)) => a.lex_cmp(b),
            _ => {
                let a = self.to_ball(DEFAULT_PRECISION).mid();
                let b = o.to_ball(DEFAULT_PRECISION).mid();
                a.lex_cmp(&b)
            }
        }
    }

    fn binop(
        &self,
        o: &Coeff,
        fe: impl Fn(&GaussRat, &GaussRat) -> GaussRat,
        fb: impl Fn(&CBall, &CBall) -> CBall,
    ) -> Coeff {
        match (self, o) {
            (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(fe(a, b)),
            (Coeff::Ball(a), Coeff::Exact(b)) => Coeff::Ball(fb(a, &CBall::from_exact(b, a.precision_bits))),
            (Coeff::Exact(a), Coeff::Ball(b)) => Coeff::Ball(fb(&CBall::from_exact(a, b.precision_bits), b)),
            (Coeff::Ball(a), Coeff::Ball(b)) => Coeff::Ball(fb(a, b)),
        }
    }
}

/// The Gaussian rational with smallest denominators inside a tight ball;
/// `None` when the ball is too wide to identify one.
pub fn simplest_gauss(c: &Coeff) -> Option<GaussRat> {
    match c {
        Coeff::Exact(z) => Some(z.clone()),
        Coeff::Ball(b) => {
            if b.rad >= super::rat::pow2(-(b.precision_bits as i64) / 2) {
                return None;
            }
            let re = super::rat::simplest_in(&(&b.mid_re - &b.rad), &(&b.mid_re + &b.rad));
            let im = super::rat::simplest_in(&(&b.mid_im - &b.rad), &(&b.mid_im + &b.rad));
            Some(GaussRat::new(re, im))
        }
    }
}

impl Ring for Coeff {
    fn zero() -> Self {
        Coeff::Exact(GaussRat::zero())
    }
    fn one() -> Self {
        Coeff::Exact(GaussRat::one())
    }
    fn is_zero(&self) -> bool {
        self.zero_status() == ZeroStatus::Zero
    }
    fn add(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.add(b), |a, b| a.add_b(b))
    }
    fn sub(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.sub(b), |a, b| a.sub_b(b))
    }
    fn mul(&self, o: &Self) -> Self {
        self.binop(o, |a, b| a.mul(b), |a, b| a.mul_b(b))
    }
    fn neg(&self) -> Self {
        match self {
            Coeff::Exact(a) => Coeff::Exact(a.neg()),
            Coeff::Ball(b) => Coeff::Ball(b.neg_b()),
        }
    }
    fn from_int(n: i64) -> Self {
        Coeff::Exact(GaussRat::int(n))
    }
}

impl Field for Coeff {
    fn inv(&self) -> Option<Self> {
        match self {
            Coeff::Exact(a) => a.inv().map(Coeff::Exact),
            Coeff::Ball(b) => b.inv_b().map(Coeff::Ball),
        }
    }
}

impl From<GaussRat> for Coeff {
    fn from(z: GaussRat) -> Self {
        Coeff::Exact(z)
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(z) => write!(f, "{z}"),
            Coeff::Ball(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
