use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{fmt_rat, int, serde_rat, Rat};
use super::{Domain, Field, GcdDomain, Ring};

/// Element of Q(i).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussRat {
    #[serde(with = "serde_rat")]
    pub re: Rat,
    #[serde(with = "serde_rat")]
    pub im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: Rat) -> Self {
        GaussRat { re, im: Rat::zero() }
    }

    pub fn int(n: i64) -> Self {
        Self::real(int(n))
    }

    pub fn i() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::one() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Lcm of the denominators of both parts.
    pub fn denom_lcm(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    /// Lexicographic order on (re, im); used only for deterministic sorting.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Powers of i for exponents taken mod 4.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussRat::int(1),
            1 => GaussRat::i(),
            2 => GaussRat::int(-1),
            _ => GaussRat::i().neg(),
        }
    }
}

impl Ring for GaussRat {
    fn zero() -> Self {
        GaussRat { re: Rat::zero(), im: Rat::zero() }
    }
    fn one() -> Self {
        GaussRat::int(1)
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        GaussRat { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Self) -> Self {
        GaussRat { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Self) -> Self {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
    fn neg(&self) -> Self {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
    fn from_int(n: i64) -> Self {
        GaussRat::int(n)
    }
}

impl Field for GaussRat {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(GaussRat { re: &self.re / &n, im: -(&self.im / &n) })
    }
}

impl Domain for GaussRat {
    fn div_exact(&self, o: &Self) -> Self {
        self.div(o).expect("division by zero")
    }
}

impl GcdDomain for GaussRat {
    fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() && o.is_zero() {
            Self::zero()
        } else {
            Self::one()
        }
    }
    fn normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            (Self::zero(), Self::one())
        } else {
            (Self::one(), self.clone())
        }
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let im_str = |x: &Rat| -> String {
            if x.is_one() {
                "i".to_string()
            } else if (-x.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", fmt_rat(x))
            }
        };
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rat(&self.re)),
            (true, false) => write!(f, "{}", im_str(&self.im)),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {})", fmt_rat(&self.re), im_str(&-self.im.clone()))
                } else {
                    write!(f, "({} + {})", fmt_rat(&self.re), im_str(&self.im))
                }
            }
        }
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<Rat> for GaussRat {
    fn from(r: Rat) -> Self {
        GaussRat::real(r)
    }
}
