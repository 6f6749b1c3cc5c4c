use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;
use super::rat::{
    fmt_rat, pow2, round_to_bits, round_up_bits, serde_rat, sqrt_bounds, to_f64, Rat,
};
use super::Ring;

const RAD_BITS: u32 = 30;

/// Closed complex disk `|z - mid| <= rad` with dyadic midpoint.
///
/// All operations are outward rounded: the result disk contains every exact
/// result obtainable from points of the operand disks.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct CBall {
    #[serde(with = "serde_rat")]
    pub mid_re: Rat,
    #[serde(with = "serde_rat")]
    pub mid_im: Rat,
    #[serde(with = "serde_rat")]
    pub rad: Rat,
    pub precision_bits: u32,
}

impl CBall {
    /// Rounds an exact midpoint to `prec` bits and absorbs the error.
    pub fn from_parts(re: Rat, im: Rat, rad: Rat, prec: u32) -> Self {
        let rre = round_to_bits(&re, prec);
        let rim = round_to_bits(&im, prec);
        let err = (&re - &rre).abs() + (&im - &rim).abs();
        CBall {
            mid_re: rre,
            mid_im: rim,
            rad: round_up_bits(&(rad + err), RAD_BITS),
            precision_bits: prec,
        }
    }

    pub fn from_exact(z: &GaussRat, prec: u32) -> Self {
        Self::from_parts(z.re.clone(), z.im.clone(), Rat::zero(), prec)
    }

    pub fn mid(&self) -> GaussRat {
        GaussRat::new(self.mid_re.clone(), self.mid_im.clone())
    }

    fn mid_norm(&self) -> Rat {
        &self.mid_re * &self.mid_re + &self.mid_im * &self.mid_im
    }

    /// Upper bound on `|mid|`.
    pub fn mid_abs_upper(&self) -> Rat {
        sqrt_bounds(&self.mid_norm(), 40).1
    }

    /// Upper bound on `|z|` over the disk.
    pub fn abs_upper(&self) -> Rat {
        self.mid_abs_upper() + &self.rad
    }

    /// Lower bound on `|z|` over the disk (zero if the disk contains 0).
    pub fn abs_lower(&self) -> Rat {
        let lo = sqrt_bounds(&self.mid_norm(), 40).0 - &self.rad;
        if lo.is_negative() {
            Rat::zero()
        } else {
            lo
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mid_norm() <= &self.rad * &self.rad
    }

    pub fn contains(&self, z: &GaussRat) -> bool {
        let dr = &z.re - &self.mid_re;
        let di = &z.im - &self.mid_im;
        &dr * &dr + &di * &di <= &self.rad * &self.rad
    }

    pub fn overlaps(&self, o: &CBall) -> bool {
        let dr = &o.mid_re - &self.mid_re;
        let di = &o.mid_im - &self.mid_im;
        let r = &self.rad + &o.rad;
        &dr * &dr + &di * &di <= &r * &r
    }

    /// Treated as zero: contains 0 and radius below `2^(-prec/2)`.
    pub fn is_negligible(&self) -> bool {
        self.contains_zero() && self.rad < pow2(-(self.precision_bits as i64) / 2)
    }

    pub fn widen(&self, extra: &Rat) -> Self {
        let mut b = self.clone();
        b.rad = round_up_bits(&(&b.rad + extra), RAD_BITS);
        b
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_parts(self.mid_re.clone(), self.mid_im.clone(), self.rad.clone(), prec)
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.mid_re), to_f64(&self.mid_im))
    }

    pub fn add_b(&self, o: &CBall) -> CBall {
        CBall::from_parts(
            &self.mid_re + &o.mid_re,
            &self.mid_im + &o.mid_im,
            &self.rad + &o.rad,
            self.precision_bits.max(o.precision_bits),
        )
    }

    pub fn sub_b(&self, o: &CBall) -> CBall {
        self.add_b(&o.neg_b())
    }

    pub fn neg_b(&self) -> CBall {
        CBall {
            mid_re: -self.mid_re.clone(),
            mid_im: -self.mid_im.clone(),
            rad: self.rad.clone(),
            precision_bits: self.precision_bits,
        }
    }

    pub fn mul_b(&self, o: &CBall) -> CBall {
        let re = &self.mid_re * &o.mid_re - &self.mid_im * &o.mid_im;
        let im = &self.mid_re * &o.mid_im + &self.mid_im * &o.mid_re;
        let rad = self.mid_abs_upper() * &o.rad + o.mid_abs_upper() * &self.rad + &self.rad * &o.rad;
        CBall::from_parts(re, im, rad, self.precision_bits.max(o.precision_bits))
    }

    /// `None` when the disk contains zero.
    pub fn inv_b(&self) -> Option<CBall> {
        let lo = self.abs_lower();
        if lo.is_zero() {
            return None;
        }
        let n = self.mid_norm();
        let re = &self.mid_re / &n;
        let im = -(&self.mid_im / &n);
        // |1/z - 1/m| = |z-m| / (|z||m|) <= r / ((|m|-r) |m|)
        let m_lo = &lo + &self.rad;
        let rad = &self.rad / (&lo * &m_lo);
        Some(CBall::from_parts(re, im, rad, self.precision_bits))
    }
}

impl Ring for CBall {
    fn zero() -> Self {
        CBall {
            mid_re: Rat::zero(),
            mid_im: Rat::zero(),
            rad: Rat::zero(),
            precision_bits: super::DEFAULT_PRECISION,
        }
    }
    fn one() -> Self {
        CBall::from_exact(&GaussRat::one(), super::DEFAULT_PRECISION)
    }
    fn is_zero(&self) -> bool {
        self.is_negligible()
    }
    fn add(&self, o: &Self) -> Self {
        self.add_b(o)
    }
    fn sub(&self, o: &Self) -> Self {
        self.sub_b(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self.mul_b(o)
    }
    fn neg(&self) -> Self {
        self.neg_b()
    }
    fn from_int(n: i64) -> Self {
        CBall::from_exact(&GaussRat::int(n), super::DEFAULT_PRECISION)
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        let r = to_f64(&self.rad);
        if im == 0.0 && self.mid_im.is_zero() {
            write!(f, "[{re:.12} +/- {r:.1e}]")
        } else if im < 0.0 {
            write!(f, "[{re:.12} - {:.12}*i +/- {r:.1e}]", -im)
        } else {
            write!(f, "[{re:.12} + {im:.12}*i +/- {r:.1e}]")
        }
    }
}

impl fmt::Debug for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "CBall({} + {}i, r={})",
            fmt_rat(&self.mid_re),
            fmt_rat(&self.mid_im),
            to_f64(&self.rad)
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;
    use crate::algebra::Field;
    use proptest::prelude::*;

    fn g(a: i64, b: i64, c: i64, d: i64) -> GaussRat {
        GaussRat::new(rat(a, b), rat(c, d))
    }

    #[test]
    fn exact_thirds_enclosed() {
        let third = g(1, 3, 0, 1);
        let b = CBall::from_exact(&third, 64);
        assert!(b.contains(&third));
        assert!(!b.rad.is_zero());
    }

    #[test]
    fn zero_detection() {
        let x = CBall::from_exact(&g(1, 3, 0, 1), 128);
        let d = x.mul_b(&CBall::from_exact(&GaussRat::int(3), 128)).sub_b(&CBall::one());
        assert!(d.is_negligible());
        assert!(!x.is_negligible());
    }

    proptest! {
        #[test]
        fn ball_arithmetic_contains_exact(a in -50i64..50, b in 1i64..20, c in -50i64..50, d in 1i64..20,
                                           e in -50i64..50, f in 1i64..20, h in -50i64..50, k in 1i64..20) {
            let x = g(a, b, c, d);
            let y = g(e, f, h, k);
            let bx = CBall::from_exact(&x, 40);
            let by = CBall::from_exact(&y, 40);
            prop_assert!(bx.add_b(&by).contains(&x.add(&y)));
            prop_assert!(bx.mul_b(&by).contains(&x.mul(&y)));
            prop_assert!(bx.sub_b(&by).contains(&x.sub(&y)));
            if let Some(inv) = bx.inv_b() {
                prop_assert!(inv.contains(&x.inv().unwrap()));
            }
        }
    }
}
