//! Helpers around arbitrary-precision rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Always-reduced rational with positive denominator.
pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `2^e` for any integer `e`.
pub fn pow2(e: i64) -> Rat {
    if e >= 0 {
        Rat::from_integer(BigInt::one() << (e as usize))
    } else {
        Rat::new(BigInt::one(), BigInt::one() << ((-e) as usize))
    }
}

fn bits(n: &BigInt) -> i64 {
    n.bits() as i64
}

/// `floor(log2 |x|)` for nonzero `x`.
pub fn floor_log2(x: &Rat) -> i64 {
    assert!(!x.is_zero());
    let n = x.numer().abs();
    let d = x.denom().clone();
    let mut e = bits(&n) - bits(&d);
    // 2^e <= |x| < 2^(e+1) after adjustment
    let ax = x.abs();
    if ax < pow2(e) {
        e -= 1;
    } else if ax >= pow2(e + 1) {
        e += 1;
    }
    e
}

/// Round `x` to the nearest dyadic rational carrying `prec` significant bits.
pub fn round_to_bits(x: &Rat, prec: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    let e = floor_log2(x);
    let shift = prec as i64 - 1 - e;
    let scaled = x * pow2(shift);
    let r = scaled.round();
    r * pow2(-shift)
}

/// Smallest dyadic with `prec` significant bits that is `>= x` (for `x >= 0`).
pub fn round_up_bits(x: &Rat, prec: u32) -> Rat {
    if x.is_zero() {
        return Rat::zero();
    }
    debug_assert!(x.is_positive());
    let e = floor_log2(x);
    let shift = prec as i64 - 1 - e;
    let scaled = x * pow2(shift);
    scaled.ceil() * pow2(-shift)
}

/// Certified enclosure `lo <= sqrt(x) <= hi` with about `prec` bits.
pub fn sqrt_bounds(x: &Rat, prec: u32) -> (Rat, Rat) {
    assert!(!x.is_negative());
    if x.is_zero() {
        return (Rat::zero(), Rat::zero());
    }
    nth_root_bounds(x, 2, prec)
}

/// Certified enclosure of the positive real `n`-th root of `x > 0`.
pub fn nth_root_bounds(x: &Rat, n: u32, prec: u32) -> (Rat, Rat) {
    assert!(x.is_positive() && n >= 1);
    if n == 1 {
        return (x.clone(), x.clone());
    }
    // root(a/b) = root(a * b^(n-1) * 2^(n*k)) / (b * 2^k)
    let a = x.numer().to_biguint().unwrap();
    let b = x.denom().to_biguint().unwrap();
    let k = prec as usize + 8;
    let radicand: BigUint = (a * b.pow(n - 1)) << (n as usize * k);
    let r = radicand.nth_root(n);
    let den = BigInt::from(b) << k;
    let lo = Rat::new(BigInt::from(r.clone()), den.clone());
    let hi = Rat::new(BigInt::from(r + 1u32), den);
    (lo, hi)
}

pub fn to_f64(x: &Rat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match (x.numer().to_f64(), x.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            let e = floor_log2(x);
            let m = (x * pow2(-e)).to_f64().unwrap_or(1.0);
            m * 2f64.powi(e as i32)
        }
    }
}

/// Exact rational value of a finite `f64`.
pub fn from_f64(v: f64) -> Rat {
    Rat::from_float(v).unwrap_or_else(Rat::zero)
}

/// Simplest rational (smallest denominator, then smallest numerator) in the
/// closed interval `[lo, hi]`.
pub fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if lo.is_positive() {
        simplest_pos(lo, hi)
    } else if hi.is_negative() {
        -simplest_pos(&-hi, &-lo)
    } else {
        Rat::zero()
    }
}

fn simplest_pos(lo: &Rat, hi: &Rat) -> Rat {
    // Stern-Brocot descent via continued fractions.
    let fl = lo.floor();
    if fl == *lo {
        return fl;
    }
    if fl.clone() + Rat::one() <= *hi {
        return fl + Rat::one();
    }
    let inner = simplest_pos(&(Rat::one() / (hi - &fl)), &(Rat::one() / (lo - &fl)));
    fl + Rat::one() / inner
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

pub fn is_integer(x: &Rat) -> bool {
    x.denom().is_one()
}

/// `p/q` or `p` for display; exact.
pub fn fmt_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rat::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rat::from_integer(n))
    }
}

pub fn sign(x: &Rat) -> Sign {
    if x.is_zero() {
        Sign::NoSign
    } else if x.is_positive() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Serde adapter storing rationals as `"p/q"` strings.
pub mod serde_rat {
    use super::{fmt_rat, parse_rat, Rat};
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rat(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        parse_rat(&s).ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
    }

    /// `None` encodes +infinity.
    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<Rat>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(r) => s.serialize_str(&fmt_rat(r)),
                None => s.serialize_str("inf"),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rat>, D::Error> {
            let s = String::deserialize(d)?;
            if s == "inf" {
                return Ok(None);
            }
            parse_rat(&s)
                .map(Some)
                .ok_or_else(|| D::Error::custom(format!("bad rational `{s}`")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_close() {
        let x = rat(1, 3);
        let r = round_to_bits(&x, 20);
        assert!((r - &x).abs() <= pow2(-21));
    }

    #[test]
    fn sqrt_bounds_enclose() {
        let (lo, hi) = sqrt_bounds(&int(2), 64);
        assert!(&lo * &lo <= int(2) && &hi * &hi >= int(2));
        assert!(hi - lo < pow2(-60));
    }

    #[test]
    fn cube_root_bounds_enclose() {
        let x = rat(1, 7);
        let (lo, hi) = nth_root_bounds(&x, 3, 40);
        assert!(lo.pow(3) <= x && hi.pow(3) >= x);
    }

    #[test]
    fn simplest_rational() {
        assert_eq!(simplest_in(&rat(31, 100), &rat(34, 100)), rat(1, 3));
        assert_eq!(simplest_in(&rat(-1, 10), &rat(1, 10)), int(0));
        assert_eq!(simplest_in(&rat(-26, 100), &rat(-24, 100)), rat(-1, 4));
    }

    #[test]
    fn floor_log2_exact_powers() {
        assert_eq!(floor_log2(&int(8)), 3);
        assert_eq!(floor_log2(&rat(1, 8)), -3);
        assert_eq!(floor_log2(&rat(3, 8)), -2);
    }
}
