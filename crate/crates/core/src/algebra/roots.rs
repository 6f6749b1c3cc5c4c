//! Certified complex root isolation.
//!
//! Approximations come from a double-precision Aberth iteration, are refined
//! by Weierstrass (Durand-Kerner) steps on dyadic Gaussian rationals, and are
//! certified with the Braess-Hadeler inclusion disks `|z - z_i| <= n |W_i|`:
//! a connected component made of `k` disks holds exactly `k` roots.

use num_complex::Complex64;
use num_traits::{One as _, Signed as _, Zero as _};
use serde::Serialize;

use super::ball::CBall;
use super::coeff::{Coeff, ZeroStatus};
use super::gauss::GaussRat;
use super::poly::Poly;
use super::rat::{floor_log2, int, pow2, round_up_bits, sqrt_bounds, Rat};
use super::{Field, Ring};
use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: u32 = 128;
pub const MAX_PRECISION: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifiedRoot {
    pub ball: CBall,
    /// Set when the root was recognised as an element of Q(i) and verified.
    pub exact: Option<GaussRat>,
    pub multiplicity: u32,
}

impl CertifiedRoot {
    pub fn value(&self) -> Coeff {
        match &self.exact {
            Some(z) => Coeff::Exact(z.clone()),
            None => Coeff::Ball(self.ball.clone()),
        }
    }
}

/// Roots of `p` with multiplicities.
///
/// Exact polynomials are split by squarefree decomposition first, so the
/// multiplicities are exact; precision is doubled from `prec` up to
/// [`MAX_PRECISION`] until every factor's disks separate. Polynomials with
/// ball coefficients are clustered at the precision they carry.
pub fn roots_certified(p: &Poly<Coeff>, prec: u32) -> Result<Vec<CertifiedRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroInput);
    }
    if p.is_constant() {
        return Err(Error::InvalidInput("root finding needs degree >= 1".into()));
    }
    match p.to_exact() {
        Some(e) => roots_exact(&e, prec),
        None => roots_ball(p, prec),
    }
}

pub fn roots_exact(p: &Poly<GaussRat>, prec: u32) -> Result<Vec<CertifiedRoot>> {
    let mut out = Vec::new();
    for (f, m) in p.squarefree()? {
        for (ball, exact) in isolate_squarefree(&f, prec)? {
            out.push(CertifiedRoot { ball, exact, multiplicity: m });
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Only the roots lying in Q(i), with multiplicities.
pub fn gaussian_rational_roots(p: &Poly<GaussRat>) -> Result<Vec<(GaussRat, u32)>> {
    let mut out = Vec::new();
    for (f, m) in p.squarefree()? {
        if f.deg() == 1 {
            out.push((linear_root(&f), m));
            continue;
        }
        for (_, e) in isolate_squarefree(&f, DEFAULT_PRECISION)? {
            if let Some(z) = e {
                out.push((z, m));
            }
        }
    }
    out.sort_by(|a, b| a.0.lex_cmp(&b.0));
    Ok(out)
}

fn sort_roots(v: &mut [CertifiedRoot]) {
    v.sort_by(|a, b| {
        let za = a.exact.clone().unwrap_or_else(|| a.ball.mid());
        let zb = b.exact.clone().unwrap_or_else(|| b.ball.mid());
        za.lex_cmp(&zb).then_with(|| a.multiplicity.cmp(&b.multiplicity))
    });
}

fn linear_root(f: &Poly<GaussRat>) -> GaussRat {
    f.coeff(0).neg().div(&f.coeff(1)).expect("linear factor has nonzero lead")
}

/// Isolating disks for a squarefree exact polynomial, with Q(i) roots
/// reconstructed when present.
pub fn isolate_squarefree(
    f: &Poly<GaussRat>,
    prec: u32,
) -> Result<Vec<(CBall, Option<GaussRat>)>> {
    let n = f.deg();
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        let z = linear_root(f);
        return Ok(vec![(CBall::from_exact(&z, prec.max(DEFAULT_PRECISION)), Some(z))]);
    }
    let monic = f.monic();
    let mut prec = prec.max(64);
    let start = initial_guess(&monic.map(|c| Coeff::Exact(c.clone())));
    loop {
        let zs = refine(&monic, start.clone(), prec);
        if let Some(disks) = certify_exact(&monic, &zs, prec) {
            let lead = gaussian_integer_lead(f);
            return Ok(disks
                .into_iter()
                .map(|b| {
                    let e = reconstruct(f, &lead, &b);
                    (b, e)
                })
                .collect());
        }
        if prec >= MAX_PRECISION {
            return Err(Error::UnresolvedCluster { precision: prec });
        }
        prec = (prec * 2).min(MAX_PRECISION);
    }
}

fn from_c64(z: Complex64) -> GaussRat {
    let fin = |v: f64| if v.is_finite() { super::rat::from_f64(v) } else { Rat::zero() };
    GaussRat::new(fin(z.re), fin(z.im))
}

/// Double-precision Aberth iteration from points on a circle.
fn initial_guess(p: &Poly<Coeff>) -> Vec<GaussRat> {
    let c: Vec<Complex64> = p.coeffs().iter().map(|c| {
        let (re, im) = c.to_f64();
        Complex64::new(re, im)
    }).collect();
    let n = c.len() - 1;
    let lead = c[n];
    let bound = 1.0 + c[..n].iter().map(|a| (a / lead).norm()).fold(0.0, f64::max);
    let radius = if bound.is_finite() { bound / 2.0 } else { 1.0 };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, ang)
        })
        .collect();
    let eval = |x: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::zero();
        let mut d = Complex64::zero();
        for a in c.iter().rev() {
            d = d * x + v;
            v = v * x + a;
        }
        (v, d)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z.into_iter().map(from_c64).collect()
}

/// Round both parts to one dyadic grid fixed by the larger part, so that a
/// vanishing imaginary part cannot keep `prec` bits of its own.
fn round_g(z: &GaussRat, prec: u32) -> GaussRat {
    let big = if z.re.abs() >= z.im.abs() { &z.re } else { &z.im };
    if big.is_zero() {
        return z.clone();
    }
    let shift = prec as i64 - 1 - floor_log2(big);
    let r = |x: &Rat| (x * pow2(shift)).round() * pow2(-shift);
    GaussRat::new(r(&z.re), r(&z.im))
}

/// Weierstrass corrections `W_i = p(z_i) / prod_{j != i} (z_i - z_j)` for monic `p`.
fn corrections(p: &Poly<GaussRat>, zs: &[GaussRat]) -> Vec<Option<GaussRat>> {
    (0..zs.len())
        .map(|i| {
            let mut den = GaussRat::one();
            for (j, zj) in zs.iter().enumerate() {
                if j != i {
                    den = den.mul(&zs[i].sub(zj));
                }
            }
            p.eval(&zs[i]).div(&den)
        })
        .collect()
}

fn refine(p: &Poly<GaussRat>, mut zs: Vec<GaussRat>, prec: u32) -> Vec<GaussRat> {
    // |W|^2 against the squared rounding grid
    let tol = pow2(8 - 2 * prec as i64);
    for it in 0..200 {
        let ws = corrections(p, &zs);
        let mut done = true;
        for (i, w) in ws.into_iter().enumerate() {
            match w {
                Some(w) => {
                    if w.norm() > &tol * zs[i].norm().max(Rat::one()) {
                        done = false;
                    }
                    zs[i] = round_g(&zs[i].sub(&w), prec);
                }
                None => {
                    // coincident approximations: nudge apart
                    done = false;
                    let eps = pow2(-(prec as i64) / 4 - it);
                    zs[i] = zs[i].add(&GaussRat::new(eps.clone(), eps * int(i as i64 + 1)));
                }
            }
        }
        if done {
            break;
        }
    }
    zs
}

fn abs_upper(z: &GaussRat) -> Rat {
    sqrt_bounds(&z.norm(), 40).1
}

fn certify_exact(p: &Poly<GaussRat>, zs: &[GaussRat], prec: u32) -> Option<Vec<CBall>> {
    let n = int(zs.len() as i64);
    let mut radii = Vec::with_capacity(zs.len());
    for w in corrections(p, zs) {
        radii.push(round_up_bits(&(abs_upper(&w?) * &n), 30));
    }
    for i in 0..zs.len() {
        for j in i + 1..zs.len() {
            let r = &radii[i] + &radii[j];
            if zs[i].sub(&zs[j]).norm() <= &r * &r {
                return None;
            }
        }
    }
    Some(
        zs.iter()
            .zip(radii)
            .map(|(z, r)| CBall {
                mid_re: z.re.clone(),
                mid_im: z.im.clone(),
                rad: r,
                precision_bits: prec,
            })
            .collect(),
    )
}

/// Leading coefficient after scaling `f` to Gaussian-integer coefficients.
fn gaussian_integer_lead(f: &Poly<GaussRat>) -> GaussRat {
    let d = f
        .coeffs()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, &c.denom_lcm()));
    f.lead().mul(&GaussRat::real(Rat::from_integer(d)))
}

/// If `f` has a root in Q(i) inside `b`, it equals `round(L z) / L` for the
/// Gaussian-integer leading coefficient `L`.
fn reconstruct(f: &Poly<GaussRat>, lead: &GaussRat, b: &CBall) -> Option<GaussRat> {
    let w = lead.mul(&b.mid());
    let cand = GaussRat::new(w.re.round(), w.im.round()).div(lead)?;
    if b.contains(&cand) && f.eval(&cand).is_zero() {
        Some(cand)
    } else {
        None
    }
}

fn roots_ball(p: &Poly<Coeff>, prec: u32) -> Result<Vec<CertifiedRoot>> {
    let lead = p.lead();
    if lead.zero_status() != ZeroStatus::NonZero {
        return Err(Error::AmbiguousZero(format!("leading coefficient {lead}")));
    }
    let prec = p.coeffs().iter().filter_map(|c| c.precision()).fold(prec, u32::max);
    let n = p.deg();
    let mids = p.map(|c| c.to_ball(prec).mid());
    let monic = mids.monic();
    let zs = refine(&monic, initial_guess(p), prec);
    let lead_inv = lead.inv().expect("nonzero lead");
    let mut radii = Vec::with_capacity(n);
    for (i, zi) in zs.iter().enumerate() {
        let mut den = GaussRat::one();
        for (j, zj) in zs.iter().enumerate() {
            if j != i {
                den = den.mul(&zi.sub(zj));
            }
        }
        let w = match den.inv() {
            Some(di) => p.eval(&Coeff::Exact(zi.clone())).mul(&lead_inv).mul(&Coeff::Exact(di)),
            None => return Err(Error::UnresolvedCluster { precision: prec }),
        };
        radii.push(round_up_bits(&(w.to_ball(prec).abs_upper() * int(n as i64)), 30));
    }
    // connected components of overlapping disks
    let mut comp: Vec<usize> = (0..n).collect();
    fn find(c: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while c[r] != r {
            r = c[r];
        }
        c[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            let r = &radii[i] + &radii[j];
            if zs[i].sub(&zs[j]).norm() <= &r * &r {
                let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                comp[a.max(b)] = a.min(b);
            }
        }
    }
    let mut out = Vec::new();
    for root in 0..n {
        let members: Vec<usize> = (0..n).filter(|&i| find(&mut comp, i) == root).collect();
        if members.is_empty() {
            continue;
        }
        let k = members.len() as u32;
        let c = &zs[members[0]];
        let rad = members
            .iter()
            .map(|&j| abs_upper(&zs[j].sub(c)) + &radii[j])
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        if k > 1 && rad >= pow2(-(prec as i64) / (2 * k as i64)) {
            return Err(Error::UnresolvedCluster { precision: prec });
        }
        out.push(CertifiedRoot {
            ball: CBall { mid_re: c.re.clone(), mid_im: c.im.clone(), rad, precision_bits: prec },
            exact: None,
            multiplicity: k,
        });
    }
    sort_roots(&mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn p(v: &[i64]) -> Poly<Coeff> {
        Poly::new(v.iter().map(|&x| Coeff::from_int(x)).collect())
    }

    #[test]
    fn two_z_squared_plus_one() {
        let r = roots_certified(&p(&[1, 0, 2]), DEFAULT_PRECISION).unwrap();
        assert_eq!(r.len(), 2);
        // roots are +-i/sqrt(2); check the ball contains a point with im^2 = 1/2
        for root in &r {
            assert!(root.exact.is_none());
            assert_eq!(root.multiplicity, 1);
            let (re, im) = root.ball.to_f64();
            assert!(re.abs() < 1e-30);
            assert!((im.abs() - 0.5f64.sqrt()).abs() < 1e-15);
            assert!(root.ball.rad < pow2(-100));
        }
    }

    #[test]
    fn double_root_at_zero() {
        let r = roots_certified(&p(&[0, 0, 2, 1]), DEFAULT_PRECISION).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].exact, Some(GaussRat::int(-2)));
        assert_eq!(r[0].multiplicity, 1);
        assert_eq!(r[1].exact, Some(GaussRat::int(0)));
        assert_eq!(r[1].multiplicity, 2);
    }

    #[test]
    fn cube_roots_of_unity() {
        let r = roots_certified(&p(&[-1, 0, 0, 1]), DEFAULT_PRECISION).unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r.iter().filter(|x| x.exact.is_some()).count(), 1);
        for root in &r {
            let z = Coeff::Ball(root.ball.clone());
            assert!(z.pow(3).sub(&Coeff::one()).zero_status() != ZeroStatus::NonZero);
        }
    }

    #[test]
    fn gaussian_rational_reconstruction() {
        // (2z - 1 - i)(3z + 2i)(z^2 + 1)
        let a = Poly::new(vec![GaussRat::new(rat(-1, 1), rat(-1, 1)), GaussRat::int(2)]);
        let b = Poly::new(vec![GaussRat::new(rat(0, 1), rat(2, 1)), GaussRat::int(3)]);
        let c = Poly::new(vec![GaussRat::int(1), GaussRat::zero(), GaussRat::int(1)]);
        let f = a.mul(&b).mul(&c);
        let roots = gaussian_rational_roots(&f).unwrap();
        let vals: Vec<GaussRat> = roots.iter().map(|r| r.0.clone()).collect();
        assert_eq!(vals.len(), 4);
        assert!(vals.contains(&GaussRat::new(rat(1, 2), rat(1, 2))));
        assert!(vals.contains(&GaussRat::new(rat(0, 1), rat(-2, 3))));
        assert!(vals.contains(&GaussRat::i()));
        assert!(vals.contains(&GaussRat::i().neg()));
    }

    #[test]
    fn close_roots_need_escalation() {
        // (z - 1)(z - 1 - 2^-100)
        let e = GaussRat::real(int(1) + pow2(-100));
        let f = Poly::linear_root(&GaussRat::one()).mul(&Poly::linear_root(&e));
        let r = roots_exact(&f, 64).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.exact.is_some()));
    }

    #[test]
    fn ball_polynomial_roots() {
        let third = Coeff::Ball(CBall::from_exact(&GaussRat::real(rat(1, 3)), 128));
        // (z - 1/3)(z + 1) with a ball coefficient
        let f = Poly::new(vec![third.neg(), Coeff::one().sub(&third), Coeff::one()]);
        let r = roots_certified(&f, 128).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[1].ball.contains(&GaussRat::real(rat(1, 3))));
        assert!(r[0].ball.contains(&GaussRat::int(-1)));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert!(matches!(roots_certified(&Poly::zero(), 64), Err(Error::ZeroInput)));
    }
}
