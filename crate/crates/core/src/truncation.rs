//! Root truncation `f̂_root` and the interpolating family `F_root`.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::algebra::rat::{fmt_rat, is_integer, serde_rat, Rat};
use crate::algebra::{simplest_gauss, Coeff, GaussRat, MPoly, Poly, Ring, ZeroStatus};
use crate::error::{Error, Result};
use crate::expansion::{expand_roots, Depth, RootBranch};
use crate::polygon::{XiPoly, XiPolynomial};
use crate::series::Series;

#[derive(Clone, Debug, Serialize)]
pub struct TruncatedRoot {
    pub series: crate::series::PuiseuxSeries,
    pub multiplicity: u32,
    /// `e_i`; `None` when there is a single root.
    #[serde(with = "serde_rat::opt")]
    pub e: Option<Rat>,
    /// `O_y(R_i)` of the remainder `ζ_i − ζ̂_i`: `None` when it is zero, and
    /// a lower bound when the first remainder term lies past the stored depth.
    #[serde(with = "serde_rat::opt")]
    pub remainder_order: Option<Rat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct TruncationResult {
    pub roots: Vec<TruncatedRoot>,
    #[serde(serialize_with = "ser_display")]
    pub fhat: MPoly,
    /// False when `f̂_root` is a genuine power series shown to stored depth.
    pub polynomial: bool,
    /// Ball coefficients replaced by the Gaussian rational they enclose.
    pub snapped: Vec<String>,
}

fn ser_display<S: serde::Serializer, T: std::fmt::Display>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Recognise the Gaussian rational enclosed by a tight ball.
fn snap(c: &Coeff, where_: &str, log: &mut Vec<String>) -> Result<GaussRat> {
    let z = simplest_gauss(c)
        .ok_or_else(|| Error::Inconclusive(format!("coefficient of {where_} too wide to recognise")))?;
    if !c.is_exact() {
        log.push(format!("{where_}: {c} -> {z}"));
    }
    Ok(z)
}

/// Exponents must be integral and coefficients must lie in the ground field.
fn collect<C: Ring>(
    p: &XiPoly<C>,
    mut to_terms: impl FnMut(&C, u32, u32, &mut Vec<String>) -> Result<Vec<([u32; 3], GaussRat)>>,
    status: impl Fn(&C) -> ZeroStatus,
) -> Result<(MPoly, Vec<String>)> {
    let mut log = Vec::new();
    let mut out = MPoly::zero();
    for (k, a) in p.coeffs().iter().enumerate() {
        for (e, c) in a.terms() {
            if !is_integer(e) {
                return Err(match status(c) {
                    ZeroStatus::NonZero => Error::Internal(format!(
                        "exponent {} survives in the coefficient of x^{k}",
                        fmt_rat(e)
                    )),
                    _ => Error::Inconclusive(format!("cannot certify cancellation at y^{}", fmt_rat(e))),
                });
            }
            let ey = e.to_integer().to_u32().ok_or_else(|| Error::Internal("negative exponent".into()))?;
            for (m, z) in to_terms(c, k as u32, ey, &mut log)? {
                out.add_term(m, z);
            }
        }
    }
    Ok((out, log))
}

fn split(b: &RootBranch, e: &Option<Rat>) -> (crate::series::PuiseuxSeries, Option<Rat>) {
    match e {
        None => (b.series.as_exact(), None),
        Some(e) => {
            let head = b.series.head_upto(e);
            let rem = b.series.terms().map(|(x, _)| x).find(|x| *x > e).cloned();
            (head, rem.or_else(|| b.series.trunc().cloned()))
        }
    }
}

fn branches_of(f: &MPoly, prec: u32) -> Result<(XiPolynomial, Vec<RootBranch>)> {
    let phi = XiPolynomial::from_mpoly(f)?;
    let b = expand_roots(&phi, &Depth::Auto, prec)?;
    Ok((phi, b))
}

fn linear(root: &crate::series::PuiseuxSeries) -> XiPolynomial {
    XiPoly::new(vec![root.neg(), Series::constant(Coeff::one())])
}

pub fn root_truncation(f: &MPoly, prec: u32) -> Result<TruncationResult> {
    let (_, branches) = branches_of(f, prec)?;
    let single = branches.len() == 1;
    let mut roots = Vec::new();
    let mut prod = XiPolynomial::new(vec![Series::constant(Coeff::one())]);
    for b in &branches {
        let e = if single { None } else { b.separation_depth.clone() };
        let (head, rem) = split(b, &e);
        for _ in 0..b.multiplicity {
            prod = prod.mul(&linear(&head));
        }
        roots.push(TruncatedRoot {
            series: head,
            multiplicity: b.multiplicity,
            e,
            remainder_order: rem,
        });
    }
    let polynomial = !single || branches[0].series.is_exact();
    let (fhat, snapped) = collect(
        &prod,
        |c, k, ey, log| Ok(vec![([k, ey, 0], snap(c, &format!("x^{k}*y^{ey}"), log)?)]),
        |c| c.zero_status(),
    )?;
    // the snapped polynomial must still vanish on every truncated root
    if !snapped.is_empty() {
        let check = XiPolynomial::from_mpoly(&fhat)?;
        for r in &roots {
            if check.evaluate(&r.series).certified_order().ok() != Some(None) {
                return Err(Error::Inconclusive("recognised coefficients do not reproduce the roots".into()));
            }
        }
    }
    Ok(TruncationResult { roots, fhat, polynomial, snapped })
}

#[derive(Clone, Debug, Serialize)]
pub struct DeformationFamily {
    #[serde(serialize_with = "ser_display")]
    pub family: MPoly,
    /// Remainders are stored only to the expansion depth.
    pub depth_capped: bool,
    pub snapped: Vec<String>,
}

/// `F_root = Π [x − ζ_i + t R_i]^{m_i}` with `u ≡ 1`, so that `t = 1` gives
/// `f̂_root` and `t = 0` the stored part of the Weierstrass polynomial of `f`.
pub fn root_deformation_family(f: &MPoly, prec: u32) -> Result<DeformationFamily> {
    type TC = Poly<Coeff>;
    let (_, branches) = branches_of(f, prec)?;
    let single = branches.len() == 1;
    let t = TC::new(vec![Coeff::zero(), Coeff::one()]);
    let one_minus_t = TC::one().sub(&t);
    let mut prod: XiPoly<TC> = XiPoly::new(vec![Series::constant(TC::one())]);
    let mut capped = false;
    for b in &branches {
        capped |= !b.series.is_exact();
        let e = if single { None } else { b.separation_depth.clone() };
        // ζ_i − t R_i = ζ̂_i + (1 − t) R_i
        let lifted: Series<TC> = Series::from_terms(
            b.series.terms().map(|(x, c)| {
                let beyond = e.as_ref().is_some_and(|e| x > e);
                let k = if beyond { one_minus_t.scale(c) } else { TC::constant(c.clone()) };
                (x.clone(), k)
            }),
            None,
        );
        let lin = XiPoly::new(vec![lifted.neg(), Series::constant(TC::one())]);
        for _ in 0..b.multiplicity {
            prod = prod.mul(&lin);
        }
    }
    let (family, snapped) = collect(
        &prod,
        |c, k, ey, log| {
            let mut v = Vec::new();
            for (j, cj) in c.coeffs().iter().enumerate() {
                if !cj.is_zero() {
                    v.push(([k, ey, j as u32], snap(cj, &format!("x^{k}*y^{ey}*t^{j}"), log)?));
                }
            }
            Ok(v)
        },
        |c| {
            let st: Vec<ZeroStatus> = c.coeffs().iter().map(|x| x.zero_status()).collect();
            if st.contains(&ZeroStatus::NonZero) {
                ZeroStatus::NonZero
            } else if st.contains(&ZeroStatus::Ambiguous) {
                ZeroStatus::Ambiguous
            } else {
                ZeroStatus::Zero
            }
        },
    )?;
    Ok(DeformationFamily { family, depth_capped: capped, snapped })
}
