//! Deformations `F(x, y, t)`: Tschirnhausen clearing at each critical point
//! and the edge families that decide the verdict.

use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::rat::{fmt_rat, int, serde_rat, Rat};
use crate::algebra::{Coeff, Field, GaussRat, MPoly, Poly, Ring, Var, ZeroStatus};
use crate::error::{Error, Result};
use crate::expansion::{build_tree, critical_points, expand_roots, CriticalPoint, Depth};
use crate::polygon::{polygon_of, XiPoly, XiPolynomial};
use crate::series::{PuiseuxSeries, Series};

use super::family::{check_poly_family, PolyFamily, PolyFamilyReport};
use super::Verdict;

type TC = Poly<Coeff>;
/// `Φ(ξ, y, t)`: coefficients are series in `y` over polynomials in `t`.
pub type TFamily = XiPoly<TC>;

/// Shifts are capped; each one removes at least one offending term.
const MAX_SHIFTS: usize = 64;

pub fn family_from_mpoly(f: &MPoly) -> TFamily {
    let n = f.degree_in(Var::X) as usize;
    let mut coeffs: Vec<Vec<(Rat, TC)>> = vec![Vec::new(); n + 1];
    for (m, c) in f.terms() {
        coeffs[m[0] as usize].push((int(m[1] as i64), TC::monomial(Coeff::Exact(c.clone()), m[2] as usize)));
    }
    XiPoly::new(coeffs.into_iter().map(|v| Series::from_terms(v, None)).collect())
}

fn lift(s: &PuiseuxSeries) -> Series<TC> {
    s.map(|c| TC::constant(c.clone()))
}

fn at_t0(psi: &TFamily) -> XiPolynomial {
    psi.map(|s| s.map(|c| c.coeff(0)))
}

fn has_t(c: &TC) -> Result<bool> {
    let mut found = false;
    for a in c.coeffs().iter().skip(1) {
        match a.zero_status() {
            ZeroStatus::NonZero => found = true,
            ZeroStatus::Zero => {}
            ZeroStatus::Ambiguous => return Err(Error::AmbiguousZero("t-coefficient".into())),
        }
    }
    Ok(found)
}

fn t_part(c: &TC) -> TC {
    let mut v = c.coeffs().to_vec();
    if let Some(x) = v.first_mut() {
        *x = Coeff::zero();
    }
    Poly::new(v)
}

fn t_dots(psi: &TFamily) -> Result<Vec<(u32, Rat, TC)>> {
    let mut out = Vec::new();
    for (k, a) in psi.coeffs().iter().enumerate() {
        for (q, c) in a.terms() {
            if has_t(c)? {
                out.push((k as u32, q.clone(), c.clone()));
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct Dot {
    pub k: u32,
    #[serde(with = "serde_rat")]
    pub q: Rat,
}

#[derive(Clone, Debug)]
pub struct TschirnhausenResult {
    /// `B_t`, with `B_0 = 0`.
    pub shift: Series<TC>,
    /// `Φ(γ + B_t + ξ)`.
    pub family: TFamily,
    pub cleared: bool,
    /// A `t`-dot strictly below `NP(φ_0, γ)` that no allowed shift removes.
    pub witness: Option<Dot>,
}

/// Translate `ξ ↦ ξ + β_t`, vertex by vertex from the right, until no
/// `t`-dependent dot lies strictly below `NP(φ_0, γ)`.
pub fn tschirnhausen_clear(phi: &TFamily, gamma: &PuiseuxSeries) -> Result<TschirnhausenResult> {
    let g = lift(&gamma.as_exact());
    let np0 = polygon_of(&at_t0(&phi.recenter(&g)))?;
    let last = np0.last_vertex.clone();
    // (k, q, co-slope on the left, co-slope on the right, coefficient)
    let mut vertices = Vec::new();
    let mut right_slope = int(0);
    for e in np0.sloped_edges() {
        let h = e.coslope.clone().expect("sloped edge");
        vertices.push((e.right.k, e.right.q.clone(), Some(h.clone()), right_slope.clone(), e.dots.last().unwrap().coeff.clone()));
        right_slope = h;
    }
    if last.k >= 1 {
        let c = np0.edges.last().unwrap().dots[0].coeff.clone();
        vertices.push((last.k, last.q.clone(), None, right_slope, c));
    }
    let mut shift: Series<TC> = Series::zero();
    for _ in 0..MAX_SHIFTS {
        let psi = phi.recenter(&g.add(&shift));
        let dots = t_dots(&psi)?;
        let below: Vec<Dot> = dots
            .iter()
            .filter(|(k, q, _)| match np0.boundary_at(*k) {
                None => true,
                Some(b) => q < &b,
            })
            .map(|(k, q, _)| Dot { k: *k, q: q.clone() })
            .collect();
        if below.is_empty() {
            return Ok(TschirnhausenResult { shift, family: psi, cleared: true, witness: None });
        }
        let mut step = None;
        for (mk, qk, left, right, a) in &vertices {
            if *mk == 0 {
                continue;
            }
            let terms: Vec<(Rat, TC)> = dots
                .iter()
                .filter(|(k, q, _)| {
                    *k == mk - 1
                        && left.as_ref().is_none_or(|h| q < &(qk + h))
                        && q - qk >= *right
                        && q > qk
                })
                .map(|(_, q, c)| (q - qk, t_part(c)))
                .collect();
            if terms.is_empty() {
                continue;
            }
            let inv = Coeff::from_int(*mk as i64)
                .mul(a)
                .inv()
                .ok_or_else(|| Error::Internal("zero vertex coefficient".into()))?;
            step = Some(Series::from_terms(terms, None).scale(&TC::constant(inv.neg())));
            break;
        }
        match step {
            Some(d) => shift = shift.add(&d),
            None => {
                let witness = below.into_iter().min_by(|a, b| a.k.cmp(&b.k).then(a.q.cmp(&b.q)));
                return Ok(TschirnhausenResult { shift, family: psi, cleared: false, witness });
            }
        }
    }
    Err(Error::Inconclusive(format!("no settled shift after {MAX_SHIFTS} steps")))
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeFamilyReport {
    #[serde(with = "serde_rat")]
    pub coslope: Rat,
    pub report: PolyFamilyReport,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPointStability {
    pub gamma: PuiseuxSeries,
    pub multiplicity: u32,
    #[serde(with = "serde_rat::opt")]
    pub lojasiewicz: Option<Rat>,
    pub shift: String,
    pub cleared: bool,
    pub witness_dot: Option<Dot>,
    pub families: Vec<EdgeFamilyReport>,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub verdict: Verdict,
    /// The verdict is taken per edge family at each critical point.
    pub criterion: &'static str,
    pub critical_points: Vec<CriticalPointStability>,
    pub failing_condition: Option<String>,
    pub witness: Option<String>,
    /// Roots at sampled `t` keep their multiplicities, pairs and polygons.
    pub root_polygons_constant: Option<bool>,
}

fn render_shift(s: &Series<TC>) -> String {
    if s.is_exact_zero() {
        return "0".into();
    }
    let parts: Vec<String> = s
        .terms()
        .map(|(e, c)| format!("({})*y^({})", c.fmt_var("t"), fmt_rat(e)))
        .collect();
    parts.join(" + ")
}

fn constant_family(p: &Poly<Coeff>) -> PolyFamilyReport {
    PolyFamilyReport {
        family: p.fmt_var("z"),
        verdict: Verdict::MorseStable,
        critical_points: Vec::new(),
        failing_condition: None,
        witness: Some("independent of t".into()),
    }
}

fn edge_families(
    psi: &TFamily,
    np0: &crate::polygon::Polygon,
    prec: u32,
) -> Result<Vec<EdgeFamilyReport>> {
    let mut out = Vec::new();
    for e in np0.sloped_edges() {
        let h = e.coslope.clone().expect("sloped edge");
        let mut zc = Vec::new();
        let mut dep = false;
        for k in 0..=e.right.k {
            let c = if k < e.left.k {
                TC::zero()
            } else {
                let level = &e.right.q + &h * int((e.right.k - k) as i64);
                psi.coeff(k as usize).coeff(&level)
            };
            dep |= has_t(&c)?;
            zc.push(c);
        }
        let fam = Poly::new(zc);
        let report = if !dep {
            match fam.map(|c| c.coeff(0)).to_exact() {
                Some(p) => check_poly_family(&PolyFamily::new(p.map(|c| Poly::constant(c.clone())))?, prec)?,
                None => constant_family(&fam.map(|c| c.coeff(0))),
            }
        } else {
            let exact: Option<Vec<Poly<GaussRat>>> = fam.coeffs().iter().map(|c| c.to_exact()).collect();
            match exact {
                Some(v) => check_poly_family(&PolyFamily::new(Poly::new(v))?, prec)?,
                None => PolyFamilyReport {
                    family: format!("{fam:?}"),
                    verdict: Verdict::Inconclusive,
                    critical_points: Vec::new(),
                    failing_condition: None,
                    witness: Some("t-dependent family with inexact coefficients".into()),
                },
            }
        };
        out.push(EdgeFamilyReport { coslope: h, report });
    }
    Ok(out)
}

fn analyse_point(phi: &TFamily, cp: &CriticalPoint, prec: u32) -> Result<CriticalPointStability> {
    let tc = tschirnhausen_clear(phi, &cp.gamma)?;
    let mut rep = CriticalPointStability {
        gamma: cp.gamma.clone(),
        multiplicity: cp.multiplicity,
        lojasiewicz: cp.lojasiewicz.clone(),
        shift: render_shift(&tc.shift),
        cleared: tc.cleared,
        witness_dot: tc.witness.clone(),
        families: Vec::new(),
        verdict: Verdict::Unstable,
    };
    if !tc.cleared {
        return Ok(rep);
    }
    let np0 = polygon_of(&at_t0(&tc.family))?;
    rep.families = edge_families(&tc.family, &np0, prec)?;
    rep.verdict = rep.families.iter().fold(Verdict::MorseStable, |v, f| v.meet(f.report.verdict));
    Ok(rep)
}

fn check_preconditions(f: &MPoly) -> Result<XiPolynomial> {
    if f.terms().any(|(m, _)| m[0] == 0 && m[1] == 0) {
        return Err(Error::InvalidInput("F(0, 0, t) must vanish identically".into()));
    }
    let f0 = f.eval_var(Var::T, &GaussRat::zero());
    let phi0 = XiPolynomial::from_mpoly(&f0)?;
    phi0.mini_regular_order()?;
    Ok(phi0)
}

fn critical_data(phi: &XiPolynomial, prec: u32) -> Result<(Vec<crate::expansion::RootBranch>, Vec<CriticalPoint>)> {
    let branches = expand_roots(phi, &Depth::Auto, prec)?;
    let tree = build_tree(phi, branches.clone())?;
    let crit = critical_points(&tree, prec)?;
    Ok((branches, crit))
}

pub fn check_deformation(f: &MPoly, prec: u32) -> Result<StabilityReport> {
    let phi0 = check_preconditions(f)?;
    let (_, crit) = critical_data(&phi0, prec)?;
    let phi = family_from_mpoly(f);
    let points: Vec<Result<CriticalPointStability>> =
        crit.par_iter().map(|cp| analyse_point(&phi, cp, prec)).collect();
    let mut report = StabilityReport {
        verdict: Verdict::MorseStable,
        criterion: "edge-family criterion",
        critical_points: Vec::new(),
        failing_condition: None,
        witness: None,
        root_polygons_constant: None,
    };
    for p in points {
        let p = match p {
            Ok(p) => p,
            Err(e) if e.is_inconclusive() => {
                report.verdict = report.verdict.meet(Verdict::Inconclusive);
                report.witness.get_or_insert_with(|| e.to_string());
                continue;
            }
            Err(e) => return Err(e),
        };
        if p.verdict == Verdict::Unstable && report.failing_condition.is_none() {
            if let Some(d) = &p.witness_dot {
                report.failing_condition = Some("polygon".into());
                report.witness = Some(format!(
                    "t-dependent dot ({}, {}) lies below NP(phi_0, {}) and no shift clears it",
                    d.k,
                    fmt_rat(&d.q),
                    p.gamma
                ));
            } else if let Some(fr) = p.families.iter().find(|f| f.report.verdict == Verdict::Unstable) {
                report.failing_condition = fr.report.failing_condition.map(|c| format!("({c})"));
                report.witness = Some(format!(
                    "edge family {} at co-slope {}: {}",
                    fr.report.family,
                    fmt_rat(&fr.coslope),
                    fr.report.witness.clone().unwrap_or_default()
                ));
            }
        }
        report.verdict = report.verdict.meet(p.verdict);
        report.critical_points.push(p);
    }
    if report.verdict.is_almost_stable() {
        let base = root_signature(&phi0, prec)?;
        let mut same = true;
        for t in [Rat::new(1.into(), 16.into()), Rat::new(1.into(), 8.into())] {
            let ft = f.eval_var(Var::T, &GaussRat::real(t));
            same &= root_signature(&XiPolynomial::from_mpoly(&ft)?, prec)? == base;
        }
        report.root_polygons_constant = Some(same);
    }
    Ok(report)
}

/// Vertices of `NP(φ, s)` whose edges are certified by the stored terms.
fn polygon_signature(phi: &XiPolynomial, s: &PuiseuxSeries) -> Result<String> {
    let poly = polygon_of(&phi.recenter(&s.as_exact()))?;
    let mut parts = Vec::new();
    for e in poly.sloped_edges() {
        let h = e.coslope.as_ref().expect("sloped edge");
        if s.trunc().is_some_and(|t| h >= t) {
            break;
        }
        parts.push(format!("({},{})", e.right.k, fmt_rat(&e.right.q)));
        parts.push(format!("({},{})", e.left.k, fmt_rat(&e.left.q)));
    }
    if s.is_exact() {
        parts.push(format!("({},{})", poly.last_vertex.k, fmt_rat(&poly.last_vertex.q)));
    }
    parts.dedup();
    Ok(parts.join(""))
}

fn pairs_string(s: &PuiseuxSeries) -> String {
    let v: Vec<String> = s.puiseux_pairs().iter().map(fmt_rat).collect();
    format!("{{{}}}", v.join(","))
}

fn root_signature(phi: &XiPolynomial, prec: u32) -> Result<Vec<String>> {
    let branches = expand_roots(phi, &Depth::Auto, prec)?;
    let mut out = Vec::new();
    for b in &branches {
        out.push(format!(
            "m={} pairs={} np={}",
            b.multiplicity,
            pairs_string(&b.series),
            polygon_signature(phi, &b.series)?
        ));
    }
    out.sort();
    Ok(out)
}

fn critical_signature(phi: &XiPolynomial, prec: u32) -> Result<Vec<String>> {
    let (_, crit) = critical_data(phi, prec)?;
    let mut out = Vec::new();
    for c in &crit {
        out.push(format!(
            "m_crit={} L={} pairs={} np={}",
            c.multiplicity,
            c.lojasiewicz.as_ref().map_or("inf".to_string(), fmt_rat),
            pairs_string(&c.gamma),
            polygon_signature(phi, &c.gamma)?
        ));
    }
    out.sort();
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleCheck {
    #[serde(with = "serde_rat")]
    pub t: Rat,
    pub matches: bool,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub samples: Vec<SampleCheck>,
    pub passed: bool,
}

/// Recompute the critical structure of `φ_t` from scratch at each sampled
/// `t` and compare it with `t = 0`.
pub fn verify_fundamental_lemma(f: &MPoly, ts: &[Rat], prec: u32) -> Result<LemmaReport> {
    let rep = check_deformation(f, prec)?;
    if !rep.verdict.is_almost_stable() {
        return Err(Error::InvalidInput(format!("the deformation is {}, not almost Morse stable", rep.verdict)));
    }
    let phi0 = check_preconditions(f)?;
    let base_c = critical_signature(&phi0, prec)?;
    let base_r = root_signature(&phi0, prec)?;
    let mut samples = Vec::new();
    for t in ts {
        let ft = f.eval_var(Var::T, &GaussRat::real(t.clone()));
        let phi = XiPolynomial::from_mpoly(&ft)?;
        let (c, r) = (critical_signature(&phi, prec)?, root_signature(&phi, prec)?);
        let mut mismatches = Vec::new();
        if c != base_c {
            mismatches.push(format!("critical points {c:?} vs {base_c:?}"));
        }
        if r != base_r {
            mismatches.push(format!("roots {r:?} vs {base_r:?}"));
        }
        samples.push(SampleCheck { t: t.clone(), matches: mismatches.is_empty(), mismatches });
    }
    let passed = samples.iter().all(|s| s.matches);
    Ok(LemmaReport { samples, passed })
}
