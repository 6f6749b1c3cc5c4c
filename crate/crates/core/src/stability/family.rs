//! Morse stability of a one-variable family `p_t(z)`.

use serde::Serialize;

use crate::algebra::rat::rat;
use crate::algebra::{
    roots_exact, simplest_gauss, CertifiedRoot, Coeff, GaussRat, GcdDomain, MPoly, Poly, Ring, TPoly,
    Var, ZeroStatus,
};
use crate::error::{Error, Result};

use super::Verdict;

/// `p_t(z) = a_0(t) z^n + ... + a_n(t)` with polynomial dependence on `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyFamily {
    p: Poly<TPoly>,
}

fn specialise(p: &Poly<TPoly>, t: &GaussRat) -> Poly<GaussRat> {
    p.map(|c| c.eval(t))
}

impl PolyFamily {
    pub fn new(p: Poly<TPoly>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroInput);
        }
        Ok(PolyFamily { p })
    }

    /// Reads `x` as `z`; `y` must not occur.
    pub fn from_mpoly(f: &MPoly) -> Result<Self> {
        if f.involves(Var::Y) {
            return Err(Error::InvalidInput("a family in z and t cannot involve y".into()));
        }
        let n = f.degree_in(Var::X) as usize;
        let mut v = vec![TPoly::zero(); n + 1];
        for (m, c) in f.terms() {
            let slot = &mut v[m[0] as usize];
            *slot = slot.add(&TPoly::monomial(c.clone(), m[2] as usize));
        }
        Self::new(Poly::new(v))
    }

    pub fn poly(&self) -> &Poly<TPoly> {
        &self.p
    }

    pub fn at(&self, t: &GaussRat) -> Poly<GaussRat> {
        specialise(&self.p, t)
    }

    pub fn involves_t(&self) -> bool {
        self.p.coeffs().iter().any(|c| c.deg() > 0)
    }

    pub fn to_mpoly(&self) -> MPoly {
        let mut out = MPoly::zero();
        for (k, c) in self.p.coeffs().iter().enumerate() {
            for (j, a) in c.coeffs().iter().enumerate() {
                out.add_term([k as u32, 0, j as u32], a.clone());
            }
        }
        out
    }
}

impl std::fmt::Display for PolyFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_mpoly().to_string().replace('x', "z"))
    }
}

/// The squarefree factor of `p_t'` through a critical point.
#[derive(Clone, Debug, Serialize)]
pub struct Carrier {
    pub factor: String,
    /// Multiplicity of the factor in `p_t'`.
    pub exponent: u32,
    /// Multiplicity of `c_0` as a root of the factor at `t = 0`.
    pub order_at_c0: u32,
    /// The factor loses degree at `t = 0`.
    pub degree_drop: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriticalBranchReport {
    pub c0: Coeff,
    pub multiplicity: u32,
    /// `None` when undecided.
    pub stable: Option<bool>,
    pub carriers: Vec<Carrier>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PolyFamilyReport {
    pub family: String,
    pub verdict: Verdict,
    pub critical_points: Vec<CriticalBranchReport>,
    /// 1, 2 or 3.
    pub failing_condition: Option<u8>,
    pub witness: Option<String>,
}

/// Multiplicity of `c` as a root of `h`, by successive derivatives.
fn root_order(h: &Poly<GaussRat>, c: &Coeff) -> Result<u32> {
    let mut q = h.to_coeff();
    let mut m = 0;
    while !q.is_zero() {
        match q.eval(c).zero_status() {
            ZeroStatus::Zero => m += 1,
            ZeroStatus::NonZero => break,
            ZeroStatus::Ambiguous => return Err(Error::AmbiguousZero("factor at a critical point".into())),
        }
        q = q.derivative();
    }
    Ok(m)
}

fn is_zero_at(h: &Poly<GaussRat>, c: &Coeff) -> Result<bool> {
    match h.to_coeff().eval(c).zero_status() {
        ZeroStatus::Zero => Ok(true),
        ZeroStatus::NonZero => Ok(false),
        ZeroStatus::Ambiguous => Err(Error::AmbiguousZero("polynomial at a critical point".into())),
    }
}

/// Decide `q(c1) = q(c2)` for roots `c1, c2` of `crit`: the values are roots
/// of `Res_z(crit(z), q(z) − v)`, whose isolating disks separate them.
fn values_equal(crit: &Poly<GaussRat>, q: &Poly<GaussRat>, c1: &Coeff, c2: &Coeff, prec: u32) -> Result<bool> {
    if let (Some(a), Some(b)) = (c1.as_exact(), c2.as_exact()) {
        return Ok(q.eval(a) == q.eval(b));
    }
    let lift = |p: &Poly<GaussRat>| -> Poly<TPoly> { p.map(|c| TPoly::constant(c.clone())) };
    let mut qv = lift(q);
    let mut v0 = qv.coeff(0).coeffs().to_vec();
    v0.resize(2, GaussRat::zero());
    v0[1] = GaussRat::int(-1);
    let mut cs = qv.coeffs().to_vec();
    if cs.is_empty() {
        cs.push(TPoly::zero());
    }
    cs[0] = Poly::new(v0);
    qv = Poly::new(cs);
    let res = lift(crit).resultant(&qv)?;
    let disks = roots_exact(&res.squarefree_part(), prec)?;
    let locate = |c: &Coeff| -> Result<usize> {
        let v = q.to_coeff().eval(c).to_ball(prec);
        let hits: Vec<usize> = disks.iter().enumerate().filter(|(_, d)| d.ball.overlaps(&v)).map(|(i, _)| i).collect();
        match hits.as_slice() {
            [i] => Ok(*i),
            _ => Err(Error::AmbiguousZero("critical value not isolated".into())),
        }
    };
    Ok(locate(c1)? == locate(c2)?)
}

/// `p_t(−a/b) · b^n` for a root of the linear factor `b z + a`.
fn value_at_linear_root(p: &Poly<TPoly>, g: &Poly<TPoly>) -> (TPoly, TPoly) {
    let (a, b) = (g.coeff(0), g.coeff(1));
    let n = p.deg() as u32;
    let mut num = TPoly::zero();
    for (k, pk) in p.coeffs().iter().enumerate() {
        num = num.add(&pk.mul(&a.neg().pow(k as u32)).mul(&b.pow(n - k as u32)));
    }
    (num, b.pow(n))
}

/// An affine symmetry `z ↦ ω z + b` of `p_t` sending `c1` to `c2`.
fn symmetry(p: &Poly<TPoly>, c1: &Coeff, c2: &Coeff) -> Option<String> {
    let units = [GaussRat::int(1), GaussRat::int(-1), GaussRat::i(), GaussRat::i().neg()];
    for w in units {
        let b = simplest_gauss(&c2.sub(&Coeff::Exact(w.clone()).mul(c1)))?;
        if w.is_one() && b.is_zero() {
            continue;
        }
        let sigma = Poly::new(vec![TPoly::constant(b.clone()), TPoly::constant(w.clone())]);
        if p.compose(&sigma) == *p {
            return Some(format!("z -> ({w})*z + ({b})"));
        }
    }
    None
}

const SAMPLES: [(i64, i64); 3] = [(1, 16), (1, 32), (1, 64)];

/// Numeric cross-check: at small sampled `t`, the critical points of `p_t`
/// nearest to `c1` and `c2` carry overlapping values.
fn sampled_values_agree(fam: &PolyFamily, c1: &Coeff, c2: &Coeff, prec: u32) -> Result<bool> {
    for (n, d) in SAMPLES {
        let pt = fam.at(&GaussRat::real(rat(n, d)));
        let crit = roots_exact(&pt.derivative(), prec)?;
        let nearest = |c: &Coeff| -> Coeff {
            let (x, y) = c.to_f64();
            crit.iter()
                .map(|r| r.value())
                .min_by(|a, b| {
                    let da = (a.to_f64().0 - x).hypot(a.to_f64().1 - y);
                    let db = (b.to_f64().0 - x).hypot(b.to_f64().1 - y);
                    da.total_cmp(&db)
                })
                .expect("critical points exist")
        };
        let pc = pt.to_coeff();
        if !pc.eval(&nearest(c1)).approx_eq(&pc.eval(&nearest(c2))) {
            return Ok(false);
        }
    }
    Ok(true)
}

struct Crit {
    root: CertifiedRoot,
    carrier: Option<usize>,
    report: CriticalBranchReport,
}

pub fn check_poly_family(fam: &PolyFamily, prec: u32) -> Result<PolyFamilyReport> {
    match check_inner(fam, prec) {
        Err(e) if e.is_inconclusive() => Ok(PolyFamilyReport {
            family: fam.to_string(),
            verdict: Verdict::Inconclusive,
            critical_points: Vec::new(),
            failing_condition: None,
            witness: Some(e.to_string()),
        }),
        r => r,
    }
}

fn check_inner(fam: &PolyFamily, prec: u32) -> Result<PolyFamilyReport> {
    let p = &fam.p;
    let p0 = fam.at(&GaussRat::zero());
    let mut report = PolyFamilyReport {
        family: fam.to_string(),
        verdict: Verdict::MorseStable,
        critical_points: Vec::new(),
        failing_condition: None,
        witness: None,
    };
    if p0.deg() < p.deg() {
        report.verdict = Verdict::Unstable;
        report.failing_condition = Some(1);
        report.witness = Some("leading coefficient vanishes at t = 0".into());
        return Ok(report);
    }
    if p.deg() < 2 {
        return Ok(report);
    }
    let d0 = p0.derivative();
    let roots0 = roots_exact(&d0, prec)?;
    let factors: Vec<(Poly<TPoly>, u32)> = p
        .derivative()
        .squarefree()?
        .into_iter()
        .map(|(g, e)| (g.primitive_part(), e))
        .collect();
    let mut crits = Vec::new();
    for r in roots0 {
        let c0 = r.value();
        let mut carriers = Vec::new();
        let mut idx = None;
        for (j, (g, e)) in factors.iter().enumerate() {
            let g0 = specialise(g, &GaussRat::zero());
            let ord = root_order(&g0, &c0)?;
            if ord > 0 {
                idx = Some(j);
                carriers.push(Carrier {
                    factor: PolyFamily { p: g.clone() }.to_string(),
                    exponent: *e,
                    order_at_c0: ord,
                    degree_drop: g0.deg() < g.deg(),
                });
            }
        }
        let stable = carriers.len() == 1
            && carriers[0].exponent == r.multiplicity
            && carriers[0].order_at_c0 == 1
            && !carriers[0].degree_drop;
        let rep = CriticalBranchReport { c0, multiplicity: r.multiplicity, stable: Some(stable), carriers };
        crits.push(Crit { root: r, carrier: if stable { idx } else { None }, report: rep });
    }
    report.critical_points = crits.iter().map(|c| c.report.clone()).collect();
    // (1)
    if let Some(c) = crits.iter().find(|c| c.carrier.is_none()) {
        report.verdict = Verdict::Unstable;
        report.failing_condition = Some(1);
        report.witness = Some(format!(
            "critical point {} of multiplicity {} splits",
            c.report.c0, c.report.multiplicity
        ));
        return Ok(report);
    }
    // (3)
    for c in &crits {
        let c0 = c.root.value();
        if !is_zero_at(&p0, &c0)? {
            continue;
        }
        let g = &factors[c.carrier.expect("stable")].0;
        let h = g.gcd(p).primitive_part();
        let h0 = specialise(&h, &GaussRat::zero());
        if h.deg() == 0 || h0.deg() < h.deg() || !is_zero_at(&h0, &c0)? {
            report.verdict = Verdict::Unstable;
            report.failing_condition = Some(3);
            report.witness = Some(format!("multiple root {c0} of p_0 does not stay a root"));
            return Ok(report);
        }
    }
    if !fam.involves_t() {
        return Ok(report);
    }
    // (2)
    let mut undecided = None;
    for (i, a) in crits.iter().enumerate() {
        for b in &crits[i + 1..] {
            let (ca, cb) = (a.root.value(), b.root.value());
            if !values_equal(&d0, &p0, &ca, &cb, prec)? {
                continue;
            }
            let (ga, gb) = (&factors[a.carrier.unwrap()].0, &factors[b.carrier.unwrap()].0);
            let holds = if ga.deg() == 1 && gb.deg() == 1 {
                let (na, da) = value_at_linear_root(p, ga);
                let (nb, db) = value_at_linear_root(p, gb);
                Some(na.mul(&db) == nb.mul(&da))
            } else if ga.coeffs().iter().chain(gb.coeffs()).all(|c| c.deg() == 0) {
                // both critical points stay put: compare each t-coefficient
                let mut all = true;
                for j in 0..=p.coeffs().iter().map(|c| c.deg()).max().unwrap_or(0) {
                    let pj = p.map(|c| c.coeff(j));
                    all &= values_equal(&d0, &pj, &ca, &cb, prec)?;
                }
                Some(all)
            } else if !sampled_values_agree(fam, &ca, &cb, prec)? {
                Some(false)
            } else {
                symmetry(p, &ca, &cb).map(|_| true)
            };
            match holds {
                Some(true) => {}
                Some(false) => {
                    report.verdict = Verdict::AlmostMorseStable;
                    report.failing_condition = Some(2);
                    report.witness = Some(format!("critical values at {ca} and {cb} separate"));
                    return Ok(report);
                }
                None => undecided = Some(format!("equal critical values at {ca} and {cb}")),
            }
        }
    }
    if let Some(w) = undecided {
        report.verdict = Verdict::Inconclusive;
        report.witness = Some(format!("{w}: no certificate that they stay equal"));
    }
    Ok(report)
}
