//! Polynomials in `ξ` over Puiseux series and their Newton polygons.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::algebra::rat::{fmt_rat, int, serde_rat, Rat};
use crate::algebra::{Coeff, MPoly, Poly, Ring, Var, ZeroStatus};
use crate::error::{Error, Result};
use crate::series::{PuiseuxSeries, Series};

/// `φ(ξ, y) = Σ α_k(y) ξ^k`.
#[derive(Clone, PartialEq)]
pub struct XiPoly<C> {
    coeffs: Vec<Series<C>>,
}

pub type XiPolynomial = XiPoly<Coeff>;

impl<C: Ring> XiPoly<C> {
    pub fn new(mut coeffs: Vec<Series<C>>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        XiPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Series<C>] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Series<C> {
        self.coeffs.get(k).cloned().unwrap_or_else(Series::zero)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients of `φ(α + ξ)`, by binomial expansion.
    pub fn recenter(&self, alpha: &Series<C>) -> Self {
        if alpha.is_exact_zero() {
            return self.clone();
        }
        let n = self.coeffs.len();
        let mut powers = vec![Series::constant(C::one())];
        for j in 1..n {
            let next = powers[j - 1].mul(alpha);
            powers.push(next);
        }
        let mut out = vec![Series::zero(); n];
        for (j, aj) in self.coeffs.iter().enumerate() {
            if aj.is_exact_zero() {
                continue;
            }
            let mut binom: i64 = 1;
            for (k, slot) in out.iter_mut().enumerate().take(j + 1) {
                // binom = C(j, k)
                let term = aj.mul(&powers[j - k]).scale(&C::from_int(binom));
                *slot = slot.add(&term);
                binom = binom * (j - k) as i64 / (k + 1) as i64;
            }
        }
        Self::new(out)
    }

    /// `φ(α(y), y)`.
    pub fn evaluate(&self, alpha: &Series<C>) -> Series<C> {
        let mut acc = Series::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(alpha).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.scale(&C::from_int(k as i64)))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::new(Vec::new());
        }
        let mut v = vec![Series::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&Series<C>) -> Series<D>) -> XiPoly<D> {
        XiPoly::new(self.coeffs.iter().map(f).collect())
    }
}

impl XiPolynomial {
    /// `f(x, y)` read as a polynomial in `ξ = x`.
    pub fn from_mpoly(f: &MPoly) -> Result<Self> {
        if f.involves(Var::T) {
            return Err(Error::InvalidInput("polynomial still depends on t".into()));
        }
        let n = f.degree_in(Var::X) as usize;
        let mut coeffs = vec![Vec::new(); n + 1];
        for (m, c) in f.terms() {
            coeffs[m[0] as usize].push((int(m[1] as i64), Coeff::Exact(c.clone())));
        }
        Ok(Self::new(coeffs.into_iter().map(|t| Series::from_terms(t, None)).collect()))
    }

    /// Order `m` of mini-regularity, or an error naming the failing condition.
    pub fn mini_regular_order(&self) -> Result<usize> {
        let mut m = None;
        for (k, a) in self.coeffs.iter().enumerate() {
            if let Some((e, c)) = a.leading() {
                if e.is_zero() && c.zero_status() == ZeroStatus::NonZero {
                    m = Some(k);
                    break;
                }
            }
        }
        let m = m.ok_or_else(|| {
            Error::NotMiniRegular("no coefficient alpha_k has order 0 (no pure power of x)".into())
        })?;
        for k in 0..m {
            let a = &self.coeffs[k];
            if let Some(o) = a.order_lower_bound() {
                if o < Rat::from_integer((m - k).into()) {
                    if !a.has_terms() {
                        return Err(Error::TruncationExhausted(format!(
                            "coefficient alpha_{k} is unknown from y^{} on",
                            fmt_rat(&o)
                        )));
                    }
                    return Err(Error::NotMiniRegular(format!(
                        "O_y(alpha_{k}) + {k} = {} < m = {m}",
                        fmt_rat(&(o + int(k as i64)))
                    )));
                }
            }
        }
        Ok(m)
    }
}

impl<C: Ring> fmt::Debug for XiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coeffs.iter()).finish()
    }
}

impl<C: Ring + fmt::Display> fmt::Display for XiPoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(k, c)| match k {
                0 => format!("({c})"),
                1 => format!("({c})*x"),
                _ => format!("({c})*x^{k}"),
            })
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewtonDot {
    pub k: u32,
    #[serde(with = "serde_rat")]
    pub q: Rat,
    pub coeff: Coeff,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeKind {
    Proper,
    Vertex,
    ArtificialVertex,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Vertex {
    pub k: u32,
    #[serde(with = "serde_rat")]
    pub q: Rat,
}

#[derive(Clone, Debug, Serialize)]
pub struct Edge {
    pub kind: EdgeKind,
    /// Endpoint with the smaller `ξ`-degree.
    pub left: Vertex,
    /// Endpoint with the larger `ξ`-degree.
    pub right: Vertex,
    /// `None` for the vertical edge.
    #[serde(with = "serde_rat::opt")]
    pub coslope: Option<Rat>,
    pub dots: Vec<NewtonDot>,
    pub assoc: Poly<Coeff>,
}

impl Edge {
    pub fn is_horizontal(&self) -> bool {
        self.kind == EdgeKind::Proper && self.coslope.as_ref().is_some_and(|h| h == &Rat::zero())
    }

    pub fn is_vertical(&self) -> bool {
        self.coslope.is_none()
    }

    /// `L(E) = q + m h` at the right vertex; `None` for the vertical edge.
    pub fn lojasiewicz(&self) -> Option<Rat> {
        self.coslope.as_ref().map(|h| &self.right.q + int(self.right.k as i64) * h)
    }

    /// Same vertices, slope, dots and associated polynomial.
    pub fn same_as(&self, o: &Edge) -> bool {
        self.kind == o.kind
            && self.left == o.left
            && self.right == o.right
            && self.coslope == o.coslope
            && self.dots.len() == o.dots.len()
            && self
                .dots
                .iter()
                .zip(&o.dots)
                .all(|(a, b)| a.k == b.k && a.q == b.q && a.coeff.approx_eq(&b.coeff))
    }
}

pub fn edge_lojasiewicz(e: &Edge) -> Option<Rat> {
    e.lojasiewicz()
}

/// Newton polygon: `E_0` horizontal, proper edges by increasing co-slope,
/// `E_l` vertical.
#[derive(Clone, Debug, Serialize)]
pub struct Polygon {
    pub order: u32,
    pub edges: Vec<Edge>,
    pub last_vertex: Vertex,
    /// Every known dot, including those above the boundary.
    pub all_dots: Vec<NewtonDot>,
}

fn assoc_of(dots: &[NewtonDot]) -> Poly<Coeff> {
    let deg = dots.iter().map(|d| d.k).max().unwrap_or(0) as usize;
    let mut v = vec![Coeff::zero(); deg + 1];
    for d in dots {
        v[d.k as usize] = d.coeff.clone();
    }
    Poly::new(v)
}

/// Lower hull indices of points sorted by increasing `u`, where `u = m - k`.
fn lower_hull(pts: &[(Rat, Rat)]) -> Vec<usize> {
    let mut h: Vec<usize> = Vec::new();
    for i in 0..pts.len() {
        while h.len() >= 2 {
            let (a, b) = (&pts[h[h.len() - 2]], &pts[h[h.len() - 1]]);
            let c = &pts[i];
            // remove b unless it lies strictly below segment a-c
            let cross = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
            if cross <= Rat::zero() {
                h.pop();
            } else {
                break;
            }
        }
        h.push(i);
    }
    h
}

/// `NP(φ, α)`: dots of `φ(α + ξ)`.
pub fn build_polygon(phi: &XiPolynomial, alpha: &PuiseuxSeries) -> Result<Polygon> {
    polygon_of(&phi.recenter(alpha))
}

/// Polygon of an already recentred polynomial.
pub fn polygon_of(psi: &XiPolynomial) -> Result<Polygon> {
    let m = psi.mini_regular_order()?;
    let mut dots = Vec::new();
    let mut unknown = Vec::new();
    for (k, a) in psi.coeffs().iter().enumerate() {
        match a.leading() {
            Some((e, c)) => match c.zero_status() {
                ZeroStatus::NonZero => dots.push(NewtonDot { k: k as u32, q: e.clone(), coeff: c.clone() }),
                _ => {
                    return Err(Error::AmbiguousZero(format!(
                        "leading coefficient of alpha_{k} at y^{}",
                        fmt_rat(e)
                    )))
                }
            },
            None => {
                if let Some(t) = a.trunc() {
                    unknown.push((k as u32, t.clone()));
                }
            }
        }
    }
    let left_part: Vec<&NewtonDot> = dots.iter().filter(|d| d.k as usize <= m).rev().collect();
    let pts: Vec<(Rat, Rat)> =
        left_part.iter().map(|d| (int(m as i64 - d.k as i64), d.q.clone())).collect();
    let hull = lower_hull(&pts);
    let mut edges = Vec::new();
    let zero = Rat::zero();
    let v0 = Vertex { k: m as u32, q: zero.clone() };
    let horiz: Vec<NewtonDot> = dots.iter().filter(|d| d.q == zero && d.k as usize >= m).cloned().collect();
    edges.push(Edge {
        kind: EdgeKind::Proper,
        left: v0.clone(),
        right: v0,
        coslope: Some(zero.clone()),
        assoc: assoc_of(&horiz),
        dots: horiz,
    });
    for w in hull.windows(2) {
        let (r, l) = (left_part[w[0]], left_part[w[1]]);
        let h = (&l.q - &r.q) / int(r.k as i64 - l.k as i64);
        let on: Vec<NewtonDot> = left_part
            .iter()
            .filter(|d| d.k >= l.k && d.k <= r.k && d.q == &r.q + &h * int(r.k as i64 - d.k as i64))
            .map(|d| (*d).clone())
            .rev()
            .collect();
        edges.push(Edge {
            kind: EdgeKind::Proper,
            left: Vertex { k: l.k, q: l.q.clone() },
            right: Vertex { k: r.k, q: r.q.clone() },
            coslope: Some(h),
            assoc: assoc_of(&on),
            dots: on,
        });
    }
    let last = left_part[*hull.last().expect("nonempty hull")];
    let lv = Vertex { k: last.k, q: last.q.clone() };
    edges.push(Edge {
        kind: EdgeKind::Proper,
        left: lv.clone(),
        right: lv.clone(),
        coslope: None,
        dots: vec![last.clone()],
        assoc: assoc_of(std::slice::from_ref(last)),
    });
    let poly = Polygon { order: m as u32, edges, last_vertex: lv, all_dots: dots };
    for (k, t) in unknown {
        match poly.boundary_at(k) {
            Some(b) if t > b => {}
            _ => {
                return Err(Error::TruncationExhausted(format!(
                    "coefficient alpha_{k} is unknown from y^{} on",
                    fmt_rat(&t)
                )))
            }
        }
    }
    Ok(poly)
}

impl Polygon {
    /// Proper edges `E_1 .. E_{l-1}` (neither horizontal nor vertical).
    pub fn sloped_edges(&self) -> &[Edge] {
        &self.edges[1..self.edges.len() - 1]
    }

    pub fn top_edge(&self) -> Option<&Edge> {
        self.sloped_edges().last()
    }

    /// `m_l`: multiplicity of the centre as a root.
    pub fn root_multiplicity(&self) -> u32 {
        self.last_vertex.k
    }

    /// Height of the boundary above `ξ`-degree `k`, if `m_l <= k`.
    pub fn boundary_at(&self, k: u32) -> Option<Rat> {
        if k < self.last_vertex.k {
            return None;
        }
        if k >= self.order {
            return Some(Rat::zero());
        }
        for e in self.sloped_edges() {
            if e.left.k <= k && k <= e.right.k {
                let h = e.coslope.as_ref().expect("sloped");
                return Some(&e.right.q + h * int(e.right.k as i64 - k as i64));
            }
        }
        None
    }

    /// The edge of co-slope `h` in the extended polygon: a proper edge,
    /// else the vertex edge between neighbouring slopes, else the
    /// artificial vertex edge at `(0, q_l)`.
    pub fn edge_at_coslope(&self, h: &Rat) -> Result<Edge> {
        if *h <= Rat::zero() {
            return Err(Error::InvalidCoSlope(fmt_rat(h)));
        }
        for e in self.sloped_edges() {
            if e.coslope.as_ref() == Some(h) {
                return Ok(e.clone());
            }
        }
        // vertex shared by the last edge with smaller slope and the next one
        let mut v = Vertex { k: self.order, q: Rat::zero() };
        for e in self.sloped_edges() {
            if e.coslope.as_ref().expect("sloped") < h {
                v = e.left.clone();
            }
        }
        let dot = self
            .all_dots
            .iter()
            .find(|d| d.k == v.k && d.q == v.q)
            .cloned()
            .ok_or_else(|| Error::Internal("vertex without dot".into()))?;
        let kind = if v == self.last_vertex && v.k == 0 {
            EdgeKind::ArtificialVertex
        } else {
            EdgeKind::Vertex
        };
        Ok(Edge {
            kind,
            left: v.clone(),
            right: v,
            coslope: Some(h.clone()),
            assoc: assoc_of(std::slice::from_ref(&dot)),
            dots: vec![dot],
        })
    }
}
