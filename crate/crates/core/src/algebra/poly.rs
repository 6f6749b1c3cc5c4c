use std::cmp::Ordering;
use std::fmt;

use super::coeff::Coeff;
use super::gauss::GaussRat;
use super::{Domain, Field, GcdDomain, Ring};
use crate::error::{Error, Result};

/// Dense univariate polynomial, little-endian, never storing trailing zeros.
#[derive(Clone, PartialEq)]
pub struct Poly<R> {
    coeffs: Vec<R>,
}

/// Polynomials in the deformation parameter `t`.
pub type TPoly = Poly<GaussRat>;

/// Total order used for deterministic sorting of factors and roots.
pub trait Lex {
    fn lex_cmp(&self, other: &Self) -> Ordering;
}

impl Lex for GaussRat {
    fn lex_cmp(&self, other: &Self) -> Ordering {
        GaussRat::lex_cmp(self, other)
    }
}

impl Lex for Coeff {
    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.sort_cmp(other)
    }
}

impl<R: Lex> Lex for Poly<R> {
    fn lex_cmp(&self, other: &Self) -> Ordering {
        self.coeffs.len().cmp(&other.coeffs.len()).then_with(|| {
            for (a, b) in self.coeffs.iter().rev().zip(other.coeffs.iter().rev()) {
                let c = a.lex_cmp(b);
                if c != Ordering::Equal {
                    return c;
                }
            }
            Ordering::Equal
        })
    }
}

impl<R: Ring> Poly<R> {
    pub fn new(mut coeffs: Vec<R>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: R) -> Self {
        Self::new(vec![c])
    }

    pub fn monomial(c: R, k: usize) -> Self {
        let mut v = vec![R::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// The polynomial `z`.
    pub fn var() -> Self {
        Self::monomial(R::one(), 1)
    }

    /// `z - a`.
    pub fn linear_root(a: &R) -> Self {
        Self::new(vec![a.neg(), R::one()])
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<R> {
        self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn coeff(&self, i: usize) -> R {
        self.coeffs.get(i).cloned().unwrap_or_else(R::zero)
    }

    pub fn lead(&self) -> R {
        self.coeffs.last().cloned().unwrap_or_else(R::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Lowest index with a nonzero coefficient.
    pub fn low_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Poly<S> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn scale(&self, c: &R) -> Self {
        Self::new(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn eval(&self, z: &R) -> R {
        let mut acc = R::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&R::from_int(i as i64)))
                .collect(),
        )
    }

    /// `p(z + a)`.
    pub fn taylor_shift(&self, a: &R) -> Self {
        let lin = Self::new(vec![a.clone(), R::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `p(q(z))`.
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// Multiply by `z^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![R::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Self::new(v)
    }

    pub fn fmt_var(&self, var: &str) -> String
    where
        R: fmt::Display,
    {
        if self.coeffs.is_empty() {
            return "0".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let cs = c.to_string();
            let term = if mono.is_empty() {
                cs
            } else if c.is_one() {
                mono
            } else if c.neg().is_one() {
                format!("-{mono}")
            } else {
                format!("{cs}*{mono}")
            };
            parts.push(term);
        }
        let mut out = String::new();
        for (i, p) in parts.iter().enumerate() {
            if i == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }
}

impl<R: Ring> Ring for Poly<R> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }
    fn one() -> Self {
        Self::constant(R::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }
    fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![R::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].add(&a.mul(b));
            }
        }
        Self::new(v)
    }
    fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }
    fn from_int(n: i64) -> Self {
        Self::constant(R::from_int(n))
    }
}

impl<F: Field> Poly<F> {
    /// Euclidean division; `None` for a zero divisor or non-invertible lead.
    pub fn div_rem(&self, d: &Self) -> Option<(Self, Self)> {
        let dl = d.lead().inv()?;
        let dd = d.degree()?;
        let mut r = self.clone();
        let mut q = vec![F::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead().mul(&dl);
            q[rd - dd] = c.clone();
            let sub = d.scale(&c).shift_up(rd - dd);
            let mut nr = r.sub(&sub);
            // force exact cancellation of the leading term
            if nr.coeffs.len() > rd {
                nr.coeffs.truncate(rd);
                nr = Self::new(nr.coeffs);
            }
            r = nr;
        }
        Some((Self::new(q), r))
    }

    pub fn monic(&self) -> Self {
        match self.lead().inv() {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }
}

impl<D: Domain> Poly<D> {
    /// Exact division, assuming the divisor divides `self`.
    pub fn div_exact_poly(&self, d: &Self) -> Self {
        let dd = d.degree().expect("division by zero polynomial");
        let dl = d.lead();
        let mut r = self.clone();
        let mut q = vec![D::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead().div_exact(&dl);
            q[rd - dd] = c.clone();
            let mut nr = r.sub(&d.scale(&c).shift_up(rd - dd));
            if nr.coeffs.len() > rd {
                nr.coeffs.truncate(rd);
                nr = Self::new(nr.coeffs);
            }
            r = nr;
        }
        debug_assert!(r.is_zero(), "inexact polynomial division");
        Self::new(q)
    }

    /// Pseudo-remainder `lead(d)^(deg a - deg d + 1) * a mod d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.degree().expect("pseudo-division by zero");
        let dl = d.lead();
        let mut r = self.clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let c = r.lead();
            let mut nr = r.scale(&dl).sub(&d.scale(&c).shift_up(rd - dd));
            if nr.coeffs.len() > rd {
                nr.coeffs.truncate(rd);
                nr = Self::new(nr.coeffs);
            }
            r = nr;
        }
        r
    }

    /// Resultant with respect to the polynomial variable, as the determinant
    /// of the Sylvester matrix (fraction-free elimination).
    pub fn resultant(&self, o: &Self) -> Result<D> {
        let (m, n) = match (self.degree(), o.degree()) {
            (Some(m), Some(n)) if m + n > 0 => (m, n),
            (None, _) | (_, None) => return Err(Error::ZeroInput),
            _ => return Err(Error::InvalidInput("resultant: both operands are constant".into())),
        };
        let size = m + n;
        let mut mat = vec![vec![D::zero(); size]; size];
        for i in 0..n {
            for (j, c) in self.coeffs.iter().rev().enumerate() {
                mat[i][i + j] = c.clone();
            }
        }
        for i in 0..m {
            for (j, c) in o.coeffs.iter().rev().enumerate() {
                mat[n + i][i + j] = c.clone();
            }
        }
        Ok(bareiss_det(mat))
    }
}

/// Fraction-free Gaussian elimination determinant.
pub fn bareiss_det<D: Domain>(mut a: Vec<Vec<D>>) -> D {
    let n = a.len();
    if n == 0 {
        return D::one();
    }
    let mut sign = false;
    let mut prev = D::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = !sign;
                }
                None => return D::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

impl<D: GcdDomain> Poly<D> {
    pub fn content(&self) -> D {
        self.coeffs.iter().fold(D::zero(), |g, c| g.gcd(c))
    }

    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let c = self.content();
        Self::new(self.coeffs.iter().map(|a| a.div_exact(&c)).collect())
    }

    /// Squarefree decomposition (Yun) over the fraction field of `D`:
    /// returns normalized pairwise coprime squarefree factors with
    /// multiplicities, ordered by degree and then lexicographically.
    pub fn squarefree(&self) -> Result<Vec<(Self, u32)>>
    where
        D: Lex,
    {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let mut f = self.primitive_part().normalize().0;
        let mut out = Vec::new();
        // the power of z is split off as its own factor
        let low = f.low_degree().unwrap_or(0);
        if low > 0 {
            out.push((Self::var(), low as u32));
            f = Self::new(f.coeffs[low..].to_vec());
        }
        if f.is_constant() {
            return Ok(out);
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact_poly(&a0);
        let mut c = df.div_exact_poly(&a0);
        let mut d = c.sub(&b.derivative());
        let mut i = 1u32;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.normalize().0, i));
            }
            b = b.div_exact_poly(&a);
            c = d.div_exact_poly(&a);
            d = c.sub(&b.derivative());
            i += 1;
        }
        out.sort_by(|x, y| {
            x.0.deg()
                .cmp(&y.0.deg())
                .then_with(|| ascending_cmp(&x.0, &y.0))
                .then_with(|| x.1.cmp(&y.1))
        });
        Ok(out)
    }

    /// Squarefree part, normalized.
    pub fn squarefree_part(&self) -> Self {
        let f = self.primitive_part();
        let g = f.gcd(&f.derivative());
        f.div_exact_poly(&g).normalize().0
    }
}

/// Coefficient-wise comparison starting from the constant term.
fn ascending_cmp<R: Ring + Lex>(a: &Poly<R>, b: &Poly<R>) -> Ordering {
    for (x, y) in a.coeffs.iter().zip(b.coeffs.iter()) {
        let c = match (x.is_zero(), y.is_zero()) {
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => x.lex_cmp(y),
        };
        if c != Ordering::Equal {
            return c;
        }
    }
    a.coeffs.len().cmp(&b.coeffs.len())
}

impl<D: Domain> Domain for Poly<D> {
    fn div_exact(&self, o: &Self) -> Self {
        self.div_exact_poly(o)
    }
}

impl<D: GcdDomain> GcdDomain for Poly<D> {
    fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.normalize().0;
        }
        if o.is_zero() {
            return self.normalize().0;
        }
        let cont = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.primitive_part().normalize().0 };
        }
        let g = a.normalize().0;
        g.scale(&cont).normalize().0
    }

    fn normalize(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Self::zero(), Self::one());
        }
        let (_, u) = self.lead().normalize();
        let n = Self::new(self.coeffs.iter().map(|c| c.div_exact(&u)).collect());
        (n, Self::constant(u))
    }
}

impl<R: serde::Serialize> serde::Serialize for Poly<R> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<R: Ring + fmt::Display> fmt::Display for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_var("z"))
    }
}

impl<R: Ring + fmt::Debug> fmt::Debug for Poly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly<Poly<GaussRat>> {
    /// Renders a polynomial in `z` with coefficients in `t`.
    pub fn fmt_zt(&self) -> String {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({})*z^{k}", c.fmt_var("t")))
            .collect();
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }
}

impl Poly<GaussRat> {
    pub fn to_coeff(&self) -> Poly<Coeff> {
        self.map(|c| Coeff::Exact(c.clone()))
    }
}

impl Poly<Coeff> {
    /// The exact polynomial if every coefficient is exact.
    pub fn to_exact(&self) -> Option<Poly<GaussRat>> {
        let mut v = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            v.push(c.as_exact()?.clone());
        }
        Some(Poly::new(v))
    }
}
