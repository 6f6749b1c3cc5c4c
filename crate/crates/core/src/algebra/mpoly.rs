use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;
use super::poly::Poly;
use super::Ring;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    T,
}

impl Var {
    fn idx(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::T => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
        }
    }
}

/// Exponent vector `[x, y, t]`.
pub type Mono = [u32; 3];

/// Sparse polynomial in `x, y, t` over Q(i).
#[derive(Clone, PartialEq, Default)]
pub struct MPoly {
    terms: BTreeMap<Mono, GaussRat>,
}

impl MPoly {
    pub fn from_terms(it: impl IntoIterator<Item = (Mono, GaussRat)>) -> Self {
        let mut p = MPoly::default();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn constant(c: GaussRat) -> Self {
        Self::from_terms([([0, 0, 0], c)])
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; 3];
        m[v.idx()] = 1;
        Self::from_terms([(m, GaussRat::one())])
    }

    pub fn monomial(c: GaussRat, m: Mono) -> Self {
        Self::from_terms([(m, c)])
    }

    pub fn add_term(&mut self, m: Mono, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(m).or_insert_with(GaussRat::zero);
        *e = e.add(&c);
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &GaussRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> GaussRat {
        self.terms.get(m).cloned().unwrap_or_else(GaussRat::zero)
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m[v.idx()]).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.iter().sum()).max().unwrap_or(0)
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m[v.idx()] > 0)
    }

    /// Coefficient of `x^k` as a polynomial in `(y, t)`.
    pub fn coeff_x(&self, k: u32) -> MPoly {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m[0] == k)
                .map(|(m, c)| ([0, m[1], m[2]], c.clone())),
        )
    }

    /// Substitute a constant for `v`.
    pub fn eval_var(&self, v: Var, val: &GaussRat) -> MPoly {
        let mut out = MPoly::default();
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm[v.idx()];
            mm[v.idx()] = 0;
            out.add_term(mm, c.mul(&val.pow(e)));
        }
        out
    }

    /// Substitute a polynomial for `v`.
    pub fn subs(&self, v: Var, q: &MPoly) -> MPoly {
        let mut out = MPoly::default();
        let mut cache: Vec<MPoly> = vec![MPoly::one()];
        for (m, c) in &self.terms {
            let e = m[v.idx()] as usize;
            while cache.len() <= e {
                let next = cache.last().unwrap().mul(q);
                cache.push(next);
            }
            let mut mm = *m;
            mm[v.idx()] = 0;
            out = out.add(&cache[e].mul(&MPoly::monomial(c.clone(), mm)));
        }
        out
    }

    /// Univariate view in `v`, valid when no other variable occurs.
    pub fn to_univariate(&self, v: Var) -> Option<Poly<GaussRat>> {
        let mut coeffs = vec![GaussRat::zero(); self.degree_in(v) as usize + 1];
        for (m, c) in &self.terms {
            if (0..3).any(|i| i != v.idx() && m[i] != 0) {
                return None;
            }
            coeffs[m[v.idx()] as usize] = c.clone();
        }
        Some(Poly::new(coeffs))
    }

    /// Homogeneous part of total degree `d` in `(x, y)` (terms free of `t`).
    pub fn xy_homogeneous_part(&self, d: u32) -> MPoly {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m[2] == 0 && m[0] + m[1] == d)
                .map(|(m, c)| (*m, c.clone())),
        )
    }

    /// Lowest total `(x, y)` degree among the `t`-free terms.
    pub fn xy_order(&self) -> Option<u32> {
        self.terms.keys().filter(|m| m[2] == 0).map(|m| m[0] + m[1]).min()
    }
}

impl Ring for MPoly {
    fn zero() -> Self {
        MPoly::default()
    }
    fn one() -> Self {
        MPoly::constant(GaussRat::one())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.clone());
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(*m, c.neg());
        }
        r
    }
    fn mul(&self, o: &Self) -> Self {
        let mut r = MPoly::default();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                r.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2]], ca.mul(cb));
            }
        }
        r
    }
    fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }
    fn from_int(n: i64) -> Self {
        MPoly::constant(GaussRat::int(n))
    }
}

fn mono_str(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (v, e) in [Var::X, Var::Y, Var::T].iter().zip(m.iter()) {
        match e {
            0 => {}
            1 => parts.push(v.name().to_string()),
            _ => parts.push(format!("{}^{e}", v.name())),
        }
    }
    parts.join("*")
}

/// Renders in the grammar accepted by the command-line parser, highest total
/// degree first.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut monos: Vec<&Mono> = self.terms.keys().collect();
        monos.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (i, m) in monos.into_iter().enumerate() {
            let c = &self.terms[m];
            let ms = mono_str(m);
            let term = if ms.is_empty() {
                c.to_string()
            } else if c.is_one() {
                ms
            } else if c.neg().is_one() {
                format!("-{ms}")
            } else {
                format!("{c}*{ms}")
            };
            if i == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        write!(f, "{out}")
    }
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> MPoly {
        MPoly::var(Var::X)
    }
    fn y() -> MPoly {
        MPoly::var(Var::Y)
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = x().add(&y()).sub(&x());
        assert_eq!(p, y());
        assert!(x().sub(&x()).is_zero());
    }

    #[test]
    fn render() {
        let p = x().pow(2).sub(&y().pow(3));
        assert_eq!(p.to_string(), "-y^3 + x^2");
        let q = x().mul(&MPoly::constant(GaussRat::i())).add(&MPoly::from_int(-2));
        assert_eq!(q.to_string(), "i*x - 2");
    }

    #[test]
    fn substitution() {
        // (x + y)^2 at y -> y + x
        let p = x().add(&y()).pow(2);
        let q = p.subs(Var::Y, &y().add(&x()));
        assert_eq!(q, MPoly::from_int(2).mul(&x()).add(&y()).pow(2));
    }
}
