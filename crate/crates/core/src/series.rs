//! Truncated fractional power series in `y`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::rat::{fmt_rat, int, nth_root_bounds, pow2, Rat};
use crate::algebra::{roots_exact, CBall, Coeff, GaussRat, Poly, Ring, ZeroStatus};
use crate::error::{Error, Result};

/// `Σ a_e y^e` over finitely many rational exponents `e < trunc`.
///
/// `trunc = None` means the series is exact (no unknown tail). A finite
/// `trunc = T` means every coefficient at exponents `>= T` is unknown.
#[derive(Clone, PartialEq)]
pub struct Series<C> {
    terms: BTreeMap<Rat, C>,
    trunc: Option<Rat>,
}

pub type PuiseuxSeries = Series<Coeff>;

fn min_trunc(a: &Option<Rat>, b: &Option<Rat>) -> Option<Rat> {
    match (a, b) {
        (None, x) | (x, None) => x.clone(),
        (Some(x), Some(y)) => Some(x.min(y).clone()),
    }
}

fn below(e: &Rat, t: &Option<Rat>) -> bool {
    t.as_ref().is_none_or(|t| e < t)
}

impl<C: Ring> Series<C> {
    pub fn zero() -> Self {
        Series { terms: BTreeMap::new(), trunc: None }
    }

    /// The unknown series `O(y^t)`.
    pub fn unknown(t: Rat) -> Self {
        Series { terms: BTreeMap::new(), trunc: Some(t) }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, Rat::zero())
    }

    pub fn monomial(c: C, e: Rat) -> Self {
        Self::from_terms([(e, c)], None)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Rat, C)>, trunc: Option<Rat>) -> Self {
        let mut s = Series { terms: BTreeMap::new(), trunc };
        for (e, c) in it {
            s.add_term(e, c);
        }
        s
    }

    fn add_term(&mut self, e: Rat, c: C) {
        if !below(&e, &self.trunc) || c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let v = old.add(&c);
                if !v.is_zero() {
                    self.terms.insert(e, v);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn trunc(&self) -> Option<&Rat> {
        self.trunc.as_ref()
    }

    pub fn is_exact(&self) -> bool {
        self.trunc.is_none()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Rat, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, e: &Rat) -> C {
        self.terms.get(e).cloned().unwrap_or_else(C::zero)
    }

    /// Provably the zero series.
    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.trunc.is_none()
    }

    pub fn has_terms(&self) -> bool {
        !self.terms.is_empty()
    }

    /// Leading stored exponent; `None` when nothing is stored.
    pub fn order(&self) -> Option<Rat> {
        self.terms.keys().next().cloned()
    }

    /// A certain lower bound for the order: the leading exponent, or the
    /// truncation when nothing is stored (`None` = +infinity).
    pub fn order_lower_bound(&self) -> Option<Rat> {
        match self.terms.keys().next() {
            Some(e) => Some(e.clone()),
            None => self.trunc.clone(),
        }
    }

    pub fn leading(&self) -> Option<(&Rat, &C)> {
        self.terms.iter().next()
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a.mul(c))), self.trunc.clone())
    }

    /// Multiply by `y^s`.
    pub fn shift(&self, s: &Rat) -> Self {
        Series {
            terms: self.terms.iter().map(|(e, a)| (e + s, a.clone())).collect(),
            trunc: self.trunc.as_ref().map(|t| t + s),
        }
    }

    /// Keep only exponents `< t` and mark everything from `t` on unknown.
    pub fn truncate(&self, t: &Rat) -> Self {
        let trunc = min_trunc(&self.trunc, &Some(t.clone()));
        Self::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a.clone())), trunc)
    }

    /// Exact finite series made of the stored terms with exponent `< e`.
    pub fn head_below(&self, e: &Rat) -> Self {
        Self::from_terms(
            self.terms.range(..e.clone()).map(|(e, a)| (e.clone(), a.clone())),
            None,
        )
    }

    /// Exact finite series made of the stored terms with exponent `<= e`.
    pub fn head_upto(&self, e: &Rat) -> Self {
        Self::from_terms(
            self.terms.range(..=e.clone()).map(|(e, a)| (e.clone(), a.clone())),
            None,
        )
    }

    /// The same stored terms regarded as an exact series.
    pub fn as_exact(&self) -> Self {
        Series { terms: self.terms.clone(), trunc: None }
    }

    pub fn with_trunc(&self, t: Option<Rat>) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), a.clone())), t)
    }

    pub fn map<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series::from_terms(self.terms.iter().map(|(e, a)| (e.clone(), f(a))), self.trunc.clone())
    }

    /// Reduced common denominator of the stored exponents.
    pub fn denom(&self) -> BigInt {
        self.terms.keys().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()))
    }

    /// `(n_i, a_i)` with `e_i = n_i / denom`.
    pub fn numerators(&self) -> Vec<(BigInt, C)> {
        let n = Rat::from_integer(self.denom());
        self.terms.iter().map(|(e, a)| ((e * &n).to_integer(), a.clone())).collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(C::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

impl<C: Ring> Ring for Series<C> {
    fn zero() -> Self {
        Series::zero()
    }
    fn one() -> Self {
        Series::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn add(&self, o: &Self) -> Self {
        let mut r = Series { terms: BTreeMap::new(), trunc: min_trunc(&self.trunc, &o.trunc) };
        for (e, c) in self.terms.iter().chain(o.terms.iter()) {
            r.add_term(e.clone(), c.clone());
        }
        r
    }
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn mul(&self, o: &Self) -> Self {
        if self.is_exact_zero() || o.is_exact_zero() {
            return Self::zero();
        }
        let ta = self.trunc.as_ref().map(|t| t + o.order_lower_bound().expect("nonzero"));
        let tb = o.trunc.as_ref().map(|t| t + self.order_lower_bound().expect("nonzero"));
        let mut r = Series { terms: BTreeMap::new(), trunc: min_trunc(&ta, &tb) };
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e = e1 + e2;
                if below(&e, &r.trunc) {
                    r.add_term(e, c1.mul(c2));
                }
            }
        }
        r
    }
    fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }
    fn from_int(n: i64) -> Self {
        Series::constant(C::from_int(n))
    }
}

/// Certified `exp(2 pi i j / n)`, exact when `n` divides 4.
pub fn root_of_unity(j: i64, n: u32, prec: u32) -> Coeff {
    let j = j.rem_euclid(n as i64);
    if 4 % n == 0 {
        return Coeff::Exact(GaussRat::i_pow(j * (4 / n as i64)));
    }
    let f = Poly::new(
        (0..=n)
            .map(|k| match k {
                0 => GaussRat::int(-1),
                k if k == n => GaussRat::one(),
                _ => GaussRat::zero(),
            })
            .collect(),
    );
    let roots = roots_exact(&f, prec).expect("z^n - 1 is squarefree");
    let target = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
    let angle_err = |b: &CBall| {
        let (re, im) = b.to_f64();
        let a = im.atan2(re).rem_euclid(2.0 * std::f64::consts::PI);
        let d = (a - target).abs();
        d.min(2.0 * std::f64::consts::PI - d)
    };
    let best = roots
        .iter()
        .min_by(|a, b| angle_err(&a.ball).total_cmp(&angle_err(&b.ball)))
        .expect("n >= 1 roots");
    best.value()
}

impl Series<Coeff> {
    pub fn exact_terms(terms: &[(Rat, GaussRat)], trunc: Option<Rat>) -> Self {
        Self::from_terms(terms.iter().map(|(e, c)| (e.clone(), Coeff::Exact(c.clone()))), trunc)
    }

    /// Puiseux multiplicity: the reduced common denominator.
    pub fn puiseux_multiplicity(&self) -> u64 {
        self.denom().to_u64().expect("denominator fits in u64")
    }

    pub fn all_exact(&self) -> bool {
        self.terms.values().all(|c| c.is_exact())
    }

    /// Coefficient `a_e θ^(k n)` with `θ = exp(2 pi i / N)` and `e = n / N`.
    pub fn conjugate(&self, k: i64, prec: u32) -> Self {
        let n = self.denom();
        let nn = n.to_u32().expect("small denominator");
        let nr = Rat::from_integer(n);
        Series::from_terms(
            self.terms.iter().map(|(e, a)| {
                let num = (e * &nr).to_integer().to_i64().expect("small exponent");
                (e.clone(), a.mul(&root_of_unity(k * num, nn, prec)))
            }),
            self.trunc.clone(),
        )
    }

    /// All `N` conjugates, `k = 0..N`.
    pub fn conjugates(&self, prec: u32) -> Vec<Self> {
        (0..self.puiseux_multiplicity() as i64).map(|k| self.conjugate(k, prec)).collect()
    }

    /// Enclosure of `Σ 2^(-e) |a| / (1 + |a|)` over the stored terms.
    pub fn metric_norm(&self) -> CBall {
        const P: u32 = 64;
        let (mut lo, mut hi) = (Rat::zero(), Rat::zero());
        for (e, a) in &self.terms {
            let b = a.to_ball(crate::algebra::DEFAULT_PRECISION);
            let (alo, ahi) = (b.abs_lower(), b.abs_upper());
            // t / (1 + t) is increasing
            let flo = &alo / (Rat::one() + &alo);
            let fhi = &ahi / (Rat::one() + &ahi);
            let (wlo, whi) = pow2_neg_rat(e, P);
            lo += wlo * flo;
            hi += whi * fhi;
        }
        let mid = (&lo + &hi) / int(2);
        let rad = (&hi - &lo) / int(2);
        CBall::from_parts(mid, Rat::zero(), rad, P)
    }

    /// Classical Puiseux characteristic exponents.
    pub fn puiseux_pairs(&self) -> Vec<Rat> {
        let mut d = BigInt::one();
        let mut out = Vec::new();
        for e in self.terms.keys() {
            let q = e.denom();
            if !(&d % q).is_zero() {
                out.push(e.clone());
                d = d.lcm(q);
            }
        }
        out
    }

    /// Leading coefficient status, for callers deciding orders.
    pub fn leading_status(&self) -> Option<ZeroStatus> {
        self.terms.values().next().map(|c| c.zero_status())
    }

    /// Order of `self`, failing when the stored part cannot certify it.
    ///
    /// `Ok(None)` is +infinity (provably zero).
    pub fn certified_order(&self) -> Result<Option<Rat>> {
        for (e, c) in &self.terms {
            match c.zero_status() {
                ZeroStatus::NonZero => return Ok(Some(e.clone())),
                ZeroStatus::Zero => continue,
                ZeroStatus::Ambiguous => {
                    return Err(Error::AmbiguousZero(format!("coefficient of y^{}", fmt_rat(e))))
                }
            }
        }
        match &self.trunc {
            None => Ok(None),
            Some(_) => Err(Error::TruncationTooShort),
        }
    }

    pub fn to_json(&self) -> SeriesJson {
        let n = self.denom();
        SeriesJson {
            denom: n.to_string(),
            terms: self
                .numerators()
                .into_iter()
                .map(|(num, c)| (num.to_string(), c))
                .collect(),
            trunc: self.trunc.clone(),
        }
    }
}

/// Enclosure of `2^(-e)` for rational `e`.
fn pow2_neg_rat(e: &Rat, prec: u32) -> (Rat, Rat) {
    let num = e.numer().to_i64().expect("small exponent");
    let den = e.denom().to_u32().expect("small exponent");
    let base = pow2(-num);
    nth_root_bounds(&base, den, prec)
}

/// Series-level contact order `O(α − β)`; `None` is +infinity.
pub fn contact_order_series(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Result<Option<Rat>> {
    if a == b {
        return Ok(None);
    }
    a.sub(b).certified_order()
}

/// Curve-level contact order: the maximum of `O(α − β_conj)` over the
/// conjugates of `β`.
pub fn contact_order_curve(a: &PuiseuxSeries, b: &PuiseuxSeries, prec: u32) -> Result<Option<Rat>> {
    let mut best: Option<Rat> = None;
    let mut err = None;
    for bc in b.conjugates(prec) {
        match contact_order_series(a, &bc) {
            Ok(None) => return Ok(None),
            Ok(Some(o)) => {
                if best.as_ref().is_none_or(|x| &o > x) {
                    best = Some(o);
                }
            }
            Err(e) => err = Some(e),
        }
    }
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct SeriesJson {
    pub denom: String,
    pub terms: Vec<(String, Coeff)>,
    #[serde(with = "crate::algebra::rat::serde_rat::opt")]
    pub trunc: Option<Rat>,
}

impl SeriesJson {
    pub fn to_series(&self) -> Option<PuiseuxSeries> {
        let n: BigInt = self.denom.parse().ok()?;
        let mut terms = Vec::new();
        for (num, c) in &self.terms {
            let k: BigInt = num.parse().ok()?;
            terms.push((Rat::new(k, n.clone()), c.clone()));
        }
        Some(Series::from_terms(terms, self.trunc.clone()))
    }
}

fn fmt_exp(e: &Rat) -> String {
    if e.is_integer() {
        if e.is_one() {
            "y".into()
        } else {
            format!("y^{}", e.numer())
        }
    } else {
        format!("y^({})", fmt_rat(e))
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in &self.terms {
            let cs = c.to_string();
            let term = if e.is_zero() {
                cs
            } else if c.is_one() {
                fmt_exp(e)
            } else if c.neg().is_one() {
                format!("-{}", fmt_exp(e))
            } else {
                format!("{cs}*{}", fmt_exp(e))
            };
            parts.push(term);
        }
        if let Some(t) = &self.trunc {
            parts.push(format!("O({})", fmt_exp(t)));
        }
        if parts.is_empty() {
            return write!(f, "0");
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
        write!(f, "{out}")
    }
}

impl<C: Ring> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> =
            self.terms.iter().map(|(e, c)| format!("{:?}*y^{}", c, fmt_rat(e))).collect();
        match &self.trunc {
            Some(t) => write!(f, "Series[{} + O(y^{})]", terms.join(" + "), fmt_rat(t)),
            None => write!(f, "Series[{}]", terms.join(" + ")),
        }
    }
}

/// Convenience: exact series from `(p, q, coeff)` triples meaning `c y^(p/q)`.
pub fn series_from(terms: &[(i64, i64, i64)]) -> PuiseuxSeries {
    Series::from_terms(
        terms.iter().map(|&(p, q, c)| (crate::algebra::rat::rat(p, q), Coeff::from_int(c))),
        None,
    )
}

impl Serialize for Series<Coeff> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}
