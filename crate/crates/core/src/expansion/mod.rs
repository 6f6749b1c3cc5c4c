//! Newton-Puiseux expansion of the roots of `φ(ξ, y)` in `M_1`.

mod bound;
pub mod critical;
pub mod tree;

use std::cmp::Ordering;

use serde::Serialize;

use crate::algebra::rat::{serde_rat, Rat};
use crate::algebra::{roots_certified, Poly, Ring, MAX_PRECISION};
use crate::error::{Error, Result};
use crate::polygon::{polygon_of, XiPolynomial};
use crate::series::{contact_order_series, PuiseuxSeries};

pub use bound::separation_bound;
pub use critical::{bar_edge_bijection, critical_points, BarEdgePair, CriticalPoint};
pub use tree::{build_tree, truncate_at, valuation, Bar, KuoLuTree, TreeNode, ValuePair};

/// Terms kept after a cluster has separated.
pub const EXTRA_STEPS: u32 = 4;
/// Hard cap on the number of terms of one branch.
const MAX_TERMS: usize = 256;

#[derive(Clone, Debug, PartialEq)]
pub enum Depth {
    /// Expand until every cluster separates, then `EXTRA_STEPS` more terms.
    Auto,
    /// Keep every term of exponent `<= d`.
    Exponent(Rat),
}

#[derive(Clone, Debug, Serialize)]
pub struct RootBranch {
    pub series: PuiseuxSeries,
    pub multiplicity: u32,
    /// Largest contact order with any other root; `None` when this is the
    /// only root.
    #[serde(with = "serde_rat::opt")]
    pub separation_depth: Option<Rat>,
}

struct Expander<'a> {
    phi: &'a XiPolynomial,
    depth: Depth,
    bound: Option<Rat>,
    prec: u32,
    out: Vec<RootBranch>,
}

fn branch(series: PuiseuxSeries, multiplicity: u32) -> RootBranch {
    RootBranch { series, multiplicity, separation_depth: None }
}

impl Expander<'_> {
    fn node(&mut self, zeta: PuiseuxSeries, mu: u32, extra: Option<u32>) -> Result<()> {
        if zeta.num_terms() > MAX_TERMS {
            return Err(Error::TruncationExhausted(format!("no separation within {MAX_TERMS} terms")));
        }
        let poly = polygon_of(&self.phi.recenter(&zeta))?;
        let ml = poly.root_multiplicity();
        if ml > 0 {
            self.out.push(branch(zeta.clone(), ml));
        }
        if ml >= mu {
            return Ok(());
        }
        let edges: Vec<_> = poly.sloped_edges().iter().filter(|e| e.right.k <= mu).cloned().collect();
        if extra == Some(EXTRA_STEPS) {
            let h = edges[0].coslope.clone();
            self.out.push(branch(zeta.with_trunc(h), mu - ml));
            return Ok(());
        }
        let mut cut: Option<(Rat, u32)> = None;
        for e in &edges {
            let h = e.coslope.clone().expect("sloped edge");
            if let Depth::Exponent(d) = &self.depth {
                if &h > d {
                    let len = e.right.k - e.left.k;
                    cut = Some(match cut {
                        None => (h, len),
                        Some((h0, l0)) => (h0.min(h), l0 + len),
                    });
                    continue;
                }
            }
            let reduced = Poly::new(e.assoc.coeffs()[e.left.k as usize..].to_vec());
            for r in roots_certified(&reduced, self.prec)? {
                let c = r.value();
                let settled = extra.is_some()
                    || r.multiplicity == 1
                    || self.bound.as_ref().is_some_and(|b| &h > b);
                let next_extra = match extra {
                    Some(x) => Some(x + 1),
                    None if settled && self.depth == Depth::Auto => Some(0),
                    None => None,
                };
                let next = zeta.add(&PuiseuxSeries::monomial(c, h.clone()));
                self.node(next, r.multiplicity, next_extra)?;
            }
        }
        if let Some((h, len)) = cut {
            self.out.push(branch(zeta.with_trunc(Some(h)), len));
        }
        Ok(())
    }
}

/// Lexicographic order on `(exponent, coefficient)` sequences.
pub fn series_cmp(a: &PuiseuxSeries, b: &PuiseuxSeries) -> Ordering {
    let mut ia = a.terms();
    let mut ib = b.terms();
    loop {
        match (ia.next(), ib.next()) {
            (None, None) => return a.trunc().cmp(&b.trunc()),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((ea, ca)), Some((eb, cb))) => {
                // a term at a smaller exponent sorts the series later, so that
                // `0` precedes `y`
                let o = eb.cmp(ea).then_with(|| ca.sort_cmp(cb));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
    }
}

fn expand_at(phi: &XiPolynomial, depth: &Depth, prec: u32) -> Result<Vec<RootBranch>> {
    let bound = match depth {
        Depth::Auto => Some(separation_bound(phi).ok_or_else(|| {
            Error::InvalidInput("automatic depth needs an exact input; pass an explicit depth".into())
        })?),
        Depth::Exponent(_) => None,
    };
    let m = phi.mini_regular_order()? as u32;
    let mut ex = Expander { phi, depth: depth.clone(), bound, prec, out: Vec::new() };
    ex.node(PuiseuxSeries::zero(), m, None)?;
    let mut out = ex.out;
    out.sort_by(|a, b| series_cmp(&a.series, &b.series));
    let total: u32 = out.iter().map(|b| b.multiplicity).sum();
    if total != m {
        return Err(Error::Internal(format!("found {total} roots, expected {m}")));
    }
    for i in 0..out.len() {
        let mut best: Option<Rat> = None;
        for j in 0..out.len() {
            if i == j {
                continue;
            }
            if let Some(o) = contact_order_series(&out[i].series, &out[j].series)? {
                best = Some(best.map_or(o.clone(), |b: Rat| b.max(o)));
            }
        }
        out[i].separation_depth = best;
    }
    Ok(out)
}

/// All `m` roots of a mini-regular `φ` in `M_1`, sorted deterministically.
///
/// Ambiguous numerics are retried at doubled precision.
pub fn expand_roots(phi: &XiPolynomial, depth: &Depth, prec: u32) -> Result<Vec<RootBranch>> {
    let mut p = prec;
    loop {
        match expand_at(phi, depth, p) {
            Err(e) if e.is_inconclusive() && p < MAX_PRECISION => p = (2 * p).min(MAX_PRECISION),
            r => return r,
        }
    }
}

/// Classes of branches that are conjugate to one another.
pub fn conjugate_classes(branches: &[RootBranch], prec: u32) -> Vec<Vec<usize>> {
    let mut seen = vec![false; branches.len()];
    let mut out = Vec::new();
    for i in 0..branches.len() {
        if seen[i] {
            continue;
        }
        let conj = branches[i].series.conjugates(prec);
        let mut class = vec![i];
        seen[i] = true;
        for j in i + 1..branches.len() {
            if !seen[j]
                && branches[j].multiplicity == branches[i].multiplicity
                && conj.iter().any(|c| same_series(c, &branches[j].series))
            {
                seen[j] = true;
                class.push(j);
            }
        }
        out.push(class);
    }
    out
}

/// Equal exponents, overlapping coefficients and equal truncation.
pub fn same_series(a: &PuiseuxSeries, b: &PuiseuxSeries) -> bool {
    a.trunc() == b.trunc()
        && a.num_terms() == b.num_terms()
        && a.terms().zip(b.terms()).all(|((ea, ca), (eb, cb))| ea == eb && ca.approx_eq(cb))
}
