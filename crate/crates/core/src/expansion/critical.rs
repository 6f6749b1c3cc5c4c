//! Critical points of `val_φ` read off the bars, and the bar/edge
//! correspondence along an arc.

use serde::Serialize;

use crate::algebra::rat::{int, serde_rat, Rat};
use crate::algebra::{roots_certified, roots_exact, Coeff, GcdDomain, Poly, Ring, ZeroStatus};
use crate::error::{Error, Result};
use crate::polygon::{polygon_of, Edge, XiPolynomial};
use crate::series::{contact_order_series, PuiseuxSeries};

use super::tree::{KuoLuTree, ValuePair};
use super::same_series;

#[derive(Clone, Debug, Serialize)]
pub struct CriticalPoint {
    pub gamma: PuiseuxSeries,
    pub multiplicity: u32,
    /// Bar the point sits on; `None` for a multiple root.
    pub bar: Option<usize>,
    /// `Σ m_i O(γ − ζ_i)`; `None` (infinite) at a multiple root.
    #[serde(with = "serde_rat::opt")]
    pub lojasiewicz: Option<Rat>,
    pub value: ValuePair,
}

/// Roots of `P_B'` that are not roots of `P_B`, with their multiplicity in
/// `P_B'`.
fn bar_critical_roots(p: &Poly<Coeff>, prec: u32) -> Result<Vec<(Coeff, u32)>> {
    let d = p.derivative();
    if let Some(pe) = p.to_exact() {
        let mut h = d.to_exact().expect("exact derivative");
        loop {
            let g = h.gcd(&pe);
            if g.deg() == 0 {
                break;
            }
            h = h.div_rem(&g).expect("nonzero divisor").0;
        }
        if h.deg() == 0 {
            return Ok(Vec::new());
        }
        return Ok(roots_exact(&h, prec)?.into_iter().map(|r| (r.value(), r.multiplicity)).collect());
    }
    let mut out = Vec::new();
    for r in roots_certified(&d, prec)? {
        let c = r.value();
        match p.eval(&c).zero_status() {
            ZeroStatus::NonZero => out.push((c, r.multiplicity)),
            ZeroStatus::Zero => {}
            ZeroStatus::Ambiguous => {
                return Err(Error::AmbiguousZero("P_B at a root of P_B'".into()));
            }
        }
    }
    Ok(out)
}

/// The `m − 1` critical points of `φ` in `M_1`, counted with multiplicity.
pub fn critical_points(tree: &KuoLuTree, prec: u32) -> Result<Vec<CriticalPoint>> {
    let mut out = Vec::new();
    for (id, bar) in tree.bars.iter().enumerate() {
        let crit = bar_critical_roots(&bar.assoc, prec)?;
        let total: u32 = crit.iter().map(|c| c.1).sum();
        if total as usize + 1 != bar.children.len() {
            return Err(Error::Internal(format!(
                "bar at height {} has {} children but {total} critical points",
                bar.height,
                bar.children.len()
            )));
        }
        for (c, mult) in crit {
            let gamma = bar.stem.add(&PuiseuxSeries::monomial(c.clone(), bar.height.clone()));
            let mut l = int(0);
            for b in &tree.branches {
                let o = contact_order_series(&gamma, &b.series)?
                    .ok_or_else(|| Error::Internal("critical point equals a root".into()))?;
                l += o * int(b.multiplicity as i64);
            }
            if l != bar.lojasiewicz {
                return Err(Error::Internal(format!("L mismatch on bar {id}: {l} vs {}", bar.lojasiewicz)));
            }
            out.push(CriticalPoint {
                gamma,
                multiplicity: mult,
                bar: Some(id),
                value: ValuePair { coeff: Some(bar.assoc.eval(&c)), height: Some(l.clone()) },
                lojasiewicz: Some(l),
            });
        }
    }
    for b in &tree.branches {
        if b.multiplicity > 1 {
            out.push(CriticalPoint {
                gamma: b.series.clone(),
                multiplicity: b.multiplicity - 1,
                bar: None,
                lojasiewicz: None,
                value: ValuePair::zero(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct BarEdgePair {
    pub bar: usize,
    /// Coefficient of the arc at `y^height`.
    pub coordinate: Coeff,
    pub edge: Edge,
    /// Whether `P_B(z) = P_E(z − a)` holds.
    pub matches: bool,
}

/// For each bar supporting `alpha`, the edge of the extended polygon
/// `NP(φ, alpha)` of the same co-slope, with the polynomial identity checked.
/// Bars at or beyond the truncation of `alpha` are skipped.
pub fn bar_edge_bijection(
    tree: &KuoLuTree,
    phi: &XiPolynomial,
    alpha: &PuiseuxSeries,
) -> Result<Vec<BarEdgePair>> {
    // Edges of co-slope below the truncation only see the stored terms.
    let poly = polygon_of(&phi.recenter(&alpha.as_exact()))?;
    let mut out = Vec::new();
    for (id, bar) in tree.bars.iter().enumerate() {
        if alpha.trunc().is_some_and(|t| &bar.height >= t) {
            continue;
        }
        if !same_series(&alpha.head_below(&bar.height), &bar.stem) {
            continue;
        }
        let a = alpha.coeff(&bar.height);
        let edge = poly.edge_at_coslope(&bar.height)?;
        let shifted = bar.assoc.taylor_shift(&a);
        let matches = shifted.deg() == edge.assoc.deg()
            && shifted.coeffs().iter().zip(edge.assoc.coeffs()).all(|(x, y)| x.approx_eq(y));
        out.push(BarEdgePair { bar: id, coordinate: a, edge, matches });
    }
    Ok(out)
}
