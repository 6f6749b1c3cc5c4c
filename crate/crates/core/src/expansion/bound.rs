//! A priori bound on the contact order between distinct roots.

use num_traits::{ToPrimitive, Zero};

use crate::algebra::rat::{int, lcm_denoms, Rat};
use crate::algebra::{GaussRat, Poly, Ring, TPoly};
use crate::polygon::XiPolynomial;

/// Rewrite `φ` over `Q(i)[s]` with `y = s^N`; `None` if a coefficient is
/// not exact or a coefficient series is truncated.
pub(crate) fn to_s_poly(phi: &XiPolynomial) -> Option<(Poly<TPoly>, i64)> {
    let exps: Vec<Rat> = phi.coeffs().iter().flat_map(|a| a.terms().map(|(e, _)| e.clone())).collect();
    let n = lcm_denoms(exps.iter()).to_i64()?;
    let mut out = Vec::new();
    for a in phi.coeffs() {
        if !a.is_exact() {
            return None;
        }
        let mut v: Vec<GaussRat> = Vec::new();
        for (e, c) in a.terms() {
            let d = (e * int(n)).to_integer().to_usize()?;
            if v.len() <= d {
                v.resize(d + 1, GaussRat::zero());
            }
            v[d] = c.as_exact()?.clone();
        }
        out.push(Poly::new(v));
    }
    Some((Poly::new(out), n))
}

/// Orders of all roots (finite ones, counted with multiplicity) of a
/// polynomial whose constant term is nonzero, read off its full lower hull.
fn root_orders(g: &Poly<TPoly>) -> Vec<Rat> {
    let pts: Vec<(i64, i64)> = g
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.low_degree().map(|q| (k as i64, q as i64)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            if (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0) <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::new();
    for w in hull.windows(2) {
        let (l, r) = (w[0], w[1]);
        let h = Rat::new((l.1 - r.1).into(), (r.0 - l.0).into());
        out.extend(std::iter::repeat_n(h, (r.0 - l.0) as usize));
    }
    out
}

/// Upper bound on `O(ζ_i − ζ_j)` over pairs of distinct roots of `φ`.
///
/// With `S = Σ_{i<j} O(ζ_i − ζ_j)` read from the discriminant and each term
/// bounded below by `min(o_i, o_j)`, a single pair can exceed its lower
/// bound by at most `S − Σ min(o_i, o_j)`.
pub fn separation_bound(phi: &XiPolynomial) -> Option<Rat> {
    let (g, n) = to_s_poly(phi)?;
    let low = g.low_degree()?;
    let g = Poly::new(g.coeffs()[low..].to_vec());
    let g = g.squarefree_part();
    let deg = g.deg();
    if deg <= 1 {
        return Some(Rat::zero());
    }
    let lead_ord = int(g.lead().low_degree()? as i64);
    let res = g.resultant(&g.derivative()).ok()?;
    let res_ord = int(res.low_degree()? as i64);
    let s = (res_ord - int(2 * deg as i64 - 1) * lead_ord) / int(2);
    let orders = root_orders(&g);
    let mut t = Rat::zero();
    for i in 0..orders.len() {
        for j in i + 1..orders.len() {
            t += orders[i].clone().min(orders[j].clone());
        }
    }
    let top = orders.iter().max()?.clone();
    Some((s - t + top) / int(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{MPoly, Var};

    fn xi(f: &MPoly) -> XiPolynomial {
        XiPolynomial::from_mpoly(f).unwrap()
    }

    #[test]
    fn bound_dominates_true_contacts() {
        let (x, y) = (MPoly::var(Var::X), MPoly::var(Var::Y));
        // roots y, y + y^3: contact 3
        let f = x.sub(&y).mul(&x.sub(&y).sub(&y.pow(3)));
        let b = separation_bound(&xi(&f)).unwrap();
        assert!(b >= int(3), "{b}");
        // (x^2 - y^3)^2 has a single pair of distinct roots with contact 3/2
        let g = x.pow(2).sub(&y.pow(3)).pow(2);
        let b = separation_bound(&xi(&g)).unwrap();
        assert!(b >= Rat::new(3.into(), 2.into()), "{b}");
    }
}
