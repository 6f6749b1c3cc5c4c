use std::collections::BTreeSet;

use puiseux_core::algebra::rat::{int, rat, Rat};
use puiseux_core::algebra::{roots_exact, Coeff, GaussRat, MPoly, Poly, Ring, Var, DEFAULT_PRECISION};
use puiseux_core::expansion::{
    bar_edge_bijection, build_tree, critical_points, expand_roots, truncate_at, valuation, Depth,
    RootBranch,
};
use puiseux_core::polygon::XiPolynomial;
use puiseux_core::series::{series_from, PuiseuxSeries};
use puiseux_core::Error;

fn x() -> MPoly {
    MPoly::var(Var::X)
}
fn y() -> MPoly {
    MPoly::var(Var::Y)
}
fn c(n: i64) -> MPoly {
    MPoly::from_int(n)
}

fn tree_example() -> MPoly {
    x().pow(2).sub(&y().pow(3)).pow(2).sub(&c(4).mul(&x()).mul(&y().pow(5)))
}

fn roots(f: &MPoly) -> Vec<RootBranch> {
    let phi = XiPolynomial::from_mpoly(f).unwrap();
    expand_roots(&phi, &Depth::Auto, DEFAULT_PRECISION).unwrap()
}

/// Every stored term of `φ(ζ)` must vanish: the residual is zero up to the
/// truncation it inherits from `ζ`.
fn assert_residual_vanishes(f: &MPoly, b: &RootBranch) {
    let phi = XiPolynomial::from_mpoly(f).unwrap();
    let r = phi.evaluate(&b.series);
    match r.certified_order() {
        Ok(None) | Err(Error::TruncationTooShort) => {}
        other => panic!("residual of {} is {other:?}", b.series),
    }
}

fn f64_of(c: &Coeff) -> (f64, f64) {
    c.to_f64()
}

/// Evaluate the finite part of a branch at `y = s^N`.
fn eval_at(b: &PuiseuxSeries, s: &Rat, n: i64) -> (f64, f64) {
    let mut acc = Coeff::zero();
    for (e, a) in b.terms() {
        let k = (e * int(n)).to_integer();
        let k: u32 = k.try_into().unwrap();
        let v = Coeff::rat(s.pow(k as i32));
        acc = acc.add(&a.mul(&v));
    }
    f64_of(&acc)
}

/// Independent check: at `y = s^N` the numeric roots of `f(x, y)` near 0 are
/// matched one-to-one by the branch values.
fn assert_matches_numeric_roots(f: &MPoly, branches: &[RootBranch], n: i64, s: Rat) {
    let y0 = GaussRat::real(s.pow(n as i32));
    let fx = f.eval_var(Var::Y, &y0).to_univariate(Var::X).unwrap();
    let num: Vec<(f64, f64)> = roots_exact(&fx, DEFAULT_PRECISION)
        .unwrap()
        .iter()
        .flat_map(|r| std::iter::repeat_n(r.value().to_f64(), r.multiplicity as usize))
        .collect();
    let mut used = vec![false; num.len()];
    let sf = puiseux_core::algebra::rat::to_f64(&s);
    for b in branches {
        let v = eval_at(&b.series, &s, n);
        let t = b.series.trunc().map_or(64.0, puiseux_core::algebra::rat::to_f64);
        let tol = 1e3 * sf.powf(t * n as f64);
        for _ in 0..b.multiplicity {
            let (j, d) = num
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, w)| (j, ((w.0 - v.0).powi(2) + (w.1 - v.1).powi(2)).sqrt()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            assert!(d <= tol.max(1e-12), "branch {} off by {d} (tol {tol})", b.series);
            used[j] = true;
        }
    }
}

#[test]
fn two_conjugate_irrational_roots() {
    let f = x().pow(2).sub(&c(2).mul(&y().pow(3)));
    let b = roots(&f);
    assert_eq!(b.len(), 2);
    for br in &b {
        assert_eq!(br.multiplicity, 1);
        let (e, a) = br.series.leading().unwrap();
        assert_eq!(e, &rat(3, 2));
        let (re, im) = a.to_f64();
        assert!((re.abs() - 2f64.sqrt()).abs() < 1e-12 && im.abs() < 1e-12);
        assert_residual_vanishes(&f, br);
    }
}

#[test]
fn triple_root() {
    let f = x().sub(&y()).pow(3);
    let b = roots(&f);
    assert_eq!(b.len(), 1);
    assert_eq!(b[0].multiplicity, 3);
    assert_eq!(b[0].series, series_from(&[(1, 1, 1)]));
    assert!(b[0].series.is_exact());
}

#[test]
fn zero_root_and_shifted_cluster() {
    let f = x().pow(4).mul(&x().sub(&y()).pow(5));
    let b = roots(&f);
    let summary: Vec<(String, u32)> = b.iter().map(|r| (r.series.to_string(), r.multiplicity)).collect();
    assert_eq!(summary, vec![("0".to_string(), 4), ("y".to_string(), 5)]);
}

#[test]
fn tree_example_roots_and_bars() {
    let f = tree_example();
    let b = roots(&f);
    assert_eq!(b.len(), 4);
    let lead: BTreeSet<String> = b.iter().map(|r| r.series.head_upto(&rat(7, 4)).to_string()).collect();
    let expect: BTreeSet<String> =
        ["-y^(3/2) + i*y^(7/4)", "-y^(3/2) - i*y^(7/4)", "y^(3/2) + y^(7/4)", "y^(3/2) - y^(7/4)"]
            .into_iter()
            .map(String::from)
            .collect();
    assert_eq!(lead, expect);
    for r in &b {
        assert_eq!(r.multiplicity, 1);
        assert_eq!(r.separation_depth, Some(rat(7, 4)));
        assert_residual_vanishes(&f, r);
    }
    assert_matches_numeric_roots(&f, &b, 4, rat(1, 10));

    let phi = XiPolynomial::from_mpoly(&f).unwrap();
    let tree = build_tree(&phi, b).unwrap();
    assert_eq!(tree.heights(), vec![rat(3, 2), rat(7, 4), rat(7, 4)]);
    let crit = critical_points(&tree, DEFAULT_PRECISION).unwrap();
    assert_eq!(crit.iter().map(|c| c.multiplicity).sum::<u32>(), 3);
    for cp in &crit {
        // the value read from the bar agrees with direct evaluation
        let v = valuation(&phi, &cp.gamma).unwrap();
        assert!(v.approx_eq(&cp.value), "{v:?} vs {:?}", cp.value);
    }
    for (i, r) in tree.branches.iter().enumerate() {
        let pairs = bar_edge_bijection(&tree, &phi, &r.series).unwrap();
        assert_eq!(pairs.len(), tree.path_to(i).len());
        assert!(pairs.iter().all(|p| p.matches));
    }
}

#[test]
fn truncation_of_arc_at_tree() {
    let f = x().pow(2).sub(&c(2).mul(&y().pow(3)));
    let b = roots(&f);
    let mu = series_from(&[(3, 2, 1), (7, 4, 1)]);
    let t = truncate_at(&mu, &b).unwrap();
    assert_eq!(t, series_from(&[(3, 2, 1)]));
}

#[test]
fn shifted_polynomial_identity_along_arc() {
    // P_B(z) = z^2 - 2 on the only bar; along α = y^(3/2) the edge
    // polynomial is P_B(z + 1) = z^2 + 2z - 1
    let f = x().pow(2).sub(&c(2).mul(&y().pow(3)));
    let phi = XiPolynomial::from_mpoly(&f).unwrap();
    let tree = build_tree(&phi, roots(&f)).unwrap();
    let alpha = series_from(&[(3, 2, 1)]);
    let pairs = bar_edge_bijection(&tree, &phi, &alpha).unwrap();
    assert_eq!(pairs.len(), 1);
    let expect: Poly<Coeff> = Poly::new(vec![Coeff::from_int(-1), Coeff::from_int(2), Coeff::from_int(1)]);
    assert_eq!(pairs[0].edge.assoc, expect);
    assert_eq!(
        tree.bars[0].assoc,
        Poly::new(vec![Coeff::from_int(-2), Coeff::zero(), Coeff::from_int(1)])
    );
    assert!(pairs[0].matches);
}

#[test]
fn valuation_examples() {
    let f = x().pow(4).mul(&x().sub(&y()).pow(5));
    let phi = XiPolynomial::from_mpoly(&f).unwrap();
    // ε = 1/3, h = 2: (-ε^4, 4h + 5)
    let eps = rat(1, 3);
    let mu = PuiseuxSeries::monomial(Coeff::rat(eps.clone()), int(2));
    let v = valuation(&phi, &mu).unwrap();
    assert_eq!(v.height, Some(int(13)));
    assert_eq!(v.coeff, Some(Coeff::rat(-eps.pow(4))));
    // (1 + ε) y: (ε^5 (1 + ε)^4, 9)
    let mu = PuiseuxSeries::monomial(Coeff::rat(int(1) + &eps), int(1));
    let v = valuation(&phi, &mu).unwrap();
    assert_eq!(v.height, Some(int(9)));
    assert_eq!(v.coeff, Some(Coeff::rat(eps.pow(5) * (int(1) + &eps).pow(4))));
    assert!(valuation(&phi, &PuiseuxSeries::zero()).unwrap().is_zero());
}

#[test]
fn pham_fibre_has_one_double_critical_point() {
    // ξ^3 - 3 t^2 y^4 ξ - y^4 at t = 1/2
    let f = x().pow(3).sub(&MPoly::constant(GaussRat::real(rat(3, 4))).mul(&y().pow(4)).mul(&x())).sub(&y().pow(4));
    let phi = XiPolynomial::from_mpoly(&f).unwrap();
    let tree = build_tree(&phi, roots(&f)).unwrap();
    let crit = critical_points(&tree, DEFAULT_PRECISION).unwrap();
    assert_eq!(crit.len(), 1);
    assert_eq!(crit[0].multiplicity, 2);
    assert!(crit[0].gamma.is_exact_zero());
}

#[test]
fn user_depth_cuts_clusters() {
    let f = tree_example();
    let phi = XiPolynomial::from_mpoly(&f).unwrap();
    let b = expand_roots(&phi, &Depth::Exponent(rat(3, 2)), DEFAULT_PRECISION).unwrap();
    assert_eq!(b.len(), 2);
    assert!(b.iter().all(|r| r.multiplicity == 2 && r.series.trunc() == Some(&rat(7, 4))));
}
