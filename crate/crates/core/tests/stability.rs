use puiseux_core::algebra::rat::rat;
use puiseux_core::algebra::{GaussRat, MPoly, Ring, Var, DEFAULT_PRECISION};
use puiseux_core::stability::{check_deformation, check_poly_family, verify_fundamental_lemma, PolyFamily, Verdict};

fn x() -> MPoly {
    MPoly::var(Var::X)
}
fn y() -> MPoly {
    MPoly::var(Var::Y)
}
fn t() -> MPoly {
    MPoly::var(Var::T)
}
fn c(n: i64) -> MPoly {
    MPoly::from_int(n)
}

fn pham(d: u32) -> MPoly {
    x().pow(3).sub(&y().pow(4)).sub(&c(3).mul(&t().pow(2)).mul(&x()).mul(&y().pow(2 * d)))
}

#[test]
fn q_deformation_is_unstable() {
    // x^4 - t^2 x^2 y^2 + y^4: the critical point at 0 splits for t != 0
    let f = x().pow(4).sub(&t().pow(2).mul(&x().pow(2)).mul(&y().pow(2))).add(&y().pow(4));
    let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
    let fams: Vec<&str> = r
        .critical_points
        .iter()
        .flat_map(|p| p.families.iter().map(|f| f.report.family.as_str()))
        .collect();
    assert!(fams.iter().any(|f| f.contains("t^2")), "{fams:?}");
    assert_eq!(r.failing_condition.as_deref(), Some("(1)"));
}

#[test]
fn pham_is_morse_stable() {
    for d in [2u32, 3] {
        let f = pham(d);
        let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
        assert_eq!(r.verdict, Verdict::MorseStable, "d={d}");
        assert_eq!(r.critical_points.len(), 1);
        assert_eq!(r.critical_points[0].multiplicity, 2);
        assert_eq!(r.critical_points[0].shift, "0");
    }
}

#[test]
fn psi_has_dot_below_polygon() {
    let f = x().pow(3).add(&t().mul(&y().pow(3))).sub(&y().pow(4));
    let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
    let w = r.critical_points.iter().find_map(|p| p.witness_dot.clone()).unwrap();
    assert_eq!((w.k, w.q), (0, rat(3, 1)));
}

#[test]
fn splitting_double_root_is_unstable() {
    let f = x().pow(2).mul(&x().pow(2).add(&t().pow(2).mul(&y().pow(2))));
    let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
}

#[test]
fn splitting_double_root_as_poly_family() {
    let z = x();
    let p = z.pow(2).mul(&z.pow(2).add(&t().pow(2)));
    let r = check_poly_family(&PolyFamily::from_mpoly(&p).unwrap(), DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
}

#[test]
fn unit_rescaling_is_stable() {
    // (1 + t) x^2 - y^3 keeps its topology
    let f = c(1).add(&t()).mul(&x().pow(2)).sub(&y().pow(3));
    let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
    assert!(r.verdict.is_almost_stable(), "{:?}", r.verdict);
    assert_eq!(r.root_polygons_constant, Some(true));
}

#[test]
fn constant_t_term_is_rejected() {
    let f = x().pow(2).sub(&y().pow(3)).add(&t());
    assert!(check_deformation(&f, DEFAULT_PRECISION).is_err());
}

#[test]
fn symmetric_family_keeps_equal_values() {
    // (z^2 - 1 - t)^2: the two minima move together
    let z = x();
    let p = z.pow(2).sub(&c(1)).sub(&t()).pow(2);
    let r = check_poly_family(&PolyFamily::from_mpoly(&p).unwrap(), DEFAULT_PRECISION).unwrap();
    assert!(r.verdict.is_almost_stable(), "{r:?}");
}

#[test]
fn asymmetric_family_breaks_equal_values() {
    // the equal critical values at z = ±1 separate under + t z
    let z = x();
    let p = z.pow(4).sub(&c(2).mul(&z.pow(2))).add(&c(2)).add(&t().mul(&z));
    let r = check_poly_family(&PolyFamily::from_mpoly(&p).unwrap(), DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::AlmostMorseStable, "{r:?}");
    assert_eq!(r.failing_condition, Some(2));
}

#[test]
fn root_leaving_a_multiple_root_is_unstable() {
    let z = x();
    let p = z.pow(4).sub(&c(2).mul(&z.pow(2))).add(&t().mul(&z));
    let r = check_poly_family(&PolyFamily::from_mpoly(&p).unwrap(), DEFAULT_PRECISION).unwrap();
    assert_eq!(r.verdict, Verdict::Unstable);
    assert_eq!(r.failing_condition, Some(3));
}

#[test]
fn lemma_holds_for_pham() {
    let f = pham(2);
    let rep = verify_fundamental_lemma(&f, &[rat(1, 8), rat(1, 3)], DEFAULT_PRECISION).unwrap();
    assert!(rep.passed, "{rep:?}");
    let _ = GaussRat::one();
}

#[test]
fn lemma_refuses_unstable_input() {
    let f = x().pow(3).add(&t().mul(&y().pow(3))).sub(&y().pow(4));
    assert!(verify_fundamental_lemma(&f, &[rat(1, 8)], DEFAULT_PRECISION).is_err());
}

mod invariants {
    use super::*;
    use proptest::prelude::*;
    use puiseux_core::algebra::{roots_exact, Poly, TPoly};
    use puiseux_core::expansion::{build_tree, critical_points, expand_roots, Depth};
    use puiseux_core::polygon::{polygon_of, XiPolynomial};
    use puiseux_core::stability::{family_from_mpoly, tschirnhausen_clear};
    use puiseux_core::truncation::root_deformation_family;

    fn g(a: i64, b: i64) -> GaussRat {
        GaussRat::new(rat(a, 1), rat(b, 1))
    }

    /// Critical multiplicities of `p_t` at a fixed `t`, sorted.
    fn crit_profile(f: &PolyFamily, t: &GaussRat) -> Vec<u32> {
        let d = f.at(t).derivative();
        let mut v: Vec<u32> = roots_exact(&d, DEFAULT_PRECISION).unwrap().iter().map(|r| r.multiplicity).collect();
        v.sort();
        v
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn unit_multiple_is_morse_stable(
            zc in prop::collection::vec((-3i64..4, -1i64..2), 3..6),
            a in -3i64..4,
            b in -2i64..3,
        ) {
            let p: Poly<GaussRat> = Poly::new(zc.iter().map(|&(x, y)| g(x, y)).collect());
            prop_assume!(p.deg() >= 2);
            let u = TPoly::new(vec![g(1, 0), g(a, 0), g(b, 0)]);
            let fam = PolyFamily::new(Poly::new(p.coeffs().iter().map(|c| u.scale(c)).collect())).unwrap();
            let r = check_poly_family(&fam, DEFAULT_PRECISION).unwrap();
            prop_assert_eq!(r.verdict, Verdict::MorseStable, "{:?}", r);
            let base = crit_profile(&fam, &GaussRat::zero());
            for t in [rat(1, 16), rat(1, 8)] {
                // skip the finitely many t where u vanishes
                if !u.eval(&GaussRat::real(t.clone())).is_zero() {
                    prop_assert_eq!(crit_profile(&fam, &GaussRat::real(t)), base.clone());
                }
            }
        }
    }

    #[test]
    fn stable_verdicts_keep_the_critical_count() {
        for f in [pham(2), pham(3), c(1).add(&t()).mul(&x().pow(2)).sub(&y().pow(3))] {
            let r = check_deformation(&f, DEFAULT_PRECISION).unwrap();
            assert!(r.verdict.is_almost_stable());
            let count = |tv: GaussRat| {
                let phi = XiPolynomial::from_mpoly(&f.eval_var(Var::T, &tv)).unwrap();
                let b = expand_roots(&phi, &Depth::Auto, DEFAULT_PRECISION).unwrap();
                let tree = build_tree(&phi, b).unwrap();
                let cp = critical_points(&tree, DEFAULT_PRECISION).unwrap();
                let mut m: Vec<u32> = cp.iter().map(|c| c.multiplicity).collect();
                m.sort();
                m
            };
            let base = count(GaussRat::zero());
            for tv in [rat(1, 16), rat(1, 8)] {
                assert_eq!(count(GaussRat::real(tv)), base, "{f}");
            }
        }
    }

    #[test]
    fn shift_vanishes_at_zero_and_keeps_the_polygon() {
        let mut fams = vec![pham(2), pham(3)];
        for s in [x().pow(2).sub(&y().pow(4)).pow(2).sub(&y().pow(10)), x().pow(2).sub(&y().pow(3)).pow(2).sub(&c(4).mul(&x()).mul(&y().pow(5)))] {
            fams.push(root_deformation_family(&s, DEFAULT_PRECISION).unwrap().family);
        }
        for f in fams {
            let phi0 = XiPolynomial::from_mpoly(&f.eval_var(Var::T, &GaussRat::zero())).unwrap();
            let b = expand_roots(&phi0, &Depth::Auto, DEFAULT_PRECISION).unwrap();
            let tree = build_tree(&phi0, b).unwrap();
            let phi = family_from_mpoly(&f);
            for cp in critical_points(&tree, DEFAULT_PRECISION).unwrap() {
                let r = tschirnhausen_clear(&phi, &cp.gamma).unwrap();
                assert!(r.shift.terms().all(|(_, c)| c.coeff(0).is_zero()), "{f}: B_0 != 0");
                let at0 = r.family.map(|s| s.map(|c| c.coeff(0)));
                let (p, q) = (polygon_of(&at0).unwrap(), polygon_of(&phi0.recenter(&cp.gamma.as_exact())).unwrap());
                assert_eq!(p.edges.len(), q.edges.len(), "{f}");
                for (a, b) in p.edges.iter().zip(&q.edges) {
                    assert!(a.same_as(b), "{f}: {a:?} vs {b:?}");
                }
            }
        }
    }
}
