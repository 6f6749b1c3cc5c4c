use proptest::prelude::*;
use puiseux_core::algebra::rat::rat;
use puiseux_core::algebra::{
    roots_certified, Coeff, Field, GaussRat, GcdDomain, Poly, Ring, TPoly, ZeroStatus,
    DEFAULT_PRECISION,
};

fn g(re: i64, im: i64) -> GaussRat {
    GaussRat::new(rat(re, 1), rat(im, 1))
}

fn gp(v: &[(i64, i64)]) -> Poly<GaussRat> {
    Poly::new(v.iter().map(|&(a, b)| g(a, b)).collect())
}

fn tp(v: &[i64]) -> TPoly {
    Poly::new(v.iter().map(|&a| g(a, 0)).collect())
}

/// Leibniz expansion over all permutations; independent of the elimination
/// routine used by the library.
fn leibniz_det<R: Ring>(m: &[Vec<R>]) -> R {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = R::zero();
    fn rec<R: Ring>(m: &[Vec<R>], perm: &mut Vec<usize>, k: usize, total: &mut R) {
        let n = perm.len();
        if k == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if perm[i] > perm[j] {
                        inv += 1;
                    }
                }
            }
            let mut prod = R::one();
            for (i, &p) in perm.iter().enumerate() {
                prod = prod.mul(&m[i][p]);
            }
            *total = if inv % 2 == 0 { total.add(&prod) } else { total.sub(&prod) };
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            rec(m, perm, k + 1, total);
            perm.swap(k, i);
        }
    }
    rec(m, &mut perm, 0, &mut total);
    total
}

fn sylvester<R: Ring>(p: &Poly<R>, q: &Poly<R>) -> Vec<Vec<R>> {
    let (m, n) = (p.deg(), q.deg());
    let mut s = vec![vec![R::zero(); m + n]; m + n];
    for i in 0..n {
        for j in 0..=m {
            s[i][i + j] = p.coeff(m - j);
        }
    }
    for i in 0..m {
        for j in 0..=n {
            s[n + i][i + j] = q.coeff(n - j);
        }
    }
    s
}

/// Plain Euclid over Q(i), used as an independent gcd.
fn euclid(a: &Poly<GaussRat>, b: &Poly<GaussRat>) -> Poly<GaussRat> {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b).unwrap();
        a = b;
        b = r;
    }
    a.monic()
}

#[test]
fn resultant_with_parameter_matches_leibniz() {
    // res_z(z^3 - 3 t^2 z - 1, 3 z^2 - 3 t^2)
    let p: Poly<TPoly> = Poly::new(vec![tp(&[-1]), tp(&[0, 0, -3]), TPoly::zero(), tp(&[1])]);
    let q: Poly<TPoly> = Poly::new(vec![tp(&[0, 0, -3]), TPoly::zero(), tp(&[3])]);
    let r = p.resultant(&q).unwrap();
    assert_eq!(r, leibniz_det(&sylvester(&p, &q)));
    // q = p', so this is minus the discriminant -4a^3 - 27b^2 with a = -3t^2, b = -1
    assert_eq!(r, tp(&[27, 0, 0, 0, 0, 0, -108]));
}

#[test]
fn squarefree_parametric_example_against_specialisation() {
    let f: Poly<TPoly> = Poly::new(vec![TPoly::zero(), tp(&[0, 0, -2]), TPoly::zero(), tp(&[4])]);
    let sf = f.squarefree().unwrap();
    let prod = sf.iter().fold(Poly::<TPoly>::one(), |acc, (h, m)| acc.mul(&h.pow(*m)));
    // equal up to a unit of Q(i)(t): cross-multiplied leading coefficients agree
    assert_eq!(prod.scale(&f.lead()), f.scale(&prod.lead()));
    // at t = 3 every factor stays squarefree and coprime to the others
    let at3 = |h: &Poly<TPoly>| h.map(|c| c.eval(&g(3, 0)));
    for (i, (h, _)) in sf.iter().enumerate() {
        let hs = at3(h);
        assert!(euclid(&hs, &hs.derivative()).is_constant());
        for (h2, _) in &sf[i + 1..] {
            assert!(euclid(&hs, &at3(h2)).is_constant());
        }
    }
}

fn small_poly() -> impl Strategy<Value = Poly<GaussRat>> {
    prop::collection::vec((-4i64..5, -2i64..3), 1..5).prop_map(|v| gp(&v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn squarefree_product_recovers_input(a in small_poly(), b in small_poly(), c in small_poly()) {
        let p = a.mul(&b).mul(&b).mul(&c).mul(&c).mul(&c);
        prop_assume!(!p.is_zero() && p.deg() <= 8);
        let sf = p.squarefree().unwrap();
        let prod = sf.iter().fold(Poly::one(), |acc: Poly<GaussRat>, (h, m)| acc.mul(&h.pow(*m)));
        prop_assert_eq!(prod, p.monic());
        for (i, (h, _)) in sf.iter().enumerate() {
            prop_assert!(euclid(h, &h.derivative()).is_constant());
            for (h2, _) in &sf[i + 1..] {
                prop_assert!(euclid(h, h2).is_constant());
            }
        }
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assume!(a.deg() + b.deg() > 0 && !a.is_zero() && !b.is_zero());
        let r = a.resultant(&b).unwrap();
        prop_assert_eq!(&r, &leibniz_det(&sylvester(&a, &b)));
        prop_assert_eq!(r.is_zero(), !euclid(&a, &b).is_constant());
        // planted common factor
        prop_assume!(!c.is_zero() && c.deg() >= 1);
        let (pa, pb) = (a.mul(&c), b.mul(&c));
        prop_assert!(pa.resultant(&pb).unwrap().is_zero());
        prop_assert_eq!(pa.gcd(&pb).deg() >= c.deg(), true);
    }

    #[test]
    fn certified_roots_cover_degree(v in prop::collection::vec((-6i64..7, -3i64..4), 2..7)) {
        let p = gp(&v);
        prop_assume!(p.deg() >= 1);
        let pc = p.to_coeff();
        let roots = roots_certified(&pc, DEFAULT_PRECISION).unwrap();
        let total: u32 = roots.iter().map(|r| r.multiplicity).sum();
        prop_assert_eq!(total as usize, p.deg());
        for r in &roots {
            let val = pc.eval(&Coeff::Ball(r.ball.clone()));
            prop_assert!(val.zero_status() != ZeroStatus::NonZero);
            if let Some(z) = &r.exact {
                prop_assert!(p.eval(z).is_zero());
            }
        }
    }

    #[test]
    fn gaussian_field_inverse(a in -20i64..20, b in -20i64..20) {
        let z = g(a, b);
        prop_assume!(!z.is_zero());
        prop_assert_eq!(z.mul(&z.inv().unwrap()), GaussRat::one());
    }
}
