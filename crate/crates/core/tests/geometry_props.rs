mod common;

use common::*;
use fedosov_core::*;
use proptest::prelude::*;

const U: u32 = WeylForm::UNCAPPED;

fn dims() -> impl Strategy<Value = usize> {
    prop::sample::select(vec![2usize, 4])
}

/// Curvature from the coordinate formula, raising `Γ` by hand.
fn curvature_oracle(geo: &Geometry) -> Vec<CoordPoly> {
    let n = geo.dim();
    let s = geo.symplectic();
    let up = |m: usize, j: usize, k: usize| {
        let mut v = CoordPoly::zero(n);
        for i in 0..n {
            v.add_scaled(geo.gamma(i, j, k), s.omega_bar(m, i));
        }
        v
    };
    let mut raised = vec![CoordPoly::zero(n); n * n * n];
    for m in 0..n {
        for j in 0..n {
            for k in 0..n {
                raised[(m * n + j) * n + k] = up(m, j, k);
            }
        }
    }
    let g = |m: usize, j: usize, k: usize| &raised[(m * n + j) * n + k];
    let mut out = vec![CoordPoly::zero(n); n * n * n * n];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let mut v = CoordPoly::zero(n);
                    for m in 0..n {
                        let mut rm = &g(m, l, j).partial(k) - &g(m, k, j).partial(l);
                        for t in 0..n {
                            rm = &rm + &(g(m, k, t) * g(t, l, j));
                            rm = &rm - &(g(m, l, t) * g(t, k, j));
                        }
                        v.add_scaled(&rm, s.omega(i, m));
                    }
                    out[((i * n + j) * n + k) * n + l] = v;
                }
            }
        }
    }
    out
}

fn setup(seed: u64, dim: usize, maxdeg: u32) -> (Geometry, WeylForm, WeylForm) {
    let mut r = rng(seed);
    let geo = gen::geometry(&mut r, dim, maxdeg, 0.4);
    let a = gen::weyl(&mut r, dim, 8, 4, &[0, 1], 4);
    let b = gen::weyl(&mut r, dim, 8, 4, &[0, 1], 4);
    (geo, a, b)
}

fn graded_sign(a: &WeylForm) -> Scalar {
    Scalar::from_int(if a.form_degree().unwrap().unwrap_or(0) % 2 == 0 { 1 } else { -1 })
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn curvature_invariants(seed in any::<u64>(), dim in dims(), maxdeg in 0u32..=2) {
        let geo = gen::geometry(&mut rng(seed), dim, maxdeg, 0.5);
        let r = geo.curvature();
        prop_assert!(r.check_invariants().is_ok());
        let oracle = curvature_oracle(&geo);
        let n = dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        prop_assert_eq!(r.get(i, j, k, l), &oracle[((i * n + j) * n + k) * n + l]);
                    }
                }
            }
        }
        for w in r.bianchi_contractions() {
            prop_assert!(w.is_zero());
        }
        prop_assert_eq!(r.weyl_two_form(U), geo.weyl_curvature_direct());
        prop_assert_eq!(&Curvature4::from_weyl_two_form(&r.weyl_two_form(U)).unwrap(), r);
    }

    #[test]
    fn delta_inv_of_curvature(seed in any::<u64>(), dim in dims()) {
        let geo = gen::geometry(&mut rng(seed), dim, 1, 0.5);
        let r = geo.curvature();
        let mut want = WeylForm::zero(dim, U);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    let y = Exponents::unit(i).add(&Exponents::unit(j)).add(&Exponents::unit(k));
                    for l in 0..dim {
                        want.add_term_scaled(WeylKey::new(0, y, 1 << l), r.get(i, j, k, l), &q(1, 8));
                    }
                }
            }
        }
        prop_assert_eq!(r.weyl_two_form(U).delta_inv(), want);
    }

    #[test]
    fn connection_leibniz(seed in any::<u64>(), dim in dims()) {
        let (geo, a, b) = setup(seed, dim, 1);
        let s = geo.symplectic();
        for qa in 0..=1 {
            let a = a.form_part(qa);
                let lhs = geo.cov_ext_deriv(&a.circ(&b, s));
            let mut rhs = geo.cov_ext_deriv(&a).circ(&b, s);
            rhs.add_scaled(&a.circ(&geo.cov_ext_deriv(&b), s), &graded_sign(&a));
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn connection_squares_to_curvature(seed in any::<u64>(), dim in dims()) {
        let (geo, a, _) = setup(seed, dim, 1);
        let a = a.form_part(0);
        let dd = geo.cov_ext_deriv(&geo.cov_ext_deriv(&a));
        let r = geo.curvature().weyl_two_form(8);
        let rhs = r.commutator(&a, geo.symplectic()).unwrap().div_hbar().unwrap().scale(&Scalar::i());
        prop_assert_eq!(dd, rhs);
    }

    #[test]
    fn connection_anticommutes_with_delta(seed in any::<u64>(), dim in dims()) {
        let (geo, a, _) = setup(seed, dim, 2);
        let mut sum = geo.cov_ext_deriv(&a).delta();
        sum.add_assign(&geo.cov_ext_deriv(&a.delta()));
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn connection_is_linear_and_graded(seed in any::<u64>(), dim in dims()) {
        let (geo, a, b) = setup(seed, dim, 1);
        let c = gen::scalar(&mut rng(seed), true);
        let mut ab = a.clone();
        ab.add_scaled(&b, &c);
        let mut rhs = geo.cov_ext_deriv(&a);
        rhs.add_scaled(&geo.cov_ext_deriv(&b), &c);
        prop_assert_eq!(geo.cov_ext_deriv(&ab), rhs);
        for h in 0..=2 {
            prop_assert_eq!(geo.cov_ext_deriv(&a.hbar_part(h)), geo.cov_ext_deriv(&a).hbar_part(h));
        }
    }
}

#[test]
fn flat_connection_is_d() {
    let geo = Geometry::flat(sym(2));
    let a = WeylForm::y(2, U, 0).mul_poly(&x(2, 1));
    let mut want = WeylForm::zero(2, U);
    want.add_term(WeylKey::new(0, Exponents::unit(0), 0b10), &CoordPoly::one(2));
    assert_eq!(geo.cov_ext_deriv(&a), want);
    assert!(geo.curvature().is_zero());
}

#[test]
fn validation_examples() {
    let s = sym(2);
    assert_eq!(s.omega_bar_matrix(), &[q(0, 1), q(-1, 1), q(1, 1), q(0, 1)]);
    assert!(matches!(SymplecticForm::new(2, vec![Scalar::zero(); 4]), Err(Error::Singular(_))));
    let mut gamma = vec![CoordPoly::zero(2); 8];
    gamma[1] = x(2, 0);
    assert!(matches!(Geometry::new(s.clone(), gamma), Err(Error::AsymmetricConnection(1, 1, 2))));
}
