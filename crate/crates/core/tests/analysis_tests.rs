mod common;

use common::*;
use fedosov_core::*;
use proptest::prelude::*;

fn flat(dim: usize) -> WeylCurvatureSpec {
    WeylCurvatureSpec::unperturbed(Geometry::flat(sym(dim)))
}

fn single(alpha: &Tensor2, k: usize, order: usize) -> TensorSeries {
    let mut coeffs = vec![Tensor2::zero(alpha.dim(), Variance::Covariant); order + 1];
    coeffs[k] = alpha.clone();
    HSeries::from_coeffs(coeffs)
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn curvature_identities_hold(seed in any::<u64>()) {
        let mut r = rng(seed);
        let geo = gen::geometry(&mut r, 4, 1, 0.5);
        let f = gen::homogeneous_poly(&mut r, 4, 2, 3);
        let g = gen::homogeneous_poly(&mut r, 4, 2, 3);
        let checks = curvature_identities(&geo, &f, &g).unwrap();
        prop_assert_eq!(checks.len(), 7);
        for c in checks {
            prop_assert!(c.pass, "{}: residual {}", c.name, c.residual);
        }
    }

    #[test]
    fn cal_r_is_skew(seed in any::<u64>()) {
        let geo = gen::geometry(&mut rng(seed), 4, 1, 0.5);
        let c = cal_r(&geo);
        prop_assert!(c.lower.is_skew());
        prop_assert_eq!(&c.upper, &c.lower.mu(geo.symplectic()).unwrap());
    }

    #[test]
    fn odd_beta_and_gamma_vanish(seed in any::<u64>()) {
        let mut r = rng(seed);
        let geo = gen::geometry(&mut r, 2, 1, 0.6);
        let alpha = gen::closed_two_form(&mut r, 2, 1);
        for n in [1u32, 3] {
            prop_assert!(beta_form(n, &geo).is_zero());
            prop_assert!(gamma_form(n, &alpha, 1, &geo).unwrap().is_zero());
        }
        prop_assert!(beta_form(0, &geo).is_skew());
        prop_assert!(gamma_form(0, &alpha, 1, &geo).unwrap().is_skew());
    }

    #[test]
    fn flat_constant_residuals_vanish(seed in any::<u64>(), dim in prop::sample::select(vec![2usize, 4]), k in 1u32..=2) {
        let alpha = gen::constant_skew(&mut rng(seed), dim);
        let base = flat(dim);
        let report = compare(&base, &base.perturbed(k, alpha).unwrap(), 6).unwrap();
        for o in &report.orders {
            prop_assert!(o.pass, "order {}: {}", o.n, o.residual);
        }
    }

    #[test]
    fn shift_matches_on_quadratics(seed in any::<u64>()) {
        let mut r = rng(seed);
        let geo = gen::geometry(&mut r, 2, 1, 0.6);
        let alpha = gen::closed_two_form(&mut r, 2, 1);
        let f = gen::homogeneous_poly(&mut r, 2, 2, 2);
        let g = gen::homogeneous_poly(&mut r, 2, 2, 2);
        let (diff, pred) = first_order_shift(&WeylCurvatureSpec::unperturbed(geo), 1, &alpha, &f, &g).unwrap();
        prop_assert_eq!(diff, pred);
    }
}

#[test]
fn probe_of_identical_specs_is_zero() {
    let spec = WeylCurvatureSpec::unperturbed(gen::geometry(&mut rng(1), 2, 1, 0.6));
    for n in 0..=3 {
        assert!(bivector_probe(&spec, &spec, n, 3).unwrap().is_zero());
    }
    assert!(matches!(bivector_probe(&spec, &spec, 4, 3), Err(Error::OrderOutOfRange { .. })));
    let other = WeylCurvatureSpec::unperturbed(Geometry::flat(sym(2)));
    let a = StarProduct::new(spec, 2).unwrap();
    let b = StarProduct::new(other, 2).unwrap();
    assert!(probe_series(&a, &b).is_err());
}

#[test]
fn omega_perturbation_probes() {
    let s = sym(2);
    let w = Tensor2::omega(&s);
    let wb = Tensor2::omega_bar(&s);
    let base = flat(2);
    let report = compare(&base, &base.perturbed(1, w).unwrap(), 4).unwrap();
    assert!(report.all_pass());
    for p in 1..=3usize {
        let sign = if p % 2 == 1 { 1 } else { -1 };
        assert_eq!(report.orders[p + 1].probe, wb.scale(&qi(sign, 2)));
    }
    assert!(report.orders[0].probe.is_zero() && report.orders[1].probe.is_zero());
}

#[test]
fn prediction_examples() {
    let geo = Geometry::flat(sym(4));
    let s = geo.symplectic();
    let order = 8;
    let alpha = gen::constant_skew(&mut rng(2), 4);
    let zero = HSeries::constant(Tensor2::zero(4, Variance::Covariant), order);
    assert!(predicted_onediff(&zero, &geo, order).unwrap().is_zero());
    for k in 1..=3usize {
        let pred = predicted_onediff(&single(&alpha, k, order), &geo, order).unwrap();
        for n in 0..=order {
            let want = if n >= 1 && (n - 1) % k == 0 && n > 1 {
                alpha.diamond_power(((n - 1) / k) as u32, s).unwrap().mu(s).unwrap().scale(&qi(1, 2))
            } else {
                Tensor2::zero(4, Variance::Contravariant)
            };
            assert_eq!(pred.coeff(n), &want, "k={k} n={n}");
        }
    }
}

#[test]
fn prediction_reassembles_formal_poisson() {
    let geo = Geometry::flat(sym(4));
    let s = geo.symplectic();
    let order = 6;
    let mut r = rng(4);
    let mut coeffs = vec![Tensor2::zero(4, Variance::Covariant); order + 1];
    coeffs[1] = gen::constant_skew(&mut r, 4);
    coeffs[2] = gen::constant_skew(&mut r, 4);
    let alpha_h = HSeries::from_coeffs(coeffs);
    let pred = predicted_onediff(&alpha_h, &geo, order).unwrap();
    let lead = HSeries::monomial(Tensor2::omega_bar(s).scale(&qi(-1, 2)), 1, order);
    let bar = formal_poisson(s, &alpha_h, order).unwrap().shift(1).map(|t| t.scale(&qi(-1, 2)));
    assert_eq!(lead.add(&pred), bar);
}

#[test]
fn probes_add_across_perturbations() {
    let mut r = rng(6);
    let a1 = gen::constant_skew(&mut r, 4);
    let a2 = gen::constant_skew(&mut r, 4);
    let base = flat(4);
    let order = 3;
    let both = WeylCurvatureSpec::new(base.geometry().clone(), vec![Perturbation::new(2, a1.clone()).unwrap(), Perturbation::new(2, a2.clone()).unwrap()]).unwrap();
    let p = |spec: &WeylCurvatureSpec| bivector_probe(&base, spec, 3, order).unwrap();
    let sum = p(&base.perturbed(2, a1).unwrap()).try_add(&p(&base.perturbed(2, a2).unwrap())).unwrap();
    assert_eq!(p(&both), sum);
}

#[test]
fn second_order_vanishing_for_k2() {
    let alpha = gen::constant_skew(&mut rng(8), 4);
    let base = flat(4);
    let probe = bivector_probe(&base, &base.perturbed(2, alpha).unwrap(), 4, 4).unwrap();
    assert!(probe.is_zero());
}

#[test]
fn flat_geometry_has_no_curvature_terms() {
    let geo = Geometry::flat(sym(4));
    assert!(cal_r(&geo).lower.is_zero());
    for n in 0..4 {
        assert!(beta_form(n, &geo).is_zero());
    }
    let alpha = gen::constant_skew(&mut rng(9), 4);
    for n in 1..4 {
        assert!(gamma_form(n, &alpha, 1, &geo).unwrap().is_zero());
    }
}
