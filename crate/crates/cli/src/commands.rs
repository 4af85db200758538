//! The `verify`, `star`, `compare`, `coeffs` and `poisson` commands.

use fedosov_core::analysis::{compare_products, curvature_identities, first_jet};
use fedosov_core::{
    binomial_series, coeff_sequences, formal_poisson, series_inverse, series_product_check, series_schouten, CoordPoly, FedosovSolver, HSeries,
    Scalar, StarProduct, Tensor2, TensorSeries, WeylForm,
};

use crate::report::Report;
use crate::scenario::Scenario;
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Verify,
    Star,
    Compare,
    Coeffs,
    Poisson,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Verify => "verify",
            Command::Star => "star",
            Command::Compare => "compare",
            Command::Coeffs => "coeffs",
            Command::Poisson => "poisson",
        }
    }
}

pub fn run(cmd: Command, scenario: &Scenario, order: Option<usize>) -> Result<Report, Error> {
    let order = order.unwrap_or(scenario.order);
    if order == 0 {
        return Err(Error::Invalid("order must be at least 1".into()));
    }
    match cmd {
        Command::Verify => verify(scenario, order),
        Command::Star => star(scenario, order),
        Command::Compare => compare(scenario, order),
        Command::Coeffs => Ok(coeffs(order)),
        Command::Poisson => poisson(scenario, order),
    }
}

fn tensor_text(t: &Tensor2) -> String {
    let rows: Vec<String> = t.to_rows().iter().map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn poly_residual(lhs: &CoordPoly, rhs: &CoordPoly) -> String {
    (lhs - rhs).to_text()
}

fn series_residual(lhs: &HSeries<CoordPoly>, rhs: &HSeries<CoordPoly>) -> String {
    let d = lhs.sub(rhs);
    match d.coeffs().iter().enumerate().find(|(_, c)| !c.is_zero()) {
        None => "0".into(),
        Some((n, c)) => format!("hbar^{n}: {c}"),
    }
}

fn tensor_residual(t: &Tensor2) -> String {
    if t.is_zero() {
        "0".into()
    } else {
        tensor_text(t)
    }
}

/// `σ`, `ϰ`, `c` through `p`, checked against Taylor expansions of
/// `1 − √(1−x)`, `1/√(1−x)` and the constant `½`.
pub fn coeffs(p: usize) -> Report {
    let mut r = Report::new("coeffs", &format!("P={p}"));
    let t = coeff_sequences(p);
    let rows = (0..=p)
        .map(|n| {
            let sigma = if n == 0 { "-".to_string() } else { t.sigma[n].to_text() };
            vec![n.to_string(), sigma, t.kappa[n].to_text(), t.c[n].to_text()]
        })
        .collect();
    r.section("coefficient table", &["p", "sigma_p", "kappa_p", "c_p"], rows);
    let half = binomial_series(&Scalar::ratio(1, 2), p);
    let bad_sigma = (1..=p).find(|&n| t.sigma[n] != -&half[n]);
    r.check_bool("coeffs.sigma_taylor", bad_sigma.is_none(), format!("first mismatch at p={}", bad_sigma.unwrap_or(0)));
    let neg_half = binomial_series(&Scalar::ratio(-1, 2), p);
    let bad_kappa = (0..=p).find(|&n| t.kappa[n] != neg_half[n]);
    r.check_bool("coeffs.kappa_taylor", bad_kappa.is_none(), format!("first mismatch at p={}", bad_kappa.unwrap_or(0)));
    let bad_c = (0..=p).find(|&n| t.c[n] != Scalar::ratio(1, 2));
    r.check_bool("coeffs.c_half", bad_c.is_none(), format!("c_{} = {}", bad_c.unwrap_or(0), bad_c.map(|n| t.c[n].to_text()).unwrap_or_default()));
    r
}

/// The `C_n(f, g)` table with the order-0 and order-1 checks.
pub fn star(sc: &Scenario, order: usize) -> Result<Report, Error> {
    let mut r = Report::new("star", &sc.id);
    let sp = StarProduct::new(sc.spec.clone(), order)?;
    let fg = sp.star(&sc.f, &sc.g)?;
    let gf = sp.star(&sc.g, &sc.f)?;
    let rows = (0..=order).map(|n| vec![n.to_string(), fg.coeff(n).to_text()]).collect();
    r.section(format!("C_n(f, g) for f = {}, g = {}", sc.f, sc.g), &["n", "C_n"], rows);
    r.check("star.c0_product", poly_residual(fg.coeff(0), &(&sc.f * &sc.g)));
    r.check("star.c1_skew", (fg.coeff(1) + gf.coeff(1)).to_text());
    let pb = Tensor2::omega_bar(sc.geometry().symplectic()).apply(&sc.f, &sc.g)?.scale(&Scalar::imag_ratio(-1, 2));
    r.check("star.c1_poisson", poly_residual(fg.coeff(1), &pb));
    Ok(r)
}

/// Probes of `C̃_n − C_n` on coordinates against the diamond-series prediction.
pub fn compare(sc: &Scenario, order: usize) -> Result<Report, Error> {
    let mut r = Report::new("compare", &sc.id);
    let base = StarProduct::new(sc.base.clone(), order)?;
    let pert = StarProduct::new(sc.spec.clone(), order)?;
    let rep = compare_products(&base, &pert)?;
    let rows = rep.orders.iter().map(|o| vec![o.n.to_string(), tensor_text(&o.probe), tensor_text(&o.predicted)]).collect();
    r.section("coordinate probes", &["n", "probe", "predicted"], rows);
    for o in &rep.orders {
        r.check(format!("compare.order_{}", o.n), tensor_residual(&o.residual));
    }
    Ok(r)
}

/// `Ω̄` through `order` with its Schouten residual.
pub fn poisson(sc: &Scenario, order: usize) -> Result<Report, Error> {
    let mut r = Report::new("poisson", &sc.id);
    let s = sc.geometry().symplectic();
    let alpha_h = sc.spec.alpha_series(order);
    let bar = formal_poisson(s, &alpha_h, order)?;
    let rows = bar.coeffs().iter().enumerate().map(|(n, t)| vec![n.to_string(), tensor_text(t)]).collect();
    r.section("formal Poisson bivector", &["n", "coefficient"], rows);
    poisson_checks(&mut r, &alpha_h, &bar, order, sc)?;
    Ok(r)
}

fn poisson_checks(r: &mut Report, alpha_h: &TensorSeries, bar: &TensorSeries, order: usize, sc: &Scenario) -> Result<(), Error> {
    let s = sc.geometry().symplectic();
    let omega = HSeries::constant(Tensor2::omega(s), order).add(alpha_h);
    let inv = series_inverse(&omega, order)?;
    let diff = bar.sub(&inv);
    let bad = diff.coeffs().iter().find(|t| !t.is_zero());
    r.check("poisson.series_inverse", bad.map(tensor_text).unwrap_or_else(|| "0".into()));
    let prod = series_product_check(&omega, bar, order);
    let n = sc.dim();
    let is_delta = |k: usize, t: &Tensor2| (0..n).all(|i| (0..n).all(|j| *t.get(i, j) == if k == 0 && i == j { CoordPoly::one(n) } else { CoordPoly::zero(n) }));
    let bad = prod.coeffs().iter().enumerate().position(|(k, t)| !is_delta(k, t));
    r.check_bool("poisson.product_identity", bad.is_none(), format!("order {}", bad.unwrap_or(0)));
    for (n, res) in series_schouten(bar, order)?.iter().enumerate() {
        r.check(format!("poisson.schouten.order_{n}"), res.residual_text());
    }
    Ok(())
}

/// The full check suite for one scenario.
pub fn verify(sc: &Scenario, order: usize) -> Result<Report, Error> {
    let mut r = Report::new("verify", &sc.id);
    let geo = sc.geometry();
    let s = geo.symplectic();
    r.check_bool("geometry.inverse", s.check_inverse().is_ok(), "omega * omega_bar != identity");
    let inv = geo.curvature().check_invariants();
    r.check_bool("geometry.curvature_invariants", inv.is_ok(), inv.err().map(|e| e.to_string()).unwrap_or_default());

    let cap = 2 * order as u32 + 2;
    let probe = WeylForm::from_poly(&sc.f, cap).add(&first_jet(&sc.f).with_cap(cap));
    let dd = geo.cov_ext_deriv(&geo.cov_ext_deriv(&probe));
    let rc = geo.curvature().weyl_two_form(cap).hbar_bracket(&probe, s, cap);
    r.check("geometry.connection_squared", dd.sub(&rc).to_text());

    let solver = FedosovSolver::new(sc.spec.clone(), cap)?;
    r.check("fedosov.fixed_point", solver.fixed_point_map(solver.r()).sub(solver.r()).to_text());
    for (name, f) in [("f", &sc.f), ("g", &sc.g)] {
        let a = solver.flat_section(f)?;
        r.check(format!("fedosov.flat_section_{name}"), solver.abelian_derivative(&a).truncated(cap - 1).to_text());
    }

    let sp = StarProduct::new(sc.spec.clone(), order)?;
    let fg = sp.star(&sc.f, &sc.g)?;
    let gf = sp.star(&sc.g, &sc.f)?;
    r.check("star.c0_product", poly_residual(fg.coeff(0), &(&sc.f * &sc.g)));
    r.check("star.c1_skew", (fg.coeff(1) + gf.coeff(1)).to_text());
    let one = CoordPoly::one(sc.dim());
    r.check("star.unit", series_residual(&sp.star(&sc.f, &one)?.coeffs, &HSeries::monomial(sc.f.clone(), 0, order)));
    if let Some(h) = &sc.h {
        let c = |p: &CoordPoly| HSeries::constant(p.clone(), 0);
        let lhs = sp.star_series(&sp.star_series(&c(&sc.f), &c(&sc.g))?, &c(h))?;
        let rhs = sp.star_series(&c(&sc.f), &sp.star_series(&c(&sc.g), &c(h))?)?;
        r.check("star.associativity", series_residual(&lhs, &rhs));
    }

    if let Some(k) = sc.added.iter().map(|p| p.k).min() {
        let mut alpha = Tensor2::zero(sc.dim(), fedosov_core::Variance::Covariant);
        for p in sc.added.iter().filter(|p| p.k == k) {
            alpha = alpha.try_add(&p.alpha)?;
        }
        let n = k as usize + 1;
        let base = StarProduct::new(sc.base.clone(), n)?;
        let pert = StarProduct::new(sc.spec.clone(), n)?;
        let diff = pert.star(&sc.f, &sc.g)?.coeff(n) - base.star(&sc.f, &sc.g)?.coeff(n);
        let pred = alpha.mu(s)?.apply(&sc.f, &sc.g)?.scale(&Scalar::imag_ratio(1, 2));
        r.check("shift.first_order", poly_residual(&diff, &pred));
        let all_constant = sc.spec.perturbations().iter().all(|p| p.alpha.is_constant());
        if geo.is_flat() && all_constant {
            let pb = StarProduct::new(sc.base.clone(), order)?;
            let rep = compare_products(&pb, &sp)?;
            let bad = rep.orders.iter().find(|o| !o.pass);
            r.check("shift.probe_series", bad.map(|o| format!("order {}: {}", o.n, tensor_text(&o.residual))).unwrap_or_else(|| "0".into()));
        }
    }

    if !geo.is_flat() {
        for c in curvature_identities(geo, &sc.f, &sc.g)? {
            r.check(format!("curvature.{}", c.name), c.residual);
        }
    }

    let alpha_h = sc.spec.alpha_series(order);
    let bar = formal_poisson(s, &alpha_h, order)?;
    poisson_checks(&mut r, &alpha_h, &bar, order, sc)?;

    let table = coeffs(order.max(8));
    r.checks.extend(table.checks.into_iter().map(|mut c| {
        c.scenario_id = sc.id.clone();
        c
    }));
    Ok(r)
}
