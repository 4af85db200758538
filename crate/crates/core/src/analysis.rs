//! Extraction of 1-differentiable content: coordinate bivector probes, the
//! predicted diamond series, the curvature contraction `ℛ`, the forms
//! `β_n` and `γ_n`, and exact checks of the curvature identities.

use crate::error::{Error, Result};
use crate::fedosov::{StarProduct, WeylCurvatureSpec};
use crate::geometry::Geometry;
use crate::poly::{CoordPoly, Exponents};
use crate::scalar::Scalar;
use crate::series::HSeries;
use crate::tensor::{diamond_geometric, Tensor2, TensorSeries, Variance};
use crate::weyl::{WeylForm, WeylKey};

/// `σ(a_i ∘ a_j)` for all coordinate pairs, row-major.
pub fn coordinate_products(sp: &StarProduct) -> Result<Vec<HSeries<CoordPoly>>> {
    let n = sp.spec().dim();
    let s = sp.spec().geometry().symplectic();
    let sections = (0..n).map(|i| sp.solver().flat_section(&CoordPoly::var(n, i))).collect::<Result<Vec<_>>>()?;
    let mut out = Vec::with_capacity(n * n);
    for a in &sections {
        for b in &sections {
            out.push(a.sigma_circ(b, s, sp.order()));
        }
    }
    Ok(out)
}

fn products_to_tensors(p: &[HSeries<CoordPoly>], dim: usize, order: usize) -> TensorSeries {
    let coeffs = (0..=order)
        .map(|n| Tensor2::from_entries(dim, Variance::Contravariant, p.iter().map(|s| s.coeff(n).clone()).collect()).expect("square"))
        .collect();
    HSeries::from_coeffs(coeffs)
}

/// `[(C̃_n − C_n)(x^i, x^j)]_{ij}` for every `n ≤ order`.
pub fn probe_series(base: &StarProduct, pert: &StarProduct) -> Result<TensorSeries> {
    if base.spec().geometry() != pert.spec().geometry() {
        return Err(Error::ConventionViolation("probes need a shared geometry".into()));
    }
    let order = base.order().min(pert.order());
    let dim = base.spec().dim();
    let a = products_to_tensors(&coordinate_products(base)?, dim, order);
    let b = products_to_tensors(&coordinate_products(pert)?, dim, order);
    Ok(b.sub(&a))
}

/// Probe of `C̃_n − C_n` at one order.
pub fn bivector_probe(spec1: &WeylCurvatureSpec, spec2: &WeylCurvatureSpec, n: usize, order: usize) -> Result<Tensor2> {
    if n > order {
        return Err(Error::OrderOutOfRange { order: n, min: 0, max: order });
    }
    let base = StarProduct::new(spec1.clone(), order)?;
    let pert = StarProduct::new(spec2.clone(), order)?;
    Ok(probe_series(&base, &pert)?.coeff(n).clone())
}

/// `(iħ/2) Σ_{p≥1} (ᾱ^ħ)^{⋄p}` as an ħ-series of bivectors.
pub fn predicted_onediff(alpha_h: &TensorSeries, geo: &Geometry, order: usize) -> Result<TensorSeries> {
    let s = geo.symplectic();
    let geo_sum = diamond_geometric(alpha_h, order, s)?;
    Ok(geo_sum.shift(1).map(|t| t.scale(&Scalar::imag_ratio(1, 2))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComparison {
    pub n: usize,
    pub probe: Tensor2,
    pub predicted: Tensor2,
    pub residual: Tensor2,
    pub pass: bool,
}

/// Per-order probes of `C̃_n − C_n` against the diamond-series prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComparisonReport {
    pub orders: Vec<OrderComparison>,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.orders.iter().all(|o| o.pass)
    }
}

/// Compares two specs over one geometry; the prediction is the difference of
/// the two predicted series.
pub fn compare(base: &WeylCurvatureSpec, pert: &WeylCurvatureSpec, order: usize) -> Result<ComparisonReport> {
    let b = StarProduct::new(base.clone(), order)?;
    let p = StarProduct::new(pert.clone(), order)?;
    compare_products(&b, &p)
}

pub fn compare_products(base: &StarProduct, pert: &StarProduct) -> Result<ComparisonReport> {
    let order = base.order().min(pert.order());
    let probes = probe_series(base, pert)?;
    let geo = base.spec().geometry();
    let pb = predicted_onediff(&base.spec().alpha_series(order), geo, order)?;
    let pp = predicted_onediff(&pert.spec().alpha_series(order), geo, order)?;
    let predicted = pp.sub(&pb);
    let orders = (0..=order)
        .map(|n| {
            let residual = probes.coeff(n).try_sub(predicted.coeff(n)).expect("shapes agree");
            OrderComparison { n, probe: probes.coeff(n).clone(), predicted: predicted.coeff(n).clone(), pass: residual.is_zero(), residual }
        })
        .collect();
    Ok(ComparisonReport { orders })
}

/// `(C̃_{k+1} − C_{k+1})(f, g)` and the prediction `(i/2) ᾱ(f, g)`, where
/// `Ω̃ = Ω + ħ^k α`.
pub fn first_order_shift(base: &WeylCurvatureSpec, k: u32, alpha: &Tensor2, f: &CoordPoly, g: &CoordPoly) -> Result<(CoordPoly, CoordPoly)> {
    let pert = base.perturbed(k, alpha.clone())?;
    let order = k as usize + 1;
    let c = StarProduct::new(base.clone(), order)?.star(f, g)?;
    let ct = StarProduct::new(pert, order)?.star(f, g)?;
    let diff = ct.coeff(order) - c.coeff(order);
    let s = base.geometry().symplectic();
    let pred = alpha.mu(s)?.apply(f, g)?.scale(&Scalar::imag_ratio(1, 2));
    Ok((diff, pred))
}

/// `ℛ̂_{l₁l₂}`: the pure `ω̄³` contraction of `P_{l₁}` with `P_{l₂}`,
/// `P_l = R_{ijkl} y^i y^j y^k`. The normalized contraction
/// `P_{l₁} ∘₃ P_{l₂}` equals `(i/48) ħ³ ℛ̂_{l₁l₂}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CalR {
    pub lower: Tensor2,
    pub upper: Tensor2,
}

impl CalR {
    /// `(−iħ/2)³/3!` with ħ stripped.
    pub fn prefactor() -> Scalar {
        Scalar::imag_ratio(1, 48)
    }

    /// `ℛ^{m₁m₂} ∂_{m₁}f ∂_{m₂}g` as a series: `(i/48) ħ³ ℛ̂(f, g)`.
    pub fn apply(&self, f: &CoordPoly, g: &CoordPoly, order: usize) -> Result<HSeries<CoordPoly>> {
        let v = self.upper.apply(f, g)?.scale(&Self::prefactor());
        Ok(HSeries::monomial(v, 3, order.max(3)))
    }
}

/// Index contraction of the symmetrized curvature, independent of the Weyl product.
pub fn cal_r(geo: &Geometry) -> CalR {
    let n = geo.dim();
    let s = geo.symplectic();
    let r = geo.curvature();
    // S_{abc l} = ∂_a∂_b∂_c P_l
    let sym3 = |a: usize, b: usize, c: usize, l: usize| {
        let mut v = CoordPoly::zero(n);
        for (p, q, t) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            v.add_assign_ref(r.get(p, q, t, l));
        }
        v
    };
    let support = s.bar_support();
    let mut lower = Tensor2::zero(n, Variance::Covariant);
    for (a1, b1, w1) in support {
        for (a2, b2, w2) in support {
            for (a3, b3, w3) in support {
                let w = &(w1 * w2) * w3;
                for l1 in 0..n {
                    let left = sym3(*a1, *a2, *a3, l1);
                    if left.is_zero() {
                        continue;
                    }
                    for l2 in 0..n {
                        let right = sym3(*b1, *b2, *b3, l2);
                        let mut e = lower.get(l1, l2).clone();
                        e.add_product(&left, &right, &w);
                        lower.set(l1, l2, e);
                    }
                }
            }
        }
    }
    let upper = lower.mu(s).expect("covariant");
    CalR { lower, upper }
}

/// `δ⁻¹ ∂ w`.
fn delta_inv_partial(geo: &Geometry, w: &WeylForm) -> WeylForm {
    geo.cov_ext_deriv(w).delta_inv()
}

/// The y-free 2-form part of `(i/ħ) X∘X` at `ħ^h`, for a 1-form `X`
/// homogeneous of y-degree `q`.
fn square_two_form(x: &WeylForm, q: u32, h: u32, geo: &Geometry) -> Tensor2 {
    let sq = x.circ_k(x, q, geo.symplectic());
    // (i/ħ)·ħ^{h+1} term → ħ^h; the 2-form ½t_{ij}dx^i∧dx^j has tensor t
    sq.two_form_tensor(h + 1).scale(&Scalar::i())
}

/// `(δ⁻¹∂)^n δ⁻¹R`.
pub fn iterated_curvature_potential(n: u32, geo: &Geometry) -> WeylForm {
    let mut x = geo.curvature().weyl_two_form(WeylForm::UNCAPPED).delta_inv();
    for _ in 0..n {
        x = delta_inv_partial(geo, &x);
    }
    x
}

/// `β_n` from `(i/ħ)((δ⁻¹∂)^n δ⁻¹R)²|_{y=0} = ħ^{n+2} β_n`.
pub fn beta_form(n: u32, geo: &Geometry) -> Tensor2 {
    let x = iterated_curvature_potential(n, geo);
    square_two_form(&x, n + 3, n + 2, geo)
}

/// `γ_n` from `(i/ħ)((δ⁻¹∂)^n δ⁻¹(ħ^k α))²|_{y=0} = ħ^{2k+n} γ_n`.
pub fn gamma_form(n: u32, alpha: &Tensor2, k: u32, geo: &Geometry) -> Result<Tensor2> {
    alpha.check_skew()?;
    if !alpha.is_closed()? {
        return Err(Error::NotClosed);
    }
    let mut x = WeylForm::two_form(alpha, k, WeylForm::UNCAPPED).delta_inv();
    for _ in 0..n {
        x = delta_inv_partial(geo, &x);
    }
    Ok(square_two_form(&x, n + 1, 2 * k + n, geo))
}

/// One exact identity check with printable sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub lhs: String,
    pub rhs: String,
    pub residual: String,
    pub pass: bool,
}

fn series_text(s: &HSeries<CoordPoly>) -> String {
    let parts: Vec<String> = s
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(n, c)| if n == 0 { format!("({c})") } else { format!("hbar^{n} * ({c})") })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn series_check(name: &'static str, lhs: &HSeries<CoordPoly>, rhs: &HSeries<CoordPoly>) -> IdentityCheck {
    let order = lhs.order().max(rhs.order());
    let res = lhs.truncate(order).sub(&rhs.truncate(order));
    IdentityCheck { name, lhs: series_text(lhs), rhs: series_text(rhs), residual: series_text(&res), pass: res.is_zero() }
}

fn form_check(name: &'static str, lhs: &WeylForm, rhs: &WeylForm) -> IdentityCheck {
    let res = lhs.sub(rhs);
    IdentityCheck { name, lhs: lhs.to_text(), rhs: rhs.to_text(), residual: res.to_text(), pass: res.is_zero() }
}

/// `y^m ∂_m f`.
pub fn first_jet(f: &CoordPoly) -> WeylForm {
    let n = f.dim();
    WeylForm::y_linear(&(0..n).map(|m| f.partial(m)).collect::<Vec<_>>(), 0, WeylForm::UNCAPPED)
}

/// Curvature identities on a curved chart for observables `f`, `g`:
/// the `−1/24` formula for `δ⁻¹(i/ħ)[δ⁻¹R, a^{(1)}]`, identities (1)–(3)
/// with constants `−1/(9·2⁶)`, `−1/(3·2⁵)`, `−1/2⁶` against `ℛ`, the
/// `ħ²δ⁻¹β₀` formula, and the ratios (2)/(1) = 6, (3)/(1) = 9.
pub fn curvature_identities(geo: &Geometry, f: &CoordPoly, g: &CoordPoly) -> Result<Vec<IdentityCheck>> {
    let n = geo.dim();
    let s = geo.symplectic();
    let cap = WeylForm::UNCAPPED;
    let order = 3;
    let dr = geo.curvature().weyl_two_form(cap).delta_inv();
    let a1 = first_jet(f);
    let b1 = first_jet(g);
    let lf = dr.hbar_bracket(&a1, s, cap).delta_inv();
    let lg = dr.hbar_bracket(&b1, s, cap).delta_inv();
    let mut out = Vec::new();

    // −1/24 ω̄^{lm} R_{ijkl} y^i y^j y^k ∂_m f
    let r = geo.curvature();
    let mut rhs24 = WeylForm::zero(n, cap);
    let c24 = Scalar::ratio(-1, 24);
    for l in 0..n {
        for m in 0..n {
            let w = s.omega_bar(l, m);
            let df = f.partial(m);
            if w.is_zero() || df.is_zero() {
                continue;
            }
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let y = Exponents::unit(i).add(&Exponents::unit(j)).add(&Exponents::unit(k));
                        rhs24.add_term_scaled(WeylKey::new(0, y, 0), &(r.get(i, j, k, l) * &df), &(&c24 * w));
                    }
                }
            }
        }
    }
    out.push(form_check("delta_inv_bracket_minus_1_24", &lf, &rhs24));

    let calr = cal_r(geo);
    let rfg = calr.apply(f, g, order)?;
    let scaled = |c: Scalar| rfg.map(|p| p.scale(&c));

    let lhs1 = lf.sigma_circ(&lg, s, order);
    out.push(series_check("identity_1_minus_1_over_9_2_6", &lhs1, &scaled(Scalar::ratio(-1, 576))));

    let nf = dr.hbar_bracket(&lf, s, cap).delta_inv();
    let ng = dr.hbar_bracket(&lg, s, cap).delta_inv();
    let lhs2 = nf.sigma_circ(&b1, s, order).add(&a1.sigma_circ(&ng, s, order));
    out.push(series_check("identity_2_minus_1_over_3_2_5", &lhs2, &scaled(Scalar::ratio(-1, 96))));

    // ħ²δ⁻¹β₀ from the Weyl route, against (1/2⁶)(i/ħ)ℛ_{l₁l₂} y^{l₁} dx^{l₂}
    let beta0 = beta_form(0, geo);
    let hb = WeylForm::two_form(&beta0, 2, cap).delta_inv();
    let pred_hb = WeylForm::y_dx(&calr.lower, 2, cap).scale(&(&Scalar::imag_ratio(1, 64) * &CalR::prefactor()));
    out.push(form_check("hbar2_delta_inv_beta0", &hb, &pred_hb));

    let pf = hb.hbar_bracket(&a1, s, cap).delta_inv();
    let pg = hb.hbar_bracket(&b1, s, cap).delta_inv();
    let lhs3 = pf.sigma_circ(&b1, s, order).add(&a1.sigma_circ(&pg, s, order));
    out.push(series_check("identity_3_minus_1_over_2_6", &lhs3, &scaled(Scalar::ratio(-1, 64))));

    let six = lhs1.scale(&Scalar::from_int(6));
    let nine = lhs1.scale(&Scalar::from_int(9));
    out.push(series_check("ratio_2_over_1_is_6", &lhs2, &six));
    out.push(series_check("ratio_3_over_1_is_9", &lhs3, &nine));
    Ok(out)
}
