//! Fedosov's recursions: the connection form `r`, flat sections, the star
//! product they induce, and the rational coefficient sequences `σ_p, ϰ_p, c_p`.

use std::collections::BTreeMap;
use std::sync::Mutex;

use crate::error::{same_dim, Error, Result};
use crate::geometry::Geometry;
use crate::poly::{CoordPoly, Exponents};
use crate::scalar::Scalar;
use crate::series::HSeries;
use crate::tensor::{Tensor2, TensorSeries, Variance};
use crate::weyl::WeylForm;

/// A closed 2-form entering the Weyl curvature at `ħ^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub k: u32,
    pub alpha: Tensor2,
}

impl Perturbation {
    pub fn new(k: u32, alpha: Tensor2) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroPerturbationPower);
        }
        if alpha.variance() != Variance::Covariant {
            return Err(Error::VarianceMismatch { expected: Variance::Covariant, found: alpha.variance() });
        }
        alpha.check_skew()?;
        if !alpha.is_closed()? {
            return Err(Error::NotClosed);
        }
        Ok(Perturbation { k, alpha })
    }
}

/// Weyl curvature `Ω = ω + Σ ħ^{k_q} α_q` over a geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylCurvatureSpec {
    geometry: Geometry,
    perturbations: Vec<Perturbation>,
}

impl WeylCurvatureSpec {
    pub fn new(geometry: Geometry, perturbations: Vec<Perturbation>) -> Result<Self> {
        for p in &perturbations {
            same_dim(geometry.dim(), p.alpha.dim())?;
        }
        Ok(WeylCurvatureSpec { geometry, perturbations })
    }

    pub fn unperturbed(geometry: Geometry) -> Self {
        WeylCurvatureSpec { geometry, perturbations: Vec::new() }
    }

    /// `Ω̃ = Ω + ħ^k α`.
    pub fn perturbed(&self, k: u32, alpha: Tensor2) -> Result<Self> {
        let mut out = self.clone();
        let p = Perturbation::new(k, alpha)?;
        same_dim(self.geometry.dim(), p.alpha.dim())?;
        out.perturbations.push(p);
        Ok(out)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn perturbations(&self) -> &[Perturbation] {
        &self.perturbations
    }

    pub fn dim(&self) -> usize {
        self.geometry.dim()
    }

    /// `α^ħ = Σ ħ^{k_q} α_q` through `order`.
    pub fn alpha_series(&self, order: usize) -> TensorSeries {
        let zero = Tensor2::zero(self.dim(), Variance::Covariant);
        let mut coeffs = vec![zero; order + 1];
        for p in &self.perturbations {
            let k = p.k as usize;
            if k <= order {
                coeffs[k] = coeffs[k].try_add(&p.alpha).expect("shapes checked");
            }
        }
        HSeries::from_coeffs(coeffs)
    }

    /// `Ω = ω + α^ħ` through `order`.
    pub fn omega_series(&self, order: usize) -> TensorSeries {
        let w = Tensor2::omega(self.geometry.symplectic());
        HSeries::constant(w, order).add(&self.alpha_series(order))
    }

    /// `Q = R + Σ ħ^{k_q} ½ α_{q,ij} dx^i ∧ dx^j` as a Weyl 2-form.
    pub fn q_form(&self, cap: u32) -> WeylForm {
        let mut q = self.geometry.curvature().weyl_two_form(cap);
        for p in &self.perturbations {
            q.add_assign(&WeylForm::two_form(&p.alpha, p.k, cap));
        }
        q
    }
}

fn check_part(w: &WeylForm, n: u32) -> Result<()> {
    match (w.min_degree(), w.max_degree()) {
        (Some(lo), _) if lo != n => Err(Error::DegreeViolation(lo)),
        (_, Some(hi)) if hi != n => Err(Error::DegreeViolation(hi)),
        _ => Ok(()),
    }
}

/// Solution of the Fedosov equation for `r` together with its homogeneous parts.
#[derive(Clone, Debug)]
pub struct FedosovSolver {
    spec: WeylCurvatureSpec,
    cap: u32,
    parts: Vec<WeylForm>,
    r: WeylForm,
}

impl FedosovSolver {
    /// Solves `r = δ⁻¹Q + δ⁻¹(∂r + (i/ħ) r∘r)` with `δ⁻¹r = 0` by sweeping
    /// filtration degrees `3 ..= cap`.
    pub fn new(spec: WeylCurvatureSpec, cap: u32) -> Result<Self> {
        if cap < 3 {
            return Err(Error::OrderOutOfRange { order: cap as usize, min: 3, max: WeylForm::UNCAPPED as usize });
        }
        let dim = spec.dim();
        let geo = spec.geometry();
        let s = geo.symplectic();
        let q = spec.q_form(cap);
        let half = Scalar::ratio(1, 2);
        let mut parts: Vec<WeylForm> = (0..=cap.min(2)).map(|_| WeylForm::zero(dim, cap)).collect();
        for n in 3..=cap {
            let mut rhs = q.part(n - 1);
            rhs.add_assign(&geo.cov_ext_deriv(&parts[n as usize - 1]));
            for a in 3..=(n + 1) / 2 {
                let b = n + 1 - a;
                if b < 3 || parts[a as usize].is_zero() || parts[b as usize].is_zero() {
                    continue;
                }
                let br = parts[a as usize].hbar_bracket(&parts[b as usize], s, cap);
                if a == b {
                    rhs.add_scaled(&br, &half);
                } else {
                    rhs.add_assign(&br);
                }
            }
            let part = rhs.delta_inv();
            check_part(&part, n)?;
            parts.push(part);
        }
        let mut r = WeylForm::zero(dim, cap);
        for p in &parts {
            r.add_assign(p);
        }
        Ok(FedosovSolver { spec, cap, parts, r })
    }

    pub fn spec(&self) -> &WeylCurvatureSpec {
        &self.spec
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn r(&self) -> &WeylForm {
        &self.r
    }

    /// Homogeneous part `r^{(n)}`.
    pub fn r_part(&self, n: u32) -> &WeylForm {
        &self.parts[n as usize]
    }

    /// One application of `r ↦ δ⁻¹Q + δ⁻¹(∂r + (i/ħ) r∘r)`.
    pub fn fixed_point_map(&self, r: &WeylForm) -> WeylForm {
        let geo = self.spec.geometry();
        let mut rhs = self.spec.q_form(self.cap);
        rhs.add_assign(&geo.cov_ext_deriv(r));
        let sq = r.hbar_bracket(r, geo.symplectic(), self.cap).scale(&Scalar::ratio(1, 2));
        rhs.add_assign(&sq);
        rhs.delta_inv()
    }

    /// Flat section with `σ(a) = f`.
    pub fn flat_section(&self, f: &CoordPoly) -> Result<WeylForm> {
        self.flat_section_series(&HSeries::constant(f.clone(), 0))
    }

    /// Flat section with `σ(a) = Σ ħ^n f_n`: `a^{(0)} = f_0` and
    /// `a^{(n)} = ħ^{n/2} f_{n/2} + δ⁻¹(∂a^{(n−1)} + (i/ħ) Σ_m [r^{(m)}, a^{(n+1−m)}])`.
    pub fn flat_section_series(&self, f: &HSeries<CoordPoly>) -> Result<WeylForm> {
        self.flat_section_to(f, self.cap)
    }

    /// Flat section through filtration degree `max_degree ≤ cap`; the parts
    /// computed agree with the full section.
    pub fn flat_section_to(&self, f: &HSeries<CoordPoly>, max_degree: u32) -> Result<WeylForm> {
        let dim = self.spec.dim();
        same_dim(dim, f.coeff(0).dim())?;
        let geo = self.spec.geometry();
        let s = geo.symplectic();
        let cap = max_degree.min(self.cap);
        let seed = |n: u32| -> WeylForm {
            match n % 2 {
                0 if (n / 2) as usize <= f.order() => WeylForm::from_poly(f.coeff((n / 2) as usize), cap).mul_hbar(n / 2),
                _ => WeylForm::zero(dim, cap),
            }
        };
        let mut parts = vec![seed(0)];
        for n in 1..=cap {
            let mut rhs = geo.cov_ext_deriv(&parts[n as usize - 1]);
            for m in 3..=n {
                let j = (n + 1 - m) as usize;
                if self.parts[m as usize].is_zero() || parts[j].is_zero() {
                    continue;
                }
                rhs.add_assign(&self.parts[m as usize].hbar_bracket(&parts[j], s, cap));
            }
            let mut part = rhs.delta_inv();
            check_part(&part, n)?;
            part.add_assign(&seed(n));
            parts.push(part);
        }
        let mut a = WeylForm::zero(dim, cap);
        for p in &parts {
            a.add_assign(p);
        }
        Ok(a)
    }

    /// `Da = ∂a − δa + (i/ħ)[r, a]`.
    pub fn abelian_derivative(&self, a: &WeylForm) -> WeylForm {
        let geo = self.spec.geometry();
        let mut out = geo.cov_ext_deriv(a);
        out.add_scaled(&a.delta(), &Scalar::from_int(-1));
        out.add_assign(&self.r.hbar_bracket(a, geo.symplectic(), a.cap()));
        out
    }
}

/// `r` through filtration degree `cap`.
pub fn solve_r(spec: &WeylCurvatureSpec, cap: u32) -> Result<WeylForm> {
    Ok(FedosovSolver::new(spec.clone(), cap)?.r)
}

/// Flat section of `f` for a previously solved `r`.
pub fn flat_section(f: &CoordPoly, spec: &WeylCurvatureSpec, r: &WeylForm, cap: u32) -> Result<WeylForm> {
    let solver = FedosovSolver::new(spec.clone(), cap)?;
    if solver.r != r.with_cap(cap) {
        return Err(Error::ConventionViolation("r does not solve the Fedosov equation for this spec".into()));
    }
    solver.flat_section(f)
}

/// `C_n(f, g)` for `n ≤ order`, `C_0 = fg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StarResult {
    pub f: CoordPoly,
    pub g: CoordPoly,
    pub order: usize,
    pub coeffs: HSeries<CoordPoly>,
}

impl StarResult {
    pub fn coeff(&self, n: usize) -> &CoordPoly {
        self.coeffs.coeff(n)
    }
}

/// Star product `f * g = σ(a_f ∘ a_g)` through a fixed ħ-order.
///
/// Flat sections are linear in `f` and commute with multiplication by ħ, so
/// sections of monomials are computed once and combined.
#[derive(Debug)]
pub struct StarProduct {
    solver: FedosovSolver,
    order: usize,
    memo: Mutex<BTreeMap<Exponents, WeylForm>>,
}

impl Clone for StarProduct {
    fn clone(&self) -> Self {
        let memo = self.memo.lock().expect("memo poisoned").clone();
        StarProduct { solver: self.solver.clone(), order: self.order, memo: Mutex::new(memo) }
    }
}

impl StarProduct {
    /// Uses degree cap `2·order + 2`.
    pub fn new(spec: WeylCurvatureSpec, order: usize) -> Result<Self> {
        Self::with_cap(spec, order, 2 * order as u32 + 2)
    }

    pub fn with_cap(spec: WeylCurvatureSpec, order: usize, cap: u32) -> Result<Self> {
        if order == 0 {
            return Err(Error::OrderOutOfRange { order, min: 1, max: usize::MAX });
        }
        if cap < 2 * order as u32 {
            return Err(Error::OrderOutOfRange { order: cap as usize, min: 2 * order, max: usize::MAX });
        }
        Ok(StarProduct { solver: FedosovSolver::new(spec, cap.max(3))?, order, memo: Mutex::new(BTreeMap::new()) })
    }

    pub fn solver(&self) -> &FedosovSolver {
        &self.solver
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn spec(&self) -> &WeylCurvatureSpec {
        self.solver.spec()
    }

    /// Filtration degree read by `C_n`, `n ≤ order`.
    fn section_degree(&self) -> u32 {
        2 * self.order as u32
    }

    fn monomial_section(&self, e: Exponents) -> Result<WeylForm> {
        if let Some(w) = self.memo.lock().expect("memo poisoned").get(&e) {
            return Ok(w.clone());
        }
        let dim = self.spec().dim();
        let f = CoordPoly::monomial(dim, e, Scalar::one());
        let w = self.solver.flat_section_to(&HSeries::constant(f, 0), self.section_degree())?;
        self.memo.lock().expect("memo poisoned").insert(e, w.clone());
        Ok(w)
    }

    /// Flat section of `Σ ħ^n f_n` through degree `2·order`.
    pub fn section(&self, f: &HSeries<CoordPoly>) -> Result<WeylForm> {
        let dim = self.spec().dim();
        same_dim(dim, f.coeff(0).dim())?;
        let mut out = WeylForm::zero(dim, self.section_degree());
        for (n, fn_) in f.coeffs().iter().enumerate().take(self.order + 1) {
            for (e, c) in fn_.terms() {
                let w = self.monomial_section(*e)?;
                out.add_scaled(&w.mul_hbar(n as u32), c);
            }
        }
        Ok(out)
    }

    pub fn star(&self, f: &CoordPoly, g: &CoordPoly) -> Result<StarResult> {
        let coeffs = self.star_series(&HSeries::constant(f.clone(), 0), &HSeries::constant(g.clone(), 0))?;
        Ok(StarResult { f: f.clone(), g: g.clone(), order: self.order, coeffs })
    }

    /// Star product of ħ-series of functions.
    pub fn star_series(&self, f: &HSeries<CoordPoly>, g: &HSeries<CoordPoly>) -> Result<HSeries<CoordPoly>> {
        let a = self.section(f)?;
        let b = self.section(g)?;
        Ok(a.sigma_circ(&b, self.solver.spec().geometry().symplectic(), self.order))
    }
}

/// `f * g` through `ħ^order`.
pub fn star(f: &CoordPoly, g: &CoordPoly, spec: &WeylCurvatureSpec, order: usize) -> Result<StarResult> {
    StarProduct::new(spec.clone(), order)?.star(f, g)
}

/// `σ_1..σ_P`, `ϰ_0..ϰ_P`, `c_0..c_P`; `sigma[0]` is unused and zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffTable {
    pub p: usize,
    pub sigma: Vec<Scalar>,
    pub kappa: Vec<Scalar>,
    pub c: Vec<Scalar>,
}

/// `σ_1 = ½, σ_n = ½ Σ σ_l σ_m`; `ϰ_0 = 1, ϰ_n = Σ_{m≥1} ϰ_l σ_m`; `c_n = ½ Σ ϰ_l ϰ_m`.
pub fn coeff_sequences(p: usize) -> CoeffTable {
    let half = Scalar::ratio(1, 2);
    let mut sigma = vec![Scalar::zero(); p + 1];
    if p >= 1 {
        sigma[1] = half.clone();
    }
    for n in 2..=p {
        let s: Scalar = (1..n).map(|l| &sigma[l] * &sigma[n - l]).sum();
        sigma[n] = &half * &s;
    }
    let mut kappa = vec![Scalar::one()];
    for n in 1..=p {
        let s: Scalar = (1..=n).map(|m| &kappa[n - m] * &sigma[m]).sum();
        kappa.push(s);
    }
    let c = (0..=p).map(|n| &half * &(0..=n).map(|l| &kappa[l] * &kappa[n - l]).sum::<Scalar>()).collect();
    CoeffTable { p, sigma, kappa, c }
}

/// Taylor coefficients of `(1 − x)^e` through `x^p`, for rational `e`.
pub fn binomial_series(e: &Scalar, p: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::one()];
    for n in 1..=p {
        // a_n = a_{n-1} · (n − 1 − e) / n
        let f = &(&Scalar::from_int(n as i64 - 1) - e) * &Scalar::ratio(1, n as i64);
        let next = &out[n - 1] * &f;
        out.push(next);
    }
    out
}
