//! Chart geometry: constant symplectic form, a symplectic connection given by
//! fully symmetric lowered symbols `Γ_{ijk}`, its curvature, and the covariant
//! exterior derivative `∂` on Weyl forms.

use crate::error::{same_dim, Error, Result};
use crate::poly::{CoordPoly, Exponents};
use crate::scalar::Scalar;
use crate::symplectic::SymplecticForm;
use crate::weyl::{WeylForm, WeylKey};

/// `R_{ijkl}`, symmetric in `ij` and skew in `kl`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Curvature4 {
    dim: usize,
    entries: Vec<CoordPoly>,
}

impl Curvature4 {
    pub fn zero(dim: usize) -> Self {
        Curvature4 { dim, entries: vec![CoordPoly::zero(dim); dim * dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.dim + j) * self.dim + k) * self.dim + l
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> &CoordPoly {
        &self.entries[self.idx(i, j, k, l)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CoordPoly::is_zero)
    }

    /// `¼ R_{ijkl} y^i y^j dx^k ∧ dx^l`.
    pub fn weyl_two_form(&self, cap: u32) -> WeylForm {
        let n = self.dim;
        let quarter = Scalar::ratio(1, 4);
        let mut w = WeylForm::zero(n, cap);
        for i in 0..n {
            for j in 0..n {
                let y = Exponents::unit(i).add(&Exponents::unit(j));
                for k in 0..n {
                    for l in 0..n {
                        if k == l {
                            continue;
                        }
                        let s = if k < l { quarter.clone() } else { -&quarter };
                        w.add_term_scaled(WeylKey::new(0, y, (1 << k) | (1 << l)), self.get(i, j, k, l), &s);
                    }
                }
            }
        }
        w
    }

    /// Reads `R_{ijkl}` back from a form `¼ R_{ijkl} y^i y^j dx^k ∧ dx^l`.
    pub fn from_weyl_two_form(w: &WeylForm) -> Result<Self> {
        let n = w.dim();
        let mut r = Curvature4::zero(n);
        for (key, c) in w.terms() {
            if key.hpow != 0 || key.y.degree() != 2 || key.form_degree() != 2 {
                return Err(Error::ConventionViolation(format!("unexpected curvature monomial {key:?}")));
            }
            let ys: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat_n(i, key.y.get(i) as usize)).collect();
            let (i, j) = (ys[0], ys[1]);
            let mut f = key.form_indices();
            let (k, l) = (f.next().unwrap(), f.next().unwrap());
            let v = if i == j { c.scale(&Scalar::from_int(2)) } else { c.clone() };
            for (a, b) in [(i, j), (j, i)] {
                let p = r.idx(a, b, k, l);
                r.entries[p] = v.clone();
                let q = r.idx(a, b, l, k);
                r.entries[q] = -&v;
            }
        }
        Ok(r)
    }

    /// `Σ_{jkl} R_{ijkl} y^j y^k y^l` for each `i`, as y-polynomial 0-forms.
    pub fn bianchi_contractions(&self) -> Vec<WeylForm> {
        let n = self.dim;
        (0..n)
            .map(|i| {
                let mut w = WeylForm::zero(n, WeylForm::UNCAPPED);
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let y = Exponents::unit(j).add(&Exponents::unit(k)).add(&Exponents::unit(l));
                            w.add_term(WeylKey::new(0, y, 0), self.get(i, j, k, l));
                        }
                    }
                }
                w
            })
            .collect()
    }

    /// Symmetry in `ij`, skewness in `kl`, and the Bianchi contraction.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let v = self.get(i, j, k, l);
                        if v != self.get(j, i, k, l) {
                            return Err(Error::ConventionViolation(format!("R_{{{i}{j}{k}{l}}} != R_{{{j}{i}{k}{l}}}")));
                        }
                        if *v != -self.get(i, j, l, k) {
                            return Err(Error::ConventionViolation(format!("R_{{{i}{j}{k}{l}}} != -R_{{{i}{j}{l}{k}}}")));
                        }
                    }
                }
            }
        }
        if self.bianchi_contractions().iter().any(|w| !w.is_zero()) {
            return Err(Error::ConventionViolation("R_ijkl y^j y^k y^l != 0".into()));
        }
        Ok(())
    }
}

/// Validated chart geometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Geometry {
    sym: SymplecticForm,
    gamma: Vec<CoordPoly>,
    raised: Vec<CoordPoly>,
    curvature: Curvature4,
}

impl Geometry {
    /// `Γ = 0`.
    pub fn flat(sym: SymplecticForm) -> Self {
        let n = sym.dim();
        Self::new(sym, vec![CoordPoly::zero(n); n * n * n]).expect("flat geometry is valid")
    }

    /// Dense row-major `Γ_{ijk}` (0-based), which must be fully symmetric.
    pub fn new(sym: SymplecticForm, gamma: Vec<CoordPoly>) -> Result<Self> {
        let n = sym.dim();
        same_dim(n * n * n, gamma.len())?;
        for g in &gamma {
            same_dim(n, g.dim())?;
        }
        sym.check_inverse()?;
        let at = |i: usize, j: usize, k: usize| &gamma[(i * n + j) * n + k];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let v = at(i, j, k);
                    if v != at(j, i, k) || v != at(i, k, j) {
                        return Err(Error::AsymmetricConnection(i + 1, j + 1, k + 1));
                    }
                }
            }
        }
        let mut raised = vec![CoordPoly::zero(n); n * n * n];
        for m in 0..n {
            for i in 0..n {
                let w = sym.omega_bar(m, i);
                if w.is_zero() {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        raised[(m * n + j) * n + k].add_scaled(at(i, j, k), w);
                    }
                }
            }
        }
        let mut geo = Geometry { sym, gamma, raised, curvature: Curvature4::zero(n) };
        geo.curvature = geo.compute_curvature();
        geo.curvature.check_invariants()?;
        Ok(geo)
    }

    /// Sparse `Γ_{ijk}` entries (0-based indices); unlisted entries are zero.
    pub fn from_sparse(sym: SymplecticForm, entries: &[((usize, usize, usize), CoordPoly)]) -> Result<Self> {
        let n = sym.dim();
        let mut gamma = vec![CoordPoly::zero(n); n * n * n];
        for ((i, j, k), p) in entries {
            let m = (*i).max(*j).max(*k);
            if m >= n {
                return Err(Error::UnknownVariable { index: m + 1, dim: n });
            }
            same_dim(n, p.dim())?;
            gamma[(i * n + j) * n + k] = p.clone();
        }
        Self::new(sym, gamma)
    }

    /// Fully symmetric `Γ` from values on sorted triples `i ≤ j ≤ k`.
    pub fn symmetrized(sym: SymplecticForm, sorted: &[((usize, usize, usize), CoordPoly)]) -> Result<Self> {
        let mut all = Vec::new();
        for ((i, j, k), p) in sorted {
            let mut perms = vec![(*i, *j, *k), (*i, *k, *j), (*j, *i, *k), (*j, *k, *i), (*k, *i, *j), (*k, *j, *i)];
            perms.sort();
            perms.dedup();
            all.extend(perms.into_iter().map(|t| (t, p.clone())));
        }
        Self::from_sparse(sym, &all)
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    pub fn symplectic(&self) -> &SymplecticForm {
        &self.sym
    }

    pub fn is_flat(&self) -> bool {
        self.gamma.iter().all(CoordPoly::is_zero)
    }

    /// Lowered symbol `Γ_{ijk}`.
    pub fn gamma(&self, i: usize, j: usize, k: usize) -> &CoordPoly {
        let n = self.dim();
        &self.gamma[(i * n + j) * n + k]
    }

    /// Raised symbol `Γ^m_{jk} = ω̄^{mi} Γ_{ijk}`.
    pub fn raised(&self, m: usize, j: usize, k: usize) -> &CoordPoly {
        let n = self.dim();
        &self.raised[(m * n + j) * n + k]
    }

    pub fn curvature(&self) -> &Curvature4 {
        &self.curvature
    }

    /// `R_{ijkl} = ω_{im} R^m_{jkl}` with
    /// `R^m_{jkl} = ∂_k Γ^m_{lj} − ∂_l Γ^m_{kj} + Γ^m_{ks} Γ^s_{lj} − Γ^m_{ls} Γ^s_{kj}`.
    fn compute_curvature(&self) -> Curvature4 {
        let n = self.dim();
        let mut upper = vec![CoordPoly::zero(n); n * n * n * n];
        let one = Scalar::one();
        let minus = Scalar::from_int(-1);
        for m in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = self.raised(m, l, j).partial(k);
                        v.add_scaled(&self.raised(m, k, j).partial(l), &minus);
                        for s in 0..n {
                            v.add_product(self.raised(m, k, s), self.raised(s, l, j), &one);
                            v.add_product(self.raised(m, l, s), self.raised(s, k, j), &minus);
                        }
                        upper[((m * n + j) * n + k) * n + l] = v;
                    }
                }
            }
        }
        let mut r = Curvature4::zero(n);
        for i in 0..n {
            for m in 0..n {
                let w = self.sym.omega(i, m);
                if w.is_zero() {
                    continue;
                }
                for j in 0..n {
                    for k in 0..n {
                        for l in 0..n {
                            let p = r.idx(i, j, k, l);
                            r.entries[p].add_scaled(&upper[((m * n + j) * n + k) * n + l], w);
                        }
                    }
                }
            }
        }
        r
    }

    /// `Γ̃ = ½ Γ_{ijk} y^i y^j dx^k`.
    pub fn gamma_tilde(&self) -> WeylForm {
        let n = self.dim();
        let half = Scalar::ratio(1, 2);
        let mut w = WeylForm::zero(n, WeylForm::UNCAPPED);
        for i in 0..n {
            for j in 0..n {
                let y = Exponents::unit(i).add(&Exponents::unit(j));
                for k in 0..n {
                    w.add_term_scaled(WeylKey::new(0, y, 1 << k), self.gamma(i, j, k), &half);
                }
            }
        }
        w
    }

    /// `dΓ̃ + (i/ħ) Γ̃∘Γ̃`, computed in the Weyl algebra.
    pub fn weyl_curvature_direct(&self) -> WeylForm {
        let g = self.gamma_tilde();
        // Γ̃∘Γ̃ = ½[Γ̃, Γ̃] for a 1-form
        let sq = g.hbar_bracket(&g, &self.sym, WeylForm::UNCAPPED).scale(&Scalar::ratio(1, 2));
        g.d_x().add(&sq)
    }

    /// `∂a = da + (i/ħ)[Γ̃, a]`.
    pub fn cov_ext_deriv(&self, a: &WeylForm) -> WeylForm {
        let mut out = a.d_x();
        if !self.is_flat() {
            out.add_assign(&self.gamma_tilde().hbar_bracket(a, &self.sym, a.cap()));
        }
        out
    }
}
