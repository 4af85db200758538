//! 2-tensor fields with polynomial entries, the diamond contraction, the
//! `μ` isomorphism, the Schouten bracket and ħ-series of bivectors.

use std::fmt;

use crate::error::{same_dim, Error, Result};
use crate::poly::CoordPoly;
use crate::scalar::Scalar;
use crate::series::{HSeries, SeriesCoeff};
use crate::symplectic::{invert_matrix, SymplecticForm};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

impl Variance {
    pub fn flip(self) -> Variance {
        match self {
            Variance::Covariant => Variance::Contravariant,
            Variance::Contravariant => Variance::Covariant,
        }
    }
}

/// Row-major `dim × dim` matrix of polynomials with a variance tag.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor2 {
    dim: usize,
    variance: Variance,
    entries: Vec<CoordPoly>,
}

impl Tensor2 {
    pub fn zero(dim: usize, variance: Variance) -> Self {
        Tensor2 { dim, variance, entries: vec![CoordPoly::zero(dim); dim * dim] }
    }

    pub fn from_entries(dim: usize, variance: Variance, entries: Vec<CoordPoly>) -> Result<Self> {
        same_dim(dim * dim, entries.len())?;
        for e in &entries {
            same_dim(dim, e.dim())?;
        }
        Ok(Tensor2 { dim, variance, entries })
    }

    /// Constant tensor from a row-major scalar matrix.
    pub fn constant(dim: usize, variance: Variance, m: &[Scalar]) -> Result<Self> {
        same_dim(dim * dim, m.len())?;
        Ok(Tensor2 { dim, variance, entries: m.iter().map(|c| CoordPoly::constant(dim, c.clone())).collect() })
    }

    pub fn omega(s: &SymplecticForm) -> Self {
        Self::constant(s.dim(), Variance::Covariant, s.omega_matrix()).expect("square matrix")
    }

    pub fn omega_bar(s: &SymplecticForm) -> Self {
        Self::constant(s.dim(), Variance::Contravariant, s.omega_bar_matrix()).expect("square matrix")
    }

    /// Skew tensor with `t_{ij} = c` and `t_{ji} = −c` for each listed `(i, j, c)`.
    pub fn skew_from(dim: usize, variance: Variance, items: &[(usize, usize, CoordPoly)]) -> Result<Self> {
        let mut t = Tensor2::zero(dim, variance);
        for (i, j, c) in items {
            if *i >= dim || *j >= dim {
                return Err(Error::UnknownVariable { index: (*i).max(*j) + 1, dim });
            }
            same_dim(dim, c.dim())?;
            t.entries[i * dim + j].add_assign_ref(c);
            t.entries[j * dim + i].add_assign_ref(&-c);
        }
        Ok(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &CoordPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: CoordPoly) {
        self.entries[i * self.dim + j] = p;
    }

    pub fn entries(&self) -> &[CoordPoly] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CoordPoly::is_zero)
    }

    pub fn is_skew(&self) -> bool {
        (0..self.dim).all(|i| (i..self.dim).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    pub fn check_skew(&self) -> Result<()> {
        if self.is_skew() {
            Ok(())
        } else {
            Err(Error::NotSkew)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.entries.iter().all(CoordPoly::is_constant)
    }

    /// Entries as constants; `None` if any entry depends on x.
    pub fn constant_matrix(&self) -> Option<Vec<Scalar>> {
        self.is_constant().then(|| self.entries.iter().map(CoordPoly::constant_term).collect())
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let entries = (0..n * n).map(|k| self.entries[(k % n) * n + k / n].clone()).collect();
        Tensor2 { dim: n, variance: self.variance, entries }
    }

    fn check_same(&self, o: &Tensor2) -> Result<()> {
        same_dim(self.dim, o.dim)?;
        if self.variance != o.variance {
            return Err(Error::VarianceMismatch { expected: self.variance, found: o.variance });
        }
        Ok(())
    }

    fn expect(&self, v: Variance) -> Result<()> {
        if self.variance == v {
            Ok(())
        } else {
            Err(Error::VarianceMismatch { expected: v, found: self.variance })
        }
    }

    pub fn try_add(&self, o: &Tensor2) -> Result<Tensor2> {
        self.check_same(o)?;
        Ok(self.zip(o, |a, b| a + b))
    }

    pub fn try_sub(&self, o: &Tensor2) -> Result<Tensor2> {
        self.check_same(o)?;
        Ok(self.zip(o, |a, b| a - b))
    }

    fn zip(&self, o: &Tensor2, f: impl Fn(&CoordPoly, &CoordPoly) -> CoordPoly) -> Tensor2 {
        let entries = self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect();
        Tensor2 { dim: self.dim, variance: self.variance, entries }
    }

    pub fn scale(&self, s: &Scalar) -> Tensor2 {
        Tensor2 { dim: self.dim, variance: self.variance, entries: self.entries.iter().map(|e| e.scale(s)).collect() }
    }

    pub fn mul_poly(&self, p: &CoordPoly) -> Tensor2 {
        Tensor2 { dim: self.dim, variance: self.variance, entries: self.entries.iter().map(|e| e * p).collect() }
    }

    /// `α ⋄ β` through `ω̄` (covariant) or `ω` (contravariant).
    pub fn diamond(&self, o: &Tensor2, s: &SymplecticForm) -> Result<Tensor2> {
        self.check_same(o)?;
        same_dim(self.dim, s.dim())?;
        let n = self.dim;
        let mut out = Tensor2::zero(n, self.variance);
        for r in 0..n {
            for q in 0..n {
                let w = match self.variance {
                    Variance::Covariant => s.omega_bar(r, q),
                    Variance::Contravariant => s.omega(r, q),
                };
                if w.is_zero() {
                    continue;
                }
                for i in 0..n {
                    let a = self.get(r, i);
                    if a.is_zero() {
                        continue;
                    }
                    for j in 0..n {
                        let b = o.get(q, j);
                        if !b.is_zero() {
                            out.entries[i * n + j].add_product(a, b, w);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `α^{⋄n} = α ⋄ α^{⋄(n−1)}`.
    pub fn diamond_power(&self, n: u32, s: &SymplecticForm) -> Result<Tensor2> {
        if n == 0 {
            return Err(Error::ZeroDiamondPower);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.diamond(&acc, s)?;
        }
        Ok(acc)
    }

    /// `μ(α)^{ij} = −ω̄^{ir} ω̄^{js} α_{rs}`.
    pub fn mu(&self, s: &SymplecticForm) -> Result<Tensor2> {
        self.expect(Variance::Covariant)?;
        Ok(self.raise_or_lower(s.omega_bar_matrix(), Variance::Contravariant))
    }

    /// `μ⁻¹(A)_{ij} = −ω_{ir} ω_{js} A^{rs}`.
    pub fn mu_inv(&self, s: &SymplecticForm) -> Result<Tensor2> {
        self.expect(Variance::Contravariant)?;
        Ok(self.raise_or_lower(s.omega_matrix(), Variance::Covariant))
    }

    fn raise_or_lower(&self, m: &[Scalar], variance: Variance) -> Tensor2 {
        let n = self.dim;
        let minus = Scalar::from_int(-1);
        let mut out = Tensor2::zero(n, variance);
        for i in 0..n {
            for r in 0..n {
                let a = &m[i * n + r];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    for q in 0..n {
                        let b = &m[j * n + q];
                        let e = self.get(r, q);
                        if b.is_zero() || e.is_zero() {
                            continue;
                        }
                        out.entries[i * n + j].add_scaled(e, &(&(a * b) * &minus));
                    }
                }
            }
        }
        out
    }

    /// `T^{ij} ∂_i f ∂_j g` for a contravariant tensor.
    pub fn apply(&self, f: &CoordPoly, g: &CoordPoly) -> Result<CoordPoly> {
        self.expect(Variance::Contravariant)?;
        same_dim(self.dim, f.dim())?;
        same_dim(self.dim, g.dim())?;
        let df: Vec<CoordPoly> = (0..self.dim).map(|i| f.partial(i)).collect();
        let dg: Vec<CoordPoly> = (0..self.dim).map(|j| g.partial(j)).collect();
        let mut out = CoordPoly::zero(self.dim);
        for i in 0..self.dim {
            if df[i].is_zero() {
                continue;
            }
            for j in 0..self.dim {
                let t = self.get(i, j);
                if t.is_zero() || dg[j].is_zero() {
                    continue;
                }
                out.add_assign_ref(&(&(t * &df[i]) * &dg[j]));
            }
        }
        Ok(out)
    }

    /// `(dα)_{ijk} = ∂_i α_{jk} + ∂_j α_{ki} + ∂_k α_{ij}`.
    pub fn exterior_derivative(&self) -> Result<Tensor3> {
        self.expect(Variance::Covariant)?;
        let n = self.dim;
        let mut out = Tensor3::zero(n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let mut v = self.get(j, k).partial(i);
                    v.add_assign_ref(&self.get(k, i).partial(j));
                    v.add_assign_ref(&self.get(i, j).partial(k));
                    out.entries[(i * n + j) * n + k] = v;
                }
            }
        }
        Ok(out)
    }

    pub fn is_closed(&self) -> Result<bool> {
        Ok(self.exterior_derivative()?.is_zero())
    }

    /// Matrix product `(ST)_{ik} = S_{ij} T_{jk}`, variance of the left factor.
    pub(crate) fn matmul(&self, o: &Tensor2) -> Tensor2 {
        let n = self.dim;
        let mut out = Tensor2::zero(n, self.variance);
        let one = Scalar::one();
        for i in 0..n {
            for j in 0..n {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let b = o.get(j, k);
                    if !b.is_zero() {
                        out.entries[i * n + k].add_product(a, b, &one);
                    }
                }
            }
        }
        out
    }

    /// Dense rows of canonical polynomial strings.
    pub fn to_rows(&self) -> Vec<Vec<String>> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j).to_text()).collect()).collect()
    }
}

impl fmt::Display for Tensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_rows().iter().map(|r| format!("[{}]", r.join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

impl fmt::Debug for Tensor2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.variance, self)
    }
}

impl SeriesCoeff for Tensor2 {
    fn zero_like(&self) -> Self {
        Tensor2::zero(self.dim, self.variance)
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self.try_add(o).expect("series coefficients share shape")
    }
    fn minus(&self, o: &Self) -> Self {
        self.try_sub(o).expect("series coefficients share shape")
    }
}

/// Dense `dim³` array; the Schouten bracket and `dα` live here.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Tensor3 {
    dim: usize,
    entries: Vec<CoordPoly>,
}

impl Tensor3 {
    pub fn zero(dim: usize) -> Self {
        Tensor3 { dim, entries: vec![CoordPoly::zero(dim); dim * dim * dim] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> &CoordPoly {
        &self.entries[(i * self.dim + j) * self.dim + k]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CoordPoly::is_zero)
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.dim;
        (0..n).all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let v = self.get(i, j, k);
                    *v == -self.get(j, i, k) && *v == -self.get(i, k, j)
                })
            })
        })
    }

    pub fn try_add(&self, o: &Tensor3) -> Result<Tensor3> {
        same_dim(self.dim, o.dim)?;
        Ok(Tensor3 { dim: self.dim, entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a + b).collect() })
    }

    /// First nonzero entry as text, or `"0"`.
    pub fn residual_text(&self) -> String {
        self.entries.iter().find(|e| !e.is_zero()).map(CoordPoly::to_text).unwrap_or_else(|| "0".into())
    }
}

/// `[A,B]^{ijk}`: signed sum over permutations of `(i,j,k)` of
/// `A^{li} ∂_l B^{jk} + B^{li} ∂_l A^{jk}`.
pub fn schouten(a: &Tensor2, b: &Tensor2) -> Result<Tensor3> {
    a.expect(Variance::Contravariant)?;
    b.expect(Variance::Contravariant)?;
    same_dim(a.dim, b.dim)?;
    a.check_skew()?;
    b.check_skew()?;
    let n = a.dim;
    let da: Vec<Tensor2> = (0..n).map(|l| partial_tensor(a, l)).collect();
    let db: Vec<Tensor2> = (0..n).map(|l| partial_tensor(b, l)).collect();
    let raw = |i: usize, j: usize, k: usize| {
        let mut v = CoordPoly::zero(n);
        for l in 0..n {
            v.add_assign_ref(&(a.get(l, i) * db[l].get(j, k)));
            v.add_assign_ref(&(b.get(l, i) * da[l].get(j, k)));
        }
        v
    };
    let mut out = Tensor3::zero(n);
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut v = raw(i, j, k);
                v.add_assign_ref(&raw(j, k, i));
                v.add_assign_ref(&raw(k, i, j));
                v = &v - &raw(j, i, k);
                v = &v - &raw(i, k, j);
                v = &v - &raw(k, j, i);
                for (p, q, r, sign) in [(i, j, k, 1), (j, k, i, 1), (k, i, j, 1), (j, i, k, -1), (i, k, j, -1), (k, j, i, -1)] {
                    out.entries[(p * n + q) * n + r] = if sign > 0 { v.clone() } else { -&v };
                }
            }
        }
    }
    Ok(out)
}

/// `[Ω̄, Ω̄]` order by order: entry `n` is `Σ_{a+b=n} [Ω̄_a, Ω̄_b]`.
pub fn series_schouten(bar: &TensorSeries, order: usize) -> Result<Vec<Tensor3>> {
    let dim = bar.coeff(0).dim;
    (0..=order.min(bar.order()))
        .map(|n| {
            let mut acc = Tensor3::zero(dim);
            for a in 0..=n {
                if bar.coeff(a).is_zero() || bar.coeff(n - a).is_zero() {
                    continue;
                }
                acc = acc.try_add(&schouten(bar.coeff(a), bar.coeff(n - a))?)?;
            }
            Ok(acc)
        })
        .collect()
}

fn partial_tensor(t: &Tensor2, l: usize) -> Tensor2 {
    Tensor2 { dim: t.dim, variance: t.variance, entries: t.entries.iter().map(|e| e.partial(l)).collect() }
}

/// ħ-series of 2-tensors sharing dim and variance.
pub type TensorSeries = HSeries<Tensor2>;

/// Coefficientwise diamond with ħ-convolution.
pub fn series_diamond(a: &TensorSeries, b: &TensorSeries, order: usize, s: &SymplecticForm) -> Result<TensorSeries> {
    a.coeff(0).check_same(b.coeff(0))?;
    Ok(a.convolve(b, order, |x, y| x.diamond(y, s).expect("shapes checked")))
}

/// Coefficientwise `μ`.
pub fn series_mu(a: &TensorSeries, s: &SymplecticForm) -> Result<TensorSeries> {
    a.coeff(0).expect(Variance::Covariant)?;
    Ok(a.map(|t| t.mu(s).expect("variance checked")))
}

/// Checks the shape of a perturbation series `α^ħ`: covariant, skew, no ħ⁰ term.
pub fn check_perturbation(alpha_h: &TensorSeries) -> Result<()> {
    alpha_h.coeff(0).expect(Variance::Covariant)?;
    if !alpha_h.coeff(0).is_zero() {
        return Err(Error::NonzeroLeadingPerturbation);
    }
    for c in alpha_h.coeffs() {
        c.check_skew()?;
    }
    Ok(())
}

/// `Σ_{p≥1} (ᾱ^ħ)^{⋄p}` through `order`, with `ᾱ^ħ = μ(α^ħ)`.
pub fn diamond_geometric(alpha_h: &TensorSeries, order: usize, s: &SymplecticForm) -> Result<TensorSeries> {
    check_perturbation(alpha_h)?;
    let alpha_h = alpha_h.truncate(order);
    let bar = series_mu(&alpha_h, s)?;
    let mut power = bar.clone();
    let mut sum = bar.clone();
    // (ᾱ^ħ)^{⋄p} starts at ħ^p
    for _ in 2..=order {
        power = series_diamond(&bar, &power, order, s)?;
        if power.is_zero() {
            break;
        }
        sum = sum.add(&power);
    }
    Ok(sum)
}

/// `Ω̄ = ω̄ − Σ_{p≥1} (μ(α^ħ))^{⋄p}` through `order`.
pub fn formal_poisson(s: &SymplecticForm, alpha_h: &TensorSeries, order: usize) -> Result<TensorSeries> {
    same_dim(s.dim(), alpha_h.coeff(0).dim())?;
    let geo = diamond_geometric(alpha_h, order, s)?;
    Ok(HSeries::constant(Tensor2::omega_bar(s), order).sub(&geo))
}

/// The unique `Ω̄` with `Ω_{ij} Ω̄^{jk} = δ_i^k` through `order`.
pub fn series_inverse(omega: &TensorSeries, order: usize) -> Result<TensorSeries> {
    let lead = omega.coeff(0);
    lead.expect(Variance::Covariant)?;
    let n = lead.dim;
    let m0 = lead.constant_matrix().ok_or(Error::Singular("leading coefficient must be constant"))?;
    let inv0 = Tensor2::constant(n, Variance::Contravariant, &invert_matrix(n, &m0)?)?;
    let omega = omega.truncate(order);
    let mut out = vec![inv0.clone()];
    let minus = Scalar::from_int(-1);
    for k in 1..=order {
        let mut acc = Tensor2::zero(n, Variance::Covariant);
        for m in 1..=k {
            if !omega.coeff(m).is_zero() {
                acc = acc.try_add(&omega.coeff(m).matmul(&out[k - m]))?;
            }
        }
        let mut next = inv0.matmul(&acc).scale(&minus);
        next.variance = Variance::Contravariant;
        out.push(next);
    }
    Ok(HSeries::from_coeffs(out))
}

/// `Σ_j Ω_{ij} Ω̄^{jk}` through `order`; the identity when `inverse` is correct.
pub fn series_product_check(omega: &TensorSeries, inverse: &TensorSeries, order: usize) -> TensorSeries {
    omega.convolve(inverse, order, |a, b| a.matmul(b))
}
