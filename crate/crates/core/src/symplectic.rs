//! Constant symplectic form `ω` on a Darboux chart and its inverse `ω̄`,
//! normalized by `ω_{ij} ω̄^{jk} = δ_i^k`.

use crate::error::{Error, Result};
use crate::poly::check_dim;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    dim: usize,
    omega: Vec<Scalar>,
    omega_bar: Vec<Scalar>,
    bar_support: Vec<(usize, usize, Scalar)>,
}

/// Gauss-Jordan inverse of a row-major `n×n` matrix over ℚ(i).
pub(crate) fn invert_matrix(n: usize, m: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut a = m.to_vec();
    let mut inv: Vec<Scalar> = (0..n * n).map(|k| if k / n == k % n { Scalar::one() } else { Scalar::zero() }).collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r * n + col].is_zero()).ok_or(Error::Singular("matrix is not invertible"))?;
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
                inv.swap(pivot * n + k, col * n + k);
            }
        }
        let p = a[col * n + col].inv()?;
        for k in 0..n {
            a[col * n + k] = &a[col * n + k] * &p;
            inv[col * n + k] = &inv[col * n + k] * &p;
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for k in 0..n {
                let t = &a[col * n + k] * &f;
                a[r * n + k] -= &t;
                let t = &inv[col * n + k] * &f;
                inv[r * n + k] -= &t;
            }
        }
    }
    Ok(inv)
}

impl SymplecticForm {
    /// Validates a constant skew invertible matrix and computes `ω̄`.
    pub fn new(dim: usize, omega: Vec<Scalar>) -> Result<Self> {
        check_dim(dim)?;
        if omega.len() != dim * dim {
            return Err(Error::DimensionMismatch { left: dim * dim, right: omega.len() });
        }
        for i in 0..dim {
            for j in 0..dim {
                if omega[i * dim + j] != -&omega[j * dim + i] {
                    return Err(Error::InvalidSymplecticForm("omega is not skew-symmetric"));
                }
            }
        }
        let omega_bar = invert_matrix(dim, &omega).map_err(|_| Error::Singular("omega is degenerate"))?;
        let form = Self::assemble(dim, omega, omega_bar);
        form.check_inverse()?;
        Ok(form)
    }

    /// `ω = [[0, I], [−I, 0]]`, i.e. `ω = Σ dx^a ∧ dx^{a+d}`.
    pub fn standard(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        let d = dim / 2;
        let mut omega = vec![Scalar::zero(); dim * dim];
        for a in 0..d {
            omega[a * dim + a + d] = Scalar::one();
            omega[(a + d) * dim + a] = Scalar::from_int(-1);
        }
        Self::new(dim, omega)
    }

    fn assemble(dim: usize, omega: Vec<Scalar>, omega_bar: Vec<Scalar>) -> Self {
        let bar_support = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| !omega_bar[i * dim + j].is_zero())
            .map(|(i, j)| (i, j, omega_bar[i * dim + j].clone()))
            .collect();
        SymplecticForm { dim, omega, omega_bar, bar_support }
    }

    /// Asserts `ω_{ij} ω̄^{jk} = δ_i^k` exactly.
    pub fn check_inverse(&self) -> Result<()> {
        let n = self.dim;
        for i in 0..n {
            for k in 0..n {
                let s: Scalar = (0..n).map(|j| self.omega(i, j) * self.omega_bar(j, k)).sum();
                let want = if i == k { Scalar::one() } else { Scalar::zero() };
                if s != want {
                    return Err(Error::InvalidSymplecticForm("omega_ij omega_bar^jk != delta_i^k"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn omega(&self, i: usize, j: usize) -> &Scalar {
        &self.omega[i * self.dim + j]
    }

    #[inline]
    pub fn omega_bar(&self, i: usize, j: usize) -> &Scalar {
        &self.omega_bar[i * self.dim + j]
    }

    /// Nonzero entries `(i, j, ω̄^{ij})`.
    pub fn bar_support(&self) -> &[(usize, usize, Scalar)] {
        &self.bar_support
    }

    pub fn omega_matrix(&self) -> &[Scalar] {
        &self.omega
    }

    pub fn omega_bar_matrix(&self) -> &[Scalar] {
        &self.omega_bar
    }
}
