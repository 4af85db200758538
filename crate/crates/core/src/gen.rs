//! Seeded random instances for property checks and scenario fixtures.

use rand::Rng;

use crate::geometry::Geometry;
use crate::poly::{CoordPoly, Exponents};
use crate::scalar::Scalar;
use crate::symplectic::SymplecticForm;
use crate::tensor::{Tensor2, Variance};
use crate::weyl::{WeylForm, WeylKey};

/// Small Gaussian rational, never zero.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R, complex: bool) -> Scalar {
    loop {
        let re = Scalar::ratio(rng.random_range(-4..=4), rng.random_range(1..=3));
        let im = if complex { Scalar::imag_ratio(rng.random_range(-2..=2), rng.random_range(1..=2)) } else { Scalar::zero() };
        let z = &re + &im;
        if !z.is_zero() {
            return z;
        }
    }
}

fn exponents<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: u32) -> Exponents {
    let mut e = Exponents::ZERO;
    for _ in 0..degree {
        e = e.raise(rng.random_range(0..dim));
    }
    e
}

/// Up to `terms` monomials of total degree at most `max_degree`.
pub fn poly<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: u32, terms: usize) -> CoordPoly {
    let mut p = CoordPoly::zero(dim);
    for _ in 0..terms {
        let d = rng.random_range(0..=max_degree);
        p.add_term(exponents(rng, dim, d), &scalar(rng, false));
    }
    p
}

/// Homogeneous of exactly `degree` (possibly zero after cancellation).
pub fn homogeneous_poly<R: Rng + ?Sized>(rng: &mut R, dim: usize, degree: u32, terms: usize) -> CoordPoly {
    let mut p = CoordPoly::zero(dim);
    for _ in 0..terms {
        p.add_term(exponents(rng, dim, degree), &scalar(rng, false));
    }
    p
}

/// Covariant or contravariant tensor with no symmetry.
pub fn tensor<R: Rng + ?Sized>(rng: &mut R, dim: usize, variance: Variance, max_degree: u32) -> Tensor2 {
    let entries = (0..dim * dim).map(|_| poly(rng, dim, max_degree, 2)).collect();
    Tensor2::from_entries(dim, variance, entries).expect("square")
}

/// Skew tensor with polynomial entries.
pub fn skew<R: Rng + ?Sized>(rng: &mut R, dim: usize, variance: Variance, max_degree: u32) -> Tensor2 {
    let mut items = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            items.push((i, j, poly(rng, dim, max_degree, 2)));
        }
    }
    Tensor2::skew_from(dim, variance, &items).expect("indices in range")
}

/// Constant skew covariant tensor.
pub fn constant_skew<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Tensor2 {
    skew(rng, dim, Variance::Covariant, 0)
}

/// Closed 2-form `dθ` for a random polynomial 1-form `θ`; entries of degree
/// `< max_degree + 1`.
pub fn closed_two_form<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: u32) -> Tensor2 {
    let theta: Vec<CoordPoly> = (0..dim).map(|_| poly(rng, dim, max_degree + 1, 3)).collect();
    let mut items = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            items.push((i, j, &theta[j].partial(i) - &theta[i].partial(j)));
        }
    }
    Tensor2::skew_from(dim, Variance::Covariant, &items).expect("indices in range")
}

/// Fully symmetric `Γ_{ijk}` of degree at most `max_degree` on the standard chart.
pub fn geometry<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: u32, density: f64) -> Geometry {
    let s = SymplecticForm::standard(dim).expect("supported dimension");
    let mut sorted = Vec::new();
    for i in 0..dim {
        for j in i..dim {
            for k in j..dim {
                if rng.random_bool(density) {
                    sorted.push(((i, j, k), poly(rng, dim, max_degree, 2)));
                }
            }
        }
    }
    Geometry::symmetrized(s, &sorted).expect("symmetric by construction")
}

/// Random Weyl form with up to `terms` monomials of filtration degree `≤ max_degree`
/// and exterior degree in `forms` (clamped to `dim`).
pub fn weyl<R: Rng + ?Sized>(rng: &mut R, dim: usize, cap: u32, max_degree: u32, forms: &[u32], terms: usize) -> WeylForm {
    let mut w = WeylForm::zero(dim, cap);
    for _ in 0..terms {
        let deg = rng.random_range(0..=max_degree);
        let h = rng.random_range(0..=deg / 2);
        let y = exponents(rng, dim, deg - 2 * h);
        let q = forms[rng.random_range(0..forms.len())].min(dim as u32);
        let mut form = 0u8;
        while form.count_ones() < q {
            form |= 1 << rng.random_range(0..dim);
        }
        w.add_term(WeylKey::new(h, y, form), &poly(rng, dim, 1, 2));
    }
    w
}
