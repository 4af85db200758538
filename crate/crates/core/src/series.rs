//! Truncated power series in ħ.

use std::ops::Mul;

use crate::poly::CoordPoly;
use crate::scalar::Scalar;

/// Additive structure needed from series coefficients.
pub trait SeriesCoeff: Clone + PartialEq {
    fn zero_like(&self) -> Self;
    fn is_zero_coeff(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
}

impl SeriesCoeff for Scalar {
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
}

impl SeriesCoeff for CoordPoly {
    fn zero_like(&self) -> Self {
        CoordPoly::zero(self.dim())
    }
    fn is_zero_coeff(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
}

/// `Σ_{n ≤ order} ħ^n c_n`; powers beyond `order` are absent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HSeries<T> {
    coeffs: Vec<T>,
}

impl<T: SeriesCoeff> HSeries<T> {
    /// Series with the given coefficients; `order = coeffs.len() - 1`.
    pub fn from_coeffs(coeffs: Vec<T>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the hbar^0 coefficient");
        HSeries { coeffs }
    }

    /// The zero series through `order`, shaped like `template`.
    pub fn zero(template: &T, order: usize) -> Self {
        HSeries { coeffs: vec![template.zero_like(); order + 1] }
    }

    /// `c` at ħ^0, zero elsewhere.
    pub fn constant(c: T, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        s.coeffs[0] = c;
        s
    }

    /// `c·ħ^power` truncated at `order`.
    pub fn monomial(c: T, power: usize, order: usize) -> Self {
        let mut s = Self::zero(&c, order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &T {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn set(&mut self, n: usize, c: T) {
        self.coeffs[n] = c;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(SeriesCoeff::is_zero_coeff)
    }

    /// Re-truncates (or zero-pads) to `order`.
    pub fn truncate(&self, order: usize) -> Self {
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..=order).map(|n| self.coeffs.get(n).cloned().unwrap_or_else(|| zero.clone())).collect();
        HSeries { coeffs }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        HSeries { coeffs: (0..=order).map(|n| self.coeffs[n].plus(&o.coeffs[n])).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let order = self.order().min(o.order());
        HSeries { coeffs: (0..=order).map(|n| self.coeffs[n].minus(&o.coeffs[n])).collect() }
    }

    /// Multiplies by ħ^k, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let zero = self.coeffs[0].zero_like();
        let coeffs = (0..=self.order()).map(|n| if n >= k { self.coeffs[n - k].clone() } else { zero.clone() }).collect();
        HSeries { coeffs }
    }

    pub fn map<U: SeriesCoeff>(&self, f: impl Fn(&T) -> U) -> HSeries<U> {
        HSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Cauchy product under an arbitrary bilinear `mul`, truncated at `order`.
    /// Both operands must be known through `order`.
    pub fn convolve<U: SeriesCoeff, V: SeriesCoeff>(
        &self,
        o: &HSeries<U>,
        order: usize,
        mul: impl Fn(&T, &U) -> V,
    ) -> HSeries<V> {
        assert!(self.order() >= order && o.order() >= order, "operands truncated below requested order");
        let coeffs = (0..=order)
            .map(|n| {
                let mut acc = mul(&self.coeffs[0], &o.coeffs[n]);
                for l in 1..=n {
                    if self.coeffs[l].is_zero_coeff() || o.coeffs[n - l].is_zero_coeff() {
                        continue;
                    }
                    acc = acc.plus(&mul(&self.coeffs[l], &o.coeffs[n - l]));
                }
                acc
            })
            .collect();
        HSeries { coeffs }
    }
}

impl<T> HSeries<T>
where
    T: SeriesCoeff,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Cauchy product truncated at `order`.
    pub fn mul(&self, o: &Self, order: usize) -> Self {
        self.convolve(o, order, |a, b| a * b)
    }
}

impl HSeries<CoordPoly> {
    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c.scale(s))
    }
}

impl HSeries<Scalar> {
    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|c| c * s)
    }
}
