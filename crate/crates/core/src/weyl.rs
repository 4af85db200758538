//! Sections of the formal Weyl bundle tensored with forms on a chart:
//! finite sums of `ħ^k c(x) y^A dx^F`, truncated at a filtration degree cap.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{same_dim, Error, Result};
use crate::poly::{CoordPoly, Exponents};
use crate::scalar::Scalar;
use crate::series::HSeries;
use crate::symplectic::SymplecticForm;
use crate::tensor::{Tensor2, Variance};

/// `ħ^hpow y^y dx^form`, with `form` a bitmask of increasing indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeylKey {
    pub hpow: u32,
    pub y: Exponents,
    pub form: u8,
}

impl WeylKey {
    pub const ONE: WeylKey = WeylKey { hpow: 0, y: Exponents::ZERO, form: 0 };

    pub fn new(hpow: u32, y: Exponents, form: u8) -> Self {
        WeylKey { hpow, y, form }
    }

    /// Filtration degree `2·hpow + |y|`.
    #[inline]
    pub fn degree(&self) -> u32 {
        2 * self.hpow + self.y.degree()
    }

    #[inline]
    pub fn form_degree(&self) -> u32 {
        self.form.count_ones()
    }

    pub fn form_indices(&self) -> impl Iterator<Item = usize> {
        let f = self.form;
        (0..8).filter(move |i| f & (1 << i) != 0)
    }
}

impl Ord for WeylKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.hpow
            .cmp(&o.hpow)
            .then_with(|| self.y.degree().cmp(&o.y.degree()))
            .then_with(|| self.y.cmp(&o.y))
            .then_with(|| self.form_indices().cmp(o.form_indices()))
    }
}

impl PartialOrd for WeylKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Sign of `dx^a ∧ dx^b` relative to the sorted wedge, or 0 if they overlap.
#[inline]
fn wedge_sign(a: u8, b: u8) -> i32 {
    if a & b != 0 {
        return 0;
    }
    let mut inv = 0;
    let mut bb = b;
    while bb != 0 {
        let k = bb.trailing_zeros();
        inv += (a as u32 >> (k + 1)).count_ones();
        bb &= bb - 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `(−1)^{#indices of form below k}`: sign for moving `dx^k` into place.
#[inline]
fn slot_sign(form: u8, k: usize) -> i32 {
    if (form & ((1u8 << k) - 1)).count_ones() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Orders {
    Only(u32),
    All,
    Odd,
}

impl Orders {
    fn admits(self, k: u32) -> bool {
        match self {
            Orders::Only(n) => n == k,
            Orders::All => true,
            Orders::Odd => k % 2 == 1,
        }
    }
}

/// All ways of contracting `y^ya` against `y^yb` through `ω̄`: returns
/// `(k, remaining y, coefficient)` with the `(−i/2)^k / k!` factor included.
fn contractions(support: &[(usize, usize, Scalar)], ya: Exponents, yb: Exponents, orders: Orders) -> Vec<(u32, Exponents, Scalar)> {
    let mut out = Vec::new();
    let limit = match orders {
        Orders::Only(n) => n,
        _ => u32::MAX,
    };
    #[allow(clippy::too_many_arguments)]
    fn rec(
        support: &[(usize, usize, Scalar)],
        e: usize,
        ra: Exponents,
        rb: Exponents,
        k: u32,
        limit: u32,
        coeff: Scalar,
        orders: Orders,
        out: &mut Vec<(u32, Exponents, Scalar)>,
    ) {
        if e == support.len() {
            if orders.admits(k) {
                let pref = Scalar::imag_ratio(-1, 2).pow(k);
                out.push((k, ra.add(&rb), &coeff * &pref));
            }
            return;
        }
        let (i, j, ref w) = support[e];
        let nmax = (ra.get(i).min(rb.get(j)) as u32).min(limit - k);
        let mut c = coeff;
        let (mut a, mut b) = (ra, rb);
        for n in 0..=nmax {
            if n > 0 {
                let ai = a.get(i);
                let bj = b.get(j);
                c = &(&c * w) * &Scalar::ratio(ai as i64 * bj as i64, n as i64);
                a.set(i, ai - 1);
                b.set(j, bj - 1);
            }
            rec(support, e + 1, a, b, k + n, limit, c.clone(), orders, out);
        }
    }
    rec(support, 0, ya, yb, 0, limit, Scalar::one(), orders, &mut out);
    out
}

/// Terms grouped by y-monomial: `y ↦ [(hpow, form, coeff)]`.
type Grouped<'a> = Vec<(Exponents, Vec<(u32, u8, &'a CoordPoly)>)>;

#[derive(Clone, PartialEq, Eq)]
pub struct WeylForm {
    dim: usize,
    cap: u32,
    terms: BTreeMap<WeylKey, CoordPoly>,
}

impl WeylForm {
    /// Cap for exact finite forms such as `Γ̃` and `R`; products with a
    /// capped operand take the smaller cap.
    pub const UNCAPPED: u32 = 1 << 20;

    pub fn zero(dim: usize, cap: u32) -> Self {
        WeylForm { dim, cap, terms: BTreeMap::new() }
    }

    /// `ħ^hpow c y^y dx^form`.
    pub fn monomial(dim: usize, cap: u32, key: WeylKey, c: CoordPoly) -> Self {
        let mut w = Self::zero(dim, cap);
        w.add_term(key, &c);
        w
    }

    /// The y-free 0-form `f`.
    pub fn from_poly(f: &CoordPoly, cap: u32) -> Self {
        Self::monomial(f.dim(), cap, WeylKey::ONE, f.clone())
    }

    pub fn scalar(dim: usize, cap: u32, c: Scalar) -> Self {
        Self::from_poly(&CoordPoly::constant(dim, c), cap)
    }

    pub fn one(dim: usize, cap: u32) -> Self {
        Self::scalar(dim, cap, Scalar::one())
    }

    /// `y^i` (0-based).
    pub fn y(dim: usize, cap: u32, i: usize) -> Self {
        Self::monomial(dim, cap, WeylKey::new(0, Exponents::unit(i), 0), CoordPoly::one(dim))
    }

    /// `dx^i` (0-based).
    pub fn dx(dim: usize, cap: u32, i: usize) -> Self {
        Self::monomial(dim, cap, WeylKey::new(0, Exponents::ZERO, 1 << i), CoordPoly::one(dim))
    }

    /// `ħ^hpow t_{ij} y^i dx^j`.
    pub fn y_dx(t: &Tensor2, hpow: u32, cap: u32) -> Self {
        let n = t.dim();
        let mut w = Self::zero(n, cap);
        for i in 0..n {
            for j in 0..n {
                w.add_term(WeylKey::new(hpow, Exponents::unit(i), 1 << j), t.get(i, j));
            }
        }
        w
    }

    /// `ħ^hpow v_i y^i`.
    pub fn y_linear(v: &[CoordPoly], hpow: u32, cap: u32) -> Self {
        let n = v.len();
        let mut w = Self::zero(n, cap);
        for (i, c) in v.iter().enumerate() {
            w.add_term(WeylKey::new(hpow, Exponents::unit(i), 0), c);
        }
        w
    }

    /// `ħ^hpow ½ t_{ij} dx^i ∧ dx^j` for skew `t`.
    pub fn two_form(t: &Tensor2, hpow: u32, cap: u32) -> Self {
        let n = t.dim();
        let mut w = Self::zero(n, cap);
        for i in 0..n {
            for j in i + 1..n {
                w.add_term(WeylKey::new(hpow, Exponents::ZERO, (1 << i) | (1 << j)), t.get(i, j));
            }
        }
        w
    }

    /// The y-free 2-form part at `ħ^hpow` as a skew covariant tensor.
    pub fn two_form_tensor(&self, hpow: u32) -> Tensor2 {
        let n = self.dim;
        let mut t = Tensor2::zero(n, Variance::Covariant);
        for (key, c) in &self.terms {
            if key.hpow == hpow && key.y.is_zero() && key.form_degree() == 2 {
                let mut idx = key.form_indices();
                let (i, j) = (idx.next().unwrap(), idx.next().unwrap());
                t.set(i, j, t.get(i, j) + c);
                t.set(j, i, t.get(j, i) - c);
            }
        }
        t
    }

    /// The `ħ^hpow` part of the form `t_{ij} y^i dx^j`, read back as a tensor.
    pub fn y_dx_tensor(&self, hpow: u32) -> Tensor2 {
        let n = self.dim;
        let mut t = Tensor2::zero(n, Variance::Covariant);
        for (key, c) in &self.terms {
            if key.hpow == hpow && key.y.degree() == 1 && key.form_degree() == 1 {
                let i = (0..n).find(|&i| key.y.get(i) == 1).unwrap();
                let j = key.form_indices().next().unwrap();
                t.set(i, j, t.get(i, j) + c);
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// Same terms under a new cap; terms above it are dropped.
    pub fn with_cap(&self, cap: u32) -> Self {
        let terms = self.terms.iter().filter(|(k, _)| k.degree() <= cap).map(|(k, c)| (*k, c.clone())).collect();
        WeylForm { dim: self.dim, cap, terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&WeylKey, &CoordPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &WeylKey) -> CoordPoly {
        self.terms.get(key).cloned().unwrap_or_else(|| CoordPoly::zero(self.dim))
    }

    /// Adds `c` at `key`; dropped if above the cap.
    pub fn add_term(&mut self, key: WeylKey, c: &CoordPoly) {
        self.add_term_scaled(key, c, &Scalar::one());
    }

    pub fn add_term_scaled(&mut self, key: WeylKey, c: &CoordPoly, s: &Scalar) {
        if key.degree() > self.cap || c.is_zero() || s.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                let c = if s.is_one() { c.clone() } else { c.scale(s) };
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                o.get_mut().add_scaled(c, s);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += s·o`.
    pub fn add_scaled(&mut self, o: &WeylForm, s: &Scalar) {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        for (k, c) in &o.terms {
            self.add_term_scaled(*k, c, s);
        }
    }

    pub fn add_assign(&mut self, o: &WeylForm) {
        self.add_scaled(o, &Scalar::one());
    }

    /// Sum under the smaller cap.
    pub fn add(&self, o: &WeylForm) -> WeylForm {
        let mut out = self.with_cap(self.cap.min(o.cap));
        out.add_assign(o);
        out
    }

    pub fn sub(&self, o: &WeylForm) -> WeylForm {
        let mut out = self.with_cap(self.cap.min(o.cap));
        out.add_scaled(o, &Scalar::from_int(-1));
        out
    }

    pub fn try_add(&self, o: &WeylForm) -> Result<WeylForm> {
        same_dim(self.dim, o.dim)?;
        Ok(self.add(o))
    }

    pub fn scale(&self, s: &Scalar) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        out.add_scaled(self, s);
        out
    }

    pub fn neg(&self) -> WeylForm {
        self.scale(&Scalar::from_int(-1))
    }

    /// Multiplies every coefficient by the function `p(x)`.
    pub fn mul_poly(&self, p: &CoordPoly) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        for (k, c) in &self.terms {
            out.add_term(*k, &(c * p));
        }
        out
    }

    fn filtered(&self, keep: impl Fn(&WeylKey) -> bool) -> WeylForm {
        let terms = self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (*k, c.clone())).collect();
        WeylForm { dim: self.dim, cap: self.cap, terms }
    }

    /// Homogeneous part `a^{(n)}` of filtration degree `n`.
    pub fn part(&self, n: u32) -> WeylForm {
        self.filtered(|k| k.degree() == n)
    }

    /// `a_n = a^{(0)} + ⋯ + a^{(n)}`.
    pub fn truncated(&self, n: u32) -> WeylForm {
        self.filtered(|k| k.degree() <= n)
    }

    /// Part of exterior degree `q`.
    pub fn form_part(&self, q: u32) -> WeylForm {
        self.filtered(|k| k.form_degree() == q)
    }

    /// Part with the given ħ power.
    pub fn hbar_part(&self, h: u32) -> WeylForm {
        self.filtered(|k| k.hpow == h)
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylKey::degree).max()
    }

    /// Common exterior degree; `None` for zero.
    pub fn form_degree(&self) -> Result<Option<u32>> {
        let mut it = self.terms.keys().map(WeylKey::form_degree);
        let Some(q) = it.next() else { return Ok(None) };
        if it.all(|p| p == q) {
            Ok(Some(q))
        } else {
            Err(Error::NonHomogeneousForm)
        }
    }

    /// `ħ^k · self` (degrees rise by `2k`; terms over the cap are dropped).
    pub fn mul_hbar(&self, k: u32) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        for (key, c) in &self.terms {
            out.add_term(WeylKey { hpow: key.hpow + k, ..*key }, c);
        }
        out
    }

    /// `self / ħ`; every term must carry at least one ħ.
    pub fn div_hbar(&self) -> Result<WeylForm> {
        let mut out = Self::zero(self.dim, self.cap);
        for (key, c) in &self.terms {
            if key.hpow == 0 {
                return Err(Error::NotDivisibleByHbar);
            }
            out.add_term(WeylKey { hpow: key.hpow - 1, ..*key }, c);
        }
        Ok(out)
    }

    fn grouped(&self) -> Grouped<'_> {
        let mut map: BTreeMap<Exponents, Vec<(u32, u8, &CoordPoly)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            map.entry(k.y).or_default().push((k.hpow, k.form, c));
        }
        map.into_iter().collect()
    }

    fn product(&self, o: &WeylForm, s: &SymplecticForm, orders: Orders, cap: u32) -> WeylForm {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        assert_eq!(self.dim, s.dim(), "dimension mismatch");
        let mut out = Self::zero(self.dim, cap);
        let ga = self.grouped();
        let gb = o.grouped();
        let min_h = |g: &[(u32, u8, &CoordPoly)]| g.iter().map(|t| t.0).min().unwrap_or(0);
        for (ya, ta) in &ga {
            let ha_min = min_h(ta);
            for (yb, tb) in &gb {
                if 2 * (ha_min + min_h(tb)) + ya.degree() + yb.degree() > cap {
                    continue;
                }
                let list = contractions(s.bar_support(), *ya, *yb, orders);
                if list.is_empty() {
                    continue;
                }
                for &(ha, fa, ca) in ta {
                    for &(hb, fb, cb) in tb {
                        if 2 * (ha + hb) + ya.degree() + yb.degree() > cap {
                            continue;
                        }
                        let sign = wedge_sign(fa, fb);
                        if sign == 0 {
                            continue;
                        }
                        let prod = ca * cb;
                        let form = fa | fb;
                        for (k, y, c) in &list {
                            let c = if sign > 0 { c.clone() } else { -c };
                            out.add_term_scaled(WeylKey::new(ha + hb + k, *y, form), &prod, &c);
                        }
                    }
                }
            }
        }
        out
    }

    fn out_cap(&self, o: &WeylForm) -> u32 {
        self.cap.min(o.cap)
    }

    /// `a ∘_k b`.
    pub fn circ_k(&self, o: &WeylForm, k: u32, s: &SymplecticForm) -> WeylForm {
        self.product(o, s, Orders::Only(k), self.out_cap(o))
    }

    /// `a ∘ b = Σ_k a ∘_k b`.
    pub fn circ(&self, o: &WeylForm, s: &SymplecticForm) -> WeylForm {
        self.product(o, s, Orders::All, self.out_cap(o))
    }

    /// `Σ_{k odd} a ∘_k b` under an explicit cap.
    pub fn circ_odd(&self, o: &WeylForm, s: &SymplecticForm, cap: u32) -> WeylForm {
        self.product(o, s, Orders::Odd, cap)
    }

    /// `[a, b] = a∘b − (−1)^{q₁q₂} b∘a` for forms of homogeneous exterior degree.
    pub fn commutator(&self, o: &WeylForm, s: &SymplecticForm) -> Result<WeylForm> {
        let q1 = self.form_degree()?.unwrap_or(0);
        let q2 = o.form_degree()?.unwrap_or(0);
        let ab = self.circ(o, s);
        let ba = o.circ(self, s);
        let sign = if (q1 * q2) % 2 == 0 { -1 } else { 1 };
        let mut out = ab;
        out.add_scaled(&ba, &Scalar::from_int(sign));
        Ok(out)
    }

    /// `2 Σ_{k odd} a ∘_k b`, which is the graded commutator extended bilinearly.
    pub fn bracket(&self, o: &WeylForm, s: &SymplecticForm) -> WeylForm {
        self.circ_odd(o, s, self.out_cap(o)).scale(&Scalar::from_int(2))
    }

    /// `(i/ħ)[a, b]`, exact through `cap` (the product is formed two degrees higher).
    pub fn hbar_bracket(&self, o: &WeylForm, s: &SymplecticForm, cap: u32) -> WeylForm {
        let raw = self.circ_odd(o, s, cap + 2);
        let mut out = Self::zero(self.dim, cap);
        let two_i = Scalar::imag_ratio(2, 1);
        for (key, c) in &raw.terms {
            debug_assert!(key.hpow >= 1);
            out.add_term_scaled(WeylKey { hpow: key.hpow - 1, ..*key }, c, &two_i);
        }
        out
    }

    /// `σ(a ∘ b)` through `ħ^order`: only full y-contractions of 0-form parts survive.
    pub fn sigma_circ(&self, o: &WeylForm, s: &SymplecticForm, order: usize) -> HSeries<CoordPoly> {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        let mut coeffs = vec![CoordPoly::zero(self.dim); order + 1];
        let ga = self.form_part(0).grouped_owned();
        let gb = o.form_part(0).grouped_owned();
        for (ya, ta) in &ga {
            let k = ya.degree();
            for (yb, tb) in &gb {
                if yb.degree() != k || k as usize > order {
                    continue;
                }
                let list = contractions(s.bar_support(), *ya, *yb, Orders::Only(k));
                let total: Scalar = list.iter().map(|(_, _, c)| c.clone()).sum();
                if total.is_zero() {
                    continue;
                }
                for (ha, ca) in ta {
                    for (hb, cb) in tb {
                        let h = (ha + hb + k) as usize;
                        if h <= order {
                            coeffs[h].add_product(ca, cb, &total);
                        }
                    }
                }
            }
        }
        HSeries::from_coeffs(coeffs)
    }

    fn grouped_owned(&self) -> Vec<(Exponents, Vec<(u32, CoordPoly)>)> {
        let mut map: BTreeMap<Exponents, Vec<(u32, CoordPoly)>> = BTreeMap::new();
        for (k, c) in &self.terms {
            map.entry(k.y).or_default().push((k.hpow, c.clone()));
        }
        map.into_iter().collect()
    }

    /// `δa = dx^k ∧ ∂a/∂y^k`.
    pub fn delta(&self) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        for (key, c) in &self.terms {
            for k in 0..self.dim {
                let e = key.y.get(k);
                if e == 0 || key.form & (1 << k) != 0 {
                    continue;
                }
                let s = Scalar::from_int(e as i64 * slot_sign(key.form, k) as i64);
                let nk = WeylKey::new(key.hpow, key.y.lower(k).unwrap(), key.form | (1 << k));
                out.add_term_scaled(nk, c, &s);
            }
        }
        out
    }

    /// `δ⁻¹a = (1/(p+q)) y^k i(∂_{x^k}) a` on each piece of y-degree `q`
    /// and exterior degree `p`; pieces with `p+q = 0` go to zero.
    pub fn delta_inv(&self) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        for (key, c) in &self.terms {
            let p = key.form_degree();
            if p == 0 {
                continue;
            }
            let norm = p + key.y.degree();
            for k in key.form_indices() {
                let s = Scalar::ratio(slot_sign(key.form, k) as i64, norm as i64);
                let nk = WeylKey::new(key.hpow, key.y.raise(k), key.form & !(1 << k));
                out.add_term_scaled(nk, c, &s);
            }
        }
        out
    }

    /// `d a = dx^l ∧ ∂a/∂x^l`.
    pub fn d_x(&self) -> WeylForm {
        let mut out = Self::zero(self.dim, self.cap);
        for (key, c) in &self.terms {
            for l in 0..self.dim {
                if key.form & (1 << l) != 0 {
                    continue;
                }
                let dc = c.partial(l);
                if dc.is_zero() {
                    continue;
                }
                let nk = WeylKey { form: key.form | (1 << l), ..*key };
                out.add_term_scaled(nk, &dc, &Scalar::from_int(slot_sign(key.form, l) as i64));
            }
        }
        out
    }

    /// The y-free, form-free part: `σ(a) = a(x, 0, ħ)`.
    pub fn sigma_part(&self) -> WeylForm {
        self.filtered(|k| k.y.is_zero() && k.form == 0)
    }

    /// `σ(a)` as an ħ-series through `order`.
    pub fn sigma(&self, order: usize) -> HSeries<CoordPoly> {
        let mut coeffs = vec![CoordPoly::zero(self.dim); order + 1];
        for (key, c) in &self.terms {
            if key.y.is_zero() && key.form == 0 && (key.hpow as usize) <= order {
                coeffs[key.hpow as usize] = &coeffs[key.hpow as usize] + c;
            }
        }
        HSeries::from_coeffs(coeffs)
    }

    /// Canonical text: sorted monomials `hbar^k * (poly) * y1^a*... * dx_{i<j}`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(key, c)| {
                let mut factors = Vec::new();
                if key.hpow > 0 {
                    factors.push(format!("hbar^{}", key.hpow));
                }
                factors.push(format!("({c})"));
                if !key.y.is_zero() {
                    let ys: Vec<String> = (0..self.dim)
                        .filter(|&i| key.y.get(i) > 0)
                        .map(|i| match key.y.get(i) {
                            1 => format!("y{}", i + 1),
                            e => format!("y{}^{e}", i + 1),
                        })
                        .collect();
                    factors.push(ys.join("*"));
                }
                if key.form != 0 {
                    let idx: Vec<String> = key.form_indices().map(|i| (i + 1).to_string()).collect();
                    factors.push(format!("dx_{{{}}}", idx.join("<")));
                }
                factors.join(" * ")
            })
            .collect();
        parts.join(" + ")
    }
}

impl fmt::Display for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for WeylForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylForm[dim={}, cap={}]({})", self.dim, self.cap, self.to_text())
    }
}
