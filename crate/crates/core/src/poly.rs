//! Sparse multivariate polynomials over ℚ(i) in the chart coordinates
//! `x1 .. x{2d}`, with a canonical text form and its parser.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{same_dim, Error, Result};
use crate::scalar::Scalar;

/// Largest supported chart dimension `2d`.
pub const MAX_DIM: usize = 8;

/// Exponent vector; slots at or beyond the chart dimension stay zero.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponents([u8; MAX_DIM]);

impl Exponents {
    pub const ZERO: Exponents = Exponents([0; MAX_DIM]);

    pub fn from_slice(e: &[u8]) -> Self {
        assert!(e.len() <= MAX_DIM, "exponent vector longer than MAX_DIM");
        let mut out = [0u8; MAX_DIM];
        out[..e.len()].copy_from_slice(e);
        Exponents(out)
    }

    /// The monomial of a single variable `i` (0-based).
    pub fn unit(i: usize) -> Self {
        let mut out = [0u8; MAX_DIM];
        out[i] = 1;
        Exponents(out)
    }

    #[inline]
    pub fn get(&self, i: usize) -> u8 {
        self.0[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, e: u8) {
        self.0[i] = e;
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn add(&self, o: &Exponents) -> Exponents {
        let mut out = self.0;
        for (a, b) in out.iter_mut().zip(o.0.iter()) {
            *a = a.checked_add(*b).expect("exponent overflow");
        }
        Exponents(out)
    }

    /// Lowers the exponent of variable `i` by one, or `None` if it is zero.
    #[inline]
    pub fn lower(&self, i: usize) -> Option<Exponents> {
        if self.0[i] == 0 {
            return None;
        }
        let mut out = self.0;
        out[i] -= 1;
        Some(Exponents(out))
    }

    #[inline]
    pub fn raise(&self, i: usize) -> Exponents {
        let mut out = self.0;
        out[i] = out[i].checked_add(1).expect("exponent overflow");
        Exponents(out)
    }

    pub fn as_slice(&self, dim: usize) -> &[u8] {
        &self.0[..dim]
    }
}

impl fmt::Debug for Exponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim % 2 != 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

/// Polynomial in `x1 .. x{dim}` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoordPoly {
    dim: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl CoordPoly {
    pub fn zero(dim: usize) -> Self {
        assert!(dim <= MAX_DIM, "chart dimension {dim} exceeds MAX_DIM");
        CoordPoly { dim, terms: BTreeMap::new() }
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, Scalar::one())
    }

    pub fn constant(dim: usize, c: Scalar) -> Self {
        Self::monomial(dim, Exponents::ZERO, c)
    }

    /// The coordinate function `x{i+1}`.
    pub fn var(dim: usize, i: usize) -> Self {
        assert!(i < dim, "variable index out of range");
        Self::monomial(dim, Exponents::unit(i), Scalar::one())
    }

    pub fn monomial(dim: usize, exps: Exponents, c: Scalar) -> Self {
        let mut p = Self::zero(dim);
        p.add_term(exps, &c);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exponents) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Exponents::ZERO)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Exponents::is_zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Exponents::degree).max()
    }

    pub fn add_term(&mut self, e: Exponents, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_assign_ref(&mut self, o: &CoordPoly) {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        for (e, c) in &o.terms {
            self.add_term(*e, c);
        }
    }

    pub fn add_scaled(&mut self, o: &CoordPoly, s: &Scalar) {
        assert_eq!(self.dim, o.dim, "dimension mismatch");
        if s.is_zero() {
            return;
        }
        for (e, c) in &o.terms {
            self.add_term(*e, &(c * s));
        }
    }

    /// Accumulates `s · a · b` into `self`.
    pub fn add_product(&mut self, a: &CoordPoly, b: &CoordPoly, s: &Scalar) {
        debug_assert!(self.dim == a.dim && a.dim == b.dim);
        for (ea, ca) in &a.terms {
            let cas = ca * s;
            for (eb, cb) in &b.terms {
                self.add_term(ea.add(eb), &(&cas * cb));
            }
        }
    }

    pub fn try_add(&self, o: &CoordPoly) -> Result<CoordPoly> {
        same_dim(self.dim, o.dim)?;
        let mut out = self.clone();
        out.add_assign_ref(o);
        Ok(out)
    }

    pub fn try_sub(&self, o: &CoordPoly) -> Result<CoordPoly> {
        same_dim(self.dim, o.dim)?;
        let mut out = self.clone();
        out.add_scaled(o, &Scalar::from_int(-1));
        Ok(out)
    }

    pub fn try_mul(&self, o: &CoordPoly) -> Result<CoordPoly> {
        same_dim(self.dim, o.dim)?;
        let mut out = CoordPoly::zero(self.dim);
        out.add_product(self, o, &Scalar::one());
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> CoordPoly {
        if s.is_zero() {
            return CoordPoly::zero(self.dim);
        }
        CoordPoly { dim: self.dim, terms: self.terms.iter().map(|(e, c)| (*e, c * s)).collect() }
    }

    /// `∂/∂x{i+1}`.
    pub fn partial(&self, i: usize) -> CoordPoly {
        assert!(i < self.dim, "variable index out of range");
        let mut out = CoordPoly::zero(self.dim);
        for (e, c) in &self.terms {
            if let Some(lower) = e.lower(i) {
                out.add_term(lower, &(c * &Scalar::from_int(e.get(i) as i64)));
            }
        }
        out
    }

    pub fn try_partial(&self, i: usize) -> Result<CoordPoly> {
        if i >= self.dim {
            return Err(Error::UnknownVariable { index: i + 1, dim: self.dim });
        }
        Ok(self.partial(i))
    }

    pub fn pow(&self, n: u32) -> CoordPoly {
        let mut acc = CoordPoly::one(self.dim);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Same polynomial viewed in a chart of different dimension. Panics if a
    /// variable beyond `dim` occurs.
    pub fn with_dim(&self, dim: usize) -> CoordPoly {
        assert!(dim <= MAX_DIM);
        for e in self.terms.keys() {
            assert!(e.0[dim..].iter().all(|&x| x == 0), "variable out of range for new dimension");
        }
        CoordPoly { dim, terms: self.terms.clone() }
    }

    /// Canonical text form, terms in descending lexicographic exponent order.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

fn mono_text(dim: usize, e: &Exponents) -> String {
    let mut parts = Vec::new();
    for i in 0..dim {
        match e.get(i) {
            0 => {}
            1 => parts.push(format!("x{}", i + 1)),
            k => parts.push(format!("x{}^{}", i + 1, k)),
        }
    }
    parts.join("*")
}

fn term_text(c: &Scalar, mono: &str) -> String {
    if mono.is_empty() {
        return c.to_string();
    }
    if c.is_one() {
        return mono.to_string();
    }
    if (-c).is_one() {
        return format!("-{mono}");
    }
    format!("{c}*{mono}")
}

impl fmt::Display for CoordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mono = mono_text(self.dim, e);
            let parts = match (c.real_part().is_zero(), c.imag_part().is_zero()) {
                (false, false) => vec![c.real_part(), c.imag_part().mul_i()],
                _ => vec![c.clone()],
            };
            for part in parts {
                let t = term_text(&part, &mono);
                if !first && !t.starts_with('-') {
                    f.write_str("+")?;
                }
                f.write_str(&t)?;
                first = false;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for CoordPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_factor(tok: &str, dim: usize, coeff: &mut Scalar, exps: &mut Exponents) -> Result<()> {
    if tok.is_empty() {
        return Err(Error::Parse("empty factor".into()));
    }
    if tok == "i" {
        *coeff = coeff.mul_i();
        return Ok(());
    }
    if let Some(rest) = tok.strip_prefix('x') {
        let (idx, pow) = match rest.split_once('^') {
            Some((i, p)) => (i, Some(p)),
            None => (rest, None),
        };
        let index: usize = idx
            .parse()
            .ok()
            .filter(|_| idx.bytes().all(|b| b.is_ascii_digit()))
            .ok_or_else(|| Error::Parse(format!("bad variable `{tok}`")))?;
        if index == 0 || index > dim {
            return Err(Error::UnknownVariable { index, dim });
        }
        let pow: u8 = match pow {
            Some(p) if p.bytes().all(|b| b.is_ascii_digit()) && !p.is_empty() => {
                p.parse().map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?
            }
            Some(_) => return Err(Error::Parse(format!("bad exponent in `{tok}`"))),
            None => 1,
        };
        let slot = index - 1;
        let total = exps.get(slot).checked_add(pow).ok_or_else(|| Error::Parse("exponent overflow".into()))?;
        exps.set(slot, total);
        return Ok(());
    }
    if tok.starts_with('-') || tok.starts_with('+') {
        return Err(Error::Parse(format!("unexpected sign in factor `{tok}`")));
    }
    let c: Scalar = tok.parse()?;
    *coeff = &*coeff * &c;
    Ok(())
}

/// Parses the polynomial grammar: a `+`/`-` separated list of terms, each a
/// `*`-product of rationals (`a`, `a/b`), `i`, and variables `xJ` / `xJ^e`.
/// Whitespace is insignificant.
pub fn parse_poly(text: &str, dim: usize) -> Result<CoordPoly> {
    check_dim(dim)?;
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = CoordPoly::zero(dim);
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (pos, ch) in s.chars().enumerate() {
        if ch == '+' || ch == '-' {
            if pos > 0 {
                terms.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    terms.push((neg, cur));
    for (neg, body) in terms {
        if body.is_empty() {
            return Err(Error::Parse(format!("empty term in `{text}`")));
        }
        let mut coeff = if neg { Scalar::from_int(-1) } else { Scalar::one() };
        let mut exps = Exponents::ZERO;
        for tok in body.split('*') {
            parse_factor(tok, dim, &mut coeff, &mut exps)?;
        }
        out.add_term(exps, &coeff);
    }
    Ok(out)
}

impl<'a> Add<&'a CoordPoly> for &'a CoordPoly {
    type Output = CoordPoly;
    fn add(self, o: &CoordPoly) -> CoordPoly {
        self.try_add(o).expect("dimension mismatch")
    }
}

impl<'a> Sub<&'a CoordPoly> for &'a CoordPoly {
    type Output = CoordPoly;
    fn sub(self, o: &CoordPoly) -> CoordPoly {
        self.try_sub(o).expect("dimension mismatch")
    }
}

impl<'a> Mul<&'a CoordPoly> for &'a CoordPoly {
    type Output = CoordPoly;
    fn mul(self, o: &CoordPoly) -> CoordPoly {
        self.try_mul(o).expect("dimension mismatch")
    }
}

impl Neg for &CoordPoly {
    type Output = CoordPoly;
    fn neg(self) -> CoordPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &str) -> CoordPoly {
        parse_poly(t, 4).unwrap()
    }

    #[test]
    fn square_of_sum() {
        let s = p("x1+x2");
        assert_eq!((&s * &s).to_string(), "x1^2+2*x1*x2+x2^2");
    }

    #[test]
    fn partial_derivative() {
        assert_eq!(p("x1^2*x2").partial(0), p("2*x1*x2"));
        assert_eq!(p("x1^2*x2").try_partial(7), Err(Error::UnknownVariable { index: 8, dim: 4 }));
    }

    #[test]
    fn times_zero_is_empty() {
        let z = &p("3*x1 - x2^2") * &CoordPoly::zero(4);
        assert!(z.is_zero());
        assert_eq!(z.len(), 0);
        assert_eq!(z.to_string(), "0");
    }

    #[test]
    fn parse_single_term() {
        let q = p("3/2*x1^2*x2");
        assert_eq!(q.len(), 1);
        assert_eq!(q.coeff(&Exponents::from_slice(&[2, 1])), Scalar::ratio(3, 2));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(parse_poly("x9", 4), Err(Error::UnknownVariable { index: 9, dim: 4 }));
        assert!(matches!(parse_poly("", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("   ", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("1/0*x1", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("x1++x2", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("2**x1", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("x0", 4), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_poly("x1^", 4), Err(Error::Parse(_))));
        assert!(matches!(parse_poly("x1", 3), Err(Error::UnsupportedDimension(3))));
    }

    #[test]
    fn gaussian_coefficients_print_and_parse() {
        let q = p("1/2*x1 + 3/4*i*x1 - i + x2*x1*i");
        assert_eq!(q.to_string(), "i*x1*x2+1/2*x1+3/4*i*x1-i");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(p(" - x3 ^ 2 "), p("-x3^2"));
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = parse_poly("x1", 2).unwrap();
        let b = parse_poly("x1", 4).unwrap();
        assert_eq!(a.try_add(&b), Err(Error::DimensionMismatch { left: 2, right: 4 }));
        assert_eq!(a.try_mul(&b), Err(Error::DimensionMismatch { left: 2, right: 4 }));
    }
}
