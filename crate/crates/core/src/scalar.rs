//! Exact Gaussian rationals `re + im·i` with `re, im ∈ ℚ`.
//!
//! Rationals are kept in lowest terms with a positive denominator. Values
//! that fit in `i64` take a fast path and transparently promote to
//! arbitrary precision on overflow, so equality is structural.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Rat {
    Small(Ratio<i64>),
    Big(BigRational),
}

impl Rat {
    const ZERO: Rat = Rat::Small(Ratio::new_raw(0, 1));
    const ONE: Rat = Rat::Small(Ratio::new_raw(1, 1));

    fn small(r: Ratio<i64>) -> Rat {
        if *r.numer() == i64::MIN || *r.denom() == i64::MIN {
            Rat::Big(BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
        } else {
            Rat::Small(r)
        }
    }

    fn big(r: BigRational) -> Rat {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) if n != i64::MIN && d != i64::MIN => Rat::Small(Ratio::new_raw(n, d)),
            _ => Rat::Big(r),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rat::Small(r) => BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom())),
            Rat::Big(r) => r.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_zero(),
            Rat::Big(r) => r.is_zero(),
        }
    }

    fn is_one(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_one(),
            Rat::Big(r) => r.is_one(),
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Rat::Small(r) => r.is_negative(),
            Rat::Big(r) => r.is_negative(),
        }
    }

    fn add(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = a.checked_add(b) {
                return Rat::small(r);
            }
        }
        Rat::big(self.to_big() + o.to_big())
    }

    fn sub(&self, o: &Rat) -> Rat {
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = a.checked_sub(b) {
                return Rat::small(r);
            }
        }
        Rat::big(self.to_big() - o.to_big())
    }

    fn mul(&self, o: &Rat) -> Rat {
        if self.is_zero() || o.is_zero() {
            return Rat::ZERO;
        }
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = a.checked_mul(b) {
                return Rat::small(r);
            }
        }
        Rat::big(self.to_big() * o.to_big())
    }

    fn div(&self, o: &Rat) -> Rat {
        debug_assert!(!o.is_zero());
        if let (Rat::Small(a), Rat::Small(b)) = (self, o) {
            if let Some(r) = a.checked_div(b) {
                return Rat::small(r);
            }
        }
        Rat::big(self.to_big() / o.to_big())
    }

    fn neg(&self) -> Rat {
        match self {
            Rat::Small(r) => Rat::small(-*r),
            Rat::Big(r) => Rat::big(-r),
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rat::Small(r) => write!(f, "{r}"),
            Rat::Big(r) => write!(f, "{r}"),
        }
    }
}

/// Exact element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    re: Rat,
    im: Rat,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: Rat::ZERO, im: Rat::ZERO }
    }

    pub fn one() -> Self {
        Scalar { re: Rat::ONE, im: Rat::ZERO }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar { re: Rat::ZERO, im: Rat::ONE }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: Rat::small(Ratio::from_integer(n)), im: Rat::ZERO }
    }

    /// `num/den`. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar { re: Rat::small(Ratio::new(num, den)), im: Rat::ZERO }
    }

    /// `(num/den)·i`. Panics if `den == 0`.
    pub fn imag_ratio(num: i64, den: i64) -> Self {
        Scalar { re: Rat::ZERO, im: Rat::small(Ratio::new(num, den)) }
    }

    pub fn from_parts(re: BigRational, im: BigRational) -> Self {
        Scalar { re: Rat::big(re), im: Rat::big(im) }
    }

    pub fn re(&self) -> BigRational {
        self.re.to_big()
    }

    pub fn im(&self) -> BigRational {
        self.im.to_big()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: self.im.neg() }
    }

    /// `|z|²`, a real scalar.
    pub fn norm_sqr(&self) -> Scalar {
        Scalar { re: self.re.mul(&self.re).add(&self.im.mul(&self.im)), im: Rat::ZERO }
    }

    pub fn mul_i(&self) -> Self {
        Scalar { re: self.im.neg(), im: self.re.clone() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.im.is_zero() {
            return Ok(Scalar { re: Rat::ONE.div(&self.re), im: Rat::ZERO });
        }
        let n = self.re.mul(&self.re).add(&self.im.mul(&self.im));
        Ok(Scalar { re: self.re.div(&n), im: self.im.neg().div(&n) })
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Self> {
        if other.im.is_zero() {
            if other.re.is_zero() {
                return Err(Error::DivisionByZero);
            }
            return Ok(Scalar { re: self.re.div(&other.re), im: self.im.div(&other.re) });
        }
        Ok(self * &other.inv()?)
    }

    /// `self^n` for `n ≥ 0`.
    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Canonical text: `a`, `a/b`, `a/b*i`, or `re+im*i` (no spaces).
    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub(crate) fn real_part(&self) -> Scalar {
        Scalar { re: self.re.clone(), im: Rat::ZERO }
    }

    pub(crate) fn imag_part(&self) -> Scalar {
        Scalar { re: self.im.clone(), im: Rat::ZERO }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

fn fmt_imag(im: &Rat, f: &mut fmt::Formatter<'_>, leading: bool) -> fmt::Result {
    if im.is_negative() {
        f.write_str("-")?;
    } else if !leading {
        f.write_str("+")?;
    }
    let abs = im.neg();
    let abs = if im.is_negative() { &abs } else { im };
    if abs.is_one() {
        f.write_str("i")
    } else {
        write!(f, "{abs}*i")
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => fmt_imag(&self.im, f, true),
            (false, false) => {
                write!(f, "{}", self.re)?;
                fmt_imag(&self.im, f, false)
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let valid = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !valid(n) || d.is_some_and(|d| d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit())) {
        return Err(bad());
    }
    let num: BigInt = n.parse().map_err(|_| bad())?;
    let den: BigInt = match d {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in `{s}`")));
    }
    Ok(Rat::big(BigRational::new(num, den)))
}

/// Parses `a`, `a/b`, `i`, `a*i`, `a/b*i`, optionally signed, and `re±im*i`.
/// Whitespace is ignored.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        if let Some(pos) = s.rfind(['+', '-']).filter(|&p| p > 0 && s.ends_with('i')) {
            let re: Scalar = s[..pos].parse()?;
            let im: Scalar = s[pos..].parse()?;
            if !re.im.is_zero() || !im.re.is_zero() {
                return Err(Error::Parse(format!("malformed complex `{s}`")));
            }
            return Ok(&re + &im);
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.strip_prefix('+').unwrap_or(&s)),
        };
        let value = if body == "i" {
            Scalar::i()
        } else if let Some(r) = body.strip_suffix("*i") {
            Scalar { re: Rat::ZERO, im: parse_rat(r)? }
        } else {
            Scalar { re: parse_rat(body)?, im: Rat::ZERO }
        };
        Ok(if neg { -value } else { value })
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar { re: Rat::big(r), im: Rat::ZERO }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        Scalar { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        Scalar { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (self.im.is_zero(), o.im.is_zero()) {
            (true, true) => Scalar { re: self.re.mul(&o.re), im: Rat::ZERO },
            (true, false) => Scalar { re: self.re.mul(&o.re), im: self.re.mul(&o.im) },
            (false, true) => Scalar { re: self.re.mul(&o.re), im: self.im.mul(&o.re) },
            (false, false) => Scalar {
                re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
                im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
            },
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: self.re.neg(), im: self.im.neg() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, o: &Scalar) {
        *self = &*self * o;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn gaussian_norm() {
        let a = Scalar::one() + Scalar::i();
        let b = Scalar::one() - Scalar::i();
        assert_eq!(a * b, Scalar::from_int(2));
    }

    #[test]
    fn rational_sum() {
        assert_eq!(Scalar::ratio(1, 2) + Scalar::ratio(1, 3), Scalar::ratio(5, 6));
    }

    #[test]
    fn i_squared() {
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(Scalar::one().checked_div(&Scalar::zero()), Err(Error::DivisionByZero));
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn lowest_terms() {
        assert_eq!(Scalar::ratio(4, -6), Scalar::ratio(-2, 3));
        assert_eq!(Scalar::ratio(4, -6).to_string(), "-2/3");
    }

    #[test]
    fn overflow_promotes_and_demotes() {
        let big = Scalar::from_int(i64::MAX);
        let sq = &big * &big;
        assert_eq!(sq.checked_div(&big).unwrap(), big);
        let back = &(&sq - &sq) + &Scalar::one();
        assert_eq!(back, Scalar::one());
        let tiny = Scalar::ratio(1, i64::MAX);
        assert_eq!(&(&tiny * &tiny) * &sq, Scalar::one());
    }

    #[test]
    fn complex_division() {
        let a = Scalar::ratio(3, 2) + Scalar::imag_ratio(-1, 5);
        let b = Scalar::ratio(-2, 7) + Scalar::imag_ratio(4, 3);
        let q = a.checked_div(&b).unwrap();
        assert_eq!(q * b, a);
    }

    #[test]
    fn text_forms() {
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!((-Scalar::i()).to_string(), "-i");
        assert_eq!(Scalar::imag_ratio(3, 2).to_string(), "3/2*i");
        let z = Scalar::ratio(1, 2) + Scalar::imag_ratio(-3, 4);
        assert_eq!(z.to_string(), "1/2-3/4*i");
        for t in ["0", "-7", "3/2", "i", "-i", "-5/3*i", "12*i"] {
            assert_eq!(s(t).to_string(), t);
        }
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "1/0", "3/", "/2", "a", "1.5", "--1"] {
            assert!(bad.parse::<Scalar>().is_err(), "{bad}");
        }
    }
}
