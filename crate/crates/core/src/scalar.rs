//! Exact scalars: arbitrary-precision rationals and Gaussian rationals.

use alloc::string::String;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Reduced fraction with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat_frac(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Writes `p/q` in lowest terms, including `q = 1`.
pub fn format_rational(r: &Rational) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p`, `-p`, or `p/q` with integer `p`, nonzero `q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Input(alloc::format!("malformed rational `{s}`"));
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

/// Best rational approximation with denominator at most `max_den`, via
/// continued fractions. Returns `None` when the approximation misses `x`
/// by more than `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = libm::floor(v);
        if libm::fabs(a) > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let approx = h1 as f64 / k1 as f64;
        if libm::fabs(approx - x) <= tol * 1e-3 {
            break;
        }
        let frac = v - a;
        if libm::fabs(frac) < 1e-300 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if libm::fabs(approx - x) > tol {
        return None;
    }
    Some(Rational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// First continued-fraction convergent of `x` within `tol`, denominator at
/// most `max_den`. Coarse tolerances give the simplest nearby fraction.
pub fn first_convergent(x: f64, max_den: i64, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut v = x;
    for _ in 0..64 {
        let a = libm::floor(v);
        if libm::fabs(a) > 1e15 {
            return None;
        }
        let ai = a as i128;
        let (h2, k2) = (ai * h1 + h0, ai * k1 + k0);
        if k2 > max_den as i128 {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        if libm::fabs(h1 as f64 / k1 as f64 - x) <= tol {
            return Some(Rational::new(BigInt::from(h1), BigInt::from(k1)));
        }
        let frac = v - a;
        if libm::fabs(frac) < 1e-300 {
            return None;
        }
        v = 1.0 / frac;
    }
    None
}

/// `re + im·i` with exact rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(rat(re), rat(im))
    }

    pub fn real(re: Rational) -> Self {
        Self::new(re, Rational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        let n = self.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    /// Sum of the absolute values of both parts, as a float magnitude bound.
    pub fn abs_bound(&self) -> f64 {
        rat_to_f64(&self.re.abs()) + rat_to_f64(&self.im.abs())
    }
}

impl fmt::Display for GaussianRational {
    /// `(p/q)+(r/s)i`, always with both parts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}/{})+({}/{})i",
            self.re.numer(),
            self.re.denom(),
            self.im.numer(),
            self.im.denom()
        )
    }
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self::new(Rational::zero(), Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self::new(Rational::one(), Rational::zero())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_ints(n, 0)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::real(&self.re * &o.re);
        }
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Add for GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: GaussianRational) -> GaussianRational {
        &self + &o
    }
}

impl Sub for GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: GaussianRational) -> GaussianRational {
        &self - &o
    }
}

impl Mul for GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: GaussianRational) -> GaussianRational {
        &self * &o
    }
}

impl Div for GaussianRational {
    type Output = GaussianRational;
    /// Panics on division by zero, like the primitive types.
    fn div(self, o: GaussianRational) -> GaussianRational {
        &self * &o.inv().expect("division by zero")
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conjugate_product_is_norm() {
        let z = GaussianRational::new(rat_frac(3, 2), rat(-5));
        let p = &z * &z.conj();
        assert!(p.is_real());
        assert_eq!(p.re, z.norm_sqr());
        assert_eq!(z.conj().conj(), z);
    }

    #[test]
    fn inverse_and_zero_division() {
        let z = GaussianRational::from_ints(1, 1);
        assert_eq!(&z * &z.inv().unwrap(), GaussianRational::one());
        assert!(GaussianRational::zero().inv().is_err());
    }

    #[test]
    fn display_and_parse() {
        let z = GaussianRational::new(rat_frac(-2, 4), rat(3));
        assert_eq!(alloc::format!("{z}"), "(-1/2)+(3/1)i");
        assert_eq!(parse_rational(" -6/4 ").unwrap(), rat_frac(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), rat(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat(5)), "5/1");
        assert_eq!(format_rational(&rat_frac(5, -10)), "-1/2");
    }

    #[test]
    fn rationalize_recovers_small_fractions() {
        assert_eq!(rationalize(0.75, 1000, 1e-12), Some(rat_frac(3, 4)));
        assert_eq!(rationalize(-2.0 / 7.0, 1000, 1e-12), Some(rat_frac(-2, 7)));
        assert_eq!(rationalize(0.0, 1000, 1e-12), Some(rat(0)));
        assert_eq!(rationalize(core::f64::consts::SQRT_2, 1000, 1e-10), None);
    }
}
