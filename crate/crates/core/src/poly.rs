//! Sparse multivariate polynomials over the Gaussian rationals.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::scalar::{GaussianRational, Rational};

/// Exponent vector, ordered graded-lexicographically (total degree first,
/// then lexicographic with `x0` most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Monomial {
    pub fn one(num_vars: usize) -> Self {
        Monomial(vec![0; num_vars])
    }

    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut e = vec![0; num_vars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then_with(|| self.0.cmp(&o.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial in `num_vars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    num_vars: usize,
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl MultiPoly {
    pub fn zero(num_vars: usize) -> Self {
        Self {
            num_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(num_vars: usize, c: GaussianRational) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::one(num_vars), c);
        p
    }

    pub fn one(num_vars: usize) -> Self {
        Self::constant(num_vars, GaussianRational::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(num_vars: usize, i: usize) -> Self {
        let mut p = Self::zero(num_vars);
        p.add_term(Monomial::var(num_vars, i), GaussianRational::one());
        p
    }

    /// `Σ c_i x_i`.
    pub fn linear(coeffs: &[GaussianRational]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(
        num_vars: usize,
        terms: impl IntoIterator<Item = (Vec<u8>, GaussianRational)>,
    ) -> Result<Self> {
        let mut p = Self::zero(num_vars);
        for (e, c) in terms {
            if e.len() != num_vars {
                return input("exponent vector length does not match num_vars");
            }
            p.add_term(Monomial(e), c);
        }
        Ok(p)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: GaussianRational) {
        debug_assert_eq!(m.0.len(), self.num_vars);
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn has_real_coeffs(&self) -> bool {
        self.terms.values().all(GaussianRational::is_real)
    }

    /// Indices of variables that occur with positive exponent.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vars)
            .filter(|&i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect()
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if self.num_vars != o.num_vars {
            return input(alloc::format!(
                "mismatched num_vars: {} vs {}",
                self.num_vars,
                o.num_vars
            ));
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut r = self.clone();
        for (m, c) in &o.terms {
            r.add_term(m.clone(), -c);
        }
        Ok(r)
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut r = Self::zero(self.num_vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                r.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.num_vars);
        }
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.num_vars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Coefficient-wise complex conjugate.
    pub fn conj(&self) -> Self {
        Self {
            num_vars: self.num_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut r = Self::zero(self.num_vars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            r.add_term(dm, c * &GaussianRational::from(e as i64));
        }
        r
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.num_vars).map(|i| self.derivative(i)).collect()
    }

    /// Symmetric matrix of second partials, row-major `n × n`.
    pub fn hessian(&self) -> Vec<Vec<Self>> {
        let g = self.gradient();
        g.iter()
            .map(|gi| (0..self.num_vars).map(|j| gi.derivative(j)).collect())
            .collect()
    }

    pub fn eval_exact(&self, x: &[GaussianRational]) -> Result<GaussianRational> {
        if x.len() != self.num_vars {
            return input("point length does not match num_vars");
        }
        let mut powers: Vec<Vec<GaussianRational>> = x.iter().map(|v| vec![GaussianRational::one(), v.clone()]).collect();
        let mut acc = GaussianRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &x[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t *= &powers[i][e];
                }
            }
            acc += &t;
        }
        Ok(acc)
    }

    pub fn eval_c64(&self, x: &[Complex64]) -> Complex64 {
        assert_eq!(x.len(), self.num_vars, "point length does not match num_vars");
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = c.to_c64();
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= x[i].powu(e as u32);
                }
            }
            acc += t;
        }
        acc
    }

    /// `Σ |coefficient|` (as `|re| + |im|`), a scale for residuals.
    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.values().map(GaussianRational::abs_bound).sum()
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn compose(&self, images: &[MultiPoly]) -> Result<Self> {
        if images.len() != self.num_vars {
            return input("compose needs one image per variable");
        }
        let n = match images.first() {
            Some(p) => p.num_vars,
            None => return Ok(self.clone()),
        };
        if images.iter().any(|p| p.num_vars != n) {
            return input("compose images must share num_vars");
        }
        let mut powers: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![MultiPoly::one(n), p.clone()]).collect();
        let mut r = Self::zero(n);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(n, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                if e > 0 {
                    t = &t * &powers[i][e];
                }
            }
            r = &r + &t;
        }
        Ok(r)
    }

    /// Coefficients of a homogeneous linear form, or `None` if the
    /// polynomial is not one (zero counts as linear).
    pub fn linear_coeffs(&self) -> Option<Vec<GaussianRational>> {
        if !self.is_homogeneous(1) {
            return None;
        }
        Some(
            (0..self.num_vars)
                .map(|i| self.coeff(&Monomial::var(self.num_vars, i)))
                .collect(),
        )
    }

    /// Real rational coefficients, if all imaginary parts vanish.
    pub fn real_coeffs(&self) -> Option<Vec<(Monomial, Rational)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_real().then(|| (m.clone(), c.re.clone())))
            .collect()
    }

    /// Text form: terms in descending graded-lex order joined by ` + `,
    /// each written `(p/q)+(r/s)i * x0^a x1^b ...`.
    pub fn to_text(&self) -> String {
        use core::fmt::Write;
        if self.terms.is_empty() {
            return String::from("0");
        }
        let mut s = String::new();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            if k > 0 {
                s.push_str(" + ");
            }
            let _ = write!(s, "{c}");
            let vars: Vec<String> = m
                .0
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| alloc::format!("x{i}^{e}"))
                .collect();
            if !vars.is_empty() {
                s.push_str(" * ");
                s.push_str(&vars.join(" "));
            }
        }
        s
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    /// Panics on mismatched variable counts; see [`MultiPoly::try_add`].
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.try_add(o).expect("mismatched num_vars")
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.try_sub(o).expect("mismatched num_vars")
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.try_mul(o).expect("mismatched num_vars")
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-GaussianRational::one())
    }
}

/// Floating-point evaluator for a polynomial, built once and evaluated many
/// times on the solver's hot path.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    num_vars: usize,
    max_exp: Vec<usize>,
    terms: Vec<(Vec<u8>, Complex64)>,
}

impl CompiledPoly {
    pub fn new(p: &MultiPoly) -> Self {
        let n = p.num_vars();
        let mut max_exp = vec![0usize; n];
        let terms: Vec<(Vec<u8>, Complex64)> = p
            .terms()
            .map(|(m, c)| {
                for (i, &e) in m.0.iter().enumerate() {
                    max_exp[i] = max_exp[i].max(e as usize);
                }
                (m.0.clone(), c.to_c64())
            })
            .collect();
        Self {
            num_vars: n,
            max_exp,
            terms,
        }
    }

    /// Rescales the coefficients so the largest modulus is one.
    pub fn normalized(mut self) -> Self {
        let m = self.terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max);
        if m > 0.0 {
            for (_, c) in &mut self.terms {
                *c /= m;
            }
        }
        self
    }

    pub fn scale(mut self, s: Complex64) -> Self {
        for (_, c) in &mut self.terms {
            *c *= s;
        }
        self
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn coeff_abs_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        let pw = self.power_table(x);
        self.eval_with(&pw)
    }

    pub(crate) fn power_table(&self, x: &[Complex64]) -> Vec<Vec<Complex64>> {
        x.iter()
            .zip(&self.max_exp)
            .map(|(&v, &m)| {
                let mut row = Vec::with_capacity(m + 1);
                let mut p = Complex64::new(1.0, 0.0);
                row.push(p);
                for _ in 0..m {
                    p *= v;
                    row.push(p);
                }
                row
            })
            .collect()
    }

    pub(crate) fn eval_with(&self, pw: &[Vec<Complex64>]) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t *= pw[i][k as usize];
                }
            }
            acc += t;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(4, i)
    }

    fn c(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_ints(re, im)
    }

    #[test]
    fn difference_of_squares() {
        let p = &(&x(0) + &x(1)) * &(&x(0) - &x(1));
        let q = &x(0).pow(2) - &x(1).pow(2);
        assert_eq!(p, q);
    }

    #[test]
    fn times_zero_is_zero() {
        let f = &x(0).pow(3) + &x(2);
        assert!((&f * &MultiPoly::zero(4)).is_zero());
    }

    #[test]
    fn gaussian_conjugate_product() {
        let a = &x(0) + &x(1).scale(&c(0, 1));
        let b = &x(0) - &x(1).scale(&c(0, 1));
        assert_eq!(&a * &b, &x(0).pow(2) + &x(1).pow(2));
    }

    #[test]
    fn mismatched_vars_rejected() {
        let a = MultiPoly::var(3, 0);
        assert!(a.try_add(&x(0)).is_err());
        assert!(a.try_mul(&x(0)).is_err());
    }

    #[test]
    fn gradient_and_hessian() {
        let f = &x(0).pow(2) * &x(1).pow(2);
        let g = f.gradient();
        assert_eq!(g[0], (&(&x(0) * &x(1)) * &x(1)).scale(&c(2, 0)));
        assert_eq!(g[1], (&(&x(0) * &x(0)) * &x(1)).scale(&c(2, 0)));
        assert!(g[2].is_zero() && g[3].is_zero());
        let h = (&x(0).pow(2) + &x(1).pow(2)).hessian();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j && i < 2 { MultiPoly::constant(4, c(2, 0)) } else { MultiPoly::zero(4) };
                assert_eq!(h[i][j], want);
            }
        }
    }

    #[test]
    fn euler_identity_on_quartic() {
        let f = &(&x(0).pow(4) + &(&x(1) * &x(2).pow(3)).scale(&c(3, -2))) + &(&x(3).pow(2) * &x(0).pow(2));
        let g = f.gradient();
        let mut euler = MultiPoly::zero(4);
        for (i, gi) in g.iter().enumerate() {
            euler = &euler + &(&x(i) * gi);
        }
        assert!((&euler - &f.scale(&c(4, 0))).is_zero());
    }

    #[test]
    fn evaluation() {
        let f = &(&x(0) * &x(1)) * &(&x(2) * &x(3));
        assert_eq!(f.eval_exact(&[c(1, 0), c(1, 0), c(1, 0), c(1, 0)]).unwrap(), c(1, 0));
        let q = &x(0).pow(2) + &x(1).pow(2);
        assert!(q.eval_exact(&[c(1, 0), c(0, 1), c(0, 0), c(0, 0)]).unwrap().is_zero());
        let z = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert!(q.eval_c64(&[one, z, zero, zero]).norm() < 1e-15);
        assert!(f.eval_exact(&[c(1, 0)]).is_err());
    }

    #[test]
    fn compose_restricts_to_a_line() {
        // f(x0, x1) = x0 x1 on x0 = t, x1 = 1 - t
        let f = &MultiPoly::var(2, 0) * &MultiPoly::var(2, 1);
        let t = MultiPoly::var(1, 0);
        let one = MultiPoly::one(1);
        let g = f.compose(&[t.clone(), &one - &t]).unwrap();
        assert_eq!(g, &t - &t.pow(2));
    }

    #[test]
    fn text_form_is_graded_lex_descending() {
        let f = &(&x(1) + &x(0).pow(2)) + &MultiPoly::constant(4, GaussianRational::real(rat(3)));
        assert_eq!(f.to_text(), "(1/1)+(0/1)i * x0^2 + (1/1)+(0/1)i * x1^1 + (3/1)+(0/1)i");
    }

    #[test]
    fn compiled_matches_exact() {
        let f = &(&x(0).pow(3) + &(&x(1) * &x(2)).scale(&c(2, 5))) - &x(3).pow(4);
        let cf = CompiledPoly::new(&f);
        let p = [Complex64::new(0.3, -1.0), Complex64::new(2.0, 0.5), Complex64::new(-1.0, 0.25), Complex64::new(0.7, 0.7)];
        assert!((cf.eval(&p) - f.eval_c64(&p)).norm() < 1e-12);
    }
}
