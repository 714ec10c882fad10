//! Hermitian pencils `M(x) = M0 x0 + M1 x1 + M2 x2 + M3 x3` of 4×4 matrices
//! and their real symmetric 8×8 realification.

use alloc::string::ToString;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{input, Error, Result};
use crate::linalg;
use crate::matrix::{GMatrix, PolyMatrix};
use crate::poly::MultiPoly;
use crate::scalar::{GaussianRational, Rational};

/// Relative singular-value cutoff for floating-point rank decisions.
pub const RANK_TOL: f64 = 1e-8;

/// A 4×4 matrix equal to its conjugate transpose.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianMatrix(GMatrix);

impl HermitianMatrix {
    pub fn new(m: GMatrix) -> Result<Self> {
        if m.rows != 4 || m.cols != 4 {
            return input("Hermitian coefficient matrices are 4x4");
        }
        for i in 0..4 {
            for j in 0..4 {
                if *m.get(i, j) != m.get(j, i).conj() {
                    return Err(Error::NotHermitian(alloc::format!(
                        "entry ({i},{j}) is not the conjugate of entry ({j},{i})"
                    )));
                }
            }
        }
        Ok(Self(m))
    }

    pub fn identity() -> Self {
        Self(GMatrix::identity(4))
    }

    pub fn zero() -> Self {
        Self(GMatrix::zeros(4, 4))
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        self.0.get(i, j)
    }

    pub fn as_matrix(&self) -> &GMatrix {
        &self.0
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self(self.0.scale(&GaussianRational::real(r.clone())))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0))
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::from_integer(1.into()))
    }

    pub fn rank(&self) -> usize {
        self.0.rank()
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.0.data.iter().all(GaussianRational::is_real)
    }

    /// Real part `A` (symmetric) and imaginary part `B` (antisymmetric).
    pub fn parts(&self) -> ([[Rational; 4]; 4], [[Rational; 4]; 4]) {
        let a = core::array::from_fn(|i| core::array::from_fn(|j| self.get(i, j).re.clone()));
        let b = core::array::from_fn(|i| core::array::from_fn(|j| self.get(i, j).im.clone()));
        (a, b)
    }

    /// `[[A, Bᵀ], [B, A]]`.
    pub fn realify(&self) -> RealSymmetricMatrix {
        let (a, b) = self.parts();
        let mut m: [[Rational; 8]; 8] = core::array::from_fn(|_| core::array::from_fn(|_| Rational::zero()));
        for i in 0..4 {
            for j in 0..4 {
                m[i][j] = a[i][j].clone();
                m[i + 4][j + 4] = a[i][j].clone();
                m[i][j + 4] = b[j][i].clone();
                m[i + 4][j] = b[i][j].clone();
            }
        }
        RealSymmetricMatrix(m)
    }
}

/// A symmetric 8×8 rational matrix in the realified block layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSymmetricMatrix(pub [[Rational; 8]; 8]);

impl RealSymmetricMatrix {
    pub fn to_gmatrix(&self) -> GMatrix {
        GMatrix::new(
            8,
            8,
            self.0.iter().flatten().map(|r| GaussianRational::real(r.clone())).collect(),
        )
    }

    fn check_blocks(&self) -> Result<()> {
        let m = &self.0;
        for i in 0..8 {
            for j in 0..8 {
                if m[i][j] != m[j][i] {
                    return Err(Error::Structure("8x8 coefficient is not symmetric".to_string()));
                }
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                if m[i][j] != m[i + 4][j + 4] {
                    return Err(Error::Structure("diagonal blocks differ".to_string()));
                }
                if m[i + 4][j] != -m[i][j + 4].clone() || m[i + 4][j] != -m[j + 4][i].clone() {
                    return Err(Error::Structure("off-diagonal blocks are not ±B with B antisymmetric".to_string()));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DefinitenessVerdict {
    PositiveDefinite,
    NegativeDefinite,
    IndefiniteOrSingular,
}

impl DefinitenessVerdict {
    pub fn is_definite(self) -> bool {
        self != Self::IndefiniteOrSingular
    }

    /// `+1` for positive, `-1` for negative definite.
    pub fn sign(self) -> Option<f64> {
        match self {
            Self::PositiveDefinite => Some(1.0),
            Self::NegativeDefinite => Some(-1.0),
            Self::IndefiniteOrSingular => None,
        }
    }
}

/// Four Hermitian coefficient matrices, one per coordinate `x0..x3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianPencil {
    coeffs: [HermitianMatrix; 4],
}

impl HermitianPencil {
    pub fn new(coeffs: [HermitianMatrix; 4]) -> Self {
        Self { coeffs }
    }

    /// Reads coefficient matrices off a 4×4 matrix of linear forms in four
    /// variables, rejecting non-linear or non-Hermitian input.
    pub fn from_linear_matrix(m: &PolyMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 || m.num_vars() != 4 {
            return input("expected a 4x4 matrix of linear forms in 4 variables");
        }
        let mut data: [Vec<GaussianRational>; 4] = core::array::from_fn(|_| Vec::with_capacity(16));
        for i in 0..4 {
            for j in 0..4 {
                let lin = m
                    .get(i, j)
                    .linear_coeffs()
                    .ok_or_else(|| Error::Input(alloc::format!("entry ({i},{j}) is not linear")))?;
                for (k, c) in lin.into_iter().enumerate() {
                    data[k].push(c);
                }
            }
        }
        let mut out = Vec::with_capacity(4);
        for d in data {
            out.push(HermitianMatrix::new(GMatrix::new(4, 4, d))?);
        }
        let coeffs: [HermitianMatrix; 4] = out.try_into().expect("four coefficients");
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[HermitianMatrix; 4] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &HermitianMatrix {
        &self.coeffs[k]
    }

    pub fn is_real_symmetric(&self) -> bool {
        self.coeffs.iter().all(HermitianMatrix::is_real_symmetric)
    }

    /// `M(x)` as a matrix of linear forms.
    pub fn matrix(&self) -> PolyMatrix {
        PolyMatrix::from_fn(4, 4, |i, j| {
            let lin: Vec<GaussianRational> = self.coeffs.iter().map(|m| m.get(i, j).clone()).collect();
            MultiPoly::linear(&lin)
        })
        .expect("4x4")
    }

    /// `Σ x_k M_k` at an exact point.
    pub fn eval_exact(&self, x: &[GaussianRational]) -> Result<GMatrix> {
        if x.len() != 4 {
            return input("pencil points have four coordinates");
        }
        let mut acc = GMatrix::zeros(4, 4);
        for (m, xk) in self.coeffs.iter().zip(x) {
            if !xk.is_zero() {
                acc = acc.add(&m.0.scale(xk));
            }
        }
        Ok(acc)
    }

    /// `Σ x_k M_k` at a floating point, row-major.
    pub fn eval_c64(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), 4);
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); 16];
        for (m, &xk) in self.coeffs.iter().zip(x) {
            for (o, v) in out.iter_mut().zip(&m.0.data) {
                *o += v.to_c64() * xk;
            }
        }
        out
    }

    /// `f = det M(x)`, a homogeneous quartic with real coefficients.
    pub fn det(&self) -> Result<MultiPoly> {
        let f = self.matrix().determinant()?;
        if !f.has_real_coeffs() {
            return Err(Error::Invariant(
                "determinant of a Hermitian pencil has a non-real coefficient".to_string(),
            ));
        }
        Ok(f)
    }

    pub fn rank_at_exact(&self, x: &[GaussianRational]) -> Result<usize> {
        if x.iter().all(Zero::is_zero) {
            return input("rank at the zero vector");
        }
        Ok(self.eval_exact(x)?.rank())
    }

    /// Singular values above `tol × σ_max` of `M(x)`.
    pub fn rank_at_c64(&self, x: &[Complex64], tol: f64) -> Result<usize> {
        if x.iter().all(|v| v.norm() == 0.0) {
            return input("rank at the zero vector");
        }
        let sv = linalg::singular_values(&self.eval_c64(x), 4, 4);
        Ok(linalg::numeric_rank(&sv, tol))
    }

    /// Exact Sylvester test of `M(e)` at a real point.
    pub fn is_definite_at(&self, e: &[GaussianRational]) -> Result<DefinitenessVerdict> {
        if e.len() != 4 {
            return input("definite points have four coordinates");
        }
        if e.iter().any(|v| !v.is_real()) {
            return input("definite point must be real");
        }
        if e.iter().all(Zero::is_zero) {
            return input("definite point must be nonzero");
        }
        Ok(sylvester_verdict(&self.eval_exact(e)?))
    }

    pub fn realify(&self) -> RealSymmetricPencil {
        RealSymmetricPencil {
            coeffs: core::array::from_fn(|k| self.coeffs[k].realify()),
        }
    }

    /// Whether `det(A8(x)) = f(x)²` holds as an exact polynomial identity.
    pub fn verify_square_identity(&self) -> Result<bool> {
        let f = self.det()?;
        let big = self.realify().matrix().determinant()?;
        Ok(big == &f * &f)
    }
}

/// Leading-principal-minor classification of an exact Hermitian matrix.
pub fn sylvester_verdict(m: &GMatrix) -> DefinitenessVerdict {
    let minors = m.leading_principal_minors();
    // Hermitian leading minors are real.
    if minors.iter().all(|d| d.re.is_positive()) {
        return DefinitenessVerdict::PositiveDefinite;
    }
    let alternating = minors.iter().enumerate().all(|(k, d)| {
        if k % 2 == 0 {
            d.re.is_negative()
        } else {
            d.re.is_positive()
        }
    });
    if alternating {
        DefinitenessVerdict::NegativeDefinite
    } else {
        DefinitenessVerdict::IndefiniteOrSingular
    }
}

/// Four real symmetric 8×8 coefficients in the realified block layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealSymmetricPencil {
    coeffs: [RealSymmetricMatrix; 4],
}

impl RealSymmetricPencil {
    pub fn new(coeffs: [RealSymmetricMatrix; 4]) -> Result<Self> {
        for c in &coeffs {
            c.check_blocks()?;
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[RealSymmetricMatrix; 4] {
        &self.coeffs
    }

    pub fn matrix(&self) -> PolyMatrix {
        PolyMatrix::from_fn(8, 8, |i, j| {
            let lin: Vec<GaussianRational> = self
                .coeffs
                .iter()
                .map(|m| GaussianRational::real(m.0[i][j].clone()))
                .collect();
            MultiPoly::linear(&lin)
        })
        .expect("8x8")
    }

    pub fn eval_exact(&self, x: &[GaussianRational]) -> Result<GMatrix> {
        if x.len() != 4 {
            return input("pencil points have four coordinates");
        }
        let mut acc = GMatrix::zeros(8, 8);
        for (m, xk) in self.coeffs.iter().zip(x) {
            if !xk.is_zero() {
                acc = acc.add(&m.to_gmatrix().scale(xk));
            }
        }
        Ok(acc)
    }
}
