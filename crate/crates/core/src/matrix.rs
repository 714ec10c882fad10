//! Matrices of polynomials and exact dense matrices over the Gaussian rationals.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{input, Result};
use crate::poly::MultiPoly;
use crate::scalar::{GaussianRational, Rational};

/// Dense `rows × cols` grid of polynomials sharing one variable count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    cols: usize,
    num_vars: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<MultiPoly>) -> Result<Self> {
        if entries.len() != rows * cols {
            return input("entry count does not match shape");
        }
        let num_vars = entries.first().map(MultiPoly::num_vars).unwrap_or(0);
        if entries.iter().any(|e| e.num_vars() != num_vars) {
            return input("matrix entries must share num_vars");
        }
        Ok(Self {
            rows,
            cols,
            num_vars,
            entries,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> MultiPoly,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn get(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[MultiPoly] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone()).expect("shape")
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self.get(i, j).conj()).expect("shape")
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return input("inner dimensions differ");
        }
        if self.num_vars != o.num_vars {
            return input("mismatched num_vars");
        }
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = MultiPoly::zero(self.num_vars);
            for k in 0..self.cols {
                acc = &acc + &(self.get(i, k) * o.get(k, j));
            }
            acc
        })
    }

    /// Removes at most one row and one column.
    pub fn submatrix(&self, drop_row: Option<usize>, drop_col: Option<usize>) -> Result<Self> {
        if drop_row.is_some_and(|r| r >= self.rows) || drop_col.is_some_and(|c| c >= self.cols) {
            return input("drop index out of range");
        }
        let keep_r: Vec<usize> = (0..self.rows).filter(|&i| Some(i) != drop_row).collect();
        let keep_c: Vec<usize> = (0..self.cols).filter(|&j| Some(j) != drop_col).collect();
        Self::from_fn(keep_r.len(), keep_c.len(), |i, j| {
            self.get(keep_r[i], keep_c[j]).clone()
        })
    }

    /// Exact determinant by Laplace expansion, memoised over column
    /// subsets: `D[S]` is the minor on the first `|S|` rows and columns `S`.
    pub fn determinant(&self) -> Result<MultiPoly> {
        if self.rows != self.cols {
            return input("determinant of a non-square matrix");
        }
        let n = self.rows;
        if n == 0 {
            return Ok(MultiPoly::one(self.num_vars));
        }
        if n > 16 {
            return input("determinant supports at most 16 columns");
        }
        let mut layer: Vec<Option<MultiPoly>> = vec![None; 1 << n];
        layer[0] = Some(MultiPoly::one(self.num_vars));
        for r in 0..n {
            let mut next: Vec<Option<MultiPoly>> = vec![None; 1 << n];
            for mask in 0usize..(1 << n) {
                if mask.count_ones() as usize != r + 1 {
                    continue;
                }
                let mut acc = MultiPoly::zero(self.num_vars);
                for j in 0..n {
                    if mask & (1 << j) == 0 {
                        continue;
                    }
                    let entry = self.get(r, j);
                    if entry.is_zero() {
                        continue;
                    }
                    let rest = mask & !(1 << j);
                    let Some(sub) = &layer[rest] else { continue };
                    if sub.is_zero() {
                        continue;
                    }
                    let t = entry * sub;
                    let above = (mask >> (j + 1)).count_ones();
                    acc = if above % 2 == 0 { &acc + &t } else { &acc - &t };
                }
                next[mask] = Some(acc);
            }
            layer = next;
        }
        Ok(layer[(1 << n) - 1].take().expect("full mask computed"))
    }

    /// All 3×3 minors. A 4×4 input yields sixteen minors in row-major order
    /// of the deleted `(row, col)`; a 4×3 input yields four, indexed by the
    /// deleted row; a 3×4 input yields four, indexed by the deleted column.
    pub fn minors_3x3(&self) -> Result<Vec<MultiPoly>> {
        match (self.rows, self.cols) {
            (4, 4) => {
                let mut out = Vec::with_capacity(16);
                for r in 0..4 {
                    for c in 0..4 {
                        out.push(self.submatrix(Some(r), Some(c))?.determinant()?);
                    }
                }
                Ok(out)
            }
            (4, 3) => (0..4)
                .map(|r| self.submatrix(Some(r), None)?.determinant())
                .collect(),
            (3, 4) => (0..4)
                .map(|c| self.submatrix(None, Some(c))?.determinant())
                .collect(),
            (r, c) => input(alloc::format!("3x3 minors need a 4x4, 4x3 or 3x4 matrix, got {r}x{c}")),
        }
    }

    pub fn eval_exact(&self, x: &[GaussianRational]) -> Result<GMatrix> {
        let data = self
            .entries
            .iter()
            .map(|e| e.eval_exact(x))
            .collect::<Result<Vec<_>>>()?;
        Ok(GMatrix::new(self.rows, self.cols, data))
    }

    pub fn eval_c64(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.entries.iter().map(|e| e.eval_c64(x)).collect()
    }
}

/// Dense exact matrix over the Gaussian rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<GaussianRational>,
}

impl GMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<GaussianRational>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![GaussianRational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = GaussianRational::one();
        }
        m
    }

    pub fn from_ints(rows: usize, cols: usize, re: &[i64], im: &[i64]) -> Self {
        Self::new(
            rows,
            cols,
            re.iter()
                .zip(im)
                .map(|(&a, &b)| GaussianRational::from_ints(a, b))
                .collect(),
        )
    }

    pub fn get(&self, i: usize, j: usize) -> &GaussianRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: GaussianRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut m = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a * o.get(k, j);
                    m.data[i * o.cols + j] += &t;
                }
            }
        }
        m
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.rows,
            self.cols,
            self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|a| a * c).collect())
    }

    pub fn to_c64(&self) -> Vec<Complex64> {
        self.data.iter().map(GaussianRational::to_c64).collect()
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let t = &factor * m.get(row, j);
                    m.data[r * m.cols + j] -= &t;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space.
    pub fn kernel(&self) -> Vec<Vec<GaussianRational>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![GaussianRational::zero(); self.cols];
                v[f] = GaussianRational::one();
                for (k, &p) in pivots.iter().enumerate() {
                    v[p] = -r.get(k, f);
                }
                v
            })
            .collect()
    }

    pub fn determinant(&self) -> GaussianRational {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut m = self.clone();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return GaussianRational::zero();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = -det;
            }
            let piv = m.get(col, col).clone();
            det *= &piv;
            let inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) * &inv;
                for j in col..n {
                    let t = &factor * m.get(col, j);
                    m.data[r * n + j] -= &t;
                }
            }
        }
        det
    }

    /// Determinants of the top-left `k × k` blocks, `k = 1..=n`.
    pub fn leading_principal_minors(&self) -> Vec<GaussianRational> {
        (1..=self.rows)
            .map(|k| {
                let mut m = Self::zeros(k, k);
                for i in 0..k {
                    for j in 0..k {
                        m.set(i, j, self.get(i, j).clone());
                    }
                }
                m.determinant()
            })
            .collect()
    }

    /// Coefficients `c_0..c_n` of `det(λI − M) = Σ c_k λ^k` (Faddeev–LeVerrier).
    pub fn char_poly(&self) -> Vec<GaussianRational> {
        let n = self.rows;
        let mut coeffs = vec![GaussianRational::zero(); n + 1];
        coeffs[n] = GaussianRational::one();
        let mut mk = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = M·M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(M·M_k)/k
            let mut next = if k == 1 { Self::identity(n) } else { self.mul(&mk) };
            if k > 1 {
                for i in 0..n {
                    let v = next.get(i, i) + &coeffs[n - k + 1];
                    next.set(i, i, v);
                }
            }
            mk = next;
            let am = self.mul(&mk);
            let mut tr = GaussianRational::zero();
            for i in 0..n {
                tr += am.get(i, i);
            }
            let kk = GaussianRational::real(Rational::from_integer((k as i64).into()));
            coeffs[n - k] = -(tr / kk);
        }
        coeffs
    }
}
