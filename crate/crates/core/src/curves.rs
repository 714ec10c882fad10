//! Sextic curve families cut out by 3×3 minors of a determinantal quartic,
//! the common-minor cubic, and the bilinear swap `A₁(x)·y = A₁′(y)·x`.

use alloc::vec::Vec;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Result};
use crate::homotopy::{self, random_complex, System, TrackOptions};
use crate::matrix::PolyMatrix;
use crate::pencil::HermitianPencil;
use crate::poly::{Monomial, MultiPoly};
use crate::scalar::{GaussianRational, Rational};
use crate::singularities::SolverConfig;

/// Which submatrices span the family: `Rows` keeps all four rows and drops
/// column `index` (4×3), `Cols` keeps all columns and drops row `index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Rows,
    Cols,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveIdeal {
    /// The four 3×3 minors, in order of the deleted row (`Rows`) or
    /// column (`Cols`).
    pub generators: Vec<MultiPoly>,
    pub side: Side,
    pub index: usize,
}

impl CurveIdeal {
    /// Largest scaled generator value at `x`; see [`scaled_residual`].
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        scaled_residual(&self.generators, x)
    }

    pub fn conj(&self) -> Self {
        Self {
            generators: self.generators.iter().map(MultiPoly::conj).collect(),
            side: self.side,
            index: self.index,
        }
    }
}

/// `max_g |g(x)| / Σ|coeffs of g|` over the nonzero `g`, with `|x|∞ = 1`.
pub fn scaled_residual(polys: &[MultiPoly], x: &[Complex64]) -> f64 {
    let s = homotopy::max_abs(x);
    let y: Vec<Complex64> = x.iter().map(|v| v / s).collect();
    polys
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| g.eval_c64(&y).norm() / g.coeff_abs_sum())
        .fold(0.0, f64::max)
}

pub fn sextic_family(p: &HermitianPencil, side: Side, index: usize) -> Result<CurveIdeal> {
    if index > 3 {
        return input("family index must be 0..3");
    }
    let m = p.matrix();
    let sub = match side {
        Side::Rows => m.submatrix(None, Some(index))?,
        Side::Cols => m.submatrix(Some(index), None)?,
    };
    Ok(CurveIdeal {
        generators: sub.minors_3x3()?,
        side,
        index,
    })
}

/// The minor of `M₄` without row `drop_row` and column `drop_col`, shared by
/// the `Rows` ideal at `drop_col` and the `Cols` ideal at `drop_row`.
pub fn common_minor_surface(p: &HermitianPencil, drop_row: usize, drop_col: usize) -> Result<MultiPoly> {
    if drop_row > 3 || drop_col > 3 {
        return input("drop indices must be 0..3");
    }
    p.matrix().submatrix(Some(drop_row), Some(drop_col))?.determinant()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionSample {
    pub point: Vec<Complex64>,
    pub rows_residual: f64,
    pub cols_residual: f64,
}

impl IntersectionSample {
    pub fn residual(&self) -> f64 {
        self.rows_residual.min(self.cols_residual)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionReport {
    pub requested: usize,
    pub samples: Vec<IntersectionSample>,
    /// Paths that ended off `V(f, s₃, plane)`.
    pub failed_paths: usize,
    pub tol: f64,
}

impl IntersectionReport {
    pub fn max_residual(&self) -> f64 {
        self.samples.iter().map(IntersectionSample::residual).fold(0.0, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.samples.len() == self.requested && self.max_residual() < self.tol
    }
}

/// Residual of a point on a computed intersection before it counts as a
/// sample.
const ON_CURVE_TOL: f64 = 1e-10;

/// How far a sample may move when it is refined onto one of the curves.
/// An endpoint with residual `ON_CURVE_TOL` on a component of multiplicity
/// `μ ≤ 4` is within about `ON_CURVE_TOL^(1/μ)` of it.
const SNAP_DISTANCE: f64 = 1e-2;

fn random_rational_linear(rng: &mut ChaCha8Rng, n: usize) -> MultiPoly {
    let coeffs: Vec<GaussianRational> = (0..n)
        .map(|_| {
            let z = random_complex(rng);
            GaussianRational::new(
                Rational::from_float(z.re).unwrap_or_default(),
                Rational::from_float(z.im).unwrap_or_default(),
            )
        })
        .collect();
    MultiPoly::linear(&coeffs)
}

/// Samples `V(f) ∩ V(s₃)` by slicing with seeded random planes (12 points
/// per plane) and tests each sample against the two curve ideals.
pub fn complete_intersection_check(
    f: &MultiPoly,
    s3: &MultiPoly,
    c1: &CurveIdeal,
    c2: &CurveIdeal,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<IntersectionReport> {
    if f.num_vars() != 4 || s3.num_vars() != 4 || !f.is_homogeneous(4) || !s3.is_homogeneous(3) {
        return input("expected a quartic and a cubic in four variables");
    }
    if c1.side != Side::Rows || c2.side != Side::Cols {
        return input("c1 must be a rows ideal and c2 a cols ideal");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let opts = TrackOptions::default();
    let mut report = IntersectionReport {
        requested: n_samples,
        samples: Vec::with_capacity(n_samples),
        failed_paths: 0,
        tol,
    };
    let max_planes = n_samples.div_ceil(12) + 2;
    for plane in 0..max_planes {
        if report.samples.len() >= n_samples {
            break;
        }
        let cut = random_rational_linear(&mut rng, 4);
        let sys = System::new(&[f.clone(), s3.clone(), cut.clone()])?;
        let on = |c: &CurveIdeal| -> Result<System> {
            let mut eqs = alloc::vec![f.clone(), s3.clone(), cut.clone()];
            eqs.extend(c.generators.iter().filter(|g| !g.is_zero()).cloned());
            System::new(&eqs)
        };
        let (on1, on2) = (on(c1)?, on(c2)?);
        for end in homotopy::solve_total_degree(&sys, plane % 4, &mut rng, &opts)? {
            if report.samples.len() >= n_samples {
                break;
            }
            let x = sys.refine(&end.point, 20, 1e-15);
            if !(sys.residual(&x) < ON_CURVE_TOL) {
                report.failed_paths += 1;
                continue;
            }
            // on a non-reduced part of the intersection (C1 = C2, say) the
            // endpoint is inaccurate; Newton on the curve itself restores it
            let mut best = (homotopy::normalize_projective(&x), c1.residual(&x), c2.residual(&x));
            for s in [&on1, &on2] {
                let y = s.refine(&x, 30, 1e-15);
                if homotopy::fubini_study(&x, &y) < SNAP_DISTANCE && sys.residual(&y) < ON_CURVE_TOL {
                    let (r1, r2) = (c1.residual(&y), c2.residual(&y));
                    if r1.min(r2) < best.1.min(best.2) {
                        best = (homotopy::normalize_projective(&y), r1, r2);
                    }
                }
            }
            let (point, rows_residual, cols_residual) = best;
            report.samples.push(IntersectionSample { rows_residual, cols_residual, point });
        }
    }
    Ok(report)
}

/// For an `r × c` matrix `A` linear in `n` variables `x`, the `r × n`
/// matrix `A′` linear in `c` variables `y` with `A(x)·y = A′(y)·x`.
pub fn bilinear_swap(a: &PolyMatrix) -> Result<PolyMatrix> {
    let (r, c, n) = (a.rows(), a.cols(), a.num_vars());
    let mut coeffs = Vec::with_capacity(r * c);
    for e in a.entries() {
        match e.linear_coeffs() {
            Some(v) => coeffs.push(v),
            None => return input("bilinear swap needs homogeneous linear entries"),
        }
    }
    PolyMatrix::from_fn(r, n, |i, k| {
        let mut out = MultiPoly::zero(c);
        for j in 0..c {
            out.add_term(Monomial::var(c, j), coeffs[i * c + j][k].clone());
        }
        out
    })
}

/// Whether the plane quartic `V(q) ⊂ P²` is smooth: no common zero of the
/// three partials is found in charts 0 and 1 (9 paths each).
pub fn plane_quartic_smooth(q: &MultiPoly, cfg: &SolverConfig) -> Result<bool> {
    if q.num_vars() != 3 || q.is_zero() || !q.is_homogeneous(4) {
        return input("expected a nonzero quartic in three variables");
    }
    let grad: Vec<MultiPoly> = q.gradient().into_iter().filter(|g| !g.is_zero()).collect();
    let full = System::new(&grad)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let opts = TrackOptions {
        max_steps: cfg.max_steps,
        ..TrackOptions::default()
    };
    for chart in 0..2 {
        let mut eqs = Vec::with_capacity(2);
        for _ in 0..2 {
            let mut acc = MultiPoly::zero(3);
            for g in &grad {
                let z = random_complex(&mut rng);
                let c = GaussianRational::new(
                    Rational::from_float(z.re).unwrap_or_default(),
                    Rational::from_float(z.im).unwrap_or_default(),
                );
                acc = &acc + &g.scale(&c);
            }
            eqs.push(acc);
        }
        let sys = System::new(&eqs)?;
        for end in homotopy::solve_total_degree(&sys, chart, &mut rng, &opts)? {
            let x = full.refine(&end.point, 40, cfg.polish_tolerance * 1e-2);
            if scaled_residual(&grad, &x) < cfg.path_tolerance {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::GMatrix;
    use crate::pencil::HermitianMatrix;
    use crate::scalar::rat;

    fn x(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    fn diagonal_pencil() -> HermitianPencil {
        HermitianPencil::new(core::array::from_fn(|k| {
            let mut re = [0; 16];
            re[k * 5] = 1;
            HermitianMatrix::new(GMatrix::from_ints(4, 4, &re, &[0; 16])).unwrap()
        }))
    }

    fn sample_pencil() -> HermitianPencil {
        let h = |re: [i64; 16], im: [i64; 16]| HermitianMatrix::new(GMatrix::from_ints(4, 4, &re, &im)).unwrap();
        HermitianPencil::new([
            h([1, 0, 1, 0, 0, 2, 0, 1, 1, 0, -1, 0, 0, 1, 0, 0], [0, 1, 0, 0, -1, 0, 0, 1, 0, 0, 0, 2, 0, -1, -2, 0]),
            h([0, 1, 0, 2, 1, 1, 0, 0, 0, 0, 2, 1, 2, 0, 1, -1], [0, 0, 1, 0, 0, 0, 1, 0, -1, -1, 0, 0, 0, 0, 0, 0]),
            h([2, 0, 0, 1, 0, -1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1], [0, 2, 0, 0, -2, 0, 0, 0, 0, 0, 0, 1, 0, 0, -1, 0]),
            h([1, 1, 0, 0, 1, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 2], [0, 0, 0, 1, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 0]),
        ])
    }

    #[test]
    fn diagonal_families() {
        let p = diagonal_pencil();
        let c = sextic_family(&p, Side::Rows, 3).unwrap();
        let prod = &(&x(4, 0) * &x(4, 1)) * &x(4, 2);
        assert_eq!(c.generators[3], prod);
        assert!(c.generators[..3].iter().all(MultiPoly::is_zero));
        assert_eq!(common_minor_surface(&p, 3, 3).unwrap(), prod);
        assert!(sextic_family(&p, Side::Cols, 4).is_err());
    }

    #[test]
    fn families_are_conjugate() {
        let p = sample_pencil();
        for k in 0..4 {
            let rows = sextic_family(&p, Side::Rows, k).unwrap();
            let cols = sextic_family(&p, Side::Cols, k).unwrap();
            assert_eq!(cols.generators, rows.conj().generators);
        }
    }

    #[test]
    fn intersection_splits_into_the_two_curves() {
        let p = sample_pencil();
        let f = p.det().unwrap();
        let s3 = common_minor_surface(&p, 3, 3).unwrap();
        let c1 = sextic_family(&p, Side::Rows, 3).unwrap();
        let c2 = sextic_family(&p, Side::Cols, 3).unwrap();
        let r = complete_intersection_check(&f, &s3, &c1, &c2, 20, 1, 1e-8).unwrap();
        assert!(r.passed(), "{r:?}");
        // pairing the rows ideal with the wrong cols ideal leaves C₂ uncovered
        let bad = sextic_family(&p, Side::Cols, 0).unwrap();
        let r = complete_intersection_check(&f, &s3, &c1, &bad, 20, 1, 1e-8).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn swap_identity_and_involution() {
        let p = sample_pencil();
        let a1 = p.matrix().submatrix(None, Some(3)).unwrap();
        let a1p = bilinear_swap(&a1).unwrap();
        assert_eq!((a1p.rows(), a1p.cols(), a1p.num_vars()), (4, 4, 3));
        let xs = [rat(1), rat(-2), rat(3), rat(5)].map(GaussianRational::real);
        let ys = [GaussianRational::from_ints(2, 1), GaussianRational::from_ints(0, -1), GaussianRational::from_ints(3, 0)];
        let lhs = a1.eval_exact(&xs).unwrap().mul(&GMatrix::new(3, 1, ys.to_vec()));
        let rhs = a1p.eval_exact(&ys).unwrap().mul(&GMatrix::new(4, 1, xs.to_vec()));
        assert_eq!(lhs, rhs);
        assert_eq!(bilinear_swap(&a1p).unwrap(), a1);
        let q = a1p.determinant().unwrap();
        assert!(q.is_homogeneous(4) && q.num_vars() == 3);
        let sq = PolyMatrix::from_fn(1, 1, |_, _| x(4, 0).pow(2)).unwrap();
        assert!(bilinear_swap(&sq).is_err());
    }

    #[test]
    fn plane_quartics() {
        let cfg = SolverConfig::default();
        let fermat = &(&x(3, 0).pow(4) + &x(3, 1).pow(4)) + &x(3, 2).pow(4);
        assert!(plane_quartic_smooth(&fermat, &cfg).unwrap());
        let double = (&x(3, 0).pow(2) + &x(3, 1).pow(2)).pow(2);
        assert!(!plane_quartic_smooth(&double, &cfg).unwrap());
        assert!(plane_quartic_smooth(&MultiPoly::zero(3), &cfg).is_err());
    }
}
