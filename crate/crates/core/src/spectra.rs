//! Spectrahedron membership and hyperbolicity certificates.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::linalg;
use crate::pencil::{DefinitenessVerdict, HermitianPencil};
use crate::poly::MultiPoly;
use crate::scalar::{rat, rat_to_f64, rationalize, GaussianRational, Rational};

/// Eigenvalues above `−SEMIDEFINITE_TOL × ‖M‖` count as nonnegative.
pub const SEMIDEFINITE_TOL: f64 = 1e-6;

/// Largest denominator tried when recognising a float point as rational.
pub const RATIONAL_DENOMINATOR: i64 = 10_000;

fn to_exact(e: &[Rational]) -> Vec<GaussianRational> {
    e.iter().map(|r| GaussianRational::real(r.clone())).collect()
}

/// `+1` or `−1` making `s·M(e)` positive definite.
pub fn definite_sign(p: &HermitianPencil, e: &[Rational]) -> Result<i32> {
    match p.is_definite_at(&to_exact(e))? {
        DefinitenessVerdict::PositiveDefinite => Ok(1),
        DefinitenessVerdict::NegativeDefinite => Ok(-1),
        DefinitenessVerdict::IndefiniteOrSingular => input("M(e) is not definite"),
    }
}

/// Whether `s·M(x)` is positive semidefinite, with `s` fixed by `e`.
///
/// The float test accepts eigenvalues `≥ −tol·‖M(x)‖`. When every
/// coordinate of `x` (scaled to unit max-norm) is recognisably rational and
/// the rational point has the same float rank, the verdict is recomputed
/// exactly from the characteristic polynomial and overrides the float one.
pub fn on_spectrahedron(p: &HermitianPencil, e: &[Rational], x: &[f64], tol: f64) -> Result<bool> {
    if x.len() != 4 || e.len() != 4 {
        return input("points have four coordinates");
    }
    let s = definite_sign(p, e)?;
    let scale = x.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    if scale == 0.0 {
        return input("zero point");
    }
    let xs: Vec<f64> = x.iter().map(|v| v / scale).collect();
    let xc: Vec<Complex64> = xs.iter().map(|&v| Complex64::new(v * s as f64, 0.0)).collect();
    let m = p.eval_c64(&xc);
    let eig = linalg::hermitian_eigenvalues(&m, 4);
    let norm = eig.iter().fold(0.0f64, |a, v| a.max(libm::fabs(*v)));
    let float_verdict = eig.iter().all(|&l| l >= -tol * norm);
    if let Some(exact) = exact_point(&xs) {
        let sv = linalg::singular_values(&m, 4, 4);
        let float_rank = linalg::numeric_rank(&sv, crate::pencil::RANK_TOL);
        let me = p.eval_exact(&exact)?.scale(&GaussianRational::from(s as i64));
        if me.rank() == float_rank {
            return Ok(exact_psd(&me));
        }
    }
    Ok(float_verdict)
}

fn exact_point(xs: &[f64]) -> Option<Vec<GaussianRational>> {
    xs.iter()
        .map(|&v| rationalize(v, RATIONAL_DENOMINATOR, 1e-11).map(GaussianRational::real))
        .collect()
}

/// Hermitian `m` is PSD iff `det(λI − m)` has alternating coefficient signs.
pub fn exact_psd(m: &crate::matrix::GMatrix) -> bool {
    let c = m.char_poly();
    let n = c.len() - 1;
    c.iter().enumerate().all(|(k, ck)| {
        let v = &ck.re;
        if (n - k) % 2 == 0 {
            !v.is_negative()
        } else {
            !v.is_positive()
        }
    })
}

/// One sampled line `s ↦ f(s·e + d)`.
#[derive(Clone, Debug)]
pub struct LineSample {
    pub base: Vec<Rational>,
    pub direction: Vec<i64>,
    pub roots: Vec<Complex64>,
    /// Real roots with multiplicity, decided exactly.
    pub real_roots: usize,
    /// The float count at the requested tolerance.
    pub float_real_roots: usize,
}

#[derive(Clone, Debug)]
pub struct HyperbolicityReport {
    pub lines: Vec<LineSample>,
    pub all_real: usize,
    /// Lines where the float and exact counts disagree.
    pub disagreements: usize,
}

impl HyperbolicityReport {
    pub fn fraction(&self) -> f64 {
        if self.lines.is_empty() {
            return 1.0;
        }
        self.all_real as f64 / self.lines.len() as f64
    }
}

/// Samples `n_lines` real lines through `e` with seeded integer directions
/// and counts those meeting `V(f)` only in real points. The line is
/// parameterized as `s·e + d`, so the restriction has degree exactly
/// `deg f` with leading coefficient `f(e)`.
pub fn hyperbolicity_check(
    f: &MultiPoly,
    e: &[Rational],
    n_lines: usize,
    seed: u64,
    tol: f64,
) -> Result<HyperbolicityReport> {
    if f.num_vars() != e.len() {
        return input("base point dimension mismatch");
    }
    let ex = to_exact(e);
    if f.eval_exact(&ex)?.is_zero() {
        return input("f(e) = 0");
    }
    let n = e.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lines = Vec::with_capacity(n_lines);
    let (mut all_real, mut disagreements) = (0, 0);
    while lines.len() < n_lines {
        let d: Vec<i64> = (0..n).map(|_| rng.random_range(-12i64..=12)).collect();
        if parallel(e, &d) {
            continue;
        }
        let coeffs = restrict_to_line(f, e, &d)?;
        let real_roots = real_root_count_exact(&coeffs)?;
        let fl: Vec<f64> = coeffs.iter().map(rat_to_f64).collect();
        let roots = linalg::poly_roots(&fl).unwrap_or_default();
        let float_real_roots = count_real(&roots, tol);
        let deg = coeffs.len() - 1;
        if real_roots == deg {
            all_real += 1;
        }
        if float_real_roots != real_roots {
            disagreements += 1;
        }
        lines.push(LineSample {
            base: e.to_vec(),
            direction: d,
            roots,
            real_roots,
            float_real_roots,
        });
    }
    Ok(HyperbolicityReport {
        lines,
        all_real,
        disagreements,
    })
}

fn parallel(e: &[Rational], d: &[i64]) -> bool {
    if d.iter().all(|&v| v == 0) {
        return true;
    }
    // rank of [e; d] < 2 iff all 2×2 minors vanish
    for i in 0..e.len() {
        for j in i + 1..e.len() {
            if &e[i] * rat(d[j]) != &e[j] * rat(d[i]) {
                return false;
            }
        }
    }
    true
}

/// Ascending coefficients of `s ↦ f(s·e + d)`.
pub fn restrict_to_line(f: &MultiPoly, e: &[Rational], d: &[i64]) -> Result<Vec<Rational>> {
    let images: Vec<MultiPoly> = e
        .iter()
        .zip(d)
        .map(|(ei, &di)| MultiPoly::linear(&[GaussianRational::real(ei.clone()), GaussianRational::from(di)]))
        .collect();
    let g = f.compose(&images)?;
    let deg = f.total_degree().unwrap_or(0) as usize;
    let mut out = vec![Rational::zero(); deg + 1];
    for (m, c) in g.terms() {
        if !c.is_real() {
            return Err(Error::Invariant("real restriction has a complex coefficient".into()));
        }
        out[m.0[0] as usize] = c.re.clone();
    }
    Ok(out)
}

fn count_real(roots: &[Complex64], tol: f64) -> usize {
    roots.iter().filter(|r| libm::fabs(r.im) < tol * (1.0 + r.norm())).count()
}

/// Real roots with multiplicity of a float quartic `c0 + c1 t + … + c4 t⁴`.
/// The count comes from an exact Sturm computation on the binary expansion
/// of the coefficients; the companion-matrix count is a cross-check.
pub fn quartic_real_roots(c: &[f64; 5]) -> Result<usize> {
    if c.iter().all(|&v| v == 0.0) {
        return input("zero polynomial");
    }
    let exact: Vec<Rational> = c
        .iter()
        .map(|&v| Rational::from_float(v).ok_or_else(|| Error::Input("non-finite coefficient".into())))
        .collect::<Result<_>>()?;
    real_root_count_exact(&exact)
}

/// Float count of real roots, `|Im| < tol·(1 + |root|)`.
pub fn real_root_count_float(c: &[f64], tol: f64) -> Option<usize> {
    linalg::poly_roots(c).map(|r| count_real(&r, tol))
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * rat(k as i64)).collect()
}

/// Quotient and remainder of `a / b`, `b` nonzero and trimmed.
fn divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lead;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] -= &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divmod(&a, &b);
        a = b;
        b = r;
    }
    if let Some(l) = a.last().cloned() {
        for c in &mut a {
            *c = &*c / &l;
        }
    }
    a
}

/// Distinct real roots of a polynomial via its Sturm sequence.
fn sturm_distinct(p: &[Rational]) -> usize {
    let p = trim(p.to_vec());
    if p.len() <= 1 {
        return 0;
    }
    let mut seq = vec![p.clone(), trim(derivative(&p))];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let (_, r) = divmod(&seq[n - 2], &seq[n - 1]);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    let changes = |at_pos_inf: bool| {
        let signs: Vec<i32> = seq
            .iter()
            .filter(|q| !q.is_empty())
            .map(|q| {
                let lead = q.last().unwrap();
                let s = if lead.is_positive() { 1 } else { -1 };
                if at_pos_inf || (q.len() - 1) % 2 == 0 {
                    s
                } else {
                    -s
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    };
    changes(false) - changes(true)
}

/// Real roots with multiplicity (ascending coefficients), via Yun's
/// square-free decomposition and Sturm counts of each factor.
pub fn real_root_count_exact(c: &[Rational]) -> Result<usize> {
    let p = trim(c.to_vec());
    if p.is_empty() {
        return input("zero polynomial");
    }
    if p.len() == 1 {
        return Ok(0);
    }
    let dp = derivative(&p);
    let mut a = gcd(&p, &dp);
    let mut b = divmod(&p, &a).0;
    let mut cc = divmod(&dp, &a).0;
    let mut d = sub(&cc, &derivative(&b));
    let mut i = 1;
    let mut total = 0;
    loop {
        a = gcd(&b, &d);
        total += i * sturm_distinct(&a);
        b = divmod(&b, &a).0;
        if b.len() <= 1 {
            break;
        }
        cc = divmod(&d, &a).0;
        d = sub(&cc, &derivative(&b));
        i += 1;
    }
    Ok(total)
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

/// `(t − r)` products, for tests and fixtures.
pub fn poly_from_roots(roots: &[Rational]) -> Vec<Rational> {
    let mut p = vec![Rational::one()];
    for r in roots {
        let mut q = vec![Rational::zero(); p.len() + 1];
        for (k, c) in p.iter().enumerate() {
            q[k + 1] += c;
            q[k] -= c * r;
        }
        p = q;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::GMatrix;
    use crate::pencil::HermitianMatrix;
    use crate::scalar::rat_frac;

    #[test]
    fn quartic_counts() {
        assert_eq!(quartic_real_roots(&[-1.0, 0.0, 0.0, 0.0, 1.0]).unwrap(), 2);
        assert_eq!(quartic_real_roots(&[1.0, 0.0, -2.0, 0.0, 1.0]).unwrap(), 4);
        assert_eq!(quartic_real_roots(&[1.0, 0.0, 0.0, 0.0, 1.0]).unwrap(), 0);
        assert!(quartic_real_roots(&[0.0; 5]).is_err());
        assert_eq!(real_root_count_float(&[1.0, 0.0, -2.0, 0.0, 1.0], 1e-6), Some(4));
    }

    #[test]
    fn multiplicities_from_known_roots() {
        let roots = [rat(1), rat(1), rat(1), rat_frac(-2, 3), rat(5)];
        assert_eq!(real_root_count_exact(&poly_from_roots(&roots)).unwrap(), 5);
        // (t² + 1)² (t − 2)
        let mut p = vec![rat(1), rat(0), rat(2), rat(0), rat(1)];
        p = {
            let mut q = vec![Rational::zero(); p.len() + 1];
            for (k, c) in p.iter().enumerate() {
                q[k + 1] += c;
                q[k] -= c * rat(2);
            }
            q
        };
        assert_eq!(real_root_count_exact(&p).unwrap(), 1);
    }

    fn diag_pencil_shifted() -> HermitianPencil {
        // M(x) = diag(x3 + x0, x3 − x0, x3 + x1, x3 − x2)
        let d = |v: [i64; 4]| {
            let mut re = [0; 16];
            for i in 0..4 {
                re[i * 5] = v[i];
            }
            HermitianMatrix::new(GMatrix::from_ints(4, 4, &re, &[0; 16])).unwrap()
        };
        HermitianPencil::new([d([1, -1, 0, 0]), d([0, 0, 1, 0]), d([0, 0, 0, -1]), d([1, 1, 1, 1])])
    }

    #[test]
    fn spectrahedron_membership() {
        let p = diag_pencil_shifted();
        let e = [rat(0), rat(0), rat(0), rat(1)];
        assert!(on_spectrahedron(&p, &e, &[0.0, 0.0, 0.0, 1.0], SEMIDEFINITE_TOL).unwrap());
        assert!(on_spectrahedron(&p, &e, &[1.0, 0.0, 0.0, 1.0], SEMIDEFINITE_TOL).unwrap());
        assert!(!on_spectrahedron(&p, &e, &[2.0, 0.0, 0.0, 1.0], SEMIDEFINITE_TOL).unwrap());
        // −e gives −I, which is negative definite relative to the sign at e
        assert!(!on_spectrahedron(&p, &e, &[0.0, 0.0, 0.0, -1.0], SEMIDEFINITE_TOL).unwrap());
        let bad = [rat(1), rat(0), rat(0), rat(0)];
        assert!(on_spectrahedron(&p, &bad, &[0.0, 0.0, 0.0, 1.0], SEMIDEFINITE_TOL).is_err());
    }

    #[test]
    fn definite_pencil_is_hyperbolic_fermat_is_not() {
        let p = diag_pencil_shifted();
        let f = p.det().unwrap();
        let e = [rat(0), rat(0), rat(0), rat(1)];
        let rep = hyperbolicity_check(&f, &e, 50, 7, 1e-6).unwrap();
        assert_eq!(rep.fraction(), 1.0);
        let x = |i| MultiPoly::var(4, i);
        let fermat = &(&x(0).pow(4) + &x(1).pow(4)) + &(&x(2).pow(4) + &x(3).pow(4));
        let e0 = [rat(1), rat(0), rat(0), rat(0)];
        let rep = hyperbolicity_check(&fermat, &e0, 50, 7, 1e-6).unwrap();
        assert!(rep.fraction() < 1.0);
        assert!(hyperbolicity_check(&f, &[rat(1), rat(0), rat(0), rat(0)], 5, 0, 1e-6).is_err());
    }

    #[test]
    fn exact_psd_boundary() {
        let m = GMatrix::from_ints(2, 2, &[1, 1, 1, 1], &[0, 0, 0, 0]);
        assert!(exact_psd(&m));
        let m = GMatrix::from_ints(2, 2, &[1, 2, 2, 1], &[0, 0, 0, 0]);
        assert!(!exact_psd(&m));
        let m = GMatrix::from_ints(2, 2, &[1, 0, 0, 1], &[0, 1, -1, 0]);
        assert!(exact_psd(&m));
    }
}
