//! Projective total-degree homotopy continuation for small dense systems.
//!
//! A system is `n` homogeneous polynomials in `n + 1` variables. Paths are
//! tracked in a random affine patch `a·x = 1` from the start system
//! `x_{o_j}^{d_j} − x_k^{d_j}` (chart `k`), with the γ trick making every
//! path regular for `t < 1`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{input, Result};
use crate::linalg;
use crate::poly::{CompiledPoly, MultiPoly};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Standard complex Gaussian sample.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u1: f64 = rng.random::<f64>().max(1e-300);
    let u2: f64 = rng.random::<f64>();
    let r = libm::sqrt(-libm::log(u1));
    let th = 2.0 * core::f64::consts::PI * u2;
    Complex64::new(r * libm::cos(th), r * libm::sin(th))
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let th = 2.0 * core::f64::consts::PI * rng.random::<f64>();
    Complex64::new(libm::cos(th), libm::sin(th))
}

pub fn max_abs(x: &[Complex64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Scales `x` so its largest-modulus coordinate is exactly `1`.
pub fn normalize_projective(x: &[Complex64]) -> Vec<Complex64> {
    let (mut k, mut best) = (0, -1.0);
    for (i, v) in x.iter().enumerate() {
        // ties go to the first index so the choice is deterministic
        if v.norm() > best * (1.0 + 1e-9) {
            best = v.norm();
            k = i;
        }
    }
    let p = x[k];
    let mut out: Vec<Complex64> = x.iter().map(|v| v / p).collect();
    out[k] = Complex64::new(1.0, 0.0);
    out
}

/// Fubini–Study distance between two nonzero vectors.
pub fn fubini_study(x: &[Complex64], y: &[Complex64]) -> f64 {
    let dot: Complex64 = x.iter().zip(y).map(|(a, b)| a.conj() * b).sum();
    let nx: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    let c = (dot.norm() / libm::sqrt(nx * ny)).min(1.0);
    libm::acos(c)
}

/// Homogeneous polynomials with compiled values and Jacobians.
#[derive(Clone, Debug)]
pub struct System {
    num_vars: usize,
    degrees: Vec<u32>,
    eqs: Vec<CompiledPoly>,
    jac: Vec<Vec<CompiledPoly>>,
}

impl System {
    /// Each polynomial is rescaled to unit largest coefficient; zero
    /// polynomials are rejected.
    pub fn new(polys: &[MultiPoly]) -> Result<Self> {
        let Some(first) = polys.first() else {
            return input("empty polynomial system");
        };
        let n = first.num_vars();
        let mut degrees = Vec::with_capacity(polys.len());
        let mut eqs = Vec::with_capacity(polys.len());
        let mut jac = Vec::with_capacity(polys.len());
        for p in polys {
            if p.num_vars() != n {
                return input("system polynomials disagree on the number of variables");
            }
            let Some(d) = p.total_degree() else {
                return input("zero polynomial in system");
            };
            if !p.is_homogeneous(d) || d == 0 {
                return input("system polynomials must be homogeneous of positive degree");
            }
            let m = p.coeff_abs_sum().recip();
            let s = Complex64::new(m, 0.0);
            degrees.push(d);
            eqs.push(CompiledPoly::new(p).scale(s));
            jac.push(p.gradient().iter().map(|g| CompiledPoly::new(g).scale(s)).collect());
        }
        Ok(Self {
            num_vars: n,
            degrees,
            eqs,
            jac,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_eqs(&self) -> usize {
        self.eqs.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn bezout(&self) -> usize {
        self.degrees.iter().map(|&d| d as usize).product()
    }

    pub fn eval(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.eqs.iter().map(|e| e.eval(x)).collect()
    }

    /// Row-major `num_eqs × num_vars`.
    pub fn jacobian(&self, x: &[Complex64]) -> Vec<Complex64> {
        self.jac.iter().flat_map(|row| row.iter().map(|e| e.eval(x))).collect()
    }

    /// `max_i |F_i(x)|` at `x` scaled to unit max-norm.
    pub fn residual(&self, x: &[Complex64]) -> f64 {
        let s = max_abs(x);
        if s == 0.0 {
            return f64::INFINITY;
        }
        let y: Vec<Complex64> = x.iter().map(|v| v / s).collect();
        max_abs(&self.eval(&y))
    }

    /// Damped Gauss–Newton on the (possibly overdetermined) system plus the
    /// patch `conj(x0)·x = |x0|²`. Returns the best point seen.
    pub fn refine(&self, x0: &[Complex64], iters: usize, tol: f64) -> Vec<Complex64> {
        let n = self.num_vars;
        let m = self.num_eqs();
        let mut x = normalize_projective(x0);
        let patch: Vec<Complex64> = x.iter().map(|v| v.conj()).collect();
        let target: f64 = x.iter().map(|v| v.norm_sqr()).sum();
        let resid = |x: &[Complex64]| -> Vec<Complex64> {
            let mut r = self.eval(x);
            let p: Complex64 = patch.iter().zip(x).map(|(a, b)| a * b).sum();
            r.push(p - target);
            r
        };
        let norm = |r: &[Complex64]| libm::sqrt(r.iter().map(|v| v.norm_sqr()).sum::<f64>());
        let mut r = resid(&x);
        let mut rn = norm(&r);
        let mut mu = 1e-10;
        for _ in 0..iters {
            if rn <= tol {
                break;
            }
            let mut j = self.jacobian(&x);
            j.extend_from_slice(&patch);
            let Some(d) = linalg::damped_least_squares(&j, m + 1, n, &r, mu) else {
                break;
            };
            let y: Vec<Complex64> = x.iter().zip(&d).map(|(a, b)| a + b).collect();
            let ry = resid(&y);
            let ryn = norm(&ry);
            if ryn < rn {
                x = y;
                r = ry;
                rn = ryn;
                mu = (mu * 0.1).max(1e-14);
            } else {
                mu *= 100.0;
                if mu > 1e6 {
                    break;
                }
            }
        }
        x
    }
}

#[derive(Clone, Copy, Debug)]
pub struct TrackOptions {
    pub max_steps: usize,
    /// Relative Newton step size accepted by the corrector.
    pub corrector_tol: f64,
    /// Relative Newton step size targeted by the endpoint polish.
    pub endpoint_tol: f64,
    pub min_step: f64,
    pub max_step: f64,
}

impl Default for TrackOptions {
    fn default() -> Self {
        Self {
            max_steps: 20_000,
            corrector_tol: 1e-9,
            endpoint_tol: 1e-13,
            min_step: 1e-13,
            max_step: 0.05,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PathStatus {
    /// Reached `t = 1`.
    Finished,
    /// Step size underflow, step budget, or divergence in the patch.
    Failed,
}

#[derive(Clone, Debug)]
pub struct PathEnd {
    pub point: Vec<Complex64>,
    pub status: PathStatus,
    pub t: f64,
}

struct Homotopy<'a> {
    sys: &'a System,
    chart: usize,
    others: Vec<usize>,
    gamma: Complex64,
    patch: Vec<Complex64>,
}

impl Homotopy<'_> {
    fn n(&self) -> usize {
        self.sys.num_vars
    }

    /// Full square Jacobian (with patch row) and `H`, `∂H/∂t` at `(x, t)`.
    fn eval(&self, x: &[Complex64], t: f64) -> (Vec<Complex64>, Vec<Complex64>, Vec<Complex64>) {
        let n = self.n();
        let m = self.sys.num_eqs();
        let f = self.sys.eval(x);
        let fj = self.sys.jacobian(x);
        let s = Complex64::new(t, 0.0);
        let g1 = self.gamma * (1.0 - t);
        let mut h = vec![ZERO; n];
        let mut ht = vec![ZERO; n];
        let mut jac = vec![ZERO; n * n];
        for j in 0..m {
            let d = self.sys.degrees[j] as i32;
            let o = self.others[j];
            let xo = x[o].powi(d - 1);
            let xk = x[self.chart].powi(d - 1);
            let g = xo * x[o] - xk * x[self.chart];
            h[j] = g1 * g + s * f[j];
            ht[j] = f[j] - self.gamma * g;
            for i in 0..n {
                jac[j * n + i] = s * fj[j * n + i];
            }
            jac[j * n + o] += g1 * xo * d as f64;
            jac[j * n + self.chart] -= g1 * xk * d as f64;
        }
        let p: Complex64 = self.patch.iter().zip(x).map(|(a, b)| a * b).sum();
        h[m] = p - 1.0;
        jac[m * n..].copy_from_slice(&self.patch);
        (jac, h, ht)
    }

    fn velocity(&self, x: &[Complex64], t: f64) -> Option<Vec<Complex64>> {
        let (mut jac, _, ht) = self.eval(x, t);
        let mut v: Vec<Complex64> = ht.iter().map(|z| -z).collect();
        linalg::solve_c64(&mut jac, self.n(), &mut v).then_some(v)
    }

    /// Newton at fixed `t`; `None` if it fails to contract to `tol`.
    fn correct(&self, x0: &[Complex64], t: f64, iters: usize, tol: f64) -> Option<Vec<Complex64>> {
        let mut x = x0.to_vec();
        let mut last = f64::INFINITY;
        for _ in 0..iters {
            let (mut jac, h, _) = self.eval(&x, t);
            let mut dx: Vec<Complex64> = h.iter().map(|z| -z).collect();
            if !linalg::solve_c64(&mut jac, self.n(), &mut dx) {
                return None;
            }
            for (a, b) in x.iter_mut().zip(&dx) {
                *a += b;
            }
            let size = max_abs(&dx) / max_abs(&x).max(1.0);
            if size <= tol {
                return Some(x);
            }
            if size > 0.5 * last && last < 1e-3 {
                return None;
            }
            last = size;
        }
        None
    }

    fn track(&self, start: Vec<Complex64>, opts: &TrackOptions) -> PathEnd {
        let n = self.n();
        let mut x = start;
        let mut t = 0.0;
        let mut dt = 0.01f64.min(opts.max_step);
        let mut streak = 0;
        let axpy = |x: &[Complex64], h: f64, v: &[Complex64]| -> Vec<Complex64> {
            (0..n).map(|i| x[i] + v[i] * h).collect()
        };
        for _ in 0..opts.max_steps {
            if t >= 1.0 {
                break;
            }
            let h = dt.min(1.0 - t);
            let t1 = if h == 1.0 - t { 1.0 } else { t + h };
            let pred = (|| {
                let k1 = self.velocity(&x, t)?;
                let k2 = self.velocity(&axpy(&x, h / 2.0, &k1), t + h / 2.0)?;
                let k3 = self.velocity(&axpy(&x, h / 2.0, &k2), t + h / 2.0)?;
                let k4 = self.velocity(&axpy(&x, h, &k3), t1)?;
                Some((0..n).map(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) * (h / 6.0)).collect::<Vec<_>>())
            })();
            let corrected = pred.and_then(|p| self.correct(&p, t1, 3, opts.corrector_tol));
            match corrected {
                Some(y) if max_abs(&y) < 1e10 => {
                    x = y;
                    t = t1;
                    streak += 1;
                    if streak >= 3 {
                        dt = (dt * 2.0).min(opts.max_step);
                        streak = 0;
                    }
                }
                _ => {
                    dt *= 0.5;
                    streak = 0;
                    if dt < opts.min_step {
                        return PathEnd {
                            point: x,
                            status: PathStatus::Failed,
                            t,
                        };
                    }
                }
            }
        }
        if t < 1.0 {
            return PathEnd {
                point: x,
                status: PathStatus::Failed,
                t,
            };
        }
        if let Some(y) = self.correct(&x, 1.0, 8, opts.endpoint_tol) {
            x = y;
        }
        PathEnd {
            point: x,
            status: PathStatus::Finished,
            t,
        }
    }
}

/// Tracks all Bézout-many paths of a square projective system from the
/// start system attached to `chart`. Endpoints are in the random patch,
/// ordered by start solution.
pub fn solve_total_degree<R: Rng + ?Sized>(
    sys: &System,
    chart: usize,
    rng: &mut R,
    opts: &TrackOptions,
) -> Result<Vec<PathEnd>> {
    let n = sys.num_vars;
    if sys.num_eqs() + 1 != n {
        return input("square projective systems have one fewer equation than variables");
    }
    if chart >= n {
        return input("chart index out of range");
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != chart).collect();
    let gamma = random_unit(rng);
    let patch: Vec<Complex64> = (0..n).map(|_| random_complex(rng)).collect();
    let hom = Homotopy {
        sys,
        chart,
        others,
        gamma,
        patch,
    };
    let starts = start_solutions(sys.degrees(), chart, n);
    let mut out = Vec::with_capacity(starts.len());
    for s in starts {
        let scale: Complex64 = hom.patch.iter().zip(&s).map(|(a, b)| a * b).sum();
        let x: Vec<Complex64> = s.iter().map(|v| v / scale).collect();
        out.push(hom.track(x, opts));
    }
    Ok(out)
}

/// Roots-of-unity grid solving `x_{o_j}^{d_j} = x_k^{d_j}` with `x_k = 1`.
fn start_solutions(degrees: &[u32], chart: usize, n: usize) -> Vec<Vec<Complex64>> {
    let others: Vec<usize> = (0..n).filter(|&i| i != chart).collect();
    let total: usize = degrees.iter().map(|&d| d as usize).product();
    let mut out = Vec::with_capacity(total);
    for mut idx in 0..total {
        let mut x = vec![ZERO; n];
        x[chart] = Complex64::new(1.0, 0.0);
        for (j, &d) in degrees.iter().enumerate() {
            let k = idx % d as usize;
            idx /= d as usize;
            let th = 2.0 * core::f64::consts::PI * k as f64 / d as f64;
            x[others[j]] = Complex64::new(libm::cos(th), libm::sin(th));
        }
        out.push(x);
    }
    out
}

/// Greedy projective clustering: representatives in input order, each
/// point assigned to the first representative within `angle`.
pub fn dedupe_projective(points: &[Vec<Complex64>], angle: f64) -> Vec<Vec<Complex64>> {
    let mut reps: Vec<Vec<Complex64>> = Vec::new();
    for p in points {
        if !reps.iter().any(|r| fubini_study(r, p) < angle) {
            reps.push(p.clone());
        }
    }
    reps
}
