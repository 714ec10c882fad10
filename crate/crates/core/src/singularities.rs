//! Isolated singular points of quartic surfaces `V(f) ⊂ P³`, their
//! classification against a Hermitian pencil, and the `(η, ρ, σ)` profile.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::homotopy::{self, fubini_study, normalize_projective, random_complex, PathStatus, System, TrackOptions};
use crate::linalg;
use crate::matrix::GMatrix;
use crate::pencil::{HermitianPencil, RANK_TOL};
use crate::poly::{CompiledPoly, MultiPoly};
use crate::scalar::{first_convergent, GaussianRational, Rational};
use crate::spectra;

/// Relative singular-value cutoff for the Hessian rank.
pub const HESSIAN_RANK_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolverConfig {
    pub seed: u64,
    /// Scaled gradient residual below which an endpoint is singular.
    pub path_tolerance: f64,
    /// Target residual of the endpoint polish.
    pub polish_tolerance: f64,
    /// Fubini–Study distance under which points coincide.
    pub dedupe_angle: f64,
    pub reality_tolerance: f64,
    pub max_steps: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            path_tolerance: 1e-8,
            polish_tolerance: 1e-12,
            dedupe_angle: 1e-6,
            reality_tolerance: 1e-6,
            max_steps: 20_000,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        let tols = [self.path_tolerance, self.polish_tolerance, self.dedupe_angle, self.reality_tolerance];
        if tols.iter().any(|t| !(*t > 0.0)) {
            return input("solver tolerances must be positive");
        }
        Ok(())
    }
}

/// A point of `CP³` scaled so its largest-modulus coordinate is `1`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePointC {
    coords: [Complex64; 4],
}

impl ProjectivePointC {
    pub fn new(v: &[Complex64]) -> Result<Self> {
        if v.len() != 4 {
            return input("points of P3 have four coordinates");
        }
        if v.iter().all(|z| z.norm() == 0.0) || v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return input("point must be finite and nonzero");
        }
        let n = normalize_projective(v);
        Ok(Self {
            coords: [n[0], n[1], n[2], n[3]],
        })
    }

    pub fn coords(&self) -> &[Complex64; 4] {
        &self.coords
    }

    pub fn conj(&self) -> Self {
        Self::new(&self.coords.map(|z| z.conj())).expect("nonzero")
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coords.iter().all(|z| libm::fabs(z.im) < tol)
    }

    pub fn real_parts(&self) -> [f64; 4] {
        self.coords.map(|z| z.re)
    }

    pub fn distance(&self, o: &Self) -> f64 {
        fubini_study(&self.coords, &o.coords)
    }

    fn sort_key(&self) -> [i64; 8] {
        let q = |v: f64| libm::round(v * 1e7) as i64;
        let mut k = [0; 8];
        for (i, z) in self.coords.iter().enumerate() {
            k[2 * i] = q(z.re);
            k[2 * i + 1] = q(z.im);
        }
        k
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub location: ProjectivePointC,
    /// `4 − rank M(p)`.
    pub pencil_corank: usize,
    pub hessian_rank: usize,
    pub is_real: bool,
    /// `max |∂_i f(p)| / Σ|coefficients|` at unit max-norm.
    pub residual: f64,
    pub on_spectrahedron: Option<bool>,
}

impl SingularPoint {
    pub fn is_essential(&self) -> bool {
        self.pencil_corank >= 2
    }

    pub fn is_node(&self) -> bool {
        self.hessian_rank == 3
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub eta: usize,
    pub rho: usize,
    pub sigma: usize,
    /// Non-isolated singularities or more clusters than the Bezout
    /// bound; the counts are unreliable.
    pub degenerate: bool,
    pub points: Vec<SingularPoint>,
    pub warnings: Vec<String>,
}

/// Singular points found by [`solve_gradient_system`] plus diagnostics.
#[derive(Clone, Debug)]
pub struct GradientSolution {
    pub points: Vec<ProjectivePointC>,
    pub residuals: Vec<f64>,
    pub total_paths: usize,
    pub failed_paths: usize,
    pub degenerate: Option<String>,
    pub warnings: Vec<String>,
    /// Polished endpoints passing the residual test, before clustering.
    pub candidates: Vec<(Vec<Complex64>, f64)>,
}

struct Gradient {
    full: System,
    hessian: Vec<CompiledPoly>,
    scale: f64,
}

impl Gradient {
    fn new(f: &MultiPoly) -> Result<Self> {
        let grad = f.gradient();
        if grad.iter().all(MultiPoly::is_zero) {
            return input("constant polynomial");
        }
        let scale = f.coeff_abs_sum();
        let hessian = f
            .hessian()
            .into_iter()
            .flatten()
            .map(|h| CompiledPoly::new(&h).scale(Complex64::new(1.0 / scale, 0.0)))
            .collect();
        let grad_scaled: Vec<MultiPoly> = grad.iter().filter(|g| !g.is_zero()).cloned().collect();
        Ok(Self {
            full: System::new(&grad_scaled)?,
            hessian,
            scale,
        })
    }

    fn residual(&self, f_grad: &[CompiledPoly], x: &[Complex64]) -> f64 {
        let s = homotopy::max_abs(x);
        let y: Vec<Complex64> = x.iter().map(|v| v / s).collect();
        f_grad.iter().map(|g| g.eval(&y).norm()).fold(0.0, f64::max) / self.scale
    }

    fn hessian_at(&self, x: &[Complex64]) -> Vec<Complex64> {
        let s = homotopy::max_abs(x);
        let y: Vec<Complex64> = x.iter().map(|v| v / s).collect();
        self.hessian.iter().map(|h| h.eval(&y)).collect()
    }
}

/// Scaled gradient residual `max_i |∂_i f(p)| / Σ|coeffs|` with `|p|∞ = 1`.
pub fn gradient_residual(f: &MultiPoly, p: &[Complex64]) -> f64 {
    let s = homotopy::max_abs(p);
    let y: Vec<Complex64> = p.iter().map(|v| v / s).collect();
    f.gradient().iter().map(|g| g.eval_c64(&y).norm()).fold(0.0, f64::max) / f.coeff_abs_sum()
}

/// Rank of the Hessian of `f` at `p`, relative cutoff [`HESSIAN_RANK_TOL`].
pub fn hessian_rank(f: &MultiPoly, p: &[Complex64]) -> usize {
    let s = homotopy::max_abs(p);
    let y: Vec<Complex64> = p.iter().map(|v| v / s).collect();
    let h: Vec<Complex64> = f.hessian().iter().flatten().map(|h| h.eval_c64(&y)).collect();
    linalg::numeric_rank(&linalg::singular_values(&h, 4, 4), HESSIAN_RANK_TOL)
}

pub fn solve_gradient_system_unchecked(f: &MultiPoly, cfg: &SolverConfig) -> Result<GradientSolution> {
    cfg.validate()?;
    if f.num_vars() != 4 || f.is_zero() || !f.is_homogeneous(4) {
        return input("expected a nonzero homogeneous quartic in four variables");
    }
    let grad = f.gradient();
    let g = Gradient::new(f)?;
    let grad_c: Vec<CompiledPoly> = grad.iter().map(CompiledPoly::new).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let opts = TrackOptions {
        max_steps: cfg.max_steps,
        ..TrackOptions::default()
    };
    let mut candidates: Vec<(Vec<Complex64>, f64)> = Vec::new();
    let (mut total, mut failed) = (0, 0);
    for chart in 0..4 {
        // three random combinations of the four partials: a square system
        // whose solutions include every singular point
        let mut eqs = Vec::with_capacity(3);
        for _ in 0..3 {
            let mut acc = MultiPoly::zero(4);
            for gi in &grad {
                let c = random_complex(&mut rng);
                let c = crate::scalar::GaussianRational::new(
                    Rational::from_float(c.re).unwrap_or_default(),
                    Rational::from_float(c.im).unwrap_or_default(),
                );
                acc = &acc + &gi.scale(&c);
            }
            eqs.push(acc);
        }
        let sys = System::new(&eqs)?;
        let ends = homotopy::solve_total_degree(&sys, chart, &mut rng, &opts)?;
        total += ends.len();
        for end in ends {
            if end.status == PathStatus::Failed {
                failed += 1;
            }
            let x = g.full.refine(&end.point, 40, cfg.polish_tolerance * 1e-2);
            let r = g.residual(&grad_c, &x);
            if r < cfg.path_tolerance {
                candidates.push((normalize_projective(&x), r));
            }
        }
    }
    let mut warnings = Vec::new();
    if failed * 20 > total {
        warnings.push(format!("{failed} of {total} homotopy paths failed"));
    }
    let mut degenerate = None;
    let clusters = cluster(&g, candidates.clone(), cfg);
    if clusters.len() > 27 {
        degenerate = Some(format!("{} distinct singular endpoints exceed the Bezout count", clusters.len()));
    }
    let mut reps: Vec<(Vec<Complex64>, f64)> = Vec::with_capacity(clusters.len());
    for cl in clusters {
        let (x, r) = match cl.multiple {
            false => (cl.best, cl.best_residual),
            true => {
                let (x, r) = match snap_ladder(f, &cl.centroid, 1e-6) {
                    Some(q) => {
                        let x: Vec<Complex64> = q.iter().map(GaussianRational::to_c64).collect();
                        // fragments of one ring snap to the same point
                        if reps.iter().any(|(y, _)| fubini_study(y, &x) < cfg.dedupe_angle) {
                            continue;
                        }
                        (x, 0.0)
                    }
                    None => {
                        let r = g.residual(&grad_c, &cl.centroid);
                        if r < cl.best_residual.max(cfg.path_tolerance * 1e-2) {
                            (cl.centroid, r)
                        } else {
                            (cl.best, cl.best_residual)
                        }
                    }
                };
                if degenerate.is_none() {
                    if g.through_curve(f, &x, cfg) {
                        degenerate = Some("singular locus contains a curve".into());
                    }
                }
                (x, r)
            }
        };
        reps.push((x, r));
    }
    let mut pts: Vec<(ProjectivePointC, f64)> = reps
        .into_iter()
        .map(|(x, r)| (ProjectivePointC::new(&x).expect("nonzero"), r))
        .collect();
    pts.sort_by_key(|a| a.0.sort_key());
    let (points, residuals) = pts.into_iter().unzip();
    Ok(GradientSolution {
        points,
        residuals,
        total_paths: total,
        failed_paths: failed,
        degenerate,
        warnings,
        candidates,
    })
}

/// Hessian singular value (scaled, `|p|∞ = 1`) below which an endpoint is
/// treated as a multiple solution of the gradient system.
const MULTIPLE_SV: f64 = 1e-3;
/// Merge radius for endpoints near a multiple solution; tracked paths only
/// reach such points to accuracy `ε^{1/μ}`.
const MULTIPLE_RADIUS: f64 = 1e-2;
/// Rank cutoff for multiple points that do not snap to an exact point.
const MULTIPLE_RANK_TOL: f64 = 1e-4;
const SNAP_DENOMINATOR: i64 = 1000;
/// Coarsest snapping tolerance for multiple points; a ring of endpoints
/// around a point of high multiplicity can have radius of a few `1e-2`.
const SNAP_COARSE: f64 = 0.05;
/// Step off a multiple point used by the curve test.
const CURVE_STEP: f64 = 0.05;
/// Residual certifying a singular point on the slice of the curve test.
/// Near an isolated point of multiplicity `μ` the gradient on the slice is
/// of order `CURVE_STEP^μ`, far above this.
const CURVE_RESIDUAL: f64 = 1e-13;

struct Cluster {
    best: Vec<Complex64>,
    best_residual: f64,
    members: Vec<Vec<Complex64>>,
    multiple: bool,
    centroid: Vec<Complex64>,
    spread: f64,
}

fn third_sv(g: &Gradient, x: &[Complex64]) -> f64 {
    linalg::singular_values(&g.hessian_at(x), 4, 4)[2]
}

/// Single-linkage clustering. Two well-conditioned endpoints link at
/// `dedupe_angle`, pairs involving a multiple one at [`MULTIPLE_RADIUS`];
/// chains of links follow the ring of endpoints around a multiple point.
fn cluster(g: &Gradient, mut candidates: Vec<(Vec<Complex64>, f64)>, cfg: &SolverConfig) -> Vec<Cluster> {
    candidates.sort_by(|a, b| a.1.total_cmp(&b.1));
    let n = candidates.len();
    let multiple: Vec<bool> = candidates.iter().map(|(x, _)| third_sv(g, x) < MULTIPLE_SV).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in 0..i {
            let radius = if multiple[i] || multiple[j] { MULTIPLE_RADIUS } else { cfg.dedupe_angle };
            if fubini_study(&candidates[i].0, &candidates[j].0) < radius {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                // the smaller index has the smaller residual
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut out: Vec<Cluster> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = out.len();
            out.push(Cluster {
                best: candidates[r].0.clone(),
                best_residual: candidates[r].1,
                members: Vec::new(),
                multiple: false,
                centroid: Vec::new(),
                spread: 0.0,
            });
        }
        let c = &mut out[slot[r]];
        c.multiple |= multiple[i];
        c.members.push(candidates[i].0.clone());
    }
    for c in &mut out {
        c.centroid = centroid(&c.best, &c.members);
        c.spread = c.members.iter().map(|m| fubini_study(m, &c.centroid)).fold(0.0, f64::max);
    }
    out
}

/// Mean of projective points after aligning each to `anchor`'s phase.
fn centroid(anchor: &[Complex64], members: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut acc = vec![Complex64::new(0.0, 0.0); anchor.len()];
    for m in members {
        let dot: Complex64 = anchor.iter().zip(m).map(|(a, b)| a.conj() * b).sum();
        if dot.norm() == 0.0 {
            continue;
        }
        // rescale so that ⟨anchor, m⟩ = |anchor|²
        let a2: f64 = anchor.iter().map(|v| v.norm_sqr()).sum();
        let k = Complex64::new(a2, 0.0) / dot;
        for (s, v) in acc.iter_mut().zip(m) {
            *s += v * k;
        }
    }
    normalize_projective(&acc)
}

/// Gaussian-rational point within `tol` of `x` (largest coordinate `1`,
/// denominators at most 1000) at which `∇f` vanishes exactly. Each
/// coordinate is replaced by its first continued-fraction convergent within
/// `tol`.
pub fn snap_exact(f: &MultiPoly, x: &[Complex64], tol: f64) -> Option<[GaussianRational; 4]> {
    if x.len() != 4 {
        return None;
    }
    let y = normalize_projective(x);
    let mut q: [GaussianRational; 4] = core::array::from_fn(|_| GaussianRational::zero());
    for (qi, z) in q.iter_mut().zip(&y) {
        *qi = GaussianRational::new(
            first_convergent(z.re, SNAP_DENOMINATOR, tol)?,
            first_convergent(z.im, SNAP_DENOMINATOR, tol)?,
        );
    }
    for d in f.gradient() {
        if !d.eval_exact(&q).ok()?.is_zero() {
            return None;
        }
    }
    Some(q)
}

/// [`snap_exact`] over tolerances from [`SNAP_COARSE`] down to `fine`.
fn snap_ladder(f: &MultiPoly, x: &[Complex64], fine: f64) -> Option<[GaussianRational; 4]> {
    let mut tol = SNAP_COARSE;
    while tol >= fine {
        if let Some(q) = snap_exact(f, x, tol) {
            return Some(q);
        }
        tol *= 0.1;
    }
    None
}

impl Gradient {
    /// Whether the singular locus near the singular point `x` is a curve:
    /// along each kernel direction of the Hessian transverse to `x`, look
    /// for a singular point on the parallel hyperplane at distance
    /// [`CURVE_STEP`].
    fn through_curve(&self, f: &MultiPoly, x: &[Complex64], cfg: &SolverConfig) -> bool {
        let y = normalize_projective(x);
        let h = self.hessian_at(&y);
        let mut hh = vec![Complex64::new(0.0, 0.0); 16];
        for i in 0..4 {
            for j in 0..4 {
                hh[i * 4 + j] = (0..4).map(|k| h[k * 4 + i].conj() * h[k * 4 + j]).sum();
            }
        }
        let (vals, vecs) = linalg::hermitian_eigen(&hh, 4);
        let y2: f64 = y.iter().map(|v| v.norm_sqr()).sum();
        let top = vals[3].max(0.0);
        let grad = f.gradient();
        let grad_c: Vec<CompiledPoly> = grad.iter().map(CompiledPoly::new).collect();
        for (val, v) in vals.iter().zip(&vecs) {
            if libm::sqrt(val.max(0.0)) >= MULTIPLE_SV.max(libm::sqrt(top) * 1e-3) {
                continue;
            }
            // project out y
            let dot: Complex64 = y.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>() / y2;
            let mut w: Vec<Complex64> = v.iter().zip(&y).map(|(a, b)| a - dot * b).collect();
            let wn = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum::<f64>());
            if wn < 0.5 {
                continue;
            }
            w.iter_mut().for_each(|z| *z /= wn);
            // L(z) = ⟨w, z⟩ − step·⟨y, z⟩/|y|², vanishing at y + step·w
            let coeffs: Vec<GaussianRational> = w
                .iter()
                .zip(&y)
                .map(|(a, b)| {
                    let c = a.conj() - b.conj() * (CURVE_STEP / y2);
                    GaussianRational::new(
                        Rational::from_float(c.re).unwrap_or_default(),
                        Rational::from_float(c.im).unwrap_or_default(),
                    )
                })
                .collect();
            let mut eqs: Vec<MultiPoly> = grad.iter().filter(|d| !d.is_zero()).cloned().collect();
            eqs.push(MultiPoly::linear(&coeffs));
            let Ok(sys) = System::new(&eqs) else { continue };
            let start: Vec<Complex64> = y.iter().zip(&w).map(|(a, b)| a + b * CURVE_STEP).collect();
            let z = sys.refine(&start, 60, cfg.polish_tolerance * 1e-2);
            if self.residual(&grad_c, &z) < CURVE_RESIDUAL && fubini_study(&z, &y) > CURVE_STEP * 0.25 {
                return true;
            }
        }
        false
    }
}

/// All isolated common zeros of `∂f/∂x_0..∂f/∂x_3` in `CP³`.
///
/// Per chart `k`, 27 paths of a total-degree homotopy track a randomized
/// square subsystem; endpoints are polished on the full gradient, kept when
/// the scaled residual is below `path_tolerance`, and merged across charts.
pub fn solve_gradient_system(f: &MultiPoly, cfg: &SolverConfig) -> Result<GradientSolution> {
    let sol = solve_gradient_system_unchecked(f, cfg)?;
    match &sol.degenerate {
        Some(why) => Err(Error::Degenerate(why.clone())),
        None => Ok(sol),
    }
}

/// Corank, Hessian rank and reality of a singular point of `f = det M`.
/// Points that snap to an exact Gaussian-rational zero of `∇f` are
/// classified with exact ranks.
pub fn classify_point(p: &HermitianPencil, f: &MultiPoly, pt: &ProjectivePointC, cfg: &SolverConfig) -> Result<SingularPoint> {
    let x = pt.coords();
    let residual = gradient_residual(f, x);
    if !(residual < cfg.path_tolerance) {
        return Err(Error::NotSingularPoint { residual });
    }
    let tol = libm::sqrt(residual).max(cfg.dedupe_angle);
    let (rank, hrank, residual) = match snap_exact(f, x, tol) {
        Some(q) => {
            let h: Vec<GaussianRational> = f
                .hessian()
                .iter()
                .flatten()
                .map(|h| h.eval_exact(&q))
                .collect::<Result<_>>()?;
            (p.rank_at_exact(&q)?, GMatrix::new(4, 4, h).rank(), 0.0)
        }
        None => {
            let hr = hessian_rank(f, x);
            let tol = if hr < 3 { MULTIPLE_RANK_TOL } else { RANK_TOL };
            (p.rank_at_c64(x, tol)?, hr, residual)
        }
    };
    Ok(SingularPoint {
        location: pt.clone(),
        pencil_corank: 4 - rank,
        hessian_rank: hrank,
        is_real: pt.is_real(cfg.reality_tolerance),
        residual,
        on_spectrahedron: None,
    })
}

/// `(η, ρ, σ)` of the singularities of `det M`. `σ` is only counted when a
/// definite point `e` is supplied.
pub fn profile(p: &HermitianPencil, e: Option<&[Rational]>, cfg: &SolverConfig) -> Result<Profile> {
    let f = p.det()?;
    if let Some(e) = e {
        spectra::definite_sign(p, e)?;
    }
    let sol = solve_gradient_system_unchecked(&f, cfg)?;
    let mut points = Vec::with_capacity(sol.points.len());
    for pt in &sol.points {
        let mut sp = classify_point(p, &f, pt, cfg)?;
        if sp.is_essential() && sp.is_real {
            if let Some(e) = e {
                // either representative of the projective point
                let x = pt.real_parts();
                let tol = spectra::SEMIDEFINITE_TOL;
                sp.on_spectrahedron = Some(
                    spectra::on_spectrahedron(p, e, &x, tol)? || spectra::on_spectrahedron(p, e, &x.map(|v| -v), tol)?,
                );
            }
        }
        points.push(sp);
    }
    let ess: Vec<&SingularPoint> = points.iter().filter(|s| s.is_essential()).collect();
    let eta = ess.len();
    let rho = ess.iter().filter(|s| s.is_real).count();
    let sigma = ess.iter().filter(|s| s.on_spectrahedron == Some(true)).count();
    let mut warnings = sol.warnings.clone();
    if let Some(why) = &sol.degenerate {
        warnings.push(why.clone());
    }
    for s in points.iter().filter(|s| s.is_essential() && !s.is_node()) {
        warnings.push(format!(
            "essential point {:?} has Hessian rank {} and is not a node",
            s.location.real_parts(),
            s.hessian_rank
        ));
    }
    Ok(Profile {
        eta,
        rho,
        sigma,
        degenerate: sol.degenerate.is_some(),
        points,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pencil::HermitianMatrix;
    use crate::scalar::{rat, rat_frac};

    fn x(i: usize) -> MultiPoly {
        MultiPoly::var(4, i)
    }

    #[test]
    fn fermat_is_smooth() {
        let f = &(&x(0).pow(4) + &x(1).pow(4)) + &(&x(2).pow(4) + &x(3).pow(4));
        let sol = solve_gradient_system(&f, &SolverConfig::default()).unwrap();
        assert!(sol.points.is_empty());
        assert_eq!(sol.total_paths, 108);
    }

    #[test]
    fn coordinate_tetrahedron_is_degenerate() {
        let f = &(&x(0) * &x(1)) * &(&x(2) * &x(3));
        assert!(matches!(
            solve_gradient_system(&f, &SolverConfig::default()),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn union_of_quadrics_is_degenerate() {
        // singular along the intersection curve of the two quadrics
        let q1 = &(&(&x(0).pow(2) + &x(1).pow(2)) + &x(2).pow(2)) - &x(3).pow(2);
        let k = |n: i64| MultiPoly::constant(4, GaussianRational::from(n));
        let q2 = &(&(&x(0).pow(2) + &(&k(2) * &x(1).pow(2))) + &(&k(3) * &x(2).pow(2))) - &(&k(6) * &x(3).pow(2));
        assert!(solve_gradient_system(&(&q1 * &q2), &SolverConfig::default()).is_err());
    }

    #[test]
    fn cusp_counts_once() {
        // x² + y³ + z² in the chart x3 = 1: an isolated A2 point at [0:0:0:1]
        let f = &(&(&x(3).pow(2) * &(&x(0).pow(2) + &x(2).pow(2))) + &(&x(1).pow(3) * &x(3)))
            + &(&(&x(0).pow(4) + &x(1).pow(4)) + &x(2).pow(4));
        let sol = solve_gradient_system(&f, &SolverConfig::default()).unwrap();
        let z = Complex64::new(0.0, 0.0);
        let corner = ProjectivePointC::new(&[z, z, z, Complex64::new(1.0, 0.0)]).unwrap();
        let near: Vec<_> = sol.points.iter().filter(|p| p.distance(&corner) < 0.1).collect();
        assert_eq!(near.len(), 1);
        assert!(near[0].distance(&corner) < 1e-12);
        assert_eq!(hessian_rank(&f, near[0].coords()), 2);
    }

    #[test]
    fn snapping_needs_an_exact_zero() {
        let f = &(&x(0) * &x(1)) * &(&x(2) * &x(3));
        let c = |re: f64| Complex64::new(re, 0.0);
        let q = snap_exact(&f, &[c(1.0), c(1e-4), c(-2e-4), c(0.6)], 1e-3).unwrap();
        assert_eq!(q[3], GaussianRational::real(Rational::new(3.into(), 5.into())));
        assert!(snap_exact(&f, &[c(1.0), c(0.3), c(0.0), c(0.7)], 1e-3).is_none());
        assert_eq!(first_convergent(-0.0149, 1000, 0.05), Some(rat(0)));
        assert_eq!(first_convergent(0.3334, 1000, 1e-3), Some(rat_frac(1, 3)));
    }

    fn real_diag(v: [i64; 4]) -> HermitianMatrix {
        let mut re = [0; 16];
        for i in 0..4 {
            re[i * 5] = v[i];
        }
        HermitianMatrix::new(GMatrix::from_ints(4, 4, &re, &[0; 16])).unwrap()
    }

    #[test]
    fn planted_node_profile() {
        // M0 = diag(1,1,0,0) makes [1:0:0:0] a rank-2 point
        let m0 = real_diag([1, 1, 0, 0]);
        let m1 = HermitianMatrix::new(GMatrix::from_ints(
            4,
            4,
            &[2, 1, 0, 1, 1, -1, 1, 0, 0, 1, 1, 2, 1, 0, 2, 3],
            &[0, 1, -1, 0, -1, 0, 0, 2, 1, 0, 0, -1, 0, -2, 1, 0],
        ))
        .unwrap();
        let m2 = HermitianMatrix::new(GMatrix::from_ints(
            4,
            4,
            &[-1, 0, 2, 1, 0, 3, 1, -1, 2, 1, 0, 1, 1, -1, 1, 1],
            &[0, 2, 0, 1, -2, 0, 1, 0, 0, -1, 0, 1, -1, 0, -1, 0],
        ))
        .unwrap();
        let p = HermitianPencil::new([m0, m1, m2, HermitianMatrix::identity()]);
        let e = [rat(0), rat(0), rat(0), rat(1)];
        let prof = profile(&p, Some(&e), &SolverConfig::default()).unwrap();
        assert!(!prof.degenerate, "{:?}", prof.warnings);
        let z = Complex64::new(0.0, 0.0);
        let corner = ProjectivePointC::new(&[Complex64::new(1.0, 0.0), z, z, z]).unwrap();
        let planted = prof
            .points
            .iter()
            .find(|s| s.location.distance(&corner) < 1e-6)
            .expect("planted node found");
        assert_eq!(planted.pencil_corank, 2);
        assert_eq!(planted.hessian_rank, 3);
        assert!(planted.is_real);
        // M0 is positive semidefinite, so [1:0:0:0] lies on the spectrahedron
        assert_eq!(planted.on_spectrahedron, Some(true));
        assert!(prof.eta >= 1 && prof.rho >= 1 && prof.sigma >= 1);
        assert_eq!(prof.eta % 2, prof.rho % 2);
        // conjugation closure
        for s in &prof.points {
            let c = s.location.conj();
            assert!(prof.points.iter().any(|t| t.location.distance(&c) < 1e-6));
        }
    }

    #[test]
    fn smooth_point_is_rejected() {
        let p = HermitianPencil::new([real_diag([1, 0, 0, 0]), real_diag([0, 1, 0, 0]), real_diag([0, 0, 1, 0]), real_diag([0, 0, 0, 1])]);
        let f = p.det().unwrap();
        let pt = ProjectivePointC::new(&[Complex64::new(1.0, 0.0); 4]).unwrap();
        assert!(matches!(
            classify_point(&p, &f, &pt, &SolverConfig::default()),
            Err(Error::NotSingularPoint { .. })
        ));
    }
}
