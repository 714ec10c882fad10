//! Constructions of pencils with prescribed `(η, ρ, σ)`, the search loop
//! that verifies them, and the known/missing tracker.
//!
//! Rank-2 points are planted exactly: a coefficient `v·v* ± w·w*` puts one
//! at a coordinate point, and a conjugate pair on a coordinate line comes
//! from an exact linear solve. Whether a real point lies on the
//! spectrahedron is decided by the plant: `v·v* + w·w*` is semidefinite,
//! `v·v* − w·w*` is not.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{input, Error, Result};
use crate::linalg;
use crate::matrix::GMatrix;
use crate::pencil::{HermitianMatrix, HermitianPencil};
use crate::scalar::{first_convergent, rat, GaussianRational, Rational};
use crate::singularities::{profile, snap_exact, Profile, SolverConfig};
use crate::sample::{from_gmatrix, plant, random_definite, random_hermitian, random_vector};
use crate::x2;

/// Values of `η` that can occur.
pub const ETAS: [usize; 10] = [0, 1, 2, 3, 4, 5, 6, 7, 8, 10];

const PAIR_RETRIES: usize = 16;
const DEFINITE_SAMPLES: usize = 512;
const REFINE_STARTS: usize = 8;
const REFINE_STEPS: usize = 200;
const PLANE_TOL: f64 = 1e-7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SearchTarget {
    pub eta: usize,
    pub rho: usize,
    pub sigma: usize,
}

impl SearchTarget {
    pub fn new(eta: usize, rho: usize, sigma: usize) -> Result<Self> {
        if eta == 9 {
            return input("η = 9 does not occur: nine essential nodes force a symmetroid, which has ten");
        }
        if eta > 10 {
            return input(format!("η = {eta} exceeds the bound of ten essential points"));
        }
        if sigma > rho || rho > eta {
            return input(format!("need σ ≤ ρ ≤ η, got ({eta}, {rho}, {sigma})"));
        }
        if (eta - rho) % 2 != 0 {
            return input("non-real essential points come in conjugate pairs, so ρ ≡ η (mod 2)");
        }
        if eta == 10 && (rho < 2 || (rho - sigma) % 2 != 0) {
            return input("for η = 10 need ρ ≥ 2 and σ ≡ ρ (mod 2)");
        }
        Ok(Self { eta, rho, sigma })
    }

    pub fn triple(&self) -> (usize, usize, usize) {
        (self.eta, self.rho, self.sigma)
    }
}

/// Admissible `(ρ, σ)` for a given `η`, ordered as in the table rows.
pub fn cells(eta: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for rho in (0..=eta).rev() {
        for sigma in (0..=rho).rev() {
            if SearchTarget::new(eta, rho, sigma).is_ok() {
                out.push((rho, sigma));
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    SmallEta,
    ConjugatePair,
    Planted,
    Deform,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::SmallEta => "small-eta",
            Strategy::ConjugatePair => "conjugate-pair",
            Strategy::Planted => "planted",
            Strategy::Deform => "deform",
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-candidate seed, independent of evaluation order.
pub fn candidate_seed(seed: u64, index: usize) -> u64 {
    splitmix(seed ^ splitmix(index as u64))
}

/// Basis of the real vector space of Hermitian 4×4 matrices.
fn hermitian_basis() -> Vec<GMatrix> {
    let mut out = Vec::with_capacity(16);
    for i in 0..4 {
        for j in i..4 {
            let mut m = GMatrix::zeros(4, 4);
            m.set(i, j, GaussianRational::one());
            m.set(j, i, GaussianRational::one());
            out.push(m);
            if i != j {
                let mut m = GMatrix::zeros(4, 4);
                m.set(i, j, GaussianRational::i());
                m.set(j, i, -GaussianRational::i());
                out.push(m);
            }
        }
    }
    out
}

fn mat_vec(m: &GMatrix, v: &[GaussianRational; 4]) -> [GaussianRational; 4] {
    core::array::from_fn(|i| {
        let mut acc = GaussianRational::zero();
        for j in 0..4 {
            acc += &(m.get(i, j) * &v[j]);
        }
        acc
    })
}

/// Hermitian `(M₀, M₁)` with `(M₀ + t₀M₁)` of rank 2, for a random
/// non-real `t₀`. The conjugate `t̄₀` then drops rank too, since
/// `(M₀ + t₀M₁)* = M₀ + t̄₀M₁`.
fn conjugate_pair_coeffs<R: Rng + ?Sized>(rng: &mut R) -> Result<(HermitianMatrix, HermitianMatrix, GaussianRational)> {
    let basis = hermitian_basis();
    for _ in 0..PAIR_RETRIES {
        let im = rng.random_range(1..=2) * if rng.random::<bool>() { 1 } else { -1 };
        let t0 = GaussianRational::from_ints(rng.random_range(-2..=2), im);
        let vs = [random_vector(rng, 2), random_vector(rng, 2)];
        // 16 real equations in the 32 real coordinates of (M₀, M₁)
        let mut sys = GMatrix::zeros(16, 32);
        for (s, v) in vs.iter().enumerate() {
            for (k, b) in basis.iter().enumerate() {
                let bv = mat_vec(b, v);
                for r in 0..4 {
                    let tb = &t0 * &bv[r];
                    let row = 8 * s + 2 * r;
                    sys.set(row, k, GaussianRational::real(bv[r].re.clone()));
                    sys.set(row + 1, k, GaussianRational::real(bv[r].im.clone()));
                    sys.set(row, 16 + k, GaussianRational::real(tb.re));
                    sys.set(row + 1, 16 + k, GaussianRational::real(tb.im));
                }
            }
        }
        if sys.rank() != 16 {
            continue;
        }
        let ker = sys.kernel();
        let mut coords = vec![Rational::zero(); 32];
        for k in &ker {
            let c = rat(rng.random_range(-2..=2));
            for (x, y) in coords.iter_mut().zip(k) {
                *x += &c * &y.re;
            }
        }
        let combine = |off: usize| {
            let mut m = GMatrix::zeros(4, 4);
            for (k, b) in basis.iter().enumerate() {
                m = m.add(&b.scale(&GaussianRational::real(coords[off + k].clone())));
            }
            m
        };
        let (m0, m1) = (combine(0), combine(16));
        if m1.rank() == 0 || m0.add(&m1.scale(&t0)).rank() != 2 {
            continue;
        }
        return Ok((from_gmatrix(m0), from_gmatrix(m1), t0));
    }
    Err(Error::Solver("conjugate-pair system stayed rank-deficient".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Fill {
    Random,
    Definite,
    Semidefinite,
    Indefinite,
}

/// How a constructive strategy realizes a target with `η ≤ 4`.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Plan {
    strategy: Strategy,
    pairs: usize,
    fills: Vec<Fill>,
}

fn plan_for(t: &SearchTarget) -> Option<Plan> {
    if t.eta > 4 {
        return None;
    }
    let pairs = (t.eta - t.rho) / 2;
    let mut plants = vec![Fill::Semidefinite; t.sigma];
    plants.extend(vec![Fill::Indefinite; t.rho - t.sigma]);
    let free = 4 - 2 * pairs - plants.len();
    let strategy = match (pairs, free) {
        (0, 0) => Strategy::Planted,
        (0, _) => Strategy::SmallEta,
        _ => Strategy::ConjugatePair,
    };
    let mut fills = plants;
    if free > 0 {
        fills.extend(vec![Fill::Random; free - 1]);
        if strategy == Strategy::SmallEta {
            fills.insert(0, Fill::Definite);
        } else {
            fills.push(Fill::Definite);
        }
    }
    Some(Plan { strategy, pairs, fills })
}

fn realize<R: Rng + ?Sized>(plan: &Plan, rng: &mut R) -> Result<HermitianPencil> {
    let mut coeffs = Vec::with_capacity(4);
    for _ in 0..plan.pairs {
        let (m0, m1, _) = conjugate_pair_coeffs(rng)?;
        coeffs.push(m0);
        coeffs.push(m1);
    }
    for f in &plan.fills {
        coeffs.push(match f {
            Fill::Random => random_hermitian(rng),
            Fill::Definite => random_definite(rng),
            Fill::Semidefinite => plant(rng, true),
            Fill::Indefinite => plant(rng, false),
        });
    }
    let coeffs: [HermitianMatrix; 4] = coeffs.try_into().map_err(|_| Error::Invariant("plan fills four slots".into()))?;
    Ok(HermitianPencil::new(coeffs))
}

/// `M₀` positive definite and `η` planted rank-2 coefficients, `σ` of them
/// semidefinite; the rest random.
pub fn construct_small_eta(target: &SearchTarget, seed: u64) -> Result<HermitianPencil> {
    if target.eta > 3 || target.rho != target.eta {
        return input("the small-η construction needs η ≤ 3 and ρ = η");
    }
    let plan = plan_for(target).expect("η ≤ 3 has a plan");
    realize(&plan, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A pencil whose `(x₀, x₁)` line carries a conjugate pair of rank-2
/// points; `M₂` and `M₃` are random.
pub fn construct_conjugate_pair(seed: u64) -> Result<HermitianPencil> {
    let plan = Plan { strategy: Strategy::ConjugatePair, pairs: 1, fills: vec![Fill::Random, Fill::Random] };
    realize(&plan, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Like [`construct_conjugate_pair`], also returning `t₀` with
/// `rank M(1, t₀, 0, 0) = 2`.
pub fn conjugate_pair_with_parameter(seed: u64) -> Result<(HermitianPencil, GaussianRational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m0, m1, t0) = conjugate_pair_coeffs(&mut rng)?;
    let p = HermitianPencil::new([m0, m1, random_hermitian(&mut rng), random_hermitian(&mut rng)]);
    Ok((p, t0))
}

/// A rational real plane of `P³` through essential points of a start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformPlane {
    pub normal: [Rational; 4],
    /// Real rational points spanning the plane.
    pub basis: [[Rational; 4]; 3],
    /// Essential points of the start lying on it.
    pub points_on: usize,
}

/// A start pencil with the data the deformation move needs: exact real
/// essential points `P₁` and rational planes spanned by other essential
/// points, which pin down `P₂, P₃, P₄` up to Galois conjugation.
#[derive(Clone, Debug)]
pub struct DeformStart {
    pub pencil: HermitianPencil,
    pub profile: Profile,
    pub anchors: Vec<[Rational; 4]>,
    pub planes: Vec<DeformPlane>,
    /// `(anchor, plane)` pairs with the anchor off the plane.
    pub moves: Vec<(usize, usize)>,
}

fn plane_normal(p: &[[Complex64; 4]; 3]) -> [Complex64; 4] {
    let minor = |skip: usize| {
        let c: Vec<usize> = (0..4).filter(|&k| k != skip).collect();
        let m = |r: usize, k: usize| p[r][c[k]];
        m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
            + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0))
    };
    core::array::from_fn(|k| if k % 2 == 0 { minor(k) } else { -minor(k) })
}

fn snap_normal(n: &[Complex64; 4]) -> Option<[Rational; 4]> {
    let big = n.iter().copied().fold(Complex64::new(0.0, 0.0), |m, v| if v.norm() > m.norm() { v } else { m });
    if big.norm() < 1e-10 {
        return None;
    }
    let mut out: [Rational; 4] = core::array::from_fn(|_| Rational::zero());
    for (o, v) in out.iter_mut().zip(n) {
        let z = v / big;
        if z.im.abs() > PLANE_TOL {
            return None;
        }
        *o = first_convergent(z.re, 1000, PLANE_TOL)?;
    }
    Some(out)
}

fn on_plane(n: &[Rational; 4], p: &[Complex64; 4]) -> bool {
    let nf: Vec<f64> = n.iter().map(crate::scalar::rat_to_f64).collect();
    let dot: Complex64 = nf.iter().zip(p).map(|(a, b)| b * *a).sum();
    let scale = libm::sqrt(nf.iter().map(|v| v * v).sum::<f64>()) * libm::sqrt(p.iter().map(|v| v.norm_sqr()).sum::<f64>());
    dot.norm() <= PLANE_TOL * scale
}

fn dot_exact(n: &[Rational; 4], p: &[Rational; 4]) -> Rational {
    n.iter().zip(p).map(|(a, b)| a * b).fold(Rational::zero(), |a, b| a + b)
}

/// Profiles `start` and collects anchors and planes for [`deform`].
pub fn prepare_deform(start: &HermitianPencil, cfg: &SolverConfig) -> Result<DeformStart> {
    let prof = profile(start, None, cfg)?;
    if prof.degenerate {
        return Err(Error::Precondition("the start surface is degenerate".into()));
    }
    let ess: Vec<[Complex64; 4]> = prof.points.iter().filter(|s| s.is_essential()).map(|s| *s.location.coords()).collect();
    if ess.len() < 4 {
        return Err(Error::Precondition(format!("deformation needs four essential points, the start has {}", ess.len())));
    }
    let f = start.det()?;
    let mut anchors = Vec::new();
    for p in &ess {
        if let Some(q) = snap_exact(&f, p, 1e-9) {
            if q.iter().all(GaussianRational::is_real) {
                anchors.push(q.map(|z| z.re));
            }
        }
    }
    let mut planes: Vec<DeformPlane> = Vec::new();
    let n = ess.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let Some(normal) = snap_normal(&plane_normal(&[ess[a], ess[b], ess[c]])) else { continue };
                if ![a, b, c].iter().all(|&k| on_plane(&normal, &ess[k])) || planes.iter().any(|p| p.normal == normal) {
                    continue;
                }
                let row = GMatrix::new(1, 4, normal.iter().map(|r| GaussianRational::real(r.clone())).collect());
                let ker = row.kernel();
                let basis: [[Rational; 4]; 3] = core::array::from_fn(|k| core::array::from_fn(|j| ker[k][j].re.clone()));
                let points_on = ess.iter().filter(|p| on_plane(&normal, p)).count();
                planes.push(DeformPlane { normal, basis, points_on });
            }
        }
    }
    let mut moves = Vec::new();
    for (i, p1) in anchors.iter().enumerate() {
        for (j, pl) in planes.iter().enumerate() {
            if !dot_exact(&pl.normal, p1).is_zero() {
                moves.push((i, j));
            }
        }
    }
    if moves.is_empty() {
        return Err(Error::Precondition(
            "no exact real essential point off a rational plane through three others".into(),
        ));
    }
    Ok(DeformStart { pencil: start.clone(), profile: prof, anchors, planes, moves })
}

fn real_point(p: &[Rational; 4]) -> Vec<GaussianRational> {
    p.iter().map(|r| GaussianRational::real(r.clone())).collect()
}

impl DeformStart {
    /// `M(P₁)` for a move.
    pub fn anchor_matrix(&self, mv: usize) -> Result<HermitianMatrix> {
        let (i, _) = self.moves[mv];
        HermitianMatrix::new(self.pencil.eval_exact(&real_point(&self.anchors[i]))?)
    }

    /// The `ℓ`-forms of the web at `P₁`.
    pub fn web(&self, mv: usize) -> Result<x2::EllForms> {
        x2::ell_forms(&x2::kernel_line(&self.anchor_matrix(mv)?)?)
    }

    /// The pencil spanned by the web member `(a, b, c, d)` at `P₁` and the
    /// plane of the move, in coordinates `(P′₁, q₁, q₂, q₃)`.
    pub fn deform_with(&self, mv: usize, params: &[Rational; 4]) -> Result<HermitianPencil> {
        let ef = self.web(mv)?;
        let [a, b, c, d] = params;
        let p1 = x2::quadric_to_hermitian(&x2::web_quadric(&ef, a, b, c, d))?;
        if p1.rank() != 2 {
            return input("web parameters give a quadric of rank below four");
        }
        let (_, j) = self.moves[mv];
        let mut coeffs = vec![p1];
        for q in &self.planes[j].basis {
            coeffs.push(HermitianMatrix::new(self.pencil.eval_exact(&real_point(q))?)?);
        }
        let coeffs: [HermitianMatrix; 4] = coeffs.try_into().expect("four coefficients");
        Ok(HermitianPencil::new(coeffs))
    }

    pub fn draw_seeded(&self, seed: u64) -> Result<HermitianPencil> {
        self.draw(&mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<HermitianPencil> {
        let mv = rng.random_range(0..self.moves.len());
        loop {
            let sign = |rng: &mut R| if rng.random::<bool>() { 1 } else { -1 };
            let a = rng.random_range(1..=3) * sign(rng);
            let d = rng.random_range(1..=3) * sign(rng);
            let b = rng.random_range(-3..=3);
            let c = rng.random_range(-3..=3);
            if 4 * a * d - b * b - c * c != 0 {
                return self.deform_with(mv, &[rat(a), rat(b), rat(c), rat(d)]);
            }
        }
    }
}

/// The deformation move: replace an exact real essential point `P₁` by a
/// random rank-2 matrix with the same kernel (a member of the web of
/// rank-4 quadrics singular along `Sing(Q_{P₁})`) and keep the plane
/// through `P₂, P₃, P₄`.
pub fn deform(start: &HermitianPencil, seed: u64, cfg: &SolverConfig) -> Result<HermitianPencil> {
    prepare_deform(start, cfg)?.draw_seeded(seed)
}

fn margin(coeffs: &[Vec<Complex64>; 4], x: &[f64; 4]) -> (f64, [f64; 4]) {
    let mut m = vec![Complex64::new(0.0, 0.0); 16];
    for (c, &xk) in coeffs.iter().zip(x) {
        for (o, v) in m.iter_mut().zip(c) {
            *o += v * xk;
        }
    }
    let (vals, vecs) = linalg::hermitian_eigen(&m, 4);
    let (score, u, s) = if vals[0] >= -vals[3] { (vals[0], &vecs[0], 1.0) } else { (-vals[3], &vecs[3], -1.0) };
    let grad = core::array::from_fn(|k| {
        let cu: Vec<Complex64> = (0..4).map(|i| (0..4).map(|j| coeffs[k][i * 4 + j] * u[j]).sum()).collect();
        s * u.iter().zip(&cu).map(|(a, b)| a.conj() * b).sum::<Complex64>().re
    });
    (score, grad)
}

fn normalize(x: &mut [f64; 4]) -> bool {
    let n = libm::sqrt(x.iter().map(|v| v * v).sum::<f64>());
    if !(n > 0.0) {
        return false;
    }
    x.iter_mut().for_each(|v| *v /= n);
    true
}

fn exact_definite(p: &HermitianPencil, x: &[f64; 4]) -> Option<Vec<Rational>> {
    let big = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for k in 0..13 {
        let q = (1u64 << k) as f64;
        let ints: Vec<i64> = x.iter().map(|v| libm::round(v / big * q) as i64).collect();
        if ints.iter().all(|&v| v == 0) {
            continue;
        }
        let g = ints.iter().fold(0i64, |g, &v| num_integer::gcd(g, v));
        let e: Vec<Rational> = ints.iter().map(|&v| rat(v / g)).collect();
        let eg: Vec<GaussianRational> = e.iter().cloned().map(GaussianRational::real).collect();
        if p.is_definite_at(&eg).map(|v| v.is_definite()).unwrap_or(false) {
            return Some(e);
        }
    }
    None
}

/// A real integer point where `M(e)` is definite, if one is found: the
/// coordinate points first, then seeded samples, then ascent of the
/// smallest eigenvalue (of `±M`) from the best samples.
pub fn find_definite_point(p: &HermitianPencil, seed: u64) -> Option<Vec<Rational>> {
    let coeffs: [Vec<Complex64>; 4] = core::array::from_fn(|k| p.coeff(k).as_matrix().to_c64());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples: Vec<[f64; 4]> = (0..4).map(|k| core::array::from_fn(|j| if j == k { 1.0 } else { 0.0 })).collect();
    samples.push([1.0; 4]);
    for _ in 0..DEFINITE_SAMPLES {
        let mut x: [f64; 4] = core::array::from_fn(|_| rng.random_range(-1.0..1.0));
        if normalize(&mut x) {
            samples.push(x);
        }
    }
    let mut scored: Vec<(f64, [f64; 4])> = samples.into_iter().map(|x| (margin(&coeffs, &x).0, x)).collect();
    for (s, x) in &scored {
        if *s > 0.0 {
            if let Some(e) = exact_definite(p, x) {
                return Some(e);
            }
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (_, x0) in scored.iter().take(REFINE_STARTS) {
        let mut x = *x0;
        let mut step = 0.1;
        let (mut s, mut g) = margin(&coeffs, &x);
        for _ in 0..REFINE_STEPS {
            let gx: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
            let mut y: [f64; 4] = core::array::from_fn(|k| x[k] + step * (g[k] - gx * x[k]));
            if !normalize(&mut y) {
                break;
            }
            let (sy, gy) = margin(&coeffs, &y);
            if sy > s {
                (x, s, g) = (y, sy, gy);
                step *= 1.2;
            } else {
                step *= 0.5;
                if step < 1e-9 {
                    break;
                }
            }
            if s > 0.0 {
                if let Some(e) = exact_definite(p, &x) {
                    return Some(e);
                }
            }
        }
    }
    None
}

#[derive(Clone, Debug)]
pub struct FoundExample {
    pub pencil: HermitianPencil,
    pub e: Vec<Rational>,
    pub profile: Profile,
    pub strategy: Strategy,
    pub seed: u64,
    pub index: usize,
}

impl FoundExample {
    pub fn triple(&self) -> (usize, usize, usize) {
        (self.profile.eta, self.profile.rho, self.profile.sigma)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Rejection {
    Construction(Error),
    NoDefinitePoint,
    Profile(Error),
    Degenerate,
    Mismatch((usize, usize, usize)),
    /// A second solver seed disagreed.
    Unstable,
}

#[derive(Clone, Debug)]
pub struct SearchConfig {
    /// Candidates per seed.
    pub budget: usize,
    /// Stop after this many verified examples.
    pub max_hits: Option<usize>,
    pub solver: SolverConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { budget: 10_000, max_hits: Some(1), solver: SolverConfig::default() }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub candidates: usize,
    pub construction_failures: usize,
    pub no_definite_point: usize,
    pub profile_errors: usize,
    pub degenerate: usize,
    pub mismatched: usize,
    pub unstable: usize,
    pub hits: usize,
    /// Verified triples other than the target.
    pub other_triples: BTreeMap<(usize, usize, usize), usize>,
}

#[derive(Clone, Debug, Default)]
pub struct SearchOutcome {
    pub found: Vec<FoundExample>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn done(&self, cfg: &SearchConfig) -> bool {
        cfg.max_hits.is_some_and(|m| self.found.len() >= m)
    }

    pub fn absorb(&mut self, r: core::result::Result<FoundExample, Rejection>) {
        let s = &mut self.stats;
        s.candidates += 1;
        match r {
            Ok(f) => {
                s.hits += 1;
                self.found.push(f);
            }
            Err(Rejection::Construction(_)) => s.construction_failures += 1,
            Err(Rejection::NoDefinitePoint) => s.no_definite_point += 1,
            Err(Rejection::Profile(_)) => s.profile_errors += 1,
            Err(Rejection::Degenerate) => s.degenerate += 1,
            Err(Rejection::Mismatch(t)) => {
                s.mismatched += 1;
                *s.other_triples.entry(t).or_insert(0) += 1;
            }
            Err(Rejection::Unstable) => s.unstable += 1,
        }
    }
}

/// Candidate `index` for `seed`, a pure function of its arguments.
pub fn generate_candidate(
    target: &SearchTarget,
    seed: u64,
    index: usize,
    starts: &[DeformStart],
) -> Result<(HermitianPencil, Strategy)> {
    let mut rng = ChaCha8Rng::seed_from_u64(candidate_seed(seed, index));
    if let Some(plan) = plan_for(target) {
        return Ok((realize(&plan, &mut rng)?, plan.strategy));
    }
    if starts.is_empty() {
        return Err(Error::Precondition(format!("η = {} needs start pencils for the deformation move", target.eta)));
    }
    let start = &starts[index % starts.len()];
    Ok((start.draw(&mut rng)?, Strategy::Deform))
}

/// Builds and verifies candidate `index`: a definite point, a profile
/// matching the target, and the same profile under another solver seed.
pub fn evaluate_candidate(
    target: &SearchTarget,
    seed: u64,
    index: usize,
    cfg: &SearchConfig,
    starts: &[DeformStart],
) -> core::result::Result<FoundExample, Rejection> {
    let (pencil, strategy) = generate_candidate(target, seed, index, starts).map_err(Rejection::Construction)?;
    let e = find_definite_point(&pencil, candidate_seed(seed, index) ^ 1).ok_or(Rejection::NoDefinitePoint)?;
    let check = |solver: &SolverConfig| -> core::result::Result<Profile, Rejection> {
        let prof = profile(&pencil, Some(&e), solver).map_err(Rejection::Profile)?;
        if prof.degenerate {
            return Err(Rejection::Degenerate);
        }
        let got = (prof.eta, prof.rho, prof.sigma);
        if got != target.triple() {
            return Err(Rejection::Mismatch(got));
        }
        Ok(prof)
    };
    let prof = check(&cfg.solver)?;
    let again = SolverConfig { seed: cfg.solver.seed.wrapping_add(1), ..cfg.solver };
    match check(&again) {
        Ok(_) => {}
        Err(Rejection::Profile(e)) => return Err(Rejection::Profile(e)),
        Err(_) => return Err(Rejection::Unstable),
    }
    Ok(FoundExample { pencil, e, profile: prof, strategy, seed, index })
}

/// Sequential search over `seeds`, `cfg.budget` candidates each, in index
/// order. An exhausted budget returns an empty list with its statistics.
pub fn run_search(target: &SearchTarget, seeds: &[u64], cfg: &SearchConfig, starts: &[DeformStart]) -> SearchOutcome {
    let mut out = SearchOutcome::default();
    for &seed in seeds {
        for index in 0..cfg.budget {
            if out.done(cfg) {
                return out;
            }
            out.absorb(evaluate_candidate(target, seed, index, cfg, starts));
        }
    }
    out
}

fn pairs(v: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
    v.iter().copied().collect()
}

/// The known `(ρ, σ)` cells per `η` from the table of examples.
pub fn paper_known(eta: usize) -> BTreeSet<(usize, usize)> {
    match eta {
        0 => pairs(&[(0, 0)]),
        1 => pairs(&[(1, 1), (1, 0)]),
        2 => pairs(&[(2, 2), (2, 1), (2, 0), (0, 0)]),
        3 => pairs(&[(3, 3), (3, 2), (3, 1), (3, 0), (1, 1), (1, 0)]),
        4 => pairs(&[(4, 4), (4, 3), (4, 2), (4, 1), (4, 0), (2, 2), (2, 1), (0, 0)]),
        5 => pairs(&[(5, 3), (5, 2), (5, 1)]),
        6 => pairs(&[(6, 4), (6, 3)]),
        7 => pairs(&[(7, 5), (7, 4)]),
        8 => pairs(&[(8, 5), (8, 4), (6, 4)]),
        10 => cells(10).into_iter().collect(),
        _ => BTreeSet::new(),
    }
}

/// Admissible cells not in [`paper_known`].
pub fn paper_missing(eta: usize) -> BTreeSet<(usize, usize)> {
    let known = paper_known(eta);
    cells(eta).into_iter().filter(|c| !known.contains(c)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackerRow {
    pub eta: usize,
    pub found: BTreeSet<(usize, usize)>,
    /// Admissible cells not yet found.
    pub missing: BTreeSet<(usize, usize)>,
    pub paper_known: BTreeSet<(usize, usize)>,
    pub paper_missing: BTreeSet<(usize, usize)>,
    /// Found cells the table lists as missing.
    pub bonus: BTreeSet<(usize, usize)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrackerState {
    found: BTreeMap<usize, BTreeSet<(usize, usize)>>,
}

impl TrackerState {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a verified triple; `false` if it was already present or is
    /// not admissible.
    pub fn insert(&mut self, eta: usize, rho: usize, sigma: usize) -> bool {
        if SearchTarget::new(eta, rho, sigma).is_err() {
            return false;
        }
        self.found.entry(eta).or_default().insert((rho, sigma))
    }

    pub fn found(&self, eta: usize) -> BTreeSet<(usize, usize)> {
        self.found.get(&eta).cloned().unwrap_or_default()
    }

    pub fn row(&self, eta: usize) -> TrackerRow {
        let found = self.found(eta);
        let missing = cells(eta).into_iter().filter(|c| !found.contains(c)).collect();
        let paper_missing = paper_missing(eta);
        let bonus = found.intersection(&paper_missing).copied().collect();
        TrackerRow { eta, found, missing, paper_known: paper_known(eta), paper_missing, bonus }
    }

    pub fn rows(&self) -> Vec<TrackerRow> {
        ETAS.iter().map(|&e| self.row(e)).collect()
    }

    /// One line per row that differs from the table.
    pub fn diff_report(&self) -> Vec<String> {
        let mut out = Vec::new();
        for r in self.rows() {
            let unreproduced: Vec<_> = r.paper_known.difference(&r.found).collect();
            if !r.bonus.is_empty() {
                out.push(format!("η = {}: new cells {:?}", r.eta, r.bonus));
            }
            if !unreproduced.is_empty() {
                out.push(format!("η = {}: not yet reproduced {:?}", r.eta, unreproduced));
            }
        }
        out
    }
}

pub fn tracker_update(mut state: TrackerState, found: &FoundExample) -> TrackerState {
    if !found.profile.degenerate {
        let (e, r, s) = found.triple();
        state.insert(e, r, s);
    }
    state
}
