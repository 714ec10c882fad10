//! Hermitian 4×4 matrices as points of `CP¹⁵`, their quadrics `Q_{A₈}` in
//! `CP⁷`, and the ℓ-form parameterisation of real rank-4 quadrics singular
//! along a real 3-space.
//!
//! Coordinates of `CP¹⁵` are ordered
//! `x00 x01 x02 x03 x11 x12 x13 x22 x23 x33 y01 y02 y03 y12 y13 y23`, where a
//! Hermitian matrix has entries `m_ii = x_ii` and `m_ij = x_ij + i·y_ij` for
//! `i < j`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{input, Error, Result};
use crate::matrix::{GMatrix, PolyMatrix};
use crate::pencil::HermitianMatrix;
use crate::poly::MultiPoly;
use crate::scalar::{GaussianRational, Rational};

/// Upper-triangle index pairs in coordinate order.
const X_PAIRS: [(usize, usize); 10] = [(0, 0), (0, 1), (0, 2), (0, 3), (1, 1), (1, 2), (1, 3), (2, 2), (2, 3), (3, 3)];
const Y_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn x_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    X_PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

fn y_index(i: usize, j: usize) -> usize {
    Y_PAIRS.iter().position(|&p| p == (i, j)).expect("valid pair")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CP15Point {
    pub xs: [GaussianRational; 10],
    pub ys: [GaussianRational; 6],
}

impl CP15Point {
    pub fn new(xs: [GaussianRational; 10], ys: [GaussianRational; 6]) -> Result<Self> {
        if xs.iter().chain(ys.iter()).all(Zero::is_zero) {
            return input("the zero vector is not a point of CP15");
        }
        Ok(Self { xs, ys })
    }

    /// The sixteen coordinates in order.
    pub fn coords(&self) -> Vec<GaussianRational> {
        self.xs.iter().chain(self.ys.iter()).cloned().collect()
    }

    /// `X + i·Y` with `Y` antisymmetric; Hermitian when the coordinates are
    /// real.
    pub fn matrix(&self) -> GMatrix {
        let mut m = GMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                let x = self.xs[x_index(i, j)].clone();
                let v = match i.cmp(&j) {
                    core::cmp::Ordering::Equal => x,
                    core::cmp::Ordering::Less => x + GaussianRational::i() * self.ys[y_index(i, j)].clone(),
                    core::cmp::Ordering::Greater => x - GaussianRational::i() * self.ys[y_index(j, i)].clone(),
                };
                m.set(i, j, v);
            }
        }
        m
    }
}

pub fn hermitian_to_cp15(h: &HermitianMatrix) -> CP15Point {
    let m = h.as_matrix();
    let xs = X_PAIRS.map(|(i, j)| GaussianRational::real(m.get(i, j).re.clone()));
    let ys = Y_PAIRS.map(|(i, j)| GaussianRational::real(m.get(i, j).im.clone()));
    CP15Point { xs, ys }
}

/// A quadric `V(yᵀ G y) ⊂ CP⁷`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadric8 {
    gram: GMatrix,
}

impl Quadric8 {
    pub fn new(gram: GMatrix) -> Result<Self> {
        if gram.rows != 8 || gram.cols != 8 {
            return input("quadrics in CP7 have an 8x8 Gram matrix");
        }
        for i in 0..8 {
            for j in 0..i {
                if gram.get(i, j) != gram.get(j, i) {
                    return input("Gram matrix is not symmetric");
                }
            }
        }
        Ok(Self { gram })
    }

    pub fn gram(&self) -> &GMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    /// `uᵀ G v`.
    pub fn bilinear(&self, u: &[GaussianRational], v: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for i in 0..8 {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..8 {
                acc += &(u[i].clone() * self.gram.get(i, j).clone() * v[j].clone());
            }
        }
        acc
    }
}

/// The `A₈` layout `[[X, −Y], [Y, X]]`.
pub fn cp15_to_quadric(p: &CP15Point) -> Quadric8 {
    let mut g = GMatrix::zeros(8, 8);
    for i in 0..4 {
        for j in 0..4 {
            let x = p.xs[x_index(i, j)].clone();
            g.set(i, j, x.clone());
            g.set(i + 4, j + 4, x);
            let y = match i.cmp(&j) {
                core::cmp::Ordering::Equal => GaussianRational::zero(),
                core::cmp::Ordering::Less => p.ys[y_index(i, j)].clone(),
                core::cmp::Ordering::Greater => -p.ys[y_index(j, i)].clone(),
            };
            g.set(i + 4, j, y.clone());
            g.set(i, j + 4, -y);
        }
    }
    Quadric8 { gram: g }
}

/// Bases of `H_Bl = V(y_j + i·y_{j+4})` (vectors `−i·e_j + e_{j+4}`) and of
/// its conjugate.
pub fn base_locus_bases() -> [[Vec<GaussianRational>; 4]; 2] {
    let basis = |s: i64| {
        core::array::from_fn(|j| {
            let mut v = vec![GaussianRational::zero(); 8];
            v[j] = GaussianRational::from_ints(0, -s);
            v[j + 4] = GaussianRational::one();
            v
        })
    };
    [basis(1), basis(-1)]
}

/// Whether `q` contains `H_Bl` and its conjugate, checked exactly on the
/// bilinear form restricted to each 3-space.
pub fn base_locus_check(q: &Quadric8) -> bool {
    base_locus_bases()
        .iter()
        .all(|b| b.iter().all(|u| b.iter().all(|v| q.bilinear(u, v).is_zero())))
}

/// Real parameters of the two linear forms `Σ (a_j + i·b_j) y_j` and
/// `Σ (c_j + i·d_j) y_j` cutting a line `L` out of `H_Bl`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineParams {
    pub a: [Rational; 8],
    pub b: [Rational; 8],
    pub c: [Rational; 8],
    pub d: [Rational; 8],
}

impl LineParams {
    fn forms(&self) -> [Vec<GaussianRational>; 2] {
        let f = |re: &[Rational; 8], im: &[Rational; 8]| {
            (0..8).map(|j| GaussianRational::new(re[j].clone(), im[j].clone())).collect()
        };
        [f(&self.a, &self.b), f(&self.c, &self.d)]
    }

    /// The two forms restricted to the basis of `H_Bl`, a 2×4 matrix.
    fn restriction(&self) -> GMatrix {
        let [basis, _] = base_locus_bases();
        let mut m = GMatrix::zeros(2, 4);
        for (r, form) in self.forms().iter().enumerate() {
            for (k, u) in basis.iter().enumerate() {
                let mut acc = GaussianRational::zero();
                for j in 0..8 {
                    acc += &(form[j].clone() * u[j].clone());
                }
                m.set(r, k, acc);
            }
        }
        m
    }

    pub fn cuts_a_line(&self) -> bool {
        self.restriction().rank() == 2
    }

    /// Two points spanning `L`, in `CP⁷` coordinates.
    pub fn line_points(&self) -> Result<[Vec<GaussianRational>; 2]> {
        let ker = self.restriction().kernel();
        if ker.len() != 2 {
            return input("the forms do not cut a line from H_Bl");
        }
        let [basis, _] = base_locus_bases();
        let lift = |t: &[GaussianRational]| -> Vec<GaussianRational> {
            (0..8)
                .map(|j| {
                    let mut acc = GaussianRational::zero();
                    for k in 0..4 {
                        acc += &(t[k].clone() * basis[k][j].clone());
                    }
                    acc
                })
                .collect()
        };
        Ok([lift(&ker[0]), lift(&ker[1])])
    }
}

/// The real forms `ℓ₀..ℓ₃` in `y₀..y₇` with `H_L = V(ℓ₀, ℓ₁, ℓ₂, ℓ₃)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllForms {
    pub ell: [[Rational; 8]; 4],
}

impl EllForms {
    pub fn matrix(&self) -> GMatrix {
        GMatrix::new(
            4,
            8,
            self.ell.iter().flatten().map(|r| GaussianRational::real(r.clone())).collect(),
        )
    }

    pub fn eval(&self, k: usize, y: &[GaussianRational]) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for (c, v) in self.ell[k].iter().zip(y) {
            acc += &(GaussianRational::real(c.clone()) * v.clone());
        }
        acc
    }
}

pub fn ell_forms(lp: &LineParams) -> Result<EllForms> {
    let pair = |p: &[Rational; 8], q: &[Rational; 8]| {
        let mut first: [Rational; 8] = core::array::from_fn(|_| Rational::zero());
        let mut second = first.clone();
        for j in 0..4 {
            let u = p[j].clone() - q[j + 4].clone();
            let w = p[j + 4].clone() + q[j].clone();
            first[j] = u.clone();
            first[j + 4] = w.clone();
            second[j + 4] = u;
            second[j] = -w;
        }
        (first, second)
    };
    let (l0, l1) = pair(&lp.a, &lp.b);
    let (l2, l3) = pair(&lp.c, &lp.d);
    let ef = EllForms { ell: [l0, l1, l2, l3] };
    if ef.matrix().rank() != 4 {
        return input("degenerate line: the four forms are dependent");
    }
    Ok(ef)
}

/// The 4×4 Gram matrix in `ℓ`-coordinates of
/// `a(ℓ₀²+ℓ₁²) + b(ℓ₀ℓ₂+ℓ₁ℓ₃) + c(ℓ₀ℓ₃−ℓ₁ℓ₂) + d(ℓ₂²+ℓ₃²)`. Its
/// determinant is `((4ad − b² − c²)/4)²`.
pub fn web_coefficients(a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> GMatrix {
    let h = |r: &Rational| GaussianRational::real(r / Rational::from_integer(2.into()));
    let r = |r: &Rational| GaussianRational::real(r.clone());
    let z = GaussianRational::zero;
    GMatrix::new(
        4,
        4,
        vec![
            r(a), z(), h(b), h(c),
            z(), r(a), -h(c), h(b),
            h(b), -h(c), r(d), z(),
            h(c), h(b), z(), r(d),
        ],
    )
}

pub fn web_quadric(ef: &EllForms, a: &Rational, b: &Rational, c: &Rational, d: &Rational) -> Quadric8 {
    let l = ef.matrix();
    let gram = l.conj_transpose().mul(&web_coefficients(a, b, c, d)).mul(&l);
    Quadric8 { gram }
}

/// Web parameters `(a, b, c, d)` of a quadric proportional to `q`, if any.
pub fn web_parameters(ef: &EllForms, q: &Quadric8) -> Option<[Rational; 4]> {
    let one = Rational::one;
    let zero = Rational::zero;
    let basis = [
        web_quadric(ef, &one(), &zero(), &zero(), &zero()),
        web_quadric(ef, &zero(), &one(), &zero(), &zero()),
        web_quadric(ef, &zero(), &zero(), &one(), &zero()),
        web_quadric(ef, &zero(), &zero(), &zero(), &one()),
    ];
    let mut sys = GMatrix::zeros(64, 5);
    for e in 0..64 {
        for (k, b) in basis.iter().enumerate() {
            sys.set(e, k, b.gram.data[e].clone());
        }
        sys.set(e, 4, -q.gram.data[e].clone());
    }
    let ker = sys.kernel();
    let v = ker.iter().find(|v| !v[4].is_zero())?;
    let s = v[4].inv().ok()?;
    let out: [GaussianRational; 4] = core::array::from_fn(|k| v[k].clone() * s.clone());
    if out.iter().any(|z| !z.is_real()) {
        return None;
    }
    Some(out.map(|z| z.re))
}

/// Line parameters for a rank-2 Hermitian `h` whose `ℓ`-forms cut out
/// `Sing(Q_h)`: the forms are the real and imaginary parts of two
/// independent rows of `h`.
pub fn kernel_line(h: &HermitianMatrix) -> Result<LineParams> {
    if h.rank() != 2 {
        return input("the web is built at a rank-2 matrix");
    }
    let m = h.as_matrix();
    let row = |i: usize| GMatrix::new(1, 4, (0..4).map(|j| m.get(i, j).clone()).collect());
    let mut pick = None;
    'outer: for i in 0..4 {
        for k in i + 1..4 {
            let two = GMatrix::new(2, 4, row(i).data.into_iter().chain(row(k).data).collect());
            if two.rank() == 2 {
                pick = Some((i, k));
                break 'outer;
            }
        }
    }
    let (i, k) = pick.ok_or_else(|| Error::Invariant("rank-2 matrix without two independent rows".into()))?;
    let form = |r: usize| -> [Rational; 8] {
        core::array::from_fn(|j| if j < 4 { m.get(r, j).re.clone() } else { -m.get(r, j - 4).im.clone() })
    };
    let zero: [Rational; 8] = core::array::from_fn(|_| Rational::zero());
    let lp = LineParams { a: form(i), b: zero.clone(), c: form(k), d: zero };
    if !lp.cuts_a_line() {
        return Err(Error::Invariant("Sing(Q) does not meet H_Bl in a line".into()));
    }
    Ok(lp)
}

/// Inverse of `cp15_to_quadric ∘ hermitian_to_cp15` on real Gram matrices
/// with the `A₈` block pattern.
pub fn quadric_to_hermitian(q: &Quadric8) -> Result<HermitianMatrix> {
    let g = &q.gram;
    if g.data.iter().any(|v| !v.is_real()) {
        return Err(Error::Structure("Gram matrix is not real".into()));
    }
    let mut m = GMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            if g.get(i, j) != g.get(i + 4, j + 4) {
                return Err(Error::Structure(format!("diagonal blocks differ at ({i},{j})")));
            }
            let y = g.get(i + 4, j);
            if *g.get(i, j + 4) != -y.clone() || (i == j && !y.is_zero()) {
                return Err(Error::Structure(format!("off-diagonal blocks break the pattern at ({i},{j})")));
            }
            m.set(i, j, g.get(i, j).clone() + GaussianRational::i() * y.clone());
        }
    }
    HermitianMatrix::new(m)
}

/// The general Hermitian matrix as a polynomial matrix in the sixteen
/// complexified coordinates.
pub fn general_hermitian() -> PolyMatrix {
    let v = |k: usize| MultiPoly::var(16, k);
    let i = MultiPoly::constant(16, GaussianRational::i());
    PolyMatrix::from_fn(4, 4, |r, c| match r.cmp(&c) {
        core::cmp::Ordering::Equal => v(x_index(r, c)),
        core::cmp::Ordering::Less => &v(x_index(r, c)) + &(&i * &v(10 + y_index(r, c))),
        core::cmp::Ordering::Greater => &v(x_index(r, c)) - &(&i * &v(10 + y_index(c, r))),
    })
    .expect("4x4 shape")
}

/// Rank at `h` of the Jacobian of the sixteen 3×3 minors of the general
/// Hermitian matrix in the `CP¹⁵` coordinates: the codimension of the
/// tangent space of `X₂` at a smooth point.
pub fn x2_tangent_codim(h: &HermitianMatrix) -> Result<usize> {
    let r = h.rank();
    if r != 2 {
        return input(format!("tangent codimension needs a rank-2 matrix, got rank {r}"));
    }
    let minors = general_hermitian().minors_3x3()?;
    let p = hermitian_to_cp15(h).coords();
    let mut jac = GMatrix::zeros(16, 16);
    for (row, m) in minors.iter().enumerate() {
        for (col, d) in m.gradient().iter().enumerate() {
            jac.set(row, col, d.eval_exact(&p)?);
        }
    }
    Ok(jac.rank())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct X2Report {
    pub hermitian_checked: usize,
    pub hermitian_passed: usize,
    pub web_checked: usize,
    pub web_passed: usize,
    /// Tangent codimension at each sampled rank-2 matrix.
    pub codims: Vec<usize>,
}

impl X2Report {
    pub fn passed(&self) -> bool {
        self.hermitian_passed == self.hermitian_checked
            && self.web_passed == self.web_checked
            && self.codims.iter().all(|&c| c == 4)
    }
}

fn random_line_params<R: rand::Rng + ?Sized>(rng: &mut R) -> LineParams {
    loop {
        let mut v = || -> [Rational; 8] { core::array::from_fn(|_| Rational::from_integer(rng.random_range(-4i64..=4).into())) };
        let lp = LineParams { a: v(), b: v(), c: v(), d: v() };
        if lp.cuts_a_line() && ell_forms(&lp).is_ok() {
            return lp;
        }
    }
}

/// Seeded sampling of the `X₂` facts: `Q_M ⊇ H_Bl` for random Hermitian
/// `M`, the same for random web quadrics, and codimension 4 at random
/// rank-2 matrices.
pub fn sample_check(n_hermitian: usize, n_web: usize, n_codim: usize, seed: u64) -> Result<X2Report> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = X2Report {
        hermitian_checked: n_hermitian,
        hermitian_passed: 0,
        web_checked: n_web,
        web_passed: 0,
        codims: Vec::with_capacity(n_codim),
    };
    for _ in 0..n_hermitian {
        let h = crate::sample::random_hermitian(&mut rng);
        if base_locus_check(&cp15_to_quadric(&hermitian_to_cp15(&h))) {
            report.hermitian_passed += 1;
        }
    }
    for _ in 0..n_web {
        let ef = ell_forms(&random_line_params(&mut rng))?;
        let mut r = || Rational::from_integer(rng.random_range(-5i64..=5).into());
        let (a, b, c, d) = (r(), r(), r(), r());
        if base_locus_check(&web_quadric(&ef, &a, &b, &c, &d)) {
            report.web_passed += 1;
        }
    }
    for _ in 0..n_codim {
        let semidefinite = rng.random_bool(0.5);
        let h = crate::sample::plant(&mut rng, semidefinite);
        report.codims.push(x2_tangent_codim(&h)?);
    }
    Ok(report)
}
