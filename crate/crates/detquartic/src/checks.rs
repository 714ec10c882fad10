//! Reports for `curves-check`, `realify`, `hyperbolicity` and `x2-check`.

use serde::Serialize;
use serde_json::value::RawValue;

use detquartic_core::curves::{common_minor_surface, complete_intersection_check, sextic_family, IntersectionReport, Side};
use detquartic_core::scalar::format_rational;
use detquartic_core::singularities::{profile, SolverConfig};
use detquartic_core::spectra::hyperbolicity_check;
use detquartic_core::x2::X2Report;
use detquartic_core::{HermitianPencil, Rational};

use crate::format::float;
use crate::Error;

#[derive(Clone, Debug)]
pub struct CurveVerdict {
    /// The deleted row and column of the common minor `S₃`.
    pub index: usize,
    /// `(rows, cols)` residual at each essential point.
    pub essential: Vec<(f64, f64)>,
    pub intersection: IntersectionReport,
    pub tol: f64,
}

impl CurveVerdict {
    pub fn essential_ok(&self) -> bool {
        self.essential.iter().all(|&(r, c)| r < self.tol && c < self.tol)
    }

    pub fn passed(&self) -> bool {
        self.essential_ok() && self.intersection.passed()
    }
}

/// Essential points against both sextic families at one index, then
/// `samples` points of `V(f) ∩ V(S₃)` against `C₁ ∪ C₂`. Indices are
/// tried from 3 down until `S₃` is a genuine cubic cutting a curve.
pub fn curves_check(
    p: &HermitianPencil,
    samples: usize,
    seed: u64,
    tol: f64,
    solver: &SolverConfig,
) -> Result<CurveVerdict, Error> {
    let f = p.det()?;
    let prof = profile(p, None, solver)?;
    let mut last = None;
    for index in (0..4).rev() {
        let s3 = common_minor_surface(p, index, index)?;
        if s3.is_zero() || !s3.is_homogeneous(3) {
            continue;
        }
        let c1 = sextic_family(p, Side::Rows, index)?;
        let c2 = sextic_family(p, Side::Cols, index)?;
        let essential = prof
            .points
            .iter()
            .filter(|s| s.is_essential())
            .map(|s| (c1.residual(s.location.coords()), c2.residual(s.location.coords())))
            .collect();
        let intersection = complete_intersection_check(&f, &s3, &c1, &c2, samples, seed, tol)?;
        let v = CurveVerdict { index, essential, intersection, tol };
        if v.intersection.samples.len() == samples {
            return Ok(v);
        }
        last = Some(v);
    }
    last.ok_or_else(|| Error::Format("every principal 3x3 minor vanishes".into()))
}

#[derive(Serialize)]
pub struct CurveReport {
    pub index: usize,
    pub essential_residuals: Vec<[Box<RawValue>; 2]>,
    pub samples: usize,
    pub requested: usize,
    pub failed_paths: usize,
    pub max_sample_residual: Box<RawValue>,
    pub tol: Box<RawValue>,
    pub passed: bool,
}

pub fn curve_report(v: &CurveVerdict) -> CurveReport {
    CurveReport {
        index: v.index,
        essential_residuals: v.essential.iter().map(|&(r, c)| [float(r), float(c)]).collect(),
        samples: v.intersection.samples.len(),
        requested: v.intersection.requested,
        failed_paths: v.intersection.failed_paths,
        max_sample_residual: float(v.intersection.max_residual()),
        tol: float(v.tol),
        passed: v.passed(),
    }
}

#[derive(Serialize)]
pub struct RealifyReport {
    pub name: String,
    pub vars: usize,
    pub size: usize,
    /// Four real symmetric 8×8 coefficient matrices of rationals.
    pub coeffs: Vec<Vec<Vec<String>>>,
    pub square_identity: bool,
}

pub fn realify_report(name: &str, p: &HermitianPencil) -> Result<RealifyReport, Error> {
    let real = p.realify();
    let coeffs = real
        .coeffs()
        .iter()
        .map(|m| m.0.iter().map(|row| row.iter().map(format_rational).collect()).collect())
        .collect();
    Ok(RealifyReport { name: name.to_string(), vars: 4, size: 8, coeffs, square_identity: p.verify_square_identity()? })
}

#[derive(Serialize)]
pub struct HyperbolicityJson {
    pub lines: usize,
    pub all_real: usize,
    pub fraction: Box<RawValue>,
    pub float_disagreements: usize,
    pub seed: u64,
}

pub fn hyperbolicity_report(
    p: &HermitianPencil,
    e: &[Rational],
    lines: usize,
    seed: u64,
    tol: f64,
) -> Result<HyperbolicityJson, Error> {
    let h = hyperbolicity_check(&p.det()?, e, lines, seed, tol)?;
    Ok(HyperbolicityJson {
        lines: h.lines.len(),
        all_real: h.all_real,
        fraction: float(h.fraction()),
        float_disagreements: h.disagreements,
        seed,
    })
}

#[derive(Serialize)]
pub struct X2Json {
    pub seed: u64,
    pub hermitian_checked: usize,
    pub hermitian_passed: usize,
    pub web_checked: usize,
    pub web_passed: usize,
    pub tangent_codims: Vec<usize>,
    pub passed: bool,
}

pub fn x2_report(r: &X2Report, seed: u64) -> X2Json {
    X2Json {
        seed,
        hermitian_checked: r.hermitian_checked,
        hermitian_passed: r.hermitian_passed,
        web_checked: r.web_checked,
        web_passed: r.web_passed,
        tangent_codims: r.codims.clone(),
        passed: r.passed(),
    }
}
