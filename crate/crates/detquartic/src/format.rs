//! JSON formats: pencils, profile reports, and float rendering.

use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;

use detquartic_core::scalar::{format_rational, parse_rational};
use detquartic_core::singularities::{Profile, SingularPoint};
use detquartic_core::{GMatrix, GaussianRational, HermitianMatrix, HermitianPencil, Rational};

use crate::Error;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: String,
    pub im: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Claimed {
    pub eta: usize,
    pub rho: usize,
    pub sigma: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilJson {
    pub name: String,
    pub vars: usize,
    pub coeffs: Vec<Vec<Vec<ComplexJson>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub definite_point: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub claimed: Option<Claimed>,
}

pub fn complex_json(z: &GaussianRational) -> ComplexJson {
    ComplexJson {
        re: format_rational(&z.re),
        im: format_rational(&z.im),
    }
}

pub fn pencil_to_json(name: &str, p: &HermitianPencil, e: Option<&[Rational]>, claimed: Option<Claimed>) -> PencilJson {
    let coeffs = p
        .coeffs()
        .iter()
        .map(|m| (0..4).map(|i| (0..4).map(|j| complex_json(m.get(i, j))).collect()).collect())
        .collect();
    PencilJson {
        name: name.to_string(),
        vars: 4,
        coeffs,
        definite_point: e.map(|e| e.iter().map(format_rational).collect()),
        claimed,
    }
}

pub fn parse_point(v: &[String]) -> Result<Vec<Rational>, Error> {
    if v.len() != 4 {
        return Err(Error::Format("definite point needs four coordinates".into()));
    }
    Ok(v.iter().map(|s| parse_rational(s)).collect::<Result<_, _>>()?)
}

impl PencilJson {
    pub fn from_str(s: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn pencil(&self) -> Result<HermitianPencil, Error> {
        if self.vars != 4 || self.coeffs.len() != 4 {
            return Err(Error::Format("pencils have four 4x4 coefficient matrices".into()));
        }
        let mut mats = Vec::with_capacity(4);
        for m in &self.coeffs {
            if m.len() != 4 || m.iter().any(|r| r.len() != 4) {
                return Err(Error::Format("coefficient matrices are 4x4".into()));
            }
            let mut data = Vec::with_capacity(16);
            for z in m.iter().flatten() {
                data.push(GaussianRational::new(parse_rational(&z.re)?, parse_rational(&z.im)?));
            }
            mats.push(HermitianMatrix::new(GMatrix::new(4, 4, data))?);
        }
        let coeffs: [HermitianMatrix; 4] = mats.try_into().expect("four matrices");
        Ok(HermitianPencil::new(coeffs))
    }

    pub fn point(&self) -> Result<Option<Vec<Rational>>, Error> {
        self.definite_point.as_deref().map(parse_point).transpose()
    }
}

/// `{:.16e}` (17 significant digits) as a raw JSON number; `null` when
/// not finite.
pub fn float(x: f64) -> Box<RawValue> {
    let s = if x.is_finite() { format!("{x:.16e}") } else { "null".to_string() };
    RawValue::from_string(s).expect("valid JSON number")
}

#[derive(Serialize)]
pub struct PointReport {
    pub coords: Vec<[Box<RawValue>; 2]>,
    pub corank: usize,
    pub hessian_rank: usize,
    pub real: bool,
    pub on_spectrahedron: Option<bool>,
    pub residual: Box<RawValue>,
}

#[derive(Serialize)]
pub struct ProfileReport {
    pub eta: usize,
    pub rho: usize,
    pub sigma: usize,
    pub degenerate: bool,
    pub points: Vec<PointReport>,
}

pub fn point_report(s: &SingularPoint) -> PointReport {
    PointReport {
        coords: s.location.coords().iter().map(|z| [float(z.re), float(z.im)]).collect(),
        corank: s.pencil_corank,
        hessian_rank: s.hessian_rank,
        real: s.is_real,
        on_spectrahedron: s.on_spectrahedron,
        residual: float(s.residual),
    }
}

pub fn profile_report(p: &Profile) -> ProfileReport {
    ProfileReport {
        eta: p.eta,
        rho: p.rho,
        sigma: p.sigma,
        degenerate: p.degenerate,
        points: p.points.iter().map(point_report).collect(),
    }
}
