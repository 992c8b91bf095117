use serde::{Deserialize, Serialize};

use crate::series::TruncatedSeries;
use crate::symbols::{make_cs_family, ConjugationSpec, CsFamilyParams, Holomorphic, LinearFractionalMap};
use crate::C64;

/// Agreement required between the input symbols and the reconstruction.
pub const MATCH_TOLERANCE: f64 = 1e-9;

const FIT_SAMPLES: usize = 64;
const FIT_RADIUS: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchFailure {
    /// The weight's Taylor coefficients are not a geometric sequence.
    NonReciprocalLinearWeight,
    /// The weight fits but the map is not of the family's form for this conjugation.
    TemplateMismatch,
    /// The recovered parameters do not define a family member.
    Rejected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsMatch {
    pub matched: bool,
    pub params: Option<CsFamilyParams>,
    pub failure_reason: Option<MatchFailure>,
    /// Largest coefficient deviation of the rebuilt weight, relative to the input's largest coefficient.
    pub weight_residual: f64,
    /// Proportionality residual between the rebuilt and the input map.
    pub map_residual: f64,
}

impl CsMatch {
    fn failed(reason: MatchFailure, weight_residual: f64, map_residual: f64) -> Self {
        Self { matched: false, params: None, failure_reason: Some(reason), weight_residual, map_residual }
    }
}

/// Recovers `(a0, a1, c)` such that the family member for `spec` has the
/// given weight and map.
///
/// The weight must be `psi_0 / (1 - r z)`; comparing with
/// `c / (1 - a0 p - (p - conj(lambda) a0) z)` gives `a0 = (p - r)/(conj(lambda) - r p)`
/// and `c = psi_0 (1 - a0 p)`. With `lambda` fixed by the conjugation, `a1` is
/// the unique least-squares coefficient of `phi - a0` against the template
/// `(p - conj(lambda) z)/(1 - a0 p - (p - conj(lambda) a0) z)`.
pub fn match_cs_parameters(psi: &TruncatedSeries, phi: &LinearFractionalMap, spec: &ConjugationSpec) -> CsMatch {
    let scale = psi.max_abs();
    let psi0 = psi.coeff(0);
    if scale == 0.0 || psi0.norm() <= MATCH_TOLERANCE * scale {
        return CsMatch::failed(MatchFailure::NonReciprocalLinearWeight, f64::INFINITY, f64::INFINITY);
    }
    let ratio = psi.coeff(1) / psi0;
    let mut term = psi0;
    let mut geometric = 0.0f64;
    for &coef in psi.coeffs() {
        geometric = geometric.max((coef - term).norm() / scale);
        term *= ratio;
    }
    if geometric > MATCH_TOLERANCE {
        return CsMatch::failed(MatchFailure::NonReciprocalLinearWeight, geometric, f64::INFINITY);
    }

    let (p, lambda) = (spec.p(), spec.lambda());
    let lambda_bar = lambda.conj();
    let one = C64::new(1.0, 0.0);
    let pivot = lambda_bar - ratio * p;
    if pivot.norm() <= MATCH_TOLERANCE {
        return CsMatch::failed(MatchFailure::TemplateMismatch, geometric, f64::INFINITY);
    }
    let a0 = (p - ratio) / pivot;
    let den0 = one - a0 * p;
    let den1 = -(p - lambda_bar * a0);
    let c = psi0 * den0;

    let (mut num, mut den) = (C64::new(0.0, 0.0), 0.0);
    for k in 0..FIT_SAMPLES {
        let z = C64::from_polar(FIT_RADIUS, std::f64::consts::TAU * k as f64 / FIT_SAMPLES as f64);
        let g = (p - lambda_bar * z) / (den0 + den1 * z);
        num += g.conj() * (phi.eval(z) - a0);
        den += g.norm_sqr();
    }
    let a1 = num / den;

    let params = CsFamilyParams { p, lambda, a0, a1, c };
    let Ok(family) = make_cs_family(params) else {
        return CsMatch::failed(MatchFailure::Rejected, geometric, f64::INFINITY);
    };
    let weight_residual = family.psi.series(psi.order()).max_abs_diff(psi) / scale;
    let map_residual = family.phi.distance(phi);
    if weight_residual > MATCH_TOLERANCE || map_residual > MATCH_TOLERANCE {
        return CsMatch::failed(MatchFailure::TemplateMismatch, weight_residual, map_residual);
    }
    CsMatch { matched: true, params: Some(params), failure_reason: None, weight_residual, map_residual }
}
