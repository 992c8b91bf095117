use serde::{Deserialize, Serialize};

use super::TheoremError;
use crate::config::CheckConfig;
use crate::operators::{build_wco_matrix, frobenius_norm, spectral_norm_estimate, ResidualReport};
use crate::symbols::{Holomorphic, LinearFractionalMap, Rational, SymbolError};
use crate::C64;

const POLE_MARGIN: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

/// `(W_{psi,phi})^* W_{psi,phi}` and `W_{psi,phi} (W_{psi,phi})^*` for
/// `psi = K_{phi*(0)}`, each written as a single weighted composition
/// operator: weight `|d|^2/(|d|^2 - |b|^2 - (conj(b) a - conj(d) c) z)` with
/// map `phi* ∘ phi`, and weight `|d|^2/(|d|^2 - |c|^2 - (conj(b) d - c conj(a)) z)`
/// with map `phi ∘ phi*`.
#[derive(Clone, Debug)]
pub struct NormalitySides {
    pub left_weight: Rational,
    pub left_map: LinearFractionalMap,
    pub right_weight: Rational,
    pub right_map: LinearFractionalMap,
}

fn side_weight(side: Side, d2: f64, constant: f64, slope: C64) -> Result<Rational, TheoremError> {
    let weight = Rational::reciprocal_linear(C64::new(d2, 0.0), -slope, C64::new(d2 - constant, 0.0))
        .map_err(|_| TheoremError::WeightPole { side, pole: C64::new(0.0, 0.0) })?;
    if let Some(pole) = weight.poles().find(|z| z.norm() <= 1.0 + POLE_MARGIN) {
        return Err(TheoremError::WeightPole { side, pole });
    }
    Ok(weight)
}

pub fn normality_sides(a: C64, b: C64, c: C64, d: C64) -> Result<NormalitySides, TheoremError> {
    if d.norm() == 0.0 {
        return Err(SymbolError::Zero { name: "d" }.into());
    }
    let phi = LinearFractionalMap::new(a, b, c, d)?;
    if !phi.is_disk_selfmap() {
        return Err(SymbolError::NotSelfMap.into());
    }
    let [a, b, c, d] = phi.coefficients();
    let adjoint = phi.cross_adjoint();
    let d2 = d.norm_sqr();
    Ok(NormalitySides {
        left_weight: side_weight(Side::Left, d2, b.norm_sqr(), b.conj() * a - d.conj() * c)?,
        left_map: adjoint.compose(&phi)?,
        right_weight: side_weight(Side::Right, d2, c.norm_sqr(), b.conj() * d - c * a.conj())?,
        right_map: phi.compose(&adjoint)?,
    })
}

/// Norm of the difference of the two finite sections. Both sides are
/// computed from the same truncated Taylor data, so the comparison is exact
/// up to rounding and carries no tail term.
pub fn verify_eq14(a: C64, b: C64, c: C64, d: C64, order: usize, cfg: &CheckConfig) -> Result<ResidualReport, TheoremError> {
    let sides = normality_sides(a, b, c, d)?;
    let left = build_wco_matrix(&sides.left_weight.series(order), &sides.left_map.to_series(order)?, order)?;
    let right = build_wco_matrix(&sides.right_weight.series(order), &sides.right_map.to_series(order)?, order)?;
    let defect = left.square() - right.square();
    Ok(ResidualReport::judge(
        "normality-identity",
        spectral_norm_estimate(&defect, cfg.power_iterations, cfg.seed),
        frobenius_norm(&defect),
        order,
        order,
        0.0,
        cfg.tolerance,
        cfg,
    ))
}
