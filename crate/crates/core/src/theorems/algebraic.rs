use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::TheoremError;
use crate::config::CheckConfig;
use crate::operators::{frobenius_norm, spectral_norm_estimate, ResidualReport, WcoOperator};
use crate::series::TruncatedSeries;
use crate::symbols::{LinearFractionalMap, Symbol};
use crate::C64;

const ZERO_WEIGHT: f64 = 1e-12;
const FIXED_POINT_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseTag {
    ConstantPhi,
    IdentityPair,
    InvolutionOddWeight,
}

/// `psi ∘ alpha_p = c exp(g)` with `g` odd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OddWeightData {
    pub base_point: C64,
    pub constant: C64,
    /// Taylor coefficients of `g = log(psi ∘ alpha_p / c)`; even entries vanish to tolerance.
    pub log_coefficients: Vec<C64>,
}

/// Degree 2: `T^2 - B T - C I = 0` with `A = 1`. Degree 1: `T - B I = 0`,
/// stored with `A = 0` and `C = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicCertificate {
    pub degree: u8,
    pub poly_coeffs: [C64; 3],
    pub case_tag: CaseTag,
    pub odd_weight_data: Option<OddWeightData>,
    /// Numerical confirmation of the annihilating polynomial.
    pub annihilation: ResidualReport,
}

impl AlgebraicCertificate {
    pub fn b(&self) -> C64 {
        self.poly_coeffs[1]
    }

    pub fn c(&self) -> C64 {
        self.poly_coeffs[2]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum NotAlgebraicReason {
    /// `phi` is the identity but `psi` is not constant.
    NonconstantMultiplier { deviation: f64 },
    /// `phi` is neither constant, the identity, nor an involution.
    NotInvolution { deviation: f64 },
    /// `psi` vanishes at the fixed point of the involution.
    WeightVanishesAtFixedPoint { base_point: C64 },
    /// `log(psi ∘ alpha_p)` has a nonzero even coefficient.
    EvenLogTerm { max_even: f64 },
    /// `psi (psi ∘ phi)` is not constant.
    ProductNotConstant { deviation: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum AlgebraicVerdict {
    Algebraic(AlgebraicCertificate),
    NotAlgebraic { reason: NotAlgebraicReason },
}

impl AlgebraicVerdict {
    pub fn certificate(&self) -> Option<&AlgebraicCertificate> {
        match self {
            AlgebraicVerdict::Algebraic(cert) => Some(cert),
            AlgebraicVerdict::NotAlgebraic { .. } => None,
        }
    }
}

fn tail_max(s: &TruncatedSeries) -> f64 {
    s.coeffs().iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max)
}

/// Interior fixed point of `phi`: damped iteration `z -> (z + phi(z))/2`
/// from 0, which converges fast for involutions since `phi'(p) = -1`, with a
/// Newton fallback started on a polar grid.
pub fn interior_fixed_point(phi: &Symbol) -> Option<C64> {
    let accept = |z: C64| z.norm() < 1.0 && (phi.eval(z) - z).norm() <= FIXED_POINT_TOLERANCE;
    let mut z = C64::new(0.0, 0.0);
    for _ in 0..200 {
        if !(z.norm() < 1.0) {
            break;
        }
        z = 0.5 * (z + phi.eval(z));
        if accept(z) {
            return Some(z);
        }
    }
    let h = 1e-7;
    for ring in 1..=6 {
        for k in 0..12 {
            let mut z = C64::from_polar(ring as f64 * 0.15, k as f64 * std::f64::consts::TAU / 12.0);
            for _ in 0..60 {
                let f = phi.eval(z) - z;
                let df = (phi.eval(z + h) - phi.eval(z - h)) / (2.0 * h) - 1.0;
                if df.norm() == 0.0 || !f.is_finite() {
                    break;
                }
                z -= f / df;
                if !(z.norm() < 1.0) {
                    break;
                }
            }
            if accept(z) {
                return Some(z);
            }
        }
    }
    None
}

/// Decides whether `W_{psi, phi}` is algebraic of degree at most 2:
/// `phi` constant, `phi` the identity with `psi` constant, or `phi` an
/// involution with `psi ∘ alpha_p = c exp(odd)` at its fixed point `p`.
pub fn classify_algebraic(psi: &Symbol, phi: &Symbol, order: usize, cfg: &CheckConfig) -> Result<AlgebraicVerdict, TheoremError> {
    let psi_s = psi.series(order);
    if psi_s.max_abs() <= ZERO_WEIGHT {
        return Err(TheoremError::ZeroWeight);
    }
    let phi_s = phi.series(order);
    let phi0 = phi_s.coeff(0);
    if !(phi0.norm() < 1.0) {
        return Err(TheoremError::MapLeavesDisk(phi0));
    }
    let tol = cfg.coefficient_tolerance;
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);

    if tail_max(&phi_s) <= tol {
        let b = psi.eval(phi0);
        let annihilation = annihilation_residual(psi, phi, 2, b, zero, order, cfg);
        return Ok(AlgebraicVerdict::Algebraic(AlgebraicCertificate {
            degree: 2,
            poly_coeffs: [one, b, zero],
            case_tag: CaseTag::ConstantPhi,
            odd_weight_data: None,
            annihilation,
        }));
    }

    let identity = TruncatedSeries::identity(order);
    if phi_s.max_abs_diff(&identity) <= tol {
        let deviation = tail_max(&psi_s);
        if deviation > tol * psi_s.coeff(0).norm().max(1.0) {
            return Ok(AlgebraicVerdict::NotAlgebraic { reason: NotAlgebraicReason::NonconstantMultiplier { deviation } });
        }
        let b = psi_s.coeff(0);
        let annihilation = annihilation_residual(psi, phi, 1, b, zero, order, cfg);
        return Ok(AlgebraicVerdict::Algebraic(AlgebraicCertificate {
            degree: 1,
            poly_coeffs: [zero, b, zero],
            case_tag: CaseTag::IdentityPair,
            odd_weight_data: None,
            annihilation,
        }));
    }

    let deviation = phi_s.compose(&phi_s)?.max_abs_diff(&identity);
    if deviation > cfg.involution_tolerance {
        return Ok(AlgebraicVerdict::NotAlgebraic { reason: NotAlgebraicReason::NotInvolution { deviation } });
    }
    let p = interior_fixed_point(phi).ok_or(TheoremError::FixedPointNotFound)?;
    let alpha = LinearFractionalMap::alpha(p)?.to_series(order)?;
    let pulled = psi_s.compose(&alpha)?;
    let constant = pulled.coeff(0);
    if constant.norm() <= ZERO_WEIGHT {
        return Ok(AlgebraicVerdict::NotAlgebraic { reason: NotAlgebraicReason::WeightVanishesAtFixedPoint { base_point: p } });
    }
    let mut log = pulled.log()?.into_coeffs();
    log[0] = zero;
    let max_even = log.iter().skip(2).step_by(2).map(|c| c.norm()).fold(0.0, f64::max);
    if max_even > cfg.involution_tolerance {
        return Ok(AlgebraicVerdict::NotAlgebraic { reason: NotAlgebraicReason::EvenLogTerm { max_even } });
    }
    let product = psi_s.mul(&psi_s.compose(&phi_s)?)?;
    let c = product.coeff(0);
    let deviation = tail_max(&product);
    if deviation > cfg.involution_tolerance * c.norm().max(1.0) {
        return Ok(AlgebraicVerdict::NotAlgebraic { reason: NotAlgebraicReason::ProductNotConstant { deviation } });
    }
    let annihilation = annihilation_residual(psi, phi, 2, zero, c, order, cfg);
    Ok(AlgebraicVerdict::Algebraic(AlgebraicCertificate {
        degree: 2,
        poly_coeffs: [one, zero, c],
        case_tag: CaseTag::InvolutionOddWeight,
        odd_weight_data: Some(OddWeightData { base_point: p, constant, log_coefficients: log }),
        annihilation,
    }))
}

/// `||T^2 - B T - C I||` (degree 2) or `||T - B I||` (degree 1) on the
/// padded section, with `T^2` formed through the padding.
pub fn annihilation_residual(
    psi: &Symbol,
    phi: &Symbol,
    degree: u8,
    b: C64,
    c: C64,
    order: usize,
    cfg: &CheckConfig,
) -> ResidualReport {
    let t = WcoOperator::new(psi.clone(), phi.clone(), order, cfg);
    let m = t.matrix();
    let n = order + 1;
    let identity = DMatrix::<C64>::identity(n, n);
    let square = m.square();
    let (defect, tail) = if degree == 1 {
        (square - identity * b, 0.0)
    } else {
        (m.wide() * m.tall() - square * b - identity * c, m.row_tail() * m.col_tail())
    };
    ResidualReport::judge(
        "annihilation",
        spectral_norm_estimate(&defect, cfg.power_iterations, cfg.seed),
        frobenius_norm(&defect),
        order,
        m.padding(),
        tail,
        cfg.tolerance,
        cfg,
    )
}

/// Monomial form of the annihilating polynomial: for `n = 0..=max_monomial`,
/// `psi (psi ∘ phi) (phi ∘ phi)^n = B psi phi^n + C z^n` (degree 2) or
/// `psi phi^n = B z^n` (degree 1), as Taylor series of length `order + 1`.
pub fn verify_case3_identity(
    psi: &Symbol,
    phi: &Symbol,
    certificate: &AlgebraicCertificate,
    max_monomial: usize,
    order: usize,
    cfg: &CheckConfig,
) -> Result<ResidualReport, TheoremError> {
    let psi_s = psi.series(order);
    let phi_s = phi.series(order);
    let (b, c) = (certificate.b(), certificate.c());
    let mut deviation = 0.0f64;
    if certificate.degree == 1 {
        let mut lhs = psi_s.clone();
        for n in 0..=max_monomial {
            let rhs = TruncatedSeries::monomial(n, b, order);
            deviation = deviation.max(lhs.max_abs_diff(&rhs));
            lhs = lhs.mul(&phi_s)?;
        }
    } else {
        let twice = phi_s.compose(&phi_s)?;
        let mut lhs = psi_s.mul(&psi_s.compose(&phi_s)?)?;
        let mut weighted = psi_s.scale(b);
        for n in 0..=max_monomial {
            let rhs = weighted.add(&TruncatedSeries::monomial(n, c, order))?;
            deviation = deviation.max(lhs.max_abs_diff(&rhs));
            lhs = lhs.mul(&twice)?;
            weighted = weighted.mul(&phi_s)?;
        }
    }
    Ok(ResidualReport::exact("annihilator-on-monomials", deviation, order, cfg.coefficient_tolerance))
}
