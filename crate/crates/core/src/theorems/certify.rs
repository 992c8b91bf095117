use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::algebraic::{classify_algebraic, verify_case3_identity, AlgebraicVerdict};
use super::normality::verify_eq14;
use super::TheoremError;
use crate::config::CheckConfig;
use crate::expr::Expr;
use crate::operators::{
    bilinear_cs_check, cs_residual, involution_residual, kernel_adjoint_check, structure_residuals, AntilinearOperator,
    OperatorError, ResidualReport, Verdict, WcoOperator,
};
use crate::symbols::{
    basepoint_residual, boundary_fixed_point, make_boundary_normal_family, make_cs_family, make_hermitian_family,
    make_normal_interior_family, make_unitary_family, solve_conjugation_lambda, ConjugationSpec, CsFamilyParams,
    LinearFractionalMap, Rational, Symbol, BASEPOINT_TOLERANCE,
};
use crate::C64;

/// Point used for the kernel adjoint check; halved until its tail fits the order.
pub const KERNEL_POINT: C64 = C64::new(0.2, 0.1);
/// Kernel pair `(a, b)` used for the pointwise complex symmetry check.
pub const BILINEAR_POINTS: (C64, C64) = (C64::new(0.2, 0.0), C64::new(0.0, 0.3));

const MODULUS_TOLERANCE: f64 = 1e-10;
const IDENTITY_MONOMIALS: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyTag {
    #[serde(rename = "cs-2.3", alias = "cs")]
    ComplexSymmetric,
    #[serde(rename = "unitary")]
    Unitary,
    #[serde(rename = "hermitian")]
    Hermitian,
    #[serde(rename = "normal-interior")]
    NormalInterior,
    #[serde(rename = "boundary-normal")]
    BoundaryNormal,
    #[serde(rename = "algebraic")]
    Algebraic,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 6] = [
        FamilyTag::ComplexSymmetric,
        FamilyTag::Unitary,
        FamilyTag::Hermitian,
        FamilyTag::NormalInterior,
        FamilyTag::BoundaryNormal,
        FamilyTag::Algebraic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::ComplexSymmetric => "cs-2.3",
            FamilyTag::Unitary => "unitary",
            FamilyTag::Hermitian => "hermitian",
            FamilyTag::NormalInterior => "normal-interior",
            FamilyTag::BoundaryNormal => "boundary-normal",
            FamilyTag::Algebraic => "algebraic",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = TheoremError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "cs" {
            return Ok(FamilyTag::ComplexSymmetric);
        }
        Self::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| TheoremError::Params(format!("unknown family `{s}`")))
    }
}

fn unit() -> C64 {
    C64::new(1.0, 0.0)
}

fn default_radius() -> f64 {
    0.5
}

/// Parameters of one certification run, tagged by family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum FamilyParams {
    /// `lambda` defaults to `conj(p)/p` (and to `-1`, plain `J`, at `p = 0`).
    #[serde(rename = "cs-2.3", alias = "cs")]
    ComplexSymmetric {
        #[serde(with = "crate::scalar::flex")]
        p: C64,
        #[serde(default, with = "crate::scalar::flex_opt", skip_serializing_if = "Option::is_none")]
        lambda: Option<C64>,
        #[serde(with = "crate::scalar::flex")]
        a0: C64,
        #[serde(with = "crate::scalar::flex")]
        a1: C64,
        #[serde(with = "crate::scalar::flex")]
        c: C64,
    },
    #[serde(rename = "unitary")]
    Unitary {
        #[serde(with = "crate::scalar::flex")]
        q: C64,
        #[serde(with = "crate::scalar::flex")]
        mu1: C64,
        #[serde(with = "crate::scalar::flex")]
        mu2: C64,
    },
    #[serde(rename = "hermitian")]
    Hermitian {
        #[serde(with = "crate::scalar::flex")]
        b0: C64,
        #[serde(with = "crate::scalar::flex")]
        b1: C64,
        #[serde(with = "crate::scalar::flex")]
        b2: C64,
    },
    #[serde(rename = "normal-interior")]
    NormalInterior {
        #[serde(with = "crate::scalar::flex")]
        p: C64,
        #[serde(with = "crate::scalar::flex")]
        gamma: C64,
        #[serde(with = "crate::scalar::flex")]
        delta: C64,
    },
    /// `phi = (a z + b)/(c z + d)`; `radius` is the modulus of the conjugation's
    /// base point before rotation.
    #[serde(rename = "boundary-normal")]
    BoundaryNormal {
        #[serde(default = "unit", with = "crate::scalar::flex")]
        a: C64,
        #[serde(with = "crate::scalar::flex")]
        b: C64,
        #[serde(with = "crate::scalar::flex")]
        c: C64,
        #[serde(default = "unit", with = "crate::scalar::flex")]
        d: C64,
        #[serde(default = "default_radius")]
        radius: f64,
    },
    /// Symbols in the expression language of [`Expr`].
    #[serde(rename = "algebraic")]
    Algebraic { psi: String, phi: String },
}

impl FamilyParams {
    pub fn tag(&self) -> FamilyTag {
        match self {
            FamilyParams::ComplexSymmetric { .. } => FamilyTag::ComplexSymmetric,
            FamilyParams::Unitary { .. } => FamilyTag::Unitary,
            FamilyParams::Hermitian { .. } => FamilyTag::Hermitian,
            FamilyParams::NormalInterior { .. } => FamilyTag::NormalInterior,
            FamilyParams::BoundaryNormal { .. } => FamilyTag::BoundaryNormal,
            FamilyParams::Algebraic { .. } => FamilyTag::Algebraic,
        }
    }

    /// Reads a JSON object of parameters for `tag`; a `family` field, if
    /// present, must agree with `tag`.
    pub fn from_json(tag: FamilyTag, value: serde_json::Value) -> Result<Self, TheoremError> {
        let serde_json::Value::Object(mut map) = value else {
            return Err(TheoremError::Params("parameters must be a JSON object".into()));
        };
        if let Some(given) = map.get("family") {
            let given: FamilyTag =
                serde_json::from_value(given.clone()).map_err(|e| TheoremError::Params(e.to_string()))?;
            if given != tag {
                return Err(TheoremError::Params(format!("parameters are for `{given}`, not `{tag}`")));
            }
        }
        map.insert("family".into(), serde_json::Value::String(tag.as_str().into()));
        serde_json::from_value(serde_json::Value::Object(map)).map_err(|e| TheoremError::Params(e.to_string()))
    }
}

impl From<CsFamilyParams> for FamilyParams {
    fn from(p: CsFamilyParams) -> Self {
        FamilyParams::ComplexSymmetric { p: p.p, lambda: Some(p.lambda), a0: p.a0, a1: p.a1, c: p.c }
    }
}

/// Outcome of every check run for one parameter set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub family: FamilyTag,
    pub params: FamilyParams,
    pub order: usize,
    /// Inner dimension shared by the operator and its conjugation.
    pub padding: Option<usize>,
    /// The conjugation the operator was tested against.
    pub conjugation: Option<ConjugationSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<AlgebraicVerdict>,
    pub checks: Vec<ResidualReport>,
    pub verdict: Verdict,
}

impl CertificateReport {
    fn new(params: &FamilyParams, order: usize) -> Self {
        Self {
            family: params.tag(),
            params: params.clone(),
            order,
            padding: None,
            conjugation: None,
            classification: None,
            checks: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    fn finish(mut self) -> Self {
        self.verdict = Verdict::from_bool(self.checks.iter().all(ResidualReport::passed));
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn check(&self, name: &str) -> Option<&ResidualReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Copy)]
enum Structure {
    Normal,
    Hermitian,
    Unitary,
}

fn kernel_check(psi: &Symbol, phi: &Symbol, order: usize, cfg: &CheckConfig) -> Result<ResidualReport, TheoremError> {
    let mut w = KERNEL_POINT;
    loop {
        match kernel_adjoint_check(psi, phi, w, order, cfg) {
            Err(OperatorError::PointTooLarge { .. }) if w.norm() > 1e-3 => w *= 0.5,
            other => return Ok(other?),
        }
    }
}

/// Involution, complex symmetry (matrix and kernel forms), kernel adjoint and
/// the requested structure residuals for `W_{psi, phi}` against `spec`.
fn operator_checks(
    report: &mut CertificateReport,
    psi: Symbol,
    phi: Symbol,
    spec: ConjugationSpec,
    structures: &[Structure],
    cfg: &CheckConfig,
) -> Result<(), TheoremError> {
    let order = report.order;
    let (t, u) = AntilinearOperator::paired(psi, phi, spec, order, cfg);
    report.padding = Some(t.matrix().padding());
    report.conjugation = Some(spec);
    let structure = structure_residuals(t.matrix(), cfg);
    for s in structures {
        report.checks.push(match s {
            Structure::Normal => structure.normal.clone(),
            Structure::Hermitian => structure.hermitian.clone(),
            Structure::Unitary => structure.unitary.clone(),
        });
    }
    report.checks.push(involution_residual(&u, cfg));
    report.checks.push(cs_residual(t.matrix(), &u, cfg)?);
    let (a, b) = BILINEAR_POINTS;
    report.checks.push(bilinear_cs_check(&t, &u, a, b, cfg)?);
    report.checks.push(kernel_check(t.psi(), t.phi(), order, cfg)?);
    Ok(())
}

/// Runs every check that applies to the family and aggregates the verdicts.
///
/// Constructor rejections are errors. For `boundary-normal` the
/// preconditions (self-map, boundary fixed point, `|b| = |c|`) are reported
/// as failing checks instead, together with whatever residuals can still be
/// formed.
pub fn certify_theorem(params: &FamilyParams, order: usize, cfg: &CheckConfig) -> Result<CertificateReport, TheoremError> {
    let mut report = CertificateReport::new(params, order);
    match *params {
        FamilyParams::ComplexSymmetric { p, lambda, a0, a1, c } => {
            let lambda = lambda.unwrap_or_else(|| solve_conjugation_lambda(p));
            let fam = make_cs_family(CsFamilyParams { p, lambda, a0, a1, c })?;
            operator_checks(&mut report, fam.psi.into(), fam.phi.into(), fam.conjugation, &[], cfg)?;
        }
        FamilyParams::Unitary { q, mu1, mu2 } => {
            let fam = make_unitary_family(q, mu1, mu2)?;
            let structures = [Structure::Unitary, Structure::Normal];
            operator_checks(&mut report, fam.psi.into(), fam.phi.into(), fam.conjugation, &structures, cfg)?;
        }
        FamilyParams::Hermitian { b0, b1, b2 } => {
            let fam = make_hermitian_family(b0, b1, b2)?;
            let structures = [Structure::Hermitian, Structure::Normal];
            operator_checks(&mut report, fam.psi.into(), fam.phi.into(), fam.conjugation, &structures, cfg)?;
        }
        FamilyParams::NormalInterior { p, gamma, delta } => {
            let fam = make_normal_interior_family(p, gamma, delta)?;
            let q = fam.q.norm();
            report.checks.push(ResidualReport::condition("conjugation-base-in-disk", q < 1.0, q, 1.0));
            operator_checks(&mut report, fam.psi.into(), fam.phi.into(), fam.conjugation, &[Structure::Normal], cfg)?;
        }
        FamilyParams::BoundaryNormal { a, b, c, d, radius } => certify_boundary(&mut report, a, b, c, d, radius, cfg)?,
        FamilyParams::Algebraic { ref psi, ref phi } => {
            let psi = Symbol::new(Expr::parse(psi)?);
            let phi = Symbol::new(Expr::parse(phi)?);
            let verdict = classify_algebraic(&psi, &phi, order, cfg)?;
            match verdict.certificate() {
                Some(cert) => {
                    report.checks.push(cert.annihilation.clone());
                    report.checks.push(verify_case3_identity(&psi, &phi, cert, IDENTITY_MONOMIALS, order, cfg)?);
                }
                None => report.checks.push(ResidualReport::condition("algebraic-degree-at-most-2", false, 1.0, 0.0)),
            }
            report.classification = Some(verdict);
        }
    }
    Ok(report.finish())
}

fn certify_boundary(
    report: &mut CertificateReport,
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    radius: f64,
    cfg: &CheckConfig,
) -> Result<(), TheoremError> {
    let order = report.order;
    let phi = LinearFractionalMap::new(a, b, c, d)?;
    let self_map = phi.is_disk_selfmap();
    let excess = phi.boundary_sup(1024) - 1.0;
    report.checks.push(ResidualReport::condition("self-map", self_map, excess.max(0.0), 0.0));
    let eta = boundary_fixed_point(&phi).ok();
    let drift = eta.map_or(f64::INFINITY, |e| (phi.eval(e) - e).norm());
    report.checks.push(ResidualReport::condition("boundary-fixed-point", eta.is_some(), drift, 1e-9));
    let [_, bn, cn, dn] = phi.coefficients();
    let gap = (bn.norm() - cn.norm()).abs();
    report.checks.push(ResidualReport::condition("lemma-bc-|b|=|c|", gap <= MODULUS_TOLERANCE, gap, MODULUS_TOLERANCE));
    if !self_map || dn.norm() == 0.0 {
        return Ok(());
    }

    report.checks.push(verify_eq14(a, b, c, d, order, cfg)?);
    let psi = Rational::reciprocal_linear(dn, cn, dn)?;
    if eta.is_none() || gap > MODULUS_TOLERANCE {
        let t = WcoOperator::new(psi.into(), phi.into(), order, cfg);
        report.padding = Some(t.matrix().padding());
        report.checks.push(structure_residuals(t.matrix(), cfg).normal);
        return Ok(());
    }

    let fam = make_boundary_normal_family(a, b, c, d, radius)?;
    let residual = basepoint_residual(fam.rotated_b, fam.basepoints[0]);
    report.checks.push(ResidualReport::exact("boundary-basepoint", residual, 0, BASEPOINT_TOLERANCE));
    operator_checks(report, fam.psi.into(), fam.phi.into(), fam.conjugation, &[Structure::Normal], cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::SymbolError;
    use serde_json::json;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn names(r: &CertificateReport) -> Vec<&str> {
        r.checks.iter().map(|c| c.name.as_str()).collect()
    }

    #[test]
    fn unitary_example() {
        let params = FamilyParams::Unitary { q: c(0.5, 0.0), mu1: unit(), mu2: unit() };
        let r = certify_theorem(&params, 128, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        for name in ["unitary", "complex-symmetry", "involution"] {
            assert!(r.check(name).unwrap().passed());
        }
        assert_eq!(r.conjugation.unwrap().p(), c(0.5, 0.0));
    }

    #[test]
    fn hermitian_example() {
        let params = FamilyParams::Hermitian { b0: c(0.0, 0.2), b1: c(0.3, 0.0), b2: unit() };
        let r = certify_theorem(&params, 128, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(names(&r).contains(&"hermitian"));
        let spec = r.conjugation.unwrap();
        assert!((spec.lambda() * c(0.0, -0.2) + c(0.0, 0.2)).norm() < 1e-15);
    }

    #[test]
    fn normal_interior_example() {
        let params = FamilyParams::NormalInterior { p: c(0.3, 0.2), gamma: unit(), delta: c(0.6, 0.0) };
        let r = certify_theorem(&params, 128, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(r.check("normal").unwrap().passed());
    }

    #[test]
    fn plain_conjugation_at_the_origin() {
        let params = FamilyParams::ComplexSymmetric { p: c(0.0, 0.0), lambda: None, a0: c(0.3, 0.0), a1: c(0.4, 0.0), c: unit() };
        let r = certify_theorem(&params, 64, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.conjugation.unwrap(), ConjugationSpec::coefficientwise());
        let u = AntilinearOperator::new(ConjugationSpec::coefficientwise(), 64, &CheckConfig::default());
        assert_eq!(u.matrix().square(), nalgebra::DMatrix::identity(65, 65));

        let bad = FamilyParams::ComplexSymmetric { p: c(0.0, 0.0), lambda: None, a0: c(0.3, 0.0), a1: c(0.5, 0.0), c: unit() };
        assert!(matches!(certify_theorem(&bad, 64, &CheckConfig::default()), Err(TheoremError::Symbol(SymbolError::NotSelfMap))));
    }

    #[test]
    fn boundary_precondition_failures_are_checks() {
        let params = FamilyParams::from_json(FamilyTag::BoundaryNormal, json!({"b": 0.2, "c": 0.3})).unwrap();
        let r = certify_theorem(&params, 64, &CheckConfig::default()).unwrap();
        assert!(!r.passed());
        assert!(!r.check("lemma-bc-|b|=|c|").unwrap().passed());
    }

    #[test]
    fn boundary_normal_passes() {
        let map = crate::symbols::boundary_fixed_point_map(C64::from_polar(1.0, 0.9), 1.0, c(0.25, -0.2)).unwrap();
        let [a, b, cc, d] = map.coefficients();
        let params = FamilyParams::BoundaryNormal { a, b, c: cc, d, radius: 0.4 };
        let r = certify_theorem(&params, 96, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert!(names(&r).contains(&"normality-identity"));
    }

    #[test]
    fn algebraic_example() {
        let params = FamilyParams::Algebraic { psi: "exp(sin(z))".into(), phi: "-z".into() };
        let r = certify_theorem(&params, 96, &CheckConfig::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        let params = FamilyParams::Algebraic { psi: "exp(z^2)".into(), phi: "-z".into() };
        assert!(!certify_theorem(&params, 64, &CheckConfig::default()).unwrap().passed());
    }

    #[test]
    fn params_json() {
        let p = FamilyParams::from_json(FamilyTag::ComplexSymmetric, json!({"p": "0.1+0.2i", "a0": 0.3, "a1": [0.2, 0.1], "c": 1})).unwrap();
        assert_eq!(p, FamilyParams::ComplexSymmetric { p: c(0.1, 0.2), lambda: None, a0: c(0.3, 0.0), a1: c(0.2, 0.1), c: unit() });
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.starts_with("{\"family\":\"cs-2.3\""), "{text}");
        assert_eq!(serde_json::from_str::<FamilyParams>(&text).unwrap(), p);
        assert!(FamilyParams::from_json(FamilyTag::Unitary, json!({"family": "hermitian", "q": 0})).is_err());
        assert!(FamilyParams::from_json(FamilyTag::Unitary, json!({"q": 0})).is_err());
        assert_eq!("cs".parse::<FamilyTag>().unwrap(), FamilyTag::ComplexSymmetric);
        assert!("nope".parse::<FamilyTag>().is_err());
    }
}
