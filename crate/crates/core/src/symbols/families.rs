use serde::{Deserialize, Serialize};

use super::{FixedPointLocation, Holomorphic, LinearFractionalMap, Rational, SymbolError};
use crate::series::TruncatedSeries;
use crate::C64;

/// Slack on `|lambda| = 1` and `lambda p = conj(p)`.
pub const CONJUGATION_TOLERANCE: f64 = 1e-12;
/// Residual bound on the boundary base-point equation.
pub const BASEPOINT_TOLERANCE: f64 = 1e-10;

const POLE_MARGIN: f64 = 1e-9;
const REAL_TOLERANCE: f64 = 1e-12;
const MODULUS_TOLERANCE: f64 = 1e-10;
const BRACKET_CELLS: usize = 720;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn require_disk(name: &'static str, value: C64) -> Result<(), SymbolError> {
    if value.norm() < 1.0 && value.is_finite() {
        Ok(())
    } else {
        Err(SymbolError::OutsideDisk { name, value })
    }
}

fn require_unimodular(name: &'static str, value: C64, tol: f64) -> Result<(), SymbolError> {
    if (value.norm() - 1.0).abs() <= tol {
        Ok(())
    } else {
        Err(SymbolError::NotUnimodular { name, value })
    }
}

fn require_real(name: &'static str, value: C64) -> Result<f64, SymbolError> {
    if value.im.abs() <= REAL_TOLERANCE * value.re.abs().max(1.0) {
        Ok(value.re)
    } else {
        Err(SymbolError::NotReal { name, value })
    }
}

/// `lambda = conj(p)/p`. At `p = 0` any unimodular value works and `-1` is
/// returned, which makes the conjugation plain `J`.
pub fn solve_conjugation_lambda(p: C64) -> C64 {
    if p.norm() == 0.0 {
        -one()
    } else {
        let lambda = p.conj() / p;
        lambda / lambda.norm()
    }
}

/// Base point `p` and unimodular `lambda` of the antilinear map
/// `f -> J(k_p * (f ∘ sigma))`, with `sigma(z) = lambda (p - z)/(1 - conj(p) z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugationSpec {
    #[serde(with = "crate::scalar::flex")]
    p: C64,
    #[serde(with = "crate::scalar::flex")]
    lambda: C64,
}

impl ConjugationSpec {
    /// Validated spec: `|p| < 1`, `|lambda| = 1` and `lambda p = conj(p)`.
    pub fn new(p: C64, lambda: C64) -> Result<Self, SymbolError> {
        let spec = Self::unconstrained(p, lambda)?;
        let resid = spec.condition_residual();
        if resid > CONJUGATION_TOLERANCE {
            return Err(SymbolError::ConjugationCondition(resid));
        }
        Ok(spec)
    }

    /// Base point with `lambda` from [`solve_conjugation_lambda`].
    pub fn at(p: C64) -> Result<Self, SymbolError> {
        Self::new(p, solve_conjugation_lambda(p))
    }

    /// Only the domain constraints; used to build negative controls where
    /// `lambda p != conj(p)`.
    pub fn unconstrained(p: C64, lambda: C64) -> Result<Self, SymbolError> {
        require_disk("p", p)?;
        require_unimodular("lambda", lambda, CONJUGATION_TOLERANCE)?;
        Ok(Self { p, lambda })
    }

    /// Plain coefficient conjugation: `sigma = id`, `k_0 = 1`.
    pub fn coefficientwise() -> Self {
        Self { p: zero(), lambda: -one() }
    }

    pub fn p(&self) -> C64 {
        self.p
    }

    pub fn lambda(&self) -> C64 {
        self.lambda
    }

    pub fn condition_residual(&self) -> f64 {
        (self.lambda * self.p - self.p.conj()).norm()
    }

    pub fn sigma(&self) -> LinearFractionalMap {
        LinearFractionalMap::new(-self.lambda, self.lambda * self.p, -self.p.conj(), one())
            .expect("|p| < 1 keeps sigma nondegenerate")
    }

    /// `k_p(z) = sqrt(1 - |p|^2) / (1 - conj(p) z)`.
    pub fn weight(&self) -> Rational {
        Rational::reciprocal_linear(C64::new((1.0 - self.p.norm_sqr()).sqrt(), 0.0), -self.p.conj(), one())
            .expect("constant term is one")
    }
}

/// Closed-form building blocks.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum StandardSymbol {
    /// `(p - z)/(1 - conj(p) z)`
    Alpha { p: C64 },
    /// `lambda (p - z)/(1 - conj(p) z)`
    Sigma { p: C64, lambda: C64 },
    /// `sqrt(1 - |p|^2)/(1 - conj(p) z)`
    NormalizedKernel { p: C64 },
    /// `1/(1 - conj(w) z)`
    Kernel { w: C64 },
}

/// A standard symbol: automorphisms come out as maps, kernels as weights
/// (a kernel based at 0 is constant and so not a valid map).
#[derive(Clone, Debug, PartialEq)]
pub enum StandardValue {
    Map(LinearFractionalMap),
    Weight(Rational),
}

impl Holomorphic for StandardValue {
    fn series(&self, order: usize) -> TruncatedSeries {
        match self {
            StandardValue::Map(m) => m.series(order),
            StandardValue::Weight(w) => w.series(order),
        }
    }

    fn eval(&self, z: C64) -> C64 {
        match self {
            StandardValue::Map(m) => Holomorphic::eval(m, z),
            StandardValue::Weight(w) => w.eval(z),
        }
    }

    fn analytic_radius(&self) -> f64 {
        match self {
            StandardValue::Map(m) => m.analytic_radius(),
            StandardValue::Weight(w) => w.analytic_radius(),
        }
    }
}

pub fn make_standard_symbol(kind: StandardSymbol) -> Result<StandardValue, SymbolError> {
    match kind {
        StandardSymbol::Alpha { p } => {
            require_disk("p", p)?;
            LinearFractionalMap::alpha(p).map(StandardValue::Map)
        }
        StandardSymbol::Sigma { p, lambda } => {
            require_disk("p", p)?;
            require_unimodular("lambda", lambda, CONJUGATION_TOLERANCE)?;
            LinearFractionalMap::new(-lambda, lambda * p, -p.conj(), one()).map(StandardValue::Map)
        }
        StandardSymbol::NormalizedKernel { p } => {
            require_disk("p", p)?;
            Ok(StandardValue::Weight(ConjugationSpec { p, lambda: one() }.weight()))
        }
        StandardSymbol::Kernel { w } => {
            require_disk("w", w)?;
            Rational::reciprocal_linear(one(), -w.conj(), one()).map(StandardValue::Weight)
        }
    }
}

/// Parameters of the complex symmetric family attached to a conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsFamilyParams {
    #[serde(with = "crate::scalar::flex")]
    pub p: C64,
    #[serde(with = "crate::scalar::flex")]
    pub lambda: C64,
    #[serde(with = "crate::scalar::flex")]
    pub a0: C64,
    #[serde(with = "crate::scalar::flex")]
    pub a1: C64,
    #[serde(with = "crate::scalar::flex")]
    pub c: C64,
}

#[derive(Clone, Debug)]
pub struct CsFamily {
    pub params: CsFamilyParams,
    pub psi: Rational,
    pub phi: LinearFractionalMap,
    pub conjugation: ConjugationSpec,
}

impl CsFamily {
    /// `|a0 - conj(p)| / |1 - a0 p|`: the ratio of consecutive weight coefficients.
    pub fn weight_decay_ratio(&self) -> f64 {
        let CsFamilyParams { p, a0, .. } = self.params;
        (a0 - p.conj()).norm() / (one() - a0 * p).norm()
    }
}

/// `psi = c / (1 - a0 p - (p - conj(lambda) a0) z)` and
/// `phi = a0 + a1 (p - conj(lambda) z) / (1 - a0 p - (p - conj(lambda) a0) z)`.
pub fn make_cs_family(params: CsFamilyParams) -> Result<CsFamily, SymbolError> {
    let CsFamilyParams { p, lambda, a0, a1, c } = params;
    let conjugation = ConjugationSpec::new(p, lambda)?;
    if c.norm() == 0.0 {
        return Err(SymbolError::Zero { name: "c" });
    }
    let lambda_bar = lambda.conj();
    let den0 = one() - a0 * p;
    let den1 = -(p - lambda_bar * a0);
    let psi = Rational::reciprocal_linear(c, den1, den0)?;
    psi.check_poles(POLE_MARGIN)?;
    let phi = LinearFractionalMap::new(a0 * den1 - a1 * lambda_bar, a0 * den0 + a1 * p, den1, den0)?;
    if !phi.is_disk_selfmap() {
        return Err(SymbolError::NotSelfMap);
    }
    Ok(CsFamily { params, psi, phi, conjugation })
}

#[derive(Clone, Debug)]
pub struct UnitaryFamily {
    pub q: C64,
    pub mu1: C64,
    pub mu2: C64,
    pub psi: Rational,
    pub phi: LinearFractionalMap,
    pub conjugation: ConjugationSpec,
}

impl UnitaryFamily {
    /// The same operator written as a member of the complex symmetric family
    /// for its conjugation.
    pub fn cs_params(&self) -> CsFamilyParams {
        let lambda = self.conjugation.lambda();
        CsFamilyParams {
            p: self.conjugation.p(),
            lambda,
            a0: zero(),
            a1: lambda * self.mu1,
            c: self.mu2 * (1.0 - self.q.norm_sqr()).sqrt(),
        }
    }
}

/// `phi = mu1 (q - z)/(1 - conj(q) z)`, `psi = mu2 sqrt(1 - |q|^2)/(1 - conj(q) z)`,
/// paired with the conjugation based at `conj(q)`.
pub fn make_unitary_family(q: C64, mu1: C64, mu2: C64) -> Result<UnitaryFamily, SymbolError> {
    require_disk("q", q)?;
    require_unimodular("mu1", mu1, CONJUGATION_TOLERANCE)?;
    require_unimodular("mu2", mu2, CONJUGATION_TOLERANCE)?;
    let phi = LinearFractionalMap::new(-mu1, mu1 * q, -q.conj(), one())?;
    let psi = Rational::reciprocal_linear(mu2 * (1.0 - q.norm_sqr()).sqrt(), -q.conj(), one())?;
    let conjugation = ConjugationSpec::at(q.conj())?;
    Ok(UnitaryFamily { q, mu1, mu2, psi, phi, conjugation })
}

#[derive(Clone, Debug)]
pub struct HermitianFamily {
    pub b0: C64,
    pub b1: f64,
    pub b2: f64,
    /// Unimodular `lambda` with `lambda conj(b0) + b0 = 0`.
    pub rotation: C64,
    pub psi: Rational,
    pub phi: LinearFractionalMap,
    pub conjugation: ConjugationSpec,
}

/// `phi = b0 + b1 z/(1 - conj(b0) z)`, `psi = b2/(1 - conj(b0) z)`.
///
/// The conjugation is `J` followed by composition with `z -> -rotation * z`,
/// i.e. the conjugation `(p = 0, lambda = rotation)`.
pub fn make_hermitian_family(b0: C64, b1: C64, b2: C64) -> Result<HermitianFamily, SymbolError> {
    require_disk("b0", b0)?;
    let b1 = require_real("b1", b1)?;
    let b2 = require_real("b2", b2)?;
    if b2 == 0.0 {
        return Err(SymbolError::Zero { name: "b2" });
    }
    let phi = LinearFractionalMap::new(C64::new(b1 - b0.norm_sqr(), 0.0), b0, -b0.conj(), one())?;
    if !phi.is_disk_selfmap() {
        return Err(SymbolError::NotSelfMap);
    }
    let psi = Rational::reciprocal_linear(C64::new(b2, 0.0), -b0.conj(), one())?;
    let rotation = if b0.norm() == 0.0 {
        one()
    } else {
        let r = -b0 / b0.conj();
        r / r.norm()
    };
    let conjugation = ConjugationSpec::new(zero(), rotation)?;
    Ok(HermitianFamily { b0, b1, b2, rotation, psi, phi, conjugation })
}

#[derive(Clone, Debug)]
pub struct NormalInteriorFamily {
    pub p: C64,
    pub gamma: C64,
    pub delta: C64,
    /// Base point `(p - conj(p))/(p^2 - 1)` of the conjugation.
    pub q: C64,
    pub psi: Rational,
    pub phi: LinearFractionalMap,
    pub conjugation: ConjugationSpec,
}

/// `phi = alpha_p ∘ (delta alpha_p)` and `psi = gamma K_p / (K_p ∘ phi)`.
pub fn make_normal_interior_family(p: C64, gamma: C64, delta: C64) -> Result<NormalInteriorFamily, SymbolError> {
    require_disk("p", p)?;
    if gamma.norm() == 0.0 {
        return Err(SymbolError::Zero { name: "gamma" });
    }
    if delta.norm() > 1.0 {
        return Err(SymbolError::OutsideDisk { name: "delta", value: delta });
    }
    let alpha = LinearFractionalMap::alpha(p)?;
    let scaled = LinearFractionalMap::new(-delta, delta * p, -p.conj(), one())?;
    let phi = alpha.compose(&scaled)?;
    if !phi.is_disk_selfmap() {
        return Err(SymbolError::NotSelfMap);
    }
    let [a, b, c, d] = phi.coefficients();
    // K_p / (K_p ∘ phi) = (1 - conj(p) phi) / (1 - conj(p) z)
    let psi = Rational::new(
        vec![gamma * (d - p.conj() * b), gamma * (c - p.conj() * a)],
        vec![(c, d), (-p.conj(), one())],
    )?;
    psi.check_poles(POLE_MARGIN)?;
    let q = (p - p.conj()) / (p * p - one());
    require_disk("q", q)?;
    // q = 0 exactly when p is real; there lambda = -1 (plain J), the limit of conj(q)/q
    let conjugation = ConjugationSpec::at(q)?;
    Ok(NormalInteriorFamily { p, gamma, delta, q, psi, phi, conjugation })
}

#[derive(Clone, Debug)]
pub struct BoundaryNormalFamily {
    pub phi: LinearFractionalMap,
    /// Boundary fixed point of `phi`.
    pub eta: C64,
    /// `b conj(eta)^2 / c`, the unimodular coefficient of the rotated map `conj(eta) phi(eta z)`.
    pub rotated_b: C64,
    /// Both solutions of the base-point equation at the requested radius.
    pub basepoints: Vec<C64>,
    /// `psi = K_{phi*(0)} = d / (c z + d)`.
    pub psi: Rational,
    /// Conjugation based at `basepoints[0] * conj(eta)`.
    pub conjugation: ConjugationSpec,
}

impl BoundaryNormalFamily {
    pub fn conjugation_for(&self, basepoint: C64) -> Result<ConjugationSpec, SymbolError> {
        ConjugationSpec::at(basepoint * self.eta.conj())
    }
}

/// Boundary fixed point of `phi`, preferring the attracting one
/// (`|phi'(eta)| <= 1`) when there are two.
pub fn boundary_fixed_point(phi: &LinearFractionalMap) -> Result<C64, SymbolError> {
    let derivative = |z: C64| (phi.det() / (phi.c() * z + phi.d()).powu(2)).norm();
    phi.fixed_points()?
        .into_iter()
        .filter(|f| f.location == FixedPointLocation::Boundary)
        .map(|f| f.point / f.point.norm())
        .min_by(|x, y| derivative(*x).total_cmp(&derivative(*y)))
        .ok_or(SymbolError::NoBoundaryFixedPoint)
}

/// Normal operator `W_{K_{phi*(0)}, phi}` for `phi = (a z + b)/(c z + d)` with
/// `|b| = |c|` and a boundary fixed point, plus its conjugation; `radius` is
/// the modulus of the base point before rotation by `conj(eta)`.
pub fn make_boundary_normal_family(
    a: C64,
    b: C64,
    c: C64,
    d: C64,
    radius: f64,
) -> Result<BoundaryNormalFamily, SymbolError> {
    if d.norm() == 0.0 {
        return Err(SymbolError::Zero { name: "d" });
    }
    let phi = LinearFractionalMap::new(a, b, c, d)?;
    let [_, bn, cn, dn] = phi.coefficients();
    if (bn.norm() - cn.norm()).abs() > MODULUS_TOLERANCE {
        return Err(SymbolError::ModulusMismatch { b: bn.norm(), c: cn.norm() });
    }
    if !phi.is_disk_selfmap() {
        return Err(SymbolError::NotSelfMap);
    }
    let eta = boundary_fixed_point(&phi)?;
    if cn.norm() == 0.0 {
        return Err(SymbolError::NoBoundaryFixedPoint);
    }
    let rotated_b = bn * eta.conj() * eta.conj() / cn;
    let rotated_b = rotated_b / rotated_b.norm();
    let basepoints = solve_boundary_basepoint(rotated_b, radius)?;
    let psi = Rational::reciprocal_linear(dn, cn, dn)?;
    psi.check_poles(POLE_MARGIN)?;
    let conjugation = ConjugationSpec::at(basepoints[0] * eta.conj())?;
    Ok(BoundaryNormalFamily { phi, eta, rotated_b, basepoints, psi, conjugation })
}

/// Residual of `b1 p (conj(p) - 1) + conj(p) (1 - p) = 0`.
pub fn basepoint_residual(b1: C64, p: C64) -> f64 {
    (b1 * p * (p.conj() - one()) + p.conj() * (one() - p)).norm()
}

/// All `p = r e^{i theta}` with `b1 p (conj(p) - 1) + conj(p)(1 - p) = 0`.
///
/// Writing `w = r - e^{-i theta}` the equation reads `b1 = w^2/|w|^2`; the
/// roots of `Im(conj(b1) w^2)` with `Re(conj(b1) w^2) > 0` are bracketed on a
/// uniform grid in `theta` and refined by bisection.
pub fn solve_boundary_basepoint(b1: C64, r: f64) -> Result<Vec<C64>, SymbolError> {
    require_unimodular("b1", b1, BASEPOINT_TOLERANCE)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(SymbolError::NoBasepoint { b1, r });
    }
    let w_sq = |theta: f64| {
        let w = C64::new(r, 0.0) - C64::from_polar(1.0, -theta);
        b1.conj() * w * w
    };
    let h = |theta: f64| w_sq(theta).im;
    let step = std::f64::consts::TAU / BRACKET_CELLS as f64;
    let mut found: Vec<C64> = Vec::with_capacity(2);
    for k in 0..BRACKET_CELLS {
        let (mut lo, mut hi) = (k as f64 * step, (k + 1) as f64 * step);
        let (mut h_lo, h_hi) = (h(lo), h(hi));
        if h_lo == 0.0 {
            hi = lo;
        } else if h_lo.signum() == h_hi.signum() {
            continue;
        } else {
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let h_mid = h(mid);
                if h_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if h_mid.signum() == h_lo.signum() {
                    lo = mid;
                    h_lo = h_mid;
                } else {
                    hi = mid;
                }
            }
        }
        let theta = 0.5 * (lo + hi);
        if w_sq(theta).re <= 0.0 {
            continue;
        }
        let p = C64::from_polar(r, theta);
        if basepoint_residual(b1, p) <= BASEPOINT_TOLERANCE
            && !found.iter().any(|q| (q - p).norm() < 1e-9)
        {
            found.push(p);
        }
    }
    if found.is_empty() {
        Err(SymbolError::NoBasepoint { b1, r })
    } else {
        Ok(found)
    }
}

/// Self-map of the disk fixing `eta`, obtained from `w -> scale w + shift` on
/// the right half-plane through the Cayley transform `w = (eta + z)/(eta - z)`.
///
/// The resulting coefficients satisfy `|b| = |c|` exactly when `scale = 1`
/// (parabolic) or `Re shift = 0` (automorphism).
pub fn boundary_fixed_point_map(eta: C64, scale: f64, shift: C64) -> Result<LinearFractionalMap, SymbolError> {
    require_unimodular("eta", eta, 1e-12)?;
    if !(scale > 0.0) || shift.re < 0.0 {
        return Err(SymbolError::NotSelfMap);
    }
    let a = C64::new(scale + 1.0, 0.0) - shift;
    let b = (C64::new(scale - 1.0, 0.0) + shift) * eta;
    let c = (C64::new(scale - 1.0, 0.0) - shift) * eta.conj();
    let d = C64::new(scale + 1.0, 0.0) + shift;
    let map = LinearFractionalMap::new(a, b, c, d)?;
    if map.is_identity() {
        return Err(SymbolError::IdentityMap);
    }
    Ok(map)
}
