use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::conjugation::{apply_conjugation, AntilinearOperator};
use super::matrix::{build_wco_matrix, subordination_bound, OperatorMatrix, WcoOperator};
use super::norm::{frobenius_norm, spectral_norm_estimate};
use super::{OperatorError, ResidualReport};
use crate::config::CheckConfig;
use crate::symbols::{Holomorphic, Symbol};
use crate::C64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructureResiduals {
    pub normal: ResidualReport,
    pub hermitian: ResidualReport,
    pub unitary: ResidualReport,
}

impl StructureResiduals {
    pub fn into_vec(self) -> Vec<ResidualReport> {
        vec![self.normal, self.hermitian, self.unitary]
    }
}

fn judge(name: &str, defect: &DMatrix<C64>, m: &OperatorMatrix, tail: f64, cfg: &CheckConfig) -> ResidualReport {
    ResidualReport::judge(
        name,
        spectral_norm_estimate(defect, cfg.power_iterations, cfg.seed),
        frobenius_norm(defect),
        m.order(),
        m.padding(),
        tail,
        cfg.tolerance,
        cfg,
    )
}

/// `||T^H T - T T^H||`, `||T - T^H||` and `||T^H T - I||`.
pub fn structure_residuals(t: &OperatorMatrix, cfg: &CheckConfig) -> StructureResiduals {
    let n = t.order() + 1;
    let gram = t.tall().adjoint() * t.tall();
    let cogram = t.wide() * t.wide().adjoint();
    let square = t.square();
    let (col, row) = (t.col_tail(), t.row_tail());
    StructureResiduals {
        normal: judge("normal", &(&gram - cogram), t, col * col + row * row, cfg),
        hermitian: judge("hermitian", &(&square - square.adjoint()), t, 0.0, cfg),
        unitary: judge("unitary", &(gram - DMatrix::<C64>::identity(n, n)), t, col * col, cfg),
    }
}

fn kernel_vector(w: C64, len: usize) -> DVector<C64> {
    let wc = w.conj();
    let mut out = DVector::zeros(len);
    let mut term = C64::new(1.0, 0.0);
    for k in 0..len {
        out[k] = term;
        term *= wc;
    }
    out
}

/// `||T^H k_w - conj(psi(w)) k_{phi(w)}|| / ||k_w||` on the finite section,
/// where `k_x = (conj(x)^n)` is the truncated reproducing kernel. The defect
/// is `P_N T^H (I - P_N) K_w`, bounded by `||T|| |w|^{N+1} / sqrt(1 - |w|^2)`.
pub fn kernel_adjoint_check(
    psi: &Symbol,
    phi: &Symbol,
    w: C64,
    order: usize,
    cfg: &CheckConfig,
) -> Result<ResidualReport, OperatorError> {
    if w.norm() >= 1.0 {
        return Err(OperatorError::OutsideDisk(w));
    }
    let image = phi.eval(w);
    if image.norm() >= 1.0 {
        return Err(OperatorError::OutsideDisk(image));
    }
    let k_w = kernel_vector(w, order + 1);
    let scale = k_w.norm();
    let tail = subordination_bound(psi, phi) * w.norm().powi(order as i32 + 1) / (1.0 - w.norm_sqr()).sqrt() / scale;
    if !(cfg.tail_factor * tail <= cfg.tolerance) {
        return Err(OperatorError::PointTooLarge { w, order, tail });
    }
    let t = build_wco_matrix(&psi.series(order), &phi.series(order), order)?.square();
    let expected = kernel_vector(image, order + 1) * psi.eval(w).conj();
    let value = (t.ad_mul(&k_w) - expected).norm() / scale;
    Ok(ResidualReport::judge("kernel-adjoint", value, value, order, order, tail, cfg.tolerance, cfg))
}

/// Compares `(C T K_a)(b)`, evaluated in closed form as
/// `conj(k_p(conj b) psi(sigma(conj b)) K_a(phi(sigma(conj b))))`, with
/// `<C K_a, T K_b>` computed from the padded matrices.
pub fn bilinear_cs_check(
    t: &WcoOperator,
    c: &AntilinearOperator,
    a: C64,
    b: C64,
    cfg: &CheckConfig,
) -> Result<ResidualReport, OperatorError> {
    let (tm, um) = (t.matrix(), c.matrix());
    tm.check_compatible(um)?;
    for x in [a, b] {
        if x.norm() >= 1.0 {
            return Err(OperatorError::OutsideDisk(x));
        }
    }
    let spec = c.spec();
    let x = b.conj();
    let s = spec.sigma().eval(x);
    if s.norm() >= 1.0 {
        return Err(OperatorError::OutsideDisk(s));
    }
    let y = t.phi().eval(s);
    if y.norm() >= 1.0 {
        return Err(OperatorError::OutsideDisk(y));
    }
    let kernel_a = C64::new(1.0, 0.0) / (C64::new(1.0, 0.0) - a.conj() * y);
    let left = (spec.weight().eval(x) * t.psi().eval(s) * kernel_a).conj();

    let n = tm.order();
    let k_a = kernel_vector(a, n + 1);
    let k_b = kernel_vector(b, n + 1);
    let ck_a = apply_conjugation(c, &k_a)?;
    let tk_b = tm.tall() * &k_b;
    let right = ck_a.dotc(&tk_b).conj();

    let norm_a = 1.0 / (1.0 - a.norm_sqr()).sqrt();
    let norm_b = 1.0 / (1.0 - b.norm_sqr()).sqrt();
    let bound = t.norm_bound();
    let tail = bound * norm_b * a.norm().powi(n as i32 + 1) * norm_a
        + bound * norm_a * b.norm().powi(n as i32 + 1) * norm_b
        + um.col_tail() * norm_a * tm.col_tail() * norm_b;
    let value = (left - right).norm();
    Ok(ResidualReport::judge("bilinear-complex-symmetry", value, value, n, tm.padding(), tail, cfg.tolerance, cfg))
}
