use nalgebra::{DMatrix, DVector};

use super::matrix::{choose_padding, OperatorMatrix, TailModel, WcoOperator};
use super::norm::{frobenius_norm, spectral_norm_estimate};
use super::{OperatorError, ResidualReport};
use crate::config::CheckConfig;
use crate::symbols::{ConjugationSpec, Symbol};
use crate::C64;

/// `C f = J(k_p * (f ∘ sigma))`, kept as the linear matrix of
/// `W_{k_p, sigma}` plus a coefficientwise conjugation flag.
#[derive(Clone, Debug)]
pub struct AntilinearOperator {
    spec: ConjugationSpec,
    linear: WcoOperator,
}

fn conj(m: &DMatrix<C64>) -> DMatrix<C64> {
    m.map(|x| x.conj())
}

impl AntilinearOperator {
    pub fn model(spec: &ConjugationSpec, order: usize) -> TailModel {
        TailModel::new(&Symbol::new(spec.weight()), &Symbol::new(spec.sigma()), order)
    }

    pub fn new(spec: ConjugationSpec, order: usize, cfg: &CheckConfig) -> Self {
        let model = Self::model(&spec, order);
        let padding = choose_padding(&[&model], order, cfg);
        Self::with_padding(spec, model, padding)
    }

    pub fn with_padding(spec: ConjugationSpec, model: TailModel, padding: usize) -> Self {
        let linear = WcoOperator::with_padding(Symbol::new(spec.weight()), Symbol::new(spec.sigma()), model, padding);
        Self { spec, linear }
    }

    /// Operator and conjugation built at a common padding.
    pub fn paired(psi: Symbol, phi: Symbol, spec: ConjugationSpec, order: usize, cfg: &CheckConfig) -> (WcoOperator, Self) {
        let t_model = TailModel::new(&psi, &phi, order);
        let u_model = Self::model(&spec, order);
        let padding = choose_padding(&[&t_model, &u_model], order, cfg);
        (WcoOperator::with_padding(psi, phi, t_model, padding), Self::with_padding(spec, u_model, padding))
    }

    pub fn spec(&self) -> &ConjugationSpec {
        &self.spec
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        self.linear.matrix()
    }

    pub fn linear(&self) -> &WcoOperator {
        &self.linear
    }
}

/// `conj(U v)`. A vector of length `N + 1` is mapped through the tall block
/// (result of length `M + 1`); a vector of length `M + 1` through the wide
/// block (result of length `N + 1`), so that applying twice returns to the
/// original space.
pub fn apply_conjugation(c: &AntilinearOperator, v: &DVector<C64>) -> Result<DVector<C64>, OperatorError> {
    let u = c.matrix();
    let out = if v.len() == u.order() + 1 {
        u.tall() * v
    } else if v.len() == u.padding() + 1 {
        u.wide() * v
    } else {
        return Err(OperatorError::DimensionMismatch {
            expected: format!("{} or {}", u.order() + 1, u.padding() + 1),
            found: v.len(),
        });
    };
    Ok(out.map(|x| x.conj()))
}

/// `||conj(U) U - I||` on the first `N + 1` coordinates.
pub fn involution_residual(c: &AntilinearOperator, cfg: &CheckConfig) -> ResidualReport {
    let u = c.matrix();
    let n = u.order() + 1;
    let defect = conj(u.wide()) * u.tall() - DMatrix::<C64>::identity(n, n);
    ResidualReport::judge(
        "involution",
        spectral_norm_estimate(&defect, cfg.power_iterations, cfg.seed),
        frobenius_norm(&defect),
        u.order(),
        u.padding(),
        u.row_tail() * u.col_tail(),
        cfg.tolerance,
        cfg,
    )
}

/// `||conj(U T) - T^H conj(U)||`, the matrix form of `C T = T* C`.
pub fn cs_residual(t: &OperatorMatrix, c: &AntilinearOperator, cfg: &CheckConfig) -> Result<ResidualReport, OperatorError> {
    let u = c.matrix();
    t.check_compatible(u)?;
    let defect = conj(&(u.wide() * t.tall())) - t.tall().adjoint() * conj(u.tall());
    let tail = u.row_tail() * t.col_tail() + t.col_tail() * u.col_tail();
    Ok(ResidualReport::judge(
        "complex-symmetry",
        spectral_norm_estimate(&defect, cfg.power_iterations, cfg.seed),
        frobenius_norm(&defect),
        t.order(),
        t.padding(),
        tail,
        cfg.tolerance,
        cfg,
    ))
}
