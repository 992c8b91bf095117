//! Truncated matrices of weighted composition operators and of the
//! antilinear conjugations, and the residual checks built on them.
//!
//! An identity such as `C T = T* C` involves products whose inner index
//! runs over all of the Hardy space. Finite sections cut those sums at the
//! order `N` and leave an O(1) defect for isometries, so every product is
//! taken with a padded inner dimension `M >= N`: a *tall* block (rows `0..=M`,
//! columns `0..=N`) and a *wide* block (rows `0..=N`, columns `0..=M`). `M` is
//! chosen from Cauchy estimates of the neglected tails, which are carried into
//! each report.

mod checks;
mod conjugation;
mod matrix;
mod norm;
mod report;

use thiserror::Error;

use crate::series::SeriesError;
use crate::symbols::SymbolError;
use crate::C64;

pub use checks::{bilinear_cs_check, kernel_adjoint_check, structure_residuals, StructureResiduals};
pub use conjugation::{apply_conjugation, cs_residual, involution_residual, AntilinearOperator};
pub use matrix::{build_wco_matrix, choose_padding, OperatorMatrix, TailModel, WcoOperator};
pub use norm::{frobenius_norm, spectral_norm_estimate};
pub use report::{ResidualReport, Verdict};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OperatorError {
    #[error("orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("padded dimensions differ: {left} vs {right}")]
    PaddingMismatch { left: usize, right: usize },
    #[error("vector has length {found}; expected {expected}")]
    DimensionMismatch { expected: String, found: usize },
    #[error("kernel point {w} is too far out for order {order}: tail bound {tail:e} exceeds tolerance")]
    PointTooLarge { w: C64, order: usize, tail: f64 },
    #[error("evaluation point {0} left the open unit disk")]
    OutsideDisk(C64),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}
