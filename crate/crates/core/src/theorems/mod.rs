//! Theorem-level checks: parameter recovery for the complex symmetric
//! family, the normality identity for maps with a boundary fixed point, the
//! degree-2 algebraic classification, and per-family certification runs.

use thiserror::Error;

use crate::expr::ExprError;
use crate::operators::OperatorError;
use crate::series::SeriesError;
use crate::symbols::SymbolError;
use crate::C64;

mod algebraic;
mod certify;
mod matching;
mod normality;

pub use algebraic::{
    annihilation_residual, classify_algebraic, interior_fixed_point, verify_case3_identity, AlgebraicCertificate,
    AlgebraicVerdict, CaseTag, NotAlgebraicReason, OddWeightData,
};
pub use certify::{certify_theorem, CertificateReport, FamilyParams, FamilyTag, BILINEAR_POINTS, KERNEL_POINT};
pub use matching::{match_cs_parameters, CsMatch, MatchFailure, MATCH_TOLERANCE};
pub use normality::{normality_sides, verify_eq14, NormalitySides, Side};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TheoremError {
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error(transparent)]
    Operator(#[from] OperatorError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("{side} weight has a pole at {pole} in the closed disk")]
    WeightPole { side: Side, pole: C64 },
    #[error("weight is identically zero")]
    ZeroWeight,
    #[error("phi(0) = {0} lies outside the disk")]
    MapLeavesDisk(C64),
    #[error("no interior fixed point found for the involution")]
    FixedPointNotFound,
    #[error("invalid parameters: {0}")]
    Params(String),
}
