//! Weighted composition operators `f -> psi * (f ∘ phi)` on the Hardy space
//! of the unit disk, represented by truncated Taylor matrices.
//!
//! The crate builds the operators and the antilinear conjugations
//! `f -> conj-coefficients(k_p * (f ∘ sigma))`, and certifies complex symmetry,
//! unitarity, self-adjointness, normality and low algebraic degree through
//! residual norms whose truncation tails are estimated and reported.

pub mod config;
pub mod draws;
pub mod expr;
pub mod operators;
pub mod scalar;
pub mod series;
pub mod symbols;
pub mod theorems;

pub use num_complex;

pub type C64 = num_complex::Complex64;

pub use config::CheckConfig;
pub use expr::{Expr, ExprError};
pub use series::{SeriesError, TruncatedSeries};
pub use symbols::{Holomorphic, LinearFractionalMap, Symbol, SymbolError};
