//! Closed-form symbols: linear fractional maps, rational weights, and the
//! parametric families whose weighted composition operators are checked.

mod families;
mod lft;
mod rational;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::series::{SeriesError, TruncatedSeries};
use crate::C64;

pub use families::{
    basepoint_residual, boundary_fixed_point, boundary_fixed_point_map, make_boundary_normal_family, make_cs_family, make_hermitian_family,
    make_normal_interior_family, make_standard_symbol, make_unitary_family,
    solve_boundary_basepoint, solve_conjugation_lambda, BoundaryNormalFamily, ConjugationSpec,
    CsFamily, CsFamilyParams, HermitianFamily, NormalInteriorFamily, StandardSymbol, StandardValue,
    UnitaryFamily, BASEPOINT_TOLERANCE, CONJUGATION_TOLERANCE,
};
pub use lft::{FixedPoint, FixedPointLocation, LinearFractionalMap, SELFMAP_TOLERANCE};
pub use rational::Rational;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymbolError {
    #[error("degenerate linear fractional map (|ad - bc| = {0:e})")]
    Degenerate(f64),
    #[error("pole at {0} lies on or inside the closed unit disk")]
    PoleInClosedDisk(C64),
    #[error("{name} = {value} must lie in the open unit disk")]
    OutsideDisk { name: &'static str, value: C64 },
    #[error("{name} = {value} must be unimodular")]
    NotUnimodular { name: &'static str, value: C64 },
    #[error("{name} must be real, got {value}")]
    NotReal { name: &'static str, value: C64 },
    #[error("{name} must be nonzero")]
    Zero { name: &'static str },
    #[error("conjugation requires lambda * p = conj(p); residual {0:e}")]
    ConjugationCondition(f64),
    #[error("composition symbol is not a self-map of the unit disk")]
    NotSelfMap,
    #[error("the identity map fixes every point")]
    IdentityMap,
    #[error("map has no fixed point on the unit circle")]
    NoBoundaryFixedPoint,
    #[error("|b| = {b:.6} differs from |c| = {c:.6}; the family is not normal")]
    ModulusMismatch { b: f64, c: f64 },
    #[error("constant term must be nonzero")]
    ZeroDenominator,
    #[error("no base point found for b1 = {b1}, r = {r}")]
    NoBasepoint { b1: C64, r: f64 },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

/// A function holomorphic on a neighbourhood of the closed unit disk, known
/// well enough to produce its Taylor series at any order and to be evaluated
/// off the disk (for Cauchy tail estimates).
pub trait Holomorphic: Send + Sync + fmt::Debug {
    fn series(&self, order: usize) -> TruncatedSeries;

    fn eval(&self, z: C64) -> C64;

    /// Radius of the largest open disk about 0 on which the function is
    /// holomorphic; `f64::INFINITY` for entire functions.
    fn analytic_radius(&self) -> f64;
}

impl Holomorphic for TruncatedSeries {
    fn series(&self, order: usize) -> TruncatedSeries {
        self.resized(order)
    }

    fn eval(&self, z: C64) -> C64 {
        self.horner(z)
    }

    fn analytic_radius(&self) -> f64 {
        f64::INFINITY
    }
}

/// Shared handle to a holomorphic symbol.
#[derive(Clone, Debug)]
pub struct Symbol(Arc<dyn Holomorphic>);

impl Symbol {
    pub fn new(inner: impl Holomorphic + 'static) -> Self {
        Self(Arc::new(inner))
    }

    pub fn series(&self, order: usize) -> TruncatedSeries {
        self.0.series(order)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.0.eval(z)
    }

    pub fn analytic_radius(&self) -> f64 {
        self.0.analytic_radius()
    }

    /// `max |f|` over `samples` equispaced points of the circle `|z| = radius`.
    pub fn circle_max(&self, radius: f64, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.eval(C64::from_polar(radius, theta)).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl<T: Holomorphic + 'static> From<T> for Symbol {
    fn from(value: T) -> Self {
        Self::new(value)
    }
}
