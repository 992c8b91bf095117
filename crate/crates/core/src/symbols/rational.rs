use serde::{Deserialize, Serialize};

use super::{Holomorphic, SymbolError};
use crate::series::TruncatedSeries;
use crate::C64;

/// A polynomial divided by a product of linear factors `c z + d`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    numerator: Vec<C64>,
    factors: Vec<(C64, C64)>,
}

impl Rational {
    /// `numerator` holds polynomial coefficients by ascending power; each
    /// factor `(c, d)` contributes `c z + d` to the denominator.
    pub fn new(numerator: Vec<C64>, factors: Vec<(C64, C64)>) -> Result<Self, SymbolError> {
        if factors.iter().any(|(_, d)| d.norm() == 0.0) {
            return Err(SymbolError::ZeroDenominator);
        }
        if numerator.iter().chain(factors.iter().flat_map(|(c, d)| [c, d])).any(|x| !x.is_finite()) {
            return Err(SymbolError::Series(crate::series::SeriesError::NonFinite(0)));
        }
        Ok(Self { numerator, factors })
    }

    /// `numerator / (c z + d)`.
    pub fn reciprocal_linear(numerator: C64, c: C64, d: C64) -> Result<Self, SymbolError> {
        Self::new(vec![numerator], vec![(c, d)])
    }

    pub fn numerator(&self) -> &[C64] {
        &self.numerator
    }

    pub fn factors(&self) -> &[(C64, C64)] {
        &self.factors
    }

    pub fn poles(&self) -> impl Iterator<Item = C64> + '_ {
        self.factors.iter().filter(|(c, _)| c.norm() > 0.0).map(|(c, d)| -d / c)
    }

    /// Rejects any pole with modulus below `1 + margin`.
    pub fn check_poles(&self, margin: f64) -> Result<(), SymbolError> {
        match self.poles().find(|p| p.norm() < 1.0 + margin) {
            Some(p) => Err(SymbolError::PoleInClosedDisk(p)),
            None => Ok(()),
        }
    }
}

impl Holomorphic for Rational {
    fn series(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![C64::new(0.0, 0.0); order + 1];
        for (slot, value) in coeffs.iter_mut().zip(&self.numerator) {
            *slot = *value;
        }
        // divide by each (c z + d) in place: g_n = (f_n - c g_{n-1}) / d
        for (c, d) in &self.factors {
            let mut prev = C64::new(0.0, 0.0);
            for slot in coeffs.iter_mut() {
                prev = (*slot - c * prev) / d;
                *slot = prev;
            }
        }
        TruncatedSeries::from_vec_unchecked(coeffs)
    }

    fn eval(&self, z: C64) -> C64 {
        let num = self.numerator.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c);
        self.factors.iter().fold(num, |acc, (c, d)| acc / (c * z + d))
    }

    fn analytic_radius(&self) -> f64 {
        self.poles().map(|p| p.norm()).fold(f64::INFINITY, f64::min)
    }
}
