//! Truncated Taylor series over the complex numbers.
//!
//! A [`TruncatedSeries`] of order `N` stores the coefficients of `z^0 ..= z^N`
//! of a function holomorphic on the unit disk. Every product-like operation
//! here (multiplication, exp, log, reciprocal) is exact per coefficient:
//! coefficient `n` of the output only depends on coefficients `0..=n` of the
//! inputs, so truncation never leaks into the retained range.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use crate::C64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("evaluation point {0} lies outside the closed unit disk")]
    OutsideClosedDisk(C64),
    #[error("constant term {0} is too close to zero for a logarithm or reciprocal")]
    VanishingConstantTerm(C64),
    #[error("non-finite coefficient at index {0}")]
    NonFinite(usize),
}

/// Modulus below which a constant term counts as vanishing.
pub const CONSTANT_TERM_FLOOR: f64 = 1e-12;

/// Slack allowed on `|z| <= 1` for point evaluation.
const DISK_SLACK: f64 = 1e-12;

#[derive(Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<C64>,
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TruncatedSeries")
            .field("order", &self.order())
            .field("coeffs", &self.coeffs)
            .finish()
    }
}

impl TruncatedSeries {
    /// Wraps a coefficient vector; the order is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<C64>) -> Result<Self, SeriesError> {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        if let Some(idx) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(SeriesError::NonFinite(idx));
        }
        Ok(Self { coeffs })
    }

    pub(crate) fn from_vec_unchecked(coeffs: Vec<C64>) -> Self {
        debug_assert!(!coeffs.is_empty());
        Self { coeffs }
    }

    pub fn zeros(order: usize) -> Self {
        Self { coeffs: vec![C64::new(0.0, 0.0); order + 1] }
    }

    pub fn constant(value: C64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(C64::new(1.0, 0.0), order)
    }

    /// The monomial `scale * z^power`; zero when `power > order`.
    pub fn monomial(power: usize, scale: C64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        if power <= order {
            s.coeffs[power] = scale;
        }
        s
    }

    /// The identity function `z`.
    pub fn identity(order: usize) -> Self {
        Self::monomial(1, C64::new(1.0, 0.0), order)
    }

    /// Reproducing kernel `K_w(z) = 1/(1 - conj(w) z)`, coefficients `conj(w)^n`.
    pub fn kernel(w: C64, order: usize) -> Self {
        let ratio = w.conj();
        let mut coeffs = Vec::with_capacity(order + 1);
        let mut term = C64::new(1.0, 0.0);
        for _ in 0..=order {
            coeffs.push(term);
            term *= ratio;
        }
        Self { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> C64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    /// Truncates or zero-pads to `order`.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, C64::new(0.0, 0.0));
        Self { coeffs }
    }

    fn check_order(&self, other: &Self) -> Result<(), SeriesError> {
        if self.order() != other.order() {
            return Err(SeriesError::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Cauchy product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        Ok(Self { coeffs: cauchy_product(&self.coeffs, &other.coeffs) })
    }

    /// Truncation of `sum_{n <= N} f_n * phi^n` (Horner form).
    ///
    /// When `phi(0) != 0` the true composite also receives contributions
    /// from the discarded coefficients of `f`; see [`composition_tail_bound`].
    pub fn compose(&self, phi: &Self) -> Result<Self, SeriesError> {
        self.check_order(phi)?;
        let order = self.order();
        let mut acc = Self::constant(self.coeffs[order], order);
        for k in (0..order).rev() {
            acc = Self { coeffs: cauchy_product(&acc.coeffs, &phi.coeffs) };
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Horner evaluation of the polynomial; rejects points outside the closed disk.
    pub fn evaluate(&self, z: C64) -> Result<C64, SeriesError> {
        if z.norm() > 1.0 + DISK_SLACK {
            return Err(SeriesError::OutsideClosedDisk(z));
        }
        Ok(self.horner(z))
    }

    /// Polynomial evaluation with no domain restriction.
    pub(crate) fn horner(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Hardy inner product `sum f_n conj(g_n)`.
    pub fn inner(&self, other: &Self) -> Result<C64, SeriesError> {
        self.check_order(other)?;
        Ok(self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Truncated exponential via `n g_n = sum_{k=1}^{n} k f_k g_{n-k}`.
    pub fn exp(&self) -> Self {
        let order = self.order();
        let f = &self.coeffs;
        let mut g = vec![C64::new(0.0, 0.0); order + 1];
        g[0] = f[0].exp();
        for n in 1..=order {
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=n {
                acc += f[k] * g[n - k] * k as f64;
            }
            g[n] = acc / n as f64;
        }
        Self { coeffs: g }
    }

    /// Principal-branch logarithm; the inverse of the [`exp`](Self::exp) recurrence.
    pub fn log(&self) -> Result<Self, SeriesError> {
        let f = &self.coeffs;
        if f[0].norm() <= CONSTANT_TERM_FLOOR {
            return Err(SeriesError::VanishingConstantTerm(f[0]));
        }
        let order = self.order();
        let mut g = vec![C64::new(0.0, 0.0); order + 1];
        g[0] = f[0].ln();
        for n in 1..=order {
            let mut acc = f[n] * n as f64;
            for k in 1..n {
                acc -= g[k] * f[n - k] * k as f64;
            }
            g[n] = acc / (f[0] * n as f64);
        }
        Ok(Self { coeffs: g })
    }

    /// Multiplicative inverse `1/f`.
    pub fn reciprocal(&self) -> Result<Self, SeriesError> {
        let f = &self.coeffs;
        if f[0].norm() <= CONSTANT_TERM_FLOOR {
            return Err(SeriesError::VanishingConstantTerm(f[0]));
        }
        let order = self.order();
        let inv0 = f[0].inv();
        let mut h = vec![C64::new(0.0, 0.0); order + 1];
        h[0] = inv0;
        for n in 1..=order {
            let mut acc = C64::new(0.0, 0.0);
            for k in 1..=n {
                acc += f[k] * h[n - k];
            }
            h[n] = -acc * inv0;
        }
        Ok(Self { coeffs: h })
    }

    pub fn div(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_order(other)?;
        self.mul(&other.reciprocal()?)
    }

    pub fn sin(&self) -> Self {
        let i = Complex64::i();
        let plus = self.scale(i).exp();
        let minus = self.scale(-i).exp();
        let diff = plus.sub(&minus).expect("same order");
        diff.scale((2.0 * i).inv())
    }

    pub fn cos(&self) -> Self {
        let i = Complex64::i();
        let plus = self.scale(i).exp();
        let minus = self.scale(-i).exp();
        plus.add(&minus).expect("same order").scale(C64::new(0.5, 0.0))
    }

    /// Integer power by repeated multiplication.
    pub fn powi(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exponent {
            acc = Self { coeffs: cauchy_product(&acc.coeffs, &self.coeffs) };
        }
        acc
    }

    /// The conjugation `J`: coefficientwise complex conjugation.
    pub fn conj_coeffs(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficientwise deviation over the shared range.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).map(|n| (self.coeff(n) - other.coeff(n)).norm()).fold(0.0, f64::max)
    }
}

/// Additive error of [`TruncatedSeries::compose`] relative to the full
/// composite, given the l1 mass of the discarded coefficients of `f` and
/// `sup |phi|` on the disk (must be `< 1`).
pub fn composition_tail_bound(f_tail_l1: f64, sup_phi: f64, order: usize) -> f64 {
    f_tail_l1 * sup_phi.powi(order as i32 + 1)
}

pub(crate) fn cauchy_product(f: &[C64], g: &[C64]) -> Vec<C64> {
    let len = f.len().min(g.len());
    let mut out = vec![C64::new(0.0, 0.0); len];
    for (i, &fi) in f.iter().enumerate().take(len) {
        if fi == C64::new(0.0, 0.0) {
            continue;
        }
        for (o, &gj) in out[i..].iter_mut().zip(g) {
            *o += fi * gj;
        }
    }
    out
}
