use nalgebra::DMatrix;

use super::OperatorError;
use crate::config::CheckConfig;
use crate::series::{cauchy_product, TruncatedSeries};
use crate::symbols::Symbol;
use crate::C64;

const CIRCLE_SAMPLES: usize = 1024;
const RADII: usize = 48;
const MAX_OUTER_RADIUS: f64 = 4.0;

#[derive(Clone, Copy, Debug)]
struct CircleSample {
    log_r: f64,
    log_weight: f64,
    log_map: f64,
}

/// Cauchy estimates for the matrix entries `(n, j)` of `W_{psi, phi}`,
/// `|coef_n(psi phi^j)| <= max|psi| * max|phi|^j / r^n` on any circle `|z| = r`
/// inside the region of analyticity, used to bound the two neglected blocks
/// of a padded section.
#[derive(Clone, Debug)]
pub struct TailModel {
    order: usize,
    outer: Vec<CircleSample>,
    inner: Vec<CircleSample>,
}

fn circle_sample(psi: &Symbol, phi: &Symbol, r: f64) -> CircleSample {
    CircleSample {
        log_r: r.ln(),
        log_weight: psi.circle_max(r, CIRCLE_SAMPLES).ln(),
        log_map: phi.circle_max(r, CIRCLE_SAMPLES).ln(),
    }
}

impl TailModel {
    pub fn new(psi: &Symbol, phi: &Symbol, order: usize) -> Self {
        let radius = psi.analytic_radius().min(phi.analytic_radius()).min(MAX_OUTER_RADIUS);
        let outer = if radius > 1.0 {
            (1..=RADII)
                .map(|k| circle_sample(psi, phi, 1.0 + (radius - 1.0) * k as f64 / (RADII + 1) as f64))
                .filter(|s| s.log_weight.is_finite() && s.log_map.is_finite())
                .collect()
        } else {
            Vec::new()
        };
        let inner = (1..=RADII)
            .map(|k| circle_sample(psi, phi, k as f64 / (RADII + 1) as f64))
            .filter(|s| s.log_map < 0.0 && !s.log_weight.is_nan())
            .collect();
        Self { order, outer, inner }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Bound on `||(I - P_M) W P_N||`: rows beyond the padding in the first `N + 1` columns.
    pub fn col_tail(&self, padding: usize) -> f64 {
        let n = self.order as f64;
        self.outer
            .iter()
            .map(|s| {
                let log = 0.5 * (n + 1.0).ln() + s.log_weight + n * s.log_map.max(0.0)
                    - (padding as f64 + 1.0) * s.log_r
                    - 0.5 * (-(-2.0 * s.log_r).exp_m1()).ln();
                log.exp()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Bound on `||P_N W (I - P_M)||`: columns beyond the padding in the first `N + 1` rows.
    pub fn row_tail(&self, padding: usize) -> f64 {
        let n = self.order as f64;
        self.inner
            .iter()
            .map(|s| {
                let log = 0.5 * (n + 1.0).ln() + s.log_weight - n * s.log_r + (padding as f64 + 1.0) * s.log_map
                    - 0.5 * (-(2.0 * s.log_map).exp_m1()).ln();
                log.exp()
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn max_tail(&self, padding: usize) -> f64 {
        self.col_tail(padding).max(self.row_tail(padding))
    }
}

/// Smallest padding, on a grid of steps of `N/8`, at which every model's
/// tails fall below `sqrt(padding_target)`; every residual multiplies two
/// such tails. Capped at `max_padding_factor * N`.
pub fn choose_padding(models: &[&TailModel], order: usize, cfg: &CheckConfig) -> usize {
    let target = cfg.padding_target.sqrt();
    let step = (order / 8).max(1);
    let cap = order * cfg.max_padding_factor.max(1);
    let mut padding = order;
    while padding < cap {
        if models.iter().all(|m| m.max_tail(padding) <= target) {
            return padding;
        }
        padding += step;
    }
    cap
}

/// Padded section of `W_{psi, phi}`: `tall` holds rows `0..=M` of columns
/// `0..=N`, `wide` rows `0..=N` of columns `0..=M`. Column `j` is the Taylor
/// data of `psi * phi^j`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    order: usize,
    padding: usize,
    tall: DMatrix<C64>,
    wide: DMatrix<C64>,
    col_tail: f64,
    row_tail: f64,
}

/// `rows x ncols` matrix whose column `j` is `psi * phi^j` truncated to `psi.len()` terms.
fn columns(psi: &[C64], phi: &[C64], ncols: usize) -> DMatrix<C64> {
    let rows = psi.len();
    let mut out = DMatrix::zeros(rows, ncols);
    let mut col = psi.to_vec();
    for j in 0..ncols {
        out.column_mut(j).copy_from_slice(&col);
        if j + 1 < ncols {
            col = cauchy_product(&col, phi);
        }
    }
    out
}

/// Plain `(N+1) x (N+1)` section from series data, with no padding and no
/// tail model.
pub fn build_wco_matrix(psi: &TruncatedSeries, phi: &TruncatedSeries, order: usize) -> Result<OperatorMatrix, OperatorError> {
    for s in [psi, phi] {
        if s.order() != order {
            return Err(OperatorError::OrderMismatch { left: s.order(), right: order });
        }
    }
    let square = columns(psi.coeffs(), phi.coeffs(), order + 1);
    Ok(OperatorMatrix { order, padding: order, tall: square.clone(), wide: square, col_tail: 0.0, row_tail: 0.0 })
}

impl OperatorMatrix {
    pub fn padded(psi: &Symbol, phi: &Symbol, order: usize, padding: usize, model: &TailModel) -> Self {
        let padding = padding.max(order);
        let tall = columns(psi.series(padding).coeffs(), phi.series(padding).coeffs(), order + 1);
        let wide = if padding == order {
            tall.clone()
        } else {
            columns(psi.series(order).coeffs(), phi.series(order).coeffs(), padding + 1)
        };
        let (col_tail, row_tail) = (model.col_tail(padding), model.row_tail(padding));
        Self { order, padding, tall, wide, col_tail, row_tail }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// The finite section `P_N W P_N`.
    pub fn square(&self) -> DMatrix<C64> {
        self.tall.rows(0, self.order + 1).into_owned()
    }

    pub fn tall(&self) -> &DMatrix<C64> {
        &self.tall
    }

    pub fn wide(&self) -> &DMatrix<C64> {
        &self.wide
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.tall[(row, col)]
    }

    pub fn col_tail(&self) -> f64 {
        self.col_tail
    }

    pub fn row_tail(&self) -> f64 {
        self.row_tail
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<(), OperatorError> {
        if self.order != other.order {
            return Err(OperatorError::OrderMismatch { left: self.order, right: other.order });
        }
        if self.padding != other.padding {
            return Err(OperatorError::PaddingMismatch { left: self.padding, right: other.padding });
        }
        Ok(())
    }
}

/// A weighted composition operator together with its symbols.
#[derive(Clone, Debug)]
pub struct WcoOperator {
    psi: Symbol,
    phi: Symbol,
    model: TailModel,
    matrix: OperatorMatrix,
}

impl WcoOperator {
    /// Builds with the padding the operator's own tails call for.
    pub fn new(psi: Symbol, phi: Symbol, order: usize, cfg: &CheckConfig) -> Self {
        let model = TailModel::new(&psi, &phi, order);
        let padding = choose_padding(&[&model], order, cfg);
        Self::with_padding(psi, phi, model, padding)
    }

    pub fn with_padding(psi: Symbol, phi: Symbol, model: TailModel, padding: usize) -> Self {
        let matrix = OperatorMatrix::padded(&psi, &phi, model.order(), padding, &model);
        Self { psi, phi, model, matrix }
    }

    pub fn psi(&self) -> &Symbol {
        &self.psi
    }

    pub fn phi(&self) -> &Symbol {
        &self.phi
    }

    pub fn matrix(&self) -> &OperatorMatrix {
        &self.matrix
    }

    pub fn model(&self) -> &TailModel {
        &self.model
    }

    pub fn order(&self) -> usize {
        self.matrix.order
    }

    /// `sup_{|z|=1} |psi| * sqrt((1 + |phi(0)|)/(1 - |phi(0)|))`, the
    /// subordination bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        subordination_bound(&self.psi, &self.phi)
    }
}

pub(crate) fn subordination_bound(psi: &Symbol, phi: &Symbol) -> f64 {
    let phi0 = phi.eval(C64::new(0.0, 0.0)).norm();
    if phi0 >= 1.0 {
        return f64::INFINITY;
    }
    psi.circle_max(1.0, CIRCLE_SAMPLES) * ((1.0 + phi0) / (1.0 - phi0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{make_cs_family, CsFamilyParams, LinearFractionalMap, Rational};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_and_parity() {
        let n = 12;
        let id = build_wco_matrix(&TruncatedSeries::one(n), &TruncatedSeries::identity(n), n).unwrap();
        assert_eq!(id.square(), DMatrix::identity(n + 1, n + 1));
        let flip = build_wco_matrix(&TruncatedSeries::one(n), &TruncatedSeries::identity(n).scale(c(-1.0, 0.0)), n).unwrap();
        for k in 0..=n {
            assert_eq!(flip.entry(k, k), c(if k % 2 == 0 { 1.0 } else { -1.0 }, 0.0));
        }
        assert!(matches!(
            build_wco_matrix(&TruncatedSeries::one(3), &TruncatedSeries::identity(4), 4),
            Err(OperatorError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn first_column_is_the_weight() {
        // psi = 1/(1 - 0.3 z), phi = 0.3 + 0.4 z/(1 - 0.3 z)
        let fam = make_cs_family(CsFamilyParams { p: c(0.0, 0.0), lambda: c(-1.0, 0.0), a0: c(0.3, 0.0), a1: c(0.4, 0.0), c: c(1.0, 0.0) })
            .unwrap();
        let n = 40;
        let t = build_wco_matrix(&Symbol::new(fam.psi.clone()).series(n), &Symbol::new(fam.phi).series(n), n).unwrap();
        for k in 0..=n {
            assert!((t.entry(k, 0) - c(0.3f64.powi(k as i32), 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn padded_blocks_agree_with_square() {
        let psi = Symbol::new(Rational::reciprocal_linear(c(1.0, 0.0), c(-0.4, 0.1), c(1.0, 0.0)).unwrap());
        let phi = Symbol::new(LinearFractionalMap::alpha(c(0.3, -0.2)).unwrap());
        let model = TailModel::new(&psi, &phi, 24);
        let m = OperatorMatrix::padded(&psi, &phi, 24, 60, &model);
        let sq = m.square();
        assert_eq!(m.tall().shape(), (61, 25));
        assert_eq!(m.wide().shape(), (25, 61));
        assert_eq!(m.wide().columns(0, 25).into_owned(), sq);
    }

    #[test]
    fn tail_model_bounds_actual_tails() {
        let psi = Symbol::new(Rational::reciprocal_linear(c(0.8, 0.0), c(-0.5, 0.2), c(1.0, 0.0)).unwrap());
        let phi = Symbol::new(LinearFractionalMap::new(c(0.5, 0.1), c(0.2, 0.0), c(-0.2, 0.1), c(1.0, 0.0)).unwrap());
        let n = 16;
        let model = TailModel::new(&psi, &phi, n);
        let big = 400;
        let full = OperatorMatrix::padded(&psi, &phi, n, big, &model);
        for padding in [24, 40, 64] {
            let actual_col = full.tall().rows(padding + 1, big - padding).norm();
            let actual_row = full.wide().columns(padding + 1, big - padding).norm();
            assert!(actual_col <= model.col_tail(padding), "{padding}: {actual_col} vs {}", model.col_tail(padding));
            assert!(actual_row <= model.row_tail(padding), "{padding}: {actual_row} vs {}", model.row_tail(padding));
        }
        assert!(model.col_tail(64) < model.col_tail(24));
    }

    #[test]
    fn padding_grows_with_parameters() {
        let cfg = CheckConfig::default();
        let small = {
            let psi = Symbol::new(Rational::reciprocal_linear(c(1.0, 0.0), c(-0.2, 0.0), c(1.0, 0.0)).unwrap());
            let phi = Symbol::new(LinearFractionalMap::alpha(c(0.2, 0.0)).unwrap());
            TailModel::new(&psi, &phi, 64)
        };
        let large = {
            let psi = Symbol::new(Rational::reciprocal_linear(c(1.0, 0.0), c(-0.7, 0.0), c(1.0, 0.0)).unwrap());
            let phi = Symbol::new(LinearFractionalMap::alpha(c(0.7, 0.0)).unwrap());
            TailModel::new(&psi, &phi, 64)
        };
        let ps = choose_padding(&[&small], 64, &cfg);
        let pl = choose_padding(&[&large], 64, &cfg);
        assert!(ps < pl, "{ps} {pl}");
        assert!(small.max_tail(ps) <= 1e-6);
    }
}
