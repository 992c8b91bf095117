use serde::{Deserialize, Serialize};

use super::{Holomorphic, SymbolError};
use crate::series::TruncatedSeries;
use crate::C64;

/// Closed-criterion slack for the self-map test, and the boundary-sampling
/// slack on `sup |m| <= 1`.
pub const SELFMAP_TOLERANCE: f64 = 1e-10;

const DEGENERACY_FLOOR: f64 = 1e-12;
const BOUNDARY_BAND: f64 = 1e-9;
const POLE_MARGIN: f64 = 1e-9;
const SELFMAP_SAMPLES: usize = 1024;

/// `z -> (a z + b) / (c z + d)` with `ad - bc != 0`, stored with the
/// largest coefficient modulus scaled to one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearFractionalMap {
    a: C64,
    b: C64,
    c: C64,
    d: C64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FixedPointLocation {
    Interior,
    Boundary,
    Exterior,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPoint {
    pub point: C64,
    pub location: FixedPointLocation,
}

impl FixedPoint {
    fn tagged(point: C64) -> Self {
        let modulus = point.norm();
        let location = if modulus < 1.0 - BOUNDARY_BAND {
            FixedPointLocation::Interior
        } else if modulus <= 1.0 + BOUNDARY_BAND {
            FixedPointLocation::Boundary
        } else {
            FixedPointLocation::Exterior
        };
        Self { point, location }
    }
}

impl LinearFractionalMap {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self, SymbolError> {
        let scale = [a, b, c, d].iter().map(|x| x.norm()).fold(0.0, f64::max);
        if scale == 0.0 || !scale.is_finite() {
            return Err(SymbolError::Degenerate(0.0));
        }
        let m = Self { a: a / scale, b: b / scale, c: c / scale, d: d / scale };
        let det = m.det().norm();
        if det <= DEGENERACY_FLOOR {
            return Err(SymbolError::Degenerate(det));
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        Self { a: one, b: zero, c: zero, d: one }
    }

    /// `alpha_p(z) = (p - z)/(1 - conj(p) z)`, the involutive automorphism swapping 0 and p.
    pub fn alpha(p: C64) -> Result<Self, SymbolError> {
        if p.norm() >= 1.0 {
            return Err(SymbolError::OutsideDisk { name: "p", value: p });
        }
        Self::new(C64::new(-1.0, 0.0), p, -p.conj(), C64::new(1.0, 0.0))
    }

    /// `z -> scale * z`.
    pub fn dilation(scale: C64) -> Result<Self, SymbolError> {
        Self::new(scale, C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    }

    /// `z -> numerator / (1 - conj(w) z)`: the reproducing kernel `K_w` times a constant.
    pub fn scaled_kernel(w: C64, numerator: C64) -> Result<Self, SymbolError> {
        Self::new(C64::new(0.0, 0.0), numerator, -w.conj(), C64::new(1.0, 0.0))
    }

    pub fn a(&self) -> C64 {
        self.a
    }
    pub fn b(&self) -> C64 {
        self.b
    }
    pub fn c(&self) -> C64 {
        self.c
    }
    pub fn d(&self) -> C64 {
        self.d
    }

    pub fn coefficients(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn eval(&self, z: C64) -> C64 {
        (self.a * z + self.b) / (self.c * z + self.d)
    }

    /// `self ∘ inner`, i.e. `z -> self(inner(z))`.
    pub fn compose(&self, inner: &Self) -> Result<Self, SymbolError> {
        Self::new(
            self.a * inner.a + self.b * inner.c,
            self.a * inner.b + self.b * inner.d,
            self.c * inner.a + self.d * inner.c,
            self.c * inner.b + self.d * inner.d,
        )
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a).expect("inverse of a valid map is valid")
    }

    /// Cowen's adjoint map `(conj(a) z - conj(c)) / (-conj(b) z + conj(d))`.
    pub fn cross_adjoint(&self) -> Self {
        Self::new(self.a.conj(), -self.c.conj(), -self.b.conj(), self.d.conj())
            .expect("determinant is conjugated, hence nonzero")
    }

    /// Pole `-d/c`, or `None` for affine maps.
    pub fn pole(&self) -> Option<C64> {
        (self.c.norm() > 0.0).then(|| -self.d / self.c)
    }

    /// Relative distance from `other` to the best scalar multiple of `self`
    /// in coefficient space; zero iff the two maps agree.
    pub fn distance(&self, other: &Self) -> f64 {
        let lhs = self.coefficients();
        let rhs = other.coefficients();
        let num: C64 = lhs.iter().zip(&rhs).map(|(x, y)| x.conj() * y).sum();
        let den: f64 = lhs.iter().map(|x| x.norm_sqr()).sum();
        let factor = num / den;
        let resid: f64 = lhs.iter().zip(&rhs).map(|(x, y)| (y - factor * x).norm_sqr()).sum();
        let scale: f64 = rhs.iter().map(|y| y.norm_sqr()).sum();
        (resid / scale).sqrt()
    }

    pub fn is_identity(&self) -> bool {
        self.distance(&Self::identity()) <= DEGENERACY_FLOOR
    }

    /// `sup_{|z|=1} |m(z)| <= 1` via the closed coefficient criterion
    /// `|b conj(d) - a conj(c)| + |ad - bc| <= |d|^2 - |c|^2`, cross-checked by
    /// sampling the boundary. Both must agree for a `true` verdict.
    pub fn is_disk_selfmap(&self) -> bool {
        let rhs = self.d.norm_sqr() - self.c.norm_sqr();
        if rhs <= 0.0 {
            return false;
        }
        let lhs = (self.b * self.d.conj() - self.a * self.c.conj()).norm() + self.det().norm();
        let closed = lhs <= rhs + SELFMAP_TOLERANCE;
        closed && self.boundary_sup(SELFMAP_SAMPLES) <= 1.0 + SELFMAP_TOLERANCE
    }

    /// Sampled `max |m|` on the unit circle.
    pub fn boundary_sup(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let theta = std::f64::consts::TAU * k as f64 / samples as f64;
                self.eval(C64::from_polar(1.0, theta)).norm()
            })
            .fold(0.0, f64::max)
    }

    /// Finite fixed points: roots of `c z^2 + (d - a) z - b = 0`.
    pub fn fixed_points(&self) -> Result<Vec<FixedPoint>, SymbolError> {
        if self.is_identity() {
            return Err(SymbolError::IdentityMap);
        }
        let (qa, qb, qc) = (self.c, self.d - self.a, -self.b);
        let mut roots = Vec::with_capacity(2);
        if qa.norm() <= DEGENERACY_FLOOR {
            // affine: (d - a) z = b; the second fixed point is at infinity
            if qb.norm() > DEGENERACY_FLOOR {
                roots.push(-qc / qb);
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc.norm() <= 1e-14 {
                roots.push(-qb / (2.0 * qa));
            } else {
                let sq = disc.sqrt();
                // choose the sign that avoids cancellation
                let s = if (qb.conj() * sq).re >= 0.0 { sq } else { -sq };
                let q = -0.5 * (qb + s);
                roots.push(q / qa);
                if q.norm() > 0.0 {
                    roots.push(qc / q);
                } else {
                    roots.push(-qb / qa);
                }
            }
        }
        Ok(roots.into_iter().map(|r| FixedPoint::tagged(self.polish_fixed_point(r))).collect())
    }

    fn polish_fixed_point(&self, mut z: C64) -> C64 {
        // Newton on m(z) - z; converges in a step or two from the closed-form root.
        for _ in 0..3 {
            let den = self.c * z + self.d;
            if den.norm() == 0.0 {
                break;
            }
            let f = (self.a * z + self.b) / den - z;
            let fp = self.det() / (den * den) - 1.0;
            if fp.norm() < 1e-6 {
                break;
            }
            let step = f / fp;
            if !step.is_finite() {
                break;
            }
            z -= step;
        }
        z
    }

    /// Taylor series of the map; rejects a pole on or inside the closed disk.
    pub fn to_series(&self, order: usize) -> Result<TruncatedSeries, SymbolError> {
        if let Some(pole) = self.pole() {
            if pole.norm() < 1.0 + POLE_MARGIN {
                return Err(SymbolError::PoleInClosedDisk(pole));
            }
        }
        Ok(self.expand(order))
    }

    fn expand(&self, order: usize) -> TruncatedSeries {
        // (a z + b)/d * sum (-c/d)^n z^n
        let ratio = -self.c / self.d;
        let mut geo = Vec::with_capacity(order + 1);
        let mut term = self.d.inv();
        for _ in 0..=order {
            geo.push(term);
            term *= ratio;
        }
        let mut coeffs = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut v = self.b * geo[n];
            if n > 0 {
                v += self.a * geo[n - 1];
            }
            coeffs.push(v);
        }
        TruncatedSeries::from_vec_unchecked(coeffs)
    }
}

impl Holomorphic for LinearFractionalMap {
    fn series(&self, order: usize) -> TruncatedSeries {
        self.expand(order)
    }

    fn eval(&self, z: C64) -> C64 {
        LinearFractionalMap::eval(self, z)
    }

    fn analytic_radius(&self) -> f64 {
        self.pole().map_or(f64::INFINITY, |p| p.norm())
    }
}
