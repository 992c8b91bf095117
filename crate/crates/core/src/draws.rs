//! Seeded parameter samplers for each family, rejection-sampled against the
//! constructors.

use rand::Rng;

use crate::symbols::{
    boundary_fixed_point_map, make_cs_family, make_hermitian_family, make_normal_interior_family, make_unitary_family,
    solve_conjugation_lambda, CsFamily, CsFamilyParams, HermitianFamily, LinearFractionalMap, NormalInteriorFamily,
    UnitaryFamily,
};
use crate::theorems::{FamilyParams, FamilyTag};
use crate::C64;

const MAX_ATTEMPTS: usize = 100_000;

/// Uniform on the disk of the given radius.
pub fn disk_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> C64 {
    let r = radius * rng.random::<f64>().sqrt();
    C64::from_polar(r, rng.random_range(0.0..std::f64::consts::TAU))
}

pub fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU))
}

/// Draws until `build` accepts; returns the value and the number of rejections.
fn rejection<R: Rng + ?Sized, T, E>(rng: &mut R, mut build: impl FnMut(&mut R) -> Result<T, E>) -> (T, usize) {
    for rejected in 0..MAX_ATTEMPTS {
        if let Ok(v) = build(rng) {
            return (v, rejected);
        }
    }
    panic!("sampler rejected {MAX_ATTEMPTS} consecutive draws");
}

fn cs_params<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> CsFamilyParams {
    let p = disk_point(rng, radius);
    CsFamilyParams {
        p,
        lambda: solve_conjugation_lambda(p),
        a0: disk_point(rng, radius),
        a1: disk_point(rng, radius),
        c: C64::from_polar(rng.random_range(0.2..1.0), rng.random_range(0.0..std::f64::consts::TAU)),
    }
}

/// `p`, `a0`, `a1` uniform in the disk of radius `radius`, `|c|` in `[0.2, 1)`.
pub fn draw_cs_params<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> CsFamily {
    rejection(rng, |rng| make_cs_family(cs_params(rng, radius))).0
}

pub fn draw_unitary<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> UnitaryFamily {
    rejection(rng, |rng| make_unitary_family(disk_point(rng, radius), unimodular(rng), unimodular(rng))).0
}

/// `b0` in the disk of radius `radius`, `b1, b2` uniform in `[-0.5, 0.5]`.
pub fn draw_hermitian<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> HermitianFamily {
    rejection(rng, |rng| {
        let b0 = disk_point(rng, radius);
        let b1 = C64::new(rng.random_range(-0.5..0.5), 0.0);
        let b2 = C64::new(rng.random_range(-0.5..0.5), 0.0);
        make_hermitian_family(b0, b1, b2)
    })
    .0
}

/// `p` in the disk of radius `radius`, `delta` in the disk of radius 0.8, `|gamma|` in `[0.5, 1)`.
pub fn draw_normal_interior<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> NormalInteriorFamily {
    rejection(rng, |rng| {
        let p = disk_point(rng, radius);
        let gamma = C64::from_polar(rng.random_range(0.5..1.0), rng.random_range(0.0..std::f64::consts::TAU));
        let delta = disk_point(rng, 0.8);
        make_normal_interior_family(p, gamma, delta)
    })
    .0
}

/// A self-map with a boundary fixed point. When `balanced` the normalized
/// coefficients satisfy `|b| = |c|` (parabolic or automorphic on the
/// half-plane side); otherwise `||b| - |c|| >= 0.05`.
pub fn draw_boundary_map<R: Rng + ?Sized>(rng: &mut R, balanced: bool) -> LinearFractionalMap {
    rejection(rng, |rng| {
        let eta = unimodular(rng);
        let (scale, shift) = if balanced {
            if rng.random_bool(0.5) {
                (1.0, C64::new(rng.random_range(0.0..0.5), rng.random_range(-0.5..0.5)))
            } else {
                (rng.random_range(0.5..2.0), C64::new(0.0, rng.random_range(-0.5..0.5)))
            }
        } else {
            (rng.random_range(0.3..0.8), C64::new(rng.random_range(0.1..0.6), rng.random_range(-0.5..0.5)))
        };
        let map = boundary_fixed_point_map(eta, scale, shift).map_err(|_| ())?;
        let gap = (map.b().norm() - map.c().norm()).abs();
        if map.c().norm() < 0.05 || (!balanced && gap < 0.05) {
            return Err(());
        }
        Ok(map)
    })
    .0
}

/// One parameter set for `tag` within `radius`, with the number of
/// constructor rejections it took.
pub fn draw_family_params<R: Rng + ?Sized>(tag: FamilyTag, rng: &mut R, radius: f64) -> Result<(FamilyParams, usize), String> {
    let out = match tag {
        FamilyTag::ComplexSymmetric => {
            let (params, rejected) = rejection(rng, |rng| {
                let params = cs_params(rng, radius);
                make_cs_family(params).map(|_| params)
            });
            (params.into(), rejected)
        }
        FamilyTag::Unitary => {
            let (fam, rejected) = rejection(rng, |rng| make_unitary_family(disk_point(rng, radius), unimodular(rng), unimodular(rng)));
            (FamilyParams::Unitary { q: fam.q, mu1: fam.mu1, mu2: fam.mu2 }, rejected)
        }
        FamilyTag::Hermitian => {
            let (fam, rejected) = rejection(rng, |rng| {
                let b0 = disk_point(rng, radius);
                let b1 = C64::new(rng.random_range(-0.5..0.5), 0.0);
                let b2 = C64::new(rng.random_range(-0.5..0.5), 0.0);
                make_hermitian_family(b0, b1, b2)
            });
            (FamilyParams::Hermitian { b0: fam.b0, b1: C64::new(fam.b1, 0.0), b2: C64::new(fam.b2, 0.0) }, rejected)
        }
        FamilyTag::NormalInterior => {
            let (fam, rejected) = rejection(rng, |rng| {
                let p = disk_point(rng, radius);
                let gamma = C64::from_polar(rng.random_range(0.5..1.0), rng.random_range(0.0..std::f64::consts::TAU));
                make_normal_interior_family(p, gamma, disk_point(rng, 0.8))
            });
            (FamilyParams::NormalInterior { p: fam.p, gamma: fam.gamma, delta: fam.delta }, rejected)
        }
        FamilyTag::BoundaryNormal => {
            let map = draw_boundary_map(rng, true);
            let [a, b, c, d] = map.coefficients();
            let r = rng.random_range(0.2..radius.max(0.2 + f64::EPSILON));
            (FamilyParams::BoundaryNormal { a, b, c, d, radius: r }, 0)
        }
        FamilyTag::Algebraic => return Err("the algebraic family takes explicit symbols, not random draws".into()),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn draws_are_reproducible_and_in_range() {
        let mut a = ChaCha8Rng::seed_from_u64(3);
        let mut b = ChaCha8Rng::seed_from_u64(3);
        for tag in FamilyTag::ALL.into_iter().filter(|t| *t != FamilyTag::Algebraic) {
            for _ in 0..10 {
                let x = draw_family_params(tag, &mut a, 0.6).unwrap();
                let y = draw_family_params(tag, &mut b, 0.6).unwrap();
                assert_eq!(x, y);
            }
        }
        for _ in 0..200 {
            assert!(disk_point(&mut a, 0.6).norm() <= 0.6);
            assert!((unimodular(&mut a).norm() - 1.0).abs() < 1e-15);
        }
        assert!(draw_family_params(FamilyTag::Algebraic, &mut a, 0.6).is_err());
    }

    #[test]
    fn boundary_maps_have_the_requested_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for balanced in [true, false] {
            for _ in 0..25 {
                let m = draw_boundary_map(&mut rng, balanced);
                let gap = (m.b().norm() - m.c().norm()).abs();
                assert!(if balanced { gap < 1e-12 } else { gap >= 0.05 });
                assert!(m.is_disk_selfmap());
            }
        }
    }
}
