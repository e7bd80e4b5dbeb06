//! Seeded random bodies for inequality ensembles.

use super::{ConvexBody, Polygon, Polytope3, TrigSeries, CURVATURE_CHECK_SAMPLES, MAX_DEGREE};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyKind {
    Polytope,
    Zonotope,
    #[serde(rename = "smooth_2d")]
    Smooth2D,
    SymmetricPolytope,
    /// Planar smooth body with only even harmonics, hence `K = -K`.
    #[serde(rename = "symmetric_smooth_2d")]
    SymmetricSmooth2D,
}

impl BodyKind {
    pub fn is_symmetric(self) -> bool {
        matches!(
            self,
            BodyKind::SymmetricPolytope | BodyKind::SymmetricSmooth2D | BodyKind::Zonotope
        )
    }

    pub fn is_smooth(self) -> bool {
        matches!(self, BodyKind::Smooth2D | BodyKind::SymmetricSmooth2D)
    }
}

fn gaussian_point(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()
}

fn extreme_points(points: Vec<Vec<f64>>) -> Result<Vec<Vec<f64>>> {
    match points.first().map(Vec::len) {
        Some(2) => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            Ok(Polygon::hull(&pts).vertices.iter().map(|v| v.to_vec()).collect())
        }
        Some(3) => {
            let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
            Ok(Polytope3::hull(&pts)?.vertices.iter().map(|v| v.to_vec()).collect())
        }
        _ => Ok(points),
    }
}

fn smooth(rng: &mut ChaCha8Rng, size: usize, even_only: bool) -> Result<ConvexBody> {
    let degree = size.clamp(2, MAX_DEGREE);
    let c0: f64 = rng.gen_range(0.6..1.6);
    let mut cos = vec![0.0; degree + 1];
    let mut sin = vec![0.0; degree + 1];
    cos[0] = c0;
    for k in 2..=degree {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        if even_only && k % 2 == 1 {
            continue;
        }
        let amp = 0.5 * c0 / (k * k) as f64;
        cos[k] = a * amp;
        sin[k] = b * amp;
    }
    loop {
        let series = TrigSeries::new(cos.clone(), sin.clone());
        if series.min_curvature(CURVATURE_CHECK_SAMPLES) > 0.05 * c0 {
            return ConvexBody::smooth_2d(cos, sin);
        }
        for k in 2..=degree {
            cos[k] *= 0.8;
            sin[k] *= 0.8;
        }
    }
}

/// Deterministic random body of the given kind.
///
/// `size` is the number of sample points (polytopes), generators
/// (zonotopes) or the harmonic degree (smooth planar bodies).
pub fn random_body(kind: BodyKind, dim: usize, size: usize, seed: u64) -> Result<ConvexBody> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        BodyKind::Polytope | BodyKind::SymmetricPolytope => {
            if size < dim + 1 {
                return Err(Error::InvalidArgument(format!(
                    "polytope needs at least {} points, got {size}",
                    dim + 1
                )));
            }
            let mut pts: Vec<Vec<f64>> = (0..size).map(|_| gaussian_point(&mut rng, dim)).collect();
            if kind == BodyKind::SymmetricPolytope {
                let anti: Vec<Vec<f64>> = pts.iter().map(|p| p.iter().map(|x| -x).collect()).collect();
                pts.extend(anti);
            }
            ConvexBody::polytope(extreme_points(pts)?)
        }
        BodyKind::Zonotope => {
            if size == 0 {
                return Err(Error::InvalidArgument("zonotope needs a generator".into()));
            }
            let gens = (0..size)
                .map(|_| {
                    let mut g = gaussian_point(&mut rng, dim);
                    let n = crate::linalg::norm(&g).max(1e-300);
                    let len: f64 = rng.gen_range(0.2..1.0);
                    g.iter_mut().for_each(|x| *x *= len / n);
                    g
                })
                .collect();
            ConvexBody::zonotope(vec![0.0; dim], gens)
        }
        BodyKind::Smooth2D | BodyKind::SymmetricSmooth2D => {
            if dim != 2 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: dim,
                });
            }
            smooth(&mut rng, size, kind == BodyKind::SymmetricSmooth2D)
        }
    }
}

const ORIGIN_ATTEMPTS: u64 = 64;

/// Like [`random_body`], redrawing with derived seeds until the origin is an
/// interior point.
pub fn random_body_with_origin(kind: BodyKind, dim: usize, size: usize, seed: u64) -> Result<ConvexBody> {
    for attempt in 0..ORIGIN_ATTEMPTS {
        let s = seed ^ attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let body = random_body(kind, dim, size, s)?;
        if body.contains_origin_interior()? {
            return Ok(body);
        }
    }
    Err(Error::OriginNotInterior)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic() {
        for kind in [BodyKind::Polytope, BodyKind::Zonotope, BodyKind::SymmetricPolytope] {
            for dim in [2, 3] {
                assert_eq!(
                    random_body(kind, dim, 8, 11).unwrap(),
                    random_body(kind, dim, 8, 11).unwrap()
                );
            }
        }
        assert_eq!(
            random_body(BodyKind::Smooth2D, 2, 6, 3).unwrap(),
            random_body(BodyKind::Smooth2D, 2, 6, 3).unwrap()
        );
    }

    #[test]
    fn symmetric_polytope_is_symmetric() {
        let k = random_body(BodyKind::SymmetricPolytope, 3, 7, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let u = crate::linalg::normalized(&gaussian_point(&mut rng, 3));
            let v: Vec<f64> = u.iter().map(|x| -x).collect();
            assert!((k.support(&u).unwrap() - k.support(&v).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn smooth_bodies_have_positive_curvature() {
        for seed in 0..20 {
            for kind in [BodyKind::Smooth2D, BodyKind::SymmetricSmooth2D] {
                let k = random_body(kind, 2, 8, seed).unwrap();
                for j in 0..2048 {
                    let t = j as f64 * std::f64::consts::TAU / 2048.0;
                    assert!(k.curvature_2d(t).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn precondition() {
        assert!(random_body(BodyKind::Polytope, 3, 3, 0).is_err());
        assert!(random_body(BodyKind::Smooth2D, 3, 4, 0).is_err());
    }
}
