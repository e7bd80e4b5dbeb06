//! Mixed volumes, mixed measures `μ(K;L)`, second mixed measures
//! `μ(A;B,C)` by closed forms and finite differences, and integral
//! identities relating them.

mod fd;
mod identities;
mod second;
pub mod sphere3;

pub use fd::{mixed_measure_fd, mixed_second_fd, pure_second_fd, richardson};
pub use identities::{integral_identity_checks, IdentityReport, IdentityResidual};
pub use second::{ball_mixed_second, gaussian_mixed_second_2d_closed, mixed_second_2d};

use crate::bodies::{ConvexBody, Flat2D};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::measures::WeightedMeasure;
use crate::sphere_quadrature::{angular_integral, build_grid, default_resolution};
use crate::surface_measures::{surface_area_measure, weighted_surface_area_measure};
use serde::{Deserialize, Serialize};

/// Finite-difference oracle settings: steps `step/2^k` for `k < levels`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FDConfig {
    pub step: f64,
    pub levels: usize,
    pub rel_target: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        Self {
            step: 1e-2,
            levels: 3,
            rel_target: 1e-4,
        }
    }
}

impl FDConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "FD step {} must be positive",
                self.step
            )));
        }
        if self.levels < 2 {
            return Err(Error::InvalidArgument("FD needs at least two Richardson levels".into()));
        }
        let smallest = self.step / 2f64.powi(self.levels as i32 - 1);
        if smallest < 1e3 * f64::EPSILON {
            return Err(Error::InvalidArgument(format!(
                "FD step {smallest:e} too small for double precision"
            )));
        }
        if !(self.rel_target > 0.0) {
            return Err(Error::InvalidArgument("FD target must be positive".into()));
        }
        Ok(())
    }

    pub fn steps(&self) -> Vec<f64> {
        (0..self.levels).map(|k| self.step / 2f64.powi(k as i32)).collect()
    }
}

/// Exported result record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedRecord {
    pub quantity: String,
    pub bodies: Vec<ConvexBody>,
    pub measure: String,
    pub method: String,
    pub value: f64,
    pub error_estimate: f64,
}

impl MixedRecord {
    pub fn new(quantity: &str, bodies: &[&ConvexBody], measure: &str, method: &str, est: Estimate) -> Self {
        Self {
            quantity: quantity.to_string(),
            bodies: bodies.iter().map(|b| (*b).clone()).collect(),
            measure: measure.to_string(),
            method: method.to_string(),
            value: est.value,
            error_estimate: est.error,
        }
    }
}

/// `V(K[n-1], L) = (1/n) ∫ h_L dS_K`.
pub fn mixed_volume(k: &ConvexBody, l: &ConvexBody) -> Result<Estimate> {
    check_dim(k.dim(), l.dim())?;
    let s = surface_area_measure(k)?;
    Ok(s.integrate_support(l)?.scale(1.0 / k.dim() as f64))
}

fn require_origin_interior(bodies: &[&ConvexBody]) -> Result<()> {
    for b in bodies {
        if !b.contains_origin_interior()? {
            return Err(Error::OriginNotInterior);
        }
    }
    Ok(())
}

/// `∫_{S^{n-1}} h_B(u) du` with an error estimate; exact in three dimensions.
pub fn sphere_support_integral(body: &ConvexBody) -> Result<Estimate> {
    match body.dim() {
        1 => Ok(Estimate::exact(body.support(&[1.0])? + body.support(&[-1.0])?)),
        2 => {
            let flat = Flat2D::new(body)?;
            angular_integral(|t| flat.support(t), flat.breaks())
        }
        3 => Ok(Estimate::exact(sphere3::sphere_support_integral_3d(body)?)),
        n => {
            let grid = build_grid(n, default_resolution(n), 0)?;
            let fine = grid.integrate(|u| body.support_unchecked(u))?;
            let coarse = build_grid(n, default_resolution(n) / 4, 1)?.integrate(|u| body.support_unchecked(u))?;
            Ok(Estimate::new(fine, (fine - coarse).abs()))
        }
    }
}

/// Radius of `K` if it is a ball centered at the origin.
pub(crate) fn centered_ball_radius(body: &ConvexBody) -> Option<f64> {
    match body.ball_radius_and_rest()? {
        (r, c, None) if r > 0.0 && c.iter().all(|&x| x == 0.0) => Some(r),
        _ => None,
    }
}

/// `μ(K;L) = ∫ h_L dS_{μ,K}` for `K, L` with the origin in their interiors.
pub fn mixed_measure(mu: &WeightedMeasure, k: &ConvexBody, l: &ConvexBody) -> Result<Estimate> {
    check_dim(mu.dim, k.dim())?;
    check_dim(mu.dim, l.dim())?;
    require_origin_interior(&[k, l])?;
    if k.dim() >= 3 && mu.has_radial() {
        if let Some(r) = centered_ball_radius(k) {
            return ball_mixed_measure(mu, r, l);
        }
    }
    weighted_surface_area_measure(mu, k)?.integrate_support(l)
}

/// `μ(R B_2^n; B) = e^{-W(R)} R^{n-1} ∫ h_B du` for rotation invariant `μ`.
pub fn ball_mixed_measure(mu: &WeightedMeasure, r: f64, b: &ConvexBody) -> Result<Estimate> {
    check_dim(mu.dim, b.dim())?;
    if !(r > 0.0) {
        return Err(Error::InvalidArgument(format!("ball radius {r} must be positive")));
    }
    let factor = mu.radial_density(r)? * r.powi(mu.dim as i32 - 1);
    Ok(sphere_support_integral(b)?.scale(factor))
}

/// `μ(A;B,C)` by the best closed route: the ball formula when `A` is a
/// centered ball and `μ` is rotation invariant, the planar measure
/// `S^μ_{A;B}` otherwise.
pub fn mixed_second(mu: &WeightedMeasure, a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    for body in [a, b, c] {
        check_dim(mu.dim, body.dim())?;
    }
    if mu.has_radial() {
        if let Some(r) = centered_ball_radius(a) {
            return ball_mixed_second(mu, r, b, c);
        }
    }
    if mu.dim == 2 {
        return mixed_second_2d(mu, a, b, c);
    }
    Err(Error::Unsupported(format!(
        "second mixed measure in dimension {} needs a centered ball as first body",
        mu.dim
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::normal::gaussian_pdf;
    use std::f64::consts::PI;

    #[test]
    fn mixed_volume_anchors() {
        let d = ConvexBody::centered_ball(2, 1.0).unwrap();
        assert!((mixed_volume(&d, &d).unwrap().value - PI).abs() < 1e-13);
        let s1 = ConvexBody::segment(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let s2 = ConvexBody::segment(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        assert!((mixed_volume(&s1, &s2).unwrap().value - 2.0).abs() < 1e-14);
    }

    #[test]
    fn mixed_measure_anchors() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let disk = ConvexBody::centered_ball(2, 1.0).unwrap();
        for r in [0.5f64, 1.3] {
            let k = ConvexBody::centered_ball(2, r).unwrap();
            let v = mixed_measure(&g, &k, &disk).unwrap().value;
            assert!((v - r * (-0.5 * r * r).exp()).abs() < 1e-14);
            let b = ball_mixed_measure(&g, r, &disk).unwrap().value;
            assert!((v - b).abs() < 1e-14);
        }
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let v = mixed_measure(&g, &disk, &sq).unwrap().value;
        assert!((v - (-0.5f64).exp() * 8.0 / (2.0 * PI)).abs() < 1e-14);
        let g1 = WeightedMeasure::gaussian(1).unwrap();
        let a = 0.7;
        let k = ConvexBody::segment(vec![0.0], vec![a]).unwrap();
        let l = ConvexBody::segment(vec![0.0], vec![1.0]).unwrap();
        assert!((mixed_measure(&g1, &k, &l).unwrap().value - 2.0 * gaussian_pdf(a)).abs() < 1e-16);
    }

    #[test]
    fn ball_segment_3d() {
        let g = WeightedMeasure::gaussian(3).unwrap();
        let seg = ConvexBody::segment(vec![0.0; 3], vec![0.0, 0.0, 1.0]).unwrap();
        let r: f64 = 0.8;
        let want = g.radial_density(r).unwrap() * r * r * 2.0 * PI;
        assert!((ball_mixed_measure(&g, r, &seg).unwrap().value - want).abs() < 1e-15);
    }

    #[test]
    fn origin_hypothesis_enforced() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let off = ConvexBody::ball(vec![3.0, 0.0], 1.0).unwrap();
        let disk = ConvexBody::centered_ball(2, 1.0).unwrap();
        assert!(matches!(mixed_measure(&g, &off, &disk), Err(Error::OriginNotInterior)));
    }

    #[test]
    fn fd_config_validation() {
        assert!(FDConfig::default().validate().is_ok());
        assert!(FDConfig {
            levels: 1,
            ..FDConfig::default()
        }
        .validate()
        .is_err());
        assert!(FDConfig {
            step: 1e-20,
            ..FDConfig::default()
        }
        .validate()
        .is_err());
    }
}
