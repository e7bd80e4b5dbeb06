//! Closed-form routes to the second mixed measure `μ(A;B,C)`.

use super::sphere3::{ball_mixed_area_integral_3d, sphere_product_integral_3d};
use crate::bodies::{ConvexBody, Flat2D};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::linalg::{dot, norm};
use crate::measures::WeightedMeasure;
use crate::sphere_quadrature::{angular_integral, build_grid, default_resolution, TWO_PI};
use crate::surface_measures::{surface_area_measure, weighted_mixed_surface_measure_2d};

/// `μ(A;B,C) = ∫ h_C dS^μ_{A;B}` in the plane, `A` of class C²₊.
pub fn mixed_second_2d(mu: &WeightedMeasure, a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    check_dim(2, c.dim())?;
    weighted_mixed_surface_measure_2d(mu, a, b)?.integrate_support(c)
}

/// The Gaussian second mixed measure in its symmetric form
/// `∫ e^{-(h_A'² + h_A²)/2} [h_B h_C (1 − h_A f_A) − h_B' h_C'] dθ/2π`.
/// `B` and `C` may be polygonal: their one-sided derivatives are only
/// needed away from the kinks, which are quadrature breakpoints.
pub fn gaussian_mixed_second_2d_closed(a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    for body in [a, b, c] {
        check_dim(2, body.dim())?;
    }
    let fa = Flat2D::new(a)?;
    if !fa.is_c2_plus() {
        return Err(Error::NotSmooth(
            "first body must be C2+ with positive curvature".into(),
        ));
    }
    let fb = Flat2D::new(b)?;
    let fc = Flat2D::new(c)?;
    let mut breaks = fb.breaks().to_vec();
    breaks.extend_from_slice(fc.breaks());
    let est = angular_integral(
        |t| {
            let (ha, dha) = (fa.support(t), fa.dsupport(t));
            let weight = (-0.5 * (dha * dha + ha * ha)).exp();
            let (hb, hc) = (fb.support(t), fc.support(t));
            weight * (hb * hc * (1.0 - ha * fa.smooth_curvature(t)) - fb.dsupport(t) * fc.dsupport(t))
        },
        &breaks,
    )?;
    Ok(est.scale(1.0 / TWO_PI))
}

/// `∫ h_B h_C du` over the circle.
fn circle_product_integral(b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let fb = Flat2D::new(b)?;
    let fc = Flat2D::new(c)?;
    let mut breaks = fb.breaks().to_vec();
    breaks.extend_from_slice(fc.breaks());
    angular_integral(|t| fb.support(t) * fc.support(t), &breaks)
}

/// `μ(R B_2^n; B, C)` for rotation invariant `μ`:
/// `e^{-W(R)} [(n−1) R^{n−2} ∫ h_C dS_{B_2^n[n−2], B} − R^{n−1} W'(R) ∫ h_B h_C du]`.
/// The mixed area term is available for any `B` in the plane and in three
/// dimensions, and for zonotopal `B` (possibly plus balls) beyond.
pub fn ball_mixed_second(mu: &WeightedMeasure, r: f64, b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let n = mu.dim;
    check_dim(n, b.dim())?;
    check_dim(n, c.dim())?;
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidArgument(format!("ball radius {r} must be positive")));
    }
    let density = mu.radial_density(r)?;
    let wp = mu.w_prime(r)?;
    let (area, product) = match n {
        1 => {
            // S_{B[0]} on the 0-sphere is counting measure; h_B, h_C at ±1.
            let pts = [[1.0], [-1.0]];
            let p: f64 = pts
                .iter()
                .map(|u| b.support_unchecked(u) * c.support_unchecked(u))
                .sum();
            (Estimate::exact(0.0), Estimate::exact(p))
        }
        2 => {
            let area = surface_area_measure(b)?.integrate_support(c)?;
            (area, circle_product_integral(b, c)?)
        }
        3 => (
            ball_mixed_area_integral_3d(b, c)?,
            sphere_product_integral_3d(b, c, 256)?,
        ),
        _ => (mixed_area_high_dim(b, c)?, product_high_dim(b, c)?),
    };
    let rn2 = r.powi(n as i32 - 2);
    let first = area.scale((n - 1) as f64 * rn2);
    let second = product.scale(rn2 * r * wp);
    Ok((first - second).scale(density))
}

fn product_high_dim(b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let n = b.dim();
    let f = |u: &[f64]| b.support_unchecked(u) * c.support_unchecked(u);
    let fine = build_grid(n, default_resolution(n), 0)?.integrate(f)?;
    let coarse = build_grid(n, default_resolution(n) / 4, 1)?.integrate(f)?;
    Ok(Estimate::new(fine, (fine - coarse).abs()))
}

/// Orthonormal basis of `g^⊥` by Gram–Schmidt on the coordinate axes.
fn complement_basis(g: &[f64]) -> Vec<Vec<f64>> {
    let n = g.len();
    let gl = norm(g);
    let mut basis: Vec<Vec<f64>> = vec![g.iter().map(|x| x / gl).collect()];
    for i in 0..n {
        let mut v = vec![0.0; n];
        v[i] = 1.0;
        for b in &basis {
            let d = dot(&v, b);
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= d * y);
        }
        let m = norm(&v);
        if m > 0.5 {
            basis.push(v.iter().map(|x| x / m).collect());
        }
        if basis.len() == n {
            break;
        }
    }
    basis.remove(0);
    basis
}

/// `∫ h_C dS_{B_2^n[n−2], B}` for `B` a tree of segments, zonotopes and balls.
fn mixed_area_high_dim(b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let n = b.dim();
    let segment = |g: &[f64]| -> Result<Estimate> {
        let len = norm(g);
        if len == 0.0 {
            return Ok(Estimate::exact(0.0));
        }
        let basis = complement_basis(g);
        let lift = |v: &[f64]| -> Vec<f64> {
            let mut x = vec![0.0; n];
            for (vi, e) in v.iter().zip(&basis) {
                x.iter_mut().zip(e).for_each(|(a, b)| *a += vi * b);
            }
            x
        };
        let f = |v: &[f64]| c.support_unchecked(&lift(v));
        let fine = build_grid(n - 1, default_resolution(n - 1), 0)?.integrate(f)?;
        let coarse = build_grid(n - 1, (default_resolution(n - 1) / 4).max(4), 1)?.integrate(f)?;
        let k = 2.0 * len / (n - 1) as f64;
        Ok(Estimate::new(k * fine, k * (fine - coarse).abs()))
    };
    match b {
        ConvexBody::Ball { radius, .. } => {
            let f = |u: &[f64]| c.support_unchecked(u);
            let fine = build_grid(n, default_resolution(n), 0)?.integrate(f)?;
            Ok(Estimate::new(radius * fine, 1e-6 * radius * fine.abs()))
        }
        ConvexBody::Segment { direction, .. } => segment(direction),
        ConvexBody::Zonotope { generators, .. } => {
            let mut acc = Estimate::exact(0.0);
            for g in generators {
                acc = acc + segment(g)?;
            }
            Ok(acc)
        }
        ConvexBody::Sum { children } => {
            let mut acc = Estimate::exact(0.0);
            for ch in children {
                acc = acc + mixed_area_high_dim(ch, c)?;
            }
            Ok(acc)
        }
        ConvexBody::Scale { factor, child } => Ok(mixed_area_high_dim(child, c)?.scale(*factor)),
        _ => Err(Error::Unsupported(format!(
            "mixed area term in dimension {n} needs a zonotopal second body"
        ))),
    }
}


#[cfg(test)]
mod fd_agreement {
    use super::*;
    use crate::mixed::{mixed_second_fd, FDConfig};

    #[test]
    fn gaussian_ball_3d_matches_fd() {
        let g = WeightedMeasure::gaussian(3).unwrap();
        let a = ConvexBody::centered_ball(3, 1.2).unwrap();
        let b = ConvexBody::zonotope(vec![0.0; 3], vec![vec![0.4, 0.1, 0.0], vec![0.0, 0.3, 0.2]]).unwrap();
        let c = ConvexBody::polytope(vec![
            vec![0.5, 0.0, 0.0],
            vec![-0.2, 0.4, 0.0],
            vec![-0.2, -0.4, 0.1],
            vec![0.0, 0.1, 0.6],
        ])
        .unwrap();
        let closed = ball_mixed_second(&g, 1.2, &b, &c).unwrap();
        let fd = mixed_second_fd(&g, &a, &b, &c, &FDConfig::default(), None, 0).unwrap();
        assert!(
            (closed.value - fd.value).abs() < 1e-3 * closed.value.abs().max(fd.error),
            "{closed:?} {fd:?}"
        );
    }
}
