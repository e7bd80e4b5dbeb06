//! Quadrature on the unit sphere `S^{n-1}` and on the circle.
//!
//! [`SphereGrid`] is a fixed node/weight rule used wherever a density is
//! sampled on the sphere. In the plane most integrals instead go through
//! [`angular_integral`], a composite Gauss-Legendre rule that splits the
//! circle at caller-supplied breakpoints (the edge normals of polygons, where
//! support functions have kinks and atoms sit).

mod gauss;
mod grid;

pub use gauss::{adaptive_gauss, gauss_legendre, GaussLegendre};
pub use grid::{build_grid, integrate, GridKind, SphereGrid};

use crate::error::{Error, Result};
use crate::estimate::Estimate;
use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// Default node counts per dimension.
pub const DEFAULT_RESOLUTION_2D: usize = 2048;
pub const DEFAULT_RESOLUTION_3D: usize = 64;
pub const DEFAULT_RESOLUTION_ND: usize = 200_000;

/// Default grid resolution for dimension `dim`.
pub fn default_resolution(dim: usize) -> usize {
    match dim {
        0..=2 => DEFAULT_RESOLUTION_2D,
        3 => DEFAULT_RESOLUTION_3D,
        _ => DEFAULT_RESOLUTION_ND,
    }
}

/// `Γ(x)` for real `x > 0`.
pub fn gamma(x: f64) -> f64 {
    libm::tgamma(x)
}

/// `ln Γ(x)` for real `x > 0`.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Volume `κ_n` of the unit ball in `R^n`; `κ_0 = 1`.
pub fn unit_ball_volume(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    (h * PI.ln() - ln_gamma(h + 1.0)).exp()
}

/// Surface area `n κ_n` of `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TWO_PI);
    if t >= TWO_PI {
        0.0
    } else {
        t
    }
}

/// Sorted, deduplicated breakpoints in `[0, 2π)`.
pub fn normalize_breaks(breaks: &[f64]) -> Vec<f64> {
    let mut b: Vec<f64> = breaks.iter().map(|&t| wrap_angle(t)).collect();
    b.sort_by(|x, y| x.partial_cmp(y).expect("breakpoints are finite"));
    let mut out: Vec<f64> = Vec::with_capacity(b.len());
    for t in b {
        if out.last().is_none_or(|&l| t - l > 1e-13) {
            out.push(t);
        }
    }
    if out.len() > 1 && out[0] + TWO_PI - out[out.len() - 1] <= 1e-13 {
        out.pop();
    }
    out
}

/// Angular sub-intervals covering one turn, cut at the given breakpoints.
pub fn angular_pieces(breaks: &[f64]) -> Vec<(f64, f64)> {
    let b = normalize_breaks(breaks);
    match b.len() {
        0 => vec![(0.0, TWO_PI)],
        1 => vec![(b[0], b[0] + TWO_PI)],
        m => (0..m)
            .map(|i| {
                let hi = if i + 1 < m { b[i + 1] } else { b[0] + TWO_PI };
                (b[i], hi)
            })
            .collect(),
    }
}

const ANGULAR_ORDER: usize = 16;
const ANGULAR_START_PANELS: usize = 32;
const ANGULAR_MAX_PANELS: usize = 8192;

fn angular_sum(f: &dyn Fn(f64) -> f64, pieces: &[(f64, f64)], panels: usize) -> (f64, f64) {
    let gl = gauss_legendre(ANGULAR_ORDER);
    let mut total = 0.0;
    let mut total_abs = 0.0;
    for &(a, b) in pieces {
        let k = (((b - a) / TWO_PI) * panels as f64).ceil().max(1.0) as usize;
        let h = (b - a) / k as f64;
        for p in 0..k {
            let lo = a + p as f64 * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let v = f(lo + 0.5 * h * (x + 1.0)) * w * 0.5 * h;
                total += v;
                total_abs += v.abs();
            }
        }
    }
    (total, total_abs)
}

/// `∫_0^{2π} f(θ) dθ` for `f` smooth between the breakpoints.
///
/// Panels are doubled until two successive composite Gauss-Legendre sums
/// agree to roughly machine precision; the last difference is the error.
pub fn angular_integral(f: impl Fn(f64) -> f64, breaks: &[f64]) -> Result<Estimate> {
    let pieces = angular_pieces(breaks);
    let mut panels = ANGULAR_START_PANELS;
    let (mut prev, _) = angular_sum(&f, &pieces, panels);
    if !prev.is_finite() {
        return Err(Error::NonFinite("angular integrand".into()));
    }
    loop {
        panels *= 2;
        let (cur, abs) = angular_sum(&f, &pieces, panels);
        if !cur.is_finite() {
            return Err(Error::NonFinite("angular integrand".into()));
        }
        let diff = (cur - prev).abs();
        let floor = 1e-15 * abs;
        if diff <= 1e-14 * abs + 1e-300 || panels >= ANGULAR_MAX_PANELS {
            return Ok(Estimate::new(cur, diff.max(floor)));
        }
        prev = cur;
    }
}

/// Orthonormal pair spanning the plane orthogonal to a nonzero `theta` in `R^3`.
pub fn orthonormal_complement(theta: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let n = (theta[0] * theta[0] + theta[1] * theta[1] + theta[2] * theta[2]).sqrt();
    let t = [theta[0] / n, theta[1] / n, theta[2] / n];
    let seed = if t[0].abs() < 0.6 {
        [1.0, 0.0, 0.0]
    } else if t[1].abs() < 0.6 {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = seed[0] * t[0] + seed[1] * t[1] + seed[2] * t[2];
    let mut e1 = [seed[0] - d * t[0], seed[1] - d * t[1], seed[2] - d * t[2]];
    let m = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / m, e1[1] / m, e1[2] / m];
    let e2 = [
        t[1] * e1[2] - t[2] * e1[1],
        t[2] * e1[0] - t[0] * e1[2],
        t[0] * e1[1] - t[1] * e1[0],
    ];
    (e1, e2)
}

/// `∫_{S^2 ∩ θ^⊥} f` by the periodic trapezoid rule with `m` nodes.
pub fn great_circle_integral(theta: [f64; 3], m: usize, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    if m < 4 {
        return Err(Error::InvalidArgument("great circle needs at least 4 nodes".into()));
    }
    let (e1, e2) = orthonormal_complement(theta);
    let h = TWO_PI / m as f64;
    let mut sum = 0.0;
    for j in 0..m {
        let (s, c) = (j as f64 * h).sin_cos();
        let u = [c * e1[0] + s * e2[0], c * e1[1] + s * e2[1], c * e1[2] + s * e2[2]];
        let v = f(&u);
        if !v.is_finite() {
            return Err(Error::NonFinite("great-circle integrand".into()));
        }
        sum += v;
    }
    Ok(sum * h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_volumes() {
        assert!((unit_ball_volume(0) - 1.0).abs() < 1e-15);
        assert!((unit_ball_volume(1) - 2.0).abs() < 1e-14);
        assert!((unit_ball_volume(2) - PI).abs() < 1e-14);
        assert!((unit_ball_volume(3) - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn gamma_matches_factorials() {
        assert!((gamma(5.0) - 24.0).abs() < 1e-12);
        assert!((gamma(0.5) - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn angular_integral_of_abs_cos_with_breaks() {
        let b = [PI / 2.0, 3.0 * PI / 2.0];
        let r = angular_integral(|t| t.cos().abs(), &b).unwrap();
        assert!((r.value - 4.0).abs() < 1e-13, "{}", r.value);
    }

    #[test]
    fn angular_integral_of_trig_polynomial() {
        let r = angular_integral(|t| (3.0 * t).cos().powi(2) + 1.0, &[]).unwrap();
        assert!((r.value - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn pieces_wrap_around() {
        let p = angular_pieces(&[1.0, 7.0, -1.0]);
        assert_eq!(p.len(), 3);
        let total: f64 = p.iter().map(|(a, b)| b - a).sum();
        assert!((total - TWO_PI).abs() < 1e-14);
    }

    #[test]
    fn great_circle_of_constant() {
        let v = great_circle_integral([0.3, -0.2, 0.9], 64, |_| 1.0).unwrap();
        assert!((v - TWO_PI).abs() < 1e-13);
    }
}
