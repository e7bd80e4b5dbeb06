//! Scalar facts behind the zonoid constants, the homogeneous Gaussian
//! integral identity and Ball's bound on Gaussian surface area.

use super::SlackReport;
use crate::bodies::{ConvexBody, Flat2D};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::linalg::{dot, dot3, norm};
use crate::measures::{radial_profile_integral, WeightedMeasure};
use crate::mixed::sphere3::{great_circle_support_integral, project_body};
use crate::sphere_quadrature::{
    angular_integral, build_grid, gamma, gauss_legendre, orthonormal_complement, unit_ball_volume, TWO_PI,
};
use crate::surface_measures::weighted_surface_area;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// `κ²_{n−1}/(κ_{n−2}κ_n)` with `κ_0 = 1`.
pub fn kappa_ratio(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("kappa ratio needs n >= 2, got {n}")));
    }
    let k1 = unit_ball_volume(n - 1);
    Ok(k1 * k1 / (unit_ball_volume(n - 2) * unit_ball_volume(n)))
}

/// `(e^{(2n+1)/(2(n+1)²)}, (n+2)/(n+1))`; the first never exceeds the second.
pub fn sharpness_ordering(n: usize) -> (f64, f64) {
    let x = n as f64;
    (
        ((2.0 * x + 1.0) / (2.0 * (x + 1.0) * (x + 1.0))).exp(),
        (x + 2.0) / (x + 1.0),
    )
}

fn check_power_parameters(n: usize, beta: f64, p: f64) -> Result<()> {
    if n == 0 || !(beta > 0.0) || !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1, beta > 0, p >= 1; got n={n} beta={beta} p={p}"
        )));
    }
    Ok(())
}

/// `n∫_0^1 e^{R^p(1−r^p)/β} r^{n−1} dr ≤ 1 + pR^p/(pβ + βn − pR^p)` for
/// `R^p < β + βn/p`.
pub fn gaussian_integral_bound(n: usize, beta: f64, p: f64, r: f64) -> Result<SlackReport> {
    check_power_parameters(n, beta, p)?;
    let rp = r.powf(p);
    let nf = n as f64;
    if !(rp < beta + beta * nf / p) {
        return Err(Error::InvalidArgument(format!(
            "R^p = {rp} outside (0, beta + beta n/p)"
        )));
    }
    let j = radial_profile_integral(&WeightedMeasure::power_law(n, 1.0, beta, p)?, r)?;
    let bound = 1.0 + p * rp / (p * beta + beta * nf - p * rp);
    Ok(
        SlackReport::from_sides("gaussian_integral_bound", Estimate::exact(bound), j)
            .with_input("n", n)
            .with_input("beta", beta)
            .with_input("p", p)
            .with_input("radius", r),
    )
}

/// `n∫_0^1 e^{(1−r^p)/β} r^{n−1} dr ≤ e^{(1−(n/(n+1))^p)/β}` for
/// `β ≥ 1 + 1/(p−1)`.
pub fn jensen_integral_bound(n: usize, beta: f64, p: f64) -> Result<SlackReport> {
    check_power_parameters(n, beta, p)?;
    if !(p > 1.0 && beta >= 1.0 + 1.0 / (p - 1.0)) {
        return Err(Error::InvalidArgument(
            "Jensen bound needs p > 1 and beta >= 1 + 1/(p-1)".into(),
        ));
    }
    let nf = n as f64;
    let j = radial_profile_integral(&WeightedMeasure::power_law(n, 1.0, beta, p)?, 1.0)?;
    let bound = ((1.0 - (nf / (nf + 1.0)).powf(p)) / beta).exp();
    Ok(
        SlackReport::from_sides("jensen_integral_bound", Estimate::exact(bound), j)
            .with_input("n", n)
            .with_input("beta", beta)
            .with_input("p", p),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomResidual {
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(1, |lhs|, |rhs|)`.
    pub residual: f64,
}

impl HomResidual {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / 1f64.max(lhs.abs()).max(rhs.abs()),
        }
    }
}

const RADIAL_CUTOFF: f64 = 14.0;
const RADIAL_PIECES: usize = 7;
const RADIAL_NODES: usize = 40;
const CIRCLE_NODES: usize = 4096;

fn direction_rule(n: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    match n {
        1 => Ok((vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0])),
        2 => {
            let h = TWO_PI / CIRCLE_NODES as f64;
            let nodes = (0..CIRCLE_NODES)
                .map(|i| {
                    let t = (i as f64 + 0.5) * h;
                    vec![t.cos(), t.sin()]
                })
                .collect();
            Ok((nodes, vec![h; CIRCLE_NODES]))
        }
        _ => {
            let g = build_grid(n, crate::sphere_quadrature::default_resolution(n), 0)?;
            Ok((g.nodes, g.weights))
        }
    }
}

/// Compares `∫ f dγ_n`, computed by radial quadrature of `f(r u)`, with
/// `2^{(k−2)/2} Γ((n+k)/2) / π^{n/2} · ∫_{S^{n−1}} f` for `k`-homogeneous `f`.
/// Both sides share the direction rule, so the residual measures the
/// identity and the radial quadrature.
pub fn hom_integral_identity_check(k: f64, n: usize, f: impl Fn(&[f64]) -> f64) -> Result<HomResidual> {
    if n == 0 || !(k > -(n as f64)) {
        return Err(Error::InvalidArgument(format!(
            "need n >= 1 and k > -n, got k={k} n={n}"
        )));
    }
    let (dirs, weights) = direction_rule(n)?;
    let gl = gauss_legendre(RADIAL_NODES);
    let h = RADIAL_CUTOFF / RADIAL_PIECES as f64;
    let radial: Vec<(f64, f64)> = (0..RADIAL_PIECES)
        .flat_map(|i| gl.interval(i as f64 * h, (i + 1) as f64 * h))
        .collect();
    let norm_const = (TWO_PI).powf(-0.5 * n as f64);
    let mut lhs = 0.0;
    let mut sphere = 0.0;
    let mut x = vec![0.0; n];
    for (u, w) in dirs.iter().zip(&weights) {
        let mut line = 0.0;
        for &(r, wr) in &radial {
            x.iter_mut().zip(u).for_each(|(xi, ui)| *xi = r * ui);
            line += wr * f(&x) * (-0.5 * r * r).exp() * r.powi(n as i32 - 1);
        }
        lhs += w * line * norm_const;
        sphere += w * f(u);
    }
    let c = 2f64.powf(0.5 * (k - 2.0)) * gamma(0.5 * (n as f64 + k)) / PI.powf(0.5 * n as f64);
    let (lhs, rhs) = (lhs, c * sphere);
    if !(lhs.is_finite() && rhs.is_finite()) {
        return Err(Error::NonFinite("homogeneous integral".into()));
    }
    Ok(HomResidual::new(lhs, rhs))
}

/// Compares `∫_{S^{n−1}} |⟨u,θ⟩| h_C(u) du` with `(2/n) ∫_{S^{n−1} ∩ θ^⊥} h_C`
/// for `C ⊂ θ^⊥`, `n ∈ {2, 3}`.
pub fn great_circle_reduction_check(c: &ConvexBody, theta: &[f64]) -> Result<HomResidual> {
    let n = c.dim();
    check_dim(n, theta.len())?;
    let tn = norm(theta);
    if !(tn > 0.0) {
        return Err(Error::InvalidArgument("theta must be nonzero".into()));
    }
    let th: Vec<f64> = theta.iter().map(|x| x / tn).collect();
    let neg: Vec<f64> = th.iter().map(|x| -x).collect();
    let tol = 1e-12 * (1.0 + c.bounding_half_width());
    if c.support(&th)?.abs() > tol || c.support(&neg)?.abs() > tol {
        return Err(Error::InvalidArgument(
            "C must lie in the hyperplane orthogonal to theta".into(),
        ));
    }
    match n {
        2 => {
            let rot = [-th[1], th[0]];
            let rhs = c.support(&rot)? + c.support(&[-rot[0], -rot[1]])?;
            let base = th[1].atan2(th[0]);
            let breaks = [base, base + FRAC_PI_2, base + PI, base + 3.0 * FRAC_PI_2];
            let lhs = angular_integral(
                |t| {
                    let u = [t.cos(), t.sin()];
                    dot(&u, &th).abs() * c.support_unchecked(&u)
                },
                &breaks,
            )?;
            Ok(HomResidual::new(lhs.value, rhs))
        }
        3 => {
            let t3 = [th[0], th[1], th[2]];
            let rhs = great_circle_support_integral(c, t3)?.value * 2.0 / 3.0;
            let (e1, e2) = orthonormal_complement(t3);
            let flat = Flat2D::new(&project_body(c, e1, e2)?)?;
            // u = cos ϑ θ + sin ϑ (cos φ e1 + sin φ e2); the integrand is
            // smooth in ϑ away from the equator.
            let gl = gauss_legendre(48);
            let polar: f64 = [(0.0, FRAC_PI_2), (FRAC_PI_2, PI)]
                .iter()
                .flat_map(|&(a, b)| gl.interval(a, b))
                .map(|(t, w)| {
                    let (s, co) = t.sin_cos();
                    let u = |phi: f64| {
                        let (sp, cp) = phi.sin_cos();
                        [
                            co * t3[0] + s * (cp * e1[0] + sp * e2[0]),
                            co * t3[1] + s * (cp * e1[1] + sp * e2[1]),
                            co * t3[2] + s * (cp * e1[2] + sp * e2[2]),
                        ]
                    };
                    let ring = angular_integral(
                        |phi| {
                            let v = u(phi);
                            dot3(v, t3).abs() * c.support_unchecked(&v)
                        },
                        flat.breaks(),
                    )
                    .map_or(f64::NAN, |e| e.value);
                    w * s * ring
                })
                .sum();
            Ok(HomResidual::new(polar, rhs))
        }
        _ => Err(Error::Unsupported(format!(
            "great-circle reduction implemented for n = 2, 3, got {n}"
        ))),
    }
}

/// `4 n^{1/4} ≥ γ_n⁺(∂K)`.
pub fn ball_bound_check(k: &ConvexBody) -> Result<SlackReport> {
    let n = k.dim();
    let g = WeightedMeasure::gaussian(n)?;
    let surface = weighted_surface_area(&g, k)?;
    Ok(
        SlackReport::from_sides("ball_bound", Estimate::exact(4.0 * (n as f64).powf(0.25)), surface)
            .with_input("dim", n),
    )
}
