//! Integral identities linking `μ(K)`, `μ(K;L)` and `μ(A;B,C)` in the plane.

use super::fd::pure_second_fd;
use super::second::mixed_second_2d;
use super::{mixed_measure, FDConfig};
use crate::bodies::ConvexBody;
use crate::error::{check_dim, Result};
use crate::measures::{measure, WeightedMeasure};
use crate::sphere_quadrature::gauss_legendre;
use serde::{Deserialize, Serialize};

const T_NODES: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityResidual {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs − rhs| / max(1, |lhs|, |rhs|)`.
    pub residual: f64,
}

impl IdentityResidual {
    fn new(name: &str, lhs: f64, rhs: f64) -> Self {
        let scale = 1f64.max(lhs.abs()).max(rhs.abs());
        Self {
            name: name.to_string(),
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub measure: String,
    pub residuals: Vec<IdentityResidual>,
}

impl IdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.residual).fold(0.0, f64::max)
    }
}

fn integrate_unit(f: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    gauss_legendre(T_NODES)
        .unit_interval()
        .into_iter()
        .map(|(t, w)| f(t).map(|v| w * v))
        .sum()
}

/// Residuals of
/// - `μ(K) = ∫_0^1 μ(tK;K) dt`,
/// - `μ(A;C) = ∫_0^1 μ(tA;A,C) dt`,
/// - `λ(A;C) = λ(A;A,C)/(n−1)` (Lebesgue only),
/// - `μ(A;C,C) = d²/ds² μ(A + sC)` at `s = 0`.
///
/// `A` must be C²₊; all bodies planar with the origin in their interiors.
pub fn integral_identity_checks(
    mu: &WeightedMeasure,
    k: &ConvexBody,
    a: &ConvexBody,
    c: &ConvexBody,
) -> Result<IdentityReport> {
    check_dim(2, mu.dim)?;
    for b in [k, a, c] {
        check_dim(2, b.dim())?;
    }
    let mut residuals = Vec::new();

    let mk = measure(mu, k)?.value;
    let rhs = integrate_unit(|t| Ok(mixed_measure(mu, &ConvexBody::scale(t, k.clone())?, k)?.value))?;
    residuals.push(IdentityResidual::new("measure_from_mixed", mk, rhs));

    let mac = mixed_measure(mu, a, c)?.value;
    let rhs = integrate_unit(|t| Ok(mixed_second_2d(mu, &ConvexBody::scale(t, a.clone())?, a, c)?.value))?;
    residuals.push(IdentityResidual::new("mixed_from_second", mac, rhs));

    if mu.is_lebesgue() {
        let second = mixed_second_2d(mu, a, a, c)?.value;
        residuals.push(IdentityResidual::new(
            "lebesgue_homogeneity",
            mac,
            second / (mu.dim - 1) as f64,
        ));
    }

    let acc = mixed_second_2d(mu, a, c, c)?.value;
    let fd = pure_second_fd(mu, a, c, &FDConfig::default(), None, 0)?.value;
    residuals.push(IdentityResidual::new("second_derivative", acc, fd));

    Ok(IdentityReport {
        measure: mu.name(),
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_disk_identities() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let d = ConvexBody::centered_ball(2, 1.0).unwrap();
        let rep = integral_identity_checks(&g, &d, &d, &d).unwrap();
        assert!((rep.residuals[0].lhs - (1.0 - (-0.5f64).exp())).abs() < 1e-13);
        assert!(rep.max_residual() < 1e-6, "{rep:?}");
    }

    #[test]
    fn lebesgue_smooth_identities() {
        let lam = WeightedMeasure::lebesgue(2).unwrap();
        let a = ConvexBody::smooth_2d(vec![1.0, 0.1, 0.1], vec![0.0, 0.0, -0.05]).unwrap();
        let c = ConvexBody::cube(2, 0.5).unwrap();
        let rep = integral_identity_checks(&lam, &c, &a, &c).unwrap();
        assert_eq!(rep.residuals.len(), 4);
        assert!(rep.max_residual() < 1e-6, "{rep:?}");
    }
}
