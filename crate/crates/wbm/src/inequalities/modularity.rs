//! Sub- and supermodularity of rotation invariant measures on dilates, and
//! the one-dimensional log-submodularity check.

use super::SlackReport;
use crate::bodies::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::measures::{measure, WeightedMeasure};
use serde::{Deserialize, Serialize};

const PROFILE_SAMPLES: usize = 512;
const DILATE_SAMPLES: usize = 64;

/// Shape of `b(r) = e^{−W(r)} r^{n−1}` on `(0, r_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Modularity {
    /// `b` increasing: `t ↦ μ(tK)` convex, supermodular on dilates.
    Supermodular,
    /// `b` decreasing: `t ↦ μ(tK)` concave, submodular on dilates.
    Submodular,
    /// `b` constant.
    Modular,
    /// `b` changes monotonicity at the turning radius.
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularityReport {
    pub measure: String,
    pub dim: usize,
    pub r_max: f64,
    pub classification: Modularity,
    pub turning_radius: Option<f64>,
    /// `√(n−1)` for the Gaussian.
    pub expected_turning_radius: Option<f64>,
    /// Signs of the second differences of `t ↦ μ(t B_2^n)` match `b′`.
    pub second_differences_agree: bool,
    /// `(t, second difference)` at the sample points.
    pub second_differences: Vec<(f64, f64)>,
}

/// `(log b)′(r) = (n−1)/r − W′(r)`.
fn log_slope(mu: &WeightedMeasure, r: f64) -> Result<f64> {
    Ok((mu.dim as f64 - 1.0) / r - mu.w_prime(r)?)
}

fn bisect(mu: &WeightedMeasure, mut lo: f64, mut hi: f64) -> Result<f64> {
    let s_lo = log_slope(mu, lo)?.signum();
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if log_slope(mu, mid)?.signum() == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn supermodularity_classify(mu: &WeightedMeasure, r_max: f64) -> Result<ModularityReport> {
    if !mu.has_radial() {
        return Err(Error::MissingRadialProfile(mu.name()));
    }
    if !(r_max > 0.0 && r_max.is_finite()) {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    let n = mu.dim;
    let radii: Vec<f64> = (1..=PROFILE_SAMPLES)
        .map(|i| r_max * i as f64 / PROFILE_SAMPLES as f64)
        .collect();
    let slopes: Vec<f64> = radii.iter().map(|&r| log_slope(mu, r)).collect::<Result<_>>()?;
    let tiny = 1e-12;
    let pos = slopes.iter().any(|&s| s > tiny);
    let neg = slopes.iter().any(|&s| s < -tiny);
    let (classification, turning_radius) = match (pos, neg) {
        (false, false) => (Modularity::Modular, None),
        (true, false) => (Modularity::Supermodular, None),
        (false, true) => (Modularity::Submodular, None),
        (true, true) => {
            let i = slopes
                .windows(2)
                .position(|w| w[0].signum() != w[1].signum())
                .unwrap_or(0);
            (Modularity::Mixed, Some(bisect(mu, radii[i], radii[i + 1])?))
        }
    };

    // μ(t B) = |S^{n−1}| ∫_0^t b, so its second derivative has the sign of b′.
    let area = crate::sphere_quadrature::sphere_area(n);
    let ball = |t: f64| mu.radial_mass(t).map(|m| area * m.value);
    let h = r_max / (DILATE_SAMPLES + 1) as f64;
    let mut second_differences = Vec::with_capacity(DILATE_SAMPLES);
    let mut agree = true;
    for i in 1..=DILATE_SAMPLES {
        let t = i as f64 * h;
        let d2 = (ball(t + h)? - 2.0 * ball(t)? + ball(t - h)?) / (h * h);
        second_differences.push((t, d2));
        let near_turn = turning_radius.is_some_and(|tr| (tr - t).abs() < 2.0 * h);
        let slope = log_slope(mu, t)?;
        let scale = ball(t + h)?.abs() * 1e-9 / (h * h);
        if !near_turn && slope.abs() > tiny && d2.abs() > scale && d2.signum() != slope.signum() {
            agree = false;
        }
    }
    Ok(ModularityReport {
        measure: mu.name(),
        dim: n,
        r_max,
        classification,
        turning_radius,
        expected_turning_radius: mu.is_gaussian().then(|| (n as f64 - 1.0).sqrt()),
        second_differences_agree: agree,
        second_differences,
    })
}

/// `[lo, hi]` of a one-dimensional body.
fn interval(body: &ConvexBody) -> Result<(f64, f64)> {
    check_dim(1, body.dim())?;
    Ok((-body.support(&[-1.0])?, body.support(&[1.0])?))
}

/// `μ(A+B)μ(A+C) ≥ μ(A)μ(A+B+C)` for an interval `A` and symmetric
/// intervals `B, C` under a log-concave measure on the line.
pub fn interval_submodularity_check(
    mu: &WeightedMeasure,
    a: &ConvexBody,
    b: &ConvexBody,
    c: &ConvexBody,
) -> Result<SlackReport> {
    check_dim(1, mu.dim)?;
    interval(a)?;
    for body in [b, c] {
        let (lo, hi) = interval(body)?;
        if (lo + hi).abs() > 1e-12 * (1.0 + hi.abs()) {
            return Err(Error::InvalidArgument(format!(
                "B and C must be symmetric intervals, got [{lo}, {hi}]"
            )));
        }
    }
    let ab = a.plus(b)?;
    let ac = a.plus(c)?;
    let abc = ConvexBody::sum(vec![a.clone(), b.clone(), c.clone()])?;
    let lhs = measure(mu, &ab)? * measure(mu, &ac)?;
    let rhs = measure(mu, a)? * measure(mu, &abc)?;
    Ok(SlackReport::from_sides("interval_submodularity", lhs, rhs).with_input("measure", mu.name()))
}
