//! Measures with density, body measures `μ(K)`, the radial integral `J(R)`
//! and concavity profiles.

mod body;
pub mod normal;
mod profile;
mod weighted;

pub use body::{measure, measure_of_body, region_integral_2d, MeasureMethod};
pub use profile::{profile_factory, ConcavityProfile, CustomProfile, ProfileChoice, ProfileKind};
pub use weighted::{
    CustomDensity, DensityFn, GradientFn, MeasureFamily, MeasureSpec, RadialProfile, ScalarFn, WeightedMeasure,
};

use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::sphere_quadrature::adaptive_gauss;

/// `J(R) = n ∫_0^1 e^{W(R) - W(Rt)} t^{n-1} dt`.
pub fn radial_profile_integral(mu: &WeightedMeasure, r: f64) -> Result<Estimate> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidArgument(format!("radius must be positive, got {r}")));
    }
    let wr = mu.w(r)?;
    if mu.is_lebesgue() {
        return Ok(Estimate::exact(1.0));
    }
    let n = mu.dim as i32;
    let est = adaptive_gauss(
        |t| mu.w(r * t).map_or(f64::NAN, |w| (wr - w).exp() * t.powi(n - 1)),
        0.0,
        1.0,
        1e-11,
    )?;
    Ok(est.scale(mu.dim as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn j_closed_forms() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let j = radial_profile_integral(&g, 1.0).unwrap();
        assert!((j.value - 2.0 * (0.5f64.exp() - 1.0)).abs() < 1e-12);
        assert!(j.value <= 4.0 / 3.0);
        let l = WeightedMeasure::lebesgue(3).unwrap();
        assert_eq!(radial_profile_integral(&l, 5.0).unwrap().value, 1.0);
        for m in [g, WeightedMeasure::power_law(3, 1.0, 2.0, 1.0).unwrap()] {
            assert!((radial_profile_integral(&m, 1e-4).unwrap().value - 1.0).abs() < 1e-3);
        }
    }
}
