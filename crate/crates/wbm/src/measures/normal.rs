//! Standard normal distribution function and its inverse.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Density of the one-dimensional standard Gaussian.
pub fn gaussian_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// `Φ(x) = γ_1((-∞, x))`, via the complementary error function.
pub fn gaussian_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// `1 - Φ(x)` without cancellation for large `x`.
pub fn gaussian_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `γ_1([a, b])`, evaluated on the tail that avoids cancellation.
pub fn gaussian_interval(a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    if a >= 0.0 {
        gaussian_sf(a) - gaussian_sf(b)
    } else if b <= 0.0 {
        gaussian_cdf(b) - gaussian_cdf(a)
    } else {
        1.0 - gaussian_cdf(a) - gaussian_sf(b)
    }
}

// Acklam's rational approximation, relative error about 1e-9.
const A: [f64; 6] = [
    -3.969_683_028_665_376e1,
    2.209_460_984_245_205e2,
    -2.759_285_104_469_687e2,
    1.383_577_518_672_69e2,
    -3.066_479_806_614_716e1,
    2.506_628_277_459_239,
];
const B: [f64; 5] = [
    -5.447_609_879_822_406e1,
    1.615_858_368_580_409e2,
    -1.556_989_798_598_866e2,
    6.680_131_188_771_972e1,
    -1.328_068_155_288_572e1,
];
const C: [f64; 6] = [
    -7.784_894_002_430_293e-3,
    -3.223_964_580_411_365e-1,
    -2.400_758_277_161_838,
    -2.549_732_539_343_734,
    4.374_664_141_464_968,
    2.938_163_982_698_783,
];
const D: [f64; 4] = [
    7.784_695_709_041_462e-3,
    3.224_671_290_700_398e-1,
    2.445_134_137_142_996,
    3.754_408_661_907_416,
];

fn acklam(p: f64) -> f64 {
    const LOW: f64 = 0.024_25;
    if p < LOW {
        let q = (-2.0 * p.ln()).sqrt();
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if p <= 1.0 - LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -acklam(1.0 - p)
    }
}

/// `Φ^{-1}(p)` for `p ∈ (0, 1)`: rational start, two Newton steps.
pub fn gaussian_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "normal quantile needs p in (0, 1), got {p}"
        )));
    }
    let mut x = acklam(p);
    for _ in 0..2 {
        let pdf = gaussian_pdf(x);
        if pdf == 0.0 {
            break;
        }
        // Work on the smaller tail so the residual keeps its digits.
        let resid = if x > 0.0 {
            (1.0 - p) - gaussian_sf(x)
        } else {
            gaussian_cdf(x) - p
        };
        x -= resid / pdf;
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_anchors() {
        assert_eq!(gaussian_cdf(0.0), 0.5);
        assert!((gaussian_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert!((gaussian_cdf(-1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
    }

    #[test]
    fn quantile_inverts_cdf() {
        let x = gaussian_quantile(gaussian_cdf(1.7)).unwrap();
        assert!((x - 1.7).abs() < 1e-12);
        let mut p = 1e-8;
        while p < 1.0 - 1e-8 {
            let q = gaussian_quantile(p).unwrap();
            assert!((gaussian_cdf(q) - p).abs() <= 1e-13, "p={p}");
            p += 0.0137;
        }
        for p in [1e-8, 1e-6, 0.02, 0.5, 0.98, 1.0 - 1e-6, 1.0 - 1e-8] {
            let q = gaussian_quantile(p).unwrap();
            assert!((gaussian_cdf(q) - p).abs() <= 1e-13 * p.max(1e-3), "p={p}");
        }
    }

    #[test]
    fn quantile_rejects_endpoints() {
        assert!(gaussian_quantile(0.0).is_err());
        assert!(gaussian_quantile(1.0).is_err());
        assert!(gaussian_quantile(f64::NAN).is_err());
    }

    #[test]
    fn interval_mass() {
        let v = gaussian_interval(-1.0, 1.0);
        assert!((v - (2.0 * gaussian_cdf(1.0) - 1.0)).abs() < 1e-15);
        assert!(gaussian_interval(8.0, 9.0) > 0.0);
    }
}
