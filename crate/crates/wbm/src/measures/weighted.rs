use crate::error::{check_dim, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

pub type DensityFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;
pub type GradientFn = Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `φ(x) = e^{-W(|x|)}` with its derivative `W′`.
#[derive(Clone)]
pub struct RadialProfile {
    pub w: ScalarFn,
    pub w_prime: ScalarFn,
}

/// User-supplied density.
#[derive(Clone)]
pub struct CustomDensity {
    pub name: String,
    pub density: DensityFn,
    pub gradient: GradientFn,
    pub radial: Option<RadialProfile>,
}

#[derive(Clone)]
pub enum MeasureFamily {
    Lebesgue,
    /// Standard Gaussian `γ_n`.
    Gaussian,
    /// `φ(x) = α e^{-|x|^p/β}`.
    PowerLaw {
        alpha: f64,
        beta: f64,
        p: f64,
    },
    Custom(CustomDensity),
}

/// A measure on `R^n` with density.
#[derive(Clone)]
pub struct WeightedMeasure {
    pub dim: usize,
    pub family: MeasureFamily,
}

impl fmt::Debug for WeightedMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeightedMeasure({}, n={})", self.name(), self.dim)
    }
}

/// Measure as named in configuration files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum MeasureSpec {
    Lebesgue,
    Gaussian,
    Power {
        #[serde(default = "one")]
        alpha: f64,
        #[serde(default = "two")]
        beta: f64,
        #[serde(default = "two")]
        p: f64,
    },
}

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

impl MeasureSpec {
    pub fn build(&self, dim: usize) -> Result<WeightedMeasure> {
        match *self {
            MeasureSpec::Lebesgue => WeightedMeasure::lebesgue(dim),
            MeasureSpec::Gaussian => WeightedMeasure::gaussian(dim),
            MeasureSpec::Power { alpha, beta, p } => WeightedMeasure::power_law(dim, alpha, beta, p),
        }
    }
}

fn check_positive_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::InvalidArgument("dimension must be positive".into()))
    } else {
        Ok(())
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

impl WeightedMeasure {
    pub fn lebesgue(dim: usize) -> Result<Self> {
        check_positive_dim(dim)?;
        Ok(Self {
            dim,
            family: MeasureFamily::Lebesgue,
        })
    }

    pub fn gaussian(dim: usize) -> Result<Self> {
        check_positive_dim(dim)?;
        Ok(Self {
            dim,
            family: MeasureFamily::Gaussian,
        })
    }

    pub fn power_law(dim: usize, alpha: f64, beta: f64, p: f64) -> Result<Self> {
        check_positive_dim(dim)?;
        if !(alpha > 0.0 && beta > 0.0 && p > 0.0) || !(alpha.is_finite() && beta.is_finite() && p.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "power law needs positive parameters, got alpha={alpha} beta={beta} p={p}"
            )));
        }
        Ok(Self {
            dim,
            family: MeasureFamily::PowerLaw { alpha, beta, p },
        })
    }

    pub fn custom(dim: usize, density: CustomDensity) -> Result<Self> {
        check_positive_dim(dim)?;
        Ok(Self {
            dim,
            family: MeasureFamily::Custom(density),
        })
    }

    pub fn name(&self) -> String {
        match &self.family {
            MeasureFamily::Lebesgue => "lebesgue".into(),
            MeasureFamily::Gaussian => "gaussian".into(),
            MeasureFamily::PowerLaw { alpha, beta, p } => format!("power(alpha={alpha},beta={beta},p={p})"),
            MeasureFamily::Custom(c) => c.name.clone(),
        }
    }

    pub fn is_gaussian(&self) -> bool {
        matches!(self.family, MeasureFamily::Gaussian)
    }

    pub fn is_lebesgue(&self) -> bool {
        matches!(self.family, MeasureFamily::Lebesgue)
    }

    pub fn has_radial(&self) -> bool {
        match &self.family {
            MeasureFamily::Custom(c) => c.radial.is_some(),
            _ => true,
        }
    }

    /// Total mass `μ(R^n)` (infinite for Lebesgue and power laws).
    pub fn total_mass(&self) -> f64 {
        match self.family {
            MeasureFamily::Gaussian => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// `φ(x)` without dimension checks.
    pub fn density_unchecked(&self, x: &[f64]) -> f64 {
        match &self.family {
            MeasureFamily::Lebesgue => 1.0,
            MeasureFamily::Gaussian => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (-0.5 * r2).exp() * (2.0 * PI).powf(-0.5 * x.len() as f64)
            }
            MeasureFamily::PowerLaw { alpha, beta, p } => alpha * (-norm(x).powf(*p) / beta).exp(),
            MeasureFamily::Custom(c) => (c.density)(x),
        }
    }

    pub fn density(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim, x.len())?;
        let v = self.density_unchecked(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("density of {}", self.name())))
        }
    }

    /// `∇φ(x)` without dimension checks; zero at the origin for power laws with `p ≤ 1`.
    pub fn gradient_unchecked(&self, x: &[f64]) -> Vec<f64> {
        match &self.family {
            MeasureFamily::Lebesgue => vec![0.0; x.len()],
            MeasureFamily::Gaussian => {
                let phi = self.density_unchecked(x);
                x.iter().map(|v| -v * phi).collect()
            }
            MeasureFamily::PowerLaw { beta, p, .. } => {
                let r = norm(x);
                if r == 0.0 {
                    return vec![0.0; x.len()];
                }
                let factor = -self.density_unchecked(x) * p * r.powf(p - 2.0) / beta;
                x.iter().map(|v| v * factor).collect()
            }
            MeasureFamily::Custom(c) => (c.gradient)(x),
        }
    }

    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_dim(self.dim, x.len())?;
        let g = self.gradient_unchecked(x);
        if g.iter().all(|v| v.is_finite()) {
            Ok(g)
        } else {
            Err(Error::NonFinite(format!("density gradient of {}", self.name())))
        }
    }

    fn missing(&self) -> Error {
        Error::MissingRadialProfile(self.name())
    }

    /// `W(r)` with `φ(x) = e^{-W(|x|)}`; the Gaussian normalization is part of `W`.
    pub fn w(&self, r: f64) -> Result<f64> {
        let n = self.dim as f64;
        match &self.family {
            MeasureFamily::Lebesgue => Ok(0.0),
            MeasureFamily::Gaussian => Ok(0.5 * r * r + 0.5 * n * (2.0 * PI).ln()),
            MeasureFamily::PowerLaw { alpha, beta, p } => Ok(r.powf(*p) / beta - alpha.ln()),
            MeasureFamily::Custom(c) => c.radial.as_ref().map(|rp| (rp.w)(r)).ok_or_else(|| self.missing()),
        }
    }

    pub fn w_prime(&self, r: f64) -> Result<f64> {
        match &self.family {
            MeasureFamily::Lebesgue => Ok(0.0),
            MeasureFamily::Gaussian => Ok(r),
            MeasureFamily::PowerLaw { beta, p, .. } => {
                if r == 0.0 {
                    Ok(if *p == 1.0 { 1.0 / beta } else { 0.0 })
                } else {
                    Ok(p * r.powf(p - 1.0) / beta)
                }
            }
            MeasureFamily::Custom(c) => c
                .radial
                .as_ref()
                .map(|rp| (rp.w_prime)(r))
                .ok_or_else(|| self.missing()),
        }
    }

    /// `e^{-W(r)}`, the density at radius `r`.
    pub fn radial_density(&self, r: f64) -> Result<f64> {
        Ok((-self.w(r)?).exp())
    }

    /// `∫_0^ρ e^{-W(r)} r^{n-1} dr`.
    pub fn radial_mass(&self, rho: f64) -> Result<crate::Estimate> {
        use libm::tgamma as gamma;
        use statrs::function::gamma::gamma_lr;
        if rho <= 0.0 {
            return Ok(crate::Estimate::exact(0.0));
        }
        let n = self.dim as f64;
        let v = match &self.family {
            MeasureFamily::Lebesgue => rho.powf(n) / n,
            MeasureFamily::Gaussian => {
                let a = 0.5 * n;
                2f64.powf(a - 1.0) * gamma(a) * gamma_lr(a, 0.5 * rho * rho) * (2.0 * PI).powf(-a)
            }
            MeasureFamily::PowerLaw { alpha, beta, p } => {
                let a = n / p;
                alpha * beta.powf(a) / p * gamma(a) * gamma_lr(a, rho.powf(*p) / beta)
            }
            MeasureFamily::Custom(_) => {
                self.w(rho)?;
                let dim = self.dim as i32;
                return crate::sphere_quadrature::adaptive_gauss(
                    |r| self.w(r).map_or(f64::NAN, |w| (-w).exp() * r.powi(dim - 1)),
                    0.0,
                    rho,
                    1e-13,
                );
            }
        };
        if v.is_finite() {
            Ok(crate::Estimate::new(v, 1e-14 * v.abs()))
        } else {
            Err(Error::NonFinite("radial mass".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn radial_profiles_match_density() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        for m in [
            WeightedMeasure::gaussian(3).unwrap(),
            WeightedMeasure::lebesgue(3).unwrap(),
            WeightedMeasure::power_law(3, 2.0, 1.5, 1.3).unwrap(),
        ] {
            for _ in 0..50 {
                let x: Vec<f64> = (0..3).map(|_| rng.gen_range(-2.0..2.0)).collect();
                let phi = m.density(&x).unwrap();
                let r = norm(&x);
                assert!((phi - (-m.w(r).unwrap()).exp()).abs() <= 1e-12 * phi);
            }
        }
    }

    #[test]
    fn gaussian_score_identity() {
        let m = WeightedMeasure::gaussian(2).unwrap();
        let x = [0.3, -1.2];
        let g = m.gradient(&x).unwrap();
        let phi = m.density(&x).unwrap();
        assert!((g[0] + 0.3 * phi).abs() < 1e-16 && (g[1] - 1.2 * phi).abs() < 1e-16);
    }

    #[test]
    fn radial_mass_closed_forms() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let r: f64 = 1.3;
        let want = (1.0 - (-0.5 * r * r).exp()) / (2.0 * PI);
        assert!((g.radial_mass(r).unwrap().value - want).abs() < 1e-15);
        // Power law with p = β = 2 and α = (2π)^{-1} is the planar Gaussian.
        let pl = WeightedMeasure::power_law(2, 1.0 / (2.0 * PI), 2.0, 2.0).unwrap();
        assert!((pl.radial_mass(r).unwrap().value - want).abs() < 1e-15);
    }

    #[test]
    fn spec_parsing() {
        let s: MeasureSpec = serde_json::from_str(r#"{"name":"power","alpha":1.0,"beta":2.0,"p":3.0}"#).unwrap();
        assert_eq!(
            s,
            MeasureSpec::Power {
                alpha: 1.0,
                beta: 2.0,
                p: 3.0
            }
        );
        assert!(WeightedMeasure::power_law(2, 1.0, 0.0, 2.0).is_err());
    }
}
