use super::normal::{gaussian_cdf, gaussian_pdf, gaussian_quantile};
use super::WeightedMeasure;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type Scalar = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct CustomProfile {
    pub name: String,
    pub f: Scalar,
    pub f_prime: Scalar,
    pub f_second: Scalar,
    pub inverse: Option<Scalar>,
}

#[derive(Clone)]
pub enum ProfileKind {
    Log,
    /// `x ↦ x^s`.
    Power(f64),
    /// `Φ^{-1}`, Gaussian measures only.
    Ehrhard,
    Custom(CustomProfile),
}

/// Monotone `F` of the `F`-concavity inequality, with two derivatives.
#[derive(Clone)]
pub struct ConcavityProfile {
    pub kind: ProfileKind,
    /// Upper end of the domain `(0, sup)`.
    pub sup: f64,
}

impl fmt::Debug for ConcavityProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConcavityProfile({})", self.name())
    }
}

/// Profile family as selected in configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileChoice {
    Log,
    /// Exponent `1/n`.
    Power,
    Ehrhard,
}

pub fn profile_factory(choice: ProfileChoice, mu: &WeightedMeasure, n: usize) -> Result<ConcavityProfile> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let sup = mu.total_mass();
    let kind = match choice {
        ProfileChoice::Log => ProfileKind::Log,
        ProfileChoice::Power => ProfileKind::Power(1.0 / n as f64),
        ProfileChoice::Ehrhard => {
            if !mu.is_gaussian() {
                return Err(Error::Inadmissible(format!(
                    "Ehrhard profile needs a Gaussian measure, got {}",
                    mu.name()
                )));
            }
            ProfileKind::Ehrhard
        }
    };
    Ok(ConcavityProfile { kind, sup })
}

impl ConcavityProfile {
    pub fn log() -> Self {
        Self {
            kind: ProfileKind::Log,
            sup: f64::INFINITY,
        }
    }

    pub fn power(s: f64) -> Result<Self> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "power profile exponent must be positive, got {s}"
            )));
        }
        Ok(Self {
            kind: ProfileKind::Power(s),
            sup: f64::INFINITY,
        })
    }

    pub fn ehrhard() -> Self {
        Self {
            kind: ProfileKind::Ehrhard,
            sup: 1.0,
        }
    }

    pub fn custom(profile: CustomProfile, sup: f64) -> Self {
        Self {
            kind: ProfileKind::Custom(profile),
            sup,
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            ProfileKind::Log => "log".into(),
            ProfileKind::Power(s) => format!("power({s})"),
            ProfileKind::Ehrhard => "ehrhard".into(),
            ProfileKind::Custom(c) => c.name.clone(),
        }
    }

    fn check(&self, x: f64) -> Result<()> {
        if x > 0.0 && x < self.sup {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!(
                "{} profile evaluated at {x}, outside (0, {})",
                self.name(),
                self.sup
            )))
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            ProfileKind::Log => x.ln(),
            ProfileKind::Power(s) => x.powf(*s),
            ProfileKind::Ehrhard => gaussian_quantile(x)?,
            ProfileKind::Custom(c) => (c.f)(x),
        })
    }

    pub fn first(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            ProfileKind::Log => 1.0 / x,
            ProfileKind::Power(s) => s * x.powf(s - 1.0),
            ProfileKind::Ehrhard => 1.0 / gaussian_pdf(gaussian_quantile(x)?),
            ProfileKind::Custom(c) => (c.f_prime)(x),
        })
    }

    pub fn second(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        Ok(match &self.kind {
            ProfileKind::Log => -1.0 / (x * x),
            ProfileKind::Power(s) => s * (s - 1.0) * x.powf(s - 2.0),
            ProfileKind::Ehrhard => {
                let q = gaussian_quantile(x)?;
                let d = 1.0 / gaussian_pdf(q);
                q * d * d
            }
            ProfileKind::Custom(c) => (c.f_second)(x),
        })
    }

    pub fn inverse(&self, y: f64) -> Result<f64> {
        match &self.kind {
            ProfileKind::Log => Ok(y.exp()),
            ProfileKind::Power(s) => {
                if y < 0.0 {
                    Err(Error::InvalidArgument(format!("power profile inverse at {y}")))
                } else {
                    Ok(y.powf(1.0 / s))
                }
            }
            ProfileKind::Ehrhard => Ok(gaussian_cdf(y)),
            ProfileKind::Custom(c) => c
                .inverse
                .as_ref()
                .map(|g| g(y))
                .ok_or_else(|| Error::Unsupported(format!("{} has no inverse", c.name))),
        }
    }
}
