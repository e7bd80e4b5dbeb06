//! Run configuration as read from TOML files and command-line flags.

use crate::error::CliError;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use wbm::bodies::{random_body_with_origin, BodyKind, ConvexBody};
use wbm::inequalities::EnsembleSpec;
use wbm::measures::{MeasureMethod, MeasureSpec};
use wbm::mixed::FDConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CommandKind {
    Compute,
    Verify,
    Sweep,
    Report,
}

/// Everything needed to rerun a command. Flags given on the command line
/// override the values read from `--config`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<CommandKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    /// Sphere grid resolution for surface measures; 0 picks the default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// Evaluation budget for measure methods (samples, grid size or order).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fd: Option<FdSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compute: Option<ComputeConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<ReportConfig>,
    #[serde(default, rename = "suite", skip_serializing_if = "Vec::is_empty")]
    pub suites: Vec<EnsembleSpec>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn fd_config(&self) -> Result<FDConfig, CliError> {
        let cfg = self.fd.clone().unwrap_or_default().into();
        FDConfig::validate(&cfg)?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FdSettings {
    pub step: f64,
    pub levels: usize,
    pub rel_target: f64,
}

impl Default for FdSettings {
    fn default() -> Self {
        let d = FDConfig::default();
        Self {
            step: d.step,
            levels: d.levels,
            rel_target: d.rel_target,
        }
    }
}

impl From<FdSettings> for FDConfig {
    fn from(s: FdSettings) -> Self {
        FDConfig {
            step: s.step,
            levels: s.levels,
            rel_target: s.rel_target,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// `μ(K)`.
    Measure,
    /// `μ⁺(∂K)`.
    SurfaceArea,
    /// `V(K[n−1], L)`.
    MixedVolume,
    /// `μ(K; L)`.
    MixedMeasure,
    MixedMeasureFd,
    /// `μ(A; B, C)`.
    MixedSecond,
    MixedSecondFd,
}

impl Quantity {
    pub fn body_count(self) -> usize {
        match self {
            Quantity::Measure | Quantity::SurfaceArea => 1,
            Quantity::MixedVolume | Quantity::MixedMeasure | Quantity::MixedMeasureFd => 2,
            Quantity::MixedSecond | Quantity::MixedSecondFd => 3,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quantity::Measure => "measure",
            Quantity::SurfaceArea => "surface_area",
            Quantity::MixedVolume => "mixed_volume",
            Quantity::MixedMeasure => "mixed_measure",
            Quantity::MixedMeasureFd => "mixed_measure_fd",
            Quantity::MixedSecond => "mixed_second",
            Quantity::MixedSecondFd => "mixed_second_fd",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComputeConfig {
    pub quantity: Quantity,
    pub measure: MeasureSpec,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub bodies: Vec<BodySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<MeasureMethod>,
}

fn default_dim() -> usize {
    2
}

/// A body in a configuration file or on the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    Ball {
        radius: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<Vec<f64>>,
    },
    /// `[−a, a]ⁿ`.
    Cube {
        half_width: f64,
    },
    Segment {
        center: Vec<f64>,
        direction: Vec<f64>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Zonotope {
        center: Vec<f64>,
        generators: Vec<Vec<f64>>,
    },
    #[serde(rename = "smooth_2d")]
    Smooth2D {
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    Random {
        body: BodyKind,
        #[serde(default = "default_size")]
        size: usize,
        seed: u64,
    },
}

fn default_size() -> usize {
    6
}

impl BodySpec {
    pub fn build(&self, dim: usize) -> Result<ConvexBody, CliError> {
        let body = match self {
            BodySpec::Ball { radius, center } => match center {
                Some(c) => ConvexBody::ball(c.clone(), *radius)?,
                None => ConvexBody::centered_ball(dim, *radius)?,
            },
            BodySpec::Cube { half_width } => ConvexBody::cube(dim, *half_width)?,
            BodySpec::Segment { center, direction } => ConvexBody::segment(center.clone(), direction.clone())?,
            BodySpec::Polytope { vertices } => ConvexBody::polytope(vertices.clone())?,
            BodySpec::Zonotope { center, generators } => ConvexBody::zonotope(center.clone(), generators.clone())?,
            BodySpec::Smooth2D { cos, sin } => ConvexBody::smooth_2d(cos.clone(), sin.clone())?,
            BodySpec::Random { body, size, seed } => random_body_with_origin(*body, dim, *size, *seed)?,
        };
        if body.dim() != dim {
            return Err(CliError::Usage(format!(
                "body has dimension {}, expected {dim}",
                body.dim()
            )));
        }
        Ok(body)
    }
}

fn numbers(s: &str) -> Result<Vec<f64>, CliError> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad number {x:?}: {e}")))
        })
        .collect()
}

/// Parses a snake_case enum name through its serde representation.
pub fn parse_name<T: DeserializeOwned>(s: &str) -> Result<T, CliError> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| CliError::Usage(format!("unknown name {s:?}")))
}

/// Short forms: `ball:R`, `cube:A`, `segment:x,y`, `polytope:x,y;x,y;...`,
/// `zonotope:x,y;x,y;...` (centered), `random:KIND:SEED`,
/// `random:KIND:SIZE:SEED`.
impl FromStr for BodySpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (head, rest) = s.split_once(':').unwrap_or((s, ""));
        let parse_f = |x: &str| {
            x.parse::<f64>()
                .map_err(|e| CliError::Usage(format!("bad number {x:?}: {e}")))
        };
        let parse_u = |x: &str| {
            x.parse::<u64>()
                .map_err(|e| CliError::Usage(format!("bad integer {x:?}: {e}")))
        };
        let points = |r: &str| r.split(';').map(numbers).collect::<Result<Vec<_>, _>>();
        match head {
            "ball" => Ok(BodySpec::Ball {
                radius: if rest.is_empty() { 1.0 } else { parse_f(rest)? },
                center: None,
            }),
            "cube" => Ok(BodySpec::Cube {
                half_width: if rest.is_empty() { 1.0 } else { parse_f(rest)? },
            }),
            "segment" => {
                let direction = numbers(rest)?;
                Ok(BodySpec::Segment {
                    center: vec![0.0; direction.len()],
                    direction,
                })
            }
            "polytope" => Ok(BodySpec::Polytope {
                vertices: points(rest)?,
            }),
            "zonotope" => {
                let generators = points(rest)?;
                let dim = generators.first().map_or(0, Vec::len);
                Ok(BodySpec::Zonotope {
                    center: vec![0.0; dim],
                    generators,
                })
            }
            "random" => {
                let parts: Vec<&str> = rest.split(':').collect();
                let (kind, size, seed) = match parts.as_slice() {
                    [k, seed] => (*k, default_size(), parse_u(seed)?),
                    [k, size, seed] => (*k, parse_u(size)? as usize, parse_u(seed)?),
                    _ => return Err(CliError::Usage(format!("expected random:KIND[:SIZE]:SEED, got {s:?}"))),
                };
                Ok(BodySpec::Random {
                    body: parse_name(kind)?,
                    size,
                    seed,
                })
            }
            _ => Err(CliError::Usage(format!("unknown body {s:?}"))),
        }
    }
}

/// `lebesgue`, `gaussian`, `power:ALPHA,BETA,P`.
pub fn parse_measure(s: &str) -> Result<MeasureSpec, CliError> {
    let (head, rest) = s.split_once(':').unwrap_or((s, ""));
    match head {
        "lebesgue" => Ok(MeasureSpec::Lebesgue),
        "gaussian" => Ok(MeasureSpec::Gaussian),
        "power" => match numbers(rest)?.as_slice() {
            &[alpha, beta, p] => Ok(MeasureSpec::Power { alpha, beta, p }),
            _ => Err(CliError::Usage(format!("expected power:ALPHA,BETA,P, got {s:?}"))),
        },
        _ => Err(CliError::Usage(format!("unknown measure {s:?}"))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepQuantity {
    /// `μ(RB; B, B)` over the radius `R`.
    BallSecond,
    /// `μ(t B)` over `t`.
    DilateMeasure,
    /// `n/(n+1)·(1 + 1/(n − RW′(R)))` over `R`.
    SharperConstant,
    /// `κ²_{n−1}/(κ_{n−2}κ_n)` over the dimension.
    KappaRatio,
}

impl SweepQuantity {
    pub fn parameter(self) -> &'static str {
        match self {
            SweepQuantity::BallSecond | SweepQuantity::SharperConstant => "radius",
            SweepQuantity::DilateMeasure => "t",
            SweepQuantity::KappaRatio => "n",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub quantity: SweepQuantity,
    #[serde(default = "gaussian")]
    pub measure: MeasureSpec,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
}

fn gaussian() -> MeasureSpec {
    MeasureSpec::Gaussian
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps < 2 || !(self.from.is_finite() && self.to.is_finite()) {
            return Err(CliError::Usage("sweep needs finite bounds and at least 2 steps".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let h = (self.to - self.from) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| self.from + h * i as f64).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportConfig {
    pub inputs: Vec<PathBuf>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn short_body_forms() {
        assert_eq!(
            "ball:2".parse::<BodySpec>().unwrap(),
            BodySpec::Ball {
                radius: 2.0,
                center: None
            }
        );
        let s: BodySpec = "random:symmetric_smooth_2d:4:9".parse().unwrap();
        assert_eq!(
            s,
            BodySpec::Random {
                body: BodyKind::SymmetricSmooth2D,
                size: 4,
                seed: 9
            }
        );
        let p: BodySpec = "polytope:1,0;0,1;-1,-1".parse().unwrap();
        assert_eq!(p.build(2).unwrap().dim(), 2);
        assert!("blob:1".parse::<BodySpec>().is_err());
        assert!("random:cube:1".parse::<BodySpec>().is_err());
    }

    #[test]
    fn measures() {
        assert_eq!(parse_measure("gaussian").unwrap(), MeasureSpec::Gaussian);
        assert_eq!(
            parse_measure("power:1,2,1").unwrap(),
            MeasureSpec::Power {
                alpha: 1.0,
                beta: 2.0,
                p: 1.0
            }
        );
        assert!(parse_measure("power:1").is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = r#"
seed = 3
workers = 1

[compute]
quantity = "mixed_measure"
measure = { name = "gaussian" }
bodies = [{ kind = "ball", radius = 1.0 }, { kind = "cube", half_width = 0.5 }]

[[suite]]
inequality = "minkowski_first"
measure = { name = "gaussian" }
profile = "log"
body = "symmetric_smooth_2d"
count = 4
seed = 7
"#;
        let cfg = RunConfig::from_toml(text).unwrap();
        assert_eq!(cfg.suites.len(), 1);
        let again = RunConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(cfg, again);
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = RunConfig::from_toml("seed = 1\nbogus = 2\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("bogus"), "{err}");
    }
}
