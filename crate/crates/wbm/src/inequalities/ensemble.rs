//! Seeded ensembles: random instances of one inequality, evaluated in
//! parallel and written as JSON lines plus a CSV summary.

use super::minkowski::{
    local_logsubmod, logsubmod_ratio, minkowski_first, minkowski_second, reverse_quadratic, s_concave_bracket,
};
use super::modularity::interval_submodularity_check;
use super::scalar::ball_bound_check;
use super::zonoid::{scalar_zonoid_condition, zonoid_ball_check, zonoid_constant, ZonoidConstant};
use super::{SlackReport, Verdict};
use crate::bodies::{random_body_with_origin, BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::measures::{profile_factory, MeasureSpec, ProfileChoice, WeightedMeasure};
use crate::output::{csv_row, fmt_f64, to_json_line};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityId {
    MinkowskiFirst,
    MinkowskiSecond,
    ReverseQuadratic,
    SConcaveBracket,
    LocalLogsubmod,
    LogsubmodRatio,
    ZonoidBall,
    ScalarZonoidCondition,
    IntervalSubmodularity,
    BallBound,
}

impl InequalityId {
    pub const ALL: [InequalityId; 10] = [
        InequalityId::MinkowskiFirst,
        InequalityId::MinkowskiSecond,
        InequalityId::ReverseQuadratic,
        InequalityId::SConcaveBracket,
        InequalityId::LocalLogsubmod,
        InequalityId::LogsubmodRatio,
        InequalityId::ZonoidBall,
        InequalityId::ScalarZonoidCondition,
        InequalityId::IntervalSubmodularity,
        InequalityId::BallBound,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            InequalityId::MinkowskiFirst => "minkowski_first",
            InequalityId::MinkowskiSecond => "minkowski_second",
            InequalityId::ReverseQuadratic => "reverse_quadratic",
            InequalityId::SConcaveBracket => "s_concave_bracket",
            InequalityId::LocalLogsubmod => "local_logsubmod",
            InequalityId::LogsubmodRatio => "logsubmod_ratio",
            InequalityId::ZonoidBall => "zonoid_ball",
            InequalityId::ScalarZonoidCondition => "scalar_zonoid_condition",
            InequalityId::IntervalSubmodularity => "interval_submodularity",
            InequalityId::BallBound => "ball_bound",
        }
    }

    /// Number of random bodies one instance needs.
    fn body_count(self) -> usize {
        match self {
            InequalityId::MinkowskiFirst | InequalityId::MinkowskiSecond | InequalityId::ZonoidBall => 2,
            InequalityId::ScalarZonoidCondition => 0,
            InequalityId::BallBound => 1,
            _ => 3,
        }
    }
}

impl std::str::FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|i| i.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown inequality id {s:?}")))
    }
}

impl std::fmt::Display for InequalityId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn default_dim() -> usize {
    2
}

fn default_size() -> usize {
    6
}

/// One reproducible ensemble: everything an instance depends on, plus the
/// base seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpec {
    pub inequality: InequalityId,
    pub measure: MeasureSpec,
    #[serde(default = "default_dim")]
    pub dim: usize,
    #[serde(default)]
    pub profile: Option<ProfileChoice>,
    /// Kind of the first body (`K`, `A`, or `Z` for the zonoid check).
    pub body: BodyKind,
    /// Kind of the remaining bodies; defaults to `body`.
    #[serde(default)]
    pub other: Option<BodyKind>,
    /// Points, generators or harmonic degree of the random bodies.
    #[serde(default = "default_size")]
    pub size: usize,
    pub count: usize,
    #[serde(default)]
    pub seed: u64,
    /// Exponent of the s-concave bracket.
    #[serde(default)]
    pub s: Option<f64>,
    /// Ball radius for the zonoid checks; random in `(0.05, 3)` when absent.
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub constant: Option<ZonoidConstant>,
    /// Replace the first body by a centered ball of random radius.
    #[serde(default)]
    pub ball_first: bool,
    /// Take `C = tB` with random `t` (local log-submodularity).
    #[serde(default)]
    pub dilates: bool,
}

impl EnsembleSpec {
    pub fn new(inequality: InequalityId, measure: MeasureSpec, body: BodyKind, count: usize, seed: u64) -> Self {
        Self {
            inequality,
            measure,
            dim: 2,
            profile: None,
            body,
            other: None,
            size: default_size(),
            count,
            seed,
            s: None,
            radius: None,
            constant: None,
            ball_first: false,
            dilates: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidArgument("ensemble dimension must be positive".into()));
        }
        let needs_profile = matches!(
            self.inequality,
            InequalityId::MinkowskiFirst | InequalityId::MinkowskiSecond | InequalityId::ReverseQuadratic
        );
        if needs_profile && self.profile.is_none() {
            return Err(Error::InvalidArgument(format!("{} needs a profile", self.inequality)));
        }
        if self.inequality == InequalityId::IntervalSubmodularity && self.dim != 1 {
            return Err(Error::InvalidArgument("interval_submodularity needs dim = 1".into()));
        }
        if let Some(s) = self.s {
            if !(s > 0.0 && s < 1.0) {
                return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
            }
        }
        let mu = self.measure.build(self.dim)?;
        if let Some(p) = self.profile {
            profile_factory(p, &mu, self.dim)?;
        }
        Ok(())
    }
}

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of instance `index` of an ensemble with base seed `base`.
pub fn instance_seed(base: u64, index: usize) -> u64 {
    splitmix64(base ^ splitmix64(index as u64))
}

/// Interval `[lo, hi]` with `lo < 0 < hi` or symmetric when asked.
fn random_interval(rng: &mut ChaCha8Rng, symmetric: bool) -> Result<ConvexBody> {
    if symmetric {
        let h: f64 = rng.gen_range(0.0..2.5);
        ConvexBody::segment(vec![0.0], vec![h])
    } else {
        let c: f64 = rng.gen_range(-2.0..2.0);
        let h: f64 = rng.gen_range(0.05..2.0);
        ConvexBody::segment(vec![c], vec![h])
    }
}

/// Bodies of instance `index`, in the order the inequality takes them.
pub fn instance_bodies(spec: &EnsembleSpec, index: usize) -> Result<Vec<ConvexBody>> {
    let seed = instance_seed(spec.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if spec.inequality == InequalityId::IntervalSubmodularity {
        return Ok(vec![
            random_interval(&mut rng, false)?,
            random_interval(&mut rng, true)?,
            random_interval(&mut rng, true)?,
        ]);
    }
    let count = spec.inequality.body_count();
    let other = spec.other.unwrap_or(spec.body);
    let mut bodies: Vec<ConvexBody> = Vec::with_capacity(count);
    for j in 0..count {
        let s = splitmix64(seed.wrapping_add(1000 * j as u64 + 1));
        let body = if j == 0 && spec.ball_first {
            ConvexBody::centered_ball(spec.dim, rng.gen_range(0.3..2.0))?
        } else if j == 2 && spec.dilates {
            ConvexBody::scale(rng.gen_range(0.3..2.0), bodies[1].clone())?
        } else {
            let kind = if j == 0 { spec.body } else { other };
            random_body_with_origin(kind, spec.dim, spec.size, s)?
        };
        bodies.push(body);
    }
    Ok(bodies)
}

fn instance_radius(spec: &EnsembleSpec, index: usize) -> f64 {
    spec.radius.unwrap_or_else(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed(spec.seed, index) ^ 0x5EED);
        rng.gen_range(0.05..3.0)
    })
}

fn run_instance(spec: &EnsembleSpec, mu: &WeightedMeasure, index: usize) -> Result<SlackReport> {
    let bodies = instance_bodies(spec, index)?;
    let profile = || profile_factory(spec.profile.unwrap_or(ProfileChoice::Log), mu, spec.dim);
    let report = match spec.inequality {
        InequalityId::MinkowskiFirst => minkowski_first(mu, &profile()?, &bodies[0], &bodies[1])?,
        InequalityId::MinkowskiSecond => minkowski_second(mu, &profile()?, &bodies[0], &bodies[1])?,
        InequalityId::ReverseQuadratic => reverse_quadratic(mu, &profile()?, &bodies[0], &bodies[1], &bodies[2])?,
        InequalityId::SConcaveBracket => {
            s_concave_bracket(mu, spec.s.unwrap_or(0.5), &bodies[0], &bodies[1], &bodies[2])?.report
        }
        InequalityId::LocalLogsubmod => local_logsubmod(mu, &bodies[0], &bodies[1], &bodies[2])?,
        InequalityId::LogsubmodRatio => {
            let c = logsubmod_ratio(&bodies[0], &bodies[1], &bodies[2])?;
            SlackReport::from_sides("logsubmod_ratio", Estimate::exact(1.0), c)
                .with_note("denominator Vol(A+B)Vol(A+C)")
        }
        InequalityId::ZonoidBall => {
            let constant = spec.constant.unwrap_or(ZonoidConstant::One);
            zonoid_ball_check(mu, instance_radius(spec, index), &bodies[0], &bodies[1], constant)?
        }
        InequalityId::ScalarZonoidCondition => {
            let r = instance_radius(spec, index);
            let a = zonoid_constant(spec.constant.unwrap_or(ZonoidConstant::One), mu, r)?;
            scalar_zonoid_condition(mu, r, a)?
        }
        InequalityId::IntervalSubmodularity => interval_submodularity_check(mu, &bodies[0], &bodies[1], &bodies[2])?,
        InequalityId::BallBound => ball_bound_check(&bodies[0])?,
    };
    let mut report = report
        .with_input("instance", index)
        .with_input("seed", instance_seed(spec.seed, index))
        .with_input("bodies", &bodies);
    report.inequality = spec.inequality.as_str().to_string();
    Ok(report)
}

/// Evaluates every instance of `spec` on `workers` threads (0 picks the
/// rayon default). Reports come back in instance order; the first failing
/// instance in that order determines the error.
pub fn run_ensemble(spec: &EnsembleSpec, workers: usize) -> Result<Vec<SlackReport>> {
    spec.validate()?;
    let mu = spec.measure.build(spec.dim)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let results: Vec<Result<SlackReport>> = pool.install(|| {
        (0..spec.count)
            .into_par_iter()
            .map(|i| run_instance(spec, &mu, i))
            .collect()
    });
    results.into_iter().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    pub inequality: String,
    pub count: usize,
    pub min_slack: f64,
    pub violations: usize,
    pub inconclusive: usize,
}

/// Per-inequality counts, sorted by inequality id.
pub fn summarize(reports: &[SlackReport]) -> Vec<EnsembleSummary> {
    let mut groups: BTreeMap<&str, EnsembleSummary> = BTreeMap::new();
    for r in reports {
        let e = groups.entry(r.inequality.as_str()).or_insert_with(|| EnsembleSummary {
            inequality: r.inequality.clone(),
            count: 0,
            min_slack: f64::INFINITY,
            violations: 0,
            inconclusive: 0,
        });
        e.count += 1;
        e.min_slack = e.min_slack.min(r.slack);
        match r.verdict {
            Verdict::Violated => e.violations += 1,
            Verdict::Inconclusive => e.inconclusive += 1,
            Verdict::Holds => {}
        }
    }
    groups.into_values().collect()
}

/// Writes one report per line to `jsonl` and the summary table to `csv`.
pub fn write_reports<J: Write, C: Write>(reports: &[SlackReport], mut jsonl: J, mut csv: C) -> Result<()> {
    for r in reports {
        writeln!(jsonl, "{}", to_json_line(r)?)?;
    }
    csv.write_all(csv_row(&["inequality", "count", "min_slack", "violations", "inconclusive"]).as_bytes())?;
    for s in summarize(reports) {
        let row = [
            s.inequality.clone(),
            s.count.to_string(),
            fmt_f64(s.min_slack),
            s.violations.to_string(),
            s.inconclusive.to_string(),
        ];
        csv.write_all(csv_row(&row).as_bytes())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..100).map(|i| instance_seed(7, i)).collect();
        let mut b = a.clone();
        b.sort();
        b.dedup();
        assert_eq!(b.len(), 100);
        assert_eq!(instance_seed(7, 3), a[3]);
        assert_ne!(instance_seed(8, 3), a[3]);
    }

    #[test]
    fn ensemble_is_deterministic_across_worker_counts() {
        let mut spec = EnsembleSpec::new(
            InequalityId::MinkowskiFirst,
            MeasureSpec::Gaussian,
            BodyKind::SymmetricSmooth2D,
            6,
            11,
        );
        spec.profile = Some(ProfileChoice::Power);
        let one = run_ensemble(&spec, 1).unwrap();
        let four = run_ensemble(&spec, 4).unwrap();
        assert_eq!(one, four);
        assert!(one.iter().all(|r| r.verdict != Verdict::Violated));
        let (mut j, mut c) = (Vec::new(), Vec::new());
        write_reports(&one, &mut j, &mut c).unwrap();
        assert_eq!(String::from_utf8(j).unwrap().lines().count(), 6);
        let csv = String::from_utf8(c).unwrap();
        assert!(csv.starts_with("inequality,count,min_slack,violations,inconclusive\nminkowski_first,6,"));
    }

    #[test]
    fn spec_round_trips_and_validates() {
        let mut spec = EnsembleSpec::new(
            InequalityId::MinkowskiFirst,
            MeasureSpec::Lebesgue,
            BodyKind::Polytope,
            3,
            1,
        );
        assert!(spec.validate().is_err());
        spec.profile = Some(ProfileChoice::Ehrhard);
        assert!(matches!(spec.validate(), Err(Error::Inadmissible(_))));
        spec.profile = Some(ProfileChoice::Log);
        spec.validate().unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<EnsembleSpec>(&json).unwrap(), spec);
        assert_eq!("ball_bound".parse::<InequalityId>().unwrap(), InequalityId::BallBound);
    }

    #[test]
    fn bodies_contain_origin() {
        let spec = EnsembleSpec::new(
            InequalityId::LocalLogsubmod,
            MeasureSpec::Lebesgue,
            BodyKind::Polytope,
            20,
            5,
        );
        for i in 0..20 {
            for b in instance_bodies(&spec, i).unwrap() {
                assert!(b.contains_origin_interior().unwrap());
            }
        }
    }
}
