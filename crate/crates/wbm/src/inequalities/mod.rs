//! Slacks of the weighted Brunn–Minkowski inequalities, scalar constant
//! facts, supermodularity classification and seeded ensembles.
//!
//! Every slack is oriented so that a nonnegative value means the inequality
//! holds, and carries an error budget propagated from the numerical inputs.

mod ensemble;
mod minkowski;
mod modularity;
mod scalar;
mod zonoid;

pub use ensemble::{
    instance_bodies, instance_seed, run_ensemble, summarize, write_reports, EnsembleSpec, EnsembleSummary, InequalityId,
};
pub use minkowski::{
    local_logsubmod, logsubmod_ratio, minkowski_first, minkowski_second, reverse_quadratic, s_concave_bracket,
    BracketReport,
};
pub use modularity::{interval_submodularity_check, supermodularity_classify, Modularity, ModularityReport};
pub use scalar::{
    ball_bound_check, gaussian_integral_bound, great_circle_reduction_check, hom_integral_identity_check,
    jensen_integral_bound, kappa_ratio, sharpness_ordering, HomResidual,
};
pub use zonoid::{scalar_zonoid_condition, sharper_constant, zonoid_ball_check, zonoid_constant, ZonoidConstant};

use crate::estimate::Estimate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Relative floor of every error budget: values this close are never
/// separated.
pub const BUDGET_FLOOR: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    Inconclusive,
}

impl Verdict {
    pub fn classify(slack: f64, budget: f64) -> Self {
        if slack.is_nan() || slack.abs() <= budget {
            Verdict::Inconclusive
        } else if slack < 0.0 {
            Verdict::Violated
        } else {
            Verdict::Holds
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlackReport {
    pub inequality: String,
    /// Descriptors of measure, profile, bodies and seed.
    pub inputs: BTreeMap<String, serde_json::Value>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub error_budget: f64,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Auxiliary scalars, e.g. a sufficient condition evaluated alongside.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
}

impl SlackReport {
    /// Report for `lhs ≥ rhs`.
    pub fn from_sides(inequality: &str, lhs: Estimate, rhs: Estimate) -> Self {
        let slack = lhs - rhs;
        let scale = 1f64.max(lhs.value.abs()).max(rhs.value.abs());
        let budget = slack.error + BUDGET_FLOOR * scale;
        Self {
            inequality: inequality.to_string(),
            inputs: BTreeMap::new(),
            lhs: lhs.value,
            rhs: rhs.value,
            slack: slack.value,
            error_budget: budget,
            verdict: Verdict::classify(slack.value, budget),
            note: None,
            details: BTreeMap::new(),
        }
    }

    /// A case the theorem settles without computation.
    pub fn trivial(inequality: &str, note: &str) -> Self {
        Self {
            inequality: inequality.to_string(),
            inputs: BTreeMap::new(),
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            error_budget: 0.0,
            verdict: Verdict::Holds,
            note: Some(note.to_string()),
            details: BTreeMap::new(),
        }
    }

    pub fn with_input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(serde_json::Value::Null),
        );
        self
    }

    pub fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.to_string());
        self
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn is_violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts() {
        assert_eq!(Verdict::classify(1.0, 0.1), Verdict::Holds);
        assert_eq!(Verdict::classify(-1.0, 0.1), Verdict::Violated);
        assert_eq!(Verdict::classify(-0.05, 0.1), Verdict::Inconclusive);
        assert_eq!(Verdict::classify(f64::NAN, 0.1), Verdict::Inconclusive);
    }

    #[test]
    fn report_budget_includes_floor() {
        let r = SlackReport::from_sides("x", Estimate::new(2.0, 0.0), Estimate::new(2.0, 0.0));
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.error_budget >= 2e-10);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"verdict\":\"inconclusive\""));
    }
}
