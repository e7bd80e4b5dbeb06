//! Minkowski-type inequalities for mixed measures and the log-submodularity
//! quantities built from them.

use super::SlackReport;
use crate::bodies::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::measures::{measure, ConcavityProfile, WeightedMeasure};
use crate::mixed::{mixed_measure, mixed_second};
use serde::{Deserialize, Serialize};

fn profile_at(f: &ConcavityProfile, m: Estimate) -> Result<(Estimate, Estimate, Estimate)> {
    let v = f.value(m.value)?;
    let d1 = f.first(m.value)?;
    let d2 = f.second(m.value)?;
    Ok((
        Estimate::new(v, d1.abs() * m.error),
        Estimate::new(d1, d2.abs() * m.error),
        // The third derivative is not available; a relative bar stands in.
        Estimate::new(d2, d2.abs() * m.relative_error()),
    ))
}

/// `μ(K;L) − μ(K;K) ≥ (F(μ(L)) − F(μ(K)))/F′(μ(K))` for `F`-concave `μ`.
pub fn minkowski_first(
    mu: &WeightedMeasure,
    f: &ConcavityProfile,
    k: &ConvexBody,
    l: &ConvexBody,
) -> Result<SlackReport> {
    let mk = measure(mu, k)?;
    let ml = measure(mu, l)?;
    let (fk, dk, _) = profile_at(f, mk)?;
    let fl = Estimate::new(f.value(ml.value)?, f.first(ml.value)?.abs() * ml.error);
    let report = if dk.value == 0.0 {
        SlackReport::trivial("minkowski_first", "trivial")
    } else {
        let lhs = mixed_measure(mu, k, l)? - mixed_measure(mu, k, k)?;
        let rhs = (fl - fk) / dk;
        let mut r = SlackReport::from_sides("minkowski_first", lhs, rhs);
        if r.verdict == super::Verdict::Inconclusive {
            r = r.with_note("equality candidate");
        }
        r
    };
    Ok(report
        .with_input("measure", mu.name())
        .with_input("profile", f.name())
        .with_detail("measure_k", mk.value)
        .with_detail("measure_l", ml.value))
}

/// `−(F″/F′)(μ(K))·(μ(K;L) − μ(K;K))² ≥ μ(K;L,L) − 2μ(K;K,L) + μ(K;K,K)`
/// for `K` of class C²₊.
pub fn minkowski_second(
    mu: &WeightedMeasure,
    f: &ConcavityProfile,
    k: &ConvexBody,
    l: &ConvexBody,
) -> Result<SlackReport> {
    let mk = measure(mu, k)?;
    let (_, d1, d2) = profile_at(f, mk)?;
    if d1.value == 0.0 {
        return Ok(SlackReport::trivial("minkowski_second", "trivial").with_input("profile", f.name()));
    }
    let diff = mixed_measure(mu, k, l)? - mixed_measure(mu, k, k)?;
    let lhs = -(d2 / d1 * diff.square());
    let rhs = mixed_second(mu, k, l, l)? - mixed_second(mu, k, k, l)?.scale(2.0) + mixed_second(mu, k, k, k)?;
    Ok(SlackReport::from_sides("minkowski_second", lhs, rhs)
        .with_input("measure", mu.name())
        .with_input("profile", f.name()))
}

struct SecondOrderData {
    m: Estimate,
    ab: Estimate,
    ac: Estimate,
    abb: Estimate,
    acc: Estimate,
    abc: Estimate,
}

fn second_order_data(mu: &WeightedMeasure, a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<SecondOrderData> {
    Ok(SecondOrderData {
        m: measure(mu, a)?,
        ab: mixed_measure(mu, a, b)?,
        ac: mixed_measure(mu, a, c)?,
        abb: mixed_second(mu, a, b, b)?,
        acc: mixed_second(mu, a, c, c)?,
        abc: mixed_second(mu, a, b, c)?,
    })
}

/// The reverse quadratic inequality
/// `F′·μ(A;B,B)μ(A;C,C) + F″·(μ(A;B)²μ(A;C,C) + μ(A;C)²μ(A;B,B))
///  ≥ F′·μ(A;B,C)² + 2F″·μ(A;B)μ(A;C)μ(A;B,C)`.
///
/// Left minus right equals the Hessian determinant of `F(μ(A + sB + tC))`
/// divided by `F′`, so for decreasing `F` the sides are swapped.
pub fn reverse_quadratic(
    mu: &WeightedMeasure,
    f: &ConcavityProfile,
    a: &ConvexBody,
    b: &ConvexBody,
    c: &ConvexBody,
) -> Result<SlackReport> {
    let d = second_order_data(mu, a, b, c)?;
    let (_, d1, d2) = profile_at(f, d.m)?;
    let lhs = d1 * d.abb * d.acc + d2 * (d.ab.square() * d.acc + d.ac.square() * d.abb);
    let rhs = d1 * d.abc.square() + (d2 * d.ab * d.ac * d.abc).scale(2.0);
    let report = if d1.value > 0.0 {
        SlackReport::from_sides("reverse_quadratic", lhs, rhs)
    } else {
        SlackReport::from_sides("reverse_quadratic", rhs, lhs).with_note("decreasing profile: sides swapped")
    };
    Ok(report.with_input("measure", mu.name()).with_input("profile", f.name()))
}

/// Two-sided bound on `μ(A)μ(A;B,C)/(μ(A;B)μ(A;C))` for `s`-concave `μ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BracketReport {
    pub s: f64,
    pub gamma: f64,
    /// `1 + μ(A)Γ`.
    pub discriminant: f64,
    pub lower: f64,
    pub upper: f64,
    pub ratio: f64,
    /// Slack `min(ratio − lower, upper − ratio)`.
    pub report: SlackReport,
}

impl BracketReport {
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

pub fn s_concave_bracket(
    mu: &WeightedMeasure,
    s: f64,
    a: &ConvexBody,
    b: &ConvexBody,
    c: &ConvexBody,
) -> Result<BracketReport> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::InvalidArgument(format!("s must lie in (0, 1), got {s}")));
    }
    let d = second_order_data(mu, a, b, c)?;
    let t = 1.0 - s;
    let (a2, b2) = (d.ab.square(), d.ac.square());
    let gamma = (d.m * d.abb * d.acc) / (a2 * b2).scale(t * t) - d.abb / a2.scale(t) - d.acc / b2.scale(t);
    let disc = Estimate::exact(1.0) + d.m * gamma;
    let scale = 1f64.max(disc.value.abs());
    if disc.value < -(disc.error + super::BUDGET_FLOOR * scale) {
        return Err(Error::NegativeDiscriminant(disc.value));
    }
    let root = if disc.value > 0.0 {
        let r = disc.value.sqrt();
        Estimate::new(r, disc.error / (2.0 * r))
    } else {
        Estimate::new(0.0, disc.error.sqrt())
    };
    let lower = (Estimate::exact(1.0) - root).scale(t);
    let upper = (Estimate::exact(1.0) + root).scale(t);
    let ratio = (d.m * d.abc) / (d.ab * d.ac);
    let below = SlackReport::from_sides("s_concave_bracket", ratio, lower);
    let above = SlackReport::from_sides("s_concave_bracket", upper, ratio);
    let report = if below.slack <= above.slack { below } else { above };
    Ok(BracketReport {
        s,
        gamma: gamma.value,
        discriminant: disc.value,
        lower: lower.value,
        upper: upper.value,
        ratio: ratio.value,
        report: report
            .with_input("measure", mu.name())
            .with_input("s", s)
            .with_detail("lower", lower.value)
            .with_detail("upper", upper.value)
            .with_detail("ratio", ratio.value),
    })
}

/// `μ(A;B)μ(A;C) ≥ μ(A)μ(A;B,C)`. Only local evidence: it concerns the
/// single body `A`, not the translates `A + sB + tC`.
pub fn local_logsubmod(mu: &WeightedMeasure, a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<SlackReport> {
    let m = measure(mu, a)?;
    let lhs = mixed_measure(mu, a, b)? * mixed_measure(mu, a, c)?;
    let rhs = m * mixed_second(mu, a, b, c)?;
    Ok(SlackReport::from_sides("local_logsubmod", lhs, rhs)
        .with_input("measure", mu.name())
        .with_note("local evidence"))
}

/// `c(A,B,C) = Vol(A)Vol(A+B+C) / (Vol(A+B)Vol(A+C))`.
pub fn logsubmod_ratio(a: &ConvexBody, b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let n = a.dim();
    check_dim(n, b.dim())?;
    check_dim(n, c.dim())?;
    let lam = WeightedMeasure::lebesgue(n)?;
    let num = measure(&lam, a)? * measure(&lam, &ConvexBody::sum(vec![a.clone(), b.clone(), c.clone()])?)?;
    let den = measure(&lam, &a.plus(b)?)? * measure(&lam, &a.plus(c)?)?;
    if !(den.value > 0.0) {
        return Err(Error::InvalidArgument(
            "log-submodularity ratio has a zero denominator".into(),
        ));
    }
    Ok(num / den)
}
