//! Finite-difference oracles on `μ(K + εL)` and `μ(A + sB + tC)`.

use super::FDConfig;
use crate::bodies::ConvexBody;
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::measures::{measure, measure_of_body, MeasureMethod, WeightedMeasure};

/// Richardson extrapolation of `D(h_k)` with `h_k = h_0 / 2^k` and an error
/// expansion in `h, h², …`. Returns the extrapolated value, the difference
/// to the previous column (truncation estimate) and the linear weights of
/// the result in terms of the inputs.
pub fn richardson(values: &[f64]) -> (f64, f64, Vec<f64>) {
    let m = values.len();
    assert!(m >= 1, "richardson needs at least one value");
    let unit = |k: usize| {
        let mut e = vec![0.0; m];
        e[k] = 1.0;
        e
    };
    let mut prev: Vec<Vec<f64>> = (0..m).map(unit).collect();
    let mut before_last = prev[m - 1].clone();
    for j in 1..m {
        let c = 2f64.powi(j as i32) - 1.0;
        let next: Vec<Vec<f64>> = (j..m)
            .map(|k| {
                let hi = &prev[k - j + 1];
                let lo = &prev[k - j];
                hi.iter().zip(lo).map(|(a, b)| a + (a - b) / c).collect()
            })
            .collect();
        before_last = prev[prev.len() - 1].clone();
        prev = next;
    }
    let weights = prev.pop().unwrap();
    let apply = |w: &[f64]| w.iter().zip(values).map(|(a, b)| a * b).sum::<f64>();
    let value = apply(&weights);
    let trunc = if m > 1 {
        (value - apply(&before_last)).abs()
    } else {
        f64::INFINITY
    };
    (value, trunc, weights)
}

fn eval(mu: &WeightedMeasure, body: &ConvexBody, method: Option<MeasureMethod>, budget: usize) -> Result<Estimate> {
    match method {
        Some(m) => measure_of_body(mu, body, m, budget),
        None => measure(mu, body),
    }
}

/// Combines per-level difference quotients and their noise into an estimate,
/// refusing results whose error exceeds the target relative to `scale`.
fn finish(quotients: &[f64], noise: &[f64], cfg: &FDConfig, scale: f64) -> Result<Estimate> {
    let (value, trunc, weights) = richardson(quotients);
    let amplified: f64 = weights.iter().zip(noise).map(|(w, e)| w.abs() * e).sum();
    let error = trunc + amplified;
    let target = cfg.rel_target * value.abs().max(scale);
    if !(error <= target.max(1e-12)) {
        return Err(Error::NonConvergent {
            residual: error,
            target,
        });
    }
    Ok(Estimate::new(value, error))
}

/// `μ(K;L)` as the Richardson limit of `(μ(K + εL) − μ(K))/ε`.
pub fn mixed_measure_fd(
    mu: &WeightedMeasure,
    k: &ConvexBody,
    l: &ConvexBody,
    cfg: &FDConfig,
    method: Option<MeasureMethod>,
    budget: usize,
) -> Result<Estimate> {
    cfg.validate()?;
    check_dim(mu.dim, k.dim())?;
    check_dim(mu.dim, l.dim())?;
    let g0 = eval(mu, k, method, budget)?;
    let mut quotients = Vec::with_capacity(cfg.levels);
    let mut noise = Vec::with_capacity(cfg.levels);
    for eps in cfg.steps() {
        let g = eval(mu, &k.plus_scaled(eps, l)?, method, budget)?;
        quotients.push((g.value - g0.value) / eps);
        noise.push((g.error + g0.error) / eps);
    }
    finish(&quotients, &noise, cfg, g0.value.abs())
}

fn shifted(a: &ConvexBody, s: f64, b: &ConvexBody, t: f64, c: &ConvexBody) -> Result<ConvexBody> {
    ConvexBody::sum(vec![
        a.clone(),
        ConvexBody::scale(s, b.clone())?,
        ConvexBody::scale(t, c.clone())?,
    ])
}

/// `μ(A;B,C)` from the one-sided cross difference
/// `[g(ε,ε) − g(ε,0) − g(0,ε) + g(0,0)]/ε²` with `g(s,t) = μ(A + sB + tC)`.
pub fn mixed_second_fd(
    mu: &WeightedMeasure,
    a: &ConvexBody,
    b: &ConvexBody,
    c: &ConvexBody,
    cfg: &FDConfig,
    method: Option<MeasureMethod>,
    budget: usize,
) -> Result<Estimate> {
    cfg.validate()?;
    for body in [a, b, c] {
        check_dim(mu.dim, body.dim())?;
    }
    let g00 = eval(mu, a, method, budget)?;
    let mut quotients = Vec::with_capacity(cfg.levels);
    let mut noise = Vec::with_capacity(cfg.levels);
    for eps in cfg.steps() {
        let gst = eval(mu, &shifted(a, eps, b, eps, c)?, method, budget)?;
        let gs = eval(mu, &a.plus_scaled(eps, b)?, method, budget)?;
        let gt = eval(mu, &a.plus_scaled(eps, c)?, method, budget)?;
        let e2 = eps * eps;
        quotients.push((gst.value - gs.value - gt.value + g00.value) / e2);
        noise.push((gst.error + gs.error + gt.error + g00.error) / e2);
    }
    finish(&quotients, &noise, cfg, g00.value.abs())
}

/// `d²/ds² μ(A + sB)` at `s = 0` from `[g(2ε) − 2g(ε) + g(0)]/ε²`, with one
/// more Richardson level than `cfg` asks for.
pub fn pure_second_fd(
    mu: &WeightedMeasure,
    a: &ConvexBody,
    b: &ConvexBody,
    cfg: &FDConfig,
    method: Option<MeasureMethod>,
    budget: usize,
) -> Result<Estimate> {
    cfg.validate()?;
    check_dim(mu.dim, a.dim())?;
    check_dim(mu.dim, b.dim())?;
    let cfg = FDConfig {
        levels: cfg.levels + 1,
        ..*cfg
    };
    let g0 = eval(mu, a, method, budget)?;
    let mut quotients = Vec::with_capacity(cfg.levels);
    let mut noise = Vec::with_capacity(cfg.levels);
    for eps in cfg.steps() {
        let g1 = eval(mu, &a.plus_scaled(eps, b)?, method, budget)?;
        let g2 = eval(mu, &a.plus_scaled(2.0 * eps, b)?, method, budget)?;
        let e2 = eps * eps;
        quotients.push((g2.value - 2.0 * g1.value + g0.value) / e2);
        noise.push((g2.error + 2.0 * g1.error + g0.error) / e2);
    }
    finish(&quotients, &noise, &cfg, g0.value.abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::normal::gaussian_pdf;

    #[test]
    fn richardson_is_exact_on_polynomials() {
        // D(h) = 3 + 2h - 5h²
        let vals: Vec<f64> = (0..3)
            .map(|k| 0.1 / 2f64.powi(k))
            .map(|h| 3.0 + 2.0 * h - 5.0 * h * h)
            .collect();
        let (v, _, w) = richardson(&vals);
        assert!((v - 3.0).abs() < 1e-13);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-14);
        let amp: f64 = w.iter().map(|x| x.abs()).sum();
        assert!((amp - 5.0).abs() < 1e-12);
    }

    #[test]
    fn lebesgue_square_first() {
        let lam = WeightedMeasure::lebesgue(2).unwrap();
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let v = mixed_measure_fd(&lam, &sq, &sq, &FDConfig::default(), None, 0).unwrap();
        assert!((v.value - 8.0).abs() < 1e-8, "{v:?}");
    }

    #[test]
    fn gaussian_interval_first() {
        let g = WeightedMeasure::gaussian(1).unwrap();
        let a = 0.8;
        let k = ConvexBody::segment(vec![0.0], vec![a]).unwrap();
        let l = ConvexBody::segment(vec![0.0], vec![1.0]).unwrap();
        let v = mixed_measure_fd(&g, &k, &l, &FDConfig::default(), None, 0).unwrap();
        assert!((v.value - 2.0 * gaussian_pdf(a)).abs() < 1e-6, "{v:?}");
    }

    #[test]
    fn gaussian_disk_second() {
        let g = WeightedMeasure::gaussian(2).unwrap();
        let a = ConvexBody::centered_ball(2, 2.0).unwrap();
        let d = ConvexBody::centered_ball(2, 1.0).unwrap();
        let v = mixed_second_fd(&g, &a, &d, &d, &FDConfig::default(), None, 0).unwrap();
        let want = -3.0 * (-2.0f64).exp();
        assert!((v.value - want).abs() < 2e-3 * want.abs(), "{v:?}");
        let p = pure_second_fd(&g, &a, &d, &FDConfig::default(), None, 0).unwrap();
        assert!((p.value - want).abs() < 2e-3 * want.abs(), "{p:?}");
    }

    #[test]
    fn lebesgue_second_is_twice_mixed_volume() {
        let lam = WeightedMeasure::lebesgue(2).unwrap();
        let a = ConvexBody::centered_ball(2, 0.7).unwrap();
        let b = ConvexBody::segment(vec![0.0, 0.0], vec![1.0, 0.0]).unwrap();
        let c = ConvexBody::segment(vec![0.0, 0.0], vec![0.0, 1.0]).unwrap();
        let v = mixed_second_fd(&lam, &a, &b, &c, &FDConfig::default(), None, 0).unwrap();
        assert!((v.value - 4.0).abs() < 1e-6, "{v:?}");
    }
}
