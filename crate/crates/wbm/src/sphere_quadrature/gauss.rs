use crate::error::{Error, Result};
use crate::estimate::Estimate;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// `∫_a^b f` with this rule mapped to `[a, b]`.
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c + h * x);
        }
        s * h
    }

    /// Nodes and weights mapped to `[0, 1]`.
    pub fn unit_interval(&self) -> Vec<(f64, f64)> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn interval(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let h = 0.5 * (b - a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| (a + h * (x + 1.0), h * w))
            .collect()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Shared, lazily built rule of order `n`.
pub fn gauss_legendre(n: usize) -> &'static GaussLegendre {
    static CACHE: OnceLock<Mutex<HashMap<usize, &'static GaussLegendre>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().expect("quadrature cache poisoned");
    map.entry(n)
        .or_insert_with(|| Box::leak(Box::new(GaussLegendre::new(n))))
}

/// `∫_a^b f` by composite 20-point Gauss-Legendre with panel doubling
/// until the relative change drops below `rel_tol`.
pub fn adaptive_gauss(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<Estimate> {
    let gl = gauss_legendre(20);
    let sum = |panels: usize| -> (f64, f64) {
        let h = (b - a) / panels as f64;
        let mut s = 0.0;
        let mut sa = 0.0;
        for p in 0..panels {
            let lo = a + p as f64 * h;
            for (x, w) in gl.nodes.iter().zip(&gl.weights) {
                let v = f(lo + 0.5 * h * (x + 1.0)) * w * 0.5 * h;
                s += v;
                sa += v.abs();
            }
        }
        (s, sa)
    };
    let mut panels = 1;
    let (mut prev, _) = sum(panels);
    for _ in 0..14 {
        panels *= 2;
        let (cur, abs) = sum(panels);
        if !cur.is_finite() {
            return Err(Error::NonFinite("one-dimensional integrand".into()));
        }
        let diff = (cur - prev).abs();
        if diff <= rel_tol * abs.max(1e-300) {
            return Ok(Estimate::new(cur, diff.max(1e-16 * abs)));
        }
        prev = cur;
    }
    Err(Error::NonConvergent {
        residual: (prev - sum(panels / 2).0).abs(),
        target: rel_tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        for n in [1, 2, 5, 16, 33] {
            let g = GaussLegendre::new(n);
            let s: f64 = g.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-14, "n={n}: {s}");
        }
    }

    #[test]
    fn exact_for_polynomials_up_to_degree_2n_minus_1() {
        let g = GaussLegendre::new(8);
        let v = g.integrate(0.0, 1.0, |x| x.powi(15));
        assert!((v - 1.0 / 16.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_exponential() {
        let r = adaptive_gauss(|x| (-x * x).exp(), 0.0, 6.0, 1e-13).unwrap();
        let exact = 0.5 * std::f64::consts::PI.sqrt() * libm::erf(6.0);
        assert!((r.value - exact).abs() < 1e-14);
    }
}
