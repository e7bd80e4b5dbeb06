//! Finite Fourier series for planar support functions.

use serde::{Deserialize, Serialize};

/// `h(θ) = Σ_k a_k cos kθ + b_k sin kθ`, with `b_0` unused.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigSeries {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

/// `h`, `h′`, `h″` at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrigValues {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

impl TrigValues {
    /// Curvature radius `f = h″ + h`.
    pub fn curvature(&self) -> f64 {
        self.h + self.d2h
    }

    /// `∇h = h u + h′ u′` at angle `theta`.
    pub fn gradient(&self, theta: f64) -> [f64; 2] {
        let (s, c) = theta.sin_cos();
        [self.h * c - self.dh * s, self.h * s + self.dh * c]
    }
}

impl TrigSeries {
    pub fn new(mut cos: Vec<f64>, mut sin: Vec<f64>) -> Self {
        let len = cos.len().max(sin.len()).max(1);
        cos.resize(len, 0.0);
        sin.resize(len, 0.0);
        sin[0] = 0.0;
        Self { cos, sin }
    }

    pub fn zero() -> Self {
        Self::new(vec![0.0], vec![0.0])
    }

    /// Support function of the ball `c + R·B`.
    pub fn ball(center: [f64; 2], radius: f64) -> Self {
        Self::new(vec![radius, center[0]], vec![0.0, center[1]])
    }

    pub fn degree(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.cos.len().max(other.cos.len());
        let get = |v: &Vec<f64>, k: usize| v.get(k).copied().unwrap_or(0.0);
        Self::new(
            (0..len).map(|k| get(&self.cos, k) + get(&other.cos, k)).collect(),
            (0..len).map(|k| get(&self.sin, k) + get(&other.sin, k)).collect(),
        )
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self::new(
            self.cos.iter().map(|a| t * a).collect(),
            self.sin.iter().map(|b| t * b).collect(),
        )
    }

    /// Support function of the reflected body, `h(θ + π)`.
    pub fn negated(&self) -> Self {
        let sign = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
        Self::new(
            self.cos.iter().enumerate().map(|(k, a)| sign(k) * a).collect(),
            self.sin.iter().enumerate().map(|(k, b)| sign(k) * b).collect(),
        )
    }

    pub fn eval(&self, theta: f64) -> TrigValues {
        eval_coeffs(&self.cos, &self.sin, theta)
    }

    pub fn value(&self, theta: f64) -> f64 {
        self.eval(theta).h
    }

    /// Minimum of `f = h + h″` over `samples` equally spaced angles.
    pub fn min_curvature(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| self.eval(std::f64::consts::TAU * j as f64 / samples as f64).curvature())
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum of `h` over `samples` equally spaced angles.
    pub fn min_value(&self, samples: usize) -> f64 {
        (0..samples)
            .map(|j| self.value(std::f64::consts::TAU * j as f64 / samples as f64))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates a series given as raw coefficient slices (missing terms are 0).
pub fn eval_coeffs(cos: &[f64], sin: &[f64], theta: f64) -> TrigValues {
    let (s1, c1) = theta.sin_cos();
    let (mut ck, mut sk) = (1.0, 0.0);
    let mut out = TrigValues {
        h: 0.0,
        dh: 0.0,
        d2h: 0.0,
    };
    let len = cos.len().max(sin.len());
    for k in 0..len {
        let kf = k as f64;
        let a = cos.get(k).copied().unwrap_or(0.0);
        let b = if k == 0 {
            0.0
        } else {
            sin.get(k).copied().unwrap_or(0.0)
        };
        let v = a * ck + b * sk;
        out.h += v;
        out.dh += kf * (b * ck - a * sk);
        out.d2h -= kf * kf * v;
        let next_c = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = next_c;
    }
    out
}
