use super::{gauss_legendre, sphere_area, TWO_PI};
use crate::error::{Error, Result};
use crate::measures::normal::gaussian_quantile;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GridKind {
    /// The two points `±1` of `S^0`, weight 1 each.
    Pair1D,
    Trapezoid2D,
    ProductGauss3D,
    QuasiRandomND,
}

/// Nodes and positive weights on `S^{n-1}` with `Σ w = n κ_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    pub dim: usize,
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub kind: GridKind,
}

/// Builds the default rule for `dim`; `seed` only affects `dim ≥ 4`.
pub fn build_grid(dim: usize, resolution: usize, seed: u64) -> Result<SphereGrid> {
    if dim == 0 {
        return Err(Error::InvalidArgument("sphere grid needs dim >= 1".into()));
    }
    if resolution < 4 {
        return Err(Error::InvalidArgument(format!(
            "sphere grid resolution {resolution} < 4"
        )));
    }
    Ok(match dim {
        1 => SphereGrid {
            dim,
            nodes: vec![vec![1.0], vec![-1.0]],
            weights: vec![1.0, 1.0],
            kind: GridKind::Pair1D,
        },
        2 => trapezoid(resolution),
        3 => product_gauss(resolution),
        _ => quasi_random(dim, resolution, seed),
    })
}

fn trapezoid(m: usize) -> SphereGrid {
    let h = TWO_PI / m as f64;
    let nodes = (0..m)
        .map(|j| {
            let (s, c) = (j as f64 * h).sin_cos();
            vec![c, s]
        })
        .collect();
    SphereGrid {
        dim: 2,
        nodes,
        weights: vec![h; m],
        kind: GridKind::Trapezoid2D,
    }
}

fn product_gauss(levels: usize) -> SphereGrid {
    let gl = gauss_legendre(levels);
    let az = 2 * levels;
    let h = TWO_PI / az as f64;
    let mut nodes = Vec::with_capacity(levels * az);
    let mut weights = Vec::with_capacity(levels * az);
    for (z, wz) in gl.nodes.iter().zip(&gl.weights) {
        let r = (1.0 - z * z).max(0.0).sqrt();
        for j in 0..az {
            let (s, c) = ((j as f64 + 0.5) * h).sin_cos();
            nodes.push(vec![r * c, r * s, *z]);
            weights.push(wz * h);
        }
    }
    SphereGrid {
        dim: 3,
        nodes,
        weights,
        kind: GridKind::ProductGauss3D,
    }
}

/// Kronecker sequence with the generalized golden ratio, randomly shifted,
/// pushed through the normal quantile and projected radially.
fn quasi_random(dim: usize, count: usize, seed: u64) -> SphereGrid {
    let mut phi = 2.0_f64;
    for _ in 0..60 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|i| phi.powi(-(i as i32)).fract()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
    let w = sphere_area(dim) / count as f64;
    let mut nodes = Vec::with_capacity(count);
    for j in 0..count {
        let mut x: Vec<f64> = (0..dim)
            .map(|i| {
                let t = (shift[i] + (j as f64 + 1.0) * alpha[i]).fract();
                gaussian_quantile(t.clamp(1e-15, 1.0 - 1e-15)).expect("open unit interval")
            })
            .collect();
        let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        x.iter_mut().for_each(|v| *v /= n);
        nodes.push(x);
    }
    SphereGrid {
        dim,
        nodes,
        weights: vec![w; count],
        kind: GridKind::QuasiRandomND,
    }
}

impl SphereGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ_j w_j f(u_j)`; a non-finite sample is an error.
    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
        let mut s = 0.0;
        for (u, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(u);
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("sphere integrand at {u:?}")));
            }
            s += w * v;
        }
        Ok(s)
    }

    /// Angle of node `j` for planar grids.
    pub fn angle(&self, j: usize) -> f64 {
        let u = &self.nodes[j];
        super::wrap_angle(u[1].atan2(u[0]))
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Free-function form of [`SphereGrid::integrate`].
pub fn integrate(grid: &SphereGrid, f: impl Fn(&[f64]) -> f64) -> Result<f64> {
    grid.integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn eight_point_trapezoid() {
        let g = build_grid(2, 8, 0).unwrap();
        assert_eq!(g.len(), 8);
        for (j, (u, w)) in g.nodes.iter().zip(&g.weights).enumerate() {
            let t = j as f64 * PI / 4.0;
            assert!((u[0] - t.cos()).abs() < 1e-15 && (u[1] - t.sin()).abs() < 1e-15);
            assert!((w - PI / 4.0).abs() < 1e-15);
        }
    }

    #[test]
    fn total_weights() {
        for (dim, res, tol) in [
            (1, 4, 1e-14),
            (2, 100, 1e-12),
            (3, 16, 1e-12),
            (4, 20_000, 1e-3),
            (5, 20_000, 1e-3),
        ] {
            let g = build_grid(dim, res, 3).unwrap();
            let rel = (g.total_weight() / sphere_area(dim) - 1.0).abs();
            assert!(rel < tol, "dim {dim}: {rel}");
            for u in &g.nodes {
                let n = u.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn third_coordinate_squared_on_s2() {
        let g = build_grid(3, 16, 0).unwrap();
        let v = g.integrate(|u| u[2] * u[2]).unwrap();
        assert!((v - 4.0 * PI / 3.0).abs() < 1e-10);
    }

    #[test]
    fn odd_integrand_vanishes() {
        let g = build_grid(2, 2048, 0).unwrap();
        let v = g.integrate(|u| 0.3 * u[0] - 0.7 * u[1]).unwrap();
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn abs_cos_trapezoid_sum_has_closed_form() {
        // The periodic trapezoid sum of |cos θ| with M = 256 nodes equals
        // 2h·cot(h/2), which differs from the integral 4 by about h²/3.
        let g = build_grid(2, 256, 0).unwrap();
        let v = g.integrate(|u| u[0].abs()).unwrap();
        let h = 2.0 * PI / 256.0;
        assert!((v - 2.0 * h / (h / 2.0).tan()).abs() < 1e-12);
        assert!((v - 4.0).abs() < 1.01 * h * h / 3.0);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(build_grid(0, 8, 0).is_err());
        assert!(build_grid(2, 3, 0).is_err());
    }

    #[test]
    fn non_finite_is_an_error() {
        let g = build_grid(2, 8, 0).unwrap();
        assert!(g.integrate(|u| 1.0 / (u[1])).is_err());
    }
}
