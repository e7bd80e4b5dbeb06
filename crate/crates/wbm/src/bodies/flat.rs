//! Planar normal form: Fourier part plus polygon.

use super::{ConvexBody, Polygon, TrigSeries};
use crate::error::{check_dim, Result};
use crate::sphere_quadrature::{wrap_angle, TWO_PI};

/// `K = S + P` with `S` given by a Fourier series (possibly absent) and `P`
/// a polygon (possibly a point or a segment).
#[derive(Debug, Clone, PartialEq)]
pub struct Flat2D {
    pub trig: Option<TrigSeries>,
    pub poly: Polygon,
    fan_angles: Vec<f64>,
    fan_vertices: Vec<[f64; 2]>,
}

fn flatten(body: &ConvexBody) -> (Option<TrigSeries>, Vec<Polygon>) {
    match body {
        ConvexBody::Ball { center, radius } => (Some(TrigSeries::ball([center[0], center[1]], *radius)), Vec::new()),
        ConvexBody::Smooth2D { cos, sin } => (Some(TrigSeries::new(cos.clone(), sin.clone())), Vec::new()),
        ConvexBody::Polytope { vertices } => {
            let pts: Vec<[f64; 2]> = vertices.iter().map(|v| [v[0], v[1]]).collect();
            (None, vec![Polygon::hull(&pts)])
        }
        ConvexBody::Segment { center, direction } => {
            let a = [center[0] - direction[0], center[1] - direction[1]];
            let b = [center[0] + direction[0], center[1] + direction[1]];
            (None, vec![Polygon::hull(&[a, b])])
        }
        ConvexBody::Zonotope { center, generators } => {
            let mut parts = vec![Polygon::point([center[0], center[1]])];
            for g in generators {
                parts.push(Polygon::hull(&[[-g[0], -g[1]], [g[0], g[1]]]));
            }
            (None, parts)
        }
        ConvexBody::Sum { children } => {
            let mut trig: Option<TrigSeries> = None;
            let mut polys = Vec::new();
            for c in children {
                let (t, p) = flatten(c);
                trig = match (trig, t) {
                    (Some(a), Some(b)) => Some(a.add(&b)),
                    (a, b) => a.or(b),
                };
                polys.extend(p);
            }
            (trig, polys)
        }
        ConvexBody::Scale { factor, child } => {
            if *factor == 0.0 {
                return (None, Vec::new());
            }
            let (t, p) = flatten(child);
            (
                t.map(|t| t.scaled(*factor)),
                p.iter().map(|q| q.scaled(*factor)).collect(),
            )
        }
    }
}

impl Flat2D {
    pub fn new(body: &ConvexBody) -> Result<Self> {
        check_dim(2, body.dim())?;
        let (trig, polys) = flatten(body);
        let poly = if polys.is_empty() {
            Polygon::point([0.0, 0.0])
        } else {
            let refs: Vec<&Polygon> = polys.iter().collect();
            Polygon::sum_all(&refs)
        };
        let (fan_angles, fan_vertices) = poly.normal_fan();
        Ok(Self {
            trig,
            poly,
            fan_angles,
            fan_vertices,
        })
    }

    /// Edge-normal angles of the polygonal part (kinks of `h`, atoms of `S_K`).
    pub fn breaks(&self) -> &[f64] {
        &self.fan_angles
    }

    /// Support vertex of the polygonal part for `θ` off the normal angles.
    pub fn vertex_at(&self, theta: f64) -> [f64; 2] {
        if self.fan_angles.is_empty() {
            return self.poly.vertices[0];
        }
        let t = wrap_angle(theta);
        let i = self.fan_angles.partition_point(|&a| a <= t);
        if i == 0 {
            *self.fan_vertices.last().expect("nonempty fan")
        } else {
            self.fan_vertices[i - 1]
        }
    }

    pub fn support(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        self.poly.support([c, s]) + self.trig.as_ref().map_or(0.0, |t| t.value(theta))
    }

    /// `∇h(θ)`; on the polygon's normal angles the fan vertex is used.
    pub fn gradient(&self, theta: f64) -> [f64; 2] {
        let v = self.vertex_at(theta);
        match &self.trig {
            Some(t) => {
                let g = t.eval(theta).gradient(theta);
                [g[0] + v[0], g[1] + v[1]]
            }
            None => v,
        }
    }

    /// `h′(θ) = ⟨∇h(θ), u′(θ)⟩`, defined off the normal angles.
    pub fn dsupport(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let g = self.gradient(theta);
        -g[0] * s + g[1] * c
    }

    /// Density part of `S_K`: the Fourier curvature radius (0 without one).
    pub fn smooth_curvature(&self, theta: f64) -> f64 {
        self.trig.as_ref().map_or(0.0, |t| t.eval(theta).curvature())
    }

    /// Gradient of the Fourier part only (origin if absent).
    pub fn smooth_gradient(&self, theta: f64) -> [f64; 2] {
        self.trig.as_ref().map_or([0.0, 0.0], |t| t.eval(theta).gradient(theta))
    }

    pub fn is_polygon(&self) -> bool {
        self.trig.is_none()
    }

    /// `C²₊`: no polygonal part and positive curvature radius.
    pub fn is_c2_plus(&self) -> bool {
        self.poly.len() == 1
            && self
                .trig
                .as_ref()
                .is_some_and(|t| t.min_curvature(super::CURVATURE_CHECK_SAMPLES) > 0.0)
    }

    /// Minimum of `h` over fine angles plus the polygon's vertex directions.
    pub fn min_support(&self) -> f64 {
        let m = 4096;
        let mut best = (0..m)
            .map(|j| self.support(TWO_PI * j as f64 / m as f64))
            .fold(f64::INFINITY, f64::min);
        if self.trig.is_none() {
            if self.poly.len() < 3 {
                return best.min(0.0);
            }
            for e in self.poly.edges() {
                let h = e.start[0] * e.normal[0] + e.start[1] * e.normal[1];
                best = best.min(h);
            }
        }
        best
    }

    /// Steiner point `(1/π) ∫ h(θ) u(θ) dθ`, always in the relative interior.
    pub fn steiner_point(&self) -> [f64; 2] {
        let m = 4096;
        let mut p = [0.0, 0.0];
        for j in 0..m {
            let t = TWO_PI * (j as f64 + 0.5) / m as f64;
            let h = self.support(t);
            p[0] += h * t.cos();
            p[1] += h * t.sin();
        }
        let w = TWO_PI / m as f64 / std::f64::consts::PI;
        [p[0] * w, p[1] * w]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_tree_support_matches_body() {
        let k = ConvexBody::sum(vec![
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.1, 1.0]]).unwrap(),
            ConvexBody::smooth_2d(vec![1.0, 0.3, 0.1], vec![0.0, 0.2, 0.05]).unwrap(),
            ConvexBody::scale(0.5, ConvexBody::ball(vec![0.2, -0.1], 1.0).unwrap()).unwrap(),
        ])
        .unwrap();
        let f = Flat2D::new(&k).unwrap();
        for j in 0..50 {
            let t = 0.1257 * j as f64;
            let u = [t.cos(), t.sin()];
            assert!((f.support(t) - k.support(&u).unwrap()).abs() < 1e-13);
            let g = k.support_gradient(&u).unwrap();
            let gf = f.gradient(t);
            assert!((g[0] - gf[0]).abs() < 1e-12 && (g[1] - gf[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn steiner_point_of_translate() {
        let k = ConvexBody::ball(vec![0.3, -0.2], 1.0).unwrap();
        let p = Flat2D::new(&k).unwrap().steiner_point();
        assert!((p[0] - 0.3).abs() < 1e-12 && (p[1] + 0.2).abs() < 1e-12);
    }
}
