//! Convex bodies as support-function trees.
//!
//! A [`ConvexBody`] is a tree of primitives (balls, polytopes, zonotopes,
//! segments, planar Fourier bodies) under Minkowski sums and nonnegative
//! dilations. Bodies keep their absolute position: weighted measures are not
//! translation invariant, so nothing here ever recenters.
//!
//! In the plane every tree flattens into [`Flat2D`], a Fourier part plus a
//! polygon, which is what the quadrature code consumes.

mod flat;
pub mod io;
mod polygon;
pub mod polytope3;
mod random;
mod trig;

pub use flat::Flat2D;
pub use polygon::{Edge, Polygon};
pub use polytope3::Polytope3;
pub use random::{random_body, random_body_with_origin, BodyKind};
pub use trig::{TrigSeries, TrigValues};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{add_assign, axpy, dot, lex_cmp, norm};
use serde::{Deserialize, Serialize};

/// Highest harmonic accepted in a [`ConvexBody::Smooth2D`] leaf.
pub const MAX_DEGREE: usize = 16;

/// Number of angles used for the planar curvature-positivity check.
pub const CURVATURE_CHECK_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConvexBody {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Zonotope {
        center: Vec<f64>,
        generators: Vec<Vec<f64>>,
    },
    /// `center + [-direction, direction]`.
    Segment {
        center: Vec<f64>,
        direction: Vec<f64>,
    },
    /// Planar body with `h(θ) = Σ cos[k] cos kθ + sin[k] sin kθ`.
    #[serde(rename = "smooth_2d")]
    Smooth2D {
        cos: Vec<f64>,
        sin: Vec<f64>,
    },
    Sum {
        children: Vec<ConvexBody>,
    },
    Scale {
        factor: f64,
        child: Box<ConvexBody>,
    },
}

fn sgn(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let b = Self::Ball { center, radius };
        b.validate()?;
        Ok(b)
    }

    /// Centered Euclidean ball of radius `r` in `R^dim`.
    pub fn centered_ball(dim: usize, r: f64) -> Result<Self> {
        Self::ball(vec![0.0; dim], r)
    }

    pub fn polytope(mut vertices: Vec<Vec<f64>>) -> Result<Self> {
        let mut seen: Vec<Vec<f64>> = Vec::with_capacity(vertices.len());
        for v in vertices.drain(..) {
            if !seen.contains(&v) {
                seen.push(v);
            }
        }
        let p = Self::Polytope { vertices: seen };
        p.validate()?;
        Ok(p)
    }

    /// The single point `p`.
    pub fn point(p: Vec<f64>) -> Result<Self> {
        Self::polytope(vec![p])
    }

    /// Axis-parallel cube `[-a, a]^dim`.
    pub fn cube(dim: usize, a: f64) -> Result<Self> {
        let gens = (0..dim)
            .map(|i| {
                let mut g = vec![0.0; dim];
                g[i] = a;
                g
            })
            .collect();
        Self::zonotope(vec![0.0; dim], gens)?.as_polytope()
    }

    pub fn zonotope(center: Vec<f64>, generators: Vec<Vec<f64>>) -> Result<Self> {
        let z = Self::Zonotope { center, generators };
        z.validate()?;
        Ok(z)
    }

    pub fn segment(center: Vec<f64>, direction: Vec<f64>) -> Result<Self> {
        let s = Self::Segment { center, direction };
        s.validate()?;
        Ok(s)
    }

    pub fn smooth_2d(cos: Vec<f64>, sin: Vec<f64>) -> Result<Self> {
        let t = TrigSeries::new(cos, sin);
        let s = Self::Smooth2D { cos: t.cos, sin: t.sin };
        s.validate()?;
        Ok(s)
    }

    pub fn sum(children: Vec<ConvexBody>) -> Result<Self> {
        let s = Self::Sum { children };
        s.validate()?;
        Ok(s)
    }

    pub fn scale(factor: f64, child: ConvexBody) -> Result<Self> {
        let s = Self::Scale {
            factor,
            child: Box::new(child),
        };
        s.validate()?;
        Ok(s)
    }

    /// `self + t·other`.
    pub fn plus_scaled(&self, t: f64, other: &ConvexBody) -> Result<Self> {
        Self::sum(vec![self.clone(), Self::scale(t, other.clone())?])
    }

    pub fn plus(&self, other: &ConvexBody) -> Result<Self> {
        Self::sum(vec![self.clone(), other.clone()])
    }

    /// Reflection `-K`, applied leaf by leaf.
    pub fn negated(&self) -> Self {
        let neg = |v: &Vec<f64>| v.iter().map(|x| -x).collect::<Vec<f64>>();
        match self {
            Self::Ball { center, radius } => Self::Ball {
                center: neg(center),
                radius: *radius,
            },
            Self::Polytope { vertices } => Self::Polytope {
                vertices: vertices.iter().map(neg).collect(),
            },
            Self::Zonotope { center, generators } => Self::Zonotope {
                center: neg(center),
                generators: generators.clone(),
            },
            Self::Segment { center, direction } => Self::Segment {
                center: neg(center),
                direction: direction.clone(),
            },
            Self::Smooth2D { cos, sin } => {
                let t = TrigSeries::new(cos.clone(), sin.clone()).negated();
                Self::Smooth2D { cos: t.cos, sin: t.sin }
            }
            Self::Sum { children } => Self::Sum {
                children: children.iter().map(Self::negated).collect(),
            },
            Self::Scale { factor, child } => Self::Scale {
                factor: *factor,
                child: Box::new(child.negated()),
            },
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Ball { center, .. } => center.len(),
            Self::Polytope { vertices } => vertices.first().map_or(0, Vec::len),
            Self::Zonotope { center, .. } => center.len(),
            Self::Segment { center, .. } => center.len(),
            Self::Smooth2D { .. } => 2,
            Self::Sum { children } => children.first().map_or(0, Self::dim),
            Self::Scale { child, .. } => child.dim(),
        }
    }

    /// Checks the structural invariants; deserialized bodies should pass here.
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64], what: &str| -> Result<()> {
            if v.iter().all(|x| x.is_finite()) {
                Ok(())
            } else {
                Err(Error::NonFinite(what.to_string()))
            }
        };
        match self {
            Self::Ball { center, radius } => {
                finite(center, "ball center")?;
                if center.is_empty() {
                    return Err(Error::InvalidArgument("ball of dimension 0".into()));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::InvalidArgument(format!("ball radius {radius} must be positive")));
                }
            }
            Self::Polytope { vertices } => {
                let d = vertices
                    .first()
                    .ok_or_else(|| Error::InvalidArgument("polytope without vertices".into()))?
                    .len();
                if d == 0 {
                    return Err(Error::InvalidArgument("polytope of dimension 0".into()));
                }
                for v in vertices {
                    check_dim(d, v.len())?;
                    finite(v, "polytope vertex")?;
                }
            }
            Self::Zonotope { center, generators } => {
                finite(center, "zonotope center")?;
                if center.is_empty() {
                    return Err(Error::InvalidArgument("zonotope of dimension 0".into()));
                }
                for g in generators {
                    check_dim(center.len(), g.len())?;
                    finite(g, "zonotope generator")?;
                    if norm(g) == 0.0 {
                        return Err(Error::InvalidArgument("zero zonotope generator".into()));
                    }
                }
            }
            Self::Segment { center, direction } => {
                check_dim(center.len(), direction.len())?;
                finite(center, "segment center")?;
                finite(direction, "segment direction")?;
                if center.is_empty() || norm(direction) == 0.0 {
                    return Err(Error::InvalidArgument("degenerate segment direction".into()));
                }
            }
            Self::Smooth2D { cos, sin } => {
                finite(cos, "smooth coefficients")?;
                finite(sin, "smooth coefficients")?;
                let t = TrigSeries::new(cos.clone(), sin.clone());
                if t.degree() > MAX_DEGREE {
                    return Err(Error::InvalidArgument(format!(
                        "smooth body of degree {} above cap {MAX_DEGREE}",
                        t.degree()
                    )));
                }
                let fmin = t.min_curvature(CURVATURE_CHECK_SAMPLES);
                if fmin <= 0.0 {
                    return Err(Error::NotSmooth(format!("minimum curvature radius {fmin:e}")));
                }
            }
            Self::Sum { children } => {
                if children.len() < 2 {
                    return Err(Error::InvalidArgument("sum needs at least two children".into()));
                }
                let d = children[0].dim();
                for c in children {
                    check_dim(d, c.dim())?;
                    c.validate()?;
                }
            }
            Self::Scale { factor, child } => {
                if !(factor.is_finite() && *factor >= 0.0) {
                    return Err(Error::InvalidArgument(format!("scale factor {factor} must be >= 0")));
                }
                child.validate()?;
            }
        }
        Ok(())
    }

    fn check_input(&self, u: &[f64]) -> Result<()> {
        check_dim(self.dim(), u.len())
    }

    /// `h_K(u)`, extended positively homogeneously off the sphere.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_input(u)?;
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &[f64]) -> f64 {
        match self {
            Self::Ball { center, radius } => dot(center, u) + radius * norm(u),
            Self::Polytope { vertices } => vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max),
            Self::Zonotope { center, generators } => {
                dot(center, u) + generators.iter().map(|g| dot(g, u).abs()).sum::<f64>()
            }
            Self::Segment { center, direction } => dot(center, u) + dot(direction, u).abs(),
            Self::Smooth2D { cos, sin } => {
                let r = norm(u);
                if r == 0.0 {
                    0.0
                } else {
                    r * trig::eval_coeffs(cos, sin, u[1].atan2(u[0])).h
                }
            }
            Self::Sum { children } => children.iter().map(|c| c.support_unchecked(u)).sum(),
            Self::Scale { factor, child } => factor * child.support_unchecked(u),
        }
    }

    /// `∇h_K(u)`: the boundary point with outer normal `u` where unique,
    /// made total by lexicographic vertex tie-breaking and `sgn(0) = +1`.
    pub fn support_gradient(&self, u: &[f64]) -> Result<Vec<f64>> {
        self.check_input(u)?;
        Ok(self.gradient_unchecked(u))
    }

    pub(crate) fn gradient_unchecked(&self, u: &[f64]) -> Vec<f64> {
        match self {
            Self::Ball { center, radius } => {
                let r = norm(u);
                let mut g = center.clone();
                if r > 0.0 {
                    axpy(&mut g, radius / r, u);
                }
                g
            }
            Self::Polytope { vertices } => {
                let h = vertices.iter().map(|v| dot(v, u)).fold(f64::NEG_INFINITY, f64::max);
                let scale = vertices.iter().map(|v| norm(v)).fold(0.0, f64::max) * norm(u);
                let tol = 1e-13 * (scale + 1.0);
                vertices
                    .iter()
                    .filter(|v| dot(v, u) >= h - tol)
                    .min_by(|a, b| lex_cmp(a, b))
                    .expect("polytope has a vertex")
                    .clone()
            }
            Self::Zonotope { center, generators } => {
                let mut g = center.clone();
                for gen in generators {
                    axpy(&mut g, sgn(dot(gen, u)), gen);
                }
                g
            }
            Self::Segment { center, direction } => {
                let mut g = center.clone();
                axpy(&mut g, sgn(dot(direction, u)), direction);
                g
            }
            Self::Smooth2D { cos, sin } => {
                let theta = u[1].atan2(u[0]);
                let v = trig::eval_coeffs(cos, sin, theta);
                v.gradient(theta).to_vec()
            }
            Self::Sum { children } => {
                let mut g = vec![0.0; self.dim()];
                for c in children {
                    add_assign(&mut g, &c.gradient_unchecked(u));
                }
                g
            }
            Self::Scale { factor, child } => child.gradient_unchecked(u).iter().map(|x| factor * x).collect(),
        }
    }

    /// Planar curvature radius `f = h″ + h` for bodies built from smooth leaves.
    pub fn curvature_2d(&self, theta: f64) -> Result<f64> {
        check_dim(2, self.dim())?;
        match self {
            Self::Ball { radius, .. } => Ok(*radius),
            Self::Smooth2D { cos, sin } => Ok(trig::eval_coeffs(cos, sin, theta).curvature()),
            Self::Sum { children } => children.iter().map(|c| c.curvature_2d(theta)).sum(),
            Self::Scale { factor, child } => Ok(factor * child.curvature_2d(theta)?),
            _ => Err(Error::Unsupported(
                "curvature of a polytopal leaf is atomic; use surface_area_measure".into(),
            )),
        }
    }

    /// Counterclockwise vertices of a planar polytopal tree.
    pub fn boundary_polygon_2d(&self) -> Result<Vec<[f64; 2]>> {
        check_dim(2, self.dim())?;
        let flat = Flat2D::new(self)?;
        if flat.trig.is_some() {
            return Err(Error::Unsupported(
                "boundary polygon of a body with smooth leaves".into(),
            ));
        }
        Ok(flat.poly.vertices)
    }

    /// Whether every leaf is a polytope, zonotope or segment.
    pub fn is_polytopal(&self) -> bool {
        match self {
            Self::Polytope { .. } | Self::Zonotope { .. } | Self::Segment { .. } => true,
            Self::Ball { .. } | Self::Smooth2D { .. } => false,
            Self::Sum { children } => children.iter().all(Self::is_polytopal),
            Self::Scale { factor, child } => *factor == 0.0 || child.is_polytopal(),
        }
    }

    /// Whether every leaf is a zonotope or segment (a zonotope tree).
    pub fn is_zonotopal(&self) -> bool {
        match self {
            Self::Zonotope { .. } | Self::Segment { .. } => true,
            Self::Polytope { vertices } => vertices.len() == 1,
            Self::Ball { .. } | Self::Smooth2D { .. } => false,
            Self::Sum { children } => children.iter().all(Self::is_zonotopal),
            Self::Scale { child, .. } => child.is_zonotopal(),
        }
    }

    /// Vertex set for polytopal trees (pairwise sums, hull-pruned in 2D and 3D).
    pub fn polytope_vertices(&self) -> Result<Vec<Vec<f64>>> {
        if !self.is_polytopal() {
            return Err(Error::Unsupported("vertex set of a non-polytopal body".into()));
        }
        match self.dim() {
            2 => Ok(Flat2D::new(self)?.poly.vertices.iter().map(|v| v.to_vec()).collect()),
            3 => Ok(Polytope3::from_body(self)?
                .vertices
                .iter()
                .map(|v| v.to_vec())
                .collect()),
            _ => polytope3::raw_vertices(self),
        }
    }

    /// Replaces a polytopal tree by a single polytope leaf.
    pub fn as_polytope(&self) -> Result<Self> {
        Self::polytope(self.polytope_vertices()?)
    }

    /// Minimum of the support function over a grid; positive iff the origin
    /// is interior (up to grid resolution).
    pub fn min_support(&self, grid: &crate::sphere_quadrature::SphereGrid) -> Result<f64> {
        check_dim(self.dim(), grid.dim)?;
        Ok(grid
            .nodes
            .iter()
            .map(|u| self.support_unchecked(u))
            .fold(f64::INFINITY, f64::min))
    }

    /// Origin interior check used by routines stated for bodies in `K^n_0`.
    pub fn contains_origin_interior(&self) -> Result<bool> {
        let d = self.dim();
        if d == 2 {
            let flat = Flat2D::new(self)?;
            return Ok(flat.min_support() > 0.0);
        }
        if d == 1 {
            return Ok(self.support_unchecked(&[1.0]) > 0.0 && self.support_unchecked(&[-1.0]) > 0.0);
        }
        let grid = crate::sphere_quadrature::build_grid(d, if d == 3 { 32 } else { 20_000 }, 0)?;
        Ok(self.min_support(&grid)? > 0.0)
    }

    /// Smallest `h` such that `K ⊆ [-h, h]^n`.
    pub fn bounding_half_width(&self) -> f64 {
        let d = self.dim();
        let mut m: f64 = 0.0;
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            m = m.max(self.support_unchecked(&e));
            e[i] = -1.0;
            m = m.max(self.support_unchecked(&e));
        }
        m
    }

    /// Whether the tree contains a ball leaf (needs the ball decomposition in 3D).
    pub fn ball_radius_and_rest(&self) -> Option<(f64, Vec<f64>, Option<ConvexBody>)> {
        split_ball(self)
    }
}

/// Splits a tree into `c + R·B + Q` with `Q` polytopal; `None` if some leaf is
/// neither a ball nor polytopal.
fn split_ball(body: &ConvexBody) -> Option<(f64, Vec<f64>, Option<ConvexBody>)> {
    let d = body.dim();
    match body {
        ConvexBody::Ball { center, radius } => Some((*radius, center.clone(), None)),
        ConvexBody::Smooth2D { .. } => None,
        b if b.is_polytopal() => Some((0.0, vec![0.0; d], Some(b.clone()))),
        ConvexBody::Sum { children } => {
            let mut r = 0.0;
            let mut c = vec![0.0; d];
            let mut rest = Vec::new();
            for ch in children {
                let (rr, cc, q) = split_ball(ch)?;
                r += rr;
                add_assign(&mut c, &cc);
                rest.extend(q);
            }
            let q = match rest.len() {
                0 => None,
                1 => rest.pop(),
                _ => Some(ConvexBody::Sum { children: rest }),
            };
            Some((r, c, q))
        }
        ConvexBody::Scale { factor, child } => {
            let (r, c, q) = split_ball(child)?;
            let q = match q {
                Some(q) if *factor > 0.0 => Some(ConvexBody::Scale {
                    factor: *factor,
                    child: Box::new(q),
                }),
                _ => None,
            };
            Some((factor * r, c.iter().map(|x| factor * x).collect(), q))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexBody {
        ConvexBody::cube(2, 1.0).unwrap()
    }

    #[test]
    fn segment_support_and_gradient() {
        let xi = vec![0.6, 0.8];
        let s = ConvexBody::segment(vec![0.0, 0.0], xi.clone()).unwrap();
        let u = [-0.8, -0.6];
        assert!((s.support(&u).unwrap() - (xi[0] * u[0] + xi[1] * u[1]).abs()).abs() < 1e-15);
        assert_eq!(s.support_gradient(&u).unwrap(), vec![-0.6, -0.8]);
    }

    #[test]
    fn ball_support_and_gradient() {
        let b = ConvexBody::centered_ball(3, 2.0).unwrap();
        assert_eq!(b.support(&[0.0, 1.0, 0.0]).unwrap(), 2.0);
        assert_eq!(b.support_gradient(&[0.0, 0.0, 1.0]).unwrap(), vec![0.0, 0.0, 2.0]);
    }

    #[test]
    fn square_plus_disk() {
        let s = square().plus(&ConvexBody::centered_ball(2, 1.0).unwrap()).unwrap();
        assert_eq!(s.support(&[1.0, 0.0]).unwrap(), 2.0);
    }

    #[test]
    fn smooth_disk_gradient() {
        let d = ConvexBody::smooth_2d(vec![1.5], vec![]).unwrap();
        let t: f64 = 0.7;
        let g = d.support_gradient(&[t.cos(), t.sin()]).unwrap();
        assert!((g[0] - 1.5 * t.cos()).abs() < 1e-15 && (g[1] - 1.5 * t.sin()).abs() < 1e-15);
    }

    #[test]
    fn curvature_examples() {
        let s = ConvexBody::smooth_2d(vec![2.0, 0.0, 0.3], vec![]).unwrap();
        assert!((s.curvature_2d(0.5).unwrap() - (2.0 - 0.9 * 1.0_f64.cos())).abs() < 1e-14);
        let two = ConvexBody::sum(vec![
            ConvexBody::centered_ball(2, 1.0).unwrap(),
            ConvexBody::ball(vec![1.0, 0.0], 0.5).unwrap(),
        ])
        .unwrap();
        assert_eq!(two.curvature_2d(1.0).unwrap(), 1.5);
        assert!(square().curvature_2d(0.0).is_err());
    }

    #[test]
    fn polygon_examples() {
        let z = ConvexBody::zonotope(vec![0.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(
            z.boundary_polygon_2d().unwrap(),
            vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
        );
        let s2 = ConvexBody::scale(2.0, square()).unwrap();
        assert_eq!(
            s2.boundary_polygon_2d().unwrap(),
            vec![[-2.0, -2.0], [2.0, -2.0], [2.0, 2.0], [-2.0, 2.0]]
        );
    }

    #[test]
    fn rejects_non_convex_smooth_and_bad_scale() {
        assert!(matches!(
            ConvexBody::smooth_2d(vec![1.0, 0.0, 0.5], vec![]),
            Err(Error::NotSmooth(_))
        ));
        assert!(ConvexBody::scale(-1.0, square()).is_err());
        assert!(square().support(&[1.0, 0.0, 0.0]).is_err());
    }

    #[test]
    fn negation_reflects() {
        let k = ConvexBody::sum(vec![
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.1, 1.0]]).unwrap(),
            ConvexBody::smooth_2d(vec![1.0, 0.3, 0.1], vec![0.0, 0.2, 0.05]).unwrap(),
        ])
        .unwrap();
        let n = k.negated();
        for t in [0.1_f64, 1.9, 4.4] {
            let u = [t.cos(), t.sin()];
            let v = [-u[0], -u[1]];
            assert!((n.support(&u).unwrap() - k.support(&v).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn ball_split() {
        let k = ConvexBody::sum(vec![
            ConvexBody::centered_ball(3, 1.0).unwrap(),
            ConvexBody::scale(0.5, ConvexBody::cube(3, 1.0).unwrap()).unwrap(),
        ])
        .unwrap();
        let (r, c, q) = k.ball_radius_and_rest().unwrap();
        assert_eq!(r, 1.0);
        assert_eq!(c, vec![0.0; 3]);
        assert!(q.unwrap().is_polytopal());
    }
}
