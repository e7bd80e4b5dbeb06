//! Exact spherical integrals of support functions in three dimensions.
//!
//! Every quantity here reduces leafwise to closed forms or to planar
//! projections, where the support function is piecewise sinusoidal with
//! known kinks.

use crate::bodies::{ConvexBody, Flat2D, Polygon, Polytope3};
use crate::error::{Error, Result};
use crate::estimate::Estimate;
use crate::linalg::{cross3, dot3, norm, norm3, scale3, sub3, to3};
use crate::sphere_quadrature::{angular_integral, gauss_legendre, orthonormal_complement, wrap_angle, TWO_PI};
use std::f64::consts::PI;

fn project_point(p: &[f64], e1: [f64; 3], e2: [f64; 3]) -> Vec<f64> {
    let q = to3(p);
    vec![dot3(q, e1), dot3(q, e2)]
}

/// Orthogonal projection of a three-dimensional tree onto `span(e1, e2)`,
/// expressed in that basis.
pub(crate) fn project_body(body: &ConvexBody, e1: [f64; 3], e2: [f64; 3]) -> Result<ConvexBody> {
    // Built without validation: projected generators may vanish.
    Ok(match body {
        ConvexBody::Ball { center, radius } => ConvexBody::Ball {
            center: project_point(center, e1, e2),
            radius: *radius,
        },
        ConvexBody::Polytope { vertices } => ConvexBody::Polytope {
            vertices: vertices.iter().map(|v| project_point(v, e1, e2)).collect(),
        },
        ConvexBody::Segment { center, direction } => ConvexBody::Segment {
            center: project_point(center, e1, e2),
            direction: project_point(direction, e1, e2),
        },
        ConvexBody::Zonotope { center, generators } => ConvexBody::Zonotope {
            center: project_point(center, e1, e2),
            generators: generators.iter().map(|g| project_point(g, e1, e2)).collect(),
        },
        ConvexBody::Sum { children } => ConvexBody::Sum {
            children: children
                .iter()
                .map(|c| project_body(c, e1, e2))
                .collect::<Result<Vec<_>>>()?,
        },
        ConvexBody::Scale { factor, child } => ConvexBody::Scale {
            factor: *factor,
            child: Box::new(project_body(child, e1, e2)?),
        },
        ConvexBody::Smooth2D { .. } => return Err(Error::DimensionMismatch { expected: 3, found: 2 }),
    })
}

/// `∫_{S^2 ∩ θ^⊥} h_C`, the perimeter of the projection of `C` onto `θ^⊥`.
pub fn great_circle_support_integral(body: &ConvexBody, theta: [f64; 3]) -> Result<Estimate> {
    let (e1, e2) = orthonormal_complement(theta);
    let flat = Flat2D::new(&project_body(body, e1, e2)?)?;
    angular_integral(|t| flat.support(t), flat.breaks())
}

/// `∫_0^{angle} h_C(cos ψ a + sin ψ b) dψ` for orthonormal `a, b`.
pub fn arc_support_integral(body: &ConvexBody, a: [f64; 3], b: [f64; 3], angle: f64) -> Result<f64> {
    let flat = Flat2D::new(&project_body(body, a, b)?)?;
    let mut cuts: Vec<f64> = flat
        .breaks()
        .iter()
        .map(|&x| wrap_angle(x))
        .filter(|&x| x > 0.0 && x < angle)
        .collect();
    cuts.push(0.0);
    cuts.push(angle);
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite angles"));
    let gl = gauss_legendre(20);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo <= 0.0 {
            continue;
        }
        // Two panels per smooth piece; each is a short sinusoid.
        let mid = 0.5 * (lo + hi);
        total += gl.integrate(lo, mid, |t| flat.support(t)) + gl.integrate(mid, hi, |t| flat.support(t));
    }
    Ok(total)
}

fn flat_perimeter(points: &[Vec<f64>]) -> f64 {
    // Points that span at most a plane: perimeter of their hull in that plane.
    let p0 = to3(&points[0]);
    let far = points
        .iter()
        .map(|p| to3(p))
        .max_by(|a, b| norm3(sub3(*a, p0)).partial_cmp(&norm3(sub3(*b, p0))).expect("finite"))
        .expect("nonempty");
    let d = sub3(far, p0);
    if norm3(d) == 0.0 {
        return 0.0;
    }
    let e1 = scale3(1.0 / norm3(d), d);
    let normal = points
        .iter()
        .map(|p| cross3(e1, sub3(to3(p), p0)))
        .max_by(|a, b| norm3(*a).partial_cmp(&norm3(*b)).expect("finite"))
        .expect("nonempty");
    let e2 = if norm3(normal) > 1e-14 * norm3(d) {
        let n = scale3(1.0 / norm3(normal), normal);
        cross3(n, e1)
    } else {
        orthonormal_complement(e1).0
    };
    let pts: Vec<[f64; 2]> = points
        .iter()
        .map(|p| {
            let q = sub3(to3(p), p0);
            [dot3(q, e1), dot3(q, e2)]
        })
        .collect();
    Polygon::hull(&pts).perimeter()
}

/// `∫_{S^2} h_K(u) du`, exact for every leaf type.
///
/// For polytopes this is `½ Σ_e ℓ_e θ_e` over edges with exterior angle
/// `θ_e`; planar polytopes give `(π/2)·perimeter`.
pub fn sphere_support_integral_3d(body: &ConvexBody) -> Result<f64> {
    Ok(match body {
        ConvexBody::Ball { radius, .. } => 4.0 * PI * radius,
        ConvexBody::Segment { direction, .. } => TWO_PI * norm(direction),
        ConvexBody::Zonotope { generators, .. } => generators.iter().map(|g| TWO_PI * norm(g)).sum(),
        ConvexBody::Polytope { vertices } => {
            let pts: Vec<[f64; 3]> = vertices.iter().map(|v| to3(v)).collect();
            match Polytope3::hull(&pts) {
                Ok(p) => {
                    0.5 * p
                        .edges()?
                        .iter()
                        .map(|e| norm3(sub3(p.vertices[e.b], p.vertices[e.a])) * Polytope3::exterior_angle(e))
                        .sum::<f64>()
                }
                Err(_) => 0.5 * PI * flat_perimeter(vertices),
            }
        }
        ConvexBody::Sum { children } => children.iter().map(sphere_support_integral_3d).sum::<Result<f64>>()?,
        ConvexBody::Scale { factor, child } => factor * sphere_support_integral_3d(child)?,
        ConvexBody::Smooth2D { .. } => return Err(Error::DimensionMismatch { expected: 3, found: 2 }),
    })
}

/// `∫ h_C dS_{B_2^3, B}`, the mixed area measure of the ball and `B`
/// integrated against `h_C`; linear in `B` leafwise.
pub fn ball_mixed_area_integral_3d(b: &ConvexBody, c: &ConvexBody) -> Result<Estimate> {
    let segment = |d: &[f64]| -> Result<Estimate> {
        let len = norm(d);
        if len == 0.0 {
            return Ok(Estimate::exact(0.0));
        }
        Ok(great_circle_support_integral(c, to3(d))?.scale(len))
    };
    match b {
        ConvexBody::Ball { radius, .. } => Ok(Estimate::exact(radius * sphere_support_integral_3d(c)?)),
        ConvexBody::Segment { direction, .. } => segment(direction),
        ConvexBody::Zonotope { generators, .. } => {
            let mut acc = Estimate::exact(0.0);
            for g in generators {
                acc = acc + segment(g)?;
            }
            Ok(acc)
        }
        ConvexBody::Polytope { vertices } => {
            let pts: Vec<[f64; 3]> = vertices.iter().map(|v| to3(v)).collect();
            let p = Polytope3::hull(&pts)
                .map_err(|_| Error::Unsupported("mixed area term for a lower-dimensional polytope leaf".into()))?;
            let mut acc = 0.0;
            for e in p.edges()? {
                let angle = Polytope3::exterior_angle(&e);
                if angle < 1e-14 {
                    continue;
                }
                let d = dot3(e.n1, e.n2);
                let w = sub3(e.n2, scale3(d, e.n1));
                let w = scale3(1.0 / norm3(w), w);
                let len = norm3(sub3(p.vertices[e.b], p.vertices[e.a]));
                acc += 0.5 * len * arc_support_integral(c, e.n1, w, angle)?;
            }
            Ok(Estimate::new(acc, 1e-14 * acc.abs()))
        }
        ConvexBody::Sum { children } => {
            let mut acc = Estimate::exact(0.0);
            for ch in children {
                acc = acc + ball_mixed_area_integral_3d(ch, c)?;
            }
            Ok(acc)
        }
        ConvexBody::Scale { factor, child } => Ok(ball_mixed_area_integral_3d(child, c)?.scale(*factor)),
        ConvexBody::Smooth2D { .. } => Err(Error::DimensionMismatch { expected: 3, found: 2 }),
    }
}

/// `∫_{S^2} h_B h_C du` on product Gauss grids, refined once for the error.
pub fn sphere_product_integral_3d(b: &ConvexBody, c: &ConvexBody, resolution: usize) -> Result<Estimate> {
    let f = |u: &[f64]| b.support_unchecked(u) * c.support_unchecked(u);
    let fine = crate::sphere_quadrature::build_grid(3, resolution, 0)?.integrate(f)?;
    let coarse = crate::sphere_quadrature::build_grid(3, (resolution / 2).max(4), 0)?.integrate(f)?;
    Ok(Estimate::new(fine, (fine - coarse).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere_quadrature::build_grid;

    fn grid_integral(body: &ConvexBody) -> f64 {
        build_grid(3, 400, 0)
            .unwrap()
            .integrate(|u| body.support_unchecked(u))
            .unwrap()
    }

    #[test]
    fn sphere_integrals_match_quadrature() {
        let bodies = vec![
            ConvexBody::cube(3, 0.7).unwrap(),
            ConvexBody::zonotope(vec![0.1, 0.0, 0.0], vec![vec![1.0, 0.2, 0.0], vec![0.0, 0.5, 0.5]]).unwrap(),
            ConvexBody::sum(vec![
                ConvexBody::ball(vec![0.0, 0.3, 0.0], 0.4).unwrap(),
                ConvexBody::polytope(vec![vec![0.0, 0.0, 0.0], vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap(),
            ])
            .unwrap(),
            ConvexBody::polytope(vec![
                vec![0.0, 0.0, 0.0],
                vec![1.0, 0.1, 0.0],
                vec![0.0, 1.0, 0.2],
                vec![0.3, 0.2, 1.1],
            ])
            .unwrap(),
        ];
        for b in bodies {
            let exact = sphere_support_integral_3d(&b).unwrap();
            let approx = grid_integral(&b);
            assert!((exact - approx).abs() < 1e-4 * exact.abs(), "{exact} vs {approx}");
        }
    }

    #[test]
    fn mixed_area_cube_two_ways() {
        let cube_z = ConvexBody::zonotope(
            vec![0.0; 3],
            vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]],
        )
        .unwrap();
        let cube_p = cube_z.as_polytope().unwrap();
        let c = ConvexBody::polytope(vec![
            vec![-0.5, -0.4, -0.3],
            vec![1.0, 0.1, 0.0],
            vec![0.0, 1.0, 0.2],
            vec![0.3, 0.2, 1.1],
        ])
        .unwrap();
        for target in [c, ConvexBody::centered_ball(3, 1.0).unwrap()] {
            let z = ball_mixed_area_integral_3d(&cube_z, &target).unwrap().value;
            let p = ball_mixed_area_integral_3d(&cube_p, &target).unwrap().value;
            assert!((z - p).abs() < 1e-12 * z.abs(), "{z} vs {p}");
        }
        let z = ball_mixed_area_integral_3d(&cube_z, &ConvexBody::centered_ball(3, 1.0).unwrap()).unwrap();
        assert!((z.value - 6.0 * PI).abs() < 1e-12);
    }
}
