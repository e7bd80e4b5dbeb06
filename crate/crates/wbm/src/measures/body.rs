use super::WeightedMeasure;
use crate::bodies::polytope3::raw_vertices;
use crate::bodies::{ConvexBody, Flat2D, Polytope3};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::linalg::{add3, cross3, dot3, norm3, scale3, sub3};
use crate::sphere_quadrature::{
    angular_integral, build_grid, default_resolution, gauss_legendre, orthonormal_complement, GaussLegendre, TWO_PI,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// How `μ(K)` is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum MeasureMethod {
    /// Planar fan decomposition of the region with tensor Gauss rules.
    #[serde(rename = "boundary_2d")]
    Boundary2D,
    /// Spherical integral of the radial mass up to the radial function.
    PolarRadial,
    /// Uniform sampling in the bounding box.
    MonteCarlo { seed: u64 },
    /// `c + R·B + Q` split into the polytope, facet prisms, edge wedges and
    /// vertex sectors (three dimensions).
    #[serde(rename = "parallel_body_3d")]
    ParallelBody3D,
}

const REGION_REL_TOL: f64 = 1e-13;
const REGION_MAX_LEVEL: u32 = 5;
const MONTE_CARLO_DEFAULT: usize = 100_000;
const PARALLEL_DEFAULT_ORDER: usize = 16;

/// `μ(K)`, choosing the most accurate applicable method.
pub fn measure(mu: &WeightedMeasure, body: &ConvexBody) -> Result<Estimate> {
    match body.dim() {
        1 | 2 => measure_of_body(mu, body, MeasureMethod::Boundary2D, 0),
        _ => {
            if body.ball_radius_and_rest().is_some() {
                match measure_of_body(mu, body, MeasureMethod::ParallelBody3D, 0) {
                    Err(Error::Unsupported(_)) | Err(Error::DimensionMismatch { .. }) => {}
                    other => return other,
                }
            }
            if mu.has_radial() && body.contains_origin_interior()? {
                measure_of_body(mu, body, MeasureMethod::PolarRadial, 0)
            } else {
                measure_of_body(mu, body, MeasureMethod::MonteCarlo { seed: 0 }, 0)
            }
        }
    }
}

/// `μ(K)` with an error estimate. `budget = 0` selects the default for the
/// method: grid resolution (PolarRadial), sample count (MonteCarlo) or
/// Gauss order (ParallelBody3D). Boundary2D is adaptive and ignores it.
pub fn measure_of_body(
    mu: &WeightedMeasure,
    body: &ConvexBody,
    method: MeasureMethod,
    budget: usize,
) -> Result<Estimate> {
    check_dim(mu.dim, body.dim())?;
    if body.dim() == 1 {
        return interval_measure(mu, body);
    }
    let est = match method {
        MeasureMethod::Boundary2D => {
            let flat = Flat2D::new(body)?;
            region_integral_2d(&flat, |x| mu.density_unchecked(&x))?
        }
        MeasureMethod::PolarRadial => {
            mu.w(0.0)?;
            if body.dim() == 2 {
                polar_2d(mu, &Flat2D::new(body)?)?
            } else {
                polar_nd(mu, body, budget)?
            }
        }
        MeasureMethod::MonteCarlo { seed } => monte_carlo(mu, body, budget, seed)?,
        MeasureMethod::ParallelBody3D => parallel_body_3d(mu, body, budget)?,
    };
    if est.value.is_finite() && est.error.is_finite() {
        Ok(est)
    } else {
        Err(Error::NonFinite(format!("measure of body under {}", mu.name())))
    }
}

fn interval_measure(mu: &WeightedMeasure, body: &ConvexBody) -> Result<Estimate> {
    let a = -body.support(&[-1.0])?;
    let b = body.support(&[1.0])?;
    if b <= a {
        return Ok(Estimate::exact(0.0));
    }
    match mu.family {
        super::MeasureFamily::Lebesgue => Ok(Estimate::exact(b - a)),
        super::MeasureFamily::Gaussian => {
            let v = super::normal::gaussian_interval(a, b);
            Ok(Estimate::new(v, 1e-15 * v))
        }
        _ => crate::sphere_quadrature::adaptive_gauss(|x| mu.density_unchecked(&[x]), a, b, 1e-14),
    }
}

fn composite(gl: &GaussLegendre, a: f64, b: f64, panels: usize) -> Vec<(f64, f64)> {
    let h = (b - a) / panels as f64;
    let mut out = Vec::with_capacity(panels * gl.nodes.len());
    for p in 0..panels {
        let lo = a + p as f64 * h;
        for (x, w) in gl.nodes.iter().zip(&gl.weights) {
            out.push((lo + 0.5 * h * (x + 1.0), 0.5 * h * w));
        }
    }
    out
}

/// Point of the region used as the fan apex: the origin when interior,
/// otherwise the Steiner point.
pub(crate) fn fan_apex(flat: &Flat2D) -> [f64; 2] {
    if flat.min_support() > 0.0 {
        [0.0, 0.0]
    } else {
        flat.steiner_point()
    }
}

fn has_curved_part(flat: &Flat2D) -> bool {
    flat.trig
        .as_ref()
        .is_some_and(|t| (0..256).any(|j| t.eval(TWO_PI * j as f64 / 256.0).curvature().abs() > 0.0))
}

/// `∫_K f(x) dx` over a planar body `K = S + P`.
///
/// The region is fanned from an interior point into curved sectors over
/// the angular ranges between the normals of `P` and triangles on the
/// flat edges; Gauss-Legendre panels are doubled in both directions until
/// the sum stabilizes.
pub fn region_integral_2d(flat: &Flat2D, f: impl Fn([f64; 2]) -> f64 + Sync) -> Result<Estimate> {
    let curved = has_curved_part(flat);
    if !curved && flat.poly.len() < 3 {
        return Ok(Estimate::exact(0.0));
    }
    let p = fan_apex(flat);
    let mut sectors: Vec<(f64, f64, [f64; 2])> = Vec::new();
    if curved {
        let br = flat.breaks();
        if br.is_empty() {
            sectors.push((0.0, TWO_PI, flat.poly.vertices[0]));
        } else {
            for i in 0..br.len() {
                let a = br[i];
                let b = if i + 1 < br.len() { br[i + 1] } else { br[0] + TWO_PI };
                if b > a {
                    sectors.push((a, b, flat.vertex_at(0.5 * (a + b))));
                }
            }
        }
    }
    let triangles: Vec<([f64; 2], [f64; 2])> = flat
        .poly
        .edges()
        .iter()
        .map(|e| {
            let g = flat.smooth_gradient(e.angle);
            (
                [g[0] + e.start[0], g[1] + e.start[1]],
                [g[0] + e.end[0], g[1] + e.end[1]],
            )
        })
        .collect();
    let gl_t = gauss_legendre(16);
    let gl_s = gauss_legendre(20);
    let level_sum = |level: u32| -> (f64, f64) {
        let s_nodes = composite(gl_s, 0.0, 1.0, 1 << level);
        let mut total = 0.0;
        let mut total_abs = 0.0;
        if let Some(trig) = &flat.trig {
            for &(a, b, v) in &sectors {
                let panels = (((b - a) / TWO_PI) * 16.0).ceil().max(1.0) as usize * (1 << level);
                let parts: Vec<(f64, f64)> = composite(gl_t, a, b, panels)
                    .par_iter()
                    .map(|&(t, wt)| {
                        let vals = trig.eval(t);
                        let g = vals.gradient(t);
                        let x = [g[0] + v[0] - p[0], g[1] + v[1] - p[1]];
                        let (sn, cs) = t.sin_cos();
                        let jac = vals.curvature() * (x[0] * cs + x[1] * sn);
                        let mut acc = 0.0;
                        for &(s, ws) in &s_nodes {
                            acc += f([p[0] + s * x[0], p[1] + s * x[1]]) * s * ws;
                        }
                        let c = acc * jac * wt;
                        (c, c.abs())
                    })
                    .collect();
                for (c, ca) in parts {
                    total += c;
                    total_abs += ca;
                }
            }
        }
        let t_nodes = composite(gl_s, 0.0, 1.0, 1 << level);
        for &(a, b) in &triangles {
            let ea = [a[0] - p[0], a[1] - p[1]];
            let eb = [b[0] - p[0], b[1] - p[1]];
            let jac = (ea[0] * eb[1] - ea[1] * eb[0]).abs();
            if jac == 0.0 {
                continue;
            }
            let mut acc = 0.0;
            let mut acc_abs = 0.0;
            for &(t, wt) in &t_nodes {
                let y = [ea[0] + t * (eb[0] - ea[0]), ea[1] + t * (eb[1] - ea[1])];
                for &(s, ws) in &s_nodes {
                    let v = f([p[0] + s * y[0], p[1] + s * y[1]]) * s * ws * wt;
                    acc += v;
                    acc_abs += v.abs();
                }
            }
            total += acc * jac;
            total_abs += acc_abs * jac;
        }
        (total, total_abs)
    };
    let (mut prev, _) = level_sum(0);
    if !prev.is_finite() {
        return Err(Error::NonFinite("planar region integrand".into()));
    }
    let mut level = 1;
    loop {
        let (cur, abs) = level_sum(level);
        if !cur.is_finite() {
            return Err(Error::NonFinite("planar region integrand".into()));
        }
        let diff = (cur - prev).abs();
        if diff <= REGION_REL_TOL * abs || level >= REGION_MAX_LEVEL {
            return Ok(Estimate::new(cur, diff.max(1e-15 * abs)));
        }
        prev = cur;
        level += 1;
    }
}

/// Radial function `ρ_K(θ) = min_t h(t)/cos(t-θ)` of a planar body with
/// the origin in its interior.
pub(crate) fn radial_function_2d(flat: &Flat2D, phi: f64) -> f64 {
    let g = |t: f64| flat.support(t) / (t - phi).cos();
    let margin = 1e-9;
    let (mut lo, mut hi) = (phi - FRAC_PI_2 + margin, phi + FRAC_PI_2 - margin);
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (g(x1), g(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = g(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = g(x2);
        }
    }
    let mut best = f1.min(f2);
    for &a in flat.breaks() {
        let mut d = (a - phi).rem_euclid(TWO_PI);
        if d > std::f64::consts::PI {
            d -= TWO_PI;
        }
        if d.abs() < FRAC_PI_2 {
            best = best.min(g(phi + d));
        }
    }
    best
}

fn polar_2d(mu: &WeightedMeasure, flat: &Flat2D) -> Result<Estimate> {
    if flat.min_support() <= 0.0 {
        return Err(Error::OriginNotInterior);
    }
    // Corners of the boundary in polar angle, where ρ loses smoothness.
    let mut corners = Vec::new();
    if has_curved_part(flat) {
        for e in flat.poly.edges() {
            let g = flat.smooth_gradient(e.angle);
            for v in [e.start, e.end] {
                corners.push((g[1] + v[1]).atan2(g[0] + v[0]));
            }
        }
    } else {
        for v in &flat.poly.vertices {
            corners.push(v[1].atan2(v[0]));
        }
    }
    let est = angular_integral(
        |phi| {
            mu.radial_mass(radial_function_2d(flat, phi))
                .map_or(f64::NAN, |m| m.value)
        },
        &corners,
    )?;
    Ok(Estimate::new(est.value, est.error + 1e-14 * est.value.abs()))
}

fn polar_at_resolution(mu: &WeightedMeasure, body: &ConvexBody, res: usize, extra: &[Vec<f64>]) -> Result<f64> {
    let n = body.dim();
    let grid = build_grid(n, res, 7)?;
    let mut dirs: Vec<Vec<f64>> = grid.nodes.clone();
    dirs.extend(extra.iter().cloned());
    let hv: Vec<f64> = dirs.iter().map(|v| body.support_unchecked(v)).collect();
    if hv.iter().any(|&h| h <= 0.0) {
        return Err(Error::OriginNotInterior);
    }
    let vals: Vec<f64> = grid
        .nodes
        .par_iter()
        .map(|u| {
            let mut rho = f64::INFINITY;
            for (v, &h) in dirs.iter().zip(&hv) {
                let d: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                if d > 1e-12 {
                    rho = rho.min(h / d);
                }
            }
            mu.radial_mass(rho).map_or(f64::NAN, |m| m.value)
        })
        .collect();
    let total: f64 = vals.iter().zip(&grid.weights).map(|(v, w)| v * w).sum();
    if total.is_finite() {
        Ok(total)
    } else {
        Err(Error::NonFinite("polar radial integrand".into()))
    }
}

fn polar_nd(mu: &WeightedMeasure, body: &ConvexBody, budget: usize) -> Result<Estimate> {
    let n = body.dim();
    let res = if budget == 0 {
        if n == 3 {
            default_resolution(3)
        } else {
            20_000
        }
    } else {
        budget
    };
    let extra: Vec<Vec<f64>> = if n == 3 && body.is_polytopal() {
        Polytope3::from_body(body)
            .map(|p| p.facets.iter().map(|f| f.normal.to_vec()).collect())
            .unwrap_or_default()
    } else {
        Vec::new()
    };
    let fine = polar_at_resolution(mu, body, res, &extra)?;
    let coarse = polar_at_resolution(mu, body, (res / 2).max(4), &extra)?;
    // The min-ratio radial function converges irregularly for kinked
    // boundaries, so the bar is deliberately wide.
    Ok(Estimate::new(fine, 4.0 * (fine - coarse).abs() + 1e-14 * fine.abs()))
}

fn monte_carlo(mu: &WeightedMeasure, body: &ConvexBody, budget: usize, seed: u64) -> Result<Estimate> {
    let n = body.dim();
    let samples = if budget == 0 { MONTE_CARLO_DEFAULT } else { budget };
    let mut lo = vec![0.0; n];
    let mut hi = vec![0.0; n];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        hi[i] = body.support_unchecked(&e);
        e[i] = -1.0;
        lo[i] = -body.support_unchecked(&e);
    }
    let box_volume: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    if box_volume <= 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let grid = build_grid(
        n,
        if n == 2 {
            1024
        } else if n == 3 {
            24
        } else {
            4000
        },
        3,
    )?;
    let mut dirs = grid.nodes.clone();
    if n == 2 {
        if let Ok(flat) = Flat2D::new(body) {
            dirs.extend(flat.breaks().iter().map(|t| vec![t.cos(), t.sin()]));
        }
    } else if n == 3 && body.is_polytopal() {
        if let Ok(p) = Polytope3::from_body(body) {
            dirs.extend(p.facets.iter().map(|f| f.normal.to_vec()));
        }
    }
    let hv: Vec<f64> = dirs.iter().map(|v| body.support_unchecked(v)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    let mut x = vec![0.0; n];
    for _ in 0..samples {
        for i in 0..n {
            x[i] = rng.gen_range(lo[i]..=hi[i]);
        }
        let inside = dirs
            .iter()
            .zip(&hv)
            .all(|(v, &h)| x.iter().zip(v).map(|(a, b)| a * b).sum::<f64>() <= h);
        if inside {
            let phi = mu.density_unchecked(&x);
            sum += phi;
            sum_sq += phi * phi;
        }
    }
    let m = samples as f64;
    let mean = sum / m;
    let var = (sum_sq / m - mean * mean).max(0.0);
    Ok(Estimate::new(box_volume * mean, 3.0 * box_volume * (var / m).sqrt()))
}

struct Cubature<'a> {
    gl: &'a GaussLegendre,
}

impl Cubature<'_> {
    fn nodes01(&self) -> Vec<(f64, f64)> {
        self.gl.unit_interval()
    }

    fn nodes(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        self.nodes01()
            .into_iter()
            .map(|(x, w)| (a + (b - a) * x, (b - a) * w))
            .collect()
    }
}

/// `μ(c + R·B + Q)` in three dimensions at a fixed Gauss order.
fn parallel_body_sum(
    f: &(dyn Fn(&[f64]) -> f64 + Sync),
    c: [f64; 3],
    r: f64,
    poly: Option<&Polytope3>,
    order: usize,
) -> Result<f64> {
    let cub = Cubature {
        gl: gauss_legendre(order),
    };
    let unit = cub.nodes01();
    let radial = cub.nodes(0.0, r);
    let eval = |x: [f64; 3]| f(&x);
    let Some(poly) = poly else {
        if r == 0.0 {
            return Ok(0.0);
        }
        let grid = build_grid(3, order, 0)?;
        let total: f64 = grid
            .nodes
            .par_iter()
            .zip(&grid.weights)
            .map(|(u, wu)| {
                let u = [u[0], u[1], u[2]];
                radial
                    .iter()
                    .map(|&(t, wt)| eval(add3(c, scale3(t, u))) * t * t * wt)
                    .sum::<f64>()
                    * wu
            })
            .sum();
        return Ok(total);
    };
    let poly = poly.translated(c);
    let g = poly.vertex_centroid();
    let tri_terms: Vec<(usize, [[f64; 3]; 3])> = (0..poly.facets.len())
        .flat_map(|fi| poly.facet_triangles(fi).into_iter().map(move |t| (fi, t)))
        .collect();
    let core_and_prisms: f64 = tri_terms
        .par_iter()
        .map(|&(fi, [a, b, cc])| {
            let facet = &poly.facets[fi];
            let nrm = facet.normal;
            let depth = facet.offset - dot3(nrm, g);
            let area2 = norm3(cross3(sub3(b, a), sub3(cc, b)));
            let mut acc = 0.0;
            for &(sg, wsg) in &unit {
                for &(tau, wtau) in &unit {
                    let y = add3(a, add3(scale3(sg, sub3(b, a)), scale3(sg * tau, sub3(cc, b))));
                    let da = sg * area2 * wsg * wtau;
                    let yg = sub3(y, g);
                    let mut inner = 0.0;
                    for &(s, ws) in &unit {
                        inner += eval(add3(g, scale3(s, yg))) * s * s * ws;
                    }
                    inner *= depth;
                    for &(t, wt) in &radial {
                        inner += eval(add3(y, scale3(t, nrm))) * wt;
                    }
                    acc += inner * da;
                }
            }
            acc
        })
        .sum();
    if r == 0.0 {
        return Ok(core_and_prisms);
    }
    let edges = poly.edges()?;
    let wedges: f64 = edges
        .par_iter()
        .map(|e| {
            let angle = Polytope3::exterior_angle(e);
            if angle < 1e-14 {
                return 0.0;
            }
            let d = dot3(e.n1, e.n2);
            let e2v = sub3(e.n2, scale3(d, e.n1));
            let e2 = scale3(1.0 / norm3(e2v), e2v);
            let a = poly.vertices[e.a];
            let ab = sub3(poly.vertices[e.b], a);
            let len = norm3(ab);
            let psi_nodes = cub.nodes(0.0, angle);
            let mut acc = 0.0;
            for &(lam, wl) in &unit {
                let base = add3(a, scale3(lam, ab));
                for &(psi, wp) in &psi_nodes {
                    let (sn, cs) = psi.sin_cos();
                    let w = add3(scale3(cs, e.n1), scale3(sn, e2));
                    for &(t, wt) in &radial {
                        acc += eval(add3(base, scale3(t, w))) * t * wl * wp * wt;
                    }
                }
            }
            acc * len
        })
        .sum();
    let cones = poly.vertex_cones()?;
    let sectors: f64 = cones
        .par_iter()
        .enumerate()
        .map(|(vi, cone)| {
            let v = poly.vertices[vi];
            let m1 = cone[0];
            let mut acc = 0.0;
            let mut tris = Vec::new();
            for i in 1..cone.len().saturating_sub(1) {
                geodesic_split([m1, cone[i], cone[i + 1]], &mut tris);
            }
            for [p1, pi, pj] in tris {
                let det = dot3(p1, cross3(pi, pj)).abs();
                for &(sg, wsg) in &unit {
                    for &(tau, wtau) in &unit {
                        let w = add3(p1, scale3(sg, add3(sub3(pi, p1), scale3(tau, sub3(pj, pi)))));
                        let nw = norm3(w);
                        let u = scale3(1.0 / nw, w);
                        let du = sg * det / (nw * nw * nw) * wsg * wtau;
                        for &(t, wt) in &radial {
                            acc += eval(add3(v, scale3(t, u))) * t * t * wt * du;
                        }
                    }
                }
            }
            acc
        })
        .sum();
    Ok(core_and_prisms + wedges + sectors)
}

/// Orthonormal `(e1, e2, normal)` with the points in the plane through
/// `pts[0]` spanned by `e1, e2`.
fn planar_frame(pts: &[[f64; 3]]) -> ([f64; 3], [f64; 3], [f64; 3]) {
    let p0 = pts[0];
    let far = pts
        .iter()
        .map(|&p| sub3(p, p0))
        .max_by(|a, b| norm3(*a).total_cmp(&norm3(*b)))
        .unwrap_or([0.0; 3]);
    let scale = norm3(far);
    if scale <= 1e-14 {
        let (e1, e2) = orthonormal_complement([0.0, 0.0, 1.0]);
        return (e1, e2, [0.0, 0.0, 1.0]);
    }
    let e1 = scale3(1.0 / scale, far);
    let perp = pts
        .iter()
        .map(|&p| {
            let d = sub3(p, p0);
            sub3(d, scale3(dot3(d, e1), e1))
        })
        .max_by(|a, b| norm3(*a).total_cmp(&norm3(*b)))
        .unwrap_or([0.0; 3]);
    let e2 = if norm3(perp) <= 1e-12 * scale {
        orthonormal_complement(e1).0
    } else {
        scale3(1.0 / norm3(perp), perp)
    };
    (e1, e2, cross3(e1, e2))
}

/// `μ(P + R·B)` for a polytope `P` of dimension at most two, sliced parallel
/// to its plane: the slice at height `R sin ψ` is the planar parallel body
/// `P + R cos ψ · B_2^2`.
fn parallel_body_flat(f: &(dyn Fn(&[f64]) -> f64 + Sync), pts: &[[f64; 3]], r: f64, order: usize) -> Result<f64> {
    if r == 0.0 {
        return Ok(0.0);
    }
    let p0 = pts[0];
    let (e1, e2, nrm) = planar_frame(pts);
    let flat: Vec<[f64; 2]> = pts
        .iter()
        .map(|&p| {
            let d = sub3(p, p0);
            [dot3(d, e1), dot3(d, e2)]
        })
        .collect();
    let poly = crate::bodies::Polygon::hull(&flat);
    let gl = gauss_legendre(order);
    let unit = gl.unit_interval();
    let psi_nodes: Vec<(f64, f64)> = unit
        .iter()
        .map(|&(x, w)| (FRAC_PI_2 * (2.0 * x - 1.0), PI * w))
        .collect();
    let total: f64 = psi_nodes
        .par_iter()
        .map(|&(psi, wpsi)| {
            let (sn, cs) = psi.sin_cos();
            let (z, rho) = (r * sn, r * cs);
            let base = add3(p0, scale3(z, nrm));
            let at = |y: [f64; 2]| f(&add3(base, add3(scale3(y[0], e1), scale3(y[1], e2))));
            planar_parallel_integral(&at, &poly, rho, &unit) * r * cs * wpsi
        })
        .sum();
    Ok(total)
}

/// `∫_{P + ρB} f` in the plane: core triangles, edge strips, vertex sectors.
fn planar_parallel_integral(
    f: &dyn Fn([f64; 2]) -> f64,
    poly: &crate::bodies::Polygon,
    rho: f64,
    unit: &[(f64, f64)],
) -> f64 {
    let v = &poly.vertices;
    let k = v.len();
    let mut acc = 0.0;
    if k >= 3 {
        let g = v
            .iter()
            .fold([0.0, 0.0], |s, p| [s[0] + p[0] / k as f64, s[1] + p[1] / k as f64]);
        for i in 0..k {
            let (a, b) = (v[i], v[(i + 1) % k]);
            let (ab, bg) = ([b[0] - a[0], b[1] - a[1]], [g[0] - b[0], g[1] - b[1]]);
            let jac = (ab[0] * bg[1] - ab[1] * bg[0]).abs();
            for &(s, ws) in unit {
                for &(t, wt) in unit {
                    let y = [a[0] + s * ab[0] + s * t * bg[0], a[1] + s * ab[1] + s * t * bg[1]];
                    acc += f(y) * s * jac * ws * wt;
                }
            }
        }
    }
    if rho == 0.0 {
        return acc;
    }
    let edges = poly.edges();
    for e in &edges {
        let d = [e.end[0] - e.start[0], e.end[1] - e.start[1]];
        for &(l, wl) in unit {
            for &(t, wt) in unit {
                let tt = rho * t;
                let y = [
                    e.start[0] + l * d[0] + tt * e.normal[0],
                    e.start[1] + l * d[1] + tt * e.normal[1],
                ];
                acc += f(y) * e.length * rho * wl * wt;
            }
        }
    }
    for i in 0..k {
        let (start, sweep) = if edges.is_empty() {
            (0.0, TWO_PI)
        } else {
            let prev = edges[(i + k - 1) % k].angle;
            let next = edges[i].angle;
            (prev, (next - prev).rem_euclid(TWO_PI))
        };
        for &(a, wa) in unit {
            let (sn, cs) = (start + sweep * a).sin_cos();
            for &(t, wt) in unit {
                let tt = rho * t;
                acc += f([v[i][0] + tt * cs, v[i][1] + tt * sn]) * tt * rho * sweep * wa * wt;
            }
        }
    }
    acc
}

const MAX_SECTOR_ANGLE: f64 = 0.35;

/// Splits a spherical triangle at its normalized edge midpoints until every
/// side subtends at most `MAX_SECTOR_ANGLE`.
fn geodesic_split(tri: [[f64; 3]; 3], out: &mut Vec<[[f64; 3]; 3]>) {
    let unit = |a: [f64; 3]| scale3(1.0 / norm3(a), a);
    let [a, b, c] = tri.map(unit);
    let side = |p: [f64; 3], q: [f64; 3]| dot3(p, q).clamp(-1.0, 1.0).acos();
    if side(a, b).max(side(b, c)).max(side(c, a)) <= MAX_SECTOR_ANGLE {
        out.push([a, b, c]);
        return;
    }
    let (ab, bc, ca) = (unit(add3(a, b)), unit(add3(b, c)), unit(add3(c, a)));
    for t in [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]] {
        geodesic_split(t, out);
    }
}

fn parallel_body_3d(mu: &WeightedMeasure, body: &ConvexBody, budget: usize) -> Result<Estimate> {
    check_dim(3, body.dim())?;
    let (r, c, rest) = body
        .ball_radius_and_rest()
        .ok_or_else(|| Error::Unsupported("parallel-body split needs ball and polytopal leaves".into()))?;
    let order = if budget == 0 {
        PARALLEL_DEFAULT_ORDER
    } else {
        budget.max(4)
    };
    let f = |x: &[f64]| mu.density_unchecked(x);
    let c = [c[0], c[1], c[2]];
    let poly = match rest {
        Some(q) => match Polytope3::from_body(&q) {
            Ok(p) => Some(p),
            Err(Error::Unsupported(_)) => {
                let pts: Vec<[f64; 3]> = raw_vertices(&q)?.iter().map(|v| add3(c, [v[0], v[1], v[2]])).collect();
                let hi = parallel_body_flat(&f, &pts, r, order + order / 2)?;
                let lo = parallel_body_flat(&f, &pts, r, order)?;
                return Ok(Estimate::new(hi, (hi - lo).abs() + 1e-14 * hi.abs()));
            }
            Err(e) => return Err(e),
        },
        None => None,
    };
    let hi = parallel_body_sum(&f, c, r, poly.as_ref(), order + order / 2)?;
    let lo = parallel_body_sum(&f, c, r, poly.as_ref(), order)?;
    Ok(Estimate::new(hi, (hi - lo).abs() + 1e-14 * hi.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::normal::gaussian_cdf;
    use std::f64::consts::PI;

    fn gauss2() -> WeightedMeasure {
        WeightedMeasure::gaussian(2).unwrap()
    }

    #[test]
    fn gaussian_disk() {
        for r in [0.3, 1.0, 2.5] {
            let disk = ConvexBody::centered_ball(2, r).unwrap();
            let want = 1.0 - (-0.5 * r * r).exp();
            for m in [MeasureMethod::Boundary2D, MeasureMethod::PolarRadial] {
                let got = measure_of_body(&gauss2(), &disk, m, 0).unwrap();
                assert!((got.value - want).abs() < 1e-13, "{m:?} r={r}: {} vs {want}", got.value);
            }
        }
    }

    #[test]
    fn gaussian_square_and_lebesgue_square() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let want = (2.0 * gaussian_cdf(1.0) - 1.0).powi(2);
        let got = measure_of_body(&gauss2(), &sq, MeasureMethod::Boundary2D, 0).unwrap();
        assert!((got.value - want).abs() < 1e-14);
        let got = measure_of_body(&gauss2(), &sq, MeasureMethod::PolarRadial, 0).unwrap();
        assert!((got.value - want).abs() < 1e-13);
        let unit = ConvexBody::cube(2, 0.5).unwrap();
        let leb = WeightedMeasure::lebesgue(2).unwrap();
        let got = measure_of_body(&leb, &unit, MeasureMethod::Boundary2D, 0).unwrap();
        assert!((got.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn off_center_mixed_body_agrees_between_methods() {
        let k = ConvexBody::sum(vec![
            ConvexBody::smooth_2d(vec![0.8, 0.1, 0.05], vec![0.0, -0.2, 0.02]).unwrap(),
            ConvexBody::polytope(vec![vec![0.0, 0.0], vec![0.7, 0.1], vec![0.2, 0.9]]).unwrap(),
        ])
        .unwrap();
        for mu in [
            gauss2(),
            WeightedMeasure::lebesgue(2).unwrap(),
            WeightedMeasure::power_law(2, 1.0, 2.0, 1.0).unwrap(),
        ] {
            let a = measure_of_body(&mu, &k, MeasureMethod::Boundary2D, 0).unwrap();
            let b = measure_of_body(&mu, &k, MeasureMethod::PolarRadial, 0).unwrap();
            assert!(
                (a.value - b.value).abs() < 1e-11,
                "{}: {} vs {}",
                mu.name(),
                a.value,
                b.value
            );
        }
    }

    #[test]
    fn region_away_from_origin() {
        let tri = ConvexBody::polytope(vec![vec![2.0, 1.0], vec![3.0, 1.0], vec![2.0, 3.0]]).unwrap();
        let leb = WeightedMeasure::lebesgue(2).unwrap();
        assert!((measure(&leb, &tri).unwrap().value - 1.0).abs() < 1e-14);
        assert!(matches!(
            measure_of_body(&gauss2(), &tri, MeasureMethod::PolarRadial, 0),
            Err(Error::OriginNotInterior)
        ));
        let mc = measure_of_body(&leb, &tri, MeasureMethod::MonteCarlo { seed: 1 }, 200_000).unwrap();
        assert!((mc.value - 1.0).abs() < mc.error);
    }

    #[test]
    fn gaussian_ball_3d() {
        let g3 = WeightedMeasure::gaussian(3).unwrap();
        let r: f64 = 1.2;
        // P(χ²_3 ≤ r²) = erf(r/√2) − √(2/π) r e^{−r²/2}.
        let want = 2.0 * gaussian_cdf(r) - 1.0 - (2.0 / PI).sqrt() * r * (-0.5 * r * r).exp();
        let ball = ConvexBody::centered_ball(3, r).unwrap();
        let got = measure_of_body(&g3, &ball, MeasureMethod::ParallelBody3D, 0).unwrap();
        assert!((got.value - want).abs() < 1e-12);
        let polar = measure_of_body(&g3, &ball, MeasureMethod::PolarRadial, 0).unwrap();
        assert!((polar.value - want).abs() < 1e-4);
    }

    #[test]
    fn steiner_formula_for_parallel_cube() {
        let leb = WeightedMeasure::lebesgue(3).unwrap();
        let a: f64 = 0.5;
        let r: f64 = 0.3;
        let k = ConvexBody::sum(vec![
            ConvexBody::cube(3, a).unwrap(),
            ConvexBody::ball(vec![0.1, 0.0, -0.2], r).unwrap(),
        ])
        .unwrap();
        let l = 2.0 * a;
        let want = l.powi(3) + r * 6.0 * l * l + r * r * 0.5 * 12.0 * l * (PI / 2.0) + 4.0 * PI * r.powi(3) / 3.0;
        let got = measure_of_body(&leb, &k, MeasureMethod::ParallelBody3D, 0).unwrap();
        assert!((got.value - want).abs() < 1e-12, "{} vs {want}", got.value);
    }

    #[test]
    fn ball_plus_flat_pieces() {
        let leb = WeightedMeasure::lebesgue(3).unwrap();
        let r = 0.4;
        let s = 1.0;
        let sq = ConvexBody::polytope(vec![
            vec![0.0, 0.0, 0.0],
            vec![s, 0.0, 0.0],
            vec![s, 0.0, s],
            vec![0.0, 0.0, s],
        ])
        .unwrap();
        let k = ConvexBody::ball(vec![0.1, 0.2, 0.3], r).unwrap().plus(&sq).unwrap();
        let want = 2.0 * r * s * s + 2.0 * PI * s * r * r + 4.0 * PI * r.powi(3) / 3.0;
        let got = measure_of_body(&leb, &k, MeasureMethod::ParallelBody3D, 0).unwrap();
        assert!((got.value - want).abs() < 1e-12, "{got:?} {want}");
        let seg = ConvexBody::segment(vec![0.0; 3], vec![0.3, 0.4, 0.0]).unwrap();
        let k = ConvexBody::centered_ball(3, r).unwrap().plus(&seg).unwrap();
        let want = PI * r * r * 1.0 + 4.0 * PI * r.powi(3) / 3.0;
        let got = measure_of_body(&leb, &k, MeasureMethod::ParallelBody3D, 0).unwrap();
        assert!((got.value - want).abs() < 1e-12, "{got:?} {want}");
        let g = WeightedMeasure::gaussian(3).unwrap();
        let by_flat = measure_of_body(&g, &k, MeasureMethod::ParallelBody3D, 0).unwrap().value;
        // Independent value from a cylinder-plus-caps split.
        assert!((by_flat - 0.042_747_460_930_272_13).abs() < 1e-13, "{by_flat}");
        let by_polar = measure_of_body(&g, &k, MeasureMethod::PolarRadial, 0).unwrap();
        assert!(
            (by_flat - by_polar.value).abs() < by_polar.error,
            "{by_flat} {by_polar:?}"
        );
    }

    #[test]
    fn gaussian_cube_3d() {
        let g3 = WeightedMeasure::gaussian(3).unwrap();
        let k = ConvexBody::cube(3, 1.0).unwrap();
        let want = (2.0 * gaussian_cdf(1.0) - 1.0).powi(3);
        let got = measure(&g3, &k).unwrap();
        assert!((got.value - want).abs() < 1e-13);
    }

    #[test]
    fn interval_measures() {
        let g1 = WeightedMeasure::gaussian(1).unwrap();
        let seg = ConvexBody::segment(vec![0.0], vec![1.0]).unwrap();
        let got = measure(&g1, &seg).unwrap();
        assert!((got.value - (2.0 * gaussian_cdf(1.0) - 1.0)).abs() < 1e-15);
    }
}
