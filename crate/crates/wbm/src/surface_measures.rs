//! Surface area measures `S_K`, weighted surface area measures `S_{μ,K}`,
//! the planar weighted mixed surface area measure `S^μ_{A;B}` and total
//! weighted surface areas.

use crate::bodies::{ConvexBody, Flat2D, Polytope3};
use crate::error::{check_dim, Error, Result};
use crate::estimate::Estimate;
use crate::linalg::{add3, cross3, norm3, scale3, sub3};
use crate::measures::WeightedMeasure;
use crate::sphere_quadrature::{
    adaptive_gauss, angular_integral, build_grid, default_resolution, gauss_legendre, normalize_breaks, SphereGrid,
};
use std::f64::consts::PI;
use std::fmt;
use std::fmt::Write as _;
use std::sync::Arc;

/// A point mass on the sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub direction: Vec<f64>,
    pub mass: f64,
    pub error: f64,
}

type AngularFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Absolutely continuous part: samples on a grid, plus an exact angular
/// evaluator with its kinks in the plane.
#[derive(Clone)]
pub struct Density {
    pub grid: SphereGrid,
    pub samples: Vec<f64>,
    angular: Option<(AngularFn, Vec<f64>)>,
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Density")
            .field("nodes", &self.grid.len())
            .field("angular", &self.angular.is_some())
            .finish()
    }
}

impl Density {
    fn planar(resolution: usize, f: AngularFn, breaks: Vec<f64>) -> Result<Self> {
        let grid = build_grid(2, resolution, 0)?;
        let samples = (0..grid.len()).map(|j| f(grid.angle(j))).collect();
        Ok(Self {
            grid,
            samples,
            angular: Some((f, normalize_breaks(&breaks))),
        })
    }

    fn on_grid(grid: SphereGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let samples = grid.nodes.iter().map(|u| f(u)).collect();
        Self {
            grid,
            samples,
            angular: None,
        }
    }

    /// Evaluates the density in direction `θ` (planar densities only).
    pub fn at_angle(&self, theta: f64) -> Option<f64> {
        self.angular.as_ref().map(|(f, _)| f(theta))
    }
}

/// A finite (possibly signed) Borel measure on `S^{n-1}`.
#[derive(Debug, Clone)]
pub struct SphereMeasure {
    pub dim: usize,
    pub atoms: Vec<Atom>,
    pub density: Option<Density>,
    pub signed: bool,
}

const ATOM_MERGE_TOL: f64 = 1e-12;

impl SphereMeasure {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            atoms: Vec::new(),
            density: None,
            signed: false,
        }
    }

    fn push_atom(&mut self, direction: Vec<f64>, mass: f64, error: f64) {
        if let Some(a) = self.atoms.iter_mut().find(|a| {
            a.direction
                .iter()
                .zip(&direction)
                .all(|(x, y)| (x - y).abs() <= ATOM_MERGE_TOL)
        }) {
            a.mass += mass;
            a.error += error;
        } else {
            self.atoms.push(Atom { direction, mass, error });
        }
    }

    /// `∫ f dS` where `f` is smooth apart from the given planar kinks.
    pub fn integrate_with_breaks(&self, f: impl Fn(&[f64]) -> f64 + Sync, breaks: &[f64]) -> Result<Estimate> {
        let mut value = 0.0;
        let mut error = 0.0;
        for a in &self.atoms {
            let fv = f(&a.direction);
            if !fv.is_finite() {
                return Err(Error::NonFinite("test function at an atom".into()));
            }
            value += fv * a.mass;
            error += fv.abs() * a.error + 2.0 * f64::EPSILON * (fv * a.mass).abs();
        }
        if let Some(d) = &self.density {
            match &d.angular {
                Some((g, own)) => {
                    let mut all = own.clone();
                    all.extend_from_slice(breaks);
                    let est = angular_integral(
                        |t| {
                            let (s, c) = t.sin_cos();
                            f(&[c, s]) * g(t)
                        },
                        &all,
                    )?;
                    value += est.value;
                    error += est.error;
                }
                None => {
                    let mut s = 0.0;
                    for ((u, w), v) in d.grid.nodes.iter().zip(&d.grid.weights).zip(&d.samples) {
                        s += w * v * f(u);
                    }
                    if !s.is_finite() {
                        return Err(Error::NonFinite("sphere integrand".into()));
                    }
                    value += s;
                    // Grid rules carry no intrinsic error estimate; use round-off.
                    error += 1e-12 * s.abs();
                }
            }
        }
        Ok(Estimate::new(value, error))
    }

    pub fn integrate(&self, f: impl Fn(&[f64]) -> f64 + Sync) -> Result<Estimate> {
        self.integrate_with_breaks(f, &[])
    }

    /// `∫ h_L dS`, with the kinks of `h_L` passed to the planar rule.
    pub fn integrate_support(&self, body: &ConvexBody) -> Result<Estimate> {
        check_dim(self.dim, body.dim())?;
        let breaks = if self.dim == 2 {
            Flat2D::new(body)?.breaks().to_vec()
        } else {
            Vec::new()
        };
        self.integrate_with_breaks(|u| body.support_unchecked(u), &breaks)
    }

    pub fn total(&self) -> Result<Estimate> {
        self.integrate(|_| 1.0)
    }

    /// `∫ u dS(u)`.
    pub fn first_moment(&self) -> Result<Vec<f64>> {
        (0..self.dim)
            .map(|i| self.integrate(|u| u[i]).map(|e| e.value))
            .collect()
    }

    /// Sum of two measures on the same grid; atoms at equal directions merge.
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.dim, other.dim)?;
        let mut out = Self {
            dim: self.dim,
            atoms: self.atoms.clone(),
            density: None,
            signed: self.signed || other.signed,
        };
        for a in &other.atoms {
            out.push_atom(a.direction.clone(), a.mass, a.error);
        }
        out.density = match (&self.density, &other.density) {
            (None, None) => None,
            (Some(d), None) | (None, Some(d)) => Some(d.clone()),
            (Some(a), Some(b)) => {
                if a.grid != b.grid {
                    return Err(Error::InvalidArgument("densities live on different grids".into()));
                }
                let samples = a.samples.iter().zip(&b.samples).map(|(x, y)| x + y).collect();
                let angular = match (&a.angular, &b.angular) {
                    (Some((f, fb)), Some((g, gb))) => {
                        let (f, g) = (f.clone(), g.clone());
                        let h: AngularFn = Arc::new(move |t| f(t) + g(t));
                        let mut br = fb.clone();
                        br.extend_from_slice(gb);
                        Some((h, normalize_breaks(&br)))
                    }
                    _ => None,
                };
                Some(Density {
                    grid: a.grid.clone(),
                    samples,
                    angular,
                })
            }
        };
        Ok(out)
    }

    /// Total atom mass within `tol` of direction `u`.
    pub fn mass_at(&self, u: &[f64], tol: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.direction.iter().zip(u).all(|(x, y)| (x - y).abs() <= tol))
            .map(|a| a.mass)
            .sum()
    }

    /// Whether atoms and density samples are `≥ -tol`.
    pub fn is_nonnegative(&self, tol: f64) -> bool {
        self.atoms.iter().all(|a| a.mass >= -tol)
            && self
                .density
                .as_ref()
                .is_none_or(|d| d.samples.iter().all(|&v| v >= -tol))
    }

    /// Whether every atom has a partner of equal mass at the antipode.
    pub fn atoms_are_even(&self, tol: f64) -> bool {
        self.atoms.iter().all(|a| {
            let anti: Vec<f64> = a.direction.iter().map(|x| -x).collect();
            (self.mass_at(&anti, 1e-9) - a.mass).abs() <= tol * a.mass.abs().max(1.0)
        })
    }

    /// CSV rows `ux,uy[,uz],value,kind` with `kind` either `atom` or `density`.
    pub fn to_csv(&self) -> String {
        let axes = ["ux", "uy", "uz"];
        let mut out = String::new();
        let header: Vec<String> = (0..self.dim)
            .map(|i| axes.get(i).map_or_else(|| format!("u{}", i + 1), |s| s.to_string()))
            .collect();
        let _ = writeln!(out, "{},value,kind", header.join(","));
        let fmt_row = |out: &mut String, u: &[f64], v: f64, kind: &str| {
            let coords: Vec<String> = u.iter().map(|x| crate::output::fmt_f64(*x)).collect();
            let _ = writeln!(out, "{},{},{kind}", coords.join(","), crate::output::fmt_f64(v));
        };
        for a in &self.atoms {
            fmt_row(&mut out, &a.direction, a.mass, "atom");
        }
        if let Some(d) = &self.density {
            for (u, v) in d.grid.nodes.iter().zip(&d.samples) {
                fmt_row(&mut out, u, *v, "density");
            }
        }
        out
    }
}

/// Optional weight for the boundary: `None` means Hausdorff measure.
type Weight<'a> = Option<&'a WeightedMeasure>;

fn edge_mass(weight: Weight, a: [f64; 2], b: [f64; 2]) -> Result<Estimate> {
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    match weight {
        None => Ok(Estimate::exact(len)),
        Some(mu) if mu.is_lebesgue() => Ok(Estimate::exact(len)),
        Some(mu) => Ok(adaptive_gauss(
            |t| mu.density_unchecked(&[a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]),
            0.0,
            1.0,
            1e-14,
        )?
        .scale(len)),
    }
}

fn triangle_integral(mu: &WeightedMeasure, t: [[f64; 3]; 3], order: usize) -> f64 {
    let gl = gauss_legendre(order).unit_interval();
    let [a, b, c] = t;
    let area2 = norm3(cross3(sub3(b, a), sub3(c, b)));
    let mut acc = 0.0;
    for &(s, ws) in &gl {
        for &(r, wr) in &gl {
            let y = add3(a, add3(scale3(s, sub3(b, a)), scale3(s * r, sub3(c, b))));
            acc += mu.density_unchecked(&y) * s * ws * wr;
        }
    }
    acc * area2
}

fn facet_mass(weight: Weight, poly: &Polytope3, f: usize) -> Estimate {
    match weight {
        Some(mu) if !mu.is_lebesgue() => {
            let tris = poly.facet_triangles(f);
            let hi: f64 = tris.iter().map(|t| triangle_integral(mu, *t, 24)).sum();
            let lo: f64 = tris.iter().map(|t| triangle_integral(mu, *t, 16)).sum();
            Estimate::new(hi, (hi - lo).abs() + 1e-15 * hi.abs())
        }
        _ => Estimate::exact(poly.facet_area(f)),
    }
}

fn planar_measure(weight: Weight, body: &ConvexBody, resolution: usize) -> Result<SphereMeasure> {
    let flat = Arc::new(Flat2D::new(body)?);
    let mut m = SphereMeasure::empty(2);
    for e in flat.poly.edges() {
        let g = flat.smooth_gradient(e.angle);
        let a = [g[0] + e.start[0], g[1] + e.start[1]];
        let b = [g[0] + e.end[0], g[1] + e.end[1]];
        let mass = edge_mass(weight, a, b)?;
        m.push_atom(e.normal.to_vec(), mass.value, mass.error);
    }
    if flat.trig.is_some() {
        let breaks = flat.breaks().to_vec();
        let f: AngularFn = match weight {
            Some(mu) if !mu.is_lebesgue() => {
                let mu = mu.clone();
                let flat = flat.clone();
                Arc::new(move |t| {
                    let x = flat.gradient(t);
                    mu.density_unchecked(&x) * flat.smooth_curvature(t)
                })
            }
            _ => {
                let flat = flat.clone();
                Arc::new(move |t| flat.smooth_curvature(t))
            }
        };
        m.density = Some(Density::planar(resolution, f, breaks)?);
    }
    Ok(m)
}

fn build(weight: Weight, body: &ConvexBody, resolution: usize) -> Result<SphereMeasure> {
    body.validate()?;
    let n = body.dim();
    if let Some(mu) = weight {
        check_dim(mu.dim, n)?;
    }
    match n {
        1 => {
            let b = body.support_unchecked(&[1.0]);
            let a = -body.support_unchecked(&[-1.0]);
            let (wb, wa) = match weight {
                Some(mu) => (mu.density_unchecked(&[b]), mu.density_unchecked(&[a])),
                None => (1.0, 1.0),
            };
            let mut m = SphereMeasure::empty(1);
            m.push_atom(vec![1.0], wb, 0.0);
            m.push_atom(vec![-1.0], wa, 0.0);
            Ok(m)
        }
        2 => planar_measure(weight, body, resolution),
        _ => {
            if body.is_polytopal() {
                if n != 3 {
                    return Err(Error::Unsupported(format!("polytope facets in dimension {n}")));
                }
                let poly = Polytope3::from_body(body)?;
                let mut m = SphereMeasure::empty(3);
                for f in 0..poly.facets.len() {
                    let mass = facet_mass(weight, &poly, f);
                    m.push_atom(poly.facets[f].normal.to_vec(), mass.value, mass.error);
                }
                return Ok(m);
            }
            match body.ball_radius_and_rest() {
                Some((r, c, None)) => {
                    let grid = build_grid(n, resolution, 0)?;
                    let scale = r.powi(n as i32 - 1);
                    let d = Density::on_grid(grid, |u| {
                        let w = weight.map_or(1.0, |mu| {
                            let x: Vec<f64> = c.iter().zip(u).map(|(ci, ui)| ci + r * ui).collect();
                            mu.density_unchecked(&x)
                        });
                        w * scale
                    });
                    Ok(SphereMeasure {
                        dim: n,
                        atoms: Vec::new(),
                        density: Some(d),
                        signed: false,
                    })
                }
                _ => Err(Error::Unsupported(format!(
                    "surface measure of this body in dimension {n} (only polytopes and balls)"
                ))),
            }
        }
    }
}

pub fn surface_area_measure(body: &ConvexBody) -> Result<SphereMeasure> {
    build(None, body, default_resolution(body.dim()))
}

pub fn surface_area_measure_at(body: &ConvexBody, resolution: usize) -> Result<SphereMeasure> {
    build(None, body, resolution)
}

pub fn weighted_surface_area_measure(mu: &WeightedMeasure, body: &ConvexBody) -> Result<SphereMeasure> {
    build(Some(mu), body, default_resolution(body.dim()))
}

pub fn weighted_surface_area_measure_at(
    mu: &WeightedMeasure,
    body: &ConvexBody,
    resolution: usize,
) -> Result<SphereMeasure> {
    build(Some(mu), body, resolution)
}

/// `μ⁺(∂K) = S_{μ,K}(S^{n-1})`.
pub fn weighted_surface_area(mu: &WeightedMeasure, body: &ConvexBody) -> Result<Estimate> {
    weighted_surface_area_measure(mu, body)?.total()
}

/// `dS^μ_{A;B} = φ(∇h_A) dS_B + ⟨∇φ(∇h_A), ∇h_B⟩ dS_A` for `A ∈ C²₊` in the plane.
pub fn weighted_mixed_surface_measure_2d(
    mu: &WeightedMeasure,
    a: &ConvexBody,
    b: &ConvexBody,
) -> Result<SphereMeasure> {
    check_dim(2, mu.dim)?;
    check_dim(2, a.dim())?;
    check_dim(2, b.dim())?;
    let fa = Arc::new(Flat2D::new(a)?);
    if !fa.is_c2_plus() {
        return Err(Error::NotSmooth(
            "first body must be C2+ with positive curvature".into(),
        ));
    }
    let fb = Arc::new(Flat2D::new(b)?);
    let mut m = SphereMeasure::empty(2);
    m.signed = true;
    for e in fb.poly.edges() {
        let x = fa.gradient(e.angle);
        let phi = mu.density_unchecked(&x);
        m.push_atom(e.normal.to_vec(), phi * e.length, 2.0 * f64::EPSILON * phi * e.length);
    }
    let mu2 = mu.clone();
    let (fa2, fb2) = (fa.clone(), fb.clone());
    let f: AngularFn = Arc::new(move |t| {
        let x = fa2.gradient(t);
        let phi = mu2.density_unchecked(&x);
        let g = mu2.gradient_unchecked(&x);
        let hb = fb2.gradient(t);
        phi * fb2.smooth_curvature(t) + (g[0] * hb[0] + g[1] * hb[1]) * fa2.smooth_curvature(t)
    });
    m.density = Some(Density::planar(default_resolution(2), f, fb.breaks().to_vec())?);
    Ok(m)
}

/// `S_{γ,H}` for the half-space `{⟨x, direction⟩ ≤ d}`: an atom at
/// `direction` with mass `e^{-d²/2}/√(2π)`.
pub fn halfspace_gaussian_surface(d: f64, direction: &[f64]) -> Result<SphereMeasure> {
    let n = crate::linalg::norm(direction);
    if !(n > 0.0) || !d.is_finite() {
        return Err(Error::InvalidArgument(
            "half-space needs a nonzero direction and finite offset".into(),
        ));
    }
    let u: Vec<f64> = direction.iter().map(|x| x / n).collect();
    let mut m = SphereMeasure::empty(u.len());
    let mass = (-0.5 * d * d).exp() / (2.0 * PI).sqrt();
    m.push_atom(u, mass, 2.0 * f64::EPSILON * mass);
    Ok(m)
}

/// The same measure for the complementary half-space: the atom moves to `-direction`.
pub fn halfspace_complement_surface(d: f64, direction: &[f64]) -> Result<SphereMeasure> {
    let mut m = halfspace_gaussian_surface(d, direction)?;
    for a in &mut m.atoms {
        a.direction.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(m)
}
