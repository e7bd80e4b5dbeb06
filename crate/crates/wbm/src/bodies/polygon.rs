//! Convex polygons: hulls, edge-merge Minkowski sums, edge data.

use crate::linalg::cross2;
use crate::sphere_quadrature::wrap_angle;
use std::cmp::Ordering;

/// Convex polygon, counterclockwise, starting at the vertex with the
/// smallest `(y, x)`. One vertex is a point, two are a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub vertices: Vec<[f64; 2]>,
}

/// An edge of a polygon together with its outer normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub start: [f64; 2],
    pub end: [f64; 2],
    pub normal: [f64; 2],
    pub angle: f64,
    pub length: f64,
}

fn lex_yx(a: &[f64; 2], b: &[f64; 2]) -> Ordering {
    a[1].partial_cmp(&b[1])
        .unwrap_or(Ordering::Equal)
        .then(a[0].partial_cmp(&b[0]).unwrap_or(Ordering::Equal))
}

fn sub(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [a[0] - b[0], a[1] - b[1]]
}

fn edge_angle(e: [f64; 2]) -> f64 {
    wrap_angle(e[1].atan2(e[0]))
}

impl Polygon {
    pub fn point(p: [f64; 2]) -> Self {
        Self { vertices: vec![p] }
    }

    /// Convex hull (Andrew's monotone chain), collinear points dropped.
    pub fn hull(points: &[[f64; 2]]) -> Self {
        let mut pts: Vec<[f64; 2]> = points.to_vec();
        pts.sort_by(|a, b| {
            a[0].partial_cmp(&b[0])
                .unwrap_or(Ordering::Equal)
                .then(a[1].partial_cmp(&b[1]).unwrap_or(Ordering::Equal))
        });
        pts.dedup();
        if pts.len() <= 2 {
            return Self::normalized(pts);
        }
        let scale = pts
            .iter()
            .map(|p| p[0].abs().max(p[1].abs()))
            .fold(0.0, f64::max)
            .max(1e-300);
        let tol = 1e-14 * scale * scale;
        let mut lower: Vec<[f64; 2]> = Vec::new();
        for p in &pts {
            while lower.len() >= 2
                && cross2(
                    sub(lower[lower.len() - 1], lower[lower.len() - 2]),
                    sub(*p, lower[lower.len() - 2]),
                ) <= tol
            {
                lower.pop();
            }
            lower.push(*p);
        }
        let mut upper: Vec<[f64; 2]> = Vec::new();
        for p in pts.iter().rev() {
            while upper.len() >= 2
                && cross2(
                    sub(upper[upper.len() - 1], upper[upper.len() - 2]),
                    sub(*p, upper[upper.len() - 2]),
                ) <= tol
            {
                upper.pop();
            }
            upper.push(*p);
        }
        lower.pop();
        upper.pop();
        lower.extend(upper);
        Self::normalized(lower)
    }

    /// Rotates a counterclockwise loop to start at its `(y, x)`-minimum.
    fn normalized(mut v: Vec<[f64; 2]>) -> Self {
        if let Some(start) = (0..v.len()).min_by(|&i, &j| lex_yx(&v[i], &v[j])) {
            v.rotate_left(start);
        }
        Self { vertices: v }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge vectors in counterclockwise order.
    pub fn edge_vectors(&self) -> Vec<[f64; 2]> {
        let k = self.vertices.len();
        if k < 2 {
            return Vec::new();
        }
        (0..k)
            .map(|i| sub(self.vertices[(i + 1) % k], self.vertices[i]))
            .collect()
    }

    pub fn edges(&self) -> Vec<Edge> {
        let k = self.vertices.len();
        if k < 2 {
            return Vec::new();
        }
        (0..k)
            .map(|i| {
                let start = self.vertices[i];
                let end = self.vertices[(i + 1) % k];
                let e = sub(end, start);
                let length = e[0].hypot(e[1]);
                let normal = [e[1] / length, -e[0] / length];
                Edge {
                    start,
                    end,
                    normal,
                    angle: wrap_angle(normal[1].atan2(normal[0])),
                    length,
                }
            })
            .collect()
    }

    /// Edge-merge Minkowski sum.
    pub fn minkowski_sum(&self, other: &Self) -> Self {
        Self::sum_all(&[self, other])
    }

    pub fn sum_all(parts: &[&Polygon]) -> Self {
        let mut start = [0.0, 0.0];
        let mut edges: Vec<(f64, [f64; 2])> = Vec::new();
        for p in parts {
            let s = p.vertices[0];
            start = [start[0] + s[0], start[1] + s[1]];
            edges.extend(p.edge_vectors().into_iter().map(|e| (edge_angle(e), e)));
        }
        edges.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let mut merged: Vec<(f64, [f64; 2])> = Vec::with_capacity(edges.len());
        for (a, e) in edges {
            match merged.last_mut() {
                Some((la, le)) if (a - *la).abs() < 1e-12 => {
                    *le = [le[0] + e[0], le[1] + e[1]];
                }
                _ => merged.push((a, e)),
            }
        }
        let mut v = vec![start];
        let mut cur = start;
        for (_, e) in merged.iter().take(merged.len().saturating_sub(1)) {
            cur = [cur[0] + e[0], cur[1] + e[1]];
            v.push(cur);
        }
        Self { vertices: v }
    }

    pub fn scaled(&self, t: f64) -> Self {
        if t == 0.0 {
            return Self::point([0.0, 0.0]);
        }
        Self {
            vertices: self.vertices.iter().map(|p| [t * p[0], t * p[1]]).collect(),
        }
    }

    pub fn translated(&self, c: [f64; 2]) -> Self {
        Self {
            vertices: self.vertices.iter().map(|p| [p[0] + c[0], p[1] + c[1]]).collect(),
        }
    }

    pub fn area(&self) -> f64 {
        let k = self.vertices.len();
        if k < 3 {
            return 0.0;
        }
        let o = self.vertices[0];
        (1..k - 1)
            .map(|i| cross2(sub(self.vertices[i], o), sub(self.vertices[i + 1], o)))
            .sum::<f64>()
            * 0.5
    }

    pub fn perimeter(&self) -> f64 {
        self.edge_vectors().iter().map(|e| e[0].hypot(e[1])).sum()
    }

    pub fn support(&self, u: [f64; 2]) -> f64 {
        self.vertices
            .iter()
            .map(|v| v[0] * u[0] + v[1] * u[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Maximizing vertex; near-ties go to the lexicographically smallest `(x, y)`.
    pub fn support_vertex(&self, u: [f64; 2]) -> [f64; 2] {
        let h = self.support(u);
        let scale = self
            .vertices
            .iter()
            .map(|v| v[0].abs() + v[1].abs())
            .fold(0.0, f64::max);
        let tol = 1e-13 * (scale + 1.0);
        let mut best: Option<[f64; 2]> = None;
        for v in &self.vertices {
            if v[0] * u[0] + v[1] * u[1] >= h - tol {
                best = match best {
                    Some(b) if crate::linalg::lex_cmp(&b, v) != Ordering::Greater => Some(b),
                    _ => Some(*v),
                };
            }
        }
        best.expect("polygon has a vertex")
    }

    /// Vertex exposed in every direction strictly between consecutive edge normals.
    ///
    /// Returns `(normal angles, vertex after each normal)`: for `θ` in
    /// `(angles[i], angles[i+1])` the support vertex is `vertex[i]`.
    pub fn normal_fan(&self) -> (Vec<f64>, Vec<[f64; 2]>) {
        let mut pairs: Vec<(f64, [f64; 2])> = self.edges().iter().map(|e| (e.angle, e.end)).collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        pairs.into_iter().unzip()
    }

    /// Whether `p` lies strictly inside, with relative margin.
    pub fn contains_strictly(&self, p: [f64; 2]) -> bool {
        let edges = self.edges();
        if self.vertices.len() < 3 {
            return false;
        }
        edges
            .iter()
            .all(|e| (p[0] - e.start[0]) * e.normal[0] + (p[1] - e.start[1]) * e.normal[1] < -1e-12 * (1.0 + e.length))
    }

    pub fn centroid_of_vertices(&self) -> [f64; 2] {
        let k = self.vertices.len() as f64;
        let s = self.vertices.iter().fold([0.0, 0.0], |a, v| [a[0] + v[0], a[1] + v[1]]);
        [s[0] / k, s[1] / k]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Polygon {
        Polygon::hull(&[[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    }

    #[test]
    fn hull_orders_counterclockwise_from_bottom_left() {
        let s = square();
        assert_eq!(s.vertices, vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]);
        assert_eq!(s.area(), 4.0);
        assert_eq!(s.perimeter(), 8.0);
    }

    #[test]
    fn hull_drops_interior_and_collinear_points() {
        let h = Polygon::hull(&[[0.0, 0.0], [2.0, 0.0], [1.0, 0.0], [0.0, 2.0], [0.5, 0.5]]);
        assert_eq!(h.len(), 3);
    }

    #[test]
    fn sum_of_segments_is_square() {
        let a = Polygon::hull(&[[-1.0, 0.0], [1.0, 0.0]]);
        let b = Polygon::hull(&[[0.0, -1.0], [0.0, 1.0]]);
        let s = a.minkowski_sum(&b);
        assert_eq!(s.vertices, square().vertices);
    }

    #[test]
    fn point_summand_translates() {
        let s = square().minkowski_sum(&Polygon::point([2.0, 3.0]));
        assert_eq!(s.vertices[0], [1.0, 2.0]);
        assert_eq!(s.area(), 4.0);
    }

    #[test]
    fn normal_fan_of_square() {
        let (angles, verts) = square().normal_fan();
        assert_eq!(angles.len(), 4);
        assert!((angles[1] - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        assert_eq!(verts[0], [1.0, 1.0]);
    }

    #[test]
    fn tie_break_is_lexicographic() {
        assert_eq!(square().support_vertex([1.0, 0.0]), [1.0, -1.0]);
    }
}
