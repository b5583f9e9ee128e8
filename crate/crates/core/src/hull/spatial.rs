//! Incremental (beneath-beyond) convex hull in three dimensions.
//!
//! The hull is kept as a closed triangulated surface with outward orientation.
//! Coplanar neighbouring triangles are allowed; they contribute zero exterior
//! dihedral angle, so the Steiner coefficients come out right without merging
//! them into polygonal facets.

use std::collections::{HashMap, HashSet};

type V3 = [f64; 3];

#[derive(Debug, Clone)]
pub struct Hull3 {
    points: Vec<V3>,
    faces: Vec<[usize; 3]>,
}

/// A supporting plane `{x : normal . x = offset}` with unit outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub normal: V3,
    pub offset: f64,
}

impl Hull3 {
    /// Builds the hull, or `None` when the points do not span three dimensions
    /// (relative tolerance `rel_eps` against the coordinate scale).
    pub fn build(points: &[V3], rel_eps: f64) -> Option<Hull3> {
        if points.len() < 4 {
            return None;
        }
        let scale = points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(f64::MIN_POSITIVE);
        let eps = rel_eps * scale;

        let i0 = (0..points.len())
            .min_by(|&a, &b| points[a][0].total_cmp(&points[b][0]))
            .unwrap();
        let i1 = argmax(points, |p| norm(sub(p, points[i0])));
        if norm(sub(points[i1], points[i0])) <= eps {
            return None;
        }
        let axis = sub(points[i1], points[i0]);
        let i2 = argmax(points, |p| norm(cross(axis, sub(p, points[i0]))) / norm(axis));
        let n012 = cross(axis, sub(points[i2], points[i0]));
        if norm(n012) / norm(axis) <= eps {
            return None;
        }
        let i3 = argmax(points, |p| (dot(n012, sub(p, points[i0])) / norm(n012)).abs());
        if (dot(n012, sub(points[i3], points[i0])) / norm(n012)).abs() <= eps {
            return None;
        }

        let mut hull = Hull3 {
            points: points.to_vec(),
            faces: Vec::new(),
        };
        let centroid = scale3(
            add(add(points[i0], points[i1]), add(points[i2], points[i3])),
            0.25,
        );
        for f in [[i0, i1, i2], [i0, i3, i1], [i1, i3, i2], [i2, i3, i0]] {
            let n = hull.raw_normal(f);
            if dot(n, sub(centroid, points[f[0]])) > 0.0 {
                hull.faces.push([f[0], f[2], f[1]]);
            } else {
                hull.faces.push(f);
            }
        }

        for (pi, &p) in points.iter().enumerate() {
            if [i0, i1, i2, i3].contains(&pi) {
                continue;
            }
            let visible: Vec<bool> = hull
                .faces
                .iter()
                .map(|&f| {
                    let n = hull.raw_normal(f);
                    let len = norm(n);
                    len > 0.0 && dot(n, sub(p, hull.points[f[0]])) / len > eps
                })
                .collect();
            if !visible.iter().any(|&v| v) {
                continue;
            }
            let mut edges = HashSet::new();
            for (f, _) in hull.faces.iter().zip(&visible).filter(|(_, &v)| v) {
                for e in 0..3 {
                    edges.insert((f[e], f[(e + 1) % 3]));
                }
            }
            let mut horizon: Vec<(usize, usize)> = edges
                .iter()
                .copied()
                .filter(|&(a, b)| !edges.contains(&(b, a)))
                .collect();
            // HashSet order is randomised per process; keep the face list reproducible.
            horizon.sort_unstable();
            let mut kept: Vec<[usize; 3]> = hull
                .faces
                .iter()
                .zip(&visible)
                .filter(|(_, &v)| !v)
                .map(|(f, _)| *f)
                .collect();
            kept.extend(horizon.into_iter().map(|(a, b)| [a, b, pi]));
            hull.faces = kept;
        }
        Some(hull)
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Indices of points that are vertices of some hull triangle.
    pub fn vertex_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.faces.iter().flatten().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn volume(&self) -> f64 {
        let c = self.interior_point();
        self.faces
            .iter()
            .map(|&[a, b, d]| {
                let (a, b, d) = (self.points[a], self.points[b], self.points[d]);
                dot(sub(a, c), cross(sub(b, c), sub(d, c))) / 6.0
            })
            .sum()
    }

    pub fn area(&self) -> f64 {
        self.faces
            .iter()
            .map(|&f| 0.5 * norm(self.raw_normal(f)))
            .sum()
    }

    /// `0.5 * sum over edges of (edge length) * (exterior dihedral angle)`.
    pub fn edge_curvature(&self) -> f64 {
        let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                owner.insert((f[e], f[(e + 1) % 3]), fi);
            }
        }
        let normals: Vec<V3> = self
            .faces
            .iter()
            .map(|&f| {
                let n = self.raw_normal(f);
                scale3(n, 1.0 / norm(n))
            })
            .collect();
        let mut total = 0.0;
        for (fi, f) in self.faces.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (f[e], f[(e + 1) % 3]);
                if a > b {
                    continue;
                }
                if let Some(&gi) = owner.get(&(b, a)) {
                    let (n, m) = (normals[fi], normals[gi]);
                    // atan2 stays accurate for nearly coplanar neighbours, unlike acos.
                    let angle = norm(cross(n, m)).atan2(dot(n, m));
                    total += norm(sub(self.points[a], self.points[b])) * angle;
                }
            }
        }
        0.5 * total
    }

    /// Supporting planes of the triangles with near-duplicates merged.
    pub fn planes(&self) -> Vec<Plane> {
        let scale = self
            .points
            .iter()
            .flat_map(|p| p.iter())
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .max(1.0);
        let mut out: Vec<Plane> = Vec::new();
        for &f in &self.faces {
            let n = self.raw_normal(f);
            let n = scale3(n, 1.0 / norm(n));
            let offset = dot(n, self.points[f[0]]);
            let dup = out.iter().any(|q| {
                norm(sub(q.normal, n)) < 1e-9 && (q.offset - offset).abs() < 1e-9 * scale
            });
            if !dup {
                out.push(Plane { normal: n, offset });
            }
        }
        out
    }

    fn interior_point(&self) -> V3 {
        let idx = self.vertex_indices();
        let sum = idx
            .iter()
            .fold([0.0; 3], |acc, &i| add(acc, self.points[i]));
        scale3(sum, 1.0 / idx.len() as f64)
    }

    fn raw_normal(&self, f: [usize; 3]) -> V3 {
        let (a, b, c) = (self.points[f[0]], self.points[f[1]], self.points[f[2]]);
        cross(sub(b, a), sub(c, a))
    }
}

fn argmax(points: &[V3], f: impl Fn(V3) -> f64) -> usize {
    (0..points.len())
        .max_by(|&a, &b| f(points[a]).total_cmp(&f(points[b])))
        .unwrap()
}

#[inline]
fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
#[inline]
fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}
#[inline]
fn scale3(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}
#[inline]
fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
#[inline]
fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
#[inline]
fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}
