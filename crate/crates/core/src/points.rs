use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::dist;

/// A finite list of points in `R^dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(dim: usize) -> Self {
        PointSet {
            dim,
            coords: Vec::new(),
        }
    }

    /// Builds a point set from rows, checking that every row has `dim` finite coordinates.
    /// `field` names the input in error messages.
    pub fn from_rows(dim: usize, rows: &[Vec<f64>], field: &str) -> Result<Self> {
        let mut set = PointSet::new(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    field: format!("{field}[{i}]"),
                    expected: dim,
                    found: row.len(),
                });
            }
            if row.iter().any(|c| !c.is_finite()) {
                return Err(Error::format(
                    format!("{field}[{i}]"),
                    "coordinates must be finite",
                ));
            }
            set.coords.extend_from_slice(row);
        }
        Ok(set)
    }

    pub fn push(&mut self, p: &[f64]) {
        debug_assert_eq!(p.len(), self.dim);
        self.coords.extend_from_slice(p);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.coords.len() / self.dim
        }
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> std::slice::ChunksExact<'_, f64> {
        self.coords.chunks_exact(self.dim.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    /// Largest absolute coordinate, used to scale tolerances.
    pub fn max_abs(&self) -> f64 {
        self.coords.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Largest Euclidean norm over the points.
    pub fn max_norm(&self) -> f64 {
        self.iter()
            .map(|p| p.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Drops points lying within `tol` of an earlier point.
    pub fn dedup(&self, tol: f64) -> PointSet {
        let mut out = PointSet::new(self.dim);
        for p in self.iter() {
            if !out.iter().any(|q| dist(p, q) <= tol) {
                out.push(p);
            }
        }
        out
    }

    /// Maps every point through `f`, which must return `new_dim` coordinates.
    pub fn map(&self, new_dim: usize, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> PointSet {
        let mut out = PointSet::new(new_dim);
        for p in self.iter() {
            out.push(&f(p));
        }
        out
    }

    pub fn diameter(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.max(dist(self.get(i), self.get(j)));
            }
        }
        best
    }

    /// Orthonormal basis of the affine hull, obtained from the singular vectors of
    /// the difference matrix. Singular values at or below `threshold` are treated as zero.
    pub fn affine_hull(&self, threshold: f64) -> AffineHull {
        let uniq = self.dedup(1e-12);
        let origin = uniq.get(0).to_vec();
        let m = uniq.len() - 1;
        if m == 0 {
            return AffineHull {
                origin,
                basis: Vec::new(),
            };
        }
        let diffs = DMatrix::from_fn(m, self.dim, |r, c| uniq.get(r + 1)[c] - origin[c]);
        let svd = diffs.svd(false, true);
        let v_t = svd.v_t.expect("requested right singular vectors");
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
        let basis = order
            .into_iter()
            .filter(|&i| svd.singular_values[i] > threshold)
            .map(|i| v_t.row(i).iter().copied().collect())
            .collect();
        AffineHull { origin, basis }
    }
}

/// An affine subspace `origin + span(basis)` with orthonormal `basis`.
#[derive(Debug, Clone)]
pub struct AffineHull {
    pub origin: Vec<f64>,
    pub basis: Vec<Vec<f64>>,
}

impl AffineHull {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Coordinates of `p` in the hull's own frame.
    pub fn local(&self, p: &[f64]) -> Vec<f64> {
        self.basis
            .iter()
            .map(|b| {
                b.iter()
                    .zip(p.iter().zip(&self.origin))
                    .map(|(bi, (pi, oi))| bi * (pi - oi))
                    .sum()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let err = PointSet::from_rows(2, &[vec![0.0, 0.0], vec![1.0]], "core_vertices").unwrap_err();
        assert_eq!(
            err,
            Error::DimensionMismatch {
                field: "core_vertices[1]".into(),
                expected: 2,
                found: 1
            }
        );
    }

    #[test]
    fn affine_hull_of_collinear_points() {
        let pts = PointSet::from_rows(
            3,
            &[vec![0.0, 0.0, 0.0], vec![1.0, 1.0, 1.0], vec![2.0, 2.0, 2.0]],
            "p",
        )
        .unwrap();
        let hull = pts.affine_hull(1e-9);
        assert_eq!(hull.dim(), 1);
        let c = hull.local(&[2.0, 2.0, 2.0]);
        assert!((c[0].abs() - 12f64.sqrt()).abs() < 1e-12);
    }
}
