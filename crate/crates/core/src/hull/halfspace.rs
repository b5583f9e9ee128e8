//! Inner parallel bodies of polytopes via their facet description (dimensions 1 to 3).

use nalgebra::{DMatrix, DVector};

use super::planar::convex_hull_2d;
use super::spatial::Hull3;
use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::points::PointSet;

/// Facet inequalities `normal . x <= offset` (unit normals) of `conv(points)`.
/// Returns `None` when the hull is not full-dimensional.
pub fn facets(points: &PointSet) -> Result<Option<Vec<(Vec<f64>, f64)>>> {
    let scale = points.max_abs().max(f64::MIN_POSITIVE);
    match points.dim() {
        1 => {
            let (lo, hi) = points
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                    (lo.min(p[0]), hi.max(p[0]))
                });
            if hi - lo <= 1e-12 * scale {
                return Ok(None);
            }
            Ok(Some(vec![(vec![1.0], hi), (vec![-1.0], -lo)]))
        }
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            let h = convex_hull_2d(&pts);
            if h.len() < 3 {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(h.len());
            for i in 0..h.len() {
                let a = pts[h[i]];
                let b = pts[h[(i + 1) % h.len()]];
                // Counter-clockwise order: the outward normal is the edge rotated clockwise.
                let (nx, ny) = (b[1] - a[1], a[0] - b[0]);
                let len = (nx * nx + ny * ny).sqrt();
                let n = vec![nx / len, ny / len];
                let off = n[0] * a[0] + n[1] * a[1];
                out.push((n, off));
            }
            Ok(Some(out))
        }
        3 => {
            let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
            Ok(Hull3::build(&pts, 1e-12).map(|h| {
                h.planes()
                    .into_iter()
                    .map(|pl| (pl.normal.to_vec(), pl.offset))
                    .collect()
            }))
        }
        d => Err(Error::Unsupported(format!(
            "facet enumeration is available for dimensions 1 to 3, not {d}"
        ))),
    }
}

/// Vertices of `conv(points) ⊖ s·B` for `s > 0`, or `None` when the result is empty.
pub fn erode_polytope(points: &PointSet, s: f64) -> Result<Option<PointSet>> {
    let dim = points.dim();
    let Some(planes) = facets(points)? else {
        // A lower-dimensional set contains no ball of positive radius.
        return Ok(None);
    };
    let shifted: Vec<(Vec<f64>, f64)> = planes.into_iter().map(|(n, b)| (n, b - s)).collect();
    let scale = points.max_abs().max(1.0);
    let feas_tol = 1e-9 * scale;
    let mut out = PointSet::new(dim);

    let mut combo: Vec<usize> = (0..dim).collect();
    let m = shifted.len();
    if m < dim {
        return Ok(None);
    }
    loop {
        let a = DMatrix::from_fn(dim, dim, |r, c| shifted[combo[r]].0[c]);
        let b = DVector::from_fn(dim, |r, _| shifted[combo[r]].1);
        if a.determinant().abs() > 1e-12 {
            if let Some(x) = a.lu().solve(&b) {
                let x: Vec<f64> = x.iter().copied().collect();
                let feasible = shifted.iter().all(|(n, off)| dot(n, &x) <= off + feas_tol);
                let seen = out
                    .iter()
                    .any(|q| crate::linalg::dist(q, &x) <= 1e-9 * scale);
                if feasible && !seen {
                    out.push(&x);
                }
            }
        }
        if !next_combination(&mut combo, m) {
            break;
        }
    }
    Ok(if out.is_empty() { None } else { Some(out) })
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in (i + 1)..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_square() -> PointSet {
        PointSet::from_rows(
            2,
            &[
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
            "v",
        )
        .unwrap()
    }

    #[test]
    fn square_erodes_to_smaller_square() {
        let out = erode_polytope(&unit_square(), 0.25).unwrap().unwrap();
        assert_eq!(out.len(), 4);
        for p in out.iter() {
            for c in p {
                assert!((c - 0.25).abs() < 1e-12 || (c - 0.75).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn square_erodes_to_point_then_empty() {
        let out = erode_polytope(&unit_square(), 0.5).unwrap().unwrap();
        assert_eq!(out.len(), 1);
        assert!(erode_polytope(&unit_square(), 0.6).unwrap().is_none());
    }

    #[test]
    fn box_erodes_to_segment() {
        let mut rows = Vec::new();
        for x in [0.0, 2.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    rows.push(vec![x, y, z]);
                }
            }
        }
        let b = PointSet::from_rows(3, &rows, "v").unwrap();
        let out = erode_polytope(&b, 0.5).unwrap().unwrap();
        assert_eq!(out.len(), 2);
        assert!((out.diameter() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn flat_set_erodes_to_empty() {
        let seg = PointSet::from_rows(2, &[vec![0.0, 0.0], vec![3.0, 0.0]], "v").unwrap();
        assert!(erode_polytope(&seg, 0.1).unwrap().is_none());
    }

    #[test]
    fn interval() {
        let seg = PointSet::from_rows(1, &[vec![-1.0], vec![2.0]], "v").unwrap();
        let out = erode_polytope(&seg, 0.5).unwrap().unwrap();
        assert_eq!(out.len(), 2);
        assert!((out.diameter() - 2.0).abs() < 1e-12);
    }
}
