//! Minimal enclosing ball (Welzl's algorithm, move-to-front variant) in any dimension.

use nalgebra::{DMatrix, DVector};

use crate::linalg::dist;
use crate::points::PointSet;

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingBall {
    pub center: Vec<f64>,
    pub radius: f64,
}

impl EnclosingBall {
    fn contains(&self, p: &[f64]) -> bool {
        self.radius >= 0.0 && dist(&self.center, p) <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Smallest ball containing all points of `points` (which must be nonempty).
pub fn min_enclosing_ball(points: &PointSet) -> EnclosingBall {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let owned = points.dedup(1e-12);
    let mut pts: Vec<&[f64]> = owned.iter().collect();
    let end = pts.len();
    let mut support = Vec::with_capacity(points.dim() + 1);
    move_to_front(&mut pts, end, &mut support, points.dim())
}

fn move_to_front<'a>(
    pts: &mut Vec<&'a [f64]>,
    end: usize,
    support: &mut Vec<&'a [f64]>,
    dim: usize,
) -> EnclosingBall {
    let mut ball = circumball(support, dim);
    if support.len() == dim + 1 {
        return ball;
    }
    for i in 0..end {
        let p = pts[i];
        if !ball.contains(p) {
            support.push(p);
            ball = move_to_front(pts, i, support, dim);
            support.pop();
            pts[..=i].rotate_right(1);
        }
    }
    ball
}

/// Smallest ball with all of `support` on its boundary (center in their affine hull).
fn circumball(support: &[&[f64]], dim: usize) -> EnclosingBall {
    match support.len() {
        0 => EnclosingBall {
            center: vec![0.0; dim],
            radius: -1.0,
        },
        1 => EnclosingBall {
            center: support[0].to_vec(),
            radius: 0.0,
        },
        n => {
            let p0 = support[0];
            let m = n - 1;
            let a = DMatrix::from_fn(dim, m, |r, c| support[c + 1][r] - p0[r]);
            let gram = a.transpose() * &a;
            let rhs = DVector::from_fn(m, |i, _| 0.5 * gram[(i, i)]);
            let lambda = gram
                .clone()
                .lu()
                .solve(&rhs)
                .or_else(|| gram.pseudo_inverse(1e-14).ok().map(|pinv| pinv * &rhs))
                .unwrap_or_else(|| DVector::zeros(m));
            let offset = a * lambda;
            let center: Vec<f64> = p0.iter().zip(offset.iter()).map(|(p, o)| p + o).collect();
            let radius = support
                .iter()
                .map(|q| dist(&center, q))
                .fold(0.0, f64::max);
            EnclosingBall { center, radius }
        }
    }
}
