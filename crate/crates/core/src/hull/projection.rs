//! Euclidean projection onto the convex hull of a finite vertex set.
//!
//! The solver is a conditional-gradient (Frank-Wolfe) method with away steps over
//! the simplex of vertex weights, minimising `0.5 * |y - x|^2`. Every iterate yields
//! a certified bracket `lower <= dist(x, hull) <= upper`, where the upper bound is
//! `|y - x|` and the lower bound comes from the separating hyperplane through the
//! Frank-Wolfe vertex.

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::points::PointSet;

/// Iteration cap for the away-step solver.
pub const MAX_ITERATIONS: usize = 10_000;

/// Distance bracket produced by one solver iterate.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lower: f64,
    pub upper: f64,
    /// Frank-Wolfe duality gap; bounds `f(y) - f*` for `f = 0.5 |y - x|^2`.
    pub gap: f64,
    /// Gap below which further progress is not representable in `f64`.
    pub floor: f64,
}

#[derive(Debug, Clone)]
pub struct HullProjection {
    pub nearest: Vec<f64>,
    pub distance: f64,
    pub gap: f64,
    pub iterations: usize,
}

/// Projects `x` onto `conv(vertices)`; stops once the duality gap is at most `tol^2`
/// (or at the floating-point resolution of the gap, whichever is larger).
pub fn project_onto_hull(x: &[f64], vertices: &PointSet, tol: f64) -> Result<(Vec<f64>, f64)> {
    let p = HullSolver::new(vertices).project(x, tol)?;
    Ok((p.nearest, p.distance))
}

/// Reusable away-step Frank-Wolfe workspace for one vertex set.
pub struct HullSolver<'a> {
    verts: &'a PointSet,
    weights: Vec<f64>,
    scores: Vec<f64>,
    y: Vec<f64>,
    g: Vec<f64>,
    scale: f64,
    iterations: usize,
}

impl<'a> HullSolver<'a> {
    pub fn new(verts: &'a PointSet) -> Self {
        assert!(!verts.is_empty(), "vertex set must be nonempty");
        HullSolver {
            verts,
            weights: vec![0.0; verts.len()],
            scores: vec![0.0; verts.len()],
            y: vec![0.0; verts.dim()],
            g: vec![0.0; verts.dim()],
            scale: verts.max_abs(),
            iterations: 0,
        }
    }

    pub fn project(&mut self, x: &[f64], tol: f64) -> Result<HullProjection> {
        check_dim(x, self.verts.dim())?;
        let b = self.run(x, |b| b.gap <= (tol * tol).max(b.floor))?;
        Ok(HullProjection {
            nearest: self.y.clone(),
            distance: b.upper,
            gap: b.gap,
            iterations: self.iterations,
        })
    }

    /// Decides `dist(x, hull) <= threshold`, refining only as far as needed.
    pub fn within(&mut self, x: &[f64], threshold: f64) -> Result<bool> {
        check_dim(x, self.verts.dim())?;
        let b = self.run(x, |b| {
            b.upper <= threshold || b.lower > threshold || b.gap <= b.floor
        })?;
        Ok(b.upper <= threshold)
    }

    /// Index of the first threshold (ascending) that is at least `dist(x, hull)`, or
    /// `thresholds.len()` when the point is farther than all of them. Used by the
    /// Monte-Carlo estimator to classify one sample against a whole t-grid at once.
    pub fn classify(&mut self, x: &[f64], thresholds: &[f64]) -> usize {
        let first_at_least = |v: f64| thresholds.partition_point(|&t| t < v);
        let outcome = self.run(x, |b| {
            b.gap <= b.floor || first_at_least(b.upper) == first_at_least(b.lower)
        });
        match outcome {
            Ok(b) => first_at_least(b.upper),
            // At the cap the upper bound is the best available estimate.
            Err(_) => first_at_least(crate::linalg::dist(&self.y, x)),
        }
    }

    fn run(&mut self, x: &[f64], mut done: impl FnMut(&Bracket) -> bool) -> Result<Bracket> {
        self.iterations = 0;
        let n = self.verts.len();
        match n {
            1 => {
                self.y.copy_from_slice(self.verts.get(0));
                return Ok(self.exact_bracket(x));
            }
            2 => {
                self.project_segment(x);
                return Ok(self.exact_bracket(x));
            }
            _ => {}
        }

        // Warm start at the nearest vertex.
        let start = (0..n)
            .min_by(|&a, &b| {
                sq_dist(self.verts.get(a), x).total_cmp(&sq_dist(self.verts.get(b), x))
            })
            .unwrap_or(0);
        self.weights.iter_mut().for_each(|w| *w = 0.0);
        self.weights[start] = 1.0;
        let x_scale = x.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let scale = self.scale.max(x_scale).max(f64::MIN_POSITIVE);
        let dim = self.verts.dim() as f64;

        loop {
            self.recompute_iterate(x);
            let gy = dot(&self.g, &self.y);
            let upper = dot(&self.g, &self.g).sqrt();
            if upper == 0.0 {
                return Ok(Bracket {
                    lower: 0.0,
                    upper: 0.0,
                    gap: 0.0,
                    floor: 0.0,
                });
            }
            let mut fw = 0;
            let mut away = usize::MAX;
            for i in 0..n {
                let s = dot(&self.g, self.verts.get(i));
                self.scores[i] = s;
                if s < self.scores[fw] {
                    fw = i;
                }
                if self.weights[i] > 0.0 && (away == usize::MAX || s > self.scores[away]) {
                    away = i;
                }
            }
            let gap_fw = (gy - self.scores[fw]).max(0.0);
            let bracket = Bracket {
                lower: (upper - gap_fw / upper).max(0.0),
                upper,
                gap: gap_fw,
                floor: 64.0 * f64::EPSILON * upper * scale * dim.sqrt(),
            };
            if done(&bracket) {
                return Ok(bracket);
            }
            if self.iterations >= MAX_ITERATIONS {
                return Err(Error::Convergence {
                    iterations: self.iterations,
                    gap: gap_fw,
                });
            }
            self.iterations += 1;

            let gap_away = self.scores[away] - gy;
            if gap_fw >= gap_away || self.weights[away] >= 1.0 {
                let v = self.verts.get(fw);
                let d2 = sq_dist(v, &self.y);
                let gamma = if d2 > 0.0 { (gap_fw / d2).min(1.0) } else { 1.0 };
                for w in &mut self.weights {
                    *w *= 1.0 - gamma;
                }
                self.weights[fw] += gamma;
            } else {
                let wa = self.weights[away];
                let gamma_max = wa / (1.0 - wa);
                let d2 = sq_dist(self.verts.get(away), &self.y);
                let gamma = if d2 > 0.0 {
                    (gap_away / d2).min(gamma_max)
                } else {
                    gamma_max
                };
                for w in &mut self.weights {
                    *w *= 1.0 + gamma;
                }
                if gamma >= gamma_max {
                    self.weights[away] = 0.0;
                } else {
                    self.weights[away] -= gamma;
                }
            }
        }
    }

    fn recompute_iterate(&mut self, x: &[f64]) {
        self.y.iter_mut().for_each(|c| *c = 0.0);
        for (i, &w) in self.weights.iter().enumerate() {
            if w > 0.0 {
                for (yc, vc) in self.y.iter_mut().zip(self.verts.get(i)) {
                    *yc += w * vc;
                }
            }
        }
        for ((gc, yc), xc) in self.g.iter_mut().zip(&self.y).zip(x) {
            *gc = yc - xc;
        }
    }

    fn project_segment(&mut self, x: &[f64]) {
        let a = self.verts.get(0);
        let b = self.verts.get(1);
        let ab2 = sq_dist(a, b);
        let t = if ab2 > 0.0 {
            let num: f64 = a
                .iter()
                .zip(b)
                .zip(x)
                .map(|((ac, bc), xc)| (xc - ac) * (bc - ac))
                .sum();
            (num / ab2).clamp(0.0, 1.0)
        } else {
            0.0
        };
        for ((yc, ac), bc) in self.y.iter_mut().zip(a).zip(b) {
            *yc = ac + t * (bc - ac);
        }
    }

    fn exact_bracket(&mut self, x: &[f64]) -> Bracket {
        let d = sq_dist(&self.y, x).sqrt();
        Bracket {
            lower: d,
            upper: d,
            gap: 0.0,
            floor: 0.0,
        }
    }
}

fn check_dim(x: &[f64], dim: usize) -> Result<()> {
    if x.len() != dim {
        return Err(Error::DimensionMismatch {
            field: "x".into(),
            expected: dim,
            found: x.len(),
        });
    }
    Ok(())
}

#[inline]
fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| (p - q) * (p - q)).sum()
}
