//! Exact quermassintegrals of `P ⊕ rB` when the polytope `P` has affine dimension
//! at most three.
//!
//! The intrinsic volumes `V_j(P)` do not depend on the ambient space, and
//! `Vol(P + ρB^d) = Σ_j ω_{d-j} V_j(P) ρ^{d-j}`. Substituting `ρ = r + t` and
//! matching powers of `t` gives every `W_i(P ⊕ rB)` in any ambient dimension.

use super::{Method, QuermassVector, UnitBallVolumes};
use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::hull::{convex_hull_2d, polygon_area, polygon_perimeter, Hull3};
use crate::linalg::binomial;
use crate::points::PointSet;

/// `[V_0, …, V_m]` of `conv(core)` where `m ≤ 3` is its affine dimension.
pub fn core_intrinsic_volumes(core: &PointSet) -> Result<Vec<f64>> {
    let scale = core.max_abs().max(f64::MIN_POSITIVE);
    let aff = core.affine_hull(1e-12 * scale);
    let local = core.map(aff.dim(), |p| aff.local(p));
    match aff.dim() {
        0 => Ok(vec![1.0]),
        1 => Ok(vec![1.0, local.diameter()]),
        2 => {
            let (area, perimeter) = planar_measures(&local);
            Ok(vec![1.0, perimeter / 2.0, area])
        }
        3 => {
            let pts: Vec<[f64; 3]> = local.iter().map(|p| [p[0], p[1], p[2]]).collect();
            match Hull3::build(&pts, 1e-12) {
                Some(h) => Ok(vec![
                    1.0,
                    h.edge_curvature() / std::f64::consts::PI,
                    h.area() / 2.0,
                    h.volume(),
                ]),
                // Thinner than the hull tolerance: treat as planar.
                None => {
                    let flat = core.affine_hull(1e-9 * scale);
                    if flat.dim() >= 3 {
                        return Err(Error::invalid("core hull construction failed"));
                    }
                    let local = core.map(flat.dim(), |p| flat.local(p));
                    core_intrinsic_volumes(&local)
                }
            }
        }
        m => Err(Error::Unsupported(format!(
            "exact quermassintegrals need a core of affine dimension <= 3, found {m}"
        ))),
    }
}

fn planar_measures(points: &PointSet) -> (f64, f64) {
    let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
    let poly: Vec<[f64; 2]> = convex_hull_2d(&pts).into_iter().map(|i| pts[i]).collect();
    (polygon_area(&poly), polygon_perimeter(&poly))
}

/// `W_i(P ⊕ rB^d) = Σ_j ω_{d-j} V_j(P) C(d-j, i) r^{d-j-i} / C(d, i)`.
pub fn quermass_from_intrinsic(dim: usize, r: f64, intrinsic: &[f64]) -> Vec<f64> {
    let omega = UnitBallVolumes::up_to(dim);
    (0..=dim)
        .map(|i| {
            let top = (dim - i).min(intrinsic.len() - 1);
            let s: f64 = (0..=top)
                .map(|j| {
                    omega.get(dim - j)
                        * intrinsic[j]
                        * binomial(dim - j, i)
                        * r.powi((dim - j - i) as i32)
                })
                .sum();
            s / binomial(dim, i)
        })
        .collect()
}

/// Exact route for any body whose core spans at most three dimensions.
pub fn quermass_exact(body: &ConvexBody) -> Result<QuermassVector> {
    let v = core_intrinsic_volumes(&body.core_points())?;
    if v.len() > body.dim() + 1 {
        return Err(Error::invalid("core dimension exceeds ambient dimension"));
    }
    let values = quermass_from_intrinsic(body.dim(), body.radius(), &v);
    Ok(QuermassVector::exact(body.dim(), values, Method::ExactFace))
}

/// Planar route: `W_0 = a + p r + π r²`, `W_1 = (p + 2π r)/2`, `W_2 = π`.
pub fn quermass_exact_2d(body: &ConvexBody) -> Result<QuermassVector> {
    require_dim(body, 2)?;
    quermass_exact(body)
}

/// Spatial route: `W_0 = V + A r + M r² + 4π r³/3`, `3W_1 = A + 2Mr + 4πr²`,
/// `3W_2 = M + 4πr`, `W_3 = 4π/3`, with `M = ½ Σ_e ℓ_e θ_e`.
pub fn quermass_exact_3d(body: &ConvexBody) -> Result<QuermassVector> {
    require_dim(body, 3)?;
    quermass_exact(body)
}

fn require_dim(body: &ConvexBody, d: usize) -> Result<()> {
    if body.dim() != d {
        return Err(Error::DimensionMismatch {
            field: "body.dim".into(),
            expected: d,
            found: body.dim(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quermass::{quermass_ball, quermass_sausage};
    use std::f64::consts::PI;

    fn square(side: f64) -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![side, 0.0],
            vec![side, side],
            vec![0.0, side],
        ]
    }

    fn close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn unit_square_core() {
        let k = ConvexBody::core_ball(2, &square(1.0), 1.0).unwrap();
        let w = quermass_exact_2d(&k).unwrap();
        close(&w.values, &[5.0 + PI, 2.0 + PI, PI], 1e-14);
        assert_eq!(w.method, Method::ExactFace);
    }

    #[test]
    fn rounded_square_side_two() {
        let k = ConvexBody::core_ball(2, &square(2.0), 1.0).unwrap();
        let w = quermass_exact_2d(&k).unwrap();
        close(&w.values, &[12.0 + PI, 4.0 + PI, PI], 1e-13);
    }

    #[test]
    fn planar_routes_match_closed_forms() {
        let b = ConvexBody::ball(vec![0.3, -1.0], 1.0).unwrap();
        close(
            &quermass_exact_2d(&b).unwrap().values,
            &quermass_ball(2, 1.0).unwrap().values,
            1e-14,
        );
        let s = ConvexBody::sausage(vec![0.0, 0.0], vec![3.0, 0.0], 1.0).unwrap();
        close(
            &quermass_exact_2d(&s).unwrap().values,
            &quermass_sausage(2, 1.0, 3.0).unwrap().values,
            1e-14,
        );
        assert!(quermass_exact_2d(&ConvexBody::unit_ball(3).unwrap()).is_err());
    }

    #[test]
    fn spatial_routes() {
        let b = ConvexBody::unit_ball(3).unwrap();
        close(&quermass_exact_3d(&b).unwrap().values, &[4.0 * PI / 3.0; 4], 1e-14);

        let s = ConvexBody::core_ball(3, &[vec![0.0; 3], vec![0.0, 2.0, 0.0]], 1.0).unwrap();
        close(
            &quermass_exact_3d(&s).unwrap().values,
            &quermass_sausage(3, 1.0, 2.0).unwrap().values,
            1e-13,
        );

        let mut cube = Vec::new();
        for x in [0.0, 1.0] {
            for y in [0.0, 1.0] {
                for z in [0.0, 1.0] {
                    cube.push(vec![x, y, z]);
                }
            }
        }
        let k = ConvexBody::core_ball(3, &cube, 1.0).unwrap();
        let w = quermass_exact_3d(&k).unwrap();
        let expect = [
            1.0 + 6.0 + 3.0 * PI + 4.0 * PI / 3.0,
            (6.0 + 6.0 * PI + 4.0 * PI) / 3.0,
            (3.0 * PI + 4.0 * PI) / 3.0,
            4.0 * PI / 3.0,
        ];
        close(&w.values, &expect, 1e-12);
    }

    #[test]
    fn planar_core_in_space() {
        // Square of side s: V = 0, A = 2s², M = π·(4s)/2.
        let s = 1.5;
        let core: Vec<Vec<f64>> = square(s).into_iter().map(|p| vec![p[0], p[1], 0.7]).collect();
        let k = ConvexBody::core_ball(3, &core, 1.0).unwrap();
        let w = quermass_exact_3d(&k).unwrap();
        let (a, m) = (2.0 * s * s, PI * 4.0 * s / 2.0);
        let expect = [
            a + m + 4.0 * PI / 3.0,
            (a + 2.0 * m + 4.0 * PI) / 3.0,
            (m + 4.0 * PI) / 3.0,
            4.0 * PI / 3.0,
        ];
        close(&w.values, &expect, 1e-12);
    }

    #[test]
    fn segment_core_in_four_dimensions() {
        let k = ConvexBody::core_ball(
            4,
            &[vec![0.0; 4], vec![1.0, 1.0, 1.0, 1.0]],
            0.5,
        )
        .unwrap();
        close(
            &quermass_exact(&k).unwrap().values,
            &quermass_sausage(4, 0.5, 2.0).unwrap().values,
            1e-13,
        );
    }

    #[test]
    fn full_dimensional_core_in_four_dimensions_is_unsupported() {
        let mut core = vec![vec![0.0; 4]];
        for i in 0..4 {
            let mut e = vec![0.0; 4];
            e[i] = 1.0;
            core.push(e);
        }
        let k = ConvexBody::core_ball(4, &core, 1.0).unwrap();
        assert!(matches!(quermass_exact(&k), Err(Error::Unsupported(_))));
    }

    #[test]
    fn polytope_without_ball() {
        let k = ConvexBody::v_polytope(2, &square(2.0)).unwrap();
        close(&quermass_exact_2d(&k).unwrap().values, &[4.0, 4.0, PI], 1e-14);
    }
}
