//! Convex bodies and the geometric primitives the estimators build on.
//!
//! A body with bounded normal curvature `λ` is represented constructively as a
//! polytope core dilated by a ball of radius `1/λ` ([`BodyKind::CoreBall`]).
//! Balls and sausages are the cores of dimension zero and one; they get their own
//! variants so that closed forms and exact distance routines apply directly.
//! [`BodyKind::VPolytope`] is a plain vertex polytope and carries no curvature bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{self, convex_hull_2d, erode_polytope, Hull3, HullSolver};
use crate::linalg::{dist, dot, norm};
use crate::points::PointSet;

/// Default relative threshold for affine-rank decisions on cores.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum BodyKind {
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Sausage {
        p: Vec<f64>,
        q: Vec<f64>,
        radius: f64,
    },
    CoreBall {
        core: PointSet,
        radius: f64,
    },
    VPolytope {
        vertices: PointSet,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexBody {
    dim: usize,
    kind: BodyKind,
}

/// A support-function evaluation `h_K(direction)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSample {
    pub direction: Vec<f64>,
    pub value: f64,
}

impl SupportSample {
    pub fn measure(body: &ConvexBody, direction: &[f64]) -> Result<Self> {
        Ok(SupportSample {
            direction: direction.to_vec(),
            value: body.support(direction)?,
        })
    }
}

/// An orthonormal frame spanning a linear subspace; columns are stored as rows of `columns`.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    ambient: usize,
    columns: Vec<Vec<f64>>,
}

impl Frame {
    /// Checks that the columns are orthonormal to within `1e-10`.
    pub fn new(columns: Vec<Vec<f64>>) -> Result<Self> {
        let ambient = columns.first().map(Vec::len).unwrap_or(0);
        if columns.is_empty() || ambient == 0 {
            return Err(Error::invalid("frame needs at least one nonempty column"));
        }
        for (i, c) in columns.iter().enumerate() {
            if c.len() != ambient {
                return Err(Error::DimensionMismatch {
                    field: format!("frame[{i}]"),
                    expected: ambient,
                    found: c.len(),
                });
            }
        }
        for i in 0..columns.len() {
            for j in i..columns.len() {
                let expected = if i == j { 1.0 } else { 0.0 };
                let g = dot(&columns[i], &columns[j]);
                if (g - expected).abs() > 1e-10 {
                    return Err(Error::invalid(format!(
                        "frame is not orthonormal: <c{i}, c{j}> = {g}"
                    )));
                }
            }
        }
        Ok(Frame { ambient, columns })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    /// Coordinates of the orthogonal projection of `p` in this frame.
    pub fn coords(&self, p: &[f64]) -> Vec<f64> {
        self.columns.iter().map(|c| dot(c, p)).collect()
    }
}

impl ConvexBody {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = center.len();
        check_dim_positive(dim)?;
        check_point(&center, "center")?;
        check_radius(radius, "radius", false)?;
        Ok(ConvexBody {
            dim,
            kind: BodyKind::Ball { center, radius },
        })
    }

    pub fn unit_ball(dim: usize) -> Result<Self> {
        Self::ball(vec![0.0; dim], 1.0)
    }

    pub fn sausage(p: Vec<f64>, q: Vec<f64>, radius: f64) -> Result<Self> {
        let dim = p.len();
        check_dim_positive(dim)?;
        check_point(&p, "p")?;
        if q.len() != dim {
            return Err(Error::DimensionMismatch {
                field: "q".into(),
                expected: dim,
                found: q.len(),
            });
        }
        check_point(&q, "q")?;
        check_radius(radius, "radius", false)?;
        Ok(ConvexBody {
            dim,
            kind: BodyKind::Sausage { p, q, radius },
        })
    }

    /// `conv(core) ⊕ radius·B`. A zero radius is accepted as an erosion intermediate.
    pub fn core_ball(dim: usize, core: &[Vec<f64>], radius: f64) -> Result<Self> {
        check_dim_positive(dim)?;
        if core.is_empty() {
            return Err(Error::format("core_vertices", "must be nonempty"));
        }
        let core = PointSet::from_rows(dim, core, "core_vertices")?;
        check_radius(radius, "radius", true)?;
        Ok(ConvexBody {
            dim,
            kind: BodyKind::CoreBall { core, radius },
        })
    }

    pub fn v_polytope(dim: usize, vertices: &[Vec<f64>]) -> Result<Self> {
        check_dim_positive(dim)?;
        if vertices.is_empty() {
            return Err(Error::format("vertices", "must be nonempty"));
        }
        let vertices = PointSet::from_rows(dim, vertices, "vertices")?;
        Ok(ConvexBody {
            dim,
            kind: BodyKind::VPolytope { vertices },
        })
    }

    fn from_core(core: PointSet, radius: f64) -> Self {
        ConvexBody {
            dim: core.dim(),
            kind: BodyKind::CoreBall { core, radius },
        }
    }

    fn from_vertices(vertices: PointSet) -> Self {
        ConvexBody {
            dim: vertices.dim(),
            kind: BodyKind::VPolytope { vertices },
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &BodyKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            BodyKind::Ball { .. } => "ball",
            BodyKind::Sausage { .. } => "sausage",
            BodyKind::CoreBall { .. } => "core_ball",
            BodyKind::VPolytope { .. } => "v_polytope",
        }
    }

    /// Radius of the dilating ball; zero for a plain polytope.
    pub fn radius(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius, .. }
            | BodyKind::Sausage { radius, .. }
            | BodyKind::CoreBall { radius, .. } => *radius,
            BodyKind::VPolytope { .. } => 0.0,
        }
    }

    /// Curvature bound `1/radius` carried by the representation, if any.
    pub fn lambda(&self) -> Option<f64> {
        match self.kind {
            BodyKind::VPolytope { .. } => None,
            _ if self.radius() > 0.0 => Some(1.0 / self.radius()),
            _ => None,
        }
    }

    pub fn has_core(&self) -> bool {
        !matches!(self.kind, BodyKind::VPolytope { .. })
    }

    /// The polytope whose dilation is this body (the vertex set for a plain polytope).
    pub fn core_points(&self) -> PointSet {
        match &self.kind {
            BodyKind::Ball { center, .. } => {
                let mut s = PointSet::new(self.dim);
                s.push(center);
                s
            }
            BodyKind::Sausage { p, q, .. } => {
                let mut s = PointSet::new(self.dim);
                s.push(p);
                s.push(q);
                s
            }
            BodyKind::CoreBall { core, .. } => core.clone(),
            BodyKind::VPolytope { vertices } => vertices.clone(),
        }
    }

    /// Support function `h_K(u) = max <x, u>` for a unit vector `u`.
    pub fn support(&self, u: &[f64]) -> Result<f64> {
        self.check_len(u, "u")?;
        let n = norm(u);
        if (n - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitDirection { norm: n });
        }
        Ok(self.support_unchecked(u))
    }

    pub(crate) fn support_unchecked(&self, u: &[f64]) -> f64 {
        let core_max = match &self.kind {
            BodyKind::Ball { center, .. } => dot(center, u),
            BodyKind::Sausage { p, q, .. } => dot(p, u).max(dot(q, u)),
            BodyKind::CoreBall { core, .. } => core
                .iter()
                .map(|v| dot(v, u))
                .fold(f64::NEG_INFINITY, f64::max),
            BodyKind::VPolytope { vertices } => vertices
                .iter()
                .map(|v| dot(v, u))
                .fold(f64::NEG_INFINITY, f64::max),
        };
        core_max + self.radius()
    }

    /// Axis-aligned bounding box from support values in the coordinate directions.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![0.0; self.dim];
        let mut hi = vec![0.0; self.dim];
        let mut e = vec![0.0; self.dim];
        for i in 0..self.dim {
            e[i] = 1.0;
            hi[i] = self.support_unchecked(&e);
            e[i] = -1.0;
            lo[i] = -self.support_unchecked(&e);
            e[i] = 0.0;
        }
        (lo, hi)
    }

    /// `dist(x, K) <= tol`.
    pub fn contains(&self, x: &[f64], tol: f64) -> Result<bool> {
        self.check_len(x, "x")?;
        match &self.kind {
            BodyKind::Ball { center, radius } => Ok(dist(x, center) <= radius + tol),
            BodyKind::Sausage { p, q, radius } => Ok(segment_distance(x, p, q) <= radius + tol),
            BodyKind::CoreBall { core, radius } => HullSolver::new(core).within(x, radius + tol),
            BodyKind::VPolytope { vertices } => HullSolver::new(vertices).within(x, tol),
        }
    }

    /// Outer parallel body `K ⊕ tB`.
    pub fn dilate(&self, t: f64) -> Result<ConvexBody> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("dilation radius must be >= 0, got {t}")));
        }
        let kind = match &self.kind {
            BodyKind::Ball { center, radius } => BodyKind::Ball {
                center: center.clone(),
                radius: radius + t,
            },
            BodyKind::Sausage { p, q, radius } => BodyKind::Sausage {
                p: p.clone(),
                q: q.clone(),
                radius: radius + t,
            },
            BodyKind::CoreBall { core, radius } => BodyKind::CoreBall {
                core: core.clone(),
                radius: radius + t,
            },
            BodyKind::VPolytope { vertices } => BodyKind::CoreBall {
                core: vertices.clone(),
                radius: t,
            },
        };
        Ok(ConvexBody {
            dim: self.dim,
            kind,
        })
    }

    /// Inner parallel body `K ⊖ tB`; `Ok(None)` means the result is empty.
    ///
    /// Erosion within the dilation radius is exact. Eroding further cuts into the
    /// polytope core, which needs its facets and is only available up to dimension 3.
    pub fn erode(&self, t: f64) -> Result<Option<ConvexBody>> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::invalid(format!("erosion radius must be >= 0, got {t}")));
        }
        if t == 0.0 {
            return Ok(Some(self.clone()));
        }
        let r = self.radius();
        if t < r {
            let kind = match &self.kind {
                BodyKind::Ball { center, .. } => BodyKind::Ball {
                    center: center.clone(),
                    radius: r - t,
                },
                BodyKind::Sausage { p, q, .. } => BodyKind::Sausage {
                    p: p.clone(),
                    q: q.clone(),
                    radius: r - t,
                },
                BodyKind::CoreBall { core, .. } => BodyKind::CoreBall {
                    core: core.clone(),
                    radius: r - t,
                },
                BodyKind::VPolytope { .. } => unreachable!("polytopes have zero radius"),
            };
            return Ok(Some(ConvexBody {
                dim: self.dim,
                kind,
            }));
        }
        let core = self.core_points();
        if t == r {
            return Ok(Some(ConvexBody::from_vertices(core)));
        }
        match &self.kind {
            BodyKind::Ball { .. } | BodyKind::Sausage { .. } => Ok(None),
            _ if self.dim > 3 => Err(Error::Unsupported(format!(
                "eroding past the ball radius needs facet enumeration, available only in \
                 dimensions <= 3 (body has dimension {})",
                self.dim
            ))),
            _ => Ok(erode_polytope(&core, t - r)?.map(ConvexBody::from_vertices)),
        }
    }

    /// Orthogonal projection onto the span of `frame`, in frame coordinates.
    pub fn project(&self, frame: &Frame) -> Result<ConvexBody> {
        if frame.ambient_dim() != self.dim {
            return Err(Error::DimensionMismatch {
                field: "frame".into(),
                expected: self.dim,
                found: frame.ambient_dim(),
            });
        }
        let m = frame.rank();
        if m == 0 || m >= self.dim {
            return Err(Error::invalid(format!(
                "projection rank must satisfy 1 <= rank < {}, got {m}",
                self.dim
            )));
        }
        Ok(match &self.kind {
            BodyKind::Ball { center, radius } => ConvexBody {
                dim: m,
                kind: BodyKind::Ball {
                    center: frame.coords(center),
                    radius: *radius,
                },
            },
            BodyKind::Sausage { p, q, radius } => ConvexBody {
                dim: m,
                kind: BodyKind::Sausage {
                    p: frame.coords(p),
                    q: frame.coords(q),
                    radius: *radius,
                },
            },
            BodyKind::CoreBall { core, radius } => {
                ConvexBody::from_core(prune(core.map(m, |v| frame.coords(v))), *radius)
            }
            BodyKind::VPolytope { vertices } => {
                ConvexBody::from_vertices(prune(vertices.map(m, |v| frame.coords(v))))
            }
        })
    }

    /// Length of the longest segment in the body.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            BodyKind::Ball { radius, .. } => 2.0 * radius,
            BodyKind::Sausage { p, q, radius } => dist(p, q) + 2.0 * radius,
            BodyKind::CoreBall { core, radius } => core.diameter() + 2.0 * radius,
            BodyKind::VPolytope { vertices } => vertices.diameter(),
        }
    }

    /// Affine dimension of the core; `tol` is relative to the largest core-vertex norm.
    pub fn core_dimension(&self, tol: f64) -> Result<usize> {
        let core = match &self.kind {
            BodyKind::VPolytope { .. } => {
                return Err(Error::invalid("a plain polytope has no core"));
            }
            BodyKind::Ball { .. } => return Ok(0),
            _ => self.core_points(),
        };
        let threshold = tol * (core.max_norm() + 1.0);
        Ok(core.affine_hull(threshold).dim())
    }

    /// A body is a sausage exactly when its core has dimension at most one.
    pub fn is_sausage(&self, tol: f64) -> Result<bool> {
        Ok(self.core_dimension(tol)? <= 1)
    }

    /// The homothetic image `c·K` (about the origin), `c > 0`.
    pub fn scaled(&self, c: f64) -> Result<ConvexBody> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!("scale factor must be > 0, got {c}")));
        }
        let sc = |v: &[f64]| v.iter().map(|x| x * c).collect::<Vec<_>>();
        let kind = match &self.kind {
            BodyKind::Ball { center, radius } => BodyKind::Ball {
                center: sc(center),
                radius: radius * c,
            },
            BodyKind::Sausage { p, q, radius } => BodyKind::Sausage {
                p: sc(p),
                q: sc(q),
                radius: radius * c,
            },
            BodyKind::CoreBall { core, radius } => BodyKind::CoreBall {
                core: core.map(self.dim, sc),
                radius: radius * c,
            },
            BodyKind::VPolytope { vertices } => BodyKind::VPolytope {
                vertices: vertices.map(self.dim, sc),
            },
        };
        Ok(ConvexBody {
            dim: self.dim,
            kind,
        })
    }

    /// One-line human-readable description used in reports.
    pub fn summary(&self) -> String {
        match &self.kind {
            BodyKind::Ball { radius, .. } => format!("ball d={} r={radius}", self.dim),
            BodyKind::Sausage { p, q, radius } => {
                format!("sausage d={} r={radius} L={:.6}", self.dim, dist(p, q))
            }
            BodyKind::CoreBall { core, radius } => {
                format!("core_ball d={} r={radius} n={}", self.dim, core.len())
            }
            BodyKind::VPolytope { vertices } => {
                format!("v_polytope d={} n={}", self.dim, vertices.len())
            }
        }
    }

    fn check_len(&self, x: &[f64], field: &str) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                field: field.into(),
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(())
    }
}

/// Drops non-extreme points of a low-dimensional vertex list. Leaves the set alone
/// when it does not span its space (the hull routines need full dimension).
fn prune(points: PointSet) -> PointSet {
    match points.dim() {
        2 => {
            let pts: Vec<[f64; 2]> = points.iter().map(|p| [p[0], p[1]]).collect();
            let h = convex_hull_2d(&pts);
            if h.len() < 3 {
                return points;
            }
            let mut out = PointSet::new(2);
            for i in h {
                out.push(points.get(i));
            }
            out
        }
        3 => {
            let pts: Vec<[f64; 3]> = points.iter().map(|p| [p[0], p[1], p[2]]).collect();
            match Hull3::build(&pts, 1e-12) {
                Some(h) => {
                    let mut out = PointSet::new(3);
                    for i in h.vertex_indices() {
                        out.push(points.get(i));
                    }
                    out
                }
                None => points,
            }
        }
        _ => points,
    }
}

pub(crate) fn segment_distance(x: &[f64], p: &[f64], q: &[f64]) -> f64 {
    let pq2: f64 = p.iter().zip(q).map(|(a, b)| (b - a) * (b - a)).sum();
    let t = if pq2 > 0.0 {
        let num: f64 = p
            .iter()
            .zip(q)
            .zip(x)
            .map(|((a, b), c)| (c - a) * (b - a))
            .sum();
        (num / pq2).clamp(0.0, 1.0)
    } else {
        0.0
    };
    x.iter()
        .zip(p.iter().zip(q))
        .map(|(c, (a, b))| {
            let y = a + t * (b - a);
            (c - y) * (c - y)
        })
        .sum::<f64>()
        .sqrt()
}

fn check_dim_positive(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::format("dim", "must be a positive integer"));
    }
    Ok(())
}

fn check_point(p: &[f64], field: &str) -> Result<()> {
    if p.iter().any(|c| !c.is_finite()) {
        return Err(Error::format(field, "coordinates must be finite"));
    }
    Ok(())
}

fn check_radius(r: f64, field: &str, allow_zero: bool) -> Result<()> {
    let ok = r.is_finite() && (r > 0.0 || (allow_zero && r == 0.0));
    if !ok {
        let bound = if allow_zero { ">= 0" } else { "> 0" };
        return Err(Error::format(field, format!("must be finite and {bound}, got {r}")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// JSON

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawBody {
    dim: usize,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    core_vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

impl ConvexBody {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("body serialisation cannot fail")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_raw()).expect("body serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawBody =
            serde_json::from_str(text).map_err(|e| Error::format("body", e.to_string()))?;
        Self::from_raw(raw)
    }

    fn to_raw(&self) -> RawBody {
        let mut raw = RawBody {
            dim: self.dim,
            kind: self.kind_name().to_string(),
            center: None,
            p: None,
            q: None,
            core_vertices: None,
            vertices: None,
            radius: None,
        };
        match &self.kind {
            BodyKind::Ball { center, radius } => {
                raw.center = Some(center.clone());
                raw.radius = Some(*radius);
            }
            BodyKind::Sausage { p, q, radius } => {
                raw.p = Some(p.clone());
                raw.q = Some(q.clone());
                raw.radius = Some(*radius);
            }
            BodyKind::CoreBall { core, radius } => {
                raw.core_vertices = Some(core.to_rows());
                raw.radius = Some(*radius);
            }
            BodyKind::VPolytope { vertices } => raw.vertices = Some(vertices.to_rows()),
        }
        raw
    }

    fn from_raw(raw: RawBody) -> Result<Self> {
        let dim = raw.dim;
        check_dim_positive(dim)?;
        let allowed: &[&str] = match raw.kind.as_str() {
            "ball" => &["center", "radius"],
            "sausage" => &["p", "q", "radius"],
            "core_ball" => &["core_vertices", "radius"],
            "v_polytope" => &["vertices"],
            other => {
                return Err(Error::format(
                    "kind",
                    format!(
                        "unknown kind `{other}` (expected ball, sausage, core_ball or v_polytope)"
                    ),
                ))
            }
        };
        let present = [
            ("center", raw.center.is_some()),
            ("p", raw.p.is_some()),
            ("q", raw.q.is_some()),
            ("core_vertices", raw.core_vertices.is_some()),
            ("vertices", raw.vertices.is_some()),
            ("radius", raw.radius.is_some()),
        ];
        for (field, is_present) in present {
            if is_present && !allowed.contains(&field) {
                return Err(Error::format(
                    field,
                    format!("not a field of kind `{}`", raw.kind),
                ));
            }
            if !is_present && allowed.contains(&field) {
                return Err(Error::format(
                    field,
                    format!("required for kind `{}`", raw.kind),
                ));
            }
        }
        let point = |v: Vec<f64>, field: &str| -> Result<Vec<f64>> {
            if v.len() != dim {
                return Err(Error::DimensionMismatch {
                    field: field.into(),
                    expected: dim,
                    found: v.len(),
                });
            }
            Ok(v)
        };
        let radius = raw.radius.unwrap_or(0.0);
        match raw.kind.as_str() {
            "ball" => ConvexBody::ball(point(raw.center.unwrap(), "center")?, radius),
            "sausage" => ConvexBody::sausage(
                point(raw.p.unwrap(), "p")?,
                point(raw.q.unwrap(), "q")?,
                radius,
            ),
            "core_ball" => ConvexBody::core_ball(dim, &raw.core_vertices.unwrap(), radius),
            _ => ConvexBody::v_polytope(dim, &raw.vertices.unwrap()),
        }
    }
}

/// Convenience: distance from `x` to the hull of `vertices` (see [`hull::project_onto_hull`]).
pub fn distance_to_hull(x: &[f64], vertices: &PointSet, tol: f64) -> Result<f64> {
    hull::project_onto_hull(x, vertices, tol).map(|(_, d)| d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment_core() -> ConvexBody {
        ConvexBody::core_ball(2, &[vec![0.0, 0.0], vec![3.0, 0.0]], 1.0).unwrap()
    }

    fn unit_square_rows() -> Vec<Vec<f64>> {
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
        ]
    }

    #[test]
    fn support_values() {
        let b = ConvexBody::unit_ball(3).unwrap();
        assert_eq!(b.support(&[0.0, 1.0, 0.0]).unwrap(), 1.0);
        let k = segment_core();
        assert_eq!(k.support(&[1.0, 0.0]).unwrap(), 4.0);
        assert_eq!(k.support(&[0.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(
            k.support(&[1.0, 1.0]),
            Err(Error::NonUnitDirection { .. })
        ));
    }

    #[test]
    fn membership() {
        let b = ConvexBody::unit_ball(2).unwrap();
        assert!(b.contains(&[0.0, 0.0], 0.0).unwrap());
        let k = segment_core();
        assert!(k.contains(&[1.5, 0.999], 1e-9).unwrap());
        // dist((4,1), segment) = sqrt 2 > 1
        assert!(!k.contains(&[4.0, 1.0], 1e-9).unwrap());
        let sq = ConvexBody::core_ball(2, &unit_square_rows(), 0.5).unwrap();
        assert!(sq.contains(&[1.3, 1.3], 1e-9).unwrap());
        assert!(!sq.contains(&[1.4, 1.4], 1e-9).unwrap());
    }

    #[test]
    fn dilation() {
        let b = ConvexBody::unit_ball(2).unwrap().dilate(1.0).unwrap();
        assert_eq!(b.radius(), 2.0);
        let sq = ConvexBody::v_polytope(2, &unit_square_rows()).unwrap();
        let d = sq.dilate(0.25).unwrap();
        assert_eq!(
            d,
            ConvexBody::core_ball(2, &unit_square_rows(), 0.25).unwrap()
        );
        assert!(sq.dilate(-1.0).is_err());
    }

    #[test]
    fn erosion_to_core_and_beyond() {
        let k = ConvexBody::core_ball(2, &unit_square_rows(), 1.0).unwrap();
        let core = k.erode(1.0).unwrap().unwrap();
        assert_eq!(core, ConvexBody::v_polytope(2, &unit_square_rows()).unwrap());

        let sq = ConvexBody::v_polytope(2, &unit_square_rows()).unwrap();
        let inner = sq.erode(0.25).unwrap().unwrap();
        let BodyKind::VPolytope { vertices } = inner.kind() else {
            panic!("expected a polytope");
        };
        assert_eq!(vertices.len(), 4);
        for v in vertices.iter() {
            for c in v {
                assert!((c - 0.25).abs() < 1e-12 || (c - 0.75).abs() < 1e-12);
            }
        }
        assert!(sq.erode(0.75).unwrap().is_none());
        assert!(ConvexBody::unit_ball(3).unwrap().erode(1.5).unwrap().is_none());
    }

    #[test]
    fn erosion_past_radius_in_high_dimension_is_unsupported() {
        let k = ConvexBody::core_ball(4, &[vec![0.0; 4], vec![1.0, 0.0, 0.0, 0.0]], 1.0).unwrap();
        assert!(matches!(k.erode(1.5), Err(Error::Unsupported(_))));
        assert!(k.erode(0.5).unwrap().is_some());
    }

    #[test]
    fn diameters() {
        assert_eq!(ConvexBody::unit_ball(3).unwrap().diameter(), 2.0);
        let s = ConvexBody::sausage(vec![0.0, 0.0], vec![3.0, 0.0], 1.0).unwrap();
        assert_eq!(s.diameter(), 5.0);
        let k = ConvexBody::core_ball(2, &unit_square_rows(), 1.0).unwrap();
        assert!((k.diameter() - (2f64.sqrt() + 2.0)).abs() < 1e-15);
    }

    #[test]
    fn core_dimensions() {
        assert_eq!(ConvexBody::unit_ball(3).unwrap().core_dimension(1e-9).unwrap(), 0);
        let col = ConvexBody::core_ball(
            3,
            &[vec![0.0; 3], vec![1.0, 1.0, 0.0], vec![2.0, 2.0, 0.0]],
            1.0,
        )
        .unwrap();
        assert_eq!(col.core_dimension(1e-9).unwrap(), 1);
        assert!(col.is_sausage(1e-9).unwrap());
        let sq = ConvexBody::core_ball(2, &unit_square_rows(), 1.0).unwrap();
        assert_eq!(sq.core_dimension(1e-9).unwrap(), 2);
        assert!(!sq.is_sausage(1e-9).unwrap());
        let dup = ConvexBody::core_ball(2, &[vec![1.0, 1.0], vec![1.0, 1.0]], 1.0).unwrap();
        assert_eq!(dup.core_dimension(1e-9).unwrap(), 0);
        let poly = ConvexBody::v_polytope(2, &unit_square_rows()).unwrap();
        assert!(poly.core_dimension(1e-9).is_err());
    }

    #[test]
    fn projection_of_ball_and_sausage() {
        let frame = Frame::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
        let b = ConvexBody::unit_ball(3).unwrap().project(&frame).unwrap();
        assert_eq!(b, ConvexBody::unit_ball(2).unwrap());
        let s = ConvexBody::sausage(vec![0.0, 1.0, 0.0], vec![2.0, 1.0, 0.0], 1.0)
            .unwrap()
            .project(&frame)
            .unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.radius(), 1.0);
        assert!((s.diameter() - 4.0).abs() < 1e-15);
        assert!(Frame::new(vec![vec![1.0, 0.0, 0.0], vec![1.0, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn projection_prunes_interior_vertices() {
        let rows = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 5.0],
            vec![0.0, 1.0, -5.0],
            vec![1.0, 1.0, 0.0],
            vec![0.5, 0.5, 9.0],
        ];
        let k = ConvexBody::core_ball(3, &rows, 1.0).unwrap();
        let frame = Frame::new(vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]]).unwrap();
        let p = k.project(&frame).unwrap();
        assert_eq!(p.core_points().len(), 4);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let k = segment_core();
        let text = k.to_json();
        assert_eq!(
            text,
            r#"{"dim":2,"kind":"core_ball","core_vertices":[[0.0,0.0],[3.0,0.0]],"radius":1.0}"#
        );
        assert_eq!(ConvexBody::from_json(&text).unwrap(), k);

        let err = ConvexBody::from_json(r#"{"dim":2,"kind":"blob"}"#).unwrap_err();
        assert!(matches!(err, Error::Format { ref field, .. } if field == "kind"));
        let err =
            ConvexBody::from_json(r#"{"dim":3,"kind":"ball","center":[0,0],"radius":1}"#)
                .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { ref field, .. } if field == "center"));
        let err = ConvexBody::from_json(
            r#"{"dim":2,"kind":"core_ball","core_vertices":[[0,0],[1]],"radius":1}"#,
        )
        .unwrap_err();
        assert!(
            matches!(err, Error::DimensionMismatch { ref field, .. } if field == "core_vertices[1]")
        );
        let err = ConvexBody::from_json(r#"{"dim":2,"kind":"ball","center":[0,0]}"#).unwrap_err();
        assert!(matches!(err, Error::Format { ref field, .. } if field == "radius"));
        let err = ConvexBody::from_json(
            r#"{"dim":2,"kind":"ball","center":[0,0],"radius":1,"vertices":[[0,0]]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Format { ref field, .. } if field == "vertices"));
    }
}
