//! Planar convex hulls (Andrew's monotone chain) and polygon measures.

/// Indices of the convex hull vertices in counter-clockwise order, collinear
/// points dropped. Degenerate inputs return one index (all points coincide) or
/// the two extreme indices (all points collinear).
pub fn convex_hull_2d(points: &[[f64; 2]]) -> Vec<usize> {
    let n = points.len();
    if n == 0 {
        return Vec::new();
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    let scale = points
        .iter()
        .fold(0.0f64, |m, p| m.max(p[0].abs()).max(p[1].abs()))
        .max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale * scale;
    let cross = |o: usize, a: usize, b: usize| {
        let (o, a, b) = (points[o], points[a], points[b]);
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };

    let mut hull: Vec<usize> = Vec::with_capacity(2 * n);
    for &i in &idx {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= eps {
            hull.pop();
        }
        hull.push(i);
    }
    let lower_len = hull.len() + 1;
    for &i in idx.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], i) <= eps
        {
            hull.pop();
        }
        hull.push(i);
    }
    hull.pop();

    let tol = 1e-12 * scale;
    hull.dedup_by(|a, b| dist2(points[*a], points[*b]) <= tol);
    if hull.len() > 1 && dist2(points[hull[0]], points[*hull.last().unwrap()]) <= tol {
        hull.pop();
    }
    hull
}

/// Shoelace area of a counter-clockwise polygon.
pub fn polygon_area(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let (a, b) = (poly[i], poly[(i + 1) % n]);
        acc += a[0] * b[1] - a[1] * b[0];
    }
    0.5 * acc
}

/// Boundary length; a two-point polygon (segment) is traversed both ways.
pub fn polygon_perimeter(poly: &[[f64; 2]]) -> f64 {
    let n = poly.len();
    if n < 2 {
        return 0.0;
    }
    (0..n).map(|i| dist2(poly[i], poly[(i + 1) % n])).sum()
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}
