//! Monte-Carlo estimation of the Steiner polynomial `t ↦ Vol(K + tB)` and a
//! covariance-weighted least-squares fit of its coefficients.
//!
//! Sampling is stratified over nested box shells: stratum `s` is the bounding box
//! of `K + t_s B` minus the box of `K + t_{s-1} B`. A sample in stratum `s` lies
//! outside `K + t_j B` for every `j < s`, so each stratum only informs the larger
//! parallel bodies, and every sample is classified against the whole grid with a
//! single distance evaluation. All grid points share the same samples; the full
//! covariance of the volume estimates is carried into a generalised least-squares
//! fit, falling back to ordinary least squares with a sandwich covariance when
//! the estimated covariance is singular.
//!
//! The error model is the binomial one, `p(1 - p)/n` per stratum, propagated
//! linearly. It is approximate because the weights are estimated from the same data.
//!
//! Reproducibility: stratum `s`, chunk `c` draws from ChaCha8 seeded with `seed` on
//! stream `(s << 32) | c`, chunks hold [`CHUNK_SIZE`] samples, and only integer hit
//! counts are aggregated. Results therefore do not depend on the thread count.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Method, QuermassVector};
use crate::body::{segment_distance, BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::hull::HullSolver;
use crate::linalg::{binomial, dist};
use crate::points::PointSet;

pub const CHUNK_SIZE: usize = 8192;
pub const MIN_SAMPLES: usize = 10_000;
/// Largest admissible condition number of the design matrix in body-relative units.
pub const MAX_CONDITION: f64 = 1e8;
const MIN_STRATUM_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq)]
pub struct McOptions {
    pub samples: usize,
    /// `None` selects [`default_t_grid`].
    pub t_grid: Option<Vec<f64>>,
    pub seed: u64,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions {
            samples: 1_000_000,
            t_grid: None,
            seed: 0,
        }
    }
}

impl McOptions {
    pub fn new(samples: usize, seed: u64) -> Self {
        McOptions {
            samples,
            t_grid: None,
            seed,
        }
    }
}

/// Estimated and fitted Steiner polynomial on the t-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SteinerFit {
    pub quermass: QuermassVector,
    pub t_grid: Vec<f64>,
    pub volumes: Vec<f64>,
    pub volume_stderr: Vec<f64>,
    pub fitted: Vec<f64>,
    pub condition: f64,
}

/// `n` Chebyshev-Lobatto points on `[0, upper]`, ascending, endpoints included.
pub fn chebyshev_grid(n: usize, upper: f64) -> Vec<f64> {
    assert!(n >= 2, "a Chebyshev grid needs at least two points");
    (0..n)
        .map(|j| {
            let c = (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos();
            0.5 * upper * (1.0 - c)
        })
        .collect()
}

/// Length scale of a body: `max(r, diam/4)`, or 1 for a single point.
fn reference_size(body: &ConvexBody) -> f64 {
    let size = body.radius().max(body.diameter() / 4.0);
    if size > 0.0 {
        size
    } else {
        1.0
    }
}

/// Fraction of the radius by which the default grid reaches below `t = 0`.
const INNER_REACH: f64 = 0.9;

/// `3(d+1)` Chebyshev points on `[-0.9 r, 2·max(r, diam/4)]`.
///
/// For `K = C + rB` the inner parallel body `K ⊖ |t|B` is `C + (r - |t|)B`, so the
/// Steiner polynomial of `K` stays valid down to `t = -r`. Points close to the
/// core have small volume and small variance, which pins down the low-order
/// coefficients far better than dilations alone. The grid stops short of `-r`
/// because membership in the core itself cannot be decided by a distance bound.
pub fn default_t_grid(body: &ConvexBody) -> Vec<f64> {
    let lo = INNER_REACH * body.radius();
    chebyshev_grid(3 * (body.dim() + 1), 2.0 * reference_size(body) + lo)
        .into_iter()
        .map(|t| t - lo)
        .collect()
}

/// Condition number of the design matrix with `t` measured in units of `size`,
/// which makes it invariant under scaling the body and the grid together.
fn design_condition(grid: &[f64], d: usize, size: f64) -> f64 {
    let x = DMatrix::from_fn(grid.len(), d + 1, |j, m| {
        binomial(d, m) * (grid[j] / size).powi(m as i32)
    });
    let sv = x.singular_values();
    sv.max() / sv.min()
}

pub fn quermass_mc_steiner(body: &ConvexBody, opts: &McOptions) -> Result<QuermassVector> {
    steiner_fit(body, opts).map(|f| f.quermass)
}

pub fn steiner_fit(body: &ConvexBody, opts: &McOptions) -> Result<SteinerFit> {
    let d = body.dim();
    if opts.samples < MIN_SAMPLES {
        return Err(Error::invalid(format!(
            "Monte-Carlo Steiner fit needs at least {MIN_SAMPLES} samples, got {}",
            opts.samples
        )));
    }
    let grid = match &opts.t_grid {
        Some(g) => normalise_grid(g, d)?,
        None => default_t_grid(body),
    };
    let design = DMatrix::from_fn(grid.len(), d + 1, |j, m| {
        binomial(d, m) * grid[j].powi(m as i32)
    });
    let col_scale: Vec<f64> = (0..=d)
        .map(|m| {
            let n = design.column(m).norm();
            if n > 0.0 {
                1.0 / n
            } else {
                1.0
            }
        })
        .collect();
    let scaled = DMatrix::from_fn(grid.len(), d + 1, |j, m| design[(j, m)] * col_scale[m]);
    let condition = design_condition(&grid, d, reference_size(body));
    if !(condition <= MAX_CONDITION) {
        return Err(Error::IllConditioned { cond: condition });
    }

    let (volumes, cov) = estimate_volumes(body, &grid, opts)?;
    let (beta_scaled, beta_cov_scaled) = fit(&scaled, &volumes, &cov)?;
    let values: Vec<f64> = (0..=d).map(|m| beta_scaled[m] * col_scale[m]).collect();
    let stderr: Vec<f64> = (0..=d)
        .map(|m| beta_cov_scaled[(m, m)].max(0.0).sqrt() * col_scale[m])
        .collect();
    let fitted = (&design * DVector::from_column_slice(&values))
        .iter()
        .copied()
        .collect();
    let volume_stderr = (0..grid.len()).map(|j| cov[(j, j)].max(0.0).sqrt()).collect();
    Ok(SteinerFit {
        quermass: QuermassVector {
            dim: d,
            method: Method::McSteiner,
            values,
            stderr,
        },
        t_grid: grid,
        volumes: volumes.iter().copied().collect(),
        volume_stderr,
        fitted,
        condition,
    })
}

fn normalise_grid(grid: &[f64], d: usize) -> Result<Vec<f64>> {
    if grid.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::format("t_grid", "entries must be finite and nonnegative"));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    if g.len() < d + 1 {
        return Err(Error::format(
            "t_grid",
            format!("needs at least {} distinct entries, got {}", d + 1, g.len()),
        ));
    }
    Ok(g)
}

/// Generalised least squares with covariance `cov`; returns the coefficients and
/// their covariance.
fn fit(x: &DMatrix<f64>, y: &DVector<f64>, cov: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let singular = || Error::invalid("singular Steiner design matrix");
    let mut cov = cov.clone();
    let floor = 1e-12 * cov.diagonal().max();
    for i in 0..cov.nrows() {
        cov[(i, i)] += floor;
    }
    let cov = &cov;
    if let Some(chol) = cov.clone().cholesky() {
        let l = chol.l();
        if let (Some(xw), Some(yw)) = (
            l.solve_lower_triangular(x),
            l.solve_lower_triangular(y),
        ) {
            let gram = xw.transpose() * &xw;
            if let Some(inv) = gram.try_inverse() {
                let beta = &inv * (xw.transpose() * yw);
                if beta.iter().all(|b| b.is_finite()) {
                    return Ok((beta, inv));
                }
            }
        }
    }
    let pinv = (x.transpose() * x).try_inverse().ok_or_else(singular)? * x.transpose();
    let beta = &pinv * y;
    let beta_cov = &pinv * cov * pinv.transpose();
    Ok((beta, beta_cov))
}

enum Oracle<'a> {
    Point(&'a [f64]),
    Segment(&'a [f64], &'a [f64]),
    Hull(&'a PointSet),
}

/// A box, or a box minus a nested inner box. The shell is split into slabs by the
/// first axis on which a point leaves the inner box, so it can be sampled exactly.
struct Stratum {
    lo: Vec<f64>,
    hi: Vec<f64>,
    hole: Option<(Vec<f64>, Vec<f64>)>,
    /// Cumulative slab volumes, normalised to end at 1.
    slabs: Vec<f64>,
    volume: f64,
    samples: usize,
}

impl Stratum {
    fn new(outer: &(Vec<f64>, Vec<f64>), inner: Option<&(Vec<f64>, Vec<f64>)>) -> Self {
        let (lo, hi) = outer.clone();
        let w_out: Vec<f64> = lo.iter().zip(&hi).map(|(l, h)| (h - l).max(0.0)).collect();
        let Some(inner) = inner else {
            return Stratum {
                volume: w_out.iter().product(),
                lo,
                hi,
                hole: None,
                slabs: Vec::new(),
                samples: 0,
            };
        };
        let w_in: Vec<f64> = inner.0.iter().zip(&inner.1).map(|(l, h)| (h - l).max(0.0)).collect();
        let pieces: Vec<f64> = (0..lo.len())
            .map(|k| {
                let before: f64 = w_in[..k].iter().product();
                let after: f64 = w_out[k + 1..].iter().product();
                before * (w_out[k] - w_in[k]).max(0.0) * after
            })
            .collect();
        let volume: f64 = pieces.iter().sum();
        let mut acc = 0.0;
        let slabs = pieces
            .iter()
            .map(|p| {
                acc += p;
                if volume > 0.0 {
                    acc / volume
                } else {
                    0.0
                }
            })
            .collect();
        Stratum {
            lo,
            hi,
            hole: Some(inner.clone()),
            slabs,
            volume,
            samples: 0,
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng, x: &mut [f64]) {
        let Some((ilo, ihi)) = &self.hole else {
            for (i, xi) in x.iter_mut().enumerate() {
                let u: f64 = rng.random();
                *xi = self.lo[i] + u * (self.hi[i] - self.lo[i]);
            }
            return;
        };
        let pick: f64 = rng.random();
        let k = self
            .slabs
            .partition_point(|&c| c <= pick)
            .min(self.slabs.len() - 1);
        for (i, xi) in x.iter_mut().enumerate() {
            let u: f64 = rng.random();
            *xi = if i < k {
                ilo[i] + u * (ihi[i] - ilo[i])
            } else if i > k {
                self.lo[i] + u * (self.hi[i] - self.lo[i])
            } else {
                // Union of the two gaps [lo, ilo) and (ihi, hi].
                let left = ilo[i] - self.lo[i];
                let right = self.hi[i] - ihi[i];
                let v = u * (left + right);
                if v < left {
                    self.lo[i] + v
                } else {
                    ihi[i] + (v - left)
                }
            };
        }
    }
}

/// Volume estimates `Vol(K + t_j B)` and their covariance.
fn estimate_volumes(
    body: &ConvexBody,
    grid: &[f64],
    opts: &McOptions,
) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let r = body.radius();
    // A zero threshold would ask whether a point lies in the core exactly, which the
    // iterative distance bound cannot certify; the floor changes volumes by a
    // relative amount far below the sampling error.
    let floor = 1e-9 * reference_size(body);
    let thresholds: Vec<f64> = grid.iter().map(|t| (r + t).max(floor)).collect();
    let (lo0, hi0) = body.bounding_box();
    let boxes: Vec<(Vec<f64>, Vec<f64>)> = grid
        .iter()
        .map(|t| {
            (
                lo0.iter().map(|v| v - t).collect(),
                hi0.iter().map(|v| v + t).collect(),
            )
        })
        .collect();
    let box_volume = |b: &(Vec<f64>, Vec<f64>)| -> f64 {
        b.0.iter().zip(&b.1).map(|(l, h)| (h - l).max(0.0)).product()
    };
    let total = box_volume(&boxes[grid.len() - 1]);
    let mut strata: Vec<Stratum> = (0..grid.len())
        .map(|s| Stratum::new(&boxes[s], s.checked_sub(1).map(|p| &boxes[p])))
        .collect();
    for st in &mut strata {
        if st.volume > 0.0 && total > 0.0 {
            let share = (opts.samples as f64 * st.volume / total).floor() as usize;
            st.samples = share.max(MIN_STRATUM_SAMPLES);
        }
    }

    let core = body.core_points();
    let oracle = match body.kind() {
        BodyKind::Ball { center, .. } => Oracle::Point(center),
        BodyKind::Sausage { p, q, .. } => Oracle::Segment(p, q),
        _ => Oracle::Hull(&core),
    };

    let jobs: Vec<(usize, usize, usize)> = strata
        .iter()
        .enumerate()
        .flat_map(|(s, st)| {
            (0..st.samples.div_ceil(CHUNK_SIZE)).map(move |c| {
                let n = CHUNK_SIZE.min(st.samples - c * CHUNK_SIZE);
                (s, c, n)
            })
        })
        .collect();
    let chunk_counts: Vec<(usize, Vec<u64>)> = jobs
        .par_iter()
        .map(|&(s, c, n)| {
            (
                s,
                sample_chunk(&strata[s], &oracle, &thresholds, opts.seed, s, c, n),
            )
        })
        .collect();

    let g = grid.len();
    let mut counts = vec![vec![0u64; g + 1]; g];
    for (s, cc) in chunk_counts {
        for (acc, v) in counts[s].iter_mut().zip(cc) {
            *acc += v;
        }
    }

    // p[s][j]: fraction of stratum-s samples inside K + t_j B.
    let mut vols = DVector::zeros(g);
    let mut cov = DMatrix::zeros(g, g);
    for (s, st) in strata.iter().enumerate() {
        if st.samples == 0 {
            continue;
        }
        let n = st.samples as f64;
        let mut cum = 0u64;
        let p: Vec<f64> = (0..g)
            .map(|j| {
                cum += counts[s][j];
                cum as f64 / n
            })
            .collect();
        let v2 = st.volume * st.volume;
        for j in 0..g {
            vols[j] += st.volume * p[j];
            for k in j..g {
                // Nested events: P(I_j I_k) = p_j for j <= k.
                let c = v2 * (p[j] - p[j] * p[k]) / n;
                cov[(j, k)] += c;
                if k != j {
                    cov[(k, j)] += c;
                }
            }
        }
    }
    Ok((vols, cov))
}

fn sample_chunk(
    st: &Stratum,
    oracle: &Oracle<'_>,
    thresholds: &[f64],
    seed: u64,
    stratum: usize,
    chunk: usize,
    n: usize,
) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((stratum as u64) << 32) | chunk as u64);
    let mut counts = vec![0u64; thresholds.len() + 1];
    let mut x = vec![0.0; st.lo.len()];
    let mut solver = match oracle {
        Oracle::Hull(core) => Some(HullSolver::new(core)),
        _ => None,
    };
    for _ in 0..n {
        st.draw(&mut rng, &mut x);
        let idx = match oracle {
            Oracle::Point(c) => first_at_least(thresholds, dist(&x, c)),
            Oracle::Segment(p, q) => first_at_least(thresholds, segment_distance(&x, p, q)),
            Oracle::Hull(_) => solver.as_mut().expect("hull solver").classify(&x, thresholds),
        };
        counts[idx] += 1;
    }
    counts
}

fn first_at_least(thresholds: &[f64], v: f64) -> usize {
    thresholds.partition_point(|&t| t < v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quermass::{quermass_ball, quermass_exact_2d, quermass_sausage};

    fn within_3_sigma(est: &QuermassVector, exact: &QuermassVector) -> bool {
        est.values
            .iter()
            .zip(&est.stderr)
            .zip(&exact.values)
            .all(|((v, s), e)| (v - e).abs() <= 3.0 * s)
    }

    #[test]
    fn grid_shape() {
        let g = chebyshev_grid(5, 2.0);
        assert_eq!(g[0], 0.0);
        assert!((g[4] - 2.0).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let b = ConvexBody::unit_ball(3).unwrap();
        let g = default_t_grid(&b);
        assert_eq!(g.len(), 12);
        assert!((g[0] + 0.9).abs() < 1e-15);
        assert!((g[11] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_options() {
        let b = ConvexBody::unit_ball(2).unwrap();
        assert!(quermass_mc_steiner(&b, &McOptions::new(100, 1)).is_err());
        let opts = McOptions {
            samples: 20_000,
            t_grid: Some(vec![0.0, 1.0, 1.0]),
            seed: 1,
        };
        assert!(matches!(
            quermass_mc_steiner(&b, &opts),
            Err(Error::Format { ref field, .. }) if field == "t_grid"
        ));
        let opts = McOptions {
            samples: 20_000,
            t_grid: Some(vec![0.0, 1e-9, 2e-9]),
            seed: 1,
        };
        assert!(matches!(
            quermass_mc_steiner(&b, &opts),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn disk_estimate() {
        let b = ConvexBody::unit_ball(2).unwrap();
        let est = quermass_mc_steiner(&b, &McOptions::new(200_000, 7)).unwrap();
        assert!(within_3_sigma(&est, &quermass_ball(2, 1.0).unwrap()), "{est:?}");
    }

    #[test]
    fn rounded_square_estimate() {
        let core = vec![
            vec![0.0, 0.0],
            vec![2.0, 0.0],
            vec![2.0, 2.0],
            vec![0.0, 2.0],
        ];
        let k = ConvexBody::core_ball(2, &core, 1.0).unwrap();
        let est = quermass_mc_steiner(&k, &McOptions::new(200_000, 3)).unwrap();
        assert!(within_3_sigma(&est, &quermass_exact_2d(&k).unwrap()), "{est:?}");
    }

    #[test]
    fn sausage_estimate() {
        let s = ConvexBody::sausage(vec![0.0; 3], vec![0.0, 0.0, 2.0], 1.0).unwrap();
        let est = quermass_mc_steiner(&s, &McOptions::new(200_000, 11)).unwrap();
        assert!(within_3_sigma(&est, &quermass_sausage(3, 1.0, 2.0).unwrap()), "{est:?}");
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let core = vec![vec![0.0, 0.0], vec![1.0, 0.2], vec![0.3, 1.0]];
        let k = ConvexBody::core_ball(2, &core, 0.5).unwrap();
        let opts = McOptions::new(50_000, 42);
        let a = steiner_fit(&k, &opts).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| steiner_fit(&k, &opts).unwrap());
        assert_eq!(a, b);
        let c = steiner_fit(&k, &McOptions::new(50_000, 43)).unwrap();
        assert_ne!(a.quermass.values, c.quermass.values);
    }

    #[test]
    fn fitted_curve_tracks_estimates() {
        let b = ConvexBody::unit_ball(2).unwrap();
        let f = steiner_fit(&b, &McOptions::new(100_000, 5)).unwrap();
        for ((v, s), y) in f.volumes.iter().zip(&f.volume_stderr).zip(&f.fitted) {
            assert!((v - y).abs() <= 4.0 * s + 1e-12);
        }
    }
}
