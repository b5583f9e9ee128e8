//! Random subspaces and Monte-Carlo checks of the Kubota projection formula
//!
//! `E_P W_{m,j}(K|P) = (ω_m / ω_d) · W_{d, d-m+j}(K)` for `P` uniform on the
//! Grassmannian `G_{d,m}`.
//!
//! Projected bodies are evaluated with the exact routes, so only `m ∈ {2, 3}` is
//! supported. A statistical check can only witness closeness of the average; it
//! says nothing about statements that hold for almost every `P`.

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body::{ConvexBody, Frame};
use crate::error::{Error, Result};
use crate::linalg::CompensatedSum;
use crate::quermass::{quermass, quermass_exact, unit_ball_volume, McOptions, QuermassVector};

const MAX_DRAWS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceSample {
    pub frame: Frame,
    pub seed_index: u64,
}

/// A Haar-random `m`-dimensional subspace of `R^d`, from the QR factorisation of a
/// standard Gaussian `d × m` matrix drawn on ChaCha8 stream `seed_index`.
pub fn sample_subspace(d: usize, m: usize, seed: u64, seed_index: u64) -> Result<SubspaceSample> {
    if m == 0 || m >= d {
        return Err(Error::invalid(format!(
            "subspace dimension must satisfy 1 <= m < d = {d}, got {m}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(seed_index);
    for _ in 0..MAX_DRAWS {
        let g = DMatrix::from_fn(d, m, |_, _| StandardNormal.sample(&mut rng));
        let qr = g.clone().qr();
        let r = qr.r();
        let scale = g.iter().fold(0.0f64, |a: f64, v: &f64| a.max(v.abs()));
        if (0..m).any(|i| r[(i, i)].abs() <= 1e-12 * scale) {
            continue;
        }
        let q = qr.q();
        let columns = (0..m).map(|c| q.column(c).iter().copied().collect()).collect();
        return Ok(SubspaceSample {
            frame: Frame::new(columns)?,
            seed_index,
        });
    }
    Err(Error::invalid("Gaussian draws stayed rank-deficient"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KubotaResult {
    pub k: usize,
    pub j: usize,
    pub rotations: usize,
    /// Mean of `W_{k+1,j}(K|P)` over the sampled subspaces.
    pub lhs: f64,
    pub stderr: f64,
    /// `(ω_{k+1}/ω_d) · W_{d, d-1-k+j}(K)`.
    pub rhs: f64,
    pub rhs_stderr: f64,
    pub pass: bool,
}

/// Mean and standard error of `f(K|P)` over `rotations` random `m`-subspaces.
fn projected_mean(
    body: &ConvexBody,
    m: usize,
    rotations: usize,
    seed: u64,
    f: impl Fn(&[f64]) -> f64 + Sync,
) -> Result<(f64, f64)> {
    if rotations == 0 {
        return Err(Error::invalid("rotations must be positive"));
    }
    let values: Vec<f64> = (0..rotations as u64)
        .into_par_iter()
        .map(|s| {
            let sub = sample_subspace(body.dim(), m, seed, s)?;
            let w = quermass_exact(&body.project(&sub.frame)?)?;
            Ok(f(&w.values))
        })
        .collect::<Result<_>>()?;
    let n = values.len() as f64;
    let mean = values.iter().copied().collect::<CompensatedSum>().value() / n;
    let var = if values.len() > 1 {
        values
            .iter()
            .map(|v| (v - mean) * (v - mean))
            .collect::<CompensatedSum>()
            .value()
            / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / n).sqrt()))
}

fn check_projected_dim(m: usize) -> Result<()> {
    if !(2..=3).contains(&m) {
        return Err(Error::Unsupported(format!(
            "projected quermassintegrals are exact only in dimensions 2 and 3, not {m}"
        )));
    }
    Ok(())
}

/// Compares the projection average with the Kubota right-hand side, computed by the
/// best available route for the body (`mc` is used only when no exact route exists).
pub fn kubota_check(
    body: &ConvexBody,
    k: usize,
    j: usize,
    rotations: usize,
    seed: u64,
    mc: &McOptions,
) -> Result<KubotaResult> {
    check_indices(body.dim(), k, j)?;
    let w = quermass(body, mc)?;
    kubota_against(body, &w, k, j, rotations, seed)
}

fn check_indices(d: usize, k: usize, j: usize) -> Result<()> {
    if k == 0 || k + 2 > d || j > k {
        return Err(Error::IndexOutOfRange(format!(
            "need 0 < k <= d - 2 and 0 <= j <= k, got k = {k}, j = {j}, d = {d}"
        )));
    }
    check_projected_dim(k + 1)
}

/// As [`kubota_check`], with the body's quermassintegrals already computed.
/// The check passes when the two sides agree within three combined standard errors.
pub fn kubota_against(
    body: &ConvexBody,
    w: &QuermassVector,
    k: usize,
    j: usize,
    rotations: usize,
    seed: u64,
) -> Result<KubotaResult> {
    let d = body.dim();
    check_indices(d, k, j)?;
    let m = k + 1;
    let (lhs, stderr) = projected_mean(body, m, rotations, seed, |v| v[j])?;
    let factor = unit_ball_volume(m) / unit_ball_volume(d);
    let idx = d - 1 - k + j;
    let rhs = factor * w.values[idx];
    let rhs_stderr = factor * w.stderr[idx];
    let combined = (stderr * stderr + rhs_stderr * rhs_stderr).sqrt();
    let pass = (lhs - rhs).abs() <= 3.0 * combined + 1e-9 * lhs.abs().max(rhs.abs());
    Ok(KubotaResult {
        k,
        j,
        rotations,
        lhs,
        stderr,
        rhs,
        rhs_stderr,
        pass,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeficitOracle {
    pub value: f64,
    pub stderr: f64,
}

/// `(ω_d/ω_{d-l}) · E_P[W_0 - 2W_1 + W_2](K|P)` over `(d-l)`-subspaces, an
/// independent estimate of the consecutive deficit `E_l(K)`.
pub fn projected_deficit_oracle(
    body: &ConvexBody,
    l: usize,
    rotations: usize,
    seed: u64,
) -> Result<DeficitOracle> {
    let d = body.dim();
    if l == 0 || l + 2 > d {
        return Err(Error::IndexOutOfRange(format!(
            "need 1 <= l <= d - 2, got l = {l}, d = {d}"
        )));
    }
    let m = d - l;
    check_projected_dim(m)?;
    let (mean, se) = projected_mean(body, m, rotations, seed, |w| w[0] - 2.0 * w[1] + w[2])?;
    let factor = unit_ball_volume(d) / unit_ball_volume(m);
    Ok(DeficitOracle {
        value: factor * mean,
        stderr: factor * se,
    })
}
