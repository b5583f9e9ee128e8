//! Quermassintegral vectors `(W_0, …, W_d)` by closed form, by exact intrinsic
//! volumes of low-dimensional cores, or by Monte-Carlo Steiner fitting.
//!
//! All routes use the Steiner normalisation `Vol(K + tB) = Σ C(d,i) W_i t^i`, so
//! `W_0` is the volume, `d·W_1` the surface area and `W_d = ω_d`.

mod exact;
mod steiner;

use serde::{Deserialize, Serialize};

use crate::body::{BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::linalg::{binomial, dist};

pub use exact::{
    core_intrinsic_volumes, quermass_exact, quermass_exact_2d, quermass_exact_3d,
    quermass_from_intrinsic,
};
pub use steiner::{
    chebyshev_grid, default_t_grid, quermass_mc_steiner, steiner_fit, McOptions, SteinerFit,
    CHUNK_SIZE, MAX_CONDITION, MIN_SAMPLES,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ExactClosedForm,
    ExactFace,
    McSteiner,
}

impl Method {
    pub fn is_exact(self) -> bool {
        !matches!(self, Method::McSteiner)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Method::ExactClosedForm => "exact_closed_form",
            Method::ExactFace => "exact_face",
            Method::McSteiner => "mc_steiner",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuermassVector {
    pub dim: usize,
    pub method: Method,
    pub values: Vec<f64>,
    pub stderr: Vec<f64>,
}

impl QuermassVector {
    pub fn exact(dim: usize, values: Vec<f64>, method: Method) -> Self {
        debug_assert_eq!(values.len(), dim + 1);
        QuermassVector {
            dim,
            method,
            stderr: vec![0.0; values.len()],
            values,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.method.is_exact()
    }

    pub fn volume(&self) -> f64 {
        self.values[0]
    }

    pub fn surface_area(&self) -> f64 {
        self.dim as f64 * self.values[1]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Quermassintegrals of `cK`: `W_i(cK) = c^{d-i} W_i(K)`.
    pub fn rescaled(&self, c: f64) -> QuermassVector {
        let d = self.dim as i32;
        let f = |i: usize| c.abs().powi(d - i as i32);
        QuermassVector {
            dim: self.dim,
            method: self.method,
            values: self.values.iter().enumerate().map(|(i, v)| v * f(i)).collect(),
            stderr: self.stderr.iter().enumerate().map(|(i, s)| s * f(i)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("quermass serialisation cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: QuermassVector =
            serde_json::from_str(text).map_err(|e| Error::format("quermass", e.to_string()))?;
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        for (field, len) in [("values", self.values.len()), ("stderr", self.stderr.len())] {
            if len != self.dim + 1 {
                return Err(Error::DimensionMismatch {
                    field: field.into(),
                    expected: self.dim + 1,
                    found: len,
                });
            }
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::format("values", "entries must be finite"));
        }
        if self.stderr.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
            return Err(Error::format("stderr", "entries must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// Table of unit-ball volumes `ω_0 … ω_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitBallVolumes {
    values: Vec<f64>,
}

impl UnitBallVolumes {
    /// Fills the table by `ω_d = ω_{d-2}·2π/d` from `ω_0 = 1`, `ω_1 = 2`.
    pub fn up_to(max_dim: usize) -> Self {
        let mut values = vec![1.0, 2.0];
        for d in 2..=max_dim {
            values.push(values[d - 2] * 2.0 * std::f64::consts::PI / d as f64);
        }
        values.truncate(max_dim + 1);
        UnitBallVolumes { values }
    }

    pub fn get(&self, d: usize) -> f64 {
        self.values[d]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

impl Default for UnitBallVolumes {
    fn default() -> Self {
        Self::up_to(8)
    }
}

/// `ω_d`, the volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    UnitBallVolumes::up_to(d).get(d)
}

/// `W_i(rB) = ω_d r^{d-i}`.
pub fn quermass_ball(dim: usize, r: f64) -> Result<QuermassVector> {
    check_dim(dim)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("ball radius must be > 0, got {r}")));
    }
    let w = unit_ball_volume(dim);
    let values = (0..=dim).map(|i| w * r.powi((dim - i) as i32)).collect();
    Ok(QuermassVector::exact(dim, values, Method::ExactClosedForm))
}

/// Sausage of radius `r` around a segment of length `len`:
/// `W_i = r^{d-i} (ω_d + (d-i)/d · (len/r) · ω_{d-1})`.
pub fn quermass_sausage(dim: usize, r: f64, len: f64) -> Result<QuermassVector> {
    check_dim(dim)?;
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid(format!("sausage radius must be > 0, got {r}")));
    }
    if !(len >= 0.0) || !len.is_finite() {
        return Err(Error::invalid(format!("sausage axis length must be >= 0, got {len}")));
    }
    let omega = UnitBallVolumes::up_to(dim);
    let (wd, wd1) = (omega.get(dim), omega.get(dim - 1));
    let d = dim as f64;
    let values = (0..=dim)
        .map(|i| {
            let unit = wd + (d - i as f64) / d * (len / r) * wd1;
            r.powi((dim - i) as i32) * unit
        })
        .collect();
    Ok(QuermassVector::exact(dim, values, Method::ExactClosedForm))
}

/// `W_q(K ⊖ B) = Σ_i (-1)^i C(d-q, i) W_{q+i}(K)` for a body of radius one.
pub fn inner_parallel_quermass(w: &QuermassVector, q: usize) -> Result<f64> {
    if q > w.dim {
        return Err(Error::IndexOutOfRange(format!(
            "q = {q} exceeds dimension {}",
            w.dim
        )));
    }
    let m = w.dim - q;
    Ok((0..=m)
        .map(|i| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m, i) * w.values[q + i]
        })
        .sum())
}

/// Picks the most accurate available route: closed forms for balls and sausages,
/// exact intrinsic volumes for cores of affine dimension at most three, and the
/// Monte-Carlo Steiner fit otherwise.
pub fn quermass(body: &ConvexBody, mc: &McOptions) -> Result<QuermassVector> {
    match body.kind() {
        BodyKind::Ball { radius, .. } => quermass_ball(body.dim(), *radius),
        BodyKind::Sausage { p, q, radius } => quermass_sausage(body.dim(), *radius, dist(p, q)),
        _ => match quermass_exact(body) {
            Err(Error::Unsupported(_)) => quermass_mc_steiner(body, mc),
            other => other,
        },
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::invalid("dimension must be positive"));
    }
    Ok(())
}
