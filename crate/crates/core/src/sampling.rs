//! Seeded generation of test bodies.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::body::ConvexBody;
use crate::error::{Error, Result};
use crate::kubota::sample_subspace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// Core vertices uniform in `[-core_scale, core_scale]^dim`.
    RandomCore,
    /// Endpoints uniform in the same box.
    Sausage,
    /// Centred at the origin.
    Ball,
    /// Core vertices uniform in a cube of a random `core_dim`-dimensional subspace.
    FlatCore { core_dim: usize },
}

impl Family {
    pub fn name(&self) -> String {
        match self {
            Family::RandomCore => "random_core".into(),
            Family::Sausage => "sausage".into(),
            Family::Ball => "ball".into(),
            Family::FlatCore { core_dim } => format!("flat_core{core_dim}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodySpec {
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub family: Family,
    #[serde(default = "default_vertex_count")]
    pub core_vertex_count: usize,
    #[serde(default = "one")]
    pub core_scale: f64,
    #[serde(default = "one")]
    pub radius: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_dim() -> usize {
    2
}

fn default_vertex_count() -> usize {
    6
}

fn one() -> f64 {
    1.0
}

impl BodySpec {
    pub fn new(dim: usize, family: Family, seed: u64) -> Self {
        BodySpec {
            dim,
            family,
            core_vertex_count: default_vertex_count(),
            core_scale: 1.0,
            radius: 1.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::format("dim", "must be a positive integer"));
        }
        if self.core_vertex_count == 0 {
            return Err(Error::format("core_vertex_count", "must be at least 1"));
        }
        if !(self.core_scale > 0.0 && self.core_scale.is_finite()) {
            return Err(Error::format("core_scale", "must be finite and > 0"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::format("radius", "must be finite and > 0"));
        }
        if let Family::FlatCore { core_dim } = self.family {
            if core_dim >= self.dim {
                return Err(Error::format(
                    "family.flat_core.core_dim",
                    format!("must be below dim = {}", self.dim),
                ));
            }
            if self.core_vertex_count < core_dim + 1 {
                return Err(Error::format(
                    "core_vertex_count",
                    format!("a flat core of dimension {core_dim} needs at least {} vertices", core_dim + 1),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let s: BodySpec =
            serde_json::from_str(text).map_err(|e| Error::format("body_spec", e.to_string()))?;
        s.validate()?;
        Ok(s)
    }
}

/// Deterministic in `spec` (in particular in `spec.seed`).
pub fn generate(spec: &BodySpec) -> Result<ConvexBody> {
    spec.validate()?;
    let d = spec.dim;
    let s = spec.core_scale;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let point = |rng: &mut ChaCha8Rng, m: usize| -> Vec<f64> {
        (0..m).map(|_| rng.random_range(-s..=s)).collect()
    };
    match spec.family {
        Family::Ball => ConvexBody::ball(vec![0.0; d], spec.radius),
        Family::Sausage => {
            let p = point(&mut rng, d);
            let q = point(&mut rng, d);
            ConvexBody::sausage(p, q, spec.radius)
        }
        Family::RandomCore => {
            let core: Vec<Vec<f64>> = (0..spec.core_vertex_count).map(|_| point(&mut rng, d)).collect();
            ConvexBody::core_ball(d, &core, spec.radius)
        }
        Family::FlatCore { core_dim: 0 } => ConvexBody::core_ball(d, &[vec![0.0; d]], spec.radius),
        Family::FlatCore { core_dim } => {
            // The frame uses stream 1 of the same seed; vertex coordinates use stream 0.
            let frame = sample_subspace(d, core_dim, spec.seed, 1)?.frame;
            let core: Vec<Vec<f64>> = (0..spec.core_vertex_count)
                .map(|_| {
                    let u = point(&mut rng, core_dim);
                    (0..d)
                        .map(|i| frame.columns().iter().zip(&u).map(|(c, a)| c[i] * a).sum())
                        .collect()
                })
                .collect();
            ConvexBody::core_ball(d, &core, spec.radius)
        }
    }
}
