//! Batch evaluation over generated bodies.
//!
//! A campaign walks `dims × bodies_per_dim` bodies, cycling through the family
//! templates, and records every applicable inequality, the Kubota projection checks
//! for `dim >= 3`, and Steiner-fit plot data for bodies that took the Monte-Carlo
//! route. Results depend only on the configuration, never on the thread count.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::body::{BodyKind, ConvexBody};
use crate::error::{Error, Result};
use crate::inequality::{check_all, write_csv, write_jsonl, InequalityReport, TolerancePolicy, Verdict};
use crate::kubota::{kubota_against, KubotaResult};
use crate::quermass::{quermass, quermass_exact, steiner_fit, McOptions, QuermassVector, MIN_SAMPLES};
use crate::sampling::{generate, BodySpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignOutputs {
    /// JSON-lines inequality reports.
    pub reports: PathBuf,
    /// CSV form of the same reports.
    pub summary: PathBuf,
    #[serde(default)]
    pub plot: Option<PathBuf>,
    #[serde(default)]
    pub kubota: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub dims: Vec<usize>,
    pub bodies_per_dim: usize,
    /// Body templates; `dim` and `seed` are overwritten per body.
    pub families: Vec<BodySpec>,
    pub mc_samples: usize,
    /// Subspaces per Kubota check; 0 disables the checks.
    #[serde(default)]
    pub rotations: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub tol_policy: TolerancePolicy,
    pub outputs: CampaignOutputs,
}

impl CampaignConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: CampaignConfig =
            serde_json::from_str(text).map_err(|e| Error::format("campaign", e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() {
            return Err(Error::format("dims", "must list at least one dimension"));
        }
        if let Some(d) = self.dims.iter().find(|&&d| d < 2) {
            return Err(Error::format("dims", format!("dimensions must be at least 2, got {d}")));
        }
        if self.bodies_per_dim == 0 {
            return Err(Error::format("bodies_per_dim", "must be positive"));
        }
        if self.families.is_empty() {
            return Err(Error::format("families", "must list at least one template"));
        }
        for (i, f) in self.families.iter().enumerate() {
            for &d in &self.dims {
                let spec = BodySpec { dim: d, ..f.clone() };
                spec.validate().map_err(|e| match e {
                    Error::Format { field, message } => {
                        Error::format(format!("families[{i}].{field}"), format!("{message} (dim {d})"))
                    }
                    other => other,
                })?;
            }
        }
        if self.mc_samples < MIN_SAMPLES {
            return Err(Error::format(
                "mc_samples",
                format!("must be at least {MIN_SAMPLES}, got {}", self.mc_samples),
            ));
        }
        let p = &self.tol_policy;
        if !(p.exact_abs >= 0.0 && p.exact_abs.is_finite()) {
            return Err(Error::format("tol_policy.exact_abs", "must be finite and >= 0"));
        }
        if !(p.mc_sigma >= 0.0 && p.mc_sigma.is_finite()) {
            return Err(Error::format("tol_policy.mc_sigma", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Seed of body `index` in dimension `dim`.
    pub fn body_seed(&self, dim: usize, index: usize) -> u64 {
        mix(mix(self.base_seed ^ ((dim as u64) << 32)) ^ index as u64)
    }

    /// The generating spec of every body, in campaign order, with its id.
    pub fn body_specs(&self) -> Vec<(u64, BodySpec)> {
        let mut out = Vec::with_capacity(self.dims.len() * self.bodies_per_dim);
        for &d in &self.dims {
            for b in 0..self.bodies_per_dim {
                let template = &self.families[b % self.families.len()];
                let spec = BodySpec {
                    dim: d,
                    seed: self.body_seed(d, b),
                    ..template.clone()
                };
                out.push((out.len() as u64, spec));
            }
        }
        out
    }
}

fn mix(x: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KubotaRow {
    pub body_id: u64,
    pub dim: usize,
    #[serde(flatten)]
    pub result: KubotaResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub body_id: u64,
    pub t: f64,
    pub volume: f64,
    pub volume_stderr: f64,
    pub fitted: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignSummary {
    pub bodies: usize,
    pub mc_bodies: usize,
    pub reports: usize,
    pub holds: usize,
    pub equality: usize,
    pub violated: usize,
    pub kubota_checks: usize,
    pub kubota_failed: usize,
}

impl CampaignSummary {
    /// 1 when any inequality was violated. Kubota checks are statistical and do not
    /// affect the exit status.
    pub fn exit_code(&self) -> i32 {
        if self.violated > 0 {
            1
        } else {
            0
        }
    }
}

#[derive(Debug, Clone)]
pub struct BodyResult {
    pub body_id: u64,
    pub spec: BodySpec,
    pub body: ConvexBody,
    pub quermass: QuermassVector,
    pub reports: Vec<InequalityReport>,
    pub kubota: Vec<KubotaRow>,
    pub plot: Vec<PlotRow>,
}

#[derive(Debug, Clone)]
pub struct CampaignOutcome {
    pub bodies: Vec<BodyResult>,
    pub summary: CampaignSummary,
}

impl CampaignOutcome {
    /// Reports ordered by `(dim, body_id)`, then in evaluation order.
    pub fn reports(&self) -> Vec<InequalityReport> {
        self.bodies.iter().flat_map(|b| b.reports.iter().cloned()).collect()
    }

    pub fn kubota_rows(&self) -> Vec<KubotaRow> {
        self.bodies.iter().flat_map(|b| b.kubota.iter().cloned()).collect()
    }

    pub fn plot_rows(&self) -> Vec<PlotRow> {
        self.bodies.iter().flat_map(|b| b.plot.iter().cloned()).collect()
    }
}

/// Evaluates one body of the campaign.
pub fn evaluate_body(config: &CampaignConfig, body_id: u64, spec: &BodySpec) -> Result<BodyResult> {
    let body = generate(spec)?;
    let mc = McOptions::new(config.mc_samples, mix(spec.seed ^ 1));
    let exact = match body.kind() {
        BodyKind::Ball { .. } | BodyKind::Sausage { .. } => Some(quermass(&body, &mc)?),
        _ => match quermass_exact(&body) {
            Ok(w) => Some(w),
            Err(Error::Unsupported(_)) => None,
            Err(e) => return Err(e),
        },
    };
    let (w, plot) = match exact {
        Some(w) => (w, Vec::new()),
        None => {
            let fit = steiner_fit(&body, &mc)?;
            let plot = (0..fit.t_grid.len())
                .map(|i| PlotRow {
                    body_id,
                    t: fit.t_grid[i],
                    volume: fit.volumes[i],
                    volume_stderr: fit.volume_stderr[i],
                    fitted: fit.fitted[i],
                })
                .collect();
            (fit.quermass, plot)
        }
    };
    let summary = body.summary();
    let reports = check_all(&body, &w, 1.0 / body.radius(), &config.tol_policy)?
        .into_iter()
        .map(|r| r.with_body(body_id, summary.clone()))
        .collect();
    let mut kubota = Vec::new();
    let d = body.dim();
    if config.rotations > 0 && d >= 3 {
        for k in 1..=(d - 2).min(2) {
            for j in 0..=k {
                let result = kubota_against(&body, &w, k, j, config.rotations, mix(spec.seed ^ 2))?;
                kubota.push(KubotaRow {
                    body_id,
                    dim: d,
                    result,
                });
            }
        }
    }
    Ok(BodyResult {
        body_id,
        spec: spec.clone(),
        body,
        quermass: w,
        reports,
        kubota,
        plot,
    })
}

/// Runs every body in parallel. Nothing is written to disk.
pub fn run_campaign(config: &CampaignConfig) -> Result<CampaignOutcome> {
    config.validate()?;
    let mut bodies = config
        .body_specs()
        .par_iter()
        .map(|(id, spec)| evaluate_body(config, *id, spec))
        .collect::<Result<Vec<_>>>()?;
    bodies.sort_by_key(|b| (b.spec.dim, b.body_id));
    let mut summary = CampaignSummary {
        bodies: bodies.len(),
        ..Default::default()
    };
    for b in &bodies {
        if !b.quermass.is_exact() {
            summary.mc_bodies += 1;
        }
        for r in &b.reports {
            summary.reports += 1;
            match r.verdict {
                Verdict::Holds => summary.holds += 1,
                Verdict::Equality => summary.equality += 1,
                Verdict::Violated => summary.violated += 1,
            }
        }
        summary.kubota_checks += b.kubota.len();
        summary.kubota_failed += b.kubota.iter().filter(|k| !k.result.pass).count();
    }
    Ok(CampaignOutcome { bodies, summary })
}

fn create(path: &Path, field: &str) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::format(field, format!("cannot write {}: {e}", path.display())))
}

/// Opens every configured output for writing, so an unwritable path fails before
/// any computation.
pub fn check_outputs(outputs: &CampaignOutputs) -> Result<()> {
    create(&outputs.reports, "outputs.reports")?;
    create(&outputs.summary, "outputs.summary")?;
    if let Some(p) = &outputs.plot {
        create(p, "outputs.plot")?;
    }
    if let Some(p) = &outputs.kubota {
        create(p, "outputs.kubota")?;
    }
    Ok(())
}

pub fn write_outputs(outputs: &CampaignOutputs, outcome: &CampaignOutcome) -> Result<()> {
    let reports = outcome.reports();
    let mut out = create(&outputs.reports, "outputs.reports")?;
    write_jsonl(&mut out, &reports)?;
    out.flush()?;
    write_csv(create(&outputs.summary, "outputs.summary")?, &reports)?;
    if let Some(p) = &outputs.plot {
        write_rows(create(p, "outputs.plot")?, &outcome.plot_rows())?;
    }
    if let Some(p) = &outputs.kubota {
        write_kubota(create(p, "outputs.kubota")?, &outcome.kubota_rows())?;
    }
    Ok(())
}

pub const KUBOTA_CSV_HEADER: [&str; 10] = [
    "body_id", "dim", "k", "j", "rotations", "lhs", "stderr", "rhs", "rhs_stderr", "pass",
];

fn write_kubota<W: Write>(out: W, rows: &[KubotaRow]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(KUBOTA_CSV_HEADER)?;
    for row in rows {
        let r = &row.result;
        wtr.write_record([
            row.body_id.to_string(),
            row.dim.to_string(),
            r.k.to_string(),
            r.j.to_string(),
            r.rotations.to_string(),
            r.lhs.to_string(),
            r.stderr.to_string(),
            r.rhs.to_string(),
            r.rhs_stderr.to_string(),
            r.pass.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Validates the outputs, runs the campaign and writes every file.
pub fn run_and_write(config: &CampaignConfig) -> Result<CampaignSummary> {
    config.validate()?;
    check_outputs(&config.outputs)?;
    let outcome = run_campaign(config)?;
    write_outputs(&config.outputs, &outcome)?;
    Ok(outcome.summary)
}
