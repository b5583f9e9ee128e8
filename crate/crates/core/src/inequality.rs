//! Evaluation of the reverse quermassintegral inequalities and their classical
//! baselines on a [`QuermassVector`].
//!
//! Every inequality is written as `lhs >= 0`. The numeric verdict compares `lhs`
//! with a tolerance: exact routes use `exact_abs` times the largest term of the
//! combination, Monte-Carlo routes add `mc_sigma` times the triangle-inequality
//! bound `Σ |c_m| σ_m` on the combination's standard error.
//!
//! When the body is known ([`BodyContext`]), equality is decided geometrically from
//! the affine dimension of the core, and on exact routes that decision overrides a
//! numerically small `lhs`.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::body::{ConvexBody, DEFAULT_RANK_TOL};
use crate::error::{Error, Result};
use crate::hull::min_enclosing_ball;
use crate::poly::bokowski_heil_coefficients;
use crate::quermass::{quermass_sausage, unit_ball_volume, Method, QuermassVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "inequality_id", rename_all = "snake_case")]
pub enum InequalityId {
    ReverseTriple { i: usize, j: usize, k: usize },
    ReverseIsoperimetric,
    ReverseIsodiametric { i: usize },
    BokowskiHeil { i: usize, j: usize, k: usize },
    ClassicalIsoperimetric,
    DifferenceChain,
    ConsecutiveDeficit { l: usize },
}

impl InequalityId {
    pub fn name(&self) -> &'static str {
        match self {
            InequalityId::ReverseTriple { .. } => "reverse_triple",
            InequalityId::ReverseIsoperimetric => "reverse_isoperimetric",
            InequalityId::ReverseIsodiametric { .. } => "reverse_isodiametric",
            InequalityId::BokowskiHeil { .. } => "bokowski_heil",
            InequalityId::ClassicalIsoperimetric => "classical_isoperimetric",
            InequalityId::DifferenceChain => "difference_chain",
            InequalityId::ConsecutiveDeficit { .. } => "consecutive_deficit",
        }
    }

    /// Index columns `(i, j, k)` as used in CSV output; a single index goes in `i`.
    pub fn indices(&self) -> [Option<usize>; 3] {
        match *self {
            InequalityId::ReverseTriple { i, j, k } | InequalityId::BokowskiHeil { i, j, k } => {
                [Some(i), Some(j), Some(k)]
            }
            InequalityId::ReverseIsodiametric { i } => [Some(i), None, None],
            InequalityId::ConsecutiveDeficit { l } => [Some(l), None, None],
            _ => [None, None, None],
        }
    }

    /// Whether equality characterises sausage bodies (core dimension at most one).
    fn sausage_equality(&self) -> bool {
        !matches!(
            self,
            InequalityId::BokowskiHeil { .. } | InequalityId::ClassicalIsoperimetric
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Equality,
    Violated,
}

impl Verdict {
    pub fn classify(lhs: f64, tol: f64) -> Verdict {
        if lhs.abs() <= tol {
            Verdict::Equality
        } else if lhs < -tol {
            Verdict::Violated
        } else {
            Verdict::Holds
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Equality => "equality",
            Verdict::Violated => "violated",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub exact_abs: f64,
    pub mc_sigma: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            exact_abs: 1e-9,
            mc_sigma: 3.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    #[serde(default)]
    pub body_id: u64,
    pub dim: usize,
    #[serde(flatten)]
    pub inequality: InequalityId,
    pub lhs: f64,
    pub tol: f64,
    pub verdict: Verdict,
    /// Geometric equality decision from the core rank, when the body is known and
    /// the inequality has a sausage equality case.
    #[serde(default)]
    pub equality_case: Option<bool>,
    /// Curvature bound, or the circumradius for Bokowski-Heil.
    pub lambda: Option<f64>,
    pub method: Method,
    #[serde(default)]
    pub body_summary: String,
}

impl InequalityReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialisation cannot fail")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::format("report", e.to_string()))
    }

    pub fn with_body(mut self, body_id: u64, summary: impl Into<String>) -> Self {
        self.body_id = body_id;
        self.body_summary = summary.into();
        self
    }
}

/// One `lhs = Σ c_m W_m + constant` with its tolerance.
fn combine(
    w: &QuermassVector,
    terms: &[(usize, f64)],
    constant: f64,
    policy: &TolerancePolicy,
) -> (f64, f64) {
    let lhs = terms.iter().map(|&(m, c)| c * w.values[m]).sum::<f64>() + constant;
    let scale = terms
        .iter()
        .map(|&(m, c)| (c * w.values[m]).abs())
        .fold(constant.abs(), f64::max);
    let sigma: f64 = terms.iter().map(|&(m, c)| c.abs() * w.stderr[m]).sum();
    (lhs, policy.exact_abs * scale + policy.mc_sigma * sigma)
}

fn report(
    w: &QuermassVector,
    id: InequalityId,
    (lhs, tol): (f64, f64),
    lambda: Option<f64>,
) -> InequalityReport {
    InequalityReport {
        body_id: 0,
        dim: w.dim,
        inequality: id,
        lhs,
        tol,
        verdict: Verdict::classify(lhs, tol),
        equality_case: None,
        lambda,
        method: w.method,
        body_summary: String::new(),
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    Ok(())
}

fn check_triple(i: usize, j: usize, k: usize, d: usize) -> Result<()> {
    if !(i < j && j < k && k <= d) {
        return Err(Error::IndexOutOfRange(format!(
            "need 0 <= i < j < k <= {d}, got ({i}, {j}, {k})"
        )));
    }
    Ok(())
}

/// `(k-j) W_i/λ^i + (i-k) W_j/λ^j + (j-i) W_k/λ^k >= 0`.
pub fn reverse_triple(
    w: &QuermassVector,
    lambda: f64,
    (i, j, k): (usize, usize, usize),
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    check_triple(i, j, k, w.dim)?;
    let p = |m: usize| lambda.powi(-(m as i32));
    let (fi, fj, fk) = (i as f64, j as f64, k as f64);
    let terms = [(i, (fk - fj) * p(i)), (j, (fi - fk) * p(j)), (k, (fj - fi) * p(k))];
    Ok(report(
        w,
        InequalityId::ReverseTriple { i, j, k },
        combine(w, &terms, 0.0, policy),
        Some(lambda),
    ))
}

/// `Vol - Surf/(nλ) + ω_d/(nλ^d) >= 0` with `n = d - 1`.
pub fn reverse_isoperimetric(
    w: &QuermassVector,
    lambda: f64,
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    let d = w.dim;
    if d < 2 {
        return Err(Error::invalid("the reverse isoperimetric inequality needs d >= 2"));
    }
    let n = (d - 1) as f64;
    // Surf = d W_1.
    let terms = [(0, 1.0), (1, -(d as f64) / (n * lambda))];
    let constant = unit_ball_volume(d) / (n * lambda.powi(d as i32));
    Ok(report(
        w,
        InequalityId::ReverseIsoperimetric,
        combine(w, &terms, constant, policy),
        Some(lambda),
    ))
}

/// `W_i(K) - W_i(S) >= 0` for the sausage `S` of radius `1/λ` and diameter `D`.
pub fn reverse_isodiametric(
    w: &QuermassVector,
    lambda: f64,
    diameter: f64,
    i: usize,
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    let d = w.dim;
    if i >= d {
        return Err(Error::IndexOutOfRange(format!("need 0 <= i <= {}, got {i}", d - 1)));
    }
    let r = 1.0 / lambda;
    if !(diameter >= 2.0 * r * (1.0 - 1e-12)) {
        return Err(Error::invalid(format!(
            "diameter {diameter} is below 2/lambda = {}; no such body exists",
            2.0 * r
        )));
    }
    let s = quermass_sausage(d, r, (diameter - 2.0 * r).max(0.0))?;
    let (lhs, tol) = combine(w, &[(i, 1.0)], -s.values[i], policy);
    Ok(report(
        w,
        InequalityId::ReverseIsodiametric { i },
        (lhs, tol),
        Some(lambda),
    ))
}

/// `c_ijk R^i W_i + c_jki R^j W_j + c_kij R^k W_k >= 0` with `c_pqr = (r-q)(p+1)`.
pub fn bokowski_heil(
    w: &QuermassVector,
    circumradius: f64,
    (i, j, k): (usize, usize, usize),
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    if !(circumradius > 0.0) || !circumradius.is_finite() {
        return Err(Error::invalid(format!(
            "circumradius must be positive, got {circumradius}"
        )));
    }
    check_triple(i, j, k, w.dim)?;
    let c = bokowski_heil_coefficients(i, j, k);
    let rp = |m: usize| circumradius.powi(m as i32);
    let terms = [
        (i, c[0] as f64 * rp(i)),
        (j, c[1] as f64 * rp(j)),
        (k, c[2] as f64 * rp(k)),
    ];
    Ok(report(
        w,
        InequalityId::BokowskiHeil { i, j, k },
        combine(w, &terms, 0.0, policy),
        Some(circumradius),
    ))
}

/// `Surf^{d/(d-1)} / (ω_d^{1/(d-1)} d^{d/(d-1)}) - Vol >= 0`.
pub fn classical_isoperimetric(
    w: &QuermassVector,
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    let d = w.dim;
    if d < 2 {
        return Err(Error::invalid("the isoperimetric inequality needs d >= 2"));
    }
    let e = 1.0 / (d - 1) as f64;
    let omega = unit_ball_volume(d);
    let surf = w.surface_area();
    let first = surf.powf(d as f64 * e) / (omega.powf(e) * (d as f64).powf(d as f64 * e));
    let lhs = first - w.volume();
    // d(first)/dW_1 = d/(d-1) · W_1^{1/(d-1)} / ω^{1/(d-1)}.
    let slope = d as f64 * e * (w.values[1].max(0.0) / omega).powf(e);
    let sigma = slope * w.stderr[1] + w.stderr[0];
    let tol = policy.exact_abs * first.abs().max(w.volume().abs()) + policy.mc_sigma * sigma;
    Ok(report(w, InequalityId::ClassicalIsoperimetric, (lhs, tol), None))
}

/// `Δ_m = W_{m+1} - W_m` for `m = 0 … d-1`. For a body with `λ = 1` the sequence
/// is non-decreasing, since `Δ_{m+1} - Δ_m` is the consecutive deficit `E_m >= 0`.
pub fn difference_chain(w: &QuermassVector) -> Vec<f64> {
    w.values.windows(2).map(|p| p[1] - p[0]).collect()
}

/// `E_l = W_l - 2 W_{l+1} + W_{l+2}` (for a body with `λ = 1`).
pub fn consecutive_deficit(w: &QuermassVector, l: usize) -> Result<f64> {
    if w.dim < 2 || l > w.dim - 2 {
        return Err(Error::IndexOutOfRange(format!(
            "need 0 <= l <= d - 2 = {}, got {l}",
            w.dim as isize - 2
        )));
    }
    Ok(w.values[l] - 2.0 * w.values[l + 1] + w.values[l + 2])
}

fn deficit_terms(l: usize, lambda: f64) -> [(usize, f64); 3] {
    let p = |m: usize| lambda.powi(-(m as i32));
    [(l, p(l)), (l + 1, -2.0 * p(l + 1)), (l + 2, p(l + 2))]
}

/// Report on `E_l` with λ-weights `W_m/λ^m` (the `(l, l+1, l+2)` triple).
pub fn consecutive_deficit_report(
    w: &QuermassVector,
    lambda: f64,
    l: usize,
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    consecutive_deficit(w, l)?;
    Ok(report(
        w,
        InequalityId::ConsecutiveDeficit { l },
        combine(w, &deficit_terms(l, lambda), 0.0, policy),
        Some(lambda),
    ))
}

/// The chain property as one report: `lhs` is the smallest increment
/// `Δ_{m+1} - Δ_m` (λ-weighted) and its tolerance.
pub fn difference_chain_report(
    w: &QuermassVector,
    lambda: f64,
    policy: &TolerancePolicy,
) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    if w.dim < 2 {
        return Err(Error::invalid("the difference chain needs d >= 2"));
    }
    let worst = (0..=w.dim - 2)
        .map(|l| combine(w, &deficit_terms(l, lambda), 0.0, policy))
        .min_by(|a, b| (a.0 - a.1).total_cmp(&(b.0 - b.1)))
        .expect("at least one deficit");
    Ok(report(w, InequalityId::DifferenceChain, worst, Some(lambda)))
}

/// `core_dimension(body) <= 1`.
pub fn is_sausage(body: &ConvexBody, tol: f64) -> Result<bool> {
    body.is_sausage(tol)
}

/// A body together with its quermassintegrals, ready for inequality checks.
pub struct BodyContext<'a> {
    body: &'a ConvexBody,
    w: &'a QuermassVector,
    lambda: f64,
    policy: TolerancePolicy,
    core_dim: usize,
}

impl<'a> BodyContext<'a> {
    /// Checks that `lambda` matches the body's radius to `1e-12` relative.
    pub fn new(
        body: &'a ConvexBody,
        w: &'a QuermassVector,
        lambda: f64,
        policy: TolerancePolicy,
    ) -> Result<Self> {
        check_lambda(lambda)?;
        if w.dim != body.dim() {
            return Err(Error::DimensionMismatch {
                field: "quermass.dim".into(),
                expected: body.dim(),
                found: w.dim,
            });
        }
        let radius = body.radius();
        if !body.has_core() || radius <= 0.0 || (lambda * radius - 1.0).abs() > 1e-12 {
            return Err(Error::LambdaMismatch { lambda, radius });
        }
        let core_dim = body.core_dimension(DEFAULT_RANK_TOL)?;
        Ok(BodyContext {
            body,
            w,
            lambda,
            policy,
            core_dim,
        })
    }

    pub fn core_dimension(&self) -> usize {
        self.core_dim
    }

    fn finish(&self, mut r: InequalityReport) -> InequalityReport {
        r.body_summary = self.body.summary();
        if r.inequality.sausage_equality() {
            let sausage = self.core_dim <= 1;
            r.equality_case = Some(sausage);
            if self.w.is_exact() && !sausage && r.verdict == Verdict::Equality {
                r.verdict = Verdict::Holds;
            }
        } else if r.inequality == InequalityId::ClassicalIsoperimetric {
            let ball = self.core_dim == 0;
            r.equality_case = Some(ball);
            if self.w.is_exact() && !ball && r.verdict == Verdict::Equality {
                r.verdict = Verdict::Holds;
            }
        }
        r
    }

    pub fn triple(&self, i: usize, j: usize, k: usize) -> Result<InequalityReport> {
        reverse_triple(self.w, self.lambda, (i, j, k), &self.policy).map(|r| self.finish(r))
    }

    pub fn isoperimetric(&self) -> Result<InequalityReport> {
        reverse_isoperimetric(self.w, self.lambda, &self.policy).map(|r| self.finish(r))
    }

    pub fn isodiametric(&self, i: usize) -> Result<InequalityReport> {
        reverse_isodiametric(self.w, self.lambda, self.body.diameter(), i, &self.policy)
            .map(|r| self.finish(r))
    }

    /// Circumradius of the core (minimal enclosing ball) plus the ball radius.
    pub fn circumradius(&self) -> f64 {
        min_enclosing_ball(&self.body.core_points()).radius + self.body.radius()
    }

    pub fn bokowski_heil(&self, i: usize, j: usize, k: usize) -> Result<InequalityReport> {
        bokowski_heil(self.w, self.circumradius(), (i, j, k), &self.policy)
            .map(|r| self.finish(r))
    }

    pub fn classical(&self) -> Result<InequalityReport> {
        classical_isoperimetric(self.w, &self.policy).map(|r| self.finish(r))
    }

    pub fn difference_chain(&self) -> Result<InequalityReport> {
        difference_chain_report(self.w, self.lambda, &self.policy).map(|r| self.finish(r))
    }

    pub fn consecutive_deficit(&self, l: usize) -> Result<InequalityReport> {
        consecutive_deficit_report(self.w, self.lambda, l, &self.policy).map(|r| self.finish(r))
    }

    pub fn all_triples(&self) -> Result<Vec<InequalityReport>> {
        let d = self.w.dim;
        let mut out = Vec::new();
        for (i, j, k) in triples(d) {
            out.push(self.triple(i, j, k)?);
        }
        Ok(out)
    }

    pub fn all_bokowski_heil(&self) -> Result<Vec<InequalityReport>> {
        let d = self.w.dim;
        let r = self.circumradius();
        let mut out = Vec::new();
        for t in triples(d) {
            out.push(self.finish(bokowski_heil(self.w, r, t, &self.policy)?));
        }
        Ok(out)
    }

    /// Every inequality applicable in this dimension.
    pub fn all(&self) -> Result<Vec<InequalityReport>> {
        let d = self.w.dim;
        let mut out = self.all_triples()?;
        if d >= 2 {
            out.push(self.isoperimetric()?);
            out.push(self.classical()?);
            out.push(self.difference_chain()?);
            for l in 0..=d - 2 {
                out.push(self.consecutive_deficit(l)?);
            }
        }
        for i in 0..d {
            out.push(self.isodiametric(i)?);
        }
        out.extend(self.all_bokowski_heil()?);
        Ok(out)
    }
}

/// All `(i, j, k)` with `0 <= i < j < k <= d`, in lexicographic order.
pub fn triples(d: usize) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for i in 0..=d {
        for j in i + 1..=d {
            for k in j + 1..=d {
                out.push((i, j, k));
            }
        }
    }
    out
}

/// Every applicable inequality for a body of radius `1/lambda`.
pub fn check_all(
    body: &ConvexBody,
    w: &QuermassVector,
    lambda: f64,
    policy: &TolerancePolicy,
) -> Result<Vec<InequalityReport>> {
    BodyContext::new(body, w, lambda, *policy)?.all()
}

pub fn write_jsonl<W: Write>(mut out: W, reports: &[InequalityReport]) -> Result<()> {
    for r in reports {
        writeln!(out, "{}", r.to_json())?;
    }
    Ok(())
}

pub const CSV_HEADER: [&str; 8] = ["body_id", "inequality_id", "i", "j", "k", "lhs", "tol", "verdict"];

pub fn write_csv<W: Write>(out: W, reports: &[InequalityReport]) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(CSV_HEADER)?;
    for r in reports {
        let idx = r
            .inequality
            .indices()
            .map(|v| v.map(|x| x.to_string()).unwrap_or_default());
        wtr.write_record([
            r.body_id.to_string(),
            r.inequality.name().to_string(),
            idx[0].clone(),
            idx[1].clone(),
            idx[2].clone(),
            r.lhs.to_string(),
            r.tol.to_string(),
            r.verdict.as_str().to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
