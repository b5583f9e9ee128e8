//! `qmc`: generate bodies, compute quermassintegrals, check inequalities and run
//! campaigns from the shell.
//!
//! Exit status is 0 when every verdict is `holds` or `equality`, 1 when something
//! was violated (or a Kubota or symbolic check failed), and 2 on usage, input or
//! numeric errors.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use quermass_core::campaign::run_and_write;
use quermass_core::inequality::{triples, BodyContext};
use quermass_core::kubota::kubota_check;
use quermass_core::poly::symbolic_suite;
use quermass_core::quermass::{quermass, quermass_exact, quermass_mc_steiner};
use quermass_core::sampling::generate;
use quermass_core::{
    BodySpec, CampaignConfig, ConvexBody, Error, Family, InequalityReport, McOptions,
    QuermassVector, TolerancePolicy, Verdict,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "qmc", version, about = "Quermassintegrals and reverse isoperimetric inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a seeded random body and write it as JSON.
    Gen(GenArgs),
    /// Compute the quermassintegral vector of a body.
    Quermass(QuermassArgs),
    /// Evaluate inequalities on a body and print one report per line.
    Check(CheckArgs),
    /// Monte-Carlo check of the Kubota projection formula.
    Kubota(KubotaArgs),
    /// Verify the integer polynomial identities.
    Symbolic(SymbolicArgs),
    /// Run a campaign described by a JSON configuration.
    Campaign(CampaignArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FamilyArg {
    RandomCore,
    Sausage,
    Ball,
    FlatCore,
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Read a full BodySpec JSON file instead of the flags below.
    #[arg(long, conflicts_with_all = ["dim", "family"])]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = FamilyArg::RandomCore)]
    family: FamilyArg,
    /// Core dimension for `flat-core`.
    #[arg(long, default_value_t = 1)]
    core_dim: usize,
    #[arg(long, default_value_t = 6)]
    vertices: usize,
    #[arg(long, default_value_t = 1.0)]
    scale: f64,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    /// Closed form or exact face route, whichever applies.
    Exact,
    /// Monte-Carlo Steiner fit.
    Mc,
    /// Most accurate available route.
    Auto,
}

#[derive(Debug, Args)]
struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated dilation radii for the Steiner fit.
    #[arg(long, value_delimiter = ',')]
    t_grid: Option<Vec<f64>>,
}

impl McArgs {
    fn options(&self) -> McOptions {
        McOptions {
            samples: self.samples,
            t_grid: self.t_grid.clone(),
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
struct QuermassArgs {
    /// Body JSON file, or `-` for stdin.
    body: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    #[command(flatten)]
    mc: McArgs,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Body JSON file, or `-` for stdin.
    body: PathBuf,
    /// Use this QuermassVector JSON instead of computing one.
    #[arg(long)]
    quermass: Option<PathBuf>,
    /// Curvature bound; defaults to the reciprocal of the body radius.
    #[arg(long)]
    lambda: Option<f64>,
    /// A single reverse triple inequality.
    #[arg(long, value_name = "I,J,K", value_delimiter = ',')]
    triple: Option<Vec<usize>>,
    /// Every inequality whose equality case is the sausage body.
    #[arg(long)]
    all: bool,
    #[arg(long)]
    isoperimetric: bool,
    /// All indices of the reverse isodiametric inequality.
    #[arg(long)]
    isodiametric: bool,
    /// All triples of the Bokowski-Heil inequality.
    #[arg(long)]
    bokowski_heil: bool,
    /// The classical isoperimetric inequality.
    #[arg(long)]
    classical: bool,
    #[arg(long, default_value_t = 1e-9)]
    exact_abs: f64,
    #[arg(long, default_value_t = 3.0)]
    mc_sigma: f64,
    #[command(flatten)]
    mc: McArgs,
}

#[derive(Debug, Args)]
struct KubotaArgs {
    /// Body JSON file, or `-` for stdin.
    body: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    j: usize,
    #[arg(long, default_value_t = 500)]
    rotations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Monte-Carlo samples for the right-hand side when no exact route exists.
    #[arg(long, default_value_t = 1_000_000)]
    samples: usize,
}

#[derive(Debug, Args)]
struct SymbolicArgs {
    #[arg(long, default_value_t = 64)]
    n_max: usize,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    config: PathBuf,
}

/// Failure carrying the exit status and a message for stderr.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_ERROR,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn context(what: impl std::fmt::Display) -> impl FnOnce(Error) -> Failure {
    move |e| Failure {
        code: EXIT_ERROR,
        message: format!("{what}: {e}"),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let pool = match thread_pool() {
        Ok(p) => p,
        Err(f) => {
            eprintln!("qmc: {}", f.message);
            return f.code;
        }
    };
    let result = match pool {
        Some(p) => p.install(|| dispatch(cli.command)),
        None => dispatch(cli.command),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("qmc: {}", f.message);
            f.code
        }
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, Failure> {
    let Ok(v) = std::env::var("QMC_THREADS") else {
        return Ok(None);
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| Failure {
        code: EXIT_ERROR,
        message: format!("QMC_THREADS must be a positive integer, got {v:?}"),
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| Failure {
            code: EXIT_ERROR,
            message: format!("cannot start {n} threads: {e}"),
        })
}

fn dispatch(cmd: Command) -> Result<i32, Failure> {
    match cmd {
        Command::Gen(a) => gen(a),
        Command::Quermass(a) => quermass_cmd(a),
        Command::Check(a) => check(a),
        Command::Kubota(a) => kubota(a),
        Command::Symbolic(a) => symbolic(a),
        Command::Campaign(a) => campaign(a),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_ERROR,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn read_body(path: &Path) -> Result<ConvexBody, Failure> {
    ConvexBody::from_json(&read_input(path)?).map_err(context(path.display()))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, format!("{text}\n")).map_err(|e| Failure {
            code: EXIT_ERROR,
            message: format!("cannot write {}: {e}", p.display()),
        }),
        None => {
            let mut out = io::stdout().lock();
            writeln!(out, "{text}")?;
            Ok(())
        }
    }
}

fn gen(a: GenArgs) -> Result<i32, Failure> {
    let spec = match &a.spec {
        Some(p) => BodySpec::from_json(&read_input(p)?).map_err(context(p.display()))?,
        None => BodySpec {
            dim: a.dim,
            family: match a.family {
                FamilyArg::RandomCore => Family::RandomCore,
                FamilyArg::Sausage => Family::Sausage,
                FamilyArg::Ball => Family::Ball,
                FamilyArg::FlatCore => Family::FlatCore { core_dim: a.core_dim },
            },
            core_vertex_count: a.vertices,
            core_scale: a.scale,
            radius: a.radius,
            seed: a.seed,
        },
    };
    let body = generate(&spec)?;
    emit(&body.to_json(), a.output.as_deref())?;
    Ok(EXIT_OK)
}

fn compute(body: &ConvexBody, method: MethodArg, mc: &McOptions) -> Result<QuermassVector, Failure> {
    let w = match method {
        MethodArg::Auto => quermass(body, mc),
        MethodArg::Mc => quermass_mc_steiner(body, mc),
        MethodArg::Exact => match body.kind() {
            quermass_core::BodyKind::Ball { .. } | quermass_core::BodyKind::Sausage { .. } => {
                quermass(body, mc)
            }
            _ => quermass_exact(body),
        },
    };
    w.map_err(context("quermass"))
}

fn quermass_cmd(a: QuermassArgs) -> Result<i32, Failure> {
    let body = read_body(&a.body)?;
    let w = compute(&body, a.method, &a.mc.options())?;
    emit(&w.to_json(), a.output.as_deref())?;
    Ok(EXIT_OK)
}

fn check(a: CheckArgs) -> Result<i32, Failure> {
    let body = read_body(&a.body)?;
    let w = match &a.quermass {
        Some(p) => QuermassVector::from_json(&read_input(p)?).map_err(context(p.display()))?,
        None => compute(&body, MethodArg::Auto, &a.mc.options())?,
    };
    let lambda = match a.lambda {
        Some(l) => l,
        None => body.lambda().ok_or_else(|| Failure {
            code: EXIT_ERROR,
            message: "the body has no positive radius; pass --lambda".into(),
        })?,
    };
    let policy = TolerancePolicy {
        exact_abs: a.exact_abs,
        mc_sigma: a.mc_sigma,
    };
    let ctx = BodyContext::new(&body, &w, lambda, policy).map_err(context("check"))?;
    let d = body.dim();
    let mut reports: Vec<InequalityReport> = Vec::new();
    let mut selected = false;
    if let Some(t) = &a.triple {
        selected = true;
        if t.len() != 3 {
            return Err(Failure {
                code: EXIT_ERROR,
                message: format!("--triple takes three indices i,j,k, got {}", t.len()),
            });
        }
        reports.push(ctx.triple(t[0], t[1], t[2])?);
    }
    if a.all {
        selected = true;
        reports.extend(ctx.all_triples()?);
        reports.push(ctx.isoperimetric()?);
        for i in 0..d {
            reports.push(ctx.isodiametric(i)?);
        }
        reports.push(ctx.difference_chain()?);
        for l in 0..=d - 2 {
            reports.push(ctx.consecutive_deficit(l)?);
        }
    } else {
        if a.isoperimetric {
            selected = true;
            reports.push(ctx.isoperimetric()?);
        }
        if a.isodiametric {
            selected = true;
            for i in 0..d {
                reports.push(ctx.isodiametric(i)?);
            }
        }
    }
    if a.bokowski_heil {
        selected = true;
        for (i, j, k) in triples(d) {
            reports.push(ctx.bokowski_heil(i, j, k)?);
        }
    }
    if a.classical {
        selected = true;
        reports.push(ctx.classical()?);
    }
    if !selected {
        return Err(Failure {
            code: EXIT_ERROR,
            message: "select at least one of --triple, --all, --isoperimetric, --isodiametric, \
                      --bokowski-heil, --classical"
                .into(),
        });
    }
    let mut out = io::stdout().lock();
    for r in &reports {
        writeln!(out, "{}", r.to_json())?;
    }
    Ok(if reports.iter().any(|r| r.verdict == Verdict::Violated) {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    })
}

fn kubota(a: KubotaArgs) -> Result<i32, Failure> {
    let body = read_body(&a.body)?;
    let mc = McOptions::new(a.samples, a.seed);
    let r = kubota_check(&body, a.k, a.j, a.rotations, a.seed, &mc).map_err(context("kubota"))?;
    emit(&serde_json::to_string(&r).expect("serialisable"), None)?;
    Ok(if r.pass { EXIT_OK } else { EXIT_VIOLATED })
}

fn symbolic(a: SymbolicArgs) -> Result<i32, Failure> {
    if a.n_max < 2 {
        return Err(Failure {
            code: EXIT_ERROR,
            message: format!("--n-max must be at least 2, got {}", a.n_max),
        });
    }
    let checks = symbolic_suite(a.n_max);
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{}", serde_json::to_string(c).expect("serialisable"))?;
    }
    Ok(if checks.iter().all(|c| c.passed) {
        EXIT_OK
    } else {
        EXIT_VIOLATED
    })
}

fn campaign(a: CampaignArgs) -> Result<i32, Failure> {
    let config = CampaignConfig::load(&a.config).map_err(context(a.config.display()))?;
    let summary = run_and_write(&config)?;
    eprintln!(
        "qmc: {} bodies ({} Monte-Carlo), {} reports: {} holds, {} equality, {} violated; \
         kubota {}/{} passed",
        summary.bodies,
        summary.mc_bodies,
        summary.reports,
        summary.holds,
        summary.equality,
        summary.violated,
        summary.kubota_checks - summary.kubota_failed,
        summary.kubota_checks,
    );
    Ok(summary.exit_code())
}
