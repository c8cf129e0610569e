//! Subcommand implementations. Each returns a JSON report and an exit code.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pvk_core::lie::{ce_cohomology_dims, LieModule};
use pvk_core::literal::{cochain_to_literal, matrix_to_literal, multivector_to_literal, polymatrix_to_literal};
use pvk_core::normalize::{
    dilation_homotopy, formal_normalize, obstruction_components, Dilation, NormalizeError, NormalizeOptions,
};
use pvk_core::poisson::{poisson_cohomology_dims, product_poisson, PoissonError};
use pvk_core::pvb::{
    canonical_bundle, characteristic_class, homogeneity_check, isotropy_representation, mc_residual, product_extension,
    restrict_to_base, ConnectionData, GlCocycle, PvbError,
};
use pvk_core::{MatrixMultivector, Scalar};
use serde_json::{json, Map, Value};

use crate::problem::{load_problem, problem_from_preset, LoadError, Problem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_OBSTRUCTION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

const DEFAULT_MAX_CAP: u32 = 8;
const DEFAULT_CAP: u32 = 3;
const DEFAULT_EXACTNESS_CAP: u32 = 6;

#[derive(Parser, Debug)]
#[command(name = "pvk", version, about = "Exact computations for Poisson vector bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Add wall-clock time to the report (off by default so reports stay byte-stable).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the Maurer–Cartan equation.
    CheckMc(CommonArgs),
    /// Gauge the bundle data to its constant part, degree by degree.
    Normalize(CommonArgs),
    /// Characteristic class of a trace cocycle.
    CharClass(CommonArgs),
    /// Modular class of the canonical bundle.
    Modular(CommonArgs),
    /// Isotropy representation at a point.
    Isotropy(CommonArgs),
    /// Chevalley–Eilenberg cohomology dimensions.
    Ce(CommonArgs),
    /// Truncated Poisson cohomology dimensions.
    Pcoh(CommonArgs),
    /// Dilation homotopy of the bundle data.
    Homotopy(CommonArgs),
    /// Homogeneity witness check along a Hamiltonian field.
    HomogCheck(CommonArgs),
    /// Extension to the product with a symplectic factor.
    Product(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckMc(_) => "check-mc",
            Command::Normalize(_) => "normalize",
            Command::CharClass(_) => "char-class",
            Command::Modular(_) => "modular",
            Command::Isotropy(_) => "isotropy",
            Command::Ce(_) => "ce",
            Command::Pcoh(_) => "pcoh",
            Command::Homotopy(_) => "homotopy",
            Command::HomogCheck(_) => "homog-check",
            Command::Product(_) => "product",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::CheckMc(a)
            | Command::Normalize(a)
            | Command::CharClass(a)
            | Command::Modular(a)
            | Command::Isotropy(a)
            | Command::Ce(a)
            | Command::Pcoh(a)
            | Command::Homotopy(a)
            | Command::HomogCheck(a)
            | Command::Product(a) => a,
        }
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Problem file (JSON).
    pub file: Option<PathBuf>,
    /// Preset algebra (sl2, so3, h3, aff1, abelian:<n>) used when no file is given.
    #[arg(long)]
    pub algebra: Option<String>,
    /// Module preset: trivial, standard or adjoint.
    #[arg(long)]
    pub module: Option<String>,
    /// Polynomial degree cap.
    #[arg(long)]
    pub cap: Option<u32>,
    /// Skip the semisimplicity gate.
    #[arg(long)]
    pub force: bool,
    /// Comma-separated point coordinates.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub point: Option<Vec<String>>,
    /// Trace cocycle: tr, u2, or u<k>.
    #[arg(long)]
    pub cocycle: Option<String>,
    /// Dilation parameter, a scalar or `symbolic`.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Half-dimension of the symplectic factor.
    #[arg(long)]
    pub m: Option<usize>,
    /// Coordinate index for the Hamiltonian witness.
    #[arg(long)]
    pub index: Option<usize>,
    /// Comma-separated cohomological degrees.
    #[arg(long, value_delimiter = ',')]
    pub grades: Option<Vec<usize>>,
}

/// A finished command: the report document and the process exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub report: Value,
}

struct Failure {
    code: i32,
    status: &'static str,
    error: Value,
}

impl Failure {
    fn new(code: i32, status: &'static str, kind: &str, message: impl std::fmt::Display) -> Self {
        Failure { code, status, error: json!({"kind": kind, "message": message.to_string()}) }
    }

    fn invalid(kind: &str, message: impl std::fmt::Display) -> Self {
        Failure::new(EXIT_INVALID, "invalid", kind, message)
    }

    fn internal(message: impl std::fmt::Display) -> Self {
        Failure::new(EXIT_INTERNAL, "internal_error", "internal", message)
    }
}

impl From<LoadError> for Failure {
    fn from(e: LoadError) -> Self {
        let mut error = json!({"kind": e.kind(), "message": e.to_string()});
        if let Some(p) = e.pointer() {
            error["pointer"] = json!(p);
        }
        Failure { code: EXIT_INVALID, status: "invalid", error }
    }
}

impl From<PvbError> for Failure {
    fn from(e: PvbError) -> Self {
        match e {
            PvbError::NotFlat { .. } => Failure::new(EXIT_INVALID, "not_flat", "not_flat", e),
            PvbError::IdentityFails | PvbError::Internal(_) => Failure::internal(e),
            _ => Failure::invalid("invalid", e),
        }
    }
}

impl From<PoissonError> for Failure {
    fn from(e: PoissonError) -> Self {
        Failure::invalid("invalid", e)
    }
}

impl From<NormalizeError> for Failure {
    fn from(e: NormalizeError) -> Self {
        match e {
            NormalizeError::Internal(_) => Failure::internal(e),
            NormalizeError::Pvb(inner) => inner.into(),
            NormalizeError::UnitaryObstruction { r } => {
                let mut f = Failure::new(EXIT_OBSTRUCTION, "obstruction", "unitary_obstruction", &e);
                f.error["degree"] = json!(r);
                f
            }
            NormalizeError::NotSemisimple { .. } => Failure::invalid("not_semisimple", e),
            NormalizeError::NonLinearStructure => Failure::invalid("non_linear_structure", e),
            _ => Failure::invalid("invalid", e),
        }
    }
}

type Payload = Map<String, Value>;

/// Largest cap accepted, from `PVK_MAX_CAP` (default 8).
pub fn max_cap() -> Result<u32, String> {
    match std::env::var("PVK_MAX_CAP") {
        Ok(v) => v.trim().parse().map_err(|_| format!("PVK_MAX_CAP must be a non-negative integer, got `{v}`")),
        Err(_) => Ok(DEFAULT_MAX_CAP),
    }
}

fn load(args: &CommonArgs) -> Result<Problem, Failure> {
    let mut problem = match (&args.file, &args.algebra) {
        (Some(path), _) => load_problem(path)?,
        (None, Some(name)) => problem_from_preset(name, args.module.as_deref())?,
        (None, None) => return Err(Failure::invalid("usage", "give a problem file or --algebra")),
    };
    // a module flag on a file without bundle data attaches the preset representation
    if problem.bundle.is_none() {
        if let Some(kind) = args.module.as_deref().or(problem.options.module.as_deref()) {
            let alg = problem.poisson.lie_algebra()?;
            let module = LieModule::preset(alg, kind).map_err(|e| Failure::invalid("invalid", e))?;
            problem.bundle = Some(ConnectionData::from_representation(problem.poisson.clone(), &module)?);
            problem.module = Some(Arc::new(module));
        }
    }
    Ok(problem)
}

fn bundle(problem: &Problem) -> Result<&ConnectionData, Failure> {
    problem.bundle.as_ref().ok_or_else(|| Failure::invalid("usage", "this command needs bundle data (`bundle` or --module)"))
}

fn cap(args: &CommonArgs, problem: &Problem, default: u32) -> Result<u32, Failure> {
    let cap = args.cap.or(problem.options.cap).or(problem.bundle.as_ref().and_then(ConnectionData::cap)).unwrap_or(default);
    let max = max_cap().map_err(|m| Failure::invalid("invalid", m))?;
    if cap > max {
        return Err(Failure::invalid("cap_exceeded", format!("cap {cap} exceeds PVK_MAX_CAP = {max}")));
    }
    Ok(cap)
}

fn cocycle(args: &CommonArgs, problem: &Problem) -> Result<GlCocycle, Failure> {
    let name = args.cocycle.as_deref().or(problem.options.cocycle.as_deref()).unwrap_or("tr");
    GlCocycle::by_name(name).ok_or_else(|| Failure::invalid("usage", format!("unknown cocycle `{name}`")))
}

fn matrix_multivector_literal(t: &MatrixMultivector) -> Value {
    let comps: Vec<Value> =
        t.components().map(|(idx, m)| json!({"indices": idx, "matrix": polymatrix_to_literal(m)})).collect();
    json!({"grade": t.grade(), "components": comps})
}

fn bundle_literal(xi: &ConnectionData) -> Value {
    json!(xi.components().iter().map(polymatrix_to_literal).collect::<Vec<_>>())
}

fn scalars(v: &[Scalar]) -> Value {
    json!(v.iter().map(Scalar::to_string).collect::<Vec<_>>())
}

fn check_mc(problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let residual = mc_residual(xi);
    let mut out = Payload::new();
    out.insert("residual_zero".into(), json!(residual.is_zero()));
    out.insert("rank".into(), json!(xi.rank()));
    out.insert("nvars".into(), json!(xi.nvars()));
    out.insert("residual".into(), matrix_multivector_literal(&residual));
    if !residual.is_zero() {
        let mut f = Failure::new(EXIT_INVALID, "not_flat", "not_flat", "bundle data violates the Maurer–Cartan equation");
        f.error["residual"] = out["residual"].clone();
        return Err(f);
    }
    Ok(out)
}

fn normalize(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let cap = cap(args, problem, DEFAULT_CAP)?;
    let force = args.force || problem.options.force;
    match formal_normalize(xi, cap, NormalizeOptions { force }) {
        Ok(n) => {
            let mut out = Payload::new();
            out.insert("cap".into(), json!(cap));
            out.insert("degrees_solved".into(), json!(n.degrees_solved));
            out.insert("phi".into(), json!(polymatrix_to_literal(n.phi.matrix())));
            out.insert("phi_inverse".into(), json!(polymatrix_to_literal(n.phi.inverse())));
            out.insert("unitary".into(), json!(n.unitary));
            out.insert("xi0".into(), json!(n.xi0.iter().map(matrix_to_literal).collect::<Vec<_>>()));
            Ok(out)
        }
        Err(NormalizeError::ObstructionFound { r, cocycle }) => {
            let comps = obstruction_components(&cocycle, r, xi.rank(), xi.nvars());
            let mut f = Failure::new(
                EXIT_OBSTRUCTION,
                "obstruction",
                "obstruction",
                format!("nonzero cohomology class in degree {r}"),
            );
            f.error["degree"] = json!(r);
            f.error["cocycle"] = json!(cochain_to_literal(&cocycle));
            f.error["cocycle_matrices"] = json!(comps.iter().map(polymatrix_to_literal).collect::<Vec<_>>());
            Err(f)
        }
        Err(e) => Err(e.into()),
    }
}

fn char_class(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let c = cocycle(args, problem)?;
    let cap = cap(args, problem, DEFAULT_EXACTNESS_CAP)?;
    let class = characteristic_class(xi, &c, cap)?;
    if !class.closed {
        return Err(Failure::internal("characteristic class is not d_pi-closed"));
    }
    let mut out = Payload::new();
    out.insert("cocycle".into(), json!(c.name()));
    out.insert("class".into(), json!(multivector_to_literal(&class.class)));
    out.insert("closed".into(), json!(class.closed));
    out.insert("exactness_cap".into(), json!(cap));
    out.insert("exact_up_to_cap".into(), json!(class.exact_up_to_cap()));
    out.insert("primitive".into(), class.primitive.as_ref().map_or(Value::Null, |p| json!(multivector_to_literal(p))));
    Ok(out)
}

fn modular(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let cap = cap(args, problem, DEFAULT_EXACTNESS_CAP)?;
    let can = canonical_bundle(problem.poisson.clone());
    let class = characteristic_class(&can, &GlCocycle::trace(), cap)?;
    if !class.closed {
        return Err(Failure::internal("modular class is not d_pi-closed"));
    }
    let field = class.class.field_components();
    let mut out = Payload::new();
    out.insert("class".into(), json!(field.iter().map(ToString::to_string).collect::<Vec<_>>()));
    out.insert("class_literal".into(), json!(multivector_to_literal(&class.class)));
    out.insert("exactness_cap".into(), json!(cap));
    out.insert("nonzero".into(), json!(!class.class.is_zero()));
    out.insert("nonexact".into(), json!(!class.exact_up_to_cap()));
    out.insert("primitive".into(), class.primitive.as_ref().map_or(Value::Null, |p| json!(multivector_to_literal(p))));
    Ok(out)
}

fn isotropy(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let point: Vec<Scalar> = match (&args.point, &problem.options.point) {
        (Some(raw), _) => raw
            .iter()
            .map(|s| s.trim().parse::<Scalar>().map_err(|e| Failure::invalid("parse_error", format!("bad point coordinate `{s}`: {e}"))))
            .collect::<Result<_, _>>()?,
        (None, Some(p)) => p.clone(),
        (None, None) => vec![Scalar::from_int(0); xi.nvars()],
    };
    let iso = isotropy_representation(xi, &point)?;
    let mut out = Payload::new();
    out.insert("point".into(), scalars(&iso.point));
    out.insert("conormal".into(), json!(iso.conormal.iter().map(|v| scalars(v)).collect::<Vec<_>>()));
    let brackets: Vec<Value> = iso
        .algebra
        .brackets()
        .into_iter()
        .map(|(i, j, terms)| json!([i, j, terms.iter().map(|(k, c)| json!([k, c.to_string()])).collect::<Vec<_>>()]))
        .collect();
    out.insert("brackets".into(), json!(brackets));
    out.insert("matrices".into(), json!(iso.matrices.iter().map(matrix_to_literal).collect::<Vec<_>>()));
    out.insert("charpolys".into(), json!(iso.matrices.iter().map(|m| scalars(&m.charpoly())).collect::<Vec<_>>()));
    Ok(out)
}

fn ce(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let module = match &problem.module {
        Some(m) => m.clone(),
        None => {
            let alg = match &problem.algebra {
                Some(a) => a.clone(),
                None => problem.poisson.lie_algebra()?,
            };
            let kind = args.module.as_deref().or(problem.options.module.as_deref()).unwrap_or("trivial");
            Arc::new(LieModule::preset(alg, kind).map_err(|e| Failure::invalid("invalid", e))?)
        }
    };
    let dim = module.algebra().dim();
    let grades = args.grades.clone().or_else(|| problem.options.grades.clone()).unwrap_or_else(|| (0..=dim).collect());
    let dims = ce_cohomology_dims(&module, &grades);
    let mut out = Payload::new();
    out.insert("algebra".into(), json!(module.algebra().name()));
    out.insert("module_dim".into(), json!(module.dim()));
    out.insert("dims".into(), Value::Object(grades.iter().zip(dims).map(|(g, d)| (g.to_string(), json!(d))).collect()));
    Ok(out)
}

fn pcoh(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let cap = cap(args, problem, DEFAULT_CAP)?;
    let n = problem.poisson.nvars();
    let grades = args.grades.clone().or_else(|| problem.options.grades.clone()).unwrap_or_else(|| (0..=n).collect());
    let dims = poisson_cohomology_dims(&problem.poisson, cap, &grades)?;
    let mut out = Payload::new();
    out.insert("cap".into(), json!(cap));
    out.insert("dims".into(), Value::Object(grades.iter().zip(dims).map(|(g, d)| (g.to_string(), json!(d))).collect()));
    Ok(out)
}

fn homotopy(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let raw = args.t.as_deref().or(problem.options.t.as_deref()).unwrap_or("symbolic");
    let t = if raw == "symbolic" {
        Dilation::Symbolic
    } else {
        Dilation::Value(raw.parse().map_err(|e| Failure::invalid("parse_error", format!("bad value for t `{raw}`: {e}")))?)
    };
    let xt = dilation_homotopy(xi, &t)?;
    let flat = xt.is_flat();
    if !flat {
        return Err(Failure::internal("dilated bundle data is not flat"));
    }
    let mut out = Payload::new();
    out.insert("t".into(), json!(raw));
    out.insert("nvars".into(), json!(xt.nvars()));
    out.insert("flat".into(), json!(flat));
    out.insert("xi_t".into(), bundle_literal(&xt));
    Ok(out)
}

fn homog_check(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let c = cocycle(args, problem)?;
    let n = xi.nvars();
    let indices: Vec<usize> = match args.index.or(problem.options.index) {
        Some(i) if i < n => vec![i],
        Some(i) => return Err(Failure::invalid("usage", format!("index {i} out of range for {n} coordinates"))),
        None => (0..n).collect(),
    };
    let mut checks = Vec::new();
    for i in indices {
        let report = homogeneity_check(xi, problem.poisson.anchor(i), xi.component(i), &c)?;
        checks.push(json!({
            "index": i,
            "b": multivector_to_literal(&report.b),
            "lie_derivative_class": multivector_to_literal(&report.lie_derivative_class),
            "identity": true,
        }));
    }
    let mut out = Payload::new();
    out.insert("cocycle".into(), json!(c.name()));
    out.insert("checks".into(), json!(checks));
    Ok(out)
}

fn product(args: &CommonArgs, problem: &Problem) -> Result<Payload, Failure> {
    let xi = bundle(problem)?;
    let m = args.m.or(problem.options.m).unwrap_or(1);
    let ext = product_extension(xi, m)?;
    let flat = ext.is_flat();
    let back = restrict_to_base(&ext, problem.poisson.clone())?;
    let round_trip = back.components() == xi.components();
    if !flat || !round_trip {
        return Err(Failure::internal("product extension failed its consistency checks"));
    }
    let mut out = Payload::new();
    out.insert("m".into(), json!(m));
    out.insert("nvars".into(), json!(product_poisson(&problem.poisson, m).nvars()));
    out.insert("flat".into(), json!(flat));
    out.insert("round_trip".into(), json!(round_trip));
    out.insert("xi".into(), bundle_literal(&ext));
    Ok(out)
}

fn dispatch(command: &Command) -> Result<Payload, Failure> {
    let args = command.args();
    let problem = load(args)?;
    match command {
        Command::CheckMc(_) => check_mc(&problem),
        Command::Normalize(_) => normalize(args, &problem),
        Command::CharClass(_) => char_class(args, &problem),
        Command::Modular(_) => modular(args, &problem),
        Command::Isotropy(_) => isotropy(args, &problem),
        Command::Ce(_) => ce(args, &problem),
        Command::Pcoh(_) => pcoh(args, &problem),
        Command::Homotopy(_) => homotopy(args, &problem),
        Command::HomogCheck(_) => homog_check(args, &problem),
        Command::Product(_) => product(args, &problem),
    }
}

pub fn run(cli: &Cli) -> Outcome {
    let start = Instant::now();
    let result = dispatch(&cli.command);
    let mut report = Map::new();
    report.insert("command".into(), json!(cli.command.name()));
    let exit_code = match result {
        Ok(payload) => {
            report.insert("status".into(), json!("ok"));
            report.insert("result".into(), Value::Object(payload));
            EXIT_OK
        }
        Err(f) => {
            report.insert("status".into(), json!(f.status));
            report.insert("error".into(), f.error);
            f.code
        }
    };
    if cli.timing {
        report.insert("timing".into(), json!({"elapsed_ms": start.elapsed().as_millis() as u64}));
    }
    Outcome { exit_code, report: Value::Object(report) }
}

/// Flattens a report into `path = value` lines.
pub fn render_text(report: &Value) -> String {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<String>) {
        match v {
            Value::Object(map) if !map.is_empty() => {
                for (k, child) in map {
                    let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&p, child, out);
                }
            }
            Value::String(s) => out.push(format!("{prefix} = {s}")),
            other => out.push(format!("{prefix} = {other}")),
        }
    }
    let mut lines = Vec::new();
    walk("", report, &mut lines);
    lines.join("\n")
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("reports serialize"),
        Format::Text => render_text(report),
    }
}
