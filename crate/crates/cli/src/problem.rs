//! Problem files: parsing, schema checks and cross-reference resolution.

use std::path::Path;
use std::sync::Arc;

use pvk_core::lie::{BracketEntry, LieAlgebra, LieModule};
use pvk_core::literal::{parse_scalar, LiteralError};
use pvk_core::poisson::PoissonStructure;
use pvk_core::pvb::ConnectionData;
use pvk_core::{Matrix, Monomial, Multivector, Poly, PolyMatrix, Scalar};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },
    #[error("schema error at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("cross-reference error at {pointer}: {message}")]
    CrossRef { pointer: String, message: String },
    #[error("invalid data at {pointer}: {message}")]
    Invalid { pointer: String, message: String },
}

impl LoadError {
    pub fn kind(&self) -> &'static str {
        match self {
            LoadError::Io { .. } => "io_error",
            LoadError::Parse { .. } => "parse_error",
            LoadError::Schema { .. } => "schema_error",
            LoadError::CrossRef { .. } => "cross_ref_error",
            LoadError::Invalid { .. } => "invalid",
        }
    }

    pub fn pointer(&self) -> Option<&str> {
        match self {
            LoadError::Io { .. } => None,
            LoadError::Parse { pointer, .. }
            | LoadError::Schema { pointer, .. }
            | LoadError::CrossRef { pointer, .. }
            | LoadError::Invalid { pointer, .. } => Some(pointer),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Rational,
    Gaussian,
}

/// Optional settings read from `/options`; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Options {
    pub cap: Option<u32>,
    pub force: bool,
    pub point: Option<Vec<Scalar>>,
    pub cocycle: Option<String>,
    pub t: Option<String>,
    pub m: Option<usize>,
    pub index: Option<usize>,
    pub grades: Option<Vec<usize>>,
    pub module: Option<String>,
}

#[derive(Debug, Clone)]
pub struct Problem {
    pub algebra: Option<Arc<LieAlgebra>>,
    pub poisson: Arc<PoissonStructure>,
    pub module: Option<Arc<LieModule>>,
    pub bundle: Option<ConnectionData>,
    pub field: Field,
    pub options: Options,
}

/// JSON value together with its pointer, for located error messages.
#[derive(Clone, Copy)]
struct Node<'a> {
    value: &'a Value,
    pointer: &'a str,
}

fn child_pointer(parent: &str, key: &str) -> String {
    format!("{parent}/{}", key.replace('~', "~0").replace('/', "~1"))
}

fn schema(pointer: &str, message: impl Into<String>) -> LoadError {
    LoadError::Schema { pointer: pointer.to_string(), message: message.into() }
}

fn cross_ref(pointer: &str, message: impl Into<String>) -> LoadError {
    LoadError::CrossRef { pointer: pointer.to_string(), message: message.into() }
}

fn invalid(pointer: &str, message: impl std::fmt::Display) -> LoadError {
    LoadError::Invalid { pointer: pointer.to_string(), message: message.to_string() }
}

fn as_array<'a>(v: &'a Value, pointer: &str) -> Result<&'a Vec<Value>, LoadError> {
    v.as_array().ok_or_else(|| schema(pointer, "expected an array"))
}

fn as_usize(v: &Value, pointer: &str) -> Result<usize, LoadError> {
    v.as_u64().map(|u| u as usize).ok_or_else(|| schema(pointer, "expected a non-negative integer"))
}

fn as_str<'a>(v: &'a Value, pointer: &str) -> Result<&'a str, LoadError> {
    v.as_str().ok_or_else(|| schema(pointer, "expected a string"))
}

fn scalar(v: &Value, pointer: &str) -> Result<Scalar, LoadError> {
    let text = as_str(v, pointer)?;
    parse_scalar(text).map_err(|e| match e {
        LiteralError::Scalar { text, source } => {
            LoadError::Parse { pointer: pointer.to_string(), message: format!("bad scalar `{text}`: {source}") }
        }
        other => LoadError::Parse { pointer: pointer.to_string(), message: other.to_string() },
    })
}

fn poly(v: &Value, pointer: &str, nvars: usize) -> Result<Poly, LoadError> {
    let terms = as_array(v, pointer)?;
    let mut p = Poly::zero(nvars);
    for (t, term) in terms.iter().enumerate() {
        let tp = format!("{pointer}/{t}");
        let obj = term.as_object().ok_or_else(|| schema(&tp, "expected a {\"coeff\", \"exps\"} object"))?;
        let cp = child_pointer(&tp, "coeff");
        let c = scalar(obj.get("coeff").ok_or_else(|| schema(&tp, "missing `coeff`"))?, &cp)?;
        let ep = child_pointer(&tp, "exps");
        let exps = as_array(obj.get("exps").ok_or_else(|| schema(&tp, "missing `exps`"))?, &ep)?;
        if exps.len() != nvars {
            return Err(cross_ref(&ep, format!("exponent vector has length {}, expected {nvars}", exps.len())));
        }
        let exps = exps
            .iter()
            .enumerate()
            .map(|(i, e)| as_usize(e, &format!("{ep}/{i}")).map(|u| u as u32))
            .collect::<Result<Vec<_>, _>>()?;
        p.add_term(Monomial::new(exps), &c);
    }
    Ok(p)
}

fn matrix(v: &Value, pointer: &str) -> Result<Matrix, LoadError> {
    let rows = as_array(v, pointer)?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{pointer}/{i}");
        let row = as_array(row, &rp)?;
        if row.len() != n {
            return Err(schema(&rp, "matrix is not square"));
        }
        out.push(row.iter().enumerate().map(|(j, e)| scalar(e, &format!("{rp}/{j}"))).collect::<Result<Vec<_>, _>>()?);
    }
    Ok(Matrix::from_rows(out))
}

fn poly_matrix(v: &Value, pointer: &str, nvars: usize, rank: usize) -> Result<PolyMatrix, LoadError> {
    let rows = as_array(v, pointer)?;
    if rows.len() != rank {
        return Err(cross_ref(pointer, format!("matrix has {} rows, bundle rank is {rank}", rows.len())));
    }
    let mut entries = Vec::with_capacity(rank * rank);
    for (i, row) in rows.iter().enumerate() {
        let rp = format!("{pointer}/{i}");
        let row = as_array(row, &rp)?;
        if row.len() != rank {
            return Err(cross_ref(&rp, format!("row has {} entries, bundle rank is {rank}", row.len())));
        }
        for (j, e) in row.iter().enumerate() {
            entries.push(poly(e, &format!("{rp}/{j}"), nvars)?);
        }
    }
    Ok(PolyMatrix::from_entries(rank, nvars, entries))
}

fn algebra(node: Node) -> Result<Arc<LieAlgebra>, LoadError> {
    let p = node.pointer;
    if let Some(name) = node.value.as_str() {
        return LieAlgebra::preset(name).map(Arc::new).map_err(|e| schema(p, e.to_string()));
    }
    let obj = node.value.as_object().ok_or_else(|| schema(p, "expected a preset name or {\"dim\", \"brackets\"}"))?;
    let dim = as_usize(obj.get("dim").ok_or_else(|| schema(p, "missing `dim`"))?, &child_pointer(p, "dim"))?;
    let bp = child_pointer(p, "brackets");
    let raw = as_array(obj.get("brackets").ok_or_else(|| schema(p, "missing `brackets`"))?, &bp)?;
    let mut brackets: Vec<BracketEntry> = Vec::new();
    for (e, entry) in raw.iter().enumerate() {
        let ep = format!("{bp}/{e}");
        let parts = as_array(entry, &ep)?;
        if parts.len() != 3 {
            return Err(schema(&ep, "expected [i, j, [[k, coeff], ...]]"));
        }
        let i = as_usize(&parts[0], &format!("{ep}/0"))?;
        let j = as_usize(&parts[1], &format!("{ep}/1"))?;
        if i >= dim || j >= dim {
            return Err(cross_ref(&ep, format!("basis index out of range for dimension {dim}")));
        }
        let tp = format!("{ep}/2");
        let mut terms = Vec::new();
        for (t, term) in as_array(&parts[2], &tp)?.iter().enumerate() {
            let pp = format!("{tp}/{t}");
            let pair = as_array(term, &pp)?;
            if pair.len() != 2 {
                return Err(schema(&pp, "expected [k, coeff]"));
            }
            let k = as_usize(&pair[0], &format!("{pp}/0"))?;
            if k >= dim {
                return Err(cross_ref(&format!("{pp}/0"), format!("basis index out of range for dimension {dim}")));
            }
            terms.push((k, scalar(&pair[1], &format!("{pp}/1"))?));
        }
        brackets.push((i, j, terms));
    }
    LieAlgebra::new("custom", dim, &brackets).map(Arc::new).map_err(|e| invalid(p, e))
}

fn poisson(node: Node, algebra: Option<&Arc<LieAlgebra>>) -> Result<Arc<PoissonStructure>, LoadError> {
    let p = node.pointer;
    let obj = node.value.as_object().ok_or_else(|| schema(p, "expected {\"preset\"} or {\"bivector\"}"))?;
    if let Some(preset) = obj.get("preset") {
        let pp = child_pointer(p, "preset");
        let name = as_str(preset, &pp)?;
        if let Some(n) = name.strip_prefix("zero:") {
            let n = n.parse().map_err(|_| schema(&pp, "expected zero:<n>"))?;
            return Ok(Arc::new(PoissonStructure::zero(n)));
        }
        if let Some(m) = name.strip_prefix("symplectic:") {
            let m = m.parse().map_err(|_| schema(&pp, "expected symplectic:<m>"))?;
            return Ok(Arc::new(PoissonStructure::symplectic(m)));
        }
        let alg = LieAlgebra::preset(name).map_err(|e| schema(&pp, e.to_string()))?;
        return Ok(Arc::new(PoissonStructure::from_lie_algebra(Arc::new(alg))));
    }
    let bp = child_pointer(p, "bivector");
    let raw = as_array(obj.get("bivector").ok_or_else(|| schema(p, "missing `preset` or `bivector`"))?, &bp)?;
    let nvars = match obj.get("nvars") {
        Some(v) => as_usize(v, &child_pointer(p, "nvars"))?,
        None => algebra.map(|a| a.dim()).ok_or_else(|| schema(p, "custom bivector needs `nvars` or an algebra"))?,
    };
    let mut pi = Multivector::zero(2, nvars, ());
    for (e, entry) in raw.iter().enumerate() {
        let ep = format!("{bp}/{e}");
        let parts = as_array(entry, &ep)?;
        if parts.len() != 3 {
            return Err(schema(&ep, "expected [i, j, PolyLiteral]"));
        }
        let i = as_usize(&parts[0], &format!("{ep}/0"))?;
        let j = as_usize(&parts[1], &format!("{ep}/1"))?;
        if i >= nvars || j >= nvars {
            return Err(cross_ref(&ep, format!("coordinate index out of range for {nvars} variables")));
        }
        if i == j {
            return Err(schema(&ep, "diagonal bivector component"));
        }
        pi.add_component(&[i, j], &poly(&parts[2], &format!("{ep}/2"), nvars)?);
    }
    PoissonStructure::new(pi).map(Arc::new).map_err(|e| invalid(&bp, e))
}

fn bundle(
    node: Node,
    poisson: &Arc<PoissonStructure>,
    algebra: Option<&Arc<LieAlgebra>>,
) -> Result<(ConnectionData, Option<Arc<LieModule>>), LoadError> {
    let p = node.pointer;
    let obj = node.value.as_object().ok_or_else(|| schema(p, "expected an object"))?;
    let n = poisson.nvars();
    let cap = match obj.get("cap") {
        Some(v) => Some(as_usize(v, &child_pointer(p, "cap"))? as u32),
        None => None,
    };
    if let Some(rep) = obj.get("representation") {
        let rp = child_pointer(p, "representation");
        let alg = match algebra {
            Some(a) => a.clone(),
            None => poisson.lie_algebra().map_err(|_| cross_ref(&rp, "representation needs a linear Poisson structure"))?,
        };
        let robj = rep.as_object().ok_or_else(|| schema(&rp, "expected {\"matrices\"} or {\"module\"}"))?;
        let module = if let Some(kind) = robj.get("module") {
            let kp = child_pointer(&rp, "module");
            LieModule::preset(alg, as_str(kind, &kp)?).map_err(|e| invalid(&kp, e))?
        } else {
            let mp = child_pointer(&rp, "matrices");
            let raw = as_array(robj.get("matrices").ok_or_else(|| schema(&rp, "missing `matrices`"))?, &mp)?;
            if raw.len() != alg.dim() {
                return Err(cross_ref(&mp, format!("{} matrices for an algebra of dimension {}", raw.len(), alg.dim())));
            }
            let mats = raw.iter().enumerate().map(|(i, m)| matrix(m, &format!("{mp}/{i}"))).collect::<Result<Vec<_>, _>>()?;
            let size = mats.first().map_or(0, Matrix::rows);
            if let Some(i) = mats.iter().position(|m| m.rows() != size) {
                return Err(cross_ref(&format!("{mp}/{i}"), "matrices have different sizes"));
            }
            LieModule::new(alg, mats).map_err(|e| invalid(&mp, e))?
        };
        let xi = ConnectionData::from_representation(poisson.clone(), &module).map_err(|e| cross_ref(&rp, e.to_string()))?;
        return Ok((xi.with_cap(cap), Some(Arc::new(module))));
    }
    let rank = as_usize(obj.get("rank").ok_or_else(|| schema(p, "missing `rank` or `representation`"))?, &child_pointer(p, "rank"))?;
    let xp = child_pointer(p, "xi");
    let raw = as_array(obj.get("xi").ok_or_else(|| schema(p, "missing `xi`"))?, &xp)?;
    if raw.len() != n {
        return Err(cross_ref(&xp, format!("{} components for {n} coordinates", raw.len())));
    }
    let mut comps = Vec::with_capacity(n);
    for (i, m) in raw.iter().enumerate() {
        match poly_matrix(m, &format!("{xp}/{i}"), n, rank) {
            Ok(c) => comps.push(c),
            // any shape disagreement with the declared rank is reported on the component list
            Err(LoadError::CrossRef { message, .. }) if !message.contains("exponent") => {
                return Err(cross_ref(&xp, format!("component {i}: {message}")))
            }
            Err(e) => return Err(e),
        }
    }
    let xi = ConnectionData::new(poisson.clone(), rank, comps, cap).map_err(|e| cross_ref(&xp, e.to_string()))?;
    Ok((xi, None))
}

fn options(node: Node) -> Result<Options, LoadError> {
    let p = node.pointer;
    let obj = node.value.as_object().ok_or_else(|| schema(p, "expected an object"))?;
    let mut o = Options::default();
    for (key, v) in obj {
        let kp = child_pointer(p, key);
        match key.as_str() {
            "cap" => o.cap = Some(as_usize(v, &kp)? as u32),
            "force" => o.force = v.as_bool().ok_or_else(|| schema(&kp, "expected a boolean"))?,
            "point" => {
                o.point = Some(
                    as_array(v, &kp)?.iter().enumerate().map(|(i, c)| scalar(c, &format!("{kp}/{i}"))).collect::<Result<_, _>>()?,
                )
            }
            "cocycle" => o.cocycle = Some(as_str(v, &kp)?.to_string()),
            "t" => o.t = Some(as_str(v, &kp)?.to_string()),
            "m" => o.m = Some(as_usize(v, &kp)?),
            "index" => o.index = Some(as_usize(v, &kp)?),
            "module" => o.module = Some(as_str(v, &kp)?.to_string()),
            "grades" => {
                o.grades = Some(
                    as_array(v, &kp)?.iter().enumerate().map(|(i, g)| as_usize(g, &format!("{kp}/{i}"))).collect::<Result<_, _>>()?,
                )
            }
            "field" => {}
            _ => return Err(schema(&kp, format!("unknown option `{key}`"))),
        }
    }
    Ok(o)
}

fn field(v: &Value, pointer: &str) -> Result<Field, LoadError> {
    match as_str(v, pointer)? {
        "Q" => Ok(Field::Rational),
        "Qi" => Ok(Field::Gaussian),
        other => Err(schema(pointer, format!("unknown field `{other}` (expected Q or Qi)"))),
    }
}

/// Builds a problem from a parsed JSON document.
pub fn problem_from_value(doc: &Value) -> Result<Problem, LoadError> {
    let root = doc.as_object().ok_or_else(|| schema("", "expected a JSON object"))?;
    for key in root.keys() {
        if !matches!(key.as_str(), "algebra" | "poisson" | "bundle" | "options" | "field" | "description") {
            return Err(schema(&child_pointer("", key), format!("unknown key `{key}`")));
        }
    }
    let algebra = match root.get("algebra") {
        Some(v) => Some(algebra(Node { value: v, pointer: "/algebra" })?),
        None => None,
    };
    let poisson = match (root.get("poisson"), &algebra) {
        (Some(v), _) => poisson(Node { value: v, pointer: "/poisson" }, algebra.as_ref())?,
        (None, Some(a)) => Arc::new(PoissonStructure::from_lie_algebra(a.clone())),
        (None, None) => return Err(schema("", "need `algebra` or `poisson`")),
    };
    if let (Some(a), Some(_)) = (&algebra, root.get("poisson")) {
        if a.dim() != poisson.nvars() {
            return Err(cross_ref("/poisson", format!("algebra has dimension {} but the structure has {} variables", a.dim(), poisson.nvars())));
        }
    }
    let opts = match root.get("options") {
        Some(v) => options(Node { value: v, pointer: "/options" })?,
        None => Options::default(),
    };
    let mut field_kind = Field::Rational;
    if let Some(v) = root.get("field") {
        field_kind = field(v, "/field")?;
    }
    if let Some(v) = root.get("options").and_then(|o| o.get("field")) {
        field_kind = field(v, "/options/field")?;
    }
    let (bundle, module) = match root.get("bundle") {
        Some(v) => {
            if let Some(f) = v.get("field") {
                field_kind = field(f, "/bundle/field")?;
            }
            let (b, m) = bundle(Node { value: v, pointer: "/bundle" }, &poisson, algebra.as_ref())?;
            (Some(b), m)
        }
        None => (None, None),
    };
    if field_kind == Field::Rational {
        let real = bundle.as_ref().is_none_or(|b| b.components().iter().all(|c| c.entries().iter().all(Poly::is_real)))
            && poisson.bivector().is_real();
        if !real {
            return Err(schema("/bundle", "imaginary coefficient in a problem over Q (declare \"field\": \"Qi\")"));
        }
    }
    Ok(Problem { algebra, poisson, module, bundle, field: field_kind, options: opts })
}

pub fn parse_problem(text: &str) -> Result<Problem, LoadError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| LoadError::Parse {
        pointer: String::new(),
        message: format!("invalid JSON at line {} column {}: {e}", e.line(), e.column()),
    })?;
    problem_from_value(&doc)
}

pub fn load_problem(path: &Path) -> Result<Problem, LoadError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| LoadError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_problem(&text)
}

/// Problem assembled from command-line flags alone.
pub fn problem_from_preset(algebra_name: &str, module: Option<&str>) -> Result<Problem, LoadError> {
    let alg = Arc::new(LieAlgebra::preset(algebra_name).map_err(|e| schema("--algebra", e.to_string()))?);
    let poisson = Arc::new(PoissonStructure::from_lie_algebra(alg.clone()));
    let (bundle, module) = match module {
        Some(kind) => {
            let m = LieModule::preset(alg.clone(), kind).map_err(|e| invalid("--module", e))?;
            let b = ConnectionData::from_representation(poisson.clone(), &m).map_err(|e| invalid("--module", e))?;
            (Some(b), Some(Arc::new(m)))
        }
        None => (None, None),
    };
    Ok(Problem { algebra: Some(alg), poisson, module, bundle, field: Field::Rational, options: Options::default() })
}
