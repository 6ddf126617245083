//! JSON forms of parameter arrays, realizations, module descriptors and reports.
//! Scalars are written as strings; on input, strings and JSON numbers are accepted.

use serde_json::{json, Value};

use crate::drinfeld::SplitSequence;
use crate::error::{ConditionClause, Error, Result};
use crate::linalg::Matrix;
use crate::report::Report;
use crate::scalar::Field;
use crate::td::{ParameterArray, QRacahParams, TDRealization};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| parse_err(format!("missing field {key:?}")))
}

pub fn scalar<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<F> {
    match v {
        Value::String(s) => F::parse(s, ctx),
        Value::Number(n) => F::parse(&n.to_string(), ctx),
        other => Err(parse_err(format!("expected a scalar, got {other}"))),
    }
}

pub fn scalars<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<Vec<F>> {
    v.as_array()
        .ok_or_else(|| parse_err(format!("expected a list of scalars, got {v}")))?
        .iter()
        .map(|x| scalar(x, ctx))
        .collect()
}

pub fn matrix<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<Matrix<F>> {
    let rows = v.as_array().ok_or_else(|| parse_err("expected a matrix as a list of rows"))?;
    let rows: Vec<Vec<F>> = rows.iter().map(|r| scalars(r, ctx)).collect::<Result<_>>()?;
    Matrix::from_rows(rows, ctx)
}

fn matrices<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<Vec<Matrix<F>>> {
    v.as_array().ok_or_else(|| parse_err("expected a list of matrices"))?.iter().map(|m| matrix(m, ctx)).collect()
}

fn strings<F: Field>(xs: &[F]) -> Value {
    Value::Array(xs.iter().map(|x| Value::String(x.to_string())).collect())
}

pub fn matrix_json<F: Field>(m: &Matrix<F>) -> Value {
    json!(m.to_strings())
}

/// `{"d", "thetas", "theta_stars", "zetas", "q"?}`. A first split value other than 1 is a
/// refusal of the existence criterion, not a format error.
pub fn parameter_array<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<ParameterArray<F>> {
    let thetas = scalars(field(v, "thetas")?, ctx)?;
    let theta_stars = scalars(field(v, "theta_stars")?, ctx)?;
    let zetas: Vec<F> = scalars(field(v, "zetas")?, ctx)?;
    let q = v.get("q").filter(|x| !x.is_null()).map(|x| scalar(x, ctx)).transpose()?;
    if let Some(d) = v.get("d") {
        let d = d.as_u64().ok_or_else(|| parse_err("\"d\" must be a nonnegative integer"))?;
        if thetas.len() as u64 != d + 1 {
            return Err(Error::DimensionMismatch(format!("d = {d} but {} eigenvalues", thetas.len())));
        }
    }
    if zetas.len() != thetas.len() {
        return Err(Error::DimensionMismatch(format!("{} split values for {} eigenvalues", zetas.len(), thetas.len())));
    }
    if let Some(z0) = zetas.first() {
        if SplitSequence::new(vec![z0.clone()]).is_err() {
            let cert =
                json!({"holds": false, "reason": ConditionClause::ZetaZero.reason_code(), "zeta0": z0.to_string()});
            return Err(Error::ConditionII { clause: ConditionClause::ZetaZero, certificate: cert.to_string() });
        }
    }
    ParameterArray::new(thetas, theta_stars, zetas, q)
}

pub fn parameter_array_json<F: Field>(pa: &ParameterArray<F>) -> Value {
    let mut v = json!({
        "d": pa.d(),
        "thetas": strings(&pa.thetas),
        "theta_stars": strings(&pa.theta_stars),
        "zetas": strings(pa.zetas.zetas()),
    });
    if let Some(q) = &pa.q {
        v["q"] = json!(q.to_string());
    }
    v
}

/// `{"dim", "A", "Astar", "E", "Estar", "shape"}`.
pub fn realization_json<F: Field>(r: &TDRealization<F>) -> Value {
    json!({
        "dim": r.dim,
        "A": matrix_json(&r.a),
        "Astar": matrix_json(&r.a_star),
        "E": r.e.iter().map(matrix_json).collect::<Vec<_>>(),
        "Estar": r.e_star.iter().map(matrix_json).collect::<Vec<_>>(),
        "shape": r.shape,
    })
}

pub fn realization<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<TDRealization<F>> {
    let r = TDRealization::from_parts(
        matrix(field(v, "A")?, ctx)?,
        matrix(field(v, "Astar")?, ctx)?,
        matrices(field(v, "E")?, ctx)?,
        matrices(field(v, "Estar")?, ctx)?,
    )?;
    if let Some(dim) = v.get("dim").and_then(Value::as_u64) {
        if dim as usize != r.dim {
            return Err(Error::DimensionMismatch(format!("\"dim\" is {dim} but matrices are {}×{}", r.dim, r.dim)));
        }
    }
    Ok(r)
}

/// A standard module with `R`, `L` as described by
/// `{"q", "alphas", "params": {a, b, c, a*, b*, c*}, "u", "v"}`; `u`, `v` default to 1.
#[derive(Clone, Debug)]
pub struct ModuleDescriptor<F: Field> {
    pub params: QRacahParams<F>,
    pub alphas: Vec<F>,
    pub u: F,
    pub v: F,
}

pub fn module_descriptor<F: Field>(v: &Value, ctx: &F::Ctx) -> Result<ModuleDescriptor<F>> {
    let q: F = scalar(field(v, "q")?, ctx)?;
    let alphas = scalars(field(v, "alphas")?, ctx)?;
    let p = field(v, "params")?;
    let get = |names: &[&str]| -> Result<F> {
        let x =
            names.iter().find_map(|n| p.get(*n)).ok_or_else(|| parse_err(format!("params: missing {:?}", names[0])))?;
        scalar(x, ctx)
    };
    let params = QRacahParams::new(
        q,
        get(&["a"])?,
        get(&["b"])?,
        get(&["c"])?,
        get(&["a*", "a_star"])?,
        get(&["b*", "b_star"])?,
        get(&["c*", "c_star"])?,
        alphas.len(),
    )?;
    let opt = |k: &str| v.get(k).filter(|x| !x.is_null()).map(|x| scalar(x, ctx)).transpose();
    Ok(ModuleDescriptor {
        params,
        alphas,
        u: opt("u")?.unwrap_or_else(|| F::one(ctx)),
        v: opt("v")?.unwrap_or_else(|| F::one(ctx)),
    })
}

pub fn report_json(r: &Report) -> Value {
    json!({"passed": r.passed(), "checks": r.checks})
}

/// `{"status": "refused" | "error", "reason", "message", "certificate"?}`.
pub fn error_json(e: &Error) -> Value {
    let mut v = json!({
        "status": if e.is_refusal() { "refused" } else { "error" },
        "reason": e.reason_code(),
        "message": e.to_string(),
    });
    if let Error::ConditionII { certificate, .. } = e {
        v["certificate"] = serde_json::from_str(certificate).unwrap_or(Value::String(certificate.clone()));
    }
    v
}
