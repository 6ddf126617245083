//! Command-line front end. [`run`] is the whole program minus process I/O, so it can be
//! driven from tests.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::drinfeld::{drinfeld_polynomial, normalized_split, split_sequence};
use crate::error::{Error, Result};
use crate::json::{
    error_json, matrix, module_descriptor, parameter_array, parameter_array_json, realization, realization_json,
    report_json, scalars, ModuleDescriptor,
};
use crate::scalar::{BigComplex, Field, PrecisionConfig, RBig};
use crate::td::{
    build_a_astar, construct_realization_traced, derived_constants, parameter_array_of, shape_check,
    verify_module_structure, verify_td_axioms, verify_tridiagonal_relations, BuildOptions, Irreducibility,
};
use crate::uq::{rl_coefficients, standard_module, verify_rl_properties, verify_uq_relations, StandardModule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Complex,
}

#[derive(Debug, Parser)]
#[command(name = "qracah-td", version, about = "Construct and verify tridiagonal systems of q-Racah type")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Arithmetic backend.
    #[arg(long, value_enum, default_value = "exact", global = true)]
    pub mode: Mode,
    /// Working precision in bits for the complex backend (at least 64).
    #[arg(long, default_value_t = 128, global = true)]
    pub precision: usize,
    /// Relative zero tolerance for the complex backend; default 2^(-precision/2).
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Largest diameter accepted (default 6 exact, 10 complex).
    #[arg(long, global = true)]
    pub max_d: Option<usize>,
    /// Coefficient u of R.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub u: Option<String>,
    /// Coefficient v of R.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub v: Option<String>,
    /// Write the JSON result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads for `roundtrip` over a list of parameter arrays.
    #[arg(long, default_value_t = 1, global = true)]
    pub jobs: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parameter array -> realization.
    Construct { input: Option<PathBuf> },
    /// Matrices {"A", "Astar"} (optionally "thetas", "theta_stars", or a realization) -> axiom report.
    Verify { input: Option<PathBuf> },
    /// Module descriptor -> split sequence, normalized split sequence, Drinfel'd polynomial.
    Drinfeld { input: Option<PathBuf> },
    /// Module descriptor -> algebra relations, R/L properties, tridiagonal relations, module structure.
    Relations { input: Option<PathBuf> },
    /// Realization -> shape with the bound checks.
    Shape { input: Option<PathBuf> },
    /// Parameter array (or a list of them) -> construct, recover, compare.
    Roundtrip { input: Option<PathBuf> },
}

/// Exit code and the text destined for standard output and standard error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Settings shared by all commands after validation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub precision: PrecisionConfig,
    pub max_d: Option<usize>,
    pub u: Option<String>,
    pub v: Option<String>,
    pub jobs: usize,
}

impl RunConfig {
    pub fn from_cli(cli: &Cli) -> Result<Self> {
        if cli.mode == Mode::Complex && cli.precision < 64 {
            return Err(Error::Parse(format!("--precision {} is below the minimum of 64 bits", cli.precision)));
        }
        let precision = match cli.tolerance {
            Some(t) => {
                PrecisionConfig::with_tolerance(cli.precision.max(2), t).map_err(|e| Error::Parse(e.to_string()))?
            }
            None => PrecisionConfig::new(cli.precision.max(2)),
        };
        if cli.jobs == 0 {
            return Err(Error::Parse("--jobs must be positive".into()));
        }
        Ok(RunConfig {
            mode: cli.mode,
            precision,
            max_d: cli.max_d,
            u: cli.u.clone(),
            v: cli.v.clone(),
            jobs: cli.jobs,
        })
    }

    fn limit<F: Field>(&self) -> usize {
        self.max_d.unwrap_or(if F::EXACT { 6 } else { 10 })
    }

    fn options<F: Field>(&self, ctx: &F::Ctx) -> Result<BuildOptions<F>> {
        let mut o = BuildOptions::new(ctx);
        o.max_d = self.limit::<F>();
        o.precision = self.precision;
        if let Some(u) = &self.u {
            o.u = F::parse(u, ctx).map_err(input_error)?;
        }
        if let Some(v) = &self.v {
            o.v = F::parse(v, ctx).map_err(input_error)?;
        }
        Ok(o)
    }
}

fn input_error(e: Error) -> Error {
    match e {
        Error::Parse(_) => e,
        other => Error::Parse(other.to_string()),
    }
}

/// Parses arguments, reads the input, dispatches and renders the result.
/// Exit codes: 0 success, 1 mathematical refusal, 2 input or format error.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let input = read_input(input_path(&cli.command), stdin)?;
        dispatch(&cli.command, &input, &cfg)
    });
    let (code, value, stderr) = match result {
        Ok(v) => (0, v, String::new()),
        Err(e) => {
            let code = if e.is_refusal() { 1 } else { 2 };
            (code, error_json(&e), format!("qracah-td: {e}\n"))
        }
    };
    let text = serde_json::to_string_pretty(&value).expect("serializable") + "\n";
    match &cli.output {
        Some(path) => match std::fs::write(path, &text) {
            Ok(()) => Outcome { code, stdout: String::new(), stderr },
            Err(e) => Outcome {
                code: 2,
                stdout: String::new(),
                stderr: format!("qracah-td: cannot write {}: {e}\n", path.display()),
            },
        },
        None => Outcome { code, stdout: text, stderr },
    }
}

fn input_path(c: &Command) -> Option<&PathBuf> {
    match c {
        Command::Construct { input }
        | Command::Verify { input }
        | Command::Drinfeld { input }
        | Command::Relations { input }
        | Command::Shape { input }
        | Command::Roundtrip { input } => input.as_ref(),
    }
}

fn read_input(path: Option<&PathBuf>, stdin: &mut dyn Read) -> Result<Value> {
    let text = match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| Error::Parse(format!("cannot read {}: {e}", p.display())))?
        }
        _ => {
            let mut s = String::new();
            stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("cannot read standard input: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))
}

/// Runs one command on parsed input.
pub fn dispatch(command: &Command, input: &Value, cfg: &RunConfig) -> Result<Value> {
    let cplx = cfg.precision;
    match (command, cfg.mode) {
        (Command::Construct { .. }, Mode::Exact) => {
            with_fallback(|| construct::<RBig>(input, &(), cfg), || construct::<BigComplex>(input, &cplx, cfg))
        }
        (Command::Construct { .. }, Mode::Complex) => construct::<BigComplex>(input, &cplx, cfg),
        (Command::Roundtrip { .. }, Mode::Exact) => roundtrip_all(input, cfg, true),
        (Command::Roundtrip { .. }, Mode::Complex) => roundtrip_all(input, cfg, false),
        (Command::Verify { .. }, Mode::Exact) => verify::<RBig>(input, &(), cfg),
        (Command::Verify { .. }, Mode::Complex) => verify::<BigComplex>(input, &cplx, cfg),
        (Command::Drinfeld { .. }, Mode::Exact) => drinfeld::<RBig>(input, &(), cfg),
        (Command::Drinfeld { .. }, Mode::Complex) => drinfeld::<BigComplex>(input, &cplx, cfg),
        (Command::Relations { .. }, Mode::Exact) => relations::<RBig>(input, &(), cfg),
        (Command::Relations { .. }, Mode::Complex) => relations::<BigComplex>(input, &cplx, cfg),
        (Command::Shape { .. }, Mode::Exact) => shape::<RBig>(input, &()),
        (Command::Shape { .. }, Mode::Complex) => shape::<BigComplex>(input, &cplx),
    }
}

/// Exact first; evaluation parameters outside the rationals move the run to the complex backend.
fn with_fallback(exact: impl FnOnce() -> Result<Value>, complex: impl FnOnce() -> Result<Value>) -> Result<Value> {
    match exact() {
        Err(Error::NotRational(_)) => complex(),
        other => other,
    }
}

fn backend_name<F: Field>() -> &'static str {
    if F::EXACT {
        "exact"
    } else {
        "complex"
    }
}

fn construct<F: Field>(input: &Value, ctx: &F::Ctx, cfg: &RunConfig) -> Result<Value> {
    let pa = parameter_array::<F>(input, ctx)?;
    let (r, trace) = construct_realization_traced(&pa, &cfg.options(ctx)?)?;
    let mut out = realization_json(&r);
    out["backend"] = json!(backend_name::<F>());
    out["alphas"] = json!(trace.alphas.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    out["certificate"] = json!({
        "condition_ii": trace.condition.to_json(),
        "module_dim": trace.module_dim,
        "generated_dim": trace.generated_dim,
        "maximal_submodule_dim": trace.maximal_dim,
        "irreducibility": trace.certificate,
    });
    Ok(out)
}

fn roundtrip_one<F: Field>(input: &Value, ctx: &F::Ctx, cfg: &RunConfig) -> Result<Value> {
    let pa = parameter_array::<F>(input, ctx)?;
    let (r, _) = construct_realization_traced(&pa, &cfg.options(ctx)?)?;
    let back = parameter_array_of(&r)?;
    Ok(json!({
        "equal": back.same_array(&pa),
        "backend": backend_name::<F>(),
        "recovered": parameter_array_json(&back),
        "shape": r.shape,
    }))
}

fn roundtrip_any(input: &Value, cfg: &RunConfig, exact: bool) -> Result<Value> {
    let cplx = cfg.precision;
    if exact {
        with_fallback(|| roundtrip_one::<RBig>(input, &(), cfg), || roundtrip_one::<BigComplex>(input, &cplx, cfg))
    } else {
        roundtrip_one::<BigComplex>(input, &cplx, cfg)
    }
}

fn roundtrip_all(input: &Value, cfg: &RunConfig, exact: bool) -> Result<Value> {
    let Some(items) = input.as_array() else {
        return roundtrip_any(input, cfg, exact);
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Parse(format!("cannot start {} workers: {e}", cfg.jobs)))?;
    let results: Vec<Value> = pool.install(|| {
        items.par_iter().map(|item| roundtrip_any(item, cfg, exact).unwrap_or_else(|e| error_json(&e))).collect()
    });
    let all_equal = results.iter().all(|r| r["equal"] == json!(true));
    Ok(json!({"all_equal": all_equal, "results": results}))
}

fn verify<F: Field>(input: &Value, ctx: &F::Ctx, cfg: &RunConfig) -> Result<Value> {
    let (a, a_star, spectra) = if input.get("E").is_some() {
        let r = realization::<F>(input, ctx)?;
        (r.a, r.a_star, Some((r.thetas, r.theta_stars)))
    } else {
        let a = matrix::<F>(input.get("A").ok_or_else(|| Error::Parse("missing field \"A\"".into()))?, ctx)?;
        let a_star =
            matrix::<F>(input.get("Astar").ok_or_else(|| Error::Parse("missing field \"Astar\"".into()))?, ctx)?;
        let spectra = match (input.get("thetas"), input.get("theta_stars")) {
            (Some(t), Some(s)) => Some((scalars::<F>(t, ctx)?, scalars::<F>(s, ctx)?)),
            _ => None,
        };
        (a, a_star, spectra)
    };
    if a.rows() != a.cols() || a_star.rows() != a_star.cols() || a.rows() != a_star.rows() {
        return Err(Error::DimensionMismatch("A and A* must be square of the same size".into()));
    }
    let rep = verify_td_axioms(&a, &a_star, spectra.as_ref().map(|(x, y)| (&x[..], &y[..])), &cfg.precision);
    let irr = match &rep.irreducibility {
        Irreducibility::Irreducible { dual, index, certificate } => {
            json!({"verdict": "irreducible", "dual": dual, "index": index, "certificate": certificate})
        }
        Irreducibility::Reducible { witness } => json!({
            "verdict": "reducible",
            "witness": witness.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>(),
        }),
        Irreducibility::Undetermined => json!({"verdict": "undetermined"}),
    };
    Ok(json!({
        "td_pair": rep.is_td_pair(),
        "report": report_json(&rep.report),
        "eigenvalues": rep.eigenvalues.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "dual_eigenvalues": rep.dual_eigenvalues.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "orderings": rep.orderings,
        "dual_orderings": rep.dual_orderings,
        "irreducibility": irr,
        "arrays": rep.arrays.iter().map(parameter_array_json).collect::<Vec<_>>(),
    }))
}

fn load_module<F: Field>(
    input: &Value,
    ctx: &F::Ctx,
    cfg: &RunConfig,
) -> Result<(ModuleDescriptor<F>, StandardModule<F>)> {
    let mut desc = module_descriptor::<F>(input, ctx)?;
    let limit = cfg.limit::<F>();
    if desc.alphas.len() > limit {
        return Err(Error::DiameterLimit { d: desc.alphas.len(), limit });
    }
    if let Some(u) = &cfg.u {
        desc.u = F::parse(u, ctx).map_err(input_error)?;
    }
    if let Some(v) = &cfg.v {
        desc.v = F::parse(v, ctx).map_err(input_error)?;
    }
    let coeffs = rl_coefficients(&desc.params, &desc.u, &desc.v)?;
    let m = standard_module(&desc.alphas, &desc.params.q)?.with_rl(&coeffs);
    Ok((desc, m))
}

fn drinfeld<F: Field>(input: &Value, ctx: &F::Ctx, cfg: &RunConfig) -> Result<Value> {
    let (desc, m) = load_module::<F>(input, ctx, cfg)?;
    let z = split_sequence(&m)?;
    let sigmas = normalized_split(&z, &desc.params.q)?;
    let p = drinfeld_polynomial(&m)?;
    let strs = |xs: &[F]| xs.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    Ok(json!({"zetas": strs(z.zetas()), "sigmas": strs(&sigmas), "P": p.to_strings()}))
}

fn relations<F: Field>(input: &Value, ctx: &F::Ctx, cfg: &RunConfig) -> Result<Value> {
    let (desc, m) = load_module::<F>(input, ctx, cfg)?;
    let uq = verify_uq_relations(&m);
    let rl = verify_rl_properties(&m);
    let (a, a_star) = build_a_astar(&m, &desc.params)?;
    let td = verify_tridiagonal_relations(&a, &a_star, &derived_constants(&desc.params)?);
    let structure = verify_module_structure(&m, &a, &a_star, &desc.params);
    let passed = [&uq, &rl, &td, &structure].iter().all(|r| r.passed());
    Ok(json!({
        "passed": passed,
        "uq_relations": report_json(&uq),
        "rl_properties": report_json(&rl),
        "tridiagonal_relations": report_json(&td),
        "module_structure": report_json(&structure),
    }))
}

fn shape<F: Field>(input: &Value, ctx: &F::Ctx) -> Result<Value> {
    let r = realization::<F>(input, ctx)?;
    let v = shape_check(&r);
    Ok(json!({"shape": v.shape, "passed": v.report.passed(), "report": report_json(&v.report)}))
}
