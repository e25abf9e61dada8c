//! `pencil`: exact moments, limits, Monte Carlo checks and content-ratio sweeps.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use pencil_core::content_ratio::{max_ratio_for_split, max_ratio_search, verify_bound, verify_chain_bound};
use pencil_core::haar_mc::{estimate_mixed_trace_pair, estimate_moment_chunked, DEFAULT_CHUNK};
use pencil_core::moments::{
    auto_identity_truncation, conic_constants, conic_log_moment, diagonal_limit, exact_identity_moment_with,
    exact_scalar_moment, matrix_limit, outer_spectral_radius, scalar_limit, scalar_moment_truncated,
    IdentityMomentOptions, FULL_SUM_MAX_D,
};
use pencil_core::numbers::{parse_complex, round_sig};
use pencil_core::{Error, MatrixTuple, MultiIndex, Partition, Permutation, ScalarTuple};

const SIG_DIGITS: usize = 12;

#[derive(Parser, Serialize)]
#[command(name = "pencil", version, about = "Moments of determinants of random unitary pencils")]
struct Cli {
    /// Worker threads; affects scheduling only, never results.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Serialize)]
#[serde(untagged)]
enum Command {
    /// Exact ∫ det(I + Σ x_j U_j)·conj det(I + Σ y_j U_j) at size d.
    ExactScalar(ExactScalarArgs),
    /// Exact ∫ |det(I_k⊗I + Σ x_j I_k⊗U_j)|² at size d.
    ExactMoment(ExactMomentArgs),
    /// Large-d limit for scalar tuples or matrix tuples from JSON files.
    Limit(LimitArgs),
    /// Large-d limit for tuples of diagonal matrices.
    DiagonalLimit(DiagonalLimitArgs),
    /// Haar Monte Carlo estimate of a moment.
    Mc(McArgs),
    /// Haar Monte Carlo estimate of ∫ p_{σ,α}(U)·conj p_{τ,β}(U).
    Orthogonality(OrthogonalityArgs),
    /// Check every content ratio (or split chain) against its bound.
    VerifyBounds(VerifyBoundsArgs),
    /// Exhaustive maximum content ratio for one partition.
    MaxRatio(MaxRatioArgs),
    /// Conic log-moments over a sweep of d against the predicted constants.
    Conic(ConicArgs),
}

#[derive(Args, Serialize)]
struct ExactScalarArgs {
    #[arg(long)]
    d: usize,
    /// Expected number of coordinates; checked against --x.
    #[arg(long)]
    g: Option<usize>,
    /// Comma-separated `re` or `re+imi` tokens.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Defaults to --x.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    /// Keep inputs as exact rationals and report the exact value.
    #[arg(long)]
    exact: bool,
    /// Sum only degrees n ≤ n_max and report a tail bound.
    #[arg(long)]
    n_max: Option<usize>,
}

#[derive(Args, Serialize)]
struct ExactMomentArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    g: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long)]
    exact: bool,
    /// Required implicitly for d > 12; chosen from --tol when absent.
    #[arg(long)]
    n_max: Option<usize>,
    /// Target for the certified tail when n_max is chosen automatically.
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1.0)]
    tail_constant: f64,
}

#[derive(Args, Serialize)]
struct LimitArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrices")]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "matrices")]
    y: Option<String>,
    /// JSON file with {"k","g","matrices"}.
    #[arg(long)]
    matrices: Option<PathBuf>,
    /// Second tuple; defaults to --matrices.
    #[arg(long, requires = "matrices")]
    matrices_y: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct DiagonalLimitArgs {
    /// Diagonal rows separated by `;`, coordinates by `,`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Defaults to --x.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
}

#[derive(Args, Serialize)]
struct McArgs {
    #[arg(long)]
    d: usize,
    /// Coefficients are x_j·I_k.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long)]
    g: Option<usize>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "matrices")]
    x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y: Option<String>,
    #[arg(long, conflicts_with_all = ["x", "y"])]
    matrices: Option<PathBuf>,
    #[arg(long, requires = "matrices")]
    matrices_y: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_CHUNK)]
    chunk: usize,
}

#[derive(Args, Serialize)]
struct OrthogonalityArgs {
    /// Cycle notation, e.g. "(1 2)(3)".
    #[arg(long)]
    sigma: String,
    #[arg(long)]
    tau: String,
    /// Comma-separated block sizes.
    #[arg(long)]
    alpha: String,
    /// Block sizes for τ; defaults to --alpha.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long, default_value_t = 30)]
    d: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
}

#[derive(Args, Serialize)]
struct VerifyBoundsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    /// Check split chains with this many blocks instead of two-part splits.
    #[arg(long)]
    g: Option<usize>,
    #[arg(long)]
    csv: bool,
}

#[derive(Args, Serialize)]
struct MaxRatioArgs {
    /// Comma-separated parts.
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    d: usize,
    /// Restrict to |μ| = a.
    #[arg(long)]
    a: Option<usize>,
}

#[derive(Args, Serialize)]
struct ConicArgs {
    #[arg(long, allow_hyphen_values = true, default_value = "1")]
    x0: String,
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Comma-separated sizes.
    #[arg(long, default_value = "5,10,20,50,100")]
    d_values: String,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long)]
    csv: bool,
}

enum Output {
    Json(Value),
    Csv(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(3),
            };
        }
    };
    let start = Instant::now();
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| run(&cli.command)),
            Err(e) => Err(Error::Resource(e.to_string())),
        },
        None => run(&cli.command),
    };
    match result {
        Ok(Output::Csv(s)) => {
            print!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Output::Json(output)) => {
            let report = json!({
                "command": command_name(&cli.command),
                "inputs": serde_json::to_value(&cli).expect("arguments serialize"),
                "output": round_floats(output),
                "elapsed_ms": start.elapsed().as_millis() as u64,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Parse(_) => 3,
                _ => 2,
            })
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::ExactScalar(_) => "exact-scalar",
        Command::ExactMoment(_) => "exact-moment",
        Command::Limit(_) => "limit",
        Command::DiagonalLimit(_) => "diagonal-limit",
        Command::Mc(_) => "mc",
        Command::Orthogonality(_) => "orthogonality",
        Command::VerifyBounds(_) => "verify-bounds",
        Command::MaxRatio(_) => "max-ratio",
        Command::Conic(_) => "conic",
    }
}

fn round_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            json!(round_sig(n.as_f64().expect("f64"), SIG_DIGITS))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_floats).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_floats(v))).collect()),
        other => other,
    }
}

fn to_json<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("payload serializes")
}

fn complex_json(z: Complex64) -> Value {
    json!({ "float": z.re, "imag": z.im })
}

fn scalars(s: &str, exact: bool, g: Option<usize>) -> pencil_core::Result<ScalarTuple> {
    let t = ScalarTuple::parse(s)?;
    let t = if exact { t } else { ScalarTuple::new(t.values().to_vec())? };
    if let Some(g) = g {
        if t.g() != g {
            return Err(Error::domain(format!("--g {g} but {s:?} has {} coordinates", t.g())));
        }
    }
    Ok(t)
}

fn read_tuple(path: &Path) -> pencil_core::Result<MatrixTuple> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::parse(format!("{}: {e}", path.display())))
}

fn parse_list(s: &str, what: &str) -> pencil_core::Result<Vec<usize>> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| Error::parse(format!("bad {what} entry {t:?}"))))
        .collect()
}

fn run(cmd: &Command) -> pencil_core::Result<Output> {
    match cmd {
        Command::ExactScalar(a) => {
            let x = scalars(&a.x, a.exact, a.g)?;
            let y = scalars(a.y.as_deref().unwrap_or(&a.x), a.exact, Some(x.g()))?;
            let v = match a.n_max {
                Some(n) => scalar_moment_truncated(a.d, &x, &y, n)?,
                None => exact_scalar_moment(a.d, &x, &y)?,
            };
            Ok(Output::Json(to_json(&v)))
        }
        Command::ExactMoment(a) => {
            let x = scalars(&a.x, a.exact, a.g)?;
            let n_max = match a.n_max {
                Some(n) => Some(n),
                None if a.d > FULL_SUM_MAX_D => {
                    if x.norm() >= 1.0 {
                        return Err(Error::domain(format!("d = {} needs ||x|| < 1 for truncation", a.d)));
                    }
                    Some(auto_identity_truncation(a.d, a.k, x.norm(), a.tol, a.tail_constant))
                }
                None => None,
            };
            let v = exact_identity_moment_with(a.d, a.k, &x, IdentityMomentOptions { n_max, tail_constant: a.tail_constant })?;
            let mut out = to_json(&v);
            out["n_max"] = json!(n_max);
            Ok(Output::Json(out))
        }
        Command::Limit(a) => match (&a.matrices, &a.x) {
            (Some(path), _) => {
                let x = read_tuple(path)?;
                let y = match &a.matrices_y {
                    Some(p) => read_tuple(p)?,
                    None => x.clone(),
                };
                let lim = matrix_limit(&x, &y)?;
                let mut out = complex_json(lim.value);
                out["determinant"] = json!([lim.determinant.re, lim.determinant.im]);
                out["ill_conditioned"] = json!(lim.ill_conditioned);
                out["outer_radius_x"] = json!(outer_spectral_radius(&x)?);
                out["outer_radius_y"] = json!(outer_spectral_radius(&y)?);
                Ok(Output::Json(out))
            }
            (None, Some(xs)) => {
                let x = scalars(xs, false, None)?;
                let y = scalars(a.y.as_deref().unwrap_or(xs), false, Some(x.g()))?;
                Ok(Output::Json(complex_json(scalar_limit(&x, &y)?)))
            }
            (None, None) => Err(Error::parse("limit needs --x or --matrices")),
        },
        Command::DiagonalLimit(a) => {
            let rows = |s: &str| -> pencil_core::Result<Vec<ScalarTuple>> {
                s.split(';').map(|r| scalars(r, false, None)).collect()
            };
            let xs = rows(&a.x)?;
            let ys = match &a.y {
                Some(y) => rows(y)?,
                None => xs.clone(),
            };
            Ok(Output::Json(complex_json(diagonal_limit(&xs, &ys)?)))
        }
        Command::Mc(a) => {
            let (x, y) = match &a.matrices {
                Some(path) => {
                    let x = read_tuple(path)?;
                    let y = match &a.matrices_y {
                        Some(p) => read_tuple(p)?,
                        None => x.clone(),
                    };
                    (x, y)
                }
                None => {
                    let xs = a.x.as_deref().ok_or_else(|| Error::parse("mc needs --x or --matrices"))?;
                    let x = scalars(xs, false, a.g)?;
                    let y = scalars(a.y.as_deref().unwrap_or(xs), false, Some(x.g()))?;
                    (
                        MatrixTuple::scalar_multiples(x.values(), a.k)?,
                        MatrixTuple::scalar_multiples(y.values(), a.k)?,
                    )
                }
            };
            if let Some(g) = a.g {
                if x.g() != g {
                    return Err(Error::domain(format!("--g {g} but the tuple has {} matrices", x.g())));
                }
            }
            let e = estimate_moment_chunked(&x, &y, a.d, a.samples, a.seed, a.chunk)?;
            Ok(Output::Json(to_json(&e)))
        }
        Command::Orthogonality(a) => {
            let alpha = MultiIndex::new(parse_list(&a.alpha, "alpha")?);
            let beta = match &a.beta {
                Some(b) => MultiIndex::new(parse_list(b, "beta")?),
                None => alpha.clone(),
            };
            let sigma = Permutation::parse_cycles(&a.sigma, Some(alpha.weight()))?;
            let tau = Permutation::parse_cycles(&a.tau, Some(beta.weight()))?;
            let e = estimate_mixed_trace_pair(&sigma, &alpha, &tau, &beta, a.d, a.samples, a.seed)?;
            Ok(Output::Json(to_json(&e)))
        }
        Command::VerifyBounds(a) => match a.g {
            None => {
                let reports = verify_bound(a.n, a.k, a.d)?;
                if a.csv {
                    let mut s = String::from("lambda;mu;nu;d;ratio_num;ratio_den;bound;ok\n");
                    for r in &reports {
                        s.push_str(&format!(
                            "{};{};{};{};{};{};{};{}\n",
                            r.lambda,
                            r.mu,
                            r.nu,
                            r.d,
                            r.ratio.numer(),
                            r.ratio.denom(),
                            r.bound,
                            r.satisfies
                        ));
                    }
                    return Ok(Output::Csv(s));
                }
                let all_ok = reports.iter().all(|r| r.satisfies);
                Ok(Output::Json(json!({ "count": reports.len(), "all_ok": all_ok, "reports": reports })))
            }
            Some(g) => {
                let reports = verify_chain_bound(a.n, a.k, a.d, g)?;
                if a.csv {
                    let mut s = String::from("lambda;alpha;mus;d;ratio_num;ratio_den;bound;ok\n");
                    for r in &reports {
                        let mus: Vec<String> = r.mus.iter().map(|m| m.to_string()).collect();
                        s.push_str(&format!(
                            "{};{:?};{};{};{};{};{};{}\n",
                            r.lambda,
                            r.alpha.entries(),
                            mus.join(" "),
                            r.d,
                            r.ratio.numer(),
                            r.ratio.denom(),
                            r.bound,
                            r.satisfies
                        ));
                    }
                    return Ok(Output::Csv(s));
                }
                let all_ok = reports.iter().all(|r| r.satisfies);
                Ok(Output::Json(json!({ "count": reports.len(), "all_ok": all_ok, "reports": reports })))
            }
        },
        Command::MaxRatio(a) => {
            let lambda = Partition::new(parse_list(&a.lambda, "lambda")?)
                .map_err(|e| Error::parse(e.to_string()))?;
            let m = match a.a {
                Some(size) => max_ratio_for_split(&lambda, size, a.d)?,
                None => max_ratio_search(&lambda, a.d)?,
            };
            Ok(Output::Json(to_json(&m)))
        }
        Command::Conic(a) => {
            let x0 = pencil_core::numbers::gauss_to_c64(&parse_complex(&a.x0)?);
            let x = scalars(&a.x, false, None)?;
            let consts = conic_constants(x0, &x, a.k)?;
            let kk = (a.k * a.k) as f64;
            let mut rows = Vec::new();
            for d in parse_list(&a.d_values, "d")? {
                let (log_m, tail) = conic_log_moment(d, a.k, x0, &x, a.tol)?;
                let excess = log_m - d as f64 * a.k as f64 * consts.c0;
                rows.push(json!({
                    "d": d,
                    "log_moment": log_m,
                    "excess": excess,
                    "predicted": kk * consts.c1,
                    "error": excess - kk * consts.c1,
                    "trunc_bound": tail,
                }));
            }
            if a.csv {
                let mut s = String::from("d;log_moment;excess;predicted;error\n");
                for r in &rows {
                    s.push_str(&format!(
                        "{};{};{};{};{}\n",
                        r["d"],
                        fmt(r["log_moment"].as_f64()),
                        fmt(r["excess"].as_f64()),
                        fmt(r["predicted"].as_f64()),
                        fmt(r["error"].as_f64())
                    ));
                }
                return Ok(Output::Csv(s));
            }
            Ok(Output::Json(json!({ "constants": consts, "rows": rows })))
        }
    }
}

fn fmt(x: Option<f64>) -> String {
    x.map(|v| {
        let r = round_sig(v, SIG_DIGITS);
        if r != 0.0 && !(1e-4..1e15).contains(&r.abs()) {
            format!("{r:e}")
        } else {
            format!("{r}")
        }
    })
    .unwrap_or_default()
}
