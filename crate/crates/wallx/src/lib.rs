//! Command-line harness around `wallx-core`: argument handling, a thread pool,
//! report emission and an on-disk cache.

pub mod args;
pub mod cache;
pub mod report;

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::Parser;
use rayon::prelude::*;
use serde_json::{json, Value};

use wallx_core::exec::Executor;
use wallx_core::geom::{fiber_minus, fiber_plus, fixed_point_from_label, FixedPoint, Label, Support, I0};
use wallx_core::quiver::{classify_theta, parse_theta, walls_up_to, Classification, WallLabel};
use wallx_core::ratfun::{Backend, RatFun};
use wallx_core::series::{self, PrimaryChamber, ProductKind, SignOverrides, Var};

use args::{BackendArg, ChamberArg, Cli, Command, Common, SeriesKind};
use cache::{Cache, Lookup};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] wallx_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(wallx_core::Error::Parse(_)) => 2,
            CliError::Core(_) | CliError::Io(_) => 3,
        }
    }
}

/// Order-preserving parallel map on a dedicated pool.
pub struct RayonExec {
    pool: rayon::ThreadPool,
}

impl RayonExec {
    pub fn new(threads: usize) -> Result<Self, CliError> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(RayonExec { pool })
    }
}

impl Executor for RayonExec {
    fn map<T, R, F>(&self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_wall(s: &str) -> Result<WallLabel, CliError> {
    s.parse().map_err(|e: wallx_core::Error| usage(e.to_string()))
}

fn parse_i0(s: &str) -> Result<I0, CliError> {
    s.parse().map_err(|e: wallx_core::Error| usage(e.to_string()))
}

fn parse_overrides(items: &[String]) -> Result<SignOverrides, CliError> {
    let mut out = SignOverrides::new();
    for it in items {
        let (label, v) = it
            .rsplit_once('=')
            .ok_or_else(|| usage(format!("sign override '{}' needs LABEL=+1 or LABEL=-1", it)))?;
        let v = match v {
            "+1" | "1" => 1,
            "-1" => -1,
            _ => return Err(usage(format!("sign override value '{}' must be +1 or -1", v))),
        };
        let l: Label = label.parse().map_err(|e: wallx_core::Error| usage(e.to_string()))?;
        out.insert(l.to_string(), v);
    }
    Ok(out)
}

fn backend(common: &Common, degree: u32) -> Backend {
    let eval = match common.backend {
        Some(BackendArg::Symbolic) => false,
        Some(BackendArg::Eval) => true,
        None => degree > 4,
    };
    if eval {
        Backend::Eval {
            points: common.points,
            seed: common.seed,
        }
    } else {
        Backend::Symbolic
    }
}

fn backend_params(b: Backend) -> Value {
    match b {
        Backend::Symbolic => json!({ "backend": "symbolic" }),
        Backend::Eval { points, .. } => json!({ "backend": "eval", "points": points }),
    }
}

fn merge(mut a: Value, b: Value) -> Value {
    if let (Value::Object(x), Value::Object(y)) = (&mut a, b) {
        for (k, v) in y {
            x.insert(k, v);
        }
    }
    a
}

fn fixed_point_json(p: &FixedPoint, ov: Option<i64>) -> Result<Value, CliError> {
    let contribution = p.contribution_with(ov)?.to_string();
    Ok(json!({
        "label": p.label.to_string(),
        "support": match p.support { Support::OnZ => "on_Z", Support::Thickened => "thickened" },
        "chi": p.chi,
        "deg": p.deg,
        "sign_extra": p.sign_extra,
        "sqrt": p.sqrt_class().to_string(),
        "taut": p.taut_class().to_string(),
        "contribution": contribution,
    }))
}

fn classification_json(c: &Classification) -> Value {
    let kind = match c {
        Classification::OnWall(_) => "on_wall",
        Classification::Chamber(_) => "chamber",
        Classification::Origin => "origin",
        Classification::Inconclusive(_) => "inconclusive",
    };
    let mut v = json!({ "kind": kind, "classification": c.to_string() });
    if let Classification::OnWall(w) = c {
        v["wall"] = json!(w.to_string());
    }
    v
}

/// Validated parameters of one invocation; they key the cache.
struct Job {
    name: &'static str,
    params: Value,
    cacheable: bool,
}

fn series_name(kind: SeriesKind) -> &'static str {
    match kind {
        SeriesKind::Pt => "pt",
        SeriesKind::Nc => "nc",
        SeriesKind::Macmahon => "macmahon",
        SeriesKind::Primary => "primary",
        SeriesKind::Binom => "binom",
        SeriesKind::Example => "example",
    }
}

fn chamber_of(c: ChamberArg) -> (&'static str, PrimaryChamber) {
    match c {
        ChamberArg::I => ("I", PrimaryChamber::I),
        ChamberArg::IiIii => ("II_III", PrimaryChamber::IIIII),
        ChamberArg::Iv => ("IV", PrimaryChamber::IV),
        ChamberArg::Other => ("other", PrimaryChamber::Other),
    }
}

fn plan(cmd: &Command, common: &Common) -> Result<Job, CliError> {
    let job = |name, params, cacheable| Job { name, params, cacheable };
    Ok(match cmd {
        Command::Walls { kmax } => job("walls", json!({ "kmax": kmax }), false),
        Command::Classify { theta, kmax } => {
            let th = parse_theta(theta).map_err(|e| usage(e.to_string()))?;
            job("classify", json!({ "theta": format!("{},{}", th.0, th.1), "kmax": kmax }), false)
        }
        Command::Js { k, dmax } => {
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            let b = backend(common, *dmax);
            job("js", merge(json!({ "k": k, "dmax": dmax }), backend_params(b)), true)
        }
        Command::Wallcross { wall, i0, tmax, sign_override } => {
            let w = parse_wall(wall)?;
            let i0 = parse_i0(i0)?;
            let ov = parse_overrides(sign_override)?;
            let b = backend(common, *tmax);
            let ovj: BTreeMap<&String, i64> = ov.iter().map(|(k, v)| (k, *v)).collect();
            job(
                "wallcross",
                merge(
                    json!({ "wall": w.to_string(), "i0": i0.to_string(), "tmax": tmax, "sign_override": ovj }),
                    backend_params(b),
                ),
                true,
            )
        }
        Command::Dimred { k, dmax } => {
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            job("dimred", json!({ "k": k, "dmax": dmax, "backend": "symbolic" }), true)
        }
        Command::InsertionFree { k, dmax } => {
            if *k == 0 {
                return Err(usage("--k must be at least 1"));
            }
            job("insertion-free", json!({ "k": k, "dmax": dmax, "backend": "symbolic" }), true)
        }
        Command::Series { kind, tmax, chamber, gamma_e, k } => {
            let name = series_name(*kind);
            let params = match kind {
                SeriesKind::Example => json!({ "kind": name, "tmax": tmax, "backend": "symbolic" }),
                SeriesKind::Binom => json!({ "kind": name, "tmax": tmax, "k": k }),
                SeriesKind::Primary => {
                    json!({ "kind": name, "qmax": tmax, "chamber": chamber_of(*chamber).0, "gamma_e": gamma_e })
                }
                _ => json!({ "kind": name, "qmax": tmax }),
            };
            job("series", params, true)
        }
        Command::Contribution { label, wall, i0, d, side } => match (label, wall) {
            (Some(l), _) => {
                let l: Label = l.parse().map_err(|e: wallx_core::Error| usage(e.to_string()))?;
                job("contribution", json!({ "label": l.to_string() }), false)
            }
            (None, Some(w)) => {
                let w = parse_wall(w)?;
                let i0 = parse_i0(i0)?;
                if side != "plus" && side != "minus" {
                    return Err(usage(format!("side must be plus or minus, got '{}'", side)));
                }
                job(
                    "contribution",
                    json!({ "wall": w.to_string(), "i0": i0.to_string(), "d": d, "side": side }),
                    false,
                )
            }
            (None, None) => return Err(usage("contribution needs --label or --wall")),
        },
        Command::Signsearch { wall, i0, d } => {
            let w = parse_wall(wall)?;
            let i0 = parse_i0(i0)?;
            job("signsearch", json!({ "wall": w.to_string(), "i0": i0.to_string(), "d": d }), false)
        }
    })
}

fn compute(cmd: &Command, job: &Job, common: &Common, exec: &RayonExec) -> Result<Value, CliError> {
    let seed = common.seed;
    let params = job.params.clone();
    let check = |rep: series::CheckReport| report::check_report(&rep, params.clone(), seed);
    Ok(match cmd {
        Command::Walls { kmax } => {
            let walls: Vec<Value> = walls_up_to(*kmax)
                .iter()
                .map(|w| {
                    let (p, q) = w.line();
                    json!({
                        "label": w.to_string(),
                        "line": format!("{}*th0 + {}*th1 = 0", p, q),
                        "side": if w.minus_side() { "th0 < th1" } else { "th0 > th1" },
                    })
                })
                .collect();
            json!({ "command": "walls", "params": params, "count": walls.len(), "walls": walls })
        }
        Command::Classify { theta, kmax } => {
            let th = parse_theta(theta).map_err(|e| usage(e.to_string()))?;
            let c = classify_theta(&th, *kmax);
            merge(json!({ "command": "classify", "params": params }), classification_json(&c))
        }
        Command::Js { k, dmax } => check(series::check_js(exec, *k, *dmax, backend(common, *dmax))?),
        Command::Wallcross { wall, i0, tmax, sign_override } => {
            let ov = parse_overrides(sign_override)?;
            check(series::check_wallcross(
                exec,
                &parse_wall(wall)?,
                parse_i0(i0)?,
                *tmax,
                backend(common, *tmax),
                &ov,
            )?)
        }
        Command::Dimred { k, dmax } => check(series::check_dimred(exec, *k, *dmax)?),
        Command::InsertionFree { k, dmax } => check(series::check_insertion_free(exec, *k, *dmax)?),
        Command::Series { kind, tmax, chamber, gamma_e, k } => match kind {
            SeriesKind::Example => check(series::check_example(exec, *tmax)?),
            SeriesKind::Binom => {
                let s = series::binom_series(&series::m_over_lam3(*k), Var::T, *tmax);
                let rows: Vec<Value> = s
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(d, c)| json!({ "degree": format!("t^{}", d), "expr": c.to_string() }))
                    .collect();
                json!({ "command": "series", "params": params, "coefficients": rows })
            }
            _ => {
                let s = match kind {
                    SeriesKind::Pt => series::product_series(ProductKind::Pt, *tmax),
                    SeriesKind::Nc => series::product_series(ProductKind::Nc, *tmax),
                    SeriesKind::Macmahon => series::product_series(ProductKind::MacMahon, *tmax),
                    _ => series::primary_series(chamber_of(*chamber).1, *gamma_e, *tmax),
                };
                let rows: Vec<Value> = s
                    .terms()
                    .iter()
                    .map(|((q, t), c)| {
                        json!({ "degree": format!("q^{} t^{}", q, t), "q": q, "t": t, "expr": c.to_string() })
                    })
                    .collect();
                json!({ "command": "series", "params": params, "coefficients": rows })
            }
        },
        Command::Contribution { label, wall, i0, d, side } => {
            let pts = match (label, wall) {
                (Some(l), _) => {
                    let l: Label = l.parse().map_err(|e: wallx_core::Error| usage(e.to_string()))?;
                    vec![fixed_point_from_label(&l)?]
                }
                (_, Some(w)) => {
                    let (w, i0) = (parse_wall(w)?, parse_i0(i0)?);
                    if side == "plus" {
                        fiber_plus(&w, i0, *d)?
                    } else {
                        fiber_minus(&w, i0, *d)?
                    }
                }
                (None, None) => unreachable!("rejected by plan"),
            };
            let rows: Vec<Result<Value, CliError>> = exec.map(&pts, |p| fixed_point_json(p, None));
            let rows = rows.into_iter().collect::<Result<Vec<_>, _>>()?;
            json!({ "command": "contribution", "params": params, "count": rows.len(), "points": rows })
        }
        Command::Signsearch { wall, i0, d } => {
            let (w, i0) = (parse_wall(wall)?, parse_i0(i0)?);
            let target = signsearch_target(exec, &w, i0, *d)?;
            let pts = fiber_plus(&w, i0, *d)?;
            let signs = series::sign_search(&pts, &target)?;
            json!({
                "command": "signsearch",
                "params": params,
                "target": target.to_string(),
                "labels": pts.iter().map(|p| p.label.to_string()).collect::<Vec<_>>(),
                "signs": signs,
                "pass": signs.is_some(),
            })
        }
    })
}

/// Degree-`d` coefficient of `(1 - t)^(k m/lam3) * sum_j t^j (minus-side sum)_j`.
fn signsearch_target(exec: &RayonExec, w: &WallLabel, i0: I0, d: u32) -> Result<RatFun, CliError> {
    let rhs = series::binom_series(&series::m_over_lam3(w.k as i64), Var::T, d);
    let mut target = RatFun::zero();
    for j in 0..=d {
        let pts = fiber_minus(w, i0, j)?;
        let sums: Vec<_> = exec.map(&pts, |p| p.contribution());
        let mut m = RatFun::zero();
        for s in sums {
            m = m.add(&s?);
        }
        target = target.add(&rhs.coeff(d - j).mul(&m));
    }
    Ok(target)
}

fn to_bytes(doc: &Value) -> Vec<u8> {
    let mut b = serde_json::to_vec_pretty(doc).expect("reports serialize");
    b.push(b'\n');
    b
}

fn write_csv(path: &std::path::Path, doc: &Value) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(|e| CliError::Io(e.into()))?;
    w.write_record(["degree", "expression"]).map_err(|e| CliError::Io(e.into()))?;
    for (d, e) in report::csv_rows(doc) {
        w.write_record([d, e]).map_err(|e| CliError::Io(e.into()))?;
    }
    w.flush()?;
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let common = &cli.common;
    let job = plan(&cli.command, common)?;
    let exec = RayonExec::new(common.threads)?;
    let start = Instant::now();
    let mut doc = None;
    if job.cacheable && !common.no_cache && !common.timing {
        let cache = Cache::from_env();
        let key = Cache::key(job.name, &json!({ "params": job.params, "seed": common.seed }));
        match cache.get(&key) {
            Lookup::Hit(cached) => {
                if common.verify_cache {
                    let fresh = to_bytes(&compute(&cli.command, &job, common, &exec)?);
                    if fresh != cached {
                        writeln!(err, "error: cache entry {} differs from recomputation", key)?;
                        return Ok(3);
                    }
                }
                doc = serde_json::from_slice(&cached).ok();
            }
            Lookup::Miss => {}
            Lookup::Corrupt(msg) => writeln!(err, "warning: {}; recomputing", msg)?,
        }
        if doc.is_none() {
            let fresh = compute(&cli.command, &job, common, &exec)?;
            if let Err(e) = cache.put(&key, &to_bytes(&fresh)) {
                writeln!(err, "warning: cache write failed: {}", e)?;
            }
            doc = Some(fresh);
        }
    }
    let mut doc = match doc {
        Some(d) => d,
        None => compute(&cli.command, &job, common, &exec)?,
    };
    if common.timing {
        if let Value::Object(m) = &mut doc {
            m.insert("elapsed_ms".into(), json!(start.elapsed().as_millis() as u64));
        }
    }
    if let Some(p) = &common.json {
        std::fs::write(p, to_bytes(&doc))?;
    }
    if let Some(p) = &common.csv {
        write_csv(p, &doc)?;
    }
    out.write_all(report::human(&doc).as_bytes())?;
    Ok(match doc.get("pass").and_then(Value::as_bool) {
        Some(false) => 1,
        _ => 0,
    })
}

/// Runs the CLI on `argv` and returns the process exit code.
pub fn run<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e);
            e.exit_code()
        }
    }
}
