//! Command-line interface.
//!
//! Exit codes: 0 success, 2 usage or input error, 3 numeric failure,
//! 4 tolerance breach.

use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::QaoaParams;
use crate::error::{QaoaError, Result};
use crate::optim::{self, OptimizerConfig, OptimumRecord};
use crate::xorsat::Method;
use crate::{finite_d, infinite_d, oracle, published, xorsat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_TOLERANCE: i32 = 4;

/// Oracle agreement tolerance.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// Agreement with the published four-decimal values.
pub const TABLE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(
    name = "qaoa-girth",
    version,
    about = "Exact depth-p QAOA performance on large-girth regular (hyper)graphs"
)]
pub struct Cli {
    /// Worker threads (0 or unset: all available cores).
    #[arg(long, global = true, env = "QAOA_GIRTH_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate ν at given parameters.
    Eval(EvalArgs),
    /// Optimize the angles at a single depth.
    Optimize(OptimizeArgs),
    /// Optimize depths 1..=p-max with warm starts.
    Sweep(SweepArgs),
    /// Compare the iteration with a statevector simulation of the tree.
    OracleCheck(OracleArgs),
    /// Plot-ready CSV from sweep records or the published angles.
    FigureData(FigureArgs),
    /// Reproduce the published optimal values at the published angles.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Naive,
    Fast,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("size").required(true).args(["branching_d", "infinite"]))]
pub struct EvalArgs {
    #[arg(long)]
    pub p: usize,
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    /// JSON file with `gamma` and `beta` (and optionally `p`, `q`).
    #[arg(long)]
    pub params: PathBuf,
    /// Branching factor D of the tree; the graph is (D+1)-regular.
    #[arg(long = "branching-D")]
    pub branching_d: Option<u64>,
    /// Evaluate the D → ∞ limit.
    #[arg(long)]
    pub infinite: bool,
    #[arg(long, value_enum, default_value_t = MethodArg::Fast)]
    pub method: MethodArg,
    /// Append the result as a CSV row.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OptimizerArgs {
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub multistarts: usize,
    /// CSV output; a JSON sidecar is written next to it.
    #[arg(long)]
    pub out: PathBuf,
    /// Params JSON used as an extra starting point.
    #[arg(long)]
    pub warm_start: Option<PathBuf>,
    /// Use central differences throughout.
    #[arg(long)]
    pub central: bool,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub p: u64,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub p_max: u64,
    #[command(flatten)]
    pub opt: OptimizerArgs,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2)]
    pub q: usize,
    #[arg(long = "branching-D")]
    pub branching_d: u64,
    #[arg(long)]
    pub p: usize,
    /// Params JSON; defaults to the published optimal angles at depth p.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub j_draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig2,
    Fig3,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["records", "published"]))]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub figure: Figure,
    /// Records written by `sweep` (JSON sidecar or CSV).
    #[arg(long)]
    pub records: Option<PathBuf>,
    /// Use the published optimal angles and values.
    #[arg(long)]
    pub published: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Largest depth of the optimal-value table.
    #[arg(long, default_value_t = 12)]
    pub p_max: usize,
    /// Evaluate at the extrapolated p = 18..20 angles instead (hours of work).
    #[arg(long)]
    pub lower_bounds: bool,
    /// List the evaluations without running them.
    #[arg(long)]
    pub dry_run: bool,
}

/// `D` in reports: an integer or `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branching {
    Finite(u64),
    Infinite,
}

impl Serialize for Branching {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Branching::Finite(d) => s.serialize_u64(*d),
            Branching::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Branching {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(n) => Ok(Branching::Finite(n)),
            Raw::S(s) if s == "inf" => Ok(Branching::Infinite),
            Raw::S(s) => Err(serde::de::Error::custom(format!("bad D {s:?}"))),
        }
    }
}

impl std::fmt::Display for Branching {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branching::Finite(d) => write!(f, "{d}"),
            Branching::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub p: usize,
    pub q: usize,
    #[serde(rename = "D")]
    pub d: Branching,
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
    pub nu: f64,
    pub cut_fraction_formula: String,
    pub wall_time_seconds: f64,
    pub threads: usize,
    pub code_version: String,
}

fn formula(q: usize) -> String {
    if q == 2 {
        "1/2 + nu/sqrt(D)".into()
    } else {
        "1/2 + nu*sqrt(q/(2D))".into()
    }
}

/// Format with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Command outcome besides hard errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Breach,
}

fn exit_code(err: &QaoaError) -> i32 {
    match err {
        QaoaError::ImaginaryResidual { .. }
        | QaoaError::NumericFailure(_)
        | QaoaError::NormDrift { .. }
        | QaoaError::EvaluationFailure(_)
        | QaoaError::UnplacedRead { .. } => EXIT_NUMERIC,
        _ => EXIT_USAGE,
    }
}

/// Parse `args` and run; returns the process exit code.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    match pool.install(|| dispatch(cli.command)) {
        Ok(Outcome::Pass) => EXIT_OK,
        Ok(Outcome::Breach) => EXIT_TOLERANCE,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Eval(a) => cmd_eval(&a),
        Command::Optimize(a) => cmd_optimize(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::OracleCheck(a) => cmd_oracle_check(&a),
        Command::FigureData(a) => cmd_figure_data(&a),
        Command::Table(a) => cmd_table(&a),
    }
}

/// Read params JSON, forcing arity `q`.
pub fn read_params(path: &Path, q: usize) -> Result<QaoaParams> {
    let text = std::fs::read_to_string(path)?;
    let params: QaoaParams = serde_json::from_str(&text)?;
    params.with_q(q)
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Route to the finite-D or infinite-D evaluator for `params.q`.
pub fn evaluate(params: &QaoaParams, d: Branching, method: Method) -> Result<f64> {
    match (d, params.q) {
        (Branching::Finite(b), 2) => finite_d::nu_finite(b, params),
        (Branching::Finite(b), q) => xorsat::nu_q_finite(b, q, params),
        (Branching::Infinite, 2) => match method {
            Method::Naive => infinite_d::nu_infinite_naive(params),
            Method::Fast => infinite_d::nu_infinite_fast(params),
        },
        (Branching::Infinite, q) => xorsat::nu_q_infinite(q, params, method),
    }
}

fn cmd_eval(a: &EvalArgs) -> Result<Outcome> {
    let params = read_params(&a.params, a.q)?;
    if params.p != a.p {
        return Err(QaoaError::InvalidArgument(format!(
            "--p {} but the params file has depth {}",
            a.p, params.p
        )));
    }
    let d = match a.branching_d {
        Some(b) => Branching::Finite(b),
        None => Branching::Infinite,
    };
    let method = match a.method {
        MethodArg::Naive => Method::Naive,
        MethodArg::Fast => Method::Fast,
    };
    let t = Instant::now();
    let nu = evaluate(&params, d, method)?;
    let result = EvalResult {
        p: params.p,
        q: params.q,
        d,
        gamma: params.gamma.clone(),
        beta: params.beta.clone(),
        nu,
        cut_fraction_formula: formula(params.q),
        wall_time_seconds: t.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
        code_version: env!("CARGO_PKG_VERSION").into(),
    };
    if let Some(out) = &a.out {
        append_eval_csv(out, &result)?;
    }
    print_json(&result)?;
    Ok(Outcome::Pass)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|x| fmt17(*x))
        .collect::<Vec<_>>()
        .join(";")
}

fn append_eval_csv(path: &Path, r: &EvalResult) -> Result<()> {
    let fresh = std::fs::metadata(path).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::Writer::from_writer(file);
    if fresh {
        w.write_record([
            "p",
            "q",
            "D",
            "nu",
            "gamma",
            "beta",
            "wall_time_seconds",
            "threads",
            "code_version",
        ])?;
    }
    w.write_record([
        r.p.to_string(),
        r.q.to_string(),
        r.d.to_string(),
        fmt17(r.nu),
        join(&r.gamma),
        join(&r.beta),
        format!("{:.6}", r.wall_time_seconds),
        r.threads.to_string(),
        r.code_version.clone(),
    ])?;
    w.flush()?;
    Ok(())
}

fn optimizer_config(a: &OptimizerArgs) -> OptimizerConfig {
    OptimizerConfig {
        gradient_mode: if a.central {
            optim::GradientMode::Central
        } else {
            optim::GradientMode::Forward
        },
        multistart_count: a.multistarts,
        seed: a.seed,
        ..OptimizerConfig::default()
    }
}

/// Sidecar path: `records.csv` → `records.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    if csv_path.extension().is_some_and(|e| e == "csv") {
        csv_path.with_extension("json")
    } else {
        let mut s = csv_path.as_os_str().to_owned();
        s.push(".json");
        PathBuf::from(s)
    }
}

fn record_header(width: usize) -> Vec<String> {
    let mut h = vec!["p".to_string(), "q".into(), "nu_bar".into()];
    h.extend((1..=width).map(|r| format!("gamma_{r}")));
    h.extend((1..=width).map(|r| format!("beta_{r}")));
    h.push("converged".into());
    h.push("n_evals".into());
    h
}

fn record_row(r: &OptimumRecord, width: usize) -> Vec<String> {
    let pad = |v: &[f64]| {
        let mut out: Vec<String> = v.iter().map(|x| fmt17(*x)).collect();
        out.resize(width, String::new());
        out
    };
    let mut row = vec![
        r.params.p.to_string(),
        r.params.q.to_string(),
        fmt17(r.value),
    ];
    row.extend(pad(&r.params.gamma));
    row.extend(pad(&r.params.beta));
    row.push(r.converged.to_string());
    row.push(r.n_evals.to_string());
    row
}

/// Streams records to CSV as they arrive and rewrites the JSON sidecar.
struct RecordSink {
    csv: csv::Writer<File>,
    sidecar: PathBuf,
    width: usize,
    records: Vec<OptimumRecord>,
}

impl RecordSink {
    fn create(path: &Path, width: usize) -> Result<Self> {
        let mut csv = csv::Writer::from_path(path)?;
        csv.write_record(record_header(width))?;
        csv.flush()?;
        Ok(Self {
            csv,
            sidecar: sidecar_path(path),
            width,
            records: Vec::new(),
        })
    }

    fn push(&mut self, r: &OptimumRecord) -> Result<()> {
        self.csv.write_record(record_row(r, self.width))?;
        self.csv.flush()?;
        self.records.push(r.clone());
        std::fs::write(&self.sidecar, serde_json::to_string_pretty(&self.records)?)?;
        Ok(())
    }
}

fn report_records(records: &[OptimumRecord]) -> Result<Outcome> {
    print_json(&records)?;
    Ok(Outcome::Pass)
}

fn cmd_optimize(a: &OptimizeArgs) -> Result<Outcome> {
    let p = a.p as usize;
    let config = optimizer_config(&a.opt);
    let mut starts = Vec::new();
    if let Some(path) = &a.opt.warm_start {
        let w = read_params(path, a.opt.q)?;
        if w.p + 1 == p {
            let prev = OptimumRecord {
                params: w,
                value: f64::NAN,
                grad_norm: f64::NAN,
                n_evals: 0,
                converged: false,
            };
            starts.push(optim::warm_start(&prev)?);
        } else if w.p == p {
            starts.push(w);
        } else {
            return Err(QaoaError::InvalidArgument(format!(
                "warm start has depth {}, expected {} or {}",
                w.p,
                p - 1,
                p
            )));
        }
    }
    let mut rng =
        <rand_xoshiro::Xoshiro256PlusPlus as rand::SeedableRng>::seed_from_u64(config.seed);
    for _ in 0..config.multistart_count {
        starts.push(optim::random_start(&mut rng, p, a.opt.q)?);
    }
    let rec = optim::best_of(&optim::infinite_objective, &starts, &config)?;
    let mut sink = RecordSink::create(&a.opt.out, p)?;
    sink.push(&rec)?;
    report_records(&sink.records)
}

fn cmd_sweep(a: &SweepArgs) -> Result<Outcome> {
    let p_max = a.p_max as usize;
    let config = optimizer_config(&a.opt);
    let extra = match &a.opt.warm_start {
        Some(path) => vec![read_params(path, a.opt.q)?],
        None => Vec::new(),
    };
    let mut sink = RecordSink::create(&a.opt.out, p_max)?;
    optim::sweep_with(
        &optim::infinite_objective,
        p_max,
        a.opt.q,
        &config,
        &extra,
        |r| {
            eprintln!(
                "p = {}: nu_bar = {:.6}, converged = {}",
                r.params.p, r.value, r.converged
            );
            sink.push(r)
        },
    )?;
    report_records(&sink.records)
}

#[derive(Debug, Serialize)]
struct OracleReport {
    q: usize,
    #[serde(rename = "D")]
    d: u64,
    p: usize,
    qubits: usize,
    gamma: Vec<f64>,
    beta: Vec<f64>,
    nu_statevector: f64,
    nu_iteration: f64,
    deviation: f64,
    fraction_formula: f64,
    central_fraction_reference: f64,
    fraction_deviation: f64,
    j_seed: u64,
    j_draws: usize,
    j_max_tree_deviation: f64,
    j_max_central_deviation: f64,
    tolerance: f64,
    j_tolerance: f64,
    passed: bool,
}

fn cmd_oracle_check(a: &OracleArgs) -> Result<Outcome> {
    let params = match &a.params {
        Some(path) => read_params(path, a.q)?,
        None => published::angles(a.p)
            .ok_or_else(|| {
                QaoaError::InvalidArgument(format!("no published angles for p = {}", a.p))
            })?
            .params()
            .with_q(a.q)?,
    };
    if params.p != a.p {
        return Err(QaoaError::InvalidArgument(format!(
            "--p {} but the params have depth {}",
            a.p, params.p
        )));
    }
    let tree = oracle::build_tree(a.q, a.branching_d, a.p)?;
    let nu_statevector = oracle::statevector_nu(&tree, &params)?;
    let nu_iteration = evaluate(&params, Branching::Finite(a.branching_d), Method::Fast)?;
    let deviation = (nu_statevector - nu_iteration).abs();
    let j = oracle::j_independence_test(&tree, &params, a.j_draws, a.seed)?;
    let fraction_formula = 0.5 + nu_iteration * (a.q as f64 / (2.0 * a.branching_d as f64)).sqrt();
    let central = j.draws[0].central_fraction;
    let fraction_deviation = (central - fraction_formula).abs();
    let passed = deviation < ORACLE_TOLERANCE && fraction_deviation < ORACLE_TOLERANCE && j.passed;
    print_json(&OracleReport {
        q: a.q,
        d: a.branching_d,
        p: a.p,
        qubits: tree.num_vertices(),
        gamma: params.gamma.clone(),
        beta: params.beta.clone(),
        nu_statevector,
        nu_iteration,
        deviation,
        fraction_formula,
        central_fraction_reference: central,
        fraction_deviation,
        j_seed: a.seed,
        j_draws: a.j_draws,
        j_max_tree_deviation: j.max_tree_deviation,
        j_max_central_deviation: j.max_central_deviation,
        tolerance: ORACLE_TOLERANCE,
        j_tolerance: oracle::J_SPREAD_TOLERANCE,
        passed,
    })?;
    if !passed {
        eprintln!(
            "tolerance breach: |Δν| = {deviation:e}, |Δfraction| = {fraction_deviation:e}, J spread = {:e}",
            j.max_tree_deviation.max(j.max_central_deviation)
        );
        return Ok(Outcome::Breach);
    }
    Ok(Outcome::Pass)
}

/// Read records from a JSON sidecar or a sweep CSV.
pub fn read_records(path: &Path) -> Result<Vec<OptimumRecord>> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = std::fs::read_to_string(path)?;
        return Ok(serde_json::from_str(&text)?);
    }
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| QaoaError::InvalidArgument(format!("records CSV lacks column {name}")))
    };
    let (cp, cq, cnu, cconv, cevals) = (
        col("p")?,
        col("q")?,
        col("nu_bar")?,
        col("converged")?,
        col("n_evals")?,
    );
    let bad = |what: &str, v: &str| {
        QaoaError::InvalidArgument(format!("malformed {what} {v:?} in records"))
    };
    let mut out = Vec::new();
    for row in reader.records() {
        let row = row?;
        let field = |i: usize| row.get(i).unwrap_or("");
        let p: usize = field(cp).parse().map_err(|_| bad("p", field(cp)))?;
        let q: usize = field(cq).parse().map_err(|_| bad("q", field(cq)))?;
        let num = |name: String| -> Result<f64> {
            let v = field(col(&name)?);
            v.parse().map_err(|_| bad(&name, v))
        };
        let gamma = (1..=p)
            .map(|r| num(format!("gamma_{r}")))
            .collect::<Result<Vec<_>>>()?;
        let beta = (1..=p)
            .map(|r| num(format!("beta_{r}")))
            .collect::<Result<Vec<_>>>()?;
        out.push(OptimumRecord {
            params: QaoaParams::new(q, gamma, beta)?,
            value: field(cnu).parse().map_err(|_| bad("nu_bar", field(cnu)))?,
            grad_norm: f64::NAN,
            n_evals: field(cevals)
                .parse()
                .map_err(|_| bad("n_evals", field(cevals)))?,
            converged: field(cconv)
                .parse()
                .map_err(|_| bad("converged", field(cconv)))?,
        });
    }
    Ok(out)
}

fn published_records() -> Vec<OptimumRecord> {
    published::OPTIMAL_ANGLES
        .iter()
        .map(|a| OptimumRecord {
            params: a.params(),
            value: published::nu_bar(a.p).unwrap_or(f64::NAN),
            grad_norm: f64::NAN,
            n_evals: 0,
            converged: true,
        })
        .collect()
}

/// Rows of the requested figure table, header first.
pub fn figure_rows(figure: Figure, records: &[OptimumRecord]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    match figure {
        Figure::Fig2 => {
            rows.push(vec!["inv_p".into(), "nu_bar".into()]);
            for r in records {
                rows.push(vec![fmt17(1.0 / r.params.p as f64), fmt17(r.value)]);
            }
        }
        Figure::Fig3 => {
            rows.push(
                ["p", "r", "x", "gamma_r", "beta_r"]
                    .map(String::from)
                    .to_vec(),
            );
            for rec in records {
                let p = rec.params.p;
                for r in 1..=p {
                    let x = if p == 1 {
                        0.0
                    } else {
                        (r - 1) as f64 / (p - 1) as f64
                    };
                    rows.push(vec![
                        p.to_string(),
                        r.to_string(),
                        fmt17(x),
                        fmt17(rec.params.gamma[r - 1]),
                        fmt17(rec.params.beta[r - 1]),
                    ]);
                }
            }
        }
    }
    rows
}

fn cmd_figure_data(a: &FigureArgs) -> Result<Outcome> {
    let records = match &a.records {
        Some(path) => read_records(path)?,
        None => published_records(),
    };
    if records.iter().any(|r| !r.value.is_finite()) {
        return Err(QaoaError::InvalidArgument(
            "records contain a non-finite value".into(),
        ));
    }
    let rows = figure_rows(a.figure, &records);
    let sink: Box<dyn Write> = match &a.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(std::io::stdout()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(Outcome::Pass)
}

fn cmd_table(a: &TableArgs) -> Result<Outcome> {
    let rows: Vec<(usize, &published::PublishedAngles, f64)> = if a.lower_bounds {
        published::EXTRAPOLATED_ANGLES
            .iter()
            .zip(published::LOWER_BOUND_NU)
            .map(|(ang, nu)| (ang.p, ang, nu))
            .collect()
    } else {
        (1..=a.p_max)
            .map(|p| {
                let ang = published::angles(p).ok_or_else(|| {
                    QaoaError::InvalidArgument(format!("no published angles for p = {p}"))
                })?;
                Ok((p, ang, published::nu_bar(p).unwrap_or(f64::NAN)))
            })
            .collect::<Result<_>>()?
    };
    let mut w = csv::Writer::from_writer(std::io::stdout());
    if a.dry_run {
        w.write_record(["p", "published_nu", "gamma", "beta"])?;
        for (p, ang, nu) in &rows {
            w.write_record([
                p.to_string(),
                format!("{nu:.4}"),
                join(ang.gamma),
                join(ang.beta),
            ])?;
        }
        w.flush()?;
        return Ok(Outcome::Pass);
    }
    w.write_record(["p", "nu", "published_nu", "abs_diff", "wall_time_seconds"])?;
    w.flush()?;
    let mut ok = true;
    for (p, ang, published_nu) in &rows {
        let t = Instant::now();
        let nu = infinite_d::nu_infinite_fast(&ang.params())?;
        let diff = (nu - published_nu).abs();
        ok &= diff < TABLE_TOLERANCE;
        w.write_record([
            p.to_string(),
            fmt17(nu),
            format!("{published_nu:.4}"),
            fmt17(diff),
            format!("{:.3}", t.elapsed().as_secs_f64()),
        ])?;
        w.flush()?;
    }
    Ok(if ok { Outcome::Pass } else { Outcome::Breach })
}
