//! The `dilate-lab` command line.
//!
//! JSON reports carry the resolved [`RunConfig`], a `meta` block (version and
//! timestamp) and the `result`. CSV is a projection of tabular results with
//! floats printed to 17 significant digits. Failures print one line
//! `error[code=N kind=K]: message` to stderr and exit with `N`; nothing is
//! written to the output target.
//!
//! Trajectory statistics are grid suprema at finitely many `N`; they cannot
//! certify almost-everywhere convergence or divergence.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::arith::{
    enumerate_smooth_block_with_cap, find_doubling_t, gronwall_ratio_scan, mean_sigma_minus1,
    mean_sigma_minus1_exact, sieve_divisor_function_with, DivisorKind, Exponent, SieveConfig,
    DEFAULT_EXACT_LIMIT, DEFAULT_SMOOTH_CAP,
};
use crate::coeff::{
    build_weyl_table, compute_psi_h, corollary1_condition_check, koksma_sum, necessity_bound_check,
    parse_model_spec, theorem2_condition_sum, CoeffModel, Cor1Condition, KoksmaWeight, ModelSpec,
    PhiDescriptor, SeriesCoefficients, DEFAULT_TOL,
};
use crate::correlation::{
    attach_quadrature, exact_correlation, necessity_reduction, rademacher_menshov_bound,
    verify_lemma_block, DEFAULT_LEMMA_TOL,
};
use crate::counterexample::{
    theorem1_experiment, ExperimentConfig, MonteCarloConfig, WeightDescriptor, WeightFamily,
};
use crate::error::{Error, Result};
use crate::series::{khinchin_trajectory, TrajectoryMode};
use crate::spectrum::DEFAULT_FREQ_CAP;

#[derive(Parser, Debug)]
#[command(name = "dilate-lab", version, about = "Dilated-series laboratory")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalArgs {
    /// Output file, or `csv` / `json` to pick the format and write to stdout.
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for stochastic subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for parallel library operations.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest frequency an assembled spectrum may carry.
    #[arg(long = "freq-cap", global = true, default_value_t = DEFAULT_FREQ_CAP)]
    pub freq_cap: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "subcommand", rename_all = "snake_case")]
pub enum Command {
    /// Divisor-function tables and sigma_{-1} diagnostics.
    Arith(ArithArgs),
    /// Smooth-number blocks A_T.
    Smooth(SmoothArgs),
    /// Tables of g, G, h.
    Weyl(WeylArgs),
    /// Criterion sums and regularity checks.
    Check(CheckArgs),
    /// One dilation correlation.
    Corr(CorrArgs),
    /// The dyadic-block L^2 inequality.
    Lemma(LemmaArgs),
    /// The smooth-block construction bundle.
    Counterexample(CounterexampleArgs),
    /// Grid suprema of averages or weighted partial sums.
    Trajectory(TrajectoryArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithKind {
    D,
    Sigma,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithReport {
    /// `n,value` rows.
    Table,
    /// `(1/J) sum_{j <= J} sigma_{-1}(j)` with `J = range`.
    Mean,
    /// Record maxima of `sigma_{-1}(k) / log log k` up to `range`.
    Gronwall,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArithArgs {
    #[arg(long, value_enum, default_value_t = ArithKind::Sigma)]
    pub kind: ArithKind,
    /// Exponent `s` of `sigma_s`: `p`, `p/q` or a decimal.
    #[arg(long, default_value = "-1", allow_hyphen_values = true)]
    pub s: String,
    #[arg(long)]
    pub range: u64,
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    pub exact_limit: usize,
    #[arg(long, value_enum, default_value_t = ArithReport::Table)]
    pub report: ArithReport,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long = "T")]
    pub t: u32,
    /// Also run the doubling search with this gap.
    #[arg(long)]
    pub doubling: Option<u32>,
    #[arg(long = "Tmax", default_value_t = 40)]
    pub t_max: u32,
    #[arg(long, default_value_t = DEFAULT_SMOOTH_CAP)]
    pub cap: usize,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long = "N")]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Koksma,
    Thm2,
    Cor1a,
    Cor1b,
    Cor1c,
    Cor3,
    Necessity,
    Reduction,
    Chain,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Sigma,
    SigmaPow,
    Loglog,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiKind {
    Power,
    Log,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckArgs {
    #[arg(long, value_enum)]
    pub criterion: Criterion,
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Spec file with a `coeffs = ...` line; defaults to the model file's
    /// coefficients, then to `c_k = 1/k`.
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long = "K", default_value_t = 1024)]
    pub k: u64,
    #[arg(long, value_enum, default_value_t = WeightKind::Sigma)]
    pub weight: WeightKind,
    /// `eps` of the `sigma_{-1}^{1 - eps}` weight.
    #[arg(long, default_value_t = 0.5)]
    pub eps: f64,
    /// Power of `log k` in the weighted condition sum.
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub power: f64,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub threshold: f64,
    #[arg(long, default_value_t = 1000)]
    pub range: u64,
    #[arg(long, value_enum, default_value_t = PhiKind::Power)]
    pub phi: PhiKind,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    /// Largest dyadic level of the chaining bound.
    #[arg(long = "R", default_value_t = 10)]
    pub max_level: u32,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub n: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Quadrature nodes for the cross-check of finite models (default: the
    /// smallest power of two above `2^16` and the exactness threshold).
    #[arg(long)]
    pub nodes: Option<usize>,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub r: u32,
    /// A spec file with `coeffs = ...`, `random:<seed>`, or `random` with
    /// `--seed`.
    #[arg(long)]
    pub coeffs: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub s: usize,
    #[arg(long)]
    pub d: u32,
    #[arg(long = "Tmax")]
    pub t_max: u32,
    /// `sigma[:e]`, `loglog`, `constant[:c]` or `table:w1,w2,...`.
    #[arg(long, default_value = "sigma:0.5")]
    pub weights: String,
    /// Monte Carlo sample count; needs `--seed`.
    #[arg(long)]
    pub mc: Option<u64>,
    #[arg(long = "J", default_value_t = 64)]
    pub j: u64,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.5, 0.25, 0.125])]
    pub eps: Vec<f64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrajectoryKind {
    Avg,
    Sum,
}

#[derive(Args, Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub coeffs: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TrajectoryKind::Avg)]
    pub mode: TrajectoryKind,
    /// `2^a..2^b`, a comma list, or a single value.
    #[arg(long, default_value = "2^4..2^14")]
    pub checkpoints: String,
    #[arg(long, default_value = "2^16")]
    pub grid: String,
    #[arg(long, default_value_t = crate::series::DEFAULT_TRAJECTORY_EPS)]
    pub eps: f64,
    /// Number of leading coefficients kept from an infinite model.
    #[arg(long, default_value_t = 256)]
    pub truncate: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

/// Everything that determines a run's result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub global: GlobalArgs,
    pub command: Command,
    /// Parsed contents of the model file.
    pub model_spec: Option<ModelSpec>,
    /// Parsed contents of a separate coefficients file.
    pub coeffs_spec: Option<ModelSpec>,
    pub weights: Option<WeightDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub timestamp_unix: u64,
}

/// The canonical JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: RunConfig,
    pub meta: Meta,
    pub result: Value,
}

struct Outcome {
    result: Value,
    csv: Option<String>,
    text: Option<String>,
}

fn read_spec(path: &Path) -> Result<ModelSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_model_spec(&text)
}

fn load_model(spec: &ModelSpec, path: &Path) -> Result<CoeffModel> {
    let d = spec
        .model
        .as_ref()
        .ok_or_else(|| Error::Parse(format!("{} has no `model = ...` line", path.display())))?;
    CoeffModel::from_descriptor(d)
}

fn parse_count(s: &str) -> Result<u64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad count `{s}`"));
    match s.strip_prefix("2^") {
        Some(e) => {
            let e: u32 = e.parse().map_err(|_| bad())?;
            1u64.checked_shl(e).filter(|_| e < 64).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// `2^a..2^b` (powers of two), `x..y` (dyadic from `x`), `a,b,c`, or one value.
pub fn parse_checkpoints(s: &str) -> Result<Vec<u64>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (parse_count(a)?, parse_count(b)?);
        if a == 0 || a > b {
            return Err(Error::Parse(format!("bad checkpoint range `{s}`")));
        }
        let mut v = Vec::new();
        let mut x = a;
        while x <= b {
            v.push(x);
            match x.checked_mul(2) {
                Some(y) => x = y,
                None => break,
            }
        }
        return Ok(v);
    }
    s.split(',').map(parse_count).collect()
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

/// Parses `argv` and runs one subcommand. Returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let line = msg
                .lines()
                .find(|l| !l.trim().is_empty())
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ");
            eprintln!("error[code=2 kind=usage]: {line}");
            return 2;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[code={} kind={}]: {msg}", e.exit_code(), e.kind());
            e.exit_code()
        }
    }
}

/// Runs a parsed command line and writes its output.
pub fn execute(cli: &Cli) -> Result<()> {
    let (format, target) = match cli.global.out.as_deref() {
        Some("csv") => (Some(Format::Csv), None),
        Some("json") => (Some(Format::Json), None),
        Some(path) => (cli.global.format, Some(PathBuf::from(path))),
        None => (cli.global.format, None),
    };
    let text = match cli.global.threads {
        Some(0) => return Err(Error::Domain("--threads must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
            pool.install(|| render(cli, format))?
        }
        None => render(cli, format)?,
    };
    match target {
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Error::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn render(cli: &Cli, format: Option<Format>) -> Result<String> {
    let mut config = RunConfig {
        global: cli.global.clone(),
        command: cli.command.clone(),
        model_spec: None,
        coeffs_spec: None,
        weights: None,
    };
    let out = dispatch(&cli.command, &cli.global, &mut config)?;
    let json_report = |result: Value| -> String {
        let report = Report {
            config: config.clone(),
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs()),
            },
            result,
        };
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    };
    match format {
        Some(Format::Json) => Ok(json_report(out.result)),
        Some(Format::Csv) => out
            .csv
            .ok_or_else(|| Error::Domain("this subcommand has no CSV projection; use json".into())),
        None => Ok(match (out.text, out.csv) {
            (Some(t), _) => t,
            (None, Some(c)) => c,
            (None, None) => json_report(out.result),
        }),
    }
}

fn dispatch(cmd: &Command, global: &GlobalArgs, config: &mut RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Arith(a) => arith(a),
        Command::Smooth(a) => smooth(a),
        Command::Weyl(a) => {
            let spec = read_spec(&a.model)?;
            let model = load_model(&spec, &a.model)?;
            config.model_spec = Some(spec);
            weyl(a, &model)
        }
        Command::Check(a) => check(a, config),
        Command::Corr(a) => {
            let spec = read_spec(&a.model)?;
            let model = load_model(&spec, &a.model)?;
            config.model_spec = Some(spec);
            let mut rep = exact_correlation(&model, a.m, a.n, a.tol)?;
            if let Some(f) = model.support_bound() {
                let need = ((a.m + a.n) * f + 1) as usize;
                let nodes = a
                    .nodes
                    .unwrap_or_else(|| need.max(1 << 16).next_power_of_two());
                attach_quadrature(&mut rep, &model, nodes)?;
            }
            Ok(Outcome {
                result: to_value(&rep),
                csv: None,
                text: None,
            })
        }
        Command::Lemma(a) => lemma(a, global, config),
        Command::Counterexample(a) => counterexample(a, global, config),
        Command::Trajectory(a) => trajectory(a, global, config),
    }
}

fn arith(a: &ArithArgs) -> Result<Outcome> {
    if a.range == 0 {
        return Err(Error::Range("--range must be >= 1".into()));
    }
    match a.report {
        ArithReport::Table => {
            let kind = match a.kind {
                ArithKind::D => DivisorKind::Count,
                ArithKind::Sigma => DivisorKind::Sigma(a.s.parse::<Exponent>()?),
            };
            let n = usize::try_from(a.range).map_err(|_| Error::Range("range too large".into()))?;
            let table = sieve_divisor_function_with(
                n,
                kind,
                SieveConfig {
                    exact_limit: a.exact_limit,
                },
            )?;
            let mut csv = String::from("n,value\n");
            let mut rows = Vec::with_capacity(n);
            for k in 1..=n {
                let v = table.get(k);
                let _ = writeln!(csv, "{k},{}", csv_float(v));
                rows.push(json!({
                    "n": k,
                    "value": v,
                    "exact": table.exact(k).map(|r| r.to_string()),
                }));
            }
            Ok(Outcome {
                result: json!({
                    "kind": kind.to_string(),
                    "range": n,
                    "exact_limit": table.exact_limit(),
                    "rows": rows,
                }),
                csv: Some(csv),
                text: None,
            })
        }
        ArithReport::Mean => {
            let mean = mean_sigma_minus1(a.range)?;
            let exact = if a.range <= 5000 {
                Some(mean_sigma_minus1_exact(a.range)?.to_string())
            } else {
                None
            };
            Ok(Outcome {
                result: json!({ "J": a.range, "mean": mean, "exact": exact }),
                csv: Some(format!("J,mean\n{},{}\n", a.range, csv_float(mean))),
                text: None,
            })
        }
        ArithReport::Gronwall => {
            let scan = gronwall_ratio_scan(a.range)?;
            let mut csv = String::from("k,sigma_minus1,ratio\n");
            for r in &scan.records {
                let _ = writeln!(
                    csv,
                    "{},{},{}",
                    r.k,
                    csv_float(r.sigma_minus1),
                    csv_float(r.ratio)
                );
            }
            Ok(Outcome {
                result: to_value(&scan),
                csv: Some(csv),
                text: None,
            })
        }
    }
}

fn smooth(a: &SmoothArgs) -> Result<Outcome> {
    let block = enumerate_smooth_block_with_cap(a.s, a.t, a.cap)?;
    let doubling = match a.doubling {
        Some(d) => Some(find_doubling_t(a.s, d, a.t_max)?),
        None => None,
    };
    let summary = json!({ "s": a.s, "T": a.t, "count": block.len() });
    let mut text = String::new();
    let mut csv = String::from("member\n");
    for m in block.members() {
        let _ = writeln!(text, "{m}");
        let _ = writeln!(csv, "{m}");
    }
    let _ = writeln!(text, "{summary}");
    if let Some(d) = &doubling {
        let _ = writeln!(text, "{}", json!({ "doubling": d }));
    }
    Ok(Outcome {
        result: json!({
            "s": a.s,
            "T": a.t,
            "count": block.len(),
            "primes": block.primes(),
            "members": block.members(),
            "exponent_vectors": block.exponent_vectors(),
            "doubling": doubling,
        }),
        csv: Some(csv),
        text: Some(text),
    })
}

fn weyl(a: &WeylArgs, model: &CoeffModel) -> Result<Outcome> {
    let t = build_weyl_table(model, a.n, a.tol)?;
    let mut csv = String::from("n,g,G,h,trunc_err\n");
    let mut rows = Vec::with_capacity(a.n);
    for n in 1..=a.n {
        let _ = writeln!(
            csv,
            "{n},{},{},{},{}",
            csv_float(t.g(n)),
            csv_float(t.big_g(n)),
            csv_float(t.h(n)),
            csv_float(t.h_error(n))
        );
        rows.push(json!({
            "n": n,
            "g": t.g(n),
            "G": t.big_g(n),
            "h": t.h(n),
            "h_hat": t.h_hat(n),
            "g_err": t.g_error(n),
            "G_err": t.big_g_error(n),
            "h_err": t.h_error(n),
        }));
    }
    Ok(Outcome {
        result: json!({ "N": a.n, "tol": a.tol, "rows": rows }),
        csv: Some(csv),
        text: None,
    })
}

fn coefficients_for(
    coeffs_path: Option<&Path>,
    model_spec: Option<&ModelSpec>,
    config: &mut RunConfig,
) -> Result<SeriesCoefficients> {
    if let Some(p) = coeffs_path {
        let spec = read_spec(p)?;
        let d = spec
            .coeffs
            .clone()
            .ok_or_else(|| Error::Parse(format!("{} has no `coeffs = ...` line", p.display())))?;
        config.coeffs_spec = Some(spec);
        return Ok(SeriesCoefficients::from_descriptor(&d));
    }
    Ok(model_spec.and_then(|s| s.coeffs.as_ref()).map_or(
        SeriesCoefficients::Reciprocal,
        SeriesCoefficients::from_descriptor,
    ))
}

fn check(a: &CheckArgs, config: &mut RunConfig) -> Result<Outcome> {
    let model_spec = a.model.as_deref().map(read_spec).transpose()?;
    config.model_spec = model_spec.clone();
    let model = || -> Result<CoeffModel> {
        let (spec, path) = model_spec
            .as_ref()
            .zip(a.model.as_deref())
            .ok_or_else(|| Error::Domain(format!("criterion {:?} needs --model", a.criterion)))?;
        load_model(spec, path)
    };
    let gamma = || {
        a.gamma
            .ok_or_else(|| Error::Domain("this criterion needs --gamma".into()))
    };
    let result = match a.criterion {
        Criterion::Koksma => {
            let weight = match a.weight {
                WeightKind::Sigma => KoksmaWeight::SigmaMinus1,
                WeightKind::SigmaPow => KoksmaWeight::SigmaMinus1Pow { eps: a.eps },
                WeightKind::Loglog => KoksmaWeight::LogLog,
            };
            let s = koksma_sum(&model()?, &weight, a.k)?;
            json!({ "criterion": "koksma", "weight": format!("{weight:?}"), "K": a.k, "sum": s })
        }
        Criterion::Thm2 => {
            let m = model()?;
            let coeffs = coefficients_for(a.coeffs.as_deref(), model_spec.as_ref(), config)?;
            let n = usize::try_from(a.k).map_err(|_| Error::Range("K too large".into()))?;
            let table = build_weyl_table(&m, n, a.tol)?;
            let s = theorem2_condition_sum(&table, &coeffs, a.k, a.power)?;
            json!({ "criterion": "thm2", "K": a.k, "power": a.power, "sum": s })
        }
        Criterion::Cor1a | Criterion::Cor1b | Criterion::Cor1c => {
            let cond = match a.criterion {
                Criterion::Cor1a => Cor1Condition::RegularVariation {
                    threshold: a.threshold,
                },
                Criterion::Cor1b => Cor1Condition::Monotone { gamma: gamma()? },
                _ => Cor1Condition::UniformDilation,
            };
            to_value(&corollary1_condition_check(
                &model()?,
                cond,
                a.range,
                a.tol,
            )?)
        }
        Criterion::Cor3 => {
            let phi = match a.phi {
                PhiKind::Power => PhiDescriptor::Power { gamma: gamma()? },
                PhiKind::Log => PhiDescriptor::Log { gamma: gamma()? },
            };
            let n = usize::try_from(a.range).map_err(|_| Error::Range("range too large".into()))?;
            let t = compute_psi_h(&phi, n, a.tol)?;
            json!({ "criterion": "cor3", "phi": phi, "table": t })
        }
        Criterion::Necessity => {
            if a.k < 2 {
                return Err(Error::Domain("necessity check needs K >= 2".into()));
            }
            let mut failures = Vec::new();
            let mut worst = 0.0f64;
            let mut worst_k = 2;
            for k in 2..=a.k {
                let c = necessity_bound_check(k, a.delta)?;
                let r = c.sigma_tilde / c.bound;
                if r > worst {
                    worst = r;
                    worst_k = k;
                }
                if !c.pass && failures.len() < 16 {
                    failures.push(c);
                }
            }
            json!({
                "criterion": "necessity",
                "K": a.k,
                "delta": a.delta,
                "pass": failures.is_empty(),
                "failures": failures,
                "max_ratio": worst,
                "max_ratio_at": worst_k,
            })
        }
        Criterion::Reduction => {
            let m = model()?;
            let n = usize::try_from(a.k).map_err(|_| Error::Range("K too large".into()))?;
            let table = build_weyl_table(&m, n, a.tol)?;
            to_value(&necessity_reduction(&m, &table, a.k, a.delta)?)
        }
        Criterion::Chain => {
            let m = model()?;
            let coeffs = coefficients_for(a.coeffs.as_deref(), model_spec.as_ref(), config)?;
            if a.max_level >= 40 {
                return Err(Error::Range(format!("--R {} too large", a.max_level)));
            }
            let table = build_weyl_table(&m, 1usize << (a.max_level + 1), a.tol)?;
            to_value(&rademacher_menshov_bound(&table, &coeffs, a.max_level)?)
        }
    };
    Ok(Outcome {
        result,
        csv: None,
        text: None,
    })
}

fn lemma(a: &LemmaArgs, global: &GlobalArgs, config: &mut RunConfig) -> Result<Outcome> {
    let spec = read_spec(&a.model)?;
    let model = load_model(&spec, &a.model)?;
    config.model_spec = Some(spec);
    if a.r >= 30 {
        return Err(Error::Range(format!("block level {} too large", a.r)));
    }
    let lo = (1u64 << a.r) + 1;
    let hi = 1u64 << (a.r + 1);
    let coeffs: Vec<f64> = match a.coeffs.strip_prefix("random") {
        Some(rest) => {
            let seed = match rest.strip_prefix(':') {
                Some(s) => s
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad seed in `{}`", a.coeffs)))?,
                None if rest.is_empty() => global
                    .seed
                    .ok_or_else(|| Error::Precondition("random coefficients need a seed".into()))?,
                None => {
                    return Err(Error::Parse(format!(
                        "bad coefficient source `{}`",
                        a.coeffs
                    )))
                }
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (lo..=hi).map(|_| rng.random_range(-1.0..=1.0)).collect()
        }
        None => {
            let cs = coefficients_for(Some(Path::new(&a.coeffs)), None, config)?;
            (lo..=hi).map(|l| cs.get(l)).collect()
        }
    };
    let table = build_weyl_table(&model, hi as usize, a.tol)?;
    let form = verify_lemma_block(&model, &table, a.r, &coeffs, a.tol)?;
    Ok(Outcome {
        result: json!({ "form": form, "verdict": if form.holds { "holds" } else { "violated" }, "relative_tolerance": DEFAULT_LEMMA_TOL }),
        csv: None,
        text: None,
    })
}

fn counterexample(
    a: &CounterexampleArgs,
    global: &GlobalArgs,
    config: &mut RunConfig,
) -> Result<Outcome> {
    let desc: WeightDescriptor = a.weights.parse()?;
    config.weights = Some(desc.clone());
    let w = WeightFamily::new(desc)?;
    let monte_carlo = match a.mc {
        Some(samples) => Some(MonteCarloConfig {
            samples,
            seed: global
                .seed
                .ok_or_else(|| Error::Precondition("--mc needs --seed".into()))?,
        }),
        None => None,
    };
    let cfg = ExperimentConfig {
        s: a.s,
        d: a.d,
        t_max: a.t_max,
        eps_list: a.eps.clone(),
        j: a.j,
        monte_carlo,
        freq_cap: global.freq_cap,
    };
    let bundle = theorem1_experiment(&cfg, &w)?;
    Ok(Outcome {
        result: to_value(&bundle),
        csv: None,
        text: None,
    })
}

fn trajectory(a: &TrajectoryArgs, global: &GlobalArgs, config: &mut RunConfig) -> Result<Outcome> {
    let spec = read_spec(&a.model)?;
    let model = load_model(&spec, &a.model)?;
    config.model_spec = Some(spec.clone());
    let checkpoints = parse_checkpoints(&a.checkpoints)?;
    let grid = usize::try_from(parse_count(&a.grid)?)
        .map_err(|_| Error::Range("grid too large".into()))?;
    let (f, tail_mass) = if model.is_finite() {
        (model.spectrum().expect("finite").clone(), 0.0)
    } else {
        model.truncate(a.truncate)?
    };
    let n_max = *checkpoints
        .last()
        .ok_or_else(|| Error::Domain("no checkpoints".into()))?;
    let top = n_max.saturating_mul(f.max_frequency());
    if top > global.freq_cap {
        return Err(Error::Capacity {
            what: format!("trajectory frequency {top}"),
            cap: global.freq_cap,
        });
    }
    let mode = match a.mode {
        TrajectoryKind::Avg => TrajectoryMode::Average,
        TrajectoryKind::Sum => {
            TrajectoryMode::WeightedSum(coefficients_for(a.coeffs.as_deref(), Some(&spec), config)?)
        }
    };
    let evaluated = CoeffModel::finite(f.clone())?;
    let table = build_weyl_table(&evaluated, n_max as usize, a.tol)?;
    let rep = khinchin_trajectory(&f, &mode, &checkpoints, grid, a.eps, Some(&table))?;
    let mut csv = String::from("N,grid_sup,argmax_t,normalized\n");
    for p in &rep.points {
        let norm = p.normalized.map_or(String::new(), csv_float);
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            p.n,
            csv_float(p.grid_sup),
            p.argmax_t,
            norm
        );
    }
    Ok(Outcome {
        result: json!({ "trajectory": rep, "truncated_tail_mass": tail_mass }),
        csv: Some(csv),
        text: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn checkpoint_syntax() {
        assert_eq!(parse_checkpoints("2^4..2^6").unwrap(), vec![16, 32, 64]);
        assert_eq!(parse_checkpoints("3,5,9").unwrap(), vec![3, 5, 9]);
        assert_eq!(parse_checkpoints("2^10").unwrap(), vec![1024]);
        assert!(parse_checkpoints("2^x").is_err());
        assert!(parse_checkpoints("8..2").is_err());
    }

    #[test]
    fn run_config_round_trips() {
        let cli = Cli::try_parse_from([
            "dilate-lab",
            "--seed",
            "9",
            "counterexample",
            "--s",
            "3",
            "--d",
            "2",
            "--Tmax",
            "40",
            "--mc",
            "100",
        ])
        .unwrap();
        let cfg = RunConfig {
            global: cli.global.clone(),
            command: cli.command.clone(),
            model_spec: None,
            coeffs_spec: None,
            weights: Some(WeightDescriptor::LogLog),
        };
        let s = serde_json::to_string(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&s).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn negative_exponent_is_accepted() {
        let cli = Cli::try_parse_from([
            "dilate-lab",
            "arith",
            "--kind",
            "sigma",
            "--s",
            "-1",
            "--range",
            "10",
        ]);
        assert!(cli.is_ok());
    }
}
