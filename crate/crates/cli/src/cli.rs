//! Argument parsing and the subcommands.

use std::io::Write;
use std::path::{Path, PathBuf};

use advseq_core::adversary::AdversaryStrategy;
use advseq_core::defaults::{SOLVER_TOL, STATE_BUDGET};
use advseq_core::detector::{default_horizon, TestSpec};
use advseq_core::geometry::{build_instance, hardest_pair, ProblemInstance};
use advseq_core::oracle::{certify, compile_spec, CertifyConfig, DpOptions, TruncationRule};
use advseq_core::sim::{exponent_sweep, run_trials_with, SweepSchedule};
use advseq_core::Hypothesis;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};
use crate::problem::{load_problem, read_text};
use crate::records::{
    certificate_row, simulate_row, sweep_row, CertifyRecord, HoeffdingRecord, InstanceRecord, SimulationRecord,
    TradeoffPoint, CERTIFY_HEADER, REPORT_HEADER, SIMULATE_HEADER, SWEEP_HEADER,
};
use crate::runner::ThreadRunner;

#[derive(Debug, Parser)]
#[command(name = "advseq", version, about = "Adversarial sequential hypothesis testing over finite alphabets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve both closest pairs and print the instance summary (JSON).
    Solve(SolveArgs),
    /// Monte Carlo run of one test against one strategy per hypothesis.
    Simulate(SimulateArgs),
    /// Empirical exponents along an n ladder (CSV).
    Sweep(SweepArgs),
    /// Exact worst-case certificates for every inequality the tests rely on.
    Certify(CertifyArgs),
    /// Hardest pair, lambda*, s* and the fixed-length tradeoff curve (JSON).
    Hoeffding(HoeffdingArgs),
    /// Merge earlier outputs into one plot-ready CSV.
    Report(ReportArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Theorem1,
    Theorem2,
    Theorem3,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TruncationArg {
    Exclude,
    CountAsError,
}

#[derive(Debug, Args)]
pub struct ProblemArgs {
    /// Problem file, or an instance file written by `solve`.
    #[arg(long)]
    pub problem: PathBuf,
    /// Closest-pair solver tolerance.
    #[arg(long, default_value_t = SOLVER_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, default_value_t = 1.0)]
    pub alpha0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha1: f64,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[command(flatten)]
    pub test: TestArgs,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to ceil(20 m / min(D_fwd, D_rev)), m the largest of n and the thresholds.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: Option<u32>,
    #[arg(long, default_value = "optimal_pair_forward")]
    pub strategy_h0: String,
    #[arg(long, default_value = "optimal_pair_forward")]
    pub strategy_h1: String,
    /// Worker threads (results do not depend on this).
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, value_enum)]
    pub regime: RegimeArg,
    /// Sample-size ladder, comma separated.
    #[arg(long, value_delimiter = ',', required = true)]
    pub ns: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub alpha0: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub alpha1: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub delta: Vec<f64>,
    /// Error-constrained sweep: beta = 2^(-rate n).
    #[arg(long, value_delimiter = ',')]
    pub beta_rate: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub workers: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    #[arg(long, default_value_t = 60, value_parser = clap::value_parser!(u32).range(1..))]
    pub horizon: u32,
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5")]
    pub alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "4,8,12")]
    pub ns: Vec<u32>,
    #[arg(long, value_delimiter = ',', default_value = "0.05,0.1")]
    pub deltas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "20,30")]
    pub prob_ns: Vec<u32>,
    /// Fixed-length floors as fractions of D(p0*||q0*).
    #[arg(long, value_delimiter = ',', default_value = "0.25,0.5")]
    pub fixed_r_fractions: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "6,10")]
    pub fixed_ns: Vec<u32>,
    #[arg(long, default_value_t = 1e-2)]
    pub grid_step: f64,
    #[arg(long, default_value_t = STATE_BUDGET)]
    pub state_budget: u64,
    /// How error certificates score runs cut off at the horizon.
    #[arg(long, value_enum, default_value = "exclude")]
    pub truncation: TruncationArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct HoeffdingArgs {
    #[command(flatten)]
    pub problem: ProblemArgs,
    /// Type-II exponent floor (bits).
    #[arg(long)]
    pub r: f64,
    /// Sample size; adds the test threshold n (r - s*).
    #[arg(long)]
    pub n: Option<u32>,
    /// Points on the tradeoff curve, r from 0 to D(p0*||q0*).
    #[arg(long, default_value_t = 21, value_parser = clap::value_parser!(u64).range(2..))]
    pub curve_points: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Outputs of solve, hoeffding, simulate or sweep, in the order to merge.
    #[arg(long = "input", required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, bytes).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            s.flush()?;
            Ok(())
        }
    }
}

fn json_bytes<T: serde::Serialize>(v: &T) -> CliResult<Vec<u8>> {
    let mut b = serde_json::to_vec_pretty(v).map_err(|e| CliError::Io(e.to_string()))?;
    b.push(b'\n');
    Ok(b)
}

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> CliResult<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

/// Loads `--problem`: a problem file is solved; an instance file from
/// `solve` is reused as is.
pub fn load_instance(args: &ProblemArgs) -> CliResult<ProblemInstance> {
    let text = read_text(&args.problem)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", args.problem.display())))?;
    if value.get("kind").and_then(|k| k.as_str()) == Some("instance") {
        let rec: InstanceRecord = serde_json::from_value(value)
            .map_err(|e| CliError::Validation(format!("{}: {e}", args.problem.display())))?;
        return rec.to_instance();
    }
    let (p, q) = load_problem(&args.problem)?;
    Ok(build_instance(&p, &q, args.tol)?)
}

fn need<T>(v: Option<T>, flag: &str, regime: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for --regime {regime}")))
}

pub fn build_spec(t: &TestArgs) -> CliResult<TestSpec> {
    let spec = match t.regime {
        RegimeArg::Theorem1 => {
            TestSpec::Expectation { alpha0: t.alpha0, alpha1: t.alpha1, n: need(t.n, "n", "theorem1")? }
        }
        RegimeArg::Theorem2 => {
            TestSpec::ProbConstraint { delta: need(t.delta, "delta", "theorem2")?, n: need(t.n, "n", "theorem2")? }
        }
        RegimeArg::Theorem3 => TestSpec::ErrorConstraint { beta: need(t.beta, "beta", "theorem3")? },
        RegimeArg::Fixed => TestSpec::FixedLength { n: need(t.n, "n", "fixed")?, r: need(t.r, "r", "fixed")? },
    };
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(spec)
}

fn runner(workers: Option<u64>) -> ThreadRunner {
    match workers {
        Some(w) => ThreadRunner::new(w as usize),
        None => ThreadRunner::available(),
    }
}

fn cmd_solve(a: &SolveArgs) -> CliResult<()> {
    if a.output.format == Some(Format::Csv) {
        return Err(CliError::Usage("solve writes JSON only".into()));
    }
    let inst = load_instance(&a.problem)?;
    emit(&a.output.out, &json_bytes(&InstanceRecord::new(&inst))?)
}

fn cmd_simulate(a: &SimulateArgs) -> CliResult<()> {
    let spec = build_spec(&a.test)?;
    let inst = load_instance(&a.problem)?;
    let test = compile_spec(&spec, &inst)?;
    let horizon = match a.horizon {
        Some(h) => h,
        None => default_horizon(&spec, &inst)?,
    };
    let s0 = AdversaryStrategy::from_name(&a.strategy_h0, Hypothesis::H0, &inst)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let s1 = AdversaryStrategy::from_name(&a.strategy_h1, Hypothesis::H1, &inst)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let r = run_trials_with(&runner(a.workers), &spec, &test, &inst, &s0, &s1, a.trials, a.seed, horizon)?;
    let bytes = match a.output.format.unwrap_or(Format::Csv) {
        Format::Csv => csv_bytes(&SIMULATE_HEADER, [simulate_row(&r)])?,
        Format::Json => json_bytes(&SimulationRecord::new(&r))?,
    };
    emit(&a.output.out, &bytes)
}

fn broadcast_pairs(a0: &[f64], a1: &[f64]) -> CliResult<Vec<(f64, f64)>> {
    match (a0.len(), a1.len()) {
        (x, y) if x == y => Ok(a0.iter().copied().zip(a1.iter().copied()).collect()),
        (1, _) => Ok(a1.iter().map(|&b| (a0[0], b)).collect()),
        (_, 1) => Ok(a0.iter().map(|&a| (a, a1[0])).collect()),
        _ => Err(CliError::Usage("--alpha0 and --alpha1 lists must have equal length or length 1".into())),
    }
}

fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    if a.output.format == Some(Format::Json) {
        return Err(CliError::Usage("sweep writes CSV only".into()));
    }
    let nonempty = |v: &Vec<f64>, flag: &str| {
        if v.is_empty() {
            Err(CliError::Usage(format!("--{flag} is required for this regime")))
        } else {
            Ok(v.clone())
        }
    };
    let schedule = match a.regime {
        RegimeArg::Theorem1 => SweepSchedule::Alphas(broadcast_pairs(&a.alpha0, &a.alpha1)?),
        RegimeArg::Theorem2 => SweepSchedule::Deltas(nonempty(&a.delta, "delta")?),
        RegimeArg::Theorem3 => SweepSchedule::BetaRates(nonempty(&a.beta_rate, "beta-rate")?),
        RegimeArg::Fixed => SweepSchedule::FixedRates(nonempty(&a.r, "r")?),
    };
    if a.ns.contains(&0) {
        return Err(CliError::Usage("--ns entries must be >= 1".into()));
    }
    let inst = load_instance(&a.problem)?;
    let rows = exponent_sweep(&runner(a.workers), &inst, &schedule, &a.ns, a.trials, a.seed, a.horizon)?;
    emit(&a.output.out, &csv_bytes(&SWEEP_HEADER, rows.iter().map(|r| sweep_row(r, a.seed)))?)
}

fn cmd_certify(a: &CertifyArgs) -> CliResult<()> {
    let inst = load_instance(&a.problem)?;
    let truncation = match a.truncation {
        TruncationArg::Exclude => TruncationRule::Exclude,
        TruncationArg::CountAsError => TruncationRule::CountAsError,
    };
    let cfg = CertifyConfig {
        alphas: a.alphas.clone(),
        ns: a.ns.clone(),
        horizon: a.horizon,
        deltas: a.deltas.clone(),
        prob_ns: a.prob_ns.clone(),
        fixed_r_fractions: a.fixed_r_fractions.clone(),
        fixed_ns: a.fixed_ns.clone(),
        grid_step: a.grid_step,
        dp: DpOptions { truncation, state_budget: a.state_budget },
    };
    let report = certify(&inst, &cfg)?;
    let rule = match truncation {
        TruncationRule::Exclude => "exclude",
        TruncationRule::CountAsError => "count_as_error",
    };
    let rec = CertifyRecord::new(&report, rule);
    let bytes = match a.output.format.unwrap_or(Format::Json) {
        Format::Json => json_bytes(&rec)?,
        Format::Csv => csv_bytes(&CERTIFY_HEADER, rec.certificates.iter().map(certificate_row))?,
    };
    emit(&a.output.out, &bytes)?;
    if rec.failed > 0 {
        return Err(CliError::CertificateFailed { failed: rec.failed });
    }
    Ok(())
}

fn cmd_hoeffding(a: &HoeffdingArgs) -> CliResult<()> {
    if a.output.format == Some(Format::Csv) {
        return Err(CliError::Usage("hoeffding writes JSON only".into()));
    }
    if !(a.r >= 0.0 && a.r.is_finite()) {
        return Err(CliError::Usage("--r must be >= 0".into()));
    }
    let inst = load_instance(&a.problem)?;
    let (p, q, tol) = (&inst.p_set, &inst.q_set, a.problem.tol);
    let sol = hardest_pair(p, q, a.r, tol)?;
    let m = a.curve_points as usize;
    let mut curve = Vec::with_capacity(m);
    for i in 0..m {
        let r = inst.d_fwd() * i as f64 / (m - 1) as f64;
        let s = hardest_pair(p, q, r, tol)?;
        curve.push(TradeoffPoint { r, s_star: s.s_star, lambda_star: s.lambda_star });
    }
    emit(&a.output.out, &json_bytes(&HoeffdingRecord::new(&sol, a.n, curve))?)
}

fn report_rows_json(path: &Path, value: &serde_json::Value, rows: &mut Vec<Vec<String>>) -> CliResult<()> {
    let bad = |e: serde_json::Error| CliError::Validation(format!("{}: {e}", path.display()));
    match value.get("kind").and_then(|k| k.as_str()) {
        Some("instance") => {
            let rec: InstanceRecord = serde_json::from_value(value.clone()).map_err(bad)?;
            for i in 0..=16 {
                let rho = 2f64.powf(-2.0 + i as f64 / 4.0);
                rows.push(vec![
                    "sequential".into(),
                    "theory".into(),
                    String::new(),
                    format!("alpha1/alpha0={rho}"),
                    (rho * rec.d_fwd).to_string(),
                    (rec.d_rev / rho).to_string(),
                ]);
            }
        }
        Some("hoeffding") => {
            let rec: HoeffdingRecord = serde_json::from_value(value.clone()).map_err(bad)?;
            for p in &rec.curve {
                rows.push(vec![
                    "fixed_length".into(),
                    "theory".into(),
                    String::new(),
                    format!("r={}", p.r),
                    p.s_star.to_string(),
                    p.r.to_string(),
                ]);
            }
        }
        Some("simulation") => {
            let rec: SimulationRecord = serde_json::from_value(value.clone()).map_err(bad)?;
            let curve = if rec.spec.kind == "fixed_length" { "fixed_length" } else { "sequential" };
            rows.push(vec![
                curve.into(),
                "monte_carlo".into(),
                rec.spec.n.map(|n| n.to_string()).unwrap_or_default(),
                rec.spec.regime.clone(),
                rec.empirical_e0.to_string(),
                rec.empirical_e1.to_string(),
            ]);
        }
        other => return Err(CliError::Validation(format!("{}: cannot merge JSON of kind {other:?}", path.display()))),
    }
    Ok(())
}

fn report_rows_csv(path: &Path, text: &str, rows: &mut Vec<Vec<String>>) -> CliResult<()> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    let col = |name: &str| header.iter().position(|h| h == name);
    let known = header == SWEEP_HEADER || header == SIMULATE_HEADER;
    let (Some(kind), Some(n), Some(regime), Some(e0), Some(e1)) =
        (col("kind"), col("n"), col("regime"), col("empirical_e0"), col("empirical_e1"))
    else {
        return Err(CliError::Validation(format!("{}: not a simulate or sweep CSV", path.display())));
    };
    if !known {
        return Err(CliError::Validation(format!("{}: unrecognized CSV header", path.display())));
    }
    let params = ["alpha0", "alpha1", "delta", "beta", "r"].map(|p| (p, col(p)));
    for rec in rd.records() {
        let rec = rec?;
        let curve = if &rec[kind] == "fixed_length" { "fixed_length" } else { "sequential" };
        let param: Vec<String> = params
            .iter()
            .filter_map(|(name, c)| c.and_then(|c| rec.get(c)).filter(|v| !v.is_empty()).map(|v| format!("{name}={v}")))
            .collect();
        rows.push(vec![
            curve.into(),
            "monte_carlo".into(),
            rec[n].to_string(),
            core::iter::once(rec[regime].to_string()).chain(param).collect::<Vec<_>>().join(";"),
            rec[e0].to_string(),
            rec[e1].to_string(),
        ]);
    }
    Ok(())
}

fn cmd_report(a: &ReportArgs) -> CliResult<()> {
    let mut rows = Vec::new();
    for path in &a.inputs {
        let text = read_text(path)?;
        match serde_json::from_str::<serde_json::Value>(&text) {
            Ok(v) => report_rows_json(path, &v, &mut rows)?,
            Err(_) => report_rows_csv(path, &text, &mut rows)?,
        }
    }
    emit(&a.out, &csv_bytes(&REPORT_HEADER, rows)?)
}

pub fn execute(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Hoeffding(a) => cmd_hoeffding(a),
        Command::Report(a) => cmd_report(a),
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("advseq: {e}");
            e.exit_code()
        }
    }
}
