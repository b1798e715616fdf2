//! The `xyzchain` command-line front end.
//!
//! Exit codes: 0 success, 1 internal or I/O failure, 2 invalid arguments,
//! 3 a check ran to completion and failed (`scan` found a positive
//! derivative, `verify` exceeded its tolerance).

pub mod config;
pub mod csv;
pub mod presets;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{
    self, CriticalTemperature, ScanConfig, SweepSpec, SweepVariable, DEFAULT_SCAN_H,
    DEFAULT_SCAN_KTS, DEFAULT_SCAN_THRESHOLD,
};
use crate::concurrence::concurrence;
use crate::error::Error;
use crate::model::{bell_probabilities, derive_params, Couplings};
use crate::oracle;
use config::ConfigFile;
use csv::{fmt_sig, SWEEP_HEADER};

/// Tolerance of `verify` on `|C_closed − C_oracle|`.
pub const VERIFY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "xyzchain", version, about = "Thermal entanglement of the two-qubit XYZ Heisenberg chain")]
pub struct Cli {
    /// Flat key=value settings file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Worker threads for sweeps and scans (default: all cores).
    #[arg(long, global = true, env = "XYZCHAIN_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence, branch and thermal parameters at one point.
    Eval(PointArgs),
    /// Sweep one parameter (or run a figure preset) and write CSV.
    Sweep(SweepArgs),
    /// Bell-state probability table; same CSV schema as `sweep`.
    Probs(SweepArgs),
    /// Critical temperature by scan and bisection.
    Tc(TcArgs),
    /// Search a coupling grid for dC/d(kT) > 0.
    Scan(ScanArgs),
    /// Compare the closed form with the Wootters oracle on random samples.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Default, Args)]
#[command(allow_negative_numbers = true)]
pub struct CouplingArgs {
    #[arg(long)]
    pub jx: Option<f64>,
    #[arg(long)]
    pub jy: Option<f64>,
    #[arg(long)]
    pub jz: Option<f64>,
    /// Δ = jx − jy (use together with --sigma instead of --jx/--jy)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Σ = jx + jy
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct PointArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[arg(long)]
    pub kt: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    #[arg(long)]
    pub kt: Option<f64>,
    /// delta | sigma | jz | jx | jy | kt | anisotropy
    #[arg(long)]
    pub var: Option<String>,
    #[arg(long)]
    pub from: Option<f64>,
    #[arg(long)]
    pub to: Option<f64>,
    #[arg(long)]
    pub steps: Option<usize>,
    /// fig1 … fig8 (fig5a/fig6a are aliases of fig7/fig8)
    #[arg(long)]
    pub preset: Option<String>,
    /// Output CSV path (default: stdout)
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct TcArgs {
    #[command(flatten)]
    pub couplings: CouplingArgs,
    /// Lower end of the kt bracket (default 0.01)
    #[arg(long)]
    pub from: Option<f64>,
    /// Upper end of the kt bracket (default 5)
    #[arg(long)]
    pub to: Option<f64>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct ScanArgs {
    /// Couplings run over [-range, range] (default 2)
    #[arg(long)]
    pub range: Option<f64>,
    /// Lattice spacing (default 0.05)
    #[arg(long)]
    pub step: Option<f64>,
    /// Comma-separated temperatures (default 0.1,0.3,0.6,1.0,2.0)
    #[arg(long, value_delimiter = ',')]
    pub kts: Option<Vec<f64>>,
    /// Violations CSV path (default: stdout, only when violations exist)
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    /// Number of random samples (default 10000)
    #[arg(long)]
    pub n: Option<usize>,
    /// PRNG seed (default 42)
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags or values: exit 2.
    Usage(String),
    /// Numerical or I/O failure: exit 1.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Internal(m) => m,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn flag_for(e: &Error) -> Option<String> {
    match e {
        Error::NonPositiveTemperature(_) => Some("--kt".into()),
        Error::NonFiniteInput(name) => Some(format!("--{name}")),
        Error::InvalidBracket { .. } => Some("--from/--to".into()),
        Error::AtPoint { source, .. } => flag_for(source),
        _ => None,
    }
}

fn lib_error(e: Error) -> CliError {
    if e.is_validation() {
        match flag_for(&e) {
            Some(flag) => CliError::Usage(format!("{flag}: {e}")),
            None => CliError::Usage(e.to_string()),
        }
    } else {
        CliError::Internal(e.to_string())
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Internal(format!("{}: {e}", path.display()))
}

/// Flag values with the config file as fallback.
struct Settings {
    file: ConfigFile,
}

impl Settings {
    fn parsed<T: std::str::FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(text) => text
                .parse()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("--{key}: cannot parse `{text}` from config file"))),
        }
    }

    fn string(&self, flag: Option<String>, key: &str) -> Option<String> {
        flag.or_else(|| self.file.get(key).map(str::to_string))
    }

    fn list(&self, flag: Option<Vec<f64>>, key: &str) -> CliResult<Option<Vec<f64>>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.file.get(key) {
            None => Ok(None),
            Some(text) => text
                .split(',')
                .map(|t| t.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("--{key}: cannot parse `{text}` from config file"))),
        }
    }

    fn path(&self, flag: Option<PathBuf>) -> Option<PathBuf> {
        flag.or_else(|| {
            self.file
                .get("output")
                .or_else(|| self.file.get("o"))
                .map(PathBuf::from)
        })
    }

    fn couplings(&self, args: &CouplingArgs) -> CliResult<Couplings> {
        let jx = self.parsed(args.jx, "jx")?;
        let jy = self.parsed(args.jy, "jy")?;
        let jz = self.parsed(args.jz, "jz")?.unwrap_or(0.0);
        let delta = self.parsed(args.delta, "delta")?;
        let sigma = self.parsed(args.sigma, "sigma")?;
        let c = if delta.is_some() || sigma.is_some() {
            if jx.is_some() || jy.is_some() {
                return Err(CliError::Usage(
                    "--delta/--sigma cannot be combined with --jx/--jy".into(),
                ));
            }
            Couplings::from_delta_sigma(delta.unwrap_or(0.0), sigma.unwrap_or(0.0), jz)
        } else {
            Couplings::new(jx.unwrap_or(0.0), jy.unwrap_or(0.0), jz)
        };
        c.map_err(lib_error)
    }

    fn kt(&self, flag: Option<f64>) -> CliResult<f64> {
        let kt = self
            .parsed(flag, "kt")?
            .ok_or_else(|| CliError::Usage("--kt is required".into()))?;
        if !kt.is_finite() || kt <= 0.0 {
            return Err(CliError::Usage(format!("--kt: kt must be > 0 (got {kt})")));
        }
        Ok(kt)
    }
}

/// Parses `args` (including the program name) and runs the command, writing
/// normal output to `out` and diagnostics to `err`. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<i32> {
    let file = match &cli.config {
        Some(path) => ConfigFile::load(path).map_err(CliError::Usage)?,
        None => ConfigFile::default(),
    };
    let settings = Settings { file };
    let threads = match settings.parsed(cli.threads, "threads")? {
        Some(0) => return Err(CliError::Usage("--threads: must be >= 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::Internal(format!("cannot start thread pool: {e}")))?;
    // Commands write into buffers so the pool closure stays `Send`.
    let mut out_buf = Vec::new();
    let mut err_buf = Vec::new();
    let result = pool.install(|| match cli.command {
        Command::Eval(a) => cmd_eval(&settings, &a, &mut out_buf),
        Command::Sweep(a) | Command::Probs(a) => cmd_sweep(&settings, &a, &mut out_buf, &mut err_buf),
        Command::Tc(a) => cmd_tc(&settings, &a, &mut out_buf),
        Command::Scan(a) => cmd_scan(&settings, &a, &mut out_buf),
        Command::Verify(a) => cmd_verify(&settings, &a, &mut out_buf),
    });
    out.write_all(&out_buf)
        .map_err(|e| CliError::Internal(format!("stdout: {e}")))?;
    let _ = err.write_all(&err_buf);
    result
}

fn write_out(out: &mut Vec<u8>, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Internal(format!("stdout: {e}")))
}

fn cmd_eval(s: &Settings, a: &PointArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let c = s.couplings(&a.couplings)?;
    let kt = s.kt(a.kt)?;
    let p = derive_params(&c, kt).map_err(lib_error)?;
    let r = concurrence(&c, kt).map_err(lib_error)?;
    let probs = bell_probabilities(&c, kt).map_err(lib_error)?;
    let mut text = String::new();
    let mut line = |k: &str, v: String| text.push_str(&format!("{k:<24}{v}\n"));
    line("jx jy jz", format!("{} {} {}", fmt_sig(c.jx), fmt_sig(c.jy), fmt_sig(c.jz)));
    line("kt", fmt_sig(kt));
    line("C", fmt_sig(r.value));
    line("branch", r.branch.to_string());
    line("raw", fmt_sig(r.raw));
    line("Delta", fmt_sig(p.delta));
    line("Sigma", fmt_sig(p.sigma));
    line(
        "anisotropy",
        p.anisotropy.value().map_or_else(|| "undefined".into(), fmt_sig),
    );
    line("alpha", fmt_sig(p.alpha));
    line("beta", fmt_sig(p.beta));
    line("gamma", fmt_sig(p.gamma));
    line("Z", fmt_sig(p.z()));
    line("ln Z", fmt_sig(p.ln_z));
    line("p_phi_plus", fmt_sig(probs.phi_plus));
    line("p_phi_minus", fmt_sig(probs.phi_minus));
    line("p_psi_plus", fmt_sig(probs.psi_plus));
    line("p_psi_minus", fmt_sig(probs.psi_minus));
    line("zero_manifold_distance", fmt_sig(analysis::zero_manifold_distance(&c)));
    write_out(out, &text)?;
    Ok(0)
}

fn sweep_series(s: &Settings, a: &SweepArgs) -> CliResult<Vec<(Option<String>, SweepSpec)>> {
    if let Some(name) = s.string(a.preset.clone(), "preset") {
        let series = presets::preset(&name).ok_or_else(|| {
            CliError::Usage(format!(
                "--preset: unknown preset `{name}` (expected one of {})",
                presets::PRESET_NAMES.join(", ")
            ))
        })?;
        return Ok(series.into_iter().map(|s| (Some(s.label), s.spec)).collect());
    }
    let var_name = s
        .string(a.var.clone(), "var")
        .ok_or_else(|| CliError::Usage("either --preset or --var is required".into()))?;
    let variable: SweepVariable = var_name
        .parse()
        .map_err(|e: Error| CliError::Usage(format!("--var: {e}")))?;
    let start = s
        .parsed(a.from, "from")?
        .ok_or_else(|| CliError::Usage("--from is required".into()))?;
    let stop = s
        .parsed(a.to, "to")?
        .ok_or_else(|| CliError::Usage("--to is required".into()))?;
    let steps = s.parsed(a.steps, "steps")?.unwrap_or(101);
    let base = s.couplings(&a.couplings)?;
    let kt = if variable == SweepVariable::KT {
        start
    } else {
        s.kt(a.kt)?
    };
    let spec = SweepSpec {
        variable,
        start,
        stop,
        steps,
        base,
        kt,
    };
    spec.validate().map_err(|e| match e {
        Error::InvalidSweep(m) => CliError::Usage(format!("--from/--to/--steps: {m}")),
        Error::NonPositiveTemperature(_) if variable == SweepVariable::KT => {
            CliError::Usage(format!("--from: {e}"))
        }
        other => lib_error(other),
    })?;
    Ok(vec![(None, spec)])
}

fn cmd_sweep(s: &Settings, a: &SweepArgs, out: &mut Vec<u8>, err: &mut Vec<u8>) -> CliResult<i32> {
    let series = sweep_series(s, a)?;
    let tables = series
        .iter()
        .map(|(label, spec)| Ok((label.as_deref(), analysis::sweep(spec).map_err(lib_error)?)))
        .collect::<CliResult<Vec<_>>>()?;

    let mut buf = Vec::new();
    writeln!(buf, "{SWEEP_HEADER}").expect("in-memory write");
    let mut rows = 0;
    for (label, table) in &tables {
        csv::write_sweep_rows(&mut buf, table, *label).expect("in-memory write");
        rows += table.records.len();
    }
    match s.path(a.output.clone()) {
        Some(path) => {
            let mut file = BufWriter::new(File::create(&path).map_err(|e| io_error(&path, e))?);
            file.write_all(&buf)
                .and_then(|_| file.flush())
                .map_err(|e| io_error(&path, e))?;
            let _ = writeln!(
                err,
                "wrote {rows} rows ({} series) to {}",
                tables.len(),
                path.display()
            );
        }
        None => out
            .write_all(&buf)
            .map_err(|e| CliError::Internal(format!("stdout: {e}")))?,
    }
    Ok(0)
}

fn cmd_tc(s: &Settings, a: &TcArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let c = s.couplings(&a.couplings)?;
    let lo = s.parsed(a.from, "from")?.unwrap_or(0.01);
    let hi = s.parsed(a.to, "to")?.unwrap_or(5.0);
    let text = match analysis::critical_temperature(&c, lo, hi).map_err(lib_error)? {
        CriticalTemperature::Found(t) => format!("{t:.8}\n"),
        CriticalTemperature::Never => "none\n".to_string(),
        CriticalTemperature::AboveBracket => format!("above {hi:.8}\n"),
    };
    write_out(out, &text)?;
    Ok(0)
}

fn cmd_scan(s: &Settings, a: &ScanArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let range = s.parsed(a.range, "range")?.unwrap_or(2.0);
    if !range.is_finite() || range < 0.0 {
        return Err(CliError::Usage(format!("--range: must be >= 0 (got {range})")));
    }
    let step = s.parsed(a.step, "step")?.unwrap_or(0.05);
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::Usage(format!("--step: must be > 0 (got {step})")));
    }
    let config = ScanConfig {
        range_lo: -range,
        range_hi: range,
        step,
        kt_samples: s.list(a.kts.clone(), "kts")?.unwrap_or_else(|| DEFAULT_SCAN_KTS.to_vec()),
        h: s.parsed(None, "h")?.unwrap_or(DEFAULT_SCAN_H),
        threshold: s.parsed(None, "threshold")?.unwrap_or(DEFAULT_SCAN_THRESHOLD),
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(format!("--range/--step/--kts: {e}")))?;

    let started = Instant::now();
    let report = analysis::monotonicity_scan(&config).map_err(lib_error)?;
    let elapsed = started.elapsed();
    let mut text = format!(
        "grid: {n}^3 couplings in [{lo}, {hi}] step {step} x {k} temperatures = {total} points\n",
        n = report.axis_len,
        lo = fmt_sig(config.range_lo),
        hi = fmt_sig(config.range_hi),
        step = fmt_sig(step),
        k = config.kt_samples.len(),
        total = report.total_points,
    );
    text.push_str(&format!("h = {}, threshold = {}\n", fmt_sig(config.h), fmt_sig(config.threshold)));
    text.push_str(&format!("max dC/d(kT): {}\n", fmt_sig(report.max_derivative)));
    text.push_str(&format!("elapsed: {:.3} s\n", elapsed.as_secs_f64()));
    text.push_str(&format!("{} violations\n", report.violations.len()));
    write_out(out, &text)?;

    if report.violations.is_empty() {
        return Ok(0);
    }
    match s.path(a.output.clone()) {
        Some(path) => {
            let mut file = BufWriter::new(File::create(&path).map_err(|e| io_error(&path, e))?);
            csv::write_violations(&mut file, &report.violations)
                .and_then(|_| file.flush())
                .map_err(|e| io_error(&path, e))?;
        }
        None => csv::write_violations(out, &report.violations)
            .map_err(|e| CliError::Internal(format!("stdout: {e}")))?,
    }
    Ok(3)
}

/// One `verify` sample: couplings uniform in `[-5, 5)`, kt uniform in `[0.02, 5)`.
///
/// Draw order per sample is jx, jy, jz, kt from a ChaCha8 stream seeded with
/// `seed_from_u64(seed)`, so the seed fixes the whole sequence.
pub fn verify_samples(n: usize, seed: u64) -> Vec<(Couplings, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let jx = rng.gen_range(-5.0..5.0);
            let jy = rng.gen_range(-5.0..5.0);
            let jz = rng.gen_range(-5.0..5.0);
            let kt = rng.gen_range(0.02..5.0);
            (Couplings { jx, jy, jz }, kt)
        })
        .collect()
}

/// Largest closed-form vs oracle deviation over the samples, with its location.
pub fn max_oracle_deviation(samples: &[(Couplings, f64)]) -> crate::Result<(f64, Option<(Couplings, f64)>)> {
    let mut worst = 0.0;
    let mut at = None;
    for &(c, kt) in samples {
        let closed = concurrence(&c, kt)?.value;
        let numeric = oracle::wootters(&oracle::gibbs_state_numeric(&c, kt)?)?;
        let d = (closed - numeric).abs();
        if d > worst || at.is_none() {
            worst = d.max(worst);
            at = Some((c, kt));
        }
    }
    Ok((worst, at))
}

fn cmd_verify(s: &Settings, a: &VerifyArgs, out: &mut Vec<u8>) -> CliResult<i32> {
    let n = s.parsed(a.n, "n")?.unwrap_or(10_000);
    if n == 0 {
        return Err(CliError::Usage("--n: sample count must be >= 1".into()));
    }
    let seed = s.parsed(a.seed, "seed")?.unwrap_or(42);
    let started = Instant::now();
    let samples = verify_samples(n, seed);
    let (worst, at) = max_oracle_deviation(&samples).map_err(lib_error)?;
    let elapsed = started.elapsed();
    let pass = worst <= VERIFY_TOLERANCE;
    let mut text = format!("samples: {n} (seed {seed})\n");
    text.push_str(&format!("max |C_closed - C_oracle|: {worst:.3e}\n"));
    if let Some((c, kt)) = at {
        text.push_str(&format!("worst at: {c} kt={kt}\n"));
    }
    text.push_str(&format!("tolerance: {VERIFY_TOLERANCE:e}\n"));
    text.push_str(&format!("elapsed: {:.3} s\n", elapsed.as_secs_f64()));
    text.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    write_out(out, &text)?;
    Ok(if pass { 0 } else { 3 })
}
