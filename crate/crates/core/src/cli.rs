//! Command-line interface: evaluation, spectra, fractional operators,
//! Dirichlet densities, and the verification suites.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::bspline::{phase_factorization, ComplexBSpline};
use crate::dirichlet::{KnotVector, WeightVector};
use crate::fractional::{frac_derivative, frac_integral, weyl_derivative, DEFAULT_WINDOW};
use crate::multivariate::exp_spline_freq;
use crate::numerics::{ExpPoly, FracOrder, Grid, McConfig};
use crate::verify::{all_passed, run_suite, Suite};
use crate::weighted::{estimate_density, Bandwidth};
use crate::{Error, Result, VerificationReport, C64};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fracspline", version, about = "Splines and fractional operators of complex order")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the complex B-spline on a grid.
    Eval(EvalArgs),
    /// Evaluate a spectrum on a frequency grid.
    Spectrum(SpectrumArgs),
    /// Apply a fractional integral or derivative to a test function.
    Fracop(FracopArgs),
    /// Estimate the density of a Dirichlet spline.
    Dirichlet(DirichletArgs),
    /// Run a verification suite and write its JSON report.
    Verify(VerifyArgs),
    /// Summarize a JSON report written by `verify`.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Series, with Fourier inversion where the series loses accuracy.
    Auto,
    Series,
    Fourier,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Order, e.g. `2.5+1i`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: C64,
    /// Grid `start:end:step`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    pub method: Method,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: C64,
    /// Frequency grid `start:end:step`.
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid,
    /// Exponential spline parameter `a ≥ 0`.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Operator {
    Integral,
    Derivative,
    /// Derivative with the `(-1)^m` sign of the right-sided inverse.
    Weyl,
}

#[derive(Debug, Args)]
pub struct FracopArgs {
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub z: C64,
    #[arg(long, value_enum)]
    pub op: Operator,
    /// `exp`, `gaussian:CENTER,WIDTH`, `power-exp:K` or `power-gauss:K`.
    #[arg(long, value_parser = parse_function, default_value = "exp")]
    pub function: ExpPoly,
    #[arg(long, value_parser = parse_grid, allow_hyphen_values = true)]
    pub grid: Grid,
    #[arg(long, default_value_t = DEFAULT_WINDOW)]
    pub window: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct DirichletArgs {
    /// Comma-separated positive weights.
    #[arg(long, value_parser = parse_list, value_delimiter = ',', required = true)]
    pub weights: Vec<f64>,
    /// Comma-separated knots.
    #[arg(long, value_parser = parse_list, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub knots: Vec<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Fixed kernel bandwidth; Silverman's rule when omitted.
    #[arg(long)]
    pub bandwidth: Option<f64>,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file; standard output when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, short)]
    pub input: PathBuf,
}

/// Parses `a`, `bi`, `a+bi` or `a-bi` (no spaces).
pub fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let bad = || format!("expected a complex number like 2.5+1i, got '{s}'");
    let t = s.trim();
    if t.is_empty() || t.contains(char::is_whitespace) {
        return Err(bad());
    }
    let finite = |z: C64| if z.re.is_finite() && z.im.is_finite() { Ok(z) } else { Err(bad()) };
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad()).and_then(finite);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |u: &str| match u {
        "" | "+" => Ok(1.0),
        "-" => Ok(-1.0),
        _ => u.parse::<f64>().map_err(|_| bad()),
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
    .and_then(finite)
}

fn parse_grid(s: &str) -> std::result::Result<Grid, String> {
    s.parse::<Grid>().map_err(|e| e.to_string())
}

fn parse_list(s: &str) -> std::result::Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("bad number '{s}'"))
}

/// Parses a test function name.
pub fn parse_function(s: &str) -> std::result::Result<ExpPoly, String> {
    let (name, args) = s.split_once(':').unwrap_or((s, ""));
    let nums: std::result::Result<Vec<f64>, _> =
        args.split(',').filter(|a| !a.is_empty()).map(|a| a.trim().parse::<f64>()).collect();
    let nums = nums.map_err(|_| format!("bad arguments in '{s}'"))?;
    let index = |nums: &[f64]| match nums {
        [k] if *k >= 0.0 && k.fract() == 0.0 && *k <= 8.0 => Ok(*k as usize),
        _ => Err(format!("'{name}' takes one integer argument in 0..=8")),
    };
    match name {
        "exp" if nums.is_empty() => Ok(ExpPoly::exp_decay()),
        "gaussian" => match nums[..] {
            [c, w] if w > 0.0 => Ok(ExpPoly::gaussian(c, w)),
            _ => Err("gaussian takes CENTER,WIDTH with WIDTH > 0".into()),
        },
        "power-exp" => Ok(ExpPoly::power_exp(index(&nums)?)),
        "power-gauss" => Ok(ExpPoly::power_gauss(index(&nums)?)),
        _ => Err(format!("unknown function '{s}'")),
    }
}

fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// A table of named columns, written as CSV or a JSON array of objects.
struct Table {
    header: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(header: Vec<&'static str>) -> Self {
        Self { header, rows: Vec::new() }
    }

    fn render(&self, format: Format) -> Result<Vec<u8>> {
        match format {
            Format::Csv => {
                let mut w = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .from_writer(Vec::new());
                let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
                w.write_record(&self.header).map_err(io)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(|v| match v {
                        Value::Number(n) => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
                        Value::Null => String::new(),
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    }))
                    .map_err(io)?;
                }
                w.into_inner().map_err(|e| Error::Usage(format!("csv: {e}")))
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|r| Value::Object(self.header.iter().map(|h| h.to_string()).zip(r.iter().cloned()).collect()))
                    .collect();
                let mut s = serde_json::to_vec_pretty(&rows).map_err(|e| Error::Usage(e.to_string()))?;
                s.push(b'\n');
                Ok(s)
            }
        }
    }
}

fn num(x: f64) -> Value {
    // JSON has no NaN; such cells become null.
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

fn write_output(path: &Option<PathBuf>, bytes: &[u8]) -> Result<()> {
    let res = match path {
        Some(p) => std::fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| Error::Usage(format!("cannot write output: {e}")))
}

fn cmd_eval(a: &EvalArgs) -> Result<i32> {
    let s = ComplexBSpline::new(a.z)?;
    let mut t = Table::new(vec!["x", "re", "im", "accuracy_loss"]);
    for x in a.grid.points() {
        let tv = s.eval_time(x);
        let (v, flag) = match a.method {
            Method::Series => (tv.value, tv.accuracy_loss),
            Method::Fourier => (s.eval_time_fourier(x), false),
            Method::Auto => (s.eval(x), tv.accuracy_loss),
        };
        t.rows.push(vec![num(x), num(v.re), num(v.im), json!(u8::from(flag).to_string())]);
    }
    write_output(&a.out.output, &t.render(a.out.format)?)?;
    Ok(EXIT_OK)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<i32> {
    if a.a < 0.0 || a.a.is_nan() {
        return Err(Error::NegativeA(a.a));
    }
    crate::numerics::ComplexOrder::spline(a.z)?;
    let mut t = Table::new(vec![
        "omega",
        "re",
        "im",
        "abs",
        "arg",
        "modulus_re",
        "modulus_im",
        "phase_re",
        "phase_im",
        "damping",
    ]);
    for w in a.grid.points() {
        let v = exp_spline_freq(a.a, a.z, w)?;
        let mut row = vec![num(w), num(v.re), num(v.im), num(v.norm()), num(v.arg())];
        match (a.a == 0.0).then(|| phase_factorization(a.z, w)) {
            Some(Ok(p)) => row.extend([
                num(p.modulus_part.re),
                num(p.modulus_part.im),
                num(p.phase_part.re),
                num(p.phase_part.im),
                num(p.damping_part.re),
            ]),
            _ => row.extend([Value::Null, Value::Null, Value::Null, Value::Null, Value::Null]),
        }
        t.rows.push(row);
    }
    write_output(&a.out.output, &t.render(a.out.format)?)?;
    Ok(EXIT_OK)
}

fn cmd_fracop(a: &FracopArgs) -> Result<i32> {
    if !(a.window > 0.0) {
        return Err(Error::Usage(format!("window must be positive, got {}", a.window)));
    }
    let z = FracOrder::new(a.z)?;
    let mut t = Table::new(vec!["x", "re", "im"]);
    for x in a.grid.points() {
        let v = match a.op {
            Operator::Integral => frac_integral(&a.function, &z, x, a.window)?,
            Operator::Derivative => frac_derivative(&a.function, &z, x, a.window)?,
            Operator::Weyl => weyl_derivative(&a.function, &z, x, a.window)?,
        };
        t.rows.push(vec![num(x), num(v.re), num(v.im)]);
    }
    write_output(&a.out.output, &t.render(a.out.format)?)?;
    Ok(EXIT_OK)
}

fn cmd_dirichlet(a: &DirichletArgs) -> Result<i32> {
    let b = WeightVector::positive(&a.weights)?;
    let tau = KnotVector::scalar(&a.knots)?;
    let bw = a.bandwidth.map(Bandwidth::Fixed).unwrap_or_default();
    let est = estimate_density(&b, &tau, McConfig::new(a.samples, a.seed, 0), bw)?;
    let mut t = Table::new(vec!["x", "density"]);
    for (x, v) in est.density.grid().points().zip(est.density.values()) {
        t.rows.push(vec![num(x), num(v.re)]);
    }
    write_output(&a.out.output, &t.render(a.out.format)?)?;
    Ok(EXIT_OK)
}

/// Serializes reports as pretty JSON with a trailing newline.
pub fn reports_json(reports: &[VerificationReport]) -> Result<Vec<u8>> {
    let mut s = serde_json::to_vec_pretty(reports).map_err(|e| Error::Usage(e.to_string()))?;
    s.push(b'\n');
    Ok(s)
}

fn summary(reports: &[VerificationReport]) -> String {
    let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.identity_id.as_str()).collect();
    let mut s = format!("{}/{} identities passed", reports.len() - failed.len(), reports.len());
    if !failed.is_empty() {
        s.push_str(&format!("; failed: {}", failed.join(", ")));
    }
    s
}

fn cmd_verify(a: &VerifyArgs) -> Result<i32> {
    let reports = run_suite(a.suite, a.seed);
    write_output(&a.output, &reports_json(&reports)?)?;
    eprintln!("{}", summary(&reports));
    Ok(if all_passed(&reports) { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_report(a: &ReportArgs) -> Result<i32> {
    let text = std::fs::read_to_string(&a.input)
        .map_err(|e| Error::Usage(format!("cannot read {}: {e}", a.input.display())))?;
    let reports: Vec<VerificationReport> =
        serde_json::from_str(&text).map_err(|e| Error::Usage(format!("not a report file: {e}")))?;
    let mut out = String::new();
    for r in &reports {
        out.push_str(&format!(
            "{}  {:<40} discrepancy {:.3e}  tolerance {:.3e}\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.identity_id,
            r.discrepancy,
            r.tolerance
        ));
    }
    out.push_str(&summary(&reports));
    out.push('\n');
    write_output(&None, out.as_bytes())?;
    Ok(if all_passed(&reports) { EXIT_OK } else { EXIT_FAILED })
}

/// Runs a parsed command, returning the exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Eval(a) => cmd_eval(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Fracop(a) => cmd_fracop(a),
        Command::Dirichlet(a) => cmd_dirichlet(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Report(a) => cmd_report(a),
    }
}

/// Parses arguments and runs; diagnostics go to stderr. Invalid input of any
/// kind exits with 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}
