//! Command-line front end: weights inspection, indicators, interpolation,
//! refinement studies, method comparison and timing.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use weno_core::harness::{format_sci, time_report};
use weno_core::interp::interpolate_all_midpoints;
use weno_core::weights::{base_vectors, classical_optimal_weights_exact, dyadic_coefficient};
use weno_core::{
    render_report, run_refinement, time_method, IndicatorKind, IndicatorSet, Method, MethodSpec,
    Pairing, PointValues, ReportFormat, TestFunctionSpec, UniformGrid, WenoParams,
};

#[derive(Debug, Parser)]
#[command(name = "weno2r", version, about = "Classical and progressive WENO-2r midpoint interpolation")]
pub struct Cli {
    /// Worker threads for parallel evaluation: a number or "auto".
    #[arg(long, global = true, default_value = "auto")]
    pub threads: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print optimal weights, dyadic coefficients and base vectors.
    Weights {
        #[arg(long, default_value_t = 3)]
        r: usize,
    },
    /// Print smoothness indicators for the stencils of a data file.
    Indicators {
        #[arg(long, default_value_t = 3)]
        r: usize,
        /// CSV file with columns x,f on a uniform grid.
        #[arg(long)]
        data: PathBuf,
        /// Only this interval (default: every interval with a full stencil).
        #[arg(long)]
        interval: Option<usize>,
        #[arg(long, value_enum)]
        indicator: Option<IndicatorArg>,
    },
    /// Interpolate every interior midpoint of a data file.
    Interp {
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Error and order table around the discontinuity of the test function.
    Refine {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        study: StudyArgs,
    },
    /// Classical and progressive tables side by side.
    Compare {
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        study: StudyArgs,
    },
    /// Mean time of one full-grid interpolation per level.
    Bench {
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
        eta: u8,
        #[arg(long, default_value = "7:7")]
        levels: String,
        #[arg(long, default_value_t = 500)]
        reps: usize,
        /// Time only the method given with --method (default: both WENO methods).
        #[arg(long)]
        only: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Classical,
    Progressive,
    LagrangeFull,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    Paired,
    LegacySummed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IndicatorArg {
    Classical,
    New,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, Args)]
pub struct MethodArgs {
    #[arg(long, default_value_t = 3)]
    pub r: usize,
    #[arg(long, value_enum, default_value_t = MethodArg::Progressive)]
    pub method: MethodArg,
    /// Weight exponent (default: r).
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long, default_value_t = 1e-16)]
    pub epsilon: f64,
    #[arg(long, value_enum, default_value_t = PairingArg::Paired)]
    pub pairing: PairingArg,
    #[arg(long, value_enum, default_value_t = IndicatorArg::New)]
    pub indicator: IndicatorArg,
}

#[derive(Debug, Args)]
pub struct StudyArgs {
    #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub eta: u8,
    /// Level range `lo:hi`; level i uses 2^i subintervals.
    #[arg(long, default_value = "5:10")]
    pub levels: String,
    /// Offsets from the singular interval: `lo:hi` or a comma list (default -r:r).
    #[arg(long, allow_hyphen_values = true)]
    pub offsets: Option<String>,
    /// Domain `a:b`, or `pi6` for (-pi/6, 1-pi/6).
    #[arg(long, allow_hyphen_values = true)]
    pub domain: Option<String>,
    #[arg(long, value_enum, default_value_t = FormatArg::Markdown)]
    pub format: FormatArg,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Also time each level with this many repetitions.
    #[arg(long)]
    pub time: Option<usize>,
}

impl MethodArgs {
    fn spec_for(&self, method: MethodArg) -> Result<MethodSpec> {
        let m = match method {
            MethodArg::Classical => Method::Classical,
            MethodArg::Progressive => Method::Progressive,
            MethodArg::LagrangeFull => Method::LagrangeFull,
        };
        let mut params = WenoParams::new(self.r).with_epsilon(self.epsilon);
        if let Some(t) = self.t {
            params = params.with_t(t);
        }
        let spec = MethodSpec::new(m, self.r)
            .with_params(params)
            .with_pairing(match self.pairing {
                PairingArg::Paired => Pairing::Paired,
                PairingArg::LegacySummed => Pairing::LegacySummed,
            })
            .with_indicator(indicator_kind(self.indicator));
        spec.validate()?;
        Ok(spec)
    }

    fn spec(&self) -> Result<MethodSpec> {
        self.spec_for(self.method)
    }
}

fn indicator_kind(a: IndicatorArg) -> IndicatorKind {
    match a {
        IndicatorArg::Classical => IndicatorKind::Classical,
        IndicatorArg::New => IndicatorKind::New,
    }
}

fn report_format(f: FormatArg) -> ReportFormat {
    match f {
        FormatArg::Csv => ReportFormat::Csv,
        FormatArg::Markdown => ReportFormat::Markdown,
        FormatArg::Json => ReportFormat::Json,
    }
}

/// `lo:hi` into an inclusive pair.
pub fn parse_levels(s: &str) -> Result<(u32, u32)> {
    let (lo, hi) = s
        .split_once(':')
        .map_or((s, s), |(a, b)| (a, b));
    let lo: u32 = lo.trim().parse().with_context(|| format!("invalid level range '{s}'"))?;
    let hi: u32 = hi.trim().parse().with_context(|| format!("invalid level range '{s}'"))?;
    if hi < lo {
        bail!("invalid level range '{s}': upper end below lower end");
    }
    Ok((lo, hi))
}

/// `lo:hi` (inclusive) or a comma-separated list of signed integers.
pub fn parse_offsets(s: &str) -> Result<Vec<i64>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if let Some((a, b)) = s.split_once(':') {
        let a: i64 = a.trim().parse().with_context(|| format!("invalid offsets '{s}'"))?;
        let b: i64 = b.trim().parse().with_context(|| format!("invalid offsets '{s}'"))?;
        if b < a {
            bail!("invalid offsets '{s}': upper end below lower end");
        }
        return Ok((a..=b).collect());
    }
    s.split(',')
        .map(|t| t.trim().parse::<i64>().with_context(|| format!("invalid offset '{t}'")))
        .collect()
}

fn parse_domain(s: &str) -> Result<(f64, f64)> {
    if s.eq_ignore_ascii_case("pi6") {
        let p = std::f64::consts::PI / 6.0;
        return Ok((-p, 1.0 - p));
    }
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| anyhow!("invalid domain '{s}', expected a:b"))?;
    let a: f64 = a.trim().parse().with_context(|| format!("invalid domain '{s}'"))?;
    let b: f64 = b.trim().parse().with_context(|| format!("invalid domain '{s}'"))?;
    Ok((a, b))
}

/// Reads a CSV with columns `x,f` and checks that the nodes are uniform.
pub fn read_point_values(path: &Path) -> Result<PointValues> {
    if !path.exists() {
        bail!("file not found: {}", path.display());
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot open {}", path.display()))?;
    let headers = rdr.headers()?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| anyhow!("{}: missing column '{name}'", path.display()))
    };
    let (cx, cf) = (col("x")?, col("f")?);
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |c: usize| -> Result<f64> {
            rec.get(c)
                .ok_or_else(|| anyhow!("row {}: missing field", n + 2))?
                .parse::<f64>()
                .with_context(|| format!("row {}: not a number", n + 2))
        };
        xs.push(parse(cx)?);
        fs.push(parse(cf)?);
    }
    if xs.len() < 2 {
        bail!("{}: need at least two rows", path.display());
    }
    let j = xs.len() - 1;
    let grid = UniformGrid::new(xs[0], xs[j], j)?;
    let h = grid.spacing();
    for w in xs.windows(2) {
        if ((w[1] - w[0]) - h).abs() > 1e-10 * h.abs() {
            bail!("{}: grid is not uniform (spacing {} vs {h})", path.display(), w[1] - w[0]);
        }
    }
    Ok(PointValues::from_values(grid, fs)?)
}

/// Text produced by one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the CLI on `argv` (including the program name).
pub fn run_cli<I, S>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => CliOutput {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => CliOutput {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    match execute(&cli) {
        Ok(stdout) => CliOutput {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => CliOutput {
            code: 1,
            stdout: String::new(),
            stderr: format!("error: {e:#}\n"),
        },
    }
}

fn execute(cli: &Cli) -> Result<String> {
    let threads = match cli.threads.as_str() {
        "auto" => 0,
        n => n
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| anyhow!("invalid --threads '{n}', expected a positive integer or auto"))?,
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(cmd: &Command) -> Result<String> {
    match cmd {
        Command::Weights { r } => cmd_weights(*r),
        Command::Indicators {
            r,
            data,
            interval,
            indicator,
        } => cmd_indicators(*r, data, *interval, *indicator),
        Command::Interp { method, data, output } => {
            let pv = read_point_values(data)?;
            let out = interpolate_all_midpoints(&pv, &method.spec()?)?;
            let mut text = String::from("interval,x,value\n");
            for m in out {
                let _ = writeln!(text, "{},{:.17e},{:.17e}", m.interval, m.x, m.value);
            }
            emit(text, output.as_deref())
        }
        Command::Refine { method, study } => {
            let spec = method.spec()?;
            let text = refine_text(&spec, study)?;
            emit(text, study.output.as_deref())
        }
        Command::Compare { method, study } => {
            let mut text = String::new();
            for m in [MethodArg::Progressive, MethodArg::Classical] {
                let spec = method.spec_for(m)?;
                if study.format == FormatArg::Markdown {
                    let _ = writeln!(text, "### {}\n", spec.method);
                }
                text.push_str(&refine_text(&spec, study)?);
                text.push('\n');
            }
            emit(text, study.output.as_deref())
        }
        Command::Bench {
            method,
            eta,
            levels,
            reps,
            only,
        } => {
            let (lo, hi) = parse_levels(levels)?;
            let func = TestFunctionSpec::new(*eta)?;
            let methods = if *only {
                vec![method.method]
            } else {
                vec![MethodArg::Classical, MethodArg::Progressive]
            };
            let mut text = String::from("level,method,r,mean_seconds\n");
            for level in lo..=hi {
                let grid = UniformGrid::new(func.a, func.b, 1usize << level)?;
                let pv = PointValues::sample(|x| func.eval(x), grid)?;
                for &m in &methods {
                    let spec = method.spec_for(m)?;
                    let t = time_method(&pv, &spec, *reps)?;
                    let _ = writeln!(text, "{level},{},{},{t:.4e}", spec.method, spec.r());
                }
            }
            Ok(text)
        }
    }
}

fn emit(text: String, output: Option<&Path>) -> Result<String> {
    match output {
        Some(p) => {
            std::fs::write(p, &text).with_context(|| format!("cannot write {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn refine_text(spec: &MethodSpec, study: &StudyArgs) -> Result<String> {
    let (lo, hi) = parse_levels(&study.levels)?;
    let r = spec.r() as i64;
    let offsets = match &study.offsets {
        Some(s) => parse_offsets(s)?,
        None => (-r..=r).collect(),
    };
    let mut func = TestFunctionSpec::new(study.eta)?;
    if let Some(d) = &study.domain {
        let (a, b) = parse_domain(d)?;
        func = func.with_domain(a, b);
    }
    let mut rep = run_refinement(&func, spec, lo, hi, &offsets)?;
    if let Some(reps) = study.time {
        time_report(&mut rep, &func, reps)?;
    }
    let format = report_format(study.format);
    let mut text = String::new();
    if format == ReportFormat::Markdown {
        let _ = writeln!(
            text,
            "<!-- function: eta = {}, domain = [{:.17}, {:.17}] -->",
            func.eta, func.a, func.b
        );
    }
    text.push_str(&render_report(&rep, format));
    Ok(text)
}

fn reduced_fractions(num: &[num_bigint::BigInt], den: &num_bigint::BigInt) -> String {
    use num_integer::Integer;
    let g = num.iter().fold(den.clone(), |g, n| g.gcd(n));
    let d = den / &g;
    num.iter()
        .map(|n| format!("{}/{}", n / &g, d))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_weights(r: usize) -> Result<String> {
    let exact = classical_optimal_weights_exact(r)?;
    let den = num_bigint::BigInt::from(1u8) << (2 * r - 1);
    let nums: Vec<num_bigint::BigInt> = exact.iter().map(|q| q.numer() * (&den / q.denom())).collect();
    let mut out = String::new();
    let _ = writeln!(out, "optimal weights (r = {r}): {}", reduced_fractions(&nums, &den));
    if r >= 3 {
        let _ = writeln!(out, "\ndyadic coefficients C^l_(k,k), C^l_(k,k+1):");
        let _ = writeln!(out, "l,k,left,right");
        for l in r..=2 * r - 2 {
            for k in 0..=2 * r - 2 - l {
                let c = dyadic_coefficient(l, k, r)?;
                let _ = writeln!(out, "{l},{k},{},{}", c.left, c.right);
            }
        }
        let _ = writeln!(out, "\nbase vectors:");
        for (k, v) in base_vectors::<num_rational::Ratio<i64>>(r)?.iter().enumerate() {
            let cells: Vec<String> = v.iter().map(|q| q.to_string()).collect();
            let _ = writeln!(out, "C_{k}^{}: ({})", r + 1, cells.join(", "));
        }
    }
    Ok(out)
}

fn cmd_indicators(r: usize, data: &Path, interval: Option<usize>, kind: Option<IndicatorArg>) -> Result<String> {
    let pv = read_point_values(data)?;
    let range = pv.admissible_intervals(r)?;
    let intervals: Vec<usize> = match interval {
        Some(i) => vec![i],
        None => range.collect(),
    };
    let kinds = match kind {
        Some(k) => vec![indicator_kind(k)],
        None => vec![IndicatorKind::New, IndicatorKind::Classical],
    };
    let mut out = String::from("interval,kind,k,value\n");
    for i in intervals {
        let s = pv.stencil(i, r)?;
        for &kind in &kinds {
            let set = IndicatorSet::compute(&s, kind)?;
            let name = match kind {
                IndicatorKind::New => "new",
                IndicatorKind::Classical => "classical",
            };
            for (k, v) in set.values().iter().enumerate() {
                let _ = writeln!(out, "{i},{name},{k},{}", format_sci(*v));
            }
        }
    }
    Ok(out)
}
