//! Grid-refinement studies around a discontinuity at `x = 0`.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Result, WenoError};
use crate::grid::{PointValues, UniformGrid};
use crate::interp::{interpolate_with, interpolate_with_serial, Interpolator, MethodSpec};
use crate::smoothness::IndicatorKind;
use crate::weights::Pairing;

/// Errors at or below this are treated as roundoff when estimating orders.
pub const ORDER_FLOOR: f64 = 1e-17;

/// The piecewise polynomial test function with a kink (`eta = 0`) or a
/// jump (`eta = 1`) at `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TestFunctionSpec {
    pub eta: u8,
    pub a: f64,
    pub b: f64,
}

// Coefficients from x^10 down to x^0.
const LEFT: [f64; 11] = [1.0, -1.0, 1.0, -4.0, 1.0, 1.0, 1.0, 1.0, 5.0, 3.0, 0.0];
const RIGHT: [f64; 11] = [1.0, -2.0, 3.0, -8.0, -2.0, 1.0, -2.0, -3.0, -5.0, 0.5, 0.0];

fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().fold(0.0, |acc, &a| acc * x + a)
}

impl TestFunctionSpec {
    /// `eta = 0` on `(-π/6, 1 - π/6)`, `eta = 1` on `(-1/2, 1/2)`.
    pub fn new(eta: u8) -> Result<Self> {
        let (a, b) = match eta {
            0 => {
                let s = std::f64::consts::PI / 6.0;
                (-s, 1.0 - s)
            }
            1 => (-0.5, 0.5),
            _ => {
                return Err(WenoError::InvalidParameter(format!(
                    "eta must be 0 or 1, got {eta}"
                )))
            }
        };
        Ok(Self { eta, a, b })
    }

    pub fn with_domain(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    /// Evaluates without the domain check.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            horner(&LEFT, x)
        } else {
            f64::from(self.eta) - horner(&RIGHT, x)
        }
    }
}

/// `f(x)` for `a <= x <= b`. The right end is included so that the last
/// grid node can be sampled.
pub fn test_function(spec: &TestFunctionSpec, x: f64) -> Result<f64> {
    let slack = 1e-12 * (spec.b - spec.a);
    if !(x >= spec.a - slack && x <= spec.b + slack) {
        return Err(WenoError::OutOfDomain {
            x,
            a: spec.a,
            b: spec.b,
        });
    }
    Ok(spec.eval(x))
}

/// The interval `(x_{i-1}, x_i]` containing `x = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SingularInterval {
    pub index: usize,
    /// `x_i == 0` exactly, so interval `i + 1` is affected as well.
    pub jump_on_node: bool,
}

/// Smallest `i` with `x_{i-1} < 0 <= x_i`.
pub fn locate_singular_interval(grid: &UniformGrid<f64>) -> Result<SingularInterval> {
    let zero = Err(WenoError::ZeroNotInDomain {
        a: grid.a(),
        b: grid.b(),
    });
    if !(grid.a() < 0.0 && 0.0 < grid.b()) {
        return zero;
    }
    // Nodes are monotone, so the first node >= 0 is unique.
    let guess = ((-grid.a()) / grid.spacing()).floor() as usize;
    let lo = guess.saturating_sub(2).max(1);
    let hi = (guess + 2).min(grid.intervals());
    let found = (lo..=hi)
        .find(|&i| grid.node(i - 1) < 0.0 && 0.0 <= grid.node(i))
        .or_else(|| (1..=grid.intervals()).find(|&i| grid.node(i - 1) < 0.0 && 0.0 <= grid.node(i)));
    match found {
        Some(index) => Ok(SingularInterval {
            index,
            jump_on_node: grid.node(index) == 0.0,
        }),
        None => zero,
    }
}

/// `log2(e_coarse / e_fine)`, undefined when either error is at roundoff level.
pub fn estimated_order(e_coarse: f64, e_fine: f64) -> Option<f64> {
    if e_coarse > ORDER_FLOOR && e_fine > ORDER_FLOOR {
        Some((e_coarse / e_fine).log2())
    } else {
        None
    }
}

/// Errors at signed interval offsets from the singular interval, per level.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementReport {
    pub spec: MethodSpec<f64>,
    /// Level `i` uses `2^i` subintervals.
    pub levels: Vec<u32>,
    pub offsets: Vec<i64>,
    pub singular: Vec<SingularInterval>,
    /// `errors[level][offset]`.
    pub errors: Vec<Vec<f64>>,
    /// Max-norm error over every interpolated midpoint, per level.
    pub max_errors: Vec<f64>,
    /// Mean seconds per full-grid interpolation, when timed.
    pub runtimes: Vec<Option<f64>>,
}

impl RefinementReport {
    /// Order between level index `n - 1` and `n` at offset index `j`.
    pub fn order(&self, n: usize, j: usize) -> Option<f64> {
        if n == 0 || n >= self.levels.len() {
            return None;
        }
        estimated_order(self.errors[n - 1][j], self.errors[n][j])
    }

    /// Order of the max-norm error between level index `n - 1` and `n`.
    pub fn max_order(&self, n: usize) -> Option<f64> {
        if n == 0 || n >= self.levels.len() {
            return None;
        }
        estimated_order(self.max_errors[n - 1], self.max_errors[n])
    }

    pub fn offset_index(&self, offset: i64) -> Option<usize> {
        self.offsets.iter().position(|&d| d == offset)
    }

    pub fn level_index(&self, level: u32) -> Option<usize> {
        self.levels.iter().position(|&l| l == level)
    }

    /// Error at `(level, offset)`.
    pub fn error(&self, level: u32, offset: i64) -> Option<f64> {
        Some(self.errors[self.level_index(level)?][self.offset_index(offset)?])
    }

    /// Order ending at `level` for `offset`.
    pub fn order_at(&self, level: u32, offset: i64) -> Option<f64> {
        self.order(self.level_index(level)?, self.offset_index(offset)?)
    }

    /// The finest level whose order at `offset` is defined, with that order.
    pub fn finest_defined_order(&self, offset: i64) -> Option<(u32, f64)> {
        let j = self.offset_index(offset)?;
        (1..self.levels.len())
            .rev()
            .find_map(|n| self.order(n, j).map(|o| (self.levels[n], o)))
    }
}

fn check_levels(r: usize, i_min: u32, i_max: u32) -> Result<()> {
    let need = (4 * r).next_power_of_two().trailing_zeros();
    if i_min < need {
        return Err(WenoError::InvalidParameter(format!(
            "coarsest level {i_min} too small for r = {r}, need at least {need}"
        )));
    }
    if i_max < i_min || i_max > 30 {
        return Err(WenoError::InvalidParameter(format!(
            "invalid level range {i_min}:{i_max}"
        )));
    }
    Ok(())
}

/// Refinement of an arbitrary function on `[a, b]`, with offsets measured
/// from the interval containing `x = 0`.
pub fn run_refinement_fn<F>(
    f: F,
    a: f64,
    b: f64,
    spec: &MethodSpec<f64>,
    i_min: u32,
    i_max: u32,
    offsets: &[i64],
) -> Result<RefinementReport>
where
    F: Fn(f64) -> f64 + Sync,
{
    let it = Interpolator::new(*spec)?;
    let r = spec.r();
    check_levels(r, i_min, i_max)?;
    let levels: Vec<u32> = (i_min..=i_max).collect();
    let per_level = levels
        .par_iter()
        .map(|&level| -> Result<_> {
            let grid = UniformGrid::new(a, b, 1usize << level)?;
            let singular = locate_singular_interval(&grid)?;
            let pv = PointValues::sample(&f, grid)?;
            let out = interpolate_with(&pv, &it)?;
            let first = out[0].interval as i64;
            let last = out[out.len() - 1].interval as i64;
            let errors = offsets
                .iter()
                .map(|&d| {
                    let i = singular.index as i64 + d;
                    if i < first || i > last {
                        return Err(WenoError::OffsetOutOfRange { offset: d, level });
                    }
                    let m = &out[(i - first) as usize];
                    Ok((m.value - f(m.x)).abs())
                })
                .collect::<Result<Vec<f64>>>()?;
            let max_error = out
                .iter()
                .map(|m| (m.value - f(m.x)).abs())
                .fold(0.0, f64::max);
            Ok((singular, errors, max_error))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = levels.len();
    let mut report = RefinementReport {
        spec: *spec,
        levels,
        offsets: offsets.to_vec(),
        singular: Vec::with_capacity(n),
        errors: Vec::with_capacity(n),
        max_errors: Vec::with_capacity(n),
        runtimes: vec![None; n],
    };
    for (s, e, m) in per_level {
        report.singular.push(s);
        report.errors.push(e);
        report.max_errors.push(m);
    }
    Ok(report)
}

/// Errors of `spec` on the test function at levels `i_min ..= i_max`.
pub fn run_refinement(
    func: &TestFunctionSpec,
    spec: &MethodSpec<f64>,
    i_min: u32,
    i_max: u32,
    offsets: &[i64],
) -> Result<RefinementReport> {
    if !(func.a < 0.0 && 0.0 < func.b) {
        return Err(WenoError::ZeroNotInDomain {
            a: func.a,
            b: func.b,
        });
    }
    let f = *func;
    run_refinement_fn(move |x| f.eval(x), func.a, func.b, spec, i_min, i_max, offsets)
}

/// Fills `report.runtimes` with [`time_method`] on every level.
pub fn time_report(report: &mut RefinementReport, func: &TestFunctionSpec, reps: usize) -> Result<()> {
    for (n, &level) in report.levels.iter().enumerate() {
        let grid = UniformGrid::new(func.a, func.b, 1usize << level)?;
        let pv = PointValues::sample(|x| func.eval(x), grid)?;
        report.runtimes[n] = Some(time_method(&pv, &report.spec, reps)?);
    }
    Ok(())
}

/// Mean wall-clock seconds of one serial full-grid interpolation, after
/// three untimed warm-up runs.
pub fn time_method(pv: &PointValues<f64>, spec: &MethodSpec<f64>, reps: usize) -> Result<f64> {
    if reps == 0 {
        return Err(WenoError::InvalidParameter("reps must be at least 1".into()));
    }
    let it = Interpolator::new(*spec)?;
    for _ in 0..3 {
        std::hint::black_box(interpolate_with_serial(pv, &it)?);
    }
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(interpolate_with_serial(pv, &it)?);
    }
    Ok(start.elapsed().as_secs_f64() / reps as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ReportFormat {
    Csv,
    Markdown,
    Json,
}

impl FromStr for ReportFormat {
    type Err = WenoError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            "json" => Ok(Self::Json),
            _ => Err(WenoError::UnknownFormat(s.to_string())),
        }
    }
}

/// `1.575e-08`: three fractional digits, signed two-digit exponent.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.3e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mant}e{sign}{:02}", exp.abs())
}

pub fn format_order(o: Option<f64>) -> String {
    match o {
        Some(v) => format!("{v:.3}"),
        None => "-".to_string(),
    }
}

fn pairing_name(p: Pairing) -> &'static str {
    match p {
        Pairing::Paired => "paired",
        Pairing::LegacySummed => "legacy-summed",
    }
}

fn indicator_name(k: IndicatorKind) -> &'static str {
    match k {
        IndicatorKind::Classical => "classical",
        IndicatorKind::New => "new",
    }
}

/// One-line summary of the method parameters.
pub fn describe_spec(spec: &MethodSpec<f64>) -> String {
    format!(
        "method = {}, r = {}, t = {}, epsilon = {:e}, pairing = {}, indicator = {}",
        spec.method,
        spec.params.r,
        spec.params.t,
        spec.params.epsilon,
        pairing_name(spec.pairing),
        indicator_name(spec.indicator)
    )
}

fn render_csv(rep: &RefinementReport) -> String {
    let mut out = String::from("level,offset,error,order\n");
    for (n, level) in rep.levels.iter().enumerate() {
        for (j, d) in rep.offsets.iter().enumerate() {
            let _ = writeln!(
                out,
                "{level},{d},{},{}",
                format_sci(rep.errors[n][j]),
                format_order(rep.order(n, j))
            );
        }
    }
    out
}

fn render_markdown(rep: &RefinementReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "<!-- {} -->", describe_spec(&rep.spec));
    let mut header = String::from("| i |");
    let mut rule = String::from("|---|");
    for d in &rep.offsets {
        let _ = write!(header, " e(offset {d:+}) | order |");
        rule.push_str("---:|---:|");
    }
    let timed = rep.runtimes.iter().any(Option::is_some);
    if timed {
        header.push_str(" time (s) |");
        rule.push_str("---:|");
    }
    let _ = writeln!(out, "{header}");
    let _ = writeln!(out, "{rule}");
    if rep.offsets.is_empty() {
        return out;
    }
    for (n, level) in rep.levels.iter().enumerate() {
        let _ = write!(out, "| {level} |");
        for j in 0..rep.offsets.len() {
            let _ = write!(
                out,
                " {} | {} |",
                format_sci(rep.errors[n][j]),
                format_order(rep.order(n, j))
            );
        }
        if timed {
            let t = rep.runtimes[n].map_or("-".to_string(), |t| format!("{t:.4e}"));
            let _ = write!(out, " {t} |");
        }
        out.push('\n');
    }
    out
}

fn render_json(rep: &RefinementReport) -> String {
    let mut records = Vec::new();
    for (n, level) in rep.levels.iter().enumerate() {
        for (j, d) in rep.offsets.iter().enumerate() {
            let order = rep
                .order(n, j)
                .map_or("null".to_string(), |o| format!("{o:.3}"));
            records.push(format!(
                "  {{\"level\": {level}, \"offset\": {d}, \"error\": {}, \"order\": {order}}}",
                format_sci(rep.errors[n][j])
            ));
        }
    }
    if records.is_empty() {
        "[]\n".to_string()
    } else {
        format!("[\n{}\n]\n", records.join(",\n"))
    }
}

pub fn render_report(rep: &RefinementReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(rep),
        ReportFormat::Markdown => render_markdown(rep),
        ReportFormat::Json => render_json(rep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn test_function_values() {
        let f0 = TestFunctionSpec::new(0).unwrap();
        let f1 = TestFunctionSpec::new(1).unwrap();
        assert_eq!(test_function(&f0, 0.0).unwrap(), 0.0);
        assert_eq!(test_function(&f1, 0.0).unwrap(), 1.0);
        assert_eq!(f0.eval(-1.0), 9.0);
        assert!(matches!(test_function(&f1, 0.7), Err(WenoError::OutOfDomain { .. })));
        assert!(TestFunctionSpec::new(2).is_err());
        let g = UniformGrid::new(-0.5, 0.5, 8).unwrap();
        let pv = PointValues::sample(|x| f1.eval(x), g).unwrap();
        assert_eq!(pv.values()[4], 1.0);
    }

    #[test]
    fn singular_interval() {
        let f0 = TestFunctionSpec::new(0).unwrap();
        let g = UniformGrid::new(f0.a, f0.b, 32).unwrap();
        let s = locate_singular_interval(&g).unwrap();
        assert!(g.node(s.index - 1) < 0.0 && 0.0 < g.node(s.index));
        assert!(!s.jump_on_node);
        let g = UniformGrid::new(-0.5, 0.5, 32).unwrap();
        let s = locate_singular_interval(&g).unwrap();
        assert_eq!(s.index, 16);
        assert!(s.jump_on_node);
        let g = UniformGrid::new(1.0, 2.0, 8).unwrap();
        assert!(matches!(
            locate_singular_interval(&g),
            Err(WenoError::ZeroNotInDomain { .. })
        ));
    }

    #[test]
    fn orders() {
        assert!((estimated_order(1.575e-08, 1.477e-10).unwrap() - 6.737).abs() < 1e-3);
        assert_eq!(estimated_order(3e-5, 3e-5), Some(0.0));
        assert_eq!(estimated_order(0.0, 1.0), None);
        assert_eq!(estimated_order(1.0, 5e-18), None);
    }

    #[test]
    fn sci_format() {
        assert_eq!(format_sci(1.575e-08), "1.575e-08");
        assert_eq!(format_sci(0.4125), "4.125e-01");
        assert_eq!(format_sci(12.0), "1.200e+01");
        assert_eq!(format_sci(0.0), "0.000e+00");
        assert_eq!(format_sci(3.2e-120), "3.200e-120");
        assert_eq!(format_order(Some(3.9912)), "3.991");
        assert_eq!(format_order(None), "-");
    }

    #[test]
    fn formats_parse() {
        assert_eq!("csv".parse::<ReportFormat>().unwrap(), ReportFormat::Csv);
        assert_eq!("Markdown".parse::<ReportFormat>().unwrap(), ReportFormat::Markdown);
        assert!(matches!("xml".parse::<ReportFormat>(), Err(WenoError::UnknownFormat(_))));
    }

    #[test]
    fn level_checks() {
        let f0 = TestFunctionSpec::new(0).unwrap();
        let spec = MethodSpec::progressive(3);
        assert!(run_refinement(&f0, &spec, 3, 6, &[0]).is_err());
        assert!(run_refinement(&f0, &spec, 6, 5, &[0]).is_err());
        assert!(matches!(
            run_refinement(&f0, &spec, 4, 5, &[-20]),
            Err(WenoError::OffsetOutOfRange { offset: -20, level: 4 })
        ));
    }

    #[test]
    fn empty_offsets_render_headers_only() {
        let f0 = TestFunctionSpec::new(0).unwrap();
        let rep = run_refinement(&f0, &MethodSpec::progressive(3), 5, 6, &[]).unwrap();
        assert_eq!(render_report(&rep, ReportFormat::Csv), "level,offset,error,order\n");
        assert_eq!(render_report(&rep, ReportFormat::Json), "[]\n");
        let md = render_report(&rep, ReportFormat::Markdown);
        assert!(md.contains("| i |"));
        assert!(!md.contains("e(offset"));
    }
}
