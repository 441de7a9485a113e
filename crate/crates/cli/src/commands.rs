use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Subcommand, ValueEnum};
use goldbach_cesaro::explicit::{
    convergence_probe, evaluate_rhs_multi, DEFAULT_PROBE_CUTOFF, DEFAULT_PRUNE_EPS,
};
use goldbach_cesaro::goldbach::cesaro_lhs;
use goldbach_cesaro::quadrature::{laplace_kernel_closed_form, laplace_kernel_quadrature};
use goldbach_cesaro::stilde::{min_direct_limit, residual_envelope_scan_with};
use goldbach_cesaro::zeros::load_zeros;
use goldbach_cesaro::{Complex64, TruncationConfig, VonMangoldtTable, WeightParams, ZeroTable};

use crate::report::{
    to_csv, to_json, EnvelopeRow, LaplaceReport, ProbeReport, ProbeRow, ScanRow, StildeReport,
    VerificationReport,
};

/// The y grid used by `stilde --y-grid default`.
pub const DEFAULT_Y_GRID: [f64; 11] = [
    0.0, 0.01, -0.01, 0.05, -0.05, 0.2, -0.2, 1.0, -1.0, 5.0, -5.0,
];

/// A failed command: exit code 2 for bad parameters, 3 for unreadable or malformed input.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<goldbach_cesaro::Error> for Failure {
    fn from(e: goldbach_cesaro::Error) -> Self {
        Self {
            code: if e.is_input_error() { 3 } else { 2 },
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

fn input(message: impl Into<String>) -> Failure {
    Failure {
        code: 3,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare both sides of the explicit formula at one N
    Verify(VerifyArgs),
    /// Residual cascade over log-spaced N
    Scan(ScanArgs),
    /// Direct vs zero-expansion S̃(z) along a y grid
    Stilde(StildeArgs),
    /// Partial sums of the zero-series convergence probe
    Probe(ProbeArgs),
    /// Laplace kernel quadrature against its closed form
    LaplaceCheck(LaplaceArgs),
}

#[derive(Debug, Args)]
pub struct ZeroArgs {
    /// Zero ordinate file
    #[arg(long)]
    pub zeros: PathBuf,
    /// Use only the first M zeros
    #[arg(long)]
    pub max_zeros: Option<usize>,
}

impl ZeroArgs {
    fn load(&self) -> Result<ZeroTable, Failure> {
        load_zeros(&self.zeros, None).map_err(|e| {
            let f = Failure::from(e);
            Failure {
                message: format!("{}: {}", self.zeros.display(), f.message),
                ..f
            }
        })
    }

    fn config(&self, zeros: &ZeroTable) -> Result<TruncationConfig, Failure> {
        let cfg = TruncationConfig::for_table(zeros)
            .with_max_zeros(self.max_zeros.unwrap_or(zeros.len()));
        cfg.validate(zeros)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RhsArgs {
    #[command(flatten)]
    pub zeros: ZeroArgs,
    /// Cesàro order
    #[arg(long)]
    pub k: f64,
    /// Relative level below which opposite-sign zero pairs are skipped (0 = never)
    #[arg(long, default_value_t = DEFAULT_PRUNE_EPS)]
    pub prune_eps: f64,
    /// Allow 1/2 < k <= 1, where the identity is unproven
    #[arg(long)]
    pub experimental_low_k: bool,
    /// Use the unnormalized weights (N - n)^k / Γ(k+1)
    #[arg(long)]
    pub unnormalized: bool,
}

impl RhsArgs {
    fn config(&self, zeros: &ZeroTable) -> Result<TruncationConfig, Failure> {
        if !(self.prune_eps >= 0.0 && self.prune_eps <= 1.0) {
            return Err(usage(format!(
                "--prune-eps must lie in [0, 1], got {}",
                self.prune_eps
            )));
        }
        let cfg = self.zeros.config(zeros)?.with_prune_eps(self.prune_eps);
        cfg.validate(zeros)?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub rhs: RhsArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub n_min: u64,
    #[arg(long)]
    pub n_max: u64,
    /// Number of log-spaced lengths (duplicates after rounding are dropped)
    #[arg(long)]
    pub points: usize,
    #[command(flatten)]
    pub rhs: RhsArgs,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StildeArgs {
    /// Real part of z
    #[arg(long)]
    pub a: f64,
    /// Comma-separated imaginary parts, or "default"
    #[arg(long, default_value = "default")]
    pub y_grid: String,
    #[command(flatten)]
    pub zeros: ZeroArgs,
    /// von Mangoldt table limit for the direct sum (default: the smallest adequate, at least 1000)
    #[arg(long)]
    pub limit: Option<usize>,
    /// Leave the log 2π constant out of the zero expansion
    #[arg(long)]
    pub without_constant: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub alpha: f64,
    #[command(flatten)]
    pub zeros: ZeroArgs,
    /// e-folds of exp(-γ arctan(1/u)) kept by each inner integral
    #[arg(long, default_value_t = DEFAULT_PROBE_CUTOFF)]
    pub cutoff: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct LaplaceArgs {
    #[arg(long)]
    pub s: f64,
    #[arg(long, default_value_t = 0.0)]
    pub s_im: f64,
    /// Real part of the kernel shift a
    #[arg(long)]
    pub aa: f64,
    #[arg(long, default_value_t = 0.0)]
    pub aa_im: f64,
    #[arg(long)]
    pub d: f64,
    /// Integration range is [-cutoff, cutoff] plus an asymptotic tail
    #[arg(long, default_value_t = 200.0)]
    pub cutoff: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Rendered output and where it goes.
pub struct Output {
    pub text: String,
    pub path: Option<PathBuf>,
    /// Extra line for stderr (summaries that do not fit a CSV table).
    pub note: Option<String>,
}

fn encode_json<T: serde::Serialize>(value: &T) -> Result<String, Failure> {
    to_json(value).map_err(|e| usage(format!("cannot encode report: {e}")))
}

fn encode_csv<T: serde::Serialize>(rows: &[T]) -> Result<String, Failure> {
    to_csv(rows).map_err(|e| usage(format!("cannot encode report: {e}")))
}

fn lambda_table(limit: u64) -> Result<VonMangoldtTable, Failure> {
    let limit = usize::try_from(limit).map_err(|_| usage("N too large"))?;
    Ok(VonMangoldtTable::build(limit.max(2))?)
}

pub fn run(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Verify(a) => {
            let report = verify(a)?;
            let text = match a.output.format {
                Format::Json => encode_json(&report)?,
                Format::Csv => encode_csv(&[report])?,
            };
            Ok(Output {
                text,
                path: a.output.out.clone(),
                note: None,
            })
        }
        Command::Scan(a) => {
            let rows = scan(a)?;
            let text = match a.format {
                Format::Json => encode_json(&rows)?,
                Format::Csv => encode_csv(&rows)?,
            };
            Ok(Output {
                text,
                path: a.out.clone(),
                note: None,
            })
        }
        Command::Stilde(a) => {
            let report = stilde(a)?;
            let note = Some(format!("max ratio {:.17e}", report.max_ratio));
            let text = match a.format {
                Format::Json => encode_json(&report)?,
                Format::Csv => encode_csv(&report.points)?,
            };
            Ok(Output {
                text,
                path: a.out.clone(),
                note,
            })
        }
        Command::Probe(a) => {
            let report = probe(a)?;
            let text = match a.output.format {
                Format::Json => encode_json(&report)?,
                Format::Csv => encode_csv(&report.partial_sums)?,
            };
            let note = report
                .final_increment
                .map(|v| format!("final relative increment {v:.17e}"));
            Ok(Output {
                text,
                path: a.output.out.clone(),
                note,
            })
        }
        Command::LaplaceCheck(a) => {
            let report = laplace(a)?;
            let text = match a.output.format {
                Format::Json => encode_json(&report)?,
                Format::Csv => encode_csv(&[report])?,
            };
            Ok(Output {
                text,
                path: a.output.out.clone(),
                note: None,
            })
        }
    }
}

// LHS and RHS for each N; shared by verify and scan
fn cascade(ns: &[u64], args: &RhsArgs) -> Result<(Vec<VerificationReport>, ZeroTable), Failure> {
    let start = Instant::now();
    let zeros = args.zeros.load()?;
    let cfg = args.config(&zeros)?;
    let k = args.k;
    let t_rhs = Instant::now();
    let rhs = evaluate_rhs_multi(ns, k, &zeros, &cfg, args.experimental_low_k)?;
    let elapsed_rhs = t_rhs.elapsed().as_secs_f64();
    let t_lhs = Instant::now();
    let table = lambda_table(ns.iter().copied().max().unwrap_or(2))?;
    let mut reports = Vec::with_capacity(ns.len());
    for (&n, b) in ns.iter().zip(&rhs) {
        let lhs = cesaro_lhs(&WeightParams::new(n, k, !args.unnormalized)?, &table)?;
        // the analytic side is stated for normalized weights; unnormalized scales by N^k
        let scale = if args.unnormalized {
            (n as f64).powf(k)
        } else {
            1.0
        };
        let (main, single, double) = (
            b.main_term * scale,
            b.single_sum * scale,
            b.double_sum * scale,
        );
        let r0 = lhs - main;
        let r1 = r0 - single;
        let r2 = r1 - double;
        reports.push(VerificationReport {
            n,
            k,
            normalized: !args.unnormalized,
            zeros_source: zeros.source().to_string(),
            max_zeros: cfg.max_zeros,
            prune_eps: args.prune_eps,
            experimental_low_k: args.experimental_low_k,
            lhs,
            main_term: main,
            single_sum: single,
            double_sum: double,
            rhs_total: main + single + double,
            tail_single: b.tail_single * scale,
            tail_double: b.tail_double * scale,
            zeros_used: b.zeros_used,
            pairs_evaluated: b.pairs_evaluated,
            pairs_pruned: b.pairs_pruned,
            r0,
            r1,
            r2,
            elapsed_lhs_s: 0.0,
            elapsed_rhs_s: elapsed_rhs,
            elapsed_total_s: 0.0,
        });
    }
    let elapsed_lhs = t_lhs.elapsed().as_secs_f64();
    let total = start.elapsed().as_secs_f64();
    for r in &mut reports {
        r.elapsed_lhs_s = elapsed_lhs;
        r.elapsed_total_s = total;
    }
    Ok((reports, zeros))
}

pub fn verify(a: &VerifyArgs) -> Result<VerificationReport, Failure> {
    let (mut reports, _) = cascade(&[a.n], &a.rhs)?;
    Ok(reports.remove(0))
}

/// `points` log-spaced integers from `lo` to `hi` inclusive, rounded and deduplicated.
pub fn log_spaced(lo: u64, hi: u64, points: usize) -> Vec<u64> {
    if points <= 1 || lo == hi {
        return vec![lo];
    }
    let (l, h) = ((lo as f64).ln(), (hi as f64).ln());
    let mut ns: Vec<u64> = (0..points)
        .map(|i| (l + (h - l) * i as f64 / (points - 1) as f64).exp().round() as u64)
        .collect();
    ns[points - 1] = hi;
    ns.dedup();
    ns
}

pub fn scan(a: &ScanArgs) -> Result<Vec<ScanRow>, Failure> {
    if a.n_min == 0 || a.n_max < a.n_min || a.points == 0 {
        return Err(usage(format!(
            "need 0 < --n-min <= --n-max and --points >= 1, got {}..{} with {} points",
            a.n_min, a.n_max, a.points
        )));
    }
    let ns = log_spaced(a.n_min, a.n_max, a.points);
    let (reports, _) = cascade(&ns, &a.rhs)?;
    Ok(reports
        .iter()
        .map(|r| ScanRow {
            n: r.n,
            lhs: r.lhs,
            main: r.main_term,
            single: r.single_sum,
            double: r.double_sum,
            r0: r.r0,
            r1: r.r1,
            r2: r.r2,
            tail_single: r.tail_single,
            tail_double: r.tail_double,
        })
        .collect())
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, Failure> {
    if text.trim() == "default" {
        return Ok(DEFAULT_Y_GRID.to_vec());
    }
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| usage(format!("bad --y-grid entry {t:?}: {e}")))
        })
        .collect()
}

pub fn stilde(a: &StildeArgs) -> Result<StildeReport, Failure> {
    if a.a.is_nan() || a.a <= 0.0 {
        return Err(usage(format!("--a must be positive, got {}", a.a)));
    }
    let grid = parse_grid(&a.y_grid)?;
    let zeros = a.zeros.load()?;
    let cfg = a.zeros.config(&zeros)?;
    let limit = a.limit.unwrap_or_else(|| min_direct_limit(a.a).max(1000));
    let table = VonMangoldtTable::build(limit)?;
    let scan = residual_envelope_scan_with(a.a, &grid, &table, &zeros, &cfg, !a.without_constant)?;
    let points: Vec<EnvelopeRow> = scan
        .iter()
        .map(|p| EnvelopeRow {
            y: p.y,
            direct_re: p.direct.re,
            direct_im: p.direct.im,
            explicit_re: p.explicit.re,
            explicit_im: p.explicit.im,
            residual: p.residual,
            envelope: p.envelope,
            ratio: p.ratio,
        })
        .collect();
    Ok(StildeReport {
        a: a.a,
        zeros_source: zeros.source().to_string(),
        max_zeros: cfg.max_zeros,
        lambda_limit: limit,
        include_constant: !a.without_constant,
        max_ratio: points.iter().map(|p| p.ratio).fold(0.0, f64::max),
        points,
    })
}

pub fn probe(a: &ProbeArgs) -> Result<ProbeReport, Failure> {
    let zeros = a.zeros.load()?;
    let mut cfg = a.zeros.config(&zeros)?;
    cfg.quadrature_cutoff = a.cutoff;
    let result = convergence_probe(a.alpha, &zeros, &cfg)?;
    Ok(ProbeReport {
        alpha: a.alpha,
        zeros_source: zeros.source().to_string(),
        max_zeros: cfg.max_zeros,
        cutoff: a.cutoff,
        final_increment: result.final_increment,
        partial_sums: result
            .partial_sums
            .iter()
            .map(|&(m, s)| ProbeRow { m, partial_sum: s })
            .collect(),
    })
}

pub fn laplace(a: &LaplaceArgs) -> Result<LaplaceReport, Failure> {
    let s = Complex64::new(a.s, a.s_im);
    let shift = Complex64::new(a.aa, a.aa_im);
    let est = laplace_kernel_quadrature(s, shift, a.d, a.cutoff)?;
    let exact = laplace_kernel_closed_form(s, shift, a.d)?;
    Ok(LaplaceReport {
        s_re: a.s,
        s_im: a.s_im,
        a_re: a.aa,
        a_im: a.aa_im,
        d: a.d,
        cutoff: a.cutoff,
        quadrature_re: est.value.re,
        quadrature_im: est.value.im,
        error_estimate: est.error,
        closed_form_re: exact.map(|c| c.re),
        closed_form_im: exact.map(|c| c.im),
        abs_diff: exact.map(|c| (est.value - c).norm()),
    })
}

pub fn write_output(out: &Output) -> Result<(), Failure> {
    match &out.path {
        Some(p) => std::fs::write(p, &out.text)
            .map_err(|e| input(format!("cannot write {}: {e}", p.display()))),
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(out.text.as_bytes())
                .map_err(|e| input(format!("cannot write to stdout: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spacing() {
        assert_eq!(log_spaced(500, 4000, 4), vec![500, 1000, 2000, 4000]);
        assert_eq!(
            log_spaced(500, 8000, 6),
            vec![500, 871, 1516, 2639, 4595, 8000]
        );
        assert_eq!(log_spaced(10, 11, 5), vec![10, 11]);
        assert_eq!(log_spaced(77, 900, 1), vec![77]);
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("default").unwrap().len(), 11);
        assert_eq!(parse_grid("0, -1.5,2e-2").unwrap(), vec![0.0, -1.5, 0.02]);
        assert_eq!(parse_grid("1,x").unwrap_err().code, 2);
    }
}
