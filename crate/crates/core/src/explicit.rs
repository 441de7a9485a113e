//! The analytic side of the Cesàro-weighted Goldbach explicit formula:
//!
//! ```text
//! N²/Γ(k+3)  -  2 Σ_ρ Γ(ρ)/Γ(ρ+k+2) N^{ρ+1}  +  Σ_ρ1 Σ_ρ2 Γ(ρ1)Γ(ρ2)/Γ(ρ1+ρ2+k+1) N^{ρ1+ρ2}
//! ```
//!
//! The sums run over all nontrivial zeros while tables hold only `γ > 0`, so each sum is
//! completed through conjugate symmetry:
//!
//! * single sum: `-4 Σ_{γ>0} Re[Γ(ρ)/Γ(ρ+k+2) N^{ρ+1}]`;
//! * double sum: for each ordered pair of positive ordinates, `2 Re t(ρ1, ρ2)` (same-sign
//!   quadrants) plus `2 Re t(ρ1, conj ρ2)` (opposite-sign quadrants). Both blocks are
//!   symmetric in the pair, so only `γ2 <= γ1` is visited and off-diagonal pairs count twice.
//!
//! The opposite-sign terms carry a factor of size `e^{-π min(γ1, γ2)}` and are pruned with
//! a rigorous magnitude bound; the same-sign block decays only polynomially and is summed
//! in full.
//!
//! Every N-independent factor of a term is computed once per zero pair and reused for all
//! requested `N`, so a scan over several lengths costs one pass over the pairs.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_real, QuadratureOptions};
use crate::special::{ln_gamma_real, log_gamma, log_gamma_unchecked};
use crate::summation::{map_chunks, CompensatedSum, ComplexCompensatedSum};
use crate::zeros::{zero_density, ZeroTable, FIRST_ZERO_ORDINATE};

const SINGLE_CHUNK: usize = 256;
const PAIR_ROW_CHUNK: usize = 32;
const PROBE_CHUNK: usize = 64;

/// Multiplier applied to Stirling-size term bounds in the tail estimates.
pub const STIRLING_HEADROOM: f64 = 1.1;

/// Default relative pruning level for the opposite-sign block (scale: the main term).
pub const DEFAULT_PRUNE_EPS: f64 = 1e-15;

/// Default number of e-folds kept by the convergence probe's inner integral.
pub const DEFAULT_PROBE_CUTOFF: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    /// Number of leading ordinates used.
    pub max_zeros: usize,
    /// Natural log of the pruning level ε: an opposite-sign pair is skipped when its
    /// magnitude bound is below ε · main_term / (number of pairs). `-inf` disables pruning.
    pub prune_log_threshold: f64,
    /// Probe inner integrals keep the range where `γ·arctan(1/u)` is below this many e-folds.
    pub quadrature_cutoff: f64,
}

impl TruncationConfig {
    /// All zeros of `zeros`, default pruning and probe cutoff.
    pub fn for_table(zeros: &ZeroTable) -> Self {
        Self {
            max_zeros: zeros.len(),
            prune_log_threshold: DEFAULT_PRUNE_EPS.ln(),
            quadrature_cutoff: DEFAULT_PROBE_CUTOFF,
        }
    }

    pub fn with_max_zeros(mut self, max_zeros: usize) -> Self {
        self.max_zeros = max_zeros;
        self
    }

    pub fn with_prune_eps(mut self, eps: f64) -> Self {
        self.prune_log_threshold = eps.ln();
        self
    }

    pub fn exhaustive(mut self) -> Self {
        self.prune_log_threshold = f64::NEG_INFINITY;
        self
    }

    pub fn validate(&self, zeros: &ZeroTable) -> Result<()> {
        if self.max_zeros > zeros.len() {
            return Err(Error::domain(format!(
                "max_zeros = {} exceeds the {} zeros available",
                self.max_zeros,
                zeros.len()
            )));
        }
        if self.prune_log_threshold.is_nan() || self.prune_log_threshold > 0.0 {
            return Err(Error::domain(format!(
                "prune threshold must be <= 0 in log scale, got {}",
                self.prune_log_threshold
            )));
        }
        if !(self.quadrature_cutoff > 0.0) {
            return Err(Error::domain("quadrature cutoff must be positive"));
        }
        Ok(())
    }
}

/// Everything the analytic side produces for one `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormulaBreakdown {
    pub main_term: f64,
    pub single_sum: f64,
    pub double_sum: f64,
    pub rhs_total: f64,
    pub tail_single: f64,
    pub tail_double: f64,
    pub zeros_used: usize,
    /// Zero pairs (with `γ2 <= γ1`) whose term was computed, over both blocks.
    pub pairs_evaluated: u64,
    /// Opposite-sign pairs skipped by the pruning bound.
    pub pairs_pruned: u64,
}

/// The double sum split by block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleSum {
    pub same_sign: f64,
    pub opposite_sign: f64,
    pub total: f64,
    pub pairs_evaluated: u64,
    pub pairs_pruned: u64,
    /// Upper bound on the total magnitude of the pruned contributions.
    pub pruned_bound: f64,
}

fn check_n(ns: &[u64]) -> Result<()> {
    if ns.contains(&0) {
        return Err(Error::domain("N must be positive"));
    }
    Ok(())
}

/// `N² / Γ(k+3)`.
pub fn main_term(n: u64, k: f64) -> Result<f64> {
    check_n(&[n])?;
    if !(k >= 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("k must be finite and >= 0, got {k}")));
    }
    let nf = n as f64;
    if k.fract() == 0.0 && k <= 20.0 {
        // exact factorial for integer orders
        let gamma: f64 = (2..=(k as u32 + 2)).map(f64::from).product();
        return Ok(nf * nf / gamma);
    }
    Ok((2.0 * nf.ln() - ln_gamma_real(k + 3.0)?).exp())
}

fn check_k_positive(k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::domain(format!("k must be finite and > 0, got {k}")));
    }
    Ok(())
}

fn check_double_regime(k: f64) -> Result<()> {
    if !(k > 0.5) || !k.is_finite() {
        return Err(Error::Regime {
            k,
            min: 0.5,
            hint: " (the double zero sum is not absolutely convergent)",
        });
    }
    Ok(())
}

fn rhos(zeros: &ZeroTable, cfg: &TruncationConfig) -> Result<Vec<Complex64>> {
    cfg.validate(zeros)?;
    let beta = zeros.beta();
    Ok(zeros.gammas()[..cfg.max_zeros]
        .iter()
        .map(|&g| Complex64::new(beta, g))
        .collect())
}

/// `-2 Σ_ρ Γ(ρ)/Γ(ρ+k+2) N^{ρ+1}` for each `N` in `ns`.
pub fn single_zero_sum_multi(
    ns: &[u64],
    k: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<Vec<f64>> {
    check_n(ns)?;
    check_k_positive(k)?;
    let rho = rhos(zeros, cfg)?;
    let beta = zeros.beta();
    let logs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let partials = map_chunks(rho.len(), SINGLE_CHUNK, |range| {
        let mut acc = vec![CompensatedSum::new(); ns.len()];
        for r in &rho[range] {
            let ratio = log_gamma_unchecked(*r) - log_gamma_unchecked(*r + (k + 2.0));
            for (a, &ln_n) in acc.iter_mut().zip(&logs) {
                a.add(
                    -4.0 * (ratio.re + (beta + 1.0) * ln_n).exp() * (ratio.im + r.im * ln_n).cos(),
                );
            }
        }
        acc
    });
    Ok(merge_columns(ns.len(), &partials))
}

pub fn single_zero_sum(n: u64, k: f64, zeros: &ZeroTable, cfg: &TruncationConfig) -> Result<f64> {
    Ok(single_zero_sum_multi(&[n], k, zeros, cfg)?[0])
}

fn merge_columns(width: usize, partials: &[Vec<CompensatedSum>]) -> Vec<f64> {
    let mut total = vec![CompensatedSum::new(); width];
    for p in partials {
        for (t, c) in total.iter_mut().zip(p) {
            t.merge(c);
        }
    }
    total.iter().map(CompensatedSum::value).collect()
}

#[derive(Clone)]
struct PairPartial {
    same: Vec<CompensatedSum>,
    opposite: Vec<CompensatedSum>,
    evaluated_same: u64,
    evaluated_opposite: Vec<u64>,
    visited: Vec<u64>,
}

/// `Σ_ρ1 Σ_ρ2 Γ(ρ1)Γ(ρ2)/Γ(ρ1+ρ2+k+1) N^{ρ1+ρ2}` for each `N` in `ns`.
pub fn double_zero_sum_multi(
    ns: &[u64],
    k: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<Vec<DoubleSum>> {
    check_n(ns)?;
    check_double_regime(k)?;
    let rho = rhos(zeros, cfg)?;
    let m = rho.len();
    let beta = zeros.beta();
    let x_opp = 2.0 * beta + k + 1.0;
    let lg: Vec<Complex64> = rho.iter().map(|&r| log_gamma_unchecked(r)).collect();
    // h_j = Re log Γ(ρ_j) + π γ_j / 2 stays O(log γ_j)
    let h_max = lg
        .iter()
        .zip(&rho)
        .map(|(l, r)| l.re + PI * r.im / 2.0)
        .fold(f64::NEG_INFINITY, f64::max);
    let ln_gamma_x = ln_gamma_real(x_opp)?;
    let opposite_pairs = (m as f64) * (m as f64 + 1.0) / 2.0;

    struct PerN {
        ln_n: f64,
        // log of the largest pruned term magnitude
        threshold: f64,
        // log |t| <= offset + Re lgΓ(ρ1) + Re lgΓ(ρ2) + ln cosh(πδ)/2
        offset: f64,
    }
    let per_n: Vec<PerN> = ns
        .iter()
        .map(|&n| {
            let ln_n = (n as f64).ln();
            let threshold = cfg.prune_log_threshold + main_term(n, k)?.ln()
                - (4.0 * opposite_pairs.max(1.0)).ln();
            Ok(PerN {
                ln_n,
                threshold,
                offset: 2.0 * beta * ln_n - ln_gamma_x,
            })
        })
        .collect::<Result<_>>()?;

    let partials = map_chunks(m, PAIR_ROW_CHUNK, |range| {
        let width = ns.len();
        let mut part = PairPartial {
            same: vec![CompensatedSum::new(); width],
            opposite: vec![CompensatedSum::new(); width],
            evaluated_same: 0,
            evaluated_opposite: vec![0; width],
            visited: vec![0; width],
        };
        let mut cutoffs = vec![0.0; width];
        for i in range {
            let gi = rho[i].im;
            let hi = lg[i].re + PI * gi / 2.0;
            // opposite-sign pairs with γ_j beyond cutoffs[n] are below that N's threshold
            for (c, p) in cutoffs.iter_mut().zip(&per_n) {
                *c = (p.offset + hi + h_max - p.threshold) / PI;
            }
            let max_cut = cutoffs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for j in 0..=i {
                let gj = rho[j].im;
                let weight = if i == j { 2.0 } else { 4.0 };

                let s = Complex64::new(x_opp, gi + gj);
                let same = lg[i] + lg[j] - log_gamma_unchecked(s);
                for (acc, p) in part.same.iter_mut().zip(&per_n) {
                    acc.add(
                        weight
                            * (same.re + 2.0 * beta * p.ln_n).exp()
                            * (same.im + (gi + gj) * p.ln_n).cos(),
                    );
                }
                part.evaluated_same += 1;

                if gj > max_cut {
                    continue;
                }
                let s = Complex64::new(x_opp, gi - gj);
                let opp = lg[i] + lg[j].conj() - log_gamma_unchecked(s);
                for (idx, p) in per_n.iter().enumerate() {
                    if gj > cutoffs[idx] {
                        continue;
                    }
                    part.opposite[idx].add(
                        weight
                            * (opp.re + 2.0 * beta * p.ln_n).exp()
                            * (opp.im + (gi - gj) * p.ln_n).cos(),
                    );
                    part.evaluated_opposite[idx] += 1;
                }
            }
            for idx in 0..width {
                part.visited[idx] += i as u64 + 1;
            }
        }
        part
    });

    let width = ns.len();
    let mut same = vec![CompensatedSum::new(); width];
    let mut opposite = vec![CompensatedSum::new(); width];
    let mut evaluated_same = 0u64;
    let mut evaluated_opposite = vec![0u64; width];
    let mut visited = vec![0u64; width];
    for p in &partials {
        for idx in 0..width {
            same[idx].merge(&p.same[idx]);
            opposite[idx].merge(&p.opposite[idx]);
            evaluated_opposite[idx] += p.evaluated_opposite[idx];
            visited[idx] += p.visited[idx];
        }
        evaluated_same += p.evaluated_same;
    }
    Ok((0..width)
        .map(|idx| {
            let s = same[idx].value();
            let o = opposite[idx].value();
            let pruned = visited[idx] - evaluated_opposite[idx];
            DoubleSum {
                same_sign: s,
                opposite_sign: o,
                total: s + o,
                pairs_evaluated: evaluated_same + evaluated_opposite[idx],
                pairs_pruned: pruned,
                pruned_bound: 4.0 * pruned as f64 * per_n[idx].threshold.exp(),
            }
        })
        .collect())
}

pub fn double_zero_sum(
    n: u64,
    k: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<DoubleSum> {
    Ok(double_zero_sum_multi(&[n], k, zeros, cfg)?[0])
}

// ∫_T^∞ u^{-p} L^j du with L = log(u/2π), for j = 1, 2 (p > 1)
fn tail_moment_1(p: f64, t: f64) -> f64 {
    let l = (t / (2.0 * PI)).ln();
    let q = p - 1.0;
    t.powf(-q) * (l / q + 1.0 / (q * q))
}

fn tail_moment_2(p: f64, t: f64) -> f64 {
    let l = (t / (2.0 * PI)).ln();
    let q = p - 1.0;
    t.powf(-q) * (l * l / q + 2.0 * l / (q * q) + 2.0 / (q * q * q))
}

fn table_height(zeros: &ZeroTable) -> f64 {
    zeros
        .max_ordinate()
        .unwrap_or(FIRST_ZERO_ORDINATE)
        .max(FIRST_ZERO_ORDINATE)
}

/// Upper estimate of the omitted single-sum terms beyond the table:
/// `N^{β+1} · 4 · 1.1 · ∫_T^∞ u^{-(k+2)} log(u/2π)/2π du`, `T` the largest ordinate.
pub fn tail_estimate_single(n: u64, k: f64, zeros: &ZeroTable) -> Result<f64> {
    check_n(&[n])?;
    check_k_positive(k)?;
    let t = table_height(zeros);
    let scale = ((zeros.beta() + 1.0) * (n as f64).ln()).exp();
    Ok(scale * 4.0 * STIRLING_HEADROOM * tail_moment_1(k + 2.0, t) / (2.0 * PI))
}

/// Upper estimate of the omitted double-sum terms (pairs with an ordinate beyond the
/// table).
///
/// Same-sign pairs use `|t| <= 1.1 √(2π) N^{2β} γ2^{-1/2} γ1^{-(k+1)}` for `γ2 <= γ1`
/// (Stirling, then `(γ1+γ2)^{-(k+1/2)} <= γ1^{-(k+1/2)}`), summed exactly over the table
/// for `γ2` and against the zero density elsewhere. Opposite-sign pairs with one ordinate
/// beyond `T` carry `e^{-π γ_small}` and decay like `(γ_big - γ_small)^{-(k+3/2)}`.
pub fn tail_estimate_double(n: u64, k: f64, zeros: &ZeroTable) -> Result<f64> {
    check_n(&[n])?;
    check_double_regime(k)?;
    let t = table_height(zeros);
    let beta = zeros.beta();
    let scale = (2.0 * beta * (n as f64).ln()).exp();
    let c = STIRLING_HEADROOM * (2.0 * PI).sqrt();

    let head: f64 = zeros.gammas().iter().map(|g| g.powf(-0.5)).sum();
    let smooth_head = t.sqrt() / PI * ((t / (2.0 * PI)).ln() - 2.0);
    let inner = ((head - smooth_head).max(0.0) * tail_moment_1(k + 1.0, t) / (2.0 * PI)
        + (tail_moment_2(k + 0.5, t) - 2.0 * tail_moment_1(k + 0.5, t)) / (2.0 * PI * PI))
        .max(0.0);
    let same = 4.0 * c * scale * inner;

    let small: f64 = zeros
        .gammas()
        .iter()
        .filter(|&&g| g <= t / 2.0)
        .map(|g| (-PI * g).exp())
        .sum();
    let small = small.max((-PI * FIRST_ZERO_ORDINATE).exp());
    let opposite =
        4.0 * c * scale * small * 2f64.powf(k + 1.5) * tail_moment_1(k + 1.5, t) / (2.0 * PI);
    let both_large = 4.0
        * scale
        * (2.0 * PI / ln_gamma_real(2.0 * beta + k + 1.0)?.exp() + c)
        * (-PI * t / 2.0).exp()
        * (1.0 + zero_density(t)).powi(2)
        / PI;
    Ok(same + opposite + both_large)
}

/// Assembles the analytic side for each `N` in `ns` (one pass over the zero pairs).
///
/// `k > 1` is required unless `experimental` is set, which admits `1/2 < k <= 1` where the
/// double sum still converges but the identity is unproven.
pub fn evaluate_rhs_multi(
    ns: &[u64],
    k: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
    experimental: bool,
) -> Result<Vec<FormulaBreakdown>> {
    check_double_regime(k)?;
    if k <= 1.0 && !experimental {
        return Err(Error::Regime {
            k,
            min: 1.0,
            hint: " (use the experimental flag for 1/2 < k <= 1)",
        });
    }
    cfg.validate(zeros)?;
    let used = zeros.truncated(cfg.max_zeros);
    let single = single_zero_sum_multi(ns, k, zeros, cfg)?;
    let double = double_zero_sum_multi(ns, k, zeros, cfg)?;
    ns.iter()
        .zip(single.iter().zip(&double))
        .map(|(&n, (&single_sum, d))| {
            let main = main_term(n, k)?;
            Ok(FormulaBreakdown {
                main_term: main,
                single_sum,
                double_sum: d.total,
                rhs_total: main + single_sum + d.total,
                tail_single: tail_estimate_single(n, k, &used)?,
                tail_double: tail_estimate_double(n, k, &used)? + d.pruned_bound,
                zeros_used: cfg.max_zeros,
                pairs_evaluated: d.pairs_evaluated,
                pairs_pruned: d.pairs_pruned,
            })
        })
        .collect()
}

pub fn evaluate_rhs(
    n: u64,
    k: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
    experimental: bool,
) -> Result<FormulaBreakdown> {
    Ok(evaluate_rhs_multi(&[n], k, zeros, cfg, experimental)?[0])
}

/// `γ^{β-1/2} ∫_1^∞ exp(-γ arctan(1/u)) u^{-(α+β)} du` for one zero.
///
/// With `y = arctan(1/u)` the integral becomes `∫_0^{π/4} e^{-γy} sin(y)^{q-1} cos(y)^{-(q+1)} dy`,
/// `q = α+β-1`; the further substitution `y = t^{1/q}` removes the endpoint singularity.
/// The range is cut where `γy` exceeds `cutoff` e-folds.
pub fn probe_term(gamma: f64, alpha: f64, beta: f64, cutoff: f64) -> Result<f64> {
    let q = alpha + beta - 1.0;
    if !(q > 0.0) || !(gamma > 0.0) {
        return Err(Error::domain(format!(
            "probe term needs α + β > 1 and γ > 0, got α = {alpha}, β = {beta}, γ = {gamma}"
        )));
    }
    let y_max = (PI / 4.0).min(cutoff / gamma);
    let integrand = |t: f64| {
        let y = t.powf(1.0 / q);
        let sinc = if y < 1e-8 { 1.0 } else { y.sin() / y };
        (-gamma * y).exp() * sinc.powf(q - 1.0) * y.cos().powf(-(q + 1.0)) / q
    };
    let opts = QuadratureOptions {
        abs_tol: 1e-300,
        rel_tol: 1e-11,
        max_intervals: 4000,
    };
    let (value, err) = integrate_real(integrand, 0.0, y_max.powf(q), &opts);
    let tolerance = 1e-9 * value.abs();
    if !(err <= tolerance) {
        return Err(Error::Accuracy {
            estimate: err,
            tolerance,
        });
    }
    Ok(gamma.powf(beta - 0.5) * value)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeResult {
    pub alpha: f64,
    /// `(M, S_M)` at M = 100, 500, 1000, 5000, ... and at the table end.
    pub partial_sums: Vec<(usize, f64)>,
    /// `|S_M - S_{M/2}| / |S_M|` at the full table length `M`.
    pub final_increment: Option<f64>,
}

/// Partial sums over zeros of [`probe_term`], the series whose convergence switches on
/// at `α = 3/2`.
pub fn convergence_probe(
    alpha: f64,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<ProbeResult> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(Error::domain(format!("probe needs α > 1, got {alpha}")));
    }
    cfg.validate(zeros)?;
    let gammas = &zeros.gammas()[..cfg.max_zeros];
    let beta = zeros.beta();
    let chunks = map_chunks(gammas.len(), PROBE_CHUNK, |range| {
        gammas[range]
            .iter()
            .map(|&g| probe_term(g, alpha, beta, cfg.quadrature_cutoff))
            .collect::<Result<Vec<f64>>>()
    });
    let mut terms = Vec::with_capacity(gammas.len());
    for c in chunks {
        terms.extend(c?);
    }
    let m = terms.len();
    let mut marks: Vec<usize> = Vec::new();
    let mut decade = 100;
    while decade <= m {
        marks.push(decade);
        if 5 * decade <= m {
            marks.push(5 * decade);
        }
        decade *= 10;
    }
    if m >= 2 {
        marks.push(m / 2);
    }
    marks.push(m);
    marks.sort_unstable();
    marks.dedup();
    marks.retain(|&x| x > 0);

    let mut acc = CompensatedSum::new();
    let mut partial = Vec::with_capacity(m);
    for t in &terms {
        acc.add(*t);
        partial.push(acc.value());
    }
    let partial_sums = marks.iter().map(|&mk| (mk, partial[mk - 1])).collect();
    let final_increment =
        (m >= 2).then(|| (partial[m - 1] - partial[m / 2 - 1]).abs() / partial[m - 1].abs());
    Ok(ProbeResult {
        alpha,
        partial_sums,
        final_increment,
    })
}

/// Unsymmetrized reference evaluations that sum over `ρ` and `conj ρ` separately in
/// complex arithmetic. Quadratic in the table size; meant for cross-checks.
pub mod reference {
    use super::*;

    fn all_rhos(zeros: &ZeroTable, cfg: &TruncationConfig) -> Result<Vec<Complex64>> {
        let pos = rhos(zeros, cfg)?;
        Ok(pos.iter().flat_map(|&r| [r, r.conj()]).collect())
    }

    pub fn single_sum_complex(
        n: u64,
        k: f64,
        zeros: &ZeroTable,
        cfg: &TruncationConfig,
    ) -> Result<Complex64> {
        check_k_positive(k)?;
        let ln_n = (n as f64).ln();
        let mut acc = ComplexCompensatedSum::new();
        for r in all_rhos(zeros, cfg)? {
            acc.add((log_gamma(r)? - log_gamma(r + (k + 2.0))? + (r + 1.0) * ln_n).exp() * -2.0);
        }
        Ok(acc.value())
    }

    pub fn double_sum_complex(
        n: u64,
        k: f64,
        zeros: &ZeroTable,
        cfg: &TruncationConfig,
    ) -> Result<Complex64> {
        check_double_regime(k)?;
        let ln_n = (n as f64).ln();
        let all = all_rhos(zeros, cfg)?;
        let lg: Vec<Complex64> = all.iter().map(|&r| log_gamma(r)).collect::<Result<_>>()?;
        let mut acc = ComplexCompensatedSum::new();
        for (a, la) in all.iter().zip(&lg) {
            for (b, lb) in all.iter().zip(&lg) {
                let s = a + b + (k + 1.0);
                acc.add((la + lb - log_gamma(s)? + (a + b) * ln_n).exp());
            }
        }
        Ok(acc.value())
    }
}

/// Size of the term that the constant `-(ζ'/ζ)(0) = -log 2π` in the expansion of `S̃(z)`
/// feeds into the normalized arithmetic side through its cross term with `1/z`:
/// `-2 log(2π) N / Γ(k+2)`. It is linear in `N` and is not part of the three-term
/// analytic side above.
pub fn log_derivative_cross_term(n: u64, k: f64) -> Result<f64> {
    check_n(&[n])?;
    check_k_positive(k)?;
    Ok(-2.0 * (2.0 * PI).ln() * n as f64 / ln_gamma_real(k + 2.0)?.exp())
}
