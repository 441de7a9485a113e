//! `S̃(z) = Σ Λ(m) e^{-mz}` two ways: directly from the von Mangoldt table, and from the
//! zero expansion `1/z - Σ_ρ Γ(ρ) z^{-ρ} - (ζ'/ζ)(0)`. Their difference is the residual
//! whose size is compared against `|z|^{1/2}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::explicit::TruncationConfig;
use crate::sieve::VonMangoldtTable;
use crate::special::{ln_stirling_magnitude, log_gamma_unchecked};
use crate::summation::{CompensatedSum, ComplexCompensatedSum};
use crate::zeros::ZeroTable;

/// The direct sum needs `limit · a` at least this large (tail below `e^{-40}`).
pub const DIRECT_EFOLDS: f64 = 40.0;

/// The zero expansion needs `γ_max · arctan(a / max(|y|, a))` at least this large.
pub const EXPLICIT_EFOLDS: f64 = 30.0;

/// `(ζ'/ζ)(0) = log 2π`.
pub fn log_derivative_at_zero() -> f64 {
    (2.0 * PI).ln()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StildePoint {
    a: f64,
    y: f64,
}

impl StildePoint {
    pub fn new(a: f64, y: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() || !y.is_finite() {
            return Err(Error::domain(format!(
                "S̃ needs Re z > 0 and finite Im z, got a = {a}, y = {y}"
            )));
        }
        Ok(Self { a, y })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.a, self.y)
    }

    fn conj(&self) -> Self {
        Self {
            a: self.a,
            y: -self.y,
        }
    }
}

/// Smallest table limit the direct sum accepts at real part `a`.
pub fn min_direct_limit(a: f64) -> usize {
    (DIRECT_EFOLDS / a).ceil() as usize
}

/// `Σ_{m ≤ limit} Λ(m) e^{-mz}`, compensated, ascending `m`.
pub fn stilde_direct(p: &StildePoint, table: &VonMangoldtTable) -> Result<Complex64> {
    if (table.limit() as f64) * p.a < DIRECT_EFOLDS {
        return Err(Error::domain(format!(
            "direct S̃ at a = {} needs a von Mangoldt table of limit >= {}, have {}",
            p.a,
            min_direct_limit(p.a),
            table.limit()
        )));
    }
    // evaluated at |y| and conjugated, so (a, -y) is the exact conjugate of (a, y)
    let y = p.y.abs();
    let mut acc = ComplexCompensatedSum::new();
    for &(m, lambda) in table.prime_powers() {
        let m = m as f64;
        acc.add(Complex64::from_polar(lambda * (-m * p.a).exp(), -m * y));
    }
    let v = acc.value();
    Ok(if p.y < 0.0 { v.conj() } else { v })
}

/// The zero-expansion value split into its parts:
/// `value = reciprocal - zero_sum - constant`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StildeExplicit {
    pub value: Complex64,
    pub reciprocal: Complex64,
    pub zero_sum: Complex64,
    pub constant: f64,
}

/// Smallest largest-ordinate that makes the zero expansion adequate at `p`.
pub fn required_height(p: &StildePoint) -> f64 {
    EXPLICIT_EFOLDS / (p.a / p.y.abs().max(p.a)).atan()
}

// Σ_{γ>0} Γ(ρ) z^{-ρ} over the table
fn half_zero_sum(z: Complex64, rho: &[Complex64]) -> Complex64 {
    let log_z = z.ln();
    let mut acc = ComplexCompensatedSum::new();
    for &r in rho {
        acc.add((log_gamma_unchecked(r) - r * log_z).exp());
    }
    acc.value()
}

/// `1/z - Σ_ρ Γ(ρ) z^{-ρ} - log 2π` with the sum over both `ρ` and `conj ρ`.
///
/// The conjugate zeros contribute `conj(Σ Γ(ρ) conj(z)^{-ρ})`; both halves are summed
/// explicitly because for non-real `z` the two are not conjugates of each other.
pub fn stilde_explicit(
    p: &StildePoint,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<StildeExplicit> {
    cfg.validate(zeros)?;
    let gammas = &zeros.gammas()[..cfg.max_zeros];
    let required = required_height(p);
    let available = gammas.last().copied().unwrap_or(0.0);
    if available < required {
        return Err(Error::Truncation {
            required,
            available,
        });
    }
    let rho: Vec<Complex64> = gammas
        .iter()
        .map(|&g| Complex64::new(zeros.beta(), g))
        .collect();
    let z = p.z();
    let upper = half_zero_sum(z, &rho);
    let lower = half_zero_sum(p.conj().z(), &rho);
    let zero_sum = upper + lower.conj();
    let reciprocal = z.inv();
    let constant = log_derivative_at_zero();
    Ok(StildeExplicit {
        value: reciprocal - zero_sum - constant,
        reciprocal,
        zero_sum,
        constant,
    })
}

/// Bound on the zero-sum terms for `gammas` (both `ρ` and `conj ρ`) at `p`, from the
/// Stirling size of `|Γ(ρ)|` and `|z^{-ρ}| = |z|^{-β} e^{γ arg z}`.
pub fn omitted_zero_bound(p: &StildePoint, gammas: &[f64], beta: f64) -> Result<f64> {
    let z = p.z();
    let theta = z.arg().abs();
    let log_abs = -beta * z.norm().ln();
    let mut acc = CompensatedSum::new();
    for &g in gammas {
        let s = ln_stirling_magnitude(beta, g)? + log_abs;
        acc.add((s + g * theta).exp() + (s - g * theta).exp());
    }
    Ok(acc.value())
}

/// One point of a residual scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopePoint {
    pub y: f64,
    pub direct: Complex64,
    pub explicit: Complex64,
    pub residual: f64,
    pub envelope: f64,
    pub ratio: f64,
}

/// `|z|^{1/2}`, times `1 + log²(|y|/a)` when `|y| > a`.
pub fn envelope(p: &StildePoint) -> f64 {
    let base = p.z().norm().sqrt();
    if p.y.abs() > p.a {
        let l = (p.y.abs() / p.a).ln();
        base * (1.0 + l * l)
    } else {
        base
    }
}

/// `|direct - explicit| / envelope` along `y_grid` at real part `a`, in grid order.
pub fn residual_envelope_scan(
    a: f64,
    y_grid: &[f64],
    table: &VonMangoldtTable,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
) -> Result<Vec<EnvelopePoint>> {
    residual_envelope_scan_with(a, y_grid, table, zeros, cfg, true)
}

/// As [`residual_envelope_scan`]; with `include_constant = false` the `log 2π` term is
/// left out of the explicit side.
pub fn residual_envelope_scan_with(
    a: f64,
    y_grid: &[f64],
    table: &VonMangoldtTable,
    zeros: &ZeroTable,
    cfg: &TruncationConfig,
    include_constant: bool,
) -> Result<Vec<EnvelopePoint>> {
    y_grid
        .par_iter()
        .map(|&y| {
            let p = StildePoint::new(a, y)?;
            let direct = stilde_direct(&p, table)?;
            let ex = stilde_explicit(&p, zeros, cfg)?;
            let explicit = if include_constant {
                ex.value
            } else {
                ex.value + ex.constant
            };
            let residual = (direct - explicit).norm();
            let envelope = envelope(&p);
            Ok(EnvelopePoint {
                y,
                direct,
                explicit,
                residual,
                envelope,
                ratio: residual / envelope,
            })
        })
        .collect()
}

/// `(a, a · S̃(a))` for each `a`; tends to 1 as `a → 0+`.
pub fn pnt_check(a_values: &[f64], table: &VonMangoldtTable) -> Result<Vec<(f64, f64)>> {
    a_values
        .par_iter()
        .map(|&a| {
            let p = StildePoint::new(a, 0.0)?;
            Ok((a, a * stilde_direct(&p, table)?.re))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn first100() -> ZeroTable {
        ZeroTable::read(
            Cursor::new(include_str!("../../../data/zeros/first100.txt")),
            "first100",
            None,
        )
        .unwrap()
    }

    fn pt(a: f64, y: f64) -> StildePoint {
        StildePoint::new(a, y).unwrap()
    }

    #[test]
    fn point_validation() {
        assert!(StildePoint::new(0.0, 1.0).is_err());
        assert!(StildePoint::new(-1.0, 1.0).is_err());
        assert!(StildePoint::new(1.0, f64::NAN).is_err());
    }

    #[test]
    fn direct_at_a_one() {
        let t = VonMangoldtTable::build(100).unwrap();
        let v = stilde_direct(&pt(1.0, 0.0), &t).unwrap();
        let mut oracle = 0.0;
        for m in (2..=100usize).rev() {
            oracle += t.lambda(m) * (-(m as f64)).exp();
        }
        assert!((v.re - oracle).abs() < 1e-15);
        assert_eq!(v.im, 0.0);
        let lead = 2f64.ln() * (-2f64).exp();
        assert!((lead - 0.0938).abs() < 1e-4 && v.re > lead);
    }

    #[test]
    fn direct_needs_enough_terms() {
        let t = VonMangoldtTable::build(1000).unwrap();
        match stilde_direct(&pt(0.01, 0.0), &t) {
            Err(Error::Domain(msg)) => assert!(msg.contains("4000")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn direct_conjugate_symmetry_is_exact() {
        let t = VonMangoldtTable::build(5000).unwrap();
        for &(a, y) in &[(0.05, 0.3), (0.01, 2.0), (1.0, 17.0)] {
            let up = stilde_direct(&pt(a, y), &t).unwrap();
            let down = stilde_direct(&pt(a, -y), &t).unwrap();
            assert_eq!(up.conj(), down);
        }
    }

    #[test]
    fn direct_limit_doubling() {
        let small = VonMangoldtTable::build(2000).unwrap();
        let large = VonMangoldtTable::build(4000).unwrap();
        for &(a, y) in &[(0.02, 0.0), (0.05, 1.0), (0.1, -3.0)] {
            let d = (stilde_direct(&pt(a, y), &small).unwrap()
                - stilde_direct(&pt(a, y), &large).unwrap())
            .norm();
            let bound = 2.0 * (-2000.0 * a).exp() * large.psi(4000.0).unwrap();
            assert!(d <= bound, "({a}, {y}): {d} > {bound}");
        }
    }

    #[test]
    fn explicit_conjugate_symmetry_is_exact() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        for &(a, y) in &[(0.05, 0.02), (0.2, -1.0), (0.5, 0.0)] {
            let up = stilde_explicit(&pt(a, y), &z, &cfg).unwrap().value;
            let down = stilde_explicit(&pt(a, -y), &z, &cfg).unwrap().value;
            assert_eq!(up.conj(), down);
        }
    }

    #[test]
    fn explicit_real_axis_is_real() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        let v = stilde_explicit(&pt(0.1, 0.0), &z, &cfg).unwrap();
        assert_eq!(v.value.im, 0.0);
        assert_eq!(v.constant, (2.0 * PI).ln());
        assert!((v.reciprocal - Complex64::new(10.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn explicit_truncation_error() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        match stilde_explicit(&pt(0.05, 5.0), &z, &cfg) {
            Err(Error::Truncation {
                required,
                available,
            }) => {
                assert!(required > 2900.0 && available < 240.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn explicit_close_to_direct_at_small_a() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        let t = VonMangoldtTable::build(2000).unwrap();
        let p = pt(0.05, 0.0);
        let d = stilde_direct(&p, &t).unwrap();
        let e = stilde_explicit(&p, &z, &cfg).unwrap().value;
        assert!((d - e).norm() <= 5.0 * p.z().norm().sqrt());
    }

    #[test]
    fn zero_doubling_within_omitted_bound() {
        let z = first100();
        let half = TruncationConfig::for_table(&z).with_max_zeros(50);
        let full = TruncationConfig::for_table(&z);
        // the first 50 zeros reach γ ≈ 143, enough for both points below
        for &(a, y) in &[(0.05, 0.02), (0.5, -1.0)] {
            let p = pt(a, y);
            let diff = (stilde_explicit(&p, &z, &half).unwrap().value
                - stilde_explicit(&p, &z, &full).unwrap().value)
                .norm();
            let bound = omitted_zero_bound(&p, &z.gammas()[50..], z.beta()).unwrap();
            assert!(diff <= bound, "({a}, {y}): {diff} > {bound}");
        }
    }

    #[test]
    fn leading_term_dominates() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        let rel: Vec<f64> = [0.1, 0.05, 0.02]
            .iter()
            .map(|&a| {
                let v = stilde_explicit(&pt(a, 0.0), &z, &cfg).unwrap().value.re;
                (v - 1.0 / a).abs() * a
            })
            .collect();
        assert!(rel[0] > rel[1] && rel[1] > rel[2], "{rel:?}");
    }

    #[test]
    fn constant_matters_at_half() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        let t = VonMangoldtTable::build(200).unwrap();
        let with = residual_envelope_scan_with(0.5, &[0.0], &t, &z, &cfg, true).unwrap();
        let without = residual_envelope_scan_with(0.5, &[0.0], &t, &z, &cfg, false).unwrap();
        assert!(with[0].ratio <= without[0].ratio);
    }

    #[test]
    fn scan_preserves_grid_order() {
        let z = first100();
        let cfg = TruncationConfig::for_table(&z);
        let t = VonMangoldtTable::build(1000).unwrap();
        let grid = [0.5, -0.1, 0.0, 0.3];
        let scan = residual_envelope_scan(0.1, &grid, &t, &z, &cfg).unwrap();
        assert_eq!(scan.iter().map(|p| p.y).collect::<Vec<_>>(), grid);
        assert!(scan.iter().all(|p| p.ratio.is_finite()));
    }

    #[test]
    fn envelope_shape() {
        assert_eq!(envelope(&pt(0.5, 0.0)), 0.5f64.sqrt());
        let p = pt(0.05, 0.5);
        let l = 10f64.ln();
        assert!((envelope(&p) - p.z().norm().sqrt() * (1.0 + l * l)).abs() < 1e-15);
    }

    #[test]
    fn pnt_trend() {
        let t = VonMangoldtTable::build(20_000).unwrap();
        let v = pnt_check(&[0.01, 0.002, 1.0], &t).unwrap();
        assert!(v[0].1 > 0.9 && v[0].1 < 1.1);
        assert!((v[1].1 - 1.0).abs() < (v[0].1 - 1.0).abs());
        assert!(pnt_check(&[0.001], &t).is_err());
    }
}
