//! The arithmetic side: `r_G(n)` and its Cesàro-weighted partial sums.

use crate::error::{Error, Result};
use crate::sieve::VonMangoldtTable;
use crate::special::ln_gamma_real;
use crate::summation::{map_chunks, CompensatedSum};

// prime powers of m1 handled per parallel chunk
const PAIR_CHUNK: usize = 64;

/// Cesàro weight of order `k` at length `N`.
///
/// Normalized: `(1 - n/N)^k / Γ(k+1)`. Unnormalized: `(N - n)^k / Γ(k+1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub n: u64,
    pub k: f64,
    pub normalized: bool,
}

impl WeightParams {
    pub fn new(n: u64, k: f64, normalized: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("N must be positive"));
        }
        if !(k >= 0.0) || !k.is_finite() {
            return Err(Error::domain(format!(
                "Cesàro order k must be finite and >= 0, got {k}"
            )));
        }
        Ok(Self { n, k, normalized })
    }

    pub fn normalized(n: u64, k: f64) -> Result<Self> {
        Self::new(n, k, true)
    }

    fn weight_fn(&self) -> Result<impl Fn(usize) -> f64> {
        let inv_gamma = (-ln_gamma_real(self.k + 1.0)?).exp();
        let big_n = self.n as f64;
        let k = self.k;
        let normalized = self.normalized;
        Ok(move |m: usize| {
            let gap = big_n - m as f64;
            if gap < 0.0 {
                return 0.0;
            }
            // powf(0, 0) == 1, matching the plain sum at k = 0
            let base = if normalized { gap / big_n } else { gap };
            base.powf(k) * inv_gamma
        })
    }

    /// Weight attached to `r_G(n)`; zero for `n > N`.
    pub fn weight(&self, n: u64) -> Result<f64> {
        Ok(self.weight_fn()?(n as usize))
    }
}

/// `r_G(n) = Σ_{m1 + m2 = n} Λ(m1) Λ(m2)` over ordered pairs.
pub fn r_g(n: usize, table: &VonMangoldtTable) -> Result<f64> {
    if n < 2 || n > table.limit() {
        return Err(Error::domain(format!(
            "r_G argument {n} outside [2, {}]",
            table.limit()
        )));
    }
    let mut acc = CompensatedSum::new();
    for &(m1, l1) in table.prime_powers() {
        if m1 >= n {
            break;
        }
        let l2 = table.lambda(n - m1);
        if l2 > 0.0 {
            acc.add(l1 * l2);
        }
    }
    Ok(acc.value())
}

/// `Σ_{n ≤ N} r_G(n) · weight(n)`, accumulated directly over ordered prime-power pairs
/// `(m1, m2)` with `m1 + m2 ≤ N`: ascending `m1` outer, ascending `m2` inner.
pub fn cesaro_lhs(params: &WeightParams, table: &VonMangoldtTable) -> Result<f64> {
    let big_n = params.n as usize;
    if table.limit() < big_n {
        return Err(Error::domain(format!(
            "von Mangoldt table limit {} is below N = {big_n}",
            table.limit()
        )));
    }
    let weight = params.weight_fn()?;
    let pp = table.prime_powers();
    let outer = pp.partition_point(|&(m, _)| m < big_n);
    let partials = map_chunks(outer, PAIR_CHUNK, |range| {
        let mut acc = CompensatedSum::new();
        for &(m1, l1) in &pp[range] {
            for &(m2, l2) in pp {
                if m1 + m2 > big_n {
                    break;
                }
                acc.add(l1 * l2 * weight(m1 + m2));
            }
        }
        acc
    });
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    Ok(total.value())
}
