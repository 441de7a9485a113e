//! Von Mangoldt function via a linear smallest-prime-factor sieve.

use crate::error::{Error, Result};
use crate::summation::CompensatedSum;

/// Λ(m) for `1 <= m <= limit`, together with its support (the prime powers).
#[derive(Debug, Clone)]
pub struct VonMangoldtTable {
    limit: usize,
    lambda: Vec<f64>,
    prime_powers: Vec<(usize, f64)>,
    // psi_prefix[i] = Σ Λ over prime_powers[..=i]
    psi_prefix: Vec<f64>,
}

impl VonMangoldtTable {
    pub fn build(limit: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain(format!(
                "sieve limit must be at least 2, got {limit}"
            )));
        }
        let spf = smallest_prime_factors(limit);
        let mut lambda = vec![0.0; limit + 1];
        let mut prime_powers = Vec::new();
        for m in 2..=limit {
            let p = spf[m] as usize;
            let mut r = m;
            while r % p == 0 {
                r /= p;
            }
            if r == 1 {
                let l = (p as f64).ln();
                lambda[m] = l;
                prime_powers.push((m, l));
            }
        }
        let mut acc = CompensatedSum::new();
        let psi_prefix = prime_powers
            .iter()
            .map(|&(_, l)| {
                acc.add(l);
                acc.value()
            })
            .collect();
        Ok(Self {
            limit,
            lambda,
            prime_powers,
            psi_prefix,
        })
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    /// Λ(m). Panics if `m` is 0 or beyond the sieve limit.
    pub fn lambda(&self, m: usize) -> f64 {
        assert!(
            m >= 1 && m <= self.limit,
            "m = {m} outside [1, {}]",
            self.limit
        );
        self.lambda[m]
    }

    /// Ascending `(m, Λ(m))` for every prime power `m <= limit`.
    pub fn prime_powers(&self) -> &[(usize, f64)] {
        &self.prime_powers
    }

    /// Chebyshev's ψ(x) = Σ_{m ≤ x} Λ(m).
    pub fn psi(&self, x: f64) -> Result<f64> {
        if !(x >= 0.0) || x > self.limit as f64 {
            return Err(Error::domain(format!(
                "psi argument {x} outside [0, {}]",
                self.limit
            )));
        }
        let count = self.prime_powers.partition_point(|&(m, _)| (m as f64) <= x);
        Ok(if count == 0 {
            0.0
        } else {
            self.psi_prefix[count - 1]
        })
    }
}

fn smallest_prime_factors(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
        }
        let si = spf[i];
        for &p in &primes {
            let ip = i * p as usize;
            if p > si || ip > limit {
                break;
            }
            spf[ip] = p;
        }
    }
    spf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive_lambda(m: usize) -> f64 {
        if m < 2 {
            return 0.0;
        }
        let mut n = m;
        let mut factors = Vec::new();
        let mut d = 2;
        while d * d <= n {
            if n.is_multiple_of(d) {
                factors.push(d);
                while n.is_multiple_of(d) {
                    n /= d;
                }
            }
            d += 1;
        }
        if n > 1 {
            factors.push(n);
        }
        if factors.len() == 1 {
            (factors[0] as f64).ln()
        } else {
            0.0
        }
    }

    #[test]
    fn small_values() {
        let t = VonMangoldtTable::build(100).unwrap();
        assert_eq!(t.lambda(8), 2f64.ln());
        assert_eq!(t.lambda(12), 0.0);
        assert_eq!(t.lambda(97), 97f64.ln());
        assert_eq!(t.lambda(1), 0.0);
    }

    #[test]
    fn rejects_tiny_limit() {
        assert!(matches!(VonMangoldtTable::build(1), Err(Error::Domain(_))));
        assert!(VonMangoldtTable::build(2).is_ok());
    }

    #[test]
    fn psi_values() {
        let t = VonMangoldtTable::build(100).unwrap();
        assert_eq!(t.psi(1.0).unwrap(), 0.0);
        // prime powers up to 10: 2,3,4,5,7,8,9 -> product 2^3 3^2 5 7 = 2520
        assert!((t.psi(10.0).unwrap() - 2520f64.ln()).abs() < 1e-13);
        assert!((t.psi(10.5).unwrap() - 2520f64.ln()).abs() < 1e-13);
        assert!(t.psi(100.5).is_err());
        assert!(t.psi(-1.0).is_err());
    }

    #[test]
    fn psi_is_nondecreasing() {
        let t = VonMangoldtTable::build(5000).unwrap();
        let mut prev = 0.0;
        for i in 0..=10_000 {
            let v = t.psi(i as f64 * 0.5).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn agrees_with_trial_division() {
        let t = VonMangoldtTable::build(10_000).unwrap();
        for m in 1..=10_000 {
            assert_eq!(t.lambda(m), naive_lambda(m), "m = {m}");
            let l = t.lambda(m);
            if l > 0.0 {
                let p = l.exp().round() as usize;
                assert_eq!(m % p, 0);
            }
        }
        let pp = t.prime_powers();
        assert!(pp.windows(2).all(|w| w[0].0 < w[1].0));
        assert_eq!(
            pp.len(),
            (1..=10_000).filter(|&m| t.lambda(m) > 0.0).count()
        );
    }
}
