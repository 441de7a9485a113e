//! Compensated accumulators and a chunked reduction whose result does not depend on
//! how many worker threads execute it.
//!
//! Every long sum in the crate goes through [`CompensatedSum`] (Neumaier's variant of
//! Kahan summation). Parallel reductions split the index range into fixed-size chunks,
//! accumulate each chunk independently and merge the partial accumulators in ascending
//! chunk order, so the rounding sequence is fixed by the chunk size alone.

use std::ops::AddAssign;

use num_complex::Complex64;
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial accumulator into this one.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.carry);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Componentwise compensated sum of complex values.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ComplexCompensatedSum {
    re: CompensatedSum,
    im: CompensatedSum,
}

impl ComplexCompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn merge(&mut self, other: &ComplexCompensatedSum) {
        self.re.merge(&other.re);
        self.im.merge(&other.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Runs `work` over `[0, len)` split into chunks of `chunk` indices, in parallel, and
/// returns the per-chunk results in ascending chunk order.
///
/// The chunk layout depends only on `len` and `chunk`, never on the thread count.
pub fn map_chunks<T, F>(len: usize, chunk: usize, work: F) -> Vec<T>
where
    T: Send,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    assert!(chunk > 0, "chunk size must be positive");
    let n_chunks = len.div_ceil(chunk);
    (0..n_chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * chunk;
            work(start..(start + chunk).min(len))
        })
        .collect()
}

/// Deterministic parallel compensated sum of `term(i)` for `i` in `[0, len)`.
pub fn chunked_sum<F>(len: usize, chunk: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync + Send,
{
    let partials = map_chunks(len, chunk, |range| {
        range.map(&term).collect::<CompensatedSum>()
    });
    let mut total = CompensatedSum::new();
    for p in &partials {
        total.merge(p);
    }
    total.value()
}
