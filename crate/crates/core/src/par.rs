//! Deterministic parallel reductions.
//!
//! Index ranges are cut into chunks of a fixed size that does not depend on
//! the thread count. Each chunk is summed sequentially and the partial sums
//! are folded in chunk order, so results are bit-identical for any pool size.

use num_complex::Complex64;
use rayon::prelude::*;

pub(crate) const CHUNK: usize = 1 << 12;

/// Sum `term(i)` over `0..len`.
pub(crate) fn sum_complex<F>(len: usize, term: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<Complex64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                acc += term(i);
            }
            acc
        })
        .collect();
    partials
        .into_iter()
        .fold(Complex64::new(0.0, 0.0), |a, b| a + b)
}

/// Sum a fixed-width vector of complex terms over `0..len`.
///
/// `accumulate(i, acc)` adds the contribution of index `i` into `acc`, which
/// has length `width`.
pub(crate) fn sum_complex_vec<F>(len: usize, width: usize, accumulate: F) -> Vec<Complex64>
where
    F: Fn(usize, &mut [Complex64]) + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<Vec<Complex64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            let mut acc = vec![Complex64::new(0.0, 0.0); width];
            for i in lo..hi {
                accumulate(i, &mut acc);
            }
            acc
        })
        .collect();
    let mut total = vec![Complex64::new(0.0, 0.0); width];
    for part in partials {
        for (t, v) in total.iter_mut().zip(part) {
            *t += v;
        }
    }
    total
}

/// Real-valued counterpart of [`sum_complex`].
pub(crate) fn sum_real<F>(len: usize, term: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let partials: Vec<f64> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(len);
            (lo..hi).map(&term).sum::<f64>()
        })
        .collect();
    partials.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunked_sum_matches_sequential_and_is_pool_independent() {
        let len = 3 * CHUNK + 17;
        let term = |i: usize| Complex64::new((i as f64).sin(), (i as f64 * 0.3).cos());
        let seq: Complex64 = (0..len).map(term).sum();
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let four = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap();
        let a = one.install(|| sum_complex(len, term));
        let b = four.install(|| sum_complex(len, term));
        assert_eq!(a, b);
        assert!((a - seq).norm() < 1e-9);
    }

    #[test]
    fn vector_sum_handles_empty_range() {
        let v = sum_complex_vec(0, 3, |_, _| unreachable!());
        assert_eq!(v, vec![Complex64::new(0.0, 0.0); 3]);
    }
}
