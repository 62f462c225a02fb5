//! Small Monte-Carlo statistics used by the tests and the verification harness.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::{Compensated, Real};

/// Asymptotic 1% critical constant of the one-sample Kolmogorov-Smirnov test.
pub const KS_C99: f64 = 1.63;

/// `sup_x |F_n(x) - F(x)|` for the empirical cdf of `samples`.
pub fn ks_statistic<T, F>(samples: &[T], cdf: F) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<T> + Sync,
{
    if samples.is_empty() {
        return Err(invalid("samples", 0.0, "at least one sample is required"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite samples"));
    let n = T::of_usize(sorted.len());
    let cdfs = sorted.par_iter().map(|&x| cdf(x)).collect::<Result<Vec<T>>>()?;
    let d = cdfs.iter().enumerate().fold(T::zero(), |d, (i, &f)| {
        let lo = T::of_usize(i) / n;
        let hi = T::of_usize(i + 1) / n;
        d.max(hi - f).max(f - lo)
    });
    Ok(d)
}

/// Two-sample Kolmogorov-Smirnov distance.
pub fn ks_two_sample<T: Real>(a: &[T], b: &[T]) -> T {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    b.sort_by(|x, y| x.partial_cmp(y).expect("finite samples"));
    let (na, nb) = (T::of_usize(a.len()), T::of_usize(b.len()));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < a.len() && j < b.len() {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((T::of_usize(i) / na - T::of_usize(j) / nb).abs());
    }
    d
}

/// A Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub mean: T,
    pub se: T,
}

impl<T: Real> Estimate<T> {
    /// Number of standard errors separating the estimate from `target`.
    pub fn z_score(&self, target: T) -> T {
        if self.se == T::zero() {
            return if self.mean == target { T::zero() } else { T::infinity() };
        }
        (self.mean - target).abs() / self.se
    }

    pub fn within(&self, target: T, sigmas: T) -> bool {
        self.z_score(target) <= sigmas
    }
}

/// Sample mean and its standard error `s/√n`.
pub fn mean_se<T: Real>(values: &[T]) -> Estimate<T> {
    let n = values.len();
    if n == 0 {
        return Estimate { mean: T::nan(), se: T::nan() };
    }
    let mut s = Compensated::default();
    for &v in values {
        s.add(v);
    }
    let mean = s.value() / T::of_usize(n);
    if n == 1 {
        return Estimate { mean, se: T::zero() };
    }
    let mut ss = Compensated::default();
    for &v in values {
        ss.add((v - mean) * (v - mean));
    }
    let var = ss.value() / T::of_usize(n - 1);
    Estimate { mean, se: (var / T::of_usize(n)).sqrt() }
}

/// Mean of a serially correlated series with a batch-means standard error.
pub fn batch_means<T: Real>(values: &[T], batches: usize) -> Estimate<T> {
    let batches = batches.max(2).min(values.len().max(1));
    let len = values.len() / batches;
    if len == 0 {
        return mean_se(values);
    }
    let means: Vec<T> = values
        .chunks_exact(len)
        .take(batches)
        .map(|c| mean_se(c).mean)
        .collect();
    mean_se(&means)
}

/// Proportion of `hits` in `n` trials with the binomial standard error at `p_ref`.
pub fn proportion<T: Real>(hits: usize, n: usize, p_ref: T) -> Estimate<T> {
    let nf = T::of_usize(n);
    Estimate { mean: T::of_usize(hits) / nf, se: binomial_sigma(p_ref, n) }
}

/// `√(p(1-p)/n)`.
pub fn binomial_sigma<T: Real>(p: T, n: usize) -> T {
    (p * (T::one() - p) / T::of_usize(n)).sqrt()
}

/// Empirical quantile by linear interpolation between order statistics.
pub fn quantile<T: Real>(sorted: &[T], p: T) -> T {
    let n = sorted.len();
    if n == 0 {
        return T::nan();
    }
    let h = p.max(T::zero()).min(T::one()) * T::of_usize(n - 1);
    let i = h.floor().to_usize().unwrap_or(0).min(n - 1);
    let j = (i + 1).min(n - 1);
    sorted[i] + (h - T::of_usize(i)) * (sorted[j] - sorted[i])
}

/// One histogram bin; `count` includes pooled outliers for the edge bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin<T> {
    pub left: T,
    pub right: T,
    pub count: usize,
}

/// Equal-width histogram over the central 99% of the data, binned by the
/// Freedman-Diaconis rule; values outside that range are pooled into the
/// first and last bins.
pub fn histogram<T: Real>(values: &[T]) -> Vec<Bin<T>> {
    let mut sorted = values.to_vec();
    sorted.retain(|v| v.is_finite());
    if sorted.len() < 2 {
        return Vec::new();
    }
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let lo = quantile(&sorted, T::c(0.005));
    let hi = quantile(&sorted, T::c(0.995));
    let iqr = quantile(&sorted, T::c(0.75)) - quantile(&sorted, T::c(0.25));
    let width = T::c(2.0) * iqr / T::of_usize(sorted.len()).cbrt();
    if !(hi > lo) || !(width > T::zero()) {
        return vec![Bin { left: sorted[0], right: sorted[sorted.len() - 1], count: sorted.len() }];
    }
    let bins = ((hi - lo) / width).ceil().to_usize().unwrap_or(1).clamp(1, 10_000);
    let width = (hi - lo) / T::of_usize(bins);
    let mut counts = vec![0usize; bins];
    for &v in &sorted {
        let b = ((v - lo) / width).floor().max(T::zero()).to_usize().unwrap_or(0).min(bins - 1);
        counts[b] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(b, count)| {
            let left = lo + T::of_usize(b) * width;
            Bin { left, right: left + width, count }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_exact_quantiles_is_half_a_step() {
        let n = 1000;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let d = ks_statistic(&xs, |x| Ok(x)).unwrap();
        assert!((d - 0.5 / n as f64).abs() < 1e-12);
    }

    #[test]
    fn two_sample_distance() {
        let a = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(ks_two_sample(&a, &a), 0.0);
        assert_eq!(ks_two_sample(&a, &[10.0, 11.0]), 1.0);
    }

    #[test]
    fn mean_and_standard_error() {
        let e = mean_se(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(e.mean, 2.5);
        assert!((e.se - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
        assert!(e.within(2.5, 0.0));
        assert_eq!(mean_se(&[7.0]).se, 0.0);
    }

    #[test]
    fn batch_means_of_constant_blocks() {
        let v: Vec<f64> = (0..100).map(|i| (i / 50) as f64).collect();
        let e = batch_means(&v, 2);
        assert_eq!(e.mean, 0.5);
        assert!((e.se - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quantiles_and_histogram() {
        let v: Vec<f64> = (0..=100).map(|i| i as f64).collect();
        assert_eq!(quantile(&v, 0.5), 50.0);
        assert_eq!(quantile(&v, 0.255), 25.5);
        let h = histogram(&v);
        assert_eq!(h.iter().map(|b| b.count).sum::<usize>(), v.len());
        assert!(h.windows(2).all(|w| w[0].right == w[1].left));
        let mut heavy: Vec<f64> = (0..1000).map(|i| i as f64).collect();
        heavy.push(1e9);
        assert!(histogram(&heavy).last().unwrap().right < 1000.0);
        assert_eq!(histogram(&heavy).iter().map(|b| b.count).sum::<usize>(), heavy.len());
        assert!(histogram::<f64>(&[1.0]).is_empty());
        assert_eq!(histogram(&[2.0, 2.0, 2.0])[0].count, 3);
    }
}
