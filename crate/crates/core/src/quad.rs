//! Numerical integration.
//!
//! Globally adaptive 7/15-point Gauss-Kronrod quadrature with the QUADPACK
//! error heuristics, the Wynn epsilon algorithm for sequence acceleration,
//! and a Fourier-cosine integrator that sums half-period contributions
//! between consecutive zeros of `cos(w t)` and extrapolates the resulting
//! alternating series.

use crate::error::{Error, Result};
use crate::scalar::Real;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 2000 }
    }
}

impl QuadOptions {
    pub fn tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self { abs_tol, rel_tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error: T,
    /// Integral of `|f|`, a scale for rounding-error estimates.
    pub abs_integral: T,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: Real> QuadResult<T> {
    /// Converts an unconverged result into an error.
    pub fn require(self, tolerance: f64) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::QuadratureNonConvergence {
                estimate: self.abs_error.to_f64_lossy(),
                tolerance,
            })
        }
    }
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    abs: T,
    // error already at the round-off floor: bisecting cannot help
    settled: bool,
}

fn gk15<T: Real, F: FnMut(T) -> T>(f: &mut F, a: T, b: T) -> Panel<T> {
    let half = T::c(0.5);
    let center = half * (a + b);
    let h = half * (b - a);
    let fc = f(center);
    let mut resg = fc * T::c(WG[3]);
    let mut resk = fc * T::c(WGK[7]);
    let mut resabs = resk.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = h * T::c(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + T::c(WGK[j]) * (f1 + f2);
        resabs = resabs + T::c(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg = resg + T::c(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = resk * half;
    let mut resasc = T::c(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        resasc = resasc + T::c(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut err = ((resk - resg) * h).abs();
    if resasc != T::zero() && err != T::zero() {
        let scale = (T::c(200.0) * err / resasc).powf(T::c(1.5));
        err = resasc * if scale < T::one() { scale } else { T::one() };
    }
    let eps = T::epsilon();
    let floor = T::c(50.0) * eps * resabs;
    let mut settled = false;
    if resabs > T::min_positive_value() / (T::c(50.0) * eps) && err <= floor {
        err = floor;
        settled = true;
    }
    Panel { a, b, value, error: err, abs: resabs, settled }
}

/// Integrates `f` over the finite interval `[a, b]`.
pub fn integrate<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, opts: QuadOptions) -> QuadResult<T> {
    if a == b {
        return QuadResult {
            value: T::zero(),
            abs_error: T::zero(),
            abs_integral: T::zero(),
            evaluations: 0,
            converged: true,
        };
    }
    let mut panels = vec![gk15(&mut f, a, b)];
    let mut evaluations = 15;
    let abs_tol = T::c(opts.abs_tol);
    let rel_tol = T::c(opts.rel_tol);
    loop {
        let (value, error) = panels
            .iter()
            .fold((T::zero(), T::zero()), |(v, e), p| (v + p.value, e + p.error));
        let target = abs_tol.max(rel_tol * value.abs());
        let abs_integral = panels.iter().fold(T::zero(), |s, p| s + p.abs);
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.settled)
            .fold(None, |w: Option<(usize, T)>, (i, p)| match w {
                Some((_, we)) if we >= p.error => w,
                _ => Some((i, p.error)),
            });
        // with every panel at its round-off floor the estimate is as good as it gets
        let done = error <= target || worst.is_none();
        if done || panels.len() >= opts.max_intervals {
            return QuadResult { value, abs_error: error, abs_integral, evaluations, converged: done };
        }
        let (worst, _) = worst.unwrap();
        let p = panels.swap_remove(worst);
        let mid = T::c(0.5) * (p.a + p.b);
        if mid <= p.a.min(p.b) || mid >= p.a.max(p.b) {
            // interval exhausted at machine resolution
            return QuadResult { value, abs_error: error, abs_integral, evaluations, converged: false };
        }
        panels.push(gk15(&mut f, p.a, mid));
        panels.push(gk15(&mut f, mid, p.b));
        evaluations += 30;
    }
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums.
///
/// Returns the extrapolated limit and an error estimate (the distance
/// between the last two diagonal extrapolants).
pub fn wynn_epsilon<T: Real>(partial_sums: &[T]) -> (T, T) {
    let n = partial_sums.len();
    if n == 0 {
        return (T::zero(), T::infinity());
    }
    if n < 3 {
        let last = partial_sums[n - 1];
        let err = if n == 2 { (last - partial_sums[0]).abs() } else { T::infinity() };
        return (last, err);
    }
    // e[k] holds column k of the epsilon table for the current diagonal.
    let mut prev: Vec<T> = partial_sums.to_vec();
    let mut prev_prev: Vec<T> = vec![T::zero(); n + 1];
    let mut best = partial_sums[n - 1];
    let mut best_prev = partial_sums[n - 2];
    let mut col = 0usize;
    while prev.len() > 1 {
        let mut next = Vec::with_capacity(prev.len() - 1);
        for i in 0..prev.len() - 1 {
            let d = prev[i + 1] - prev[i];
            let base = if col == 0 { T::zero() } else { prev_prev[i + 1] };
            if d == T::zero() {
                if col % 2 == 0 {
                    // an estimate column became constant
                    return (prev[i + 1], T::zero());
                }
                return (best, (best - best_prev).abs());
            }
            next.push(base + T::one() / d);
        }
        col += 1;
        if col % 2 == 0 && !next.is_empty() {
            let m = next.len();
            best = next[m - 1];
            best_prev = if m >= 2 { next[m - 2] } else { best };
        }
        prev_prev = prev;
        prev = next;
    }
    let err = (best - best_prev).abs();
    (best, err)
}

/// `∫₀^∞ g(t) cos(w t) dt` for `w > 0` and `g` eventually monotone.
///
/// Integration runs between consecutive zeros of the cosine; the sequence of
/// partial sums is accelerated with [`wynn_epsilon`]. The first panel
/// `[0, π/(2w)]` is handled by adaptive quadrature so integrable endpoint
/// behaviour of `g` is allowed.
pub fn fourier_cos<T: Real, F: FnMut(T) -> T>(mut g: F, w: T, tol: f64, max_panels: usize) -> QuadResult<T> {
    let half_period = T::PI() / w;
    let opts = QuadOptions::tol(tol * 1e-3, 1e-12);
    let first = integrate(|t| g(t) * (w * t).cos(), T::zero(), half_period * T::c(0.5), opts);
    let mut sum = first.value;
    let mut partials = Vec::with_capacity(max_panels);
    partials.push(sum);
    let mut evaluations = first.evaluations;
    let mut abs_integral = first.abs_integral;
    let mut quad_err = first.abs_error;
    let mut last_estimate = sum;
    let mut last_err = T::infinity();
    for j in 1..=max_panels {
        let a = half_period * (T::of_usize(j) - T::c(0.5));
        let b = a + half_period;
        let r = integrate(|t| g(t) * (w * t).cos(), a, b, opts);
        evaluations += r.evaluations;
        abs_integral = abs_integral + r.abs_integral;
        quad_err = quad_err + r.abs_error;
        sum = sum + r.value;
        partials.push(sum);
        if j >= 6 {
            // extrapolate on a window of the most recent partial sums
            let start = partials.len().saturating_sub(24);
            let (est, err) = wynn_epsilon(&partials[start..]);
            let spread = (est - last_estimate).abs();
            let e = err.max(spread);
            last_estimate = est;
            last_err = e;
            if e <= T::c(tol) {
                return QuadResult {
                    value: est,
                    abs_error: e + quad_err,
                    abs_integral,
                    evaluations,
                    converged: true,
                };
            }
        }
    }
    QuadResult { value: last_estimate, abs_error: last_err + quad_err, abs_integral, evaluations, converged: false }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_is_exact() {
        let r = integrate(|x: f64| x * x * x - x, 0.0, 2.0, QuadOptions::default());
        assert!((r.value - 2.0).abs() < 1e-14);
        assert!(r.converged);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫₀¹ x^{-1/2} dx = 2
        let r = integrate(|x: f64| x.powf(-0.5), 0.0, 1.0, QuadOptions::tol(1e-11, 1e-11));
        assert!((r.value - 2.0).abs() < 1e-9, "{}", r.value);
    }

    #[test]
    fn sharp_peak() {
        // ∫ 1/(x² + 1e-4) over [-1, 1] = 2·100·atan(100)
        let want = 200.0 * 100f64.atan();
        let r = integrate(|x: f64| 1.0 / (x * x + 1e-4), -1.0, 1.0, QuadOptions::default());
        assert!((r.value - want).abs() < 1e-10 * want);
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut s = 0.0;
        let partials: Vec<f64> = (1..=20)
            .map(|k| {
                s += if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
                s
            })
            .collect();
        let (est, _) = wynn_epsilon(&partials);
        assert!((est - 2f64.ln()).abs() < 1e-12, "{est}");
    }

    #[test]
    fn fourier_cos_of_rational_decay() {
        // ∫₀^∞ cos(t)/(1+t²) dt = π/(2e)
        let r = fourier_cos(|t: f64| 1.0 / (1.0 + t * t), 1.0, 1e-11, 300);
        let want = std::f64::consts::PI / (2.0 * std::f64::consts::E);
        assert!(r.converged);
        assert!((r.value - want).abs() < 1e-9, "{} vs {want}", r.value);
    }

    #[test]
    fn fourier_cos_slow_algebraic_decay() {
        // ∫₀^∞ cos(t) t^{-1/2} dt = sqrt(π/2)
        let r = fourier_cos(|t: f64| t.powf(-0.5), 1.0, 1e-10, 400);
        let want = (std::f64::consts::PI / 2.0).sqrt();
        assert!((r.value - want).abs() < 1e-8, "{} vs {want}", r.value);
    }
}
