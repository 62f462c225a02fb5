//! Evaluation kernels for the three-parameter function `E^η_{α,β}(-y)`,
//! `y ≥ 0`, `0 < α ≤ 1`.
//!
//! Three independent representations are available for `0 < α < 1`:
//!
//! * the power series `Σ (η)_j (-y)^j / (j! Γ(β + αj))`, summed in log
//!   magnitude with a rounding-error bound `ε Σ |term|`; it is abandoned
//!   once the largest term makes that bound useless;
//! * the algebraic asymptotic expansion
//!   `Γ(η)^{-1} Σ_k (-1)^k Γ(η+k)/k! · y^{-η-k}/Γ(β - α(η+k))`,
//!   truncated at its smallest term;
//! * real-axis Laplace inversion of `s^{αη-β}(1+s^α)^{-η}` along the branch
//!   cut, valid for `β < 1 + αη`:
//!   `t^{β-1} E^η_{α,β}(-t^α) = (1/π) ∫₀^∞ e^{-rt} Im[F(r e^{-iπ})] dr`.
//!   With `u = r^α` the integrand is real and free of complex arithmetic.
//!
//! Candidates are tried in the order series, asymptotic, integral; the first
//! whose error estimate meets the target wins, otherwise the best estimate
//! is returned. For `α = 1` the Kummer transformation gives a series with
//! (eventually) positive terms.

use crate::gamma::{ln_gamma, ln_gamma_abs, rgamma};
use crate::quad::{integrate, QuadOptions};
use crate::scalar::{sin_pi, Compensated, Real};

use super::{EvalResult, Regime};

const TARGET_REL: f64 = 1e-13;
const TARGET_ABS: f64 = 1e-16;
/// Largest series term tolerated before the series is abandoned.
const SERIES_MAX_TERM: f64 = 1e6;
const SERIES_MAX_TERMS: usize = 4000;
const ASYMPTOTIC_MAX_TERMS: usize = 250;

fn meets_target<T: Real>(r: &EvalResult<T>, abs_target: T) -> bool {
    r.est_abs_error <= abs_target.max(T::c(TARGET_REL) * r.value.abs())
}

/// `E^η_{α,β}(-y)`. Arguments are assumed validated.
pub(crate) fn prabhakar_neg<T: Real>(alpha: T, beta: T, eta: T, y: T) -> EvalResult<T> {
    prabhakar_neg_to(alpha, beta, eta, y, T::c(TARGET_ABS))
}

/// As [`prabhakar_neg`], accepting a candidate once its absolute error is
/// below `abs_target` (or the relative target is met). Callers that rescale
/// the result pass the floor in their own units.
pub(crate) fn prabhakar_neg_to<T: Real>(alpha: T, beta: T, eta: T, y: T, abs_target: T) -> EvalResult<T> {
    let eps = T::epsilon();
    if y == T::zero() {
        let v = rgamma(beta);
        return EvalResult::new(v, Regime::Series, 1, eps * v.abs());
    }
    if alpha == T::one() {
        if beta == T::one() && eta == T::one() {
            let v = (-y).exp();
            return EvalResult::new(v, Regime::ClosedForm, 1, eps * v);
        }
        return kummer(beta, eta, y);
    }

    let mut best: Option<EvalResult<T>> = None;

    if let Some(r) = series(alpha, beta, eta, y) {
        if consider(r, abs_target, &mut best) {
            return best.unwrap();
        }
    }
    if y >= T::one() {
        if let Some(r) = asymptotic(alpha, beta, eta, y) {
            if consider(r, abs_target, &mut best) {
                return best.unwrap();
            }
        }
    }
    if beta < T::one() + alpha * eta {
        let r = inversion_integral(alpha, beta, eta, y);
        if consider(r, abs_target, &mut best) {
            return best.unwrap();
        }
    }
    if best.is_none() {
        // no representation converged cleanly; asymptotic at least has a bound
        if let Some(r) = asymptotic(alpha, beta, eta, y) {
            best = Some(r);
        }
    }
    best.unwrap_or_else(|| EvalResult::new(T::nan(), Regime::Series, 1, T::infinity()))
}

fn consider<T: Real>(r: EvalResult<T>, abs_target: T, best: &mut Option<EvalResult<T>>) -> bool {
    if !(r.value.is_finite() && r.est_abs_error.is_finite()) {
        return false;
    }
    let ok = meets_target(&r, abs_target);
    if best.as_ref().is_none_or(|b| r.est_abs_error < b.est_abs_error) {
        *best = Some(r);
    }
    ok
}

/// Power series in log magnitude. `None` if it overflows the term budget.
pub fn series<T: Real>(alpha: T, beta: T, eta: T, y: T) -> Option<EvalResult<T>> {
    let eps = T::epsilon();
    let ln_y = y.ln();
    let mut acc = Compensated::default();
    let mut abs_sum = T::zero();
    let mut round = T::zero();
    // ln((η)_j / j!)
    let mut ln_coef = T::zero();
    let mut last_mag = T::zero();
    let mut peaked = false;
    let max_term = T::c(SERIES_MAX_TERM);
    for j in 0..SERIES_MAX_TERMS {
        if j > 0 {
            let jf = T::of_usize(j);
            ln_coef = ln_coef + ((eta + jf - T::one()) / jf).ln();
        }
        let jf = T::of_usize(j);
        let (lg, sg) = ln_gamma_abs(beta + alpha * jf);
        let ln_mag = ln_coef + jf * ln_y - lg;
        let mag = ln_mag.exp();
        if mag > max_term {
            return None;
        }
        let sign = if j % 2 == 0 { sg } else { -sg };
        let term = sign * mag;
        acc.add(term);
        abs_sum = abs_sum + mag;
        round = round + mag * (T::c(4.0) + ln_mag.abs());
        if mag < last_mag {
            peaked = true;
        }
        last_mag = mag;
        let sum = acc.value();
        if peaked && j > 2 && mag <= eps * T::c(1e-3) * sum.abs().max(T::min_positive_value()) {
            let err = eps * round + mag;
            return Some(EvalResult::new(sum, Regime::Series, j + 1, err));
        }
        if peaked && mag == T::zero() {
            return Some(EvalResult::new(sum, Regime::Series, j + 1, eps * round));
        }
    }
    let _ = abs_sum;
    None
}

/// Asymptotic expansion for `0 < α < 1`, truncated at the smallest term.
pub fn asymptotic<T: Real>(alpha: T, beta: T, eta: T, y: T) -> Option<EvalResult<T>> {
    if alpha >= T::one() {
        return None;
    }
    let eps = T::epsilon();
    let ln_y = y.ln();
    let mut acc = Compensated::default();
    let mut ln_coef = T::zero(); // ln(Γ(η+k)/(Γ(η) k!))
    let mut prev_env = T::infinity();
    let mut used = 0usize;
    let mut round = T::zero();
    for k in 0..ASYMPTOTIC_MAX_TERMS {
        let kf = T::of_usize(k);
        if k > 0 {
            ln_coef = ln_coef + ((eta + kf - T::one()) / kf).ln();
        }
        let arg = beta - alpha * (eta + kf);
        let ln_pow = ln_coef - (eta + kf) * ln_y;
        // Near a pole 1/Γ(arg) is accidentally tiny, so truncation is judged on the
        // envelope 1/|Γ(x)| ≤ Γ(1-x)/π instead of the term itself.
        let env = if arg <= T::zero() {
            (ln_pow + ln_gamma(T::one() - arg)).exp() / T::PI()
        } else {
            (ln_pow - ln_gamma(arg)).exp()
        };
        if env > prev_env {
            // past the smallest term: the omitted tail is of this size
            return Some(EvalResult::new(acc.value(), Regime::Asymptotic, used.max(1), env + eps * round));
        }
        prev_env = env;
        used = k + 1;
        let (lg, sg) = ln_gamma_abs(arg);
        if sg != T::zero() {
            let ln_mag = ln_pow - lg;
            let mag = ln_mag.exp();
            let sign = if k % 2 == 0 { sg } else { -sg };
            acc.add(sign * mag);
            round = round + mag * (T::c(4.0) + ln_mag.abs());
        }
        if env <= eps * T::c(1e-3) * acc.value().abs() {
            return Some(EvalResult::new(acc.value(), Regime::Asymptotic, used, env + eps * round));
        }
    }
    Some(EvalResult::new(acc.value(), Regime::Asymptotic, used.max(1), prev_env + eps * round))
}

/// Branch-cut Laplace inversion, valid for `0 < α < 1` and `β < 1 + αη`.
pub fn inversion_integral<T: Real>(alpha: T, beta: T, eta: T, y: T) -> EvalResult<T> {
    let one = T::one();
    let t = y.powf(one / alpha);
    let inv_alpha = one / alpha;
    let cos_pa = (T::PI() * alpha).cos();
    let sin_pa = sin_pi(alpha);
    // phase offset π(αη - β)
    let phase = T::PI() * (alpha * eta - beta);
    let p = eta - one + (one - beta) / alpha;
    let norm = one / (alpha * T::PI());
    let ln_t = t.ln();

    // u ∈ (0, 1]; u = v^m removes the u^p endpoint singularity when p < 0
    let m = if p < T::zero() { one / (p + one) } else { one };
    let lower = move |v: T| -> T {
        if v <= T::zero() {
            return T::zero();
        }
        let u = v.powf(m);
        let rho2 = one + T::c(2.0) * u * cos_pa + u * u;
        let theta = (u * sin_pa).atan2(one + u * cos_pa);
        let ln_u = u.ln();
        // e^{-u^{1/α} t} u^p ρ^{-η} · m v^{m-1}, with u^p v^{m-1} = v^{m(p+1)-1}
        let expo = -(ln_u * inv_alpha + ln_t).exp() - T::c(0.5) * eta * rho2.ln()
            + (m * (p + one) - one) * v.ln();
        m * expo.exp() * (eta * theta - phase).sin()
    };
    // w = 1/u ∈ (0, 1]
    let q = (beta - one) / alpha - one;
    let upper = move |w: T| -> T {
        if w <= T::zero() {
            return T::zero();
        }
        let rho2 = w * w + T::c(2.0) * w * cos_pa + one;
        let theta = sin_pa.atan2(w + cos_pa);
        let ln_w = w.ln();
        let expo = -(ln_t - ln_w * inv_alpha).exp() + q * ln_w - T::c(0.5) * eta * rho2.ln();
        expo.exp() * (eta * theta - phase).sin()
    };

    let lower_brk = breakpoints(T::one() / y.max(one), m);
    let upper_brk = breakpoints(y.min(one) * T::c(1e-2), one);

    // A coarse pass fixes the absolute scale; the fine pass then works to a
    // shared absolute target, which cancelling panels cannot make unreachable.
    let coarse = QuadOptions { abs_tol: 1e-300, rel_tol: 1e-6, max_intervals: 8 };
    let mut scale_abs = T::zero();
    for (f, brk) in [(&lower as &dyn Fn(T) -> T, &lower_brk), (&upper, &upper_brk)] {
        for w in brk.windows(2) {
            scale_abs = scale_abs + integrate(|x| f(x), w[0], w[1], coarse).abs_integral;
        }
    }
    let panels = (lower_brk.len() + upper_brk.len() - 2).max(1);
    let abs_tol = (T::c(2e-14) * scale_abs / T::of_usize(panels)).to_f64_lossy().max(1e-300);
    let opts = QuadOptions { abs_tol, rel_tol: 1e-14, max_intervals: 400 };

    let mut value = Compensated::default();
    let mut err = T::zero();
    let mut abs_int = T::zero();
    let mut evals = 0usize;
    for (f, brk) in [(&lower as &dyn Fn(T) -> T, &lower_brk), (&upper, &upper_brk)] {
        for w in brk.windows(2) {
            let r = integrate(|x| f(x), w[0], w[1], opts);
            value.add(r.value);
            err = err + r.abs_error;
            abs_int = abs_int + r.abs_integral;
            evals += r.evaluations;
        }
    }

    let scale = norm * t.powf(one - beta);
    let v = value.value() * scale;
    let e = (err + T::c(16.0) * T::epsilon() * abs_int) * scale.abs();
    EvalResult::new(v, Regime::Integral, evals.max(1), e)
}

/// `[0, s₀, 8s₀, 64s₀, ..., 1]` in the integration variable, where the
/// physical scale `s` is mapped through `u = v^m`.
fn breakpoints<T: Real>(scale: T, m: T) -> Vec<T> {
    let mut pts = vec![T::zero()];
    let mut s = scale.powf(T::one() / m);
    if s < T::c(1e-12) {
        s = T::c(1e-12);
    }
    while s < T::one() {
        pts.push(s);
        s = s * T::c(8.0);
    }
    pts.push(T::one());
    pts
}

/// `α = 1`: `E^η_{1,β}(-y) = e^{-y} Σ_k (β-η)_k y^k / (k! Γ(β+k))`.
fn kummer<T: Real>(beta: T, eta: T, y: T) -> EvalResult<T> {
    let eps = T::epsilon();
    let ln_y = y.ln();
    let a = beta - eta;
    let mut acc = Compensated::default();
    let mut round = T::zero();
    let mut ln_coef = T::zero(); // ln|(a)_k / k!|
    let mut sign_coef = T::one();
    let limit = (y.to_f64_lossy() * 2.0 + 60.0) as usize + 40;
    let mut peaked = false;
    let mut last = T::zero();
    for k in 0..limit.min(200_000) {
        let kf = T::of_usize(k);
        if k > 0 {
            let f = (a + kf - T::one()) / kf;
            if f == T::zero() {
                // (a)_k terminates
                return EvalResult::new(acc.value(), Regime::Series, k, eps * round);
            }
            if f < T::zero() {
                sign_coef = -sign_coef;
            }
            ln_coef = ln_coef + f.abs().ln();
        }
        let (lg, sg) = ln_gamma_abs(beta + kf);
        let ln_mag = ln_coef + kf * ln_y - lg - y;
        let mag = ln_mag.exp();
        acc.add(sign_coef * sg * mag);
        round = round + mag * (T::c(4.0) + ln_mag.abs());
        if mag < last {
            peaked = true;
        }
        last = mag;
        if peaked && mag <= eps * T::c(1e-3) * acc.value().abs().max(T::min_positive_value()) {
            return EvalResult::new(acc.value(), Regime::Series, k + 1, eps * round + mag);
        }
    }
    EvalResult::new(acc.value(), Regime::Series, limit, eps * round + last)
}
