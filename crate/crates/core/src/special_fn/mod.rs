//! Mittag-Leffler functions on the negative real axis and the
//! Mittag-Leffler probability law.
//!
//! All entry points evaluate `E^η_{α,β}(z)` for `z ≤ 0` through
//! [`eval::prabhakar_neg`]; see that module for the representations used.
//! Every result carries the regime that produced it and an error estimate.

mod eval;
pub(crate) use eval::prabhakar_neg_to;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gamma::{gamma, FACTORIALS};
use crate::scalar::{sin_pi, Real};

pub use eval::{asymptotic as asymptotic_expansion, inversion_integral, series as power_series};

/// Largest derivative order supported by [`ml_deriv`] (factorial range of `f64`).
pub const MAX_DERIV_ORDER: usize = 170;

/// Order `α ∈ (0, 1]` of the one-parameter function `E_α` and of the
/// Mittag-Leffler distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlOrder<T> {
    alpha: T,
}

impl<T: Real> MlOrder<T> {
    pub fn new(alpha: T) -> Result<Self> {
        if !alpha.is_finite() || alpha <= T::zero() || alpha > T::one() {
            return Err(invalid("alpha", alpha.to_f64_lossy(), "must lie in (0, 1]"));
        }
        Ok(Self { alpha })
    }

    #[inline]
    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn is_exponential(&self) -> bool {
        self.alpha == T::one()
    }
}

/// Parameters `(α, β)` of the two-parameter function `E_{α,β}`.
///
/// Evaluation is supported for `α ≤ 1`; the type itself only enforces
/// positivity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ml2Params<T> {
    alpha: T,
    beta: T,
}

impl<T: Real> Ml2Params<T> {
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        Ok(Self { alpha, beta })
    }
    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
}

/// Parameters `(α, β, η)` of the Prabhakar function `E^η_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrabhakarParams<T> {
    alpha: T,
    beta: T,
    eta: T,
}

impl<T: Real> PrabhakarParams<T> {
    pub fn new(alpha: T, beta: T, eta: T) -> Result<Self> {
        positive("alpha", alpha)?;
        positive("beta", beta)?;
        positive("eta", eta)?;
        Ok(Self { alpha, beta, eta })
    }
    pub fn alpha(&self) -> T {
        self.alpha
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn eta(&self) -> T {
        self.eta
    }
}

fn positive<T: Real>(name: &'static str, v: T) -> Result<()> {
    if !v.is_finite() || v <= T::zero() {
        return Err(invalid(name, v.to_f64_lossy(), "must be positive and finite"));
    }
    Ok(())
}

fn supported_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::one() {
        return Err(invalid("alpha", alpha.to_f64_lossy(), "evaluation requires alpha <= 1"));
    }
    Ok(())
}

fn nonpositive_arg<T: Real>(z: T) -> Result<T> {
    if !z.is_finite() {
        return Err(Error::NonFinite { name: "z" });
    }
    if z > T::zero() {
        return Err(invalid("z", z.to_f64_lossy(), "only the negative real axis is supported"));
    }
    Ok(-z)
}

/// Which representation produced a value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Series,
    Asymptotic,
    /// Branch-cut Laplace inversion integral.
    Integral,
    /// Exact elementary formula (the `α = 1` exponential cases).
    ClosedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalResult<T> {
    pub value: T,
    pub regime: Regime,
    /// Series terms, asymptotic terms or integrand evaluations.
    pub terms_used: usize,
    pub est_abs_error: T,
}

impl<T: Real> EvalResult<T> {
    pub(crate) fn new(value: T, regime: Regime, terms_used: usize, est_abs_error: T) -> Self {
        Self { value, regime, terms_used: terms_used.max(1), est_abs_error: est_abs_error.abs() }
    }

    fn scaled(self, s: T) -> Self {
        Self { value: self.value * s, est_abs_error: self.est_abs_error * s.abs(), ..self }
    }
}

/// `E_α(z)` for `z ≤ 0`.
pub fn ml<T: Real>(order: MlOrder<T>, z: T) -> Result<EvalResult<T>> {
    let y = nonpositive_arg(z)?;
    Ok(eval::prabhakar_neg(order.alpha, T::one(), T::one(), y))
}

/// `E_{α,β}(z)` for `z ≤ 0`.
pub fn ml2<T: Real>(params: Ml2Params<T>, z: T) -> Result<EvalResult<T>> {
    supported_alpha(params.alpha)?;
    let y = nonpositive_arg(z)?;
    Ok(eval::prabhakar_neg(params.alpha, params.beta, T::one(), y))
}

/// `E^η_{α,β}(z) = Σ_k (η)_k z^k / (k! Γ(β + αk))` for `z ≤ 0`.
pub fn ml_prabhakar<T: Real>(params: PrabhakarParams<T>, z: T) -> Result<EvalResult<T>> {
    supported_alpha(params.alpha)?;
    let y = nonpositive_arg(z)?;
    Ok(eval::prabhakar_neg(params.alpha, params.beta, params.eta, y))
}

/// `k`-th derivative `E_α^{(k)}(z)` for `z ≤ 0`, `k ≤ 170`.
///
/// Uses `E_α^{(k)}(z) = k! E^{k+1}_{α, αk+1}(z)`, which is the term-wise
/// differentiated series re-indexed.
pub fn ml_deriv<T: Real>(order: MlOrder<T>, k: usize, z: T) -> Result<EvalResult<T>> {
    if k > MAX_DERIV_ORDER {
        return Err(invalid("k", k as f64, "derivative order capped at 170"));
    }
    let y = nonpositive_arg(z)?;
    if k == 0 {
        return Ok(eval::prabhakar_neg(order.alpha, T::one(), T::one(), y));
    }
    if order.is_exponential() {
        let v = (-y).exp();
        return Ok(EvalResult::new(v, Regime::ClosedForm, 1, T::epsilon() * v));
    }
    let kf = T::of_usize(k);
    let r = eval::prabhakar_neg(order.alpha, order.alpha * kf + T::one(), kf + T::one(), y);
    Ok(r.scaled(T::c(FACTORIALS[k])))
}

/// `y^k E_α^{(k)}(-y) / k!` evaluated without forming `k!` or `y^k`
/// separately. This is the fractional Poisson probability at `y = t^α`.
pub fn ml_deriv_scaled<T: Real>(order: MlOrder<T>, k: usize, y: T) -> Result<EvalResult<T>> {
    if k > MAX_DERIV_ORDER {
        return Err(invalid("k", k as f64, "derivative order capped at 170"));
    }
    if !y.is_finite() || y < T::zero() {
        return Err(invalid("y", y.to_f64_lossy(), "must be finite and non-negative"));
    }
    let kf = T::of_usize(k);
    if k == 0 {
        return Ok(eval::prabhakar_neg(order.alpha, T::one(), T::one(), y));
    }
    if y == T::zero() {
        return Ok(EvalResult::new(T::zero(), Regime::Series, 1, T::zero()));
    }
    if order.is_exponential() {
        // y^k e^{-y} / k!
        let v = (kf * y.ln() - y - T::c(FACTORIALS[k]).ln()).exp();
        return Ok(EvalResult::new(v, Regime::ClosedForm, 1, T::c(4.0) * T::epsilon() * v * (T::one() + kf)));
    }
    let scale = y.powf(kf);
    // absolute accuracy is wanted for the scaled value, not the raw function
    let abs_target = T::c(1e-16) / scale;
    let r = eval::prabhakar_neg_to(order.alpha, order.alpha * kf + T::one(), kf + T::one(), y, abs_target);
    Ok(r.scaled(scale))
}

/// Density, distribution and survival function of the Mittag-Leffler law
/// with Laplace transform `(1 + s^α)^{-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MlDist<T> {
    pub pdf: T,
    pub cdf: T,
    pub survival: T,
}

/// Survival function `E_α(-x^α)`.
pub fn ml_survival<T: Real>(order: MlOrder<T>, x: T) -> Result<T> {
    Ok(cdf_and_survival(order, x)?.1)
}

/// Distribution function `1 - E_α(-x^α)`.
pub fn ml_cdf<T: Real>(order: MlOrder<T>, x: T) -> Result<T> {
    Ok(cdf_and_survival(order, x)?.0)
}

fn cdf_and_survival<T: Real>(order: MlOrder<T>, x: T) -> Result<(T, T)> {
    if !x.is_finite() || x < T::zero() {
        if x == T::infinity() {
            return Ok((T::one(), T::zero()));
        }
        return Err(invalid("x", x.to_f64_lossy(), "must be finite and non-negative"));
    }
    if x == T::zero() {
        return Ok((T::zero(), T::one()));
    }
    let a = order.alpha;
    let y = x.powf(a);
    let s = eval::prabhakar_neg(a, T::one(), T::one(), y).value;
    if s >= T::c(0.5) {
        // 1 - E_α(-y) = y E_{α,α+1}(-y) keeps relative accuracy near 0
        let c = y * eval::prabhakar_neg(a, a + T::one(), T::one(), y).value;
        let c = c.max(T::zero()).min(T::one());
        Ok((c, T::one() - c))
    } else {
        let s = s.max(T::zero());
        Ok((T::one() - s, s))
    }
}

/// Density `x^{α-1} E_{α,α}(-x^α)`. Singular at `x = 0` for `α < 1`.
pub fn ml_pdf<T: Real>(order: MlOrder<T>, x: T) -> Result<T> {
    if !x.is_finite() || x < T::zero() {
        return Err(invalid("x", x.to_f64_lossy(), "must be finite and non-negative"));
    }
    let a = order.alpha;
    if order.is_exponential() {
        return Ok((-x).exp());
    }
    if x == T::zero() {
        return Err(Error::Singular("Mittag-Leffler density diverges like x^(alpha-1)/Gamma(alpha) at 0"));
    }
    let y = x.powf(a);
    let e = eval::prabhakar_neg(a, a, T::one(), y).value;
    Ok((x.powf(a - T::one()) * e).max(T::zero()))
}

pub fn ml_dist<T: Real>(order: MlOrder<T>, x: T) -> Result<MlDist<T>> {
    let pdf = ml_pdf(order, x)?;
    let (cdf, survival) = cdf_and_survival(order, x)?;
    Ok(MlDist { pdf, cdf, survival })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ApproxKind {
    /// `exp(-x^α / Γ(α+1))`, accurate for small `x`.
    StretchedExp,
    /// `Γ(α) sin(απ)/π · x^{-α}`, accurate for large `x`.
    PowerLaw,
}

/// Small- and large-argument approximants of the survival function `E_α(-x^α)`.
pub fn ml_approx<T: Real>(order: MlOrder<T>, x: T, kind: ApproxKind) -> Result<T> {
    let a = order.alpha;
    if order.is_exponential() {
        return Err(invalid("alpha", 1.0, "approximants are defined for 0 < alpha < 1"));
    }
    if !x.is_finite() || x < T::zero() {
        return Err(invalid("x", x.to_f64_lossy(), "must be finite and non-negative"));
    }
    match kind {
        ApproxKind::StretchedExp => Ok((-x.powf(a) / gamma(a + T::one())).exp()),
        ApproxKind::PowerLaw => {
            if x == T::zero() {
                return Err(invalid("x", 0.0, "power-law approximant requires x > 0"));
            }
            Ok(power_law_constant(a) * x.powf(-a))
        }
    }
}

/// `Γ(α) sin(απ)/π`, the constant of the algebraic tail of `E_α(-x^α)`.
pub fn power_law_constant<T: Real>(alpha: T) -> T {
    gamma(alpha) * sin_pi(alpha) / T::PI()
}
