//! First-order autoregression `u_n = ρ u_{n−1} + ε_n` with type-2 generalized
//! Laplacian marginals.
//!
//! The innovation law is fixed by self-decomposability:
//! `φ_ε(t) = φ_u(t)/φ_u(ρt)`, realized as `ε = B₁M₁ − B₂M₂` with
//! Bernoulli(1−ρ^α) indicators and iid Mittag-Leffler `Mᵢ`.
//!
//! The marginal law has no mean, so regression diagnostics are stated for
//! medians (sign tests, least-absolute-deviation slopes) rather than for the
//! formal conditional expectations.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::laplace2::cf_laplace2;
use crate::mlrand::{sample_ar_innovation, sample_laplace2, InnovationSpec, RngState};
use crate::scalar::{cos_pi, Real};
use crate::special_fn::MlOrder;

/// Initial state of an AR(1) path.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Init<T> {
    /// `u₀` drawn from the stationary law.
    Stationary,
    /// `u₀` fixed; stationarity is reached only asymptotically.
    Arbitrary(T),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ARConfig<T> {
    pub alpha: T,
    pub rho: T,
    pub n: usize,
    pub burn_in: usize,
    pub init: Init<T>,
    pub rng: RngState,
}

/// `10·⌈1/(1−ρ)⌉` for arbitrary starts, none for stationary starts or `ρ = 1`.
pub fn default_burn_in<T: Real>(rho: T, init: &Init<T>) -> usize {
    match init {
        Init::Stationary => 0,
        Init::Arbitrary(_) if rho >= T::one() => 0,
        Init::Arbitrary(_) => {
            let steps = (T::one() / (T::one() - rho)).ceil().to_usize().unwrap_or(usize::MAX / 10);
            steps.saturating_mul(10)
        }
    }
}

impl<T: Real> ARConfig<T> {
    /// A configuration with the default burn-in for `init`.
    pub fn new(alpha: T, rho: T, n: usize, init: Init<T>, rng: RngState) -> Result<Self> {
        let burn_in = default_burn_in(rho, &init);
        let cfg = Self { alpha, rho, n, burn_in, init, rng };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn validate(&self) -> Result<()> {
        InnovationSpec::new(self.alpha, self.rho)?;
        if self.n < 1 {
            return Err(invalid("n", 0.0, "path length must be at least 1"));
        }
        if let Init::Arbitrary(v) = self.init {
            if !v.is_finite() {
                return Err(Error::NonFinite { name: "init" });
            }
        }
        Ok(())
    }

    pub fn innovation(&self) -> InnovationSpec<T> {
        InnovationSpec::new(self.alpha, self.rho).expect("validated config")
    }
}

/// A realized path `u₁ … u_n` (after burn-in) and the configuration that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ARPath<T> {
    pub values: Vec<T>,
    /// `u₀`, before any burn-in.
    pub initial: T,
    pub config: ARConfig<T>,
}

pub fn ar1_path<T: Real>(config: &ARConfig<T>) -> Result<ARPath<T>> {
    config.validate()?;
    let spec = config.innovation();
    let order = spec.order();
    let mut rng = config.rng.generator()?;
    let initial = match config.init {
        Init::Stationary => sample_laplace2(order, &mut rng),
        Init::Arbitrary(v) => v,
    };
    let rho = config.rho;
    let mut u = initial;
    for _ in 0..config.burn_in {
        u = rho * u + sample_ar_innovation(&spec, &mut rng);
    }
    let values = (0..config.n)
        .map(|_| {
            u = rho * u + sample_ar_innovation(&spec, &mut rng);
            u
        })
        .collect();
    Ok(ARPath { values, initial, config: config.clone() })
}

/// `(±it)^α` on the principal branch: `|t|^α e^{±iπα/2·sgn t}`.
fn i_pow<T: Real>(t: T, alpha: T, sign: T) -> Complex<T> {
    let theta = sign * t.signum() * T::FRAC_PI_2() * alpha;
    Complex::from_polar(t.abs().powf(alpha), theta)
}

/// `φ_ε(t) = [ρ^α + (1−ρ^α)/(1+(−it)^α)]·[ρ^α + (1−ρ^α)/(1+(it)^α)]`.
pub fn innovation_cf<T: Real>(spec: &InnovationSpec<T>, t: T) -> Complex<T> {
    let one = Complex::new(T::one(), T::zero());
    let w = Complex::new(spec.atom_weight, T::zero());
    let q = one - w;
    let a = spec.alpha;
    (w + q / (one + i_pow(t, a, -T::one()))) * (w + q / (one + i_pow(t, a, T::one())))
}

/// `φ_ρ(t) = φ_u(t)/φ_u(ρt)`, defined for `0 < ρ < 1`.
pub fn decomposability_factor<T: Real>(spec: &InnovationSpec<T>, t: T) -> Result<Complex<T>> {
    if spec.rho >= T::one() {
        return Err(invalid("rho", spec.rho.to_f64_lossy(), "must lie in (0, 1)"));
    }
    let o = spec.order();
    Ok(Complex::new(cf_laplace2(o, t) / cf_laplace2(o, spec.rho * t), T::zero()))
}

/// Characteristic function of the gliding sum `s_r = u_n + … + u_{n+r−1}`.
pub fn gliding_sum_cf<T: Real>(spec: &InnovationSpec<T>, r: usize, t: T) -> Result<Complex<T>> {
    if r < 1 {
        return Err(invalid("r", 0.0, "must be at least 1"));
    }
    let one = T::one();
    let rho = spec.rho;
    if rho >= one {
        return Err(invalid("rho", rho.to_f64_lossy(), "must lie in (0, 1)"));
    }
    let coef = |m: usize| (one - rho.powi(m as i32)) / (one - rho);
    let head = Complex::new(cf_laplace2(spec.order(), t * coef(r)), T::zero());
    Ok((1..r).fold(head, |acc, j| acc * innovation_cf(spec, t * coef(r - j))))
}

/// `E[e^{i(t₁u_n + t₂u_{n+1})}] = φ_u(t₁+ρt₂)·φ_ε(t₂)`.
pub fn joint_cf<T: Real>(spec: &InnovationSpec<T>, t1: T, t2: T) -> Complex<T> {
    innovation_cf(spec, t2) * cf_laplace2(spec.order(), t1 + spec.rho * t2)
}

/// `φ'_u(t)`; for `t > 0`, `−(2αcos(πα/2)t^{α−1} + 2αt^{2α−1})·φ_u(t)²`, odd in `t`.
///
/// For `α < 1` the derivative does not exist at `t = 0`.
pub fn cf_laplace2_deriv<T: Real>(order: MlOrder<T>, t: T) -> Result<T> {
    let a = order.alpha();
    if t == T::zero() {
        return if order.is_exponential() {
            Ok(T::zero())
        } else {
            Err(Error::Singular("the characteristic function is not differentiable at 0 for alpha < 1"))
        };
    }
    let s = t.abs();
    let two = T::c(2.0);
    let phi = cf_laplace2(order, s);
    let d = -(two * a * cos_pi(a / two) * s.powf(a - T::one()) + two * a * s.powf(two * a - T::one())) * phi * phi;
    Ok(if t < T::zero() { -d } else { d })
}

/// `i·E[e^{itu_{n+1}} E[u_n | u_{n+1}]] = φ'_u(ρt)·φ_ε(t)`.
///
/// Since the right side is `i` times a Hermitian function,
/// `backward_transform(−t) = −conj(backward_transform(t))`.
pub fn backward_transform<T: Real>(spec: &InnovationSpec<T>, t: T) -> Result<Complex<T>> {
    let d = cf_laplace2_deriv(spec.order(), spec.rho * t)?;
    Ok(innovation_cf(spec, t) * d)
}

/// Central-difference counterpart of [`backward_transform`] with step `h`.
pub fn backward_transform_fd<T: Real>(spec: &InnovationSpec<T>, t: T, h: T) -> Complex<T> {
    let o = spec.order();
    let s = spec.rho * t;
    let d = (cf_laplace2(o, s + h) - cf_laplace2(o, s - h)) / (T::c(2.0) * h);
    innovation_cf(spec, t) * d
}

/// The product `Q·[R+S]` with `Q`, `R`, `S` exactly as printed alongside the
/// backward-regression identity, for comparison with [`backward_transform`].
///
/// `R+S` is `φ'_u(ρt)`, but the printed `Q` is `φ_u(t)φ_u(ρt)` rather than
/// `φ_u(t)/φ_u(ρt)`, so the two differ by the factor `φ_u(ρt)²`.
pub fn backward_transform_printed<T: Real>(spec: &InnovationSpec<T>, t: T) -> Result<Complex<T>> {
    let a = spec.alpha;
    if t == T::zero() && a < T::one() {
        return Err(Error::Singular("the characteristic function is not differentiable at 0 for alpha < 1"));
    }
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let s = spec.rho * t;
    let (m_t, p_t) = (one + i_pow(t, a, -T::one()), one + i_pow(t, a, T::one()));
    let (m_s, p_s) = (one + i_pow(s, a, -T::one()), one + i_pow(s, a, T::one()));
    let q = one / (m_t * p_t * m_s * p_s);
    let am1 = a - T::one();
    // (±iρt)^{α−1} on the principal branch
    let pow = |sign: T| -> Complex<T> {
        if am1 == T::zero() {
            one
        } else {
            Complex::from_polar(s.abs().powf(am1), sign * s.signum() * T::FRAC_PI_2() * am1)
        }
    };
    let alpha = Complex::new(a, T::zero());
    let r = -i * alpha * pow(T::one()) / (m_s * p_s * p_s);
    let s_term = i * alpha * pow(-T::one()) / (p_s * m_s * m_s);
    Ok(q * (r + s_term))
}

/// Analytic, finite-difference and printed-formula backward transforms at one `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackwardCheck {
    pub t: f64,
    pub analytic: f64,
    pub finite_difference: f64,
    pub rel_error: f64,
    pub printed: f64,
    /// `|printed − analytic| / |analytic|`; informational.
    pub printed_deviation: f64,
}

pub fn backward_check<T: Real>(spec: &InnovationSpec<T>, t: T, h: T) -> Result<BackwardCheck> {
    let a = backward_transform(spec, t)?;
    let f = backward_transform_fd(spec, t, h);
    let p = backward_transform_printed(spec, t)?;
    let re = |z: Complex<T>| z.re.to_f64_lossy();
    let analytic = re(a);
    let rel = |x: f64| (x - analytic).abs() / analytic.abs().max(f64::MIN_POSITIVE);
    Ok(BackwardCheck {
        t: t.to_f64_lossy(),
        analytic,
        finite_difference: re(f),
        rel_error: rel(re(f)),
        printed: re(p),
        printed_deviation: rel(re(p)),
    })
}

/// Least-absolute-deviation slope of `u_n` on `u_{n−1}` through the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionCheck<T> {
    pub slope_estimate: T,
    pub method: String,
}

pub const REGRESSION_METHOD: &str = "lad_through_origin";

/// Minimizes `Σ|u_n − b u_{n−1}|`: the `|u_{n−1}|`-weighted median of the
/// ratios `u_n/u_{n−1}`.
pub fn forward_regression_check<T: Real>(path: &ARPath<T>) -> Result<RegressionCheck<T>> {
    let v = &path.values;
    if v.len() < 100 {
        return Err(invalid("n", v.len() as f64, "regression needs at least 100 points"));
    }
    let mut pairs: Vec<(T, T)> = v
        .windows(2)
        .filter(|w| w[0] != T::zero())
        .map(|w| (w[1] / w[0], w[0].abs()))
        .collect();
    if pairs.is_empty() {
        return Err(invalid("path", 0.0, "degenerate: every predecessor is zero"));
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ratios"));
    let total = pairs.iter().fold(T::zero(), |s, p| s + p.1);
    let half = total / T::c(2.0);
    let mut acc = T::zero();
    let mut slope = pairs[pairs.len() - 1].0;
    for &(ratio, w) in &pairs {
        acc = acc + w;
        if acc >= half {
            slope = ratio;
            break;
        }
    }
    Ok(RegressionCheck { slope_estimate: slope, method: REGRESSION_METHOD.to_owned() })
}

/// `u_n − ρu_{n−1}` along a path.
pub fn residuals<T: Real>(path: &ARPath<T>) -> Vec<T> {
    let rho = path.config.rho;
    std::iter::once(path.values[0] - rho * path.initial_after_burn_in())
        .chain(path.values.windows(2).map(|w| w[1] - rho * w[0]))
        .collect()
}

impl<T: Real> ARPath<T> {
    /// The state preceding `values[0]`, available only without burn-in.
    fn initial_after_burn_in(&self) -> T {
        if self.config.burn_in == 0 {
            self.initial
        } else {
            // not retained; drop the first residual by making it an exact tie
            self.values[0] / self.config.rho
        }
    }
}

/// Two-sided sign test of `median = 0`; zeros are dropped as ties.
///
/// Returns `(positives, non-zero count, p-value)` using the normal
/// approximation with continuity correction.
pub fn sign_test<T: Real>(xs: &[T]) -> (usize, usize, f64) {
    let pos = xs.iter().filter(|&&x| x > T::zero()).count();
    let n = pos + xs.iter().filter(|&&x| x < T::zero()).count();
    if n == 0 {
        return (0, 0, 1.0);
    }
    let nf = n as f64;
    let z = (((pos as f64) - nf / 2.0).abs() - 0.5).max(0.0) / (nf.sqrt() / 2.0);
    (pos, n, libm::erfc(z / std::f64::consts::SQRT_2))
}

/// `(1/n)Σcos(t u_k)`, the real part of the empirical characteristic function.
pub fn empirical_cf<T: Real>(xs: &[T], t: T) -> Vec<T> {
    xs.iter().map(|&x| (t * x).cos()).collect()
}
