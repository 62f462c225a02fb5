//! q-Mittag-Leffler laws and the associated positive AR(1) process.
//!
//! The q-ML law has Laplace transform `[1 + a(q−1)t^α]^{−η/(q−1)}`. Only the
//! exponent `δ = η/(q−1)` and the scale `a(q−1)` enter, so the process side is
//! parameterized directly by `(δ, scale)`; [`QMLParams`] is the adapter from
//! `(α, η, q, a)`.
//!
//! The stationary AR(1) `y_n = ρy_{n−1} + ε_n` then has innovation transform
//! `[ρ^α + (1−ρ^α)/(1 + scale·t^α)]^δ`. For integer `δ` this is a binomial
//! mixture of generalized ML laws; for any `δ > 0` it is also
//! `W^{1/α}·S`, where `S` is positive α-stable and `W` is the compound-Poisson
//! innovation of the gamma AR(1) (Lawrance's representation), so every `δ` is
//! sampled exactly.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::artime::Init;
use crate::error::{invalid, Result};
use crate::mlrand::{exponential, sample_generalized_ml, sample_positive_stable, uniform_open, RngState};
use crate::quad::{integrate, QuadOptions, QuadResult};
use crate::scalar::Real;
use crate::special_fn::{prabhakar_neg_to, MlOrder};

fn positive(name: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(name, x, "must be positive and finite"))
    }
}

fn check_t<T: Real>(t: T) -> Result<()> {
    if !(t >= T::zero()) || !t.is_finite() {
        return Err(invalid("t", t.to_f64_lossy(), "must be finite and non-negative"));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QMLParams<T> {
    pub alpha: T,
    pub eta: T,
    pub q: T,
    pub a: T,
}

impl<T: Real> QMLParams<T> {
    pub fn new(alpha: T, eta: T, q: T, a: T) -> Result<Self> {
        MlOrder::new(alpha)?;
        positive("eta", eta.to_f64_lossy())?;
        if !(q > T::one()) || !q.is_finite() {
            return Err(invalid("q", q.to_f64_lossy(), "must exceed 1"));
        }
        positive("a", a.to_f64_lossy())?;
        Ok(Self { alpha, eta, q, a })
    }

    /// `δ = η/(q−1)`.
    pub fn delta(&self) -> T {
        self.eta / (self.q - T::one())
    }

    /// `a(q−1)`.
    pub fn scale(&self) -> T {
        self.a * (self.q - T::one())
    }
}

/// `[1 + scale·t^α]^{−δ}`, evaluated through `log1p` so that `q → 1⁺` stays accurate.
fn gml_laplace<T: Real>(alpha: T, delta: T, scale: T, t: T) -> T {
    if t == T::zero() {
        return T::one();
    }
    (-delta * (scale * t.powf(alpha)).ln_1p()).exp()
}

/// `[1 + a(q−1)t^α]^{−η/(q−1)}`.
pub fn qml_laplace<T: Real>(params: &QMLParams<T>, t: T) -> Result<T> {
    let p = QMLParams::new(params.alpha, params.eta, params.q, params.a)?;
    check_t(t)?;
    Ok(gml_laplace(p.alpha, p.delta(), p.scale(), t))
}

/// `(y^{αη−1}/a^η)·E^η_{α,αη}(−y^α/a)`, the density with Laplace transform `[1+at^α]^{−η}`.
pub fn mathai_pdf<T: Real>(alpha: T, eta: T, a: T, y: T) -> Result<T> {
    MlOrder::new(alpha)?;
    positive("eta", eta.to_f64_lossy())?;
    positive("a", a.to_f64_lossy())?;
    if !(y > T::zero()) || !y.is_finite() {
        return Err(invalid("y", y.to_f64_lossy(), "must be positive and finite"));
    }
    let b = alpha * eta;
    // absolute accuracy in units of the density times y
    let weight = y.powf(b) / a.powf(eta);
    let e = prabhakar_neg_to(alpha, b, eta, y.powf(alpha) / a, T::c(1e-16) / weight);
    Ok((weight / y * e.value).max(T::zero()))
}

/// `∫₀^∞ e^{−ty} f(y) dy` for the Mathai density by quadrature in `s = ln y`.
///
/// The integrand decays like `e^{αηs}` and `e^{−αs}` at the two ends, so the
/// range is cut where both tails are below `1e−13`.
pub fn mathai_laplace_numeric<T: Real>(alpha: T, eta: T, a: T, t: T) -> Result<QuadResult<T>> {
    check_t(t)?;
    MlOrder::new(alpha)?;
    let cut = T::c(30.0);
    let lo = -cut / (alpha * eta) + a.ln() / alpha;
    let hi = if t > T::zero() { (cut / t).ln().max(T::one()) } else { cut / alpha + a.ln() / alpha };
    let mut failure = None;
    let r = integrate(
        |s: T| {
            let y = s.exp();
            match mathai_pdf(alpha, eta, a, y) {
                Ok(f) => f * y * (-t * y).exp(),
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            }
        },
        lo,
        hi,
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-11, max_intervals: 4000 },
    );
    match failure {
        Some(e) => Err(e),
        None => r.require(1e-9),
    }
}

/// Deviation of the q-ML transform from its `q → 1⁺` limit `e^{−aηt^α}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyReport {
    /// `(q, max_t |L_q(t) − e^{−aηt^α}|)` in input order.
    pub deviations: Vec<(f64, f64)>,
    pub monotone: bool,
    pub final_deviation: f64,
}

pub fn levy_limit_check<T: Real>(alpha: T, eta: T, a: T, t_grid: &[T], q_sequence: &[T]) -> Result<LevyReport> {
    if q_sequence.is_empty() {
        return Err(invalid("q_sequence", 0.0, "must not be empty"));
    }
    let mut deviations = Vec::with_capacity(q_sequence.len());
    for &q in q_sequence {
        let p = QMLParams::new(alpha, eta, q, a)?;
        let mut worst = T::zero();
        for &t in t_grid {
            let limit = (-a * eta * t.powf(alpha)).exp();
            worst = worst.max((qml_laplace(&p, t)? - limit).abs());
        }
        deviations.push((q.to_f64_lossy(), worst.to_f64_lossy()));
    }
    let monotone = deviations.windows(2).all(|w| w[1].1 < w[0].1);
    let final_deviation = deviations.last().map_or(0.0, |d| d.1);
    Ok(LevyReport { deviations, monotone, final_deviation })
}

/// `[ρ^α + (1−ρ^α)/(1 + scale·t^α)]^δ`.
pub fn qml_innovation_laplace<T: Real>(alpha: T, delta: T, scale: T, rho: T, t: T) -> Result<T> {
    MlOrder::new(alpha)?;
    positive("delta", delta.to_f64_lossy())?;
    positive("scale", scale.to_f64_lossy())?;
    if !(rho > T::zero() && rho <= T::one()) {
        return Err(invalid("rho", rho.to_f64_lossy(), "must lie in (0, 1]"));
    }
    check_t(t)?;
    let w = rho.powf(alpha);
    Ok((w + (T::one() - w) / (T::one() + scale * t.powf(alpha))).powf(delta))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QmlArConfig<T> {
    pub alpha: T,
    pub delta: T,
    pub scale: T,
    pub rho: T,
    pub n: usize,
    pub init: Init<T>,
    pub rng: RngState,
}

impl<T: Real> QmlArConfig<T> {
    pub fn new(alpha: T, delta: T, scale: T, rho: T, n: usize, rng: RngState) -> Result<Self> {
        let cfg = Self { alpha, delta, scale, rho, n, init: Init::Stationary, rng };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        qml_innovation_laplace(self.alpha, self.delta, self.scale, self.rho, T::zero())?;
        if self.n < 1 {
            return Err(invalid("n", 0.0, "path length must be at least 1"));
        }
        if let Init::Arbitrary(v) = self.init {
            if !(v >= T::zero()) || !v.is_finite() {
                return Err(invalid("init", v.to_f64_lossy(), "must be finite and non-negative"));
            }
        }
        Ok(())
    }

    /// Integer exponents use the finite binomial mixture.
    pub fn integer_delta(&self) -> Option<usize> {
        let r = self.delta.round();
        (r == self.delta && r <= T::c(1e6)).then(|| r.to_usize()).flatten()
    }
}

/// One innovation draw with transform `[ρ^α + (1−ρ^α)/(1 + scale·t^α)]^δ`.
pub fn sample_qml_ar_innovation<T: Real, R: Rng + ?Sized>(cfg: &QmlArConfig<T>, rng: &mut R) -> Result<T> {
    let order = MlOrder::new(cfg.alpha)?;
    let w = cfg.rho.powf(cfg.alpha);
    if w >= T::one() {
        return Ok(T::zero());
    }
    if let Some(d) = cfg.integer_delta() {
        let p = (T::one() - w).to_f64_lossy();
        let fired = (0..d).filter(|_| rng.random_bool(p)).count();
        return if fired == 0 {
            Ok(T::zero())
        } else {
            sample_generalized_ml(order, T::of_usize(fired), cfg.scale, rng)
        };
    }
    // W = Σ_{i ≤ N} scale·E_i·w^{U_i}, N ~ Poisson(−δ ln w)
    let rate = (-cfg.delta * w.ln()).to_f64_lossy();
    let count = Poisson::new(rate).map_err(|_| invalid("rate", rate, "Poisson rate out of range"))?.sample(rng) as u64;
    let mut total = T::zero();
    for _ in 0..count {
        let u: T = uniform_open(rng);
        total = total + cfg.scale * exponential::<T, _>(rng) * w.powf(u);
    }
    if total == T::zero() || order.is_exponential() {
        return Ok(total);
    }
    Ok(total.powf(cfg.alpha.recip()) * sample_positive_stable(order, false, rng)?)
}

/// `y₁ … y_n` of the q-ML AR(1); a stationary start draws `y₀` from the
/// generalized ML law with transform `[1 + scale·t^α]^{−δ}`.
pub fn qml_ar1_path<T: Real>(cfg: &QmlArConfig<T>) -> Result<Vec<T>> {
    cfg.validate()?;
    let order = MlOrder::new(cfg.alpha)?;
    let mut rng = cfg.rng.generator()?;
    let mut y = match cfg.init {
        Init::Stationary => sample_generalized_ml(order, cfg.delta, cfg.scale, &mut rng)?,
        Init::Arbitrary(v) => v,
    };
    let mut out = Vec::with_capacity(cfg.n);
    for _ in 0..cfg.n {
        y = cfg.rho * y + sample_qml_ar_innovation(cfg, &mut rng)?;
        out.push(y);
    }
    Ok(out)
}

/// `[1 + scale·t^α]^{−δ}`, the stationary transform of [`qml_ar1_path`].
pub fn qml_stationary_laplace<T: Real>(alpha: T, delta: T, scale: T, t: T) -> Result<T> {
    MlOrder::new(alpha)?;
    positive("delta", delta.to_f64_lossy())?;
    positive("scale", scale.to_f64_lossy())?;
    check_t(t)?;
    Ok(gml_laplace(alpha, delta, scale, t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::ml_pdf;
    use crate::stats::{batch_means, ks_statistic, KS_C99};

    fn lt(xs: &[f64], t: f64) -> Vec<f64> {
        xs.iter().map(|x| (-t * x).exp()).collect()
    }

    #[test]
    fn params_validation() {
        assert!(QMLParams::<f64>::new(0.6, 1.0, 1.0, 1.0).is_err());
        assert!(QMLParams::<f64>::new(1.2, 1.0, 2.0, 1.0).is_err());
        assert!(QMLParams::<f64>::new(0.6, 0.0, 2.0, 1.0).is_err());
        assert!(QMLParams::<f64>::new(0.6, 1.0, 2.0, -1.0).is_err());
        let p = QMLParams::<f64>::new(0.5, 0.25, 1.5, 1.0).unwrap();
        assert_eq!(p.delta(), 0.5);
        assert_eq!(p.scale(), 0.5);
    }

    #[test]
    fn qml_laplace_examples() {
        let p = QMLParams::<f64>::new(0.6, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(qml_laplace(&p, 0.0).unwrap(), 1.0);
        assert!((qml_laplace(&p, 1.0).unwrap() - 0.5).abs() < 1e-15);
        let p = QMLParams::<f64>::new(0.5, 1.0, 1.0 + 1e-6, 1.0).unwrap();
        assert!((qml_laplace(&p, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-5);
        assert!(qml_laplace(&p, -1.0).is_err());
    }

    #[test]
    fn qml_laplace_monotone_and_log_convex() {
        for &(a, eta, q) in &[(0.3, 1.0, 1.5), (0.8, 2.0, 3.0), (1.0, 0.25, 1.01)] {
            let p = QMLParams::<f64>::new(a, eta, q, 1.5).unwrap();
            let ls: Vec<f64> = (1..400).map(|i| qml_laplace(&p, 0.05 * i as f64).unwrap().ln()).collect();
            assert!(ls.windows(2).all(|w| w[1] < w[0]));
            assert!(ls.windows(3).all(|w| w[0] + w[2] - 2.0 * w[1] >= -1e-13));
        }
    }

    #[test]
    fn mathai_reductions() {
        for y in [0.01, 0.3, 1.0, 4.0, 30.0] {
            let m = mathai_pdf::<f64>(0.7, 1.0, 1.0, y).unwrap();
            let f = ml_pdf(MlOrder::new(0.7).unwrap(), y).unwrap();
            assert!((m - f).abs() <= 1e-12 * f.max(1e-300), "y={y}: {m} vs {f}");
        }
        assert!((mathai_pdf::<f64>(1.0, 2.0, 1.0, 1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
        // Gamma(3, 2) density
        let y = 2.5;
        let want = y * y * (-y / 2.0f64).exp() / 16.0;
        assert!((mathai_pdf::<f64>(1.0, 3.0, 2.0, y).unwrap() - want).abs() < 1e-14);
        assert!(mathai_pdf::<f64>(0.6, 1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn mathai_normalization_and_transform() {
        for &a in &[0.6, 1.0] {
            for &eta in &[1.0, 1.5, 2.0] {
                for &s in &[1.0, 2.0] {
                    let m = mathai_laplace_numeric::<f64>(a, eta, s, 0.0).unwrap();
                    assert!((m.value - 1.0).abs() < 1e-6, "α={a} η={eta} a={s}: {}", m.value);
                }
            }
        }
        for t in [0.5, 1.0, 3.0] {
            let r = mathai_laplace_numeric::<f64>(0.6, 1.5, 2.0, t).unwrap();
            let want = (1.0 + 2.0 * f64::powf(t, 0.6)).powf(-1.5);
            assert!((r.value - want).abs() < 1e-8, "t={t}: {} vs {want}", r.value);
        }
    }

    #[test]
    fn levy_pathway() {
        let qs = [1.5, 1.1, 1.01, 1.001, 1.0001];
        let r = levy_limit_check(0.5, 1.0, 1.0, &[0.5, 1.0, 2.0], &qs).unwrap();
        assert!(r.monotone, "{r:?}");
        assert!(r.final_deviation < 1e-4);
        let z = levy_limit_check(0.5, 1.0, 1.0, &[0.0], &qs).unwrap();
        assert!(z.deviations.iter().all(|d| d.1 == 0.0));
        let e = levy_limit_check(1.0, 1.0, 1.0, &[1.0], &[1.0 + 1e-7]).unwrap();
        assert!(e.final_deviation < 1e-6);
        assert!(levy_limit_check(0.5, 1.0, 1.0, &[1.0], &[0.9]).is_err());
    }

    #[test]
    fn innovation_laplace_examples() {
        for &(a, rho) in &[(0.6, 0.4), (0.9, 0.8)] {
            for t in [0.0, 0.5, 2.0] {
                let w: f64 = f64::powf(rho, a);
                let want = w + (1.0 - w) / (1.0 + f64::powf(t, a));
                assert!((qml_innovation_laplace::<f64>(a, 1.0, 1.0, rho, t).unwrap() - want).abs() < 1e-15);
            }
        }
        let w: f64 = 0.5f64.sqrt();
        let c = 1.0 / 3.0;
        let three = w * w + 2.0 * w * (1.0 - w) * c + (1.0 - w) * (1.0 - w) * c * c;
        assert!((qml_innovation_laplace::<f64>(0.5, 2.0, 2.0, 0.5, 1.0).unwrap() - three).abs() < 1e-15);
        assert!((qml_innovation_laplace::<f64>(0.5, 2.0, 2.0, 0.5, 1.0).unwrap() - 0.647_603_013_860_687_8).abs() < 1e-15);
        assert_eq!(qml_innovation_laplace::<f64>(0.7, 1.3, 0.4, 1.0, 5.0).unwrap(), 1.0);
        assert!(qml_innovation_laplace::<f64>(0.7, 1.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn constant_path_at_unit_rho() {
        let cfg = QmlArConfig::new(0.6, 1.0, 1.0, 1.0, 100, RngState::new(60)).unwrap();
        let p = qml_ar1_path(&cfg).unwrap();
        assert!(p.iter().all(|&y| y == p[0]));
    }

    fn check_stationary_lt(alpha: f64, delta: f64, scale: f64, rho: f64, seed: u64) {
        let cfg = QmlArConfig::new(alpha, delta, scale, rho, 100_000, RngState::new(seed)).unwrap();
        let p = qml_ar1_path(&cfg).unwrap();
        assert!(p.iter().all(|&y| y >= 0.0 && y.is_finite()));
        for t in [0.5, 1.0, 2.0] {
            let e = batch_means(&lt(&p, t), 100);
            let want = qml_stationary_laplace::<f64>(alpha, delta, scale, t).unwrap();
            assert!(e.within(want, 3.0), "δ={delta} t={t}: {e:?} vs {want}");
        }
    }

    #[test]
    fn stationary_laplace_transform_of_paths() {
        check_stationary_lt(0.6, 1.0, 1.0, 0.4, 61);
        check_stationary_lt(0.5, 2.0, 2.0, 0.5, 62);
        check_stationary_lt(0.5, 2.0, 0.5, 0.5, 63);
    }

    #[test]
    fn non_integer_delta_is_exact() {
        check_stationary_lt(0.7, 0.6, 1.0, 0.5, 64);
        check_stationary_lt(1.0, 2.5, 0.8, 0.7, 65);
        let cfg = QmlArConfig::new(0.7, 0.6, 1.0, 0.5, 1, RngState::new(66)).unwrap();
        assert_eq!(cfg.integer_delta(), None);
        let mut rng = cfg.rng.generator().unwrap();
        let xs: Vec<f64> = (0..200_000).map(|_| sample_qml_ar_innovation(&cfg, &mut rng).unwrap()).collect();
        for t in [0.5, 2.0] {
            let e = batch_means(&lt(&xs, t), 100);
            let want = qml_innovation_laplace::<f64>(0.7, 0.6, 1.0, 0.5, t).unwrap();
            assert!(e.within(want, 3.0), "t={t}: {e:?} vs {want}");
        }
    }

    #[test]
    fn unit_delta_marginal_is_ml() {
        let cfg = QmlArConfig::new(0.7, 1.0, 1.0, 0.5, 100_000, RngState::new(67)).unwrap();
        let p = qml_ar1_path(&cfg).unwrap();
        // thin to weaken serial dependence
        let thin: Vec<f64> = p.iter().step_by(10).copied().collect();
        let d = ks_statistic(&thin, |x| crate::special_fn::ml_cdf(MlOrder::new(0.7).unwrap(), x)).unwrap();
        assert!(d < KS_C99 / (thin.len() as f64).sqrt(), "D = {d}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn stationarity_factorization(a in 0.05f64..=1.0, delta in 0.1f64..5.0, s in 0.05f64..5.0, rho in 0.01f64..=1.0, t in 0.0f64..50.0) {
                let lhs = qml_stationary_laplace::<f64>(a, delta, s, t).unwrap();
                let rhs = qml_stationary_laplace::<f64>(a, delta, s, rho * t).unwrap() * qml_innovation_laplace::<f64>(a, delta, s, rho, t).unwrap();
                prop_assert!((lhs - rhs).abs() < 1e-12);
            }

            #[test]
            fn laplace_in_unit_interval(a in 0.05f64..=1.0, eta in 0.1f64..5.0, q in 1.0001f64..5.0, sc in 0.1f64..5.0, t in 0.0f64..100.0) {
                let v = qml_laplace(&QMLParams::<f64>::new(a, eta, q, sc).unwrap(), t).unwrap();
                prop_assert!(v > 0.0 && v <= 1.0);
            }
        }
    }
}
