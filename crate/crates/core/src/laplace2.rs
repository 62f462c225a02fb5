//! The type-2 generalized Laplacian law: the difference `u = x₁ − x₂` of two
//! iid Mittag-Leffler variates.
//!
//! Its characteristic function is `φ(t) = (1 + 2cos(πα/2)|t|^α + |t|^{2α})^{-1}`.
//! The density has no closed form for `α < 1`; it is computed either by
//! cosine inversion of `φ` or by the convolution `∫ f_α(u+z) f_α(z) dz`,
//! and the two routes are kept independent so each can check the other.

use std::collections::BTreeMap;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::gamma::{gamma, ln_gamma};
use crate::mlrand::{sample_laplace2, RngState};
use crate::quad::{fourier_cos, integrate, QuadOptions};
use crate::scalar::{cos_pi, sin_pi, Compensated, Real};
use crate::special_fn::{ml_pdf, MlOrder};

/// Absolute accuracy targeted by [`pdf_laplace2`].
pub const PDF_TOL: f64 = 1e-9;
const MAX_PANELS: usize = 4000;

/// `φ_u(t)`, even in `t`.
pub fn cf_laplace2<T: Real>(order: MlOrder<T>, t: T) -> T {
    let a = order.alpha();
    let ta = t.abs().powf(a);
    T::one() / (T::one() + T::c(2.0) * cos_pi(a / T::c(2.0)) * ta + ta * ta)
}

/// Density `h(u) = (1/π)∫₀^∞ cos(tu) φ(t) dt`.
///
/// At `u = 0` the density is finite only for `α > 1/2` (it equals
/// `∫ f_α(z)² dz`); smaller orders report [`Error::Singular`].
pub fn pdf_laplace2<T: Real>(order: MlOrder<T>, u: T) -> Result<T> {
    if !u.is_finite() {
        return Err(Error::NonFinite { name: "u" });
    }
    let a = order.alpha();
    let u = u.abs();
    if order.is_exponential() {
        return Ok(T::c(0.5) * (-u).exp());
    }
    let pi = T::PI();
    if u == T::zero() {
        return pdf_at_zero(a).map(|v| v / pi);
    }
    let r = fourier_cos(|t| cf_laplace2(order, t), u, PDF_TOL, MAX_PANELS);
    if !r.converged {
        return Err(Error::QuadratureNonConvergence { estimate: r.abs_error.to_f64_lossy(), tolerance: PDF_TOL });
    }
    Ok((r.value / pi).max(T::zero()))
}

/// `∫₀^∞ φ(t) dt`, split at 1 with `t = 1/w` on the tail and
/// `w = v^{1/(2α−1)}` to absorb the `w^{2α−2}` endpoint behaviour.
fn pdf_at_zero<T: Real>(a: T) -> Result<T> {
    let one = T::one();
    let two = T::c(2.0);
    if a <= T::c(0.5) {
        return Err(Error::Singular("density of the type-2 Laplacian is unbounded at 0 for alpha <= 1/2"));
    }
    let c = cos_pi(a / two);
    let phi = |t: T| {
        let ta = t.powf(a);
        one / (one + two * c * ta + ta * ta)
    };
    let m = one / (two * a - one);
    let opts = QuadOptions::tol(1e-14, 1e-13);
    let head = integrate(phi, T::zero(), one, opts).require(1e-13)?;
    let tail = integrate(
        |v: T| {
            if v <= T::zero() {
                return T::zero();
            }
            let w = v.powf(m);
            let wa = w.powf(a);
            // w^{2α-2}·dw/dv collapses to m
            m / (wa * wa + two * c * wa + one)
        },
        T::zero(),
        one,
        opts,
    )
    .require(1e-13)?;
    Ok(head.value + tail.value)
}

/// Density by the convolution `h(u) = ∫₀^∞ f_α(|u|+z) f_α(z) dz`.
///
/// The `z^{α−1}` endpoint singularity is removed by `z = w^{1/α}` (by
/// `z = w^{1/(2α−1)}` at `u = 0`, where the integrand behaves as
/// `z^{2α−2}`), and `[1, ∞)` is mapped to `(0, 1]` by `z = 1/v`.
pub fn pdf_laplace2_conv<T: Real>(order: MlOrder<T>, u: T) -> Result<T> {
    if !u.is_finite() {
        return Err(Error::NonFinite { name: "u" });
    }
    let a = order.alpha();
    let u = u.abs();
    let one = T::one();
    let f = |x: T| ml_pdf(order, x).unwrap_or(T::nan());
    if u == T::zero() && a <= T::c(0.5) && !order.is_exponential() {
        return Err(Error::Singular("density of the type-2 Laplacian is unbounded at 0 for alpha <= 1/2"));
    }
    let m = if u == T::zero() { one / (T::c(2.0) * a - one) } else { one / a };
    let opts = QuadOptions::tol(1e-13, 1e-11);
    let head = integrate(
        |w: T| {
            if w <= T::zero() {
                return T::zero();
            }
            let z = w.powf(m);
            f(u + z) * f(z) * m * w.powf(m - one)
        },
        T::zero(),
        one,
        opts,
    );
    let tail = integrate(
        |v: T| {
            if v <= T::zero() {
                return T::zero();
            }
            let z = v.recip();
            f(u + z) * f(z) * z * z
        },
        T::zero(),
        one,
        opts,
    );
    let value = head.value + tail.value;
    if !value.is_finite() {
        return Err(Error::NonFinite { name: "h" });
    }
    head.require(1e-11)?;
    tail.require(1e-11)?;
    Ok(value)
}

/// Leading power-law tail `h(x) ≈ c_α x^{−(α+1)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailInfo<T> {
    /// `c_α x^{−(α+1)}` with `c_α = Γ(α+1) sin(απ)/π`.
    pub leading: T,
    /// `−(α+1)`.
    pub exponent: T,
}

/// Tail constant `c_α = Γ(α+1)sin(απ)/π`.
pub fn tail_constant<T: Real>(alpha: T) -> T {
    gamma(alpha + T::one()) * sin_pi(alpha) / T::PI()
}

pub fn tail_laplace2<T: Real>(order: MlOrder<T>, x: T) -> Result<TailInfo<T>> {
    if order.is_exponential() {
        return Err(invalid("alpha", 1.0, "the Laplace case has an exponential tail"));
    }
    if !(x > T::zero()) || !x.is_finite() {
        return Err(invalid("x", x.to_f64_lossy(), "must be positive and finite"));
    }
    let a = order.alpha();
    let exponent = -(a + T::one());
    Ok(TailInfo { leading: tail_constant(a) * x.powf(exponent), exponent })
}

/// Coefficients `d_n` of `h(x) ~ Σ_{n≥1} d_n x^{−nα−1}`, from the small-`t`
/// expansion `φ(t) = Σ (−1)^n U_n |t|^{nα}` with
/// `U_n = sin((n+1)πα/2)/sin(πα/2)` and
/// `(1/π)∫₀^∞ cos(tx) t^γ dt = −Γ(γ+1)sin(πγ/2)/π · x^{−γ−1}`.
fn tail_terms<T: Real>(a: T, x: T) -> impl Iterator<Item = (T, T, T)> {
    let half = T::c(0.5);
    let s1 = sin_pi(a * half);
    (1..).map(move |n: usize| {
        let nf = T::of_usize(n);
        let u_n = sin_pi((nf + T::one()) * a * half) / s1;
        let sign = if n % 2 == 0 { -T::one() } else { T::one() };
        let mag = (ln_gamma(nf * a + T::one()) - (nf * a + T::one()) * x.ln()).exp() / T::PI();
        let d = sign * u_n * sin_pi(nf * a * half);
        // |U_n sin(·)| ≤ 1/sin(πα/2): a bound free of accidental zeros
        (nf, d * mag, mag / s1)
    })
}

/// Asymptotic density and tail mass `P(u > x)` for large `x`.
///
/// Summation stops before the envelope of the terms starts to grow (the
/// expansion is asymptotic); `mass_error` is the envelope at that point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailExpansion<T> {
    pub density: T,
    pub mass: T,
    pub mass_error: T,
}

pub fn tail_expansion<T: Real>(order: MlOrder<T>, x: T) -> Result<TailExpansion<T>> {
    tail_laplace2(order, x)?;
    let a = order.alpha();
    let mut density = Compensated::default();
    let mut mass = Compensated::default();
    let mut last = T::infinity();
    for (nf, h_n, env) in tail_terms(a, x).take(200) {
        // ∫_x^∞ t^{−nα−1} dt = x^{−nα}/(nα)
        let to_mass = x / (nf * a);
        let env = env * to_mass;
        if env > last {
            break;
        }
        density.add(h_n);
        mass.add(h_n * to_mass);
        last = env;
    }
    Ok(TailExpansion { density: density.value(), mass: mass.value(), mass_error: last })
}

/// Total mass: quadrature on `[−x, x]` plus the asymptotic tail mass beyond `x`.
pub fn total_mass<T: Real>(order: MlOrder<T>, x: T) -> Result<T> {
    if !(x > T::c(1e-3)) || !x.is_finite() {
        return Err(invalid("x", x.to_f64_lossy(), "cut-off must exceed 1e-3"));
    }
    // the density has a weak cusp at the origin; split there and geometrically beyond
    let mut brk = vec![T::zero(), T::c(1e-3)];
    while *brk.last().expect("non-empty") < x {
        brk.push((*brk.last().expect("non-empty") * T::c(4.0)).min(x));
    }
    let mut body = T::zero();
    for w in brk.windows(2) {
        let mut failure = None;
        let r = integrate(
            |u: T| {
                pdf_laplace2(order, u).unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    T::zero()
                })
            },
            w[0],
            w[1],
            QuadOptions::tol(1e-10, 1e-9),
        );
        if let Some(e) = failure {
            return Err(e);
        }
        body = body + r.value;
    }
    let tail = if order.is_exponential() { T::c(0.5) * (-x).exp() } else { tail_expansion(order, x)?.mass };
    Ok(T::c(2.0) * (body + tail))
}

/// Fraction of `n` draws of `u` that are positive: a Monte-Carlo estimate of
/// the reliability `R = P(x₁ > x₂)`.
pub fn reliability_mc<T: Real>(order: MlOrder<T>, n: usize, state: &RngState) -> Result<T> {
    if n < 1 {
        return Err(invalid("n", 0.0, "at least one draw is required"));
    }
    let mut rng = state.generator()?;
    let hits = (0..n).filter(|_| sample_laplace2(order, &mut rng) > T::zero()).count();
    Ok(T::of_usize(hits) / T::of_usize(n))
}

/// Orders of the summands of `v = x₁ + … + x_m − x_{m+1} − … − x_{m+n}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualSpec<T> {
    pub alphas_in: Vec<T>,
    pub alphas_out: Vec<T>,
}

impl<T: Real> ResidualSpec<T> {
    pub fn new(alphas_in: Vec<T>, alphas_out: Vec<T>) -> Result<Self> {
        if alphas_in.is_empty() && alphas_out.is_empty() {
            return Err(invalid("alphas", 0.0, "at least one order is required"));
        }
        for &a in alphas_in.iter().chain(&alphas_out) {
            MlOrder::new(a)?;
        }
        Ok(Self { alphas_in, alphas_out })
    }
}

/// `φ_v(t) = Π_in (1+(−it)^{α_j})^{−1} · Π_out (1+(it)^{α_j})^{−1}` on the
/// principal branch `(±i)^α = e^{±iπα/2}`; Hermitian in `t`.
pub fn residual_cf<T: Real>(spec: &ResidualSpec<T>, t: T) -> Complex<T> {
    if t < T::zero() {
        return residual_cf(spec, -t).conj();
    }
    let one = Complex::new(T::one(), T::zero());
    let factor = |a: T, sign: T| {
        let r = t.powf(a);
        let theta = sign * T::FRAC_PI_2() * a;
        one / (one + Complex::from_polar(r, theta))
    };
    let ins = spec.alphas_in.iter().fold(one, |acc, &a| acc * factor(a, -T::one()));
    spec.alphas_out.iter().fold(ins, |acc, &a| acc * factor(a, T::one()))
}

/// Moment structure of the law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsReport<T> {
    pub median: T,
    /// Whether `E|u|^n` is finite, for `n = 1..=4`.
    pub moment_exists: BTreeMap<u32, bool>,
    /// `E|u|^n = Γ(n+1)` where it exists (the Laplace case `α = 1`).
    pub moments: BTreeMap<u32, T>,
}

pub fn moments_report<T: Real>(order: MlOrder<T>) -> MomentsReport<T> {
    let exists = order.is_exponential();
    let orders = 1..=4u32;
    MomentsReport {
        median: T::zero(),
        moment_exists: orders.clone().map(|n| (n, exists)).collect(),
        moments: if exists {
            orders.map(|n| (n, gamma(T::of_usize(n as usize + 1)))).collect()
        } else {
            BTreeMap::new()
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mlrand::{sample_batch, Law};
    use crate::stats::proportion;

    fn order(a: f64) -> MlOrder<f64> {
        MlOrder::new(a).unwrap()
    }

    #[test]
    fn cf_examples() {
        assert_eq!(cf_laplace2(order(0.8), 0.0), 1.0);
        assert!((cf_laplace2(order(1.0), 1.0) - 0.5).abs() < 1e-16);
        assert!((cf_laplace2(order(0.5), 1.0) - 0.292_893_218_813_452_5).abs() < 1e-15);
        assert_eq!(cf_laplace2(order(0.7), -3.0), cf_laplace2(order(0.7), 3.0));
    }

    #[test]
    fn pdf_examples() {
        assert_eq!(pdf_laplace2(order(1.0), 0.0).unwrap(), 0.5);
        assert!((pdf_laplace2(order(1.0), 2.0).unwrap() - 0.067_667_641_618_306_35).abs() < 1e-15);
        let a = pdf_laplace2(order(0.8), 1.0).unwrap();
        let b = pdf_laplace2_conv(order(0.8), 1.0).unwrap();
        assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        assert!(matches!(pdf_laplace2(order(0.5), 0.0), Err(Error::Singular(_))));
    }

    #[test]
    fn conv_examples() {
        assert!((pdf_laplace2_conv(order(1.0), 0.0).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(pdf_laplace2_conv(order(0.7), -2.0).unwrap(), pdf_laplace2_conv(order(0.7), 2.0).unwrap());
        let r = pdf_laplace2_conv(order(0.7), 50.0).unwrap() * 50f64.powf(1.7) / tail_constant(0.7);
        assert!((r - 1.0).abs() < 0.25, "{r}");
    }

    #[test]
    fn fourier_and_convolution_agree() {
        for &a in &[0.6, 0.8, 0.9] {
            for &u in &[0.0, 0.5, 1.0, 2.0, 5.0, 10.0] {
                let h = pdf_laplace2(order(a), u).unwrap();
                let g = pdf_laplace2_conv(order(a), u).unwrap();
                assert!((h - g).abs() < 1e-5, "α={a} u={u}: {h} vs {g}");
            }
        }
    }

    #[test]
    fn symmetric() {
        for &u in &[0.3, 4.0] {
            assert_eq!(pdf_laplace2(order(0.7), u).unwrap(), pdf_laplace2(order(0.7), -u).unwrap());
        }
    }

    #[test]
    fn tail_examples() {
        let t = tail_laplace2(order(0.5), 1.0).unwrap();
        assert!((t.leading - 0.282_094_791_773_878_14).abs() < 1e-15);
        assert_eq!(t.exponent, -1.5);
        assert!(tail_laplace2(order(1.0), 1.0).is_err());
    }

    #[test]
    fn tail_expansion_matches_density() {
        for &a in &[0.6, 0.8] {
            let x = 200.0;
            let e = tail_expansion(order(a), x).unwrap();
            assert!(e.mass_error < 1e-6, "{e:?}");
            let h = pdf_laplace2(order(a), x).unwrap();
            assert!((e.density - h).abs() < 1e-9, "α={a}: {} vs {h}", e.density);
        }
    }

    #[test]
    fn tail_slope() {
        let xs: Vec<f64> = (0..=20).map(|i| 10f64 * 10f64.powf(i as f64 / 20.0)).collect();
        let pts: Vec<(f64, f64)> = xs.iter().map(|&x| (x.ln(), pdf_laplace2(order(0.6), x).unwrap().ln())).collect();
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        assert!((slope + 1.6).abs() < 0.15, "{slope}");
    }

    #[test]
    fn normalization() {
        for &a in &[0.6, 0.8, 1.0] {
            let total = total_mass(order(a), 200.0).unwrap();
            assert!((total - 1.0).abs() < 1e-4, "α={a}: {total}");
        }
        assert!(total_mass(order(0.6), 0.0).is_err());
    }

    #[test]
    fn density_transforms_back_to_cf() {
        let o = order(0.8);
        for &t in &[0.5, 1.0, 2.0] {
            let r = fourier_cos(|u| pdf_laplace2(o, u).unwrap(), t, 1e-7, 2000);
            let phi = 2.0 * r.value;
            assert!((phi - cf_laplace2(o, t)).abs() < 1e-4, "t={t}: {phi}");
        }
    }

    #[test]
    fn reliability() {
        for &(a, seed) in &[(0.8, 40), (1.0, 41)] {
            let n = 1_000_000;
            let r = reliability_mc(order(a), n, &RngState::new(seed)).unwrap();
            let hits = (r * n as f64).round() as usize;
            assert!(proportion(hits, n, 0.5).within(0.5, 3.0), "α={a}: {r}");
        }
        let one = reliability_mc(order(0.6), 1, &RngState::new(3)).unwrap();
        assert!(one == 0.0 || one == 1.0);
    }

    #[test]
    fn residual_cf_examples() {
        for &a in &[0.4, 0.75, 1.0] {
            let spec = ResidualSpec::new(vec![a], vec![a]).unwrap();
            for &t in &[0.0, 0.3, 1.0, 7.0] {
                let z = residual_cf(&spec, t);
                assert!((z.re - cf_laplace2(order(a), t)).abs() < 1e-15 && z.im.abs() < 1e-15);
            }
        }
        let z = residual_cf(&ResidualSpec::new(vec![1.0f64], vec![1.0]).unwrap(), 1.0);
        assert!((z.re - 0.5).abs() < 1e-16 && z.im.abs() < 1e-16);
        // oracle: ((1+e^{-iπ/4})^{-1})²
        let z = residual_cf(&ResidualSpec::new(vec![0.5f64, 0.5], vec![]).unwrap(), 1.0);
        assert!((z.re - 0.207_106_781_186_547_52).abs() < 1e-15);
        assert!((z.im - 0.207_106_781_186_547_52).abs() < 1e-15);
        assert!(ResidualSpec::<f64>::new(vec![], vec![]).is_err());
        assert!(ResidualSpec::new(vec![1.2], vec![]).is_err());
    }

    #[test]
    fn moments() {
        assert_eq!(moments_report(order(0.7)).median, 0.0);
        let m = moments_report(order(1.0));
        assert_eq!(m.moments[&2], 2.0);
        assert!(m.moment_exists[&3]);
        assert!(!moments_report(order(0.99)).moment_exists[&1]);
    }

    #[test]
    fn absolute_mean_does_not_stabilize() {
        let growing = (0..10u64)
            .filter(|&seed| {
                let xs = sample_batch(Law::Laplace2 { alpha: 0.7 }, 1_000_000, &RngState::new(500 + seed)).unwrap().values;
                let mean = |n: usize| xs[..n].iter().map(|x: &f64| x.abs()).sum::<f64>() / n as f64;
                mean(1_000_000) > 2.0 * mean(1_000)
            })
            .count();
        assert!(growing >= 8, "{growing}");
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn cf_in_unit_interval(a in 0.05f64..=1.0, t in -1e3f64..1e3) {
                let c = cf_laplace2(order(a), t);
                prop_assert!(c > 0.0 && c <= 1.0);
            }

            #[test]
            fn residual_cf_hermitian_and_bounded(
                ins in proptest::collection::vec(0.05f64..=1.0, 0..3),
                outs in proptest::collection::vec(0.05f64..=1.0, 1..3),
                t in 0.0f64..50.0,
            ) {
                let spec = ResidualSpec::new(ins, outs).unwrap();
                let z = residual_cf(&spec, t);
                prop_assert_eq!(residual_cf(&spec, -t), z.conj());
                prop_assert!(z.norm() <= 1.0 + 1e-15);
                prop_assert_eq!(residual_cf(&spec, 0.0), Complex::new(1.0, 0.0));
            }
        }
    }
}
