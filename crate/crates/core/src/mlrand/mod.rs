//! Seeded random variates for the Mittag-Leffler family.
//!
//! Generators carry explicit state: an [`RngState`] names a ChaCha8 stream,
//! and every sampler is a deterministic function of its parameters and the
//! generator it is handed. Parallel Monte Carlo hands each path its own
//! stream via [`RngState::path`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scalar::{sin_pi, Real};
use crate::special_fn::MlOrder;

#[cfg(test)]
mod tests;

/// Identity of the underlying uniform generator.
pub const ALGORITHM_ID: &str = "chacha8";

/// Concrete generator behind every [`RngState`].
pub type MlRng = ChaCha8Rng;

/// Seed, stream and algorithm naming one reproducible variate sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngState {
    pub seed: u64,
    pub stream_id: u64,
    pub algorithm_id: String,
}

impl RngState {
    pub fn new(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id, algorithm_id: ALGORITHM_ID.to_owned() }
    }

    /// State for Monte-Carlo path `index`.
    ///
    /// Paths use `stream_id = index` under a seed derived from this state's
    /// (seed, stream), so path streams never coincide with the parent's.
    pub fn path(&self, index: u64) -> Self {
        let seed = splitmix64(self.seed ^ splitmix64(self.stream_id.wrapping_add(0x6a09_e667_f3bc_c909)));
        Self { seed, stream_id: index, algorithm_id: self.algorithm_id.clone() }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn generator(&self) -> Result<MlRng> {
        if self.algorithm_id != ALGORITHM_ID {
            return Err(Error::UnknownTag(self.algorithm_id.clone()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_id);
        Ok(rng)
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixture weights of the AR(1) innovation: `ε = B₁M₁ − B₂M₂` with
/// `P(Bᵢ = 0) = ρ^α`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InnovationSpec<T> {
    pub alpha: T,
    pub rho: T,
    pub atom_weight: T,
}

impl<T: Real> InnovationSpec<T> {
    pub fn new(alpha: T, rho: T) -> Result<Self> {
        MlOrder::new(alpha)?;
        if !rho.is_finite() || rho <= T::zero() || rho > T::one() {
            return Err(invalid("rho", rho.to_f64_lossy(), "must lie in (0, 1]"));
        }
        Ok(Self { alpha, rho, atom_weight: rho.powf(alpha) })
    }

    pub fn order(&self) -> MlOrder<T> {
        MlOrder::new(self.alpha).expect("validated on construction")
    }
}

/// The three q-Mittag-Leffler innovation laws with closed-form mixtures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QmlCase {
    /// `q = 2, η = 1`: atom at 0 plus an ML(α) component.
    Q2Eta1,
    /// `q = 3, η = 1`: components with transforms `(1+2t^α)^{-1}`, `(1+2t^α)^{-2}`.
    Q3Eta1,
    /// `q = 3/2, η = 1/4`: as `Q3Eta1` with scale 1/2.
    Q1p5Eta0p25,
}

impl QmlCase {
    pub const ALL: [QmlCase; 3] = [QmlCase::Q2Eta1, QmlCase::Q3Eta1, QmlCase::Q1p5Eta0p25];

    pub fn as_str(&self) -> &'static str {
        match self {
            QmlCase::Q2Eta1 => "q2_eta1",
            QmlCase::Q3Eta1 => "q3_eta1",
            QmlCase::Q1p5Eta0p25 => "q1p5_eta0p25",
        }
    }

    /// Scale `a(q-1)` of the gamma-subordinated components.
    pub fn scale<T: Real>(&self) -> T {
        match self {
            QmlCase::Q2Eta1 => T::one(),
            QmlCase::Q3Eta1 => T::c(2.0),
            QmlCase::Q1p5Eta0p25 => T::c(0.5),
        }
    }

    /// Number of non-degenerate mixture components.
    pub fn components(&self) -> usize {
        match self {
            QmlCase::Q2Eta1 => 1,
            QmlCase::Q3Eta1 | QmlCase::Q1p5Eta0p25 => 2,
        }
    }
}

impl fmt::Display for QmlCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QmlCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QmlCase::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::UnknownTag(s.to_owned()))
    }
}

/// Uniform variate on the open interval (0, 1); endpoints are redrawn.
pub fn uniform_open<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    loop {
        let u = T::c(rng.random::<f64>());
        if u > T::zero() && u < T::one() {
            return u;
        }
    }
}

/// Standard exponential variate.
pub fn exponential<T: Real, R: Rng + ?Sized>(rng: &mut R) -> T {
    -uniform_open::<T, R>(rng).ln()
}

/// Gamma(shape, 1) variate (Marsaglia-Tsang squeeze, boosted below shape 1).
pub fn gamma_variate<T: Real, R: Rng + ?Sized>(shape: T, rng: &mut R) -> Result<T> {
    let k = shape.to_f64_lossy();
    let dist = Gamma::new(k, 1.0).map_err(|_| invalid("shape", k, "must be positive and finite"))?;
    loop {
        let g = T::c(dist.sample(rng));
        if g > T::zero() && g.is_finite() {
            return Ok(g);
        }
    }
}

/// Mittag-Leffler variate with survival function `E_α(-x^α)`.
///
/// `y = z·w^{1/α}` with `z` standard exponential and
/// `w = sin(πα)cot(παu) − cos(πα) = sin(πα(1−u))/sin(παu)`.
pub fn sample_ml<T: Real, R: Rng + ?Sized>(order: MlOrder<T>, rng: &mut R) -> T {
    let alpha = order.alpha();
    if order.is_exponential() {
        return exponential(rng);
    }
    loop {
        let z: T = exponential(rng);
        let u: T = uniform_open(rng);
        let w = sin_pi(alpha * (T::one() - u)) / sin_pi(alpha * u);
        let y = z * w.powf(alpha.recip());
        if y > T::zero() && y.is_finite() {
            return y;
        }
    }
}

/// One-sided α-stable variate with Laplace transform `e^{-t^α}` (Kanter).
///
/// `α = 1` is the point mass at 1 and is returned only when
/// `allow_degenerate` is set.
pub fn sample_positive_stable<T: Real, R: Rng + ?Sized>(
    order: MlOrder<T>,
    allow_degenerate: bool,
    rng: &mut R,
) -> Result<T> {
    if order.is_exponential() {
        return if allow_degenerate {
            Ok(T::one())
        } else {
            Err(invalid("alpha", 1.0, "positive stable law needs alpha < 1"))
        };
    }
    Ok(positive_stable(order.alpha(), rng))
}

fn positive_stable<T: Real, R: Rng + ?Sized>(alpha: T, rng: &mut R) -> T {
    let one = T::one();
    loop {
        let u: T = uniform_open(rng);
        let e: T = exponential(rng);
        // Kanter's representation, assembled in logs
        let ln_x = (alpha * sin_pi(alpha * u).ln() + (one - alpha) * sin_pi((one - alpha) * u).ln()
            - sin_pi(u).ln())
            / alpha
            - (one - alpha) / alpha * e.ln();
        let x = ln_x.exp();
        if x > T::zero() && x.is_finite() {
            return x;
        }
    }
}

/// Generalized Mittag-Leffler variate with Laplace transform `[1 + s·t^α]^{-δ}`.
///
/// `X = (s·G)^{1/α}·S` with `G ~ Gamma(δ, 1)` and `S` positive α-stable.
pub fn sample_generalized_ml<T: Real, R: Rng + ?Sized>(
    order: MlOrder<T>,
    delta: T,
    scale: T,
    rng: &mut R,
) -> Result<T> {
    if !(delta > T::zero()) || !delta.is_finite() {
        return Err(invalid("delta", delta.to_f64_lossy(), "must be positive and finite"));
    }
    if !(scale > T::zero()) || !scale.is_finite() {
        return Err(invalid("scale", scale.to_f64_lossy(), "must be positive and finite"));
    }
    let g = gamma_variate(delta, rng)?;
    if order.is_exponential() {
        return Ok(scale * g);
    }
    let alpha = order.alpha();
    Ok((scale * g).powf(alpha.recip()) * positive_stable(alpha, rng))
}

/// Type-2 generalized Laplacian variate: the difference of two iid ML(α) draws.
pub fn sample_laplace2<T: Real, R: Rng + ?Sized>(order: MlOrder<T>, rng: &mut R) -> T {
    let a = sample_ml(order, rng);
    a - sample_ml(order, rng)
}

/// AR(1) innovation `B₁M₁ − B₂M₂`, `Bᵢ ~ Bernoulli(1 − ρ^α)`, `Mᵢ ~ ML(α)`.
pub fn sample_ar_innovation<T: Real, R: Rng + ?Sized>(spec: &InnovationSpec<T>, rng: &mut R) -> T {
    let order = spec.order();
    let p = (T::one() - spec.atom_weight).to_f64_lossy().clamp(0.0, 1.0);
    let mut eps = T::zero();
    if rng.random_bool(p) {
        eps = eps + sample_ml(order, rng);
    }
    if rng.random_bool(p) {
        eps = eps - sample_ml(order, rng);
    }
    eps
}

/// Innovation of the q-Mittag-Leffler AR(1) model for the closed-form cases.
///
/// Each of `case.components()` independent Bernoulli(1 − ρ^α) indicators that
/// fires adds one unit of gamma shape, so the number of fired indicators picks
/// the mixture component with the binomial weights `ρ^{2α}`, `2ρ^α(1−ρ^α)`,
/// `(1−ρ^α)²`.
pub fn sample_qml_innovation<T: Real, R: Rng + ?Sized>(
    case: QmlCase,
    order: MlOrder<T>,
    rho: T,
    rng: &mut R,
) -> Result<T> {
    let spec = InnovationSpec::new(order.alpha(), rho)?;
    let p = (T::one() - spec.atom_weight).to_f64_lossy().clamp(0.0, 1.0);
    let fired = (0..case.components()).filter(|_| rng.random_bool(p)).count();
    match (case, fired) {
        (_, 0) => Ok(T::zero()),
        (QmlCase::Q2Eta1, _) => Ok(sample_ml(order, rng)),
        (_, k) => sample_generalized_ml(order, T::of_usize(k), case.scale(), rng),
    }
}

/// A law that [`sample_batch`] can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum Law<T> {
    Ml { alpha: T },
    PositiveStable { alpha: T },
    GeneralizedMl { alpha: T, delta: T, scale: T },
    Laplace2 { alpha: T },
    ArInnovation { alpha: T, rho: T },
    QmlInnovation { case: QmlCase, alpha: T, rho: T },
}

impl<T: Real> Law<T> {
    /// Checks parameters once so that per-draw sampling cannot fail.
    pub fn validate(&self) -> Result<()> {
        match *self {
            Law::Ml { alpha } | Law::Laplace2 { alpha } => MlOrder::new(alpha).map(|_| ()),
            Law::PositiveStable { alpha } => {
                MlOrder::new(alpha)?;
                if alpha == T::one() {
                    return Err(invalid("alpha", 1.0, "positive stable law needs alpha < 1"));
                }
                Ok(())
            }
            Law::GeneralizedMl { alpha, delta, scale } => {
                MlOrder::new(alpha)?;
                if !(delta > T::zero() && delta.is_finite()) {
                    return Err(invalid("delta", delta.to_f64_lossy(), "must be positive and finite"));
                }
                if !(scale > T::zero() && scale.is_finite()) {
                    return Err(invalid("scale", scale.to_f64_lossy(), "must be positive and finite"));
                }
                Ok(())
            }
            Law::ArInnovation { alpha, rho } | Law::QmlInnovation { alpha, rho, .. } => {
                InnovationSpec::new(alpha, rho).map(|_| ())
            }
        }
    }

    /// Tag naming the law and its parameters, e.g. `ml(alpha=0.7)`.
    pub fn tag(&self) -> String {
        let params = self
            .params()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",");
        format!("{}({params})", self.name())
    }

    pub fn name(&self) -> &'static str {
        match self {
            Law::Ml { .. } => "ml",
            Law::PositiveStable { .. } => "positive_stable",
            Law::GeneralizedMl { .. } => "generalized_ml",
            Law::Laplace2 { .. } => "laplace2",
            Law::ArInnovation { .. } => "ar_innovation",
            Law::QmlInnovation { case, .. } => match case {
                QmlCase::Q2Eta1 => "qml_innovation_q2_eta1",
                QmlCase::Q3Eta1 => "qml_innovation_q3_eta1",
                QmlCase::Q1p5Eta0p25 => "qml_innovation_q1p5_eta0p25",
            },
        }
    }

    pub fn params(&self) -> BTreeMap<String, f64> {
        let f = |x: T| x.to_f64_lossy();
        let pairs: Vec<(&str, f64)> = match *self {
            Law::Ml { alpha } | Law::PositiveStable { alpha } | Law::Laplace2 { alpha } => vec![("alpha", f(alpha))],
            Law::GeneralizedMl { alpha, delta, scale } => {
                vec![("alpha", f(alpha)), ("delta", f(delta)), ("scale", f(scale))]
            }
            Law::ArInnovation { alpha, rho } | Law::QmlInnovation { alpha, rho, .. } => {
                vec![("alpha", f(alpha)), ("rho", f(rho))]
            }
        };
        pairs.into_iter().map(|(k, v)| (k.to_owned(), v)).collect()
    }
}

impl<T: Real> Distribution<T> for Law<T> {
    /// Panics on parameters that fail [`Law::validate`].
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> T {
        let order = |a: T| MlOrder::new(a).expect("validated law");
        match *self {
            Law::Ml { alpha } => sample_ml(order(alpha), rng),
            Law::PositiveStable { alpha } => sample_positive_stable(order(alpha), false, rng).expect("validated law"),
            Law::GeneralizedMl { alpha, delta, scale } => {
                sample_generalized_ml(order(alpha), delta, scale, rng).expect("validated law")
            }
            Law::Laplace2 { alpha } => sample_laplace2(order(alpha), rng),
            Law::ArInnovation { alpha, rho } => {
                sample_ar_innovation(&InnovationSpec::new(alpha, rho).expect("validated law"), rng)
            }
            Law::QmlInnovation { case, alpha, rho } => {
                sample_qml_innovation(case, order(alpha), rho, rng).expect("validated law")
            }
        }
    }
}

/// Variates together with the law and generator state that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch<T> {
    pub values: Vec<T>,
    pub n: usize,
    pub distribution_tag: String,
    pub params: BTreeMap<String, f64>,
    pub rng: RngState,
}

/// Draws `n` variates of `law` from the start of the stream named by `state`.
pub fn sample_batch<T: Real>(law: Law<T>, n: usize, state: &RngState) -> Result<SampleBatch<T>> {
    law.validate()?;
    let mut rng = state.generator()?;
    let values: Vec<T> = (&mut rng).sample_iter(law).take(n).collect();
    Ok(SampleBatch {
        n: values.len(),
        values,
        distribution_tag: law.tag(),
        params: law.params(),
        rng: state.clone(),
    })
}
