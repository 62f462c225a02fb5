//! The fractional Poisson renewal process: iid Mittag-Leffler waiting times,
//! counting probabilities, fractional Erlang laws and path simulation.
//!
//! Time is measured in units where the rate is 1.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::mlrand::{sample_ml, RngState};
use crate::scalar::{Compensated, Real};
use crate::special_fn::{ml_deriv_scaled, ml_survival, MlOrder, MAX_DERIV_ORDER};

/// Default truncation index of counting-pmf tables.
pub const DEFAULT_K_MAX: usize = 100;

/// Event times of one simulated renewal path on `(0, horizon]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenewalPath<T> {
    pub event_times: Vec<T>,
    pub horizon: T,
}

impl<T: Real> RenewalPath<T> {
    /// `N(t)`: the number of events in `(0, t]`.
    pub fn count(&self, t: T) -> usize {
        self.event_times.partition_point(|&e| e <= t)
    }
}

/// Counting distribution `P(N(t) = k)` for `k = 0..=K`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountPmf<T> {
    pub alpha: T,
    pub t: T,
    pub probs: Vec<T>,
    pub truncation_mass: T,
}

impl<T: Real> CountPmf<T> {
    /// Mean of the truncated distribution `Σ k·probs[k]`.
    pub fn truncated_mean(&self) -> T {
        let mut s = Compensated::default();
        for (k, &p) in self.probs.iter().enumerate() {
            s.add(T::of_usize(k) * p);
        }
        s.value()
    }

    pub fn total(&self) -> T {
        let mut s = Compensated::default();
        for &p in &self.probs {
            s.add(p);
        }
        s.value()
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if !t.is_finite() || t < T::zero() {
        return Err(invalid("t", t.to_f64_lossy(), "must be finite and non-negative"));
    }
    Ok(())
}

/// Survival probability `R(t) = E_α(-t^α)` of one waiting time.
pub fn survival<T: Real>(order: MlOrder<T>, t: T) -> Result<T> {
    check_time(t)?;
    ml_survival(order, t)
}

/// `P(N(t) = k) = t^{kα} E_α^{(k)}(-t^α) / k!`.
pub fn fpp_pmf<T: Real>(order: MlOrder<T>, t: T, k: usize) -> Result<T> {
    check_time(t)?;
    if k > MAX_DERIV_ORDER {
        return Err(invalid("k", k as f64, "exceeds the factorial range (170)"));
    }
    if t == T::zero() {
        return Ok(if k == 0 { T::one() } else { T::zero() });
    }
    if k == 0 {
        return ml_survival(order, t);
    }
    let y = t.powf(order.alpha());
    let p = ml_deriv_scaled(order, k, y)?.value;
    Ok(p.max(T::zero()).min(T::one()))
}

/// `P(N(t) = k)` for `k ≤ k_max` with the unaccounted mass `1 − Σ probs`.
pub fn fpp_pmf_table<T: Real>(order: MlOrder<T>, t: T, k_max: usize) -> Result<CountPmf<T>> {
    if k_max > MAX_DERIV_ORDER {
        return Err(invalid("k_max", k_max as f64, "exceeds the factorial range (170)"));
    }
    check_time(t)?;
    let probs = (0..=k_max).map(|k| fpp_pmf(order, t, k)).collect::<Result<Vec<T>>>()?;
    let mut pmf = CountPmf { alpha: order.alpha(), t, probs, truncation_mass: T::zero() };
    pmf.truncation_mass = (T::one() - pmf.total()).max(T::zero());
    Ok(pmf)
}

fn check_order_k(k: usize) -> Result<()> {
    if k < 1 {
        return Err(invalid("k", 0.0, "Erlang order must be at least 1"));
    }
    if k > MAX_DERIV_ORDER {
        return Err(invalid("k", k as f64, "exceeds the factorial range (170)"));
    }
    Ok(())
}

/// Density of the `k`-th event time, `α t^{kα−1} E_α^{(k)}(−t^α)/(k−1)! = αk·P(N(t)=k)/t`.
pub fn erlang_pdf<T: Real>(order: MlOrder<T>, k: usize, t: T) -> Result<T> {
    check_order_k(k)?;
    if !t.is_finite() || t <= T::zero() {
        return Err(invalid("t", t.to_f64_lossy(), "must be positive"));
    }
    let p = fpp_pmf(order, t, k)?;
    Ok(order.alpha() * T::of_usize(k) * p / t)
}

/// Distribution function of the `k`-th event time, `1 − Σ_{n<k} P(N(t)=n)`.
pub fn erlang_cdf<T: Real>(order: MlOrder<T>, k: usize, t: T) -> Result<T> {
    check_order_k(k)?;
    check_time(t)?;
    if t == T::zero() {
        return Ok(T::zero());
    }
    let mut s = Compensated::default();
    for n in 0..k {
        s.add(fpp_pmf(order, t, n)?);
    }
    Ok((T::one() - s.value()).max(T::zero()).min(T::one()))
}

/// One renewal path: cumulative sums of iid ML(α) waiting times up to `t_max`.
pub fn simulate_renewal<T: Real, R: Rng + ?Sized>(order: MlOrder<T>, t_max: T, rng: &mut R) -> Result<RenewalPath<T>> {
    if !t_max.is_finite() || t_max <= T::zero() {
        return Err(invalid("t_max", t_max.to_f64_lossy(), "must be positive and finite"));
    }
    let mut event_times = Vec::new();
    let mut t = T::zero();
    loop {
        t = t + sample_ml(order, rng);
        if t > t_max {
            break;
        }
        event_times.push(t);
    }
    Ok(RenewalPath { event_times, horizon: t_max })
}

/// Number of renewals in `(0, t]` without storing the path.
fn count_events<T: Real, R: Rng + ?Sized>(order: MlOrder<T>, t: T, rng: &mut R) -> usize {
    let mut s = T::zero();
    let mut n = 0;
    loop {
        s = s + sample_ml(order, rng);
        if s > t {
            return n;
        }
        n += 1;
    }
}

/// Empirical `P(N(t) = k)` from `n_paths` paths; path `i` draws from stream `state.path(i)`.
pub fn count_distribution_mc<T: Real>(order: MlOrder<T>, t: T, n_paths: usize, state: &RngState) -> Result<CountPmf<T>> {
    if n_paths < 1 {
        return Err(invalid("n_paths", 0.0, "at least one path is required"));
    }
    check_time(t)?;
    state.generator()?;
    let counts: Vec<usize> = (0..n_paths as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = state.path(i).generator().expect("algorithm checked above");
            count_events(order, t, &mut rng)
        })
        .collect();
    let k_max = counts.iter().copied().max().unwrap_or(0);
    let mut hist = vec![0usize; k_max + 1];
    for c in counts {
        hist[c] += 1;
    }
    let n = T::of_usize(n_paths);
    Ok(CountPmf {
        alpha: order.alpha(),
        t,
        probs: hist.into_iter().map(|h| T::of_usize(h) / n).collect(),
        truncation_mass: T::zero(),
    })
}
