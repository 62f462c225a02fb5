use super::*;
use crate::special_fn::{ml_cdf, ml_survival};
use crate::stats::{ks_statistic, ks_two_sample, mean_se, proportion, KS_C99};

fn order(a: f64) -> MlOrder<f64> {
    MlOrder::new(a).unwrap()
}

fn draws(law: Law<f64>, n: usize, seed: u64) -> Vec<f64> {
    sample_batch(law, n, &RngState::new(seed)).unwrap().values
}

fn laplace_estimate(xs: &[f64], t: f64) -> crate::stats::Estimate<f64> {
    mean_se(&xs.iter().map(|x| (-t * x).exp()).collect::<Vec<_>>())
}

fn zeros(xs: &[f64]) -> usize {
    xs.iter().filter(|&&x| x == 0.0).count()
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let s = RngState::with_stream(42, 7);
    let a = sample_batch(Law::Ml { alpha: 0.7 }, 100, &s).unwrap();
    let b = sample_batch(Law::Ml { alpha: 0.7 }, 100, &s).unwrap();
    assert_eq!(a, b);
    let c = sample_batch(Law::Ml { alpha: 0.7 }, 100, &RngState::with_stream(42, 8)).unwrap();
    assert_ne!(a.values, c.values);
    assert_ne!(s.path(0), s.path(1));
    assert_ne!(s.path(0).seed, s.seed);
    assert_eq!(a.distribution_tag, "ml(alpha=0.7)");
    assert_eq!(a.n, 100);
    assert!(RngState { algorithm_id: "mt19937".into(), ..s }.generator().is_err());
}

#[test]
fn ml_exponential_case_has_unit_mean() {
    let xs = draws(Law::Ml { alpha: 1.0 }, 1_000_000, 1);
    assert!((mean_se(&xs).mean - 1.0).abs() < 0.01);
}

#[test]
fn ml_draws_pass_kolmogorov_smirnov() {
    let n = 100_000;
    let xs = draws(Law::Ml { alpha: 0.7 }, n, 2);
    let d = ks_statistic(&xs, |x| ml_cdf(order(0.7), x)).unwrap();
    assert!(d < KS_C99 / (n as f64).sqrt(), "D = {d}");
}

#[test]
fn ml_tail_frequencies() {
    let n = 1_000_000;
    let xs = draws(Law::Ml { alpha: 0.7 }, n, 3);
    for x in [50.0, 100.0] {
        let p = ml_survival(order(0.7), x).unwrap();
        let hits = xs.iter().filter(|&&v| v > x).count();
        assert!(proportion(hits, n, p).within(p, 3.0), "x={x}: {hits} vs {p}");
    }
    // exponential tails are far lighter
    let ys = draws(Law::Ml { alpha: 1.0 }, n, 3);
    assert_eq!(ys.iter().filter(|&&v| v > 100.0).count(), 0);
}

#[test]
fn positive_stable_laplace_transform() {
    let xs = draws(Law::PositiveStable { alpha: 0.5 }, 1_000_000, 4);
    assert!(xs.iter().all(|&x| x > 0.0));
    assert!(laplace_estimate(&xs, 1.0).within((-1.0f64).exp(), 3.0));
    let ys = draws(Law::PositiveStable { alpha: 0.9 }, 1_000_000, 5);
    assert!(laplace_estimate(&ys, 2.0).within((-(2.0f64.powf(0.9))).exp(), 3.0));
}

#[test]
fn positive_stable_rejects_unit_order_unless_asked() {
    let mut rng = RngState::new(0).generator().unwrap();
    assert!(sample_positive_stable(order(1.0), false, &mut rng).is_err());
    assert_eq!(sample_positive_stable(order(1.0), true, &mut rng).unwrap(), 1.0);
    assert!(Law::PositiveStable { alpha: 1.0 }.validate().is_err());
}

#[test]
fn generalized_ml_reduces_to_ml() {
    let n = 100_000;
    let xs = draws(Law::GeneralizedMl { alpha: 0.6, delta: 1.0, scale: 1.0 }, n, 6);
    let d = ks_statistic(&xs, |x| ml_cdf(order(0.6), x)).unwrap();
    assert!(d < KS_C99 / (n as f64).sqrt(), "D = {d}");
    let ys = draws(Law::GeneralizedMl { alpha: 1.0, delta: 1.0, scale: 1.0 }, 1_000_000, 7);
    assert!((mean_se(&ys).mean - 1.0).abs() < 0.01);
}

#[test]
fn generalized_ml_laplace_transform_factorizes() {
    let xs = draws(Law::GeneralizedMl { alpha: 0.5, delta: 2.0, scale: 2.0 }, 1_000_000, 8);
    assert!(laplace_estimate(&xs, 1.0).within(1.0 / 9.0, 3.0));
    for &(a, delta, s) in &[(0.7, 0.5, 1.0), (0.4, 3.0, 0.5)] {
        let xs = draws(Law::GeneralizedMl { alpha: a, delta, scale: s }, 200_000, 9);
        for t in [0.25, 0.5, 1.0, 2.0] {
            let want = (1.0 + s * f64::powf(t, a)).powf(-delta);
            let est = laplace_estimate(&xs, t);
            assert!(est.within(want, 3.0), "α={a} δ={delta} s={s} t={t}: {est:?} vs {want}");
        }
    }
}

#[test]
fn laplace2_symmetry_and_characteristic_function() {
    let n = 1_000_000;
    let xs = draws(Law::Laplace2 { alpha: 1.0 }, n, 10);
    let pos = xs.iter().filter(|&&u| u > 0.0).count();
    assert!((pos as f64 / n as f64 - 0.5).abs() < 0.002);

    let ys = draws(Law::Laplace2 { alpha: 0.9 }, n, 11);
    let pos = ys.iter().filter(|&&u| u > 0.0).count();
    assert!(proportion(pos, n, 0.5).within(0.5, 3.0), "median off zero: {pos}");

    let zs = draws(Law::Laplace2 { alpha: 0.8 }, n, 12);
    let cf = mean_se(&zs.iter().map(|u| u.cos()).collect::<Vec<_>>());
    let want = 1.0 / (2.0 + 2.0 * (0.4 * std::f64::consts::PI).cos());
    assert!(cf.within(want, 3.0), "{cf:?} vs {want}");
}

#[test]
fn ar_innovation_atoms() {
    let xs = draws(Law::ArInnovation { alpha: 0.7, rho: 1.0 }, 10_000, 13);
    assert!(xs.iter().all(|&e| e == 0.0));

    let n = 1_000_000;
    let xs = draws(Law::ArInnovation { alpha: 0.8, rho: 0.3 }, n, 14);
    let p = 0.3f64.powf(1.6);
    assert!(proportion(zeros(&xs), n, p).within(p, 3.0));
    assert!((p - 0.1456).abs() < 1e-4);
}

#[test]
fn ar_innovation_with_vanishing_atoms_is_laplace2() {
    let n = 100_000;
    let a = draws(Law::ArInnovation { alpha: 0.7, rho: 1e-12 }, n, 15);
    let b = draws(Law::Laplace2 { alpha: 0.7 }, n, 16);
    let d = ks_two_sample(&a, &b);
    assert!(d < KS_C99 * (2.0 / n as f64).sqrt(), "D = {d}");
    assert!(InnovationSpec::new(0.7, 0.0).is_err());
}

#[test]
fn qml_innovation_cases() {
    let xs = draws(Law::QmlInnovation { case: QmlCase::Q2Eta1, alpha: 0.6, rho: 1.0 }, 10_000, 17);
    assert!(xs.iter().all(|&e| e == 0.0));

    let n = 1_000_000;
    let (a, rho) = (0.5, 0.5);
    let w: f64 = f64::powf(rho, a);
    let xs = draws(Law::QmlInnovation { case: QmlCase::Q3Eta1, alpha: a, rho }, n, 18);
    let c = 1.0 / (1.0 + 2.0);
    let want = w * w + 2.0 * w * (1.0 - w) * c + (1.0 - w).powi(2) * c * c;
    assert!(laplace_estimate(&xs, 1.0).within(want, 3.0));

    let xs = draws(Law::QmlInnovation { case: QmlCase::Q1p5Eta0p25, alpha: a, rho }, n, 19);
    assert!(proportion(zeros(&xs), n, 0.5).within(0.5, 3.0));
    let c = 1.0 / 1.5;
    let want = w * w + 2.0 * w * (1.0 - w) * c + (1.0 - w).powi(2) * c * c;
    assert!(laplace_estimate(&xs, 1.0).within(want, 3.0));

    let xs = draws(Law::QmlInnovation { case: QmlCase::Q2Eta1, alpha: 0.6, rho: 0.4 }, n, 20);
    let w = 0.4f64.powf(0.6);
    assert!(laplace_estimate(&xs, 1.0).within(w + (1.0 - w) * 0.5, 3.0));
}

#[test]
fn qml_case_tags_round_trip() {
    for c in QmlCase::ALL {
        assert_eq!(c.as_str().parse::<QmlCase>().unwrap(), c);
    }
    assert!(matches!("q4_eta1".parse::<QmlCase>(), Err(Error::UnknownTag(_))));
}

#[test]
fn f32_samplers() {
    let mut rng = RngState::new(21).generator().unwrap();
    let o = MlOrder::new(0.7f32).unwrap();
    let xs: Vec<f32> = (0..10_000).map(|_| sample_ml(o, &mut rng)).collect();
    assert!(xs.iter().all(|&x| x > 0.0 && x.is_finite()));
    let p = xs.iter().filter(|&&x| x > 1.0).count() as f64 / 1e4;
    let want = ml_survival(order(0.7), 1.0).unwrap();
    assert!((p - want).abs() < 4.0 * (want * (1.0 - want) / 1e4).sqrt());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn identical_state_identical_batch(seed in any::<u64>(), stream in any::<u64>(), a in 0.05f64..=1.0) {
            let s = RngState::with_stream(seed, stream);
            let x = sample_batch(Law::Laplace2 { alpha: a }, 16, &s).unwrap();
            let y = sample_batch(Law::Laplace2 { alpha: a }, 16, &s).unwrap();
            prop_assert_eq!(x.values, y.values);
        }

        #[test]
        fn ml_draws_strictly_positive(seed in any::<u64>(), a in 0.02f64..=1.0) {
            let xs = draws(Law::Ml { alpha: a }, 256, seed);
            prop_assert!(xs.iter().all(|&x| x > 0.0 && x.is_finite()));
        }

        #[test]
        fn innovations_are_finite(seed in any::<u64>(), a in 0.05f64..=1.0, rho in 0.001f64..=1.0) {
            let xs = draws(Law::ArInnovation { alpha: a, rho }, 64, seed);
            prop_assert!(xs.iter().all(|x| x.is_finite()));
            for case in QmlCase::ALL {
                let ys = draws(Law::QmlInnovation { case, alpha: a, rho }, 64, seed);
                prop_assert!(ys.iter().all(|&y| y.is_finite() && y >= 0.0));
            }
        }
    }
}
