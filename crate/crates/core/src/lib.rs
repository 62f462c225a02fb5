//! Mittag-Leffler functions and the stochastic models built on them: the
//! fractional Poisson renewal process, the type-2 generalized Laplacian law,
//! its AR(1) time series, and q-Mittag-Leffler laws and processes.
//!
//! Numerical kernels are generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar for the common cases.

pub mod artime;
pub mod error;
pub mod gamma;
pub mod io;
pub mod laplace2;
pub mod mlrand;
pub mod qml;
pub mod quad;
pub mod renewal;
pub mod scalar;
pub mod special_fn;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::Real;

pub type MlOrder64 = special_fn::MlOrder<f64>;
pub type MlOrder32 = special_fn::MlOrder<f32>;
pub type Ml2Params64 = special_fn::Ml2Params<f64>;
pub type PrabhakarParams64 = special_fn::PrabhakarParams<f64>;
pub type EvalResult64 = special_fn::EvalResult<f64>;
pub type EvalResult32 = special_fn::EvalResult<f32>;
pub type Law64 = mlrand::Law<f64>;
pub type SampleBatch64 = mlrand::SampleBatch<f64>;
pub type InnovationSpec64 = mlrand::InnovationSpec<f64>;
pub type RenewalPath64 = renewal::RenewalPath<f64>;
pub type CountPmf64 = renewal::CountPmf<f64>;
pub type ARConfig64 = artime::ARConfig<f64>;
pub type ARPath64 = artime::ARPath<f64>;
pub type QMLParams64 = qml::QMLParams<f64>;
pub type QmlArConfig64 = qml::QmlArConfig<f64>;
