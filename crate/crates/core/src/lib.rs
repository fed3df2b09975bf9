//! Random Fourier features for isotropic kernels that are scale mixtures of
//! symmetric stable laws.
//!
//! Every kernel here is `K(u) = E[cos(eta . u)]` with
//! `eta = (lambda R)^(1/alpha) S_alpha`, where `S_alpha` is a symmetric
//! alpha-stable vector and `R` a nonnegative mixing radius. The same
//! [`KernelSpec`](kernels::KernelSpec) drives both the closed-form evaluation
//! in [`kernels`] and the sampler in [`spectral`], and [`rff`] turns sampled
//! projections into estimators, feature maps and ridge regression.
//!
//! ```
//! use spectral_rff::{KernelSpecF64, rff, spectral};
//!
//! let kernel = KernelSpecF64::matern(1.5).validate().unwrap();
//! let projections = spectral::sample_projections(&kernel, 2, 4000, 7, 0).unwrap();
//! let exact = kernel.evaluate(&[0.3, -0.4]).unwrap();
//! let approx = rff::approx_kernel(&projections, &[0.3, -0.4]).unwrap();
//! assert!((exact - approx).abs() < 0.1);
//! ```
//!
//! All numeric types are generic over [`Scalar`] (`f32` or `f64`); the `*F64`
//! aliases below fix the double-precision instantiation.

pub mod cli;
pub mod dist;
pub mod error;
pub mod kernels;
mod linalg;
pub mod rff;
pub mod scalar;
pub mod specfun;
pub mod spectral;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type KernelSpecF64 = kernels::KernelSpec<f64>;
pub type KernelF64 = kernels::Kernel<f64>;
pub type SigmaMatrixF64 = kernels::SigmaMatrix<f64>;
pub type GramSummaryF64 = kernels::GramSummary<f64>;
pub type MixtureLawF64 = dist::MixtureLaw<f64>;
pub type ProjectionSetF64 = spectral::ProjectionSet<f64>;
pub type FeatureMapF64 = rff::FeatureMap<f64>;
pub type RidgeModelF64 = rff::RidgeModel<f64>;
pub type ErrorReportF64 = rff::ErrorReport<f64>;
