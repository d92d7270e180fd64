//! Detect entanglement of unknown continuous-variable states from random
//! homodyne measurements.
//!
//! The pipeline: draw random measurement directions ([`homodyne`]), record the
//! quadrature variances they produce on a state's covariance matrix
//! ([`symplectic`], [`states`]), and search for an entanglement witness that is
//! a linear combination of exactly those measured projectors by solving a small
//! semidefinite program ([`witness`], [`sdp`]). A sequential protocol adds one
//! random setting at a time until the witness value drops below one
//! ([`detector`]); [`stats`] quantifies the shot noise of finite measurement
//! repetitions.
//!
//! All numerics are generic over the scalar type; the aliases at the crate
//! root fix `f64`, which every CLI entry point and test uses.

pub mod detector;
pub mod error;
pub mod homodyne;
pub mod linalg;
pub mod scalar;
pub mod sdp;
pub mod states;
pub mod stats;
pub mod symplectic;
pub mod witness;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Default scalar used by the command-line tools and the acceptance suite.
pub type Real = f64;
pub type Matrix = linalg::Mat<Real>;
pub type Covariance = symplectic::CovarianceMatrix<Real>;
pub type Setting = homodyne::MeasurementSetting<Real>;
pub type Record = homodyne::MeasurementRecord<Real>;
pub type Witness = witness::WitnessResult<Real>;
