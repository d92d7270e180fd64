//! Generalized-quadrature measurement directions for a single homodyne
//! detector, their rank-one variance functionals P = u u^T, and uniform
//! random-angle sampling.
//!
//! An N-mode direction is parametrized by the local-oscillator phase theta,
//! N-1 mixing rotations and N-1 relative phases (the last mode's phase is
//! fixed to zero). The mode amplitudes follow the nested beam-splitter
//! scheme: A_1 = cos(rot_1), A_l = sin(rot_1)...sin(rot_{l-1}) cos(rot_l),
//! A_N = sin(rot_1)...sin(rot_{N-1}), so sum A_l^2 = 1 and u is a unit
//! vector. The variance of the generalized quadrature on a state with
//! covariance matrix gamma is Tr[P gamma] = u^T gamma u.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{fl, to_f64, Scalar};
use crate::symplectic::CovarianceMatrix;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// One homodyne direction: LO phase plus the mode-mixing angle tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementSetting<T> {
    pub theta: T,
    pub rotations: Vec<T>,
    pub phases: Vec<T>,
}

impl<T: Scalar> MeasurementSetting<T> {
    pub fn new(theta: T, rotations: Vec<T>, phases: Vec<T>) -> Result<Self> {
        if rotations.len() != phases.len() {
            return Err(Error::BadAngleCount(format!(
                "{} rotations vs {} phases",
                rotations.len(),
                phases.len()
            )));
        }
        Ok(MeasurementSetting { theta, rotations, phases })
    }

    pub fn modes(&self) -> usize {
        self.rotations.len() + 1
    }

    /// The unit vector u defining the measured quadrature.
    pub fn u_vector(&self) -> Vec<T> {
        build_measurement_vector(self.theta, &self.rotations, &self.phases)
            .expect("angle counts fixed at construction")
    }

    /// P = u u^T, the rank-one functional with variance Tr[P gamma].
    pub fn projector(&self) -> Mat<T> {
        let u = self.u_vector();
        Mat::outer(&u, &u)
    }
}

/// Variance measurement: a setting together with its (exact or estimated)
/// quadrature variance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MeasurementRecord<T> {
    pub setting: MeasurementSetting<T>,
    pub value: T,
}

impl<T: Scalar> MeasurementRecord<T> {
    /// Record the exact variance u^T gamma u of the state.
    pub fn exact(gamma: &CovarianceMatrix<T>, setting: MeasurementSetting<T>) -> Result<Self> {
        let value = variance(gamma, &setting)?;
        Ok(MeasurementRecord { setting, value })
    }

    /// Record an externally estimated variance (noisy data path).
    pub fn observed(setting: MeasurementSetting<T>, value: T) -> Self {
        MeasurementRecord { setting, value }
    }
}

/// Build u for the given angles; component pair of mode l is
/// (A_l cos(theta - phase_l), A_l sin(theta - phase_l)), with the last
/// phase identically zero.
pub fn build_measurement_vector<T: Scalar>(
    theta: T,
    rotations: &[T],
    phases: &[T],
) -> Result<Vec<T>> {
    if rotations.len() != phases.len() {
        return Err(Error::BadAngleCount(format!(
            "{} rotations vs {} phases",
            rotations.len(),
            phases.len()
        )));
    }
    let n = rotations.len() + 1;
    let mut u = Vec::with_capacity(2 * n);
    let mut sin_prod = T::one();
    for l in 0..n {
        let amp = if l + 1 < n { sin_prod * rotations[l].cos() } else { sin_prod };
        let phase = if l + 1 < n { phases[l] } else { T::zero() };
        u.push(amp * (theta - phase).cos());
        u.push(amp * (theta - phase).sin());
        if l + 1 < n {
            sin_prod = sin_prod * rotations[l].sin();
        }
    }
    Ok(u)
}

/// Exact variance Tr[P gamma] = u^T gamma u of the setting on the state.
pub fn variance<T: Scalar>(
    gamma: &CovarianceMatrix<T>,
    setting: &MeasurementSetting<T>,
) -> Result<T> {
    if setting.modes() != gamma.modes() {
        return Err(Error::BadDimension {
            expected: format!("{}-mode setting", gamma.modes()),
            got: format!("{}-mode setting", setting.modes()),
        });
    }
    let u = setting.u_vector();
    Ok(gamma.mat().quad_form(&u, &u))
}

/// Draw a uniform random direction: theta and rotations in [0, pi], phases
/// in [0, 2 pi).
pub fn sample_setting<T: Scalar>(modes: usize, rng: &mut impl Rng) -> Result<MeasurementSetting<T>> {
    if modes < 2 {
        return Err(Error::BadConfig("sampling needs at least 2 modes".into()));
    }
    // All draws happen in f64 so that the stream is identical for every
    // scalar instantiation.
    let pi = std::f64::consts::PI;
    let theta = fl(rng.gen_range(0.0..=pi));
    let rotations = (1..modes).map(|_| fl(rng.gen_range(0.0..=pi))).collect();
    let phases = (1..modes).map(|_| fl(rng.gen_range(0.0..2.0 * pi))).collect();
    Ok(MeasurementSetting { theta, rotations, phases })
}

/// Number of independent second moments of an N-mode state: N(2N+1). A set
/// of this many (generic) settings is tomographically complete.
pub fn tomographic_count(modes: usize) -> usize {
    modes * (2 * modes + 1)
}

/// Variance of the generalized quadrature tabulated over a (rotation, phase)
/// grid at fixed theta, for a two-mode state.
#[derive(Clone, Debug)]
pub struct VarianceSurface<T> {
    pub theta: T,
    /// rotation grid (row index)
    pub phi: Vec<T>,
    /// phase grid (column index)
    pub varphi: Vec<T>,
    /// row-major: values[i * varphi.len() + j] at (phi[i], varphi[j])
    pub values: Vec<T>,
}

impl<T: Scalar> VarianceSurface<T> {
    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    /// Number of grid points strictly below 1 (the separable-state level),
    /// with a small guard so roundoff at exactly 1 does not count.
    pub fn sub_unity_count(&self) -> usize {
        let level = T::one() - fl::<T>(1e-12);
        self.values.iter().filter(|&&v| v < level).count()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,varphi,variance\n");
        for (i, &p) in self.phi.iter().enumerate() {
            for (j, &q) in self.varphi.iter().enumerate() {
                let v = self.values[i * self.varphi.len() + j];
                out.push_str(&format!("{},{},{}\n", to_f64(p), to_f64(q), to_f64(v)));
            }
        }
        out
    }
}

/// Scan the (rotation, phase) square [-pi, pi]^2 on an n x n grid.
pub fn scan_surface<T: Scalar>(
    gamma: &CovarianceMatrix<T>,
    theta: T,
    grid: usize,
) -> Result<VarianceSurface<T>> {
    if gamma.modes() != 2 {
        return Err(Error::BadDimension {
            expected: "2-mode state".into(),
            got: format!("{}-mode state", gamma.modes()),
        });
    }
    if grid < 2 {
        return Err(Error::BadConfig("grid needs at least 2 points per axis".into()));
    }
    let pi = fl::<T>(std::f64::consts::PI);
    let step = fl::<T>(2.0) * pi / fl((grid - 1) as f64);
    let axis: Vec<T> = (0..grid).map(|k| -pi + step * fl(k as f64)).collect();
    let mut values = Vec::with_capacity(grid * grid);
    for &phi in &axis {
        for &varphi in &axis {
            let u = build_measurement_vector(theta, &[phi], &[varphi])?;
            values.push(gamma.mat().quad_form(&u, &u));
        }
    }
    Ok(VarianceSurface { theta, phi: axis.clone(), varphi: axis, values })
}

/// Default scan resolution per axis.
pub const DEFAULT_SCAN_GRID: usize = 201;
