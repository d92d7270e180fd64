//! Entanglement-witness construction from measured variances.
//!
//! Given records (P_j, m_j) of rank-one variance functionals and their
//! measured values on an unknown state, search the family Z = sum c_j P_j for
//! the witness minimizing the measurable combination c . m = Tr[Z gamma],
//! subject to the linear sufficient conditions that make Z a valid witness
//! for a chosen mode partition: Z >= 0 and, per subsystem block Z_g with
//! weight w_g, the complex constraint Z_g + i w_g Omega >= 0, where the
//! weights are x_g / N_g with a free scalar per group and the last weight
//! fixed so the x's sum to 1/2. A value below one certifies entanglement
//! across the partition and log2(1/value) lower-bounds the logarithmic
//! negativity.

use crate::error::{Error, Result};
use crate::homodyne::MeasurementRecord;
use crate::linalg::Mat;
use crate::scalar::{fl, Scalar};
use crate::sdp::{
    hermitian_embed, solve, LmiBlock, SdpOptions, SdpProblem, SdpStatus,
};
use crate::symplectic::{
    symplectic_eigenvalues, symplectic_form, symplectic_trace, Partition, CLAMP_TOL,
};
use serde::{Deserialize, Serialize};

/// A witness value below 1 - DETECT_TOL counts as detection; the margin
/// separates solver noise from genuine violation.
pub const DETECT_TOL: f64 = 1e-7;
/// Slack allowed in the a-posteriori witness validity checks.
pub const WITNESS_PSD_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessStatus {
    /// value < 1 - detect_tol: the state is certified entangled
    Detected,
    /// a valid witness exists but its value does not drop below one
    NotDetected,
    /// no witness in the measured family satisfies the constraints (expected
    /// with too few or degenerate settings)
    Infeasible,
    NumericalTrouble,
}

/// Outcome of the witness search.
#[derive(Clone, Debug)]
pub struct WitnessResult<T> {
    pub status: WitnessStatus,
    /// coefficients of Z = sum c_j P_j (empty unless the solve succeeded)
    pub c: Vec<T>,
    /// free block weights x_1 .. x_{k-1}
    pub x: Vec<T>,
    /// the witness matrix itself
    pub z: Mat<T>,
    /// Tr[Z gamma] = c . m
    pub value: Option<T>,
    /// lower bound on the logarithmic negativity, log2(1/value)
    pub e_lb: Option<T>,
}

impl<T: Scalar> WitnessResult<T> {
    pub fn detected(&self) -> bool {
        self.status == WitnessStatus::Detected
    }
}

/* Serialized form: {status, value, c, x, E_lb, Z}; Z uses the covariance
matrix layout {modes, ordering, rows} so external tools can reuse readers. */
#[derive(Serialize, Deserialize)]
struct ZJson<T> {
    modes: usize,
    ordering: String,
    rows: Vec<Vec<T>>,
}

#[derive(Serialize, Deserialize)]
struct ResultJson<T> {
    status: WitnessStatus,
    value: Option<T>,
    c: Vec<T>,
    x: Vec<T>,
    #[serde(rename = "E_lb")]
    e_lb: Option<T>,
    #[serde(rename = "Z")]
    z: ZJson<T>,
}

impl<T: Scalar + Serialize> Serialize for WitnessResult<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ResultJson {
            status: self.status,
            value: self.value,
            c: self.c.clone(),
            x: self.x.clone(),
            e_lb: self.e_lb,
            z: ZJson {
                modes: self.z.rows() / 2,
                ordering: "interleaved".into(),
                rows: self.z.to_rows(),
            },
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for WitnessResult<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = ResultJson::<T>::deserialize(d)?;
        Ok(WitnessResult {
            status: raw.status,
            c: raw.c,
            x: raw.x,
            z: Mat::from_rows(&raw.z.rows),
            value: raw.value,
            e_lb: raw.e_lb,
        })
    }
}

#[derive(Clone, Debug)]
pub struct WitnessOptions<T> {
    pub detect_tol: T,
    pub sdp: SdpOptions<T>,
}

impl<T: Scalar> Default for WitnessOptions<T> {
    fn default() -> Self {
        WitnessOptions { detect_tol: fl(DETECT_TOL), sdp: SdpOptions::default() }
    }
}

fn check_records<T: Scalar>(
    records: &[MeasurementRecord<T>],
    partition: &Partition,
) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Empty("need at least one measurement record".into()));
    }
    let modes = partition.modes();
    for r in records {
        if r.setting.modes() != modes {
            return Err(Error::BadDimension {
                expected: format!("{modes}-mode settings"),
                got: format!("{}-mode setting", r.setting.modes()),
            });
        }
    }
    Ok(())
}

/// Build the LMI program over (c_1..c_J, x_1..x_{k-1}): minimize c . m with
/// Z >= 0 and every embedded subsystem constraint PSD.
pub fn assemble<T: Scalar>(
    records: &[MeasurementRecord<T>],
    partition: &Partition,
) -> Result<SdpProblem<T>> {
    check_records(records, partition)?;
    let modes = partition.modes();
    let dim = 2 * modes;
    let nrec = records.len();
    let groups = partition.groups();
    let nvars = nrec + groups - 1;

    let projectors: Vec<Mat<T>> = records.iter().map(|r| r.setting.projector()).collect();

    let mut objective = vec![T::zero(); nvars];
    for (j, r) in records.iter().enumerate() {
        objective[j] = r.value;
    }

    // block 0: Z = sum c_j P_j >= 0
    let mut z_fs: Vec<Mat<T>> = projectors.clone();
    z_fs.extend((1..groups).map(|_| Mat::zeros(dim, dim)));
    let mut blocks = vec![LmiBlock::new(Mat::zeros(dim, dim), z_fs)?];

    // one embedded block per subsystem: Z_g + i w_g Omega_g >= 0, with
    // w_g = x_g / N_g and the last weight (1/2 - sum x) / N_last
    let offsets = partition.offsets();
    for g in 0..groups {
        let ng = partition.sizes()[g];
        let row0 = 2 * offsets[g];
        let sub = 2 * ng;
        let omega = symplectic_form::<T>(ng)?;
        let zero = Mat::zeros(sub, sub);

        let f0 = if g + 1 == groups {
            hermitian_embed(&zero, &omega.scale(fl::<T>(0.5) / fl(ng as f64)))?
        } else {
            Mat::zeros(2 * sub, 2 * sub)
        };
        let mut fs = Vec::with_capacity(nvars);
        for p in &projectors {
            fs.push(hermitian_embed(&p.sub_matrix(row0, row0, sub, sub), &zero)?);
        }
        for xi in 0..groups - 1 {
            let coeff = if g + 1 == groups {
                -T::one() / fl(ng as f64)
            } else if xi == g {
                T::one() / fl(ng as f64)
            } else {
                T::zero()
            };
            if coeff == T::zero() {
                fs.push(Mat::zeros(2 * sub, 2 * sub));
            } else {
                fs.push(hermitian_embed(&zero, &omega.scale(coeff))?);
            }
        }
        blocks.push(LmiBlock::new(f0, fs)?);
    }

    SdpProblem::new(objective, blocks)
}

/// Strictly feasible start when the settings span every subsystem: uniform
/// coefficients lambda with block weights at half the slack each block
/// allows. Returns None when some subsystem Gram block is too close to
/// singular for a safe interior start.
pub fn interior_start<T: Scalar>(
    records: &[MeasurementRecord<T>],
    partition: &Partition,
) -> Option<Vec<T>> {
    let groups = partition.groups();
    let offsets = partition.offsets();
    let dim = 2 * partition.modes();
    let mut gram = Mat::zeros(dim, dim);
    for r in records {
        let u = r.setting.u_vector();
        gram.axpy(T::one(), &Mat::outer(&u, &u));
    }
    let mut margins = Vec::with_capacity(groups);
    for g in 0..groups {
        let row0 = 2 * offsets[g];
        let sub = 2 * partition.sizes()[g];
        let block = gram.sub_matrix(row0, row0, sub, sub);
        let eigs = symplectic_eigenvalues(&block, fl(CLAMP_TOL)).ok()?;
        let min = *eigs.last()?;
        if min <= fl(1e-6) {
            return None;
        }
        margins.push(min);
    }
    let total: T = margins
        .iter()
        .zip(partition.sizes())
        .map(|(&s, &n)| s * fl(n as f64))
        .sum();
    let lambda = T::one() / total;
    let mut y = vec![lambda; records.len()];
    for g in 0..groups - 1 {
        y.push(lambda * fl(partition.sizes()[g] as f64) * margins[g] * fl(0.5));
    }
    Some(y)
}

/// Solve the witness program and interpret the outcome.
pub fn optimize<T: Scalar>(
    records: &[MeasurementRecord<T>],
    partition: &Partition,
    options: &WitnessOptions<T>,
) -> Result<WitnessResult<T>> {
    let problem = assemble(records, partition)?;
    let mut sdp_options = options.sdp.clone();
    if sdp_options.start.is_none() {
        sdp_options.start = interior_start(records, partition);
    }
    let sol = solve(&problem, &sdp_options);

    let nrec = records.len();
    let dim = 2 * partition.modes();
    let build_z = |c: &[T]| {
        let mut z = Mat::zeros(dim, dim);
        for (cj, r) in c.iter().zip(records) {
            z.axpy(*cj, &r.setting.projector());
        }
        z
    };

    match sol.status {
        SdpStatus::Optimal => {
            let c = sol.y[..nrec].to_vec();
            let x = sol.y[nrec..].to_vec();
            let z = build_z(&c);
            let value = sol.objective;
            let status = if value < T::one() - options.detect_tol {
                WitnessStatus::Detected
            } else {
                WitnessStatus::NotDetected
            };
            let e_lb = if value > T::zero() && value < T::one() {
                Some((T::one() / value).log2())
            } else {
                None
            };
            Ok(WitnessResult { status, c, x, z, value: Some(value), e_lb })
        }
        SdpStatus::Infeasible => Ok(WitnessResult {
            status: WitnessStatus::Infeasible,
            c: Vec::new(),
            x: Vec::new(),
            z: Mat::zeros(dim, dim),
            value: None,
            e_lb: None,
        }),
        // With exact variances the program is bounded below (the cost of any
        // positive projector combination is its overlap with a positive
        // definite state). Estimated variances break that: once the settings
        // approach tomographic completeness some positive combination picks
        // up a negative measured cost and the program is genuinely unbounded.
        // Either way no witness conclusion can be drawn from this fit.
        SdpStatus::Unbounded | SdpStatus::NumericalTrouble => Ok(WitnessResult {
            status: WitnessStatus::NumericalTrouble,
            c: sol.y[..nrec.min(sol.y.len())].to_vec(),
            x: sol.y[nrec.min(sol.y.len())..].to_vec(),
            z: build_z(&sol.y[..nrec.min(sol.y.len())]),
            value: None,
            e_lb: None,
        }),
    }
}

/// The nonlinear validity condition a witness must satisfy: Z PSD and the
/// symplectic traces of its subsystem blocks summing to at least one half.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TheoremCheck<T> {
    pub str_sum: T,
    pub psd_ok: bool,
}

impl<T: Scalar> TheoremCheck<T> {
    pub fn valid(&self) -> bool {
        self.psd_ok && self.str_sum >= fl::<T>(0.5) - fl(WITNESS_PSD_TOL)
    }
}

pub fn theorem_check<T: Scalar>(z: &Mat<T>, partition: &Partition) -> Result<TheoremCheck<T>> {
    if z.rows() != 2 * partition.modes() || !z.is_square() {
        return Err(Error::BadDimension {
            expected: format!("{0}x{0}", 2 * partition.modes()),
            got: format!("{}x{}", z.rows(), z.cols()),
        });
    }
    let psd_ok = z.min_eigval() >= -fl::<T>(WITNESS_PSD_TOL);
    let offsets = partition.offsets();
    let mut str_sum = T::zero();
    for g in 0..partition.groups() {
        let row0 = 2 * offsets[g];
        let sub = 2 * partition.sizes()[g];
        let block = z.sub_matrix(row0, row0, sub, sub);
        str_sum += symplectic_trace(&block, fl(WITNESS_PSD_TOL))?;
    }
    Ok(TheoremCheck { str_sum, psd_ok })
}

/// Minimum eigenvalue of each embedded subsystem constraint at the given
/// weights; nonnegative margins mean (Z, x) satisfies the linear conditions.
pub fn proposition_margin<T: Scalar>(
    z: &Mat<T>,
    x: &[T],
    partition: &Partition,
) -> Result<Vec<T>> {
    let groups = partition.groups();
    if x.len() != groups - 1 {
        return Err(Error::BadDimension {
            expected: format!("{} weights", groups - 1),
            got: format!("{}", x.len()),
        });
    }
    let offsets = partition.offsets();
    let mut margins = Vec::with_capacity(groups);
    let x_sum: T = x.iter().copied().sum();
    for g in 0..groups {
        let ng = partition.sizes()[g];
        let row0 = 2 * offsets[g];
        let sub = 2 * ng;
        let weight = if g + 1 == groups {
            (fl::<T>(0.5) - x_sum) / fl(ng as f64)
        } else {
            x[g] / fl(ng as f64)
        };
        let omega = symplectic_form::<T>(ng)?;
        let embedded =
            hermitian_embed(&z.sub_matrix(row0, row0, sub, sub), &omega.scale(weight))?;
        margins.push(embedded.min_eigval());
    }
    Ok(margins)
}
