//! Dense semidefinite programming over block-diagonal linear matrix
//! inequalities:
//!
//! minimize c . y   subject to   F0_b + sum_i y_i F_ib >= 0   for every block b
//!
//! sized for witness problems (blocks up to ~16x16, tens of variables), solved
//! by a self-contained primal-dual interior-point method (see [`solver`]).
//! No external solver is involved; everything is deterministic.

mod solver;

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{fl, to_f64, Scalar};
use serde::{Deserialize, Serialize};

/// Symmetry tolerance for user-supplied constraint matrices.
pub const INPUT_SYMMETRY_TOL: f64 = 1e-10;
pub const DEFAULT_FEAS_TOL: f64 = 1e-8;
pub const DEFAULT_GAP_TOL: f64 = 1e-8;
pub const DEFAULT_RAY_TOL: f64 = 1e-7;
pub const DEFAULT_MAX_ITER: usize = 200;

/// One linear-matrix-inequality block: F0 + sum_i y_i F_i >= 0.
#[derive(Clone, Debug)]
pub struct LmiBlock<T> {
    pub(crate) f0: Mat<T>,
    pub(crate) fs: Vec<Mat<T>>,
}

impl<T: Scalar> LmiBlock<T> {
    pub fn new(f0: Mat<T>, fs: Vec<Mat<T>>) -> Result<Self> {
        let d = f0.rows();
        if !f0.is_square() || d == 0 {
            return Err(Error::BadDimension {
                expected: "square, nonempty".into(),
                got: format!("{}x{}", f0.rows(), f0.cols()),
            });
        }
        for f in std::iter::once(&f0).chain(fs.iter()) {
            if f.rows() != d || f.cols() != d {
                return Err(Error::BadDimension {
                    expected: format!("{d}x{d}"),
                    got: format!("{}x{}", f.rows(), f.cols()),
                });
            }
            let defect = f.symmetry_defect();
            if defect > fl(INPUT_SYMMETRY_TOL) {
                return Err(Error::NotSymmetric {
                    defect: to_f64(defect),
                    tol: INPUT_SYMMETRY_TOL,
                });
            }
        }
        Ok(LmiBlock { f0, fs })
    }

    pub fn dim(&self) -> usize {
        self.f0.rows()
    }

    pub fn f0(&self) -> &Mat<T> {
        &self.f0
    }

    pub fn fs(&self) -> &[Mat<T>] {
        &self.fs
    }

    /// F0 + sum_i y_i F_i
    pub fn eval(&self, y: &[T]) -> Mat<T> {
        let mut s = self.f0.clone();
        for (yi, fi) in y.iter().zip(&self.fs) {
            s.axpy(*yi, fi);
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct SdpProblem<T> {
    pub(crate) objective: Vec<T>,
    pub(crate) blocks: Vec<LmiBlock<T>>,
}

impl<T: Scalar> SdpProblem<T> {
    pub fn new(objective: Vec<T>, blocks: Vec<LmiBlock<T>>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty("SDP with no constraint blocks".into()));
        }
        for b in &blocks {
            if b.fs.len() != objective.len() {
                return Err(Error::BadDimension {
                    expected: format!("{} constraint matrices per block", objective.len()),
                    got: format!("{}", b.fs.len()),
                });
            }
        }
        Ok(SdpProblem { objective, blocks })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[T] {
        &self.objective
    }

    pub fn blocks(&self) -> &[LmiBlock<T>] {
        &self.blocks
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SdpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    NumericalTrouble,
}

#[derive(Clone, Debug)]
pub struct SdpSolution<T> {
    pub status: SdpStatus,
    pub y: Vec<T>,
    /// c . y at the returned point; NaN when Infeasible.
    pub objective: T,
    pub duality_gap: T,
    pub max_violation: T,
    pub iterations: usize,
    /// For Infeasible: whether a dual improving ray passed the certificate
    /// check. False marks the weakly-infeasible boundary cases.
    pub certified: bool,
}

#[derive(Clone, Debug)]
pub struct SdpOptions<T> {
    pub max_iter: usize,
    pub feas_tol: T,
    pub gap_tol: T,
    /// Tolerance of the dual improving-ray (infeasibility) certificate check.
    pub ray_tol: T,
    /// Optional strictly feasible start; verified per block, silently ignored
    /// if the margin does not hold.
    pub start: Option<Vec<T>>,
}

impl<T: Scalar> Default for SdpOptions<T> {
    fn default() -> Self {
        SdpOptions {
            max_iter: DEFAULT_MAX_ITER,
            feas_tol: fl(DEFAULT_FEAS_TOL),
            gap_tol: fl(DEFAULT_GAP_TOL),
            ray_tol: fl(DEFAULT_RAY_TOL),
            start: None,
        }
    }
}

pub fn solve<T: Scalar>(problem: &SdpProblem<T>, options: &SdpOptions<T>) -> SdpSolution<T> {
    solver::solve(problem, options)
}

/// Real embedding of the Hermitian matrix A + iB (A symmetric, B antisymmetric):
/// [[A, -B], [B, A]]. Its spectrum is that of A + iB, each eigenvalue doubled.
pub fn hermitian_embed<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Result<Mat<T>> {
    let d = a.rows();
    if !a.is_square() || b.rows() != d || b.cols() != d {
        return Err(Error::BadDimension {
            expected: "square matrices of equal size".into(),
            got: format!("{}x{} and {}x{}", a.rows(), a.cols(), b.rows(), b.cols()),
        });
    }
    let sym_defect = a.symmetry_defect();
    if sym_defect > fl(INPUT_SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { defect: to_f64(sym_defect), tol: INPUT_SYMMETRY_TOL });
    }
    let anti_defect = b.add(&b.transpose()).max_abs();
    if anti_defect > fl(INPUT_SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { defect: to_f64(anti_defect), tol: INPUT_SYMMETRY_TOL });
    }
    let mut e = Mat::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            e[(i, j)] = a[(i, j)];
            e[(d + i, d + j)] = a[(i, j)];
            e[(i, d + j)] = -b[(i, j)];
            e[(d + i, j)] = b[(i, j)];
        }
    }
    Ok(e)
}

#[derive(Clone, Debug)]
pub struct FeasibilityReport<T> {
    /// Minimum eigenvalue of each block at the given point.
    pub block_margins: Vec<T>,
    /// max(0, -min margin): how far the point is from satisfying all LMIs.
    pub max_violation: T,
}

/// A-posteriori feasibility of a candidate y, independent of solver internals.
pub fn feasibility_check<T: Scalar>(problem: &SdpProblem<T>, y: &[T]) -> FeasibilityReport<T> {
    let block_margins: Vec<T> =
        problem.blocks.iter().map(|b| b.eval(y).min_eigval()).collect();
    let worst = block_margins.iter().fold(T::infinity(), |m, &x| m.min(x));
    FeasibilityReport { block_margins, max_violation: (-worst).max(T::zero()) }
}

/* Debug dump of a problem, mainly for cross-checking against other solvers. */
#[derive(Serialize, Deserialize)]
struct BlockJson<T> {
    #[serde(rename = "F0")]
    f0: Vec<Vec<T>>,
    #[serde(rename = "Fs")]
    fs: Vec<Vec<Vec<T>>>,
}

#[derive(Serialize, Deserialize)]
struct ProblemJson<T> {
    objective: Vec<T>,
    blocks: Vec<BlockJson<T>>,
}

impl<T: Scalar + Serialize + for<'de> Deserialize<'de>> SdpProblem<T> {
    pub fn to_debug_json(&self) -> String {
        let doc = ProblemJson {
            objective: self.objective.clone(),
            blocks: self
                .blocks
                .iter()
                .map(|b| BlockJson {
                    f0: b.f0.to_rows(),
                    fs: b.fs.iter().map(|f| f.to_rows()).collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    pub fn from_debug_json(json: &str) -> Result<Self> {
        let doc: ProblemJson<T> = serde_json::from_str(json)?;
        let blocks = doc
            .blocks
            .into_iter()
            .map(|b| {
                LmiBlock::new(
                    Mat::from_rows(&b.f0),
                    b.fs.iter().map(|f| Mat::from_rows(f)).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        SdpProblem::new(doc.objective, blocks)
    }
}
