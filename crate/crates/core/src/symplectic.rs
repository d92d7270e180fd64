//! Symplectic phase-space backbone: covariance matrices in the interleaved
//! quadrature ordering (x1, p1, ..., xN, pN), the symplectic form, physicality
//! (uncertainty-relation) checks, and symplectic spectra.
//!
//! Conventions: hbar = 1 and the vacuum covariance matrix is the identity, so
//! a matrix gamma is a physical state iff gamma + i*Omega >= 0, equivalently
//! iff all its symplectic eigenvalues are >= 1.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{fl, to_f64, Scalar};
use serde::{Deserialize, Serialize};

/// Default tolerance for symmetry checks on constructed matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Default tolerance on the minimum eigenvalue of gamma + i*Omega.
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Default tolerance for ||S Omega S^T - Omega||_F.
pub const SYMPLECTIC_TOL: f64 = 1e-9;
/// Eigenvalues of a nominally PSD matrix above -CLAMP_TOL are clamped to 0.
pub const CLAMP_TOL: f64 = 1e-9;
/// Symplectic eigenvalues come in duplicated pairs; pairs must agree this well.
pub const PAIR_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ordering {
    /// x1, p1, x2, p2, ...  (canonical; all writers emit this)
    Interleaved,
    /// x1, ..., xN, p1, ..., pN
    Grouped,
}

/// Symplectic form in the interleaved ordering: a direct sum of [[0,1],[-1,0]].
pub fn symplectic_form<T: Scalar>(modes: usize) -> Result<Mat<T>> {
    if modes == 0 {
        return Err(Error::NoModes);
    }
    let mut o = Mat::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        o[(2 * k, 2 * k + 1)] = T::one();
        o[(2 * k + 1, 2 * k)] = -T::one();
    }
    Ok(o)
}

/// Re-index a 2N x 2N matrix between quadrature orderings. Involutive.
pub fn reorder_quadratures<T: Scalar>(m: &Mat<T>, from: Ordering, to: Ordering) -> Result<Mat<T>> {
    let d = m.rows();
    if !m.is_square() || d % 2 != 0 || d == 0 {
        return Err(Error::BadDimension {
            expected: "square with even dimension".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    if from == to {
        return Ok(m.clone());
    }
    let n = d / 2;
    // source index of target row/column a
    let src: Vec<usize> = (0..d)
        .map(|a| match to {
            // building interleaved from grouped: x_k at 2k came from k, p_k from N+k
            Ordering::Interleaved => {
                let k = a / 2;
                if a % 2 == 0 {
                    k
                } else {
                    n + k
                }
            }
            // building grouped from interleaved: x_k at k came from 2k, p_k at N+k from 2k+1
            Ordering::Grouped => {
                if a < n {
                    2 * a
                } else {
                    2 * (a - n) + 1
                }
            }
        })
        .collect();
    Ok(Mat::from_fn(d, d, |i, j| m[(src[i], src[j])]))
}

/// ||S Omega S^T - Omega||_F <= tol
pub fn is_symplectic<T: Scalar>(s: &Mat<T>, tol: T) -> Result<bool> {
    let d = s.rows();
    if !s.is_square() || d % 2 != 0 || d == 0 {
        return Err(Error::BadDimension {
            expected: "square with even dimension".into(),
            got: format!("{}x{}", s.rows(), s.cols()),
        });
    }
    let omega = symplectic_form::<T>(d / 2)?;
    let defect = s.matmul(&omega).matmul(&s.transpose()).sub(&omega).frob_norm();
    Ok(defect <= tol)
}

fn check_symmetric<T: Scalar>(m: &Mat<T>) -> Result<()> {
    let defect = m.symmetry_defect();
    if defect > fl(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric { defect: to_f64(defect), tol: SYMMETRY_TOL });
    }
    Ok(())
}

fn check_even_square<T: Scalar>(m: &Mat<T>) -> Result<usize> {
    let d = m.rows();
    if !m.is_square() || d % 2 != 0 || d == 0 {
        return Err(Error::BadDimension {
            expected: "square with even dimension".into(),
            got: format!("{}x{}", m.rows(), m.cols()),
        });
    }
    Ok(d / 2)
}

/// Symplectic eigenvalues of a symmetric PSD matrix: the moduli of the
/// eigenvalues of i*Omega*M, deduplicated (each appears twice), descending.
///
/// Route: A = M^(1/2) via eigendecomposition (eigenvalues in [-clamp_tol, 0)
/// clamped to zero), B = A*Omega*A antisymmetric, then the real symmetric
/// embedding [[0, -B], [B, 0]] has eigenvalues {+-s_j}, each twice.
pub fn symplectic_eigenvalues<T: Scalar>(m: &Mat<T>, clamp_tol: T) -> Result<Vec<T>> {
    let n = check_even_square(m)?;
    check_symmetric(m)?;
    let a = m.sqrt_psd(clamp_tol).map_err(|min_eig| Error::NotPsd {
        min_eig: to_f64(min_eig),
        tol: to_f64(clamp_tol),
    })?;
    let omega = symplectic_form::<T>(n)?;
    let b = a.matmul(&omega).matmul(&a);
    let b = b.sub(&b.transpose()).scale(fl(0.5)); // enforce antisymmetry exactly
    let d = 2 * n;
    let mut emb = Mat::zeros(2 * d, 2 * d);
    for i in 0..d {
        for j in 0..d {
            emb[(i, d + j)] = -b[(i, j)];
            emb[(d + i, j)] = b[(i, j)];
        }
    }
    let vals = emb.sym_eigvals(); // ascending, {+-s_j} each twice
    let scale = m.frob_norm().max(T::one());
    let mut top: Vec<T> = vals[d..].to_vec(); // the 2n nonnegative ones
    top.reverse(); // descending
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let (hi, lo) = (top[2 * k], top[2 * k + 1]);
        if (hi - lo).abs() > fl::<T>(PAIR_TOL) * scale {
            return Err(Error::Numerical(format!(
                "symplectic eigenvalue pair mismatch: {} vs {}",
                to_f64(hi),
                to_f64(lo)
            )));
        }
        out.push((hi + lo) * fl(0.5));
    }
    Ok(out)
}

/// Sum of the symplectic eigenvalues.
pub fn symplectic_trace<T: Scalar>(m: &Mat<T>, clamp_tol: T) -> Result<T> {
    Ok(symplectic_eigenvalues(m, clamp_tol)?.into_iter().sum())
}

/// Minimum eigenvalue of gamma + i*Omega, via the real embedding
/// [[gamma, -Omega], [Omega, gamma]].
pub fn physicality_margin<T: Scalar>(gamma: &Mat<T>) -> Result<T> {
    let n = check_even_square(gamma)?;
    let omega = symplectic_form::<T>(n)?;
    let emb = crate::sdp::hermitian_embed(gamma, &omega)?;
    Ok(emb.min_eigval())
}

/// Splitting of N contiguous modes into consecutive groups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    sizes: Vec<usize>,
}

impl Partition {
    pub fn new(sizes: Vec<usize>, modes: usize) -> Result<Self> {
        if sizes.is_empty() || sizes.iter().any(|&s| s == 0) || sizes.iter().sum::<usize>() != modes
        {
            return Err(Error::BadPartition { sizes, modes });
        }
        Ok(Partition { sizes })
    }

    pub fn bipartite_split(first: usize, modes: usize) -> Result<Self> {
        if first == 0 || first >= modes {
            return Err(Error::BadPartition { sizes: vec![first], modes });
        }
        Self::new(vec![first, modes - first], modes)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn groups(&self) -> usize {
        self.sizes.len()
    }

    pub fn modes(&self) -> usize {
        self.sizes.iter().sum()
    }

    /// Mode offset of each group.
    pub fn offsets(&self) -> Vec<usize> {
        let mut off = 0;
        self.sizes
            .iter()
            .map(|&s| {
                let o = off;
                off += s;
                o
            })
            .collect()
    }
}

/// Covariance matrix of an N-mode state, stored interleaved and symmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix<T> {
    modes: usize,
    mat: Mat<T>,
    physical: bool,
}

impl<T: Scalar> CovarianceMatrix<T> {
    /// Accepts a symmetric (within 1e-12) 2N x 2N matrix in the given ordering;
    /// stores it interleaved and exactly symmetrized.
    pub fn new(mat: Mat<T>, ordering: Ordering) -> Result<Self> {
        let modes = check_even_square(&mat)?;
        check_symmetric(&mat)?;
        let mat = reorder_quadratures(&mat, ordering, Ordering::Interleaved)?.symmetrize();
        let physical = physicality_margin(&mat)? >= -fl::<T>(PHYSICAL_TOL);
        Ok(CovarianceMatrix { modes, mat, physical })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    /// Cached result of the default-tolerance physicality check.
    pub fn physical(&self) -> bool {
        self.physical
    }

    /// min eig(gamma + i*Omega) >= -tol
    pub fn is_physical(&self, tol: T) -> Result<bool> {
        Ok(physicality_margin(&self.mat)? >= -tol)
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<T>> {
        symplectic_eigenvalues(&self.mat, fl(CLAMP_TOL))
    }

    /// The 2Nj x 2Nj diagonal block of the given group of a partition.
    pub fn group_block(&self, partition: &Partition, group: usize) -> Result<Mat<T>> {
        if partition.modes() != self.modes {
            return Err(Error::BadPartition {
                sizes: partition.sizes().to_vec(),
                modes: self.modes,
            });
        }
        let off = partition.offsets()[group];
        let nj = partition.sizes()[group];
        Ok(self.mat.sub_matrix(2 * off, 2 * off, 2 * nj, 2 * nj))
    }

    /// Partial transpose: sign flip of the listed modes' momenta.
    pub fn partial_transpose(&self, flipped_modes: &[usize]) -> Result<Self> {
        if flipped_modes.iter().any(|&k| k >= self.modes) {
            return Err(Error::BadConfig("mode index out of range".into()));
        }
        let mut sign = vec![T::one(); 2 * self.modes];
        for &k in flipped_modes {
            sign[2 * k + 1] = -T::one();
        }
        let mat = Mat::from_fn(2 * self.modes, 2 * self.modes, |i, j| {
            sign[i] * self.mat[(i, j)] * sign[j]
        });
        CovarianceMatrix::new(mat, Ordering::Interleaved)
    }
}

/* JSON shape: {"modes": N, "ordering": "interleaved"|"grouped", "rows": [[...]]} */
#[derive(Serialize, Deserialize)]
struct CovarianceJson<T> {
    modes: usize,
    ordering: Ordering,
    rows: Vec<Vec<T>>,
}

impl<T: Scalar + Serialize> Serialize for CovarianceMatrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CovarianceJson {
            modes: self.modes,
            ordering: Ordering::Interleaved,
            rows: self.mat.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de, T: Scalar + Deserialize<'de>> Deserialize<'de> for CovarianceMatrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CovarianceJson::<T>::deserialize(d)?;
        let mat = Mat::from_rows(&raw.rows);
        if mat.rows() != 2 * raw.modes {
            return Err(serde::de::Error::custom(format!(
                "rows are {}x{} but modes = {}",
                mat.rows(),
                mat.cols(),
                raw.modes
            )));
        }
        CovarianceMatrix::new(mat, raw.ordering).map_err(serde::de::Error::custom)
    }
}

/// Symplectic transformation with its defect checked on construction.
#[derive(Clone, Debug)]
pub struct SymplecticMatrix<T> {
    mat: Mat<T>,
}

impl<T: Scalar> SymplecticMatrix<T> {
    pub fn new(mat: Mat<T>) -> Result<Self> {
        let n = check_even_square(&mat)?;
        let omega = symplectic_form::<T>(n)?;
        let defect = mat.matmul(&omega).matmul(&mat.transpose()).sub(&omega).frob_norm();
        if defect > fl(SYMPLECTIC_TOL) {
            return Err(Error::NotSymplectic { defect: to_f64(defect), tol: SYMPLECTIC_TOL });
        }
        Ok(SymplecticMatrix { mat })
    }

    pub fn modes(&self) -> usize {
        self.mat.rows() / 2
    }

    pub fn mat(&self) -> &Mat<T> {
        &self.mat
    }

    /// gamma -> S gamma S^T
    pub fn congruence(&self, gamma: &Mat<T>) -> Mat<T> {
        self.mat.matmul(gamma).matmul(&self.mat.transpose()).symmetrize()
    }
}
