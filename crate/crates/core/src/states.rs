//! Benchmark covariance matrices: two-mode squeezed vacuum, random states
//! from Haar-random symplectic conjugations of thermal seeds, a fixed
//! four-mode bound-entangled state, and the logarithmic-negativity / PPT
//! diagnostics used to grade detection results.

use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::scalar::{fl, Scalar};
use crate::symplectic::{reorder_quadratures, CovarianceMatrix, Ordering, SymplecticMatrix};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Two-mode squeezed vacuum: cosh(2r) on the diagonal, +/- sinh(2r)
/// cross-mode couplings (x-x correlated, p-p anticorrelated).
pub fn squeezed_vacuum<T: Scalar>(r: T) -> CovarianceMatrix<T> {
    let c = (r + r).cosh();
    let s = (r + r).sinh();
    let z = T::zero();
    let m = Mat::from_rows(&[
        vec![c, z, s, z],
        vec![z, c, z, -s],
        vec![s, z, c, z],
        vec![z, -s, z, c],
    ]);
    CovarianceMatrix::new(m, Ordering::Interleaved).expect("closed form is symmetric")
}

/// Parameters of the random-state generator: thermal symplectic eigenvalues
/// nu_i uniform in [nu_lo, nu_hi] (nu_lo >= 1 keeps the seed physical) and
/// per-mode squeezing r_i uniform in [0, r_max].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RandomStateConfig<T> {
    pub modes: usize,
    pub nu_lo: T,
    pub nu_hi: T,
    pub r_max: T,
    pub seed: u64,
}

impl<T: Scalar> RandomStateConfig<T> {
    pub fn new(modes: usize, nu_lo: T, nu_hi: T, r_max: T, seed: u64) -> Result<Self> {
        let cfg = RandomStateConfig { modes, nu_lo, nu_hi, r_max, seed };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.modes == 0 {
            return Err(Error::NoModes);
        }
        if self.nu_lo < T::one() || self.nu_hi < self.nu_lo {
            return Err(Error::BadConfig(
                "thermal eigenvalue interval must satisfy 1 <= nu_lo <= nu_hi".into(),
            ));
        }
        if self.r_max < T::zero() {
            return Err(Error::BadConfig("squeezing interval must be [0, r_max]".into()));
        }
        Ok(())
    }
}

/// A random draw together with the parameters that produced it; the
/// symplectic spectrum of `cm` equals `nu` by congruence invariance.
#[derive(Clone, Debug)]
pub struct RandomState<T> {
    pub cm: CovarianceMatrix<T>,
    pub nu: Vec<T>,
    pub squeezing: Vec<T>,
}

/// gamma = S (direct sum nu_i I_2) S^T with S = K [direct sum of one-mode
/// squeezers] L and K, L Haar-random orthogonal symplectics.
pub fn random_covariance_from<T: Scalar>(
    config: &RandomStateConfig<T>,
    rng: &mut impl Rng,
) -> Result<RandomState<T>> {
    config.validate()?;
    let n = config.modes;
    let nu: Vec<T> = (0..n)
        .map(|_| fl(rng.gen_range(crate::scalar::to_f64(config.nu_lo)..=crate::scalar::to_f64(config.nu_hi))))
        .collect();
    let squeezing: Vec<T> = (0..n)
        .map(|_| {
            if config.r_max == T::zero() {
                T::zero()
            } else {
                fl(rng.gen_range(0.0..=crate::scalar::to_f64(config.r_max)))
            }
        })
        .collect();
    let k = haar_orthosymplectic(n, rng);
    let l = haar_orthosymplectic(n, rng);

    let mut d = Mat::zeros(2 * n, 2 * n);
    let mut th = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        d[(2 * i, 2 * i)] = (-squeezing[i]).exp();
        d[(2 * i + 1, 2 * i + 1)] = squeezing[i].exp();
        th[(2 * i, 2 * i)] = nu[i];
        th[(2 * i + 1, 2 * i + 1)] = nu[i];
    }
    let s = k.mat().matmul(&d).matmul(l.mat());
    let gamma = s.matmul(&th).matmul(&s.transpose()).symmetrize();
    Ok(RandomState {
        cm: CovarianceMatrix::new(gamma, Ordering::Interleaved)?,
        nu,
        squeezing,
    })
}

/// Seeded convenience wrapper around [`random_covariance_from`].
pub fn random_covariance<T: Scalar>(config: &RandomStateConfig<T>) -> Result<CovarianceMatrix<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    Ok(random_covariance_from(config, &mut rng)?.cm)
}

/// Haar-random element of the orthogonal-symplectic group: draw a Haar
/// unitary U = X - iY (complex Ginibre then Gram-Schmidt, whose R-diagonal
/// is positive by construction), place [[X, Y], [-Y, X]] in grouped
/// quadrature ordering and convert to interleaved.
pub fn haar_orthosymplectic<T: Scalar>(modes: usize, rng: &mut impl Rng) -> SymplecticMatrix<T> {
    let n = modes;
    let u = haar_unitary(n, rng);
    let mut grouped = Mat::zeros(2 * n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            let x: T = u[(r, c)].re;
            let y: T = -u[(r, c)].im;
            grouped[(r, c)] = x;
            grouped[(r, c + n)] = y;
            grouped[(r + n, c)] = -y;
            grouped[(r + n, c + n)] = x;
        }
    }
    let interleaved = reorder_quadratures(&grouped, Ordering::Grouped, Ordering::Interleaved)
        .expect("even dimension by construction");
    SymplecticMatrix::new(interleaved).expect("orthosymplectic by construction")
}

struct ComplexMat<T> {
    n: usize,
    a: Vec<Complex<T>>,
}

impl<T: Scalar> std::ops::Index<(usize, usize)> for ComplexMat<T> {
    type Output = Complex<T>;
    fn index(&self, (r, c): (usize, usize)) -> &Complex<T> {
        &self.a[r * self.n + c]
    }
}

/// Ginibre + modified Gram-Schmidt. All randomness drawn as f64 pairs in
/// column-major order so the stream is scalar-type independent.
fn haar_unitary<T: Scalar>(n: usize, rng: &mut impl Rng) -> ComplexMat<T> {
    let mut cols: Vec<Vec<Complex<T>>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(fl(re), fl(im))
                })
                .collect()
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            let proj: Complex<T> = (0..n).map(|r| cols[i][r].conj() * cols[j][r]).sum();
            for r in 0..n {
                let v = cols[i][r];
                cols[j][r] = cols[j][r] - proj * v;
            }
        }
        let norm = (0..n).map(|r| cols[j][r].norm_sqr()).fold(T::zero(), |s, x| s + x).sqrt();
        for r in 0..n {
            cols[j][r] = cols[j][r] / norm;
        }
    }
    let mut a = vec![Complex::new(T::zero(), T::zero()); n * n];
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            a[r * n + c] = z;
        }
    }
    ComplexMat { n, a }
}

/// The fixed four-mode state whose entanglement survives partial
/// transposition across the [2, 2] cut (bound entanglement).
pub fn bound_entangled_4mode<T: Scalar>() -> CovarianceMatrix<T> {
    const ROWS: [[i32; 8]; 8] = [
        [2, 0, 0, 0, 1, 0, 0, 0],
        [0, 1, 0, 0, 0, 0, 0, -1],
        [0, 0, 2, 0, 0, 0, -1, 0],
        [0, 0, 0, 1, 0, -1, 0, 0],
        [1, 0, 0, 0, 2, 0, 0, 0],
        [0, 0, 0, -1, 0, 4, 0, 0],
        [0, 0, -1, 0, 0, 0, 2, 0],
        [0, -1, 0, 0, 0, 0, 0, 4],
    ];
    let m = Mat::from_fn(8, 8, |r, c| fl(ROWS[r][c] as f64));
    CovarianceMatrix::new(m, Ordering::Interleaved).expect("fixed symmetric matrix")
}

/// Logarithmic negativity of a two-mode state.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct NegativityReport<T> {
    /// smallest-squared-symplectic-eigenvalue proxy of the partial transpose
    pub f: T,
    /// E = max(0, -log2(f)/2), in bits
    #[serde(rename = "E")]
    pub e: T,
}

/// E from the determinants of the 2x2 blocks of gamma = [[g1, eps],
/// [eps^T, g2]]; zero for separable states, 2r log2(e) for squeezed vacuum.
pub fn log_negativity<T: Scalar>(gamma: &CovarianceMatrix<T>) -> Result<NegativityReport<T>> {
    if gamma.modes() != 2 {
        return Err(Error::BadDimension {
            expected: "2-mode state".into(),
            got: format!("{}-mode state", gamma.modes()),
        });
    }
    let m = gamma.mat();
    let g1 = m.sub_matrix(0, 0, 2, 2);
    let g2 = m.sub_matrix(2, 2, 2, 2);
    let eps = m.sub_matrix(0, 2, 2, 2);
    let half = fl::<T>(0.5);
    let a = half * (g1.det() + g2.det()) - eps.det();
    let disc = a * a - m.det();
    if disc < -fl::<T>(1e-10) {
        return Err(Error::Numerical(format!(
            "negativity discriminant {:.3e} < 0",
            crate::scalar::to_f64(disc)
        )));
    }
    let f = a - disc.max(T::zero()).sqrt();
    if !(f > T::zero()) {
        return Err(Error::Numerical(format!(
            "negativity intermediate f = {:.3e} not positive",
            crate::scalar::to_f64(f)
        )));
    }
    let e = (-half * f.log2()).max(T::zero());
    Ok(NegativityReport { f, e })
}

/// Squeezing strength in decibels: 10 log10(e^{2r}).
pub fn squeezing_db<T: Scalar>(r: T) -> T {
    fl::<T>(20.0) * r * fl::<T>(std::f64::consts::LOG10_E)
}
