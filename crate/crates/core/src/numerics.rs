//! Complex-matrix primitives shared by every other module.
//!
//! Matrices are `nalgebra` dense matrices of `Complex64`. Hermitian
//! quantities (channel covariances, precoder covariances) are wrapped in
//! [`HermitianMatrix`], which stores an exactly conjugate-symmetric copy.

use std::f64::consts::PI;
use std::ops::Add;

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::{ChannelSet, Component};
use crate::error::{Error, Result};

pub type ComplexMatrix = DMatrix<Complex64>;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_TOLERANCE: f64 = 1e-8;

/// Eigenvalues above `-PSD_TOLERANCE * lambda_max` are accepted as nonnegative.
pub const PSD_TOLERANCE: f64 = 1e-9;

/// A square matrix with `m[(i, j)] == m[(j, i)].conj()` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(ComplexMatrix);

impl HermitianMatrix {
    /// Wraps `m` after checking it is Hermitian up to rounding, then stores
    /// the exact Hermitian part `(m + m^H) / 2`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidDimension(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let n = m.nrows();
        for i in 0..n {
            for j in i..n {
                let gap = (m[(i, j)] - m[(j, i)].conj()).norm();
                if gap > 1e-9 * scale.max(1e-300) {
                    return Err(Error::InvalidArgument(format!(
                        "matrix is not Hermitian at ({i}, {j}): asymmetry {gap:e}"
                    )));
                }
            }
        }
        Ok(Self::symmetrize(m))
    }

    /// Hermitian part of an arbitrary square matrix, without checking.
    pub fn symmetrize(m: ComplexMatrix) -> Self {
        let half = Complex64::new(0.5, 0.0);
        let mut out = m.clone();
        let n = m.nrows();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (m[(i, j)] + m[(j, i)].conj()) * half;
            }
        }
        HermitianMatrix(out)
    }

    /// `y^H y`, PSD by construction.
    pub fn gram(y: &ComplexMatrix) -> Self {
        Self::symmetrize(y.adjoint() * y)
    }

    /// `y y^H`, PSD by construction.
    pub fn outer_gram(y: &ComplexMatrix) -> Self {
        Self::symmetrize(y * y.adjoint())
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix(ComplexMatrix::zeros(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix(self.0.map(|z| z * c))
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    /// Eigenvalues in ascending order together with matching unit eigenvectors
    /// (as columns).
    pub fn eigen(&self) -> (Vec<f64>, ComplexMatrix) {
        let n = self.dim();
        if n == 0 {
            return (Vec::new(), ComplexMatrix::zeros(0, 0));
        }
        let eig = SymmetricEigen::new(self.0.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigen().0
    }

    /// Smallest eigenvalue if it violates the PSD tolerance, otherwise `None`.
    fn psd_violation(values: &[f64]) -> Option<f64> {
        let max_abs = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        (min < -PSD_TOLERANCE * max_abs).then_some(min)
    }

    pub fn is_psd(&self) -> bool {
        Self::psd_violation(&self.eigenvalues()).is_none()
    }

    /// Principal square root of a PSD matrix. Eigenvalues within the PSD
    /// tolerance of zero are clamped to zero.
    pub fn sqrt_psd(&self) -> Result<ComplexMatrix> {
        let (values, vectors) = self.eigen();
        if let Some(min_eigenvalue) = Self::psd_violation(&values) {
            return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
        }
        let n = self.dim();
        let scaled = ComplexMatrix::from_fn(n, n, |r, c| vectors[(r, c)] * values[c].max(0.0).sqrt());
        Ok(&scaled * vectors.adjoint())
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn add(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

/// N-point DFT codebook: entry `(m, k)` is `exp(-j 2 pi m k / n)`.
///
/// Columns are not normalized; each has squared norm `n`.
pub fn dft_matrix(n: usize) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(Error::InvalidDimension("DFT size must be at least 1".into()));
    }
    // Reduce m*k modulo n before scaling so large indices keep full precision.
    Ok(ComplexMatrix::from_fn(n, n, |m, k| {
        let phase = -2.0 * PI * ((m * k) % n) as f64 / n as f64;
        Complex64::from_polar(1.0, phase)
    }))
}

/// Orthonormal basis of the (numerical) nullspace of `a`.
///
/// Singular values at or below `tol * sigma_max` are treated as zero. A
/// matrix with full column rank yields a basis with zero columns.
pub fn nullspace_basis(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let (rows, cols) = a.shape();
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDimension(format!(
            "nullspace of an empty {rows}x{cols} matrix"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "rank tolerance must be positive, got {tol}"
        )));
    }
    let (singular, v_t) = right_singular_system(a);
    let sigma_max = singular.iter().copied().fold(0.0, f64::max);
    let null: Vec<usize> = (0..cols).filter(|&i| singular[i] <= tol * sigma_max).collect();
    Ok(ComplexMatrix::from_fn(cols, null.len(), |r, c| {
        v_t[(null[c], r)].conj()
    }))
}

/// Number of singular values above `tol * sigma_max`.
pub fn numerical_rank(a: &ComplexMatrix, tol: f64) -> usize {
    if a.is_empty() {
        return 0;
    }
    let (singular, _) = right_singular_system(a);
    let sigma_max = singular.iter().copied().fold(0.0, f64::max);
    singular.iter().filter(|&&s| s > tol * sigma_max).count()
}

/// Singular values (one per column, zero-padded) and the full `cols x cols`
/// `V^H` of `a`. Wide matrices are padded with zero rows so the SVD returns
/// a complete right basis.
fn right_singular_system(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let (rows, cols) = a.shape();
    let square = if rows < cols {
        let mut padded = ComplexMatrix::zeros(cols, cols);
        padded.view_mut((0, 0), (rows, cols)).copy_from(a);
        padded
    } else {
        a.clone()
    };
    let svd = square.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    (svd.singular_values.iter().copied().collect(), v_t)
}

/// `log2 det(I + h sigma h^H / noise_power)` via the eigenvalues of
/// `h sigma h^H`.
pub fn logdet_cap(h: &ComplexMatrix, sigma: &HermitianMatrix, noise_power: f64) -> Result<f64> {
    check_noise(noise_power)?;
    if h.ncols() != sigma.dim() {
        return Err(Error::InvalidDimension(format!(
            "channel has {} columns but covariance is {}x{}",
            h.ncols(),
            sigma.dim(),
            sigma.dim()
        )));
    }
    let sigma_eigs = sigma.eigenvalues();
    if let Some(min_eigenvalue) = HermitianMatrix::psd_violation(&sigma_eigs) {
        return Err(Error::NotPositiveSemidefinite { min_eigenvalue });
    }
    let received = HermitianMatrix::symmetrize(h * sigma.as_matrix() * h.adjoint());
    Ok(capacity_from_eigenvalues(&received.eigenvalues(), noise_power))
}

/// [`logdet_cap`] for `sigma = root root^H`, working on the smaller Gram
/// matrix of `h root`. No PSD check is needed.
pub fn logdet_cap_root(h: &ComplexMatrix, root: &ComplexMatrix, noise_power: f64) -> Result<f64> {
    check_noise(noise_power)?;
    if h.ncols() != root.nrows() {
        return Err(Error::InvalidDimension(format!(
            "channel has {} columns but precoder has {} rows",
            h.ncols(),
            root.nrows()
        )));
    }
    if root.ncols() == 0 || h.nrows() == 0 {
        return Ok(0.0);
    }
    let effective = h * root;
    let gram = if effective.ncols() <= effective.nrows() {
        HermitianMatrix::gram(&effective)
    } else {
        HermitianMatrix::outer_gram(&effective)
    };
    Ok(capacity_from_eigenvalues(&gram.eigenvalues(), noise_power))
}

fn capacity_from_eigenvalues(values: &[f64], noise_power: f64) -> f64 {
    values.iter().map(|&l| (l.max(0.0) / noise_power).ln_1p()).sum::<f64>() / std::f64::consts::LN_2
}

fn check_noise(noise_power: f64) -> Result<()> {
    if noise_power > 0.0 && noise_power.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "noise power must be positive and finite, got {noise_power}"
        )))
    }
}

/// `(1/M) sum_m H_m^H H_m` over the chosen component of each draw.
pub fn sample_covariance(draws: &[ChannelSet], which: Component) -> Result<HermitianMatrix> {
    let first = draws
        .first()
        .ok_or_else(|| Error::InvalidArgument("sample covariance needs at least one draw".into()))?;
    let n = first.dim();
    let mut acc = ComplexMatrix::zeros(n, n);
    for draw in draws {
        if draw.dim() != n {
            return Err(Error::InvalidDimension(format!(
                "draws mix {n}x{n} and {0}x{0} channels",
                draw.dim()
            )));
        }
        let h = draw.component(which);
        acc += h.adjoint() * h;
    }
    acc /= Complex64::new(draws.len() as f64, 0.0);
    Ok(HermitianMatrix::symmetrize(acc))
}
