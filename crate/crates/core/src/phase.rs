//! Gaussian states in phase space.
//!
//! Quadratures are laid out as `(q1, p1, q2, p2, ...)` with `hbar = 1`, so the
//! vacuum covariance matrix is `I/2`. A state is the pair of its mean vector and
//! covariance matrix; every operation here returns a new value.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::symplectic::SymplecticTransform;

/// Relative tolerance for the symmetry check on covariance-like matrices.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Slack allowed below the vacuum bound `1/2` when certifying physicality.
pub const PHYSICALITY_TOL: f64 = 1e-10;

/// Block-diagonal symplectic form `Omega = diag(w, ..., w)` with `w = [[0, 1], [-1, 0]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }
}

/// Builds the symplectic form for `n` modes.
pub fn symplectic_form(n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(Error::InvalidDimension("mode count must be at least 1".into()));
    }
    Ok(SymplecticForm {
        modes: n,
        matrix: omega(n),
    })
}

pub(crate) fn omega(n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// First moments of the quadratures.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanVector(DVector<f64>);

impl MeanVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() || !entries.len().is_multiple_of(2) {
            return Err(Error::InvalidDimension(format!(
                "mean vector length {} is not a positive even number",
                entries.len()
            )));
        }
        if entries.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite("mean vector"));
        }
        Ok(Self(DVector::from_vec(entries)))
    }

    pub fn zeros(modes: usize) -> Self {
        Self(DVector::zeros(2 * modes))
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.0[i]
    }
}

/// Symmetric, physical covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    /// Validates symmetry and the uncertainty relation (all symplectic
    /// eigenvalues at least `1/2 - PHYSICALITY_TOL`).
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let nu = symplectic_eigenvalues(&matrix)?;
        let min = nu.first().copied().unwrap_or(f64::NAN);
        if !(min >= 0.5 - PHYSICALITY_TOL) {
            return Err(Error::Unphysical(min));
        }
        Ok(Self(symmetrize(matrix)))
    }

    /// Diagonal covariance matrix from a list of variances.
    pub fn diagonal(variances: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(variances)))
    }

    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        Self(symmetrize(matrix))
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0[(i, j)]
    }

    pub fn symplectic_eigenvalues(&self) -> Vec<f64> {
        symplectic_eigenvalues(&self.0).expect("validated covariance matrix")
    }
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest `|m_ij - m_ji|`, relative to `max(1, max |m_ij|)`.
pub(crate) fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..m.nrows() {
        for j in (i + 1)..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst / max_abs(m).max(1.0)
}

fn check_even_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::InvalidDimension(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "dimension {} is not a positive even number",
            m.nrows()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    Ok(m.nrows() / 2)
}

/// Symplectic eigenvalues of a symmetric `2n x 2n` matrix, ascending.
///
/// The eigenvalues of `Omega V` come in pairs `+-i nu`; their moduli are sorted
/// and every second one is kept.
pub fn symplectic_eigenvalues(matrix: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = check_even_square(matrix)?;
    let asym = relative_asymmetry(matrix);
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric(asym));
    }
    let product = omega(n) * symmetrize(matrix.clone());
    let mut moduli: Vec<f64> = product.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    Ok(moduli.into_iter().step_by(2).collect())
}

/// An `n`-mode Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: MeanVector,
    cov: CovarianceMatrix,
}

impl GaussianState {
    pub fn new(mean: MeanVector, cov: CovarianceMatrix) -> Result<Self> {
        if mean.len() != cov.dim() {
            return Err(Error::DimensionMismatch {
                expected: cov.dim(),
                actual: mean.len(),
            });
        }
        Ok(Self { mean, cov })
    }

    pub fn from_parts(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        Self::new(MeanVector::new(mean)?, CovarianceMatrix::new(cov)?)
    }

    /// Pure meter state centred at the origin with position width `dq`;
    /// the momentum width is `1/(2 dq)`.
    pub fn squeezed_vacuum(dq: f64) -> Result<Self> {
        if !(dq.is_finite() && dq > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "meter width must be positive, got {dq}"
            )));
        }
        let dp = 0.5 / dq;
        Self::new(MeanVector::zeros(1), CovarianceMatrix::diagonal(&[dq * dq, dp * dp])?)
    }

    /// Tensor product: means are concatenated, covariances stacked block-diagonally.
    pub fn product(parts: &[GaussianState]) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidDimension("empty product".into()));
        }
        let dim: usize = parts.iter().map(|s| s.cov.dim()).sum();
        let mut mean = Vec::with_capacity(dim);
        let mut cov = DMatrix::zeros(dim, dim);
        let mut offset = 0;
        for s in parts {
            let d = s.cov.dim();
            mean.extend(s.mean.as_vector().iter());
            cov.view_mut((offset, offset), (d, d)).copy_from(s.cov.as_matrix());
            offset += d;
        }
        Ok(Self {
            mean: MeanVector(DVector::from_vec(mean)),
            cov: CovarianceMatrix::from_trusted(cov),
        })
    }

    pub fn modes(&self) -> usize {
        self.cov.dim() / 2
    }

    pub fn mean(&self) -> &MeanVector {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub(crate) fn from_trusted(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        Self {
            mean: MeanVector(mean),
            cov: CovarianceMatrix::from_trusted(cov),
        }
    }
}

/// State families used throughout the workbench.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StateKind {
    Vacuum,
    Thermal {
        nbar: f64,
    },
    /// Mean `(q0, p0)`, covariance `((2 nbar + 1)/2) diag(e^{-2r}, e^{2r})`.
    SqueezedCoherentThermal {
        q0: f64,
        p0: f64,
        r: f64,
        nbar: f64,
    },
}

fn check_nbar(nbar: f64) -> Result<()> {
    if !nbar.is_finite() || nbar < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "mean photon number must be finite and non-negative, got {nbar}"
        )));
    }
    Ok(())
}

pub fn make_state(kind: StateKind) -> Result<GaussianState> {
    match kind {
        StateKind::Vacuum => GaussianState::new(MeanVector::zeros(1), CovarianceMatrix::diagonal(&[0.5, 0.5])?),
        StateKind::Thermal { nbar } => {
            check_nbar(nbar)?;
            let v = nbar + 0.5;
            GaussianState::new(MeanVector::zeros(1), CovarianceMatrix::diagonal(&[v, v])?)
        }
        StateKind::SqueezedCoherentThermal { q0, p0, r, nbar } => {
            check_nbar(nbar)?;
            if !(q0.is_finite() && p0.is_finite() && r.is_finite()) {
                return Err(Error::NonFinite("state parameters"));
            }
            let v = nbar + 0.5;
            GaussianState::new(
                MeanVector::new(vec![q0, p0])?,
                CovarianceMatrix::diagonal(&[v * (-2.0 * r).exp(), v * (2.0 * r).exp()])?,
            )
        }
    }
}

/// Congruence action: `mean -> S mean`, `V -> S V S^T`.
pub fn apply_symplectic(state: &GaussianState, s: &SymplecticTransform) -> Result<GaussianState> {
    let m = s.matrix();
    if m.nrows() != state.cov.dim() {
        return Err(Error::DimensionMismatch {
            expected: state.cov.dim(),
            actual: m.nrows(),
        });
    }
    let mean = m * state.mean.as_vector();
    let cov = m * state.cov.as_matrix() * m.transpose();
    Ok(GaussianState::from_trusted(mean, cov))
}

/// Keeps the listed modes (0-based), in their original order.
pub fn reduce_modes(state: &GaussianState, keep: &[usize]) -> Result<GaussianState> {
    if keep.is_empty() {
        return Err(Error::InvalidModeSelection("no modes selected".into()));
    }
    let modes = state.modes();
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidModeSelection(format!("duplicate mode in {keep:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&k| k >= modes) {
        return Err(Error::InvalidModeSelection(format!(
            "mode {bad} out of range for a {modes}-mode state"
        )));
    }
    let idx: Vec<usize> = sorted.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| state.mean.get(i)));
    let cov = DMatrix::from_fn(idx.len(), idx.len(), |a, b| state.cov.get(idx[a], idx[b]));
    Ok(GaussianState::from_trusted(mean, cov))
}

/// Gaussian Wigner function evaluated at a phase-space point.
pub fn wigner_density(state: &GaussianState, point: &[f64]) -> Result<f64> {
    let dim = state.cov.dim();
    if point.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: point.len(),
        });
    }
    let chol = state
        .cov
        .as_matrix()
        .clone()
        .cholesky()
        .ok_or_else(|| Error::Singular(state.cov.as_matrix().determinant()))?;
    let det: f64 = chol.l().diagonal().iter().map(|d| d * d).product();
    if !(det > 0.0) {
        return Err(Error::Singular(det));
    }
    let delta = DVector::from_column_slice(point) - state.mean.as_vector();
    let solved = chol.solve(&delta);
    let quad = delta.dot(&solved);
    let n = state.modes() as i32;
    Ok((-0.5 * quad).exp() / ((2.0 * PI).powi(n) * det.sqrt()))
}

/// One-dimensional Gaussian law of a single quadrature reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Marginal1D {
    pub mean: f64,
    pub variance: f64,
}

impl Marginal1D {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() || !variance.is_finite() {
            return Err(Error::NonFinite("marginal"));
        }
        if variance <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "variance must be positive, got {variance}"
            )));
        }
        Ok(Self { mean, variance })
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn density(&self, x: f64) -> f64 {
        let d = x - self.mean;
        (-0.5 * d * d / self.variance).exp() / (2.0 * PI * self.variance).sqrt()
    }
}

/// Marginal law of quadrature `index` (0-based over `q1, p1, q2, ...`).
pub fn marginal_distribution(state: &GaussianState, index: usize) -> Result<Marginal1D> {
    let dim = state.cov.dim();
    if index >= dim {
        return Err(Error::InvalidParameter(format!(
            "quadrature index {index} out of range for dimension {dim}"
        )));
    }
    Marginal1D::new(state.mean.get(index), state.cov.get(index, index))
}
