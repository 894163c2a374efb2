//! Symplectic transforms generated by quadratic Hamiltonians.
//!
//! A quadratic Hamiltonian `H = 1/2 xi^T M xi` is stored through its
//! coefficient matrix `K = -M`, the matrix that pairs with the unitary exponent
//! `-iH` (the imaginary unit absorbed). The Lie-algebra generator is
//! `J = Omega^{-1} K = -Omega K`, and the transform is `S = exp(J)`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::phase::{omega, relative_asymmetry, SYMMETRY_TOL};

/// Tolerance for the symplectic condition on constructed transforms, scaled by
/// `max(1, max|S_ij|)^2`.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

fn modes_of(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() || m.nrows() == 0 || !m.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "expected a square matrix of positive even size, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("matrix"));
    }
    Ok(m.nrows() / 2)
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Symmetric coefficient matrix `K` of a quadratic Hamiltonian (see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    coeff: DMatrix<f64>,
}

impl QuadraticHamiltonian {
    pub fn new(coeff: DMatrix<f64>) -> Result<Self> {
        modes_of(&coeff)?;
        let asym = relative_asymmetry(&coeff);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric(asym));
        }
        Ok(Self { coeff })
    }

    /// Builds `H = sum c xi_a xi_b` over `(a, b, c)` terms on `modes` modes.
    ///
    /// Products of non-commuting quadratures are taken symmetrized.
    pub fn from_terms(modes: usize, terms: &[(usize, usize, f64)]) -> Result<Self> {
        if modes == 0 {
            return Err(Error::InvalidDimension("mode count must be at least 1".into()));
        }
        let dim = 2 * modes;
        let mut k = DMatrix::zeros(dim, dim);
        for &(a, b, c) in terms {
            if a >= dim || b >= dim {
                return Err(Error::InvalidParameter(format!(
                    "term ({a}, {b}) out of range for {modes} modes"
                )));
            }
            if !c.is_finite() {
                return Err(Error::NonFinite("Hamiltonian coefficient"));
            }
            k[(a, b)] -= c;
            k[(b, a)] -= c;
        }
        Ok(Self { coeff: k })
    }

    pub fn coeff(&self) -> &DMatrix<f64> {
        &self.coeff
    }

    /// The matrix `M` with `H = 1/2 xi^T M xi`.
    pub fn hamiltonian_matrix(&self) -> DMatrix<f64> {
        -&self.coeff
    }

    pub fn modes(&self) -> usize {
        self.coeff.nrows() / 2
    }
}

/// Element `J` of the symplectic Lie algebra (`Omega J` symmetric).
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    matrix: DMatrix<f64>,
}

impl Generator {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = modes_of(&matrix)?;
        let k = omega(n) * &matrix;
        let asym = relative_asymmetry(&k);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotGenerator(asym));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `K = Omega J`, inverse of [`generator_from_quadratic`].
    pub fn to_quadratic(&self) -> QuadraticHamiltonian {
        let n = self.matrix.nrows() / 2;
        let k = omega(n) * &self.matrix;
        let t = k.transpose();
        QuadraticHamiltonian { coeff: (k + t) * 0.5 }
    }
}

/// `J = -Omega K`.
pub fn generator_from_quadratic(h: &QuadraticHamiltonian) -> Generator {
    let n = h.modes();
    Generator {
        matrix: -(omega(n) * h.coeff()),
    }
}

/// Real matrix satisfying `S Omega S^T = Omega`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
}

impl SymplecticTransform {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        modes_of(&matrix)?;
        let check = is_symplectic(&matrix, f64::INFINITY)?;
        let scale = max_abs(&matrix).max(1.0);
        if check.residual > SYMPLECTIC_TOL * scale * scale {
            return Err(Error::NotSymplectic(check.residual));
        }
        Ok(Self { matrix })
    }

    pub fn identity(modes: usize) -> Self {
        Self {
            matrix: DMatrix::identity(2 * modes, 2 * modes),
        }
    }

    /// Single-mode squeezer `diag(e^{-r}, e^{r})`.
    pub fn squeezer(r: f64) -> Self {
        Self {
            matrix: DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![(-r).exp(), r.exp()])),
        }
    }

    /// Phase-space rotation by angle `theta` on one mode.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[c, s, -s, c]),
        }
    }

    /// Block-diagonal direct sum of transforms on consecutive modes.
    pub fn direct_sum(parts: &[SymplecticTransform]) -> Self {
        let dim: usize = parts.iter().map(|p| p.matrix.nrows()).sum();
        let mut m = DMatrix::zeros(dim, dim);
        let mut off = 0;
        for p in parts {
            let d = p.matrix.nrows();
            m.view_mut((off, off), (d, d)).copy_from(&p.matrix);
            off += d;
        }
        Self { matrix: m }
    }

    pub fn compose(&self, other: &SymplecticTransform) -> Result<Self> {
        if self.matrix.nrows() != other.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.matrix.nrows(),
                actual: other.matrix.nrows(),
            });
        }
        Ok(Self {
            matrix: &self.matrix * &other.matrix,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn modes(&self) -> usize {
        self.matrix.nrows() / 2
    }
}

/// Outcome of the symplectic-condition test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymplecticCheck {
    pub is_symplectic: bool,
    /// `max |S Omega S^T - Omega|`.
    pub residual: f64,
}

pub fn is_symplectic(s: &DMatrix<f64>, tol: f64) -> Result<SymplecticCheck> {
    if s.nrows() != s.ncols() {
        return Err(Error::InvalidDimension(format!(
            "{}x{} is not square",
            s.nrows(),
            s.ncols()
        )));
    }
    if s.nrows() == 0 || !s.nrows().is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!("odd dimension {}", s.nrows())));
    }
    let w = omega(s.nrows() / 2);
    let residual = max_abs(&(s * &w * s.transpose() - &w));
    Ok(SymplecticCheck {
        is_symplectic: residual <= tol,
        residual,
    })
}

/// `exp(J)` by Taylor series with scaling and squaring.
///
/// The series stops once a term falls below `1e-17` of the running sum, so a
/// nilpotent generator reproduces its finite Taylor sum.
pub fn matrix_exponential(j: &Generator) -> Result<SymplecticTransform> {
    let a = j.matrix();
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite("generator"));
    }
    let dim = a.nrows();
    let norm = a
        .column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a * 2.0_f64.powi(-squarings);

    let mut sum = DMatrix::<f64>::identity(dim, dim);
    let mut term = DMatrix::<f64>::identity(dim, dim);
    for k in 1..=64 {
        term = &term * &scaled / k as f64;
        let t = max_abs(&term);
        sum += &term;
        if t == 0.0 || t < 1e-17 * max_abs(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    SymplecticTransform::new(sum)
}

/// Exact finite Taylor sum `sum_k J^k / k!` when `J` is nilpotent, `None` otherwise.
pub fn nilpotent_exponential(j: &Generator) -> Option<DMatrix<f64>> {
    let a = j.matrix();
    let dim = a.nrows();
    let mut sum = DMatrix::<f64>::identity(dim, dim);
    let mut power = DMatrix::<f64>::identity(dim, dim);
    let mut factorial = 1.0;
    for k in 1..=dim {
        power = &power * a;
        if power.iter().all(|&x| x == 0.0) {
            return Some(sum);
        }
        factorial *= k as f64;
        sum += &power / factorial;
    }
    None
}

/// Impulsive system-meter couplings of the measurement schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interaction {
    /// `q P1` on (system, meter): meter position reads the system position.
    SequentialQ,
    /// `p P1` on (system, meter): meter position reads the system momentum.
    SequentialP,
    /// `q P1 - p Q2` on (system, meter 1, meter 2).
    ArthursKelly,
    /// `q P1 - p Q2 + (kappa/2) P1 Q2`.
    ModifiedArthursKelly { kappa: f64 },
}

impl Interaction {
    pub fn name(&self) -> &'static str {
        match self {
            Self::SequentialQ => "seq_q",
            Self::SequentialP => "seq_p",
            Self::ArthursKelly => "arthurs_kelly",
            Self::ModifiedArthursKelly { .. } => "modified_ak",
        }
    }

    pub fn modes(&self) -> usize {
        match self {
            Self::SequentialQ | Self::SequentialP => 2,
            _ => 3,
        }
    }

    pub fn hamiltonian(&self) -> Result<QuadraticHamiltonian> {
        // Quadrature indices: q=0 p=1 Q1=2 P1=3 Q2=4 P2=5.
        match *self {
            Self::SequentialQ => QuadraticHamiltonian::from_terms(2, &[(0, 3, 1.0)]),
            Self::SequentialP => QuadraticHamiltonian::from_terms(2, &[(1, 3, 1.0)]),
            Self::ArthursKelly => QuadraticHamiltonian::from_terms(3, &[(0, 3, 1.0), (1, 4, -1.0)]),
            Self::ModifiedArthursKelly { kappa } => {
                if !kappa.is_finite() {
                    return Err(Error::NonFinite("kappa"));
                }
                QuadraticHamiltonian::from_terms(3, &[(0, 3, 1.0), (1, 4, -1.0), (3, 4, 0.5 * kappa)])
            }
        }
    }
}

/// Coefficient matrix and exponentiated transform of a canonical interaction.
pub fn canonical_interaction(kind: Interaction) -> Result<(QuadraticHamiltonian, SymplecticTransform)> {
    let h = kind.hamiltonian()?;
    let s = matrix_exponential(&generator_from_quadratic(&h))?;
    Ok((h, s))
}
