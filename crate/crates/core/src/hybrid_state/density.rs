use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const HERMITIAN_TOLERANCE: f64 = 1e-10;
pub const TRACE_TOLERANCE: f64 = 1e-10;
pub const PSD_TOLERANCE: f64 = 1e-9;

/// Eigenvalues below this are treated as zero when taking matrix square roots.
pub const EIGEN_CLAMP: f64 = 1e-12;

/// A validated polarization density matrix: one, two or three qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || !matches!(dim, 2 | 4 | 8) {
            return Err(Error::domain(format!(
                "density matrix must be 2×2, 4×4 or 8×8, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::numerical("density matrix has non-finite entries"));
        }
        let asym = (&matrix - matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > HERMITIAN_TOLERANCE {
            return Err(Error::numerical(format!("density matrix not Hermitian (deviation {asym:.3e})")));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::numerical(format!("density matrix trace is {trace}")));
        }
        // symmetrize away the tolerated anti-Hermitian residue
        let matrix = (&matrix + matrix.adjoint()).scale(0.5);
        let (eigenvalues, _) = hermitian_eigen(&matrix);
        let min = eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
        if min < -PSD_TOLERANCE {
            return Err(Error::numerical(format!("density matrix not positive semidefinite (eigenvalue {min:.3e})")));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a normalized state vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let v = DVector::from_column_slice(psi);
        Self::new(&v * v.adjoint())
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(DMatrix::identity(dim, dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.matrix[(row, col)]
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &DMatrix<Complex64>) -> Result<Self> {
        if unitary.nrows() != self.dim() || unitary.ncols() != self.dim() {
            return Err(Error::domain("unitary dimension does not match density matrix"));
        }
        Self::new(unitary * &self.matrix * unitary.adjoint())
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigen(&self.matrix).0
    }
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
pub(crate) fn hermitian_eigen(m: &DMatrix<Complex64>) -> (Vec<f64>, DMatrix<Complex64>) {
    let eig = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

/// Principal square root of a Hermitian PSD matrix, clamping eigenvalues below [`EIGEN_CLAMP`] to zero.
pub(crate) fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let (values, vectors) = hermitian_eigen(m);
    let roots = DMatrix::from_diagonal(&DVector::from_iterator(
        values.len(),
        values
            .iter()
            .map(|&v| Complex64::new(if v < EIGEN_CLAMP { 0.0 } else { v.sqrt() }, 0.0)),
    ));
    &vectors * roots * vectors.adjoint()
}

impl Serialize for DensityMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.dim())
            .map(|r| (0..self.dim()).map(|c| [self.matrix[(r, c)].re, self.matrix[(r, c)].im]).collect())
            .collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DensityMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(deserializer)?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(serde::de::Error::custom("density matrix rows must be square"));
        }
        let m = DMatrix::from_fn(n, n, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
        DensityMatrix::new(m).map_err(serde::de::Error::custom)
    }
}
