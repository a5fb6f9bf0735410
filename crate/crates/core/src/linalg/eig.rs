use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::{hermitian_part, CMatrix, CVector};
use crate::{tol, Error, Result};

const MAX_SWEEPS: usize = 10_000;

/// Eigendecomposition of a Hermitian matrix, eigenvalues in decreasing order.
///
/// Within a degenerate eigenvalue block the eigenvector basis is whatever the
/// solver produced; callers must not depend on it.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `i` belongs to `eigenvalues[i]`.
    pub eigenvectors: CMatrix,
    /// Number of eigenvalues above the rank tolerance.
    pub rank: usize,
}

impl EigDecomposition {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.eigenvectors.column(i).into_owned()
    }

    /// `sum_i lambda_i |v_i><v_i|`.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.len();
        let mut out = CMatrix::zeros(n, n);
        for (i, &l) in self.eigenvalues.iter().enumerate() {
            let v = self.eigenvectors.column(i);
            out += (v * v.adjoint()) * Complex64::new(l, 0.0);
        }
        out
    }
}

fn check_input(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Numerical("matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Full eigendecomposition of the Hermitian part `(M + M^dagger)/2`.
pub fn eig_hermitian(m: &CMatrix) -> Result<EigDecomposition> {
    check_input(m)?;
    let h = hermitian_part(m);
    let eig = SymmetricEigen::try_new(h, f64::EPSILON, MAX_SWEEPS)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;

    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    let rank = eigenvalues.iter().filter(|&&l| l > tol::RANK).count();
    Ok(EigDecomposition {
        eigenvalues,
        eigenvectors,
        rank,
    })
}

/// Eigenvalues only, decreasing. Cheaper than [`eig_hermitian`].
pub fn eigvals_hermitian(m: &CMatrix) -> Result<Vec<f64>> {
    check_input(m)?;
    let h = hermitian_part(m);
    let mut vals: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("eigenvalues are not finite".into()));
    }
    vals.sort_by(|a, b| b.total_cmp(a));
    Ok(vals)
}
