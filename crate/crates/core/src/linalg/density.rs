use num_complex::Complex64;

use super::{
    eig_hermitian, eigvals_hermitian, entropy_of_spectrum, hermitian_part, kron,
    max_hermitian_defect, partial_trace_matrix, partial_transpose_matrix, trace, CMatrix, CVector,
};
use crate::{tol, Error, Result};

/// A validated density matrix together with its subsystem structure.
///
/// Construction checks Hermiticity, unit trace and positivity, then stores the
/// exact Hermitian part so every later operation sees a symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::NotSquare {
                rows: data.nrows(),
                cols: data.ncols(),
            });
        }
        let dim = data.nrows();
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != dim {
            return Err(Error::BadSubsystemDims { dims, dim });
        }
        let defect = max_hermitian_defect(&data);
        if defect.is_nan() || defect > tol::HERMITIAN {
            return Err(Error::NotHermitian(defect));
        }
        let tr = trace(&data);
        if !((tr.re - 1.0).abs() <= tol::TRACE && tr.im.abs() <= tol::TRACE) {
            return Err(Error::InvalidTrace(tr.re));
        }
        let data = hermitian_part(&data);
        let min = eigvals_hermitian(&data)?
            .last()
            .copied()
            .unwrap_or(f64::INFINITY);
        if min < -tol::PSD {
            return Err(Error::NotPsd(min));
        }
        Ok(Self { data, dims })
    }

    /// Single-register state of dimension `data.nrows()`.
    pub fn single(data: CMatrix) -> Result<Self> {
        let d = data.nrows();
        Self::new(data, vec![d])
    }

    /// `|psi><psi|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm.is_nan() || norm == 0.0 {
            return Err(Error::InvalidParameter("zero state vector".into()));
        }
        let v = psi.unscale(norm);
        Self::single(&v * v.adjoint())
    }

    /// Computational basis projector `|k><k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::InvalidParameter(format!("basis index {k} >= {d}")));
        }
        let mut m = CMatrix::zeros(d, d);
        m[(k, k)] = Complex64::new(1.0, 0.0);
        Self::single(m)
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let d = populations.len();
        let m = CMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(populations[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self::single(m)
    }

    pub fn maximally_mixed(d: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0 / d as f64; d])
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Entrywise complex conjugate (also a density matrix).
    pub fn conj(&self) -> Self {
        Self {
            data: self.data.map(|z| z.conj()),
            dims: self.dims.clone(),
        }
    }

    /// Same matrix with a different factorization of its dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        let dim = self.dim();
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != dim {
            return Err(Error::BadSubsystemDims { dims, dim });
        }
        Ok(Self {
            data: self.data.clone(),
            dims,
        })
    }

    /// `self (x) other`; subsystem lists are concatenated.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        // Products of valid states are valid; skip revalidation.
        Self {
            data: kron(&self.data, &other.data),
            dims,
        }
    }

    /// Reduced state on the subsystems in `keep`.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let data = partial_trace_matrix(&self.data, &self.dims, keep)?;
        let mut kept: Vec<usize> = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        let dims = kept.iter().map(|&i| self.dims[i]).collect();
        Ok(Self {
            data: hermitian_part(&data),
            dims,
        })
    }

    /// Partial transpose on `subsystems`. Hermitian but possibly not positive.
    pub fn partial_transpose(&self, subsystems: &[usize]) -> Result<CMatrix> {
        partial_transpose_matrix(&self.data, &self.dims, subsystems)
    }

    /// Tr(self * other), real part.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(self.dim(), other.dim()));
        }
        Ok(trace(&(&self.data * &other.data)).re)
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.data * &self.data)).re
    }

    /// Von Neumann entropy in bits.
    pub fn entropy(&self) -> Result<f64> {
        Ok(entropy_of_spectrum(&eigvals_hermitian(&self.data)?))
    }

    pub fn eig(&self) -> Result<super::EigDecomposition> {
        eig_hermitian(&self.data)
    }
}

/// Von Neumann entropy of `rho` in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    rho.entropy()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use nalgebra::dvector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_invalid_states() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.5), c(0.1), c(0.2), c(0.5)]);
        assert!(matches!(
            DensityMatrix::single(m),
            Err(Error::NotHermitian(_))
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[0.6, 0.6]),
            Err(Error::InvalidTrace(_))
        ));
        assert!(matches!(
            DensityMatrix::diagonal(&[1.1, -0.1]),
            Err(Error::NotPsd(_))
        ));
        assert!(matches!(
            DensityMatrix::new(CMatrix::identity(4, 4) * c(0.25), vec![3]),
            Err(Error::BadSubsystemDims { .. })
        ));
        assert!(matches!(
            DensityMatrix::single(CMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }

    #[test]
    fn tensor_of_projectors() {
        let z = DensityMatrix::basis(2, 0).unwrap();
        let t = z.tensor(&z);
        assert_eq!(t.dims(), &[2, 2]);
        let mut expected = CMatrix::zeros(4, 4);
        expected[(0, 0)] = c(1.0);
        assert_eq!(t.matrix(), &expected);
    }

    #[test]
    fn tensor_of_maximally_mixed() {
        let h = DensityMatrix::maximally_mixed(2).unwrap();
        let t = h.tensor(&h);
        assert!(max_abs_diff(t.matrix(), &(CMatrix::identity(4, 4) * c(0.25))) < 1e-16);
    }

    #[test]
    fn tensor_of_diagonals() {
        let a = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        let b = DensityMatrix::diagonal(&[0.9, 0.1]).unwrap();
        let t = a.tensor(&b);
        let expected = [0.675, 0.075, 0.225, 0.025];
        for (i, e) in expected.iter().enumerate() {
            assert!((t.matrix()[(i, i)].re - e).abs() < 1e-15);
        }
        assert!(t.matrix().iter().filter(|z| z.norm() > 0.0).count() == 4);
    }

    #[test]
    fn entropy_values() {
        let pure = DensityMatrix::pure(&dvector![c(0.6), c(0.8)]).unwrap();
        assert!(pure.entropy().unwrap().abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((von_neumann_entropy(&mixed).unwrap() - 1.0).abs() < 1e-14);
        let skew = DensityMatrix::diagonal(&[0.75, 0.25]).unwrap();
        // -(3/4) log2(3/4) - (1/4) log2(1/4)
        assert!((skew.entropy().unwrap() - 0.811_278_124_459_132_9).abs() < 1e-12);
    }

    #[test]
    fn bell_partial_transpose_min_eigenvalue() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&dvector![c(s), c(0.0), c(0.0), c(s)])
            .unwrap()
            .with_dims(vec![2, 2])
            .unwrap();
        let pt = bell.partial_transpose(&[1]).unwrap();
        let vals = eigvals_hermitian(&pt).unwrap();
        assert!((vals[3] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_of_product() {
        let a = DensityMatrix::diagonal(&[0.3, 0.7]).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        let t = a.tensor(&b);
        let r = t.partial_trace(&[0]).unwrap();
        assert!(max_abs_diff(r.matrix(), a.matrix()) < 1e-15);
        assert_eq!(r.dims(), &[2]);
        assert!(t.partial_trace(&[2]).is_err());
    }
}
