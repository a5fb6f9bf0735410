use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CMatrix, CVector};
use crate::{Error, Result};

/// Kronecker product, first factor slow.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `(M + M^dagger) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Max entrywise |M - M^dagger|.
pub fn max_hermitian_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max entrywise |A - B|. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `<x| M |x>`, real part.
pub fn quadratic_form(m: &CMatrix, x: &CVector) -> f64 {
    x.dotc(&(m * x)).re
}

fn check_indices(indices: &[usize], count: usize) -> Result<()> {
    for &index in indices {
        if index >= count {
            return Err(Error::InvalidSubsystem { index, count });
        }
    }
    Ok(())
}

/// Digits of a flat index in the mixed radix given by `dims` (first digit slow).
fn digits(mut flat: usize, dims: &[usize], out: &mut [usize]) {
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = flat % d;
        flat /= d;
    }
}

fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

/// Partial trace over every subsystem not listed in `keep`.
///
/// Returns the reduced matrix on the kept subsystems, in their original order.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial trace needs at least one kept subsystem".into(),
        ));
    }
    check_indices(keep, dims.len())?;
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    let kept_dims: Vec<usize> = kept.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();

    let n = m.nrows();
    let mut kept_index = vec![0usize; n];
    let mut traced_index = vec![0usize; n];
    let mut buf = vec![0usize; dims.len()];
    let mut sub = Vec::with_capacity(dims.len());
    for flat in 0..n {
        digits(flat, dims, &mut buf);
        sub.clear();
        sub.extend(kept.iter().map(|&i| buf[i]));
        kept_index[flat] = flatten(&sub, &kept_dims);
        sub.clear();
        sub.extend(traced.iter().map(|&i| buf[i]));
        traced_index[flat] = flatten(&sub, &traced_dims);
    }

    let k: usize = kept_dims.iter().product();
    let mut out = DMatrix::zeros(k, k);
    for i in 0..n {
        for j in 0..n {
            if traced_index[i] == traced_index[j] {
                out[(kept_index[i], kept_index[j])] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of the listed subsystems, leaving the others alone.
pub fn partial_transpose_matrix(
    m: &CMatrix,
    dims: &[usize],
    subsystems: &[usize],
) -> Result<CMatrix> {
    check_indices(subsystems, dims.len())?;
    let n = m.nrows();
    let mut out = DMatrix::zeros(n, n);
    let mut row = vec![0usize; dims.len()];
    let mut col = vec![0usize; dims.len()];
    let mut r = vec![0usize; dims.len()];
    let mut c = vec![0usize; dims.len()];
    for i in 0..n {
        digits(i, dims, &mut row);
        for j in 0..n {
            digits(j, dims, &mut col);
            r.copy_from_slice(&row);
            c.copy_from_slice(&col);
            for &s in subsystems {
                r[s] = col[s];
                c[s] = row[s];
            }
            out[(flatten(&r, dims), flatten(&c, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}
