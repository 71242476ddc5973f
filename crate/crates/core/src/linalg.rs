//! Thin wrappers around the LAPACK-backed dense routines used throughout.

use crate::error::Result;
use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, SVD, UPLO};
use num_complex::Complex64;

/// Hermitian eigendecomposition, eigenvalues ascending, eigenvectors as
/// columns of the returned matrix.
///
/// Some LAPACK bindings hand back conjugated eigenvectors for complex
/// Hermitian input in row-major layout (the eigenvalues are unaffected
/// because conj(H) = Hᵀ has the same spectrum). That failure mode is silent,
/// so the wrapper measures the eigen-residual of a few sample columns in both
/// orientations and conjugates the whole matrix if needed.
pub fn eigh(h: &Array2<Complex64>) -> Result<(Array1<f64>, Array2<Complex64>)> {
    let (vals, mut vecs) = h.eigh(UPLO::Lower)?;
    let dim = h.nrows();
    if dim > 1 {
        let mut samples = vec![0, dim / 2, dim - 1];
        samples.dedup();
        let residual = |v: &Array1<Complex64>, lambda: f64| -> f64 {
            let hv = h.dot(v);
            hv.iter()
                .zip(v.iter())
                .map(|(x, y)| (x - lambda * y).norm())
                .sum()
        };
        let (mut plain, mut conjugated) = (0.0, 0.0);
        for &idx in &samples {
            let v = vecs.column(idx).to_owned();
            plain += residual(&v, vals[idx]);
            conjugated += residual(&v.mapv(|z| z.conj()), vals[idx]);
        }
        if conjugated < plain {
            vecs.mapv_inplace(|z| z.conj());
        }
    }
    Ok((vals, vecs))
}

/// Singular values (descending) and right-singular vectors of `m`.
pub fn singular_triplets(m: &Array2<Complex64>) -> Result<(Vec<f64>, Array2<Complex64>)> {
    let (_, s, vt) = m.svd(false, true)?;
    let vt = vt.expect("requested Vt");
    Ok((s.to_vec(), vt))
}

/// Orthonormal null-space vectors of `m` (right-singular vectors whose
/// singular value is below `tol`), together with the smallest singular value.
pub fn null_space(m: &Array2<Complex64>, tol: f64) -> Result<(f64, Vec<Array1<Complex64>>)> {
    let (s, vt) = singular_triplets(m)?;
    let smallest = s.last().copied().unwrap_or(0.0);
    let mut vectors = Vec::new();
    for (i, &sigma) in s.iter().enumerate() {
        if sigma < tol {
            vectors.push(vt.row(i).mapv(|z| z.conj()));
        }
    }
    Ok((smallest, vectors))
}

/// Determinant of a small complex matrix by partial-pivot LU. Cheap enough
/// for the energy-scan hot loop (matrices here are at most 4×4).
pub fn det_small(m: &Array2<Complex64>) -> Complex64 {
    let n = m.nrows();
    debug_assert_eq!(n, m.ncols());
    let mut lu = m.clone();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        // Pivot on the largest remaining entry in this column.
        let mut pivot = col;
        for row in col + 1..n {
            if lu[[row, col]].norm() > lu[[pivot, col]].norm() {
                pivot = row;
            }
        }
        if lu[[pivot, col]].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = lu[[col, j]];
                lu[[col, j]] = lu[[pivot, j]];
                lu[[pivot, j]] = tmp;
            }
            det = -det;
        }
        det *= lu[[col, col]];
        for row in col + 1..n {
            let factor = lu[[row, col]] / lu[[col, col]];
            for j in col..n {
                let sub = factor * lu[[col, j]];
                lu[[row, j]] -= sub;
            }
        }
    }
    det
}
