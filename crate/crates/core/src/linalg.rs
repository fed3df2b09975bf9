//! Dense symmetric decompositions, delegated to nalgebra in double precision.

use nalgebra::{DMatrix, DVector};

use crate::scalar::Scalar;

fn to_dmatrix<T: Scalar>(n: usize, data: &[T]) -> DMatrix<f64> {
    assert_eq!(data.len(), n * n, "square matrix expected");
    DMatrix::from_row_iterator(n, n, data.iter().map(|x| x.as_f64()))
}

/// Eigenvalues of a symmetric row-major n x n matrix, ascending.
pub fn symmetric_eigenvalues<T: Scalar>(n: usize, data: &[T]) -> Vec<f64> {
    if n == 0 {
        return Vec::new();
    }
    let mut eig: Vec<f64> = to_dmatrix(n, data).symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.total_cmp(b));
    eig
}


/// Symmetric square root V diag(sqrt(max(l, 0))) V^T.
///
/// Fails with the offending eigenvalue when one lies below `-rel_tol * trace`.
pub fn symmetric_sqrt<T: Scalar>(n: usize, data: &[T], rel_tol: f64) -> Result<Vec<T>, f64> {
    let m = to_dmatrix(n, data);
    let trace = m.trace();
    let eig = m.symmetric_eigen();
    if let Some(&bad) = eig.eigenvalues.iter().find(|&&l| l < -rel_tol * trace.abs()) {
        return Err(bad);
    }
    let roots = DVector::from_iterator(n, eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()));
    let v = &eig.eigenvectors;
    let root = v * DMatrix::from_diagonal(&roots) * v.transpose();
    Ok((0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| T::lit(root[(i, j)])).collect())
}

/// Solves the symmetric positive-definite system A x = b by Cholesky.
pub fn cholesky_solve(n: usize, a: Vec<f64>, b: Vec<f64>) -> Option<Vec<f64>> {
    let m = DMatrix::from_row_slice(n, n, &a);
    let chol = m.cholesky()?;
    let x = chol.solve(&DVector::from_vec(b));
    Some(x.iter().copied().collect())
}
