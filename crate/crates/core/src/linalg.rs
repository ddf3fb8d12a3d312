// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers shared by the chain, Gaussian and amplitude code.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Relative tolerance used when deciding whether an input matrix is symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// Largest entry of |A - A^T|.
pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

pub fn ensure_square(m: &DMatrix<f64>) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    Ok(m.nrows())
}

/// Errors unless `m` is square and symmetric to [`SYMMETRY_TOL`] relative to its scale.
pub fn ensure_symmetric(m: &DMatrix<f64>) -> Result<()> {
    ensure_square(m)?;
    let asym = max_asymmetry(m);
    if asym > SYMMETRY_TOL * max_abs(m).max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    Ok(())
}

/// (A + A^T) / 2
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigendecomposition of a real symmetric matrix with eigenvalues ascending.
///
/// Columns of the returned matrix are the eigenvectors. Each eigenvector is
/// flipped so that its first component with magnitude above `1e-12` is
/// positive, which makes the output reproducible across calls.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl SymEigen {
    pub fn new(m: &DMatrix<f64>) -> Result<Self> {
        ensure_symmetric(m)?;
        let n = m.nrows();
        let eig = SymmetricEigen::new(symmetrize(m));
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

        let values = DVector::from_iterator(n, order.iter().map(|&k| eig.eigenvalues[k]));
        let mut vectors = DMatrix::zeros(n, n);
        for (col, &k) in order.iter().enumerate() {
            let v = eig.eigenvectors.column(k);
            let sign = v.iter().find(|x| x.abs() > 1e-12).map_or(1.0, |x| x.signum());
            vectors.set_column(col, &(v * sign));
        }
        Ok(Self { values, vectors })
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// U diag(f(λ)) U^T
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> DMatrix<f64> {
        let scaled = DVector::from_iterator(self.values.len(), self.values.iter().map(|&l| f(l)));
        let mut left = self.vectors.clone();
        for (mut col, s) in left.column_iter_mut().zip(scaled.iter()) {
            col *= *s;
        }
        left * self.vectors.transpose()
    }
}

/// Canonical symplectic form for the ordering (x_1..x_N, p_1..p_N).
pub fn symplectic_form(n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * n, 2 * n);
    for k in 0..n {
        j[(k, n + k)] = 1.0;
        j[(n + k, k)] = -1.0;
    }
    j
}

/// Smallest eigenvalue of the Hermitian matrix A + iB, with A symmetric and B antisymmetric.
///
/// Uses the real embedding [[A, -B], [B, A]], whose spectrum is that of A + iB
/// with every eigenvalue doubled.
pub fn min_eigenvalue_hermitian(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    let n = ensure_square(a)?;
    if b.nrows() != n || b.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: b.nrows(),
        });
    }
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(a);
    big.view_mut((n, n), (n, n)).copy_from(a);
    big.view_mut((0, n), (n, n)).copy_from(&(-b));
    big.view_mut((n, 0), (n, n)).copy_from(b);
    Ok(SymEigen::new(&symmetrize(&big))?.min_value())
}
