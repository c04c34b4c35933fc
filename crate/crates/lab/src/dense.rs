//! Bridge between the exact operator algebra and faer's dense solvers.

use clusterlab_core::{CMatrix, OperatorSum, C64};
use faer::{Mat, Side};

use crate::error::{LabError, Result};

/// Dense matrix of a Pauli sum as a faer matrix.
pub fn opsum_to_mat(op: &OperatorSum) -> Result<Mat<faer::c64>> {
    let m = op.to_matrix()?;
    Ok(cmatrix_to_mat(&m))
}

pub fn cmatrix_to_mat(m: &CMatrix) -> Mat<faer::c64> {
    let n = m.dim();
    Mat::from_fn(n, n, |i, j| m.at(i, j))
}

/// A Pauli sum has a real matrix iff each term with an even number of Y
/// letters has a real coefficient and each term with an odd number has a
/// purely imaginary one. Returns the real symmetric matrix when so.
pub fn opsum_to_real_mat(op: &OperatorSum) -> Option<Mat<f64>> {
    let n = op.n_sites();
    if n > clusterlab_core::DENSE_SITE_LIMIT {
        return None;
    }
    for (p, c) in op.terms() {
        let y_odd = (p.x_mask() & p.z_mask()).count_ones() % 2 == 1;
        let bad = if y_odd { c.re.abs() > 1e-14 } else { c.im.abs() > 1e-14 };
        if bad {
            return None;
        }
    }
    let dim = 1usize << n;
    let mut m = Mat::<f64>::zeros(dim, dim);
    for (p, c) in op.terms() {
        let (x, z) = (p.x_mask(), p.z_mask());
        let y = (x & z).count_ones() % 4;
        // i^y * coeff is real by the check above
        let folded = c * clusterlab_core::C64::new(0.0, 1.0).powu(y);
        for b in 0..dim as u64 {
            let sign = if (z & b).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            m[((b ^ x) as usize, b as usize)] += folded.re * sign;
        }
    }
    Some(m)
}

/// Ascending eigenvalues and eigenvectors of a Hermitian Pauli sum,
/// taking the real-symmetric fast path when the matrix is real.
pub fn eigh_opsum(op: &OperatorSum) -> Result<(Vec<f64>, Mat<faer::c64>)> {
    if let Some(m) = opsum_to_real_mat(op) {
        let evd = m
            .self_adjoint_eigen(Side::Lower)
            .map_err(|e| LabError::Eigensolver(format!("{e:?}")))?;
        let n = m.nrows();
        let vals: Vec<f64> = (0..n).map(|i| evd.S()[i]).collect();
        let vecs = Mat::from_fn(n, n, |i, j| C64::new(evd.U()[(i, j)], 0.0));
        return Ok((vals, vecs));
    }
    let m = opsum_to_mat(op)?;
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| LabError::Eigensolver(format!("{e:?}")))?;
    let n = m.nrows();
    let vals: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
    let vecs = Mat::from_fn(n, n, |i, j| evd.U()[(i, j)]);
    Ok((vals, vecs))
}

/// Ascending eigenvalues of a small dense Hermitian matrix.
pub fn eigh_cmatrix(m: &CMatrix) -> Result<(Vec<f64>, Mat<faer::c64>)> {
    let fm = cmatrix_to_mat(m);
    let evd = fm
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| LabError::Eigensolver(format!("{e:?}")))?;
    let n = m.dim();
    let vals: Vec<f64> = (0..n).map(|i| evd.S()[i].re).collect();
    let vecs = Mat::from_fn(n, n, |i, j| evd.U()[(i, j)]);
    Ok((vals, vecs))
}

/// Singular values of a dense matrix, nonincreasing.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    cmatrix_to_mat(m)
        .singular_values()
        .map_err(|e| LabError::Eigensolver(format!("{e:?}")))
}
