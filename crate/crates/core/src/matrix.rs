//! Small dense complex matrices, used as the bridge to diagonalization
//! and as the oracle side of gate-identity checks. Row-major storage.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{CoreError, Result};
use crate::math;
use crate::C64;

#[derive(Clone, PartialEq, Debug)]
pub struct CMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            *m.at_mut(i, i) = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut C64 {
        &mut self.data[row * self.dim + col]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(CoreError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Self) -> Result<CMatrix> {
        self.check(other)?;
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    *out.at_mut(i, j) += a * other.at(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        let n = self.dim;
        let mut out = vec![C64::new(0.0, 0.0); n];
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += self.at(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    #[must_use]
    pub fn dagger(&self) -> CMatrix {
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(j, i) = self.at(i, j).conj();
            }
        }
        out
    }

    #[must_use]
    pub fn scale(&self, c: C64) -> CMatrix {
        let mut out = self.clone();
        for v in &mut out.data {
            *v *= c;
        }
        out
    }

    pub fn add_scaled(&self, other: &Self, c: C64) -> Result<CMatrix> {
        self.check(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += c * b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<CMatrix> {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data
            .iter()
            .map(|c| c.norm())
            .fold(0.0, |a, b| if b > a { b } else { a })
    }

    /// Frobenius inner product `<self, other> = sum conj(self) * other`.
    pub fn frobenius_inner(&self, other: &Self) -> Result<C64> {
        self.check(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `max_ij |self - U other U†|` with `U = I`; i.e. plain max difference.
    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }

    /// `‖self† self − I‖_max`.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self.dagger().mul(self).expect("same dim");
        prod.sub(&CMatrix::identity(self.dim))
            .expect("same dim")
            .max_abs()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        for i in 0..self.dim {
            for j in 0..=i {
                let d = self.at(i, j) - self.at(j, i).conj();
                if d.norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

/// `min_γ max_ij |a - e^{iγ} b|`, with `γ` chosen to maximize the Frobenius
/// overlap. Exact matches give zero for any phase mismatch between the
/// two constructions.
pub fn phase_aligned_max_diff(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let inner = b.frobenius_inner(a)?; // sum conj(b)·a
    let gamma = if inner.norm() > 1e-300 {
        inner / inner.norm()
    } else {
        C64::new(1.0, 0.0)
    };
    Ok(a.sub(&b.scale(gamma))?.max_abs())
}

/// Kronecker product (`a` on the high bits, `b` on the low bits).
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = CMatrix::zeros(n);
    for ia in 0..na {
        for ja in 0..na {
            let va = a.at(ia, ja);
            if va.norm_sqr() == 0.0 {
                continue;
            }
            for ib in 0..nb {
                for jb in 0..nb {
                    *out.at_mut(ia * nb + ib, ja * nb + jb) = va * b.at(ib, jb);
                }
            }
        }
    }
    out
}

/// 2x2 constants for oracle constructions.
pub fn pauli2(letter: crate::pauli::Letter) -> CMatrix {
    let mut m = CMatrix::zeros(2);
    match letter {
        crate::pauli::Letter::I => {
            *m.at_mut(0, 0) = C64::new(1.0, 0.0);
            *m.at_mut(1, 1) = C64::new(1.0, 0.0);
        }
        crate::pauli::Letter::X => {
            *m.at_mut(0, 1) = C64::new(1.0, 0.0);
            *m.at_mut(1, 0) = C64::new(1.0, 0.0);
        }
        crate::pauli::Letter::Y => {
            *m.at_mut(0, 1) = C64::new(0.0, -1.0);
            *m.at_mut(1, 0) = C64::new(0.0, 1.0);
        }
        crate::pauli::Letter::Z => {
            *m.at_mut(0, 0) = C64::new(1.0, 0.0);
            *m.at_mut(1, 1) = C64::new(-1.0, 0.0);
        }
    }
    m
}

/// Hadamard 2x2.
pub fn hadamard2() -> CMatrix {
    let s = 1.0 / math::sqrt(2.0);
    let mut m = CMatrix::zeros(2);
    *m.at_mut(0, 0) = C64::new(s, 0.0);
    *m.at_mut(0, 1) = C64::new(s, 0.0);
    *m.at_mut(1, 0) = C64::new(s, 0.0);
    *m.at_mut(1, 1) = C64::new(-s, 0.0);
    m
}
