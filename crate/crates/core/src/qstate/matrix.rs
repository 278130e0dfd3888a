use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::qubits_for_dim;
use crate::{Error, Result};

/// A 2x2 single-qubit operator, row-major.
pub type Gate1 = [[Complex64; 2]; 2];

/// Fixed single-qubit matrices.
pub mod gates {
    use super::Gate1;
    use num_complex::Complex64;

    const O: Complex64 = Complex64::new(0.0, 0.0);
    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const I: Complex64 = Complex64::new(0.0, 1.0);
    const H0: Complex64 = Complex64::new(core::f64::consts::FRAC_1_SQRT_2, 0.0);

    pub const ID: Gate1 = [[ONE, O], [O, ONE]];
    pub const X: Gate1 = [[O, ONE], [ONE, O]];
    pub const Y: Gate1 = [[O, Complex64::new(0.0, -1.0)], [I, O]];
    pub const Z: Gate1 = [[ONE, O], [O, Complex64::new(-1.0, 0.0)]];
    pub const H: Gate1 = [[H0, H0], [H0, Complex64::new(-core::f64::consts::FRAC_1_SQRT_2, 0.0)]];
    pub const S: Gate1 = [[ONE, O], [O, I]];
    pub const SDG: Gate1 = [[ONE, O], [O, Complex64::new(0.0, -1.0)]];

    pub fn mul(a: &Gate1, b: &Gate1) -> Gate1 {
        let mut out = [[O; 2]; 2];
        for r in 0..2 {
            for c in 0..2 {
                out[r][c] = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        out
    }

    pub fn adjoint(a: &Gate1) -> Gate1 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }
}

/// Dense square complex matrix of power-of-two dimension, stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        qubits_for_dim(dim)?;
        Ok(Self { dim, data: vec![Complex64::new(0.0, 0.0); dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(m)
    }

    /// Build from row-major entries. Rejects non-power-of-two sizes and non-finite entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        qubits_for_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::InvalidRegister(alloc::format!(
                "expected {} entries, got {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidRegister("non-finite matrix entry".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_gate(g: &Gate1) -> Self {
        Self { dim: 2, data: vec![g[0][0], g[0][1], g[1][0], g[1][1]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn kron(&self, other: &Self) -> Self {
        let d = self.dim * other.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        data[(r1 * other.dim + r2) * d + c1 * other.dim + c2] = a * other.get(r2, c2);
                    }
                }
            }
        }
        Self { dim: d, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::SizeMismatch { expected: self.n_qubits(), found: other.n_qubits() });
        }
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    data[r * d + c] += a * other.get(k, c);
                }
            }
        }
        Ok(Self { dim: d, data })
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.get(r, c).conj();
            }
        }
        Self { dim: d, data }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { dim: self.dim, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::SizeMismatch { expected: self.n_qubits(), found: other.n_qubits() });
        }
        Ok(Self { dim: self.dim, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`; `f64::INFINITY` on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dim != other.dim {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Eigenvalues of the Hermitian part `(A + A†)/2`, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let d = self.dim;
        let m = DMatrix::from_fn(d, d, |r, c| (self.get(r, c) + self.get(c, r).conj()) * 0.5);
        let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{})", self.dim, self.dim)?;
        for r in 0..self.dim {
            for c in 0..self.dim {
                let z = self.get(r, c);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
