//! Complex linear algebra and quantum-state primitives.

mod dist;
mod matrix;
mod pauli;
mod state;

pub(crate) use dist::walsh_hadamard as dist_walsh_hadamard;
pub use dist::{bitstring, parse_bitstring, parity_expectations, total_variation, CountsTable, Distribution, QuasiDistribution, Weights};
pub use matrix::{gates, ComplexMatrix, Gate1};
pub use pauli::{Pauli, PauliString};
pub use state::{DensityOperator, StateVector};

use crate::{Error, Result};

/// Number of qubits `n` with `dim == 2^n`, or an error if `dim` is not a power of two.
pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidRegister(alloc::format!("dimension {dim} is not a power of two")));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Bit position of `qubit` inside a basis-state index of an `n`-qubit register.
#[inline]
pub(crate) fn bit_of(qubit: usize, n: usize) -> usize {
    n - 1 - qubit
}

pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}

pub fn expectation(rho: &DensityOperator, p: &PauliString) -> Result<f64> {
    rho.expectation(p)
}

pub fn pauli_matrix(p: &PauliString) -> ComplexMatrix {
    p.matrix()
}
