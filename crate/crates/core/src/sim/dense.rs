use crate::circuit::{basis_change_ops, Circuit, Gate, MeasSetting};
use crate::qstate::{DensityOperator, Distribution, StateVector};
use crate::{Error, Result};

use super::NoiseModel;

/// Largest register simulated as a dense density operator.
pub const MAX_DENSE_QUBITS: usize = 6;
/// Largest register simulated as a dense state vector.
pub const MAX_STATEVECTOR_QUBITS: usize = 24;

/// Final density operator of `c`. With `noise`, a depolarising channel follows every
/// gate on that gate's support. A zero-strength channel is skipped, so `p = 0`
/// reproduces the noiseless output bit for bit.
pub fn run_exact(c: &Circuit, noise: Option<&NoiseModel>) -> Result<DensityOperator> {
    let n = c.n_qubits();
    if n > MAX_DENSE_QUBITS {
        return Err(Error::RegisterTooLarge { n, max: MAX_DENSE_QUBITS });
    }
    if let Some(m) = noise {
        m.validate()?;
    }
    let (p1, p2) = noise.map_or((0.0, 0.0), |m| (m.p1, m.p2));
    let mut rho = StateVector::zero(n)?.to_density();
    for op in c.ops() {
        match *op {
            Gate::Cz(a, b) => {
                rho.apply_cz(a, b)?;
                if p2 > 0.0 {
                    rho.depolarize(&[a, b], p2)?;
                }
            }
            _ => {
                let (q, u) = op.unitary_1q().expect("single-qubit op");
                rho.apply_1q(q, &u)?;
                if p1 > 0.0 && !op.is_prep() {
                    rho.depolarize(&[q], p1)?;
                }
            }
        }
    }
    rho.debug_validate();
    Ok(rho)
}

/// Noiseless final state of `c` as a state vector.
pub fn run_statevector(c: &Circuit) -> Result<StateVector> {
    let n = c.n_qubits();
    if n > MAX_STATEVECTOR_QUBITS {
        return Err(Error::RegisterTooLarge { n, max: MAX_STATEVECTOR_QUBITS });
    }
    let mut psi = StateVector::zero(n)?;
    for op in c.ops() {
        match *op {
            Gate::Cz(a, b) => psi.apply_cz(a, b)?,
            _ => {
                let (q, u) = op.unitary_1q().expect("single-qubit op");
                psi.apply_1q(q, &u)?;
            }
        }
    }
    Ok(psi)
}

/// Outcome distribution of `rho` measured in `meas` (basis rotations are ideal).
pub fn measure_distribution(rho: &DensityOperator, meas: &MeasSetting) -> Result<Distribution> {
    if meas.len() != rho.n_qubits() {
        return Err(Error::SizeMismatch { expected: rho.n_qubits(), found: meas.len() });
    }
    let mut r = rho.clone();
    for op in basis_change_ops(meas) {
        let (q, u) = op.unitary_1q().expect("basis change is single-qubit");
        r.apply_1q(q, &u)?;
    }
    Distribution::new(r.diagonal())
}

pub fn measure_statevector(psi: &StateVector, meas: &MeasSetting) -> Result<Distribution> {
    if meas.len() != psi.n_qubits() {
        return Err(Error::SizeMismatch { expected: psi.n_qubits(), found: meas.len() });
    }
    let mut s = psi.clone();
    for op in basis_change_ops(meas) {
        let (q, u) = op.unitary_1q().expect("basis change is single-qubit");
        s.apply_1q(q, &u)?;
    }
    Distribution::new(s.probabilities())
}
