//! Exact and sampled simulation of small circuits under gate-local depolarising
//! noise with classical readout bit-flips.

mod dense;
mod frame;
mod noise;
mod sample;

pub use dense::{measure_distribution, measure_statevector, run_exact, run_statevector, MAX_DENSE_QUBITS, MAX_STATEVECTOR_QUBITS};
pub use frame::{frame_distribution, frame_expectation, stabilizer_fidelity, MAX_FRAME_DISTRIBUTION_QUBITS};
pub use noise::{NoiseModel, ReadoutRates, TABLE_I_READOUT};
pub use sample::{apply_readout_noise, expectation_from_counts, sample_counts, sample_counts_with};

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunMode {
    Exact,
    Sampled { shots: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub mode: RunMode,
    pub seed: u64,
}

impl RunConfig {
    pub fn exact(seed: u64) -> Self {
        Self { mode: RunMode::Exact, seed }
    }

    pub fn sampled(shots: u64, seed: u64) -> crate::Result<Self> {
        if shots == 0 {
            return Err(crate::Error::InvalidShots);
        }
        Ok(Self { mode: RunMode::Sampled { shots }, seed })
    }

    pub fn validate(&self) -> crate::Result<()> {
        match self.mode {
            RunMode::Sampled { shots: 0 } => Err(crate::Error::InvalidShots),
            _ => Ok(()),
        }
    }
}
