use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Probability of reading back the prepared `|0>` (`f00`) and `|1>` (`f11`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReadoutRates {
    pub f00: f64,
    pub f11: f64,
}

impl ReadoutRates {
    pub const PERFECT: ReadoutRates = ReadoutRates { f00: 1.0, f11: 1.0 };

    pub fn validate(&self) -> Result<()> {
        for p in [self.f00, self.f11] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidProbability(p));
            }
        }
        Ok(())
    }
}

/// Readout fidelities of the four chip qubits (Q3..Q6) used for the blocks.
pub const TABLE_I_READOUT: [ReadoutRates; 4] = [
    ReadoutRates { f00: 0.950, f11: 0.909 },
    ReadoutRates { f00: 0.943, f11: 0.910 },
    ReadoutRates { f00: 0.969, f11: 0.901 },
    ReadoutRates { f00: 0.922, f11: 0.887 },
];

/// Gate-local depolarising noise plus per-qubit readout confusion.
///
/// `p1` follows every single-qubit gate and `p2` every CZ. State preparation
/// labels and the terminal basis rotations are noiseless.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    /// Per physical qubit; empty means perfect readout.
    #[serde(default)]
    pub readout: Vec<ReadoutRates>,
}

impl NoiseModel {
    pub fn new(p1: f64, p2: f64, readout: Vec<ReadoutRates>) -> Result<Self> {
        let m = Self { p1, p2, readout };
        m.validate()?;
        Ok(m)
    }

    pub fn noiseless() -> Self {
        Self { p1: 0.0, p2: 0.0, readout: Vec::new() }
    }

    /// Depolarising strengths matched to 99.93% single-qubit and 98.5% CZ average
    /// gate fidelity, readout from the four block qubits.
    pub fn calibrated_default() -> Self {
        Self {
            p1: depolarizing_for_average_fidelity(0.9993, 1),
            p2: depolarizing_for_average_fidelity(0.985, 2),
            readout: TABLE_I_READOUT.to_vec(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for p in [self.p1, self.p2] {
            if !(0.0..=1.0).contains(&p) || p.is_nan() {
                return Err(Error::InvalidProbability(p));
            }
        }
        self.readout.iter().try_for_each(ReadoutRates::validate)
    }

    pub fn has_gate_noise(&self) -> bool {
        self.p1 > 0.0 || self.p2 > 0.0
    }

    /// Readout rates for an `n`-qubit register, or `None` for perfect readout.
    ///
    /// A register no larger than the configured list uses its last `n` entries,
    /// so a 3-qubit block sits on the last three of the four block qubits. A
    /// larger register cycles through the list.
    pub fn readout_for_register(&self, n: usize) -> Option<Vec<ReadoutRates>> {
        let len = self.readout.len();
        if len == 0 || self.readout.iter().all(|r| *r == ReadoutRates::PERFECT) {
            return None;
        }
        Some(if n <= len { self.readout[len - n..].to_vec() } else { (0..n).map(|q| self.readout[q % len]).collect() })
    }
}

/// Depolarising probability `p` whose `k`-qubit channel has average gate fidelity `f`:
/// `f = 1 - p (d - 1)/d` with `d = 2^k`.
pub fn depolarizing_for_average_fidelity(f: f64, k: u32) -> f64 {
    let d = f64::from(1u32 << k);
    (1.0 - f) * d / (d - 1.0)
}
