use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::circuit::{Basis, MeasSetting};
use crate::qstate::{dist_walsh_hadamard, Pauli, PauliString};
use crate::{Error, Result};

/// Which half of the stabilizers (by 1-based index) a witness projects onto.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Odd, Parity::Even];

    /// XZXZ... for Odd, ZXZX... for Even.
    pub fn meas(self, n: usize) -> MeasSetting {
        MeasSetting::alternating(n, self.first_basis())
    }

    pub fn first_basis(self) -> Basis {
        match self {
            Parity::Odd => Basis::X,
            Parity::Even => Basis::Z,
        }
    }

    /// 0-based centres of this parity's stabilizers.
    pub fn centres(self, n: usize) -> impl Iterator<Item = usize> {
        let start = match self {
            Parity::Odd => 0,
            Parity::Even => 1,
        };
        (start..n).step_by(2)
    }

    pub fn n_stabilizers(self, n: usize) -> usize {
        self.centres(n).count()
    }
}

/// `s_i` on `n` qubits, 1-based: `X` at `i`, `Z` on its chain neighbours.
pub fn stabilizer(n: usize, i: usize) -> Result<PauliString> {
    if i == 0 || i > n {
        return Err(Error::QubitOutOfRange { qubit: i, n });
    }
    let mut letters = vec![Pauli::I; n];
    letters[i - 1] = Pauli::X;
    if i > 1 {
        letters[i - 2] = Pauli::Z;
    }
    if i < n {
        letters[i] = Pauli::Z;
    }
    PauliString::new(letters, false)
}

pub fn stabilizer_generators(n: usize) -> Result<Vec<PauliString>> {
    (1..=n).map(|i| stabilizer(n, i)).collect()
}

/// Product of a subset of same-parity stabilizers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    /// 1-based stabilizer indices, ascending.
    pub subset: Vec<usize>,
    pub pauli: PauliString,
    pub parity: Parity,
}

impl WitnessTerm {
    /// Support as a bitmask, qubit `q` at bit `n - 1 - q`.
    pub fn support_mask(&self) -> u64 {
        let n = self.pauli.len();
        self.pauli.support().fold(0, |m, q| m | 1u64 << (n - 1 - q))
    }
}

/// All `2^m` subset products, ordered by the subset bitmask (bit `j` selects the
/// `j`-th stabilizer of the parity). Products are formed by exact Pauli multiplication.
pub fn witness_terms(n: usize, parity: Parity) -> Result<Vec<WitnessTerm>> {
    let gens: Vec<(usize, PauliString)> =
        parity.centres(n).map(|c| Ok((c + 1, stabilizer(n, c + 1)?))).collect::<Result<_>>()?;
    let m = gens.len();
    if m >= 32 {
        return Err(Error::RegisterTooLarge { n, max: 63 });
    }
    (0..1usize << m)
        .map(|bits| {
            let mut pauli = PauliString::identity(n)?;
            let mut subset = Vec::new();
            for (j, (i, s)) in gens.iter().enumerate() {
                if bits >> j & 1 == 1 {
                    pauli = pauli.mul(s)?;
                    subset.push(*i);
                }
            }
            Ok(WitnessTerm { subset, pauli, parity })
        })
        .collect()
}

/// Support mask of the subset product selected by `bits`, without building the string.
/// X sits on the chosen centres, Z wherever an odd number of chosen centres are adjacent.
pub(crate) fn term_support(n: usize, parity: Parity, bits: u64) -> u64 {
    let bit = |g: usize| 1u64 << (n - 1 - g);
    let (mut x, mut z) = (0u64, 0u64);
    for (j, g) in parity.centres(n).enumerate() {
        if bits >> j & 1 == 1 {
            x |= bit(g);
            if g > 0 {
                z ^= bit(g - 1);
            }
            if g + 1 < n {
                z ^= bit(g + 1);
            }
        }
    }
    x | z
}

/// `Tr(rho |LC><LC|) >= <ODD> + <EVEN> - 1`.
pub fn fidelity_lower_bound(odd_avg: f64, even_avg: f64) -> f64 {
    odd_avg + even_avg - 1.0
}

/// Per-term expectations for both witnesses, in `witness_terms` order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub odd: Vec<f64>,
    pub even: Vec<f64>,
    pub odd_avg: f64,
    pub even_avg: f64,
    pub bound: f64,
}

impl WitnessReport {
    pub(crate) fn from_terms(n: usize, odd: Vec<f64>, even: Vec<f64>) -> Self {
        let odd_avg = super::pairwise_sum(&odd) / odd.len() as f64;
        let even_avg = super::pairwise_sum(&even) / even.len() as f64;
        Self { n, odd, even, odd_avg, even_avg, bound: fidelity_lower_bound(odd_avg, even_avg) }
    }

    pub fn terms(&self, parity: Parity) -> &[f64] {
        match parity {
            Parity::Odd => &self.odd,
            Parity::Even => &self.even,
        }
    }
}

/// Witness expectations from full-register outcome weights measured in the
/// XZXZ... (`odd`) and ZXZX... (`even`) settings. Each term is a parity of the
/// outcome bits on its support, so one Walsh-Hadamard transform serves all terms.
pub fn witness_from_distributions(n: usize, odd: &[f64], even: &[f64]) -> Result<WitnessReport> {
    if n > 30 {
        return Err(Error::RegisterTooLarge { n, max: 30 });
    }
    let mut values = [Vec::new(), Vec::new()];
    for (slot, (parity, w)) in values.iter_mut().zip([(Parity::Odd, odd), (Parity::Even, even)]) {
        if w.len() != 1usize << n {
            return Err(Error::SizeMismatch { expected: n, found: w.len().trailing_zeros() as usize });
        }
        let mut h = w.to_vec();
        dist_walsh_hadamard(&mut h);
        let m = parity.n_stabilizers(n);
        *slot = (0..1u64 << m).map(|bits| h[term_support(n, parity, bits) as usize]).collect();
    }
    let [o, e] = values;
    Ok(WitnessReport::from_terms(n, o, e))
}
