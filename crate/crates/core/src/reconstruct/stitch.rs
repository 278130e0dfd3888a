use alloc::vec;
use alloc::vec::Vec;
use core::time::Duration;

use crate::circuit::StateLabel;
use crate::cut::{decomposition_table, LocalSetting, NUM_CUT_TERMS};
use crate::qstate::QuasiDistribution;
use crate::{Error, Result};

use super::{chain_qubits, term_support, BlockTensors, Parity, WitnessReport, WitnessTerm};

/// Stitched distributions hold `2^n` weights.
pub const MAX_STITCHED_DISTRIBUTION_QUBITS: usize = 24;

/// Largest stabilizer count per parity for exhaustive witness averages.
const MAX_WITNESS_STABILIZERS: usize = 24;

type Vec6 = [f64; NUM_CUT_TERMS];

/// Boundary vectors and transfer matrices for every (local setting, local mask),
/// with the cut coefficients folded in.
struct Transfer {
    left: [[Vec6; 8]; 2],
    mid: [[[Vec6; NUM_CUT_TERMS]; 8]; 2],
    right: [[Vec6; 8]; 2],
}

impl Transfer {
    fn new(t: &BlockTensors) -> Self {
        let table = decomposition_table();
        let label = |i: usize| table[i].prepared;
        let mut tr = Transfer {
            left: [[[0.0; 6]; 8]; 2],
            mid: [[[[0.0; 6]; 6]; 8]; 2],
            right: [[[0.0; 6]; 8]; 2],
        };
        for s in LocalSetting::ALL {
            for m in 0..8 {
                for j in 0..NUM_CUT_TERMS {
                    let c = table[j].coefficient;
                    tr.left[s.index()][m][j] = c * t.four.value(StateLabel::Xp, s, Some(j), m);
                    for i in 0..NUM_CUT_TERMS {
                        tr.mid[s.index()][m][i][j] = c * t.four.value(label(i), s, Some(j), m);
                    }
                    tr.right[s.index()][m][j] = t.three.value(label(j), s, None, m);
                }
            }
        }
        tr
    }

    /// Left boundary, `k - 1` transfer steps, right boundary.
    fn contract(&self, parity: Parity, support: u64, k: usize) -> f64 {
        let n = chain_qubits(k);
        let pattern = |b: usize| ((support >> (n - 3 - 3 * b)) & 7) as usize;
        let mut v = self.left[block_setting(parity, 0).index()][pattern(0)];
        for b in 1..k {
            let m = &self.mid[block_setting(parity, b).index()][pattern(b)];
            let mut next = [0.0; NUM_CUT_TERMS];
            for (i, vi) in v.iter().enumerate() {
                for (nj, mij) in next.iter_mut().zip(&m[i]) {
                    *nj += vi * mij;
                }
            }
            v = next;
        }
        let r = &self.right[block_setting(parity, k).index()][pattern(k)];
        v.iter().zip(r).map(|(a, b)| a * b).sum()
    }
}

/// Local setting of block `b` under the global XZXZ... (Odd) or ZXZX... (Even) setting.
pub(crate) fn block_setting(parity: Parity, b: usize) -> LocalSetting {
    match (parity, b % 2) {
        (Parity::Odd, 0) | (Parity::Even, 1) => LocalSetting::Xzx,
        _ => LocalSetting::Zxz,
    }
}

fn check_cuts(k_cuts: usize) -> Result<usize> {
    if k_cuts == 0 {
        return Err(Error::InvalidRegister("stitching needs at least one cut".into()));
    }
    Ok(chain_qubits(k_cuts))
}

/// Expectation of `term` on the `3(k_cuts + 1)`-qubit chain: the sum over all `6^k`
/// cut-term assignments of coefficient products times block values, with the first
/// block at input `|+>` and the FourQubit tensor reused for every middle block.
/// Evaluated as a transfer-matrix chain in `O(36 k)`.
pub fn stitch_expectation(term: &WitnessTerm, tensors: &BlockTensors, k_cuts: usize) -> Result<f64> {
    let n = check_cuts(k_cuts)?;
    if term.pauli.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: term.pauli.len() });
    }
    let meas = term.parity.meas(n);
    if let Some(q) = term.pauli.support().find(|&q| term.pauli.letter(q) != meas.basis(q).pauli()) {
        return Err(Error::BasisIncompatible { qubit: q });
    }
    Ok(term.pauli.phase() * Transfer::new(tensors).contract(term.parity, term.support_mask(), k_cuts))
}

/// Sum in a fixed binary-tree order, independent of how the inputs were produced.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 8 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Every ODD and EVEN term on the chain, exhaustively.
pub fn witness_averages(tensors: &BlockTensors, k_cuts: usize) -> Result<WitnessReport> {
    let n = check_cuts(k_cuts)?;
    if Parity::Odd.n_stabilizers(n) > MAX_WITNESS_STABILIZERS {
        return Err(Error::RegisterTooLarge { n, max: 2 * MAX_WITNESS_STABILIZERS });
    }
    let tr = Transfer::new(tensors);
    let eval = |parity: Parity| -> Vec<f64> {
        let count = 1u64 << parity.n_stabilizers(n);
        let f = |bits: u64| tr.contract(parity, term_support(n, parity, bits), k_cuts);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..count).map(f).collect()
        }
    };
    Ok(WitnessReport::from_terms(n, eval(Parity::Odd), eval(Parity::Even)))
}

/// Full-register quasi-distribution in the parity's global setting, built from the
/// blocks' outcome weights with the same chain sum as `stitch_expectation`.
pub fn stitch_distribution(tensors: &BlockTensors, k_cuts: usize, parity: Parity) -> Result<QuasiDistribution> {
    let n = check_cuts(k_cuts)?;
    if n > MAX_STITCHED_DISTRIBUTION_QUBITS {
        return Err(Error::RegisterTooLarge { n, max: MAX_STITCHED_DISTRIBUTION_QUBITS });
    }
    let table = decomposition_table();
    // v[prefix * 6 + j]: weight of the outcome prefix with cut term j open
    let s0 = block_setting(parity, 0);
    let mut v = vec![0.0; 8 * NUM_CUT_TERMS];
    for (j, t) in table.iter().enumerate() {
        for (o, w) in tensors.four.outcome_weights(StateLabel::Xp, s0, Some(j)).iter().enumerate() {
            v[o * NUM_CUT_TERMS + j] = t.coefficient * w;
        }
    }
    for b in 1..k_cuts {
        let s = block_setting(parity, b);
        let prefixes = v.len() / NUM_CUT_TERMS;
        let mut next = vec![0.0; prefixes * 8 * NUM_CUT_TERMS];
        for p in 0..prefixes {
            for (i, ti) in table.iter().enumerate() {
                let vi = v[p * NUM_CUT_TERMS + i];
                if vi == 0.0 {
                    continue;
                }
                for (j, tj) in table.iter().enumerate() {
                    let w = tensors.four.outcome_weights(ti.prepared, s, Some(j));
                    for (o, wo) in w.iter().enumerate() {
                        next[(p * 8 + o) * NUM_CUT_TERMS + j] += vi * tj.coefficient * wo;
                    }
                }
            }
        }
        v = next;
    }
    let s = block_setting(parity, k_cuts);
    let prefixes = v.len() / NUM_CUT_TERMS;
    let mut out = vec![0.0; prefixes * 8];
    for p in 0..prefixes {
        for (i, ti) in table.iter().enumerate() {
            let vi = v[p * NUM_CUT_TERMS + i];
            for (o, wo) in tensors.three.outcome_weights(ti.prepared, s, None).iter().enumerate() {
                out[p * 8 + o] += vi * wo;
            }
        }
    }
    debug_assert_eq!(out.len(), 1 << n);
    QuasiDistribution::new(out)
}

/// One chain length of the scaling study.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingRow {
    pub n: usize,
    pub k_cuts: usize,
    /// ODD plus EVEN terms evaluated.
    pub n_terms: u64,
    pub odd_avg: f64,
    pub even_avg: f64,
    pub bound: f64,
    pub postprocess_time: Duration,
}

/// Rows for `n = 6 + 3k`, `k = 1..=k_max`, all from the same tensors. Each row's
/// time covers its whole witness evaluation.
pub fn scaling_sweep(tensors: &BlockTensors, k_max: usize) -> Result<Vec<ScalingRow>> {
    if k_max == 0 {
        return Err(Error::InvalidRegister("k_max must be at least 1".into()));
    }
    (1..=k_max)
        .map(|k| {
            let k_cuts = k + 1;
            #[cfg(feature = "std")]
            let start = std::time::Instant::now();
            let r = witness_averages(tensors, k_cuts)?;
            #[cfg(feature = "std")]
            let postprocess_time = start.elapsed();
            #[cfg(not(feature = "std"))]
            let postprocess_time = Duration::ZERO;
            Ok(ScalingRow {
                n: r.n,
                k_cuts,
                n_terms: (r.odd.len() + r.even.len()) as u64,
                odd_avg: r.odd_avg,
                even_avg: r.even_avg,
                bound: r.bound,
                postprocess_time,
            })
        })
        .collect()
}
