//! Chain stitching, stabilizer witnesses and the fidelity lower bound.
//!
//! Reconstruction reads job outputs only; nothing here runs a simulation.

mod stitch;
mod tensor;
mod witness;

pub use stitch::{
    pairwise_sum, scaling_sweep, stitch_distribution, stitch_expectation, witness_averages, ScalingRow,
    MAX_STITCHED_DISTRIBUTION_QUBITS,
};
pub use tensor::{block_cluster_witness, build_block_tensors, BlockTensor, BlockTensors};
pub use witness::{
    fidelity_lower_bound, stabilizer, stabilizer_generators, witness_from_distributions, witness_terms, Parity,
    WitnessReport, WitnessTerm,
};

pub(crate) use witness::term_support;

/// Chain length for `k_cuts` cuts.
pub fn chain_qubits(k_cuts: usize) -> usize {
    3 * (k_cuts + 1)
}

#[cfg(test)]
mod tests;
