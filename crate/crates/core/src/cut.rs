//! Single-wire cut decomposition and the fixed 48-job grid for chain blocks.
//!
//! Expanding the cut qubit's reduced state in Paulis and folding the `I` and
//! `Z` terms into the two `Z`-eigenprojectors gives six measure-and-prepare
//! terms `(c_i, O_i, rho_i)` with
//! `rho^{ab} = Σ_i c_i Tr_b(rho^{ab} O_i^b) ⊗ rho_i^b`.
//! The identity is re-checked numerically before any job is planned.

use alloc::vec::Vec;
use core::time::Duration;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{build_block_subcircuit, Basis, BlockForm, Circuit, MeasSetting, StateLabel};
use crate::qstate::{gates, ComplexMatrix, CountsTable, DensityOperator, Distribution, Gate1, StateVector};
use crate::sim::{apply_readout_noise, measure_distribution, run_exact, sample_counts_with, NoiseModel, RunConfig, RunMode};
use crate::{rng, tol, Error, Result};

/// Observable measured on the outgoing cut qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CutObservable {
    Proj0,
    Proj1,
    X,
    Y,
}

impl CutObservable {
    /// Basis in which the observable is read off.
    pub fn basis(self) -> Basis {
        match self {
            CutObservable::Proj0 | CutObservable::Proj1 => Basis::Z,
            CutObservable::X => Basis::X,
            CutObservable::Y => Basis::Y,
        }
    }

    /// Value assigned to a measured bit in [`Self::basis`].
    #[inline]
    pub fn value(self, bit: usize) -> f64 {
        match (self, bit) {
            (CutObservable::Proj0, 0) | (CutObservable::Proj1, 1) => 1.0,
            (CutObservable::Proj0, _) | (CutObservable::Proj1, _) => 0.0,
            (_, 0) => 1.0,
            _ => -1.0,
        }
    }

    pub fn matrix(self) -> Gate1 {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        match self {
            CutObservable::Proj0 => [[one, zero], [zero, zero]],
            CutObservable::Proj1 => [[zero, zero], [zero, one]],
            CutObservable::X => gates::X,
            CutObservable::Y => gates::Y,
        }
    }
}

/// One measure-and-prepare term of the cut.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutTerm {
    /// 1-based position in the table.
    pub index: usize,
    pub coefficient: f64,
    pub observable: CutObservable,
    pub prepared: StateLabel,
}

pub const NUM_CUT_TERMS: usize = 6;

const TABLE: [CutTerm; NUM_CUT_TERMS] = [
    CutTerm { index: 1, coefficient: 1.0, observable: CutObservable::Proj0, prepared: StateLabel::Z0 },
    CutTerm { index: 2, coefficient: 1.0, observable: CutObservable::Proj1, prepared: StateLabel::Z1 },
    CutTerm { index: 3, coefficient: 0.5, observable: CutObservable::X, prepared: StateLabel::Xp },
    CutTerm { index: 4, coefficient: -0.5, observable: CutObservable::X, prepared: StateLabel::Xm },
    CutTerm { index: 5, coefficient: 0.5, observable: CutObservable::Y, prepared: StateLabel::Yp },
    CutTerm { index: 6, coefficient: -0.5, observable: CutObservable::Y, prepared: StateLabel::Ym },
];

pub fn decomposition_table() -> [CutTerm; NUM_CUT_TERMS] {
    TABLE
}

/// `Σ_i |c_i|`, the per-cut sampling-overhead base of this table.
pub fn coefficient_one_norm() -> f64 {
    TABLE.iter().map(|t| t.coefficient.abs()).sum()
}

/// Number of weighted cut-term combinations for `k_cuts` cuts, `6^k`.
pub fn sampling_overhead(k_cuts: u32) -> Option<u128> {
    (NUM_CUT_TERMS as u128).checked_pow(k_cuts)
}

fn label_density(label: StateLabel) -> ComplexMatrix {
    let [a, b] = label.amplitudes();
    StateVector::from_amplitudes(alloc::vec![a, b]).expect("normalised label").to_density().matrix().clone()
}

/// `Σ_i c_i Tr_b(rho (I ⊗ O_i)) ⊗ rho_i` with `b` the last qubit of `rho`.
pub fn reconstruct_through_cut(rho: &DensityOperator) -> Result<ComplexMatrix> {
    let n = rho.n_qubits();
    let keep: Vec<usize> = (0..n - 1).collect();
    let d = 1usize << n;
    let mut acc = ComplexMatrix::zeros(d)?;
    for t in TABLE {
        let obs = ComplexMatrix::from_gate(&t.observable.matrix());
        let weighted = if n == 1 {
            // Tr(rho O_i) rho_i
            let v = rho.matrix().matmul(&obs)?.trace();
            label_density(t.prepared).scale(v * t.coefficient)
        } else {
            let full_obs = ComplexMatrix::identity(d / 2)?.kron(&obs);
            let m = rho.matrix().matmul(&full_obs)?;
            let reduced = partial_trace_matrix(&m, n, &keep)?;
            reduced.kron(&label_density(t.prepared)).scale(Complex64::new(t.coefficient, 0.0))
        };
        acc = acc.add(&weighted)?;
    }
    Ok(acc)
}

/// Partial trace of an arbitrary (not necessarily physical) operator.
fn partial_trace_matrix(m: &ComplexMatrix, n: usize, keep: &[usize]) -> Result<ComplexMatrix> {
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let bit = |q: usize| 1usize << (n - 1 - q);
    let embed = |sub: usize, qs: &[usize]| -> usize {
        qs.iter().enumerate().filter(|(j, _)| sub >> (qs.len() - 1 - j) & 1 == 1).map(|(_, &q)| bit(q)).sum()
    };
    let dk = 1usize << keep.len();
    let mut data = alloc::vec![Complex64::new(0.0, 0.0); dk * dk];
    for r in 0..dk {
        for c in 0..dk {
            data[r * dk + c] = (0..1usize << traced.len())
                .map(|t| {
                    let tf = embed(t, &traced);
                    m.get(embed(r, keep) | tf, embed(c, keep) | tf)
                })
                .sum();
        }
    }
    ComplexMatrix::from_row_major(dk, data)
}

/// Largest entrywise error of the cut identity on `rho` (last qubit cut).
pub fn reconstruction_error(rho: &DensityOperator) -> Result<f64> {
    Ok(reconstruct_through_cut(rho)?.max_abs_diff(rho.matrix()))
}

/// Checks the cut identity on the six label states and on an entangled two-qubit state.
pub fn verify_decomposition() -> Result<()> {
    let mut worst = 0.0f64;
    for label in StateLabel::ALL {
        let rho = DensityOperator::new(label_density(label))?;
        worst = worst.max(reconstruction_error(&rho)?);
    }
    let mut psi = StateVector::zero(2)?;
    psi.apply_1q(0, &gates::H)?;
    psi.apply_1q(1, &StateLabel::Yp.preparation_unitary())?;
    psi.apply_cz(0, 1)?;
    worst = worst.max(reconstruction_error(&psi.to_density())?);
    let mut mixed = DensityOperator::maximally_mixed(2)?;
    mixed.apply_1q(1, &gates::H)?;
    worst = worst.max(reconstruction_error(&mixed)?);
    if worst > tol::EXACT {
        return Err(Error::NotPhysical(alloc::format!("cut identity violated by {worst:e}")));
    }
    Ok(())
}

/// Local basis pattern on a block's three chain qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LocalSetting {
    Xzx,
    Zxz,
}

impl LocalSetting {
    pub const ALL: [LocalSetting; 2] = [LocalSetting::Xzx, LocalSetting::Zxz];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn meas(self) -> MeasSetting {
        MeasSetting::alternating(3, self.first())
    }

    pub fn first(self) -> Basis {
        match self {
            LocalSetting::Xzx => Basis::X,
            LocalSetting::Zxz => Basis::Z,
        }
    }

    pub fn from_first(b: Basis) -> Option<Self> {
        match b {
            Basis::X => Some(LocalSetting::Xzx),
            Basis::Z => Some(LocalSetting::Zxz),
            Basis::Y => None,
        }
    }
}

/// One subcircuit execution of the chain grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct JobSpec {
    pub id: usize,
    pub form: BlockForm,
    pub input: StateLabel,
    pub meas: MeasSetting,
}

impl JobSpec {
    pub fn new(id: usize, form: BlockForm, input: StateLabel, meas: MeasSetting) -> Result<Self> {
        let spec = Self { id, form, input, meas };
        spec.validate()?;
        Ok(spec)
    }

    /// FourQubit: XZX or ZXZ then X, Y or Z on the cut qubit. ThreeQubit: XZX or ZXZ.
    pub fn validate(&self) -> Result<()> {
        let n = self.form.n_qubits();
        if self.meas.len() != n {
            return Err(Error::SizeMismatch { expected: n, found: self.meas.len() });
        }
        let local = MeasSetting::new(self.meas.bases()[..3].to_vec());
        if !LocalSetting::ALL.iter().any(|s| s.meas() == local) {
            return Err(Error::InvalidCircuit(alloc::format!("job {}: local setting {local} is not XZX or ZXZ", self.id)));
        }
        Ok(())
    }

    pub fn local_setting(&self) -> LocalSetting {
        LocalSetting::from_first(self.meas.basis(0)).expect("validated job")
    }

    pub fn cut_basis(&self) -> Option<Basis> {
        (self.form == BlockForm::FourQubit).then(|| self.meas.basis(3))
    }

    pub fn circuit(&self) -> Result<Circuit> {
        build_block_subcircuit(self.form, self.input, self.meas.clone())
    }
}

/// The 48-job grid: 36 FourQubit jobs (6 inputs × {XZX, ZXZ} × {X, Y, Z} on the cut
/// qubit) followed by 12 ThreeQubit jobs (6 inputs × {XZX, ZXZ}). Ids are positions.
pub fn plan_chain_jobs() -> Vec<JobSpec> {
    verify_decomposition().expect("cut decomposition self-check");
    let mut jobs = Vec::with_capacity(48);
    for input in StateLabel::ALL {
        for local in LocalSetting::ALL {
            for cut in [Basis::X, Basis::Y, Basis::Z] {
                let meas = local.meas().concat(&MeasSetting::new(alloc::vec![cut]));
                jobs.push(JobSpec { id: jobs.len(), form: BlockForm::FourQubit, input, meas });
            }
        }
    }
    for input in StateLabel::ALL {
        for local in LocalSetting::ALL {
            jobs.push(JobSpec { id: jobs.len(), form: BlockForm::ThreeQubit, input, meas: local.meas() });
        }
    }
    jobs
}

#[derive(Debug, Clone, PartialEq)]
pub enum JobPayload {
    /// Exact outcome distribution, after readout confusion when the noise model has one.
    Exact(Distribution),
    Sampled(CountsTable),
}

impl JobPayload {
    pub fn n_qubits(&self) -> usize {
        match self {
            JobPayload::Exact(d) => d.n_qubits(),
            JobPayload::Sampled(c) => c.n_qubits(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobResult {
    pub job: JobSpec,
    pub payload: JobPayload,
    pub wall_time: Duration,
}

/// Run one job. Sampled jobs draw from the stream `(run.seed, [repetition, job id])`.
pub fn execute_job(spec: &JobSpec, run: &RunConfig, noise: Option<&NoiseModel>, repetition: u64) -> Result<JobResult> {
    #[cfg(feature = "std")]
    let start = std::time::Instant::now();
    let payload = (|| {
        spec.validate()?;
        run.validate()?;
        let circuit = spec.circuit()?;
        let rho = run_exact(&circuit, noise)?;
        let dist = measure_distribution(&rho, circuit.meas())?;
        let readout = noise.and_then(|m| m.readout_for_register(circuit.n_qubits()));
        Ok(match run.mode {
            RunMode::Exact => JobPayload::Exact(match &readout {
                Some(r) => apply_readout_noise(&dist, r)?,
                None => dist,
            }),
            RunMode::Sampled { shots } => {
                let mut rng = rng::rng_for(run.seed, &[repetition, spec.id as u64]);
                JobPayload::Sampled(sample_counts_with(&dist, shots, &mut rng, readout.as_deref())?)
            }
        })
    })()
    .map_err(|e: Error| e.in_job(spec.id))?;
    #[cfg(feature = "std")]
    let wall_time = start.elapsed();
    #[cfg(not(feature = "std"))]
    let wall_time = Duration::ZERO;
    Ok(JobResult { job: spec.clone(), payload, wall_time })
}

/// Run every job of `plan`; results come back ordered by job id.
pub fn execute_jobs(plan: &[JobSpec], run: &RunConfig, noise: Option<&NoiseModel>) -> Result<Vec<JobResult>> {
    execute_jobs_repetition(plan, run, noise, 0)
}

pub fn execute_jobs_repetition(
    plan: &[JobSpec],
    run: &RunConfig,
    noise: Option<&NoiseModel>,
    repetition: u64,
) -> Result<Vec<JobResult>> {
    run.validate()?;
    #[cfg(feature = "parallel")]
    let mut results: Vec<JobResult> = {
        use rayon::prelude::*;
        plan.par_iter().map(|j| execute_job(j, run, noise, repetition)).collect::<Result<_>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let mut results: Vec<JobResult> =
        plan.iter().map(|j| execute_job(j, run, noise, repetition)).collect::<Result<_>>()?;
    results.sort_by_key(|r| r.job.id);
    Ok(results)
}
