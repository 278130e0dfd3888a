use alloc::vec;
use alloc::vec::Vec;

use crate::circuit::{Basis, BlockForm, StateLabel};
use crate::cut::{decomposition_table, plan_chain_jobs, JobPayload, JobResult, JobSpec, LocalSetting, NUM_CUT_TERMS};
use crate::mitigation::Mitigator;
use crate::qstate::{dist_walsh_hadamard, QuasiDistribution};
use crate::{Error, Result};

use super::{witness_from_distributions, WitnessReport};

const N_INPUTS: usize = StateLabel::ALL.len();
const N_SETTINGS: usize = LocalSetting::ALL.len();

/// Per-block data for chain contraction.
///
/// For every input label, local setting and (FourQubit only) cut term, `outcomes`
/// holds weights over the eight local outcomes with the cut observable already
/// folded in, and `values[mask]` is the expectation of the local parity on `mask`
/// (local qubit `q` at bit `2 - q`) times the cut observable.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockTensor {
    form: BlockForm,
    outcomes: Vec<[f64; 8]>,
    values: Vec<[f64; 8]>,
}

impl BlockTensor {
    fn slots(form: BlockForm) -> usize {
        match form {
            BlockForm::FourQubit => N_INPUTS * N_SETTINGS * NUM_CUT_TERMS,
            BlockForm::ThreeQubit => N_INPUTS * N_SETTINGS,
        }
    }

    fn slot(&self, input: StateLabel, setting: LocalSetting, term: Option<usize>) -> usize {
        let base = input.index() * N_SETTINGS + setting.index();
        match (self.form, term) {
            (BlockForm::FourQubit, Some(t)) => {
                assert!(t < NUM_CUT_TERMS, "cut term {t} out of range");
                base * NUM_CUT_TERMS + t
            }
            (BlockForm::ThreeQubit, None) => base,
            (form, t) => panic!("{form:?} block indexed with cut term {t:?}"),
        }
    }

    /// Slot order: input label, then local setting, then cut term (FourQubit).
    pub fn from_outcomes(form: BlockForm, outcomes: Vec<[f64; 8]>) -> Result<Self> {
        if outcomes.len() != Self::slots(form) {
            return Err(Error::SizeMismatch { expected: Self::slots(form), found: outcomes.len() });
        }
        let values = outcomes
            .iter()
            .map(|o| {
                let mut v = *o;
                dist_walsh_hadamard(&mut v);
                v
            })
            .collect();
        Ok(Self { form, outcomes, values })
    }

    /// Arbitrary values, e.g. for exercising the contraction on unphysical data.
    pub fn from_values(form: BlockForm, values: Vec<[f64; 8]>) -> Result<Self> {
        if values.len() != Self::slots(form) {
            return Err(Error::SizeMismatch { expected: Self::slots(form), found: values.len() });
        }
        let outcomes = values
            .iter()
            .map(|v| {
                let mut o = *v;
                dist_walsh_hadamard(&mut o);
                o.iter_mut().for_each(|x| *x /= 8.0);
                o
            })
            .collect();
        Ok(Self { form, outcomes, values })
    }

    pub fn form(&self) -> BlockForm {
        self.form
    }

    /// `term` is a cut-term index for FourQubit blocks and `None` for ThreeQubit ones.
    pub fn value(&self, input: StateLabel, setting: LocalSetting, term: Option<usize>, mask: usize) -> f64 {
        self.values[self.slot(input, setting, term)][mask]
    }

    pub fn outcome_weights(&self, input: StateLabel, setting: LocalSetting, term: Option<usize>) -> &[f64; 8] {
        &self.outcomes[self.slot(input, setting, term)]
    }

    pub fn max_abs_value(&self) -> f64 {
        self.values.iter().flatten().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockTensors {
    pub four: BlockTensor,
    pub three: BlockTensor,
}

impl BlockTensors {
    pub fn new(four: BlockTensor, three: BlockTensor) -> Result<Self> {
        if four.form != BlockForm::FourQubit || three.form != BlockForm::ThreeQubit {
            return Err(Error::InvalidRegister("block tensors must be (FourQubit, ThreeQubit)".into()));
        }
        Ok(Self { four, three })
    }
}

fn mitigated(result: &JobResult, mitigator: &Mitigator) -> Result<QuasiDistribution> {
    match &result.payload {
        JobPayload::Exact(d) => mitigator.mitigate(d),
        JobPayload::Sampled(c) => mitigator.mitigate(c),
    }
    .map_err(|e| e.in_job(result.job.id))
}

/// Index results by plan position, checking every job of the grid is present and
/// matches the planned circuit.
fn by_plan<'a>(results: &'a [JobResult], plan: &[JobSpec]) -> Result<Vec<&'a JobResult>> {
    let mut slots: Vec<Option<&JobResult>> = vec![None; plan.len()];
    for r in results {
        let spec = plan.get(r.job.id).ok_or(Error::MissingJob(r.job.id))?;
        if *spec != r.job {
            return Err(Error::InvalidCircuit(alloc::format!("job {} does not match the plan", r.job.id)));
        }
        let expected = spec.form.n_qubits();
        if r.payload.n_qubits() != expected {
            return Err(Error::SizeMismatch { expected, found: r.payload.n_qubits() }.in_job(r.job.id));
        }
        slots[r.job.id] = Some(r);
    }
    slots.into_iter().enumerate().map(|(id, s)| s.ok_or(Error::MissingJob(id))).collect()
}

/// Mitigate every job of the 48-job grid and fold the cut observables into block tensors.
/// Proj0/Proj1 entries come from the Z-basis job's cut bit, X and Y entries from
/// the sign of the cut bit in the matching basis.
pub fn build_block_tensors(results: &[JobResult], mitigator: &Mitigator) -> Result<BlockTensors> {
    let plan = plan_chain_jobs();
    let jobs = by_plan(results, &plan)?;
    let table = decomposition_table();
    let mut four = vec![[0.0; 8]; BlockTensor::slots(BlockForm::FourQubit)];
    let mut three = vec![[0.0; 8]; BlockTensor::slots(BlockForm::ThreeQubit)];
    for r in jobs {
        let q = mitigated(r, mitigator)?;
        let w = q.weights();
        let base = r.job.input.index() * N_SETTINGS + r.job.local_setting().index();
        match r.job.cut_basis() {
            None => three[base].copy_from_slice(w),
            Some(basis) => {
                for (j, t) in table.iter().enumerate().filter(|(_, t)| t.observable.basis() == basis) {
                    let slot = &mut four[base * NUM_CUT_TERMS + j];
                    for (o, x) in slot.iter_mut().enumerate() {
                        *x = w[2 * o] * t.observable.value(0) + w[2 * o + 1] * t.observable.value(1);
                    }
                }
            }
        }
    }
    BlockTensors::new(
        BlockTensor::from_outcomes(BlockForm::FourQubit, four)?,
        BlockTensor::from_outcomes(BlockForm::ThreeQubit, three)?,
    )
}

/// Witness report of the cluster state a block prepares from input `|+>`: four
/// qubits from the FourQubit block (XZXZ is the XZX job with a Z cut, ZXZX the ZXZ
/// job with an X cut) or three from the ThreeQubit block.
pub fn block_cluster_witness(results: &[JobResult], mitigator: &Mitigator, form: BlockForm) -> Result<WitnessReport> {
    let plan = plan_chain_jobs();
    let jobs = by_plan(results, &plan)?;
    let find = |setting: LocalSetting, cut: Option<Basis>| -> Result<QuasiDistribution> {
        let r = jobs
            .iter()
            .find(|r| {
                r.job.form == form
                    && r.job.input == StateLabel::Xp
                    && r.job.local_setting() == setting
                    && r.job.cut_basis() == cut
            })
            .expect("plan contains every block combination");
        mitigated(r, mitigator)
    };
    let (odd, even) = match form {
        BlockForm::FourQubit => (find(LocalSetting::Xzx, Some(Basis::Z))?, find(LocalSetting::Zxz, Some(Basis::X))?),
        BlockForm::ThreeQubit => (find(LocalSetting::Xzx, None)?, find(LocalSetting::Zxz, None)?),
    };
    witness_from_distributions(form.n_qubits(), odd.weights(), even.weights())
}
