//! The five batch commands. Each writes its outputs plus a `manifest-<command>.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clustercut_core::circuit::{build_linear_cluster, BlockForm, MeasSetting};
use clustercut_core::cut::{execute_jobs_repetition, plan_chain_jobs};
use clustercut_core::mitigation::{MitigationMode, Mitigator, TransitionMatrix};
use clustercut_core::qstate::{CountsTable, Distribution};
use clustercut_core::reconstruct::{
    block_cluster_witness, build_block_tensors, chain_qubits, scaling_sweep, stabilizer_generators,
    stitch_distribution, witness_averages, witness_from_distributions, Parity,
};
use clustercut_core::rng::rng_for;
use clustercut_core::sim::{
    apply_readout_noise, frame_distribution, measure_statevector, run_statevector, sample_counts_with,
    stabilizer_fidelity, NoiseModel, MAX_FRAME_DISTRIBUTION_QUBITS,
};
use serde::{Deserialize, Serialize};

use crate::bundle::{self, write_json, write_text};
use crate::config::{ExperimentConfig, Mode};
use crate::error::{CliError, CliResult};
use crate::report::{aggregate_scaling, mean_std, scaling_csv, ScalingStat, TermsReport};

/// Chain length reported term by term.
pub const REPORT_CUTS: usize = 3;

/// Above this size the direct command skips the exact group-average fidelity.
const MAX_TRUE_FIDELITY_QUBITS: usize = 16;

// Random-stream tags kept disjoint from the `[repetition, job id]` job streams.
const CALIBRATION_STREAM: u64 = u64::MAX;
const DIRECT_STREAM: u64 = u64::MAX - 1;

/// Registers that carry a transition matrix.
const REGISTERS: [usize; 2] = [3, 4];

fn create_dir(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

/// Prepare each basis state of an `n`-qubit register and read it out through the
/// configured confusion.
pub fn calibration_counts(noise: &NoiseModel, n: usize, shots: u64, seed: u64) -> CliResult<Vec<CountsTable>> {
    let rates = noise.readout_for_register(n);
    (0..1usize << n)
        .map(|j| {
            let mut e = vec![0.0; 1 << n];
            e[j] = 1.0;
            let mut rng = rng_for(seed, &[CALIBRATION_STREAM, n as u64, j as u64]);
            Ok(sample_counts_with(&Distribution::new(e)?, shots, &mut rng, rates.as_deref())?)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunJobsOutput {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
}

pub fn cmd_run_jobs(cfg: &ExperimentConfig) -> CliResult<RunJobsOutput> {
    cfg.validate()?;
    let dir = cfg.out.clone();
    create_dir(&dir)?;
    let noise = cfg.noise()?;
    let run = cfg.run_config();
    let plan = plan_chain_jobs();
    let mut files = vec![dir.join("config.json"), bundle::plan_path(&dir)];
    write_text(&files[0], &cfg.to_json())?;
    write_json(&files[1], &plan)?;
    for rep in 0..cfg.effective_repetitions() {
        let results = execute_jobs_repetition(&plan, &run, Some(&noise), rep as u64)?;
        files.extend(bundle::write_results(&dir, rep, &results)?);
    }
    if cfg.mode == Mode::Sampled && noise.readout_for_register(4).is_some() {
        for n in REGISTERS {
            files.extend(bundle::write_calibration(&dir, &calibration_counts(&noise, n, cfg.shots, cfg.seed)?)?);
        }
    }
    files.push(bundle::write_manifest(&dir, "run-jobs", cfg, &files)?);
    Ok(RunJobsOutput { dir, files })
}

/// Writes the calibration bundle and the transition matrices estimated from it.
pub fn cmd_calibrate(cfg: &ExperimentConfig) -> CliResult<RunJobsOutput> {
    cfg.validate()?;
    if cfg.shots == 0 {
        return Err(CliError::Validation("calibration needs shots > 0".into()));
    }
    let dir = cfg.out.clone();
    create_dir(&dir)?;
    let noise = cfg.noise()?;
    let mut files = Vec::new();
    for n in REGISTERS {
        let tables = calibration_counts(&noise, n, cfg.shots, cfg.seed)?;
        files.extend(bundle::write_calibration(&dir, &tables)?);
        let full = TransitionMatrix::full_calibration(&tables)?;
        let p = dir.join(format!("tmem_n{n}_full_calibration.json"));
        write_json(&p, &full.export())?;
        files.push(p);
        if let Some(rates) = noise.readout_for_register(n) {
            let p = dir.join(format!("tmem_n{n}_tensor_product.json"));
            write_json(&p, &TransitionMatrix::tensor_product(&rates)?.export())?;
            files.push(p);
        }
    }
    files.push(bundle::write_manifest(&dir, "calibrate", cfg, &files)?);
    Ok(RunJobsOutput { dir, files })
}

/// How each register was mitigated, for the report.
pub type MitigationSummary = BTreeMap<String, String>;

pub fn build_mitigator(cfg: &ExperimentConfig, bundle_dir: &Path) -> CliResult<(Mitigator, MitigationSummary)> {
    let noise = cfg.noise()?;
    let mut m = Mitigator::new(cfg.project);
    let mut summary = MitigationSummary::new();
    for n in REGISTERS {
        let calib = bundle::read_calibration(bundle_dir, n)?;
        let label = match cfg.mitigation_mode(calib.is_some()) {
            None => "none",
            Some(MitigationMode::TensorProduct) => match noise.readout_for_register(n) {
                Some(rates) => {
                    m = m.with_matrix(TransitionMatrix::tensor_product(&rates)?);
                    "tensor_product"
                }
                None => "identity",
            },
            Some(MitigationMode::FullCalibration) => {
                let calib = calib.ok_or_else(|| {
                    CliError::IncompleteBundle(vec![format!("full_calibration requested but {} has no calibration/n{n}", bundle_dir.display())])
                })?;
                m = m.with_matrix(TransitionMatrix::full_calibration(&calib)?);
                "full_calibration"
            }
        };
        summary.insert(format!("n{n}"), label.into());
    }
    summary.insert("project".into(), cfg.project.to_string());
    Ok((m, summary))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundStat {
    pub bound: f64,
    pub bound_stddev: f64,
}

impl BoundStat {
    fn from_samples(v: &[f64]) -> Self {
        let (bound, bound_stddev) = mean_std(v);
        Self { bound, bound_stddev }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructSummary {
    pub repetitions: usize,
    pub mitigation: MitigationSummary,
    /// Four- and three-qubit cluster states prepared by the blocks with input `|+>`.
    pub block_lc4: BoundStat,
    pub block_lc3: BoundStat,
    pub stitched_n12: BoundStat,
}

/// Stitched full-register weights in the XZXZ... and ZXZX... settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionsFile {
    pub n: usize,
    pub odd_meas: MeasSetting,
    pub even_meas: MeasSetting,
    pub odd: Vec<f64>,
    pub even: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct ReconstructOutput {
    pub terms: TermsReport,
    pub scaling: Vec<ScalingStat>,
    pub summary: ReconstructSummary,
    pub distributions: DistributionsFile,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct ScalingOutput {
    pub scaling: Vec<ScalingStat>,
    pub files: Vec<PathBuf>,
}

struct Loaded {
    reps: Vec<Vec<clustercut_core::cut::JobResult>>,
    mitigator: Mitigator,
    mitigation: MitigationSummary,
}

fn load_bundle(cfg: &ExperimentConfig, bundle_dir: &Path, k_max: usize) -> CliResult<Loaded> {
    cfg.validate()?;
    if k_max == 0 {
        return Err(CliError::Validation("k_max must be at least 1".into()));
    }
    let (_, reps) = bundle::read_results(bundle_dir)?;
    let (mitigator, mitigation) = build_mitigator(cfg, bundle_dir)?;
    Ok(Loaded { reps, mitigator, mitigation })
}

fn write_scaling(out: &Path, sweeps: &[Vec<clustercut_core::reconstruct::ScalingRow>]) -> CliResult<(Vec<ScalingStat>, PathBuf)> {
    create_dir(out)?;
    let scaling = aggregate_scaling(sweeps);
    let p = out.join("scaling.csv");
    write_text(&p, &scaling_csv(&scaling))?;
    Ok((scaling, p))
}

/// Scaling sweep only: `scaling.csv` for `n = 9, 12, ..., 6 + 3 k_max`.
pub fn cmd_scaling(cfg: &ExperimentConfig, bundle_dir: &Path, out: &Path, k_max: usize) -> CliResult<ScalingOutput> {
    let l = load_bundle(cfg, bundle_dir, k_max)?;
    let sweeps = l
        .reps
        .iter()
        .map(|results| Ok(scaling_sweep(&build_block_tensors(results, &l.mitigator)?, k_max)?))
        .collect::<CliResult<Vec<_>>>()?;
    let (scaling, csv) = write_scaling(out, &sweeps)?;
    let mut files = vec![csv];
    files.push(bundle::write_manifest(out, "scaling", cfg, &files)?);
    Ok(ScalingOutput { scaling, files })
}

/// Reads a bundle and writes `terms_n12.json`, `scaling.csv`, `summary.json` and
/// `stitched_distributions_n12.json` into `out`. Nothing is simulated.
pub fn cmd_reconstruct(cfg: &ExperimentConfig, bundle_dir: &Path, out: &Path, k_max: usize) -> CliResult<ReconstructOutput> {
    let l = load_bundle(cfg, bundle_dir, k_max)?;
    let (mut witnesses, mut sweeps, mut lc4, mut lc3) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut distributions = None;
    for results in &l.reps {
        let tensors = build_block_tensors(results, &l.mitigator)?;
        sweeps.push(scaling_sweep(&tensors, k_max)?);
        witnesses.push(witness_averages(&tensors, REPORT_CUTS)?);
        lc4.push(block_cluster_witness(results, &l.mitigator, BlockForm::FourQubit)?.bound);
        lc3.push(block_cluster_witness(results, &l.mitigator, BlockForm::ThreeQubit)?.bound);
        if distributions.is_none() {
            let n = chain_qubits(REPORT_CUTS);
            distributions = Some(DistributionsFile {
                n,
                odd_meas: Parity::Odd.meas(n),
                even_meas: Parity::Even.meas(n),
                odd: stitch_distribution(&tensors, REPORT_CUTS, Parity::Odd)?.weights().to_vec(),
                even: stitch_distribution(&tensors, REPORT_CUTS, Parity::Even)?.weights().to_vec(),
            });
        }
    }
    let (scaling, csv) = write_scaling(out, &sweeps)?;
    let terms = TermsReport::aggregate(&witnesses)?;
    let summary = ReconstructSummary {
        repetitions: l.reps.len(),
        mitigation: l.mitigation,
        block_lc4: BoundStat::from_samples(&lc4),
        block_lc3: BoundStat::from_samples(&lc3),
        stitched_n12: BoundStat { bound: terms.bound, bound_stddev: terms.bound_stddev },
    };
    let distributions = distributions.expect("at least one repetition");
    let mut files = vec![csv];
    for (name, value) in [
        ("terms_n12.json", serde_json::to_value(&terms)),
        ("summary.json", serde_json::to_value(&summary)),
        ("stitched_distributions_n12.json", serde_json::to_value(&distributions)),
    ] {
        let p = out.join(name);
        write_json(&p, &value.expect("serialisable"))?;
        files.push(p);
    }
    files.push(bundle::write_manifest(out, "reconstruct", cfg, &files)?);
    Ok(ReconstructOutput { terms, scaling, summary, distributions, files })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectReport {
    pub terms: TermsReport,
    pub mitigation: MitigationSummary,
    /// `<LC|rho|LC>` before readout, when `n` is small enough for the group average.
    pub true_fidelity: Option<f64>,
    pub distributions: DistributionsFile,
}

#[derive(Debug, Clone)]
pub struct DirectOutput {
    pub report: DirectReport,
    pub files: Vec<PathBuf>,
}

/// Pre-readout outcome distribution of `|LC_n>` in the parity's global setting.
pub fn direct_distribution(n: usize, noise: &NoiseModel, parity: Parity) -> CliResult<Distribution> {
    let c = build_linear_cluster(n)?.with_meas(parity.meas(n))?;
    Ok(if noise.has_gate_noise() {
        frame_distribution(&c, Some(noise))?
    } else {
        measure_statevector(&run_statevector(&c)?, c.meas())?
    })
}

/// Simulates `|LC_n>` on `n` qubits directly, under the same noise, readout and
/// (tensor-product) mitigation as the blocks. Writes `direct_n<n>.json`.
pub fn cmd_direct(cfg: &ExperimentConfig, n: usize, out: &Path) -> CliResult<DirectOutput> {
    cfg.validate()?;
    if !(2..=MAX_FRAME_DISTRIBUTION_QUBITS).contains(&n) {
        return Err(CliError::Validation(format!("direct simulation needs 2 <= n <= {MAX_FRAME_DISTRIBUTION_QUBITS}, got {n}")));
    }
    let noise = cfg.noise()?;
    let rates = noise.readout_for_register(n);
    let mut mitigator = Mitigator::new(cfg.project);
    let mut mitigation = MitigationSummary::new();
    let label = match (&rates, cfg.mitigation_mode(false)) {
        (_, None) => "none",
        (None, Some(_)) => "identity",
        (Some(r), Some(_)) => {
            mitigator = mitigator.with_matrix(TransitionMatrix::tensor_product(r)?);
            "tensor_product"
        }
    };
    mitigation.insert(format!("n{n}"), label.into());
    mitigation.insert("project".into(), cfg.project.to_string());

    let ideal = [direct_distribution(n, &noise, Parity::Odd)?, direct_distribution(n, &noise, Parity::Even)?];
    let observed: Vec<Distribution> = ideal
        .iter()
        .map(|d| Ok(match &rates {
            Some(r) => apply_readout_noise(d, r)?,
            None => d.clone(),
        }))
        .collect::<CliResult<_>>()?;
    let mut reports = Vec::new();
    let mut first = None;
    for rep in 0..cfg.effective_repetitions() {
        let mitigated: Vec<Vec<f64>> = match cfg.mode {
            Mode::Exact => observed.iter().map(|d| Ok(mitigator.mitigate(d)?.weights().to_vec())).collect::<CliResult<_>>()?,
            Mode::Sampled => ideal
                .iter()
                .enumerate()
                .map(|(p, d)| {
                    let mut rng = rng_for(cfg.seed, &[DIRECT_STREAM, rep as u64, p as u64]);
                    let counts = sample_counts_with(d, cfg.shots, &mut rng, rates.as_deref())?;
                    Ok(mitigator.mitigate(&counts)?.weights().to_vec())
                })
                .collect::<CliResult<_>>()?,
        };
        reports.push(witness_from_distributions(n, &mitigated[0], &mitigated[1])?);
        if first.is_none() {
            first = Some(mitigated);
        }
    }
    let true_fidelity = if n <= MAX_TRUE_FIDELITY_QUBITS {
        Some(stabilizer_fidelity(&build_linear_cluster(n)?, Some(&noise), &stabilizer_generators(n)?)?)
    } else {
        None
    };
    let [odd, even]: [Vec<f64>; 2] = first.expect("at least one repetition").try_into().expect("two settings");
    let report = DirectReport {
        terms: TermsReport::aggregate(&reports)?,
        mitigation,
        true_fidelity,
        distributions: DistributionsFile { n, odd_meas: Parity::Odd.meas(n), even_meas: Parity::Even.meas(n), odd, even },
    };
    create_dir(out)?;
    let p = out.join(format!("direct_n{n}.json"));
    write_json(&p, &report)?;
    let mut files = vec![p];
    files.push(bundle::write_manifest(out, "direct", cfg, &files)?);
    Ok(DirectOutput { report, files })
}
