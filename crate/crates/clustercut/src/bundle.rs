//! On-disk job bundles: `plan.json`, one result file per job and repetition,
//! and an optional calibration set.
//!
//! ```text
//! <bundle>/config.json
//! <bundle>/plan.json
//! <bundle>/results/rep_000/job_00.json ... job_47.json
//! <bundle>/calibration/n4/0000.json ... 1111.json
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clustercut_core::circuit::MeasSetting;
use clustercut_core::cut::{JobPayload, JobResult, JobSpec};
use clustercut_core::qstate::{bitstring, parse_bitstring, CountsTable, Distribution};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Counts file, or its exact-probability variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CountsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub job: Option<usize>,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    pub meas: MeasSetting,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counts: Option<BTreeMap<String, u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<BTreeMap<String, f64>>,
}

impl CountsFile {
    pub fn from_counts(job: Option<usize>, meas: MeasSetting, c: &CountsTable) -> Self {
        Self {
            job,
            n: c.n_qubits(),
            shots: Some(c.shots()),
            meas,
            counts: Some(c.sparse().collect()),
            probabilities: None,
        }
    }

    pub fn from_distribution(job: Option<usize>, meas: MeasSetting, d: &Distribution) -> Self {
        let n = d.n_qubits();
        Self {
            job,
            n,
            shots: None,
            meas,
            counts: None,
            probabilities: Some(d.probs().iter().enumerate().map(|(i, p)| (bitstring(i, n), *p)).collect()),
        }
    }

    pub fn from_result(r: &JobResult) -> Self {
        match &r.payload {
            JobPayload::Exact(d) => Self::from_distribution(Some(r.job.id), r.job.meas.clone(), d),
            JobPayload::Sampled(c) => Self::from_counts(Some(r.job.id), r.job.meas.clone(), c),
        }
    }

    pub fn payload(&self) -> CliResult<JobPayload> {
        if self.meas.len() != self.n {
            return Err(CliError::Validation(format!("meas has {} bases for n = {}", self.meas.len(), self.n)));
        }
        match (&self.counts, &self.probabilities) {
            (Some(counts), None) => {
                let c = CountsTable::from_sparse(self.n, counts.iter().map(|(k, v)| (k.as_str(), *v)))?;
                if let Some(shots) = self.shots {
                    if shots != c.shots() {
                        return Err(CliError::Validation(format!("shots {shots} but counts sum to {}", c.shots())));
                    }
                }
                Ok(JobPayload::Sampled(c))
            }
            (None, Some(probs)) => {
                let mut p = vec![0.0; 1usize << self.n];
                for (k, v) in probs {
                    let i = parse_bitstring(k)?;
                    if k.len() != self.n {
                        return Err(CliError::Validation(format!("bitstring {k} is not {} bits", self.n)));
                    }
                    p[i] = *v;
                }
                Ok(JobPayload::Exact(Distribution::new(p)?))
            }
            _ => Err(CliError::Validation("expected exactly one of counts or probabilities".into())),
        }
    }
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    write_text(path, &s)
}

pub fn write_text(path: &Path, s: &str) -> CliResult<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
    }
    fs::write(path, s).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn plan_path(dir: &Path) -> PathBuf {
    dir.join("plan.json")
}

pub fn result_path(dir: &Path, rep: usize, id: usize) -> PathBuf {
    dir.join("results").join(format!("rep_{rep:03}")).join(format!("job_{id:02}.json"))
}

pub fn calibration_path(dir: &Path, n: usize, prepared: usize) -> PathBuf {
    dir.join("calibration").join(format!("n{n}")).join(format!("{}.json", bitstring(prepared, n)))
}

pub fn write_results(dir: &Path, rep: usize, results: &[JobResult]) -> CliResult<Vec<PathBuf>> {
    results
        .iter()
        .map(|r| {
            let p = result_path(dir, rep, r.job.id);
            write_json(&p, &CountsFile::from_result(r))?;
            Ok(p)
        })
        .collect()
}

/// Number of `results/rep_NNN` directories, which must be contiguous from zero.
fn repetitions(dir: &Path) -> CliResult<usize> {
    let results = dir.join("results");
    let entries = fs::read_dir(&results).map_err(|e| CliError::io(&results, e))?;
    let mut n = 0;
    for e in entries {
        let e = e.map_err(|e| CliError::io(&results, e))?;
        if e.file_name().to_string_lossy().starts_with("rep_") {
            n += 1;
        }
    }
    for rep in 0..n {
        let p = results.join(format!("rep_{rep:03}"));
        if !p.is_dir() {
            return Err(CliError::IncompleteBundle(vec![format!("missing repetition directory {}", p.display())]));
        }
    }
    if n == 0 {
        return Err(CliError::IncompleteBundle(vec![format!("no repetitions under {}", results.display())]));
    }
    Ok(n)
}

/// All repetitions of a bundle, each ordered by job id. Every missing file is listed.
pub fn read_results(dir: &Path) -> CliResult<(Vec<JobSpec>, Vec<Vec<JobResult>>)> {
    let plan: Vec<JobSpec> = read_json(&plan_path(dir))?;
    let reps = repetitions(dir)?;
    let mut missing = Vec::new();
    let mut all = Vec::with_capacity(reps);
    for rep in 0..reps {
        let mut results = Vec::with_capacity(plan.len());
        for spec in &plan {
            let p = result_path(dir, rep, spec.id);
            if !p.exists() {
                missing.push(format!("job {} (repetition {rep}): {} not found", spec.id, p.display()));
                continue;
            }
            let f: CountsFile = read_json(&p)?;
            if f.job.is_some_and(|j| j != spec.id) || f.meas != spec.meas || f.n != spec.form.n_qubits() {
                return Err(CliError::Validation(format!(
                    "{}: basis or size does not match plan entry for job {}",
                    p.display(),
                    spec.id
                )));
            }
            let payload = f.payload().map_err(|e| CliError::Validation(format!("{}: {e}", p.display())))?;
            results.push(JobResult { job: spec.clone(), payload, wall_time: Duration::ZERO });
        }
        all.push(results);
    }
    if !missing.is_empty() {
        return Err(CliError::IncompleteBundle(missing));
    }
    Ok((plan, all))
}

pub fn write_calibration(dir: &Path, tables: &[CountsTable]) -> CliResult<Vec<PathBuf>> {
    tables
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let n = c.n_qubits();
            let p = calibration_path(dir, n, j);
            write_json(&p, &CountsFile::from_counts(None, MeasSetting::all_z(n), c))?;
            Ok(p)
        })
        .collect()
}

/// Calibration counts for an `n`-qubit register, or `None` when the bundle has none.
pub fn read_calibration(dir: &Path, n: usize) -> CliResult<Option<Vec<CountsTable>>> {
    if !dir.join("calibration").join(format!("n{n}")).is_dir() {
        return Ok(None);
    }
    let mut missing = Vec::new();
    let mut tables = Vec::new();
    for j in 0..1usize << n {
        let p = calibration_path(dir, n, j);
        if !p.exists() {
            missing.push(format!("calibration for prepared {}: {} not found", bitstring(j, n), p.display()));
            continue;
        }
        let f: CountsFile = read_json(&p)?;
        match f.payload()? {
            JobPayload::Sampled(c) if c.n_qubits() == n => tables.push(c),
            _ => return Err(CliError::Validation(format!("{}: expected {n}-qubit counts", p.display()))),
        }
    }
    if !missing.is_empty() {
        return Err(CliError::IncompleteBundle(missing));
    }
    Ok(Some(tables))
}

/// Reproduction record written next to every command's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config_sha256: String,
    /// Output files relative to the manifest's directory.
    pub outputs: Vec<String>,
}

pub fn write_manifest(dir: &Path, command: &str, cfg: &crate::config::ExperimentConfig, outputs: &[PathBuf]) -> CliResult<PathBuf> {
    let mut rel: Vec<String> = outputs
        .iter()
        .map(|p| p.strip_prefix(dir).unwrap_or(p).to_string_lossy().replace('\\', "/"))
        .collect();
    rel.sort();
    let m = Manifest {
        command: command.into(),
        version: env!("CARGO_PKG_VERSION").into(),
        seed: cfg.seed,
        config_sha256: cfg.sha256(),
        outputs: rel,
    };
    let p = dir.join(format!("manifest-{command}.json"));
    write_json(&p, &m)?;
    Ok(p)
}
