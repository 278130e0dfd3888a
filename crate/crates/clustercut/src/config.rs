//! Experiment configuration, read from and written back to JSON.

use std::path::{Path, PathBuf};

use clustercut_core::mitigation::MitigationMode;
use clustercut_core::sim::{NoiseModel, ReadoutRates, RunConfig, TABLE_I_READOUT};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    Sampled,
}

/// `Auto` picks FullCalibration when the bundle has calibration data, else TensorProduct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MitigationChoice {
    Auto,
    None,
    TensorProduct,
    FullCalibration,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub shots: u64,
    pub seed: u64,
    pub p1: f64,
    pub p2: f64,
    pub readout: Vec<ReadoutRates>,
    pub mitigation: MitigationChoice,
    /// Project mitigated distributions onto the simplex.
    pub project: bool,
    pub k_max: usize,
    pub repetitions: usize,
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let noise = NoiseModel::calibrated_default();
        Self {
            mode: Mode::Sampled,
            shots: 1_000_000,
            seed: 2024,
            p1: noise.p1,
            p2: noise.p2,
            readout: TABLE_I_READOUT.to_vec(),
            mitigation: MitigationChoice::Auto,
            project: true,
            k_max: 9,
            repetitions: 25,
            out: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn noiseless_exact() -> Self {
        Self { mode: Mode::Exact, p1: 0.0, p2: 0.0, readout: Vec::new(), repetitions: 1, ..Self::default() }
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        self.noise()?;
        if self.mode == Mode::Sampled && self.shots == 0 {
            return Err(CliError::Validation("shots must be positive in sampled mode".into()));
        }
        if self.repetitions == 0 {
            return Err(CliError::Validation("repetitions must be at least 1".into()));
        }
        if self.k_max == 0 {
            return Err(CliError::Validation("k_max must be at least 1".into()));
        }
        Ok(())
    }

    pub fn noise(&self) -> CliResult<NoiseModel> {
        NoiseModel::new(self.p1, self.p2, self.readout.clone()).map_err(|e| CliError::Validation(e.to_string()))
    }

    /// Exact runs are deterministic, so they always use a single repetition.
    pub fn effective_repetitions(&self) -> usize {
        match self.mode {
            Mode::Exact => 1,
            Mode::Sampled => self.repetitions,
        }
    }

    pub fn run_config(&self) -> RunConfig {
        match self.mode {
            Mode::Exact => RunConfig::exact(self.seed),
            Mode::Sampled => RunConfig::sampled(self.shots, self.seed).expect("validated shots"),
        }
    }

    pub fn mitigation_mode(&self, has_calibration: bool) -> Option<MitigationMode> {
        match self.mitigation {
            MitigationChoice::None => None,
            MitigationChoice::TensorProduct => Some(MitigationMode::TensorProduct),
            MitigationChoice::FullCalibration => Some(MitigationMode::FullCalibration),
            MitigationChoice::Auto if has_calibration => Some(MitigationMode::FullCalibration),
            MitigationChoice::Auto => Some(MitigationMode::TensorProduct),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serialises");
        s.push('\n');
        s
    }

    pub fn sha256(&self) -> String {
        format!("{:x}", Sha256::digest(self.to_json().as_bytes()))
    }
}
