//! Readout-error mitigation by transition-matrix inversion, and projection of
//! the resulting quasi-distributions back onto the probability simplex.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::qstate::{CountsTable, Distribution, QuasiDistribution, Weights};
use crate::sim::ReadoutRates;
use crate::{tol, Error, Result};

/// Transition matrices with a larger 2-norm condition number are rejected.
pub const MAX_CONDITION_NUMBER: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MitigationMode {
    TensorProduct,
    FullCalibration,
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    /// One 2x2 column-stochastic factor per qubit, qubit 0 outermost.
    Factored(Vec<[[f64; 2]; 2]>),
    /// Dense row-major `2^n x 2^n`.
    Dense(Vec<f64>),
}

/// Column `j` is the distribution of observed bitstrings given true bitstring `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    n: usize,
    mode: MitigationMode,
    repr: Repr,
    condition: f64,
}

pub fn build_transition_matrix(
    readout: Option<&[ReadoutRates]>,
    n: usize,
    mode: MitigationMode,
    calib: Option<&[CountsTable]>,
) -> Result<TransitionMatrix> {
    match mode {
        MitigationMode::TensorProduct => {
            let rates = readout.ok_or_else(|| Error::InvalidRegister("tensor-product mode needs readout rates".into()))?;
            if rates.len() != n {
                return Err(Error::SizeMismatch { expected: n, found: rates.len() });
            }
            TransitionMatrix::tensor_product(rates)
        }
        MitigationMode::FullCalibration => {
            let calib = calib.ok_or_else(|| Error::InvalidRegister("full calibration needs calibration counts".into()))?;
            let t = TransitionMatrix::full_calibration(calib)?;
            if t.n != n {
                return Err(Error::SizeMismatch { expected: n, found: t.n });
            }
            Ok(t)
        }
    }
}

impl TransitionMatrix {
    pub fn tensor_product(rates: &[ReadoutRates]) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::InvalidRegister("no qubits".into()));
        }
        let factors: Vec<[[f64; 2]; 2]> = rates
            .iter()
            .map(|r| {
                r.validate()?;
                Ok([[r.f00, 1.0 - r.f11], [1.0 - r.f00, r.f11]])
            })
            .collect::<Result<_>>()?;
        // cond(A ⊗ B) = cond(A) cond(B) in the 2-norm
        let condition = factors
            .iter()
            .map(|f| condition_number(&DMatrix::from_row_slice(2, 2, &[f[0][0], f[0][1], f[1][0], f[1][1]])))
            .product();
        Self::checked(Self { n: rates.len(), mode: MitigationMode::TensorProduct, repr: Repr::Factored(factors), condition })
    }

    /// `calib[j]` holds the counts observed after preparing basis state `j`.
    pub fn full_calibration(calib: &[CountsTable]) -> Result<Self> {
        let d = calib.len();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::InvalidRegister(format!("{d} calibration tables is not 2^n")));
        }
        let n = d.trailing_zeros() as usize;
        let mut m = vec![0.0; d * d];
        for (j, table) in calib.iter().enumerate() {
            if table.n_qubits() != n {
                return Err(Error::SizeMismatch { expected: n, found: table.n_qubits() });
            }
            for (i, f) in table.frequencies().into_iter().enumerate() {
                m[i * d + j] = f;
            }
        }
        let condition = condition_number(&DMatrix::from_row_slice(d, d, &m));
        Self::checked(Self { n, mode: MitigationMode::FullCalibration, repr: Repr::Dense(m), condition })
    }

    fn checked(self) -> Result<Self> {
        if !self.condition.is_finite() || self.condition > MAX_CONDITION_NUMBER {
            return Err(Error::IllConditioned { condition: self.condition });
        }
        Ok(self)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> MitigationMode {
        self.mode
    }

    /// 2-norm condition number.
    pub fn condition_number(&self) -> f64 {
        self.condition
    }

    /// Dense row-major entries.
    pub fn to_dense(&self) -> Vec<f64> {
        match &self.repr {
            Repr::Dense(m) => m.clone(),
            Repr::Factored(f) => {
                let d = 1usize << self.n;
                let mut m = vec![0.0; d * d];
                for (r, row) in m.chunks_mut(d).enumerate() {
                    for (c, v) in row.iter_mut().enumerate() {
                        *v = f
                            .iter()
                            .enumerate()
                            .map(|(q, t)| {
                                let s = self.n - 1 - q;
                                t[r >> s & 1][c >> s & 1]
                            })
                            .product();
                    }
                }
                m
            }
        }
    }

    /// `T p`.
    pub fn apply(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p.len())?;
        Ok(match &self.repr {
            Repr::Dense(m) => {
                let d = p.len();
                (0..d).map(|r| (0..d).map(|c| m[r * d + c] * p[c]).sum()).collect()
            }
            Repr::Factored(f) => apply_factors(p, f.iter().copied()),
        })
    }

    /// Solve `T x = p`.
    pub fn solve(&self, p: &[f64]) -> Result<Vec<f64>> {
        self.check_len(p.len())?;
        match &self.repr {
            Repr::Dense(m) => {
                let d = p.len();
                let lu = DMatrix::from_row_slice(d, d, m).lu();
                let x = lu
                    .solve(&DVector::from_column_slice(p))
                    .ok_or(Error::IllConditioned { condition: f64::INFINITY })?;
                Ok(x.iter().copied().collect())
            }
            Repr::Factored(f) => {
                let inv = f
                    .iter()
                    .map(|t| {
                        let det = t[0][0] * t[1][1] - t[0][1] * t[1][0];
                        if det == 0.0 {
                            return Err(Error::IllConditioned { condition: f64::INFINITY });
                        }
                        Ok([[t[1][1] / det, -t[0][1] / det], [-t[1][0] / det, t[0][0] / det]])
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(apply_factors(p, inv.into_iter()))
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != 1usize << self.n {
            return Err(Error::SizeMismatch { expected: self.n, found: len.trailing_zeros() as usize });
        }
        Ok(())
    }
}

fn apply_factors(p: &[f64], factors: impl Iterator<Item = [[f64; 2]; 2]>) -> Vec<f64> {
    let n = p.len().trailing_zeros() as usize;
    let mut v = p.to_vec();
    for (q, t) in factors.enumerate() {
        let stride = 1usize << (n - 1 - q);
        for i in 0..v.len() {
            if i & stride == 0 {
                let (a, b) = (v[i], v[i | stride]);
                v[i] = t[0][0] * a + t[0][1] * b;
                v[i | stride] = t[1][0] * a + t[1][1] * b;
            }
        }
    }
    v
}

fn condition_number(m: &DMatrix<f64>) -> f64 {
    if m.nrows() == 2 {
        let m2 = Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
        let sv = m2.singular_values();
        return sv.max() / sv.min();
    }
    let sv = m.clone().singular_values();
    sv.max() / sv.min()
}

/// `T^{-1}` applied to the observed frequencies. Entries may be negative; the total
/// weight is preserved because `T` is column-stochastic.
pub fn apply_tmem<W: Weights + ?Sized>(observed: &W, t: &TransitionMatrix) -> Result<QuasiDistribution> {
    if observed.register_size() != t.n_qubits() {
        return Err(Error::SizeMismatch { expected: t.n_qubits(), found: observed.register_size() });
    }
    QuasiDistribution::new(t.solve(&observed.normalized())?)
}

/// Euclidean projection onto the probability simplex.
///
/// Reading `q` as a diagonal operator, this is the closest-density-operator
/// eigenvalue truncation restricted to diagonal input. Inputs that are already
/// non-negative and normalised are returned unchanged.
pub fn mle_project(q: &QuasiDistribution) -> Result<Distribution> {
    Distribution::new(project_to_simplex(q.weights())?)
}

/// Sort-based water-filling. Accepts weights summing to `1 ± 1e-6`.
pub fn project_to_simplex(q: &[f64]) -> Result<Vec<f64>> {
    let sum: f64 = q.iter().sum();
    if !sum.is_finite() || (sum - 1.0).abs() > 1e-6 {
        return Err(Error::BadNormalization { sum });
    }
    if q.iter().all(|&w| w >= 0.0) && (sum - 1.0).abs() <= tol::PROBABILISTIC {
        return Ok(q.to_vec());
    }
    let mut u = q.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut tau = 0.0;
    for (j, &uj) in u.iter().enumerate() {
        cumsum += uj;
        let t = (cumsum - 1.0) / (j + 1) as f64;
        if uj - t > 0.0 {
            tau = t;
        }
    }
    Ok(q.iter().map(|&w| (w - tau).max(0.0)).collect())
}

/// Dense export form: row-major entries with the register size and mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrixExport {
    pub n: usize,
    pub mode: MitigationMode,
    pub condition_number: f64,
    pub matrix: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn export(&self) -> TransitionMatrixExport {
        let d = 1usize << self.n;
        TransitionMatrixExport {
            n: self.n,
            mode: self.mode,
            condition_number: self.condition,
            matrix: self.to_dense().chunks(d).map(|r| r.to_vec()).collect(),
        }
    }
}

/// Per-register readout correction followed by optional simplex projection.
///
/// Registers without a matrix are only normalised.
#[derive(Debug, Clone, Default)]
pub struct Mitigator {
    matrices: Vec<TransitionMatrix>,
    project: bool,
}

impl Mitigator {
    /// Normalisation only.
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(project: bool) -> Self {
        Self { matrices: Vec::new(), project }
    }

    /// Replaces any matrix already registered for the same register size.
    pub fn with_matrix(mut self, t: TransitionMatrix) -> Self {
        self.matrices.retain(|m| m.n != t.n);
        self.matrices.push(t);
        self
    }

    pub fn projects(&self) -> bool {
        self.project
    }

    pub fn matrix_for(&self, n: usize) -> Option<&TransitionMatrix> {
        self.matrices.iter().find(|m| m.n == n)
    }

    pub fn mitigate<W: Weights + ?Sized>(&self, observed: &W) -> Result<QuasiDistribution> {
        let q = match self.matrix_for(observed.register_size()) {
            Some(t) => apply_tmem(observed, t)?,
            None => QuasiDistribution::new(observed.normalized().into_owned())?,
        };
        if self.project {
            Ok(mle_project(&q)?.into_quasi())
        } else {
            Ok(q)
        }
    }
}
