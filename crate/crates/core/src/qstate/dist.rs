use alloc::borrow::Cow;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::{tol, Error, Result};

/// Bitstring of `index` in an `n`-bit register, qubit 0 leftmost.
pub fn bitstring(index: usize, n: usize) -> String {
    (0..n).map(|q| if index >> (n - 1 - q) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Inverse of [`bitstring`].
pub fn parse_bitstring(s: &str) -> Result<usize> {
    if s.is_empty() || s.len() > 63 {
        return Err(Error::Parse(format!("bad bitstring length {}", s.len())));
    }
    s.chars().try_fold(0usize, |acc, c| match c {
        '0' => Ok(acc << 1),
        '1' => Ok(acc << 1 | 1),
        _ => Err(Error::Parse(format!("bad bit {c:?} in {s:?}"))),
    })
}

/// Anything that can be read as normalised weights over the `2^n` bitstrings of a register.
pub trait Weights {
    fn register_size(&self) -> usize;
    fn normalized(&self) -> Cow<'_, [f64]>;
}

/// Probability vector over `2^n` bitstrings.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    n: usize,
    probs: Vec<f64>,
}

impl Distribution {
    /// Entries in `[-1e-12, 0)` are treated as rounding residue and clamped to zero.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        let n = register_of(probs.len())?;
        let mut probs = probs;
        for p in probs.iter_mut() {
            if !p.is_finite() || *p < -tol::EXACT {
                return Err(Error::InvalidDistribution(format!("entry {p} is negative or non-finite")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        check_sum(&probs)?;
        Ok(Self { n, probs })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn into_quasi(self) -> QuasiDistribution {
        QuasiDistribution { n: self.n, weights: self.probs }
    }

    /// Total-variation distance `½ Σ |p - q|`.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        total_variation(&self.probs, other)
    }
}

/// Real weights summing to one; entries may be negative.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiDistribution {
    n: usize,
    weights: Vec<f64>,
}

impl QuasiDistribution {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let n = register_of(weights.len())?;
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite weight".into()));
        }
        check_sum(&weights)?;
        Ok(Self { n, weights })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn min_weight(&self) -> f64 {
        self.weights.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Sampled measurement counts, stored densely over all `2^n` outcomes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountsTable {
    n: usize,
    shots: u64,
    counts: Vec<u64>,
}

impl CountsTable {
    pub fn new(n: usize, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != 1usize << n || n == 0 {
            return Err(Error::InvalidDistribution(format!(
                "{} counts for a {n}-qubit register",
                counts.len()
            )));
        }
        let shots: u64 = counts.iter().sum();
        if shots == 0 {
            return Err(Error::InvalidShots);
        }
        Ok(Self { n, shots, counts })
    }

    /// Build from sparse `(bitstring, count)` pairs.
    pub fn from_sparse<'a>(n: usize, entries: impl IntoIterator<Item = (&'a str, u64)>) -> Result<Self> {
        let mut counts = vec![0u64; 1usize << n];
        for (b, c) in entries {
            if b.len() != n {
                return Err(Error::Parse(format!("bitstring {b:?} has wrong length for n = {n}")));
            }
            counts[parse_bitstring(b)?] += c;
        }
        Self::new(n, counts)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, bits: &str) -> u64 {
        parse_bitstring(bits).ok().and_then(|i| self.counts.get(i).copied()).unwrap_or(0)
    }

    /// Non-zero entries in ascending bitstring order.
    pub fn sparse(&self) -> impl Iterator<Item = (String, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(i, &c)| (bitstring(i, self.n), c))
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let s = self.shots as f64;
        self.counts.iter().map(|&c| c as f64 / s).collect()
    }
}

impl Weights for Distribution {
    fn register_size(&self) -> usize {
        self.n
    }
    fn normalized(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.probs)
    }
}

impl Weights for QuasiDistribution {
    fn register_size(&self) -> usize {
        self.n
    }
    fn normalized(&self) -> Cow<'_, [f64]> {
        Cow::Borrowed(&self.weights)
    }
}

impl Weights for CountsTable {
    fn register_size(&self) -> usize {
        self.n
    }
    fn normalized(&self) -> Cow<'_, [f64]> {
        Cow::Owned(self.frequencies())
    }
}

/// Parity expectations `E[m] = Σ_x w(x) (-1)^{popcount(x & m)}` for every mask `m`,
/// via an in-place fast Walsh–Hadamard transform.
pub fn parity_expectations(weights: &[f64]) -> Vec<f64> {
    let mut e = weights.to_vec();
    walsh_hadamard(&mut e);
    e
}

/// Unnormalised in-place Walsh–Hadamard transform; applying it twice scales by `len`.
pub(crate) fn walsh_hadamard(v: &mut [f64]) {
    let len = v.len();
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (v[i], v[i + h]);
                v[i] = a + b;
                v[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Half the L1 distance between two weight vectors.
pub fn total_variation(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn register_of(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidDistribution(format!("length {len} is not 2^n with n >= 1")));
    }
    Ok(len.trailing_zeros() as usize)
}

fn check_sum(v: &[f64]) -> Result<()> {
    let sum: f64 = v.iter().sum();
    if (sum - 1.0).abs() > tol::PROBABILISTIC {
        return Err(Error::BadNormalization { sum });
    }
    Ok(())
}
