use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::circuit::MeasSetting;
use crate::qstate::{CountsTable, Distribution, Pauli, PauliString, Weights};
use crate::rng::rng_for;
use crate::{Error, Result};

use super::ReadoutRates;

/// Push a distribution through independent per-qubit readout confusion.
pub fn apply_readout_noise(dist: &Distribution, rates: &[ReadoutRates]) -> Result<Distribution> {
    let n = dist.n_qubits();
    if rates.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: rates.len() });
    }
    let mut p = dist.probs().to_vec();
    for (q, r) in rates.iter().enumerate() {
        r.validate()?;
        let stride = 1usize << (n - 1 - q);
        for i in 0..p.len() {
            if i & stride == 0 {
                let (p0, p1) = (p[i], p[i | stride]);
                p[i] = r.f00 * p0 + (1.0 - r.f11) * p1;
                p[i | stride] = (1.0 - r.f00) * p0 + r.f11 * p1;
            }
        }
    }
    Distribution::new(p)
}

/// Draw `shots` outcomes from `dist`; with `readout`, each sampled bit is misread
/// independently (`1 - f00` for a 0, `1 - f11` for a 1). Per-shot bit flips are
/// equivalent in law to one multinomial draw from the confused distribution,
/// which is what is sampled here.
pub fn sample_counts(dist: &Distribution, shots: u64, seed: u64, readout: Option<&[ReadoutRates]>) -> Result<CountsTable> {
    sample_counts_with(dist, shots, &mut rng_for(seed, &[]), readout)
}

pub fn sample_counts_with<R: Rng + ?Sized>(
    dist: &Distribution,
    shots: u64,
    rng: &mut R,
    readout: Option<&[ReadoutRates]>,
) -> Result<CountsTable> {
    if shots == 0 {
        return Err(Error::InvalidShots);
    }
    let observed = match readout {
        Some(r) => apply_readout_noise(dist, r)?,
        None => dist.clone(),
    };
    let counts = multinomial(observed.probs(), shots, rng);
    CountsTable::new(dist.n_qubits(), counts)
}

/// Sequential conditional binomials over the outcomes in index order.
fn multinomial<R: Rng + ?Sized>(p: &[f64], shots: u64, rng: &mut R) -> Vec<u64> {
    let mut tail = vec![0.0; p.len() + 1];
    for i in (0..p.len()).rev() {
        tail[i] = tail[i + 1] + p[i];
    }
    let mut out = vec![0u64; p.len()];
    let mut remaining = shots;
    for i in 0..p.len() {
        if remaining == 0 {
            break;
        }
        if i + 1 == p.len() || tail[i + 1] <= 0.0 {
            out[i] = remaining;
            break;
        }
        let q = (p[i] / tail[i]).clamp(0.0, 1.0);
        let k = if q >= 1.0 {
            remaining
        } else if q <= 0.0 {
            0
        } else {
            Binomial::new(remaining, q).expect("valid binomial").sample(rng)
        };
        out[i] = k;
        remaining -= k;
    }
    out
}

/// `Σ_b w(b) (-1)^{parity of b on the support of p}` times the sign of `p`.
///
/// Every non-identity letter of `p` must equal the measured basis on that qubit.
pub fn expectation_from_counts<W: Weights + ?Sized>(w: &W, p: &PauliString, meas: &MeasSetting) -> Result<f64> {
    let n = w.register_size();
    if p.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: p.len() });
    }
    if meas.len() != n {
        return Err(Error::SizeMismatch { expected: n, found: meas.len() });
    }
    let mut mask = 0usize;
    for (q, &letter) in p.letters().iter().enumerate() {
        if letter != Pauli::I {
            if letter != meas.basis(q).pauli() {
                return Err(Error::BasisIncompatible { qubit: q });
            }
            mask |= 1 << (n - 1 - q);
        }
    }
    let weights = w.normalized();
    let e: f64 = weights
        .iter()
        .enumerate()
        .map(|(b, &x)| if (b & mask).count_ones() % 2 == 1 { -x } else { x })
        .sum();
    Ok(p.phase() * e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::QuasiDistribution;

    #[test]
    fn deterministic_outcome() {
        let d = Distribution::new(vec![1.0, 0.0]).unwrap();
        let c = sample_counts(&d, 1000, 3, None).unwrap();
        assert_eq!(c.counts(), &[1000, 0]);
        assert_eq!(sample_counts(&d, 0, 3, None).unwrap_err(), Error::InvalidShots);
    }

    #[test]
    fn fair_coin_within_five_sigma() {
        let d = Distribution::new(vec![0.5, 0.5]).unwrap();
        let c = sample_counts(&d, 1_000_000, 42, None).unwrap();
        assert!((c.counts()[0] as f64 - 500_000.0).abs() < 5.0 * 500.0, "{:?}", c.counts());
    }

    #[test]
    fn readout_flips_within_five_sigma() {
        let d = Distribution::new(vec![1.0, 0.0]).unwrap();
        let shots = 1_000_000u64;
        let c = sample_counts(&d, shots, 9, Some(&[ReadoutRates { f00: 0.95, f11: 0.9 }])).unwrap();
        let sigma = (shots as f64 * 0.05 * 0.95).sqrt();
        assert!((c.counts()[1] as f64 - 0.05 * shots as f64).abs() < 5.0 * sigma);
    }

    #[test]
    fn reproducible_for_fixed_seed() {
        let d = Distribution::new(vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let r = [ReadoutRates { f00: 0.9, f11: 0.8 }, ReadoutRates { f00: 0.97, f11: 0.93 }];
        let a = sample_counts(&d, 12345, 5, Some(&r)).unwrap();
        let b = sample_counts(&d, 12345, 5, Some(&r)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.shots(), 12345);
    }

    #[test]
    fn readout_noise_on_two_qubits() {
        let d = Distribution::new(vec![0.0, 0.0, 0.0, 1.0]).unwrap();
        let r = [ReadoutRates { f00: 0.9, f11: 0.8 }, ReadoutRates { f00: 0.95, f11: 0.7 }];
        let o = apply_readout_noise(&d, &r).unwrap();
        let want = [0.2 * 0.3, 0.2 * 0.7, 0.8 * 0.3, 0.8 * 0.7];
        for (a, b) in o.probs().iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn expectation_normalisation_and_compatibility() {
        let q = QuasiDistribution::new(vec![1.3, -0.1, -0.4, 0.2]).unwrap();
        let id: PauliString = "II".parse().unwrap();
        assert_eq!(expectation_from_counts(&q, &id, &"XZ".parse().unwrap()).unwrap(), 1.0);
        let c = CountsTable::from_sparse(2, [("00", 3), ("01", 1)]).unwrap();
        let e = expectation_from_counts(&c, &"IZ".parse().unwrap(), &"XZ".parse().unwrap()).unwrap();
        assert!((e - 0.5).abs() < 1e-15);
        let err = expectation_from_counts(&c, &"ZI".parse().unwrap(), &"XZ".parse().unwrap()).unwrap_err();
        assert_eq!(err, Error::BasisIncompatible { qubit: 0 });
        let neg = expectation_from_counts(&c, &"-IZ".parse().unwrap(), &"XZ".parse().unwrap()).unwrap();
        assert!((neg + 0.5).abs() < 1e-15);
    }
}
