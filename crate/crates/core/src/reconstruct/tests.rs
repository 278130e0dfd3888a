use alloc::vec::Vec;

use rand::{Rng, SeedableRng};

use super::*;
use crate::circuit::{build_linear_cluster, BlockForm, StateLabel};
use crate::cut::{decomposition_table, execute_jobs, plan_chain_jobs, LocalSetting};
use crate::mitigation::Mitigator;
use crate::qstate::total_variation;
use crate::sim::{measure_statevector, run_statevector, NoiseModel, RunConfig};

fn exact_tensors(noise: Option<&NoiseModel>) -> BlockTensors {
    let results = execute_jobs(&plan_chain_jobs(), &RunConfig::exact(1), noise).unwrap();
    build_block_tensors(&results, &Mitigator::none()).unwrap()
}

fn setting(parity: Parity, b: usize) -> LocalSetting {
    stitch::block_setting(parity, b)
}

/// Direct sum over every cut-term assignment.
fn brute_force(t: &BlockTensors, parity: Parity, support: u64, k: usize) -> f64 {
    let table = decomposition_table();
    let n = chain_qubits(k);
    let mask = |b: usize| ((support >> (n - 3 - 3 * b)) & 7) as usize;
    let mut total = 0.0;
    for code in 0..6usize.pow(k as u32) {
        let idx: Vec<usize> = (0..k).map(|j| code / 6usize.pow(j as u32) % 6).collect();
        let mut prod: f64 = idx.iter().map(|&i| table[i].coefficient).product();
        prod *= t.four.value(StateLabel::Xp, setting(parity, 0), Some(idx[0]), mask(0));
        for b in 1..k {
            prod *= t.four.value(table[idx[b - 1]].prepared, setting(parity, b), Some(idx[b]), mask(b));
        }
        prod *= t.three.value(table[idx[k - 1]].prepared, setting(parity, k), None, mask(k));
        total += prod;
    }
    total
}

fn random_tensors(rng: &mut impl Rng) -> BlockTensors {
    let mut gen = |slots: usize| -> Vec<[f64; 8]> {
        (0..slots).map(|_| core::array::from_fn(|_| rng.random::<f64>() * 4.0 - 2.0)).collect()
    };
    BlockTensors::new(
        BlockTensor::from_values(BlockForm::FourQubit, gen(72)).unwrap(),
        BlockTensor::from_values(BlockForm::ThreeQubit, gen(12)).unwrap(),
    )
    .unwrap()
}

#[test]
fn transfer_matches_brute_force_on_random_tensors() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(77);
    for k in 1..=4 {
        let t = random_tensors(&mut rng);
        let n = chain_qubits(k);
        for parity in Parity::BOTH {
            let terms = witness_terms(n, parity).unwrap();
            for term in terms.iter().step_by(5) {
                let fast = stitch_expectation(term, &t, k).unwrap();
                let slow = brute_force(&t, parity, term.support_mask(), k);
                assert!((fast - slow).abs() <= 1e-12 * slow.abs().max(1.0), "k={k} {fast} vs {slow}");
            }
        }
    }
}

#[test]
fn from_values_round_trips() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let t = random_tensors(&mut rng);
    let again = BlockTensor::from_outcomes(BlockForm::ThreeQubit, (0..12)
        .map(|s| *t.three.outcome_weights(StateLabel::ALL[s / 2], LocalSetting::ALL[s % 2], None))
        .collect())
    .unwrap();
    for input in StateLabel::ALL {
        for s in LocalSetting::ALL {
            for m in 0..8 {
                assert!((again.value(input, s, None, m) - t.three.value(input, s, None, m)).abs() < 1e-14);
            }
        }
    }
}

#[test]
fn noiseless_tensor_examples() {
    let t = exact_tensors(None);
    // Proj0 + Proj1 with nothing measured locally is the normalisation
    let norm = t.four.value(StateLabel::Xp, LocalSetting::Xzx, Some(0), 0)
        + t.four.value(StateLabel::Xp, LocalSetting::Xzx, Some(1), 0);
    assert!((norm - 1.0).abs() < 1e-12);
    // X1 Z2 on the |+> block
    let xz = t.four.value(StateLabel::Xp, LocalSetting::Xzx, Some(0), 0b110)
        + t.four.value(StateLabel::Xp, LocalSetting::Xzx, Some(1), 0b110);
    assert!((xz - 1.0).abs() < 1e-12);
    assert!(t.four.max_abs_value() <= 1.0 + 1e-12);
}

fn direct_statevector_terms(n: usize) -> (Vec<f64>, Vec<f64>) {
    let psi = run_statevector(&build_linear_cluster(n).unwrap()).unwrap();
    let eval = |p: Parity| witness_terms(n, p).unwrap().iter().map(|t| psi.expectation(&t.pauli).unwrap()).collect();
    (eval(Parity::Odd), eval(Parity::Even))
}

#[test]
fn noiseless_stitching_matches_direct_statevector() {
    let t = exact_tensors(None);
    for k in 1..=3 {
        let n = chain_qubits(k);
        let r = witness_averages(&t, k).unwrap();
        let (odd, even) = direct_statevector_terms(n);
        for (a, b) in r.odd.iter().zip(&odd).chain(r.even.iter().zip(&even)) {
            assert!((a - b).abs() <= 1e-9);
            assert!((a - 1.0).abs() <= 1e-9);
        }
        assert!((r.bound - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn noiseless_distributions_match_direct_statevector() {
    let t = exact_tensors(None);
    let k = 3;
    let n = chain_qubits(k);
    let psi = run_statevector(&build_linear_cluster(n).unwrap()).unwrap();
    for parity in Parity::BOTH {
        let stitched = stitch_distribution(&t, k, parity).unwrap();
        let direct = measure_statevector(&psi, &parity.meas(n)).unwrap();
        assert!(total_variation(stitched.weights(), direct.probs()) <= 1e-9);
    }
}

#[test]
fn stitched_distribution_agrees_with_stitched_terms() {
    let noise = NoiseModel::calibrated_default();
    let t = exact_tensors(Some(&noise));
    let k = 2;
    let n = chain_qubits(k);
    let r = witness_averages(&t, k).unwrap();
    let from_dist = witness_from_distributions(
        n,
        stitch_distribution(&t, k, Parity::Odd).unwrap().weights(),
        stitch_distribution(&t, k, Parity::Even).unwrap().weights(),
    )
    .unwrap();
    for (a, b) in r.odd.iter().zip(&from_dist.odd).chain(r.even.iter().zip(&from_dist.even)) {
        assert!((a - b).abs() <= 1e-12);
    }
}

#[test]
fn identity_term_is_one_on_noisy_data() {
    let t = exact_tensors(Some(&NoiseModel::calibrated_default()));
    for k in 1..=5 {
        let term = &witness_terms(chain_qubits(k), Parity::Odd).unwrap()[0];
        assert!((stitch_expectation(term, &t, k).unwrap() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn noisy_twelve_qubit_term_matches_brute_force() {
    let t = exact_tensors(Some(&NoiseModel::calibrated_default()));
    let term = witness_terms(12, Parity::Odd).unwrap().into_iter().find(|t| t.subset == [1]).unwrap();
    assert_eq!(term.pauli.to_string(), "XZIIIIIIIIII");
    let fast = stitch_expectation(&term, &t, 3).unwrap();
    assert!((fast - brute_force(&t, Parity::Odd, term.support_mask(), 3)).abs() <= 1e-12);
    // unmitigated readout noise on two qubits
    assert!(fast < 0.9 && fast > 0.5);
}

#[test]
fn stitching_rejects_bad_terms() {
    let t = exact_tensors(None);
    let term = &witness_terms(9, Parity::Odd).unwrap()[3];
    assert!(stitch_expectation(term, &t, 3).is_err());
    assert!(stitch_expectation(term, &t, 0).is_err());
    let mut wrong = term.clone();
    wrong.parity = Parity::Even;
    assert!(matches!(stitch_expectation(&wrong, &t, 2), Err(crate::Error::BasisIncompatible { .. })));
}

#[test]
fn sweep_rows_and_decay() {
    let clean = scaling_sweep(&exact_tensors(None), 4).unwrap();
    assert_eq!(clean.iter().map(|r| r.n).collect::<Vec<_>>(), [9, 12, 15, 18]);
    for w in clean.windows(2) {
        assert!(w[1].n_terms >= w[0].n_terms);
    }
    for r in &clean {
        assert!((r.bound - 1.0).abs() <= 1e-9);
        assert_eq!(r.bound, fidelity_lower_bound(r.odd_avg, r.even_avg));
    }
    let noisy = scaling_sweep(&exact_tensors(Some(&NoiseModel::calibrated_default())), 4).unwrap();
    assert!(noisy[3].bound < noisy[1].bound);
    assert!(scaling_sweep(&exact_tensors(None), 0).is_err());
}

#[test]
fn missing_or_foreign_jobs_are_reported() {
    let mut results = execute_jobs(&plan_chain_jobs(), &RunConfig::exact(1), None).unwrap();
    results.remove(17);
    assert!(matches!(build_block_tensors(&results, &Mitigator::none()), Err(crate::Error::MissingJob(17))));
    results[0].job.input = StateLabel::Ym;
    assert!(build_block_tensors(&results, &Mitigator::none()).is_err());
}

#[test]
fn sampled_entries_close_to_exact() {
    let exact = exact_tensors(None);
    let results = execute_jobs(&plan_chain_jobs(), &RunConfig::sampled(1_000_000, 9).unwrap(), None).unwrap();
    let sampled = build_block_tensors(&results, &Mitigator::none()).unwrap();
    for input in StateLabel::ALL {
        for s in LocalSetting::ALL {
            for m in 0..8 {
                let d = (sampled.three.value(input, s, None, m) - exact.three.value(input, s, None, m)).abs();
                assert!(d <= 3e-3);
                for j in 0..6 {
                    let d = (sampled.four.value(input, s, Some(j), m) - exact.four.value(input, s, Some(j), m)).abs();
                    assert!(d <= 3e-3);
                }
            }
        }
    }
}

#[test]
fn block_cluster_witness_from_bundle() {
    let results = execute_jobs(&plan_chain_jobs(), &RunConfig::exact(1), None).unwrap();
    let r = block_cluster_witness(&results, &Mitigator::none(), BlockForm::FourQubit).unwrap();
    assert!((r.bound - 1.0).abs() < 1e-12);
    assert_eq!(r.odd.len(), 4);
    let r = block_cluster_witness(&results, &Mitigator::none(), BlockForm::ThreeQubit).unwrap();
    assert!((r.bound - 1.0).abs() < 1e-12);
    assert_eq!((r.odd.len(), r.even.len()), (4, 2));
}

#[test]
fn pairwise_sum_is_order_fixed() {
    let v: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
    assert!((pairwise_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-12);
    assert_eq!(pairwise_sum(&[]), 0.0);
}
