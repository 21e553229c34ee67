//! Statistical invariants checked at fixed seeds.

mod common;

use quasiortho::decoherence::{
    generate_branches, suppression_experiment, typicality_ratio, Dynamics, MeasurementModel,
};
use quasiortho::deff::{ipr_dimension, microcanonical_dim, suppression_scale, Spectrum};
use quasiortho::hypothesis::{ks_test, ks_two_sample, wilson_interval};
use quasiortho::overlap::overlap_tail_bound;
use quasiortho::overlap::two_sided_exact_tail;
use quasiortho::packing::{lower_bound, success_rate_experiment};
use quasiortho::sample::{sample_overlaps, sample_pair_overlaps, EmpiricalSample};
use quasiortho::state::{chordal_distance, haar_state, overlap_sq};
use quasiortho::unitary::{apply, apply_local, haar_unitary};
use quasiortho::{RngStream, StateVector, C64};

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

#[test]
fn haar_state_mean_at_d64() {
    let s = sample_overlaps(64, 100_000, &RngStream::new(64, 0)).unwrap();
    assert!((s.mean() - 1.0 / 64.0).abs() <= 5.0 * s.standard_error());
}

#[test]
fn haar_unitary_column_follows_beta_survival() {
    let mut rng = RngStream::new(16, 0);
    let e1 = StateVector::basis(16, 0).unwrap();
    let n = 10_000;
    let mut hits = 0;
    for _ in 0..n {
        let u = haar_unitary(16, &mut rng).unwrap();
        if overlap_sq(&apply(&u, &e1).unwrap(), &e1).unwrap() >= 0.1 {
            hits += 1;
        }
    }
    // 0.9^15
    let target = 0.205_891_132_094_649;
    let (lo, hi) = wilson_interval(hits, n, 0.01).unwrap();
    assert!(lo <= target && target <= hi, "{hits}/{n}: [{lo}, {hi}]");
}

#[test]
fn haar_sampling_is_unitarily_invariant() {
    let d = 32;
    let v = haar_unitary(d, &mut RngStream::new(100, 0)).unwrap();
    let e1 = StateVector::basis(d, 0).unwrap();
    let mut a_rng = RngStream::new(100, 1);
    let mut b_rng = RngStream::new(100, 2);
    let n = 10_000;
    let rotated: Vec<f64> = (0..n)
        .map(|_| overlap_sq(&apply(&v, &haar_state(d, &mut a_rng).unwrap()).unwrap(), &e1).unwrap())
        .collect();
    let plain: Vec<f64> = (0..n)
        .map(|_| overlap_sq(&haar_state(d, &mut b_rng).unwrap(), &e1).unwrap())
        .collect();
    let r = ks_two_sample(&sorted(rotated), &sorted(plain), 0.01).unwrap();
    assert!(r.pass, "{r:?}");
}

#[test]
fn overlap_is_two_lipschitz() {
    let d = 128;
    let mut rng = RngStream::new(128, 0);
    let reference = haar_state(d, &mut rng).unwrap();
    for i in 0..10_000 {
        let psi = haar_state(d, &mut rng).unwrap();
        // half the pairs are close, where the bound is tight
        let chi = if i % 2 == 0 {
            haar_state(d, &mut rng).unwrap()
        } else {
            let scale = 1e-3 * (1 + i % 100) as f64;
            let amps: Vec<C64> = psi
                .amplitudes()
                .iter()
                .map(|a| a + rng.complex_gaussian() * scale)
                .collect();
            StateVector::normalized(amps).unwrap()
        };
        let lhs = (overlap_sq(&psi, &reference).unwrap() - overlap_sq(&chi, &reference).unwrap()).abs();
        let rhs = 2.0 * chordal_distance(&psi, &chi).unwrap() + 1e-12;
        assert!(lhs <= rhs, "pair {i}: {lhs} > {rhs}");
    }
}

#[test]
fn apply_local_matches_dense_embedding() {
    let mut rng = RngStream::new(404, 0);
    for n in 1..=4usize {
        let psi = haar_state(1 << n, &mut rng).unwrap();
        let mut target_sets: Vec<Vec<usize>> = (0..n).map(|t| vec![t]).collect();
        for a in 0..n {
            for b in 0..n {
                if a != b {
                    target_sets.push(vec![a, b]);
                }
            }
        }
        if n >= 3 {
            target_sets.push(vec![2, 0, 1]);
            target_sets.push(vec![n - 1, 1, 0]);
        }
        for targets in target_sets {
            let u = haar_unitary(1 << targets.len(), &mut rng).unwrap();
            let fast = apply_local(&u, &targets, &psi).unwrap();
            let dense = common::dense_embedding(&u, &targets, n);
            let slow = common::mat_vec(&dense, psi.amplitudes());
            for (a, b) in fast.amplitudes().iter().zip(&slow) {
                assert!((a - b).norm() < 1e-10, "n={n} targets={targets:?}");
            }
            assert!((fast.norm_sqr() - 1.0).abs() < 1e-9);
        }
    }
}

#[test]
fn exact_law_on_several_seeds() {
    for d in [2, 64, 1024] {
        for seed in [1, 2] {
            let s = sample_overlaps(d, 20_000, &RngStream::new(seed, 7)).unwrap();
            assert!(ks_test(&s).unwrap().pass, "d={d} seed={seed}");
        }
    }
}

#[test]
fn pair_overlaps_match_fixed_reference_law() {
    let fixed = sample_overlaps(256, 10_000, &RngStream::new(256, 0)).unwrap();
    let pairs = sample_pair_overlaps(256, 10_000, &RngStream::new(256, 1)).unwrap();
    let r = ks_two_sample(fixed.values(), pairs.values(), 0.01).unwrap();
    assert!(r.pass, "{r:?}");
    assert!(ks_test(&pairs).unwrap().pass);
}

#[test]
fn survival_exceedance_at_d1024() {
    let s = sample_overlaps(1024, 100_000, &RngStream::new(5, 5)).unwrap();
    let (lo, hi) = wilson_interval(s.exceedances(0.005) as u64, 100_000, 0.01).unwrap();
    assert!(lo <= 5.929_411_657_474_158e-3 && 5.929_411_657_474_158e-3 <= hi);
}

#[test]
fn levy_grid_dominates_exact_tail() {
    for d in [2, 16, 128, 1024, 4096] {
        for delta in [0.01, 0.05, 0.1, 0.5, 1.0] {
            assert!(two_sided_exact_tail(d, delta).unwrap() <= overlap_tail_bound(d, delta).unwrap().value);
        }
    }
}

#[test]
fn union_bound_grid() {
    let grid = [
        (100usize, 0.1, 111usize),
        (64, 0.2, lower_bound(64, 0.2).unwrap() as usize),
        (32, 0.3, lower_bound(32, 0.3).unwrap() as usize),
    ];
    for (i, (d, eps, m)) in grid.into_iter().enumerate() {
        let r = success_rate_experiment(d, eps, m, 200, &RngStream::new(77, i as u64)).unwrap();
        assert!(r.report.pass, "({d}, {eps}, {m}): {:?}", r.report);
        assert!(r.fraction >= r.guarantee - 3.0 * (r.fraction * (1.0 - r.fraction) / 200.0).sqrt());
    }
}

fn haar_model(n: u32) -> MeasurementModel {
    MeasurementModel::equal_weights(2, n, Dynamics::ExactHaar { dense_unitaries: false }).unwrap()
}

#[test]
fn haar_branches_follow_beta_law() {
    let model = haar_model(8);
    let rng = RngStream::new(88, 0);
    let values: Vec<f64> = (0..10_000)
        .map(|t| {
            generate_branches(&model, &rng.substream(t))
                .unwrap()
                .pairwise_overlaps()[0]
                .1
        })
        .collect();
    let s = EmpiricalSample::from_values(256, values, 88, 0).unwrap();
    assert!(ks_test(&s).unwrap().pass);
}

#[test]
fn haar_branch_suppression_at_n10() {
    let rec = suppression_experiment(&haar_model(10), 200, &RngStream::new(12, 0)).unwrap();
    let (scale, amp) = suppression_scale(1024.0).unwrap();
    assert_eq!(rec.predicted_overlap_sq, scale);
    assert_eq!(rec.predicted_amplitude, amp);
    assert!((rec.mean_overlap_sq - scale).abs() <= 5.0 * rec.se_overlap_sq);
    assert!((0.8..=1.25).contains(&rec.typicality_ratio), "{}", rec.typicality_ratio);
    assert!(!rec.atypical);
    // E|g| for |g|^2 ~ Beta(1, 1023): Gamma(3/2) Gamma(1024) / Gamma(1024.5)
    let mean_amplitude = 0.027_697_972_314_042_76;
    let expect = mean_amplitude / 2.0;
    assert!(
        (rec.mean_max_coherence / expect - 1.0).abs() <= 0.1,
        "{}",
        rec.mean_max_coherence
    );
}

#[test]
fn dense_haar_unitaries_give_same_law() {
    let model = MeasurementModel::equal_weights(2, 5, Dynamics::ExactHaar { dense_unitaries: true }).unwrap();
    let rng = RngStream::new(55, 0);
    let values: Vec<f64> = (0..2_000)
        .map(|t| {
            generate_branches(&model, &rng.substream(t))
                .unwrap()
                .pairwise_overlaps()[0]
                .1
        })
        .collect();
    let s = EmpiricalSample::from_values(32, values, 55, 0).unwrap();
    assert!(ks_test(&s).unwrap().pass);
}

#[test]
fn deep_brickwork_approaches_typicality() {
    let n = 8;
    let deep = MeasurementModel::equal_weights(2, n, Dynamics::chaotic_default(n)).unwrap();
    let rec = suppression_experiment(&deep, 200, &RngStream::new(31, 0)).unwrap();
    assert!((0.7..=1.4).contains(&rec.typicality_ratio), "{}", rec.typicality_ratio);
}

#[test]
fn typicality_ratio_single_sets() {
    let model = haar_model(10);
    let rng = RngStream::new(3, 3);
    let ratios: Vec<f64> = (0..200)
        .map(|t| typicality_ratio(&generate_branches(&model, &rng.substream(t)).unwrap(), 1024.0).unwrap())
        .collect();
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((0.8..=1.25).contains(&mean), "{mean}");
}

#[test]
fn ipr_of_haar_states() {
    let mut rng = RngStream::new(1024, 0);
    let mean = (0..100)
        .map(|_| ipr_dimension(&haar_state(1024, &mut rng).unwrap(), None).unwrap())
        .sum::<f64>()
        / 100.0;
    // E sum p^2 = 2 / (d + 1)
    assert!((mean / 512.5 - 1.0).abs() <= 0.1, "{mean}");
}

#[test]
fn shell_entropy_is_extensive() {
    let log_shell = |n: u32| {
        let s = Spectrum::popcount(n).unwrap();
        (microcanonical_dim(&s, (n / 2) as f64, 1.0).unwrap() as f64).ln()
    };
    let ns = [8u32, 12, 16, 20];
    let values: Vec<f64> = ns.iter().map(|&n| log_shell(n)).collect();
    for (w, v) in ns.windows(2).zip(values.windows(2)) {
        let slope = (v[1] - v[0]) / (w[1] - w[0]) as f64;
        assert!(slope > 0.0 && slope < std::f64::consts::LN_2);
    }
    let last_slope = (values[3] - values[2]) / 4.0;
    assert!(
        (last_slope / std::f64::consts::LN_2 - 1.0).abs() <= 0.15,
        "{last_slope}"
    );
    for n in ns {
        assert_eq!(
            microcanonical_dim(&Spectrum::popcount(n).unwrap(), (n / 2) as f64, 1.0).unwrap() as u64,
            common::binomial(n as u64, (n / 2) as u64)
        );
    }
}
