mod common;

use common::*;
use desitter_core::evolution::{exact_trajectory, ExactPropagator};
use desitter_core::model::ModelParams;
use desitter_core::observables::{observe_exact, total_charge};
use desitter_core::pauli::DenseMatrix;
use desitter_core::state::phase_aligned_distance;
use desitter_core::{
    exact_evolve, exact_evolve_converged, trotter_error_scan, trotter_evolve, trotter_step,
    OracleSettings, StateVector, TimeSampling, TrotterPlan,
};

fn preset(mass: f64) -> ModelParams {
    ModelParams::new(8, 0.1, mass).unwrap()
}

fn hole() -> StateVector {
    StateVector::basis_state(8, 1).unwrap()
}

/// The step's factor list written out by hand, each factor exponentiated by
/// nalgebra.
fn dense_step_oracle(n: usize, h: f64, m: f64, t_sample: f64, dt: f64) -> DenseMatrix {
    let mut factors: Vec<(f64, String)> = Vec::new();
    let pair = |x: usize, a: char| -> String {
        (0..n)
            .map(|q| if q == x || q == x + 1 { a } else { 'I' })
            .collect()
    };
    for x in 0..n - 1 {
        factors.push((-0.5, pair(x, 'X')));
        factors.push((-0.5, pair(x, 'Y')));
    }
    let sign = if (n / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    for a in ['X', 'Y'] {
        let label: String = (0..n)
            .map(|q| if q == 0 || q == n - 1 { a } else { 'Z' })
            .collect();
        factors.push((-0.5 * sign, label));
    }
    for x in 0..n {
        let label: String = (0..n).map(|q| if q == x { 'Z' } else { 'I' }).collect();
        let stagger = if x % 2 == 0 { 1.0 } else { -1.0 };
        factors.push((h / 4.0 + m * (h * t_sample).exp() * stagger / 2.0, label));
    }
    let dim = 1 << n;
    let mut u = DenseMatrix::identity(dim, dim);
    for (coef, label) in factors {
        u = expm_rotation(&kron_label(&label), coef * dt) * u;
    }
    u
}

#[test]
fn single_step_matches_dense_factor_product() {
    let mut rng = rng(20);
    for (h, m, ts) in [(0.1, 1.0, 0.05), (0.4, 0.0, 0.0), (0.2, 2.0, 1.3)] {
        let state = random_state(&mut rng, 4);
        let expected = dense_step_oracle(4, h, m, ts, 0.1) * to_dvector(&state);
        let mut got = state.clone();
        trotter_step(&mut got, &ModelParams::new(4, h, m).unwrap(), ts, 0.1).unwrap();
        assert!(vec_dist(&expected, got.amplitudes()) < 1e-12);
    }
    // N = 6 flips the boundary sign
    let state = random_state(&mut rng, 6);
    let expected = dense_step_oracle(6, 0.1, 1.0, 0.2, 0.1) * to_dvector(&state);
    let mut got = state.clone();
    trotter_step(&mut got, &ModelParams::new(6, 0.1, 1.0).unwrap(), 0.2, 0.1).unwrap();
    assert!(vec_dist(&expected, got.amplitudes()) < 1e-12);
}

#[test]
fn filled_state_only_gains_a_phase() {
    for m in [0.0, 1.0] {
        let initial = StateVector::basis_state(8, 0).unwrap();
        let plan = TrotterPlan::new(1.0, 10).unwrap().retaining_states();
        let traj = trotter_evolve(&initial, &preset(m), &plan).unwrap();
        for s in traj.states.unwrap() {
            let probs = s.probabilities();
            assert!((probs[0] - 1.0).abs() < 1e-12);
            assert!(probs[1..].iter().all(|p| *p < 1e-12));
        }
    }
}

#[test]
fn charge_is_conserved_at_any_step_size() {
    let mut rng = rng(21);
    let initial = random_state(&mut rng, 8);
    let q0 = total_charge(&initial);
    for steps in [1, 3, 10] {
        let plan = TrotterPlan::new(2.0, steps).unwrap();
        let traj = trotter_evolve(&initial, &preset(1.5), &plan).unwrap();
        for r in &traj.records {
            assert!((r.total_sz - q0).abs() < 1e-10);
            assert!((r.norm.unwrap() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn paper_preset_trotter_values_match_independent_implementation() {
    // frozen from a numpy implementation of the same factor order
    let cases = [
        (
            0.0,
            0.6180058916379982,
            26.835190960161032,
            0.42847053374398214,
            0.7387934166542349,
        ),
        (
            1.0,
            0.4259862292501644,
            28.21268883839116,
            -0.14848452097088005,
            0.8789558779258484,
        ),
    ];
    for (m, c_corr, p, chiral, n1) in cases {
        let plan = TrotterPlan::new(1.0, 10).unwrap();
        let last = trotter_evolve(&hole(), &preset(m), &plan)
            .unwrap()
            .final_record()
            .clone();
        assert!((last.correlation_c - c_corr).abs() < 1e-12);
        assert!((last.polarization_over_e - p).abs() < 1e-11);
        assert!((last.chiral_c - chiral).abs() < 1e-12);
        assert!((last.density[1] - n1).abs() < 1e-12);
    }
}

#[test]
fn oracle_values_match_independent_implementation() {
    // scipy eigendecomposition per substep, 8192 midpoint substeps
    let cases = [
        (
            0.0,
            0.6174404346139059,
            26.745785819470555,
            0.4300136814800716,
        ),
        (
            1.0,
            0.42146450697574583,
            28.188874259714463,
            -0.16114961403134398,
        ),
    ];
    for (m, c_corr, p, chiral) in cases {
        let s = exact_evolve(&hole(), &preset(m), 1.0, 8192).unwrap();
        let r = observe_exact(&s, &preset(m), 1.0).unwrap();
        assert!((r.correlation_c - c_corr).abs() < 1e-8);
        assert!((r.polarization_over_e - p).abs() < 1e-7);
        assert!((r.chiral_c - chiral).abs() < 1e-8);
    }
}

#[test]
fn oracle_step_equals_dense_unitary() {
    let params = ModelParams::new(4, 0.3, 1.2).unwrap();
    let mut rng = rng(22);
    let state = random_state(&mut rng, 4);
    let h = desitter_core::pauli::to_dense(&desitter_core::hamiltonian_at(&params, 0.25).unwrap())
        .unwrap();
    let expected = (&h * c(0.0, -0.5)).exp() * to_dvector(&state);
    let mut got = state.clone();
    ExactPropagator::new(&params)
        .unwrap()
        .propagate(&mut got, 0.0, 0.5, 1)
        .unwrap();
    assert!(vec_dist(&expected, got.amplitudes()) < 1e-13);
}

#[test]
fn massless_oracle_is_exact_for_any_substeps() {
    let a = exact_evolve(&hole(), &preset(0.0), 1.0, 1).unwrap();
    for substeps in [2, 7, 100] {
        let b = exact_evolve(&hole(), &preset(0.0), 1.0, substeps).unwrap();
        assert!(phase_aligned_distance(&a, &b).unwrap() < 1e-12);
    }
}

#[test]
fn oracle_converges_quadratically() {
    let levels: Vec<StateVector> = [256, 512, 1024]
        .iter()
        .map(|&s| exact_evolve(&hole(), &preset(1.0), 1.0, s).unwrap())
        .collect();
    let d1 = phase_aligned_distance(&levels[1], &levels[0]).unwrap();
    let d2 = phase_aligned_distance(&levels[2], &levels[1]).unwrap();
    // 256 -> 512 measured independently as 1.3490e-7
    assert!((d1 - 1.3490e-7).abs() < 1e-4 * 1.3490e-7, "{d1}");
    assert!((d1 / d2 - 4.0).abs() < 0.05, "{}", d1 / d2);
}

#[test]
fn converged_oracle_reaches_tolerance() {
    let settings = OracleSettings {
        start_substeps: 256,
        tolerance: 1e-10,
        max_substeps: 1 << 16,
    };
    let oracle = exact_evolve_converged(&hole(), &preset(1.0), 1.0, &settings).unwrap();
    assert!(oracle.converged, "{:?}", oracle.history);
    assert!(oracle.last_change < 1e-10);
    assert_eq!(oracle.substeps, 1 << 15);
}

#[test]
fn oracle_trajectory_conserves_charge_and_number() {
    let times: Vec<f64> = (0..=10).map(|k| k as f64 * 0.1).collect();
    let states = exact_trajectory(&hole(), &preset(1.0), &times, 64).unwrap();
    for (t, s) in times.iter().zip(&states) {
        let r = observe_exact(s, &preset(1.0), *t).unwrap();
        assert!((r.n_total - 7.0 * (0.1 * t).exp()).abs() < 1e-9);
        assert!((r.total_sz - 6.0).abs() < 1e-10);
    }
}

#[test]
fn massless_scan_is_first_order() {
    let settings = OracleSettings::default();
    let scan = trotter_error_scan(
        &preset(0.0),
        &hole(),
        1.0,
        &[10, 20, 40, 80, 640],
        TimeSampling::Midpoint,
        &settings,
    )
    .unwrap();
    for pair in scan.rows[..4].windows(2) {
        let ratio = pair[0].state_distance / pair[1].state_distance;
        assert!((1.5..=2.5).contains(&ratio), "{ratio}");
    }
    assert!(
        scan.rows[4].state_distance < 1e-3,
        "{}",
        scan.rows[4].state_distance
    );
}

#[test]
fn filled_state_scan_has_no_observable_error() {
    let initial = StateVector::basis_state(8, 0).unwrap();
    let settings = OracleSettings {
        start_substeps: 16,
        tolerance: 1e-10,
        max_substeps: 1 << 12,
    };
    let scan = trotter_error_scan(
        &preset(1.0),
        &initial,
        1.0,
        &[10, 20],
        TimeSampling::Midpoint,
        &settings,
    )
    .unwrap();
    for row in &scan.rows {
        assert!(row.deltas.max() < 1e-12, "{row:?}");
    }
}

#[test]
fn left_and_midpoint_sampling_differ_only_when_massive() {
    for (m, differ) in [(0.0, false), (1.0, true)] {
        let run = |s: TimeSampling| {
            let plan = TrotterPlan::new(1.0, 10)
                .unwrap()
                .with_sampling(s)
                .retaining_states();
            trotter_evolve(&hole(), &preset(m), &plan)
                .unwrap()
                .states
                .unwrap()
                .pop()
                .unwrap()
        };
        let d =
            phase_aligned_distance(&run(TimeSampling::Left), &run(TimeSampling::Midpoint)).unwrap();
        assert_eq!(d > 1e-6, differ, "m={m}: {d}");
    }
}

#[test]
fn snapshot_times_are_increasing_from_zero() {
    let plan = TrotterPlan::new(1.0, 10)
        .unwrap()
        .with_snapshot_every(3)
        .unwrap();
    let traj = trotter_evolve(&hole(), &preset(1.0), &plan).unwrap();
    assert_eq!(traj.times[0], 0.0);
    assert!(traj.times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(traj.times.len(), 5);
}
