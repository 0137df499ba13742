//! Properties of the integrated coupling flow.

use iqa_core::annealer::{anneal, propagate_frozen, IntegratorConfig, RunParams, Schedule};
use iqa_core::commutator::commutator_matrix;
use iqa_core::model::{basis_descriptor, kitaev_couplings};
use iqa_core::spectra::{fidelity, field_of};
use iqa_core::{anneal_run, CouplingVector};
use nalgebra::DVector;

#[test]
fn frozen_generator_matches_matrix_exponential() {
    let basis = basis_descriptor(10, 3).unwrap();
    let h0 = kitaev_couplings(0.0, &basis).unwrap().normalized().unwrap();
    for lambda in [0.3, 0.5, 0.8] {
        let k = commutator_matrix(lambda, &basis).entries().clone();
        for t in [1.0, 10.0, 100.0] {
            let exact = (k.clone() * t).exp() * h0.values();
            let steps = (t / 0.005) as usize;
            let rk = propagate_frozen(&h0, lambda, t, steps).unwrap();
            let err = (rk - &exact).amax();
            assert!(err < 1e-8, "λ={lambda} t={t}: {err:e}");
        }
    }
}

#[test]
fn flow_is_linear_in_the_start() {
    let basis = basis_descriptor(12, 4).unwrap();
    let a = CouplingVector::new(
        basis.clone(),
        DVector::from_fn(basis.len(), |i, _| (i as f64 * 0.9).cos()),
    )
    .unwrap();
    let b = kitaev_couplings(0.0, &basis).unwrap();
    let mix = CouplingVector::new(basis.clone(), a.values() * 0.7 - b.values() * 1.3).unwrap();
    let schedule = Schedule::linear(50.0).unwrap();
    let cfg = IntegratorConfig::new(500, 11).unwrap();
    let ta = anneal(&a, &schedule, &cfg).unwrap();
    let tb = anneal(&b, &schedule, &cfg).unwrap();
    let tm = anneal(&mix, &schedule, &cfg).unwrap();
    for i in 0..11 {
        let want = &ta.samples()[i].h * 0.7 - &tb.samples()[i].h * 1.3;
        assert!((&tm.samples()[i].h - want).amax() < 1e-12);
    }
}

#[test]
fn norm_is_conserved() {
    let traj = anneal_run(&RunParams::new(20, 4, 2000.0)).unwrap();
    assert!(traj.max_norm_drift() < 1e-6, "{:e}", traj.max_norm_drift());
    for s in traj.samples() {
        assert!((s.h.norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn complete_basis_flow_is_isospectral() {
    let params = RunParams::new(12, 6, 300.0).with_sample_count(31);
    let traj = anneal_run(&params).unwrap();
    let sorted = |i: usize| {
        let mut m = field_of(&traj.couplings(i)).magnitudes();
        m.sort_by(f64::total_cmp);
        m
    };
    let first = sorted(0);
    for i in 1..traj.samples().len() {
        for (a, b) in sorted(i).iter().zip(&first) {
            assert!((a - b).abs() < 1e-6, "sample {i}: {a} vs {b}");
        }
    }
}

#[test]
fn slow_complete_flow_tracks_the_target() {
    let params = RunParams::new(12, 6, 4000.0).with_sample_count(11);
    let traj = anneal_run(&params).unwrap();
    for (i, s) in traj.samples().iter().enumerate() {
        let f = fidelity(&traj.couplings(i), s.lambda).fidelity;
        assert!(f > 0.99, "λ={}: {f}", s.lambda);
    }
}

#[test]
fn integration_is_deterministic() {
    let p = RunParams::new(16, 3, 200.0).with_sample_count(21);
    let a = anneal_run(&p).unwrap();
    let b = anneal_run(&p).unwrap();
    assert_eq!(a, b);
}
