//! Pseudospin fields, ground states and fidelities.
//!
//! A coupling vector `h` defines `H = Σ_i h_i L_i = Σ_k w_k · σ̃_k` with
//! `w = ½ Fᵀ h`. Each momentum is an independent two-level problem, so the
//! ground state points along `-w_k` and overlaps factorize over `k`.

use nalgebra::Vector3;

use crate::commutator::fourier_matrix;
use crate::model::{target_bloch, CouplingVector, MomentumGrid};

/// Per-momentum pseudospin field, in units of `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochField {
    grid: MomentumGrid,
    w: Vec<Vector3<f64>>,
}

impl BlochField {
    pub fn new(grid: MomentumGrid, w: Vec<Vector3<f64>>) -> Self {
        assert_eq!(grid.len(), w.len(), "one field vector per momentum");
        Self { grid, w }
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn vectors(&self) -> &[Vector3<f64>] {
        &self.w
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        self.w.iter().map(|v| v.norm()).collect()
    }

    pub fn max_magnitude(&self) -> f64 {
        self.w.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

pub fn field_of(h: &CouplingVector) -> BlochField {
    let f = fourier_matrix(h.basis());
    let u = f.entries().tr_mul(h.values());
    let grid = h.basis().grid();
    let w = (0..grid.len())
        .map(|q| 0.5 * Vector3::new(u[3 * q], u[3 * q + 1], u[3 * q + 2]))
        .collect();
    BlochField { grid, w }
}

/// Default degeneracy threshold: `1e-12 · max_k |w_k|`, floored at `1e-300`.
pub fn default_tolerance(field: &BlochField) -> f64 {
    (1e-12 * field.max_magnitude()).max(1e-300)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    /// Unit Bloch vector per momentum; zero for degenerate modes.
    pub directions: Vec<Vector3<f64>>,
    /// Indices of momenta whose field is below the tolerance.
    pub degenerate: Vec<usize>,
}

pub fn ground_state_bloch(field: &BlochField, tol: f64) -> GroundState {
    let mut degenerate = Vec::new();
    let directions = field
        .w
        .iter()
        .enumerate()
        .map(|(q, w)| {
            let norm = w.norm();
            if norm < tol {
                degenerate.push(q);
                Vector3::zeros()
            } else {
                -w / norm
            }
        })
        .collect();
    GroundState {
        directions,
        degenerate,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport {
    pub lambda: f64,
    pub range: usize,
    pub fidelity: f64,
    pub per_k: Vec<f64>,
    /// Momenta whose mode was degenerate; each contributes a factor ½.
    pub degenerate_modes: Vec<f64>,
}

/// `|⟨GS(h)|ψ(λ)⟩|²` as a product of two-level overlaps.
pub fn fidelity(h: &CouplingVector, lambda: f64) -> FidelityReport {
    let field = field_of(h);
    let gs = ground_state_bloch(&field, default_tolerance(&field));
    let ks = field.grid().momenta();
    let per_k: Vec<f64> = gs
        .directions
        .iter()
        .zip(ks)
        .map(|(n, &k)| {
            let t = target_bloch(lambda, k);
            // Degenerate modes have n = 0 and land on exactly ½.
            (0.5 * (1.0 + n.x * t.v_x + n.z * t.v_z)).clamp(0.0, 1.0)
        })
        .collect();
    FidelityReport {
        lambda,
        range: h.basis().range(),
        fidelity: per_k.iter().product(),
        degenerate_modes: gs.degenerate.iter().map(|&q| ks[q]).collect(),
        per_k,
    }
}

/// Ground-state energy `-Σ_k |w_k|`.
pub fn energy(h: &CouplingVector) -> f64 {
    -field_of(h).vectors().iter().map(|w| w.norm()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{basis_descriptor, kitaev_couplings, Axis};
    use approx::assert_abs_diff_eq;
    use nalgebra::DVector;
    use proptest::prelude::*;

    #[test]
    fn single_x_coupling() {
        let basis = basis_descriptor(8, 2).unwrap();
        let mut h = DVector::zeros(basis.len());
        h[basis.index_of(1, Axis::X).unwrap()] = 1.0;
        let field = field_of(&CouplingVector::new(basis, h).unwrap());
        for (w, &k) in field.vectors().iter().zip(field.grid().momenta()) {
            assert_abs_diff_eq!(w.x, k.sin() / 8f64.sqrt(), epsilon = 1e-15);
            assert_eq!((w.y, w.z), (0.0, 0.0));
        }
    }

    #[test]
    fn kitaev_field_is_scaled_target() {
        for n in [6, 10, 30] {
            let basis = basis_descriptor(n, 2).unwrap();
            for i in 0..=10 {
                let lambda = i as f64 / 10.0;
                let field = field_of(&kitaev_couplings(lambda, &basis).unwrap());
                for (w, &k) in field.vectors().iter().zip(field.grid().momenta()) {
                    let t = target_bloch(lambda, k);
                    let want = -2.0 * t.eps * Vector3::new(t.v_x, 0.0, t.v_z);
                    assert_abs_diff_eq!(*w, want, epsilon = 1e-12);
                }
            }
        }
    }

    #[test]
    fn zero_field_and_energy() {
        let basis = basis_descriptor(8, 3).unwrap();
        let zero = CouplingVector::zeros(basis);
        assert!(field_of(&zero)
            .vectors()
            .iter()
            .all(|w| *w == Vector3::zeros()));
        assert_eq!(energy(&zero), 0.0);
        let rep = fidelity(&zero, 0.3);
        assert_eq!(rep.degenerate_modes.len(), 4);
        assert_abs_diff_eq!(rep.fidelity, 0.5f64.powi(4));
    }

    #[test]
    fn two_level_ground_states() {
        let grid = MomentumGrid::new(4).unwrap();
        let field = BlochField::new(
            grid,
            vec![Vector3::new(0.0, 0.0, 1.0), Vector3::new(3.0, 0.0, 0.0)],
        );
        let gs = ground_state_bloch(&field, 1e-12);
        assert_eq!(gs.directions[0], Vector3::new(0.0, 0.0, -1.0));
        assert_eq!(gs.directions[1], Vector3::new(-1.0, 0.0, 0.0));
        assert!(gs.degenerate.is_empty());

        let field = BlochField::new(
            MomentumGrid::new(4).unwrap(),
            vec![Vector3::new(0.0, 1e-14, 0.0), Vector3::new(1.0, 0.0, 0.0)],
        );
        assert_eq!(ground_state_bloch(&field, 1e-12).degenerate, vec![0]);
    }

    #[test]
    fn single_mode_energy() {
        let grid = MomentumGrid::new(4).unwrap();
        let field = BlochField::new(grid, vec![Vector3::new(0.6, 0.0, 0.8), Vector3::zeros()]);
        let e: f64 = -field.magnitudes().iter().sum::<f64>();
        assert_abs_diff_eq!(e, -1.0, epsilon = 1e-15);
    }

    #[test]
    fn exact_couplings_have_unit_fidelity() {
        for n in [4, 8, 20, 50] {
            let basis = basis_descriptor(n, 1).unwrap();
            for i in 0..=20 {
                let lambda = i as f64 / 20.0;
                let rep = fidelity(&kitaev_couplings(lambda, &basis).unwrap(), lambda);
                assert_abs_diff_eq!(rep.fidelity, 1.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn antipodal_state_has_zero_fidelity() {
        let basis = basis_descriptor(8, 2).unwrap();
        let h = kitaev_couplings(0.3, &basis).unwrap().scaled(-1.0);
        let rep = fidelity(&h, 0.3);
        assert!(rep.per_k.iter().all(|&f| f.abs() < 1e-12));
        assert_abs_diff_eq!(rep.fidelity, 0.0, epsilon = 1e-12);
    }

    proptest! {
        #[test]
        fn fidelity_scale_invariant(
            seed in proptest::collection::vec(-1.0f64..1.0, 13),
            c in 0.01f64..100.0,
            lambda in 0.0f64..1.0,
        ) {
            let basis = basis_descriptor(12, 4).unwrap();
            let h = CouplingVector::new(basis, DVector::from_vec(seed)).unwrap();
            let a = fidelity(&h, lambda);
            let b = fidelity(&h.scaled(c), lambda);
            prop_assert!((a.fidelity - b.fidelity).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&a.fidelity));
            let prod: f64 = a.per_k.iter().product();
            prop_assert!((prod - a.fidelity).abs() <= 1e-12);
            if a.per_k.iter().all(|&f| f > 0.0) {
                let logsum: f64 = a.per_k.iter().map(|f| f.ln()).sum();
                prop_assert!((logsum - a.fidelity.ln()).abs() <= 1e-12 * logsum.abs().max(1.0));
            }
        }
    }
}
