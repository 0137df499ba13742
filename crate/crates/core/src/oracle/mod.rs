//! Dense brute-force reference for small chains (`N ≤ 10`).
//!
//! Operators are built directly on the `2ᴺ`-dimensional Fock space, either
//! from fermion ladder operators with antiperiodic boundary or from
//! Jordan–Wigner spin strings with periodic boundary. Everything the
//! analytic modules compute in momentum space has a counterpart here that
//! never goes through the pseudospin decomposition.

mod fock;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::commutator::GENERATOR_PER_EXPECTATION;
use crate::error::{Error, Result};
use crate::model::{target_bloch, Axis, BasisDescriptor, CouplingVector, MomentumGrid};
use fock::{antiperiodic, apply_monomial, apply_pauli_string, is_even, Ladder, Pauli};

/// Largest chain the dense oracle accepts.
pub const MAX_ORACLE_SITES: usize = 10;

/// Ground states closer than this to the first excited level are rejected.
pub const DEGENERACY_GAP: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sector {
    /// Whole Fock space, `2ᴺ` states.
    Full,
    /// Even occupation parity, `2ᴺ⁻¹` states in increasing index order.
    Even,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    n_sites: usize,
    sector: Sector,
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Restriction to the even-parity sector.
    pub fn even_block(&self) -> DenseOperator {
        match self.sector {
            Sector::Even => self.clone(),
            Sector::Full => {
                let idx = even_states(self.n_sites);
                let matrix =
                    DMatrix::from_fn(idx.len(), idx.len(), |i, j| self.matrix[(idx[i], idx[j])]);
                DenseOperator {
                    n_sites: self.n_sites,
                    sector: Sector::Even,
                    matrix,
                }
            }
        }
    }

    /// `max |M − M†|`.
    pub fn hermitian_defect(&self) -> f64 {
        let m = &self.matrix;
        (m - m.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest matrix element connecting opposite parities; zero for
    /// operators already restricted to one sector.
    pub fn parity_defect(&self) -> f64 {
        if self.sector == Sector::Even {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for j in 0..self.dim() {
            for i in 0..self.dim() {
                if is_even(i) != is_even(j) {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }

    fn scaled(mut self, factor: f64) -> Self {
        self.matrix *= Complex64::new(factor, 0.0);
        self
    }
}

fn check_sites(n_sites: usize) -> Result<()> {
    if n_sites > MAX_ORACLE_SITES {
        return Err(Error::Resource {
            requested: n_sites,
            max: MAX_ORACLE_SITES,
        });
    }
    MomentumGrid::new(n_sites).map(|_| ())
}

fn check_label(m: usize, axis: Axis, n_sites: usize) -> Result<()> {
    if m > n_sites / 2 || (m == 0 && axis != Axis::Z) {
        return Err(Error::invalid(format!(
            "no basis operator ({m},{axis}) on {n_sites} sites"
        )));
    }
    Ok(())
}

/// Even-parity basis states in increasing order.
pub fn even_states(n_sites: usize) -> Vec<usize> {
    (0..1usize << n_sites).filter(|&s| is_even(s)).collect()
}

fn from_fermion_terms(n_sites: usize, terms: &[(Complex64, Vec<Ladder>)]) -> DenseOperator {
    let dim = 1usize << n_sites;
    let mut matrix = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        for (coef, ops) in terms {
            if let Some((sign, t)) = apply_monomial(ops, s) {
                matrix[(t, s)] += coef * sign;
            }
        }
    }
    DenseOperator {
        n_sites,
        sector: Sector::Full,
        matrix,
    }
}

fn from_pauli_terms(n_sites: usize, terms: &[(f64, Vec<(Pauli, usize)>)]) -> DenseOperator {
    let dim = 1usize << n_sites;
    let mut matrix = DMatrix::zeros(dim, dim);
    for s in 0..dim {
        for (coef, ops) in terms {
            let (phase, t) = apply_pauli_string(ops, s);
            matrix[(t, s)] += phase * *coef;
        }
    }
    DenseOperator {
        n_sites,
        sector: Sector::Full,
        matrix,
    }
}

/// Fermionic `Σ_m^α` on the full Fock space, antiperiodic boundary.
pub fn fermion_sigma(m: usize, axis: Axis, n_sites: usize) -> Result<DenseOperator> {
    check_sites(n_sites)?;
    check_label(m, axis, n_sites)?;
    let pref = 1.0 / (2.0 * (n_sites as f64).sqrt());
    let one = Complex64::new(pref, 0.0);
    let i = Complex64::new(0.0, pref);
    let mut terms = Vec::new();
    for j in 0..n_sites {
        let (bc, jm) = antiperiodic(j + m, n_sites);
        use Ladder::{Annihilate as A, Create as C};
        match axis {
            Axis::X => {
                terms.push((one * bc, vec![C(j), C(jm)]));
                terms.push((one * bc, vec![A(jm), A(j)]));
            }
            Axis::Y => {
                terms.push((i * bc, vec![C(j), C(jm)]));
                terms.push((-i * bc, vec![A(jm), A(j)]));
            }
            Axis::Z => {
                terms.push((one * bc, vec![C(j), A(jm)]));
                terms.push((-one * bc, vec![A(j), C(jm)]));
            }
        }
    }
    Ok(from_fermion_terms(n_sites, &terms))
}

/// Jordan–Wigner spin string `S_m^α` with periodic boundary.
pub fn spin_string_operator(m: usize, axis: Axis, n_sites: usize) -> Result<DenseOperator> {
    check_sites(n_sites)?;
    check_label(m, axis, n_sites)?;
    let sqrt_n = (n_sites as f64).sqrt();
    if m == 0 {
        let terms: Vec<_> = (0..n_sites)
            .map(|j| (-1.0 / (2.0 * sqrt_n), vec![(Pauli::Z, j)]))
            .collect();
        return Ok(from_pauli_terms(n_sites, &terms));
    }
    let pref = 1.0 / (4.0 * sqrt_n);
    let mut terms = Vec::new();
    for j in 0..n_sites {
        let string = |a: Pauli, b: Pauli| {
            let mut ops = vec![(a, j)];
            ops.extend((j + 1..j + m).map(|q| (Pauli::Z, q % n_sites)));
            ops.push((b, (j + m) % n_sites));
            ops
        };
        let pairs: [(f64, Pauli, Pauli); 2] = match axis {
            Axis::X => [(1.0, Pauli::X, Pauli::X), (-1.0, Pauli::Y, Pauli::Y)],
            Axis::Y => [(1.0, Pauli::X, Pauli::Y), (1.0, Pauli::Y, Pauli::X)],
            Axis::Z => [(1.0, Pauli::X, Pauli::X), (1.0, Pauli::Y, Pauli::Y)],
        };
        for (sign, a, b) in pairs {
            terms.push((sign * pref, string(a, b)));
        }
    }
    Ok(from_pauli_terms(n_sites, &terms))
}

/// Even-sector blocks of the scaled basis operators `L_i`, in label order.
pub fn basis_operators(basis: &BasisDescriptor) -> Result<Vec<DenseOperator>> {
    basis
        .labels()
        .iter()
        .map(|lab| {
            Ok(fermion_sigma(lab.range, lab.axis, basis.n_sites())?
                .even_block()
                .scaled(lab.scale))
        })
        .collect()
}

/// `H_K(λ)/J` assembled from nearest-neighbour fermion terms, even sector.
pub fn dense_kitaev_hamiltonian(lambda: f64, n_sites: usize) -> Result<DenseOperator> {
    check_sites(n_sites)?;
    let s = Complex64::new((lambda * std::f64::consts::FRAC_PI_2).sin(), 0.0);
    let c = Complex64::new((lambda * std::f64::consts::FRAC_PI_2).cos(), 0.0);
    use Ladder::{Annihilate as A, Create as C};
    let mut terms = Vec::new();
    for j in 0..n_sites {
        let (bc, j1) = antiperiodic(j + 1, n_sites);
        terms.push((s * bc, vec![C(j), C(j1)]));
        terms.push((s * bc, vec![A(j1), A(j)]));
        terms.push((s * bc, vec![C(j), A(j1)]));
        terms.push((s * bc, vec![C(j1), A(j)]));
        terms.push((c, vec![C(j), A(j)]));
        terms.push((-c, vec![A(j), C(j)]));
    }
    Ok(from_fermion_terms(n_sites, &terms).even_block())
}

/// `Σ_i h_i L_i`, even sector.
pub fn dense_hamiltonian(h: &CouplingVector) -> Result<DenseOperator> {
    let ops = basis_operators(h.basis())?;
    let dim = ops[0].dim();
    let mut matrix = DMatrix::zeros(dim, dim);
    for (op, &x) in ops.iter().zip(h.values().iter()) {
        matrix += op.matrix() * Complex64::new(x, 0.0);
    }
    Ok(DenseOperator {
        n_sites: h.basis().n_sites(),
        sector: Sector::Even,
        matrix,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DenseGround {
    pub energy: f64,
    pub gap: f64,
    /// Normalized; largest-magnitude amplitude real and positive.
    pub state: DVector<Complex64>,
}

fn fix_phase(v: &mut DVector<Complex64>) {
    let pivot = v.iter().copied().fold(Complex64::new(0.0, 0.0), |best, z| {
        if z.norm() > best.norm() * (1.0 + 1e-12) {
            z
        } else {
            best
        }
    });
    if pivot.norm() > 0.0 {
        let phase = pivot.conj() / pivot.norm();
        *v *= phase;
    }
}

/// Lowest eigenpair by full diagonalization.
pub fn dense_ground(op: &DenseOperator) -> Result<DenseGround> {
    let eig = SymmetricEigen::new(op.matrix().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let e0 = eig.eigenvalues[order[0]];
    let gap = order
        .get(1)
        .map_or(f64::INFINITY, |&i| eig.eigenvalues[i] - e0);
    if gap < DEGENERACY_GAP {
        return Err(Error::Degenerate {
            gap,
            threshold: DEGENERACY_GAP,
        });
    }
    let mut state = eig.eigenvectors.column(order[0]).into_owned();
    state /= Complex64::new(state.norm(), 0.0);
    fix_phase(&mut state);
    Ok(DenseGround {
        energy: e0,
        gap,
        state,
    })
}

/// Ground state `ψ(λ)` of the dense `H_K(λ)` in the even sector.
pub fn dense_target_state(lambda: f64, n_sites: usize) -> Result<DVector<Complex64>> {
    Ok(dense_ground(&dense_kitaev_hamiltonian(lambda, n_sites)?)?.state)
}

pub fn dense_ground_energy(lambda: f64, n_sites: usize) -> Result<f64> {
    Ok(dense_ground(&dense_kitaev_hamiltonian(lambda, n_sites)?)?.energy)
}

/// `c_q† ψ` with `c_q† = (e^{iπ/4}/√N) Σ_j e^{iqj} c_j†`.
fn momentum_creation(q: f64, psi: &DVector<Complex64>, n_sites: usize) -> DVector<Complex64> {
    let mut out = DVector::zeros(psi.len());
    let norm = Complex64::from_polar(1.0 / (n_sites as f64).sqrt(), std::f64::consts::FRAC_PI_4);
    for j in 0..n_sites {
        let coef = norm * Complex64::from_polar(1.0, q * j as f64);
        for (s, &amp) in psi.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some((sign, t)) = apply_monomial(&[Ladder::Create(j)], s) {
                out[t] += coef * amp * sign;
            }
        }
    }
    out
}

/// `Π_k (cos θ_k − sin θ_k c_k† c_{−k}†)|0⟩` restricted to the even sector,
/// with the same phase convention as [`dense_target_state`].
pub fn product_target_state(lambda: f64, n_sites: usize) -> Result<DVector<Complex64>> {
    check_sites(n_sites)?;
    let grid = MomentumGrid::new(n_sites)?;
    let mut psi = DVector::zeros(1usize << n_sites);
    psi[0] = Complex64::new(1.0, 0.0);
    for &k in grid.momenta() {
        let theta = target_bloch(lambda, k).theta;
        let pair = momentum_creation(k, &momentum_creation(-k, &psi, n_sites), n_sites);
        psi = psi * Complex64::new(theta.cos(), 0.0) - pair * Complex64::new(theta.sin(), 0.0);
    }
    let idx = even_states(n_sites);
    let mut even = DVector::from_fn(idx.len(), |i, _| psi[idx[i]]);
    fix_phase(&mut even);
    Ok(even)
}

/// Raw expectations `i⟨ψ(λ)|[L_i, L_j]|ψ(λ)⟩`.
pub fn dense_commutator_expectations(lambda: f64, basis: &BasisDescriptor) -> Result<DMatrix<f64>> {
    let psi = dense_target_state(lambda, basis.n_sites())?;
    let images: Vec<DVector<Complex64>> = basis_operators(basis)?
        .iter()
        .map(|op| op.matrix() * &psi)
        .collect();
    let d = images.len();
    // i(⟨Aψ|Bψ⟩ − ⟨Bψ|Aψ⟩) = −2 Im⟨Aψ|Bψ⟩ for Hermitian A, B.
    Ok(DMatrix::from_fn(d, d, |i, j| {
        -2.0 * images[i].dotc(&images[j]).im
    }))
}

/// Dense commutator matrix in the normalization of the flow generator.
pub fn dense_commutator_matrix(lambda: f64, basis: &BasisDescriptor) -> Result<DMatrix<f64>> {
    Ok(dense_commutator_expectations(lambda, basis)? * GENERATOR_PER_EXPECTATION)
}

/// `|⟨GS(Σ h_i L_i)|ψ(λ)⟩|²` from two dense diagonalizations.
pub fn dense_ground_overlap(h: &CouplingVector, lambda: f64) -> Result<f64> {
    let gs = dense_ground(&dense_hamiltonian(h)?)?;
    let psi = dense_target_state(lambda, h.basis().n_sites())?;
    Ok(gs.state.dotc(&psi).norm_sqr())
}

/// Hilbert–Schmidt Gram matrix `tr(L_i L_j)` over the even sector.
pub fn gram_matrix(basis: &BasisDescriptor) -> Result<DMatrix<f64>> {
    let ops = basis_operators(basis)?;
    let d = ops.len();
    Ok(DMatrix::from_fn(d, d, |i, j| {
        // tr(AB) = Σ_ab A_ab B_ba; both Hermitian so B_ba = conj(B_ab).
        ops[i]
            .matrix()
            .iter()
            .zip(ops[j].matrix().iter())
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::basis_descriptor;

    #[test]
    fn resource_guard() {
        assert!(matches!(
            fermion_sigma(1, Axis::X, 12),
            Err(Error::Resource {
                requested: 12,
                max: 10
            })
        ));
        assert!(spin_string_operator(0, Axis::X, 6).is_err());
        assert!(fermion_sigma(4, Axis::Z, 6).is_err());
        assert!(dense_kitaev_hamiltonian(0.2, 5).is_err());
    }

    #[test]
    fn zeroth_spin_string_is_diagonal() {
        let op = spin_string_operator(0, Axis::Z, 4).unwrap();
        let m = op.matrix();
        for s in 0..16usize {
            let want = -(4.0 - 2.0 * s.count_ones() as f64) / (2.0 * 2.0);
            assert!((m[(s, s)].re - want).abs() < 1e-15);
        }
        let off: f64 = (0..16)
            .flat_map(|i| (0..16).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| m[(i, j)].norm())
            .sum();
        assert_eq!(off, 0.0);
    }

    #[test]
    fn vacuum_at_lambda_zero() {
        let psi = dense_target_state(0.0, 6).unwrap();
        assert!((psi[0].re - 1.0).abs() < 1e-12);
        assert!(psi.iter().skip(1).all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn operators_hermitian_and_parity_preserving() {
        let n = 6;
        for m in 0..=3 {
            for axis in Axis::ALL {
                if m == 0 && axis != Axis::Z {
                    continue;
                }
                for op in [
                    fermion_sigma(m, axis, n).unwrap(),
                    spin_string_operator(m, axis, n).unwrap(),
                ] {
                    assert!(op.hermitian_defect() < 1e-12);
                    assert!(op.parity_defect() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gram_is_uniform_diagonal() {
        let basis = basis_descriptor(4, 2).unwrap();
        let g = gram_matrix(&basis).unwrap();
        let want = DMatrix::identity(basis.len(), basis.len());
        assert!((g - want).amax() < 1e-12);
    }
}
