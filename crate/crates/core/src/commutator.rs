//! Commutator matrix of the operator basis in the Kitaev ground state.
//!
//! In pseudospin form each basis element is `L_i = ½ Σ_{k,a} F_{i,(k,a)} σ̃_k^a`
//! where `F` is the (row-orthonormal) Fourier matrix below. The ground state
//! factorizes over momenta with Bloch vector `(v_x, 0, v_z)`, so the
//! pseudospin commutator matrix is block diagonal with the 3×3 blocks of
//! [`block`], and the commutator matrix of the basis is `F K′ Fᵀ`.
//!
//! The matrix is normalized as the generator of the coupling flow:
//! `K = GENERATOR_PER_EXPECTATION · i⟨[L_i, L_j]⟩`, a positive constant that
//! fixes the time unit so that `‖K‖ ≤ 1`.

use nalgebra::{DMatrix, Matrix3};

use crate::model::{target_bloch, Axis, BasisDescriptor, MomentumGrid};

/// Ratio between the flow generator and the raw expectation
/// `i⟨ψ|[L_i, L_j]|ψ⟩` of the basis operators.
pub const GENERATOR_PER_EXPECTATION: f64 = 2.0;

/// Skew block of the pseudospin commutator matrix at one momentum.
pub fn block(lambda: f64, k: f64) -> Matrix3<f64> {
    let b = target_bloch(lambda, k);
    bloch_block(b.v_x, b.v_z)
}

fn bloch_block(v_x: f64, v_z: f64) -> Matrix3<f64> {
    Matrix3::new(0.0, v_z, 0.0, -v_z, 0.0, v_x, 0.0, -v_x, 0.0)
}

/// Fourier matrix from basis labels to pseudospin components.
///
/// Columns are ordered `(k₁,x), (k₁,y), (k₁,z), (k₂,x), …`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrix {
    basis: BasisDescriptor,
    entries: DMatrix<f64>,
}

impl FourierMatrix {
    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }
}

/// Entry of the Fourier matrix for `label` at momentum `k` (its own axis).
fn fourier_entry(range: usize, axis: Axis, scale: f64, k: f64, n_sites: usize) -> f64 {
    let phase = range as f64 * k;
    let f = match axis {
        Axis::X | Axis::Y => phase.sin(),
        Axis::Z => phase.cos(),
    };
    2.0 * scale * f / (n_sites as f64).sqrt()
}

pub fn fourier_matrix(basis: &BasisDescriptor) -> FourierMatrix {
    let grid = basis.grid();
    let mut entries = DMatrix::zeros(basis.len(), 3 * grid.len());
    for (i, lab) in basis.labels().iter().enumerate() {
        for (q, &k) in grid.momenta().iter().enumerate() {
            entries[(i, 3 * q + lab.axis.index())] =
                fourier_entry(lab.range, lab.axis, lab.scale, k, basis.n_sites());
        }
    }
    FourierMatrix {
        basis: basis.clone(),
        entries,
    }
}

/// Block-diagonal pseudospin commutator matrix `K′(λ)`.
pub fn pseudospin_commutator(lambda: f64, grid: &MomentumGrid) -> DMatrix<f64> {
    let n = 3 * grid.len();
    let mut kp = DMatrix::zeros(n, n);
    for (q, &k) in grid.momenta().iter().enumerate() {
        kp.fixed_view_mut::<3, 3>(3 * q, 3 * q)
            .copy_from(&block(lambda, k));
    }
    kp
}

/// Dense commutator matrix `K⁽ˡ⁾(λ)` in canonical label order.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorMatrix {
    basis: BasisDescriptor,
    lambda: f64,
    entries: DMatrix<f64>,
}

impl CommutatorMatrix {
    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    /// `max |K + Kᵀ|`.
    pub fn skew_defect(&self) -> f64 {
        (&self.entries + self.entries.transpose()).amax()
    }
}

/// Commutator matrix by per-momentum accumulation.
pub fn commutator_matrix(lambda: f64, basis: &BasisDescriptor) -> CommutatorMatrix {
    Generator::new(basis).matrix(lambda)
}

/// Commutator matrix as the explicit product `F K′ Fᵀ`.
pub fn commutator_matrix_direct(lambda: f64, basis: &BasisDescriptor) -> CommutatorMatrix {
    let f = fourier_matrix(basis);
    let kp = pseudospin_commutator(lambda, &basis.grid());
    let entries = &f.entries * kp * f.entries.transpose();
    CommutatorMatrix {
        basis: basis.clone(),
        lambda,
        entries,
    }
}

/// Matrix-free form of `K⁽ˡ⁾(λ)` used by the integrator.
///
/// Every basis row of `F` touches a single axis, so `F` is stored as one
/// coefficient per (momentum, label) plus the label's axis.
#[derive(Debug, Clone)]
pub struct Generator {
    basis: BasisDescriptor,
    axes: Vec<usize>,
    /// `coeffs[q * dim + i] = F_{i,(k_q, axis_i)}`.
    coeffs: Vec<f64>,
    sin_k: Vec<f64>,
    cos_k: Vec<f64>,
}

/// Bloch vectors `(v_x, v_z)` for every momentum at one value of λ.
#[derive(Debug, Clone, Default)]
pub struct BlochTable {
    v: Vec<(f64, f64)>,
}

impl Generator {
    pub fn new(basis: &BasisDescriptor) -> Self {
        let grid = basis.grid();
        let dim = basis.len();
        let axes = basis.labels().iter().map(|l| l.axis.index()).collect();
        let mut coeffs = vec![0.0; grid.len() * dim];
        for (q, &k) in grid.momenta().iter().enumerate() {
            for (i, lab) in basis.labels().iter().enumerate() {
                coeffs[q * dim + i] =
                    fourier_entry(lab.range, lab.axis, lab.scale, k, basis.n_sites());
            }
        }
        Self {
            basis: basis.clone(),
            axes,
            coeffs,
            sin_k: grid.momenta().iter().map(|k| k.sin()).collect(),
            cos_k: grid.momenta().iter().map(|k| k.cos()).collect(),
        }
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.axes.len()
    }

    /// Fills `table` with the target Bloch vectors at `lambda`.
    pub fn bloch_into(&self, lambda: f64, table: &mut BlochTable) {
        let (s, c) = (lambda * std::f64::consts::FRAC_PI_2).sin_cos();
        table.v.clear();
        table
            .v
            .extend(self.sin_k.iter().zip(&self.cos_k).map(|(&sk, &ck)| {
                let x = s * sk;
                let z = c + s * ck;
                let eps = x.hypot(z);
                (-x / eps, -z / eps)
            }));
    }

    pub fn bloch(&self, lambda: f64) -> BlochTable {
        let mut t = BlochTable::default();
        self.bloch_into(lambda, &mut t);
        t
    }

    /// `out = K h` for the Bloch vectors in `table`.
    pub fn apply(&self, table: &BlochTable, h: &[f64], out: &mut [f64]) {
        let dim = self.dim();
        debug_assert_eq!(h.len(), dim);
        debug_assert_eq!(out.len(), dim);
        out.iter_mut().for_each(|o| *o = 0.0);
        for (q, &(v_x, v_z)) in table.v.iter().enumerate() {
            let row = &self.coeffs[q * dim..(q + 1) * dim];
            let mut u = [0.0f64; 3];
            for ((&c, &a), &x) in row.iter().zip(&self.axes).zip(h) {
                u[a] += c * x;
            }
            let b = [v_z * u[1], v_x * u[2] - v_z * u[0], -v_x * u[1]];
            for ((o, &c), &a) in out.iter_mut().zip(row).zip(&self.axes) {
                *o += c * b[a];
            }
        }
    }

    /// Materialized matrix, accumulated one momentum at a time.
    pub fn matrix(&self, lambda: f64) -> CommutatorMatrix {
        let dim = self.dim();
        let table = self.bloch(lambda);
        let mut entries = DMatrix::zeros(dim, dim);
        for (q, &(v_x, v_z)) in table.v.iter().enumerate() {
            let b = bloch_block(v_x, v_z);
            let row = &self.coeffs[q * dim..(q + 1) * dim];
            for i in 0..dim {
                let ci = row[i];
                if ci == 0.0 {
                    continue;
                }
                for j in 0..dim {
                    entries[(i, j)] += ci * row[j] * b[(self.axes[i], self.axes[j])];
                }
            }
        }
        CommutatorMatrix {
            basis: self.basis.clone(),
            lambda,
            entries,
        }
    }
}
