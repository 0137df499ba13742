//! Momentum grid, operator basis and the Kitaev target path.
//!
//! Every quadratic, translation- and reflection-invariant fermion Hamiltonian
//! on `N` sites with antiperiodic boundary conditions decomposes over the
//! half-integer momenta `k = (2n+1)π/N`, `n = 0..N/2`, into independent
//! pseudospins `σ̃_k`. The operator basis used here is
//!
//! ```text
//! Σ_0^Z/√2, Σ_1^X, Σ_1^Y, Σ_1^Z, …, Σ_l^X, Σ_l^Y, Σ_l^Z          (l < N/2)
//! … , Σ_{N/2-1}^Z, Σ_{N/2}^X/√2, Σ_{N/2}^Y/√2                     (l = N/2)
//! ```
//!
//! with `Σ_m^α = (1/2√N) Σ_j (…)` the range-`m` hopping/pairing operators.
//! All basis elements have the same Hilbert–Schmidt norm, so coupling vectors
//! can be compared with the ordinary Euclidean norm.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

use nalgebra::DVector;

use crate::error::{Error, Result};

/// Critical point of the Kitaev path.
pub const CRITICAL_LAMBDA: f64 = 0.5;

/// Half-integer momenta of the antiperiodic, even-parity sector.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    n_sites: usize,
    ks: Vec<f64>,
}

impl MomentumGrid {
    pub fn new(n_sites: usize) -> Result<Self> {
        if n_sites < 4 || n_sites % 2 != 0 {
            return Err(Error::invalid(format!(
                "number of sites must be even and at least 4, got {n_sites}"
            )));
        }
        let ks = (0..n_sites / 2)
            .map(|n| (2 * n + 1) as f64 * PI / n_sites as f64)
            .collect();
        Ok(Self { n_sites, ks })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn momenta(&self) -> &[f64] {
        &self.ks
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }
}

pub fn momentum_grid(n_sites: usize) -> Result<MomentumGrid> {
    MomentumGrid::new(n_sites)
}

/// Operator family of a basis element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Pairing, real part.
    X,
    /// Pairing, imaginary part.
    Y,
    /// Hopping / on-site.
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    /// Column offset of the axis inside a momentum triple.
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// One basis element `scale · Σ_range^axis`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisLabel {
    pub range: usize,
    pub axis: Axis,
    pub scale: f64,
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.range, self.axis)
    }
}

/// Canonically ordered basis of range-`l` interactions on `N` sites.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisDescriptor {
    n_sites: usize,
    range: usize,
    labels: Vec<BasisLabel>,
}

impl BasisDescriptor {
    pub fn new(n_sites: usize, range: usize) -> Result<Self> {
        // Validates the parity of N as a side effect.
        MomentumGrid::new(n_sites)?;
        let half = n_sites / 2;
        if range < 1 || range > half {
            return Err(Error::invalid(format!(
                "interaction range must lie in 1..={half} for N = {n_sites}, got {range}"
            )));
        }
        let mut labels = Vec::with_capacity(3 * range + 1);
        labels.push(BasisLabel {
            range: 0,
            axis: Axis::Z,
            scale: FRAC_1_SQRT_2,
        });
        for m in 1..=range {
            if m == half {
                // Σ_{N/2}^Z vanishes identically.
                for axis in [Axis::X, Axis::Y] {
                    labels.push(BasisLabel {
                        range: m,
                        axis,
                        scale: FRAC_1_SQRT_2,
                    });
                }
            } else {
                for axis in Axis::ALL {
                    labels.push(BasisLabel {
                        range: m,
                        axis,
                        scale: 1.0,
                    });
                }
            }
        }
        Ok(Self {
            n_sites,
            range,
            labels,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    /// Interaction range `l`.
    pub fn range(&self) -> usize {
        self.range
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// `true` when the basis spans every translation-invariant quadratic
    /// Hamiltonian (`l = N/2`).
    pub fn is_complete(&self) -> bool {
        self.range == self.n_sites / 2
    }

    pub fn index_of(&self, range: usize, axis: Axis) -> Option<usize> {
        self.labels
            .iter()
            .position(|lab| lab.range == range && lab.axis == axis)
    }

    pub fn grid(&self) -> MomentumGrid {
        MomentumGrid::new(self.n_sites).expect("basis holds a validated size")
    }
}

pub fn basis_descriptor(n_sites: usize, range: usize) -> Result<BasisDescriptor> {
    BasisDescriptor::new(n_sites, range)
}

/// Normalized pseudospin field of the Kitaev ground state at one momentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetBloch {
    pub v_x: f64,
    pub v_z: f64,
    /// Single-particle energy `ε_k` in units of `J`.
    pub eps: f64,
    /// Bogoliubov angle `θ_k`.
    pub theta: f64,
}

pub fn target_bloch(lambda: f64, k: f64) -> TargetBloch {
    let (s, c) = (lambda * FRAC_PI_2).sin_cos();
    let (sin_k, cos_k) = k.sin_cos();
    let x = s * sin_k;
    let z = c + s * cos_k;
    // Equal to sqrt(1 + 2 s c cos k) since s² + c² = 1, but never negative
    // under rounding.
    let eps = x.hypot(z);
    TargetBloch {
        v_x: -x / eps,
        v_z: -z / eps,
        eps,
        theta: 0.5 * x.atan2(z),
    }
}

/// Couplings of a Hamiltonian in a given basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingVector {
    basis: BasisDescriptor,
    h: DVector<f64>,
}

impl CouplingVector {
    pub fn new(basis: BasisDescriptor, h: DVector<f64>) -> Result<Self> {
        if h.len() != basis.len() {
            return Err(Error::invalid(format!(
                "coupling vector has {} entries, basis has {}",
                h.len(),
                basis.len()
            )));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("coupling vector has non-finite entries"));
        }
        Ok(Self { basis, h })
    }

    pub fn zeros(basis: BasisDescriptor) -> Self {
        let h = DVector::zeros(basis.len());
        Self { basis, h }
    }

    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn values(&self) -> &DVector<f64> {
        &self.h
    }

    pub fn into_values(self) -> DVector<f64> {
        self.h
    }

    pub fn get(&self, range: usize, axis: Axis) -> Option<f64> {
        self.basis.index_of(range, axis).map(|i| self.h[i])
    }

    pub fn norm(&self) -> f64 {
        self.h.norm()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            basis: self.basis.clone(),
            h: &self.h * factor,
        }
    }

    /// Unit-norm copy. Fails on the zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize a zero coupling vector"));
        }
        Ok(self.scaled(1.0 / norm))
    }
}

/// Expansion of the Kitaev Hamiltonian `H_K(λ)/J` over `basis`.
///
/// `H_K = 2√N [ cos(λπ/2) Σ_0^Z + sin(λπ/2) (Σ_1^X + Σ_1^Z) ]`, so the
/// `(0,Z)` entry absorbs the `1/√2` basis scale.
pub fn kitaev_couplings(lambda: f64, basis: &BasisDescriptor) -> Result<CouplingVector> {
    if basis.range() < 1 {
        return Err(Error::invalid("Kitaev couplings need range at least 1"));
    }
    let (s, c) = (lambda * FRAC_PI_2).sin_cos();
    let root_n = (basis.n_sites() as f64).sqrt();
    let mut h = DVector::zeros(basis.len());
    for (i, lab) in basis.labels().iter().enumerate() {
        h[i] = match (lab.range, lab.axis) {
            (0, Axis::Z) => 2.0 * root_n * c / lab.scale,
            (1, Axis::X) | (1, Axis::Z) => 2.0 * root_n * s / lab.scale,
            _ => 0.0,
        };
    }
    CouplingVector::new(basis.clone(), h)
}
