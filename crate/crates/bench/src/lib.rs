//! Shared fixtures for the criterion benchmarks in `benches/`.

use iqa_core::commutator::Generator;
use iqa_core::model::{basis_descriptor, kitaev_couplings};
use iqa_core::CouplingVector;

/// Generator and unit-norm starting couplings for a chain of `n_sites`
/// with interaction range `range`.
pub fn fixture(n_sites: usize, range: usize) -> (Generator, CouplingVector) {
    let basis = basis_descriptor(n_sites, range).expect("valid benchmark size");
    let h = kitaev_couplings(0.0, &basis)
        .and_then(|h| h.normalized())
        .expect("non-zero start");
    (Generator::new(&basis), h)
}

/// System sizes benchmarked, matching the scales of the reference figures.
pub const SIZES: [(usize, usize); 3] = [(20, 4), (50, 6), (50, 25)];
