//! Computational-basis actions of fermion and Pauli operators.
//!
//! Bit `j` of a basis index set means site `j` is occupied (spin down).
//! Fermion signs follow the Jordan–Wigner ordering: `c_j` picks up
//! `(-1)^(number of occupied sites below j)`.

use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Ladder {
    Create(usize),
    Annihilate(usize),
}

fn jw_sign(state: usize, site: usize) -> f64 {
    if (state & ((1 << site) - 1)).count_ones() % 2 == 1 {
        -1.0
    } else {
        1.0
    }
}

fn apply_ladder(op: Ladder, state: usize) -> Option<(f64, usize)> {
    match op {
        Ladder::Create(j) => (state >> j & 1 == 0).then(|| (jw_sign(state, j), state | 1 << j)),
        Ladder::Annihilate(j) => {
            (state >> j & 1 == 1).then(|| (jw_sign(state, j), state & !(1 << j)))
        }
    }
}

/// Applies a product of ladder operators (rightmost acts first).
pub(crate) fn apply_monomial(ops: &[Ladder], state: usize) -> Option<(f64, usize)> {
    ops.iter().rev().try_fold((1.0, state), |(sign, s), &op| {
        apply_ladder(op, s).map(|(t, s2)| (sign * t, s2))
    })
}

/// Site index `j` on an `n`-site ring with antiperiodic wrap; returns the
/// boundary sign together with the folded index.
pub(crate) fn antiperiodic(j: usize, n: usize) -> (f64, usize) {
    let wraps = j / n;
    (if wraps % 2 == 1 { -1.0 } else { 1.0 }, j % n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Pauli {
    X,
    Y,
    Z,
}

/// Applies a product of single-site Paulis on distinct sites.
pub(crate) fn apply_pauli_string(ops: &[(Pauli, usize)], state: usize) -> (Complex64, usize) {
    let mut phase = Complex64::new(1.0, 0.0);
    let mut s = state;
    for &(p, j) in ops.iter().rev() {
        let bit = s >> j & 1;
        match p {
            Pauli::X => s ^= 1 << j,
            Pauli::Y => {
                phase *= if bit == 0 {
                    Complex64::i()
                } else {
                    -Complex64::i()
                };
                s ^= 1 << j;
            }
            Pauli::Z => {
                if bit == 1 {
                    phase = -phase;
                }
            }
        }
    }
    (phase, s)
}

/// Occupation parity of a basis state (`true` for even).
pub(crate) fn is_even(state: usize) -> bool {
    state.count_ones() % 2 == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_signs() {
        // c_1† on |site 0 occupied⟩ crosses one fermion.
        assert_eq!(apply_ladder(Ladder::Create(1), 0b01), Some((-1.0, 0b11)));
        assert_eq!(apply_ladder(Ladder::Create(0), 0b10), Some((1.0, 0b11)));
        assert_eq!(apply_ladder(Ladder::Create(0), 0b01), None);
        assert_eq!(apply_ladder(Ladder::Annihilate(2), 0b011), None);
    }

    #[test]
    fn anticommutation() {
        // {c_i, c_j†} = δ_ij on every basis state of three sites.
        for i in 0..3 {
            for j in 0..3 {
                for s in 0..8usize {
                    let mut acc = [0.0; 8];
                    for ops in [
                        [Ladder::Annihilate(i), Ladder::Create(j)],
                        [Ladder::Create(j), Ladder::Annihilate(i)],
                    ] {
                        if let Some((sign, t)) = apply_monomial(&ops, s) {
                            acc[t] += sign;
                        }
                    }
                    for (t, &v) in acc.iter().enumerate() {
                        let want = if i == j && t == s { 1.0 } else { 0.0 };
                        assert_eq!(v, want, "i={i} j={j} s={s} t={t}");
                    }
                }
            }
        }
    }

    #[test]
    fn pauli_actions() {
        assert_eq!(apply_pauli_string(&[(Pauli::Y, 0)], 0), (Complex64::i(), 1));
        assert_eq!(
            apply_pauli_string(&[(Pauli::Y, 0)], 1),
            (-Complex64::i(), 0)
        );
        assert_eq!(
            apply_pauli_string(&[(Pauli::Z, 1)], 0b10).0,
            Complex64::new(-1.0, 0.0)
        );
        assert_eq!(antiperiodic(7, 6), (-1.0, 1));
        assert_eq!(antiperiodic(5, 6), (1.0, 5));
    }
}
