//! Adiabaticity, fidelity-range and locality diagnostics.

use nalgebra::DVector;
use rayon::prelude::*;

use crate::annealer::{anneal_run, RunParams, Trajectory};
use crate::commutator::CommutatorMatrix;
use crate::error::{Error, Result};
use crate::model::CouplingVector;
use crate::spectra::fidelity;

/// `‖a − b‖ / ‖b‖`; `b` is the reference (shorter annealing time).
pub fn relative_distance(a: &DVector<f64>, b: &DVector<f64>) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::invalid(format!(
            "coupling vectors differ in length ({} vs {})",
            a.len(),
            b.len()
        )));
    }
    let denom = b.norm();
    if denom == 0.0 {
        return Err(Error::invalid("reference coupling vector is zero"));
    }
    Ok((a - b).norm() / denom)
}

/// `R_{T,ΔT}(λ)` on the shared sample grid of two trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceProfile {
    pub lambdas: Vec<f64>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakLocation {
    pub lambda: f64,
    pub value: f64,
    pub index: usize,
    /// Spacing of the λ grid the peak was located on.
    pub resolution: f64,
}

/// Pointwise distance between the longer run `traj_long` and `traj_short`.
pub fn distance_profile(
    traj_short: &Trajectory,
    traj_long: &Trajectory,
) -> Result<DistanceProfile> {
    let (a, b) = (traj_short.samples(), traj_long.samples());
    if a.len() != b.len()
        || a.iter().zip(b).any(|(x, y)| x.lambda != y.lambda)
        || traj_short.basis() != traj_long.basis()
    {
        return Err(Error::invalid(
            "trajectories do not share a λ grid and basis",
        ));
    }
    let values = a
        .iter()
        .zip(b)
        .map(|(x, y)| relative_distance(&y.h, &x.h))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceProfile {
        lambdas: traj_short.lambdas(),
        values,
    })
}

impl DistanceProfile {
    pub fn peak(&self) -> PeakLocation {
        let (index, value) =
            self.values
                .iter()
                .copied()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (i, v)| {
                    if v > best.1 {
                        (i, v)
                    } else {
                        best
                    }
                });
        let resolution = if self.lambdas.len() > 1 {
            self.lambdas[1] - self.lambdas[0]
        } else {
            0.0
        };
        PeakLocation {
            lambda: self.lambdas[index],
            value,
            index,
            resolution,
        }
    }
}

/// Location and value of `max_λ R_{T,ΔT}(λ)`.
pub fn max_r(traj_short: &Trajectory, traj_long: &Trajectory) -> Result<PeakLocation> {
    Ok(distance_profile(traj_short, traj_long)?.peak())
}

/// Norm of the couplings grouped by interaction range.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeProfile {
    norms: Vec<f64>,
}

impl RangeProfile {
    /// `‖h_r‖` for `r = 0..=l`.
    pub fn norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn get(&self, r: usize) -> Option<f64> {
        self.norms.get(r).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.norms.iter().copied().enumerate()
    }
}

pub fn range_profile(h: &CouplingVector) -> RangeProfile {
    let mut sq = vec![0.0; h.basis().range() + 1];
    for (lab, &x) in h.basis().labels().iter().zip(h.values().iter()) {
        sq[lab.range] += x * x;
    }
    RangeProfile {
        norms: sq.into_iter().map(f64::sqrt).collect(),
    }
}

/// Effective interaction range `Σ r‖h_r‖ / Σ ‖h_r‖`.
pub fn r_avg_h(h: &CouplingVector) -> Result<f64> {
    let p = range_profile(h);
    let total: f64 = p.norms.iter().sum();
    if total == 0.0 {
        return Err(Error::invalid("effective range of a zero coupling vector"));
    }
    Ok(p.iter().map(|(r, x)| r as f64 * x).sum::<f64>() / total)
}

/// Correlation range `Σ |i−j||K_ij| / Σ |K_ij|` over canonical label indices.
pub fn r_avg_k(k: &CommutatorMatrix) -> Result<f64> {
    let m = k.entries();
    let mut num = 0.0;
    let mut den = 0.0;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            let a = m[(i, j)].abs();
            num += i.abs_diff(j) as f64 * a;
            den += a;
        }
    }
    if den == 0.0 {
        return Err(Error::invalid("correlation range of a zero matrix"));
    }
    Ok(num / den)
}

/// Least `l` such that every `l' ≥ l` reaches fidelity `1 − ε`.
///
/// `fidelities[i]` belongs to range `i + 1`.
pub fn least_uniform_range(fidelities: &[f64], epsilon: f64) -> Option<usize> {
    let mut best = None;
    for (i, &f) in fidelities.iter().enumerate().rev() {
        if f >= 1.0 - epsilon {
            best = Some(i + 1);
        } else {
            break;
        }
    }
    best
}

/// Fidelity of the annealed Hamiltonian for every range `l = 1..=N/2`.
///
/// Each run is integrated once; all λ and ε queries reuse the table.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeScan {
    n_sites: usize,
    t_final: f64,
    lambdas: Vec<f64>,
    /// `fidelities[l - 1][sample]`.
    fidelities: Vec<Vec<f64>>,
}

impl RangeScan {
    /// Anneals every range with the integration settings of `base`.
    pub fn run(base: &RunParams) -> Result<Self> {
        let ranges: Vec<usize> = (1..=base.n_sites / 2).collect();
        let trajs = ranges
            .par_iter()
            .map(|&l| anneal_run(&RunParams { range: l, ..*base }))
            .collect::<Result<Vec<_>>>()?;
        Self::from_trajectories(&trajs)
    }

    /// Builds the table from one trajectory per range `1..=N/2`, in order.
    pub fn from_trajectories(trajs: &[Trajectory]) -> Result<Self> {
        let first = trajs
            .first()
            .ok_or_else(|| Error::invalid("no trajectories"))?;
        let n_sites = first.meta().n_sites;
        if trajs.len() != n_sites / 2 {
            return Err(Error::invalid("need one trajectory per range 1..=N/2"));
        }
        let lambdas = first.lambdas();
        let mut fidelities = Vec::with_capacity(trajs.len());
        for (i, t) in trajs.iter().enumerate() {
            if t.meta().range != i + 1 || t.meta().n_sites != n_sites || t.lambdas() != lambdas {
                return Err(Error::invalid(
                    "trajectories out of order or on different grids",
                ));
            }
            fidelities.push(
                (0..t.samples().len())
                    .map(|s| fidelity(&t.couplings(s), t.samples()[s].lambda).fidelity)
                    .collect(),
            );
        }
        Ok(Self {
            n_sites,
            t_final: first.meta().t_final,
            lambdas,
            fidelities,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    fn sample_index(&self, lambda: f64) -> Result<usize> {
        let last = (self.lambdas.len() - 1) as f64;
        let pos = lambda * last;
        let i = pos.round();
        if (pos - i).abs() > 1e-9 || !(0.0..=last).contains(&i) {
            return Err(Error::invalid(format!(
                "λ = {lambda} is not on the sample grid"
            )));
        }
        Ok(i as usize)
    }

    pub fn fidelity(&self, range: usize, lambda: f64) -> Result<f64> {
        let s = self.sample_index(lambda)?;
        self.fidelities
            .get(range.wrapping_sub(1))
            .map(|row| row[s])
            .ok_or_else(|| Error::invalid(format!("range {range} not scanned")))
    }

    /// Fidelities at `lambda` for `l = 1..=N/2`.
    pub fn fidelities_at(&self, lambda: f64) -> Result<Vec<f64>> {
        let s = self.sample_index(lambda)?;
        Ok(self.fidelities.iter().map(|row| row[s]).collect())
    }

    pub fn l_epsilon(&self, lambda: f64, epsilon: f64) -> Result<Option<usize>> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::invalid(format!(
                "ε must lie in (0, 1), got {epsilon}"
            )));
        }
        Ok(least_uniform_range(&self.fidelities_at(lambda)?, epsilon))
    }
}

/// Minimal interaction range at `(λ, N)` with the default integration grid.
///
/// `lambda` must lie on the default 201-point sample grid.
pub fn l_epsilon(lambda: f64, n_sites: usize, epsilon: f64, t_final: f64) -> Result<Option<usize>> {
    RangeScan::run(&RunParams::new(n_sites, 1, t_final))?.l_epsilon(lambda, epsilon)
}

/// Ordinary least-squares line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::invalid("linear fit needs two or more paired points"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::invalid("linear fit needs distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}
