//! Scenario execution: sweeps, table assembly and output files.

use std::path::{Path, PathBuf};

use nalgebra::DVector;

use crate::annealer::RunParams;
use crate::commutator::commutator_matrix;
use crate::error::{Error, Result};
use crate::metrics::{distance_profile, linear_fit, r_avg_h, r_avg_k, range_profile, RangeScan};
use crate::model::{basis_descriptor, kitaev_couplings, BasisDescriptor, CouplingVector};
use crate::oracle::{dense_commutator_matrix, dense_ground_overlap};
use crate::spectra::fidelity;

use super::cache::TrajectoryCache;
use super::config::{ExperimentConfig, Scenario};
use super::table::ResultTable;

/// Name of the per-scenario metadata file.
pub const PROVENANCE_FILE: &str = "provenance.txt";

#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunOptions {
    /// Worker threads for independent runs; `None` uses the rayon default.
    pub workers: Option<usize>,
    /// Replaces the config's `output_dir`.
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub scenario_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub tables: Vec<ResultTable>,
}

/// Deterministic couplings used to cross-check fidelities in oracle runs.
pub fn probe_couplings(basis: &BasisDescriptor, lambda: f64) -> Result<CouplingVector> {
    let exact = kitaev_couplings(lambda, basis)?;
    let bump = DVector::from_fn(basis.len(), |i, _| {
        0.4 * ((i as f64 + 1.0) * 1.3 + lambda).sin()
    });
    CouplingVector::new(basis.clone(), exact.values() + bump)
}

/// Computes every table of `config`, reusing trajectories from `cache`.
pub fn compute(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    match config.scenario {
        Scenario::Adiabaticity => adiabaticity(config, cache),
        Scenario::MaxRScaling => max_r_scaling(config, cache),
        Scenario::FidelityMap => fidelity_map(config, cache),
        Scenario::FidelityVsL => fidelity_vs_l(config, cache),
        Scenario::LEpsilon => l_epsilon(config, cache),
        Scenario::CouplingDecay => coupling_decay(config, cache),
        Scenario::RangeScaling => range_scaling(config, cache),
        Scenario::OracleCheck => oracle_check(config),
    }
}

/// `(N, l, T)` triples of the sweep, in row order.
fn sweep(config: &ExperimentConfig) -> Vec<(usize, usize, f64)> {
    let mut out = Vec::new();
    for &n in &config.n_list {
        for l in config.l_list.for_sites(n) {
            for &t in &config.t_list {
                out.push((n, l, t));
            }
        }
    }
    out
}

fn paired_runs(config: &ExperimentConfig) -> Vec<(usize, usize, f64, RunParams, RunParams)> {
    sweep(config)
        .into_iter()
        .map(|(n, l, t)| {
            let p = config.run_params(n, l, t);
            (n, l, t, p, p.with_t_final(2.0 * t))
        })
        .collect()
}

fn prefetch(cache: &TrajectoryCache, params: Vec<RunParams>) -> Result<()> {
    cache.get_or_run_all(&params).map(|_| ())
}

fn adiabaticity(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let runs = paired_runs(config);
    prefetch(cache, runs.iter().flat_map(|r| [r.3, r.4]).collect())?;
    let mut table = ResultTable::new("r_profile", &["N", "l", "T", "lambda", "R"]);
    for (n, l, t, p, p2) in runs {
        let profile = distance_profile(&*cache.get_or_run(&p)?, &*cache.get_or_run(&p2)?)?;
        for i in config.lambda_indices() {
            table.push(vec![
                n.into(),
                l.into(),
                t.into(),
                profile.lambdas[i].into(),
                profile.values[i].into(),
            ]);
        }
    }
    Ok(vec![table])
}

fn max_r_scaling(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let runs = paired_runs(config);
    prefetch(cache, runs.iter().flat_map(|r| [r.3, r.4]).collect())?;
    let mut table = ResultTable::new(
        "max_r",
        &["N", "l", "T", "lambda_star", "R_max", "fitted_slope"],
    );
    let per_group = config.t_list.len();
    for group in runs.chunks(per_group) {
        let peaks = group
            .iter()
            .map(|(_, _, _, p, p2)| {
                Ok(distance_profile(&*cache.get_or_run(p)?, &*cache.get_or_run(p2)?)?.peak())
            })
            .collect::<Result<Vec<_>>>()?;
        let slope = if per_group >= 2 {
            let x: Vec<f64> = group.iter().map(|r| r.2.ln()).collect();
            let y: Vec<f64> = peaks.iter().map(|p| p.value.ln()).collect();
            linear_fit(&x, &y).map_or(f64::NAN, |f| f.slope)
        } else {
            f64::NAN
        };
        for ((n, l, t, _, _), peak) in group.iter().zip(&peaks) {
            table.push(vec![
                (*n).into(),
                (*l).into(),
                (*t).into(),
                peak.lambda.into(),
                peak.value.into(),
                slope.into(),
            ]);
        }
    }
    Ok(vec![table])
}

fn fidelity_map(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let runs = sweep(config);
    let params: Vec<_> = runs
        .iter()
        .map(|&(n, l, t)| config.run_params(n, l, t))
        .collect();
    let trajs = cache.get_or_run_all(&params)?;
    let mut table = ResultTable::new(
        "fidelity",
        &["N", "l", "T", "lambda", "fidelity", "degenerate_mode_count"],
    );
    for (&(n, l, t), traj) in runs.iter().zip(&trajs) {
        for i in config.lambda_indices() {
            let lambda = traj.samples()[i].lambda;
            let rep = fidelity(&traj.couplings(i), lambda);
            table.push(vec![
                n.into(),
                l.into(),
                t.into(),
                lambda.into(),
                rep.fidelity.into(),
                rep.degenerate_modes.len().into(),
            ]);
        }
    }
    Ok(vec![table])
}

fn fidelity_vs_l(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let runs = sweep(config);
    let params: Vec<_> = runs
        .iter()
        .map(|&(n, l, t)| config.run_params(n, l, t))
        .collect();
    let trajs = cache.get_or_run_all(&params)?;
    let mut table = ResultTable::new("fidelity_vs_l", &["N", "l", "lambda", "fidelity"]);
    for (&(n, l, _), traj) in runs.iter().zip(&trajs) {
        for i in config.lambda_indices() {
            let lambda = traj.samples()[i].lambda;
            table.push(vec![
                n.into(),
                l.into(),
                lambda.into(),
                fidelity(&traj.couplings(i), lambda).fidelity.into(),
            ]);
        }
    }
    Ok(vec![table])
}

fn l_epsilon(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let t = config.t_list[0];
    let params: Vec<RunParams> = config
        .n_list
        .iter()
        .flat_map(|&n| (1..=n / 2).map(move |l| (n, l)))
        .map(|(n, l)| config.run_params(n, l, t))
        .collect();
    prefetch(cache, params)?;
    let mut table = ResultTable::new("l_epsilon", &["N", "lambda", "epsilon", "l_epsilon"]);
    for &n in &config.n_list {
        let trajs: Vec<_> = (1..=n / 2)
            .map(|l| {
                cache
                    .get_or_run(&config.run_params(n, l, t))
                    .map(|a| (*a).clone())
            })
            .collect::<Result<_>>()?;
        let scan = RangeScan::from_trajectories(&trajs)?;
        for i in config.lambda_indices() {
            let lambda = config.grid_lambda(i);
            table.push(vec![
                n.into(),
                lambda.into(),
                config.epsilon.into(),
                scan.l_epsilon(lambda, config.epsilon)?.into(),
            ]);
        }
    }
    Ok(vec![table])
}

fn complete_runs(
    config: &ExperimentConfig,
    cache: &TrajectoryCache,
) -> Result<Vec<(usize, std::sync::Arc<crate::annealer::Trajectory>)>> {
    let t = config.t_list[0];
    let params: Vec<_> = config
        .n_list
        .iter()
        .map(|&n| config.run_params(n, n / 2, t))
        .collect();
    let trajs = cache.get_or_run_all(&params)?;
    Ok(config.n_list.iter().copied().zip(trajs).collect())
}

fn coupling_decay(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let mut table = ResultTable::new("coupling_norms", &["N", "lambda", "r", "norm_h_r"]);
    for (n, traj) in complete_runs(config, cache)? {
        for i in config.lambda_indices() {
            let profile = range_profile(&traj.couplings(i));
            for (r, norm) in profile.iter() {
                table.push(vec![
                    n.into(),
                    traj.samples()[i].lambda.into(),
                    r.into(),
                    norm.into(),
                ]);
            }
        }
    }
    Ok(vec![table])
}

fn range_scaling(config: &ExperimentConfig, cache: &TrajectoryCache) -> Result<Vec<ResultTable>> {
    let mut table = ResultTable::new("effective_range", &["N", "lambda", "r_avg_h", "r_avg_K"]);
    for (n, traj) in complete_runs(config, cache)? {
        for i in config.lambda_indices() {
            let lambda = traj.samples()[i].lambda;
            let k = commutator_matrix(lambda, traj.basis());
            table.push(vec![
                n.into(),
                lambda.into(),
                r_avg_h(&traj.couplings(i))?.into(),
                r_avg_k(&k)?.into(),
            ]);
        }
    }
    Ok(vec![table])
}

/// Dense jobs run one at a time to bound memory.
fn oracle_check(config: &ExperimentConfig) -> Result<Vec<ResultTable>> {
    let mut table = ResultTable::new(
        "oracle_diff",
        &["N", "l", "lambda", "max_abs_K_diff", "fidelity_diff"],
    );
    for &n in &config.n_list {
        for l in config.l_list.for_sites(n) {
            let basis = basis_descriptor(n, l)?;
            for i in config.lambda_indices() {
                let lambda = config.grid_lambda(i);
                let k = commutator_matrix(lambda, &basis);
                let k_diff = (k.entries() - dense_commutator_matrix(lambda, &basis)?).amax();
                let h = probe_couplings(&basis, lambda)?;
                let f_diff =
                    (fidelity(&h, lambda).fidelity - dense_ground_overlap(&h, lambda)?).abs();
                table.push(vec![
                    n.into(),
                    l.into(),
                    lambda.into(),
                    k_diff.into(),
                    f_diff.into(),
                ]);
            }
        }
    }
    Ok(vec![table])
}

/// Contents of `provenance.txt`: library version and resolved config.
pub fn provenance(config: &ExperimentConfig, tables: &[ResultTable]) -> String {
    let names: Vec<String> = tables.iter().map(|t| format!("{}.csv", t.name())).collect();
    format!(
        "library = iqa-core {}\nscenario = {}\ntables = {}\n\n[config]\n{}",
        env!("CARGO_PKG_VERSION"),
        config.scenario,
        names.join(", "),
        config.render()
    )
}

fn write_outputs(
    dir: &Path,
    config: &ExperimentConfig,
    tables: &[ResultTable],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    let result = (|| {
        for t in tables {
            let path = dir.join(format!("{}.csv", t.name()));
            files.push(path.clone());
            t.write_csv(&path)?;
        }
        let path = dir.join(PROVENANCE_FILE);
        files.push(path.clone());
        std::fs::write(&path, provenance(config, tables)).map_err(|e| Error::io(&path, e))
    })();
    if let Err(e) = result {
        for f in &files {
            let _ = std::fs::remove_file(f);
        }
        return Err(e);
    }
    Ok(files)
}

/// Runs the scenario and writes `<output_dir>/<scenario>/<table>.csv` plus
/// the provenance file. Nothing is written when a computation fails.
pub fn run(config: &ExperimentConfig, options: &RunOptions) -> Result<RunOutput> {
    let cache = TrajectoryCache::new();
    let tables = match options.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::invalid(format!("cannot start worker pool: {e}")))?;
            pool.install(|| compute(config, &cache))?
        }
        None => compute(config, &cache)?,
    };
    let root = options.output_dir.as_ref().unwrap_or(&config.output_dir);
    let scenario_dir = root.join(config.scenario.name());
    let files = write_outputs(&scenario_dir, config, &tables)?;
    Ok(RunOutput {
        scenario_dir,
        files,
        tables,
    })
}
