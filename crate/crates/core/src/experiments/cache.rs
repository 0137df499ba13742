//! In-memory trajectory cache shared across sweeps.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::annealer::{anneal_run, RunParams, Trajectory};
use crate::error::Result;

/// Deterministic, injective key of the parameters that fix a trajectory.
///
/// Reals use the shortest round-trip representation, so two keys agree
/// only when every field is bit-identical.
pub fn cache_key(params: &RunParams) -> String {
    format!(
        "N={};l={};T={:?};spu={:?};samples={};shape={}",
        params.n_sites,
        params.range,
        params.t_final,
        params.steps_per_unit_time,
        params.sample_count,
        params.shape.name()
    )
}

#[derive(Debug, Default)]
pub struct TrajectoryCache {
    runs: Mutex<HashMap<String, Arc<Trajectory>>>,
}

impl TrajectoryCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.runs.lock().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, params: &RunParams) -> Option<Arc<Trajectory>> {
        self.runs
            .lock()
            .expect("cache lock")
            .get(&cache_key(params))
            .cloned()
    }

    pub fn get_or_run(&self, params: &RunParams) -> Result<Arc<Trajectory>> {
        Ok(self.get_or_run_all(std::slice::from_ref(params))?.remove(0))
    }

    /// Runs every missing trajectory in parallel and returns all of them in
    /// the order of `params`.
    pub fn get_or_run_all(&self, params: &[RunParams]) -> Result<Vec<Arc<Trajectory>>> {
        let mut missing: Vec<RunParams> = Vec::new();
        {
            let runs = self.runs.lock().expect("cache lock");
            for p in params {
                let key = cache_key(p);
                if !runs.contains_key(&key) && !missing.iter().any(|m| cache_key(m) == key) {
                    missing.push(*p);
                }
            }
        }
        let fresh = missing
            .par_iter()
            .map(|p| anneal_run(p).map(|t| (cache_key(p), Arc::new(t))))
            .collect::<Result<Vec<_>>>()?;
        let mut runs = self.runs.lock().expect("cache lock");
        runs.extend(fresh);
        Ok(params.iter().map(|p| runs[&cache_key(p)].clone()).collect())
    }
}
