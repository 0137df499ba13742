//! Config-driven sweeps that write one CSV table per scenario.
//!
//! | scenario | table | columns |
//! |---|---|---|
//! | `adiabaticity` | `r_profile` | N, l, T, lambda, R |
//! | `max-r-scaling` | `max_r` | N, l, T, lambda_star, R_max, fitted_slope |
//! | `fidelity-map` | `fidelity` | N, l, T, lambda, fidelity, degenerate_mode_count |
//! | `fidelity-vs-l` | `fidelity_vs_l` | N, l, lambda, fidelity |
//! | `l-epsilon` | `l_epsilon` | N, lambda, epsilon, l_epsilon |
//! | `coupling-decay` | `coupling_norms` | N, lambda, r, norm_h_r |
//! | `range-scaling` | `effective_range` | N, lambda, r_avg_h, r_avg_K |
//! | `oracle-check` | `oracle_diff` | N, l, lambda, max_abs_K_diff, fidelity_diff |

mod cache;
mod config;
mod runner;
mod table;

pub use cache::{cache_key, TrajectoryCache};
pub use config::{
    ExperimentConfig, LambdaSelection, RangeSelection, Scenario, DEFAULT_EPSILON,
    DEFAULT_LAMBDA_POINTS, DEFAULT_OUTPUT_DIR, DEFAULT_STEPS_PER_UNIT_TIME,
};
pub use runner::{
    compute, probe_couplings, provenance, run, RunOptions, RunOutput, PROVENANCE_FILE,
};
pub use table::{Cell, ResultTable};
