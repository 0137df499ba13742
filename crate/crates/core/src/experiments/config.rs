//! Plain-text experiment configs: `key = value` lines, `#` comments.
//!
//! Lists are comma separated; integer lists also accept inclusive ranges
//! such as `1..26`.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::annealer::{RunParams, MAX_TIME_STEP};
use crate::error::{Error, Result};
use crate::oracle::MAX_ORACLE_SITES;

pub const DEFAULT_LAMBDA_POINTS: usize = 201;
pub const DEFAULT_STEPS_PER_UNIT_TIME: f64 = 10.0;
pub const DEFAULT_EPSILON: f64 = 0.005;
pub const DEFAULT_OUTPUT_DIR: &str = "results";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scenario {
    Adiabaticity,
    MaxRScaling,
    FidelityMap,
    FidelityVsL,
    LEpsilon,
    CouplingDecay,
    RangeScaling,
    OracleCheck,
}

impl Scenario {
    pub const ALL: [Scenario; 8] = [
        Scenario::Adiabaticity,
        Scenario::MaxRScaling,
        Scenario::FidelityMap,
        Scenario::FidelityVsL,
        Scenario::LEpsilon,
        Scenario::CouplingDecay,
        Scenario::RangeScaling,
        Scenario::OracleCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scenario::Adiabaticity => "adiabaticity",
            Scenario::MaxRScaling => "max-r-scaling",
            Scenario::FidelityMap => "fidelity-map",
            Scenario::FidelityVsL => "fidelity-vs-l",
            Scenario::LEpsilon => "l-epsilon",
            Scenario::CouplingDecay => "coupling-decay",
            Scenario::RangeScaling => "range-scaling",
            Scenario::OracleCheck => "oracle-check",
        }
    }

    /// Scenarios that report a single annealing time per row set.
    fn single_time(self) -> bool {
        matches!(
            self,
            Scenario::FidelityVsL
                | Scenario::LEpsilon
                | Scenario::CouplingDecay
                | Scenario::RangeScaling
        )
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Scenario::ALL.iter().map(|s| s.name()).collect();
                Error::config(
                    "scenario",
                    format!(
                        "unknown scenario `{s}`; expected one of {}",
                        names.join(", ")
                    ),
                )
            })
    }
}

/// Ranges to sweep; `All` means every `l = 1..=N/2` for each `N`.
#[derive(Debug, Clone, PartialEq)]
pub enum RangeSelection {
    All,
    List(Vec<usize>),
}

impl RangeSelection {
    pub fn for_sites(&self, n_sites: usize) -> Vec<usize> {
        match self {
            RangeSelection::All => (1..=n_sites / 2).collect(),
            RangeSelection::List(v) => v.clone(),
        }
    }
}

/// λ values to report; `Grid` means every point of the sample grid.
#[derive(Debug, Clone, PartialEq)]
pub enum LambdaSelection {
    Grid,
    List(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub scenario: Scenario,
    pub n_list: Vec<usize>,
    pub l_list: RangeSelection,
    pub t_list: Vec<f64>,
    pub lambda_points: usize,
    pub lambda_list: LambdaSelection,
    pub epsilon: f64,
    pub steps_per_unit_time: f64,
    pub output_dir: PathBuf,
}

const KEYS: [&str; 9] = [
    "scenario",
    "N_list",
    "l_list",
    "T_list",
    "lambda_points",
    "lambda_list",
    "epsilon",
    "steps_per_unit_time",
    "output_dir",
];

fn parse_usize_list(key: &str, value: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for item in value.split(',').map(str::trim) {
        let bad = || {
            Error::config(
                key,
                format!("`{item}` is not a non-negative integer or range"),
            )
        };
        if let Some((a, b)) = item.split_once("..") {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            if a > b {
                return Err(Error::config(key, format!("empty range `{item}`")));
            }
            out.extend(a..=b);
        } else {
            out.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    let x: f64 = value
        .trim()
        .parse()
        .map_err(|_| Error::config(key, format!("`{}` is not a number", value.trim())))?;
    if !x.is_finite() {
        return Err(Error::config(key, "value must be finite"));
    }
    Ok(x)
}

fn parse_f64_list(key: &str, value: &str) -> Result<Vec<f64>> {
    value.split(',').map(|v| parse_f64(key, v)).collect()
}

fn sorted_unique_usize(mut v: Vec<usize>) -> Vec<usize> {
    v.sort_unstable();
    v.dedup();
    v
}

fn sorted_unique_f64(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    /// Sample-grid index of `lambda`, if it lies on the grid.
    pub fn grid_index(&self, lambda: f64) -> Option<usize> {
        let last = (self.lambda_points - 1) as f64;
        let pos = lambda * last;
        let i = pos.round();
        ((pos - i).abs() < 1e-9 && (0.0..=last).contains(&i)).then_some(i as usize)
    }

    /// Reported λ values as sample-grid indices, ascending.
    pub fn lambda_indices(&self) -> Vec<usize> {
        match &self.lambda_list {
            LambdaSelection::Grid => (0..self.lambda_points).collect(),
            LambdaSelection::List(v) => v
                .iter()
                .map(|&x| self.grid_index(x).expect("validated on parse"))
                .collect(),
        }
    }

    pub fn grid_lambda(&self, index: usize) -> f64 {
        index as f64 / (self.lambda_points - 1) as f64
    }

    /// Run parameters shared by every trajectory of this config.
    pub fn run_params(&self, n_sites: usize, range: usize, t_final: f64) -> RunParams {
        RunParams::new(n_sites, range, t_final)
            .with_sample_count(self.lambda_points)
            .with_steps_per_unit_time(self.steps_per_unit_time)
    }

    fn validate(&self) -> Result<()> {
        if self.n_list.is_empty() {
            return Err(Error::config("N_list", "list is empty"));
        }
        for &n in &self.n_list {
            if n < 4 || n % 2 == 1 {
                return Err(Error::config(
                    "N_list",
                    format!("N = {n} must be even and at least 4"),
                ));
            }
            if self.scenario == Scenario::OracleCheck && n > MAX_ORACLE_SITES {
                return Err(Error::config(
                    "N_list",
                    format!("oracle checks are limited to N ≤ {MAX_ORACLE_SITES}, got {n}"),
                ));
            }
        }
        if let RangeSelection::List(ls) = &self.l_list {
            if ls.is_empty() {
                return Err(Error::config("l_list", "list is empty"));
            }
            for &n in &self.n_list {
                if let Some(&l) = ls.iter().find(|&&l| l < 1 || l > n / 2) {
                    return Err(Error::config(
                        "l_list",
                        format!("l = {l} outside 1..={} for N = {n}", n / 2),
                    ));
                }
            }
        }
        if self.scenario != Scenario::OracleCheck {
            if self.t_list.is_empty() {
                return Err(Error::config("T_list", "list is empty"));
            }
            if let Some(t) = self.t_list.iter().find(|&&t| t <= 0.0) {
                return Err(Error::config(
                    "T_list",
                    format!("annealing time {t} must be positive"),
                ));
            }
            if self.scenario.single_time() && self.t_list.len() != 1 {
                return Err(Error::config(
                    "T_list",
                    format!(
                        "scenario {} takes exactly one annealing time",
                        self.scenario
                    ),
                ));
            }
        }
        if self.lambda_points < 2 {
            return Err(Error::config("lambda_points", "need at least 2 points"));
        }
        if let LambdaSelection::List(v) = &self.lambda_list {
            if v.is_empty() {
                return Err(Error::config("lambda_list", "list is empty"));
            }
            if let Some(x) = v.iter().find(|&&x| self.grid_index(x).is_none()) {
                return Err(Error::config(
                    "lambda_list",
                    format!(
                        "λ = {x} is not on the {}-point sample grid",
                        self.lambda_points
                    ),
                ));
            }
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::config(
                "epsilon",
                format!("ε = {} must lie in (0, 1)", self.epsilon),
            ));
        }
        if self.steps_per_unit_time * MAX_TIME_STEP < 1.0 - 1e-12 {
            return Err(Error::config(
                "steps_per_unit_time",
                format!(
                    "must be at least {} (time step ≤ {MAX_TIME_STEP})",
                    1.0 / MAX_TIME_STEP
                ),
            ));
        }
        Ok(())
    }

    /// Canonical `key = value` rendering; parses back to the same config.
    pub fn render(&self) -> String {
        let join = |v: Vec<String>| v.join(", ");
        let mut s = String::new();
        s += &format!("scenario = {}\n", self.scenario);
        s += &format!(
            "N_list = {}\n",
            join(self.n_list.iter().map(|n| n.to_string()).collect())
        );
        s += &format!(
            "l_list = {}\n",
            match &self.l_list {
                RangeSelection::All => "all".to_string(),
                RangeSelection::List(v) => join(v.iter().map(|n| n.to_string()).collect()),
            }
        );
        if !self.t_list.is_empty() {
            s += &format!(
                "T_list = {}\n",
                join(self.t_list.iter().map(|t| format!("{t:?}")).collect())
            );
        }
        s += &format!("lambda_points = {}\n", self.lambda_points);
        s += &format!(
            "lambda_list = {}\n",
            match &self.lambda_list {
                LambdaSelection::Grid => "grid".to_string(),
                LambdaSelection::List(v) => join(v.iter().map(|x| format!("{x:?}")).collect()),
            }
        );
        s += &format!("epsilon = {:?}\n", self.epsilon);
        s += &format!("steps_per_unit_time = {:?}\n", self.steps_per_unit_time);
        s += &format!("output_dir = {}\n", self.output_dir.display());
        s
    }
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut entries: BTreeMap<&str, &str> = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got `{line}`"),
                )
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(Error::config(key, "unknown key"));
            }
            if value.is_empty() {
                return Err(Error::config(key, "missing value"));
            }
            if entries.insert(key, value).is_some() {
                return Err(Error::config(key, "key given more than once"));
            }
        }

        let scenario: Scenario = entries
            .get("scenario")
            .ok_or_else(|| Error::config("scenario", "required key missing"))?
            .parse()?;
        let n_list = sorted_unique_usize(parse_usize_list(
            "N_list",
            entries
                .get("N_list")
                .ok_or_else(|| Error::config("N_list", "required key missing"))?,
        )?);
        let l_list = match entries.get("l_list") {
            None | Some(&"all") => RangeSelection::All,
            Some(v) => RangeSelection::List(sorted_unique_usize(parse_usize_list("l_list", v)?)),
        };
        let t_list = match entries.get("T_list") {
            Some(v) => sorted_unique_f64(parse_f64_list("T_list", v)?),
            None if scenario == Scenario::OracleCheck => Vec::new(),
            None => return Err(Error::config("T_list", "required key missing")),
        };
        let lambda_points = match entries.get("lambda_points") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::config("lambda_points", format!("`{v}` is not an integer")))?,
            None => DEFAULT_LAMBDA_POINTS,
        };
        let lambda_list = match entries.get("lambda_list") {
            Some(&"grid") => LambdaSelection::Grid,
            Some(v) => LambdaSelection::List(sorted_unique_f64(parse_f64_list("lambda_list", v)?)),
            None => default_lambdas(scenario),
        };
        let epsilon = entries
            .get("epsilon")
            .map_or(Ok(DEFAULT_EPSILON), |v| parse_f64("epsilon", v))?;
        let steps_per_unit_time = entries
            .get("steps_per_unit_time")
            .map_or(Ok(DEFAULT_STEPS_PER_UNIT_TIME), |v| {
                parse_f64("steps_per_unit_time", v)
            })?;
        let output_dir = PathBuf::from(
            entries
                .get("output_dir")
                .copied()
                .unwrap_or(DEFAULT_OUTPUT_DIR),
        );

        let cfg = ExperimentConfig {
            scenario,
            n_list,
            l_list,
            t_list,
            lambda_points,
            lambda_list,
            epsilon,
            steps_per_unit_time,
            output_dir,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

fn default_lambdas(scenario: Scenario) -> LambdaSelection {
    match scenario {
        Scenario::CouplingDecay => LambdaSelection::List(vec![0.25, 0.75]),
        Scenario::RangeScaling => LambdaSelection::List(vec![0.5]),
        Scenario::OracleCheck => LambdaSelection::List(vec![0.0, 0.25, 0.5, 0.75, 1.0]),
        _ => LambdaSelection::Grid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key_of(err: Error) -> String {
        match err {
            Error::Config { key, .. } => key,
            other => panic!("expected a config error, got {other}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c: ExperimentConfig = "scenario = fidelity-map\nN_list = 20\nT_list = 100"
            .parse()
            .unwrap();
        assert_eq!(c.lambda_points, 201);
        assert_eq!(c.steps_per_unit_time, 10.0);
        assert_eq!(c.epsilon, 0.005);
        assert_eq!(c.l_list, RangeSelection::All);
        assert_eq!(c.lambda_indices().len(), 201);
    }

    #[test]
    fn lists_and_ranges() {
        let c: ExperimentConfig = "scenario = adiabaticity # Fig\nN_list = 50, 30, 40\nl_list = 1..3, 6\nT_list = 1000, 500"
            .parse()
            .unwrap();
        assert_eq!(c.n_list, vec![30, 40, 50]);
        assert_eq!(c.l_list, RangeSelection::List(vec![1, 2, 3, 6]));
        assert_eq!(c.t_list, vec![500.0, 1000.0]);
    }

    #[test]
    fn render_round_trips() {
        let c: ExperimentConfig = "scenario = l-epsilon\nN_list = 20,30\nT_list = 16000\nlambda_list = 0.45, 0.55\nepsilon = 0.01\noutput_dir = out/x"
            .parse()
            .unwrap();
        let again: ExperimentConfig = c.render().parse().unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            ("scenario = nope\nN_list = 4\nT_list = 1", "scenario"),
            ("scenario = adiabaticity\nN_list = 5\nT_list = 1", "N_list"),
            (
                "scenario = adiabaticity\nN_list = 8\nl_list = 5\nT_list = 1",
                "l_list",
            ),
            ("scenario = adiabaticity\nN_list = 8\nT_list = -1", "T_list"),
            ("scenario = adiabaticity\nN_list = 8", "T_list"),
            (
                "scenario = adiabaticity\nN_list = 8\nT_list = 1\nepsilon = 1.5",
                "epsilon",
            ),
            (
                "scenario = adiabaticity\nN_list = 8\nT_list = 1\nlambda_points = 1",
                "lambda_points",
            ),
            (
                "scenario = adiabaticity\nN_list = 8\nT_list = 1\nsteps_per_unit_time = 5",
                "steps_per_unit_time",
            ),
            (
                "scenario = adiabaticity\nN_list = 8\nT_list = 1\ncolour = red",
                "colour",
            ),
            (
                "scenario = adiabaticity\nN_list = 8\nN_list = 10\nT_list = 1",
                "N_list",
            ),
            ("scenario = l-epsilon\nN_list = 8\nT_list = 1, 2", "T_list"),
            ("scenario = oracle-check\nN_list = 12", "N_list"),
            (
                "scenario = fidelity-vs-l\nN_list = 8\nT_list = 1\nlambda_list = 0.123",
                "lambda_list",
            ),
            ("N_list = 8\nT_list = 1", "scenario"),
            ("scenario = adiabaticity\nN_list 8", "line 2"),
        ];
        for (text, key) in cases {
            let err = text.parse::<ExperimentConfig>().unwrap_err();
            assert_eq!(key_of(err), key, "{text}");
        }
    }

    #[test]
    fn oracle_check_needs_no_time() {
        let c: ExperimentConfig = "scenario = oracle-check\nN_list = 6".parse().unwrap();
        assert!(c.t_list.is_empty());
        assert_eq!(c.lambda_indices(), vec![0, 50, 100, 150, 200]);
    }
}
