//! Integration of the coupling flow `∂ₜh = K⁽ˡ⁾(λ(t)) h` along `λ(t) = t/T`.
//!
//! The generator is skew-symmetric, so the exact flow is a rotation of the
//! coupling vector. Classical RK4 is not exactly norm preserving; the drift is
//! monitored at every step and reported in the trajectory.

use nalgebra::DVector;

use crate::commutator::{BlochTable, Generator};
use crate::error::{Error, Result};
use crate::model::{kitaev_couplings, BasisDescriptor, CouplingVector};

/// Largest step allowed by [`anneal`], in units of `1/J`.
pub const MAX_TIME_STEP: f64 = 0.1;

/// Relative norm drift tolerated along a trajectory.
pub const NORM_TOLERANCE: f64 = 1e-6;

/// Drift beyond `NORM_TOLERANCE * NORM_FAILURE_FACTOR` aborts the run.
pub const NORM_FAILURE_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScheduleShape {
    Linear,
}

impl ScheduleShape {
    pub fn name(self) -> &'static str {
        match self {
            ScheduleShape::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    t_final: f64,
    shape: ScheduleShape,
}

impl Schedule {
    pub fn linear(t_final: f64) -> Result<Self> {
        if !(t_final.is_finite() && t_final > 0.0) {
            return Err(Error::invalid(format!(
                "annealing time must be positive, got {t_final}"
            )));
        }
        Ok(Self {
            t_final,
            shape: ScheduleShape::Linear,
        })
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn shape(&self) -> ScheduleShape {
        self.shape
    }

    pub fn lambda_at(&self, t: f64) -> f64 {
        match self.shape {
            ScheduleShape::Linear => (t / self.t_final).clamp(0.0, 1.0),
        }
    }
}

/// Uniform step count and the number of recorded samples.
///
/// Samples sit on the uniform λ grid `i / (sample_count - 1)` including both
/// endpoints, so `sample_count - 1` must divide `steps`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegratorConfig {
    steps: usize,
    sample_count: usize,
}

impl IntegratorConfig {
    pub fn new(steps: usize, sample_count: usize) -> Result<Self> {
        if sample_count < 2 {
            return Err(Error::invalid("at least two samples are required"));
        }
        if steps < sample_count {
            return Err(Error::invalid(format!(
                "steps ({steps}) must be at least the sample count ({sample_count})"
            )));
        }
        if steps % (sample_count - 1) != 0 {
            return Err(Error::invalid(format!(
                "sample intervals ({}) must divide the step count ({steps})",
                sample_count - 1
            )));
        }
        Ok(Self {
            steps,
            sample_count,
        })
    }

    /// Smallest valid step count with `t_final / steps <= max_step`.
    pub fn for_time(t_final: f64, sample_count: usize, max_step: f64) -> Result<Self> {
        if !(max_step.is_finite() && max_step > 0.0) {
            return Err(Error::invalid("maximum step must be positive"));
        }
        if sample_count < 2 {
            return Err(Error::invalid("at least two samples are required"));
        }
        let intervals = sample_count - 1;
        let mut per = (t_final / (max_step * intervals as f64)).ceil().max(1.0) as usize;
        if per * intervals < sample_count {
            per += 1;
        }
        Self::new(per * intervals, sample_count)
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn sample_count(&self) -> usize {
        self.sample_count
    }

    fn stride(&self) -> usize {
        self.steps / (self.sample_count - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub lambda: f64,
    pub h: DVector<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMeta {
    pub n_sites: usize,
    pub range: usize,
    pub t_final: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    basis: BasisDescriptor,
    schedule: Schedule,
    samples: Vec<Sample>,
    meta: RunMeta,
    max_norm_drift: f64,
}

impl Trajectory {
    pub fn basis(&self) -> &BasisDescriptor {
        &self.basis
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn meta(&self) -> &RunMeta {
        &self.meta
    }

    /// Largest relative deviation of `‖h‖` from `‖h(0)‖` over all steps.
    pub fn max_norm_drift(&self) -> f64 {
        self.max_norm_drift
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.lambda).collect()
    }

    pub fn couplings(&self, index: usize) -> CouplingVector {
        CouplingVector::new(self.basis.clone(), self.samples[index].h.clone())
            .expect("trajectory samples match their basis")
    }

    /// Index of the sample recorded at `lambda`, if it lies on the grid.
    pub fn index_of_lambda(&self, lambda: f64) -> Option<usize> {
        let last = (self.samples.len() - 1) as f64;
        let pos = lambda * last;
        let i = pos.round();
        ((pos - i).abs() < 1e-9 && (0.0..=last).contains(&i)).then_some(i as usize)
    }

    pub fn final_couplings(&self) -> CouplingVector {
        self.couplings(self.samples.len() - 1)
    }
}

struct Rk4Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    tmp: Vec<f64>,
}

impl Rk4Workspace {
    fn new(dim: usize) -> Self {
        Self {
            k1: vec![0.0; dim],
            k2: vec![0.0; dim],
            k3: vec![0.0; dim],
            k4: vec![0.0; dim],
            tmp: vec![0.0; dim],
        }
    }

    /// One classical RK4 step with the generator at `t`, `t + dt/2`, `t + dt`.
    fn step(
        &mut self,
        gen: &Generator,
        start: &BlochTable,
        mid: &BlochTable,
        end: &BlochTable,
        h: &mut [f64],
        dt: f64,
    ) {
        let half = 0.5 * dt;
        gen.apply(start, h, &mut self.k1);
        axpy_into(&mut self.tmp, h, half, &self.k1);
        gen.apply(mid, &self.tmp, &mut self.k2);
        axpy_into(&mut self.tmp, h, half, &self.k2);
        gen.apply(mid, &self.tmp, &mut self.k3);
        axpy_into(&mut self.tmp, h, dt, &self.k3);
        gen.apply(end, &self.tmp, &mut self.k4);
        let w = dt / 6.0;
        for (i, hi) in h.iter_mut().enumerate() {
            *hi += w * (self.k1[i] + 2.0 * (self.k2[i] + self.k3[i]) + self.k4[i]);
        }
    }
}

fn axpy_into(out: &mut [f64], x: &[f64], a: f64, y: &[f64]) {
    for ((o, &xi), &yi) in out.iter_mut().zip(x).zip(y) {
        *o = xi + a * yi;
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Integrates the coupling flow from `start` along `schedule`.
pub fn anneal(
    start: &CouplingVector,
    schedule: &Schedule,
    cfg: &IntegratorConfig,
) -> Result<Trajectory> {
    let t_final = schedule.t_final();
    let steps = cfg.steps();
    let dt = t_final / steps as f64;
    if dt > MAX_TIME_STEP * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "time step {dt} exceeds the maximum {MAX_TIME_STEP}"
        )));
    }
    let norm0 = start.norm();
    if norm0 == 0.0 {
        return Err(Error::invalid("cannot anneal a zero coupling vector"));
    }

    let basis = start.basis().clone();
    let gen = Generator::new(&basis);
    let mut ws = Rk4Workspace::new(gen.dim());
    let mut h: Vec<f64> = start.values().iter().copied().collect();

    let stride = cfg.stride();
    let intervals = cfg.sample_count() - 1;
    let mut samples = Vec::with_capacity(cfg.sample_count());
    samples.push(Sample {
        t: 0.0,
        lambda: 0.0,
        h: DVector::from_column_slice(&h),
    });

    let limit = NORM_TOLERANCE * NORM_FAILURE_FACTOR;
    let mut worst = 0.0f64;
    let mut start_table = gen.bloch(0.0);
    let mut mid_table = BlochTable::default();
    let mut end_table = BlochTable::default();

    for n in 0..steps {
        let t = n as f64 * dt;
        gen.bloch_into(schedule.lambda_at(t + 0.5 * dt), &mut mid_table);
        gen.bloch_into(
            schedule.lambda_at((n + 1) as f64 * t_final / steps as f64),
            &mut end_table,
        );
        ws.step(&gen, &start_table, &mid_table, &end_table, &mut h, dt);
        std::mem::swap(&mut start_table, &mut end_table);

        let drift = (norm(&h) - norm0).abs() / norm0;
        if !drift.is_finite() || drift > limit {
            return Err(Error::Integration {
                step: n + 1,
                time: (n + 1) as f64 * dt,
                drift,
                limit,
            });
        }
        worst = worst.max(drift);

        if (n + 1) % stride == 0 {
            let i = (n + 1) / stride;
            let lambda = i as f64 / intervals as f64;
            samples.push(Sample {
                t: lambda * t_final,
                lambda,
                h: DVector::from_column_slice(&h),
            });
        }
    }

    Ok(Trajectory {
        meta: RunMeta {
            n_sites: basis.n_sites(),
            range: basis.range(),
            t_final,
            steps,
        },
        basis,
        schedule: *schedule,
        samples,
        max_norm_drift: worst,
    })
}

/// Propagates `h0` for `duration` with the generator frozen at `lambda`.
///
/// Test hook for comparing the stepper against an exact propagator.
pub fn propagate_frozen(
    h0: &CouplingVector,
    lambda: f64,
    duration: f64,
    steps: usize,
) -> Result<DVector<f64>> {
    if steps == 0 || duration.is_nan() || duration < 0.0 {
        return Err(Error::invalid(
            "need a non-negative duration and at least one step",
        ));
    }
    let gen = Generator::new(h0.basis());
    let table = gen.bloch(lambda);
    let mut ws = Rk4Workspace::new(gen.dim());
    let mut h: Vec<f64> = h0.values().iter().copied().collect();
    let dt = duration / steps as f64;
    for _ in 0..steps {
        ws.step(&gen, &table, &table, &table, &mut h, dt);
    }
    Ok(DVector::from_vec(h))
}

/// Parameters of one annealing run started from the normalized `H_K(0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub n_sites: usize,
    pub range: usize,
    pub t_final: f64,
    pub steps_per_unit_time: f64,
    pub sample_count: usize,
    pub shape: ScheduleShape,
}

impl RunParams {
    pub fn new(n_sites: usize, range: usize, t_final: f64) -> Self {
        Self {
            n_sites,
            range,
            t_final,
            steps_per_unit_time: 1.0 / MAX_TIME_STEP,
            sample_count: 201,
            shape: ScheduleShape::Linear,
        }
    }

    pub fn with_t_final(self, t_final: f64) -> Self {
        Self { t_final, ..self }
    }

    pub fn with_sample_count(self, sample_count: usize) -> Self {
        Self {
            sample_count,
            ..self
        }
    }

    pub fn with_steps_per_unit_time(self, steps_per_unit_time: f64) -> Self {
        Self {
            steps_per_unit_time,
            ..self
        }
    }

    pub fn basis(&self) -> Result<BasisDescriptor> {
        BasisDescriptor::new(self.n_sites, self.range)
    }

    pub fn schedule(&self) -> Result<Schedule> {
        match self.shape {
            ScheduleShape::Linear => Schedule::linear(self.t_final),
        }
    }

    pub fn integrator(&self) -> Result<IntegratorConfig> {
        if !(self.steps_per_unit_time.is_finite() && self.steps_per_unit_time > 0.0) {
            return Err(Error::invalid("steps per unit time must be positive"));
        }
        IntegratorConfig::for_time(
            self.t_final,
            self.sample_count,
            1.0 / self.steps_per_unit_time,
        )
    }

    /// Unit-norm couplings of `H_K(0)` in this run's basis.
    pub fn start(&self) -> Result<CouplingVector> {
        kitaev_couplings(0.0, &self.basis()?)?.normalized()
    }
}

/// Runs the flow described by `params`.
pub fn anneal_run(params: &RunParams) -> Result<Trajectory> {
    anneal(&params.start()?, &params.schedule()?, &params.integrator()?)
}

/// Runs `params` at `T` and at `2T` on the same λ sample grid.
pub fn anneal_pair(params: &RunParams) -> Result<(Trajectory, Trajectory)> {
    let doubled = params.with_t_final(2.0 * params.t_final);
    let (a, b) = rayon::join(|| anneal_run(params), || anneal_run(&doubled));
    Ok((a?, b?))
}
