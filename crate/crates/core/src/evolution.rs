//! First-order Trotter evolution under `aH(t)` and an exact-propagator oracle.
//!
//! One Trotter step applies, in order: `exp(+i dt/2 X_x X_{x+1})` then
//! `exp(+i dt/2 Y_x Y_{x+1})` for every bond `x = 0..N-2`, the two boundary
//! strings, and finally the diagonal layer
//! `exp(-i dt Σ_x [h/4 + (-1)^x m e^{h t_s}/2] Z_x)` as single-qubit Z
//! rotations. XX and YY on a bond commute and their sum commutes with
//! `Σ Z`, so every factor conserves the charge exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_size, Error, Result};
use crate::model::{build_charge_term, build_hopping, build_mass_term, hopping_terms, ModelParams};
use crate::observables::{observe_exact, ObservableRecord};
use crate::pauli::dense::{check_dense, to_dense};
use crate::pauli::{Axis, PauliString};
use crate::state::{phase_aligned_distance, StateVector, NORM_DRIFT_LIMIT};

/// Largest register the exact oracle accepts.
pub const MAX_ORACLE_QUBITS: usize = 12;

/// Where inside a step the time-dependent mass coefficient is sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeSampling {
    /// `t_k = k·dt`
    Left,
    /// `t_k = (k + 1/2)·dt`
    #[default]
    Midpoint,
}

impl TimeSampling {
    pub fn sample(self, step: usize, dt: f64) -> f64 {
        match self {
            TimeSampling::Left => step as f64 * dt,
            TimeSampling::Midpoint => (step as f64 + 0.5) * dt,
        }
    }
}

impl std::str::FromStr for TimeSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(TimeSampling::Left),
            "midpoint" => Ok(TimeSampling::Midpoint),
            other => Err(Error::Argument(format!(
                "time sampling must be `left` or `midpoint`, got {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for TimeSampling {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TimeSampling::Left => "left",
            TimeSampling::Midpoint => "midpoint",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterPlan {
    pub steps: usize,
    pub dt: f64,
    pub time_sampling: TimeSampling,
    pub snapshot_every: usize,
    pub retain_states: bool,
}

impl TrotterPlan {
    /// `steps` equal steps covering `[0, t_total]`, a snapshot after every
    /// step. Zero steps is allowed only for `t_total = 0`.
    pub fn new(t_total: f64, steps: usize) -> Result<Self> {
        if !t_total.is_finite() || t_total < 0.0 {
            return Err(Error::Argument(format!(
                "total time must be finite and >= 0, got {t_total}"
            )));
        }
        let dt = match steps {
            0 if t_total == 0.0 => 0.0,
            0 => {
                return Err(Error::Argument(
                    "zero steps cannot cover a nonzero time".into(),
                ))
            }
            s => t_total / s as f64,
        };
        if steps > 0 && dt <= 0.0 {
            return Err(Error::Argument("step size must be positive".into()));
        }
        Ok(TrotterPlan {
            steps,
            dt,
            time_sampling: TimeSampling::default(),
            snapshot_every: 1,
            retain_states: false,
        })
    }

    pub fn with_sampling(mut self, sampling: TimeSampling) -> Self {
        self.time_sampling = sampling;
        self
    }

    pub fn with_snapshot_every(mut self, every: usize) -> Result<Self> {
        if every == 0 {
            return Err(Error::Argument("snapshot interval must be positive".into()));
        }
        self.snapshot_every = every;
        Ok(self)
    }

    pub fn retaining_states(mut self) -> Self {
        self.retain_states = true;
        self
    }

    pub fn total_time(&self) -> f64 {
        self.steps as f64 * self.dt
    }

    /// Snapshot step indices: 0, every `snapshot_every`-th step, and the last.
    pub fn snapshot_steps(&self) -> Vec<usize> {
        let mut steps: Vec<usize> = (0..=self.steps)
            .step_by(self.snapshot_every.max(1))
            .collect();
        if *steps.last().expect("step 0") != self.steps {
            steps.push(self.steps);
        }
        steps
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Option<Vec<StateVector>>,
    pub records: Vec<ObservableRecord>,
}

impl Trajectory {
    pub fn final_record(&self) -> &ObservableRecord {
        self.records
            .last()
            .expect("trajectory has the initial record")
    }
}

/// The fixed per-step factor list for one model.
#[derive(Debug, Clone)]
pub struct Trotterizer {
    params: ModelParams,
    hopping: Vec<(f64, PauliString)>,
    z_sites: Vec<PauliString>,
}

impl Trotterizer {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let n = params.n_sites;
        Ok(Trotterizer {
            params: *params,
            hopping: hopping_terms(n)?,
            z_sites: (0..n)
                .map(|x| PauliString::single_site(n, x, Axis::Z))
                .collect::<Result<_>>()?,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn step(&self, state: &mut StateVector, t_sample: f64, dt: f64) -> Result<()> {
        ensure_same_size(state.n_qubits(), self.params.n_sites)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Argument(format!(
                "step size must be positive, got {dt}"
            )));
        }
        for (c, p) in &self.hopping {
            state.apply_pauli_rotation(p, c * dt)?;
        }
        for (x, z) in self.z_sites.iter().enumerate() {
            state.apply_pauli_rotation(z, self.params.z_coefficient(x, t_sample) * dt)?;
        }
        Ok(())
    }

    pub fn evolve(&self, initial: &StateVector, plan: &TrotterPlan) -> Result<Trajectory> {
        ensure_same_size(initial.n_qubits(), self.params.n_sites)?;
        let snapshots = plan.snapshot_steps();
        let mut next_snapshot = snapshots.iter().copied().peekable();
        let mut state = initial.clone();
        let mut times = Vec::with_capacity(snapshots.len());
        let mut records = Vec::with_capacity(snapshots.len());
        let mut states = plan.retain_states.then(Vec::new);

        for step in 0..=plan.steps {
            if step > 0 {
                let t_sample = plan.time_sampling.sample(step - 1, plan.dt);
                self.step(&mut state, t_sample, plan.dt)?;
                state.check_norm(NORM_DRIFT_LIMIT)?;
            }
            if next_snapshot.peek() == Some(&step) {
                next_snapshot.next();
                let t = step as f64 * plan.dt;
                times.push(t);
                records.push(observe_exact(&state, &self.params, t)?);
                if let Some(states) = states.as_mut() {
                    states.push(state.clone());
                }
            }
        }
        Ok(Trajectory {
            times,
            states,
            records,
        })
    }
}

/// One Trotter step of length `dt` with the mass coefficient taken at `t_sample`.
pub fn trotter_step(
    state: &mut StateVector,
    params: &ModelParams,
    t_sample: f64,
    dt: f64,
) -> Result<()> {
    Trotterizer::new(params)?.step(state, t_sample, dt)
}

pub fn trotter_evolve(
    initial: &StateVector,
    params: &ModelParams,
    plan: &TrotterPlan,
) -> Result<Trajectory> {
    Trotterizer::new(params)?.evolve(initial, plan)
}

/// The dense realization of `aH(t) = A + m e^{ht} B`, with `A` stored by its
/// nonzero entries and the diagonal `B` as a vector.
///
/// Each substep applies `exp(-i δt aH(t_mid))` through a Taylor series on
/// the state, split into pieces with `‖H δt‖₁ ≤ 1/2` and summed to
/// round-off, so it equals the dense unitary to machine precision without
/// materializing it.
#[derive(Debug, Clone)]
pub struct ExactPropagator {
    params: ModelParams,
    row_start: Vec<usize>,
    cols: Vec<usize>,
    values: Vec<Complex64>,
    mass_diagonal: Vec<f64>,
    static_norm: f64,
}

impl ExactPropagator {
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        let n = params.n_sites;
        check_dense("exact propagator", n, MAX_ORACLE_QUBITS)?;
        let static_part = build_hopping(n)?.add(&build_charge_term(n)?.scale(params.hubble))?;
        let a = to_dense(&static_part)?;
        let b = to_dense(&build_mass_term(n)?)?;
        let dim = a.nrows();

        let mut row_start = Vec::with_capacity(dim + 1);
        let mut cols = Vec::new();
        let mut values = Vec::new();
        row_start.push(0);
        for r in 0..dim {
            for c in 0..dim {
                let v = a[(r, c)];
                if v.norm_sqr() > 0.0 {
                    cols.push(c);
                    values.push(v);
                }
            }
            row_start.push(cols.len());
        }
        let mass_diagonal: Vec<f64> = (0..dim).map(|k| b[(k, k)].re).collect();
        let static_norm = (0..dim)
            .map(|c| a.column(c).iter().map(|v| v.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        Ok(ExactPropagator {
            params: *params,
            row_start,
            cols,
            values,
            mass_diagonal,
            static_norm,
        })
    }

    fn mass_scale(&self, t: f64) -> f64 {
        self.params.mass * self.params.scale_factor(t)
    }

    /// `out = H(t) v`
    fn apply_generator(&self, v: &[Complex64], mass_scale: f64, out: &mut [Complex64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let mut acc = Complex64::new(mass_scale * self.mass_diagonal[r], 0.0) * v[r];
            for idx in self.row_start[r]..self.row_start[r + 1] {
                acc += self.values[idx] * v[self.cols[idx]];
            }
            *o = acc;
        }
    }

    /// `v <- exp(-i τ H(t)) v`
    fn apply_exponential(&self, v: &mut [Complex64], t: f64, tau: f64) {
        let mass_scale = self.mass_scale(t);
        let mass_norm = mass_scale
            * self
                .mass_diagonal
                .iter()
                .fold(0.0f64, |m, b| m.max(b.abs()));
        let norm = (self.static_norm + mass_norm) * tau.abs();
        let pieces = (2.0 * norm).ceil().max(1.0) as usize;
        let h = tau / pieces as f64;

        let dim = v.len();
        let mut term = vec![Complex64::new(0.0, 0.0); dim];
        let mut next = vec![Complex64::new(0.0, 0.0); dim];
        for _ in 0..pieces {
            term.copy_from_slice(v);
            for order in 1..=60 {
                self.apply_generator(&term, mass_scale, &mut next);
                let factor = Complex64::new(0.0, -h / order as f64);
                let mut size = 0.0;
                for (t, n) in term.iter_mut().zip(&next) {
                    *t = factor * n;
                    size += t.norm_sqr();
                }
                for (x, t) in v.iter_mut().zip(&term) {
                    *x += t;
                }
                if size.sqrt() < 1e-18 {
                    break;
                }
            }
        }
    }

    /// Advances `state` from `t0` to `t1` in `substeps` midpoint-sampled
    /// pieces.
    pub fn propagate(
        &self,
        state: &mut StateVector,
        t0: f64,
        t1: f64,
        substeps: usize,
    ) -> Result<()> {
        ensure_same_size(state.n_qubits(), self.params.n_sites)?;
        if substeps == 0 {
            return Err(Error::Argument("substeps must be at least 1".into()));
        }
        if t0.is_nan() || t1.is_nan() || t1 < t0 {
            return Err(Error::Argument(format!(
                "cannot propagate backwards from {t0} to {t1}"
            )));
        }
        if t1 == t0 {
            return Ok(());
        }
        let delta = (t1 - t0) / substeps as f64;
        let mut amps = state.amplitudes().to_vec();
        for j in 0..substeps {
            let t_mid = t0 + (j as f64 + 0.5) * delta;
            self.apply_exponential(&mut amps, t_mid, delta);
        }
        *state = StateVector::from_amplitudes(amps)?;
        Ok(())
    }
}

/// The time-ordered evolution over `[0, t_total]` approximated by `substeps`
/// midpoint-sampled exact exponentials.
pub fn exact_evolve(
    initial: &StateVector,
    params: &ModelParams,
    t_total: f64,
    substeps: usize,
) -> Result<StateVector> {
    let oracle = ExactPropagator::new(params)?;
    let mut state = initial.clone();
    oracle.propagate(&mut state, 0.0, t_total, substeps)?;
    Ok(state)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSettings {
    pub start_substeps: usize,
    pub tolerance: f64,
    pub max_substeps: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            start_substeps: 256,
            tolerance: 1e-10,
            max_substeps: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedOracle {
    pub state: StateVector,
    pub substeps: usize,
    /// Phase-aligned distance between the last two doublings.
    pub last_change: f64,
    pub converged: bool,
    /// `(substeps, change from the previous level)` for every doubling.
    pub history: Vec<(usize, f64)>,
}

/// Doubles the substep count from `settings.start_substeps` until two
/// successive oracle states differ by less than `settings.tolerance`.
pub fn exact_evolve_converged(
    initial: &StateVector,
    params: &ModelParams,
    t_total: f64,
    settings: &OracleSettings,
) -> Result<ConvergedOracle> {
    if settings.start_substeps == 0 || settings.max_substeps < settings.start_substeps {
        return Err(Error::Argument("oracle substep range is empty".into()));
    }
    let oracle = ExactPropagator::new(params)?;
    let run = |substeps: usize| -> Result<StateVector> {
        let mut s = initial.clone();
        oracle.propagate(&mut s, 0.0, t_total, substeps)?;
        Ok(s)
    };
    let mut substeps = settings.start_substeps;
    let mut previous = run(substeps)?;
    let mut history = Vec::new();
    loop {
        if substeps * 2 > settings.max_substeps {
            let last_change = history.last().map(|&(_, c)| c).unwrap_or(f64::INFINITY);
            return Ok(ConvergedOracle {
                state: previous,
                substeps,
                last_change,
                converged: false,
                history,
            });
        }
        substeps *= 2;
        let current = run(substeps)?;
        let change = phase_aligned_distance(&current, &previous)?;
        history.push((substeps, change));
        if change < settings.tolerance {
            return Ok(ConvergedOracle {
                state: current,
                substeps,
                last_change: change,
                converged: true,
                history,
            });
        }
        previous = current;
    }
}

/// Oracle states at each of `times` (ascending, starting anywhere >= 0),
/// each interval split into `substeps_per_interval` pieces.
pub fn exact_trajectory(
    initial: &StateVector,
    params: &ModelParams,
    times: &[f64],
    substeps_per_interval: usize,
) -> Result<Vec<StateVector>> {
    let oracle = ExactPropagator::new(params)?;
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &target in times {
        oracle.propagate(&mut state, t, target, substeps_per_interval)?;
        t = target;
        out.push(state.clone());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObservableDeltas {
    pub density_max: f64,
    pub n_total: f64,
    pub correlation_c: f64,
    pub polarization_over_e: f64,
    pub chiral_c: f64,
}

impl ObservableDeltas {
    pub fn between(a: &ObservableRecord, b: &ObservableRecord) -> Self {
        ObservableDeltas {
            density_max: a
                .density
                .iter()
                .zip(&b.density)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            n_total: (a.n_total - b.n_total).abs(),
            correlation_c: (a.correlation_c - b.correlation_c).abs(),
            polarization_over_e: (a.polarization_over_e - b.polarization_over_e).abs(),
            chiral_c: (a.chiral_c - b.chiral_c).abs(),
        }
    }

    pub fn max(&self) -> f64 {
        [
            self.density_max,
            self.n_total,
            self.correlation_c,
            self.polarization_over_e,
            self.chiral_c,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub steps: usize,
    pub state_distance: f64,
    pub deltas: ObservableDeltas,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorScan {
    pub rows: Vec<ScanRow>,
    pub oracle: ConvergedOracle,
}

/// Final-time Trotter error against the converged oracle for each step count.
pub fn trotter_error_scan(
    params: &ModelParams,
    initial: &StateVector,
    t_total: f64,
    step_counts: &[usize],
    sampling: TimeSampling,
    oracle_settings: &OracleSettings,
) -> Result<ErrorScan> {
    if step_counts.is_empty() {
        return Err(Error::Argument("no step counts to scan".into()));
    }
    let oracle = exact_evolve_converged(initial, params, t_total, oracle_settings)?;
    let exact_record = observe_exact(&oracle.state, params, t_total)?;
    let trotter = Trotterizer::new(params)?;
    let rows = step_counts
        .iter()
        .map(|&steps| {
            let plan = TrotterPlan::new(t_total, steps)?
                .with_sampling(sampling)
                .with_snapshot_every(steps.max(1))?
                .retaining_states();
            let trajectory = trotter.evolve(initial, &plan)?;
            let last = trajectory
                .states
                .as_ref()
                .and_then(|s| s.last())
                .expect("retained");
            Ok(ScanRow {
                steps,
                state_distance: phase_aligned_distance(last, &oracle.state)?,
                deltas: ObservableDeltas::between(trajectory.final_record(), &exact_record),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorScan { rows, oracle })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset(mass: f64) -> ModelParams {
        ModelParams::new(8, 0.1, mass).unwrap()
    }

    #[test]
    fn plan_validation() {
        let plan = TrotterPlan::new(1.0, 10).unwrap();
        assert!((plan.dt - 0.1).abs() < 1e-15);
        assert!((plan.total_time() - 1.0).abs() < 1e-12);
        assert!(TrotterPlan::new(1.0, 0).is_err());
        assert!(TrotterPlan::new(-1.0, 3).is_err());
        assert!(plan.with_snapshot_every(0).is_err());
        assert_eq!(
            plan.with_snapshot_every(4).unwrap().snapshot_steps(),
            vec![0, 4, 8, 10]
        );
    }

    #[test]
    fn zero_steps_gives_initial_record_only() {
        let plan = TrotterPlan::new(0.0, 0).unwrap();
        let initial = StateVector::basis_state(8, 1).unwrap();
        let traj = trotter_evolve(&initial, &preset(1.0), &plan).unwrap();
        assert_eq!(traj.times, vec![0.0]);
        assert_eq!(traj.records.len(), 1);
    }

    #[test]
    fn sampling_rule() {
        assert_eq!(TimeSampling::Left.sample(3, 0.1), 3.0 * 0.1);
        assert_eq!(TimeSampling::Midpoint.sample(3, 0.1), 3.5 * 0.1);
        assert_eq!("left".parse::<TimeSampling>().unwrap(), TimeSampling::Left);
        assert!("right".parse::<TimeSampling>().is_err());
    }

    #[test]
    fn massless_step_ignores_sample_time() {
        let params = preset(0.0);
        let mut a = StateVector::basis_state(8, 1).unwrap();
        let mut b = a.clone();
        trotter_step(&mut a, &params, 0.0, 0.1).unwrap();
        trotter_step(&mut b, &params, 7.3, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn step_rejects_bad_dt() {
        let mut s = StateVector::basis_state(8, 1).unwrap();
        assert!(trotter_step(&mut s, &preset(1.0), 0.0, 0.0).is_err());
        let mut small = StateVector::basis_state(4, 1).unwrap();
        assert!(trotter_step(&mut small, &preset(1.0), 0.0, 0.1).is_err());
    }

    #[test]
    fn oracle_zero_time_is_identity() {
        let s = StateVector::basis_state(8, 1).unwrap();
        assert_eq!(exact_evolve(&s, &preset(1.0), 0.0, 16).unwrap(), s);
        assert!(exact_evolve(&s, &preset(1.0), 1.0, 0).is_err());
    }

    #[test]
    fn oracle_size_guard() {
        let p = ModelParams::new(14, 0.1, 1.0).unwrap();
        assert!(matches!(
            ExactPropagator::new(&p),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn static_oracle_is_substep_independent() {
        let s = StateVector::basis_state(8, 1).unwrap();
        let a = exact_evolve(&s, &preset(0.0), 1.0, 1).unwrap();
        let b = exact_evolve(&s, &preset(0.0), 1.0, 64).unwrap();
        assert!(phase_aligned_distance(&a, &b).unwrap() < 1e-12);
    }

    #[test]
    fn scan_requires_step_counts() {
        let s = StateVector::basis_state(4, 1).unwrap();
        let p = ModelParams::new(4, 0.1, 1.0).unwrap();
        assert!(trotter_error_scan(
            &p,
            &s,
            1.0,
            &[],
            TimeSampling::Midpoint,
            &OracleSettings::default()
        )
        .is_err());
    }
}
