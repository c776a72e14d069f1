use serde::{Deserialize, Serialize};

use super::NonlinearError;
use crate::spectral::{Field, Grid};
use crate::taylor::RESOLUTION_THRESHOLD;

/// Runs abort once `‖u‖_∞` exceeds this.
pub const BLOWUP_GUARD: f64 = 10.0;
/// Largest tolerated one-step growth factor of `‖u‖_∞`.
pub const GROWTH_GUARD: f64 = 10.0;
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub field: Field,
}

/// Trajectory of `u_t = Δu + u^p` stored every `stride` steps.
#[derive(Debug, Clone)]
pub struct NonlinearRun {
    p: u32,
    dt: f64,
    t_final: f64,
    stride: usize,
    snapshots: Vec<Snapshot>,
}

impl NonlinearRun {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t_final(&self) -> f64 {
        self.t_final
    }

    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn grid(&self) -> &Grid {
        self.snapshots[0].field.grid()
    }

    pub fn initial(&self) -> &Field {
        &self.snapshots[0].field
    }

    pub fn final_field(&self) -> &Field {
        &self.snapshots.last().expect("run has its initial snapshot").field
    }

    /// Snapshot whose time is `t` up to a millionth of a step.
    pub fn snapshot_at(&self, t: f64) -> Option<&Snapshot> {
        let pos = t / self.dt;
        let step = pos.round();
        if step < 0.0 || (pos - step).abs() > 1e-6 {
            return None;
        }
        let step = step as usize;
        if !step.is_multiple_of(self.stride) {
            return None;
        }
        self.snapshots.get(step / self.stride)
    }
}

/// `u^p` from the dealiased field, dealiased again.
pub(crate) fn power_dealiased(u: &Field, p: u32) -> Field {
    let a = u.dealiased();
    let values = a.values().iter().map(|v| v.powi(p as i32)).collect();
    Field::from_samples(u.grid(), values).expect("same grid").dealiased()
}

/// Lawson integrating-factor RK4: the heat semigroup `e^{tΔ}` is applied
/// exactly and the dealiased `u^p` term by the classical four stages.
pub fn step_solver(p: u32, u0: &Field, dt: f64, t_final: f64, stride: usize) -> Result<NonlinearRun, NonlinearError> {
    if p == 0 {
        return Err(NonlinearError::InvalidArgument("p must be a positive integer".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(t_final >= 0.0 && t_final.is_finite()) {
        return Err(NonlinearError::InvalidArgument(format!("dt = {dt}, T = {t_final}")));
    }
    if stride == 0 {
        return Err(NonlinearError::InvalidArgument("stride must be positive".into()));
    }
    let steps = (t_final / dt).round();
    if (steps * dt - t_final).abs() > 1e-9 * dt {
        return Err(NonlinearError::InvalidArgument(format!("T = {t_final} is not a multiple of dt = {dt}")));
    }
    let steps = steps as usize;
    let fraction = u0.tail_energy_fraction();
    if fraction > RESOLUTION_THRESHOLD {
        return Err(NonlinearError::Unresolved { fraction });
    }
    if u0.sup_norm() > BLOWUP_GUARD {
        return Err(NonlinearError::BlowUp { time: 0.0, sup: u0.sup_norm() });
    }

    let grid = u0.grid().clone();
    let half = |f: &Field| f.map_spectrum(|k| (-k * k * dt * 0.5).exp());
    let full = |f: &Field| f.map_spectrum(|k| (-k * k * dt).exp());
    let nl = |f: &Field| power_dealiased(f, p);

    let mut u = u0.dealiased();
    let mut snapshots = vec![Snapshot { step: 0, time: 0.0, field: u0.clone() }];
    for n in 1..=steps {
        let a = nl(&u);
        let ua = half(&u.lin_comb(1.0, &a, 0.5 * dt)?);
        let b = nl(&ua);
        let eu_half = half(&u);
        let ub = eu_half.lin_comb(1.0, &b, 0.5 * dt)?;
        let c = nl(&ub);
        let eu = full(&u);
        let uc = eu.lin_comb(1.0, &half(&c), dt)?;
        let d = nl(&uc);
        let bc = half(&b.add(&c)?);
        let next = Field::weighted_sum(&grid, [(1.0, &eu), (dt / 6.0, &full(&a)), (dt / 3.0, &bc), (dt / 6.0, &d)])?;

        let time = n as f64 * dt;
        let (old, new) = (u.sup_norm(), next.sup_norm());
        if !new.is_finite() || (old > 0.0 && new > GROWTH_GUARD * old) {
            return Err(NonlinearError::Unstable { time, growth: new / old });
        }
        if new > BLOWUP_GUARD {
            return Err(NonlinearError::BlowUp { time, sup: new });
        }
        u = next;
        if n % stride == 0 {
            snapshots.push(Snapshot { step: n, time, field: u.clone() });
        }
    }
    Ok(NonlinearRun { p, dt, t_final, stride, snapshots })
}

/// Self-convergence at `dt`, `dt/2`, `dt/4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceStudy {
    pub p: u32,
    pub t_final: f64,
    pub dts: [f64; 3],
    /// `‖u_{dt} - u_{dt/2}‖_∞` and `‖u_{dt/2} - u_{dt/4}‖_∞` at `T`.
    pub differences: [f64; 2],
    pub order: f64,
}

pub fn convergence_order(p: u32, u0: &Field, t_final: f64, dt: f64) -> Result<ConvergenceStudy, NonlinearError> {
    let dts = [dt, dt / 2.0, dt / 4.0];
    let mut finals = Vec::with_capacity(3);
    for h in dts {
        let steps = (t_final / h).round() as usize;
        let run = step_solver(p, u0, h, t_final, steps.max(1))?;
        finals.push(run.final_field().clone());
    }
    let differences = [finals[0].max_abs_diff(&finals[1])?, finals[1].max_abs_diff(&finals[2])?];
    let order = (differences[0] / differences[1]).log2();
    Ok(ConvergenceStudy { p, t_final, dts, differences, order })
}

/// Initial data named in a run manifest.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    Zero,
    Constant { value: f64 },
    Sine { amplitude: f64, mode: u32 },
}

impl InitialData {
    pub fn field(&self, grid: &Grid) -> Field {
        match *self {
            InitialData::Zero => Field::zeros(grid),
            InitialData::Constant { value } => Field::from_fn(grid, |_| value),
            InitialData::Sine { amplitude, mode } => Field::from_fn(grid, |x| amplitude * (mode as f64 * x).sin()),
        }
    }
}

fn default_grid_points() -> usize {
    Grid::DEFAULT_POINTS
}

/// `p`, initial data, `dt`, `T` and snapshot stride for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub p: u32,
    pub u0: InitialData,
    pub dt: f64,
    #[serde(rename = "T")]
    pub t_final: f64,
    pub stride: usize,
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
}

impl RunManifest {
    pub fn run(&self) -> Result<NonlinearRun, NonlinearError> {
        let grid = Grid::new(self.grid_points, std::f64::consts::TAU)?;
        step_solver(self.p, &self.u0.field(&grid), self.dt, self.t_final, self.stride)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sine(g: &Grid, a: f64) -> Field {
        Field::from_fn(g, |x| a * x.sin())
    }

    #[test]
    fn zero_is_a_fixed_point() {
        let g = Grid::standard();
        let run = step_solver(2, &Field::zeros(&g), 1e-2, 0.5, 10).unwrap();
        assert_eq!(run.snapshots().len(), 6);
        assert!(run.snapshots().iter().all(|s| s.field.is_zero()));
    }

    #[test]
    fn constant_data_follows_riccati() {
        let g = Grid::standard();
        let run = step_solver(2, &Field::from_fn(&g, |_| 0.1), DEFAULT_DT, 1.0, 100).unwrap();
        let u = run.final_field();
        for v in u.values() {
            assert!((v - 1.0 / 9.0).abs() < 1e-8, "{v}");
        }
        let s = run.snapshot_at(0.5).unwrap();
        assert_eq!(s.step, 500);
        assert!((s.field.values()[7] - 0.1 / 0.95).abs() < 1e-8);
    }

    #[test]
    fn snapshot_lookup() {
        let g = Grid::standard();
        let run = step_solver(2, &sine(&g, 0.1), 1e-2, 0.3, 5).unwrap();
        assert!(run.snapshot_at(0.1).is_some());
        assert!(run.snapshot_at(0.03).is_none());
        assert!(run.snapshot_at(0.4).is_none());
        assert!(run.snapshot_at(-0.05).is_none());
        assert_eq!(run.snapshot_at(0.0).unwrap().field.values(), run.initial().values());
    }

    #[test]
    fn fourth_order_in_time() {
        let g = Grid::standard();
        for p in [2, 3] {
            let study = convergence_order(p, &sine(&g, 0.1), 1.0, 0.1).unwrap();
            assert!(study.order > 3.8, "{study:?}");
            assert!(study.differences[1] > 1e-12);
        }
    }

    #[test]
    fn guards() {
        let g = Grid::standard();
        let err = step_solver(2, &Field::from_fn(&g, |_| 2.0), 1e-3, 1.0, 1).unwrap_err();
        match err {
            NonlinearError::BlowUp { time, sup } => {
                assert!(sup > BLOWUP_GUARD);
                assert!((time - 0.4).abs() < 2e-3, "{time}");
            }
            other => panic!("{other:?}"),
        }
        let err = step_solver(3, &Field::from_fn(&g, |_| 3.0), 0.5, 1.0, 1).unwrap_err();
        assert!(matches!(err, NonlinearError::Unstable { .. }), "{err:?}");
        assert!(step_solver(2, &sine(&g, 0.1), 0.3, 1.0, 1).is_err());
        assert!(step_solver(0, &sine(&g, 0.1), 0.1, 1.0, 1).is_err());
        let rough = Field::from_fn(&g, |x| (120.0 * x).sin());
        assert!(matches!(step_solver(2, &rough, 0.1, 1.0, 1), Err(NonlinearError::Unresolved { .. })));
    }

    #[test]
    fn manifest_round_trip() {
        let m = RunManifest {
            p: 3,
            u0: InitialData::Sine { amplitude: 0.1, mode: 1 },
            dt: 1e-2,
            t_final: 0.2,
            stride: 5,
            grid_points: 128,
        };
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"kind\":\"sine\""));
        assert_eq!(serde_json::from_str::<RunManifest>(&text).unwrap(), m);
        let run = m.run().unwrap();
        assert_eq!(run.snapshots().len(), 5);
        assert_eq!(run.grid().n_points(), 128);
        let bad = r#"{"p":2,"u0":{"kind":"zero"},"dt":0.1,"T":1,"stride":1,"extra":0}"#;
        assert!(serde_json::from_str::<RunManifest>(bad).is_err());
    }
}
