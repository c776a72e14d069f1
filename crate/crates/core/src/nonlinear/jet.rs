use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{NonlinearError, NonlinearRun};
use crate::exact::{binomial, multinomial};
use crate::numerics::factorial_f64;
use crate::spectral::{Field, NOISE_FLOOR};

/// Highest supported jet order.
pub const MAX_JET_ORDER: usize = 14;
/// Largest tolerated spectral tail fraction of an assembled product term.
pub const ALIAS_THRESHOLD: f64 = 1e-8;

/// `[u, ∂_t u, …, ∂_t^n u]` at one snapshot time, with
/// `‖∂_t^n(t^n u)‖_∞` for every `n`.
#[derive(Debug, Clone)]
pub struct TimeJet {
    pub base_time: f64,
    pub p: u32,
    pub derivs: Vec<Field>,
    pub weighted_norms: Vec<f64>,
}

impl TimeJet {
    pub fn order(&self) -> usize {
        self.derivs.len() - 1
    }
}

/// Serializable summary of a jet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeJetSummary {
    pub base_time: f64,
    pub p: u32,
    pub deriv_sup_norms: Vec<f64>,
    pub weighted_norms: Vec<f64>,
}

impl From<&TimeJet> for TimeJetSummary {
    fn from(j: &TimeJet) -> Self {
        Self {
            base_time: j.base_time,
            p: j.p,
            deriv_sup_norms: j.derivs.iter().map(Field::sup_norm).collect(),
            weighted_norms: j.weighted_norms.clone(),
        }
    }
}

fn compositions(m: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(m - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `∂_t^m (u^p) = Σ_{i_1+…+i_p=m} (m; i) Π_j ∂_t^{i_j} u`, assembled on
/// the grid from dealiased factors and dealiased once more.
pub fn power_time_derivative(derivs: &[Field], p: u32, m: usize) -> Result<Field, NonlinearError> {
    if derivs.len() <= m {
        return Err(NonlinearError::InvalidArgument(format!(
            "need derivatives up to order {m}, have {}",
            derivs.len()
        )));
    }
    let grid = derivs[0].grid();
    let factors: Vec<Field> = derivs[..=m].iter().map(Field::dealiased).collect();
    let n = grid.n_points();
    let mut acc = vec![0.0; n];
    for comp in compositions(m, p as usize) {
        let parts: Vec<u64> = comp.iter().map(|&i| i as u64).collect();
        let coef = multinomial(m as u64, &parts)
            .map_err(|e| NonlinearError::InvalidArgument(e.to_string()))?
            .to_f64()
            .expect("finite");
        let mut prod = vec![coef; n];
        for &i in &comp {
            for (q, v) in prod.iter_mut().zip(factors[i].values()) {
                *q *= v;
            }
        }
        for (a, q) in acc.iter_mut().zip(&prod) {
            *a += q;
        }
    }
    let raw = Field::from_samples(grid, acc)?;
    let fraction = raw.tail_energy_fraction();
    if fraction > ALIAS_THRESHOLD {
        return Err(NonlinearError::Aliased { order: m, fraction });
    }
    Ok(raw.dealiased())
}

/// `∂_t^n (t^n u)(t_0) = Σ_j C(n,j) n!/(n-j)! t_0^{n-j} ∂_t^{n-j} u(t_0)`.
pub fn weighted_norm_field(derivs: &[Field], t0: f64, n: usize) -> Result<Field, NonlinearError> {
    let weights: Vec<f64> = (0..=n)
        .map(|j| {
            let c = binomial(n as u64, j as u64).to_f64().expect("finite");
            c * factorial_f64(n) / factorial_f64(n - j) * t0.powi((n - j) as i32)
        })
        .collect();
    Ok(Field::weighted_sum(derivs[0].grid(), (0..=n).map(|j| (weights[j], &derivs[n - j])))?)
}

/// Exact time-derivative jet at the snapshot `t0` from
/// `∂_t^{m+1} u = Δ ∂_t^m u + ∂_t^m (u^p)`.
pub fn time_jet(run: &NonlinearRun, t0: f64, n_max: usize) -> Result<TimeJet, NonlinearError> {
    if n_max > MAX_JET_ORDER {
        return Err(NonlinearError::InvalidArgument(format!("jet order {n_max} exceeds {MAX_JET_ORDER}")));
    }
    let snap = run.snapshot_at(t0).ok_or(NonlinearError::NotASnapshot(t0))?;
    let t0 = snap.time;
    let p = run.p();
    let mut derivs = vec![snap.field.clone()];
    for m in 0..n_max {
        let lap = derivs[m].map_spectrum(|k| -k * k);
        let nl = power_time_derivative(&derivs, p, m)?;
        derivs.push(lap.add(&nl)?.denoised(NOISE_FLOOR));
    }
    let weighted_norms =
        (0..=n_max).map(|n| weighted_norm_field(&derivs, t0, n).map(|f| f.sup_norm())).collect::<Result<_, _>>()?;
    Ok(TimeJet { base_time: t0, p, derivs, weighted_norms })
}

/// `Σ_n ∂_t^n u(t_0) (t - t_0)^n / n!`.
pub fn taylor_predict(jet: &TimeJet, t: f64) -> Field {
    let s = t - jet.base_time;
    let mut w = 1.0;
    let weights: Vec<f64> = (0..jet.derivs.len())
        .map(|n| {
            if n > 0 {
                w *= s / n as f64;
            }
            w
        })
        .collect();
    Field::weighted_sum(jet.derivs[0].grid(), weights.into_iter().zip(&jet.derivs)).expect("one grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nonlinear::{step_solver, DEFAULT_DT};
    use crate::numerics::fd_weights;
    use crate::spectral::Grid;

    fn sine_run(p: u32, t_final: f64) -> NonlinearRun {
        let g = Grid::standard();
        step_solver(p, &Field::from_fn(&g, |x| 0.1 * x.sin()), DEFAULT_DT, t_final, 1).unwrap()
    }

    fn constant_run(c: f64) -> NonlinearRun {
        let g = Grid::standard();
        step_solver(2, &Field::from_fn(&g, |_| c), DEFAULT_DT, 1.0, 250).unwrap()
    }

    #[test]
    fn composition_count() {
        assert_eq!(compositions(4, 2).len(), 5);
        assert_eq!(compositions(5, 3).len(), 21);
        assert!(compositions(6, 3).iter().all(|c| c.iter().sum::<usize>() == 6));
    }

    #[test]
    fn riccati_derivatives() {
        let c = 0.1;
        let jet = time_jet(&constant_run(c), 0.0, 12).unwrap();
        assert!((jet.derivs[2].values()[3] - 0.002).abs() < 1e-15);
        for (n, d) in jet.derivs.iter().enumerate() {
            let exact = factorial_f64(n) * c.powi(n as i32 + 1);
            for v in d.values() {
                assert!((v - exact).abs() <= 1e-12 * exact, "n={n} {v} {exact}");
            }
        }
        assert_eq!(jet.derivs[0].values(), constant_run(c).initial().values());
    }

    #[test]
    fn riccati_taylor_prediction() {
        let c = 0.1;
        let jet = time_jet(&constant_run(c), 0.0, 12).unwrap();
        let u = taylor_predict(&jet, 0.5);
        for v in u.values() {
            assert!((v - c / (1.0 - 0.5 * c)).abs() < 1e-10);
        }
        assert_eq!(taylor_predict(&jet, 0.0).values(), jet.derivs[0].values());
    }

    #[test]
    fn zero_run_gives_zero_jets() {
        let g = Grid::standard();
        let run = step_solver(3, &Field::zeros(&g), 1e-2, 0.5, 1).unwrap();
        let jet = time_jet(&run, 0.3, 10).unwrap();
        assert!(jet.derivs.iter().all(Field::is_zero));
        assert!(jet.weighted_norms.iter().all(|&w| w == 0.0));
        assert!(taylor_predict(&jet, 0.35).is_zero());
    }

    #[test]
    fn square_matches_binomial_product_rule() {
        let run = sine_run(2, 0.3);
        let jet = time_jet(&run, 0.3, 8).unwrap();
        for m in 0..=8 {
            let multi = power_time_derivative(&jet.derivs, 2, m).unwrap();
            let mut terms = Vec::new();
            for i in 0..=m {
                let c = binomial(m as u64, i as u64).to_f64().unwrap();
                terms.push((c, jet.derivs[i].mul_dealiased(&jet.derivs[m - i]).unwrap()));
            }
            let direct = Field::weighted_sum(run.grid(), terms.iter().map(|(c, f)| (*c, f))).unwrap();
            let scale = direct.sup_norm().max(f64::MIN_POSITIVE);
            assert!(multi.max_abs_diff(&direct).unwrap() <= 1e-12 * scale, "m={m}");
        }
    }

    fn time_fd(run: &NonlinearRun, t0: f64, order: usize, h: f64, f: impl Fn(f64, &Field) -> Field) -> Field {
        let offsets: Vec<f64> = (-4..=4).map(|j| j as f64 * h).collect();
        let w = fd_weights(0.0, &offsets, order);
        let fields: Vec<Field> = offsets
            .iter()
            .map(|d| {
                let s = run.snapshot_at(t0 + d).unwrap();
                f(s.time, &s.field)
            })
            .collect();
        Field::weighted_sum(run.grid(), w.into_iter().zip(&fields)).unwrap()
    }

    #[test]
    fn derivatives_match_trajectory_differences() {
        let run = sine_run(2, 0.4);
        let jet = time_jet(&run, 0.3, 3).unwrap();
        for n in 1..=3 {
            let fd = time_fd(&run, 0.3, n, 0.01, |_, u| u.clone());
            let err = fd.max_abs_diff(&jet.derivs[n]).unwrap() / jet.derivs[n].sup_norm();
            assert!(err < 1e-5, "n={n} {err}");
        }
    }

    #[test]
    fn weighted_norms_match_differences_of_t_power() {
        let run = sine_run(2, 0.4);
        let jet = time_jet(&run, 0.3, 4).unwrap();
        for n in 1..=4 {
            let fd = time_fd(&run, 0.3, n, 0.02, |t, u| u.scale(t.powi(n as i32)));
            let rel = (fd.sup_norm() - jet.weighted_norms[n]).abs() / jet.weighted_norms[n];
            assert!(rel < 1e-4, "n={n} {rel}");
        }
    }

    #[test]
    fn prediction_matches_stepper() {
        for p in [2, 3] {
            let run = sine_run(p, 0.35);
            let jet = time_jet(&run, 0.3, 12).unwrap();
            let err = taylor_predict(&jet, 0.35).max_abs_diff(&run.snapshot_at(0.35).unwrap().field).unwrap();
            assert!(err < 1e-7, "p={p} {err}");
        }
    }

    #[test]
    fn rejects_bad_requests() {
        let run = sine_run(2, 0.1);
        assert!(matches!(time_jet(&run, 0.0505, 4), Err(NonlinearError::NotASnapshot(_))));
        assert!(time_jet(&run, 0.1, MAX_JET_ORDER + 1).is_err());
    }
}
