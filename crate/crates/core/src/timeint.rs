//! Third-order strong-stability-preserving Runge–Kutta and CFL control.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TimeControls {
    pub cfl: f64,
    pub t_final: f64,
    pub dt_cap: Option<f64>,
}

impl Default for TimeControls {
    fn default() -> Self {
        Self { cfl: 0.45, t_final: 1.0, dt_cap: None }
    }
}

impl TimeControls {
    pub fn validate(&self) -> Result<(), TimeError<std::convert::Infallible>> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(TimeError::InvalidCfl(self.cfl));
        }
        if !(self.t_final >= 0.0) || !self.t_final.is_finite() {
            return Err(TimeError::InvalidFinalTime(self.t_final));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TimeError<E> {
    #[error("RK stage {stage} of step {step}: {source}")]
    Stage { step: usize, stage: usize, source: E },
    #[error("non-finite value at step {step}, t = {t}, entry {index}")]
    NonFinite { step: usize, t: f64, index: usize },
    #[error("zero wave speed and no dt cap")]
    ZeroSpeed,
    #[error("CFL number {0} outside (0, 1]")]
    InvalidCfl(f64),
    #[error("final time {0} must be finite and >= 0")]
    InvalidFinalTime(f64),
}

impl<E> TimeError<E> {
    pub fn map_source<F>(self, f: impl FnOnce(E) -> F) -> TimeError<F> {
        match self {
            TimeError::Stage { step, stage, source } => TimeError::Stage { step, stage, source: f(source) },
            TimeError::NonFinite { step, t, index } => TimeError::NonFinite { step, t, index },
            TimeError::ZeroSpeed => TimeError::ZeroSpeed,
            TimeError::InvalidCfl(c) => TimeError::InvalidCfl(c),
            TimeError::InvalidFinalTime(t) => TimeError::InvalidFinalTime(t),
        }
    }
}

/// `cfl · dx / speed`; a zero speed falls back to `dt_cap`.
pub fn cfl_dt(max_speed: f64, dx: f64, cfl: f64, dt_cap: Option<f64>) -> Result<f64, TimeError<std::convert::Infallible>> {
    if max_speed > 0.0 {
        let dt = cfl * dx / max_speed;
        Ok(dt_cap.map_or(dt, |c| dt.min(c)))
    } else {
        dt_cap.ok_or(TimeError::ZeroSpeed)
    }
}

/// `cfl / (sx/dx + sy/dy)`.
pub fn cfl_dt_2d(
    sx: f64,
    sy: f64,
    dx: f64,
    dy: f64,
    cfl: f64,
    dt_cap: Option<f64>,
) -> Result<f64, TimeError<std::convert::Infallible>> {
    let rate = sx / dx + sy / dy;
    if rate > 0.0 {
        let dt = cfl / rate;
        Ok(dt_cap.map_or(dt, |c| dt.min(c)))
    } else {
        dt_cap.ok_or(TimeError::ZeroSpeed)
    }
}

/// Shrinks `dt` so the step lands exactly on `t_final`.
pub fn clip_dt(t: f64, dt: f64, t_final: f64) -> f64 {
    if t + dt >= t_final {
        t_final - t
    } else {
        dt
    }
}

/// Stage buffers reused across steps.
#[derive(Debug, Default, Clone)]
pub struct Rk3Work {
    stage: Vec<f64>,
    rate: Vec<f64>,
}

/// Right-hand side `L(u)` evaluated at stage time `t` for a step of size `dt`.
pub trait Rhs {
    type Error;
    fn eval(&mut self, u: &[f64], t: f64, dt: f64, out: &mut [f64]) -> Result<(), Self::Error>;
}

impl<E, F> Rhs for F
where
    F: FnMut(&[f64], f64, f64, &mut [f64]) -> Result<(), E>,
{
    type Error = E;
    fn eval(&mut self, u: &[f64], t: f64, dt: f64, out: &mut [f64]) -> Result<(), E> {
        self(u, t, dt, out)
    }
}

/// One step in place:
/// `u¹ = u + dt L(u)`, `u² = ¾u + ¼(u¹ + dt L(u¹))`, `uⁿ⁺¹ = ⅓u + ⅔(u² + dt L(u²))`.
pub fn rk3_step<R: Rhs>(u: &mut [f64], t: f64, dt: f64, rhs: &mut R, work: &mut Rk3Work) -> Result<(), (usize, R::Error)> {
    let n = u.len();
    work.stage.resize(n, 0.0);
    work.rate.resize(n, 0.0);
    let Rk3Work { stage, rate } = work;

    rhs.eval(u, t, dt, rate).map_err(|e| (1, e))?;
    for i in 0..n {
        stage[i] = u[i] + dt * rate[i];
    }
    rhs.eval(stage, t + dt, dt, rate).map_err(|e| (2, e))?;
    for i in 0..n {
        stage[i] = 0.75 * u[i] + 0.25 * (stage[i] + dt * rate[i]);
    }
    rhs.eval(stage, t + 0.5 * dt, dt, rate).map_err(|e| (3, e))?;
    for i in 0..n {
        u[i] = u[i] / 3.0 + 2.0 / 3.0 * (stage[i] + dt * rate[i]);
    }
    Ok(())
}

/// Summary of an integration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub steps: usize,
    pub t: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    /// SHA-256 over the bit patterns of every step size taken.
    pub dt_digest: String,
}

/// Advance `u` to `controls.t_final`. `stable_dt` returns the CFL step for
/// the current state; `after_step` observes `(step, t, u)` and may abort.
pub fn integrate<R, D>(
    u: &mut [f64],
    t0: f64,
    controls: &TimeControls,
    mut stable_dt: D,
    rhs: &mut R,
    mut after_step: impl FnMut(usize, f64, &[f64]) -> Result<(), R::Error>,
) -> Result<RunStats, TimeError<R::Error>>
where
    R: Rhs,
    D: FnMut(&[f64]) -> Result<f64, TimeError<R::Error>>,
{
    controls.validate().map_err(|e| e.map_source(|never| match never {}))?;
    let mut work = Rk3Work::default();
    let mut hasher = Sha256::new();
    let mut t = t0;
    let mut step = 0;
    let (mut dt_min, mut dt_max) = (f64::INFINITY, 0.0f64);
    while t < controls.t_final {
        let dt = clip_dt(t, stable_dt(u)?, controls.t_final);
        if !(dt > 0.0) {
            return Err(TimeError::NonFinite { step, t, index: usize::MAX });
        }
        rk3_step(u, t, dt, rhs, &mut work).map_err(|(stage, source)| TimeError::Stage { step, stage, source })?;
        step += 1;
        t = if t + dt >= controls.t_final { controls.t_final } else { t + dt };
        hasher.update(dt.to_bits().to_le_bytes());
        dt_min = dt_min.min(dt);
        dt_max = dt_max.max(dt);
        if let Some(index) = u.iter().position(|x| !x.is_finite()) {
            return Err(TimeError::NonFinite { step, t, index });
        }
        after_step(step, t, u).map_err(|source| TimeError::Stage { step, stage: 0, source })?;
    }
    let dt_digest = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(RunStats { steps: step, t, dt_min, dt_max, dt_digest })
}

#[cfg(test)]
mod tests {
    use std::convert::Infallible;

    use super::*;

    fn zero(_: &[f64], _: f64, _: f64, out: &mut [f64]) -> Result<(), Infallible> {
        out.fill(0.0);
        Ok(())
    }

    #[test]
    fn zero_rhs_is_identity() {
        let mut u = vec![1.0, -2.0, 3.5];
        rk3_step(&mut u, 0.0, 0.1, &mut zero, &mut Rk3Work::default()).unwrap();
        assert_eq!(u, vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn linear_decay_reproduces_cubic_taylor() {
        let mut decay = |u: &[f64], _: f64, _: f64, out: &mut [f64]| -> Result<(), Infallible> {
            out[0] = -u[0];
            Ok(())
        };
        for dt in [0.5, 0.1, 0.01] {
            let mut u = vec![1.0];
            rk3_step(&mut u, 0.0, dt, &mut decay, &mut Rk3Work::default()).unwrap();
            let taylor = 1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0;
            assert!((u[0] - taylor).abs() < 1e-15, "{dt}: {} vs {taylor}", u[0]);
        }
    }

    #[test]
    fn stage_times_and_errors() {
        let mut seen = Vec::new();
        let mut record = |_: &[f64], t: f64, _: f64, out: &mut [f64]| -> Result<(), &'static str> {
            seen.push(t);
            out.fill(0.0);
            if seen.len() == 2 {
                Err("boom")
            } else {
                Ok(())
            }
        };
        let r = rk3_step(&mut [0.0], 1.0, 0.5, &mut record, &mut Rk3Work::default());
        assert_eq!(r, Err((2, "boom")));
        assert_eq!(seen, vec![1.0, 1.5]);
    }

    #[test]
    fn cfl_examples() {
        assert!((cfl_dt(1.0, 0.01, 0.45, None).unwrap() - 0.0045).abs() < 1e-18);
        let one = cfl_dt(2.0, 0.1, 0.45, None).unwrap();
        let two = cfl_dt_2d(2.0, 2.0, 0.1, 0.1, 0.45, None).unwrap();
        assert!((two - one / 2.0).abs() < 1e-17);
        assert!((clip_dt(1.999, 0.01, 2.0) - 0.001).abs() < 1e-15);
        assert_eq!(clip_dt(1.0, 0.01, 2.0), 0.01);
        assert_eq!(cfl_dt(0.0, 0.1, 0.45, None), Err(TimeError::ZeroSpeed));
        assert_eq!(cfl_dt(0.0, 0.1, 0.45, Some(0.3)), Ok(0.3));
        assert_eq!(cfl_dt(10.0, 0.1, 0.5, Some(1e-3)), Ok(1e-3));
    }

    #[test]
    fn integrate_hits_final_time_exactly() {
        let controls = TimeControls { cfl: 0.45, t_final: 1.0, dt_cap: None };
        let mut u = vec![1.0];
        let mut decay = |u: &[f64], _: f64, _: f64, out: &mut [f64]| -> Result<(), Infallible> {
            out[0] = -u[0];
            Ok(())
        };
        let stats = integrate(&mut u, 0.0, &controls, |_| Ok(0.03), &mut decay, |_, _, _| Ok(())).unwrap();
        assert_eq!(stats.t, 1.0);
        assert_eq!(stats.steps, 34);
        assert!((u[0] - (-1.0f64).exp()).abs() < 1e-5);
        assert!((stats.dt_min - (1.0 - 33.0 * 0.03)).abs() < 1e-12);
    }

    #[test]
    fn integrate_is_deterministic_and_guards_nan() {
        let controls = TimeControls { cfl: 0.45, t_final: 0.5, dt_cap: None };
        let run = || {
            let mut u = vec![0.3, 0.7];
            let mut osc = |u: &[f64], _: f64, _: f64, out: &mut [f64]| -> Result<(), Infallible> {
                out[0] = u[1];
                out[1] = -u[0];
                Ok(())
            };
            let s = integrate(&mut u, 0.0, &controls, |_| Ok(0.017), &mut osc, |_, _, _| Ok(())).unwrap();
            (u, s)
        };
        let (a, sa) = run();
        let (b, sb) = run();
        assert_eq!(a, b);
        assert_eq!(sa, sb);

        let mut blow = |u: &[f64], _: f64, _: f64, out: &mut [f64]| -> Result<(), Infallible> {
            out[0] = if u[0] > 2.0 { f64::NAN } else { 1.0 };
            Ok(())
        };
        let mut u = vec![0.0];
        let controls = TimeControls { t_final: 10.0, ..controls };
        match integrate(&mut u, 0.0, &controls, |_| Ok(0.5), &mut blow, |_, _, _| Ok(())) {
            Err(TimeError::NonFinite { step, index: 0, .. }) => assert_eq!(step, 5),
            other => panic!("{other:?}"),
        }
    }
}
