//! Physical fluxes, Lax–Friedrichs splitting and characteristic projection.
//!
//! Every system is presented to the line kernel in its "x-oriented" form:
//! two-dimensional sweeps along `y` swap the momentum components before
//! calling in, so one set of formulas serves both directions.

mod line;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use line::{interface_fluxes, lf_interface_fluxes, flux_divergence, LineScratch};

pub const GAMMA_AIR: f64 = 1.4;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FluxError {
    #[error("nonpositive density {rho}")]
    Density { rho: f64 },
    #[error("negative splitting speed {0}")]
    NegativeAlpha(f64),
    #[error("Roe average of {left:?} and {right:?} is unphysical (a² = {a2})")]
    RoeUnphysical { left: Vec<f64>, right: Vec<f64>, a2: f64 },
}

/// `p = (γ-1)(E - ½ρu²)`.
pub fn pressure(q: &[f64; 3], gamma: f64) -> Result<f64, FluxError> {
    if !(q[0] > 0.0) {
        return Err(FluxError::Density { rho: q[0] });
    }
    Ok((gamma - 1.0) * (q[2] - 0.5 * q[1] * q[1] / q[0]))
}

pub fn pressure_2d(q: &[f64; 4], gamma: f64) -> Result<f64, FluxError> {
    if !(q[0] > 0.0) {
        return Err(FluxError::Density { rho: q[0] });
    }
    Ok((gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0]))
}

/// Total energy from density, velocity magnitude squared and pressure.
pub fn energy(rho: f64, speed2: f64, p: f64, gamma: f64) -> f64 {
    p / (gamma - 1.0) + 0.5 * rho * speed2
}

pub fn conserved_1d(rho: f64, u: f64, p: f64, gamma: f64) -> [f64; 3] {
    [rho, rho * u, energy(rho, u * u, p, gamma)]
}

pub fn conserved_2d(rho: f64, u: f64, v: f64, p: f64, gamma: f64) -> [f64; 4] {
    [rho, rho * u, rho * v, energy(rho, u * u + v * v, p, gamma)]
}

/// `(ρu, ρu² + p, (E+p)u)`.
pub fn euler_flux(q: &[f64; 3], gamma: f64) -> Result<[f64; 3], FluxError> {
    let p = pressure(q, gamma)?;
    let u = q[1] / q[0];
    Ok([q[1], q[1] * u + p, (q[2] + p) * u])
}

/// Both directional fluxes of the two-dimensional system.
pub fn euler_flux_2d(q: &[f64; 4], gamma: f64) -> Result<([f64; 4], [f64; 4]), FluxError> {
    let p = pressure_2d(q, gamma)?;
    let u = q[1] / q[0];
    let v = q[2] / q[0];
    Ok((
        [q[1], q[1] * u + p, q[2] * u, (q[3] + p) * u],
        [q[2], q[1] * v, q[2] * v + p, (q[3] + p) * v],
    ))
}

/// `f± = (f ± αq)/2`.
pub fn lf_split(f: f64, q: f64, alpha: f64) -> Result<(f64, f64), FluxError> {
    if alpha < 0.0 {
        return Err(FluxError::NegativeAlpha(alpha));
    }
    Ok((0.5 * (f + alpha * q), 0.5 * (f - alpha * q)))
}

/// Right eigenvectors as columns, left eigenvectors as rows, and the
/// corresponding wave speeds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem<const N: usize> {
    pub right: [[f64; N]; N],
    pub left: [[f64; N]; N],
    pub speeds: [f64; N],
}

impl<const N: usize> EigenSystem<N> {
    pub fn identity() -> Self {
        let mut right = [[0.0; N]; N];
        for (i, row) in right.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { right, left: right, speeds: [0.0; N] }
    }

    #[inline]
    pub fn to_characteristic(&self, q: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.left) {
            for (l, x) in row.iter().zip(q) {
                *o += l * x;
            }
        }
        out
    }

    #[inline]
    pub fn to_conserved(&self, w: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.right) {
            for (r, x) in row.iter().zip(w) {
                *o += r * x;
            }
        }
        out
    }
}

/// Roe-averaged velocity, enthalpy and squared sound speed.
#[inline]
fn roe_average(rl: f64, rr: f64, vel_l: &[f64], vel_r: &[f64], hl: f64, hr: f64, out: &mut [f64]) -> f64 {
    let sl = rl.sqrt();
    let sr = rr.sqrt();
    let inv = 1.0 / (sl + sr);
    for ((o, a), b) in out.iter_mut().zip(vel_l).zip(vel_r) {
        *o = (sl * a + sr * b) * inv;
    }
    (sl * hl + sr * hr) * inv
}

/// Eigensystem of the one-dimensional Euler Jacobian at the Roe average.
pub fn roe_eigensystem(ql: &[f64; 3], qr: &[f64; 3], gamma: f64, abs_sound_speed: bool) -> Result<EigenSystem<3>, FluxError> {
    let pl = pressure(ql, gamma)?;
    let pr = pressure(qr, gamma)?;
    let mut u = [0.0];
    let h = roe_average(ql[0], qr[0], &[ql[1] / ql[0]], &[qr[1] / qr[0]], (ql[2] + pl) / ql[0], (qr[2] + pr) / qr[0], &mut u);
    let u = u[0];
    let a2 = (gamma - 1.0) * (h - 0.5 * u * u);
    let a = sound_speed(a2, abs_sound_speed).ok_or_else(|| FluxError::RoeUnphysical {
        left: ql.to_vec(),
        right: qr.to_vec(),
        a2,
    })?;
    let b1 = (gamma - 1.0) / (a * a);
    let b2 = 0.5 * b1 * u * u;
    let right = [
        [1.0, 1.0, 1.0],
        [u - a, u, u + a],
        [h - u * a, 0.5 * u * u, h + u * a],
    ];
    let left = [
        [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), 0.5 * b1],
        [1.0 - b2, b1 * u, -b1],
        [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), 0.5 * b1],
    ];
    Ok(EigenSystem { right, left, speeds: [u - a, u, u + a] })
}

/// Eigensystem of the x-direction Jacobian of the two-dimensional system.
/// Families: `u-a`, entropy `u`, shear `u`, `u+a`.
pub fn roe_eigensystem_2d(ql: &[f64; 4], qr: &[f64; 4], gamma: f64, abs_sound_speed: bool) -> Result<EigenSystem<4>, FluxError> {
    let pl = pressure_2d(ql, gamma)?;
    let pr = pressure_2d(qr, gamma)?;
    let mut vel = [0.0; 2];
    let h = roe_average(
        ql[0],
        qr[0],
        &[ql[1] / ql[0], ql[2] / ql[0]],
        &[qr[1] / qr[0], qr[2] / qr[0]],
        (ql[3] + pl) / ql[0],
        (qr[3] + pr) / qr[0],
        &mut vel,
    );
    let [u, v] = vel;
    let q2 = u * u + v * v;
    let a2 = (gamma - 1.0) * (h - 0.5 * q2);
    let a = sound_speed(a2, abs_sound_speed).ok_or_else(|| FluxError::RoeUnphysical {
        left: ql.to_vec(),
        right: qr.to_vec(),
        a2,
    })?;
    let b1 = (gamma - 1.0) / (a * a);
    let b2 = 0.5 * b1 * q2;
    let right = [
        [1.0, 1.0, 0.0, 1.0],
        [u - a, u, 0.0, u + a],
        [v, v, 1.0, v],
        [h - u * a, 0.5 * q2, v, h + u * a],
    ];
    let left = [
        [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), -0.5 * b1 * v, 0.5 * b1],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [-v, 0.0, 1.0, 0.0],
        [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), -0.5 * b1 * v, 0.5 * b1],
    ];
    Ok(EigenSystem { right, left, speeds: [u - a, u, u, u + a] })
}

#[inline]
fn sound_speed(a2: f64, abs: bool) -> Option<f64> {
    let a2 = if abs { a2.abs() } else { a2 };
    (a2 > 0.0 && a2.is_finite()).then(|| a2.sqrt())
}

/// Scalar flux functions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarFlux {
    Advection { speed: f64 },
    Burgers,
    /// `q² / (q² + a(1-q)²)`
    BuckleyLeverett { a: f64 },
}

impl ScalarFlux {
    #[inline]
    pub fn f(&self, q: f64) -> f64 {
        match *self {
            ScalarFlux::Advection { speed } => speed * q,
            ScalarFlux::Burgers => 0.5 * q * q,
            ScalarFlux::BuckleyLeverett { a } => {
                let q2 = q * q;
                q2 / (q2 + a * (1.0 - q) * (1.0 - q))
            }
        }
    }

    #[inline]
    pub fn df(&self, q: f64) -> f64 {
        match *self {
            ScalarFlux::Advection { speed } => speed,
            ScalarFlux::Burgers => q,
            ScalarFlux::BuckleyLeverett { a } => {
                let m = 1.0 - q;
                let den = q * q + a * m * m;
                2.0 * a * q * m / (den * den)
            }
        }
    }

    /// `max |f'|` over `[lo, hi]`.
    pub fn max_speed_on(&self, lo: f64, hi: f64) -> f64 {
        match *self {
            ScalarFlux::Advection { speed } => speed.abs(),
            ScalarFlux::Burgers => lo.abs().max(hi.abs()),
            ScalarFlux::BuckleyLeverett { .. } => {
                let n = 1000;
                (0..=n)
                    .map(|k| self.df(lo + (hi - lo) * k as f64 / n as f64).abs())
                    .fold(0.0, f64::max)
            }
        }
    }
}

/// A hyperbolic system seen along one grid line.
pub trait LineSystem<const N: usize>: Sync {
    fn flux(&self, q: &[f64; N]) -> Result<[f64; N], FluxError>;

    /// `|λ_k|` for each wave family at state `q`.
    fn family_speeds(&self, q: &[f64; N]) -> Result<[f64; N], FluxError>;

    /// Per-family splitting speeds over a set of states.
    fn global_alpha(&self, states: &[[f64; N]]) -> Result<[f64; N], FluxError> {
        let mut alpha = [0.0; N];
        for q in states {
            let s = self.family_speeds(q)?;
            for (a, x) in alpha.iter_mut().zip(s) {
                *a = f64::max(*a, x);
            }
        }
        Ok(alpha)
    }

    /// Interface eigensystem; `None` means split component-wise.
    fn eigen(&self, ql: &[f64; N], qr: &[f64; N]) -> Result<Option<EigenSystem<N>>, FluxError>;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scalar(pub ScalarFlux);

impl LineSystem<1> for Scalar {
    #[inline]
    fn flux(&self, q: &[f64; 1]) -> Result<[f64; 1], FluxError> {
        Ok([self.0.f(q[0])])
    }

    fn family_speeds(&self, q: &[f64; 1]) -> Result<[f64; 1], FluxError> {
        Ok([self.0.df(q[0]).abs()])
    }

    fn global_alpha(&self, states: &[[f64; 1]]) -> Result<[f64; 1], FluxError> {
        let lo = states.iter().map(|q| q[0]).fold(f64::INFINITY, f64::min);
        let hi = states.iter().map(|q| q[0]).fold(f64::NEG_INFINITY, f64::max);
        Ok([self.0.max_speed_on(lo, hi)])
    }

    fn eigen(&self, _: &[f64; 1], _: &[f64; 1]) -> Result<Option<EigenSystem<1>>, FluxError> {
        Ok(None)
    }
}

/// Euler options shared by the one- and two-dimensional systems.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EulerOptions {
    pub gamma: f64,
    pub characteristic: bool,
    pub abs_sound_speed: bool,
}

impl Default for EulerOptions {
    fn default() -> Self {
        Self { gamma: GAMMA_AIR, characteristic: true, abs_sound_speed: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler1D(pub EulerOptions);

impl LineSystem<3> for Euler1D {
    #[inline]
    fn flux(&self, q: &[f64; 3]) -> Result<[f64; 3], FluxError> {
        euler_flux(q, self.0.gamma)
    }

    fn family_speeds(&self, q: &[f64; 3]) -> Result<[f64; 3], FluxError> {
        let p = pressure(q, self.0.gamma)?;
        let u = q[1] / q[0];
        let a = (self.0.gamma * p / q[0]).abs().sqrt();
        Ok([(u - a).abs(), u.abs(), (u + a).abs()])
    }

    #[inline]
    fn eigen(&self, ql: &[f64; 3], qr: &[f64; 3]) -> Result<Option<EigenSystem<3>>, FluxError> {
        if !self.0.characteristic {
            return Ok(None);
        }
        roe_eigensystem(ql, qr, self.0.gamma, self.0.abs_sound_speed).map(Some)
    }
}

/// Two-dimensional Euler in x-oriented component order `(ρ, ρu_n, ρu_t, E)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Euler2D(pub EulerOptions);

impl LineSystem<4> for Euler2D {
    #[inline]
    fn flux(&self, q: &[f64; 4]) -> Result<[f64; 4], FluxError> {
        let p = pressure_2d(q, self.0.gamma)?;
        let u = q[1] / q[0];
        Ok([q[1], q[1] * u + p, q[2] * u, (q[3] + p) * u])
    }

    fn family_speeds(&self, q: &[f64; 4]) -> Result<[f64; 4], FluxError> {
        let p = pressure_2d(q, self.0.gamma)?;
        let u = q[1] / q[0];
        let a = (self.0.gamma * p / q[0]).abs().sqrt();
        Ok([(u - a).abs(), u.abs(), u.abs(), (u + a).abs()])
    }

    #[inline]
    fn eigen(&self, ql: &[f64; 4], qr: &[f64; 4]) -> Result<Option<EigenSystem<4>>, FluxError> {
        if !self.0.characteristic {
            return Ok(None);
        }
        roe_eigensystem_2d(ql, qr, self.0.gamma, self.0.abs_sound_speed).map(Some)
    }
}
