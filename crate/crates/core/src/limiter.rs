//! Positivity-preserving flux blending for the Euler equations.
//!
//! Each cell update `u_i - λ(F_{i+½} - F_{i-½})` is split into two parts,
//! `u_i - cF_{i+½}` and `u_i + cF_{i-½}`, one per face. Every face gets the
//! largest `θ ∈ [0, 1]` for which both parts adjacent to it keep density and
//! pressure above the floor when the face flux is `θF_high + (1-θ)F_low`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PositivityParams {
    pub enabled: bool,
    pub eps_pos: f64,
}

impl Default for PositivityParams {
    fn default() -> Self {
        Self { enabled: false, eps_pos: 1e-13 }
    }
}

impl PositivityParams {
    pub fn on() -> Self {
        Self { enabled: true, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), LimiterError> {
        if self.eps_pos > 0.0 && self.eps_pos.is_finite() {
            Ok(())
        } else {
            Err(LimiterError::BadFloor(self.eps_pos))
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LimiterError {
    #[error("positivity floor must be positive and finite, got {0}")]
    BadFloor(f64),
    #[error("first-order update of cell {cell} has {quantity} = {value}; time step too large for positivity")]
    Infeasible { cell: usize, quantity: &'static str, value: f64 },
}

/// Blending bookkeeping for one call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitStats {
    pub limited: usize,
    pub min_theta: f64,
}

impl Default for LimitStats {
    fn default() -> Self {
        Self { limited: 0, min_theta: 1.0 }
    }
}

impl LimitStats {
    pub fn merge(&mut self, o: LimitStats) {
        self.limited += o.limited;
        self.min_theta = self.min_theta.min(o.min_theta);
    }
}

/// Pressure of an x-oriented Euler state: density first, energy last.
#[inline]
pub fn state_pressure<const N: usize>(q: &[f64; N], gamma: f64) -> f64 {
    let m2: f64 = q[1..N - 1].iter().map(|m| m * m).sum();
    (gamma - 1.0) * (q[N - 1] - 0.5 * m2 / q[0])
}

#[inline]
fn blend<const N: usize>(u: &[f64; N], sign: f64, c: f64, lo: &[f64; N], hi: &[f64; N], theta: f64) -> [f64; N] {
    std::array::from_fn(|k| u[k] + sign * c * (lo[k] + theta * (hi[k] - lo[k])))
}

/// Largest `θ ≤ cap` keeping one part's density at or above `floor`.
fn density_theta(rho_lo: f64, rho_hi: f64, floor: f64, cap: f64) -> f64 {
    if rho_hi >= floor {
        cap
    } else {
        cap.min((rho_lo - floor) / (rho_lo - rho_hi)).max(0.0)
    }
}

/// Largest `θ ≤ cap` keeping one part's pressure at or above `floor`; the
/// pressure is concave in `θ` and `θ = 0` is feasible.
fn pressure_theta<const N: usize>(
    u: &[f64; N],
    sign: f64,
    c: f64,
    lo: &[f64; N],
    hi: &[f64; N],
    cap: f64,
    floor: f64,
    gamma: f64,
) -> f64 {
    let ok = |t: f64| {
        let q = blend(u, sign, c, lo, hi, t);
        q[0] > 0.0 && state_pressure(&q, gamma) >= floor
    };
    if ok(cap) {
        return cap;
    }
    let (mut a, mut b) = (0.0, cap);
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        if ok(m) {
            a = m;
        } else {
            b = m;
        }
    }
    a
}

/// Blend `high` toward `low` face by face on one line of `n` cells.
///
/// `u` holds the interior cells, `high`/`low` the `n + 1` face fluxes, and
/// `c` the part scale (`2Δt/Δx` in one dimension). Faces on the line ends
/// only guard their interior neighbour.
pub fn limit_fluxes<const N: usize>(
    high: &mut [[f64; N]],
    low: &[[f64; N]],
    u: &[[f64; N]],
    c: f64,
    gamma: f64,
    params: &PositivityParams,
) -> Result<LimitStats, LimiterError> {
    let n = u.len();
    debug_assert_eq!(high.len(), n + 1);
    debug_assert_eq!(low.len(), n + 1);
    let mut stats = LimitStats::default();
    if !params.enabled {
        return Ok(stats);
    }
    for j in 0..=n {
        let (lo, hi) = (low[j], high[j]);
        // (cell, sign): left cell sees -cF, right cell +cF
        let sides = [(j.checked_sub(1), -1.0), ((j < n).then_some(j), 1.0)];
        let mut floors = [(0.0, 0.0); 2];
        for (s, &(cell, sign)) in sides.iter().enumerate() {
            let Some(i) = cell else { continue };
            let base = blend(&u[i], sign, c, &lo, &hi, 0.0);
            if !(base[0] > 0.0) {
                return Err(LimiterError::Infeasible { cell: i, quantity: "density", value: base[0] });
            }
            let p = state_pressure(&base, gamma);
            if !(p > 0.0) {
                return Err(LimiterError::Infeasible { cell: i, quantity: "pressure", value: p });
            }
            floors[s] = (params.eps_pos.min(base[0]), params.eps_pos.min(p));
        }
        let mut theta: f64 = 1.0;
        for (s, &(cell, sign)) in sides.iter().enumerate() {
            let Some(i) = cell else { continue };
            let rho_lo = u[i][0] + sign * c * lo[0];
            let rho_hi = u[i][0] + sign * c * hi[0];
            theta = density_theta(rho_lo, rho_hi, floors[s].0, theta);
        }
        for (s, &(cell, sign)) in sides.iter().enumerate() {
            let Some(i) = cell else { continue };
            theta = pressure_theta(&u[i], sign, c, &lo, &hi, theta, floors[s].1, gamma);
        }
        if theta < 1.0 {
            stats.limited += 1;
            stats.min_theta = stats.min_theta.min(theta);
            for k in 0..N {
                high[j][k] = lo[k] + theta * (hi[k] - lo[k]);
            }
        }
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flux::{conserved_1d, lf_interface_fluxes, Euler1D, EulerOptions, LineSystem};
    use num_rational::BigRational;
    use num_traits::Zero;

    const G: f64 = 1.4;

    fn lf(u: &[[f64; 3]], alpha: f64) -> Vec<[f64; 3]> {
        let mut buf = vec![u[0]];
        buf.extend_from_slice(u);
        buf.push(u[u.len() - 1]);
        let mut out = vec![[0.0; 3]; u.len() + 1];
        lf_interface_fluxes(&Euler1D(EulerOptions::default()), alpha, &buf, 1, &mut out).unwrap();
        out
    }

    fn update(u: &[[f64; 3]], f: &[[f64; 3]], lambda: f64) -> Vec<[f64; 3]> {
        (0..u.len()).map(|i| std::array::from_fn(|k| u[i][k] - lambda * (f[i + 1][k] - f[i][k]))).collect()
    }

    fn alpha(u: &[[f64; 3]]) -> f64 {
        let sys = Euler1D(EulerOptions::default());
        u.iter().map(|q| sys.family_speeds(q).unwrap()[2]).fold(0.0, f64::max)
    }

    #[test]
    fn positive_update_untouched() {
        let u: Vec<_> = (0..6).map(|i| conserved_1d(1.0 + 0.1 * i as f64, 0.2, 1.0, G)).collect();
        let low = lf(&u, alpha(&u));
        let mut high: Vec<_> = low.iter().map(|f| [f[0] * 1.01, f[1], f[2]]).collect();
        let before = high.clone();
        let s = limit_fluxes(&mut high, &low, &u, 0.1, G, &PositivityParams::on()).unwrap();
        assert_eq!(s.limited, 0);
        assert_eq!(high, before);
    }

    fn near_vacuum() -> (Vec<[f64; 3]>, Vec<[f64; 3]>, Vec<[f64; 3]>, f64) {
        let u = vec![conserved_1d(1.0, 0.0, 1.0, G), conserved_1d(1e-6, 0.0, 1e-6, G), conserved_1d(1.0, 0.0, 1.0, G)];
        let a = alpha(&u);
        let lambda = 0.4 / a;
        let low = lf(&u, a);
        // high-order fluxes draining the middle cell
        let mut high = low.clone();
        high[1] = [-0.05, 0.1, -0.1];
        high[2] = [0.05, 0.1, 0.1];
        (u, low, high, lambda)
    }

    /// Independent oracle: bisection on the whole-cell update.
    fn oracle_theta(u: &[[f64; 3]], low: &[[f64; 3]], high: &[[f64; 3]], lambda: f64, eps: f64) -> f64 {
        let ok = |t: f64| {
            let f: Vec<[f64; 3]> = low.iter().zip(high).map(|(l, h)| std::array::from_fn(|k| l[k] + t * (h[k] - l[k]))).collect();
            let v = update(u, &f, lambda);
            v[1][0] >= eps && state_pressure(&v[1], G) >= eps
        };
        let (mut a, mut b) = (0.0, 1.0);
        while b - a > 1e-14 {
            let m = 0.5 * (a + b);
            if ok(m) {
                a = m
            } else {
                b = m
            }
        }
        a
    }

    #[test]
    fn near_vacuum_cell_is_rescued() {
        let (u, low, mut high, lambda) = near_vacuum();
        let unlimited = update(&u, &high, lambda);
        assert!(unlimited[1][0] < 0.0);
        let params = PositivityParams::on();
        let s = limit_fluxes(&mut high, &low, &u, 2.0 * lambda, G, &params).unwrap();
        assert!(s.limited >= 2 && s.min_theta < 1.0);
        let v = update(&u, &high, lambda);
        for q in &v {
            assert!(q[0] >= params.eps_pos && state_pressure(q, G) >= params.eps_pos, "{q:?}");
        }
        // symmetric drain, so the per-part θ cannot exceed the whole-cell bound
        let (_, _, h0, _) = near_vacuum();
        let bound = oracle_theta(&u, &low, &h0, lambda, params.eps_pos);
        assert!(s.min_theta <= bound + 1e-10, "{} vs {bound}", s.min_theta);
        assert!(s.min_theta > 0.5 * bound);
        // per-face oracle over the two adjacent parts
        let eps = params.eps_pos;
        for j in 1..=2 {
            let ok = |t: f64| {
                let f: [f64; 3] = std::array::from_fn(|k| low[j][k] + t * (h0[j][k] - low[j][k]));
                let l: [f64; 3] = std::array::from_fn(|k| u[j - 1][k] - 2.0 * lambda * f[k]);
                let r: [f64; 3] = std::array::from_fn(|k| u[j][k] + 2.0 * lambda * f[k]);
                [l, r].iter().all(|q| q[0] >= eps && state_pressure(q, G) >= eps)
            };
            let (mut a, mut b) = (0.0, 1.0);
            while b - a > 1e-14 {
                let m = 0.5 * (a + b);
                if ok(m) {
                    a = m
                } else {
                    b = m
                }
            }
            let t = (high[j][0] - low[j][0]) / (h0[j][0] - low[j][0]);
            assert!((t - a).abs() < 1e-10, "face {j}: {t} vs {a}");
        }
    }

    #[test]
    fn theta_monotone_in_severity() {
        let mut last = 1.0;
        for k in 1..=20 {
            let (u, low, mut high, lambda) = near_vacuum();
            let drain = 0.005 * k as f64;
            high[1] = [-drain, 0.1, -0.1];
            high[2] = [drain, 0.1, 0.1];
            let s = limit_fluxes(&mut high, &low, &u, 2.0 * lambda, G, &PositivityParams::on()).unwrap();
            assert!(s.min_theta <= last, "{k}");
            last = s.min_theta;
        }
        assert!(last < 1.0);
    }

    #[test]
    fn blending_conserves_mass_exactly() {
        let (u, low, mut high, lambda) = near_vacuum();
        limit_fluxes(&mut high, &low, &u, 2.0 * lambda, G, &PositivityParams::on()).unwrap();
        // exact arithmetic: interior faces cancel, only the two end fluxes remain
        let r = |x: f64| BigRational::from_float(x).unwrap();
        let mut total = BigRational::zero();
        for i in 0..u.len() {
            total += r(u[i][0]) - r(lambda) * (r(high[i + 1][0]) - r(high[i][0]));
        }
        let mut expect = BigRational::zero();
        for q in &u {
            expect += r(q[0]);
        }
        expect -= r(lambda) * (r(high[3][0]) - r(high[0][0]));
        assert_eq!(total, expect);
    }

    #[test]
    fn lf_parts_stay_positive_under_cfl() {
        let u = vec![conserved_1d(1.0, 3.0, 1e-3, G), conserved_1d(1e-3, -2.0, 1e-4, G), conserved_1d(2.0, 0.0, 5.0, G)];
        let a = alpha(&u);
        let low = lf(&u, a);
        let mut high = low.clone();
        assert!(limit_fluxes(&mut high, &low, &u, 2.0 * 0.45 / a, G, &PositivityParams::on()).is_ok());
        let err = limit_fluxes(&mut high, &low, &u, 2.0 * 5.0 / a, G, &PositivityParams::on()).unwrap_err();
        assert!(matches!(err, LimiterError::Infeasible { .. }));
    }

    #[test]
    fn disabled_is_identity_and_floor_validated() {
        let (u, low, mut high, lambda) = near_vacuum();
        let before = high.clone();
        limit_fluxes(&mut high, &low, &u, 2.0 * lambda, G, &PositivityParams::default()).unwrap();
        assert_eq!(high, before);
        assert!(PositivityParams { enabled: true, eps_pos: 0.0 }.validate().is_err());
    }
}
