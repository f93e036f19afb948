//! Convergence at critical points, approximate dispersion relation, error
//! norms and timing tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flux::{interface_fluxes, LineScratch, Scalar, ScalarFlux};
use crate::problems::{fill_line, multiwave_exact, Domain, EndFill, Equation, ExactRiemann, Initial, Primitive, ProblemSpec};
use crate::solver::RunReport;
use crate::timeint::{rk3_step, Rk3Work};
use crate::weno::{Reconstruct, SchemeKind, WenoError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Scheme(#[from] WenoError),
    #[error("length mismatch: {0} vs {1}")]
    Length(usize, usize),
    #[error("amplitude must be positive and finite, got {0}")]
    Amplitude(f64),
    #[error("need at least one sample")]
    NoSamples,
    #[error("resolutions must be a strictly increasing doubling sequence")]
    Resolutions,
    #[error("critical-point order must be in 1..=5, got {0}")]
    CriticalOrder(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub inv_dx: u32,
    pub error: f64,
    /// `log₂(e_{i-1}/e_i)`; absent on the first row.
    pub order: Option<f64>,
}

/// Attach observed orders to a doubling sequence of errors.
pub fn convergence_rows(inv_dx: &[u32], errors: &[f64]) -> Vec<ConvergenceRow> {
    inv_dx
        .iter()
        .zip(errors)
        .enumerate()
        .map(|(i, (&n, &e))| ConvergenceRow { inv_dx: n, error: e, order: (i > 0).then(|| (errors[i - 1] / e).log2()) })
        .collect()
}

/// Resolutions used for the critical-point tables.
pub const CRITICAL_RESOLUTIONS: [u32; 6] = [20, 40, 80, 160, 320, 640];

/// `f(x_k) - f(x_j)` for `f = x^{n+1} e^{0.75x}` on the nodes `x = jΔx`,
/// evaluated without cancellation.
fn shifted_sample(n_cp: i32, k: i64, j: i64, dx: f64) -> f64 {
    let (a, b) = (k as f64 * dx, j as f64 * dx);
    let h = (k - j) as f64 * dx;
    let sum: f64 = (0..=n_cp).map(|i| a.powi(i) * b.powi(n_cp - i)).sum();
    (0.75 * b).exp() * (a.powi(n_cp + 1) * (0.75 * h).exp_m1() + h * sum)
}

/// Max-norm error of the flux-difference derivative of
/// `f(x) = x^{n_cp+1} e^{0.75x}` over the nodes `x_j = jΔx` in `[-1, 1]`.
///
/// The reconstruction commutes with adding a constant to its samples, so
/// each node is evaluated on `f - f(x_j)`; this keeps sample rounding far
/// below the truncation error.
pub fn critical_point_error(n_cp: u32, rec: &dyn Reconstruct, inv_dx: u32) -> f64 {
    let n = n_cp as i32;
    let dx = 1.0 / inv_dx as f64;
    let (a, b) = rec.extent();
    let (a, b) = (a as i64, b as i64);
    let mut w = Vec::with_capacity((a + b) as usize);
    let mut face = |i: i64, centre: i64| {
        w.clear();
        w.extend((i + 1 - a..=i + b).map(|k| shifted_sample(n, k, centre, dx)));
        rec.plus(&w, dx)
    };
    let m = inv_dx as i64;
    (-m..=m)
        .map(|j| {
            let x = j as f64 * dx;
            let exact = (f64::from(n_cp + 1) * x.powi(n) + 0.75 * x.powi(n + 1)) * (0.75 * x).exp();
            ((face(j, j) - face(j - 1, j)) / dx - exact).abs()
        })
        .fold(0.0, f64::max)
}

/// Errors and orders over a doubling sequence of resolutions.
pub fn critical_point_study(n_cp: u32, kind: SchemeKind, resolutions: &[u32]) -> Result<Vec<ConvergenceRow>, AnalysisError> {
    if !(1..=5).contains(&n_cp) {
        return Err(AnalysisError::CriticalOrder(n_cp));
    }
    if resolutions.is_empty() || resolutions.windows(2).any(|p| p[1] != 2 * p[0]) {
        return Err(AnalysisError::Resolutions);
    }
    let scheme = kind.build()?;
    let errors: Vec<f64> = resolutions.iter().map(|&n| critical_point_error(n_cp, &scheme, n)).collect();
    Ok(convergence_rows(resolutions, &errors))
}

/// Last order among rows whose error exceeds `floor`.
pub fn final_valid_order(rows: &[ConvergenceRow], floor: f64) -> Option<(u32, f64)> {
    let valid = rows.iter().take_while(|r| r.error > floor).count();
    rows[..valid].last().and_then(|r| r.order.map(|o| (r.inv_dx, o)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdrPoint {
    pub phi: f64,
    pub re: f64,
    pub im: f64,
}

/// Mesh size of the periodic ADR grid.
pub const ADR_CELLS: usize = 128;

/// `φ_k = πk/m` for `k = 1..=m`.
pub fn adr_phis(m: usize) -> Vec<f64> {
    (1..=m).map(|k| std::f64::consts::PI * k as f64 / m as f64).collect()
}

/// Approximate dispersion relation of `kind` for linear advection.
///
/// Each sampled wavenumber `φ = 2πk/N` is advected as `A cos(jφ)` for one
/// RK3 step of `Δt = 10⁻⁶ Δx`, and `Φ = i ln(û(Δt)/û(0)) Δx/Δt` is read
/// off the projection onto the mode.
pub fn adr(kind: SchemeKind, samples: usize, amplitude: f64) -> Result<Vec<AdrPoint>, AnalysisError> {
    if samples == 0 {
        return Err(AnalysisError::NoSamples);
    }
    if !(amplitude > 0.0 && amplitude.is_finite()) {
        return Err(AnalysisError::Amplitude(amplitude));
    }
    let scheme = kind.build()?;
    let n = 2 * samples.max(ADR_CELLS / 2);
    let stride = n / (2 * samples);
    let n = 2 * samples * stride;
    let dx = 1.0 / n as f64;
    let dt = 1e-6 * dx;
    let (a, b) = scheme.extent();
    let g = a.max(b);
    let sys = Scalar(ScalarFlux::Advection { speed: 1.0 });
    let mut out = Vec::with_capacity(samples);
    for k in 1..=samples {
        let m = k * stride;
        let phi = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        let u0: Vec<f64> = (0..n).map(|j| amplitude * (phi * j as f64).cos()).collect();
        let mut u = u0.clone();
        let mut buf = vec![[0.0; 1]; n + 2 * g];
        let mut faces = vec![[0.0; 1]; n + 1];
        let mut scratch = LineScratch::default();
        let mut rhs = |u: &[f64], _t: f64, _dt: f64, out: &mut [f64]| -> Result<(), crate::flux::FluxError> {
            for (b, &x) in buf[g..g + n].iter_mut().zip(u) {
                *b = [x];
            }
            fill_line(&mut buf, g, &EndFill::Periodic, &EndFill::Periodic);
            interface_fluxes(&sys, &scheme, &[1.0], &buf, g, dx, &mut scratch, &mut faces)?;
            for (i, o) in out.iter_mut().enumerate() {
                *o = -(faces[i + 1][0] - faces[i][0]) / dx;
            }
            Ok(())
        };
        rk3_step(&mut u, 0.0, dt, &mut rhs, &mut Rk3Work::default()).expect("advection flux cannot fail");
        let mode = |v: &[f64]| -> Complex64 {
            v.iter().enumerate().map(|(j, &x)| x * Complex64::from_polar(1.0, -phi * j as f64)).sum()
        };
        let du: Vec<f64> = u.iter().zip(&u0).map(|(x, y)| x - y).collect();
        let ratio = Complex64::new(1.0, 0.0) + mode(&du) / mode(&u0);
        let theta = Complex64::i() * ratio.ln() * (dx / dt);
        out.push(AdrPoint { phi, re: theta.re, im: theta.im });
    }
    Ok(out)
}

/// Fourier symbol `Φ(φ) = -i(1 - e^{-iφ}) Σ_k c_k e^{i(k-r+1)φ}` of a linear
/// flux-difference operator whose stencil starts `r-1` cells left of the face.
pub fn linear_symbol(coeffs: &[f64], r: usize, phi: f64) -> Complex64 {
    let h: Complex64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * Complex64::from_polar(1.0, (k as f64 - r as f64 + 1.0) * phi))
        .sum();
    -Complex64::i() * (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -phi)) * h
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
    pub pointwise: Vec<f64>,
}

/// Discrete `L1`, `L2` (both mean-normalised) and `L∞` norms of the difference.
pub fn error_norms(numeric: &[f64], reference: &[f64]) -> Result<ErrorNorms, AnalysisError> {
    if numeric.len() != reference.len() {
        return Err(AnalysisError::Length(numeric.len(), reference.len()));
    }
    if numeric.is_empty() {
        return Err(AnalysisError::NoSamples);
    }
    let pointwise: Vec<f64> = numeric.iter().zip(reference).map(|(a, b)| (a - b).abs()).collect();
    let n = pointwise.len() as f64;
    Ok(ErrorNorms {
        l1: pointwise.iter().sum::<f64>() / n,
        l2: (pointwise.iter().map(|e| e * e).sum::<f64>() / n).sqrt(),
        linf: pointwise.iter().copied().fold(0.0, f64::max),
        pointwise,
    })
}

/// `s = ln(p / ρ^γ)`.
pub fn entropy(rho: f64, p: f64, gamma: f64) -> f64 {
    (p / rho.powf(gamma)).ln()
}

/// Exact first component (`q` or `ρ`) at the cell centres at time `t`, for
/// the multiwave advection problem and single-jump 1D Euler data.
pub fn exact_reference(spec: &ProblemSpec, t: f64) -> Option<Vec<f64>> {
    let Domain::OneD { grid, .. } = &spec.domain else { return None };
    let xs = (0..grid.n).map(|i| grid.center(i));
    match (&spec.equation, &spec.initial) {
        (Equation::Advection { speed }, Initial::Multiwave) if *speed == 1.0 && grid.a == -1.0 && grid.b == 1.0 => {
            Some(xs.map(|x| multiwave_exact(x, t)).collect())
        }
        (Equation::Euler1d, Initial::Piecewise { breaks, states }) if breaks.len() == 1 => {
            let prim = |s: &[f64]| Primitive::new(s[0], s[1], s[2]);
            let exact = ExactRiemann::new(prim(&states[0]), prim(&states[1]), spec.gamma).ok()?;
            Some(xs.map(|x| exact.at(x, t, breaks[0]).rho).collect())
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimingRow {
    pub scheme: String,
    pub wall_seconds: f64,
    pub steps: usize,
    pub seconds_per_stage: f64,
    /// `(T - T_ref)/T_ref · 100`; negative means faster than the reference.
    pub speedup_percent: f64,
}

/// Timing table relative to `reports[reference]`.
pub fn timing_report(reports: &[RunReport], reference: usize) -> Vec<TimingRow> {
    let base = reports[reference].wall_seconds;
    reports
        .iter()
        .map(|r| TimingRow {
            scheme: r.scheme.clone(),
            wall_seconds: r.wall_seconds,
            steps: r.steps,
            seconds_per_stage: r.seconds_per_stage(),
            speedup_percent: (r.wall_seconds - base) / base * 100.0,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffgen::float_tables;

    #[test]
    fn orders_from_errors() {
        let rows = convergence_rows(&[10, 20, 40], &[1.0, 1.0 / 64.0, 1.0 / 4096.0]);
        assert_eq!(rows[0].order, None);
        assert!((rows[1].order.unwrap() - 6.0).abs() < 1e-12);
        assert!((rows[2].order.unwrap() - 6.0).abs() < 1e-12);
        assert_eq!(final_valid_order(&rows, 1e-3), Some((20, 6.0)));
    }

    #[test]
    fn shifted_samples_match_direct_difference() {
        let f = |x: f64| x.powi(3) * (0.75 * x).exp();
        for (k, j) in [(3, 1), (-4, -2), (10, 7), (0, 5)] {
            let dx = 0.05;
            let direct = f(k as f64 * dx) - f(j as f64 * dx);
            assert!((shifted_sample(2, k, j, dx) - direct).abs() < 1e-15, "{k} {j}");
        }
    }

    #[test]
    fn linear_operator_error_is_sixth_order() {
        let rows = critical_point_study(1, SchemeKind::linear_central(6).unwrap(), &[20, 40, 80]).unwrap();
        for r in &rows[1..] {
            assert!((r.order.unwrap() - 6.0).abs() < 0.1, "{r:?}");
        }
    }

    #[test]
    fn study_rejects_bad_input() {
        let k = SchemeKind::za(6).unwrap();
        assert_eq!(critical_point_study(0, k, &[20, 40]), Err(AnalysisError::CriticalOrder(0)));
        assert_eq!(critical_point_study(1, k, &[20, 30]), Err(AnalysisError::Resolutions));
    }

    #[test]
    fn ct6_adr_matches_symbol() {
        let t = float_tables(3).unwrap();
        for p in adr(SchemeKind::linear_central(6).unwrap(), 16, 1.0).unwrap() {
            let s = linear_symbol(&t.c_full, 3, p.phi);
            assert!((p.re - s.re).abs() < 1e-6 && (p.im - s.im).abs() < 1e-6, "{p:?} {s}");
            assert!(s.im.abs() < 1e-12);
        }
    }

    #[test]
    fn adr_consistent_at_low_wavenumber() {
        let pts = adr(SchemeKind::za(6).unwrap(), 64, 1.0).unwrap();
        let p = pts[0];
        assert!((p.re / p.phi - 1.0).abs() < 1e-4 && p.im.abs() < 1e-4, "{p:?}");
        assert!(adr(SchemeKind::za(6).unwrap(), 4, 0.0).is_err());
    }

    #[test]
    fn linear_adr_ignores_amplitude_bitwise() {
        let k = SchemeKind::linear_upwind(5).unwrap();
        let a = adr(k, 8, 1.0).unwrap();
        let b = adr(k, 8, 2f64.powi(-60)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.re.to_bits(), y.re.to_bits());
            assert_eq!(x.im.to_bits(), y.im.to_bits());
        }
    }

    #[test]
    fn norms_examples() {
        let z = error_norms(&[1.0, 2.0], &[1.0, 2.0]).unwrap();
        assert_eq!((z.l1, z.l2, z.linf), (0.0, 0.0, 0.0));
        let e = error_norms(&[0.0, 3.0, 0.0], &[0.0; 3]).unwrap();
        assert_eq!(e.linf, 3.0);
        assert_eq!(e.l1, 1.0);
        assert!((e.l2 - 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(e.pointwise, vec![0.0, 3.0, 0.0]);
        assert!(matches!(error_norms(&[1.0], &[1.0, 2.0]), Err(AnalysisError::Length(1, 2))));
    }

    #[test]
    fn timing_self_reference_is_zero() {
        let r = RunReport {
            scheme: "za6".into(),
            steps: 10,
            t: 1.0,
            dt_min: 0.1,
            dt_max: 0.1,
            dt_digest: String::new(),
            rhs_evals: 30,
            min_density: 1.0,
            min_pressure: 1.0,
            limited_faces: 0,
            min_theta: 1.0,
            wall_seconds: 3.0,
            threads: 1,
        };
        let rows = timing_report(&[r.clone(), RunReport { wall_seconds: 2.4, ..r }], 0);
        assert_eq!(rows[0].speedup_percent, 0.0);
        assert!((rows[1].speedup_percent + 20.0).abs() < 1e-12);
        assert!((rows[0].seconds_per_stage - 0.1).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_reference_state() {
        assert_eq!(entropy(1.0, 1.0, 1.4), 0.0);
        assert!((entropy(2.0, 1.0, 1.4) + 1.4 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn exact_reference_starts_from_initial_data() {
        let spec = crate::problems::preset("lax").unwrap().with_cells(50);
        let rho = exact_reference(&spec, 0.0).unwrap();
        let crate::problems::InitialState::Euler1d(u) = spec.init().unwrap() else { panic!() };
        for (r, q) in rho.iter().zip(&u) {
            assert_eq!(*r, q[0]);
        }
        let later = exact_reference(&spec, 1.3).unwrap();
        assert!(later.iter().all(|r| (0.3..=1.4).contains(r)));
        assert!(exact_reference(&crate::problems::preset("blast").unwrap(), 0.0).is_none());
    }

}
