//! Smoothness indicators, nonlinear weights and interface reconstruction.
//!
//! All kernels reconstruct the positive split flux at `x_{i+½}` from a
//! window `(f_{i-r+1}, …, f_{i+r})` (central schemes) or
//! `(f_{i-r+1}, …, f_{i+r-1})` (upwind schemes). The negative flux is the
//! same operation on the reversed window.

mod scheme;

use crate::coeffgen::{FloatTables, MAX_R};

pub use scheme::{Family, Reconstruct, Scheme, SchemeKind, WenoError};

use serde::{Deserialize, Serialize};

/// Which global smoothness indicator steers the Z-type weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum TauVariant {
    /// Squared `(2r-1)`-th undivided difference.
    #[default]
    Tau,
    /// `13/12·τ + (2r-2)`-th difference squared.
    TauPrime,
}

/// Knobs of `α_k = d_k (L + Γ_k)^q`, `Γ_k = (τ / (β_k + ε μ²))^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct WeightParams {
    /// `L`
    pub linear: f64,
    /// `p`
    pub power: f64,
    /// `q`
    pub amplification: f64,
    pub eps: f64,
    pub mu0: f64,
    pub affine_invariant: bool,
    pub tau_variant: TauVariant,
    /// When set, `ε = Δx^e` replaces the constant `eps`.
    pub eps_exponent: Option<f64>,
}

impl Default for WeightParams {
    fn default() -> Self {
        Self {
            linear: 1.0,
            power: 1.0,
            amplification: 1.0,
            eps: 1e-40,
            mu0: 1e-40,
            affine_invariant: false,
            tau_variant: TauVariant::Tau,
            eps_exponent: None,
        }
    }
}

impl WeightParams {
    pub fn validate(&self) -> Result<(), WenoError> {
        let bad = |msg: String| Err(WenoError::InvalidParams(msg));
        if !(self.power >= 1.0) {
            return bad(format!("power p = {} must be >= 1", self.power));
        }
        if !(self.amplification >= 1.0) {
            return bad(format!("amplification q = {} must be >= 1", self.amplification));
        }
        if !(self.eps >= 0.0) {
            return bad(format!("eps = {} must be >= 0", self.eps));
        }
        if !(self.mu0 > 0.0) {
            return bad(format!("mu0 = {} must be > 0", self.mu0));
        }
        if !self.linear.is_finite() || self.linear < 0.0 {
            return bad(format!("linear component L = {} must be finite and >= 0", self.linear));
        }
        Ok(())
    }

    #[inline]
    fn eps_at(&self, dx: f64) -> f64 {
        match self.eps_exponent {
            Some(e) => dx.powf(e),
            None => self.eps,
        }
    }
}

/// Samples feeding one interface reconstruction, plus the mesh spacing
/// (only read when a variable `ε` is configured).
#[derive(Debug, Clone, Copy)]
pub struct Window<'a> {
    pub samples: &'a [f64],
    pub dx: f64,
}

impl<'a> Window<'a> {
    pub fn new(samples: &'a [f64]) -> Self {
        Self { samples, dx: 1.0 }
    }

    pub fn with_dx(self, dx: f64) -> Self {
        Self { dx, ..self }
    }
}

/// Scratch size for per-window arrays.
pub(crate) const MAX_W: usize = MAX_R + 2;

#[inline(always)]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for (x, y) in a.iter().zip(b) {
        s += x * y;
    }
    s
}

/// `fᵀ B f` for a row-major `r × r` matrix, clamped at zero.
///
/// `B` annihilates constants, so the form is evaluated on `f - f_0`; this
/// makes locally constant data give an exact zero.
#[inline(always)]
pub fn beta_local(samples: &[f64], b: &[f64]) -> f64 {
    let r = samples.len();
    debug_assert_eq!(b.len(), r * r);
    let mut g = [0.0; MAX_R];
    for (gi, fi) in g.iter_mut().zip(samples) {
        *gi = fi - samples[0];
    }
    let g = &g[..r];
    let mut s = 0.0;
    for i in 1..r {
        s += g[i] * dot(&b[i * r + 1..(i + 1) * r], &g[1..]);
    }
    s.max(0.0)
}

/// `(β_0 … β_{r-1}, β_d, β_r)` for a `2r` window.
pub fn beta_set(window: Window<'_>, tables: &FloatTables) -> Result<Vec<f64>, WenoError> {
    let r = tables.r;
    check_len(window.samples, 2 * r)?;
    let mut out = Vec::with_capacity(r + 2);
    for k in 0..=r {
        out.push(beta_local(&window.samples[k..k + r], tables.smoothness(k)));
    }
    out.push(out.iter().sum::<f64>() / (r + 1) as f64);
    Ok(out)
}

/// Global smoothness indicator on the full `2r` window.
pub fn tau_global(window: Window<'_>, tables: &FloatTables, variant: TauVariant) -> Result<f64, WenoError> {
    check_len(window.samples, 2 * tables.r)?;
    Ok(tau_unchecked(window.samples, variant))
}

/// Iterated forward differences, so constant data gives an exact zero.
#[inline(always)]
fn tau_unchecked(w: &[f64], variant: TauVariant) -> f64 {
    let n = w.len();
    let mut diff = [0.0; 2 * MAX_R];
    diff[..n].copy_from_slice(w);
    for m in 1..n - 1 {
        for j in 0..n - m {
            diff[j] = diff[j + 1] - diff[j];
        }
    }
    let fourth = diff[0];
    let t = diff[1] - diff[0];
    match variant {
        TauVariant::Tau => t * t,
        TauVariant::TauPrime => 13.0 / 12.0 * t * t + fourth * fourth,
    }
}

/// Mean absolute deviation of the window plus `μ₀`.
pub fn descaler_mu(window: Window<'_>, mu0: f64) -> f64 {
    let w = window.samples;
    let n = w.len() as f64;
    let mean = w.iter().sum::<f64>() / n;
    w.iter().map(|x| (x - mean).abs()).sum::<f64>() / n + mu0
}

/// Nonlinear weights `ω_0 … ω_r` of the central-upwind scheme.
pub fn nonlinear_weights(window: Window<'_>, tables: &FloatTables, params: &WeightParams) -> Result<Vec<f64>, WenoError> {
    check_len(window.samples, 2 * tables.r)?;
    let mut omega = [0.0; MAX_W];
    central_upwind_weights(window.samples, window.dx, tables, params, &mut omega);
    Ok(omega[..=tables.r].to_vec())
}

/// Nonlinear weights `ω_0 … ω_{r-1}` of the upwind Z scheme on a `2r-1` window.
pub fn upwind_z_weights(window: Window<'_>, tables: &FloatTables, params: &WeightParams) -> Result<Vec<f64>, WenoError> {
    check_len(window.samples, 2 * tables.r - 1)?;
    scheme::z_tau_supported(tables.r)?;
    let mut omega = [0.0; MAX_W];
    upwind_weights(window.samples, window.dx, tables, params, &mut omega);
    Ok(omega[..tables.r].to_vec())
}

fn check_len(samples: &[f64], expected: usize) -> Result<(), WenoError> {
    if samples.len() == expected {
        Ok(())
    } else {
        Err(WenoError::WindowLength { expected, got: samples.len() })
    }
}

#[inline]
fn powp(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x * x
    } else {
        x.powf(p)
    }
}

/// Normalize `α` into `ω`. If any `α` overflowed, the weight is shared by
/// the overflowing substencils in proportion to their ideal weights.
#[inline]
fn normalize(alpha: &mut [f64], ideal: &[f64]) {
    let s: f64 = alpha.iter().sum();
    if s.is_finite() && s > 0.0 {
        for a in alpha.iter_mut() {
            *a /= s;
        }
        return;
    }
    let mut s = 0.0;
    for (a, d) in alpha.iter_mut().zip(ideal) {
        *a = if a.is_infinite() { *d } else { 0.0 };
        s += *a;
    }
    if s > 0.0 {
        for a in alpha.iter_mut() {
            *a /= s;
        }
    } else {
        alpha.copy_from_slice(ideal);
    }
}

#[inline]
fn z_alpha(tau: f64, beta: f64, shift: f64, d: f64, params: &WeightParams) -> f64 {
    let gamma = if tau == 0.0 { 0.0 } else { powp(tau / (beta + shift), params.power) };
    d * powp(params.linear + gamma, params.amplification)
}

/// Call `$f` with `r` as a compile-time constant for the common widths.
macro_rules! with_const_r {
    ($r:expr, $f:ident($($arg:expr),*)) => {
        match $r {
            2 => $f($($arg,)* 2),
            3 => $f($($arg,)* 3),
            4 => $f($($arg,)* 4),
            5 => $f($($arg,)* 5),
            r => $f($($arg,)* r),
        }
    };
}

/// Fixed-size copies of the tables, so unrolled kernels index without
/// bounds checks.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Kernel {
    pub(crate) r: usize,
    b: [[[f64; MAX_R]; MAX_R]; MAX_R + 1],
    c: [[f64; MAX_R]; MAX_R + 1],
    d_central: [f64; MAX_R + 1],
    d_upwind: [f64; MAX_R + 1],
}

impl Kernel {
    pub(crate) fn new(t: &FloatTables) -> Self {
        let r = t.r;
        let mut k = Kernel { r, b: [[[0.0; MAX_R]; MAX_R]; MAX_R + 1], c: [[0.0; MAX_R]; MAX_R + 1], d_central: [0.0; MAX_R + 1], d_upwind: [0.0; MAX_R + 1] };
        for s in 0..=r {
            k.c[s][..r].copy_from_slice(t.candidate(s));
            if r >= 2 {
                for (i, row) in t.smoothness(s).chunks(r).enumerate() {
                    k.b[s][i][..r].copy_from_slice(row);
                }
            }
        }
        k.d_central[..=r].copy_from_slice(&t.d_central);
        k.d_upwind[..r].copy_from_slice(&t.d_upwind);
        k
    }

    /// `β` of substencil `s` starting at `w[s]`, with the form evaluated on
    /// differences from the first sample.
    #[inline(always)]
    fn beta(&self, w: &[f64], s: usize, r: usize) -> f64 {
        let b = &self.b[s];
        let mut g = [0.0; MAX_R];
        for i in 1..r {
            g[i] = w[s + i] - w[s];
        }
        let mut acc = 0.0;
        for i in 1..r {
            let mut row = 0.0;
            for j in 1..r {
                row += b[i][j] * g[j];
            }
            acc += g[i] * row;
        }
        acc.max(0.0)
    }

    #[inline(always)]
    fn candidate(&self, w: &[f64], s: usize, r: usize) -> f64 {
        let mut acc = 0.0;
        for i in 0..r {
            acc += self.c[s][i] * w[s + i];
        }
        acc
    }

    /// Unnormalized central-upwind `α_0 … α_r`.
    #[inline(always)]
    fn central_alpha(&self, w: &[f64], dx: f64, params: &WeightParams, alpha: &mut [f64; MAX_W], r: usize) {
        let w = &w[..2 * r];
        let mut beta = [0.0; MAX_W];
        let mut total = 0.0;
        for k in 0..=r {
            beta[k] = self.beta(w, k, r);
            total += beta[k];
        }
        // the downwind substencil uses the mean of all local indicators
        beta[r] = total / (r + 1) as f64;
        let tau = tau_unchecked(w, params.tau_variant);
        let shift = shift(w, dx, params);
        for k in 0..=r {
            alpha[k] = z_alpha(tau, beta[k], shift, self.d_central[k], params);
        }
    }

    /// Unnormalized upwind Z `α_0 … α_{r-1}`.
    #[inline(always)]
    fn upwind_alpha(&self, w: &[f64], dx: f64, params: &WeightParams, alpha: &mut [f64; MAX_W], r: usize) {
        let w = &w[..2 * r - 1];
        let mut beta = [0.0; MAX_W];
        for k in 0..r {
            beta[k] = self.beta(w, k, r);
        }
        let tau = scheme::z_tau(&beta[..r]);
        let shift = shift(w, dx, params);
        for k in 0..r {
            alpha[k] = z_alpha(tau, beta[k], shift, self.d_upwind[k], params);
        }
    }

    /// `Σ α_k q_k / Σ α_k`, falling back to explicit weights on overflow.
    #[inline(always)]
    fn combine(&self, alpha: &mut [f64; MAX_W], n: usize, ideal: &[f64], w: &[f64], r: usize) -> f64 {
        let mut sa = 0.0;
        let mut sq = 0.0;
        for k in 0..n {
            sa += alpha[k];
            sq += alpha[k] * self.candidate(w, k, r);
        }
        if sa.is_finite() && sa > 0.0 && sq.is_finite() {
            return sq / sa;
        }
        normalize(&mut alpha[..n], &ideal[..n]);
        (0..n).map(|k| alpha[k] * self.candidate(w, k, r)).sum()
    }

    #[inline(always)]
    fn central_plus_r(&self, w: &[f64], dx: f64, params: &WeightParams, r: usize) -> f64 {
        let mut alpha = [0.0; MAX_W];
        self.central_alpha(w, dx, params, &mut alpha, r);
        self.combine(&mut alpha, r + 1, &self.d_central, w, r)
    }

    #[inline(always)]
    fn upwind_plus_r(&self, w: &[f64], dx: f64, params: &WeightParams, r: usize) -> f64 {
        let mut alpha = [0.0; MAX_W];
        self.upwind_alpha(w, dx, params, &mut alpha, r);
        self.combine(&mut alpha, r, &self.d_upwind, w, r)
    }

    #[inline(always)]
    fn central_weights_r(&self, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W], r: usize) {
        self.central_alpha(w, dx, params, omega, r);
        normalize(&mut omega[..=r], &self.d_central[..=r]);
    }

    #[inline(always)]
    fn upwind_weights_r(&self, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W], r: usize) {
        self.upwind_alpha(w, dx, params, omega, r);
        normalize(&mut omega[..r], &self.d_upwind[..r]);
    }

    pub(crate) fn central_plus(&self, w: &[f64], dx: f64, params: &WeightParams) -> f64 {
        with_const_r!(self.r, central_plus_dispatch(self, w, dx, params))
    }

    pub(crate) fn upwind_plus(&self, w: &[f64], dx: f64, params: &WeightParams) -> f64 {
        with_const_r!(self.r, upwind_plus_dispatch(self, w, dx, params))
    }

    pub(crate) fn central_weights(&self, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W]) {
        with_const_r!(self.r, central_weights_dispatch(self, w, dx, params, omega))
    }

    pub(crate) fn upwind_weights(&self, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W]) {
        with_const_r!(self.r, upwind_weights_dispatch(self, w, dx, params, omega))
    }
}

#[inline(always)]
fn central_plus_dispatch(k: &Kernel, w: &[f64], dx: f64, params: &WeightParams, r: usize) -> f64 {
    k.central_plus_r(w, dx, params, r)
}

#[inline(always)]
fn upwind_plus_dispatch(k: &Kernel, w: &[f64], dx: f64, params: &WeightParams, r: usize) -> f64 {
    k.upwind_plus_r(w, dx, params, r)
}

#[inline(always)]
fn central_weights_dispatch(k: &Kernel, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W], r: usize) {
    k.central_weights_r(w, dx, params, omega, r)
}

#[inline(always)]
fn upwind_weights_dispatch(k: &Kernel, w: &[f64], dx: f64, params: &WeightParams, omega: &mut [f64; MAX_W], r: usize) {
    k.upwind_weights_r(w, dx, params, omega, r)
}

/// `ε μ²` added to every `β`.
#[inline(always)]
fn shift(w: &[f64], dx: f64, params: &WeightParams) -> f64 {
    let mu = if params.affine_invariant { descaler_mu(Window::new(w), params.mu0) } else { 1.0 };
    params.eps_at(dx) * mu * mu
}

pub(crate) fn central_upwind_weights(w: &[f64], dx: f64, t: &FloatTables, params: &WeightParams, omega: &mut [f64; MAX_W]) {
    Kernel::new(t).central_weights(w, dx, params, omega)
}

pub(crate) fn upwind_weights(w: &[f64], dx: f64, t: &FloatTables, params: &WeightParams, omega: &mut [f64; MAX_W]) {
    Kernel::new(t).upwind_weights(w, dx, params, omega)
}

/// Positive-flux reconstruction at `x_{i+½}`.
pub fn reconstruct_plus(window: Window<'_>, scheme: &Scheme) -> Result<f64, WenoError> {
    check_len(window.samples, scheme.window_len())?;
    Ok(scheme.plus(window.samples, window.dx))
}

/// Negative-flux reconstruction: the mirrored window through the same kernel.
pub fn reconstruct_minus(window: Window<'_>, scheme: &Scheme) -> Result<f64, WenoError> {
    check_len(window.samples, scheme.window_len())?;
    let mut rev = [0.0; 2 * MAX_R];
    let n = window.samples.len();
    for (dst, src) in rev[..n].iter_mut().zip(window.samples.iter().rev()) {
        *dst = *src;
    }
    Ok(scheme.plus(&rev[..n], window.dx))
}
