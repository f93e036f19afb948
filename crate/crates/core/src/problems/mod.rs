//! Benchmark definitions: grids, initial and boundary conditions, presets.

mod bc;
mod multiwave;
mod riemann;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flux::{conserved_1d, conserved_2d, ScalarFlux, GAMMA_AIR};
use crate::weno::{SchemeKind, WeightParams, WenoError};

pub use bc::{fill_line, reflect, EndFill, SideBc};
pub use multiwave::{multiwave_exact, multiwave_initial};
pub use riemann::{moving_shock_state, pressure_function, ExactRiemann, Primitive, RiemannError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("unknown problem `{name}`{}", suggestion.as_ref().map(|s| format!(" (did you mean `{s}`?)")).unwrap_or_default())]
    UnknownPreset { name: String, suggestion: Option<String> },
    #[error("invalid problem definition: {0}")]
    Invalid(String),
    #[error(transparent)]
    Scheme(#[from] WenoError),
    #[error("cannot parse problem file: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Equation {
    Advection { speed: f64 },
    Burgers,
    BuckleyLeverett { a: f64 },
    Euler1d,
    Euler2d,
}

impl Equation {
    pub fn scalar_flux(&self) -> Option<ScalarFlux> {
        match *self {
            Equation::Advection { speed } => Some(ScalarFlux::Advection { speed }),
            Equation::Burgers => Some(ScalarFlux::Burgers),
            Equation::BuckleyLeverett { a } => Some(ScalarFlux::BuckleyLeverett { a }),
            _ => None,
        }
    }

    /// Length of a primitive state vector.
    pub fn primitive_len(&self) -> usize {
        match self {
            Equation::Euler1d => 3,
            Equation::Euler2d => 4,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub n: usize,
}

impl Grid1D {
    pub fn dx(&self) -> f64 {
        (self.b - self.a) / self.n as f64
    }

    pub fn center(&self, i: usize) -> f64 {
        self.a + (i as f64 + 0.5) * self.dx()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x > self.x0 && x < self.x1 && y > self.y0 && y < self.y1
    }
}

/// Uniform rectangle, optionally with a solid block removed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid2D {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub nx: usize,
    pub ny: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solid: Option<Rect>,
}

impl Grid2D {
    pub fn dx(&self) -> f64 {
        (self.x1 - self.x0) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y1 - self.y0) / self.ny as f64
    }

    pub fn center(&self, i: usize, j: usize) -> (f64, f64) {
        (self.x0 + (i as f64 + 0.5) * self.dx(), self.y0 + (j as f64 + 0.5) * self.dy())
    }

    pub fn is_solid(&self, i: usize, j: usize) -> bool {
        let (x, y) = self.center(i, j);
        self.solid.is_some_and(|r| r.contains(x, y))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Domain {
    OneD { grid: Grid1D, left: SideBc, right: SideBc },
    TwoD { grid: Grid2D, left: SideBc, right: SideBc, bottom: SideBc, top: SideBc },
}

/// Initial data; all states primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Initial {
    Multiwave,
    /// `mean + amplitude · sin(2π · wavenumber · x)`
    Sine { mean: f64, amplitude: f64, wavenumber: f64 },
    /// `inside` on `[lo, hi]`, `outside` elsewhere.
    Box { lo: f64, hi: f64, inside: f64, outside: f64 },
    /// `states[k]` applies for `breaks[k-1] <= x < breaks[k]`.
    Piecewise { breaks: Vec<f64>, states: Vec<Vec<f64>> },
    /// `post` for `x <= x_shock`, else `ρ = exp(-A sin(k(x - shift)))`, `u = 0`, `p = 1`.
    ShockEntropy { x_shock: f64, post: Vec<f64>, amplitude: f64, wavenumber: f64, shift: f64 },
    /// `post` for `x <= x_shock`, else `ρ = 1 + A sin(kx)`, `u = 0`, `p = 1`.
    ShockDensity { x_shock: f64, post: Vec<f64>, amplitude: f64, wavenumber: f64 },
    Quadrants { x_split: f64, y_split: f64, ne: Vec<f64>, nw: Vec<f64>, sw: Vec<f64>, se: Vec<f64> },
    /// `post` left of `x = x0 + y · slope_inv`, `pre` elsewhere.
    ObliqueShock { x0: f64, slope_inv: f64, post: Vec<f64>, pre: Vec<f64> },
    TriplePoint { x_split: f64, y_split: f64, left: Vec<f64>, lower_right: Vec<f64>, upper_right: Vec<f64> },
    /// Shock of Mach `mach` at `x_shock` moving into gas at rest with `(ρ, p) = pre`.
    PlanarShock { x_shock: f64, mach: f64, pre: [f64; 2] },
}

fn default_gamma() -> f64 {
    GAMMA_AIR
}

fn default_cfl() -> f64 {
    0.45
}

fn default_scheme() -> String {
    "za6".into()
}

fn yes() -> bool {
    true
}

/// A complete, serializable problem definition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    pub equation: Equation,
    pub domain: Domain,
    pub initial: Initial,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_scheme")]
    pub scheme: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<WeightParams>,
    #[serde(default)]
    pub positivity: bool,
    #[serde(default = "yes")]
    pub characteristic: bool,
    #[serde(default)]
    pub abs_sound_speed: bool,
}

/// Conserved initial state, one entry per cell (row-major in 2D).
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Scalar(Vec<[f64; 1]>),
    Euler1d(Vec<[f64; 3]>),
    Euler2d(Vec<[f64; 4]>),
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> Result<Self, ProblemError> {
        let spec: Self = toml::from_str(text).map_err(|e| ProblemError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("problem specs always serialize")
    }

    /// Scheme with any weight overrides applied.
    pub fn scheme_kind(&self) -> Result<SchemeKind, ProblemError> {
        let kind: SchemeKind = self.scheme.parse()?;
        Ok(match self.weights {
            Some(w) => kind.with_params(w),
            None => kind,
        })
    }

    pub fn validate(&self) -> Result<(), ProblemError> {
        let bad = |m: String| Err(ProblemError::Invalid(m));
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return bad(format!("t_final = {}", self.t_final));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad(format!("cfl = {} outside (0, 1]", self.cfl));
        }
        if !(self.gamma > 1.0) {
            return bad(format!("gamma = {} must exceed 1", self.gamma));
        }
        self.scheme_kind()?.build()?;
        let plen = self.equation.primitive_len();
        let check_state = |s: &[f64], what: &str| -> Result<(), ProblemError> {
            if s.len() != plen {
                return Err(ProblemError::Invalid(format!("{what}: state {s:?} needs {plen} components")));
            }
            if plen > 1 && !(s[0] > 0.0 && s[plen - 1] > 0.0) {
                return Err(ProblemError::Invalid(format!("{what}: state {s:?} has nonpositive density or pressure")));
            }
            Ok(())
        };
        let check_bc = |b: &SideBc, side: &str| -> Result<(), ProblemError> {
            match b {
                SideBc::Inflow { state } | SideBc::SplitInflow { state, .. } => check_state(state, side),
                SideBc::ShockTrack { post, pre, .. } => {
                    check_state(post, side)?;
                    check_state(pre, side)
                }
                _ => Ok(()),
            }
        };
        match (&self.domain, &self.equation) {
            (Domain::OneD { grid, left, right }, eq) if !matches!(eq, Equation::Euler2d) => {
                if grid.n < 2 || !(grid.b > grid.a) {
                    return bad(format!("bad 1D grid {grid:?}"));
                }
                if matches!(left, SideBc::Periodic) != matches!(right, SideBc::Periodic) {
                    return bad("periodic boundaries must be paired".into());
                }
                check_bc(left, "left")?;
                check_bc(right, "right")?;
            }
            (Domain::TwoD { grid, left, right, bottom, top }, Equation::Euler2d) => {
                if grid.nx < 2 || grid.ny < 2 || !(grid.x1 > grid.x0) || !(grid.y1 > grid.y0) {
                    return bad(format!("bad 2D grid {grid:?}"));
                }
                if matches!(left, SideBc::Periodic) != matches!(right, SideBc::Periodic)
                    || matches!(bottom, SideBc::Periodic) != matches!(top, SideBc::Periodic)
                {
                    return bad("periodic boundaries must be paired".into());
                }
                if grid.solid.is_some() && [left, right, bottom, top].iter().any(|b| matches!(b, SideBc::Periodic)) {
                    return bad("periodic boundaries cannot be combined with a solid block".into());
                }
                for (b, s) in [(left, "left"), (right, "right"), (bottom, "bottom"), (top, "top")] {
                    check_bc(b, s)?;
                }
            }
            _ => return bad(format!("equation {:?} does not match the domain dimension", self.equation)),
        }
        let states: Vec<&Vec<f64>> = match &self.initial {
            Initial::Piecewise { breaks, states } => {
                if states.len() != breaks.len() + 1 {
                    return bad("piecewise initial data needs one more state than breaks".into());
                }
                states.iter().collect()
            }
            Initial::ShockEntropy { post, .. } | Initial::ShockDensity { post, .. } => vec![post],
            Initial::Quadrants { ne, nw, sw, se, .. } => vec![ne, nw, sw, se],
            Initial::ObliqueShock { post, pre, .. } => vec![post, pre],
            Initial::TriplePoint { left, lower_right, upper_right, .. } => vec![left, lower_right, upper_right],
            _ => vec![],
        };
        for s in states {
            check_state(s, "initial")?;
        }
        let one_d_only = matches!(
            self.initial,
            Initial::Multiwave
                | Initial::Sine { .. }
                | Initial::Box { .. }
                | Initial::Piecewise { .. }
                | Initial::ShockEntropy { .. }
                | Initial::ShockDensity { .. }
        );
        if one_d_only == matches!(self.domain, Domain::TwoD { .. }) {
            return bad("initial condition does not match the domain dimension".into());
        }
        if matches!(self.initial, Initial::ShockEntropy { .. } | Initial::ShockDensity { .. }) && self.equation != Equation::Euler1d {
            return bad("shock-wave initial data need the Euler equations".into());
        }
        if self.positivity && !matches!(self.equation, Equation::Euler1d | Equation::Euler2d) {
            return bad("the positivity limiter applies to the Euler equations only".into());
        }
        Ok(())
    }

    /// Same problem on a different 1D mesh.
    pub fn with_cells(mut self, n: usize) -> Self {
        if let Domain::OneD { grid, .. } = &mut self.domain {
            grid.n = n;
        }
        self
    }

    /// Same problem on a different 2D mesh.
    pub fn with_cells_2d(mut self, nx: usize, ny: usize) -> Self {
        if let Domain::TwoD { grid, .. } = &mut self.domain {
            grid.nx = nx;
            grid.ny = ny;
        }
        self
    }

    /// Cell-centred point values of the initial data.
    pub fn init(&self) -> Result<InitialState, ProblemError> {
        self.validate()?;
        let g = self.gamma;
        match &self.domain {
            Domain::OneD { grid, .. } => {
                let xs = (0..grid.n).map(|i| grid.center(i));
                if self.equation == Equation::Euler1d {
                    let cells = xs
                        .map(|x| {
                            let s = self.primitive_1d(x);
                            conserved_1d(s[0], s[1], s[2], g)
                        })
                        .collect();
                    Ok(InitialState::Euler1d(cells))
                } else {
                    Ok(InitialState::Scalar(xs.map(|x| [self.primitive_1d(x)[0]]).collect()))
                }
            }
            Domain::TwoD { grid, .. } => {
                let mut cells = Vec::with_capacity(grid.nx * grid.ny);
                for j in 0..grid.ny {
                    for i in 0..grid.nx {
                        let (x, y) = grid.center(i, j);
                        let s = self.primitive_2d(x, y);
                        cells.push(conserved_2d(s[0], s[1], s[2], s[3], g));
                    }
                }
                Ok(InitialState::Euler2d(cells))
            }
        }
    }

    fn primitive_1d(&self, x: f64) -> Vec<f64> {
        match &self.initial {
            Initial::Multiwave => vec![multiwave_initial(x)],
            Initial::Sine { mean, amplitude, wavenumber } => vec![mean + amplitude * (2.0 * PI * wavenumber * x).sin()],
            Initial::Box { lo, hi, inside, outside } => vec![if x >= *lo && x <= *hi { *inside } else { *outside }],
            Initial::Piecewise { breaks, states } => {
                let k = breaks.iter().take_while(|&&b| x >= b).count();
                states[k].clone()
            }
            Initial::ShockEntropy { x_shock, post, amplitude, wavenumber, shift } => {
                if x <= *x_shock {
                    post.clone()
                } else {
                    vec![(-amplitude * (wavenumber * (x - shift)).sin()).exp(), 0.0, 1.0]
                }
            }
            Initial::ShockDensity { x_shock, post, amplitude, wavenumber } => {
                if x <= *x_shock {
                    post.clone()
                } else {
                    vec![1.0 + amplitude * (wavenumber * x).sin(), 0.0, 1.0]
                }
            }
            _ => unreachable!("validated as one-dimensional"),
        }
    }

    fn primitive_2d(&self, x: f64, y: f64) -> Vec<f64> {
        match &self.initial {
            Initial::Quadrants { x_split, y_split, ne, nw, sw, se } => match (x > *x_split, y > *y_split) {
                (true, true) => ne.clone(),
                (false, true) => nw.clone(),
                (false, false) => sw.clone(),
                (true, false) => se.clone(),
            },
            Initial::ObliqueShock { x0, slope_inv, post, pre } => {
                if x < x0 + y * slope_inv {
                    post.clone()
                } else {
                    pre.clone()
                }
            }
            Initial::TriplePoint { x_split, y_split, left, lower_right, upper_right } => {
                if x < *x_split {
                    left.clone()
                } else if y < *y_split {
                    lower_right.clone()
                } else {
                    upper_right.clone()
                }
            }
            Initial::PlanarShock { x_shock, mach, pre } => {
                if x < *x_shock {
                    let s = moving_shock_state(*mach, pre[0], pre[1], self.gamma);
                    vec![s.rho, s.u, 0.0, s.p]
                } else {
                    vec![pre[0], 0.0, 0.0, pre[1]]
                }
            }
            _ => unreachable!("validated as two-dimensional"),
        }
    }
}

/// Built-in problem with a one-line description.
#[derive(Debug, Clone, Copy)]
pub struct PresetInfo {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: &[PresetInfo] = &[
    PresetInfo { name: "multiwave", description: "linear advection of Gaussian, square, triangle and semi-ellipse waves, N=400, T=20" },
    PresetInfo { name: "burgers", description: "inviscid Burgers, 1/2 + sin(2 pi x), periodic [0,1], N=80, T=0.2" },
    PresetInfo { name: "buckley-leverett", description: "Buckley-Leverett with nonconvex flux, box data on [-1,1], N=200, T=0.3" },
    PresetInfo { name: "sod", description: "Sod shock tube on [-5,5], N=200, T=2" },
    PresetInfo { name: "lax", description: "Lax shock tube on [-5,5], N=200, T=1.3" },
    PresetInfo { name: "123", description: "123 double rarefaction on [-5,5], N=200, T=1" },
    PresetInfo { name: "shock-entropy", description: "Mach 3 shock into entropy waves on [-10,30], N=4000, T=10" },
    PresetInfo { name: "shock-density", description: "extended Mach 3 shock-density wave interaction on [-5,15], N=600, T=5" },
    PresetInfo { name: "blast", description: "interacting blast waves on [0,1], reflective walls, N=400, T=0.038" },
    PresetInfo { name: "rivp3", description: "2D Riemann problem configuration 3 on [0,1]^2, 400x400, T=0.8" },
    PresetInfo { name: "dmr", description: "double Mach reflection on [0,4]x[0,1], 800x200, T=0.2" },
    PresetInfo { name: "triple-point", description: "single-material triple point on [0,7]x[0,3], 1050x450, T=5" },
    PresetInfo { name: "shock-diffraction", description: "Mach 5.09 shock diffracting round a corner, 1040x880, T=2.3, positivity limiter" },
];

fn suggest(name: &str) -> Option<String> {
    PRESETS
        .iter()
        .map(|p| (strsim::levenshtein(name, p.name), p.name))
        .filter(|(d, _)| *d <= 4)
        .min_by_key(|(d, _)| *d)
        .map(|(_, n)| n.to_string())
}

fn base(name: &str, equation: Equation, domain: Domain, initial: Initial, t_final: f64) -> ProblemSpec {
    ProblemSpec {
        name: name.into(),
        equation,
        domain,
        initial,
        gamma: GAMMA_AIR,
        t_final,
        cfl: 0.45,
        scheme: default_scheme(),
        weights: None,
        positivity: false,
        characteristic: true,
        abs_sound_speed: false,
    }
}

fn line(a: f64, b: f64, n: usize, bc: SideBc) -> Domain {
    Domain::OneD { grid: Grid1D { a, b, n }, left: bc.clone(), right: bc }
}

fn shock_tube(name: &str, left: [f64; 3], right: [f64; 3], t_final: f64) -> ProblemSpec {
    base(
        name,
        Equation::Euler1d,
        line(-5.0, 5.0, 200, SideBc::Outflow),
        Initial::Piecewise { breaks: vec![0.0], states: vec![left.to_vec(), right.to_vec()] },
        t_final,
    )
}

fn mach3_post() -> Vec<f64> {
    vec![27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0]
}

/// Built-in benchmark by name.
pub fn preset(name: &str) -> Result<ProblemSpec, ProblemError> {
    let lower = name.trim().to_ascii_lowercase();
    let spec = match lower.as_str() {
        "multiwave" => base(
            "multiwave",
            Equation::Advection { speed: 1.0 },
            line(-1.0, 1.0, 400, SideBc::Periodic),
            Initial::Multiwave,
            20.0,
        ),
        "burgers" => base(
            "burgers",
            Equation::Burgers,
            line(0.0, 1.0, 80, SideBc::Periodic),
            Initial::Sine { mean: 0.5, amplitude: 1.0, wavenumber: 1.0 },
            0.2,
        ),
        "buckley-leverett" | "buckley" => base(
            "buckley-leverett",
            Equation::BuckleyLeverett { a: 0.25 },
            line(-1.0, 1.0, 200, SideBc::Outflow),
            Initial::Box { lo: -0.5, hi: 0.0, inside: 1.0, outside: 0.0 },
            0.3,
        ),
        "sod" => shock_tube("sod", [0.125, 0.0, 0.1], [1.0, 0.0, 1.0], 2.0),
        "lax" => shock_tube("lax", [0.445, 0.698, 3.528], [0.5, 0.0, 0.571], 1.3),
        "123" | "one-two-three" => shock_tube("123", [1.0, -2.0, 0.4], [1.0, 2.0, 0.4], 1.0),
        "shock-entropy" => base(
            "shock-entropy",
            Equation::Euler1d,
            line(-10.0, 30.0, 4000, SideBc::Outflow),
            Initial::ShockEntropy { x_shock: -9.5, post: mach3_post(), amplitude: 0.01, wavenumber: 13.0, shift: 9.5 },
            10.0,
        ),
        "shock-density" => base(
            "shock-density",
            Equation::Euler1d,
            line(-5.0, 15.0, 600, SideBc::Outflow),
            Initial::ShockDensity { x_shock: -4.0, post: mach3_post(), amplitude: 0.2, wavenumber: 5.0 },
            5.0,
        ),
        "blast" => base(
            "blast",
            Equation::Euler1d,
            line(0.0, 1.0, 400, SideBc::Reflective),
            Initial::Piecewise {
                breaks: vec![0.1, 0.9],
                states: vec![vec![1.0, 0.0, 1000.0], vec![1.0, 0.0, 0.01], vec![1.0, 0.0, 100.0]],
            },
            0.038,
        ),
        "rivp3" | "rivp" => base(
            "rivp3",
            Equation::Euler2d,
            Domain::TwoD {
                grid: Grid2D { x0: 0.0, x1: 1.0, y0: 0.0, y1: 1.0, nx: 400, ny: 400, solid: None },
                left: SideBc::Outflow,
                right: SideBc::Outflow,
                bottom: SideBc::Outflow,
                top: SideBc::Outflow,
            },
            Initial::Quadrants {
                x_split: 0.8,
                y_split: 0.8,
                ne: vec![1.5, 0.0, 0.0, 1.5],
                nw: vec![0.5323, 1.206, 0.0, 0.3],
                sw: vec![0.138, 1.206, 1.206, 0.029],
                se: vec![0.5323, 0.0, 1.206, 0.3],
            },
            0.8,
        ),
        "dmr" => {
            let post = vec![8.0, 8.25 * (PI / 6.0).cos(), -8.25 * (PI / 6.0).sin(), 116.5];
            let pre = vec![1.4, 0.0, 0.0, 1.0];
            let slope_inv = 1.0 / 3f64.sqrt();
            base(
                "dmr",
                Equation::Euler2d,
                Domain::TwoD {
                    grid: Grid2D { x0: 0.0, x1: 4.0, y0: 0.0, y1: 1.0, nx: 800, ny: 200, solid: None },
                    left: SideBc::Inflow { state: post.clone() },
                    right: SideBc::Outflow,
                    bottom: SideBc::SplitInflow { split: 1.0 / 6.0, state: post.clone() },
                    top: SideBc::ShockTrack { x0: 1.0 / 6.0, slope_inv, speed: 20.0, post: post.clone(), pre: pre.clone() },
                },
                Initial::ObliqueShock { x0: 1.0 / 6.0, slope_inv, post, pre },
                0.2,
            )
        }
        "triple-point" | "smtp" => base(
            "triple-point",
            Equation::Euler2d,
            Domain::TwoD {
                grid: Grid2D { x0: 0.0, x1: 7.0, y0: 0.0, y1: 3.0, nx: 1050, ny: 450, solid: None },
                left: SideBc::Reflective,
                right: SideBc::Reflective,
                bottom: SideBc::Reflective,
                top: SideBc::Reflective,
            },
            Initial::TriplePoint {
                x_split: 1.0,
                y_split: 1.5,
                left: vec![1.0, 0.0, 0.0, 1.0],
                lower_right: vec![1.0, 0.0, 0.0, 0.1],
                upper_right: vec![0.125, 0.0, 0.0, 0.1],
            },
            5.0,
        ),
        "shock-diffraction" => {
            let post = moving_shock_state(5.09, 1.4, 1.0, GAMMA_AIR);
            let mut spec = base(
                "shock-diffraction",
                Equation::Euler2d,
                Domain::TwoD {
                    grid: Grid2D {
                        x0: 0.0,
                        x1: 13.0,
                        y0: 0.0,
                        y1: 11.0,
                        nx: 1040,
                        ny: 880,
                        solid: Some(Rect { x0: 0.0, x1: 1.0, y0: 0.0, y1: 6.0 }),
                    },
                    left: SideBc::Inflow { state: vec![post.rho, post.u, 0.0, post.p] },
                    right: SideBc::Outflow,
                    bottom: SideBc::Outflow,
                    top: SideBc::Outflow,
                },
                Initial::PlanarShock { x_shock: 0.5, mach: 5.09, pre: [1.4, 1.0] },
                2.3,
            );
            spec.positivity = true;
            spec
        }
        _ => return Err(ProblemError::UnknownPreset { name: name.to_string(), suggestion: suggest(&lower) }),
    };
    Ok(spec)
}
