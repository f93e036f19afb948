//! Method-of-lines drivers for one- and two-dimensional problems.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::flux::{
    conserved_1d, conserved_2d, flux_divergence, interface_fluxes, lf_interface_fluxes, Euler1D, Euler2D, EulerOptions,
    FluxError, LineScratch, LineSystem, Scalar,
};
use crate::limiter::{limit_fluxes, state_pressure, LimitStats, LimiterError, PositivityParams};
use crate::problems::{fill_line, Domain, EndFill, Grid2D, InitialState, ProblemError, ProblemSpec, SideBc};
use crate::timeint::{cfl_dt, cfl_dt_2d, integrate, RunStats, TimeControls, TimeError};
use crate::weno::{Reconstruct, Scheme};
use crate::coeffgen::MAX_R;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("{0}")]
    Config(String),
    #[error("non-finite value at step {step}, t = {t:e}, cell {cell:?}, component {component}")]
    NonFinite { step: usize, t: f64, cell: (usize, usize), component: usize },
    #[error("unphysical state at step {step}, RK stage {stage}: {source}")]
    Unphysical { step: usize, stage: usize, source: FluxError },
    #[error("positivity limiter failed at step {step}, RK stage {stage}: {source}")]
    Positivity { step: usize, stage: usize, source: LimiterError },
}

/// Failure inside one right-hand-side evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum StageError {
    #[error(transparent)]
    Flux(#[from] FluxError),
    #[error(transparent)]
    Limiter(#[from] LimiterError),
}

/// Primitive fields of a solution.
#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Scalar(Vec<f64>),
    /// `(ρ, u, p)` per cell.
    Euler1d(Vec<[f64; 3]>),
    /// `(ρ, u, v, p)` per cell, row-major; NaN inside solid blocks.
    Euler2d(Vec<[f64; 4]>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub t: f64,
    pub domain: Domain,
    pub field: Field,
}

impl Solution {
    /// Cell centres of a 1D solution.
    pub fn x(&self) -> Vec<f64> {
        match &self.domain {
            Domain::OneD { grid, .. } => (0..grid.n).map(|i| grid.center(i)).collect(),
            Domain::TwoD { .. } => Vec::new(),
        }
    }

    /// Density (scalar value for scalar laws).
    pub fn density(&self) -> Vec<f64> {
        match &self.field {
            Field::Scalar(q) => q.clone(),
            Field::Euler1d(w) => w.iter().map(|s| s[0]).collect(),
            Field::Euler2d(w) => w.iter().map(|s| s[0]).collect(),
        }
    }

    pub fn pressure(&self) -> Option<Vec<f64>> {
        match &self.field {
            Field::Scalar(_) => None,
            Field::Euler1d(w) => Some(w.iter().map(|s| s[2]).collect()),
            Field::Euler2d(w) => Some(w.iter().map(|s| s[3]).collect()),
        }
    }
}

/// Output cadence and safety caps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    /// Report a snapshot every `k` steps.
    pub snapshot_every: Option<usize>,
    pub dt_cap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub scheme: String,
    pub steps: usize,
    pub t: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub dt_digest: String,
    pub rhs_evals: usize,
    /// Smallest density and pressure over fluid cells after every step.
    pub min_density: f64,
    pub min_pressure: f64,
    pub limited_faces: usize,
    pub min_theta: f64,
    pub wall_seconds: f64,
    pub threads: usize,
}

impl RunReport {
    pub fn seconds_per_stage(&self) -> f64 {
        if self.rhs_evals == 0 {
            0.0
        } else {
            self.wall_seconds / self.rhs_evals as f64
        }
    }
}

/// Run a problem to its final time.
pub fn run(spec: &ProblemSpec, opts: &RunOptions) -> Result<(Solution, RunReport), SolverError> {
    run_observed(spec, opts, |_, _| {})
}

/// Run a problem, handing periodic snapshots to `observe(step, solution)`.
pub fn run_observed(
    spec: &ProblemSpec,
    opts: &RunOptions,
    mut observe: impl FnMut(usize, &Solution),
) -> Result<(Solution, RunReport), SolverError> {
    spec.validate()?;
    let scheme = spec.scheme_kind()?.build().map_err(ProblemError::from)?;
    let positivity = if spec.positivity { PositivityParams::on() } else { PositivityParams::default() };
    let euler = EulerOptions { gamma: spec.gamma, characteristic: spec.characteristic, abs_sound_speed: spec.abs_sound_speed };
    let controls = TimeControls { cfl: spec.cfl, t_final: spec.t_final, dt_cap: opts.dt_cap };
    let started = Instant::now();
    let init = spec.init()?;
    let (sol, mut report) = match (&spec.domain, init) {
        (Domain::OneD { grid, left, right }, InitialState::Scalar(cells)) => {
            let sys = Scalar(spec.equation.scalar_flux().expect("scalar equation"));
            let mut line = Line1D::new(sys, &scheme, grid.dx(), cells.len(), [left, right], spec.gamma, positivity)?;
            line.run(cells, &controls, spec, opts, &mut observe)?
        }
        (Domain::OneD { grid, left, right }, InitialState::Euler1d(cells)) => {
            let mut line = Line1D::new(Euler1D(euler), &scheme, grid.dx(), cells.len(), [left, right], spec.gamma, positivity)?;
            line.run(cells, &controls, spec, opts, &mut observe)?
        }
        (Domain::TwoD { grid, left, right, bottom, top }, InitialState::Euler2d(cells)) => {
            let mut plane = Plane::new(Euler2D(euler), &scheme, *grid, [left, right, bottom, top], positivity)?;
            plane.run(cells, &controls, spec, opts, &mut observe)?
        }
        _ => return Err(SolverError::Config("initial state does not match the domain".into())),
    };
    report.wall_seconds = started.elapsed().as_secs_f64();
    report.threads = rayon::current_num_threads();
    Ok((sol, report))
}

fn report(spec: &ProblemSpec, stats: RunStats, rhs_evals: usize, lim: LimitStats, mins: (f64, f64)) -> RunReport {
    RunReport {
        scheme: spec.scheme.clone(),
        steps: stats.steps,
        t: stats.t,
        dt_min: stats.dt_min,
        dt_max: stats.dt_max,
        dt_digest: stats.dt_digest,
        rhs_evals,
        min_density: mins.0,
        min_pressure: mins.1,
        limited_faces: lim.limited,
        min_theta: lim.min_theta,
        wall_seconds: 0.0,
        threads: 1,
    }
}

fn map_time_error(e: TimeError<StageError>, n_comp: usize, nx: usize) -> SolverError {
    match e {
        TimeError::Stage { step, stage, source: StageError::Flux(source) } => SolverError::Unphysical { step, stage, source },
        TimeError::Stage { step, stage, source: StageError::Limiter(source) } => SolverError::Positivity { step, stage, source },
        TimeError::NonFinite { step, t, index } => {
            let cell = index / n_comp;
            SolverError::NonFinite { step, t, cell: (cell % nx, cell / nx), component: index % n_comp }
        }
        other => SolverError::Config(other.to_string()),
    }
}

/// Conserved state from a primitive vector, in natural component order.
fn conserved<const N: usize>(prim: &[f64], gamma: f64) -> Result<[f64; N], SolverError> {
    if prim.len() != N {
        return Err(SolverError::Config(format!("boundary state {prim:?} needs {N} components")));
    }
    let mut q = [0.0; N];
    match N {
        1 => q[0] = prim[0],
        3 => q.copy_from_slice(&conserved_1d(prim[0], prim[1], prim[2], gamma)),
        4 => q.copy_from_slice(&conserved_2d(prim[0], prim[1], prim[2], prim[3], gamma)),
        _ => unreachable!(),
    }
    Ok(q)
}

fn simple_fill<const N: usize>(bc: &SideBc, gamma: f64) -> Result<Option<EndFill<N>>, SolverError> {
    Ok(Some(match bc {
        SideBc::Periodic => EndFill::Periodic,
        SideBc::Outflow => EndFill::Outflow,
        SideBc::Reflective => EndFill::Reflective,
        SideBc::Inflow { state } => EndFill::Fixed(conserved::<N>(state, gamma)?),
        _ => return Ok(None),
    }))
}

fn check_limiter_target<const N: usize>(p: &PositivityParams) -> Result<(), SolverError> {
    if p.enabled && N < 3 {
        return Err(SolverError::Config("the positivity limiter needs the Euler equations".into()));
    }
    p.validate().map_err(|e| SolverError::Config(e.to_string()))
}

struct Line1D<'a, S, const N: usize> {
    sys: S,
    scheme: &'a Scheme,
    g: usize,
    dx: f64,
    n: usize,
    ends: [EndFill<N>; 2],
    gamma: f64,
    positivity: PositivityParams,
    buf: Vec<[f64; N]>,
    high: Vec<[f64; N]>,
    low: Vec<[f64; N]>,
    scratch: LineScratch<N>,
    limits: LimitStats,
    evals: usize,
}

impl<'a, S: LineSystem<N>, const N: usize> Line1D<'a, S, N> {
    fn new(
        sys: S,
        scheme: &'a Scheme,
        dx: f64,
        n: usize,
        sides: [&SideBc; 2],
        gamma: f64,
        positivity: PositivityParams,
    ) -> Result<Self, SolverError> {
        check_limiter_target::<N>(&positivity)?;
        let mut ends = [EndFill::Outflow; 2];
        for (e, bc) in ends.iter_mut().zip(sides) {
            *e = simple_fill(bc, gamma)?
                .ok_or_else(|| SolverError::Config(format!("boundary {bc:?} needs a two-dimensional domain")))?;
        }
        let (a, b) = scheme.extent();
        let g = a.max(b);
        Ok(Self {
            sys,
            scheme,
            g,
            dx,
            n,
            ends,
            gamma,
            positivity,
            buf: vec![[0.0; N]; n + 2 * g],
            high: vec![[0.0; N]; n + 1],
            low: vec![[0.0; N]; n + 1],
            scratch: LineScratch::default(),
            limits: LimitStats::default(),
            evals: 0,
        })
    }

    fn max_speed(&self, cells: &[[f64; N]]) -> Result<f64, FluxError> {
        Ok(self.sys.global_alpha(cells)?.into_iter().fold(0.0, f64::max))
    }

    fn field(&self, cells: &[[f64; N]]) -> Field {
        match N {
            1 => Field::Scalar(cells.iter().map(|q| q[0]).collect()),
            _ => Field::Euler1d(
                cells.iter().map(|q| [q[0], q[1] / q[0], state_pressure(q, self.gamma)]).collect(),
            ),
        }
    }

    fn run(
        &mut self,
        cells: Vec<[f64; N]>,
        controls: &TimeControls,
        spec: &ProblemSpec,
        opts: &RunOptions,
        observe: &mut impl FnMut(usize, &Solution),
    ) -> Result<(Solution, RunReport), SolverError> {
        let mut u: Vec<f64> = cells.into_iter().flatten().collect();
        let cfl = controls.cfl;
        let (dx, n) = (self.dx, self.n);
        let mut mins = (f64::INFINITY, f64::INFINITY);
        let snapshot = |me: &Self, step: usize, t: f64, u: &[f64], observe: &mut dyn FnMut(usize, &Solution)| {
            let sol = Solution { t, domain: spec.domain.clone(), field: me.field(u.as_chunks::<N>().0) };
            observe(step, &sol);
        };
        let every = opts.snapshot_every.unwrap_or(0);
        if every > 0 {
            snapshot(self, 0, 0.0, &u, &mut *observe);
        }
        let stats = {
            let this = std::cell::RefCell::new(&mut *self);
            let mut rhs = |u: &[f64], t: f64, dt: f64, out: &mut [f64]| this.borrow_mut().rhs(u, t, dt, out);
            integrate(
                &mut u,
                0.0,
                controls,
                |u: &[f64]| {
                    let s = this.borrow().max_speed(u.as_chunks::<N>().0).map_err(|e| TimeError::Stage {
                        step: 0,
                        stage: 0,
                        source: StageError::Flux(e),
                    })?;
                    cfl_dt(s, dx, cfl, controls.dt_cap).map_err(|e| e.map_source(|never| match never {}))
                },
                &mut rhs,
                |step, t, u| {
                    let me = this.borrow();
                    if N >= 3 {
                        for q in u.as_chunks::<N>().0 {
                            mins.0 = mins.0.min(q[0]);
                            mins.1 = mins.1.min(state_pressure(q, me.gamma));
                        }
                    }
                    if every > 0 && step % every == 0 {
                        snapshot(&me, step, t, u, &mut *observe);
                    }
                    Ok(())
                },
            )
            .map_err(|e| map_time_error(e, N, n))?
        };
        let sol = Solution { t: stats.t, domain: spec.domain.clone(), field: self.field(u.as_chunks::<N>().0) };
        if N < 3 {
            mins = (f64::NAN, f64::NAN);
        }
        let rep = report(spec, stats, self.evals, self.limits, mins);
        Ok((sol, rep))
    }

    fn rhs(&mut self, u: &[f64], _t: f64, dt: f64, out: &mut [f64]) -> Result<(), StageError> {
        self.evals += 1;
        let (g, n) = (self.g, self.n);
        let cells = u.as_chunks::<N>().0;
        self.buf[g..g + n].copy_from_slice(cells);
        fill_line(&mut self.buf, g, &self.ends[0], &self.ends[1]);
        let alpha = self.sys.global_alpha(cells)?;
        interface_fluxes(&self.sys, self.scheme, &alpha, &self.buf, g, self.dx, &mut self.scratch, &mut self.high)?;
        if self.positivity.enabled {
            let amax = alpha.into_iter().fold(0.0, f64::max);
            lf_interface_fluxes(&self.sys, amax, &self.buf, g, &mut self.low)?;
            let s = limit_fluxes(&mut self.high, &self.low, cells, 2.0 * dt / self.dx, self.gamma, &self.positivity)?;
            self.limits.merge(s);
        }
        let out = out.as_chunks_mut::<N>().0;
        out.fill([0.0; N]);
        flux_divergence(&self.high, self.dx, out);
        Ok(())
    }
}

/// A contiguous stretch of fluid cells along one grid line.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Run {
    start: usize,
    end: usize,
}

fn runs(fluid: impl Iterator<Item = bool>) -> Vec<Run> {
    let mut out = Vec::new();
    let mut open = None;
    let mut len = 0;
    for (k, f) in fluid.enumerate() {
        match (f, open) {
            (true, None) => open = Some(k),
            (false, Some(s)) => {
                out.push(Run { start: s, end: k });
                open = None;
            }
            _ => {}
        }
        len = k + 1;
    }
    if let Some(s) = open {
        out.push(Run { start: s, end: len });
    }
    out
}

#[inline]
fn swap(q: &[f64; 4]) -> [f64; 4] {
    [q[0], q[2], q[1], q[3]]
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Side {
    Left,
    Right,
    Bottom,
    Top,
}

/// Ghost rule for a line end on the domain edge, states already oriented.
#[derive(Debug, Clone, Copy)]
enum EdgeRule {
    Simple(EndFill<4>),
    Split { split: f64, state: [f64; 4] },
    Track { x0: f64, slope_inv: f64, speed: f64, post: [f64; 4], pre: [f64; 4] },
}

impl EdgeRule {
    fn new(bc: &SideBc, side: Side, gamma: f64) -> Result<Self, SolverError> {
        let vertical = matches!(side, Side::Bottom | Side::Top);
        let orient = |q: [f64; 4]| if vertical { swap(&q) } else { q };
        if let Some(f) = simple_fill::<4>(bc, gamma)? {
            return Ok(EdgeRule::Simple(match f {
                EndFill::Fixed(q) => EndFill::Fixed(orient(q)),
                other => other,
            }));
        }
        Ok(match bc {
            SideBc::SplitInflow { split, state } => EdgeRule::Split { split: *split, state: orient(conserved::<4>(state, gamma)?) },
            SideBc::ShockTrack { x0, slope_inv, speed, post, pre } => EdgeRule::Track {
                x0: *x0,
                slope_inv: *slope_inv,
                speed: *speed,
                post: orient(conserved::<4>(post, gamma)?),
                pre: orient(conserved::<4>(pre, gamma)?),
            },
            _ => unreachable!("handled by simple_fill"),
        })
    }
}

struct LineWork {
    buf: Vec<[f64; 4]>,
    high: Vec<[f64; 4]>,
    low: Vec<[f64; 4]>,
    div: Vec<[f64; 4]>,
    scratch: LineScratch<4>,
}

impl LineWork {
    fn new() -> Self {
        Self { buf: Vec::new(), high: Vec::new(), low: Vec::new(), div: Vec::new(), scratch: LineScratch::default() }
    }
}

struct Plane<'a> {
    sys: Euler2D,
    scheme: &'a Scheme,
    grid: Grid2D,
    g: usize,
    edges: [EdgeRule; 4],
    fluid: Vec<bool>,
    row_runs: Vec<Vec<Run>>,
    col_runs: Vec<Vec<Run>>,
    positivity: PositivityParams,
    ydiv: Vec<[f64; 4]>,
    limits: LimitStats,
    evals: usize,
}

/// Per-stage sweep parameters shared by all lines of one direction.
struct Sweep<'s> {
    alpha: [f64; 4],
    h: f64,
    c: f64,
    t: f64,
    lines: &'s [Vec<Run>],
    len: usize,
    ends: [Side; 2],
}

impl<'a> Plane<'a> {
    fn new(sys: Euler2D, scheme: &'a Scheme, grid: Grid2D, sides: [&SideBc; 4], positivity: PositivityParams) -> Result<Self, SolverError> {
        check_limiter_target::<4>(&positivity)?;
        let (nx, ny) = (grid.nx, grid.ny);
        let fluid: Vec<bool> = (0..ny).flat_map(|j| (0..nx).map(move |i| (i, j))).map(|(i, j)| !grid.is_solid(i, j)).collect();
        let row_runs = (0..ny).map(|j| runs((0..nx).map(|i| fluid[j * nx + i]))).collect();
        let col_runs = (0..nx).map(|i| runs((0..ny).map(|j| fluid[j * nx + i]))).collect();
        let (a, b) = scheme.extent();
        let gamma = sys.0.gamma;
        let edges = [
            EdgeRule::new(sides[0], Side::Left, gamma)?,
            EdgeRule::new(sides[1], Side::Right, gamma)?,
            EdgeRule::new(sides[2], Side::Bottom, gamma)?,
            EdgeRule::new(sides[3], Side::Top, gamma)?,
        ];
        Ok(Self {
            sys,
            scheme,
            grid,
            g: a.max(b),
            edges,
            fluid,
            row_runs,
            col_runs,
            positivity,
            ydiv: vec![[0.0; 4]; nx * ny],
            limits: LimitStats::default(),
            evals: 0,
        })
    }

    fn gamma(&self) -> f64 {
        self.sys.0.gamma
    }

    /// Ghost rule for the end of a line that touches the domain edge.
    /// `line` indexes the row (x sweeps) or column (y sweeps).
    fn edge_fill(&self, side: Side, line: usize, t: f64) -> EndFill<4> {
        let gr = &self.grid;
        let vertical = matches!(side, Side::Bottom | Side::Top);
        let (xc, yc) = gr.center(if vertical { line } else { 0 }, if vertical { 0 } else { line });
        match self.edges[side as usize] {
            EdgeRule::Simple(f) => f,
            EdgeRule::Split { split, state } => {
                let along = if vertical { xc } else { yc };
                if along < split {
                    EndFill::Fixed(state)
                } else {
                    EndFill::Reflective
                }
            }
            EdgeRule::Track { x0, slope_inv, speed, post, pre } => {
                let mut ghosts = [[0.0; 4]; MAX_R];
                for (k, gq) in ghosts.iter_mut().enumerate().take(self.g) {
                    let off = k as f64 + 0.5;
                    let (x, y) = match side {
                        Side::Left => (gr.x0 - off * gr.dx(), yc),
                        Side::Right => (gr.x1 + off * gr.dx(), yc),
                        Side::Bottom => (xc, gr.y0 - off * gr.dy()),
                        Side::Top => (xc, gr.y1 + off * gr.dy()),
                    };
                    *gq = if x < x0 + (y + speed * t) * slope_inv { post } else { pre };
                }
                EndFill::Ghosts(ghosts)
            }
        }
    }

    fn family_alpha(&self, cells: &[[f64; 4]], vertical: bool) -> Result<[f64; 4], FluxError> {
        cells
            .par_iter()
            .zip(self.fluid.par_iter())
            .filter(|(_, f)| **f)
            .map(|(q, _)| self.sys.family_speeds(&if vertical { swap(q) } else { *q }))
            .try_reduce(|| [0.0; 4], |a, b| Ok(std::array::from_fn(|k| a[k].max(b[k]))))
    }

    fn max_speeds(&self, cells: &[[f64; 4]]) -> Result<(f64, f64), FluxError> {
        let m = |a: [f64; 4]| a.into_iter().fold(0.0, f64::max);
        Ok((m(self.family_alpha(cells, false)?), m(self.family_alpha(cells, true)?)))
    }

    /// Flux difference along one line; `get(k)` yields the oriented state of
    /// cell `k` of the line, `div` receives `-(F_{k+½} - F_{k-½})/h`.
    fn sweep_line(
        &self,
        sw: &Sweep<'_>,
        line: usize,
        get: impl Fn(usize) -> [f64; 4],
        w: &mut LineWork,
    ) -> Result<LimitStats, StageError> {
        let g = self.g;
        let mut stats = LimitStats::default();
        w.div.clear();
        w.div.resize(sw.len, [0.0; 4]);
        for run in &sw.lines[line] {
            let n = run.end - run.start;
            w.buf.clear();
            w.buf.resize(n + 2 * g, [0.0; 4]);
            for k in 0..n {
                w.buf[g + k] = get(run.start + k);
            }
            let left = if run.start == 0 { self.edge_fill(sw.ends[0], line, sw.t) } else { EndFill::Reflective };
            let right = if run.end == sw.len { self.edge_fill(sw.ends[1], line, sw.t) } else { EndFill::Reflective };
            fill_line(&mut w.buf, g, &left, &right);
            w.high.clear();
            w.high.resize(n + 1, [0.0; 4]);
            interface_fluxes(&self.sys, self.scheme, &sw.alpha, &w.buf, g, sw.h, &mut w.scratch, &mut w.high)?;
            if self.positivity.enabled {
                let amax = sw.alpha.into_iter().fold(0.0, f64::max);
                w.low.clear();
                w.low.resize(n + 1, [0.0; 4]);
                lf_interface_fluxes(&self.sys, amax, &w.buf, g, &mut w.low)?;
                stats.merge(limit_fluxes(&mut w.high, &w.low, &w.buf[g..g + n], sw.c, self.gamma(), &self.positivity)?);
            }
            flux_divergence(&w.high, sw.h, &mut w.div[run.start..run.end]);
        }
        Ok(stats)
    }

    fn rhs(&mut self, u: &[f64], t: f64, dt: f64, out: &mut [f64]) -> Result<(), StageError> {
        self.evals += 1;
        let (nx, ny) = (self.grid.nx, self.grid.ny);
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        let cells = u.as_chunks::<4>().0;
        let out = out.as_chunks_mut::<4>().0;
        let ax = self.family_alpha(cells, false)?;
        let ay = self.family_alpha(cells, true)?;
        let mx = ax.into_iter().fold(0.0, f64::max);
        let my = ay.into_iter().fold(0.0, f64::max);
        let total = dt / dx * mx + dt / dy * my;
        let (cx, cy) = (2.0 * total / mx, 2.0 * total / my);

        let sx = Sweep { alpha: ax, h: dx, c: cx, t, lines: &self.row_runs, len: nx, ends: [Side::Left, Side::Right] };
        let this = &*self;
        let xs: Vec<LimitStats> = out
            .par_chunks_mut(nx)
            .enumerate()
            .map_init(LineWork::new, |w, (j, row)| {
                let s = this.sweep_line(&sx, j, |i| cells[j * nx + i], w)?;
                row.copy_from_slice(&w.div);
                Ok(s)
            })
            .collect::<Result<_, StageError>>()?;

        let sy = Sweep { alpha: ay, h: dy, c: cy, t, lines: &self.col_runs, len: ny, ends: [Side::Bottom, Side::Top] };
        let mut ydiv = std::mem::take(&mut self.ydiv);
        let this = &*self;
        let ys: Result<Vec<LimitStats>, StageError> = ydiv
            .par_chunks_mut(ny)
            .enumerate()
            .map_init(LineWork::new, |w, (i, col)| {
                let s = this.sweep_line(&sy, i, |j| swap(&cells[j * nx + i]), w)?;
                for (c, d) in col.iter_mut().zip(&w.div) {
                    *c = swap(d);
                }
                Ok(s)
            })
            .collect();
        let ys = match ys {
            Ok(v) => v,
            Err(e) => {
                self.ydiv = ydiv;
                return Err(e);
            }
        };
        out.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
            for (i, o) in row.iter_mut().enumerate() {
                let d = &ydiv[i * ny + j];
                for k in 0..4 {
                    o[k] += d[k];
                }
            }
        });
        self.ydiv = ydiv;
        for s in xs.into_iter().chain(ys) {
            self.limits.merge(s);
        }
        Ok(())
    }

    fn field(&self, cells: &[[f64; 4]]) -> Field {
        let gamma = self.gamma();
        Field::Euler2d(
            cells
                .iter()
                .zip(&self.fluid)
                .map(|(q, f)| {
                    if *f {
                        [q[0], q[1] / q[0], q[2] / q[0], state_pressure(q, gamma)]
                    } else {
                        [f64::NAN; 4]
                    }
                })
                .collect(),
        )
    }

    fn run(
        &mut self,
        cells: Vec<[f64; 4]>,
        controls: &TimeControls,
        spec: &ProblemSpec,
        opts: &RunOptions,
        observe: &mut impl FnMut(usize, &Solution),
    ) -> Result<(Solution, RunReport), SolverError> {
        let mut u: Vec<f64> = cells.into_iter().flatten().collect();
        let (dx, dy) = (self.grid.dx(), self.grid.dy());
        let nx = self.grid.nx;
        let mut mins = (f64::INFINITY, f64::INFINITY);
        let every = opts.snapshot_every.unwrap_or(0);
        if every > 0 {
            observe(0, &Solution { t: 0.0, domain: spec.domain.clone(), field: self.field(u.as_chunks::<4>().0) });
        }
        let stats = {
            let this = std::cell::RefCell::new(&mut *self);
            let mut rhs = |u: &[f64], t: f64, dt: f64, out: &mut [f64]| this.borrow_mut().rhs(u, t, dt, out);
            integrate(
                &mut u,
                0.0,
                controls,
                |u: &[f64]| {
                    let (sx, sy) = this.borrow().max_speeds(u.as_chunks::<4>().0).map_err(|e| TimeError::Stage {
                        step: 0,
                        stage: 0,
                        source: StageError::Flux(e),
                    })?;
                    cfl_dt_2d(sx, sy, dx, dy, controls.cfl, controls.dt_cap).map_err(|e| e.map_source(|never| match never {}))
                },
                &mut rhs,
                |step, t, u| {
                    let me = this.borrow();
                    let gamma = me.gamma();
                    let cells = u.as_chunks::<4>().0;
                    let (r, p) = cells
                        .par_iter()
                        .zip(me.fluid.par_iter())
                        .filter(|(_, f)| **f)
                        .map(|(q, _)| (q[0], state_pressure(q, gamma)))
                        .reduce(|| (f64::INFINITY, f64::INFINITY), |a, b| (a.0.min(b.0), a.1.min(b.1)));
                    mins = (mins.0.min(r), mins.1.min(p));
                    if every > 0 && step % every == 0 {
                        observe(step, &Solution { t, domain: spec.domain.clone(), field: me.field(cells) });
                    }
                    Ok(())
                },
            )
            .map_err(|e| map_time_error(e, 4, nx))?
        };
        let sol = Solution { t: stats.t, domain: spec.domain.clone(), field: self.field(u.as_chunks::<4>().0) };
        let rep = report(spec, stats, self.evals, self.limits, mins);
        Ok((sol, rep))
    }
}

#[cfg(test)]
mod tests;
