//! Plain-text artifacts: solution and study CSVs, run metadata.

use std::io::{self, Write};

use serde::Serialize;

use crate::analysis::{AdrPoint, ConvergenceRow, TimingRow};
use crate::problems::{Domain, ProblemSpec};
use crate::solver::{Field, RunReport, Solution};

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

/// 1D: one row per cell with `x` and the primitive variables. 2D: a header
/// line with the grid, then `ny` rows of `nx` densities (row `j` is `y_j`).
pub fn write_solution<W: Write>(mut w: W, sol: &Solution) -> io::Result<()> {
    match (&sol.domain, &sol.field) {
        (Domain::OneD { .. }, field) => {
            let x = sol.x();
            match field {
                Field::Scalar(q) => {
                    writeln!(w, "x,q")?;
                    for (x, q) in x.iter().zip(q) {
                        writeln!(w, "{},{}", num(*x), num(*q))?;
                    }
                }
                Field::Euler1d(s) => {
                    writeln!(w, "x,rho,u,p")?;
                    for (x, s) in x.iter().zip(s) {
                        writeln!(w, "{},{},{},{}", num(*x), num(s[0]), num(s[1]), num(s[2]))?;
                    }
                }
                Field::Euler2d(_) => unreachable!("2D field on a 1D domain"),
            }
        }
        (Domain::TwoD { grid, .. }, _) => {
            writeln!(
                w,
                "# density nx={} ny={} x0={} x1={} y0={} y1={} t={}",
                grid.nx,
                grid.ny,
                num(grid.x0),
                num(grid.x1),
                num(grid.y0),
                num(grid.y1),
                num(sol.t)
            )?;
            let rho = sol.density();
            for row in rho.chunks(grid.nx) {
                let line: Vec<String> = row.iter().map(|r| num(*r)).collect();
                writeln!(w, "{}", line.join(","))?;
            }
        }
    }
    Ok(())
}

pub fn write_convergence<W: Write>(mut w: W, rows: &[ConvergenceRow]) -> io::Result<()> {
    writeln!(w, "inv_dx,error,order")?;
    for r in rows {
        writeln!(w, "{},{},{}", r.inv_dx, num(r.error), r.order.map(num).unwrap_or_default())?;
    }
    Ok(())
}

pub fn write_adr<W: Write>(mut w: W, pts: &[AdrPoint]) -> io::Result<()> {
    writeln!(w, "phi,re,im")?;
    for p in pts {
        writeln!(w, "{},{},{}", num(p.phi), num(p.re), num(p.im))?;
    }
    Ok(())
}

pub fn write_error_profile<W: Write>(mut w: W, x: &[f64], value: &[f64], abs_error: &[f64]) -> io::Result<()> {
    writeln!(w, "x,value,abs_error")?;
    for ((x, v), e) in x.iter().zip(value).zip(abs_error) {
        writeln!(w, "{},{},{}", num(*x), num(*v), num(*e))?;
    }
    Ok(())
}

pub fn write_timing<W: Write>(mut w: W, rows: &[TimingRow]) -> io::Result<()> {
    writeln!(w, "scheme,wall_seconds,steps,seconds_per_stage,speedup_percent")?;
    for r in rows {
        writeln!(w, "{},{},{},{},{}", r.scheme, num(r.wall_seconds), r.steps, num(r.seconds_per_stage), num(r.speedup_percent))?;
    }
    Ok(())
}

/// Everything needed to reproduce and audit one run.
#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata<'a> {
    pub version: &'static str,
    pub positivity_variant: &'static str,
    pub threads: usize,
    pub problem: &'a ProblemSpec,
    pub report: &'a RunReport,
}

impl<'a> RunMetadata<'a> {
    pub fn new(problem: &'a ProblemSpec, report: &'a RunReport) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            positivity_variant: "per-face flux blending toward Lax-Friedrichs",
            threads: report.threads,
            problem,
            report,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("metadata always serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::convergence_rows;
    use crate::problems::preset;

    #[test]
    fn numbers_round_trip() {
        for x in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(num(x).parse::<f64>().unwrap().to_bits(), x.to_bits());
        }
        assert_eq!(num(f64::NAN), "nan");
    }

    #[test]
    fn one_d_layout() {
        let spec = preset("sod").unwrap().with_cells(4);
        let sol = Solution { t: 0.0, domain: spec.domain.clone(), field: Field::Euler1d(vec![[1.0, 0.0, 1.0]; 4]) };
        let mut buf = Vec::new();
        write_solution(&mut buf, &sol).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "x,rho,u,p");
        assert!(lines[1].starts_with("-3.7500000000000000e0,"));
    }

    #[test]
    fn two_d_layout_marks_solid() {
        let spec = preset("shock-diffraction").unwrap().with_cells_2d(13, 11);
        let Domain::TwoD { grid, .. } = spec.domain else { panic!() };
        let field = (0..11)
            .flat_map(|j| (0..13).map(move |i| (i, j)))
            .map(|(i, j)| if grid.is_solid(i, j) { [f64::NAN; 4] } else { [1.0; 4] })
            .collect();
        let sol = Solution { t: 0.5, domain: spec.domain.clone(), field: Field::Euler2d(field) };
        let mut buf = Vec::new();
        write_solution(&mut buf, &sol).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# density nx=13 ny=11"));
        assert_eq!(lines.len(), 12);
        assert!(lines[1].starts_with("nan,"));
        assert!(lines[11].starts_with("1.0000000000000000e0,"));
    }

    #[test]
    fn convergence_csv_leaves_first_order_blank() {
        let mut buf = Vec::new();
        write_convergence(&mut buf, &convergence_rows(&[20, 40], &[1.0, 0.5])).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "20,1.0000000000000000e0,");
        assert!(text.lines().nth(2).unwrap().ends_with(",1.0000000000000000e0"));
    }
}
