//! CSV output of macroscopic fields.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::scales::PhysicalScales;
use crate::error::Result;
use crate::macrostate::{macro_from_state, MacroState};
use crate::transport::GridField;

const FIELDS: &str = "rho,u1,u2,u3,theta,sigma11,sigma12,sigma13,sigma22,sigma23,q1,q2,q3";

/// Unit system of written values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutputUnits {
    Dimensionless,
    /// SI units recovered from these scales.
    Physical(PhysicalScales),
}

struct Factors {
    t: f64,
    x: f64,
    rho: f64,
    u: f64,
    theta: f64,
    sigma: f64,
    q: f64,
}

impl OutputUnits {
    fn factors(&self) -> Factors {
        match self {
            OutputUnits::Dimensionless => Factors { t: 1.0, x: 1.0, rho: 1.0, u: 1.0, theta: 1.0, sigma: 1.0, q: 1.0 },
            OutputUnits::Physical(s) => {
                let u0 = s.u0();
                Factors {
                    t: s.t0(),
                    x: s.x0,
                    rho: s.rho0,
                    u: u0,
                    theta: s.theta0,
                    sigma: s.rho0 * u0 * u0,
                    q: s.rho0 * u0 * u0 * u0,
                }
            }
        }
    }
}

fn num(v: f64) -> String {
    format!("{v:.16e}")
}

fn macro_columns(m: &MacroState<f64>, f: &Factors) -> String {
    let s = m.sigma;
    [
        m.rho * f.rho,
        m.u[0] * f.u,
        m.u[1] * f.u,
        m.u[2] * f.u,
        m.theta * f.theta,
        s[0][0] * f.sigma,
        s[0][1] * f.sigma,
        s[0][2] * f.sigma,
        s[1][1] * f.sigma,
        s[1][2] * f.sigma,
        m.q[0] * f.q,
        m.q[1] * f.q,
        m.q[2] * f.q,
    ]
    .map(num)
    .join(",")
}

/// Header line for a grid of dimension `dims`, or for a homogeneous series
/// when `dims == 0`.
pub fn csv_header(dims: usize) -> String {
    match dims {
        0 => format!("t,{FIELDS}"),
        1 => format!("t,x,{FIELDS}"),
        _ => format!("t,x,y,{FIELDS}"),
    }
}

/// One row per cell, preceded by the header.
pub fn write_grid_csv<W: Write>(mut w: W, grid: &GridField<f64>, time: f64, units: &OutputUnits) -> Result<()> {
    let f = units.factors();
    writeln!(w, "{}", csv_header(grid.dims))?;
    for (i, j) in grid.cells() {
        let m = macro_from_state(&grid.state(i, j))?;
        let (x, y) = grid.cell_center(i, j);
        if grid.dims == 1 {
            writeln!(w, "{},{},{}", num(time * f.t), num(x * f.x), macro_columns(&m, &f))?;
        } else {
            writeln!(w, "{},{},{},{}", num(time * f.t), num(x * f.x), num(y * f.x), macro_columns(&m, &f))?;
        }
    }
    Ok(())
}

/// One row per recorded time.
pub fn write_series_csv<W: Write>(mut w: W, times: &[f64], states: &[MacroState<f64>], units: &OutputUnits) -> Result<()> {
    let f = units.factors();
    writeln!(w, "{}", csv_header(0))?;
    for (t, m) in times.iter().zip(states) {
        writeln!(w, "{},{}", num(t * f.t), macro_columns(m, &f))?;
    }
    Ok(())
}

/// Writes a grid snapshot to `path`.
pub fn emit_snapshot(grid: &GridField<f64>, time: f64, path: &Path, units: &OutputUnits) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_grid_csv(&mut w, grid, time, units)?;
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermite::ExpansionCenter;

    #[test]
    fn grid_rows_and_units() {
        let mut g = GridField::<f64>::new(2, 4, 4, 0.25, 0.25, 3, ExpansionCenter::standard()).unwrap();
        for (i, j) in g.cells().collect::<Vec<_>>() {
            g.cell_mut(i, j)[0] = 1.0;
        }
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &g, 0.5, &OutputUnits::Dimensionless).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 17);
        assert_eq!(lines[0].split(',').count(), 16);
        let theta: f64 = lines[1].split(',').nth(7).unwrap().parse().unwrap();
        assert_eq!(theta, 1.0);

        let units = OutputUnits::Physical(PhysicalScales::argon(1.132e-4));
        let mut buf = Vec::new();
        write_grid_csv(&mut buf, &g, 0.0, &units).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let theta: f64 = text.lines().nth(1).unwrap().split(',').nth(7).unwrap().parse().unwrap();
        assert!((theta - 273.0).abs() < 1e-12);
    }

    #[test]
    fn values_round_trip_through_text() {
        let v = std::f64::consts::PI / 7.0;
        assert_eq!(num(v).parse::<f64>().unwrap(), v);
    }
}
