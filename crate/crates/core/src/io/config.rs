//! Line-oriented `key = value` run configuration with dotted section keys.
//!
//! `#` starts a comment. Every key must be known; a bad or missing value is
//! reported with the key that caused it. See the README for the key list.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::scales::{compute_knudsen, nondimensionalize, PhysicalScales};
use super::snapshot::OutputUnits;
use crate::coeff::{KernelSpec, DEFAULT_DROP_TOL};
use crate::error::{Error, Result};
use crate::hermite::ExpansionCenter;
use crate::solver::{DomainConfig, InitialField, ModelConfig, Problem, Splitting};
use crate::transport::{BoundarySpec, SideKind};

/// What a run integrates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    Homogeneous,
    Heating,
    Haff,
    Inhomogeneous,
}

/// Parsed configuration, already dimensionless.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub driver: Driver,
    pub model: ModelConfig,
    pub scales: Option<PhysicalScales>,
    pub output_units: OutputUnits,
    pub cache: Option<PathBuf>,
}

const SIDES: [&str; 4] = ["x_lo", "x_hi", "y_lo", "y_hi"];

fn known_keys() -> Vec<String> {
    let mut keys: Vec<String> = [
        "problem",
        "units",
        "kernel.type",
        "kernel.varpi",
        "kernel.c",
        "kernel.e",
        "model.m0",
        "model.m",
        "model.kn",
        "model.nu1",
        "model.nu2",
        "model.prandtl",
        "model.drop_tol",
        "time.dt",
        "time.t_end",
        "time.cfl",
        "time.splitting",
        "output.interval",
        "output.units",
        "heating.epsilon",
        "initial.rho",
        "initial.u1",
        "initial.u2",
        "initial.u3",
        "initial.theta",
        "initial.rho_amplitude",
        "initial.rho_kx",
        "initial.rho_ky",
        "initial.theta_amplitude",
        "initial.theta_kx",
        "initial.theta_ky",
        "grid.dims",
        "grid.nx",
        "grid.ny",
        "grid.lx",
        "grid.ly",
        "center.u1",
        "center.u2",
        "center.u3",
        "center.theta",
        "scales.x0",
        "scales.m0",
        "scales.theta0",
        "scales.rho0",
        "scales.d_ref",
        "cache.path",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for side in SIDES {
        keys.push(format!("boundary.{side}"));
        for f in ["u1", "u2", "u3", "theta"] {
            keys.push(format!("boundary.{side}.{f}"));
        }
    }
    keys
}

struct Table {
    values: HashMap<String, String>,
}

fn key_error(key: &str, reason: impl Into<String>) -> Error {
    Error::ConfigKey { key: key.to_string(), reason: reason.into() }
}

impl Table {
    fn parse(text: &str) -> Result<Self> {
        let known = known_keys();
        let mut values = HashMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| key_error(&format!("line {}", n + 1), format!("expected `key = value`, got `{line}`")))?;
            let (k, v) = (k.trim(), v.trim());
            if !known.iter().any(|x| x == k) {
                return Err(key_error(k, "unknown key"));
            }
            if v.is_empty() {
                return Err(key_error(k, "empty value"));
            }
            if values.insert(k.to_string(), v.to_string()).is_some() {
                return Err(key_error(k, "given more than once"));
            }
        }
        Ok(Table { values })
    }

    fn str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn f64(&self, key: &str) -> Result<Option<f64>> {
        self.str(key)
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| key_error(key, format!("`{s}` is not a finite number")))
            })
            .transpose()
    }

    fn f64_or(&self, key: &str, default: f64) -> Result<f64> {
        Ok(self.f64(key)?.unwrap_or(default))
    }

    fn f64_req(&self, key: &str) -> Result<f64> {
        self.f64(key)?.ok_or_else(|| key_error(key, "required"))
    }

    fn usize(&self, key: &str) -> Result<Option<usize>> {
        self.str(key)
            .map(|s| s.parse::<usize>().map_err(|_| key_error(key, format!("`{s}` is not a non-negative integer"))))
            .transpose()
    }

    fn usize_req(&self, key: &str) -> Result<usize> {
        self.usize(key)?.ok_or_else(|| key_error(key, "required"))
    }

    fn has_prefix(&self, prefix: &str) -> Option<&str> {
        self.values.keys().find(|k| k.starts_with(prefix)).map(String::as_str)
    }
}

fn parse_kernel(t: &Table) -> Result<KernelSpec> {
    let e = t.f64_req("kernel.e")?;
    let base = match t.str("kernel.type") {
        None | Some("vhs") => None,
        Some("maxwell") => Some(KernelSpec::maxwell(e)),
        Some("hard_sphere") => Some(KernelSpec::hard_sphere(e)),
        Some(other) => return Err(key_error("kernel.type", format!("`{other}` is not maxwell, hard_sphere or vhs"))),
    };
    let varpi = match (t.f64("kernel.varpi")?, base) {
        (Some(v), _) => v,
        (None, Some(b)) => b.varpi,
        (None, None) => return Err(key_error("kernel.varpi", "required unless kernel.type is maxwell or hard_sphere")),
    };
    let c = match (t.f64("kernel.c")?, base) {
        (Some(v), _) => v,
        (None, Some(b)) if b.varpi == varpi => b.c_const,
        _ => return Err(key_error("kernel.c", "required for this kernel")),
    };
    KernelSpec::new(varpi, c, e).map_err(|err| key_error("kernel", err.to_string()))
}

fn parse_scales(t: &Table) -> Result<Option<PhysicalScales>> {
    if t.has_prefix("scales.").is_none() {
        return Ok(None);
    }
    let s = PhysicalScales {
        x0: t.f64_req("scales.x0")?,
        m0: t.f64_req("scales.m0")?,
        theta0: t.f64_req("scales.theta0")?,
        rho0: t.f64_req("scales.rho0")?,
        d_ref: t.f64_req("scales.d_ref")?,
    };
    s.validate()?;
    Ok(Some(s))
}

fn parse_side(t: &Table, side: &str, theta_default: f64) -> Result<SideKind> {
    let key = format!("boundary.{side}");
    match t.str(&key) {
        None | Some("periodic") => {
            if let Some(k) = t.has_prefix(&format!("{key}.")) {
                return Err(key_error(k, "only walls take a velocity or temperature"));
            }
            Ok(SideKind::Periodic)
        }
        Some("wall") => Ok(SideKind::DiffusiveWall {
            u_w: [
                t.f64_or(&format!("{key}.u1"), 0.0)?,
                t.f64_or(&format!("{key}.u2"), 0.0)?,
                t.f64_or(&format!("{key}.u3"), 0.0)?,
            ],
            theta_w: t.f64_or(&format!("{key}.theta"), theta_default)?,
        }),
        Some(other) => Err(key_error(&key, format!("`{other}` is not periodic or wall"))),
    }
}

fn parse_modes(t: &Table, kx: &str, ky: &str) -> Result<[u32; 2]> {
    let get = |k: &str| -> Result<u32> {
        Ok(t.usize(k)?.unwrap_or(1).try_into().map_err(|_| key_error(k, "too large"))?)
    };
    Ok([get(kx)?, get(ky)?])
}

/// Parses configuration text. Relative cache paths resolve against `base`.
pub fn parse_config(text: &str, base: Option<&Path>) -> Result<RunConfig> {
    let t = Table::parse(text)?;
    let driver = match t.str("problem") {
        Some("homogeneous") => Driver::Homogeneous,
        Some("heating") => Driver::Heating,
        Some("haff") => Driver::Haff,
        Some("inhomogeneous") => Driver::Inhomogeneous,
        Some(other) => return Err(key_error("problem", format!("`{other}` is not homogeneous, heating, haff or inhomogeneous"))),
        None => return Err(key_error("problem", "required")),
    };
    let physical = match t.str("units") {
        None | Some("dimensionless") => false,
        Some("physical") => true,
        Some(other) => return Err(key_error("units", format!("`{other}` is not dimensionless or physical"))),
    };
    let scales = parse_scales(&t)?;
    if physical && scales.is_none() {
        return Err(key_error("scales", "physical units need scales.x0, scales.m0, scales.theta0, scales.rho0 and scales.d_ref"));
    }
    let theta_unit = if physical { scales.map_or(1.0, |s| s.theta0) } else { 1.0 };

    let kernel = parse_kernel(&t)?;
    let m = t.usize_req("model.m")?;
    let m0 = t.usize("model.m0")?.unwrap_or(m);
    let kn = match (t.f64("model.kn")?, physical, scales) {
        (Some(v), _, _) => v,
        (None, true, Some(s)) => compute_knudsen(&s),
        (None, _, _) => 1.0,
    };
    let splitting = match t.str("time.splitting") {
        None | Some("lie") => Splitting::Lie,
        Some("strang") => Splitting::Strang,
        Some(other) => return Err(key_error("time.splitting", format!("`{other}` is not lie or strang"))),
    };
    let heating = t.f64_or("heating.epsilon", 0.0)?;
    if heating != 0.0 && !matches!(driver, Driver::Heating | Driver::Homogeneous) {
        return Err(key_error("heating.epsilon", "only homogeneous runs accept a heating source"));
    }
    if driver == Driver::Heating && heating <= 0.0 {
        return Err(key_error("heating.epsilon", "heating runs need a positive value"));
    }

    let problem = if driver == Driver::Inhomogeneous {
        let dims = t.usize("grid.dims")?.unwrap_or(1);
        if !(dims == 1 || dims == 2) {
            return Err(key_error("grid.dims", format!("{dims} is not 1 or 2")));
        }
        let nx = t.usize_req("grid.nx")?;
        let ny = if dims == 2 { t.usize_req("grid.ny")? } else { 1 };
        let lx = t.f64_req("grid.lx")?;
        let ly = if dims == 2 { t.f64_or("grid.ly", lx)? } else { lx };
        let boundary = BoundarySpec {
            x_lo: parse_side(&t, "x_lo", theta_unit)?,
            x_hi: parse_side(&t, "x_hi", theta_unit)?,
            y_lo: parse_side(&t, "y_lo", theta_unit)?,
            y_hi: parse_side(&t, "y_hi", theta_unit)?,
        };
        boundary.validate().map_err(|e| key_error("boundary", e.to_string()))?;
        let center = ExpansionCenter {
            u_bar: [t.f64_or("center.u1", 0.0)?, t.f64_or("center.u2", 0.0)?, t.f64_or("center.u3", 0.0)?],
            t_bar: t.f64_or("center.theta", theta_unit)?,
        };
        center.validate().map_err(|e| key_error("center.theta", e.to_string()))?;
        let initial = InitialField {
            rho: t.f64_req("initial.rho")?,
            u: [t.f64_or("initial.u1", 0.0)?, t.f64_or("initial.u2", 0.0)?, t.f64_or("initial.u3", 0.0)?],
            theta: t.f64_or("initial.theta", theta_unit)?,
            rho_amplitude: t.f64_or("initial.rho_amplitude", 0.0)?,
            rho_modes: parse_modes(&t, "initial.rho_kx", "initial.rho_ky")?,
            theta_amplitude: t.f64_or("initial.theta_amplitude", 0.0)?,
            theta_modes: parse_modes(&t, "initial.theta_kx", "initial.theta_ky")?,
        };
        Problem::Inhomogeneous(DomainConfig { dims, nx, ny, lx, ly, boundary, center, initial })
    } else {
        if let Some(k) = t.has_prefix("grid.").or_else(|| t.has_prefix("boundary.")).or_else(|| t.has_prefix("center.")) {
            return Err(key_error(k, "only inhomogeneous runs take a grid, boundary or convection center"));
        }
        Problem::Homogeneous { theta0: t.f64_or("initial.theta", theta_unit)?, heating }
    };

    let mut model = ModelConfig {
        kernel,
        kn,
        m0,
        m,
        nu1: t.f64("model.nu1")?,
        nu2: t.f64("model.nu2")?,
        prandtl: t.f64_or("model.prandtl", 2.0 / 3.0)?,
        dt: t.f64_or("time.dt", 0.0)?,
        t_end: t.f64_req("time.t_end")?,
        cfl: t.f64_or("time.cfl", 0.3)?,
        splitting,
        output_interval: t.f64_or("output.interval", 0.0)?,
        drop_tol: t.f64_or("model.drop_tol", DEFAULT_DROP_TOL)?,
        problem,
    };
    if physical {
        model = nondimensionalize(&model, &scales.expect("checked above"))?;
    }
    if driver == Driver::Haff && model.kernel.varpi != 0.5 {
        return Err(key_error("kernel.varpi", "free-cooling runs use hard spheres (0.5)"));
    }
    if !(model.drop_tol >= 0.0) {
        return Err(key_error("model.drop_tol", "must be non-negative"));
    }
    model.validate()?;

    let output_units = match t.str("output.units") {
        None | Some("dimensionless") => OutputUnits::Dimensionless,
        Some("physical") => OutputUnits::Physical(scales.ok_or_else(|| key_error("output.units", "physical output needs scales"))?),
        Some(other) => return Err(key_error("output.units", format!("`{other}` is not dimensionless or physical"))),
    };
    let cache = t.str("cache.path").map(|p| match base {
        Some(b) if Path::new(p).is_relative() => b.join(p),
        _ => PathBuf::from(p),
    });
    Ok(RunConfig { driver, model, scales, output_units, cache })
}

/// Reads and parses a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, path.parent())
}
