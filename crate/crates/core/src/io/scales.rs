//! Physical scales and the conversion to dimensionless variables.

use crate::error::{Error, Result};
use crate::solver::{ModelConfig, Problem};
use crate::transport::SideKind;

/// Boltzmann constant in J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Characteristic length `x0` (m), mass `m0` (kg), temperature `θ0` (K),
/// density `ρ0` (kg/m³) and reference diameter (m).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhysicalScales {
    pub x0: f64,
    pub m0: f64,
    pub theta0: f64,
    pub rho0: f64,
    pub d_ref: f64,
}

impl PhysicalScales {
    /// Argon at 273 K between plates 1 mm apart, with density `rho0`.
    pub fn argon(rho0: f64) -> Self {
        PhysicalScales { x0: 1e-3, m0: 6.63e-26, theta0: 273.0, rho0, d_ref: 3.63e-10 }
    }

    pub fn validate(&self) -> Result<()> {
        for (key, v) in [
            ("scales.x0", self.x0),
            ("scales.m0", self.m0),
            ("scales.theta0", self.theta0),
            ("scales.rho0", self.rho0),
            ("scales.d_ref", self.d_ref),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::ConfigKey { key: key.into(), reason: format!("{v} must be positive") });
            }
        }
        Ok(())
    }

    /// `u0 = √(k_B θ0 / m0)` in m/s.
    pub fn u0(&self) -> f64 {
        (BOLTZMANN * self.theta0 / self.m0).sqrt()
    }

    /// Hard-sphere kernel scale `√2 u0 π d²`.
    pub fn b0(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.u0() * std::f64::consts::PI * self.d_ref * self.d_ref
    }

    /// Time scale `x0 / u0` in s.
    pub fn t0(&self) -> f64 {
        self.x0 / self.u0()
    }
}

/// `Kn = m0 / (√2 π ρ0 d² x0)`.
pub fn compute_knudsen(scales: &PhysicalScales) -> f64 {
    scales.m0 / (std::f64::consts::SQRT_2 * std::f64::consts::PI * scales.rho0 * scales.d_ref.powi(2) * scales.x0)
}

/// Converts a configuration given in SI units (m, s, m/s, K, kg/m³) into
/// dimensionless form. The kernel constant and Knudsen number are left as
/// they are.
pub fn nondimensionalize(config: &ModelConfig, scales: &PhysicalScales) -> Result<ModelConfig> {
    scales.validate()?;
    let (u0, t0) = (scales.u0(), scales.t0());
    let mut out = config.clone();
    out.dt = config.dt / t0;
    out.t_end = config.t_end / t0;
    out.output_interval = config.output_interval / t0;
    match &mut out.problem {
        Problem::Homogeneous { theta0, heating } => {
            *theta0 /= scales.theta0;
            // ε Δ_v f carries units of velocity² per time.
            *heating *= t0 / (u0 * u0);
        }
        Problem::Inhomogeneous(d) => {
            d.lx /= scales.x0;
            d.ly /= scales.x0;
            d.initial.rho /= scales.rho0;
            d.initial.u = d.initial.u.map(|u| u / u0);
            d.initial.theta /= scales.theta0;
            d.center.u_bar = d.center.u_bar.map(|u| u / u0);
            d.center.t_bar /= scales.theta0;
            for side in [&mut d.boundary.x_lo, &mut d.boundary.x_hi, &mut d.boundary.y_lo, &mut d.boundary.y_hi] {
                if let SideKind::DiffusiveWall { u_w, theta_w } = side {
                    *u_w = u_w.map(|u| u / u0);
                    *theta_w /= scales.theta0;
                }
            }
        }
    }
    Ok(out)
}
