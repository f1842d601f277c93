//! Quadratic collision coefficients `A_αλκ` for VHS kernels.

mod assemble;
mod closed_form;
mod oracle;
mod tensor;

pub use assemble::{assemble_tensor, DEFAULT_DROP_TOL};
pub use closed_form::{c_coeff, coeff_d, coeff_psi, gamma_coeff, gaussian_moment, sphere_moment};
pub use oracle::{oracle_a, oracle_block, OracleBlock, OracleResolution, OracleResult};
pub use tensor::{rescale_center, CollisionTensor};


use crate::error::{Error, Result};

/// VHS kernel `B = C|g|^{2(1−ϖ)}` with restitution coefficient `e`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KernelSpec {
    pub varpi: f64,
    pub c_const: f64,
    pub e: f64,
}

impl KernelSpec {
    pub fn new(varpi: f64, c_const: f64, e: f64) -> Result<Self> {
        let k = KernelSpec { varpi, c_const, e };
        k.validate()?;
        Ok(k)
    }

    /// Maxwell molecules with `C = 1/(4π)`.
    pub fn maxwell(e: f64) -> Self {
        KernelSpec { varpi: 1.0, c_const: 0.25 / std::f64::consts::PI, e }
    }

    /// Hard spheres with `C = 1/(4√2π)`.
    pub fn hard_sphere(e: f64) -> Self {
        KernelSpec { varpi: 0.5, c_const: 0.25 / (std::f64::consts::SQRT_2 * std::f64::consts::PI), e }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=1.0).contains(&self.varpi) {
            return Err(Error::Config(format!("viscosity index {} outside [0.5, 1]", self.varpi)));
        }
        if !(0.0..=1.0).contains(&self.e) {
            return Err(Error::Config(format!("restitution coefficient {} outside [0, 1]", self.e)));
        }
        if !(self.c_const > 0.0 && self.c_const.is_finite()) {
            return Err(Error::Config(format!("kernel constant {} must be positive", self.c_const)));
        }
        Ok(())
    }

    /// Exponent `2(1−ϖ)` of the relative speed.
    pub fn mu(&self) -> f64 {
        2.0 * (1.0 - self.varpi)
    }
}
