//! Absorption cross sections, absorption coefficients and loss tangents.

use std::f64::consts::PI;

use crate::constants::{BOHR_RADIUS, FINE_STRUCTURE, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::lineshape::{temperature_factor, LineshapeSpec};

/// Inputs of the magnetic-dipole cross section at one probe frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSectionInputs {
    /// Probe angular frequency [rad/s].
    pub omega: f64,
    /// Transition angular frequency [rad/s].
    pub omega_if: f64,
    /// `|ξ_B·M_IF|²`, or its unpolarized average.
    pub coupling_sq: f64,
    pub n_r: f64,
    pub lineshape: LineshapeSpec,
    /// Applies the thermal weight `w(T)` when set.
    pub temperature: Option<f64>,
}

impl CrossSectionInputs {
    pub fn new(omega: f64, omega_if: f64, coupling_sq: f64, lineshape: LineshapeSpec) -> Self {
        Self {
            omega,
            omega_if,
            coupling_sq,
            n_r: 1.0,
            lineshape,
            temperature: None,
        }
    }

    pub fn with_index(mut self, n_r: f64) -> Self {
        self.n_r = n_r;
        self
    }

    pub fn with_temperature(mut self, temp: f64) -> Self {
        self.temperature = Some(temp);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::invalid(format!(
                "omega must be positive, got {:e}",
                self.omega
            )));
        }
        if !(self.omega_if > 0.0 && self.omega_if.is_finite()) {
            return Err(Error::invalid(format!(
                "omega_if must be positive, got {:e}",
                self.omega_if
            )));
        }
        if !(self.coupling_sq >= 0.0 && self.coupling_sq.is_finite()) {
            return Err(Error::invalid(format!(
                "coupling_sq must be non-negative, got {:e}",
                self.coupling_sq
            )));
        }
        check_index(self.n_r)?;
        self.lineshape.validate()
    }
}

pub(crate) fn check_index(n_r: f64) -> Result<()> {
    if n_r >= 1.0 && n_r.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "refractive index must be >= 1, got {n_r}"
        )))
    }
}

fn broadened(lineshape: &LineshapeSpec, detuning: f64) -> Result<f64> {
    match lineshape {
        LineshapeSpec::Delta => Err(Error::DeltaKindUnsupported),
        shape => shape.evaluate(detuning),
    }
}

/// Magnetic-dipole absorption cross section [m²]:
/// `σ = n_r π² α³ a₀² |M|² ω g(ω - Ω_IF)`.
///
/// `ω` is the probe frequency, not `Ω_IF`; it cancels against the prefactor
/// of [`loss_tangent`].
pub fn sigma_md(inputs: &CrossSectionInputs) -> Result<f64> {
    inputs.validate()?;
    let shape = broadened(&inputs.lineshape, inputs.omega - inputs.omega_if)?;
    let prefactor = inputs.n_r * PI * PI * FINE_STRUCTURE.powi(3) * BOHR_RADIUS * BOHR_RADIUS;
    let thermal = match inputs.temperature {
        Some(t) => temperature_factor(inputs.omega_if, t)?,
        None => 1.0,
    };
    Ok(prefactor * inputs.coupling_sq * inputs.omega * shape * thermal)
}

/// Projected electric-dipole length `|ξ·r_IF|` [m].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdDipole {
    pub r_if_proj: f64,
}

impl EdDipole {
    pub fn new(r_if_proj: f64) -> Result<Self> {
        if !(r_if_proj >= 0.0 && r_if_proj.is_finite()) {
            return Err(Error::NegativeInput {
                name: "r_if_proj",
                value: r_if_proj,
            });
        }
        Ok(Self { r_if_proj })
    }
}

/// Electric-dipole cross section [m²]:
/// `σ = (4π²α/n_r) |ξ·r_IF|² Ω_IF g(ω - Ω_IF)`.
pub fn sigma_ed(
    omega: f64,
    omega_if: f64,
    ed: EdDipole,
    n_r: f64,
    lineshape: &LineshapeSpec,
) -> Result<f64> {
    // Reuse the magnetic-dipole validation for the shared inputs.
    CrossSectionInputs::new(omega, omega_if, 0.0, *lineshape)
        .with_index(n_r)
        .validate()?;
    let ed = EdDipole::new(ed.r_if_proj)?;
    let shape = broadened(lineshape, omega - omega_if)?;
    Ok(4.0 * PI * PI * FINE_STRUCTURE / n_r * ed.r_if_proj * ed.r_if_proj * omega_if * shape)
}

fn check_nonneg(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::NegativeInput { name, value })
    }
}

/// `a = N_def σ` [m⁻¹], with the density in m⁻³.
pub fn absorption_coefficient(n_def: f64, sigma: f64) -> Result<f64> {
    check_nonneg("n_def", n_def)?;
    check_nonneg("sigma", sigma)?;
    Ok(n_def * sigma)
}

/// `I(z) = I(0) exp(-a z)`.
pub fn intensity_profile(i0: f64, a: f64, z: f64) -> Result<f64> {
    check_nonneg("i0", i0)?;
    check_nonneg("a", a)?;
    check_nonneg("z", z)?;
    Ok(i0 * (-a * z).exp())
}

/// `tan δ = c a / (n_r ω)`.
pub fn loss_tangent(a: f64, omega: f64, n_r: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!(
            "omega must be positive, got {omega:e}"
        )));
    }
    check_index(n_r)?;
    check_nonneg("a", a)?;
    Ok(SPEED_OF_LIGHT / (n_r * omega) * a)
}

/// Loss tangent of a single line at density `n_def` [m⁻³]: cross section,
/// then absorption coefficient, then loss tangent.
pub fn line_loss_tangent(inputs: &CrossSectionInputs, n_def: f64) -> Result<f64> {
    let sigma = sigma_md(inputs)?;
    let a = absorption_coefficient(n_def, sigma)?;
    loss_tangent(a, inputs.omega, inputs.n_r)
}
