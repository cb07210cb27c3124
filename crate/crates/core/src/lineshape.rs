//! Line-broadening profiles and the temperature/power modifiers applied to
//! them.
//!
//! All profiles are normalized spectral densities in angular frequency, so
//! their unit is seconds and they integrate to one over detuning in rad/s.
//! Widths follow one convention throughout: `gamma` is the Lorentzian full
//! width at half maximum and `sigma` the Gaussian standard deviation, both
//! in rad/s.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{BOLTZMANN, HBAR};
use crate::error::{Error, Result};

/// Broadening model substituted for the delta function of a sharp line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LineshapeSpec {
    Delta,
    Lorentzian { gamma: f64 },
    Gaussian { sigma: f64 },
    Voigt { gamma: f64, sigma: f64 },
}

impl LineshapeSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LineshapeSpec::Delta => Ok(()),
            LineshapeSpec::Lorentzian { gamma } => check_width(gamma),
            LineshapeSpec::Gaussian { sigma } => check_width(sigma),
            LineshapeSpec::Voigt { gamma, sigma } => check_width(gamma).and(check_width(sigma)),
        }
    }

    /// Spectral density at `detuning = ω - Ω_IF`.
    pub fn evaluate(&self, detuning: f64) -> Result<f64> {
        match *self {
            LineshapeSpec::Delta => Err(Error::DeltaKindUnsupported),
            LineshapeSpec::Lorentzian { gamma } => lorentzian(detuning, gamma),
            LineshapeSpec::Gaussian { sigma } => gaussian(detuning, sigma),
            LineshapeSpec::Voigt { gamma, sigma } => voigt(detuning, gamma, sigma),
        }
    }

    /// Applies power broadening to the homogeneous (Lorentzian) width.
    /// Gaussian and delta shapes are returned unchanged.
    pub fn power_broadened(self, pm: PowerModel) -> Result<Self> {
        Ok(match self {
            LineshapeSpec::Lorentzian { gamma } => LineshapeSpec::Lorentzian {
                gamma: power_broadened_gamma(gamma, pm)?,
            },
            LineshapeSpec::Voigt { gamma, sigma } => LineshapeSpec::Voigt {
                gamma: power_broadened_gamma(gamma, pm)?,
                sigma,
            },
            other => other,
        })
    }
}

fn check_width(w: f64) -> Result<()> {
    if w > 0.0 && w.is_finite() {
        Ok(())
    } else {
        Err(Error::NonPositiveWidth(w))
    }
}

/// Lorentzian with FWHM `gamma`: `(1/π)(γ/2)/(Δ² + (γ/2)²)`.
pub fn lorentzian(detuning: f64, gamma: f64) -> Result<f64> {
    check_width(gamma)?;
    let hw = 0.5 * gamma;
    Ok(hw / (PI * (detuning * detuning + hw * hw)))
}

/// Gaussian with standard deviation `sigma`.
pub fn gaussian(detuning: f64, sigma: f64) -> Result<f64> {
    check_width(sigma)?;
    let u = detuning / sigma;
    Ok((-0.5 * u * u).exp() / (sigma * (2.0 * PI).sqrt()))
}

/// Voigt profile: convolution of a Lorentzian (FWHM `gamma`) with a Gaussian
/// (standard deviation `sigma`), via `Re w(z) / (σ√(2π))`.
pub fn voigt(detuning: f64, gamma: f64, sigma: f64) -> Result<f64> {
    check_width(gamma)?;
    check_width(sigma)?;
    let scale = sigma * std::f64::consts::SQRT_2;
    let z = Complex64::new(detuning / scale, 0.5 * gamma / scale);
    Ok(faddeeva(z).re / (sigma * (2.0 * PI).sqrt()))
}

const WEIDEMAN_TERMS: usize = 32;
const CONTINUED_FRACTION_RADIUS: f64 = 6.0;
const CONTINUED_FRACTION_DEPTH: usize = 40;

struct Weideman {
    l: f64,
    coeffs: [f64; WEIDEMAN_TERMS],
}

fn weideman() -> &'static Weideman {
    static TABLE: OnceLock<Weideman> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n = WEIDEMAN_TERMS;
        let m = 2 * n;
        let l = (n as f64 / std::f64::consts::SQRT_2).sqrt();
        // f(t) = exp(-t²)(L² + t²) sampled at t = L tan(kπ/2M), k = -M+1..M-1;
        // the coefficients are its cosine transform.
        let samples: Vec<(f64, f64)> = ((-(m as i64) + 1)..(m as i64))
            .map(|k| {
                let theta = k as f64 * PI / m as f64;
                let t = l * (0.5 * theta).tan();
                (k as f64, (-t * t).exp() * (l * l + t * t))
            })
            .collect();
        let mut coeffs = [0.0; WEIDEMAN_TERMS];
        for (idx, c) in coeffs.iter_mut().enumerate() {
            let order = (idx + 1) as f64;
            let sum: f64 = samples
                .iter()
                .map(|&(k, f)| f * (PI * order * k / m as f64).cos())
                .sum();
            *c = sum / (2 * m) as f64;
        }
        Weideman { l, coeffs }
    })
}

/// Faddeeva function `w(z) = exp(-z²) erfc(-iz)` for `Im z >= 0`.
///
/// Uses Weideman's rational expansion near the origin and the Laplace
/// continued fraction for `|z| > 6`. `|w|` is accurate to about 1e-12
/// relative; the real part is accurate to 1e-9 relative for `Im z >= 1e-2`.
/// Closer to the real axis the real part keeps an absolute error near 1e-14,
/// which only matters deep in the Gaussian tail.
pub fn faddeeva(z: Complex64) -> Complex64 {
    debug_assert!(z.im >= 0.0, "faddeeva is only implemented for Im z >= 0");
    let i = Complex64::new(0.0, 1.0);
    let inv_sqrt_pi = 1.0 / PI.sqrt();

    if z.norm() > CONTINUED_FRACTION_RADIUS {
        let mut r = Complex64::new(0.0, 0.0);
        for k in (1..=CONTINUED_FRACTION_DEPTH).rev() {
            r = (0.5 * k as f64) / (z - r);
        }
        return i * inv_sqrt_pi / (z - r);
    }

    let tab = weideman();
    let lz = Complex64::new(tab.l, 0.0);
    let denom = lz - i * z;
    let big_z = (lz + i * z) / denom;
    // Horner, highest order first: Σ a_n Z^(n-1)
    let mut p = Complex64::new(0.0, 0.0);
    for &a in tab.coeffs.iter().rev() {
        p = p * big_z + a;
    }
    2.0 * p / (denom * denom) + inv_sqrt_pi / denom
}

/// Nonnegative ratio `P/P_c` of drive power to critical power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerModel {
    pub p_over_pc: f64,
}

impl PowerModel {
    pub fn new(p_over_pc: f64) -> Result<Self> {
        if !(p_over_pc >= 0.0 && p_over_pc.is_finite()) {
            return Err(Error::NegativeInput {
                name: "P/P_c",
                value: p_over_pc,
            });
        }
        Ok(Self { p_over_pc })
    }
}

/// `γ(P) = γ₀ √(1 + P/P_c)`.
pub fn power_broadened_gamma(gamma0: f64, pm: PowerModel) -> Result<f64> {
    check_width(gamma0)?;
    let pm = PowerModel::new(pm.p_over_pc)?;
    Ok(gamma0 * (1.0 + pm.p_over_pc).sqrt())
}

fn check_temperature(temp: f64) -> Result<()> {
    if temp >= 0.0 {
        Ok(())
    } else {
        Err(Error::NegativeTemperature(temp))
    }
}

fn check_transition(omega_if: f64) -> Result<()> {
    if omega_if > 0.0 && omega_if.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "transition frequency must be positive, got {omega_if:e}"
        )))
    }
}

/// `ħΩ/k_B T`, infinite at `T = 0`.
fn reduced_energy(omega_if: f64, temp: f64) -> f64 {
    if temp == 0.0 {
        f64::INFINITY
    } else {
        HBAR * omega_if / (BOLTZMANN * temp)
    }
}

/// Thermal weight `w(T) = (1 + exp(-ħΩ/k_B T))⁻²`, equal to 1 at `T = 0` and
/// tending to 1/4 as `T → ∞`.
pub fn temperature_factor(omega_if: f64, temp: f64) -> Result<f64> {
    check_temperature(temp)?;
    check_transition(omega_if)?;
    let x = reduced_energy(omega_if, temp);
    let d = 1.0 + (-x).exp();
    Ok(1.0 / (d * d))
}

/// Resonant two-level-system weight `tanh(ħΩ/2k_B T)`.
pub fn tanh_factor(omega_if: f64, temp: f64) -> Result<f64> {
    check_temperature(temp)?;
    check_transition(omega_if)?;
    Ok((0.5 * reduced_energy(omega_if, temp)).tanh())
}
