//! Physical constants (CODATA 2018) and unit conversions used at the
//! library boundary.
//!
//! Everything inside the crate works in SI units with angular frequencies
//! in rad/s. Cyclic frequencies in GHz/MHz only appear in file formats and
//! on the command line.

use std::f64::consts::PI;

/// A fixed set of physical constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum [m/s].
    pub c: f64,
    /// Fine-structure constant.
    pub alpha: f64,
    /// Bohr radius [m].
    pub a0: f64,
    /// Reduced Planck constant [J s].
    pub hbar: f64,
    /// Boltzmann constant [J/K].
    pub k_b: f64,
    /// Bohr magneton [J/T].
    pub mu_b: f64,
}

impl PhysicalConstants {
    pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
        c: SPEED_OF_LIGHT,
        alpha: FINE_STRUCTURE,
        a0: BOHR_RADIUS,
        hbar: HBAR,
        k_b: BOLTZMANN,
        mu_b: BOHR_MAGNETON,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
pub const FINE_STRUCTURE: f64 = 7.297_352_569_3e-3;
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOLTZMANN: f64 = 1.380_649e-23;
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

/// Cubic centimetres per cubic metre.
pub const CM3_PER_M3: f64 = 1.0e6;

pub fn ghz_to_angular(f_ghz: f64) -> f64 {
    2.0 * PI * f_ghz * 1.0e9
}

pub fn angular_to_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1.0e9)
}

pub fn mhz_to_angular(f_mhz: f64) -> f64 {
    2.0 * PI * f_mhz * 1.0e6
}

/// Angular frequency of light with vacuum wavelength `lambda` [m].
pub fn wavelength_to_angular(lambda: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / lambda
}

/// Number density in cm⁻³ to m⁻³.
pub fn per_cm3_to_per_m3(n: f64) -> f64 {
    n * CM3_PER_M3
}
