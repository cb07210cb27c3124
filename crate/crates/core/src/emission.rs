//! Spontaneous magnetic-dipole emission and the inverse problem of
//! recovering `|M_IF|²` from a measured emission rate.
//!
//! Matrix elements here are always the squared, orientation-averaged
//! quantity `m_sq`; `m_abs = √m_sq` is reported alongside it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::absorption::check_index;
use crate::constants::{wavelength_to_angular, BOHR_RADIUS, FINE_STRUCTURE, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

pub const BUNDLED_EMISSION_TABLE: &str = include_str!("../data/rare_earth_lines.json");

/// Photon density of states `n_r³ω²/(c³π²)` [s m⁻³ per rad].
pub fn photon_dos(omega: f64, n_r: f64) -> Result<f64> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid(format!(
            "omega must be non-negative, got {omega:e}"
        )));
    }
    check_index(n_r)?;
    Ok(n_r.powi(3) * omega * omega / (SPEED_OF_LIGHT.powi(3) * PI * PI))
}

fn rate_prefactor(n_r: f64) -> f64 {
    n_r.powi(3) * FINE_STRUCTURE.powi(3) * BOHR_RADIUS * BOHR_RADIUS
        / (SPEED_OF_LIGHT * SPEED_OF_LIGHT)
}

/// Magnetic-dipole spontaneous emission rate
/// `A = (n_r³ α³ a₀² / c²) Ω³ |M|²` [s⁻¹].
pub fn a_md(omega_if: f64, m_sq: f64, n_r: f64) -> Result<f64> {
    if !(omega_if > 0.0 && omega_if.is_finite()) {
        return Err(Error::invalid(format!(
            "omega_if must be positive, got {omega_if:e}"
        )));
    }
    if !(m_sq >= 0.0 && m_sq.is_finite()) {
        return Err(Error::invalid(format!(
            "m_sq must be non-negative, got {m_sq:e}"
        )));
    }
    check_index(n_r)?;
    Ok(rate_prefactor(n_r) * omega_if.powi(3) * m_sq)
}

/// Inverse of [`a_md`] for a line of vacuum wavelength `lambda_vac` [m].
pub fn extract_moment(a: f64, lambda_vac: f64, n_r: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) {
        return Err(Error::invalid(format!(
            "emission rate must be non-negative, got {a:e}"
        )));
    }
    if !(lambda_vac > 0.0 && lambda_vac.is_finite()) {
        return Err(Error::invalid(format!(
            "wavelength must be positive, got {lambda_vac:e}"
        )));
    }
    check_index(n_r)?;
    let omega = wavelength_to_angular(lambda_vac);
    Ok(a / (rate_prefactor(n_r) * omega.powi(3)))
}

/// Emission rate of a microwave line; same formula as [`a_md`]. The Ω³
/// factor makes GHz-scale rates unobservably small.
pub fn ghz_equivalent_rate(omega_if: f64, m_sq: f64, n_r: f64) -> Result<f64> {
    a_md(omega_if, m_sq, n_r)
}

/// One row of an emission-line input table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmissionRecord {
    pub label: String,
    pub lambda_nm: f64,
    pub a_md_hz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_r: Option<f64>,
}

/// A line with its extracted matrix element.
#[derive(Debug, Clone, PartialEq)]
pub struct EmissionLine {
    pub label: String,
    /// Vacuum wavelength [m].
    pub lambda_vac: f64,
    /// [rad/s]
    pub omega_if: f64,
    /// [s⁻¹]
    pub a_md: f64,
    pub n_r: f64,
    pub m_sq: f64,
}

impl EmissionLine {
    pub fn m_abs(&self) -> f64 {
        self.m_sq.sqrt()
    }

    pub fn lambda_nm(&self) -> f64 {
        self.lambda_vac * 1e9
    }

    pub fn freq_thz(&self) -> f64 {
        self.omega_if / (2.0 * PI * 1e12)
    }
}

impl EmissionRecord {
    pub fn extract(&self) -> Result<EmissionLine> {
        let err = |field: &str, message: String| Error::EmissionTable {
            label: self.label.clone(),
            field: field.to_string(),
            message,
        };
        if !(self.lambda_nm > 0.0 && self.lambda_nm.is_finite()) {
            return Err(err(
                "lambda_nm",
                format!("must be positive, got {}", self.lambda_nm),
            ));
        }
        if !(self.a_md_hz >= 0.0 && self.a_md_hz.is_finite()) {
            return Err(err(
                "a_md_hz",
                format!("must be non-negative, got {}", self.a_md_hz),
            ));
        }
        let n_r = self.n_r.unwrap_or(1.0);
        if !(n_r >= 1.0 && n_r.is_finite()) {
            return Err(err("n_r", format!("must be >= 1, got {n_r}")));
        }
        let lambda_vac = self.lambda_nm * 1e-9;
        Ok(EmissionLine {
            label: self.label.clone(),
            lambda_vac,
            omega_if: wavelength_to_angular(lambda_vac),
            a_md: self.a_md_hz,
            n_r,
            m_sq: extract_moment(self.a_md_hz, lambda_vac, n_r)?,
        })
    }
}

/// Parses a JSON array of emission records.
pub fn parse_emission_table(json: &str) -> Result<Vec<EmissionRecord>> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(json)?;
    raw.into_iter()
        .enumerate()
        .map(|(idx, v)| {
            let label = v
                .get("label")
                .and_then(|l| l.as_str())
                .map(str::to_string)
                .unwrap_or_else(|| format!("#{idx}"));
            serde_json::from_value(v).map_err(|e| Error::EmissionTable {
                label,
                field: "record".into(),
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn extract_table(records: &[EmissionRecord]) -> Result<Vec<EmissionLine>> {
    records.iter().map(EmissionRecord::extract).collect()
}

pub fn bundled_emission_table() -> Vec<EmissionRecord> {
    parse_emission_table(BUNDLED_EMISSION_TABLE).expect("bundled emission table is valid")
}
