//! Loss-tangent spectra of defect ensembles.
//!
//! A species is one paramagnetic impurity with a total concentration and
//! one or more lines (hyperfine components share the population through
//! their weights). Each ±m Kramers pair counts as a single line.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::absorption::{check_index, line_loss_tangent, CrossSectionInputs};
use crate::constants::{ghz_to_angular, mhz_to_angular, per_cm3_to_per_m3};
use crate::error::{Error, Result};
use crate::lineshape::{LineshapeSpec, PowerModel};
use crate::spin::{pure_spin_coupling, SpinQuantum};

pub const BUNDLED_DATABASE: &str = include_str!("../data/default_species.json");

/// Default homogeneous linewidth, 27 MHz cyclic.
pub const DEFAULT_LINEWIDTH_MHZ: f64 = 27.0;

const WEIGHT_SUM_TOL: f64 = 1e-9;

/// How `linewidth_mhz` in a database file maps to the angular FWHM.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinewidthConvention {
    /// `γ = 2π × value × 10⁶` rad/s.
    #[default]
    #[serde(rename = "cyclic_times_2pi")]
    CyclicTimes2Pi,
    /// `γ = value × 10⁶` rad/s, e.g. an inverse lifetime in µs⁻¹.
    Angular,
}

impl LinewidthConvention {
    pub fn to_angular(self, mhz: f64) -> f64 {
        match self {
            LinewidthConvention::CyclicTimes2Pi => mhz_to_angular(mhz),
            LinewidthConvention::Angular => mhz * 1e6,
        }
    }

    pub fn from_angular(self, gamma: f64) -> f64 {
        match self {
            LinewidthConvention::CyclicTimes2Pi => gamma / mhz_to_angular(1.0),
            LinewidthConvention::Angular => gamma / 1e6,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LinewidthConvention::CyclicTimes2Pi => "cyclic_times_2pi",
            LinewidthConvention::Angular => "angular",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectLine {
    pub g_e: f64,
    /// [rad/s]
    pub omega_if: f64,
    /// Fraction of the species population on this line.
    pub weight: f64,
}

/// Sublevel pair `m_i → m_f` driven by the field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub m_i: f64,
    pub m_f: f64,
}

impl Transition {
    /// `±3/2 → ±1/2` for S = 3/2, `±1/2 → ±3/2` for S = 5/2, and the
    /// obvious choice for S = 1/2 and S = 1.
    pub fn default_for(spin: SpinQuantum) -> Option<Self> {
        let (m_i, m_f) = match spin.two_s() {
            1 => (0.5, -0.5),
            2 => (1.0, 0.0),
            3 => (1.5, 0.5),
            5 => (0.5, 1.5),
            _ => return None,
        };
        Some(Self { m_i, m_f })
    }

    fn validate(&self, spin: SpinQuantum) -> std::result::Result<(), String> {
        spin.index_of(self.m_i).map_err(|e| e.to_string())?;
        spin.index_of(self.m_f).map_err(|e| e.to_string())?;
        if ((self.m_i - self.m_f).abs() - 1.0).abs() > 1e-9 {
            return Err(format!(
                "|m_i - m_f| must be 1, got ({}, {})",
                self.m_i, self.m_f
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectSpecies {
    pub name: String,
    pub spin: SpinQuantum,
    /// Total spin concentration [m⁻³].
    pub n_def: f64,
    /// Homogeneous FWHM [rad/s].
    pub gamma: f64,
    pub lines: Vec<DefectLine>,
    pub transition: Transition,
}

impl DefectSpecies {
    /// Builds a species and checks every invariant, including that the line
    /// weights sum to one.
    pub fn new(
        name: impl Into<String>,
        spin: SpinQuantum,
        n_def: f64,
        gamma: f64,
        lines: Vec<DefectLine>,
        transition: Transition,
    ) -> Result<Self> {
        let sp = Self {
            name: name.into(),
            spin,
            n_def,
            gamma,
            lines,
            transition,
        };
        sp.validate()?;
        let sum: f64 = sp.lines.iter().map(|l| l.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(sp.field_error("lines", format!("weights sum to {sum}, expected 1")));
        }
        Ok(sp)
    }

    fn field_error(&self, field: &str, message: String) -> Error {
        Error::Database {
            species: self.name.clone(),
            field: field.to_string(),
            message,
        }
    }

    /// Per-field checks. The weight normalization is enforced by
    /// [`DefectSpecies::new`] and the file loader only.
    pub fn validate(&self) -> Result<()> {
        // Names become CSV column headers.
        if self.name.is_empty()
            || self.name.contains([',', '"', '\n', '\r'])
            || self.name == "freq_ghz"
            || self.name == "total"
        {
            return Err(self.field_error("name", "must be non-empty, free of commas, quotes and newlines, and not a reserved column name".into()));
        }
        if !(self.n_def >= 0.0 && self.n_def.is_finite()) {
            return Err(self.field_error(
                "concentration_per_cm3",
                format!("must be >= 0, got {:e}", self.n_def),
            ));
        }
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(self.field_error(
                "linewidth_mhz",
                format!("must be positive, got {:e} rad/s", self.gamma),
            ));
        }
        if self.lines.is_empty() {
            return Err(self.field_error("lines", "must not be empty".into()));
        }
        for (k, line) in self.lines.iter().enumerate() {
            if !(line.weight > 0.0 && line.weight <= 1.0) {
                return Err(self.field_error(
                    &format!("lines[{k}].weight"),
                    format!("must be in (0, 1], got {}", line.weight),
                ));
            }
            if !(line.g_e > 0.0 && line.g_e.is_finite()) {
                return Err(self.field_error(
                    &format!("lines[{k}].g"),
                    format!("must be positive, got {}", line.g_e),
                ));
            }
            if !(line.omega_if > 0.0 && line.omega_if.is_finite()) {
                return Err(
                    self.field_error(&format!("lines[{k}].freq_ghz"), "must be positive".into())
                );
            }
        }
        self.transition
            .validate(self.spin)
            .map_err(|m| self.field_error("transition", m))
    }

    /// Unpolarized `|M|²` of every line, from the pure-spin matrix element
    /// of the configured sublevel pair.
    pub fn line_couplings(&self) -> Result<Vec<f64>> {
        self.lines
            .iter()
            .map(|l| pure_spin_coupling(self.spin, self.transition.m_i, self.transition.m_f, l.g_e))
            .collect()
    }

    /// True when the population is split evenly over more than one line.
    pub fn has_equal_split(&self) -> bool {
        self.lines.len() > 1 && self.lines.iter().all(|l| l.weight == self.lines[0].weight)
    }
}

/// Evaluation conditions shared by every species in a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conditions {
    pub n_r: f64,
    pub temperature: Option<f64>,
    pub power: Option<PowerModel>,
}

impl Default for Conditions {
    fn default() -> Self {
        Self {
            n_r: 1.0,
            temperature: None,
            power: None,
        }
    }
}

impl Conditions {
    pub fn validate(&self) -> Result<()> {
        check_index(self.n_r)?;
        if let Some(t) = self.temperature {
            if t.is_nan() || t < 0.0 {
                return Err(Error::NegativeTemperature(t));
            }
        }
        if let Some(p) = self.power {
            PowerModel::new(p.p_over_pc)?;
        }
        Ok(())
    }
}

/// A species with its couplings and broadened lineshape resolved once.
struct Prepared<'a> {
    species: &'a DefectSpecies,
    couplings: Vec<f64>,
    lineshape: LineshapeSpec,
}

impl<'a> Prepared<'a> {
    fn new(species: &'a DefectSpecies, cond: &Conditions) -> Result<Self> {
        species.validate()?;
        let mut lineshape = LineshapeSpec::Lorentzian {
            gamma: species.gamma,
        };
        if let Some(pm) = cond.power {
            lineshape = lineshape.power_broadened(pm)?;
        }
        Ok(Self {
            species,
            couplings: species.line_couplings()?,
            lineshape,
        })
    }

    fn loss(&self, omega: f64, cond: &Conditions) -> Result<f64> {
        let mut total = 0.0;
        for (line, &coupling) in self.species.lines.iter().zip(&self.couplings) {
            let inputs = CrossSectionInputs {
                omega,
                omega_if: line.omega_if,
                coupling_sq: coupling,
                n_r: cond.n_r,
                lineshape: self.lineshape,
                temperature: cond.temperature,
            };
            total += line_loss_tangent(&inputs, line.weight * self.species.n_def)?;
        }
        Ok(total)
    }
}

/// Loss tangent contributed by one species at probe frequency `omega`
/// [rad/s], summed over its lines in listed order.
pub fn species_loss(sp: &DefectSpecies, omega: f64, cond: &Conditions) -> Result<f64> {
    cond.validate()?;
    Prepared::new(sp, cond)?.loss(omega, cond)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesCurve {
    pub name: String,
    pub values: Vec<f64>,
}

/// Loss-tangent spectrum on a GHz grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub freqs_ghz: Vec<f64>,
    pub per_species: Vec<SpeciesCurve>,
    pub total: Vec<f64>,
}

impl Spectrum {
    pub fn species(&self, name: &str) -> Option<&[f64]> {
        self.per_species
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    pub fn len(&self) -> usize {
        self.freqs_ghz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs_ghz.is_empty()
    }
}

/// Uniform grid from `fmin` to `fmax` inclusive.
pub fn uniform_grid(fmin: f64, fmax: f64, points: usize) -> Result<Vec<f64>> {
    if !(fmin.is_finite() && fmax.is_finite() && fmin < fmax) {
        return Err(Error::InvalidRange(format!(
            "need fmin < fmax, got [{fmin}, {fmax}]"
        )));
    }
    if points < 2 {
        return Err(Error::InvalidRange(format!(
            "need at least 2 points, got {points}"
        )));
    }
    let span = fmax - fmin;
    let last = (points - 1) as f64;
    let mut grid: Vec<f64> = (0..points)
        .map(|i| fmin + span * (i as f64 / last))
        .collect();
    grid[points - 1] = fmax;
    Ok(grid)
}

/// Evaluates every species on a uniform GHz grid.
///
/// `total[i]` is accumulated from zero over species in database order, so
/// the spectrum of a concatenated database is exactly the sum of the
/// separate spectra.
pub fn sweep(
    db: &[DefectSpecies],
    fmin_ghz: f64,
    fmax_ghz: f64,
    points: usize,
    cond: &Conditions,
) -> Result<Spectrum> {
    let freqs_ghz = uniform_grid(fmin_ghz, fmax_ghz, points)?;
    if fmin_ghz <= 0.0 {
        return Err(Error::InvalidRange(format!(
            "frequencies must be positive, got fmin = {fmin_ghz}"
        )));
    }
    cond.validate()?;

    let prepared = db
        .iter()
        .map(|sp| Prepared::new(sp, cond))
        .collect::<Result<Vec<_>>>()?;

    let mut per_species = Vec::with_capacity(db.len());
    for p in &prepared {
        let values = freqs_ghz
            .iter()
            .map(|&f| p.loss(ghz_to_angular(f), cond))
            .collect::<Result<Vec<_>>>()?;
        per_species.push(SpeciesCurve {
            name: p.species.name.clone(),
            values,
        });
    }

    let mut total = vec![0.0; freqs_ghz.len()];
    for curve in &per_species {
        for (t, v) in total.iter_mut().zip(&curve.values) {
            *t += v;
        }
    }

    Ok(Spectrum {
        freqs_ghz,
        per_species,
        total,
    })
}

/// One species as written in a database file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpeciesRecord {
    pub name: String,
    pub two_s: u32,
    pub concentration_per_cm3: f64,
    #[serde(default = "default_linewidth")]
    pub linewidth_mhz: f64,
    #[serde(default)]
    pub linewidth_convention: LinewidthConvention,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<[f64; 2]>,
    pub lines: Vec<LineRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineRecord {
    pub g: f64,
    pub freq_ghz: f64,
    /// Omitted weights split the population equally.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

fn default_linewidth() -> f64 {
    DEFAULT_LINEWIDTH_MHZ
}

impl SpeciesRecord {
    pub fn to_species(&self) -> Result<DefectSpecies> {
        let err = |field: &str, message: String| Error::Database {
            species: self.name.clone(),
            field: field.to_string(),
            message,
        };
        let spin = SpinQuantum::new(self.two_s).map_err(|e| err("two_s", e.to_string()))?;
        let transition = match self.transition {
            Some([m_i, m_f]) => Transition { m_i, m_f },
            None => Transition::default_for(spin)
                .ok_or_else(|| err("transition", format!("required for two_s = {}", self.two_s)))?,
        };
        let given = self.lines.iter().filter(|l| l.weight.is_some()).count();
        if given != 0 && given != self.lines.len() {
            return Err(err(
                "lines",
                "give a weight for every line or for none".into(),
            ));
        }
        let equal = 1.0 / self.lines.len().max(1) as f64;
        let lines = self
            .lines
            .iter()
            .map(|l| DefectLine {
                g_e: l.g,
                omega_if: ghz_to_angular(l.freq_ghz),
                weight: l.weight.unwrap_or(equal),
            })
            .collect();
        if !(self.linewidth_mhz > 0.0 && self.linewidth_mhz.is_finite()) {
            return Err(err(
                "linewidth_mhz",
                format!("must be positive, got {}", self.linewidth_mhz),
            ));
        }
        if !(self.concentration_per_cm3 >= 0.0 && self.concentration_per_cm3.is_finite()) {
            return Err(err(
                "concentration_per_cm3",
                format!("must be >= 0, got {}", self.concentration_per_cm3),
            ));
        }
        DefectSpecies::new(
            self.name.clone(),
            spin,
            per_cm3_to_per_m3(self.concentration_per_cm3),
            self.linewidth_convention.to_angular(self.linewidth_mhz),
            lines,
            transition,
        )
    }
}

/// Parses a species database (JSON array). Errors name the offending
/// species and field.
pub fn parse_database(json: &str) -> Result<Vec<DefectSpecies>> {
    let raw: Vec<serde_json::Value> = serde_json::from_str(json)?;
    let mut out = Vec::with_capacity(raw.len());
    for (idx, v) in raw.into_iter().enumerate() {
        let name = v
            .get("name")
            .and_then(|n| n.as_str())
            .map(str::to_string)
            .unwrap_or_else(|| format!("#{idx}"));
        let record: SpeciesRecord = serde_json::from_value(v).map_err(|e| Error::Database {
            species: name.clone(),
            field: field_from_serde(&e.to_string()),
            message: e.to_string(),
        })?;
        if out.iter().any(|s: &DefectSpecies| s.name == record.name) {
            return Err(Error::Database {
                species: name,
                field: "name".into(),
                message: "duplicate species name".into(),
            });
        }
        out.push(record.to_species()?);
    }
    Ok(out)
}

fn field_from_serde(msg: &str) -> String {
    // serde messages quote the field: "missing field `lines`"
    msg.split('`').nth(1).unwrap_or("record").to_string()
}

pub fn load_database(path: &Path) -> Result<Vec<DefectSpecies>> {
    parse_database(&std::fs::read_to_string(path)?)
}

/// Cr, Fe and V in sapphire with the eight V hyperfine lines at equal weight.
pub fn bundled_database() -> Vec<DefectSpecies> {
    parse_database(BUNDLED_DATABASE).expect("bundled database is valid")
}
