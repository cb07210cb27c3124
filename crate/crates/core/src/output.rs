//! Deterministic text encodings of spectra and emission tables.
//!
//! Every float is written in lowercase scientific notation with nine
//! significant digits. JSON output carries the same rounded values so both
//! formats decode to identical numbers.

use std::io::{self, Write};

use serde_json::{json, Value};

use crate::emission::EmissionLine;
use crate::ensemble::{DefectSpecies, Spectrum};

/// `8.97232141e-9` style, nine significant digits.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.8e}")
}

/// Rounds to the nine significant digits that [`fmt_sci`] prints.
pub fn round_sig9(x: f64) -> f64 {
    fmt_sci(x).parse().unwrap_or(x)
}

fn rounded(v: &[f64]) -> Vec<f64> {
    v.iter().copied().map(round_sig9).collect()
}

pub fn write_spectrum_csv<W: Write>(spec: &Spectrum, mut w: W) -> io::Result<()> {
    let mut header = String::from("freq_ghz");
    for c in &spec.per_species {
        header.push(',');
        header.push_str(&c.name);
    }
    header.push_str(",total\n");
    w.write_all(header.as_bytes())?;

    let mut row = String::new();
    for i in 0..spec.len() {
        row.clear();
        row.push_str(&fmt_sci(spec.freqs_ghz[i]));
        for c in &spec.per_species {
            row.push(',');
            row.push_str(&fmt_sci(c.values[i]));
        }
        row.push(',');
        row.push_str(&fmt_sci(spec.total[i]));
        row.push('\n');
        w.write_all(row.as_bytes())?;
    }
    w.flush()
}

/// Per-species provenance attached to JSON output.
pub fn species_metadata(db: &[DefectSpecies]) -> Value {
    let items: Vec<Value> = db
        .iter()
        .map(|sp| {
            let couplings = sp.line_couplings().unwrap_or_default();
            json!({
                "name": sp.name,
                "two_s": sp.spin.two_s(),
                "transition": [sp.transition.m_i, sp.transition.m_f],
                "n_def_per_m3": sp.n_def,
                "gamma_rad_per_s": sp.gamma,
                "gamma_cyclic_mhz": sp.gamma / (2.0 * std::f64::consts::PI * 1e6),
                "weights": sp.lines.iter().map(|l| l.weight).collect::<Vec<_>>(),
                "equal_split_assumed": sp.has_equal_split(),
                "unpolarized_coupling_sq": couplings,
            })
        })
        .collect();
    Value::Array(items)
}

pub fn spectrum_json(spec: &Spectrum, metadata: Value) -> Value {
    let species: Vec<Value> = spec
        .per_species
        .iter()
        .map(|c| json!({"name": c.name, "values": rounded(&c.values)}))
        .collect();
    json!({
        "freq_ghz": rounded(&spec.freqs_ghz),
        "species": species,
        "total": rounded(&spec.total),
        "metadata": metadata,
    })
}

pub const EMISSION_CSV_HEADER: &str = "label,lambda_nm,freq_thz,a_md_hz,m_sq,m_abs\n";

pub const EMISSION_NOTE: &str = "m_sq is the orientation-averaged squared matrix element |M_IF|^2 \
recovered from the emission rate with the given n_r (default 1); m_abs = sqrt(m_sq)";

pub fn write_emission_csv<W: Write>(lines: &[EmissionLine], mut w: W) -> io::Result<()> {
    w.write_all(EMISSION_CSV_HEADER.as_bytes())?;
    for l in lines {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            l.label,
            fmt_sci(l.lambda_nm()),
            fmt_sci(l.freq_thz()),
            fmt_sci(l.a_md),
            fmt_sci(l.m_sq),
            fmt_sci(l.m_abs())
        )?;
    }
    w.flush()
}

pub fn emission_json(lines: &[EmissionLine]) -> Value {
    let rows: Vec<Value> = lines
        .iter()
        .map(|l| {
            json!({
                "label": l.label,
                "lambda_nm": round_sig9(l.lambda_nm()),
                "freq_thz": round_sig9(l.freq_thz()),
                "a_md_hz": round_sig9(l.a_md),
                "n_r": l.n_r,
                "m_sq": round_sig9(l.m_sq),
                "m_abs": round_sig9(l.m_abs()),
            })
        })
        .collect();
    json!({"lines": rows, "metadata": {"note": EMISSION_NOTE}})
}

/// Columns of equal length written as CSV with the given header names.
pub fn write_columns_csv<W: Write>(names: &[&str], cols: &[&[f64]], mut w: W) -> io::Result<()> {
    writeln!(w, "{}", names.join(","))?;
    let n = cols.first().map_or(0, |c| c.len());
    for i in 0..n {
        let row: Vec<String> = cols.iter().map(|c| fmt_sci(c[i])).collect();
        writeln!(w, "{}", row.join(","))?;
    }
    w.flush()
}

pub fn columns_json(names: &[&str], cols: &[&[f64]], metadata: Value) -> Value {
    let mut obj = serde_json::Map::new();
    for (name, col) in names.iter().zip(cols) {
        obj.insert((*name).to_string(), json!(rounded(col)));
    }
    obj.insert("metadata".into(), metadata);
    Value::Object(obj)
}
