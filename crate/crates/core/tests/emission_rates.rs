use std::f64::consts::PI;

use paramag_loss::absorption::{sigma_md, CrossSectionInputs};
use paramag_loss::emission::{
    a_md, bundled_emission_table, extract_moment, extract_table, ghz_equivalent_rate,
    parse_emission_table, photon_dos,
};
use paramag_loss::lineshape::LineshapeSpec;
use proptest::prelude::*;

const C: f64 = 299_792_458.0;
const ALPHA: f64 = 7.297_352_569_3e-3;
const A0: f64 = 5.291_772_109_03e-11;

fn omega_of_nm(nm: f64) -> f64 {
    2.0 * PI * C / (nm * 1e-9)
}

/// `m_sq = A c² / (α³ a₀² Ω³)` at n_r = 1, written out by hand.
fn oracle_m_sq(a: f64, nm: f64) -> f64 {
    a * C * C / (ALPHA.powi(3) * A0 * A0 * omega_of_nm(nm).powi(3))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn forward_rates_for_rare_earth_rows() {
    let er = a_md(omega_of_nm(1276.0), 0.3135, 1.0).unwrap();
    assert!(rel(er, 12.21) < 0.01, "{er}");
    let gd = a_md(omega_of_nm(307.0), 0.0108, 1.0).unwrap();
    assert!(rel(gd, 30.24) < 0.01, "{gd}");
    assert_eq!(a_md(omega_of_nm(700.0), 0.0, 1.0).unwrap(), 0.0);
}

#[test]
fn extraction_matches_oracle_and_table() {
    // (label, nm, rate, value in the printed table)
    let rows = [
        ("Gd", 307.0, 30.24, 0.0108),
        ("Sm", 477.0, 7.14, 0.0096),
        ("Eu", 700.0, 24.63, 0.1044),
        ("Er", 1276.0, 12.21, 0.3135),
        ("Dy", 1550.0, 6.21, 0.2858),
    ];
    for (label, nm, a, printed) in rows {
        let m = extract_moment(a, nm * 1e-9, 1.0).unwrap();
        assert!(rel(m, oracle_m_sq(a, nm)) < 1e-9, "{label}");
        assert!(rel(m, printed) < 0.02, "{label}: {m} vs {printed}");
    }
    assert!(rel(extract_moment(12.21, 1276e-9, 1.0).unwrap(), 0.3134) < 1e-3);
    // 0.00961 is a rounded figure; the formula gives 0.009576.
    assert!(rel(extract_moment(7.14, 477e-9, 1.0).unwrap(), 0.00961) < 5e-3);
    assert_eq!(extract_moment(0.0, 500e-9, 1.0).unwrap(), 0.0);
}

#[test]
fn bundled_table_extracts_all_rows() {
    let lines = extract_table(&bundled_emission_table()).unwrap();
    let labels: Vec<_> = lines.iter().map(|l| l.label.as_str()).collect();
    assert_eq!(labels, ["Gd", "Sm", "Eu", "Er", "Dy"]);
    for l in &lines {
        assert_eq!(l.n_r, 1.0);
        assert!((l.m_abs() * l.m_abs() - l.m_sq).abs() < 1e-15);
    }
    // Printed optical frequencies, THz.
    for (l, thz) in lines.iter().zip([977.0, 628.0, 428.0, 235.0, 193.0]) {
        assert!((l.freq_thz() - thz).abs() < 1.0, "{}", l.label);
    }
}

#[test]
fn malformed_tables_name_the_row() {
    let err = parse_emission_table(r#"[{"label": "Xx", "lambda_nm": "oops", "a_md_hz": 1}]"#)
        .unwrap_err()
        .to_string();
    assert!(err.contains("Xx"), "{err}");
    let recs = parse_emission_table(r#"[{"label": "Yy", "lambda_nm": -5, "a_md_hz": 1}]"#).unwrap();
    let err = extract_table(&recs).unwrap_err().to_string();
    assert!(err.contains("Yy") && err.contains("lambda_nm"), "{err}");
    assert!(parse_emission_table("[]").unwrap().is_empty());
}

#[test]
fn photon_density_of_states() {
    let w = 2.0 * PI * 977e12;
    let oracle = w * w / (C.powi(3) * PI * PI);
    let got = photon_dos(w, 1.0).unwrap();
    assert!(rel(got, oracle) < 1e-12);
    assert!(rel(got, 1.417e5) < 1e-3, "{got}");
    assert!(rel(photon_dos(w, 2.0).unwrap(), 8.0 * got) < 1e-12);
}

#[test]
fn microwave_rate_is_negligible() {
    let omega = 2.0 * PI * 11.45e9;
    let rate = ghz_equivalent_rate(omega, 1.968, 1.0).unwrap();
    let oracle = ALPHA.powi(3) * A0 * A0 * omega.powi(3) * 1.968 / (C * C);
    assert!(rel(rate, oracle) < 1e-9);
    assert!(rel(rate, 8.87e-12) < 1e-3, "{rate}");
    // Under one photon per thousand years.
    assert!(rate * 3.156e7 * 1e3 < 1.0);

    let optical = ghz_equivalent_rate(2.0 * PI * 235e12, 1.968, 1.0).unwrap();
    let ratio = optical / rate;
    assert!(rel(ratio, (235e12f64 / 11.45e9).powi(3)) < 1e-12);
    assert!(rel(ratio, 8.6e12) < 0.01);
}

#[test]
fn emission_equals_absorption_times_mode_density() {
    // A = ∫ (c/n_r) σ(ω) ρ(ω) dω for a line with γ ≪ Ω.
    let omega = omega_of_nm(1276.0);
    let m_sq = 0.3135;
    for n_r in [1.0, 1.5] {
        let gamma = 1e-8 * omega;
        let shape = LineshapeSpec::Lorentzian { gamma };
        // ω = Ω + (γ/2) tan θ puts the samples where the line has weight.
        let t_max = (2e4f64).atan();
        let n = 200_000;
        let h = 2.0 * t_max / n as f64;
        let integrand = |t: f64| {
            let w = omega + 0.5 * gamma * t.tan();
            let jac = 0.5 * gamma / (t.cos() * t.cos());
            let inputs = CrossSectionInputs::new(w, omega, m_sq, shape).with_index(n_r);
            C / n_r * sigma_md(&inputs).unwrap() * photon_dos(w, n_r).unwrap() * jac
        };
        let mut sum = 0.5 * (integrand(-t_max) + integrand(t_max));
        for k in 1..n {
            sum += integrand(-t_max + k as f64 * h);
        }
        let integral = sum * h;
        let a = a_md(omega, m_sq, n_r).unwrap();
        assert!(rel(integral, a) < 1e-3, "n_r={n_r}: {integral} vs {a}");
    }
}

proptest! {
    #[test]
    fn extraction_inverts_rate(nm in 200.0f64..3000.0, m_sq in 1e-6f64..10.0, n_r in 1.0f64..3.0) {
        let omega = omega_of_nm(nm);
        let a = a_md(omega, m_sq, n_r).unwrap();
        let back = extract_moment(a, 2.0 * PI * C / omega, n_r).unwrap();
        prop_assert!(rel(back, m_sq) < 1e-12);
    }

    #[test]
    fn rate_scales_as_cube(omega in 1e9f64..1e16, m_sq in 1e-6f64..10.0) {
        let r = a_md(2.0 * omega, m_sq, 1.0).unwrap() / a_md(omega, m_sq, 1.0).unwrap();
        prop_assert!((r - 8.0).abs() < 8e-12);
    }
}
