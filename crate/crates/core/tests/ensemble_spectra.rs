use std::f64::consts::PI;

use paramag_loss::ensemble::{
    bundled_database, parse_database, species_loss, sweep, uniform_grid, Conditions, DefectSpecies,
};
use paramag_loss::lineshape::PowerModel;
use proptest::prelude::*;

const C: f64 = 299_792_458.0;
const ALPHA: f64 = 7.297_352_569_3e-3;
const A0: f64 = 5.291_772_109_03e-11;

/// Sum over lines of c N_k π² α³ a₀² |M_k|² L(ω - Ω_k), with γ = 2π·27 MHz.
fn oracle(f_hz: f64, lines: &[(f64, f64, f64)]) -> f64 {
    let gamma = 2.0 * PI * 27e6;
    lines
        .iter()
        .map(|&(n_cm3, coupling, f_line)| {
            let d = 2.0 * PI * (f_hz - f_line);
            let l = (gamma / 2.0) / PI / (d * d + gamma * gamma / 4.0);
            C * n_cm3 * 1e6 * PI * PI * ALPHA.powi(3) * A0 * A0 * coupling * l
        })
        .sum()
}

const V_LINES: [(f64, f64); 8] = [
    (2.029, 8.68),
    (2.045, 8.83),
    (2.055, 9.02),
    (2.057, 9.25),
    (2.052, 9.49),
    (2.035, 9.78),
    (2.017, 10.08),
    (1.994, 10.40),
];

fn loss(name: &str, f_ghz: f64) -> f64 {
    let db = bundled_database();
    let sp = db.iter().find(|s| s.name == name).unwrap();
    species_loss(sp, 2.0 * PI * f_ghz * 1e9, &Conditions::default()).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn species_losses_at_qubit_frequency() {
    let f = 4.5e9;
    let cr = oracle(f, &[(1e17, 1.984f64.powi(2) / 2.0, 11.45e9)]);
    let fe = oracle(f, &[(1e17, 4.0 * 2.02f64.powi(2) / 3.0, 12.03e9)]);
    let v_lines: Vec<_> = V_LINES
        .iter()
        .map(|&(g, fg)| (1e16 / 8.0, g * g / 2.0, fg * 1e9))
        .collect();
    let v = oracle(f, &v_lines);

    assert!(rel(loss("Cr", 4.5), cr) < 1e-9);
    assert!(rel(loss("Fe", 4.5), fe) < 1e-9);
    assert!(rel(loss("V", 4.5), v) < 1e-9);

    assert!(rel(cr, 9.0e-9) < 0.05, "{cr}");
    assert!(rel(fe, 2.1e-8) < 0.1, "{fe}");
    assert!(rel(v, 1.9e-9) < 0.1, "{v}");
    assert!(fe > cr && cr > v);
}

fn local_maxima(xs: &[f64], ys: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    (1..ys.len() - 1)
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] > ys[i + 1] && xs[i] >= lo && xs[i] <= hi)
        .map(|i| xs[i])
        .collect()
}

#[test]
fn vanadium_resolves_eight_lines() {
    let spec = sweep(&bundled_database(), 1.0, 15.0, 2801, &Conditions::default()).unwrap();
    let v = spec.species("V").unwrap();
    let peaks = local_maxima(&spec.freqs_ghz, v, 8.5, 10.5);
    assert_eq!(peaks.len(), 8, "{peaks:?}");
    for (p, (_, f)) in peaks.iter().zip(V_LINES) {
        assert!((p - f).abs() <= 0.005 + 1e-9, "{p} vs {f}");
    }
}

fn argmax(v: &[f64]) -> usize {
    (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap()
}

fn nearest(grid: &[f64], f: f64) -> usize {
    (0..grid.len())
        .min_by(|&a, &b| (grid[a] - f).abs().total_cmp(&(grid[b] - f).abs()))
        .unwrap()
}

#[test]
fn peaks_land_on_nearest_grid_points() {
    let spec = sweep(&bundled_database(), 1.0, 15.0, 1401, &Conditions::default()).unwrap();
    for (name, f) in [("Cr", 11.45), ("Fe", 12.03)] {
        let v = spec.species(name).unwrap();
        assert_eq!(argmax(v), nearest(&spec.freqs_ghz, f), "{name}");
    }
}

#[test]
fn total_is_exact_sum_of_disjoint_databases() {
    let db = bundled_database();
    let cond = Conditions::default();
    let cr_fe = sweep(&db[..2], 1.0, 15.0, 301, &cond).unwrap();
    let cr = sweep(&db[..1], 1.0, 15.0, 301, &cond).unwrap();
    let fe = sweep(&db[1..2], 1.0, 15.0, 301, &cond).unwrap();
    for i in 0..cr_fe.len() {
        assert_eq!(cr_fe.total[i], cr.total[i] + fe.total[i]);
    }
    let all = sweep(&db, 1.0, 15.0, 301, &cond).unwrap();
    for i in 0..all.len() {
        let sum: f64 = all.per_species.iter().map(|c| c.values[i]).sum();
        assert_eq!(all.total[i], sum);
    }
}

#[test]
fn sweeps_are_reproducible() {
    let db = bundled_database();
    let cond = Conditions {
        n_r: 3.1,
        temperature: Some(0.05),
        power: Some(PowerModel::new(2.0).unwrap()),
    };
    assert_eq!(
        sweep(&db, 1.0, 15.0, 500, &cond).unwrap(),
        sweep(&db, 1.0, 15.0, 500, &cond).unwrap()
    );
}

#[test]
fn grid_endpoints_are_exact() {
    let g = uniform_grid(1.0, 15.0, 1401).unwrap();
    assert_eq!(g[0], 1.0);
    assert_eq!(g[1400], 15.0);
    assert!((g[350] - 4.5).abs() < 1e-12);
    assert!(uniform_grid(1.0, 15.0, 1).is_err());
    assert!(uniform_grid(5.0, 1.0, 10).is_err());
}

#[test]
fn database_errors_name_species_and_field() {
    let cases = [
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":-1,"lines":[{"g":2,"freq_ghz":9}]}]"#,
            "concentration_per_cm3",
        ),
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":1,"lines":[]}]"#,
            "lines",
        ),
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":1,"lines":[{"g":2,"freq_ghz":9,"weight":0.5}]}]"#,
            "lines",
        ),
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":1,"linewidth_mhz":0,"lines":[{"g":2,"freq_ghz":9}]}]"#,
            "linewidth_mhz",
        ),
        (
            r#"[{"name":"Ti","two_s":4,"concentration_per_cm3":1,"lines":[{"g":2,"freq_ghz":9}]}]"#,
            "transition",
        ),
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":1}]"#,
            "lines",
        ),
        (
            r#"[{"name":"Ti","two_s":3,"concentration_per_cm3":1,"color":"red","lines":[{"g":2,"freq_ghz":9}]}]"#,
            "color",
        ),
        (
            r#"[{"name":"T,i","two_s":3,"concentration_per_cm3":1,"lines":[{"g":2,"freq_ghz":9}]}]"#,
            "name",
        ),
    ];
    for (json, field) in cases {
        let err = parse_database(json).unwrap_err().to_string();
        assert!(err.contains("Ti") || err.contains("T,i"), "{err}");
        assert!(err.contains(field), "expected {field} in: {err}");
    }
    let dup = r#"[{"name":"Ti","two_s":1,"concentration_per_cm3":1,"lines":[{"g":2,"freq_ghz":9}]},
                 {"name":"Ti","two_s":1,"concentration_per_cm3":1,"lines":[{"g":2,"freq_ghz":9}]}]"#;
    assert!(parse_database(dup)
        .unwrap_err()
        .to_string()
        .contains("duplicate"));
}

#[test]
fn omitted_weights_split_equally_and_angular_convention_is_honored() {
    let json = r#"[{"name":"X","two_s":1,"concentration_per_cm3":1e16,
        "linewidth_mhz":100,"linewidth_convention":"angular",
        "lines":[{"g":2,"freq_ghz":5},{"g":2,"freq_ghz":6}]}]"#;
    let db = parse_database(json).unwrap();
    assert_eq!(db[0].lines[0].weight, 0.5);
    assert!(db[0].has_equal_split());
    assert!((db[0].gamma - 100e6).abs() < 1e-6);
    assert!(rel(bundled_database()[0].gamma, 2.0 * PI * 27e6) < 1e-15);
}

fn rescaled(sp: &DefectSpecies, k: f64) -> DefectSpecies {
    let mut out = sp.clone();
    out.n_def *= k;
    for l in &mut out.lines {
        l.weight /= k;
    }
    out
}

proptest! {
    #[test]
    fn density_weight_tradeoff_is_invisible(f in 1.0f64..15.0, idx in 0usize..3) {
        let db = bundled_database();
        let cond = Conditions::default();
        let omega = 2.0 * PI * f * 1e9;
        let a = species_loss(&db[idx], omega, &cond).unwrap();
        let b = species_loss(&rescaled(&db[idx], 2.0), omega, &cond).unwrap();
        prop_assert!(rel(b, a) < 1e-12);
    }

    #[test]
    fn index_does_not_change_the_spectrum(f in 1.0f64..15.0, n_r in 1.0f64..4.0) {
        let db = bundled_database();
        let omega = 2.0 * PI * f * 1e9;
        for sp in &db {
            let a = species_loss(sp, omega, &Conditions::default()).unwrap();
            let b = species_loss(sp, omega, &Conditions { n_r, ..Conditions::default() }).unwrap();
            prop_assert!(rel(b, a) < 1e-12);
        }
    }

    #[test]
    fn loss_is_linear_in_density(f in 1.0f64..15.0, k in 0.01f64..100.0) {
        let db = bundled_database();
        let omega = 2.0 * PI * f * 1e9;
        let mut sp = db[2].clone();
        let a = species_loss(&sp, omega, &Conditions::default()).unwrap();
        sp.n_def *= k;
        let b = species_loss(&sp, omega, &Conditions::default()).unwrap();
        prop_assert!(rel(b, k * a) < 1e-12);
    }
}
