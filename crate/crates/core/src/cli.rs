//! Command-line front end.
//!
//! Units at this boundary: GHz for frequencies, MHz for linewidths, K for
//! temperatures and cm⁻³ for concentrations. Exit codes: 0 success, 2 bad
//! input (arguments, database, emission table), 3 output not writable.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::constants::ghz_to_angular;
use crate::emission::{bundled_emission_table, extract_table, parse_emission_table};
use crate::ensemble::{
    bundled_database, load_database, species_loss, sweep, Conditions, DefectSpecies,
};
use crate::error::Error;
use crate::lineshape::{tanh_factor, temperature_factor, PowerModel};
use crate::output::{
    columns_json, emission_json, fmt_sci, round_sig9, species_metadata, spectrum_json,
    write_columns_csv, write_emission_csv, write_spectrum_csv,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_OUTPUT: i32 = 3;

const MAX_POINTS: usize = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "paramag-loss",
    version,
    about = "Magnetic-dipole loss tangents of paramagnetic defects"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Loss-tangent spectrum of every species on a uniform frequency grid.
    Sweep(SweepArgs),
    /// Loss tangent of every species at one frequency.
    Point(PointArgs),
    /// Matrix elements extracted from magnetic-dipole emission rates.
    Emission(EmissionArgs),
    /// Thermal weight w(T) and the tanh comparison model versus temperature.
    Tempcurve(TempcurveArgs),
    /// On-resonance and detuned loss versus P/P_c.
    Powercurve(PowercurveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct DbArgs {
    /// Species database (JSON). Defaults to the bundled Cr/Fe/V table.
    #[arg(long, env = "PARAMAG_LOSS_DB")]
    pub db: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    /// Refractive index of the host.
    #[arg(long, default_value_t = 1.0)]
    pub n_r: f64,
    /// Temperature [K]; omit for the T = 0 limit.
    #[arg(long, allow_negative_numbers = true)]
    pub temp_k: Option<f64>,
    /// Drive power relative to the critical power.
    #[arg(long, allow_negative_numbers = true)]
    pub p_over_pc: Option<f64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; standard output when omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub db: DbArgs,
    #[command(flatten)]
    pub cond: ConditionArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub fmin_ghz: f64,
    #[arg(long, default_value_t = 15.0, allow_negative_numbers = true)]
    pub fmax_ghz: f64,
    #[arg(long, default_value_t = 1401)]
    pub points: usize,
}

#[derive(Debug, Args)]
pub struct PointArgs {
    #[command(flatten)]
    pub db: DbArgs,
    #[command(flatten)]
    pub cond: ConditionArgs,
    #[command(flatten)]
    pub out: OutputArgs,
    #[arg(long, allow_negative_numbers = true)]
    pub freq_ghz: f64,
}

#[derive(Debug, Args)]
pub struct EmissionArgs {
    /// Emission-line table (JSON). Defaults to the bundled rare-earth lines.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TempcurveArgs {
    /// Transition frequency [GHz].
    #[arg(long, default_value_t = 11.45, allow_negative_numbers = true)]
    pub freq_ghz: f64,
    #[arg(long, default_value_t = 0.01, allow_negative_numbers = true)]
    pub tmin_k: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub tmax_k: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PowercurveArgs {
    #[command(flatten)]
    pub db: DbArgs,
    /// Species to drive; the first in the database when omitted.
    #[arg(long)]
    pub species: Option<String>,
    /// Index of the species line whose resonance is probed.
    #[arg(long, default_value_t = 0)]
    pub line: usize,
    /// Probe detuning for the second column, in units of the zero-power FWHM.
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub detuning_gamma: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub pmin: f64,
    #[arg(long, default_value_t = 100.0, allow_negative_numbers = true)]
    pub pmax: f64,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 1.0)]
    pub n_r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub temp_k: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Output(_) => EXIT_OUTPUT,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "error: {m}"),
            CliError::Output(m) => write!(f, "error: cannot write output: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Input(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

pub fn execute(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Point(a) => cmd_point(a),
        Command::Emission(a) => cmd_emission(a),
        Command::Tempcurve(a) => cmd_tempcurve(a),
        Command::Powercurve(a) => cmd_powercurve(a),
    }
}

fn load_db(args: &DbArgs) -> CliResult<Vec<DefectSpecies>> {
    match &args.db {
        Some(path) => load_database(path).map_err(|e| match e {
            Error::Io(io) => {
                CliError::Input(format!("cannot read database {}: {io}", path.display()))
            }
            other => other.into(),
        }),
        None => Ok(bundled_database()),
    }
}

fn conditions(args: &ConditionArgs) -> CliResult<Conditions> {
    let power = args.p_over_pc.map(PowerModel::new).transpose()?;
    let cond = Conditions {
        n_r: args.n_r,
        temperature: args.temp_k,
        power,
    };
    cond.validate()?;
    Ok(cond)
}

fn check_points(points: usize) -> CliResult<()> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "--points must be in [2, {MAX_POINTS}], got {points}"
        )))
    }
}

fn conditions_json(c: &Conditions) -> Value {
    json!({
        "n_r": c.n_r,
        "temp_k": c.temperature,
        "p_over_pc": c.power.map(|p| p.p_over_pc),
    })
}

/// Opens the destination before any output is produced.
fn open_output(out: &OutputArgs) -> CliResult<Box<dyn Write>> {
    match &out.output {
        Some(path) => File::create(path)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| CliError::Output(format!("{}: {e}", path.display()))),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_json(mut w: impl Write, v: &Value) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut w, v)?;
    w.write_all(b"\n")?;
    w.flush()
}

fn output_err(e: io::Error) -> CliError {
    CliError::Output(e.to_string())
}

pub fn cmd_sweep(a: &SweepArgs) -> CliResult<()> {
    check_points(a.points)?;
    let db = load_db(&a.db)?;
    let cond = conditions(&a.cond)?;
    let spec = sweep(&db, a.fmin_ghz, a.fmax_ghz, a.points, &cond)?;
    let mut w = open_output(&a.out)?;
    match a.out.format {
        Format::Csv => write_spectrum_csv(&spec, &mut w),
        Format::Json => {
            let meta = json!({
                "conditions": conditions_json(&cond),
                "species": species_metadata(&db),
            });
            write_json(&mut w, &spectrum_json(&spec, meta))
        }
    }
    .map_err(output_err)
}

pub fn cmd_point(a: &PointArgs) -> CliResult<()> {
    if !(a.freq_ghz > 0.0 && a.freq_ghz.is_finite()) {
        return Err(CliError::Input(format!(
            "--freq-ghz must be positive, got {}",
            a.freq_ghz
        )));
    }
    let db = load_db(&a.db)?;
    let cond = conditions(&a.cond)?;
    let omega = ghz_to_angular(a.freq_ghz);
    let mut values = Vec::with_capacity(db.len());
    let mut total = 0.0;
    for sp in &db {
        let v = species_loss(sp, omega, &cond)?;
        total += v;
        values.push(v);
    }

    let mut w = open_output(&a.out)?;
    match a.out.format {
        Format::Csv => {
            let mut line = format!("freq_ghz={}", fmt_sci(a.freq_ghz));
            for (sp, v) in db.iter().zip(&values) {
                line.push_str(&format!(" {}={}", sp.name, fmt_sci(*v)));
            }
            line.push_str(&format!(" total={}", fmt_sci(total)));
            line.push_str(&format!(" n_r={}", fmt_sci(cond.n_r)));
            line.push_str(&format!(
                " temp_k={} p_over_pc={}",
                cond.temperature.map_or("none".into(), fmt_sci),
                cond.power.map_or("none".into(), |p| fmt_sci(p.p_over_pc))
            ));
            let gammas: Vec<String> = db
                .iter()
                .map(|sp| format!("{}:{}", sp.name, fmt_sci(sp.gamma)))
                .collect();
            line.push_str(&format!(" gamma_rad_per_s={}", gammas.join(";")));
            let weights: Vec<String> = db
                .iter()
                .map(|sp| {
                    if sp.has_equal_split() {
                        format!("{}:equal/{}", sp.name, sp.lines.len())
                    } else {
                        let ws: Vec<String> =
                            sp.lines.iter().map(|l| l.weight.to_string()).collect();
                        format!("{}:{}", sp.name, ws.join("|"))
                    }
                })
                .collect();
            line.push_str(&format!(" weights={}\n", weights.join(";")));
            w.write_all(line.as_bytes()).and_then(|_| w.flush())
        }
        Format::Json => {
            let species: Vec<Value> = db
                .iter()
                .zip(&values)
                .map(|(sp, v)| json!({"name": sp.name, "value": round_sig9(*v)}))
                .collect();
            let doc = json!({
                "freq_ghz": round_sig9(a.freq_ghz),
                "species": species,
                "total": round_sig9(total),
                "metadata": {
                    "conditions": conditions_json(&cond),
                    "species": species_metadata(&db),
                },
            });
            write_json(&mut w, &doc)
        }
    }
    .map_err(output_err)
}

pub fn cmd_emission(a: &EmissionArgs) -> CliResult<()> {
    let records = match &a.input {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
            parse_emission_table(&text)?
        }
        None => bundled_emission_table(),
    };
    let lines = extract_table(&records)?;
    let mut w = open_output(&a.out)?;
    match a.out.format {
        Format::Csv => write_emission_csv(&lines, &mut w),
        Format::Json => write_json(&mut w, &emission_json(&lines)),
    }
    .map_err(output_err)
}

fn linear_grid(lo: f64, hi: f64, points: usize, what: &str) -> CliResult<Vec<f64>> {
    crate::ensemble::uniform_grid(lo, hi, points)
        .map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub fn cmd_tempcurve(a: &TempcurveArgs) -> CliResult<()> {
    check_points(a.points)?;
    if a.freq_ghz.is_nan() || a.freq_ghz <= 0.0 {
        return Err(CliError::Input(format!(
            "--freq-ghz must be positive, got {}",
            a.freq_ghz
        )));
    }
    if a.tmin_k < 0.0 {
        return Err(CliError::Input(format!(
            "--tmin-k must be >= 0, got {}",
            a.tmin_k
        )));
    }
    let temps = linear_grid(a.tmin_k, a.tmax_k, a.points, "temperature range")?;
    let omega = ghz_to_angular(a.freq_ghz);
    let w: Vec<f64> = temps
        .iter()
        .map(|&t| temperature_factor(omega, t))
        .collect::<Result<_, _>>()?;
    let th: Vec<f64> = temps
        .iter()
        .map(|&t| tanh_factor(omega, t))
        .collect::<Result<_, _>>()?;

    let names = ["temp_k", "w", "tanh"];
    let cols: [&[f64]; 3] = [&temps, &w, &th];
    let mut out = open_output(&a.out)?;
    match a.out.format {
        Format::Csv => write_columns_csv(&names, &cols, &mut out),
        Format::Json => write_json(
            &mut out,
            &columns_json(&names, &cols, json!({"freq_ghz": a.freq_ghz})),
        ),
    }
    .map_err(output_err)
}

pub fn cmd_powercurve(a: &PowercurveArgs) -> CliResult<()> {
    check_points(a.points)?;
    if a.pmin < 0.0 {
        return Err(CliError::Input(format!(
            "--pmin must be >= 0, got {}",
            a.pmin
        )));
    }
    let powers = linear_grid(a.pmin, a.pmax, a.points, "power range")?;
    let db = load_db(&a.db)?;
    let sp = match &a.species {
        Some(name) => db
            .iter()
            .find(|s| &s.name == name)
            .ok_or_else(|| CliError::Input(format!("species '{name}' not in database")))?,
        None => db
            .first()
            .ok_or_else(|| CliError::Input("database is empty".into()))?,
    };
    let line = sp
        .lines
        .get(a.line)
        .ok_or_else(|| CliError::Input(format!("species '{}' has no line {}", sp.name, a.line)))?;
    let on = line.omega_if;
    let off = line.omega_if + a.detuning_gamma * sp.gamma;
    if off.is_nan() || off <= 0.0 {
        return Err(CliError::Input(
            "detuned probe frequency must be positive".into(),
        ));
    }

    let mut on_res = Vec::with_capacity(powers.len());
    let mut detuned = Vec::with_capacity(powers.len());
    for &p in &powers {
        let cond = Conditions {
            n_r: a.n_r,
            temperature: a.temp_k,
            power: Some(PowerModel::new(p)?),
        };
        on_res.push(species_loss(sp, on, &cond)?);
        detuned.push(species_loss(sp, off, &cond)?);
    }

    let names = ["p_over_pc", "on_resonance", "detuned"];
    let cols: [&[f64]; 3] = [&powers, &on_res, &detuned];
    let mut out = open_output(&a.out)?;
    match a.out.format {
        Format::Csv => write_columns_csv(&names, &cols, &mut out),
        Format::Json => write_json(
            &mut out,
            &columns_json(
                &names,
                &cols,
                json!({
                    "species": sp.name,
                    "line": a.line,
                    "detuning_gamma": a.detuning_gamma,
                    "n_r": a.n_r,
                    "temp_k": a.temp_k,
                }),
            ),
        ),
    }
    .map_err(output_err)
}
