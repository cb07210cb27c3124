//! C ABI over `paramag_loss`.
//!
//! Every entry point returns a [`PlStatus`]; results come back through out
//! pointers. On failure a message is stored per thread and can be read with
//! [`pl_last_error`]. Databases and spectra are opaque handles owned by the
//! caller and released with their `_free` function.
//!
//! Frequencies crossing this boundary are in GHz for databases and spectra
//! (matching the file format) and in rad/s for the scalar physics functions.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use paramag_loss::emission::{a_md, extract_moment};
use paramag_loss::ensemble::{
    bundled_database, load_database, parse_database, species_loss, sweep, Conditions,
    DefectSpecies, Spectrum,
};
use paramag_loss::linalg::MAX_EIGEN_DIM;
use paramag_loss::lineshape::{lorentzian, temperature_factor, voigt, PowerModel};
use paramag_loss::spin::{pure_spin_coupling, SpinQuantum};
use paramag_loss::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Numeric = 5,
    OutOfRange = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

const MAX_SWEEP_POINTS: usize = 10_000_000;

/// Species database handle.
pub struct PlDatabase {
    species: Vec<DefectSpecies>,
}

/// Loss-tangent spectrum handle.
pub struct PlSpectrum {
    inner: Spectrum,
}

/// Evaluation conditions. Temperature and power are ignored unless the
/// matching `has_` flag is set.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PlConditions {
    pub n_r: f64,
    pub has_temperature: bool,
    pub temperature_k: f64,
    pub has_power: bool,
    pub p_over_pc: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PlStatus {
    match e {
        Error::Json(_) | Error::Database { .. } | Error::EmissionTable { .. } => PlStatus::Parse,
        Error::Io(_) => PlStatus::Io,
        Error::NoConvergence(_) | Error::NonHermitianInput { .. } | Error::DimensionTooLarge(_) => {
            PlStatus::Numeric
        }
        Error::InvalidRange(_) => PlStatus::OutOfRange,
        _ => PlStatus::InvalidArgument,
    }
}

struct Fail(PlStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PlStatus::NullPointer, format!("{what} is NULL"))
}

/// Runs `f`, recording any error or panic.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PlStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PlStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            PlStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        Fail(
            PlStatus::InvalidArgument,
            format!("{what} is not valid UTF-8"),
        )
    })
}

unsafe fn db_ref<'a>(db: *const PlDatabase) -> Result<&'a PlDatabase, Fail> {
    db.as_ref().ok_or_else(|| null("database"))
}

unsafe fn spectrum_ref<'a>(s: *const PlSpectrum) -> Result<&'a PlSpectrum, Fail> {
    s.as_ref().ok_or_else(|| null("spectrum"))
}

unsafe fn conditions(c: *const PlConditions) -> Result<Conditions, Fail> {
    let c = c.as_ref().ok_or_else(|| null("conditions"))?;
    let cond = Conditions {
        n_r: c.n_r,
        temperature: c.has_temperature.then_some(c.temperature_k),
        power: if c.has_power {
            Some(PowerModel::new(c.p_over_pc)?)
        } else {
            None
        },
    };
    cond.validate()?;
    Ok(cond)
}

fn boxed_db(species: Vec<DefectSpecies>) -> *mut PlDatabase {
    Box::into_raw(Box::new(PlDatabase { species }))
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn pl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// n_r = 1, zero temperature, no power broadening.
#[no_mangle]
pub extern "C" fn pl_conditions_default() -> PlConditions {
    PlConditions {
        n_r: 1.0,
        has_temperature: false,
        temperature_k: 0.0,
        has_power: false,
        p_over_pc: 0.0,
    }
}

/// The bundled Cr/Fe/V database.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pl_database_default(out: *mut *mut PlDatabase) -> PlStatus {
    guard(|| write_out(out, boxed_db(bundled_database())))
}

/// Parses a database from a NUL-terminated JSON string.
///
/// # Safety
/// `json` must be a valid C string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_database_from_json(
    json: *const c_char,
    out: *mut *mut PlDatabase,
) -> PlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let db = parse_database(str_arg(json, "json")?)?;
        write_out(out, boxed_db(db))
    })
}

/// Loads a database file.
///
/// # Safety
/// `path` must be a valid C string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_database_load(
    path: *const c_char,
    out: *mut *mut PlDatabase,
) -> PlStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let db = load_database(Path::new(str_arg(path, "path")?))?;
        write_out(out, boxed_db(db))
    })
}

/// Releases a database. NULL is ignored.
///
/// # Safety
/// `db` must come from a `pl_database_*` constructor and not be used again.
#[no_mangle]
pub unsafe extern "C" fn pl_database_free(db: *mut PlDatabase) {
    if !db.is_null() {
        drop(Box::from_raw(db));
    }
}

/// Number of species.
///
/// # Safety
/// `db` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_database_len(db: *const PlDatabase, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, db_ref(db)?.species.len()))
}

/// Copies the name of species `index` into `buf` as a C string.
///
/// `*needed` receives the buffer size required including the terminator.
/// With `buf == NULL` only the size is reported. A non-NULL buffer shorter
/// than required yields `BufferTooSmall` and is left untouched.
///
/// # Safety
/// `db` must be a live handle, `needed` valid for writes and `buf` valid
/// for `buf_len` bytes when non-NULL.
#[no_mangle]
pub unsafe extern "C" fn pl_database_species_name(
    db: *const PlDatabase,
    index: usize,
    buf: *mut c_char,
    buf_len: usize,
    needed: *mut usize,
) -> PlStatus {
    guard(|| {
        let sp = species_at(db_ref(db)?, index)?;
        let bytes = sp.name.as_bytes();
        write_out(needed, bytes.len() + 1)?;
        if buf.is_null() {
            return Ok(());
        }
        if buf_len < bytes.len() + 1 {
            return Err(Fail(
                PlStatus::BufferTooSmall,
                format!("need {} bytes, got {buf_len}", bytes.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, bytes.len());
        buf.add(bytes.len()).write(0);
        Ok(())
    })
}

fn species_at(db: &PlDatabase, index: usize) -> Result<&DefectSpecies, Fail> {
    db.species.get(index).ok_or_else(|| {
        Fail(
            PlStatus::OutOfRange,
            format!(
                "species index {index} out of range (len {})",
                db.species.len()
            ),
        )
    })
}

fn check_freq(freq_ghz: f64) -> Result<f64, Fail> {
    if freq_ghz > 0.0 && freq_ghz.is_finite() {
        Ok(2.0 * std::f64::consts::PI * freq_ghz * 1e9)
    } else {
        Err(Fail(
            PlStatus::InvalidArgument,
            format!("frequency must be positive, got {freq_ghz} GHz"),
        ))
    }
}

/// Loss tangent of one species at `freq_ghz`.
///
/// # Safety
/// Pointers must be valid; `db` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_species_loss(
    db: *const PlDatabase,
    index: usize,
    freq_ghz: f64,
    cond: *const PlConditions,
    out: *mut f64,
) -> PlStatus {
    guard(|| {
        let sp = species_at(db_ref(db)?, index)?;
        let cond = conditions(cond)?;
        let v = species_loss(sp, check_freq(freq_ghz)?, &cond)?;
        write_out(out, v)
    })
}

/// Per-species and total loss tangent at one frequency. `per_species` may
/// be NULL; otherwise it must hold `len` values, where `len` is the
/// database size.
///
/// # Safety
/// Pointers must be valid; `per_species` must have room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn pl_point(
    db: *const PlDatabase,
    freq_ghz: f64,
    cond: *const PlConditions,
    per_species: *mut f64,
    len: usize,
    total: *mut f64,
) -> PlStatus {
    guard(|| {
        let db = db_ref(db)?;
        if total.is_null() {
            return Err(null("total"));
        }
        if !per_species.is_null() && len != db.species.len() {
            return Err(Fail(
                PlStatus::BufferTooSmall,
                format!(
                    "per_species holds {len} values, database has {}",
                    db.species.len()
                ),
            ));
        }
        let cond = conditions(cond)?;
        let omega = check_freq(freq_ghz)?;
        let values = db
            .species
            .iter()
            .map(|sp| species_loss(sp, omega, &cond))
            .collect::<paramag_loss::Result<Vec<_>>>()?;
        if !per_species.is_null() {
            ptr::copy_nonoverlapping(values.as_ptr(), per_species, values.len());
        }
        // Same summation order as a sweep.
        write_out(total, values.iter().fold(0.0, |acc, v| acc + v))
    })
}

/// Sweeps `points` frequencies from `fmin_ghz` to `fmax_ghz` inclusive.
///
/// # Safety
/// Pointers must be valid; `db` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn pl_sweep(
    db: *const PlDatabase,
    fmin_ghz: f64,
    fmax_ghz: f64,
    points: usize,
    cond: *const PlConditions,
    out: *mut *mut PlSpectrum,
) -> PlStatus {
    guard(|| {
        let db = db_ref(db)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        if points > MAX_SWEEP_POINTS {
            return Err(Fail(
                PlStatus::OutOfRange,
                format!("points must be at most {MAX_SWEEP_POINTS}, got {points}"),
            ));
        }
        let cond = conditions(cond)?;
        let inner = sweep(&db.species, fmin_ghz, fmax_ghz, points, &cond)?;
        write_out(out, Box::into_raw(Box::new(PlSpectrum { inner })))
    })
}

/// Releases a spectrum. NULL is ignored.
///
/// # Safety
/// `s` must come from [`pl_sweep`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_free(s: *mut PlSpectrum) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of grid points.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_len(s: *const PlSpectrum, out: *mut usize) -> PlStatus {
    guard(|| write_out(out, spectrum_ref(s)?.inner.len()))
}

/// Number of species columns.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_species_count(
    s: *const PlSpectrum,
    out: *mut usize,
) -> PlStatus {
    guard(|| write_out(out, spectrum_ref(s)?.inner.per_species.len()))
}

/// Borrowed pointer to the frequency grid [GHz], valid until the spectrum is
/// freed.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_freqs(s: *const PlSpectrum, out: *mut *const f64) -> PlStatus {
    guard(|| write_out(out, spectrum_ref(s)?.inner.freqs_ghz.as_ptr()))
}

/// Borrowed pointer to the total loss tangent.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_total(s: *const PlSpectrum, out: *mut *const f64) -> PlStatus {
    guard(|| write_out(out, spectrum_ref(s)?.inner.total.as_ptr()))
}

/// Borrowed pointer to the loss tangent of species `index`.
///
/// # Safety
/// `s` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_spectrum_species(
    s: *const PlSpectrum,
    index: usize,
    out: *mut *const f64,
) -> PlStatus {
    guard(|| {
        let spec = &spectrum_ref(s)?.inner;
        let curve = spec.per_species.get(index).ok_or_else(|| {
            Fail(
                PlStatus::OutOfRange,
                format!("species index {index} out of range"),
            )
        })?;
        write_out(out, curve.values.as_ptr())
    })
}

/// Lorentzian with FWHM `gamma` [rad/s] at `detuning` [rad/s].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_lorentzian(detuning: f64, gamma: f64, out: *mut f64) -> PlStatus {
    guard(|| write_out(out, lorentzian(detuning, gamma)?))
}

/// Voigt profile with Lorentzian FWHM `gamma` and Gaussian standard
/// deviation `sigma`, all in rad/s.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_voigt(
    detuning: f64,
    gamma: f64,
    sigma: f64,
    out: *mut f64,
) -> PlStatus {
    guard(|| write_out(out, voigt(detuning, gamma, sigma)?))
}

/// Thermal weight `(1 + exp(-ħΩ/kT))⁻²`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_temperature_factor(
    omega_if: f64,
    temperature_k: f64,
    out: *mut f64,
) -> PlStatus {
    guard(|| write_out(out, temperature_factor(omega_if, temperature_k)?))
}

/// Magnetic-dipole spontaneous emission rate [s⁻¹].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_a_md(omega_if: f64, m_sq: f64, n_r: f64, out: *mut f64) -> PlStatus {
    guard(|| write_out(out, a_md(omega_if, m_sq, n_r)?))
}

/// `|M|²` from an emission rate [s⁻¹] and vacuum wavelength [m].
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_extract_moment(
    rate: f64,
    lambda_vac: f64,
    n_r: f64,
    out: *mut f64,
) -> PlStatus {
    guard(|| write_out(out, extract_moment(rate, lambda_vac, n_r)?))
}

/// Unpolarized `|M|²` between pure sublevels `m_i` and `m_f` of spin
/// `two_s / 2`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn pl_pure_spin_coupling(
    two_s: u32,
    m_i: f64,
    m_f: f64,
    g_e: f64,
    out: *mut f64,
) -> PlStatus {
    guard(|| {
        if two_s as usize >= MAX_EIGEN_DIM {
            return Err(Fail(
                PlStatus::OutOfRange,
                format!("two_s = {two_s} exceeds {}", MAX_EIGEN_DIM - 1),
            ));
        }
        let s = SpinQuantum::new(two_s)?;
        write_out(out, pure_spin_coupling(s, m_i, m_f, g_e)?)
    })
}
