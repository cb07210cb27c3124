#ifndef PARAMAG_LOSS_H
#define PARAMAG_LOSS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_ARGUMENT = 2,
  PL_STATUS_PARSE = 3,
  PL_STATUS_IO = 4,
  PL_STATUS_NUMERIC = 5,
  PL_STATUS_OUT_OF_RANGE = 6,
  PL_STATUS_BUFFER_TOO_SMALL = 7,
  PL_STATUS_PANIC = 8,
} PlStatus;

// Species database handle.
typedef struct PlDatabase PlDatabase;

// Loss-tangent spectrum handle.
typedef struct PlSpectrum PlSpectrum;

// Evaluation conditions. Temperature and power are ignored unless the
// matching `has_` flag is set.
typedef struct PlConditions {
  double n_r;
  bool has_temperature;
  double temperature_k;
  bool has_power;
  double p_over_pc;
} PlConditions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer is
// valid until the next failing call on the same thread.
const char *pl_last_error(void);

// Library version as a static NUL-terminated string.
const char *pl_version(void);

// n_r = 1, zero temperature, no power broadening.
struct PlConditions pl_conditions_default(void);

// The bundled Cr/Fe/V database.
//
// # Safety
// `out` must be a valid pointer to writable storage.
enum PlStatus pl_database_default(struct PlDatabase **out);

// Parses a database from a NUL-terminated JSON string.
//
// # Safety
// `json` must be a valid C string and `out` valid for writes.
enum PlStatus pl_database_from_json(const char *json, struct PlDatabase **out);

// Loads a database file.
//
// # Safety
// `path` must be a valid C string and `out` valid for writes.
enum PlStatus pl_database_load(const char *path, struct PlDatabase **out);

// Releases a database. NULL is ignored.
//
// # Safety
// `db` must come from a `pl_database_*` constructor and not be used again.
void pl_database_free(struct PlDatabase *db);

// Number of species.
//
// # Safety
// `db` must be a live handle and `out` valid for writes.
enum PlStatus pl_database_len(const struct PlDatabase *db, size_t *out);

// Copies the name of species `index` into `buf` as a C string.
//
// `*needed` receives the buffer size required including the terminator.
// With `buf == NULL` only the size is reported. A non-NULL buffer shorter
// than required yields `BufferTooSmall` and is left untouched.
//
// # Safety
// `db` must be a live handle, `needed` valid for writes and `buf` valid
// for `buf_len` bytes when non-NULL.
enum PlStatus pl_database_species_name(const struct PlDatabase *db,
                                       size_t index,
                                       char *buf,
                                       size_t buf_len,
                                       size_t *needed);

// Loss tangent of one species at `freq_ghz`.
//
// # Safety
// Pointers must be valid; `db` must be a live handle.
enum PlStatus pl_species_loss(const struct PlDatabase *db,
                              size_t index,
                              double freq_ghz,
                              const struct PlConditions *cond,
                              double *out);

// Per-species and total loss tangent at one frequency. `per_species` may
// be NULL; otherwise it must hold `len` values, where `len` is the
// database size.
//
// # Safety
// Pointers must be valid; `per_species` must have room for `len` doubles.
enum PlStatus pl_point(const struct PlDatabase *db,
                       double freq_ghz,
                       const struct PlConditions *cond,
                       double *per_species,
                       size_t len,
                       double *total);

// Sweeps `points` frequencies from `fmin_ghz` to `fmax_ghz` inclusive.
//
// # Safety
// Pointers must be valid; `db` must be a live handle.
enum PlStatus pl_sweep(const struct PlDatabase *db,
                       double fmin_ghz,
                       double fmax_ghz,
                       size_t points,
                       const struct PlConditions *cond,
                       struct PlSpectrum **out);

// Releases a spectrum. NULL is ignored.
//
// # Safety
// `s` must come from [`pl_sweep`] and not be used again.
void pl_spectrum_free(struct PlSpectrum *s);

// Number of grid points.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum PlStatus pl_spectrum_len(const struct PlSpectrum *s, size_t *out);

// Number of species columns.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum PlStatus pl_spectrum_species_count(const struct PlSpectrum *s, size_t *out);

// Borrowed pointer to the frequency grid [GHz], valid until the spectrum is
// freed.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum PlStatus pl_spectrum_freqs(const struct PlSpectrum *s, const double **out);

// Borrowed pointer to the total loss tangent.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum PlStatus pl_spectrum_total(const struct PlSpectrum *s, const double **out);

// Borrowed pointer to the loss tangent of species `index`.
//
// # Safety
// `s` must be a live handle and `out` valid for writes.
enum PlStatus pl_spectrum_species(const struct PlSpectrum *s, size_t index, const double **out);

// Lorentzian with FWHM `gamma` [rad/s] at `detuning` [rad/s].
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_lorentzian(double detuning, double gamma, double *out);

// Voigt profile with Lorentzian FWHM `gamma` and Gaussian standard
// deviation `sigma`, all in rad/s.
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_voigt(double detuning, double gamma, double sigma, double *out);

// Thermal weight `(1 + exp(-ħΩ/kT))⁻²`.
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_temperature_factor(double omega_if, double temperature_k, double *out);

// Magnetic-dipole spontaneous emission rate [s⁻¹].
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_a_md(double omega_if, double m_sq, double n_r, double *out);

// `|M|²` from an emission rate [s⁻¹] and vacuum wavelength [m].
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_extract_moment(double rate, double lambda_vac, double n_r, double *out);

// Unpolarized `|M|²` between pure sublevels `m_i` and `m_f` of spin
// `two_s / 2`.
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_pure_spin_coupling(uint32_t two_s,
                                    double m_i,
                                    double m_f,
                                    double g_e,
                                    double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARAMAG_LOSS_H */
