#ifndef ZETACERT_H
#define ZETACERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stdint.h>

// Status of a call.
typedef enum ZcErrorCode {
  ZC_ERROR_CODE_OK = 0,
  ZC_ERROR_CODE_INVALID_INPUT = 1,
  ZC_ERROR_CODE_DOMAIN = 2,
  ZC_ERROR_CODE_POLE = 3,
  ZC_ERROR_CODE_CONSTRUCTION = 4,
  ZC_ERROR_CODE_HYPOTHESIS = 5,
  ZC_ERROR_CODE_PRECISION_SHORTFALL = 6,
  ZC_ERROR_CODE_EVALUATION = 7,
  ZC_ERROR_CODE_NOT_ADMISSIBLE = 8,
  ZC_ERROR_CODE_INTERNAL = 9,
  ZC_ERROR_CODE_NULL_POINTER = 10,
  ZC_ERROR_CODE_PANIC = 11,
} ZcErrorCode;

// Opaque valuation certificate.
typedef struct ZcCertificate ZcCertificate;

// Opaque partial-fraction table.
typedef struct ZcFormTable ZcFormTable;

// Constants for one prime.
typedef struct ZcConstants {
  uint64_t p;
  double varpi;
  double c_p;
  int64_t greatest_odd_le_cp;
  int64_t s_min;
  bool bounds_ok;
  bool odd_threshold_ok;
} ZcConstants;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Free with
// [`zc_string_free`].
char *zc_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void zc_string_free(char *s);

// Library version as a static string; do not free.
const char *zc_version(void);

// Builds the partial-fraction table of `R_n`.
enum ZcErrorCode zc_form_table_build(int64_t p,
                                     int64_t s,
                                     int64_t n,
                                     bool relaxed,
                                     struct ZcFormTable **out);

// # Safety
// `table` must be null or a handle from [`zc_form_table_build`].
void zc_form_table_free(struct ZcFormTable *table);

// Highest pole order `p - 1 + s` and `n`.
enum ZcErrorCode zc_form_table_dims(const struct ZcFormTable *table, int64_t *order, int64_t *n);

// `r_{i,k}` as `"num/den"`, or `"num"` when integral.
enum ZcErrorCode zc_form_table_r(const struct ZcFormTable *table, int64_t i, int64_t k, char **out);

// `ρ_i` for `0 ≤ i ≤ p-1+s` as `"num/den"`, or `"num"` when integral.
enum ZcErrorCode zc_form_table_rho(const struct ZcFormTable *table, int64_t i, char **out);

// All divisibility checks; `pass` is true when every one holds.
enum ZcErrorCode zc_form_table_verify_integrality(const struct ZcFormTable *table, bool *pass);

// The table as JSON.
enum ZcErrorCode zc_form_table_to_json(const struct ZcFormTable *table,
                                       bool with_timing,
                                       char **out);

// Valuation certificate for `n = n(N)` at the given precision.
enum ZcErrorCode zc_certificate_compute(int64_t p,
                                        int64_t s,
                                        int64_t big_n,
                                        int64_t precision,
                                        struct ZcCertificate **out);

// # Safety
// `cert` must be null or a handle from [`zc_certificate_compute`].
void zc_certificate_free(struct ZcCertificate *cert);

// Overall verdict of a certificate.
enum ZcErrorCode zc_certificate_passed(const struct ZcCertificate *cert, bool *pass);

// Predicted and computed valuations; `has_computed` is false when `S_n`
// vanished to the working precision or a path failed.
enum ZcErrorCode zc_certificate_valuations(const struct ZcCertificate *cert,
                                           int64_t *predicted,
                                           int64_t *computed,
                                           bool *has_computed);

// The certificate as JSON; `stable` drops timings.
enum ZcErrorCode zc_certificate_to_json(const struct ZcCertificate *cert, bool stable, char **out);

enum ZcErrorCode zc_constants(int64_t p, struct ZcConstants *out);

// `ζ_p(i)` modulo `p^precision`: the valuation and the comma-separated
// base-p digits of the unit part, least significant first. A value that
// vanishes to the working precision has `has_valuation = false` and an
// empty digit string.
enum ZcErrorCode zc_zeta_digits(int64_t p,
                                int64_t i,
                                int64_t precision,
                                int64_t *valuation,
                                bool *has_valuation,
                                char **digits);

// `B_n` as `"num/den"`, or `"num"` when integral.
enum ZcErrorCode zc_bernoulli(int64_t n, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZETACERT_H */
