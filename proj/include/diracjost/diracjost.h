#ifndef DIRACJOST_H
#define DIRACJOST_H

/* C interface to the diracjost library. Every call returns a dj_status; on
 * failure dj_last_error() describes it (per thread). Strings returned through
 * char** are heap-allocated and released with dj_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define DJ_API __declspec(dllexport)
#else
#define DJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dj_status {
  DJ_OK = 0,
  DJ_ERR_DIMENSION_MISMATCH,
  DJ_ERR_SINGULAR_MATRIX,
  DJ_ERR_NOT_HERMITIAN,
  DJ_ERR_PARSE,
  DJ_ERR_MISSING_FIELD,
  DJ_ERR_INDEX_OUT_OF_DOMAIN,
  DJ_ERR_DOMAIN,
  DJ_ERR_INVALID_PROFILE,
  DJ_ERR_ILL_CONDITIONED,
  DJ_ERR_DEGENERATE_ROOT,
  DJ_ERR_NULL_VECTOR,
  DJ_ERR_TRUNCATION_TOO_SMALL,
  DJ_ERR_IO,
  DJ_ERR_INVALID_ARGUMENT,
  DJ_ERR_INTERNAL
} dj_status;

typedef enum dj_format { DJ_FORMAT_JSON = 0, DJ_FORMAT_CSV = 1, DJ_FORMAT_TEXT = 2 } dj_format;

typedef struct dj_profile dj_profile;
typedef struct dj_series dj_series;

typedef struct dj_eig_options {
  int grid_points;
  double newton_tol;
  double boundary_margin;
} dj_eig_options;

typedef struct dj_verify_options {
  dj_eig_options eig;
  size_t oracle_n;
  double band_margin;
  /* negative control: add corrupt_delta * I to a_{corrupt_n, corrupt_s} */
  int corrupt;
  size_t corrupt_n;
  size_t corrupt_s;
  double corrupt_delta;
} dj_verify_options;

DJ_API const char* dj_last_error(void);
DJ_API const char* dj_status_name(dj_status status);
DJ_API void dj_string_free(char* s);

DJ_API void dj_eig_options_default(dj_eig_options* opts);
DJ_API void dj_verify_options_default(dj_verify_options* opts);

DJ_API dj_status dj_profile_new_free(size_t m, dj_profile** out);
DJ_API dj_status dj_profile_load_json(const char* text, dj_profile** out);
DJ_API dj_status dj_profile_load_file(const char* path, dj_profile** out);
/* Member `index` of the seeded random suite. */
DJ_API dj_status dj_profile_random(uint64_t seed, size_t index, dj_profile** out);
DJ_API void dj_profile_destroy(dj_profile* p);
DJ_API size_t dj_profile_dim(const dj_profile* p);
DJ_API size_t dj_profile_cutoff(const dj_profile* p);
DJ_API dj_status dj_profile_to_json(const dj_profile* p, char** out);
/* *ok is 1 when the profile is admissible. format: JSON or TEXT. */
DJ_API dj_status dj_profile_validate(const dj_profile* p, dj_format format, int* ok,
                                     char** report);

DJ_API dj_status dj_jost_compute(const dj_profile* p, dj_series** out);
DJ_API void dj_series_destroy(dj_series* s);
/* F_n(z) and G_n(z) at site n >= 1, each m*m complex values stored row-major
 * as interleaved (re, im) pairs: 2*m*m doubles. */
DJ_API dj_status dj_jost_eval(const dj_series* s, size_t n, double z_re, double z_im,
                              double* F, double* G);
/* det F_0(z), evaluated from the series. */
DJ_API dj_status dj_jost_det(const dj_series* s, double z_re, double z_im, double* re,
                             double* im);
DJ_API dj_status dj_recurrence_residual(const dj_series* s, const dj_profile* p,
                                        double z_re, double z_im, double* out);
DJ_API dj_status dj_series_to_json(const dj_series* s, char** out);

/* Real eigenvalues outside [-2, 2], ascending. Writes at most `capacity`
 * values and always sets *count to the total. */
DJ_API dj_status dj_eigenvalues(const dj_profile* p, const dj_eig_options* opts,
                                double* lambdas, size_t capacity, size_t* count);
/* oracle_n == 0 skips the finite-section columns. format: JSON or CSV. */
DJ_API dj_status dj_spectral_report(const dj_profile* p, const dj_eig_options* opts,
                                    size_t oracle_n, dj_format format, char** out);
/* JSON: comparison with the full spectrum; CSV: the oracle spectrum only. */
DJ_API dj_status dj_oracle_report(const dj_profile* p, const dj_eig_options* opts,
                                  size_t n, double band_margin, dj_format format,
                                  char** out);
DJ_API dj_status dj_oracle_eigenvalues(const dj_profile* p, size_t n, double* out,
                                       size_t capacity, size_t* count);
DJ_API dj_status dj_band_csv(const dj_profile* p, size_t n, char** out);

/* *all_pass is 1 when every check passed. format: JSON, CSV or TEXT. */
DJ_API dj_status dj_verify_profile(const dj_profile* p, const char* label,
                                   const dj_verify_options* opts, dj_format format,
                                   char** out, int* all_pass);
DJ_API dj_status dj_verify_random(uint64_t seed, size_t count,
                                  const dj_verify_options* opts, dj_format format,
                                  char** out, int* all_pass);

#ifdef __cplusplus
}
#endif

#endif
