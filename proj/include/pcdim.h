/* pcdim: estimate the number of meaningful principal components in
 * high-dimension, low-sample-size data by sequentially testing the
 * skewness of PCA residual lengths.
 *
 * All functions return a pcdim_status; non-zero means failure and
 * pcdim_last_error() holds a thread-local description. Handles returned
 * through out-parameters are owned by the caller and released with the
 * matching _free function. Strings returned through out-parameters are
 * released with pcdim_string_free.
 */
#ifndef PCDIM_H
#define PCDIM_H

#include <stddef.h>

#if defined(_WIN32)
#define PCDIM_API __declspec(dllexport)
#else
#define PCDIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pcdim_status {
  PCDIM_OK = 0,
  PCDIM_INVALID_ARGUMENT = 1,
  PCDIM_TOO_FEW_OBSERVATIONS = 2,
  PCDIM_ZERO_VARIANCE = 3,
  PCDIM_DEGENERATE_VARIANCE = 4,
  PCDIM_NON_CONVERGENCE = 5,
  PCDIM_RANK_DEFICIENT = 6,
  PCDIM_PARSE_ERROR = 7,
  PCDIM_MISSING_VALUE = 8,
  PCDIM_RAGGED_ROWS = 9,
  PCDIM_EMPTY_INPUT = 10,
  PCDIM_OUT_OF_RANGE = 11,
  PCDIM_IO_ERROR = 12,
  PCDIM_SPIKE_BELOW_NOISE = 13,
  PCDIM_DEGENERATE_RESIDUALS = 14,
  PCDIM_INTERNAL_ERROR = 100
} pcdim_status;

typedef struct pcdim_matrix pcdim_matrix;
typedef struct pcdim_result pcdim_result;

/* Library version, e.g. "1.0.0". */
PCDIM_API const char* pcdim_version(void);

/* Stable snake_case name for a status code. */
PCDIM_API const char* pcdim_status_name(pcdim_status status);

/* Description of the most recent failure on this thread ("" if none). */
PCDIM_API const char* pcdim_last_error(void);

/* ---- data ingest ---------------------------------------------------- */

typedef struct pcdim_read_options {
  const char* delimiter; /* NULL or "auto", ",", ";", "tab", "space" */
  int columns_are_observations;
  int has_header;
} pcdim_read_options;

PCDIM_API void pcdim_read_options_init(pcdim_read_options* opts);

/* Dense row-major data, one observation per row. */
PCDIM_API pcdim_status pcdim_matrix_from_data(const double* values, size_t observations,
                                              size_t variables, pcdim_matrix** out);

PCDIM_API pcdim_status pcdim_matrix_read(const char* path, const pcdim_read_options* opts,
                                         pcdim_matrix** out);

PCDIM_API size_t pcdim_matrix_observations(const pcdim_matrix* m);
PCDIM_API size_t pcdim_matrix_variables(const pcdim_matrix* m);
PCDIM_API void pcdim_matrix_free(pcdim_matrix* m);

/* ---- estimation ----------------------------------------------------- */

typedef struct pcdim_estimate_options {
  double alpha;    /* acceptance threshold for the p-value scan, default 0.1 */
  int use_triples; /* 0: transformed-b1 normality test, 1: sign-based triples test */
  size_t max_k;    /* highest order tested; (size_t)-1 selects min(n-2, d, 30) */
  int center;      /* subtract column means first */
  int standardize; /* scale columns to unit variance */
} pcdim_estimate_options;

PCDIM_API void pcdim_estimate_options_init(pcdim_estimate_options* opts);

PCDIM_API pcdim_status pcdim_estimate(const pcdim_matrix* m,
                                      const pcdim_estimate_options* opts,
                                      pcdim_result** out);

PCDIM_API size_t pcdim_result_m_hat(const pcdim_result* r);
PCDIM_API int pcdim_result_saturated(const pcdim_result* r);
PCDIM_API double pcdim_result_alpha(const pcdim_result* r);

/* Number of tested orders, i.e. max_k + 1 p-values for k = 0..max_k. */
PCDIM_API size_t pcdim_result_count(const pcdim_result* r);
PCDIM_API pcdim_status pcdim_result_pvalues(const pcdim_result* r, double* out,
                                            size_t capacity);
PCDIM_API pcdim_status pcdim_result_skewness(const pcdim_result* r, double* out,
                                             size_t capacity);

/* Sample eigenvalues (Gram eigenvalues / n), largest first; length n. */
PCDIM_API size_t pcdim_result_eigenvalue_count(const pcdim_result* r);
PCDIM_API pcdim_status pcdim_result_eigenvalues(const pcdim_result* r, double* out,
                                                size_t capacity);

/* Re-threshold the stored p-value sequence at another alpha. */
PCDIM_API pcdim_status pcdim_result_m_for_alpha(const pcdim_result* r, double alpha,
                                                size_t* m_out, int* saturated_out);

PCDIM_API void pcdim_result_free(pcdim_result* r);

/* ---- document-level entry points ------------------------------------ */
/* These power the command-line tool: options go in as a JSON object and a
 * complete self-describing JSON document comes back.
 *
 * estimate/alpha-sweep option keys (all optional unless noted): alpha,
 * tests (array of "dagostino"/"triples"), max_k, center, standardize,
 * delimiter, orientation ("rows"/"columns"), header, alphas (sweep only,
 * required). Simulation spec keys: case ("I".."IV"/"custom"), d, n, m, s,
 * g, beta, distribution ("normal"/"t3"), seed, replicates, alpha,
 * kn_alpha, estimators (array or "all"), max_k. */

PCDIM_API pcdim_status pcdim_estimate_document(const char* input_path,
                                               const char* options_json,
                                               char** document_json);

/* input_path may be a matrix file or a previously written estimate
 * document; the latter is swept without recomputing p-values. */
PCDIM_API pcdim_status pcdim_alpha_sweep_document(const char* input_path,
                                                  const char* options_json,
                                                  char** document_json);

PCDIM_API pcdim_status pcdim_simulate_document(const char* spec_json,
                                               char** document_json);

/* Whole-file write via a temporary file and atomic rename. */
PCDIM_API pcdim_status pcdim_write_text_atomic(const char* path, const char* content);

PCDIM_API void pcdim_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* PCDIM_H */
