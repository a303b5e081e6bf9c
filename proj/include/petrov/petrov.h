/* C interface to the petrov library.
 *
 * Every call returns a petrov_status. On failure the context keeps a message
 * readable through petrov_last_error until the next call on that context.
 * Output strings are owned by the caller and released with
 * petrov_string_destroy. A context must not be used by two threads at once;
 * separate contexts are independent.
 */
#ifndef PETROV_H
#define PETROV_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(PETROV_BUILDING_LIBRARY)
#define PETROV_API __attribute__((visibility("default")))
#else
#define PETROV_API
#endif

typedef enum petrov_status {
  PETROV_OK = 0,
  PETROV_ERR_SHAPE = 1,
  PETROV_ERR_CONTRACT = 2,
  PETROV_ERR_CONDITIONING = 3,
  PETROV_ERR_CLUSTER_AMBIGUITY = 4,
  PETROV_ERR_TOLERANCE = 5,
  PETROV_ERR_OUT_OF_SCOPE = 6,
  PETROV_ERR_TAXONOMY = 7,
  PETROV_ERR_DOMAIN = 8,
  PETROV_ERR_DEGENERATE_LEVEL = 9,
  PETROV_ERR_PARSE = 10,
  PETROV_ERR_INTERNAL = 11,
  PETROV_ERR_INVALID_ARGUMENT = 12 /* null handle or pointer */
} petrov_status;

typedef enum petrov_format { PETROV_FORMAT_JSON = 0, PETROV_FORMAT_MARKDOWN = 1 } petrov_format;

typedef struct petrov_context petrov_context;
typedef struct petrov_string petrov_string;
typedef struct petrov_pair petrov_pair;
typedef struct petrov_classification petrov_classification;

PETROV_API const char* petrov_version(void);
PETROV_API const char* petrov_status_name(petrov_status status);

/* ---- context --------------------------------------------------------- */

/* Default tolerances: 1e-9 for algebraic identities, 1e-6 for rank cutoffs. */
PETROV_API petrov_status petrov_context_create(petrov_context** out);
PETROV_API void petrov_context_destroy(petrov_context* ctx);
/* Both values must be positive and finite. */
PETROV_API petrov_status petrov_context_set_tolerance(petrov_context* ctx, double algebraic, double rank);
PETROV_API petrov_status petrov_context_get_tolerance(const petrov_context* ctx, double* algebraic, double* rank);
/* Empty string when the last call succeeded. */
PETROV_API const char* petrov_last_error(const petrov_context* ctx);

/* ---- strings --------------------------------------------------------- */

PETROV_API const char* petrov_string_data(const petrov_string* s);
PETROV_API size_t petrov_string_size(const petrov_string* s);
PETROV_API void petrov_string_destroy(petrov_string* s);

/* ---- JSON documents -------------------------------------------------- */

enum { PETROV_CLASSIFY_FLIP_METRIC = 1 /* classify (A, -G): H-ambient data read in S */ };

/* Input {"A": Matrix, "G": Matrix, "tol"?: number}; `flags` is 0 or
 * PETROV_CLASSIFY_FLIP_METRIC. */
PETROV_API petrov_status petrov_classify_json(petrov_context* ctx, const char* input, unsigned flags,
                                              petrov_string** out);

PETROV_API petrov_status petrov_catalog_list_json(petrov_context* ctx, petrov_string** out);

/* `point` holds chart coordinates or an ambient point of the hypersurface.
 * `frame` is "standard", "special" or NULL (standard). A NaN `parameter`
 * selects the default shape parameter of examples k and l. */
PETROV_API petrov_status petrov_catalog_eval_json(petrov_context* ctx, const char* id, const double* point,
                                                  size_t point_len, const char* frame, double parameter,
                                                  petrov_string** out);

typedef struct petrov_verify_options {
  size_t struct_size;    /* set by petrov_verify_options_init */
  const char* ids;       /* comma-separated catalog ids; NULL or "" for all */
  double h;              /* <= 0: default steps */
  int samples;           /* samples per example */
  uint64_t seed;
  double parameter;      /* NaN: default shape parameter of k and l */
  unsigned threads;      /* 0: hardware concurrency */
  double shape_fd_threshold; /* <= 0: default, likewise below */
  double gauss_threshold;
  double codazzi_threshold;
} petrov_verify_options;

PETROV_API void petrov_verify_options_init(petrov_verify_options* options);

/* Runs the finite-difference checks. `all_pass` (optional) receives 1 when
 * every check passed. A failing check is not an error status. */
PETROV_API petrov_status petrov_verify_run(petrov_context* ctx, const petrov_verify_options* options,
                                           petrov_format format, petrov_string** out, int* all_pass);

/* Regenerates table 1, 2 or 3. `pass` (optional) receives 1 when every cell
 * matches. */
PETROV_API petrov_status petrov_report_table(petrov_context* ctx, int which, int samples_per_region, uint64_t seed,
                                             petrov_format format, petrov_string** out, int* pass);

/* Input {"variant", "index", "P", "p"?, "c", "levels"?}. */
PETROV_API petrov_status petrov_quadric_check_json(petrov_context* ctx, const char* input, int per_level,
                                                   uint64_t seed, petrov_string** out, int* pass);

/* ---- typed pair API -------------------------------------------------- */

/* Square n x n row-major operator A and form G. */
PETROV_API petrov_status petrov_pair_create(petrov_context* ctx, size_t n, const double* a, const double* g,
                                            petrov_pair** out);
PETROV_API void petrov_pair_destroy(petrov_pair* pair);
PETROV_API size_t petrov_pair_dim(const petrov_pair* pair);

PETROV_API petrov_status petrov_pair_classify(petrov_context* ctx, const petrov_pair* pair,
                                              petrov_classification** out);
PETROV_API void petrov_classification_destroy(petrov_classification* c);

/* Labels read "I" .. "XI", "VII-i", "IX-ii" and so on. */
PETROV_API const char* petrov_classification_label(const petrov_classification* c);
PETROV_API const char* petrov_classification_geometric_label(const petrov_classification* c);
PETROV_API int petrov_classification_index(const petrov_classification* c);
/* 1 and *epsilon set when the algebraic type carries a sign, else 0. */
PETROV_API int petrov_classification_epsilon(const petrov_classification* c, int* epsilon);
PETROV_API int petrov_classification_negative_index(const petrov_classification* c);
/* Row-major n x n transform T with T^-1 A T and T^T G T in normal form. */
PETROV_API petrov_status petrov_classification_transform(const petrov_classification* c, double* out, size_t len);

#ifdef __cplusplus
}
#endif

#endif /* PETROV_H */
