/* hamvf: Hamiltonian vector fields over enumerated function bases.
 *
 * C interface to the core library. All objects are opaque handles created by
 * a *_create / *_parse style call and released by the matching *_free (which
 * accepts NULL). Functions report failure through hamvf_status; the message
 * of the most recent failure on the calling thread is hamvf_last_error().
 *
 * Strings returned through char** are heap-allocated and must be released
 * with hamvf_string_free. Arbitrary-size integers (corpus indices and sizes)
 * cross the boundary as decimal strings.
 */
#ifndef HAMVF_H
#define HAMVF_H

#include <stddef.h>
#include <stdint.h>

#if defined(HAMVF_BUILDING)
#define HAMVF_API __attribute__((visibility("default")))
#else
#define HAMVF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hamvf_status {
  HAMVF_OK = 0,
  HAMVF_E_USAGE = 1,        /* bad argument: NULL handle, unknown name, bad option */
  HAMVF_E_VALIDATION = 2,   /* malformed or out-of-range input */
  HAMVF_E_VERIFICATION = 3, /* a dataset failed verification */
  HAMVF_E_IO = 4,
  HAMVF_E_INTERNAL = 5
} hamvf_status;

HAMVF_API const char* hamvf_version(void);

/* Message of the last failed call on this thread; "" if none. Valid until the
 * next failing call on the same thread. */
HAMVF_API const char* hamvf_last_error(void);

HAMVF_API void hamvf_string_free(char* s);

/* ---- expressions ------------------------------------------------------- */

typedef struct hamvf_expr hamvf_expr;

/* Parses the infix grammar. `names`/`values` bind n named constants; values
 * are exact rationals ("3/2", "-1", "0.25"). */
HAMVF_API hamvf_status hamvf_expr_parse(const char* text, const char* const* names, const char* const* values,
                                        size_t n, hamvf_expr** out);
/* Expression of a built-in demo system: harmonic, pendulum, sis,
 * lotka-volterra. */
HAMVF_API hamvf_status hamvf_demo_expr(const char* name, hamvf_expr** out);
/* Newline-separated "name<TAB>hamiltonian" of the demo systems. */
HAMVF_API hamvf_status hamvf_demo_list(char** out);

HAMVF_API hamvf_status hamvf_expr_to_string(const hamvf_expr* e, char** out);
/* var is 'x' or 'y'. */
HAMVF_API hamvf_status hamvf_expr_diff(const hamvf_expr* e, char var, hamvf_expr** out);
/* NaN for points outside the domain of the expression. */
HAMVF_API hamvf_status hamvf_expr_eval(const hamvf_expr* e, double x, double y, double* out);
/* Nonzero when both trees are structurally identical. */
HAMVF_API int hamvf_expr_equal(const hamvf_expr* a, const hamvf_expr* b);
HAMVF_API void hamvf_expr_free(hamvf_expr* e);

/* ---- Hamiltonian fields ------------------------------------------------ */

typedef struct hamvf_field hamvf_field;

/* X_H = (-dH/dy, dH/dx). */
HAMVF_API hamvf_status hamvf_field_create(const hamvf_expr* hamiltonian, hamvf_field** out);
/* component 0 is dx, 1 is dy. */
HAMVF_API hamvf_status hamvf_field_component(const hamvf_field* f, int component, hamvf_expr** out);
HAMVF_API hamvf_status hamvf_field_eval(const hamvf_field* f, double x, double y, double* vx, double* vy);
HAMVF_API void hamvf_field_free(hamvf_field* f);

/* ---- bases and corpora ------------------------------------------------- */

typedef struct hamvf_basis hamvf_basis;

/* basis "b1".."b64" (a trailing '*' adds the trig shapes), delta "d3", "d5",
 * "d7" or "d9". */
HAMVF_API hamvf_status hamvf_basis_create(const char* basis, const char* delta, int trig, hamvf_basis** out);
/* Custom coefficient set; must contain 0. */
HAMVF_API hamvf_status hamvf_basis_create_custom(unsigned max_degree, const char* const* coeffs, size_t n, int trig,
                                                 hamvf_basis** out);
HAMVF_API hamvf_status hamvf_basis_name(const hamvf_basis* b, char** out);
HAMVF_API size_t hamvf_basis_shape_count(const hamvf_basis* b);
/* l^S - 1 as a decimal string. */
HAMVF_API hamvf_status hamvf_basis_cardinality(const hamvf_basis* b, char** out);
HAMVF_API hamvf_status hamvf_basis_function_at(const hamvf_basis* b, const char* index, hamvf_expr** out);
HAMVF_API hamvf_status hamvf_basis_index_of(const hamvf_basis* b, const hamvf_expr* e, char** out);
HAMVF_API void hamvf_basis_free(hamvf_basis* b);

typedef struct hamvf_enum hamvf_enum;

/* Members with index in [lo, hi); hi NULL means the end of the corpus. */
HAMVF_API hamvf_status hamvf_enum_create(const hamvf_basis* b, const char* lo, const char* hi, hamvf_enum** out);
/* *out is NULL once the range is exhausted. */
HAMVF_API hamvf_status hamvf_enum_next(hamvf_enum* it, hamvf_expr** out);
HAMVF_API void hamvf_enum_free(hamvf_enum* it);

/* ---- point clouds ------------------------------------------------------ */

typedef struct hamvf_cloud hamvf_cloud;

/* cloud_id 0 is the lattice, others are drawn from the master seed. points
 * must be a perfect square >= 4 (441 by default). */
HAMVF_API hamvf_status hamvf_cloud_create(uint64_t master_seed, unsigned cloud_id, size_t points, hamvf_cloud** out);
HAMVF_API size_t hamvf_cloud_size(const hamvf_cloud* c);
/* Writes x0, y0, x1, y1, ... into xy (2 * size doubles). */
HAMVF_API hamvf_status hamvf_cloud_points(const hamvf_cloud* c, double* xy);
HAMVF_API void hamvf_cloud_free(hamvf_cloud* c);

/* ---- rendering --------------------------------------------------------- */

typedef struct hamvf_render_config {
  unsigned resolution;   /* 32..1024, default 128 */
  unsigned stream_seeds; /* default 7 */
  double rk4_step;       /* default 0.2 */
  unsigned max_steps;    /* default 300 */
} hamvf_render_config;

HAMVF_API void hamvf_render_config_default(hamvf_render_config* cfg);

typedef struct hamvf_raster hamvf_raster;

/* cfg NULL means defaults. Channels: 0 quiver, 1 streamlines, 2 heatmap. */
HAMVF_API hamvf_status hamvf_render(const hamvf_field* f, const hamvf_cloud* c, const hamvf_render_config* cfg,
                                    hamvf_raster** out);
HAMVF_API void hamvf_raster_shape(const hamvf_raster* r, unsigned* height, unsigned* width, unsigned* channels);
/* Channel-major floats, valid while the raster lives. */
HAMVF_API const float* hamvf_raster_data(const hamvf_raster* r);
HAMVF_API hamvf_status hamvf_raster_write_tensor(const hamvf_raster* r, const char* path);
HAMVF_API hamvf_status hamvf_raster_read_tensor(const char* path, hamvf_raster** out);
/* <prefix>_q.png, <prefix>_s.png, <prefix>_h.png */
HAMVF_API hamvf_status hamvf_raster_write_png(const hamvf_raster* r, const char* prefix);
HAMVF_API void hamvf_raster_free(hamvf_raster* r);

/* ---- tokens and distances --------------------------------------------- */

typedef struct hamvf_vocab hamvf_vocab;

HAMVF_API hamvf_status hamvf_vocab_create(const hamvf_basis* b, hamvf_vocab** out);
HAMVF_API size_t hamvf_vocab_size(const hamvf_vocab* v);
HAMVF_API hamvf_status hamvf_vocab_to_json(const hamvf_vocab* v, char** out);
/* Sorted token indices of e. Writes at most `capacity` indices and sets
 * *count to the total; call with capacity 0 to size the buffer. */
HAMVF_API hamvf_status hamvf_vocab_tokenize(const hamvf_vocab* v, const hamvf_expr* e, size_t* indices,
                                            size_t capacity, size_t* count);
HAMVF_API hamvf_status hamvf_vocab_detokenize(const hamvf_vocab* v, const size_t* indices, size_t n, hamvf_expr** out);
HAMVF_API void hamvf_vocab_free(hamvf_vocab* v);

typedef enum hamvf_metric {
  HAMVF_METRIC_EUCLID = 0,     /* sqrt of the multi-hot Hamming distance */
  HAMVF_METRIC_JACCARD = 1,    /* 1 - |A n B| / |A u B| over token sets */
  HAMVF_METRIC_LEVENSHTEIN = 2 /* edit distance over tokens in written order */
} hamvf_metric;

/* Both expressions must be linear combinations of basis terms. */
HAMVF_API hamvf_status hamvf_distance(const hamvf_expr* a, const hamvf_expr* b, hamvf_metric metric, double* out);

/* ---- datasets ---------------------------------------------------------- */

typedef struct hamvf_generate_options {
  int has_limit;              /* nonzero: only the first `limit` corpus members */
  uint64_t limit;
  unsigned shard_index;       /* shard k of m, 0-based */
  unsigned shard_count;
  hamvf_render_config render;
  const char* split_fraction; /* train fraction, "3/4" when NULL */
  unsigned workers;
  int write_png;
  uint64_t cap;               /* refuse corpora above this size without a limit */
  size_t points;
} hamvf_generate_options;

HAMVF_API void hamvf_generate_options_default(hamvf_generate_options* opt);

/* Writes the shard into out_dir; *manifest_json (optional) receives the
 * manifest. */
HAMVF_API hamvf_status hamvf_generate(const hamvf_basis* b, uint64_t master_seed, const char* out_dir,
                                      const hamvf_generate_options* opt, char** manifest_json);

/* Checks a dataset directory, re-rendering the hash-selected `fraction` of
 * samples. Returns HAMVF_E_VERIFICATION when any check fails; the JSON report
 * is produced either way. */
HAMVF_API hamvf_status hamvf_verify(const char* dir, double fraction, unsigned workers, char** report_json);

/* Scores a predictions JSONL file against a dataset. */
HAMVF_API hamvf_status hamvf_score(const char* dataset_dir, const char* predictions, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
