/* C interface to the lcsvd library. All objects are opaque handles owned by
 * the caller and released with the matching *_free function. Every call that
 * can fail returns an lcsvd_status; the message of the most recent failure on
 * the calling thread is available from lcsvd_last_error(). */
#ifndef LCSVD_LCSVD_H
#define LCSVD_LCSVD_H

#include <stddef.h>
#include <stdint.h>

#if defined(LCSVD_BUILDING)
#define LCSVD_API __attribute__((visibility("default")))
#else
#define LCSVD_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lcsvd_status {
  LCSVD_OK = 0,
  LCSVD_ERR_VALIDATION = 2,
  LCSVD_NOT_CONVERGED = 3, /* outputs are still filled with the best attempt */
  LCSVD_ERR_IO = 4,
  LCSVD_ERR_NUMERICAL = 5,
  LCSVD_ERR_INTERNAL = 6
} lcsvd_status;

typedef enum lcsvd_format { LCSVD_FORMAT_SNT = 0, LCSVD_FORMAT_CSV = 1 } lcsvd_format;

typedef enum lcsvd_rule_kind { LCSVD_RULE_TOLERANCE = 0, LCSVD_RULE_MODES = 1 } lcsvd_rule_kind;

typedef struct lcsvd_rule {
  lcsvd_rule_kind kind;
  double epsilon; /* LCSVD_RULE_TOLERANCE: keep sigma_i / sigma_1 > epsilon */
  size_t count;   /* LCSVD_RULE_MODES */
} lcsvd_rule;

typedef struct lcsvd_shape {
  size_t n_comp, n_x, n_y;
  size_t n_z; /* 0 for 2-D data */
  size_t n_t;
  double u_inf; /* 0 when unknown */
} lcsvd_shape;

typedef struct lcsvd_dataset lcsvd_dataset;
typedef struct lcsvd_factors lcsvd_factors;
typedef struct lcsvd_result lcsvd_result;
typedef struct lcsvd_sensors lcsvd_sensors;
typedef struct lcsvd_search lcsvd_search;
typedef struct lcsvd_elbow lcsvd_elbow;
typedef struct lcsvd_bench lcsvd_bench;

LCSVD_API const char* lcsvd_last_error(void);
LCSVD_API const char* lcsvd_version(void);

/* Caps the BLAS thread pool; 0 applies LCSVD_THREADS or, if unset, one thread. */
LCSVD_API lcsvd_status lcsvd_set_threads(int threads);

/* ---- datasets ---- */
LCSVD_API lcsvd_status lcsvd_dataset_load(const char* path, lcsvd_dataset** out);
/* values: column-major J x K */
LCSVD_API lcsvd_status lcsvd_dataset_from_matrix(const double* values, size_t j, size_t k, lcsvd_dataset** out);
/* values in tensor layout (x fastest, then y, z, component, time) */
LCSVD_API lcsvd_status lcsvd_dataset_from_tensor(const double* values, const lcsvd_shape* shape,
                                                 lcsvd_dataset** out);
LCSVD_API lcsvd_status lcsvd_dataset_save(const lcsvd_dataset* ds, const char* path, lcsvd_format format);
LCSVD_API size_t lcsvd_dataset_rows(const lcsvd_dataset* ds);
LCSVD_API size_t lcsvd_dataset_cols(const lcsvd_dataset* ds);
/* LCSVD_ERR_VALIDATION when the dataset has no tensor layout */
LCSVD_API lcsvd_status lcsvd_dataset_shape(const lcsvd_dataset* ds, lcsvd_shape* out);
LCSVD_API lcsvd_status lcsvd_dataset_copy(const lcsvd_dataset* ds, double* out, size_t capacity);
LCSVD_API void lcsvd_dataset_free(lcsvd_dataset* ds);

/* ---- synthetic data ---- */
typedef enum lcsvd_synth_kind {
  LCSVD_SYNTH_EXACT_RANK = 0,
  LCSVD_SYNTH_OSCILLATORY_WAKE = 1,
  LCSVD_SYNTH_NOISY = 2
} lcsvd_synth_kind;

typedef struct lcsvd_synth_spec {
  lcsvd_synth_kind kind;
  size_t j;        /* exact rank / noisy */
  size_t n_x, n_y; /* wake */
  size_t k;
  size_t rank;
  double noise_level;
  double amplitude; /* wake; 0 means 1 */
  uint64_t seed;
} lcsvd_synth_spec;

LCSVD_API lcsvd_status lcsvd_generate(const lcsvd_synth_spec* spec, lcsvd_dataset** out);

/* ---- truncated SVD ---- */
LCSVD_API lcsvd_status lcsvd_decompose(const lcsvd_dataset* ds, lcsvd_rule rule, lcsvd_factors** out);
LCSVD_API size_t lcsvd_factors_count(const lcsvd_factors* f);
LCSVD_API lcsvd_status lcsvd_factors_singular_values(const lcsvd_factors* f, double* out, size_t capacity);
/* column-major J x N and K x N */
LCSVD_API lcsvd_status lcsvd_factors_modes(const lcsvd_factors* f, double* out, size_t capacity);
LCSVD_API lcsvd_status lcsvd_factors_coefficients(const lcsvd_factors* f, double* out, size_t capacity);
/* modes, coefficients, singular_values.csv and summary.json */
LCSVD_API lcsvd_status lcsvd_factors_write(const lcsvd_factors* f, const lcsvd_dataset* source, const char* dir,
                                          lcsvd_format format);
LCSVD_API void lcsvd_factors_free(lcsvd_factors* f);

/* ---- sensors ---- */
/* QR-pivot placement of p sensors against the modes kept by `rule`. */
LCSVD_API lcsvd_status lcsvd_place_sensors(const lcsvd_dataset* ds, lcsvd_rule rule, size_t p,
                                          lcsvd_sensors** out);
LCSVD_API lcsvd_status lcsvd_sensors_read(const char* path, lcsvd_sensors** out);
LCSVD_API lcsvd_status lcsvd_sensors_write(const lcsvd_sensors* s, const lcsvd_dataset* layout, const char* path);
LCSVD_API size_t lcsvd_sensors_count(const lcsvd_sensors* s);
LCSVD_API lcsvd_status lcsvd_sensors_indices(const lcsvd_sensors* s, size_t* out, size_t capacity);
LCSVD_API void lcsvd_sensors_free(lcsvd_sensors* s);

/* ---- lcSVD reconstruction ---- */
typedef enum lcsvd_plan_kind {
  LCSVD_PLAN_SENSORS = 0,
  LCSVD_PLAN_EQUIDISTANT = 1,
  LCSVD_PLAN_RANDOM = 2
} lcsvd_plan_kind;

typedef struct lcsvd_plan_spec {
  lcsvd_plan_kind kind;
  const lcsvd_sensors* sensors; /* LCSVD_PLAN_SENSORS */
  size_t n_rows;                /* equidistant / random */
  size_t n_cols;                /* equidistant / random; 0 keeps every snapshot */
  uint64_t seed;                /* random */
} lcsvd_plan_spec;

/* Modes kept: floor(mode_fraction * retained rows). */
LCSVD_API lcsvd_status lcsvd_reconstruct(const lcsvd_dataset* ds, const lcsvd_plan_spec* plan, double mode_fraction,
                                        lcsvd_result** out);
LCSVD_API size_t lcsvd_result_modes(const lcsvd_result* r);
LCSVD_API size_t lcsvd_result_sensor_count(const lcsvd_result* r);
LCSVD_API double lcsvd_result_rrmse(const lcsvd_result* r);
/* column-major J x K */
LCSVD_API lcsvd_status lcsvd_result_reconstruction(const lcsvd_result* r, double* out, size_t capacity);
/* reconstruction, recovered factors, error_report/ and summary.json */
LCSVD_API lcsvd_status lcsvd_result_write(const lcsvd_result* r, const lcsvd_dataset* source, const char* dir,
                                         lcsvd_format format);
LCSVD_API void lcsvd_result_free(lcsvd_result* r);

/* ---- OS-lcSVD ---- */
typedef struct lcsvd_optimize_config {
  size_t n_sensors;
  double mode_fraction;
  double epsilon_percent;
  size_t max_iterations;
  uint64_t seed;
} lcsvd_optimize_config;

/* Returns LCSVD_NOT_CONVERGED (with both outputs set) when no attempt beat epsilon. */
LCSVD_API lcsvd_status lcsvd_optimize(const lcsvd_dataset* ds, const lcsvd_optimize_config* config,
                                     lcsvd_result** result, lcsvd_sensors** sensors);
LCSVD_API size_t lcsvd_result_iterations(const lcsvd_result* r);

/* ---- sensor-count search and elbow ---- */
typedef struct lcsvd_search_config {
  size_t start, step, max_sensors, runs_per_count;
  double stall_threshold;
  double mode_fraction;
  uint64_t seed;
} lcsvd_search_config;

LCSVD_API lcsvd_status lcsvd_search_sensors(const lcsvd_dataset* ds, const lcsvd_search_config* config,
                                           lcsvd_search** out);
LCSVD_API size_t lcsvd_search_optimum(const lcsvd_search* s);
LCSVD_API double lcsvd_search_epsilon(const lcsvd_search* s);
LCSVD_API int lcsvd_search_stalled(const lcsvd_search* s);
LCSVD_API lcsvd_status lcsvd_search_write(const lcsvd_search* s, const char* dir);
LCSVD_API void lcsvd_search_free(lcsvd_search* s);

LCSVD_API lcsvd_status lcsvd_elbow_curve(const lcsvd_dataset* ds, const size_t* sensor_counts, size_t n_counts,
                                        double mode_fraction, size_t runs, uint64_t seed, lcsvd_elbow** out);
LCSVD_API size_t lcsvd_elbow_components(const lcsvd_elbow* e);
LCSVD_API size_t lcsvd_elbow_at(const lcsvd_elbow* e, size_t component);
/* uncertainty curve of one component, one value per sensor count */
LCSVD_API lcsvd_status lcsvd_elbow_uncertainty(const lcsvd_elbow* e, size_t component, double* out,
                                              size_t capacity);
LCSVD_API lcsvd_status lcsvd_elbow_write(const lcsvd_elbow* e, const char* dir);
LCSVD_API void lcsvd_elbow_free(lcsvd_elbow* e);

/* ---- benchmark ---- */
typedef struct lcsvd_bench_config {
  size_t j, k, rank;
  double noise_level;
  const size_t* n_points;
  size_t n_n_points;
  const double* fractions;
  size_t n_fractions;
  size_t runs;
  uint64_t seed;
  size_t memory_budget; /* bytes; 0 uses MemAvailable */
} lcsvd_bench_config;

typedef struct lcsvd_bench_record {
  size_t j, k, n_points;
  double mode_fraction;
  size_t runs;
  double t_svd, t_lcsvd, t_oslcsvd; /* medians, seconds */
  double t_svd_mean, t_lcsvd_mean, t_oslcsvd_mean;
  double s_u_lcsvd, s_u_oslcsvd;
  size_t peak_mem_svd, peak_mem_lcsvd, peak_mem_oslcsvd;
  int skipped;
} lcsvd_bench_record;

LCSVD_API lcsvd_status lcsvd_benchmark(const lcsvd_bench_config* config, lcsvd_bench** out);
LCSVD_API size_t lcsvd_bench_count(const lcsvd_bench* b);
LCSVD_API lcsvd_status lcsvd_bench_get(const lcsvd_bench* b, size_t i, lcsvd_bench_record* out);
/* Appends copies of the records of `from` to `into`. */
LCSVD_API lcsvd_status lcsvd_bench_merge(lcsvd_bench* into, const lcsvd_bench* from);
LCSVD_API lcsvd_status lcsvd_bench_write(const lcsvd_bench* b, const char* csv_path);
LCSVD_API void lcsvd_bench_free(lcsvd_bench* b);

#ifdef __cplusplus
}
#endif

#endif
