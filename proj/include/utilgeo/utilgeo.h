#ifndef UTILGEO_UTILGEO_H
#define UTILGEO_UTILGEO_H

/*
 * C interface to libutilgeo: geometry of the expected-utility space over m
 * candidates, cone membership, preference orders, culture samplers and
 * population statistics.
 *
 * Every fallible call returns a ug_status. On failure, ug_last_error()
 * returns a message for the calling thread that stays valid until the next
 * failing call on that thread. Utility vectors are passed as `m` contiguous
 * doubles; raw vectors are canonicalized by the library. Strings returned
 * through `char**` are owned by the caller and released with ug_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(UTILGEO_BUILDING)
#    define UTILGEO_API __declspec(dllexport)
#  else
#    define UTILGEO_API __declspec(dllimport)
#  endif
#else
#  define UTILGEO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ug_status {
  UG_OK = 0,
  UG_ERR_INVALID_ARGUMENT = 1,
  UG_ERR_DIMENSION_MISMATCH = 2,
  UG_ERR_INDIFFERENCE_POINT = 3,
  UG_ERR_NON_STRICT_ORDER = 4,
  UG_ERR_SIZE_LIMIT = 5,
  UG_ERR_INVALID_SPEC = 6,
  UG_ERR_EMPTY_POPULATION = 7,
  UG_ERR_DEGENERATE_MEAN = 8,
  UG_ERR_INFINITE_RATIO = 9,
  UG_ERR_IO = 10,
  UG_ERR_PARSE = 11,
  UG_ERR_BUFFER_TOO_SMALL = 12,
  UG_ERR_INTERNAL = 13
} ug_status;

typedef enum ug_metric {
  UG_METRIC_ROUND = 0,
  UG_METRIC_CUBE3 = 1
} ug_metric;

typedef enum ug_format {
  UG_FORMAT_JSONL = 0,
  UG_FORMAT_CSV = 1
} ug_format;

typedef struct ug_culture ug_culture;
typedef struct ug_population ug_population;

UTILGEO_API const char* ug_last_error(void);
UTILGEO_API const char* ug_status_name(ug_status status);
UTILGEO_API void ug_string_free(char* s);

/* Canonical representative of u: writes m values to `out` (zeros for the
 * indifference point) and sets *indifferent. */
UTILGEO_API ug_status ug_canonicalize(const double* u, size_t m, double tol, double* out,
                                      int* indifferent);

/* Distance between the classes of two raw vectors. */
UTILGEO_API ug_status ug_distance(const double* u, const double* v, size_t m,
                                  ug_metric metric, double* out);

/* Cone membership of v in the summation of `count` raw vectors stored
 * row-major in `set` (count * m doubles). */
UTILGEO_API ug_status ug_sum_contains(const double* set, size_t count, size_t m,
                                      const double* v, int* contains);

UTILGEO_API ug_status ug_unanimity_oracle(const double* set, size_t count, size_t m,
                                          const double* v, size_t grid_resolution,
                                          int* holds);

/* Preference order of u as "1>4>2=3" into buf (NUL-terminated). */
UTILGEO_API ug_status ug_order_string(const double* u, size_t m, double tie_tol, char* buf,
                                      size_t buflen);

/* Culture from a JSON spec {kind, m, kappa, pole, indifference_prob, seed}. */
UTILGEO_API ug_status ug_culture_from_json(const char* json, ug_culture** out);
UTILGEO_API ug_status ug_culture_to_json(const ug_culture* culture, char** json_out);
UTILGEO_API void ug_culture_destroy(ug_culture* culture);

/* n agents; output does not depend on `threads` (0 = one thread). */
UTILGEO_API ug_status ug_population_generate(const ug_culture* culture, size_t n,
                                             size_t threads, ug_population** out);
UTILGEO_API ug_status ug_population_read(const char* path, ug_population** out);
UTILGEO_API ug_status ug_population_write(const ug_population* pop, const char* path,
                                          ug_format format);
UTILGEO_API size_t ug_population_size(const ug_population* pop);
UTILGEO_API size_t ug_population_candidates(const ug_population* pop);
UTILGEO_API void ug_population_destroy(ug_population* pop);

typedef struct ug_stats_options {
  double tie_tol;
  /* Optional ball: raw center of length center_m, or NULL. */
  const double* ball_center;
  size_t center_m;
  double ball_radius;
} ug_stats_options;

/* JSON statistics report for a population. */
UTILGEO_API ug_status ug_stats_report(const ug_population* pop, const ug_stats_options* options,
                                      char** json_out);

#ifdef __cplusplus
}
#endif

#endif /* UTILGEO_UTILGEO_H */
