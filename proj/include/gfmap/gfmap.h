/*
  Copyright 2026 The gfmap Authors

  Licensed under the Apache License, Version 2.0 (the "License");
  you may not use this file except in compliance with the License.
  You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

  Unless required by applicable law or agreed to in writing, software
  distributed under the License is distributed on an "AS IS" BASIS,
  WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
  See the License for the specific language governing permissions and
  limitations under the License.
*/

#ifndef GFMAP_GFMAP_H
#define GFMAP_GFMAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(GFMAP_BUILDING_LIBRARY)
#define GFM_API __attribute__((visibility("default")))
#else
#define GFM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gfm_status {
  GFM_OK = 0,
  GFM_ERR_INVALID_ARGUMENT = 1,
  GFM_ERR_IO = 2,
  GFM_ERR_PARSE = 3,
  GFM_ERR_EVAL = 4,
  GFM_ERR_CONFIG = 5,
  GFM_ERR_VALIDATION = 6,
  GFM_ERR_OUT_OF_DOMAIN = 7,
  GFM_ERR_PRECONDITION = 8,
  GFM_ERR_NOT_CRITICALLY_FINITE = 9,
  GFM_ERR_CYCLE_DETECTED = 10,
  GFM_ERR_ROOT_BRACKET = 11,
  GFM_ERR_NESTEDNESS = 12,
  GFM_ERR_RESOURCE_LIMIT = 13,
  GFM_ERR_DEGENERATE_FIT = 14,
  GFM_ERR_AMBIGUOUS_ADDRESS = 15,
  GFM_ERR_KNEADING_MISMATCH = 16,
  GFM_ERR_CARDINALITY_MISMATCH = 17,
  GFM_ERR_INTERNAL = 99
} gfm_status;

typedef enum gfm_verdict {
  GFM_GEOMETRICALLY_FINITE = 0,
  GFM_NOT_GEOMETRICALLY_FINITE = 1,
  GFM_INCONCLUSIVE = 2
} gfm_verdict;

/* Opaque validated map. */
typedef struct gfm_map gfm_map;

/* A depth of 0 selects the command's default. window_lo = window_hi = 0
   selects the default decay window. */
typedef struct gfm_options {
  int depth;
  int max_period;
  uint64_t seed;
  uint64_t samples;
  int base_level;
  int window_lo;
  int window_hi;
  int reproducible;
} gfm_options;

GFM_API void gfm_options_init(gfm_options* options);

GFM_API const char* gfm_version(void);
GFM_API const char* gfm_status_name(gfm_status status);
/* Message of the last failed call on this thread; never NULL. */
GFM_API const char* gfm_last_error(void);

/* Strings returned through char** are owned by the caller. */
GFM_API void gfm_string_free(char* s);

GFM_API gfm_status gfm_map_builtin(const char* name, gfm_map** out);
GFM_API gfm_status gfm_map_from_json(const char* json, gfm_map** out);
GFM_API gfm_status gfm_map_from_file(const char* path, gfm_map** out);
GFM_API void gfm_map_free(gfm_map* map);

GFM_API gfm_status gfm_map_eval(const gfm_map* map, double x, double* y);
GFM_API gfm_status gfm_map_deriv(const gfm_map* map, double x, int order, double* y);
GFM_API gfm_status gfm_map_schwarzian(const gfm_map* map, double x, double* s);
GFM_API gfm_status gfm_map_lap_count(const gfm_map* map, size_t* count);
/* Canonical JSON of the parsed config and its 16 hex digit hash. */
GFM_API gfm_status gfm_map_dump(const gfm_map* map, char** json);
GFM_API gfm_status gfm_map_hash(const gfm_map* map, char** hash);

/* Full analysis as a JSON report. Validation problems are reported through
   the verdict, not the status. */
GFM_API gfm_status gfm_analyze(const gfm_map* map, const gfm_options* options, char** json, gfm_verdict* verdict);

/* n, intervals, lambda, bc, nc. */
GFM_API gfm_status gfm_tower_csv(const gfm_map* map, const gfm_options* options, char** csv);

/* Sample table as CSV and the fitted bound as JSON. */
GFM_API gfm_status gfm_distortion(const gfm_map* map, const gfm_options* options, char** csv, char** summary_json);

GFM_API gfm_status gfm_kneading_json(const gfm_map* map, const gfm_options* options, char** json);
/* *equal is 1 when the invariants agree; a mismatch is not an error. */
GFM_API gfm_status gfm_kneading_compare(const gfm_map* f, const gfm_map* g, const gfm_options* options, int* equal,
                                        char** json);

/* Knots as CSV (x, y) and {depth, defect, qc_estimate, ...} as JSON.
   GFM_ERR_KNEADING_MISMATCH when the maps are not conjugate. *defect_ok
   (optional) is 1 when the conjugacy defect is within its bound. */
GFM_API gfm_status gfm_conjugate(const gfm_map* f, const gfm_map* g, const gfm_options* options, char** knots_csv,
                                 char** summary_json, int* defect_ok);

GFM_API gfm_status gfm_periodic_json(const gfm_map* map, const gfm_options* options, char** json);

#ifdef __cplusplus
}
#endif

#endif /* GFMAP_GFMAP_H */
