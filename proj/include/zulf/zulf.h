// Copyright 2026 The zulf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the zulf library. All handles are opaque; every call that can
 * fail returns a zulf_status and leaves a message in zulf_last_error(). */
#ifndef ZULF_ZULF_H
#define ZULF_ZULF_H

#include <stddef.h>

#if defined(ZULF_BUILDING_LIBRARY)
#define ZULF_API __attribute__((visibility("default")))
#else
#define ZULF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zulf_status {
  ZULF_OK = 0,
  ZULF_ERR_DOMAIN = 1,
  ZULF_ERR_PARSE = 2,
  ZULF_ERR_AMBIGUOUS = 3,
  ZULF_ERR_NUMERIC = 4,
  ZULF_ERR_IO = 5,
  ZULF_ERR_ARGUMENT = 6,
  ZULF_ERR_INTERNAL = 7
} zulf_status;

typedef enum zulf_mode { ZULF_MODE_FIELD = 0, ZULF_MODE_ROTATION = 1 } zulf_mode;

typedef struct zulf_config zulf_config;
typedef struct zulf_result zulf_result;
typedef struct zulf_system zulf_system;

typedef struct zulf_line {
  double frequency_hz;
  double magnitude;
  double phase_rad;
  int bra;
  int ket;
} zulf_line;

ZULF_API const char* zulf_version(void);
/* Message of the last failed call on this thread; empty when none. */
ZULF_API const char* zulf_last_error(void);
ZULF_API void zulf_string_free(char* s);

/* Configuration */
ZULF_API zulf_status zulf_config_new(zulf_config** out);
ZULF_API zulf_status zulf_config_from_json(const char* text, const char* origin, zulf_config** out);
ZULF_API zulf_status zulf_config_load(const char* path, zulf_config** out);
/* key is a dotted path such as "field.theta"; value is JSON (bare strings accepted). */
ZULF_API zulf_status zulf_config_set(zulf_config* config, const char* key, const char* value);
ZULF_API zulf_status zulf_config_to_json(const zulf_config* config, char** out);
ZULF_API void zulf_config_free(zulf_config* config);

/* Runs */
ZULF_API size_t zulf_command_count(void);
ZULF_API const char* zulf_command_name(size_t index);
/* Returns ZULF_OK when the command ran, even if its exit code is nonzero. */
ZULF_API zulf_status zulf_run(const char* command, const zulf_config* config, zulf_result** out);
ZULF_API int zulf_result_exit_code(const zulf_result* result);
ZULF_API const char* zulf_result_summary(const zulf_result* result);
ZULF_API const char* zulf_result_output_dir(const zulf_result* result);
ZULF_API size_t zulf_result_warning_count(const zulf_result* result);
ZULF_API const char* zulf_result_warning(const zulf_result* result, size_t index);
ZULF_API void zulf_result_free(zulf_result* result);
/* Process exit code for a failed zulf_status (2 config, 3 ambiguous, 4 numeric). */
ZULF_API int zulf_exit_code_for_status(zulf_status status);

/* Spin systems and catalogues */
ZULF_API zulf_status zulf_system_preset(const char* name, zulf_system** out);
ZULF_API int zulf_system_size(const zulf_system* system);
ZULF_API void zulf_system_free(zulf_system* system);
/* field_t and omega_hz are (theta, phi, magnitude) triples or NULL. guide is a
 * 3-vector. Writes up to capacity lines and stores the total count in *count. */
ZULF_API zulf_status zulf_catalogue(const zulf_system* system, const double* field_t,
                                    const double* omega_hz, const double* guide,
                                    zulf_line* lines, size_t capacity, size_t* count);
ZULF_API zulf_status zulf_magnitude_from_splitting(double delta_hz, int n, int k, zulf_mode mode,
                                                   double* out);

#ifdef __cplusplus
}
#endif

#endif
